//! `NewsArticle` records (ContentType).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

use super::{BannerAds, Image, User, VideoArticle};

#[derive(Debug, Clone)]
pub struct NewsArticle {
    inner: StagedResource,
}

impl NewsArticle {
    pub const CLASS_NAME: &'static str = "NewsArticle";
    pub const FIELD_BODY: &'static str = "body";
    pub const FIELD_LIKES: &'static str = "likes";
    pub const FIELD_PUBLISHED: &'static str = "published";
    pub const FIELD_TITLE: &'static str = "title";
    pub const REL_AUTHOR: &'static str = "author";
    pub const REL_BANNER_ADS: &'static str = "bannerAds";
    pub const REL_IMAGES: &'static str = "images";
    pub const REL_RELATED_VIDEOS: &'static str = "relatedVideos";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        NewsArticle { inner: StagedResource::new(driver, resource) }
    }

    pub fn id(&self) -> &str {
        self.inner.id()
    }

    pub fn last_updated(&self) -> Option<&str> {
        self.inner.last_updated()
    }

    pub fn resource(&self) -> &GenericResource {
        self.inner.resource()
    }

    pub fn has_unsaved_changes(&self) -> bool {
        self.inner.has_unsaved_changes()
    }

    /// Writes all staged changes in one update.
    pub fn save(&mut self) -> Result<(), DriverError> {
        self.inner.save()
    }

    pub fn get_body(&self) -> Option<String> {
        self.inner.text(Self::FIELD_BODY)
    }

    pub fn set_body(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_BODY, Value::String(value.into()));
    }

    pub fn get_likes(&self) -> Option<i64> {
        self.inner.integer(Self::FIELD_LIKES)
    }

    pub fn set_likes(&mut self, value: i64) {
        self.inner.stage(Self::FIELD_LIKES, Value::from(value));
    }

    pub fn get_published(&self) -> Option<String> {
        self.inner.text(Self::FIELD_PUBLISHED)
    }

    pub fn set_published(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_PUBLISHED, Value::String(value.into()));
    }

    pub fn get_title(&self) -> Option<String> {
        self.inner.text(Self::FIELD_TITLE)
    }

    pub fn set_title(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_TITLE, Value::String(value.into()));
    }

    pub fn get_author(&self) -> Result<Option<User>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_AUTHOR)?;
        Ok(found.into_iter().next().map(|r| User::from_resource(driver.clone(), r)))
    }

    pub fn get_banner_ads(&self) -> Result<Vec<BannerAds>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_BANNER_ADS)?;
        Ok(found.into_iter().map(|r| BannerAds::from_resource(driver.clone(), r)).collect())
    }

    pub fn get_images(&self) -> Result<Vec<Image>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_IMAGES)?;
        Ok(found.into_iter().map(|r| Image::from_resource(driver.clone(), r)).collect())
    }

    pub fn get_related_videos(&self) -> Result<Vec<VideoArticle>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_RELATED_VIDEOS)?;
        Ok(found.into_iter().map(|r| VideoArticle::from_resource(driver.clone(), r)).collect())
    }
}
