//! `VideoArticle` records (ContentType).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

use super::{AgeRating, NewsArticle, Tag, User, Video};

#[derive(Debug, Clone)]
pub struct VideoArticle {
    inner: StagedResource,
}

impl VideoArticle {
    pub const CLASS_NAME: &'static str = "VideoArticle";
    pub const FIELD_BODY: &'static str = "body";
    pub const FIELD_FEATURED: &'static str = "featured";
    pub const FIELD_LIKES: &'static str = "likes";
    pub const FIELD_PUBLISHED: &'static str = "published";
    pub const FIELD_RATING: &'static str = "rating";
    pub const FIELD_TITLE: &'static str = "title";
    pub const REL_AGE_RATING: &'static str = "ageRating";
    pub const REL_AUTHOR: &'static str = "author";
    pub const REL_RELATED_ARTICLES: &'static str = "relatedArticles";
    pub const REL_TAGS: &'static str = "tags";
    pub const REL_VIDEO: &'static str = "video";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        VideoArticle { inner: StagedResource::new(driver, resource) }
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

    pub fn get_featured(&self) -> Option<bool> {
        self.inner.boolean(Self::FIELD_FEATURED)
    }

    pub fn set_featured(&mut self, value: bool) {
        self.inner.stage(Self::FIELD_FEATURED, Value::Bool(value));
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

    pub fn get_rating(&self) -> Option<f64> {
        self.inner.float(Self::FIELD_RATING)
    }

    pub fn set_rating(&mut self, value: f64) {
        self.inner.stage(Self::FIELD_RATING, Value::from(value));
    }

    pub fn get_title(&self) -> Option<String> {
        self.inner.text(Self::FIELD_TITLE)
    }

    pub fn set_title(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_TITLE, Value::String(value.into()));
    }

    pub fn get_age_rating(&self) -> Result<Option<AgeRating>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_AGE_RATING)?;
        Ok(found.into_iter().next().map(|r| AgeRating::from_resource(driver.clone(), r)))
    }

    pub fn get_author(&self) -> Result<Option<User>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_AUTHOR)?;
        Ok(found.into_iter().next().map(|r| User::from_resource(driver.clone(), r)))
    }

    pub fn get_related_articles(&self) -> Result<Vec<NewsArticle>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_RELATED_ARTICLES)?;
        Ok(found.into_iter().map(|r| NewsArticle::from_resource(driver.clone(), r)).collect())
    }

    pub fn get_tags(&self) -> Result<Vec<Tag>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_TAGS)?;
        Ok(found.into_iter().map(|r| Tag::from_resource(driver.clone(), r)).collect())
    }

    pub fn get_video(&self) -> Result<Option<Video>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_VIDEO)?;
        Ok(found.into_iter().next().map(|r| Video::from_resource(driver.clone(), r)))
    }
}
