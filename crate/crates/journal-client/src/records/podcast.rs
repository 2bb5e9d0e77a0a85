//! `Podcast` records (ContentType).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

use super::{Audio, User};

#[derive(Debug, Clone)]
pub struct Podcast {
    inner: StagedResource,
}

impl Podcast {
    pub const CLASS_NAME: &'static str = "Podcast";
    pub const FIELD_DURATION: &'static str = "duration";
    pub const FIELD_LIKES: &'static str = "likes";
    pub const FIELD_TITLE: &'static str = "title";
    pub const REL_AUDIO: &'static str = "audio";
    pub const REL_AUTHOR: &'static str = "author";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        Podcast { inner: StagedResource::new(driver, resource) }
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

    pub fn get_duration(&self) -> Option<i64> {
        self.inner.integer(Self::FIELD_DURATION)
    }

    pub fn set_duration(&mut self, value: i64) {
        self.inner.stage(Self::FIELD_DURATION, Value::from(value));
    }

    pub fn get_likes(&self) -> Option<i64> {
        self.inner.integer(Self::FIELD_LIKES)
    }

    pub fn set_likes(&mut self, value: i64) {
        self.inner.stage(Self::FIELD_LIKES, Value::from(value));
    }

    pub fn get_title(&self) -> Option<String> {
        self.inner.text(Self::FIELD_TITLE)
    }

    pub fn set_title(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_TITLE, Value::String(value.into()));
    }

    pub fn get_audio(&self) -> Result<Option<Audio>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_AUDIO)?;
        Ok(found.into_iter().next().map(|r| Audio::from_resource(driver.clone(), r)))
    }

    pub fn get_author(&self) -> Result<Option<User>, DriverError> {
        let driver = self.inner.driver();
        let found = self.inner.follow(Self::REL_AUTHOR)?;
        Ok(found.into_iter().next().map(|r| User::from_resource(driver.clone(), r)))
    }
}
