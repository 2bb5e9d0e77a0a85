//! `BannerAds` records (Block).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

#[derive(Debug, Clone)]
pub struct BannerAds {
    inner: StagedResource,
}

impl BannerAds {
    pub const CLASS_NAME: &'static str = "BannerAds";
    pub const FIELD_TARGET_URL: &'static str = "targetUrl";
    pub const FIELD_TITLE: &'static str = "title";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        BannerAds { inner: StagedResource::new(driver, resource) }
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

    pub fn get_target_url(&self) -> Option<String> {
        self.inner.text(Self::FIELD_TARGET_URL)
    }

    pub fn set_target_url(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_TARGET_URL, Value::String(value.into()));
    }

    pub fn get_title(&self) -> Option<String> {
        self.inner.text(Self::FIELD_TITLE)
    }

    pub fn set_title(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_TITLE, Value::String(value.into()));
    }
}
