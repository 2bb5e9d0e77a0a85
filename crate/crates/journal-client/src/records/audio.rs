//! `Audio` records (Audio, core class).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

#[derive(Debug, Clone)]
pub struct Audio {
    inner: StagedResource,
}

impl Audio {
    pub const CLASS_NAME: &'static str = "Audio";
    pub const FIELD_NAME: &'static str = "name";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        Audio { inner: StagedResource::new(driver, resource) }
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

    pub fn get_name(&self) -> Option<String> {
        self.inner.text(Self::FIELD_NAME)
    }

    pub fn set_name(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_NAME, Value::String(value.into()));
    }
}
