//! `AgeRating` records (Taxonomy).

use std::sync::Arc;

use cmsforge_core::drivers::{Driver, DriverError, GenericResource, StagedResource};
use cmsforge_core::serde_json::Value;

#[derive(Debug, Clone)]
pub struct AgeRating {
    inner: StagedResource,
}

impl AgeRating {
    pub const CLASS_NAME: &'static str = "AgeRating";
    pub const FIELD_LABEL: &'static str = "label";
    pub const FIELD_MINIMUM_AGE: &'static str = "minimumAge";

    pub fn from_resource(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        AgeRating { inner: StagedResource::new(driver, resource) }
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

    pub fn get_label(&self) -> Option<String> {
        self.inner.text(Self::FIELD_LABEL)
    }

    pub fn set_label(&mut self, value: impl Into<String>) {
        self.inner.stage(Self::FIELD_LABEL, Value::String(value.into()));
    }

    pub fn get_minimum_age(&self) -> Option<i64> {
        self.inner.integer(Self::FIELD_MINIMUM_AGE)
    }

    pub fn set_minimum_age(&mut self, value: i64) {
        self.inner.stage(Self::FIELD_MINIMUM_AGE, Value::from(value));
    }
}
