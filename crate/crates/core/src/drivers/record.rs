//! Runtime support for generated record types: a resource plus locally
//! staged changes, written back through the driver on `save`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use super::{Driver, DriverError, GenericResource};

#[derive(Debug, Clone)]
pub struct StagedResource {
    driver: Arc<dyn Driver>,
    resource: GenericResource,
    staged: BTreeMap<String, Value>,
}

impl StagedResource {
    pub fn new(driver: Arc<dyn Driver>, resource: GenericResource) -> Self {
        StagedResource { driver, resource, staged: BTreeMap::new() }
    }

    pub fn driver(&self) -> &Arc<dyn Driver> {
        &self.driver
    }

    pub fn resource(&self) -> &GenericResource {
        &self.resource
    }

    pub fn id(&self) -> &str {
        &self.resource.id
    }

    pub fn last_updated(&self) -> Option<&str> {
        self.resource.last_updated.as_deref()
    }

    /// Current value of an attribute, staged changes first; null is `None`.
    pub fn raw(&self, name: &str) -> Option<&Value> {
        match self.staged.get(name) {
            Some(v) => Some(v).filter(|v| !v.is_null()),
            None => self.resource.raw(name),
        }
    }

    pub fn text(&self, name: &str) -> Option<String> {
        match self.raw(name)? {
            Value::String(s) => Some(s.clone()),
            other => Some(other.to_string()),
        }
    }

    pub fn integer(&self, name: &str) -> Option<i64> {
        self.raw(name)?.as_i64()
    }

    pub fn float(&self, name: &str) -> Option<f64> {
        self.raw(name)?.as_f64()
    }

    pub fn boolean(&self, name: &str) -> Option<bool> {
        self.raw(name)?.as_bool()
    }

    pub fn stage(&mut self, name: &str, value: Value) {
        self.staged.insert(name.to_string(), value);
    }

    pub fn staged(&self) -> &BTreeMap<String, Value> {
        &self.staged
    }

    pub fn has_unsaved_changes(&self) -> bool {
        !self.staged.is_empty()
    }

    /// Sends every staged change in one update. Staged changes survive a
    /// failed save.
    pub fn save(&mut self) -> Result<(), DriverError> {
        let updated = self.driver.update(&self.resource, &self.staged)?;
        self.resource = updated;
        self.staged.clear();
        Ok(())
    }

    /// Follows one relationship link; exactly one request.
    pub fn follow(&self, relationship: &str) -> Result<Vec<GenericResource>, DriverError> {
        self.driver.follow_link(&self.resource, relationship)
    }
}
