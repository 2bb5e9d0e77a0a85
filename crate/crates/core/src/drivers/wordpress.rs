//! WordPress REST dialect: flat JSON records linked through HAL `_links`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{Map, Value};

use super::query_string::to_query_string;
use super::{
    check_read, check_write, encode_segment, id_of, malformed, Connection, Driver, DriverError, GenericResource,
    SearchQuery,
};
use crate::discovery::wordpress::{endpoint_for, MODIFIED_FIELD};
use crate::http::{wire_query, SiteCredentials};
use crate::metamodel::{CmsClass, CmsModel, Platform};

pub const MEDIA_TYPE: &str = "application/json";
pub const LINKS_FIELD: &str = "_links";
/// HAL relations that are navigation aids rather than relationships.
pub const NON_RELATIONSHIP_LINKS: &[&str] = &["self", "collection"];

#[derive(Debug, Clone)]
pub struct WordPressDriver {
    conn: Connection,
}

impl WordPressDriver {
    pub fn new(model: Arc<CmsModel>, base_url: &str, credentials: SiteCredentials) -> Result<Self, DriverError> {
        Ok(WordPressDriver { conn: Connection::new(model, base_url, credentials)? })
    }

    fn endpoint(&self, cls: &CmsClass) -> Result<String, DriverError> {
        self.conn.endpoint(cls, &endpoint_for("users"))
    }

    fn fetch(&self, url: &str) -> Result<Value, DriverError> {
        let resp = self.conn.client.get(url, MEDIA_TYPE)?;
        check_read(url, resp)
    }
}

/// Parses one flat WordPress record.
pub fn parse_record(url: &str, type_name: &str, record: &Value) -> Result<GenericResource, DriverError> {
    let obj = record.as_object().ok_or_else(|| malformed(url, "record is not an object"))?;
    let id = id_of(obj.get("id")).ok_or_else(|| malformed(url, "record without id"))?;
    let mut attributes = BTreeMap::new();
    let mut last_updated = None;
    let mut related_links = BTreeMap::new();
    for (key, value) in obj {
        match key.as_str() {
            "id" => {}
            MODIFIED_FIELD => last_updated = value.as_str().map(str::to_string),
            LINKS_FIELD => {
                let links = value.as_object().ok_or_else(|| malformed(url, "`_links` is not an object"))?;
                for (rel, targets) in links {
                    if NON_RELATIONSHIP_LINKS.contains(&rel.as_str()) {
                        continue;
                    }
                    let href = match targets {
                        Value::Array(list) => list.first().and_then(|l| l.get("href")).and_then(Value::as_str),
                        Value::Object(l) => l.get("href").and_then(Value::as_str),
                        _ => None,
                    };
                    if let Some(href) = href {
                        related_links.insert(rel.clone(), href.to_string());
                    }
                }
            }
            _ => {
                attributes.insert(key.clone(), value.clone());
            }
        }
    }
    Ok(GenericResource { id, type_name: type_name.to_string(), attributes, related_links, last_updated })
}

fn parse_many(url: &str, type_name: &str, payload: &Value) -> Result<Vec<GenericResource>, DriverError> {
    match payload {
        Value::Null => Ok(Vec::new()),
        Value::Array(items) => items.iter().map(|r| parse_record(url, type_name, r)).collect(),
        Value::Object(_) => Ok(vec![parse_record(url, type_name, payload)?]),
        _ => Err(malformed(url, "payload is neither a record nor a list")),
    }
}

impl Driver for WordPressDriver {
    fn platform(&self) -> Platform {
        Platform::WordPress
    }

    fn model(&self) -> &CmsModel {
        &self.conn.model
    }

    fn get_by_id(&self, cls: &CmsClass, id: &str) -> Result<GenericResource, DriverError> {
        let url = format!("{}{}/{}", self.conn.base_url, self.endpoint(cls)?, encode_segment(id));
        let record = self.fetch(&url)?;
        parse_record(&url, &cls.name, &record)
    }

    fn search(&self, cls: &CmsClass, query: &SearchQuery) -> Result<Vec<GenericResource>, DriverError> {
        let endpoint = self.endpoint(cls)?;
        let qs = to_query_string(Platform::WordPress, query)?;
        let url = format!("{}{}?{}", self.conn.base_url, endpoint, wire_query(&qs));
        let payload = self.fetch(&url)?;
        if !payload.is_array() {
            return Err(malformed(&url, "collection payload is not an array"));
        }
        let mut found = parse_many(&url, &cls.name, &payload)?;
        found.truncate(query.page().limit() as usize);
        Ok(found)
    }

    fn update(
        &self,
        resource: &GenericResource,
        changed: &BTreeMap<String, Value>,
    ) -> Result<GenericResource, DriverError> {
        let cls = self.conn.class(&resource.type_name)?;
        let url = format!("{}{}/{}", self.conn.base_url, self.endpoint(cls)?, encode_segment(&resource.id));
        let body: Map<String, Value> = changed.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let resp = self.conn.client.post(&url, MEDIA_TYPE, &Value::Object(body).to_string())?;
        let record = check_write(&url, resp)?;
        parse_record(&url, &resource.type_name, &record)
    }

    fn follow_link(&self, resource: &GenericResource, relationship: &str) -> Result<Vec<GenericResource>, DriverError> {
        let url = resource
            .related_links
            .get(relationship)
            .ok_or_else(|| DriverError::NoSuchRelationship(relationship.to_string()))?;
        let target = self.conn.target_of(&resource.type_name, relationship);
        let payload = self.fetch(url)?;
        parse_many(url, &target, &payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_flat_record_with_links() {
        let record = json!({
            "id": 7, "title": "Hello", "modified": "2024-02-02T00:00:00Z",
            "_links": {
                "self": [{"href": "http://x/posts/7"}],
                "author": [{"embeddable": true, "href": "http://x/posts/7/author"}]
            }
        });
        let r = parse_record("u", "Post", &record).unwrap();
        assert_eq!(r.id, "7");
        assert_eq!(r.attributes.len(), 1);
        assert_eq!(r.last_updated.as_deref(), Some("2024-02-02T00:00:00Z"));
        assert_eq!(r.related_links.keys().collect::<Vec<_>>(), ["author"]);
    }

    #[test]
    fn rejects_records_without_id() {
        assert!(parse_record("u", "Post", &json!({"title": "x"})).is_err());
        assert!(parse_record("u", "Post", &json!([])).is_err());
    }
}
