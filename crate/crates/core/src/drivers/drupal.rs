//! JSON:API dialect.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::query_string::to_query_string;
use super::{
    check_read, check_write, encode_segment, id_of, malformed, Connection, Driver, DriverError, GenericResource,
    SearchQuery,
};
use crate::http::{wire_query, SiteCredentials};
use crate::metamodel::{CmsClass, CmsModel, Platform};

pub const MEDIA_TYPE: &str = "application/vnd.api+json";
/// Attribute carrying the last-update time of a record.
pub const CHANGED_FIELD: &str = "changed";
const CORE_USER_ENDPOINT: &str = "/user/user";

#[derive(Debug, Clone)]
pub struct DrupalDriver {
    conn: Connection,
}

impl DrupalDriver {
    pub fn new(model: Arc<CmsModel>, base_url: &str, credentials: SiteCredentials) -> Result<Self, DriverError> {
        Ok(DrupalDriver { conn: Connection::new(model, base_url, credentials)? })
    }

    fn endpoint(&self, cls: &CmsClass) -> Result<String, DriverError> {
        self.conn.endpoint(cls, CORE_USER_ENDPOINT)
    }

    fn fetch(&self, url: &str) -> Result<Value, DriverError> {
        let resp = self.conn.client.get(url, MEDIA_TYPE)?;
        let doc = check_read(url, resp)?;
        doc.get("data").cloned().ok_or_else(|| malformed(url, "missing `data`"))
    }
}

/// JSON:API type name of an endpoint: `/node/video_article` is
/// `node--video_article`.
pub fn type_for_endpoint(endpoint: &str) -> String {
    endpoint.trim_start_matches('/').replacen('/', "--", 1)
}

/// Parses one JSON:API resource object.
pub fn parse_resource(url: &str, type_name: &str, data: &Value) -> Result<GenericResource, DriverError> {
    let obj = data.as_object().ok_or_else(|| malformed(url, "resource is not an object"))?;
    let id = id_of(obj.get("id")).ok_or_else(|| malformed(url, "resource without id"))?;
    let mut attributes = match obj.get("attributes") {
        Some(Value::Object(a)) => a.iter().map(|(k, v)| (k.clone(), v.clone())).collect::<BTreeMap<_, _>>(),
        None | Some(Value::Null) => BTreeMap::new(),
        Some(_) => return Err(malformed(url, "`attributes` is not an object")),
    };
    let last_updated = match attributes.remove(CHANGED_FIELD) {
        Some(Value::String(s)) => Some(s),
        _ => None,
    };
    let mut related_links = BTreeMap::new();
    if let Some(Value::Object(rels)) = obj.get("relationships") {
        for (name, rel) in rels {
            let href = match rel.pointer("/links/related") {
                Some(Value::String(s)) => Some(s.clone()),
                Some(Value::Object(link)) => link.get("href").and_then(Value::as_str).map(str::to_string),
                _ => None,
            };
            if let Some(href) = href {
                related_links.insert(name.clone(), href);
            }
        }
    }
    Ok(GenericResource { id, type_name: type_name.to_string(), attributes, related_links, last_updated })
}

fn parse_many(url: &str, type_name: &str, data: &Value) -> Result<Vec<GenericResource>, DriverError> {
    match data {
        Value::Null => Ok(Vec::new()),
        Value::Array(items) => items.iter().map(|d| parse_resource(url, type_name, d)).collect(),
        Value::Object(_) => Ok(vec![parse_resource(url, type_name, data)?]),
        _ => Err(malformed(url, "`data` is neither a resource nor a collection")),
    }
}

impl Driver for DrupalDriver {
    fn platform(&self) -> Platform {
        Platform::Drupal
    }

    fn model(&self) -> &CmsModel {
        &self.conn.model
    }

    fn get_by_id(&self, cls: &CmsClass, id: &str) -> Result<GenericResource, DriverError> {
        let url = format!("{}{}/{}", self.conn.base_url, self.endpoint(cls)?, encode_segment(id));
        let data = self.fetch(&url)?;
        parse_resource(&url, &cls.name, &data)
    }

    fn search(&self, cls: &CmsClass, query: &SearchQuery) -> Result<Vec<GenericResource>, DriverError> {
        let endpoint = self.endpoint(cls)?;
        let qs = to_query_string(Platform::Drupal, query)?;
        let url = format!("{}{}?{}", self.conn.base_url, endpoint, wire_query(&qs));
        let data = self.fetch(&url)?;
        if !data.is_array() {
            return Err(malformed(&url, "collection `data` is not an array"));
        }
        let mut found = parse_many(&url, &cls.name, &data)?;
        found.truncate(query.page().limit() as usize);
        Ok(found)
    }

    fn update(
        &self,
        resource: &GenericResource,
        changed: &BTreeMap<String, Value>,
    ) -> Result<GenericResource, DriverError> {
        let cls = self.conn.class(&resource.type_name)?;
        let endpoint = self.endpoint(cls)?;
        let url = format!("{}{}/{}", self.conn.base_url, endpoint, encode_segment(&resource.id));
        let attributes: Map<String, Value> = changed.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let body = json!({"data": {"type": type_for_endpoint(&endpoint), "id": resource.id, "attributes": attributes}});
        let resp = self.conn.client.patch(&url, MEDIA_TYPE, &body.to_string())?;
        let doc = check_write(&url, resp)?;
        let data = doc.get("data").ok_or_else(|| malformed(&url, "missing `data`"))?;
        parse_resource(&url, &resource.type_name, data)
    }

    fn follow_link(&self, resource: &GenericResource, relationship: &str) -> Result<Vec<GenericResource>, DriverError> {
        let url = resource
            .related_links
            .get(relationship)
            .ok_or_else(|| DriverError::NoSuchRelationship(relationship.to_string()))?;
        let target = self.conn.target_of(&resource.type_name, relationship);
        let data = self.fetch(url)?;
        parse_many(url, &target, &data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_type_names() {
        assert_eq!(type_for_endpoint("/node/video_article"), "node--video_article");
        assert_eq!(type_for_endpoint("/user/user"), "user--user");
    }

    #[test]
    fn parses_json_api_resource() {
        let data = json!({
            "type": "node--video_article", "id": "v1",
            "attributes": {"title": "T", "likes": 3, "changed": "2024-01-01T00:00:00Z"},
            "relationships": {
                "author": {"data": {"type": "user--user", "id": "u1"}, "links": {"related": {"href": "http://x/author"}}},
                "tags": {"data": [], "links": {"related": "http://x/tags"}},
                "bare": {"data": null}
            }
        });
        let r = parse_resource("u", "VideoArticle", &data).unwrap();
        assert_eq!(r.id, "v1");
        assert_eq!(r.last_updated.as_deref(), Some("2024-01-01T00:00:00Z"));
        assert!(!r.attributes.contains_key("changed"));
        assert_eq!(r.related_links.len(), 2);
        assert_eq!(r.related_links["author"], "http://x/author");
        assert!(parse_resource("u", "X", &json!({"attributes": {}})).is_err());
    }
}
