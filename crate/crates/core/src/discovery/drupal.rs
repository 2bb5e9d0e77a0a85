//! Drupal discovery: a single `openapi.json` document.
//!
//! ```json
//! {
//!   "info": {"title": "Journal CMS"},
//!   "host": "example.com",
//!   "basePath": "/api",
//!   "definitions": {
//!     "node--video_article": {
//!       "properties": {
//!         "attributes": {"id": "Integer", "title": "String"},
//!         "relationships": {"relatedArticles": {"0": {"type": "node--news_article", "link": "..."}}}
//!       }
//!     }
//!   }
//! }
//! ```

use serde_json::Value;

use super::infer::{drupal_relationships, infer_attribute_type};
use super::{fetch_json, DiscoveryError, RawEntity, SiteInfo};
use crate::http::HttpClient;

pub const DOCUMENT_PATH: &str = "/openapi.json";

/// Collection endpoint of a Drupal entity type, relative to the API base:
/// `node--video_article` lives at `/node/video_article`.
pub fn endpoint_for(raw_type_name: &str) -> String {
    format!("/{}", raw_type_name.replacen("--", "/", 1))
}

pub(crate) fn fetch(client: &HttpClient, base: &str) -> Result<(SiteInfo, Vec<RawEntity>), DiscoveryError> {
    let url = format!("{base}{DOCUMENT_PATH}");
    let doc = fetch_json(client, &url, DOCUMENT_PATH, false)?;
    parse_document(&doc)
}

fn malformed(path: &str, message: &str) -> DiscoveryError {
    DiscoveryError::MalformedDiscoveryDocument { path: path.to_string(), message: message.to_string() }
}

/// Parses an `openapi.json` document into site metadata and raw entities.
pub fn parse_document(doc: &Value) -> Result<(SiteInfo, Vec<RawEntity>), DiscoveryError> {
    let root = doc.as_object().ok_or_else(|| malformed("/", "document is not an object"))?;
    let text = |key: &str| -> Result<String, DiscoveryError> {
        match root.get(key) {
            None | Some(Value::Null) => Ok(String::new()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(malformed(&format!("/{key}"), "expected a string")),
        }
    };
    let site_name = match doc.pointer("/info/title") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(malformed("/info/title", "expected a string")),
    };
    let site = SiteInfo { site_name, host: text("host")?, base_path: text("basePath")? };

    let definitions = match root.get("definitions") {
        None | Some(Value::Null) => return Ok((site, Vec::new())),
        Some(Value::Object(defs)) => defs,
        Some(_) => return Err(malformed("/definitions", "expected an object")),
    };

    let mut entities = Vec::with_capacity(definitions.len());
    for (raw, definition) in definitions {
        let path = format!("/definitions/{raw}");
        if !definition.is_object() {
            return Err(malformed(&path, "definition is not an object"));
        }
        let attributes = match definition.pointer("/properties/attributes") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Object(attrs)) => attrs
                .iter()
                .filter(|(name, _)| !name.is_empty())
                .map(|(name, ty)| (name.clone(), infer_attribute_type(ty)))
                .collect(),
            Some(_) => return Err(malformed(&format!("{path}/properties/attributes"), "expected an object")),
        };
        let relationships =
            drupal_relationships(raw, definition.pointer("/properties/relationships").unwrap_or(&Value::Null))?;
        entities.push(RawEntity {
            raw_type_name: raw.clone(),
            is_taxonomy: false,
            endpoint_path: endpoint_for(raw),
            attributes,
            relationships,
        });
    }
    Ok((site, entities))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn endpoint_paths() {
        assert_eq!(endpoint_for("node--video_article"), "/node/video_article");
        assert_eq!(endpoint_for("frob"), "/frob");
    }

    #[test]
    fn rejects_non_object_definitions() {
        let doc = json!({"definitions": {"node--a": 3}});
        assert!(matches!(
            parse_document(&doc),
            Err(DiscoveryError::MalformedDiscoveryDocument { path, .. }) if path == "/definitions/node--a"
        ));
        assert!(parse_document(&json!([])).is_err());
        assert!(parse_document(&json!({"host": 4})).is_err());
    }

    #[test]
    fn reads_site_metadata() {
        let doc = json!({"info": {"title": "Journal CMS"}, "host": "example.com", "basePath": "/api"});
        let (site, entities) = parse_document(&doc).unwrap();
        assert_eq!(site.site_name, "Journal CMS");
        assert_eq!(site.host, "example.com");
        assert_eq!(site.base_path, "/api");
        assert!(entities.is_empty());
    }
}
