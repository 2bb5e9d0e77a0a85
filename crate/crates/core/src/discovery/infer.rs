//! Attribute type and relationship inference from discovery documents.

use serde_json::{Map, Value};

use super::classify::{classify_entity, relationship_name_for};
use super::DiscoveryError;
use crate::metamodel::{AttributeType, CmsRelationship, Multiplicity, Platform};

/// Infers an attribute type from a declared spelling (`"String"`,
/// `"Integer"`, ...), a JSON-schema fragment (`{"type": "string", "format":
/// "date-time"}`) or, failing both, a sample value. Never fails.
pub fn infer_attribute_type(raw: &Value) -> AttributeType {
    match raw {
        Value::String(s) => spelling(s),
        Value::Object(obj) => match obj.get("type") {
            Some(Value::String(t)) => schema_type(t, obj.get("format").and_then(Value::as_str)),
            Some(Value::Array(types)) => types
                .iter()
                .filter_map(Value::as_str)
                .find(|t| *t != "null")
                .map(|t| schema_type(t, obj.get("format").and_then(Value::as_str)))
                .unwrap_or(AttributeType::Unknown),
            _ => AttributeType::Unknown,
        },
        Value::Bool(_) => AttributeType::Boolean,
        Value::Number(n) if n.is_f64() => AttributeType::Float,
        Value::Number(_) => AttributeType::Integer,
        Value::Null | Value::Array(_) => AttributeType::Unknown,
    }
}

fn spelling(s: &str) -> AttributeType {
    match s.to_ascii_lowercase().as_str() {
        "string" | "text" => AttributeType::Text,
        "integer" | "int" => AttributeType::Integer,
        "number" | "float" | "double" => AttributeType::Float,
        "boolean" | "bool" => AttributeType::Boolean,
        "datetime" | "date-time" | "date" | "timestamp" => AttributeType::DateTime,
        _ => AttributeType::Unknown,
    }
}

fn schema_type(t: &str, format: Option<&str>) -> AttributeType {
    match (t, format) {
        ("string", Some("date-time" | "date")) => AttributeType::DateTime,
        ("string", _) => AttributeType::Text,
        ("integer", _) => AttributeType::Integer,
        ("number", _) => AttributeType::Float,
        ("boolean", _) => AttributeType::Boolean,
        _ => AttributeType::Unknown,
    }
}

/// A relationship as declared on the wire, before targets are resolved to
/// class names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRelationship {
    pub name: String,
    pub target_raw: String,
    pub target_is_taxonomy: bool,
    pub multiplicity: Multiplicity,
    pub link: Option<String>,
}

fn is_index(key: &str) -> bool {
    !key.is_empty() && key.bytes().all(|b| b.is_ascii_digit())
}

/// Parses a Drupal `relationships` block.
///
/// Named entries map a relationship name to either a single
/// `{"type", "link"}` object (multiplicity One) or an indexed collection of
/// them (`{"0": {...}}` or a JSON array; multiplicity Many). A block whose keys
/// are all indices is the unnamed form: every entry is a Many relationship
/// named after its target class.
pub fn drupal_relationships(entity: &str, block: &Value) -> Result<Vec<RawRelationship>, DiscoveryError> {
    let malformed = |rel: &str, message: &str| DiscoveryError::MalformedRelationshipEntry {
        entity: entity.to_string(),
        relationship: rel.to_string(),
        message: message.to_string(),
    };
    let block = match block {
        Value::Null => return Ok(Vec::new()),
        Value::Object(map) => map,
        _ => return Err(malformed("", "relationships block is not an object")),
    };
    if block.is_empty() {
        return Ok(Vec::new());
    }

    let mut out: Vec<RawRelationship> = Vec::new();
    let mut push = |rel: RawRelationship| -> Result<(), DiscoveryError> {
        match out.iter().find(|r| r.name == rel.name) {
            Some(existing) if existing.target_raw == rel.target_raw => Ok(()),
            Some(_) => Err(malformed(&rel.name, "relationship name declared with conflicting targets")),
            None => {
                out.push(rel);
                Ok(())
            }
        }
    };

    if block.keys().all(|k| is_index(k)) {
        for (key, entry) in block {
            let (target, link) = drupal_entry(entry).ok_or_else(|| malformed(key, "entry lacks a `type`"))?;
            let target_class = classify_entity(Platform::Drupal, &target)?.class_name;
            push(RawRelationship {
                name: relationship_name_for(&target_class),
                target_raw: target,
                target_is_taxonomy: false,
                multiplicity: Multiplicity::Many,
                link,
            })?;
        }
        return Ok(out);
    }

    for (name, entry) in block {
        let items: Vec<&Value> = match entry {
            Value::Object(obj) if obj.contains_key("type") => {
                let (target, link) = drupal_entry(entry).ok_or_else(|| malformed(name, "`type` is not a string"))?;
                push(RawRelationship {
                    name: name.clone(),
                    target_raw: target,
                    target_is_taxonomy: false,
                    multiplicity: Multiplicity::One,
                    link,
                })?;
                continue;
            }
            Value::Object(obj) if !obj.is_empty() && obj.keys().all(|k| is_index(k)) => indexed(obj),
            Value::Array(items) if !items.is_empty() => items.iter().collect(),
            _ => return Err(malformed(name, "expected an entry object or an indexed collection")),
        };
        let mut target: Option<(String, Option<String>)> = None;
        for item in items {
            let (t, link) = drupal_entry(item).ok_or_else(|| malformed(name, "entry lacks a `type`"))?;
            match &target {
                Some((existing, _)) if *existing != t => {
                    return Err(malformed(name, "collection entries disagree on the target type"))
                }
                Some(_) => {}
                None => target = Some((t, link)),
            }
        }
        let (target, link) = target.expect("collection is non-empty");
        push(RawRelationship {
            name: name.clone(),
            target_raw: target,
            target_is_taxonomy: false,
            multiplicity: Multiplicity::Many,
            link,
        })?;
    }
    Ok(out)
}

fn indexed(obj: &Map<String, Value>) -> Vec<&Value> {
    let mut entries: Vec<(u64, &Value)> = obj.iter().map(|(k, v)| (k.parse().unwrap_or(u64::MAX), v)).collect();
    entries.sort_by_key(|(i, _)| *i);
    entries.into_iter().map(|(_, v)| v).collect()
}

fn drupal_entry(entry: &Value) -> Option<(String, Option<String>)> {
    let obj = entry.as_object()?;
    let target = obj.get("type")?.as_str()?.to_string();
    if target.is_empty() {
        return None;
    }
    let link = obj.get("link").and_then(Value::as_str).map(str::to_string);
    Some((target, link))
}

/// Relationship inference over a Drupal definition
/// (`{"properties": {"relationships": {...}}}`), with targets reported as
/// class names as classification would name them.
pub fn infer_relationships(platform: Platform, definition: &Value) -> Result<Vec<CmsRelationship>, DiscoveryError> {
    let raw = match platform {
        Platform::Drupal => {
            let block = definition.pointer("/properties/relationships").unwrap_or(&Value::Null);
            drupal_relationships("", block)?
        }
        Platform::WordPress => {
            let links = definition.pointer("/schema/links").unwrap_or(&Value::Null);
            super::wordpress::schema_links("", links, &Default::default())?
        }
    };
    raw.into_iter()
        .map(|r| {
            let target = match platform {
                Platform::Drupal => classify_entity(platform, &r.target_raw)?,
                Platform::WordPress => super::classify::classify_wordpress(&r.target_raw, r.target_is_taxonomy)?,
            };
            let mut rel = CmsRelationship::new(r.name, target.class_name, r.multiplicity);
            rel.related_link_template = r.link;
            Ok(rel)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn declared_spellings() {
        assert_eq!(infer_attribute_type(&json!("String")), AttributeType::Text);
        assert_eq!(infer_attribute_type(&json!("Integer")), AttributeType::Integer);
        assert_eq!(infer_attribute_type(&json!("Number")), AttributeType::Float);
        assert_eq!(infer_attribute_type(&json!("Float")), AttributeType::Float);
        assert_eq!(infer_attribute_type(&json!("Boolean")), AttributeType::Boolean);
        assert_eq!(infer_attribute_type(&json!("DateTime")), AttributeType::DateTime);
        assert_eq!(infer_attribute_type(&json!("date-time")), AttributeType::DateTime);
        assert_eq!(infer_attribute_type(&json!("Widget")), AttributeType::Unknown);
        assert_eq!(infer_attribute_type(&json!("Unknown")), AttributeType::Unknown);
    }

    #[test]
    fn samples_and_schema_fragments() {
        assert_eq!(infer_attribute_type(&json!(true)), AttributeType::Boolean);
        assert_eq!(infer_attribute_type(&json!(3)), AttributeType::Integer);
        assert_eq!(infer_attribute_type(&json!(3.5)), AttributeType::Float);
        assert_eq!(infer_attribute_type(&json!(null)), AttributeType::Unknown);
        assert_eq!(infer_attribute_type(&json!([1])), AttributeType::Unknown);
        assert_eq!(infer_attribute_type(&json!({"type": "string", "format": "date-time"})), AttributeType::DateTime);
        assert_eq!(infer_attribute_type(&json!({"type": ["integer", "null"]})), AttributeType::Integer);
        assert_eq!(infer_attribute_type(&json!({"type": "object"})), AttributeType::Unknown);
    }

    #[test]
    fn numeric_keyed_relationship_block() {
        let def = json!({"properties": {"relationships": {"0": {"type": "taxonomy--category", "link": "..."}}}});
        let rels = infer_relationships(Platform::Drupal, &def).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].target, "Category");
        assert_eq!(rels[0].name, "category");
        assert_eq!(rels[0].multiplicity, Multiplicity::Many);
        assert_eq!(rels[0].related_link_template.as_deref(), Some("..."));
    }

    #[test]
    fn empty_block() {
        let def = json!({"properties": {"relationships": {}}});
        assert!(infer_relationships(Platform::Drupal, &def).unwrap().is_empty());
        let def = json!({"properties": {}});
        assert!(infer_relationships(Platform::Drupal, &def).unwrap().is_empty());
    }

    #[test]
    fn object_shaped_entry_is_one() {
        let def = json!({"properties": {"relationships": {
            "author": {"type": "user--user", "link": "/node/article/{id}/author"},
            "related": {"0": {"type": "node--news_article"}, "1": {"type": "node--news_article"}},
            "tags": [{"type": "taxonomy--tag"}]
        }}});
        let rels = infer_relationships(Platform::Drupal, &def).unwrap();
        let by_name = |n: &str| rels.iter().find(|r| r.name == n).unwrap();
        assert_eq!(by_name("author").target, "User");
        assert_eq!(by_name("author").multiplicity, Multiplicity::One);
        assert_eq!(by_name("related").target, "NewsArticle");
        assert_eq!(by_name("related").multiplicity, Multiplicity::Many);
        assert_eq!(by_name("tags").multiplicity, Multiplicity::Many);
    }

    #[test]
    fn malformed_entries() {
        for bad in [
            json!({"author": 3}),
            json!({"author": {}}),
            json!({"author": {"0": {"link": "x"}}}),
            json!({"author": {"0": {"type": "a--b"}, "1": {"type": "a--c"}}}),
            json!({"0": {"link": "x"}}),
            json!([1, 2]),
        ] {
            let def = json!({"properties": {"relationships": bad}});
            assert!(
                matches!(
                    infer_relationships(Platform::Drupal, &def),
                    Err(DiscoveryError::MalformedRelationshipEntry { .. })
                ),
                "{def}"
            );
        }
    }
}
