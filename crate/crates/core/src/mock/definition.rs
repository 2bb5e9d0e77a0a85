//! The `mocksite/1` site definition: schema plus seed content.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::MockError;
use crate::discovery::classify::{classify_drupal, classify_wordpress};
use crate::discovery::wordpress::NON_ENTITY_ROUTES;
use crate::metamodel::{AttributeType, Multiplicity, Platform};

pub const MOCKSITE_VERSION: &str = "mocksite/1";

/// Names the wire formats use for their own bookkeeping.
pub const RESERVED_ATTRIBUTE_NAMES: &[&str] = &["id", "changed", "modified", "_links", "lastUpdated", "type"];
pub const RESERVED_RELATIONSHIP_NAMES: &[&str] = &["self", "collection"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MockSiteDefinition {
    pub version: String,
    pub site_name: String,
    pub platform: Platform,
    #[serde(default = "default_host")]
    pub host: String,
    #[serde(default = "default_base_path")]
    pub base_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auth: Option<MockAuth>,
    #[serde(default)]
    pub schema: Vec<MockEntity>,
    #[serde(default)]
    pub content: Vec<SeedRecord>,
}

fn default_host() -> String {
    "example.com".to_string()
}

fn default_base_path() -> String {
    "/api".to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockAuth {
    pub username: String,
    pub secret: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MockEntity {
    pub raw_type_name: String,
    /// WordPress only: the route is a taxonomy.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub taxonomy: bool,
    #[serde(default)]
    pub attributes: Vec<MockAttribute>,
    #[serde(default)]
    pub relationships: Vec<MockRelationship>,
}

impl MockEntity {
    pub fn attribute(&self, name: &str) -> Option<&MockAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn relationship(&self, name: &str) -> Option<&MockRelationship> {
        self.relationships.iter().find(|r| r.name == name)
    }

    /// Declared type of a field; `id` is always text.
    pub fn field_type(&self, name: &str) -> Option<AttributeType> {
        if name == "id" {
            return Some(AttributeType::Text);
        }
        self.attribute(name).map(|a| a.ty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockAttribute {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: AttributeType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockRelationship {
    pub name: String,
    /// Raw type name of the target entity.
    pub target: String,
    pub multiplicity: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SeedRecord {
    pub id: String,
    /// Raw type name of the record's entity.
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_updated: Option<String>,
    #[serde(default)]
    pub attributes: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relationships: BTreeMap<String, Vec<String>>,
}

/// Drupal types must be `prefix--bundle`; WordPress route bases must be
/// plain slugs that are not reserved routes.
fn servable_type_name(platform: Platform, raw: &str) -> bool {
    let slug = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
    match platform {
        Platform::Drupal => raw.split_once("--").is_some_and(|(p, b)| slug(p) && slug(b)),
        Platform::WordPress => {
            !raw.is_empty()
                && raw.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
                && !NON_ENTITY_ROUTES.contains(&raw)
        }
    }
}

/// Whether `value` may be stored in an attribute of type `ty`.
pub fn conforms(ty: AttributeType, value: &Value) -> bool {
    match (ty, value) {
        (_, Value::Null) => true,
        (AttributeType::Text, Value::String(_)) => true,
        (AttributeType::Integer, Value::Number(n)) => n.is_i64(),
        (AttributeType::Float, Value::Number(_)) => true,
        (AttributeType::Boolean, Value::Bool(_)) => true,
        (AttributeType::DateTime, Value::String(s)) => chrono::DateTime::parse_from_rfc3339(s).is_ok(),
        (AttributeType::Unknown, v) => !v.is_array() && !v.is_object(),
        _ => false,
    }
}

impl MockSiteDefinition {
    pub fn from_json(text: &str) -> Result<Self, MockError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let def: MockSiteDefinition = serde_path_to_error::deserialize(de)
            .map_err(|e| MockError::InvalidDefinition(format!("{}: {}", e.path(), e.inner())))?;
        def.validate()?;
        Ok(def)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("definitions serialize");
        text.push('\n');
        text
    }

    pub fn entity(&self, raw_type_name: &str) -> Option<&MockEntity> {
        self.schema.iter().find(|e| e.raw_type_name == raw_type_name)
    }

    pub fn records<'a>(&'a self, raw_type_name: &'a str) -> impl Iterator<Item = &'a SeedRecord> + 'a {
        self.content.iter().filter(move |r| r.type_name == raw_type_name)
    }

    pub fn validate(&self) -> Result<(), MockError> {
        let bad = |msg: String| Err(MockError::InvalidDefinition(msg));
        if self.version != MOCKSITE_VERSION {
            return bad(format!("unsupported version `{}`", self.version));
        }
        if !self.base_path.is_empty() && (!self.base_path.starts_with('/') || self.base_path.ends_with('/')) {
            return bad(format!("basePath `{}` must be empty or start (and not end) with `/`", self.base_path));
        }
        if let Some(auth) = &self.auth {
            if auth.username.is_empty() || auth.username.contains(':') {
                return bad("auth username must be non-empty and free of `:`".into());
            }
        }

        let mut raw_names = BTreeSet::new();
        for e in &self.schema {
            if !raw_names.insert(e.raw_type_name.as_str()) {
                return bad(format!("entity `{}` declared twice", e.raw_type_name));
            }
            let classified = match self.platform {
                Platform::Drupal => classify_drupal(&e.raw_type_name),
                Platform::WordPress => classify_wordpress(&e.raw_type_name, e.taxonomy),
            };
            if classified.is_err() || !servable_type_name(self.platform, &e.raw_type_name) {
                return bad(format!("entity type name `{}` cannot be served", e.raw_type_name));
            }
            let mut names = BTreeSet::new();
            for a in &e.attributes {
                if a.name.is_empty() || RESERVED_ATTRIBUTE_NAMES.contains(&a.name.as_str()) {
                    return bad(format!("`{}` has reserved or empty attribute name `{}`", e.raw_type_name, a.name));
                }
                if !names.insert(a.name.as_str()) {
                    return bad(format!("`{}` repeats attribute `{}`", e.raw_type_name, a.name));
                }
            }
            let mut rels = BTreeSet::new();
            for r in &e.relationships {
                if r.name.is_empty()
                    || r.name.contains('/')
                    || r.name.bytes().all(|b| b.is_ascii_digit())
                    || RESERVED_RELATIONSHIP_NAMES.contains(&r.name.as_str())
                {
                    return bad(format!("`{}` has invalid relationship name `{}`", e.raw_type_name, r.name));
                }
                if !rels.insert(r.name.as_str()) || names.contains(r.name.as_str()) {
                    return bad(format!("`{}` repeats relationship or attribute name `{}`", e.raw_type_name, r.name));
                }
                if r.target.is_empty() {
                    return bad(format!("`{}.{}` has an empty target", e.raw_type_name, r.name));
                }
            }
        }

        let mut ids: BTreeSet<(&str, &str)> = BTreeSet::new();
        for rec in &self.content {
            let Some(entity) = self.entity(&rec.type_name) else {
                return bad(format!("record `{}` has undeclared type `{}`", rec.id, rec.type_name));
            };
            if rec.id.is_empty() || rec.id.contains('/') {
                return bad(format!("record of `{}` has an invalid id `{}`", rec.type_name, rec.id));
            }
            if !ids.insert((&rec.type_name, &rec.id)) {
                return bad(format!("duplicate id `{}` for `{}`", rec.id, rec.type_name));
            }
            if let Some(ts) = &rec.last_updated {
                if chrono::DateTime::parse_from_rfc3339(ts).is_err() {
                    return bad(format!("record `{}` has an invalid lastUpdated `{ts}`", rec.id));
                }
            }
            for (name, value) in &rec.attributes {
                match entity.attribute(name) {
                    None => return bad(format!("record `{}` sets undeclared attribute `{name}`", rec.id)),
                    Some(a) if !conforms(a.ty, value) => {
                        return bad(format!("record `{}`: `{name}` does not conform to {}", rec.id, a.ty))
                    }
                    Some(_) => {}
                }
            }
        }
        for rec in &self.content {
            let entity = self.entity(&rec.type_name).expect("checked above");
            for (name, targets) in &rec.relationships {
                let Some(rel) = entity.relationship(name) else {
                    return bad(format!("record `{}` sets undeclared relationship `{name}`", rec.id));
                };
                if rel.multiplicity == Multiplicity::One && targets.len() > 1 {
                    return bad(format!("record `{}`: `{name}` holds more than one target", rec.id));
                }
                for t in targets {
                    if !ids.contains(&(rel.target.as_str(), t.as_str())) {
                        return bad(format!("record `{}`: `{name}` points at missing `{}` `{t}`", rec.id, rel.target));
                    }
                }
            }
        }
        Ok(())
    }
}
