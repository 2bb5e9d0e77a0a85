//! Persistence of models as canonical `cmsmodel/1` JSON: object keys sorted,
//! two-space indentation, LF line endings and a trailing newline, so equal
//! models always serialize to identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::metamodel::{
    AttributeType, CmsAttribute, CmsClass, CmsModel, CmsRelationship, CoreKind, Multiplicity, Platform,
};

pub const MODEL_VERSION: &str = "cmsmodel/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelIoError {
    #[error("unsupported model version `{found}`, expected `{MODEL_VERSION}`")]
    SchemaVersionMismatch { found: String },
    #[error("invalid model document at `{path}`: {message}")]
    ValidationFailed { path: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ModelDoc {
    version: String,
    site_name: String,
    host: String,
    base_path: String,
    platform: Platform,
    core_classes: Vec<String>,
    extensions: Vec<ClassDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ClassDoc {
    name: String,
    core_kind: String,
    endpoint_path: Option<String>,
    attributes: Vec<AttributeDoc>,
    relationships: Vec<RelationshipDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AttributeDoc {
    name: String,
    #[serde(rename = "type")]
    ty: AttributeType,
    is_identifier: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RelationshipDoc {
    name: String,
    target: String,
    multiplicity: Multiplicity,
    related_link_template: Option<String>,
}

/// Recursively rebuilds objects with their keys in sorted order, whatever
/// map representation serde_json was compiled with.
fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Canonical JSON text of a value.
pub fn canonical_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(&sort_keys(value.clone())).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn model_to_json(model: &CmsModel) -> String {
    let mut core_classes: Vec<String> = model.core_classes().map(|c| c.name.clone()).collect();
    core_classes.sort();
    let doc = ModelDoc {
        version: MODEL_VERSION.to_string(),
        site_name: model.site_name.clone(),
        host: model.host.clone(),
        base_path: model.base_path.clone(),
        platform: model.platform,
        core_classes,
        extensions: model
            .extensions()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                core_kind: c.core_kind.name().to_string(),
                endpoint_path: c.endpoint_path.clone(),
                attributes: c
                    .attributes
                    .iter()
                    .map(|a| AttributeDoc { name: a.name.clone(), ty: a.ty, is_identifier: a.is_identifier })
                    .collect(),
                relationships: c
                    .relationships
                    .iter()
                    .map(|r| RelationshipDoc {
                        name: r.name.clone(),
                        target: r.target.clone(),
                        multiplicity: r.multiplicity,
                        related_link_template: r.related_link_template.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    canonical_json(&serde_json::to_value(doc).expect("model documents serialize"))
}

fn invalid(path: impl Into<String>, message: impl ToString) -> ModelIoError {
    ModelIoError::ValidationFailed { path: path.into(), message: message.to_string() }
}

pub fn model_from_json(text: &str) -> Result<CmsModel, ModelIoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| invalid("", e))?;
    match value.get("version") {
        Some(Value::String(v)) if v == MODEL_VERSION => {}
        Some(Value::String(v)) => return Err(ModelIoError::SchemaVersionMismatch { found: v.clone() }),
        Some(_) => return Err(invalid("version", "expected a string")),
        None => return Err(invalid("version", "missing field")),
    }
    let doc: ModelDoc =
        serde_path_to_error::deserialize(value).map_err(|e| invalid(e.path().to_string(), e.inner()))?;

    let mut expected: Vec<&str> = CoreKind::ALL.iter().map(|k| k.name()).collect();
    expected.sort_unstable();
    if doc.core_classes != expected {
        return Err(invalid("coreClasses", "must list exactly the sixteen core classes in sorted order"));
    }

    let mut classes = Vec::with_capacity(doc.extensions.len());
    for (i, c) in doc.extensions.into_iter().enumerate() {
        let path = format!("extensions[{i}]");
        let kind = CoreKind::from_name(&c.core_kind)
            .ok_or_else(|| invalid(format!("{path}.coreKind"), "unknown core kind"))?;
        let mut cls = CmsClass::extension(c.name, kind);
        cls.endpoint_path = c.endpoint_path;
        cls.attributes = c
            .attributes
            .into_iter()
            .map(|a| CmsAttribute { name: a.name, ty: a.ty, is_identifier: a.is_identifier })
            .collect();
        cls.relationships = c
            .relationships
            .into_iter()
            .map(|r| CmsRelationship {
                name: r.name,
                target: r.target,
                multiplicity: r.multiplicity,
                related_link_template: r.related_link_template,
            })
            .collect();
        if cls != cls.clone().normalized() {
            return Err(invalid(path, "attributes and relationships must be sorted by name"));
        }
        classes.push(cls);
    }
    if classes.windows(2).any(|w| w[0].name >= w[1].name) {
        return Err(invalid("extensions", "extensions must be sorted by unique name"));
    }
    CmsModel::from_parts(doc.site_name, doc.host, doc.base_path, doc.platform, classes)
        .map_err(|e| invalid("extensions", e))
}

pub fn save_model(model: &CmsModel, path: &Path) -> Result<(), ModelIoError> {
    std::fs::write(path, model_to_json(model))
        .map_err(|e| ModelIoError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_model(path: &Path) -> Result<CmsModel, ModelIoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ModelIoError::Io { path: path.display().to_string(), message: e.to_string() })?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::core_model;

    fn sample() -> CmsModel {
        CmsModel::from_parts(
            "Journal CMS".into(),
            "example.com".into(),
            "/api".into(),
            Platform::Drupal,
            vec![CmsClass::extension("VideoArticle", CoreKind::ContentType)
                .with_endpoint("/node/video_article")
                .with_attribute(CmsAttribute::new("likes", AttributeType::Integer))
                .with_relationship(CmsRelationship::new("author", "User", Multiplicity::One))],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let text = model_to_json(&sample());
        assert_eq!(model_from_json(&text).unwrap(), sample());
        assert_eq!(model_to_json(&model_from_json(&text).unwrap()), text);
        assert!(text.ends_with("}\n"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn keys_are_sorted() {
        let text = model_to_json(&core_model());
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \"") && l.contains("\":"))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        assert_eq!(keys, ["basePath", "coreClasses", "extensions", "host", "platform", "siteName", "version"]);
    }

    #[test]
    fn version_is_checked_first() {
        let text = model_to_json(&sample()).replace("cmsmodel/1", "cmsmodel/2");
        assert_eq!(model_from_json(&text), Err(ModelIoError::SchemaVersionMismatch { found: "cmsmodel/2".into() }));
    }

    #[test]
    fn invalid_documents_name_the_path() {
        let text = model_to_json(&sample()).replace("\"Integer\"", "\"Decimal\"");
        match model_from_json(&text) {
            Err(ModelIoError::ValidationFailed { path, .. }) => assert_eq!(path, "extensions[0].attributes[1].type"),
            other => panic!("{other:?}"),
        }
        let text = model_to_json(&sample()).replace("\"User\"", "\"Nobody\"");
        assert!(matches!(model_from_json(&text), Err(ModelIoError::ValidationFailed { .. })));
        let text = model_to_json(&sample()).replace("\"ContentType\"", "\"Tag\"");
        assert!(matches!(model_from_json(&text), Err(ModelIoError::ValidationFailed { .. })));
        assert!(matches!(model_from_json("{"), Err(ModelIoError::ValidationFailed { .. })));
    }
}
