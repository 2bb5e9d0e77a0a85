//! Reverse engineering of a deployed site into a [`CmsModel`].
//!
//! Discovery fetches the platform's schema documents (Drupal's
//! `openapi.json`, WordPress' route index plus one `OPTIONS` schema per
//! route), turns every definition into a [`RawEntity`] and then builds the
//! model on top of the core model with [`build_model`]. Only `GET` and
//! `OPTIONS` requests are issued.

pub mod classify;
pub mod drupal;
pub mod infer;
pub mod wordpress;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use self::classify::ClassNamer;
pub use self::classify::{classify_entity, classify_wordpress, Classification};
pub use self::infer::{infer_attribute_type, infer_relationships, RawRelationship};
pub use crate::http::{AuthScheme, SiteCredentials};
use crate::http::{HttpClient, HttpResponse, TransportError};
use crate::metamodel::{
    AttributeType, CmsAttribute, CmsClass, CmsModel, CmsRelationship, CoreKind, ModelError, Platform,
    IDENTIFIER_ATTRIBUTE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoveryError {
    #[error("invalid base URL `{0}`")]
    InvalidBaseUrl(String),
    #[error("site unreachable: {0}")]
    Unreachable(#[from] TransportError),
    #[error("authentication failed on {url} (HTTP {status})")]
    AuthFailed { url: String, status: u16 },
    #[error("malformed discovery document at {path}: {message}")]
    MalformedDiscoveryDocument { path: String, message: String },
    #[error("malformed relationship `{relationship}` on `{entity}`: {message}")]
    MalformedRelationshipEntry { entity: String, relationship: String, message: String },
    #[error("cannot classify entity type `{0}`")]
    UnclassifiableEntity(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WarningCode {
    UnclassifiableEntity,
    UnresolvedTarget,
    NameCollision,
}

impl fmt::Display for WarningCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiscoveryWarning {
    pub code: WarningCode,
    pub context: String,
    pub message: String,
}

impl fmt::Display for DiscoveryWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.code, self.context, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryReport {
    pub model: CmsModel,
    pub warnings: Vec<DiscoveryWarning>,
}

/// One entity definition as read from the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEntity {
    pub raw_type_name: String,
    /// WordPress only: the route is a taxonomy rather than a post type.
    pub is_taxonomy: bool,
    pub endpoint_path: String,
    pub attributes: Vec<(String, AttributeType)>,
    pub relationships: Vec<RawRelationship>,
}

/// Site metadata read from the discovery entry point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteInfo {
    pub site_name: String,
    pub host: String,
    pub base_path: String,
}

/// Discovers the schema of the site rooted at `base_url`.
pub fn discover(
    base_url: &str,
    credentials: &SiteCredentials,
    platform: Platform,
) -> Result<DiscoveryReport, DiscoveryError> {
    let base = url::Url::parse(base_url).map_err(|_| DiscoveryError::InvalidBaseUrl(base_url.to_string()))?;
    if !matches!(base.scheme(), "http" | "https") || base.host_str().is_none() {
        return Err(DiscoveryError::InvalidBaseUrl(base_url.to_string()));
    }
    let base = base_url.trim_end_matches('/');
    let client = HttpClient::new(credentials.clone());
    let (site, entities) = match platform {
        Platform::Drupal => drupal::fetch(&client, base)?,
        Platform::WordPress => wordpress::fetch(&client, base)?,
    };
    build_model(site, platform, entities)
}

pub(crate) fn fetch_json(
    client: &HttpClient,
    url: &str,
    path: &str,
    options: bool,
) -> Result<serde_json::Value, DiscoveryError> {
    let accept = "application/json";
    let resp: HttpResponse = if options { client.options(url, accept)? } else { client.get(url, accept)? };
    match resp.status {
        401 | 403 => Err(DiscoveryError::AuthFailed { url: url.to_string(), status: resp.status }),
        s if (200..300).contains(&s) => serde_json::from_str(&resp.body)
            .map_err(|e| DiscoveryError::MalformedDiscoveryDocument { path: path.to_string(), message: e.to_string() }),
        s => Err(DiscoveryError::MalformedDiscoveryDocument {
            path: path.to_string(),
            message: format!("unexpected HTTP status {s}"),
        }),
    }
}

/// Builds the extended model from raw entity definitions. The result does
/// not depend on the order of `entities`.
pub fn build_model(
    site: SiteInfo,
    platform: Platform,
    mut entities: Vec<RawEntity>,
) -> Result<DiscoveryReport, DiscoveryError> {
    entities.sort_by(|a, b| a.raw_type_name.cmp(&b.raw_type_name));
    let mut warnings = Vec::new();
    let classify = |raw: &str, is_taxonomy: bool| match platform {
        Platform::Drupal => classify::classify_drupal(raw),
        Platform::WordPress => classify_wordpress(raw, is_taxonomy),
    };

    let mut namer = ClassNamer::new();
    let mut names: BTreeMap<&str, String> = BTreeMap::new();
    let mut classes: Vec<(CmsClass, &RawEntity)> = Vec::new();
    for entity in &entities {
        if names.contains_key(entity.raw_type_name.as_str()) {
            return Err(DiscoveryError::MalformedDiscoveryDocument {
                path: entity.raw_type_name.clone(),
                message: "entity type declared twice".into(),
            });
        }
        let c = classify(&entity.raw_type_name, entity.is_taxonomy)?;
        if c.fallback {
            warnings.push(DiscoveryWarning {
                code: WarningCode::UnclassifiableEntity,
                context: entity.raw_type_name.clone(),
                message: format!("unknown type prefix, anchored `{}` at ContentEntity", c.class_name),
            });
        }
        if c.core_match {
            names.insert(&entity.raw_type_name, c.class_name);
            continue;
        }
        let (name, renamed) = namer.assign(&c.class_name, &c.collision_suffix);
        if renamed {
            warnings.push(DiscoveryWarning {
                code: WarningCode::NameCollision,
                context: entity.raw_type_name.clone(),
                message: format!("`{}` already taken, using `{name}`", c.class_name),
            });
        }
        names.insert(&entity.raw_type_name, name.clone());
        let mut cls = CmsClass::extension(name, c.core_kind).with_endpoint(entity.endpoint_path.clone());
        for (attr, ty) in &entity.attributes {
            if attr != IDENTIFIER_ATTRIBUTE {
                cls = cls.with_attribute(CmsAttribute::new(attr.clone(), *ty));
            }
        }
        classes.push((cls, entity));
    }

    // Targets that are neither defined nor core become placeholders.
    let mut unresolved: BTreeSet<(&str, bool)> = BTreeSet::new();
    for (_, entity) in &classes {
        for rel in &entity.relationships {
            if !names.contains_key(rel.target_raw.as_str()) {
                let c = classify(&rel.target_raw, rel.target_is_taxonomy)?;
                if !c.core_match {
                    unresolved.insert((&rel.target_raw, rel.target_is_taxonomy));
                }
            }
        }
    }
    let mut targets: BTreeMap<&str, String> = BTreeMap::new();
    let mut placeholders = Vec::new();
    for (raw, is_taxonomy) in unresolved {
        if targets.contains_key(raw) {
            continue;
        }
        let c = classify(raw, is_taxonomy)?;
        let (name, _) = namer.assign(&c.class_name, &c.collision_suffix);
        warnings.push(DiscoveryWarning {
            code: WarningCode::UnresolvedTarget,
            context: raw.to_string(),
            message: format!("relationship target not exposed by the site, added placeholder `{name}`"),
        });
        targets.insert(raw, name.clone());
        placeholders.push(CmsClass::extension(name, CoreKind::ContentEntity));
    }

    let mut model = CmsModel::for_site(site.site_name, site.host, site.base_path, platform);
    for (mut cls, entity) in classes {
        for rel in &entity.relationships {
            let target = match names.get(rel.target_raw.as_str()).or_else(|| targets.get(rel.target_raw.as_str())) {
                Some(name) => name.clone(),
                None => classify(&rel.target_raw, rel.target_is_taxonomy)?.class_name,
            };
            let mut r = CmsRelationship::new(rel.name.clone(), target, rel.multiplicity);
            r.related_link_template = rel.link.clone();
            cls = cls.with_relationship(r);
        }
        model.insert_class(cls)?;
    }
    for cls in placeholders {
        model.insert_class(cls)?;
    }
    model.validate()?;
    warnings.sort();
    Ok(DiscoveryReport { model, warnings })
}
