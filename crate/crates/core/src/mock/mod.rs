//! An in-process mock CMS that speaks either platform's dialect, plus the
//! reference implementations used to check discovery and drivers against it.

pub mod definition;
pub mod oracle;
pub mod random;
pub mod server;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use self::definition::{
    conforms, MockAttribute, MockAuth, MockEntity, MockRelationship, MockSiteDefinition, SeedRecord, MOCKSITE_VERSION,
};
pub use self::oracle::brute_force_query;
pub use self::server::{serve, serve_with, MockServer, RequestLogEntry, ServeOptions};
use crate::discovery::classify::{classify_drupal, classify_wordpress, ClassNamer};
use crate::discovery::{drupal, wordpress};
use crate::metamodel::{CmsAttribute, CmsClass, CmsModel, CmsRelationship, CoreKind, ModelError, Platform};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MockError {
    #[error("invalid mock site definition: {0}")]
    InvalidDefinition(String),
    #[error("unknown entity type `{0}`")]
    UnknownType(String),
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("mock server I/O failure: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

const JOURNAL_FIXTURE: &str = include_str!("../../fixtures/journal.mocksite.json");

/// The checked-in Journal site: video articles, news articles and podcasts.
pub fn journal_fixture() -> MockSiteDefinition {
    MockSiteDefinition::from_json(JOURNAL_FIXTURE).expect("journal fixture is valid")
}

/// Collection endpoint of an entity, relative to the site base URL.
pub fn endpoint_path(platform: Platform, raw_type_name: &str) -> String {
    match platform {
        Platform::Drupal => drupal::endpoint_for(raw_type_name),
        Platform::WordPress => wordpress::endpoint_for(raw_type_name),
    }
}

/// Related-link template the mock advertises in its schema documents.
pub fn related_link_template(platform: Platform, raw_type_name: &str, relationship: &str) -> String {
    format!("{}/{{id}}/{relationship}", endpoint_path(platform, raw_type_name))
}

/// The model discovery is expected to produce for `def`, computed straight
/// from the definition without any wire format in between.
pub fn induce_model(def: &MockSiteDefinition) -> Result<CmsModel, MockError> {
    let platform = def.platform;
    let taxonomies: BTreeSet<&str> =
        def.schema.iter().filter(|e| e.taxonomy).map(|e| e.raw_type_name.as_str()).collect();
    let classify = |raw: &str| {
        let c = match platform {
            Platform::Drupal => classify_drupal(raw),
            Platform::WordPress => classify_wordpress(raw, taxonomies.contains(raw)),
        };
        c.map_err(|e| MockError::InvalidDefinition(e.to_string()))
    };

    let mut entities: Vec<&MockEntity> = def.schema.iter().collect();
    entities.sort_by(|a, b| a.raw_type_name.cmp(&b.raw_type_name));

    let mut namer = ClassNamer::new();
    let mut names: BTreeMap<&str, String> = BTreeMap::new();
    let mut extensions: Vec<(String, CoreKind, &MockEntity)> = Vec::new();
    for e in &entities {
        let c = classify(&e.raw_type_name)?;
        if c.core_match {
            names.insert(&e.raw_type_name, c.class_name);
            continue;
        }
        let (name, _) = namer.assign(&c.class_name, &c.collision_suffix);
        names.insert(&e.raw_type_name, name.clone());
        extensions.push((name, c.core_kind, e));
    }

    let mut missing: BTreeSet<&str> = BTreeSet::new();
    for (_, _, e) in &extensions {
        for r in &e.relationships {
            if !names.contains_key(r.target.as_str()) && !classify(&r.target)?.core_match {
                missing.insert(&r.target);
            }
        }
    }
    let mut placeholders = Vec::new();
    for raw in missing {
        let c = classify(raw)?;
        let (name, _) = namer.assign(&c.class_name, &c.collision_suffix);
        names.insert(raw, name.clone());
        placeholders.push(CmsClass::extension(name, CoreKind::ContentEntity));
    }

    let mut model = CmsModel::for_site(def.site_name.clone(), def.host.clone(), def.base_path.clone(), platform);
    for (name, kind, e) in extensions {
        let mut cls = CmsClass::extension(name, kind).with_endpoint(endpoint_path(platform, &e.raw_type_name));
        for a in &e.attributes {
            cls = cls.with_attribute(CmsAttribute::new(a.name.clone(), a.ty));
        }
        for r in &e.relationships {
            let target = match names.get(r.target.as_str()) {
                Some(n) => n.clone(),
                None => classify(&r.target)?.class_name,
            };
            let mut rel = CmsRelationship::new(r.name.clone(), target, r.multiplicity);
            rel.related_link_template = Some(related_link_template(platform, &e.raw_type_name, &r.name));
            cls = cls.with_relationship(rel);
        }
        model.insert_class(cls)?;
    }
    for cls in placeholders {
        model.insert_class(cls)?;
    }
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::Multiplicity;

    #[test]
    fn journal_fixture_induces_expected_classes() {
        let model = induce_model(&journal_fixture()).unwrap();
        let video = model.class("VideoArticle").unwrap();
        assert_eq!(video.core_kind, CoreKind::ContentType);
        assert_eq!(video.endpoint_path.as_deref(), Some("/node/video_article"));
        let related = video.relationship("relatedArticles").unwrap();
        assert_eq!(related.target, "NewsArticle");
        assert_eq!(related.multiplicity, Multiplicity::Many);
        assert_eq!(video.relationship("author").unwrap().target, "User");
        assert_eq!(model.class("BannerAds").unwrap().core_kind, CoreKind::Block);
        assert_eq!(model.class("AgeRating").unwrap().core_kind, CoreKind::Taxonomy);
        assert!(model.class("Video").unwrap().is_core);
    }

    #[test]
    fn link_templates_follow_endpoints() {
        assert_eq!(
            related_link_template(Platform::Drupal, "node--video_article", "author"),
            "/node/video_article/{id}/author"
        );
        assert_eq!(related_link_template(Platform::WordPress, "podcast", "tags"), "/wp-json/wp/v2/podcast/{id}/tags");
    }
}
