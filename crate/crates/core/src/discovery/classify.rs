//! Mapping raw platform type names onto core kinds and class names.

use std::collections::BTreeSet;

use heck::{ToLowerCamelCase, ToUpperCamelCase};

use super::DiscoveryError;
use crate::metamodel::{CoreKind, Platform};

/// Outcome of classifying one raw entity type name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class_name: String,
    pub core_kind: CoreKind,
    /// The raw type denotes a core class itself (e.g. `taxonomy--category`);
    /// no extension class is created for it.
    pub core_match: bool,
    /// The platform prefix was not recognised and the entity was anchored at
    /// `ContentEntity`.
    pub fallback: bool,
    /// Suffix appended to the class name when it collides with another class.
    pub collision_suffix: String,
}

const WORDPRESS_BUILTINS: &[(&str, &str, CoreKind, bool)] = &[
    ("posts", "Post", CoreKind::ContentType, false),
    ("pages", "Page", CoreKind::ContentType, false),
    ("tags", "Tag", CoreKind::Tag, true),
    ("categories", "Category", CoreKind::Category, true),
    ("comments", "Comment", CoreKind::Comment, true),
    ("media", "Media", CoreKind::Media, true),
    ("users", "User", CoreKind::User, true),
];

/// Classifies a raw type name. WordPress route bases are treated as custom
/// post types unless built in; see [`classify_wordpress`] for taxonomies.
pub fn classify_entity(platform: Platform, raw: &str) -> Result<Classification, DiscoveryError> {
    match platform {
        Platform::Drupal => classify_drupal(raw),
        Platform::WordPress => classify_wordpress(raw, false),
    }
}

pub fn classify_drupal(raw: &str) -> Result<Classification, DiscoveryError> {
    if raw.is_empty() {
        return Err(DiscoveryError::UnclassifiableEntity(raw.to_string()));
    }
    let (prefix, suffix) = raw.split_once("--").unwrap_or((raw, raw));
    let class_name = suffix.to_upper_camel_case();
    if class_name.is_empty() {
        return Err(DiscoveryError::UnclassifiableEntity(raw.to_string()));
    }
    let prefix_kind = match prefix {
        "node" => Some(CoreKind::ContentType),
        "taxonomy" | "taxonomy_term" => Some(CoreKind::Taxonomy),
        "media" => Some(match suffix {
            "image" => CoreKind::Image,
            "video" => CoreKind::Video,
            "audio" => CoreKind::Audio,
            _ => CoreKind::Media,
        }),
        "block" | "block_content" => Some(CoreKind::Block),
        "comment" => Some(CoreKind::Comment),
        "user" => Some(CoreKind::User),
        _ => None,
    };
    let collision_suffix = prefix.to_upper_camel_case();
    Ok(match prefix_kind {
        Some(kind) => anchored(class_name, kind, collision_suffix),
        None => Classification {
            class_name,
            core_kind: CoreKind::ContentEntity,
            core_match: false,
            fallback: true,
            collision_suffix,
        },
    })
}

/// Classifies a WordPress REST route base (`posts`, `video_article`, ...).
pub fn classify_wordpress(raw: &str, is_taxonomy: bool) -> Result<Classification, DiscoveryError> {
    if raw.is_empty() {
        return Err(DiscoveryError::UnclassifiableEntity(raw.to_string()));
    }
    if let Some(&(_, name, kind, core_match)) = WORDPRESS_BUILTINS.iter().find(|b| b.0 == raw) {
        return Ok(Classification {
            class_name: name.to_string(),
            core_kind: kind,
            core_match,
            fallback: false,
            collision_suffix: "Type".to_string(),
        });
    }
    let class_name = raw.to_upper_camel_case();
    if class_name.is_empty() {
        return Err(DiscoveryError::UnclassifiableEntity(raw.to_string()));
    }
    let (kind, suffix) = if is_taxonomy { (CoreKind::Taxonomy, "Taxonomy") } else { (CoreKind::ContentType, "Type") };
    Ok(anchored(class_name, kind, suffix.to_string()))
}

fn anchored(class_name: String, kind: CoreKind, collision_suffix: String) -> Classification {
    match CoreKind::from_name(&class_name).filter(|k| k.is_a(kind)) {
        Some(core) => {
            Classification { class_name, core_kind: core, core_match: true, fallback: false, collision_suffix }
        }
        None => Classification { class_name, core_kind: kind, core_match: false, fallback: false, collision_suffix },
    }
}

/// Relationship name derived from a target class when the platform does not
/// name the relationship.
pub fn relationship_name_for(target_class: &str) -> String {
    target_class.to_lower_camel_case()
}

/// Hands out unique class names. Core names are always taken; a colliding
/// name gets the raw prefix appended, then a counter.
#[derive(Debug, Clone)]
pub(crate) struct ClassNamer {
    taken: BTreeSet<String>,
}

impl ClassNamer {
    pub(crate) fn new() -> Self {
        ClassNamer { taken: CoreKind::ALL.iter().map(|k| k.name().to_string()).collect() }
    }

    /// Returns the assigned name and whether it differs from the preferred one.
    pub(crate) fn assign(&mut self, preferred: &str, collision_suffix: &str) -> (String, bool) {
        if self.taken.insert(preferred.to_string()) {
            return (preferred.to_string(), false);
        }
        let base = format!("{preferred}{collision_suffix}");
        let mut candidate = base.clone();
        let mut n = 2;
        while !self.taken.insert(candidate.clone()) {
            candidate = format!("{base}{n}");
            n += 1;
        }
        (candidate, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drupal_node_is_content_type() {
        let c = classify_entity(Platform::Drupal, "node--videoarticle").unwrap();
        assert_eq!(c.class_name, "Videoarticle");
        assert_eq!(c.core_kind, CoreKind::ContentType);
        assert!(!c.core_match && !c.fallback);
        let c = classify_entity(Platform::Drupal, "node--video_article").unwrap();
        assert_eq!(c.class_name, "VideoArticle");
    }

    #[test]
    fn drupal_taxonomy_category_is_core_match() {
        let c = classify_entity(Platform::Drupal, "taxonomy--category").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind, c.core_match), ("Category", CoreKind::Category, true));
        let c = classify_entity(Platform::Drupal, "taxonomy_term--age_rating").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind, c.core_match), ("AgeRating", CoreKind::Taxonomy, false));
    }

    #[test]
    fn drupal_unknown_prefix_falls_back() {
        let c = classify_entity(Platform::Drupal, "frobnicator--x").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind), ("X", CoreKind::ContentEntity));
        assert!(c.fallback && !c.core_match);
    }

    #[test]
    fn drupal_media_refinement() {
        let c = classify_drupal("media--video").unwrap();
        assert_eq!((c.core_kind, c.core_match), (CoreKind::Video, true));
        let c = classify_drupal("media--podcast_file").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind), ("PodcastFile", CoreKind::Media));
        let c = classify_drupal("block_content--banner_ads").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind), ("BannerAds", CoreKind::Block));
        let c = classify_drupal("user--user").unwrap();
        assert!(c.core_match);
    }

    #[test]
    fn drupal_node_tag_does_not_match_core_tag() {
        let c = classify_drupal("node--tag").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind, c.core_match), ("Tag", CoreKind::ContentType, false));
        let mut namer = ClassNamer::new();
        assert_eq!(namer.assign(&c.class_name, &c.collision_suffix), ("TagNode".to_string(), true));
        assert_eq!(namer.assign(&c.class_name, &c.collision_suffix), ("TagNode2".to_string(), true));
    }

    #[test]
    fn empty_names_are_unclassifiable() {
        assert!(classify_drupal("").is_err());
        assert!(classify_drupal("node--").is_err());
        assert!(classify_wordpress("", false).is_err());
    }

    #[test]
    fn wordpress_builtins_and_customs() {
        let c = classify_entity(Platform::WordPress, "posts").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind, c.core_match), ("Post", CoreKind::ContentType, false));
        let c = classify_entity(Platform::WordPress, "tags").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind, c.core_match), ("Tag", CoreKind::Tag, true));
        let c = classify_entity(Platform::WordPress, "users").unwrap();
        assert!(c.core_match);
        let c = classify_entity(Platform::WordPress, "video_article").unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind), ("VideoArticle", CoreKind::ContentType));
        let c = classify_wordpress("age_rating", true).unwrap();
        assert_eq!((c.class_name.as_str(), c.core_kind), ("AgeRating", CoreKind::Taxonomy));
    }

    #[test]
    fn relationship_names_are_lower_camel() {
        assert_eq!(relationship_name_for("Category"), "category");
        assert_eq!(relationship_name_for("NewsArticle"), "newsArticle");
    }
}
