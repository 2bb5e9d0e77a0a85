//! The core CMS model and its extension mechanism.
//!
//! A [`CmsModel`] always contains the sixteen core classes (one per
//! [`CoreKind`]) followed by zero or more extension classes, each anchored
//! to an extendable core kind. Core classes come first in [`CoreKind::ALL`]
//! order and extensions follow sorted by name, so two models describing the
//! same schema compare equal with the derived `PartialEq`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the identifier attribute carried by every content entity.
pub const IDENTIFIER_ATTRIBUTE: &str = "id";
/// Name of the last-update attribute declared on `ContentEntity`.
pub const LAST_UPDATED_ATTRIBUTE: &str = "lastUpdated";
/// Name of the single attribute declared by every other core class.
pub const CORE_NAME_ATTRIBUTE: &str = "name";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CoreKind {
    ContentEntity,
    ContentType,
    Comment,
    Taxonomy,
    Tag,
    Category,
    Media,
    Image,
    Video,
    Audio,
    Block,
    User,
    Role,
    Permission,
    GeneralPermission,
    SpecificPermission,
}

impl CoreKind {
    pub const ALL: [CoreKind; 16] = [
        CoreKind::ContentEntity,
        CoreKind::ContentType,
        CoreKind::Comment,
        CoreKind::Taxonomy,
        CoreKind::Tag,
        CoreKind::Category,
        CoreKind::Media,
        CoreKind::Image,
        CoreKind::Video,
        CoreKind::Audio,
        CoreKind::Block,
        CoreKind::User,
        CoreKind::Role,
        CoreKind::Permission,
        CoreKind::GeneralPermission,
        CoreKind::SpecificPermission,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoreKind::ContentEntity => "ContentEntity",
            CoreKind::ContentType => "ContentType",
            CoreKind::Comment => "Comment",
            CoreKind::Taxonomy => "Taxonomy",
            CoreKind::Tag => "Tag",
            CoreKind::Category => "Category",
            CoreKind::Media => "Media",
            CoreKind::Image => "Image",
            CoreKind::Video => "Video",
            CoreKind::Audio => "Audio",
            CoreKind::Block => "Block",
            CoreKind::User => "User",
            CoreKind::Role => "Role",
            CoreKind::Permission => "Permission",
            CoreKind::GeneralPermission => "GeneralPermission",
            CoreKind::SpecificPermission => "SpecificPermission",
        }
    }

    /// Parent in the core inheritance tree. `ContentEntity`, `Role` and
    /// `Permission` are roots.
    pub fn parent(self) -> Option<CoreKind> {
        use CoreKind::*;
        match self {
            ContentEntity | Role | Permission => None,
            ContentType | Comment | Taxonomy | Media | Block | User => Some(ContentEntity),
            Tag | Category => Some(Taxonomy),
            Image | Video | Audio => Some(Media),
            GeneralPermission | SpecificPermission => Some(Permission),
        }
    }

    /// Self followed by every ancestor up to the root.
    pub fn lineage(self) -> impl Iterator<Item = CoreKind> {
        std::iter::successors(Some(self), |k| k.parent())
    }

    pub fn is_a(self, ancestor: CoreKind) -> bool {
        self.lineage().any(|k| k == ancestor)
    }

    /// Whether discovered classes may be anchored at this kind.
    pub fn is_extendable(self) -> bool {
        use CoreKind::*;
        matches!(self, ContentType | Taxonomy | Media | Image | Video | Audio | Block | Comment | User | ContentEntity)
    }

    pub fn from_name(name: &str) -> Option<CoreKind> {
        CoreKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for CoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoreKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CoreKind::from_name(s).ok_or_else(|| ModelError::UnknownCoreKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttributeType {
    Text,
    Integer,
    Float,
    Boolean,
    DateTime,
    Unknown,
}

impl fmt::Display for AttributeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AttributeType::Text => "Text",
            AttributeType::Integer => "Integer",
            AttributeType::Float => "Float",
            AttributeType::Boolean => "Boolean",
            AttributeType::DateTime => "DateTime",
            AttributeType::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    One,
    Many,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    Drupal,
    WordPress,
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Platform::Drupal => "drupal",
            Platform::WordPress => "wordpress",
        })
    }
}

impl FromStr for Platform {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "drupal" => Ok(Platform::Drupal),
            "wordpress" => Ok(Platform::WordPress),
            _ => Err(ModelError::UnknownPlatform(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmsAttribute {
    pub name: String,
    pub ty: AttributeType,
    pub is_identifier: bool,
}

impl CmsAttribute {
    pub fn new(name: impl Into<String>, ty: AttributeType) -> Self {
        CmsAttribute { name: name.into(), ty, is_identifier: false }
    }

    /// The canonical `id: Text` identifier attribute.
    pub fn identifier() -> Self {
        CmsAttribute { name: IDENTIFIER_ATTRIBUTE.to_string(), ty: AttributeType::Text, is_identifier: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmsRelationship {
    pub name: String,
    pub target: String,
    pub multiplicity: Multiplicity,
    pub related_link_template: Option<String>,
}

impl CmsRelationship {
    pub fn new(name: impl Into<String>, target: impl Into<String>, multiplicity: Multiplicity) -> Self {
        CmsRelationship { name: name.into(), target: target.into(), multiplicity, related_link_template: None }
    }

    pub fn with_link_template(mut self, template: impl Into<String>) -> Self {
        self.related_link_template = Some(template.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmsClass {
    pub name: String,
    pub core_kind: CoreKind,
    pub is_core: bool,
    pub endpoint_path: Option<String>,
    pub attributes: Vec<CmsAttribute>,
    pub relationships: Vec<CmsRelationship>,
}

impl CmsClass {
    /// The fixed definition of a core class.
    pub fn core(kind: CoreKind) -> Self {
        let attributes = if kind == CoreKind::ContentEntity {
            vec![CmsAttribute::identifier(), CmsAttribute::new(LAST_UPDATED_ATTRIBUTE, AttributeType::DateTime)]
        } else {
            vec![CmsAttribute::new(CORE_NAME_ATTRIBUTE, AttributeType::Text)]
        };
        CmsClass {
            name: kind.name().to_string(),
            core_kind: kind,
            is_core: true,
            endpoint_path: None,
            attributes,
            relationships: Vec::new(),
        }
        .normalized()
    }

    /// A new extension class owning only the identifier attribute.
    pub fn extension(name: impl Into<String>, core_kind: CoreKind) -> Self {
        CmsClass {
            name: name.into(),
            core_kind,
            is_core: false,
            endpoint_path: None,
            attributes: vec![CmsAttribute::identifier()],
            relationships: Vec::new(),
        }
    }

    pub fn with_endpoint(mut self, path: impl Into<String>) -> Self {
        self.endpoint_path = Some(path.into());
        self
    }

    /// Adds an attribute, replacing any existing one with the same name.
    /// The identifier attribute cannot be replaced.
    pub fn with_attribute(mut self, attribute: CmsAttribute) -> Self {
        if attribute.name == IDENTIFIER_ATTRIBUTE && !self.is_core {
            return self;
        }
        self.attributes.retain(|a| a.name != attribute.name);
        self.attributes.push(attribute);
        self.normalized()
    }

    pub fn with_relationship(mut self, relationship: CmsRelationship) -> Self {
        self.relationships.retain(|r| r.name != relationship.name);
        self.relationships.push(relationship);
        self.normalized()
    }

    pub fn attribute(&self, name: &str) -> Option<&CmsAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn relationship(&self, name: &str) -> Option<&CmsRelationship> {
        self.relationships.iter().find(|r| r.name == name)
    }

    /// Sorts members by name; the canonical form used for comparisons.
    pub fn normalized(mut self) -> Self {
        self.attributes.sort_by(|a, b| a.name.cmp(&b.name));
        self.relationships.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmsModel {
    pub site_name: String,
    pub host: String,
    pub base_path: String,
    pub platform: Platform,
    classes: Vec<CmsClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("class `{0}` already exists in the model")]
    DuplicateClassName(String),
    #[error("class `{class}` cannot extend non-extendable kind {kind}")]
    NonExtendableKind { class: String, kind: CoreKind },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown core kind `{0}`")]
    UnknownCoreKind(String),
    #[error("unknown platform `{0}`")]
    UnknownPlatform(String),
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// The fixed core model: all sixteen core classes, no extensions.
pub fn core_model() -> CmsModel {
    CmsModel {
        site_name: String::new(),
        host: String::new(),
        base_path: String::new(),
        platform: Platform::Drupal,
        classes: CoreKind::ALL.into_iter().map(CmsClass::core).collect(),
    }
}

impl CmsModel {
    /// The core model stamped with site metadata.
    pub fn for_site(
        site_name: impl Into<String>,
        host: impl Into<String>,
        base_path: impl Into<String>,
        platform: Platform,
    ) -> Self {
        CmsModel {
            site_name: site_name.into(),
            host: host.into(),
            base_path: base_path.into(),
            platform,
            ..core_model()
        }
    }

    pub fn classes(&self) -> &[CmsClass] {
        &self.classes
    }

    pub fn core_classes(&self) -> impl Iterator<Item = &CmsClass> {
        self.classes.iter().filter(|c| c.is_core)
    }

    pub fn extensions(&self) -> impl Iterator<Item = &CmsClass> {
        self.classes.iter().filter(|c| !c.is_core)
    }

    pub fn class(&self, name: &str) -> Option<&CmsClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.class(name).is_some()
    }

    /// Returns a new model containing `cls`; `self` is left untouched.
    pub fn add_class(&self, cls: CmsClass) -> Result<CmsModel, ModelError> {
        let mut next = self.clone();
        next.insert_class(cls)?;
        Ok(next)
    }

    pub(crate) fn insert_class(&mut self, cls: CmsClass) -> Result<(), ModelError> {
        if self.contains(&cls.name) {
            return Err(ModelError::DuplicateClassName(cls.name));
        }
        if cls.is_core {
            return Err(ModelError::Invalid(format!(
                "class `{}` is flagged core but is not part of the core model",
                cls.name
            )));
        }
        if !cls.core_kind.is_extendable() {
            return Err(ModelError::NonExtendableKind { class: cls.name, kind: cls.core_kind });
        }
        let cls = cls.normalized();
        let pos = self.classes.iter().position(|c| !c.is_core && c.name > cls.name).unwrap_or(self.classes.len());
        self.classes.insert(pos, cls);
        Ok(())
    }

    pub fn resolve_kind(&self, class_name: &str) -> Result<CoreKind, ModelError> {
        self.class(class_name).map(|c| c.core_kind).ok_or_else(|| ModelError::UnknownClass(class_name.to_string()))
    }

    /// Checks every structural invariant of a model.
    pub fn validate(&self) -> Result<(), ModelError> {
        let invalid = |msg: String| Err(ModelError::Invalid(msg));

        let mut names = BTreeSet::new();
        for cls in &self.classes {
            if cls.name.is_empty() {
                return invalid("class with empty name".into());
            }
            if !names.insert(cls.name.as_str()) {
                return Err(ModelError::DuplicateClassName(cls.name.clone()));
            }
        }

        let core: Vec<&CmsClass> = self.core_classes().collect();
        if core.len() != CoreKind::ALL.len() {
            return invalid(format!("expected {} core classes, found {}", CoreKind::ALL.len(), core.len()));
        }
        for (cls, kind) in core.iter().zip(CoreKind::ALL) {
            if **cls != CmsClass::core(kind) {
                return invalid(format!("core class `{}` was modified", cls.name));
            }
        }

        let mut previous: Option<&str> = None;
        for (i, cls) in self.classes.iter().enumerate() {
            if cls.is_core && i >= CoreKind::ALL.len() {
                return invalid(format!("core class `{}` out of place", cls.name));
            }
            if cls.is_core {
                continue;
            }
            if !cls.core_kind.is_extendable() {
                return Err(ModelError::NonExtendableKind { class: cls.name.clone(), kind: cls.core_kind });
            }
            if let Some(prev) = previous {
                if prev >= cls.name.as_str() {
                    return invalid(format!("extensions not sorted at `{}`", cls.name));
                }
            }
            previous = Some(&cls.name);
            if cls.attribute(IDENTIFIER_ATTRIBUTE) != Some(&CmsAttribute::identifier()) {
                return invalid(format!("class `{}` lacks the `id: Text` identifier", cls.name));
            }
            if cls.attributes.iter().filter(|a| a.is_identifier).count() != 1 {
                return invalid(format!("class `{}` must have exactly one identifier", cls.name));
            }
        }

        for cls in &self.classes {
            let mut attrs = BTreeSet::new();
            for a in &cls.attributes {
                if a.name.is_empty() {
                    return invalid(format!("class `{}` has an attribute with empty name", cls.name));
                }
                if !attrs.insert(a.name.as_str()) {
                    return invalid(format!("class `{}` repeats attribute `{}`", cls.name, a.name));
                }
            }
            let mut rels = BTreeSet::new();
            for r in &cls.relationships {
                if r.name.is_empty() {
                    return invalid(format!("class `{}` has a relationship with empty name", cls.name));
                }
                if !rels.insert(r.name.as_str()) {
                    return invalid(format!("class `{}` repeats relationship `{}`", cls.name, r.name));
                }
                if !names.contains(r.target.as_str()) {
                    return invalid(format!(
                        "relationship `{}.{}` targets unknown class `{}`",
                        cls.name, r.name, r.target
                    ));
                }
            }
            if *cls != cls.clone().normalized() {
                return invalid(format!("members of `{}` are not in canonical order", cls.name));
            }
        }
        Ok(())
    }

    /// Builds a model from already-canonical parts, checking every invariant.
    pub fn from_parts(
        site_name: String,
        host: String,
        base_path: String,
        platform: Platform,
        extensions: Vec<CmsClass>,
    ) -> Result<CmsModel, ModelError> {
        let mut model = CmsModel::for_site(site_name, host, base_path, platform);
        for cls in extensions {
            model.insert_class(cls)?;
        }
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_model_has_sixteen_core_classes() {
        let m = core_model();
        assert_eq!(m.classes().len(), 16);
        assert!(m.classes().iter().all(|c| c.is_core && c.endpoint_path.is_none()));
        m.validate().unwrap();
    }

    #[test]
    fn tag_is_a_taxonomy() {
        assert_eq!(core_model().class("Tag").unwrap().core_kind, CoreKind::Tag);
        assert_eq!(CoreKind::Tag.parent(), Some(CoreKind::Taxonomy));
        assert!(CoreKind::Category.is_a(CoreKind::Taxonomy));
    }

    #[test]
    fn core_model_is_deterministic() {
        assert_eq!(core_model(), core_model());
    }

    #[test]
    fn content_entity_carries_id_and_last_updated() {
        let m = core_model();
        let ce = m.class("ContentEntity").unwrap();
        let id = ce.attribute("id").unwrap();
        assert!(id.is_identifier);
        assert_eq!(ce.attribute("lastUpdated").unwrap().ty, AttributeType::DateTime);
        let role = m.class("Role").unwrap();
        assert_eq!(role.attributes, vec![CmsAttribute::new("name", AttributeType::Text)]);
    }

    #[test]
    fn inheritance_tree() {
        use CoreKind::*;
        for k in [ContentType, Comment, Taxonomy, Media, Block, User] {
            assert_eq!(k.parent(), Some(ContentEntity));
        }
        for k in [Image, Video, Audio] {
            assert_eq!(k.parent(), Some(Media));
        }
        for k in [GeneralPermission, SpecificPermission] {
            assert_eq!(k.parent(), Some(Permission));
        }
        assert_eq!(Role.parent(), None);
        for k in CoreKind::ALL {
            assert!(k.lineage().count() <= 3);
        }
    }

    #[test]
    fn add_class_is_value_semantic() {
        let base = core_model();
        let cls = CmsClass::extension("VideoArticle", CoreKind::ContentType).with_endpoint("/node/video_article");
        let next = base.add_class(cls).unwrap();
        assert_eq!(base.classes().len(), 16);
        assert_eq!(next.classes().len(), 17);
        next.validate().unwrap();
    }

    #[test]
    fn add_class_rejects_duplicates_and_non_extendable_kinds() {
        let base = core_model();
        assert_eq!(
            base.add_class(CmsClass::extension("Tag", CoreKind::Taxonomy)),
            Err(ModelError::DuplicateClassName("Tag".into()))
        );
        assert!(matches!(
            base.add_class(CmsClass::extension("Editor", CoreKind::Role)),
            Err(ModelError::NonExtendableKind { kind: CoreKind::Role, .. })
        ));
        assert!(matches!(
            base.add_class(CmsClass::extension("Flavour", CoreKind::Tag)),
            Err(ModelError::NonExtendableKind { .. })
        ));
    }

    #[test]
    fn resolve_kind_examples() {
        let m = core_model()
            .add_class(CmsClass::extension("VideoArticle", CoreKind::ContentType))
            .unwrap()
            .add_class(CmsClass::extension("AgeRating", CoreKind::Taxonomy))
            .unwrap();
        assert_eq!(m.resolve_kind("VideoArticle"), Ok(CoreKind::ContentType));
        assert_eq!(m.resolve_kind("Category"), Ok(CoreKind::Category));
        assert_eq!(m.resolve_kind("AgeRating"), Ok(CoreKind::Taxonomy));
        assert_eq!(m.resolve_kind("Nope"), Err(ModelError::UnknownClass("Nope".into())));
    }

    #[test]
    fn extensions_stay_sorted() {
        let m = core_model()
            .add_class(CmsClass::extension("Zeta", CoreKind::Block))
            .unwrap()
            .add_class(CmsClass::extension("Alpha", CoreKind::Block))
            .unwrap();
        let names: Vec<_> = m.extensions().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Alpha", "Zeta"]);
        m.validate().unwrap();
    }

    #[test]
    fn validate_rejects_dangling_targets() {
        let m = core_model()
            .add_class(CmsClass::extension("Post", CoreKind::ContentType).with_relationship(CmsRelationship::new(
                "x",
                "Missing",
                Multiplicity::One,
            )))
            .unwrap();
        assert!(matches!(m.validate(), Err(ModelError::Invalid(_))));
    }

    #[test]
    fn identifier_cannot_be_overridden() {
        let cls = CmsClass::extension("Post", CoreKind::ContentType)
            .with_attribute(CmsAttribute::new("id", AttributeType::Integer));
        assert_eq!(cls.attribute("id"), Some(&CmsAttribute::identifier()));
    }

    #[test]
    fn resolve_kind_stable_under_unrelated_additions() {
        let m = core_model().add_class(CmsClass::extension("A", CoreKind::Media)).unwrap();
        let m2 = m.add_class(CmsClass::extension("B", CoreKind::Block)).unwrap();
        for c in m.classes() {
            assert_eq!(m.resolve_kind(&c.name), m2.resolve_kind(&c.name));
        }
    }
}
