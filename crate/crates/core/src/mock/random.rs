//! Seeded generators of mock sites, queries and models for differential
//! testing. The same seed always yields the same value.

use std::collections::{BTreeMap, BTreeSet};

use heck::ToLowerCamelCase;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::definition::{MockAttribute, MockEntity, MockRelationship, MockSiteDefinition, SeedRecord};
use super::MOCKSITE_VERSION;
use crate::drivers::query_string::{WORDPRESS_RESERVED_PARAMS, WORDPRESS_SEARCH_FIELDS};
use crate::drivers::{query_builder, Filter, FilterOp, Scalar, SearchQuery, Sorter};
use crate::metamodel::{
    AttributeType, CmsAttribute, CmsClass, CmsModel, CmsRelationship, CoreKind, Multiplicity, Platform,
};

pub const MAX_ENTITIES: usize = 15;
pub const MAX_ATTRIBUTES: usize = 10;
pub const MAX_RELATIONSHIPS: usize = 5;
pub const MAX_RECORDS: usize = 200;

const WORDS: &[&str] = &[
    "article", "video", "podcast", "event", "recipe", "review", "gallery", "story", "profile", "venue", "course",
    "lesson", "product", "offer", "banner", "tag", "image", "audio", "page", "post", "topic", "author", "series",
    "season", "episode", "chapter", "album", "track", "city", "region", "news", "report",
];

const FIELD_WORDS: &[&str] = &[
    "title",
    "likes",
    "rating",
    "summary",
    "body",
    "published",
    "featured",
    "views",
    "price",
    "score",
    "subtitle",
    "slug",
    "caption",
    "duration",
    "weight",
    "color",
    "status",
    "headline",
    "location",
    "capacity",
    "starts",
    "ends",
    "level",
    "author_note",
    "sku",
    "label",
    "visible",
    "released",
];

const TEXT_SAMPLES: &[&str] = &[
    "alpha",
    "beta",
    "Gamma ray",
    "delta-4",
    "epsilon",
    "zeta zeta",
    "a&b=c",
    "50% off",
    "naïve café",
    "x/y",
    "plus+sign",
    "",
    "Omega",
    "tab\tstop",
    "quote\"d",
    "100",
];

const DRUPAL_PREFIXES: &[&str] =
    &["node", "node", "node", "taxonomy_term", "taxonomy", "media", "block_content", "comment", "user", "paragraph"];

const WORDPRESS_BUILTINS: &[&str] = &["posts", "pages", "tags", "categories", "users", "media", "comments"];

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn attribute_type(rng: &mut (impl Rng + ?Sized)) -> AttributeType {
    *[
        AttributeType::Text,
        AttributeType::Text,
        AttributeType::Integer,
        AttributeType::Integer,
        AttributeType::Float,
        AttributeType::Boolean,
        AttributeType::DateTime,
        AttributeType::Unknown,
    ]
    .choose(rng)
    .expect("non-empty")
}

fn datetime(rng: &mut (impl Rng + ?Sized)) -> String {
    format!(
        "20{:02}-{:02}-{:02}T{:02}:{:02}:00Z",
        rng.random_range(20..26),
        rng.random_range(1..13),
        rng.random_range(1..29),
        rng.random_range(0..24),
        rng.random_range(0..60)
    )
}

fn sample_value(ty: AttributeType, rng: &mut (impl Rng + ?Sized)) -> Value {
    if rng.random_bool(0.1) {
        return Value::Null;
    }
    match ty {
        AttributeType::Text => json!(TEXT_SAMPLES.choose(rng).expect("non-empty")),
        AttributeType::Integer => json!(rng.random_range(-50..300)),
        AttributeType::Float => json!(f64::from(rng.random_range(-2000..8000)) / 100.0),
        AttributeType::Boolean => json!(rng.random_bool(0.5)),
        AttributeType::DateTime => json!(datetime(rng)),
        AttributeType::Unknown => match rng.random_range(0..3) {
            0 => json!(rng.random_range(0..10)),
            1 => json!(rng.random_bool(0.5)),
            _ => json!(TEXT_SAMPLES.choose(rng).expect("non-empty")),
        },
    }
}

fn entity_names(platform: Platform, rng: &mut impl Rng) -> Vec<(String, bool)> {
    let count = rng.random_range(1..=MAX_ENTITIES);
    let mut names = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let (name, taxonomy) = match platform {
            Platform::Drupal => {
                let prefix = DRUPAL_PREFIXES.choose(rng).expect("non-empty");
                let word = WORDS.choose(rng).expect("non-empty");
                let bundle = if *prefix == "user" && rng.random_bool(0.5) { "user" } else { word };
                (format!("{prefix}--{bundle}"), false)
            }
            Platform::WordPress => {
                if rng.random_bool(0.2) {
                    (WORDPRESS_BUILTINS.choose(rng).expect("non-empty").to_string(), false)
                } else {
                    let word = WORDS.choose(rng).expect("non-empty");
                    let name = if rng.random_bool(0.3) {
                        format!("{word}_{}", rng.random_range(1..4))
                    } else {
                        word.to_string()
                    };
                    (name, rng.random_bool(0.3))
                }
            }
        };
        if names.insert(name.clone()) {
            out.push((name, taxonomy));
        }
    }
    out
}

/// A valid random site definition within the generator limits.
pub fn random_definition(platform: Platform, rng: &mut impl Rng) -> MockSiteDefinition {
    let names = entity_names(platform, rng);
    let raw_names: Vec<String> = names.iter().map(|(n, _)| n.clone()).collect();
    let mut schema = Vec::new();
    for (name, taxonomy) in &names {
        let mut used = BTreeSet::new();
        let mut attributes = Vec::new();
        // WordPress `search` covers title and content; only ever declaring
        // `title` keeps substring matches single-field.
        if platform == Platform::WordPress && rng.random_bool(0.7) {
            used.insert("title".to_string());
            attributes.push(MockAttribute { name: "title".into(), ty: AttributeType::Text });
        }
        for _ in 0..rng.random_range(0..=MAX_ATTRIBUTES) {
            if attributes.len() >= MAX_ATTRIBUTES {
                break;
            }
            let word = FIELD_WORDS.choose(rng).expect("non-empty").to_lower_camel_case();
            if WORDPRESS_SEARCH_FIELDS.contains(&word.as_str()) && platform == Platform::WordPress {
                continue;
            }
            if WORDPRESS_RESERVED_PARAMS.contains(&word.as_str()) || !used.insert(word.clone()) {
                continue;
            }
            attributes.push(MockAttribute { name: word, ty: attribute_type(rng) });
        }
        let mut relationships = Vec::new();
        for _ in 0..rng.random_range(0..=MAX_RELATIONSHIPS) {
            let target = if rng.random_bool(0.1) {
                match platform {
                    Platform::Drupal => format!("node--ghost_{}", rng.random_range(1..4)),
                    Platform::WordPress => format!("ghost_{}", rng.random_range(1..4)),
                }
            } else {
                raw_names.choose(rng).expect("non-empty").clone()
            };
            let rel = format!("rel_{}", WORDS.choose(rng).expect("non-empty")).to_lower_camel_case();
            if !used.insert(rel.clone()) {
                continue;
            }
            let multiplicity = if rng.random_bool(0.5) { Multiplicity::Many } else { Multiplicity::One };
            relationships.push(MockRelationship { name: rel, target, multiplicity });
        }
        schema.push(MockEntity { raw_type_name: name.clone(), taxonomy: *taxonomy, attributes, relationships });
    }

    let mut content = Vec::new();
    let mut ids: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let budget = rng.random_range(0..=MAX_RECORDS);
    for i in 0..budget {
        let entity = schema.choose(rng).expect("non-empty");
        let n = ids.entry(entity.raw_type_name.clone()).or_default().len() + 1;
        let id = match platform {
            Platform::WordPress => n.to_string(),
            Platform::Drupal => format!("{}{n}", ["r", "id-", "x"][i % 3]),
        };
        ids.get_mut(&entity.raw_type_name).expect("just inserted").push(id.clone());
        let mut attributes = BTreeMap::new();
        for a in &entity.attributes {
            if rng.random_bool(0.9) {
                attributes.insert(a.name.clone(), sample_value(a.ty, rng));
            }
        }
        let last_updated = rng.random_bool(0.8).then(|| datetime(rng));
        content.push(SeedRecord {
            id,
            type_name: entity.raw_type_name.clone(),
            last_updated,
            attributes,
            relationships: BTreeMap::new(),
        });
    }
    // Links are drawn once every id exists.
    for rec in &mut content {
        let entity = schema.iter().find(|e| e.raw_type_name == rec.type_name).expect("declared");
        for r in &entity.relationships {
            let Some(pool) = ids.get(&r.target).filter(|p| !p.is_empty()) else { continue };
            let count = match r.multiplicity {
                Multiplicity::One => rng.random_range(0..=1),
                Multiplicity::Many => rng.random_range(0..=3.min(pool.len())),
            };
            let mut picked: Vec<String> = pool.choose_multiple(rng, count).cloned().collect();
            picked.sort();
            rec.relationships.insert(r.name.clone(), picked);
        }
    }

    let def = MockSiteDefinition {
        version: MOCKSITE_VERSION.to_string(),
        site_name: format!("Random {} site", WORDS.choose(rng).expect("non-empty")),
        platform,
        host: format!("{}.example.org", WORDS.choose(rng).expect("non-empty")),
        base_path: ["/api", "", "/cms/v1"].choose(rng).expect("non-empty").to_string(),
        auth: None,
        schema,
        content,
    };
    debug_assert!(def.validate().is_ok(), "{:?}", def.validate());
    def
}

/// A random query over `raw_type_name` that the platform's query string can
/// express. Values are mostly drawn from existing records so filters hit.
pub fn random_query(def: &MockSiteDefinition, raw_type_name: &str, rng: &mut impl Rng) -> SearchQuery {
    let entity = def.entity(raw_type_name).expect("entity in definition");
    let records: Vec<&SeedRecord> = def.records(raw_type_name).collect();
    let mut fields: Vec<(&str, AttributeType)> = vec![("id", AttributeType::Text)];
    fields.extend(entity.attributes.iter().map(|a| (a.name.as_str(), a.ty)));

    let existing = |field: &str, rng: &mut dyn rand::RngCore| -> Option<Value> {
        let rec = records.choose(rng)?;
        if field == "id" {
            return Some(json!(rec.id));
        }
        rec.attributes.get(field).filter(|v| !v.is_null()).cloned()
    };
    let scalar_for = |ty: AttributeType, value: Option<Value>, rng: &mut dyn rand::RngCore| -> Scalar {
        let value = value.unwrap_or_else(|| loop {
            let v = sample_value(ty, rng);
            if !v.is_null() {
                break v;
            }
        });
        match value {
            Value::Bool(b) => Scalar::Boolean(b),
            Value::Number(n) if n.is_i64() => Scalar::Integer(n.as_i64().expect("checked")),
            Value::Number(n) => Scalar::Float(n.as_f64().expect("finite")),
            Value::String(s) => Scalar::Text(s),
            _ => Scalar::Text("alpha".into()),
        }
    };

    let mut builder = query_builder();
    match def.platform {
        Platform::Drupal => {
            for _ in 0..rng.random_range(0..=3) {
                let (field, ty) = *fields.choose(rng).expect("non-empty");
                let op = *[FilterOp::Eq, FilterOp::Ne, FilterOp::Gt, FilterOp::Lt, FilterOp::Contains]
                    .choose(rng)
                    .expect("non-empty");
                let seen = existing(field, rng);
                let filter = match op {
                    FilterOp::Contains => {
                        let text = seen.map(|v| match v {
                            Value::String(s) => s,
                            other => other.to_string(),
                        });
                        let text = text.unwrap_or_else(|| "a".to_string());
                        let cut = text.char_indices().map(|(i, _)| i).find(|_| rng.random_bool(0.5)).unwrap_or(0);
                        let sub: String = text[cut..].chars().take(3).collect();
                        Filter::contains(field, sub)
                    }
                    FilterOp::Gt | FilterOp::Lt => {
                        let value = match ty {
                            AttributeType::Integer | AttributeType::Float => scalar_for(ty, seen, rng),
                            AttributeType::DateTime => match seen {
                                Some(Value::String(s)) => Scalar::Text(s),
                                _ => Scalar::Text(datetime(rng)),
                            },
                            _ => Scalar::Integer(rng.random_range(0..200)),
                        };
                        Filter::new(field, op, value)
                    }
                    _ => Filter::new(field, op, scalar_for(ty, seen, rng)),
                };
                builder = builder.filter(filter);
            }
            let mut sorted = BTreeSet::new();
            for _ in 0..rng.random_range(0..=2) {
                let (field, _) = *fields.choose(rng).expect("non-empty");
                if sorted.insert(field) {
                    builder =
                        builder.order_by(if rng.random_bool(0.5) { Sorter::asc(field) } else { Sorter::desc(field) });
                }
            }
        }
        Platform::WordPress => {
            let eligible: Vec<(&str, AttributeType)> =
                fields.iter().copied().filter(|(f, _)| *f != "id" && !WORDPRESS_RESERVED_PARAMS.contains(f)).collect();
            let mut used = BTreeSet::new();
            for _ in 0..rng.random_range(0..=2) {
                if let Some(&(field, ty)) = eligible.choose(rng) {
                    if used.insert(field) {
                        let seen = existing(field, rng);
                        builder = builder.filter(Filter::eq(field, scalar_for(ty, seen, rng)));
                    }
                }
            }
            if entity.attribute("title").is_some() && rng.random_bool(0.4) {
                let text = match existing("title", rng) {
                    Some(Value::String(s)) => s.chars().take(2).collect(),
                    _ => "a".to_string(),
                };
                builder = builder.filter(Filter::contains("title", text));
            }
            if rng.random_bool(0.6) {
                let (field, _) = *fields.choose(rng).expect("non-empty");
                builder = builder.order_by(if rng.random_bool(0.5) { Sorter::asc(field) } else { Sorter::desc(field) });
            }
        }
    }
    builder.page(rng.random_range(1..=30), rng.random_range(0..=20)).build().expect("generated queries are well formed")
}

/// A random valid model with extensions of every extendable kind.
pub fn random_model(rng: &mut impl Rng) -> CmsModel {
    let extendable: Vec<CoreKind> = CoreKind::ALL.iter().copied().filter(|k| k.is_extendable()).collect();
    let platform = if rng.random_bool(0.5) { Platform::Drupal } else { Platform::WordPress };
    let mut names = BTreeSet::new();
    for _ in 0..rng.random_range(0..=MAX_ENTITIES) {
        let word = WORDS.choose(rng).expect("non-empty");
        let name = heck::ToUpperCamelCase::to_upper_camel_case(*word) + ["", "Item", "X"][rng.random_range(0..3)];
        if CoreKind::from_name(&name).is_none() {
            names.insert(name);
        }
    }
    let all_targets: Vec<String> =
        names.iter().cloned().chain(CoreKind::ALL.iter().map(|k| k.name().to_string())).collect();
    let mut classes = Vec::new();
    for name in &names {
        let kind = *extendable.choose(rng).expect("non-empty");
        let mut cls = CmsClass::extension(name.clone(), kind);
        if rng.random_bool(0.8) {
            cls = cls.with_endpoint(format!("/{}", name.to_lowercase()));
        }
        let mut used = BTreeSet::new();
        used.insert("id".to_string());
        for _ in 0..rng.random_range(0..=MAX_ATTRIBUTES) {
            let attr = FIELD_WORDS.choose(rng).expect("non-empty").to_lower_camel_case();
            if used.insert(attr.clone()) {
                cls = cls.with_attribute(CmsAttribute::new(attr, attribute_type(rng)));
            }
        }
        for _ in 0..rng.random_range(0..=MAX_RELATIONSHIPS) {
            let rel = format!("to_{}", WORDS.choose(rng).expect("non-empty")).to_lower_camel_case();
            if !used.insert(rel.clone()) {
                continue;
            }
            let target = all_targets.choose(rng).expect("non-empty").clone();
            let multiplicity = if rng.random_bool(0.5) { Multiplicity::Many } else { Multiplicity::One };
            let mut r = CmsRelationship::new(rel.clone(), target, multiplicity);
            if rng.random_bool(0.5) {
                r = r.with_link_template(format!("/{}/{{id}}/{rel}", name.to_lowercase()));
            }
            cls = cls.with_relationship(r);
        }
        classes.push(cls.normalized());
    }
    let site = WORDS.choose(rng).expect("non-empty");
    CmsModel::from_parts(
        format!("{site} site \"quoted\" é"),
        format!("{site}.example.net"),
        ["", "/api", "/jsonapi"].choose(rng).expect("non-empty").to_string(),
        platform,
        classes,
    )
    .expect("generated models are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drivers::to_query_string;

    #[test]
    fn definitions_are_valid_and_deterministic() {
        for platform in [Platform::Drupal, Platform::WordPress] {
            for seed in 0..40 {
                let def = random_definition(platform, &mut rng_for(seed));
                def.validate().unwrap();
                assert!(def.schema.len() <= MAX_ENTITIES);
                assert!(def.content.len() <= MAX_RECORDS);
                assert!(def.schema.iter().all(|e| e.attributes.len() <= MAX_ATTRIBUTES));
                assert_eq!(def, random_definition(platform, &mut rng_for(seed)));
                crate::mock::induce_model(&def).unwrap();
            }
        }
    }

    #[test]
    fn queries_are_expressible() {
        for platform in [Platform::Drupal, Platform::WordPress] {
            for seed in 0..40 {
                let mut rng = rng_for(seed);
                let def = random_definition(platform, &mut rng);
                for e in &def.schema {
                    let q = random_query(&def, &e.raw_type_name, &mut rng);
                    to_query_string(platform, &q).unwrap();
                }
            }
        }
    }

    #[test]
    fn models_are_valid() {
        for seed in 0..50 {
            random_model(&mut rng_for(seed)).validate().unwrap();
        }
    }
}
