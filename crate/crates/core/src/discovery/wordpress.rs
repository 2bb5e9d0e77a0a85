//! WordPress discovery: the `/wp-json` route index, the taxonomy registry
//! and one `OPTIONS` schema per collection route.
//!
//! Route schemas describe attributes under `schema.properties` (or, for
//! routes without a schema, the `args` of the endpoint accepting `POST`) and
//! relationships under `schema.links`:
//!
//! ```json
//! {"rel": "author", "href": "/wp-json/wp/v2/posts/{id}/author", "target": "users", "multiple": false}
//! ```

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::Value;

use super::infer::{infer_attribute_type, RawRelationship};
use super::{fetch_json, DiscoveryError, RawEntity, SiteInfo};
use crate::http::HttpClient;
use crate::metamodel::{Multiplicity, IDENTIFIER_ATTRIBUTE};

pub const INDEX_PATH: &str = "/wp-json";
pub const NAMESPACE: &str = "/wp/v2";
pub const TAXONOMIES_ROUTE: &str = "/wp/v2/taxonomies";
/// Field carrying the last-update time of a record.
pub const MODIFIED_FIELD: &str = "modified";
/// Maximum number of schema requests in flight.
pub const SCHEMA_FETCH_PARALLELISM: usize = 4;

/// Routes under the namespace that do not expose content entities.
pub const NON_ENTITY_ROUTES: &[&str] = &[
    "types",
    "taxonomies",
    "statuses",
    "settings",
    "search",
    "themes",
    "plugins",
    "block-types",
    "block-renderer",
    "block-directory",
    "sidebars",
    "widgets",
    "widget-types",
    "menu-locations",
];

/// Collection endpoint of a route base, relative to the site root.
pub fn endpoint_for(rest_base: &str) -> String {
    format!("{INDEX_PATH}{NAMESPACE}/{rest_base}")
}

/// Collection route bases listed in a route index, sorted.
pub fn collection_routes(index: &Value) -> Result<Vec<String>, DiscoveryError> {
    let routes = index
        .get("routes")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed(INDEX_PATH, "missing `routes` object"))?;
    let prefix = format!("{NAMESPACE}/");
    let mut bases: Vec<String> = routes
        .keys()
        .filter_map(|route| route.strip_prefix(&prefix))
        .filter(|rest| {
            !rest.is_empty()
                && rest.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
                && !NON_ENTITY_ROUTES.contains(rest)
        })
        .map(str::to_string)
        .collect();
    bases.sort();
    bases.dedup();
    Ok(bases)
}

fn malformed(path: &str, message: &str) -> DiscoveryError {
    DiscoveryError::MalformedDiscoveryDocument { path: path.to_string(), message: message.to_string() }
}

/// Site metadata from the index: `name` and the `url` the site lives at.
pub fn site_info(index: &Value) -> Result<SiteInfo, DiscoveryError> {
    let site_name = index.get("name").and_then(Value::as_str).unwrap_or_default().to_string();
    let (host, base_path) = match index.get("url").and_then(Value::as_str) {
        None => (String::new(), String::new()),
        Some(raw) => {
            let url = url::Url::parse(raw).map_err(|e| malformed(&format!("{INDEX_PATH}#url"), &e.to_string()))?;
            let mut host = url.host_str().unwrap_or_default().to_string();
            if let Some(port) = url.port() {
                host = format!("{host}:{port}");
            }
            (host, url.path().trim_end_matches('/').to_string())
        }
    };
    Ok(SiteInfo { site_name, host, base_path })
}

/// Route bases registered as taxonomies (`{"category": {"rest_base": "categories"}, ...}`).
pub fn taxonomy_bases(registry: &Value) -> BTreeSet<String> {
    registry
        .as_object()
        .map(|taxonomies| {
            taxonomies
                .iter()
                .map(|(slug, t)| match t.get("rest_base") {
                    Some(Value::String(base)) => base.clone(),
                    _ => slug.clone(),
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Parses the `links` array of a route schema.
pub fn schema_links(
    entity: &str,
    links: &Value,
    taxonomies: &BTreeSet<String>,
) -> Result<Vec<RawRelationship>, DiscoveryError> {
    let malformed = |rel: &str, message: &str| DiscoveryError::MalformedRelationshipEntry {
        entity: entity.to_string(),
        relationship: rel.to_string(),
        message: message.to_string(),
    };
    let links = match links {
        Value::Null => return Ok(Vec::new()),
        Value::Array(links) => links,
        _ => return Err(malformed("", "`links` is not an array")),
    };
    let mut out: Vec<RawRelationship> = Vec::new();
    for link in links {
        let rel = link.get("rel").and_then(Value::as_str).ok_or_else(|| malformed("", "link without `rel`"))?;
        // Action links (`https://api.w.org/action-publish`) are not relationships.
        if rel.contains(':') || rel.contains('/') {
            continue;
        }
        let target = link
            .get("target")
            .and_then(Value::as_str)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| malformed(rel, "link without `target`"))?;
        let multiplicity = match link.get("multiple") {
            None | Some(Value::Bool(false)) => Multiplicity::One,
            Some(Value::Bool(true)) => Multiplicity::Many,
            Some(_) => return Err(malformed(rel, "`multiple` is not a boolean")),
        };
        if out.iter().any(|r| r.name == rel) {
            return Err(malformed(rel, "relationship declared twice"));
        }
        out.push(RawRelationship {
            name: rel.to_string(),
            target_raw: target.to_string(),
            target_is_taxonomy: taxonomies.contains(target),
            multiplicity,
            link: link.get("href").and_then(Value::as_str).map(str::to_string),
        });
    }
    Ok(out)
}

/// Turns one route's `OPTIONS` answer into a raw entity.
pub fn parse_route_schema(
    rest_base: &str,
    answer: &Value,
    taxonomies: &BTreeSet<String>,
) -> Result<RawEntity, DiscoveryError> {
    let path = endpoint_for(rest_base);
    let attributes: Vec<_> = match answer.pointer("/schema/properties") {
        Some(Value::Object(props)) => props
            .iter()
            .filter(|(name, _)| !name.is_empty() && *name != MODIFIED_FIELD)
            .map(|(name, ty)| (name.clone(), infer_attribute_type(ty)))
            .collect(),
        Some(_) => return Err(malformed(&format!("{path}#schema/properties"), "expected an object")),
        None => post_args(answer),
    };
    let links = answer.pointer("/schema/links").unwrap_or(&Value::Null);
    Ok(RawEntity {
        raw_type_name: rest_base.to_string(),
        is_taxonomy: taxonomies.contains(rest_base),
        endpoint_path: path,
        attributes: attributes.into_iter().filter(|(n, _)| n != IDENTIFIER_ATTRIBUTE).collect(),
        relationships: schema_links(rest_base, links, taxonomies)?,
    })
}

fn post_args(answer: &Value) -> Vec<(String, crate::metamodel::AttributeType)> {
    let endpoints = answer.get("endpoints").and_then(Value::as_array).map(Vec::as_slice).unwrap_or_default();
    let accepts_post = |e: &&Value| {
        e.get("methods").and_then(Value::as_array).is_some_and(|m| m.iter().any(|m| m.as_str() == Some("POST")))
    };
    endpoints
        .iter()
        .find(accepts_post)
        .and_then(|e| e.get("args"))
        .and_then(Value::as_object)
        .map(|args| args.iter().map(|(name, spec)| (name.clone(), infer_attribute_type(spec))).collect())
        .unwrap_or_default()
}

pub(crate) fn fetch(client: &HttpClient, base: &str) -> Result<(SiteInfo, Vec<RawEntity>), DiscoveryError> {
    let index = fetch_json(client, &format!("{base}{INDEX_PATH}"), INDEX_PATH, false)?;
    let site = site_info(&index)?;
    let routes = collection_routes(&index)?;
    let registry_path = format!("{INDEX_PATH}{TAXONOMIES_ROUTE}");
    let taxonomies = match fetch_json(client, &format!("{base}{registry_path}"), &registry_path, false) {
        Ok(registry) => taxonomy_bases(&registry),
        Err(DiscoveryError::MalformedDiscoveryDocument { .. }) => BTreeSet::new(),
        Err(e) => return Err(e),
    };

    // Bounded pool; each result lands at its route's index so completion
    // order is irrelevant.
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<RawEntity, DiscoveryError>>>> =
        Mutex::new((0..routes.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..SCHEMA_FETCH_PARALLELISM.min(routes.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(rest_base) = routes.get(i) else { break };
                let path = endpoint_for(rest_base);
                let entity = fetch_json(client, &format!("{base}{path}"), &path, true)
                    .and_then(|answer| parse_route_schema(rest_base, &answer, &taxonomies));
                results.lock().expect("result slots poisoned")[i] = Some(entity);
            });
        }
    });
    let entities = results
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|r| r.expect("every route fetched"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((site, entities))
}
