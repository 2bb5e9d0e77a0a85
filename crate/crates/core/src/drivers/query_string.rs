//! Bit-exact translation of a [`SearchQuery`] into each platform's query
//! string.
//!
//! Drupal (JSON:API):
//! `filter[i][condition][path]=f&filter[i][condition][operator]=op&filter[i][condition][value]=v`
//! per filter, `sort=a,-b`, then `page[limit]=n&page[offset]=m`.
//!
//! WordPress: `field=v` for equality, `search=v` for a substring match on
//! `title` or `content`, `orderby=f&order=asc|desc` for a single sorter, then
//! `per_page=n&offset=m`.
//!
//! Field names and values are percent-encoded (everything but unreserved
//! characters); the structural brackets and operators are not.

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use super::query::{FilterOp, QueryError, SearchQuery, SortDirection};
use crate::metamodel::Platform;

pub const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

/// Query parameters with a fixed meaning on WordPress collection routes.
pub const WORDPRESS_RESERVED_PARAMS: &[&str] = &["search", "orderby", "order", "per_page", "offset", "page"];
/// Fields a WordPress `search` matches against.
pub const WORDPRESS_SEARCH_FIELDS: &[&str] = &["title", "content"];

pub fn encode_component(s: &str) -> String {
    utf8_percent_encode(s, COMPONENT).to_string()
}

pub fn drupal_operator(op: FilterOp) -> &'static str {
    match op {
        FilterOp::Eq => "=",
        FilterOp::Ne => "<>",
        FilterOp::Gt => ">",
        FilterOp::Lt => "<",
        FilterOp::Contains => "CONTAINS",
    }
}

pub fn to_query_string(platform: Platform, query: &SearchQuery) -> Result<String, QueryError> {
    match platform {
        Platform::Drupal => Ok(drupal(query)),
        Platform::WordPress => wordpress(query),
    }
}

fn drupal(query: &SearchQuery) -> String {
    let mut parts = Vec::new();
    for (i, f) in query.filters().iter().enumerate() {
        parts.push(format!("filter[{i}][condition][path]={}", encode_component(&f.field)));
        parts.push(format!("filter[{i}][condition][operator]={}", drupal_operator(f.op)));
        parts.push(format!("filter[{i}][condition][value]={}", encode_component(&f.value.to_string())));
    }
    if !query.sorters().is_empty() {
        let keys: Vec<String> = query
            .sorters()
            .iter()
            .map(|s| match s.direction {
                SortDirection::Asc => encode_component(&s.field),
                SortDirection::Desc => format!("-{}", encode_component(&s.field)),
            })
            .collect();
        parts.push(format!("sort={}", keys.join(",")));
    }
    let page = query.page();
    parts.push(format!("page[limit]={}", page.limit()));
    parts.push(format!("page[offset]={}", page.offset()));
    parts.join("&")
}

fn wordpress(query: &SearchQuery) -> Result<String, QueryError> {
    let mut parts = Vec::new();
    let mut searched = false;
    for f in query.filters() {
        match f.op {
            FilterOp::Eq if WORDPRESS_RESERVED_PARAMS.contains(&f.field.as_str()) => {
                return Err(QueryError::UnsupportedFilter(format!("`{}` is a reserved parameter", f.field)));
            }
            FilterOp::Eq => {
                parts.push(format!("{}={}", encode_component(&f.field), encode_component(&f.value.to_string())));
            }
            FilterOp::Contains if WORDPRESS_SEARCH_FIELDS.contains(&f.field.as_str()) => {
                if searched {
                    return Err(QueryError::UnsupportedFilter("only one substring match per query".into()));
                }
                searched = true;
                parts.push(format!("search={}", encode_component(&f.value.to_string())));
            }
            FilterOp::Contains => {
                return Err(QueryError::UnsupportedFilter(format!("substring match on `{}`", f.field)));
            }
            op => {
                return Err(QueryError::UnsupportedFilter(format!("{op:?} on `{}`", f.field)));
            }
        }
    }
    match query.sorters() {
        [] => {}
        [s] => {
            let order = match s.direction {
                SortDirection::Asc => "asc",
                SortDirection::Desc => "desc",
            };
            parts.push(format!("orderby={}&order={order}", encode_component(&s.field)));
        }
        more => {
            return Err(QueryError::UnsupportedSort(format!("{} sort keys, at most one supported", more.len())));
        }
    }
    let page = query.page();
    parts.push(format!("per_page={}&offset={}", page.limit(), page.offset()));
    Ok(parts.join("&"))
}
