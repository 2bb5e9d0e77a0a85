//! Reference evaluation of a search query over seed content, by exhaustive
//! filtering and sorting. Deliberately shares no code with the server.
//!
//! Semantics: filters are conjunctive and compare the rendered filter value
//! under the field's declared type (numbers numerically, booleans as
//! `true`/`false`, everything else as text). Null values never satisfy `Eq`,
//! `Gt`, `Lt` or `Contains`; `Ne` is the negation of `Eq`. Sorting puts nulls
//! first when ascending, and ties break by ascending id.

use std::cmp::Ordering;

use serde_json::Value;

use super::{MockError, MockSiteDefinition, SeedRecord};
use crate::drivers::{FilterOp, SearchQuery, SortDirection};
use crate::metamodel::AttributeType;

/// Ids of the records of `raw_type_name` that `query` selects, in order.
pub fn brute_force_query(
    def: &MockSiteDefinition,
    raw_type_name: &str,
    query: &SearchQuery,
) -> Result<Vec<String>, MockError> {
    let entity = def.entity(raw_type_name).ok_or_else(|| MockError::UnknownType(raw_type_name.to_string()))?;
    let type_of = |field: &str| entity.field_type(field).unwrap_or(AttributeType::Unknown);

    let mut hits: Vec<&SeedRecord> = def
        .records(raw_type_name)
        .filter(|rec| {
            query.filters().iter().all(|f| {
                let value = field_value(rec, &f.field);
                let wanted = f.value.to_string();
                let ty = type_of(&f.field);
                match f.op {
                    FilterOp::Eq => value.is_some_and(|v| compare(ty, &v, &wanted) == Some(Ordering::Equal)),
                    FilterOp::Ne => !value.is_some_and(|v| compare(ty, &v, &wanted) == Some(Ordering::Equal)),
                    FilterOp::Gt => value.is_some_and(|v| compare(ty, &v, &wanted) == Some(Ordering::Greater)),
                    FilterOp::Lt => value.is_some_and(|v| compare(ty, &v, &wanted) == Some(Ordering::Less)),
                    FilterOp::Contains => value.is_some_and(|v| render(&v).contains(&wanted)),
                }
            })
        })
        .collect();

    hits.sort_by(|a, b| {
        for s in query.sorters() {
            let ty = type_of(&s.field);
            let ord = match (field_value(a, &s.field), field_value(b, &s.field)) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => compare(ty, &x, &render(&y)).unwrap_or_else(|| render(&x).cmp(&render(&y))),
            };
            let ord = match s.direction {
                SortDirection::Asc => ord,
                SortDirection::Desc => ord.reverse(),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.id.cmp(&b.id)
    });

    let page = query.page();
    Ok(hits.into_iter().skip(page.offset() as usize).take(page.limit() as usize).map(|r| r.id.clone()).collect())
}

fn field_value(rec: &SeedRecord, field: &str) -> Option<Value> {
    if field == "id" {
        return Some(Value::String(rec.id.clone()));
    }
    rec.attributes.get(field).filter(|v| !v.is_null()).cloned()
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Orders a stored value against a rendered filter value; `None` when the
/// rendering does not parse as the declared type.
fn compare(ty: AttributeType, stored: &Value, wanted: &str) -> Option<Ordering> {
    match ty {
        AttributeType::Integer | AttributeType::Float => {
            if let (Some(a), Ok(b)) = (stored.as_i64(), wanted.parse::<i64>()) {
                return Some(a.cmp(&b));
            }
            let b: f64 = wanted.parse().ok().filter(|b: &f64| b.is_finite())?;
            stored.as_f64()?.partial_cmp(&b)
        }
        AttributeType::Boolean => {
            let b = match wanted {
                "true" => true,
                "false" => false,
                _ => return None,
            };
            Some(stored.as_bool()?.cmp(&b))
        }
        _ => Some(render(stored).as_str().cmp(wanted)),
    }
}
