use cmsforge_core::drivers::{
    query_builder, to_query_string, Filter, FilterOp, QueryError, Scalar, SearchQuery, Sorter,
};
use cmsforge_core::metamodel::Platform;
use serde_json::Value;

const GOLDEN: &str = include_str!("../fixtures/query_strings.json");

fn scalar(v: &Value) -> Scalar {
    match v {
        Value::String(s) => Scalar::Text(s.clone()),
        Value::Bool(b) => Scalar::Boolean(*b),
        Value::Number(n) if n.is_i64() => Scalar::Integer(n.as_i64().unwrap()),
        Value::Number(n) => Scalar::Float(n.as_f64().unwrap()),
        other => panic!("not a scalar: {other}"),
    }
}

fn query(spec: &Value) -> SearchQuery {
    let mut b = query_builder();
    for f in spec["filters"].as_array().into_iter().flatten() {
        let op = match f[1].as_str().unwrap() {
            "eq" => FilterOp::Eq,
            "ne" => FilterOp::Ne,
            "gt" => FilterOp::Gt,
            "lt" => FilterOp::Lt,
            "contains" => FilterOp::Contains,
            other => panic!("operator {other}"),
        };
        b = b.filter(Filter::new(f[0].as_str().unwrap(), op, scalar(&f[2])));
    }
    for s in spec["sort"].as_array().into_iter().flatten() {
        let field = s[0].as_str().unwrap();
        b = b.order_by(if s[1] == "asc" { Sorter::asc(field) } else { Sorter::desc(field) });
    }
    if let Some(p) = spec["page"].as_array() {
        b = b.page(p[0].as_u64().unwrap() as u32, p[1].as_u64().unwrap() as u32);
    }
    b.build().unwrap()
}

#[test]
fn golden_query_strings() {
    let cases: Vec<Value> = serde_json::from_str(GOLDEN).unwrap();
    assert!(cases.len() >= 20);
    for case in &cases {
        let platform: Platform = case["platform"].as_str().unwrap().parse().unwrap();
        let got = to_query_string(platform, &query(&case["query"]));
        match (&case["expected"], &case["error"]) {
            (Value::String(expected), _) => assert_eq!(&got.unwrap(), expected, "{case}"),
            (_, Value::String(kind)) => {
                let ok = matches!(
                    (kind.as_str(), &got),
                    ("UnsupportedFilter", Err(QueryError::UnsupportedFilter(_)))
                        | ("UnsupportedSort", Err(QueryError::UnsupportedSort(_)))
                );
                assert!(ok, "{case} gave {got:?}");
            }
            _ => panic!("case without expectation: {case}"),
        }
    }
}
