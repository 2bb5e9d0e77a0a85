use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cmsforge_bench::largest_entity;
use cmsforge_core::codegen::{generate, GenerateOptions};
use cmsforge_core::diagram::emit_diagram;
use cmsforge_core::discovery::{build_model, drupal::parse_document};
use cmsforge_core::drivers::{query_builder, to_query_string, Filter, Sorter};
use cmsforge_core::metamodel::Platform;
use cmsforge_core::mock::random::{random_model, random_query, rng_for};
use cmsforge_core::mock::{brute_force_query, induce_model, journal_fixture};
use cmsforge_core::model_io::{model_from_json, model_to_json};
use cmsforge_core::serde_json;

const OPENAPI_DOCUMENT: &str = include_str!("../../core/fixtures/videoarticle.openapi.json");

fn query_strings(c: &mut Criterion) {
    let q = query_builder()
        .filter(Filter::eq("status", "published"))
        .filter(Filter::gt("likes", 100))
        .filter(Filter::contains("title", "café & co"))
        .order_by(Sorter::desc("likes"))
        .page(20, 40)
        .build()
        .unwrap();
    c.bench_function("to_query_string/drupal", |b| b.iter(|| to_query_string(Platform::Drupal, black_box(&q))));
    let wp = query_builder()
        .filter(Filter::eq("status", "publish"))
        .filter(Filter::contains("title", "news"))
        .order_by(Sorter::asc("title"))
        .build()
        .unwrap();
    c.bench_function("to_query_string/wordpress", |b| b.iter(|| to_query_string(Platform::WordPress, black_box(&wp))));
}

fn oracle(c: &mut Criterion) {
    let (def, raw) = largest_entity(Platform::Drupal, 3);
    let query = random_query(&def, &raw, &mut rng_for(99));
    c.bench_function("brute_force_query", |b| b.iter(|| brute_force_query(black_box(&def), &raw, &query).unwrap()));
}

fn discovery(c: &mut Criterion) {
    let doc: serde_json::Value = serde_json::from_str(OPENAPI_DOCUMENT).unwrap();
    c.bench_function("parse_document+build_model", |b| {
        b.iter(|| {
            let (site, entities) = parse_document(black_box(&doc)).unwrap();
            build_model(site, Platform::Drupal, entities).unwrap()
        })
    });
}

fn artifacts(c: &mut Criterion) {
    let journal = induce_model(&journal_fixture()).unwrap();
    let opts = GenerateOptions { scenario: true, ..Default::default() };
    c.bench_function("generate/journal", |b| b.iter(|| generate(black_box(&journal), &opts).unwrap()));
    c.bench_function("emit_diagram/journal", |b| b.iter(|| emit_diagram(black_box(&journal))));

    let model = random_model(&mut rng_for(5));
    let text = model_to_json(&model);
    c.bench_function("model_to_json", |b| b.iter(|| model_to_json(black_box(&model))));
    c.bench_function("model_from_json", |b| b.iter(|| model_from_json(black_box(&text)).unwrap()));
}

criterion_group!(benches, query_strings, oracle, discovery, artifacts);
criterion_main!(benches);
