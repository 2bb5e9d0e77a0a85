//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use cmsforge_core::codegen::{generate, GenerateOptions, MANIFEST_FILE};
use cmsforge_core::diagram::emit_diagram;
use cmsforge_core::discovery::{build_model, discover, drupal::parse_document};
use cmsforge_core::drivers::{
    connect, query_builder, to_query_string, DriverError, Filter, FilterOp, QueryError, Scalar, SearchQuery,
    SiteCredentials, Sorter,
};
use cmsforge_core::metamodel::{AttributeType, CoreKind, Multiplicity, Platform};
use cmsforge_core::mock::random::{random_definition, random_model, random_query, rng_for};
use cmsforge_core::mock::{brute_force_query, endpoint_path, induce_model, journal_fixture, serve};
use cmsforge_core::model_io::{load_model, model_from_json, model_to_json, save_model};
use cmsforge_core::serde_json::{self, Value};
use common::*;
use rand::Rng;

const ROUND_TRIP_SITES_PER_PLATFORM: u64 = 60;
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(60);
const QUERY_TRIALS_PER_PLATFORM: usize = 500;
const QUERIES_PER_SITE: usize = 10;
const QUERY_LIMIT: Duration = Duration::from_secs(120);
const SCENARIO_LIMIT: Duration = Duration::from_secs(10);
const MIN_GOLDEN_QUERY_STRINGS: usize = 20;
const RANDOM_MODELS: u64 = 100;

const OPENAPI_DOCUMENT: &str = include_str!("../../core/fixtures/videoarticle.openapi.json");
const OPENAPI_GOLDEN: &str = include_str!("../../core/fixtures/videoarticle.cmsmodel.json");
const QUERY_STRINGS: &str = include_str!("../../core/fixtures/query_strings.json");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(took)
}

fn round_trip_fidelity() -> Outcome {
    let started = Instant::now();
    let mut sites = 0;
    for platform in [Platform::Drupal, Platform::WordPress] {
        for seed in 0..ROUND_TRIP_SITES_PER_PLATFORM {
            let def = random_definition(platform, &mut rng_for(seed));
            let server = serve(def.clone(), 0).map_err(|e| e.to_string())?;
            let report = discover(&server.base_url(), &SiteCredentials::none(), platform)
                .map_err(|e| format!("{platform} seed {seed}: {e}"))?;
            let expected = induce_model(&def).map_err(|e| e.to_string())?;
            ensure(report.model == expected, || format!("{platform} seed {seed}: discovered model differs"))?;
            sites += 1;
        }
    }
    let took = within(ROUND_TRIP_LIMIT, started)?;
    Ok(format!("{sites} sites over both platforms match exactly in {took:.1?}"))
}

fn query_trials(platform: Platform) -> Result<usize, String> {
    let mut trials = 0;
    let mut seed = 10_000;
    while trials < QUERY_TRIALS_PER_PLATFORM {
        seed += 1;
        let mut rng = rng_for(seed);
        let def = random_definition(platform, &mut rng);
        let model = Arc::new(induce_model(&def).map_err(|e| e.to_string())?);
        // Searchable entities: extensions with an endpoint, plus core User
        // through the driver's built-in user endpoint.
        let user_endpoint = match platform {
            Platform::Drupal => endpoint_path(platform, "user--user"),
            Platform::WordPress => endpoint_path(platform, "users"),
        };
        let targets: Vec<_> = def
            .schema
            .iter()
            .filter(|e| def.records(&e.raw_type_name).next().is_some())
            .filter_map(|e| {
                let endpoint = endpoint_path(platform, &e.raw_type_name);
                let cls = model.extensions().find(|c| c.endpoint_path.as_deref() == Some(endpoint.as_str()));
                let cls = cls.or_else(|| model.class("User").filter(|_| endpoint == user_endpoint))?;
                Some((e.raw_type_name.clone(), cls))
            })
            .collect();
        if targets.is_empty() {
            continue;
        }
        let server = serve(def.clone(), 0).map_err(|e| e.to_string())?;
        let driver = connect(model.clone(), &server.base_url(), SiteCredentials::none()).map_err(|e| e.to_string())?;
        for _ in 0..QUERIES_PER_SITE {
            let (raw, cls) = &targets[rng.random_range(0..targets.len())];
            let query = random_query(&def, raw, &mut rng);
            let got: Vec<String> = driver
                .search(cls, &query)
                .map_err(|e| format!("{platform} seed {seed}: {e}"))?
                .into_iter()
                .map(|r| r.id)
                .collect();
            let want = brute_force_query(&def, raw, &query).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{platform} seed {seed} {query:?}: got {got:?}, oracle {want:?}"))?;
            trials += 1;
        }
    }
    Ok(trials)
}

fn unsupported_wordpress_constructs() -> Result<usize, String> {
    let server = serve(journal_fixture(), 0).map_err(|e| e.to_string())?;
    let mut model = induce_model(&journal_fixture()).map_err(|e| e.to_string())?;
    model.platform = Platform::WordPress;
    let model = Arc::new(model);
    let driver = connect(model.clone(), &server.base_url(), SiteCredentials::none()).map_err(|e| e.to_string())?;
    let cls = model.class("VideoArticle").ok_or("no VideoArticle")?;
    let cases: Vec<(SearchQuery, bool)> = vec![
        (query_builder().filter(Filter::gt("likes", 1)).build().unwrap(), true),
        (query_builder().filter(Filter::lt("likes", 1)).build().unwrap(), true),
        (query_builder().filter(Filter::ne("title", "x")).build().unwrap(), true),
        (query_builder().filter(Filter::contains("body", "x")).build().unwrap(), true),
        (
            query_builder()
                .filter(Filter::contains("title", "a"))
                .filter(Filter::contains("title", "b"))
                .build()
                .unwrap(),
            true,
        ),
        (query_builder().order_by(Sorter::asc("title")).order_by(Sorter::desc("likes")).build().unwrap(), false),
    ];
    let n = cases.len();
    server.clear_log();
    for (query, is_filter) in cases {
        let direct = to_query_string(Platform::WordPress, &query);
        let via_driver = driver.search(cls, &query);
        let ok = if is_filter {
            matches!(direct, Err(QueryError::UnsupportedFilter(_)))
                && matches!(via_driver, Err(DriverError::Query(QueryError::UnsupportedFilter(_))))
        } else {
            matches!(direct, Err(QueryError::UnsupportedSort(_)))
                && matches!(via_driver, Err(DriverError::Query(QueryError::UnsupportedSort(_))))
        };
        ensure(ok, || format!("{query:?} was not rejected: {direct:?} / {via_driver:?}"))?;
    }
    ensure(server.request_log().is_empty(), || "rejected queries reached the server".into())?;
    Ok(n)
}

fn query_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let drupal = query_trials(Platform::Drupal)?;
    let wordpress = query_trials(Platform::WordPress)?;
    let rejected = unsupported_wordpress_constructs()?;
    let took = within(QUERY_LIMIT, started)?;
    Ok(format!(
        "{drupal} Drupal + {wordpress} WordPress trials equal the oracle, {rejected} unsupported constructs rejected, {took:.1?}"
    ))
}

fn openapi_conformance() -> Outcome {
    let doc: Value = serde_json::from_str(OPENAPI_DOCUMENT).map_err(|e| e.to_string())?;
    let (site, entities) = parse_document(&doc).map_err(|e| e.to_string())?;
    let report = build_model(site, Platform::Drupal, entities).map_err(|e| e.to_string())?;
    let cls = report.model.class("Videoarticle").ok_or("no class Videoarticle")?;
    ensure(cls.core_kind == CoreKind::ContentType, || format!("core kind {:?}", cls.core_kind))?;
    ensure(cls.attribute("title").map(|a| a.ty) == Some(AttributeType::Text), || "title is not Text".into())?;
    ensure(cls.relationships.iter().any(|r| r.target == "Category" && r.multiplicity == Multiplicity::Many), || {
        "no Many relationship to Category".into()
    })?;
    ensure(model_to_json(&report.model) == OPENAPI_GOLDEN, || "differs from golden file".into())?;
    Ok("Videoarticle extends ContentType, title: Text, Many to Category, golden bytes equal".into())
}

fn journal_scenario() -> Outcome {
    let started = Instant::now();
    let def = journal_fixture();
    let server = serve(def.clone(), 0).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;

    // discover | generate through the command line.
    let model_file = dir.path().join("journal.cmsmodel.json");
    let out = run(&["discover", "--url", &server.base_url(), "--platform", "drupal", "--out", path_str(&model_file)]);
    ensure(code(&out) == 0, || format!("discover exited {}: {}", code(&out), stderr(&out)))?;
    let client_dir = dir.path().join("journal-client");
    let out = run(&[
        "generate",
        "--model",
        path_str(&model_file),
        "--out",
        path_str(&client_dir),
        "--scenario",
        "--crate-name",
        "journal-client",
        "--core-path",
        "../core",
    ]);
    ensure(code(&out) == 0, || format!("generate exited {}: {}", code(&out), stderr(&out)))?;
    let generated = std::fs::read_to_string(client_dir.join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    let compiled = std::fs::read_to_string(journal_client_dir().join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    ensure(generated == compiled, || "generated client differs from the compiled journal-client crate".into())?;

    // Run the generated app.
    let site = journal_client::JournalSiteManager::get_instance_at(&server.base_url(), SiteCredentials::none())
        .map_err(|e| e.to_string())?;
    let app = journal_client::MobileApp::new(site.clone());
    let feed = app.get_video_feed().map_err(|e| e.to_string())?;
    ensure(!feed.is_empty(), || "empty video feed".into())?;
    let outcome = app.main().map_err(|e| e.to_string())?;
    ensure(outcome.likes_after == outcome.likes_before + 1, || format!("{outcome:?}"))?;

    let model = Arc::new(load_model(&model_file).map_err(|e| e.to_string())?);
    let independent = connect(model.clone(), &server.base_url(), SiteCredentials::none()).map_err(|e| e.to_string())?;
    let refetched = independent
        .get_by_id(model.class("VideoArticle").ok_or("no VideoArticle")?, &outcome.liked_video_id)
        .map_err(|e| e.to_string())?;
    ensure(refetched.integer("likes") == Some(outcome.likes_after), || {
        format!("re-fetched likes {:?}, expected {}", refetched.integer("likes"), outcome.likes_after)
    })?;

    let video = site.get_video_article_by_id(&outcome.liked_video_id).map_err(|e| e.to_string())?;
    server.clear_log();
    let news = app.get_related_news(&video).map_err(|e| e.to_string())?;
    let requests = server.request_log().len();
    ensure(requests == 1, || format!("navigation issued {requests} requests"))?;
    ensure(!news.is_empty(), || "no related news".into())?;
    ensure(news.iter().all(|n| n.resource().type_name == "NewsArticle"), || {
        "related items are not NewsArticle".into()
    })?;

    let took = within(SCENARIO_LIMIT, started)?;
    Ok(format!(
        "feed of {}, like on {} persisted ({} -> {}), {} related news in 1 request, {took:.1?}",
        outcome.feed_len,
        outcome.liked_video_id,
        outcome.likes_before,
        outcome.likes_after,
        news.len()
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut checked = 0;
    let wp_def = random_definition(Platform::WordPress, &mut rng_for(7));
    for (def, platform) in [(journal_fixture(), Platform::Drupal), (wp_def, Platform::WordPress)] {
        let server = serve(def, 0).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for i in 0..2 {
            let file = dir.path().join(format!("{platform}-{i}.json"));
            let out = run(&[
                "discover",
                "--url",
                &server.base_url(),
                "--platform",
                &platform.to_string(),
                "--out",
                path_str(&file),
            ]);
            ensure(code(&out) == 0, || stderr(&out))?;
            outputs.push(std::fs::read(&file).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || format!("{platform} discovery output differs"))?;
        checked += 1;
    }

    let mut models = vec![induce_model(&journal_fixture()).map_err(|e| e.to_string())?];
    models.extend((0..5).map(|s| random_model(&mut rng_for(s))));
    for (i, model) in models.iter().enumerate() {
        let (a, b) = (dir.path().join(format!("m{i}a.json")), dir.path().join(format!("m{i}b.json")));
        save_model(model, &a).map_err(|e| e.to_string())?;
        save_model(model, &b).map_err(|e| e.to_string())?;
        ensure(std::fs::read(&a).ok() == std::fs::read(&b).ok(), || format!("save_model differs for model {i}"))?;
        ensure(emit_diagram(model) == emit_diagram(model), || format!("emit_diagram differs for model {i}"))?;
        let opts = GenerateOptions { scenario: i == 0, ..Default::default() };
        match (generate(model, &opts), generate(model, &opts)) {
            (Ok(p), Ok(q)) => ensure(p.manifest() == q.manifest(), || format!("manifest differs for model {i}"))?,
            (Err(e), Err(f)) => ensure(e == f, || format!("generate errors differ for model {i}"))?,
            _ => return Err(format!("generate is not deterministic for model {i}")),
        }
        checked += 1;
    }
    // The command line too.
    let model_file = dir.path().join("m0a.json");
    let mut manifests = Vec::new();
    for i in 0..2 {
        let out_dir = dir.path().join(format!("gen{i}"));
        let out = run(&["generate", "--model", path_str(&model_file), "--out", path_str(&out_dir), "--scenario"]);
        ensure(code(&out) == 0, || stderr(&out))?;
        manifests.push(std::fs::read_to_string(out_dir.join(MANIFEST_FILE)).map_err(|e| e.to_string())?);
    }
    ensure(manifests[0] == manifests[1], || "CLI generate manifests differ".into())?;
    Ok(format!(
        "{checked} inputs byte-identical across two runs (discover, generate manifest, save_model, emit_diagram)"
    ))
}

fn scalar(v: &Value) -> Scalar {
    match v {
        Value::String(s) => Scalar::Text(s.clone()),
        Value::Bool(b) => Scalar::Boolean(*b),
        Value::Number(n) if n.is_i64() => Scalar::Integer(n.as_i64().unwrap()),
        Value::Number(n) => Scalar::Float(n.as_f64().unwrap()),
        other => panic!("not a scalar: {other}"),
    }
}

fn golden_query(spec: &Value) -> Result<SearchQuery, String> {
    let mut b = query_builder();
    for f in spec["filters"].as_array().into_iter().flatten() {
        let op = match f[1].as_str() {
            Some("eq") => FilterOp::Eq,
            Some("ne") => FilterOp::Ne,
            Some("gt") => FilterOp::Gt,
            Some("lt") => FilterOp::Lt,
            Some("contains") => FilterOp::Contains,
            other => return Err(format!("operator {other:?}")),
        };
        b = b.filter(Filter::new(f[0].as_str().unwrap_or_default(), op, scalar(&f[2])));
    }
    for s in spec["sort"].as_array().into_iter().flatten() {
        let field = s[0].as_str().unwrap_or_default();
        b = b.order_by(if s[1] == "asc" { Sorter::asc(field) } else { Sorter::desc(field) });
    }
    if let Some(p) = spec["page"].as_array() {
        b = b.page(p[0].as_u64().unwrap_or(0) as u32, p[1].as_u64().unwrap_or(0) as u32);
    }
    b.build().map_err(|e| e.to_string())
}

fn query_string_goldens() -> Outcome {
    let cases: Vec<Value> = serde_json::from_str(QUERY_STRINGS).map_err(|e| e.to_string())?;
    let mut drupal_ops = std::collections::BTreeSet::new();
    let mut empty_drupal = false;
    let mut positive = 0;
    for case in &cases {
        let platform: Platform = case["platform"].as_str().unwrap_or_default().parse().map_err(|e| format!("{e}"))?;
        let query = golden_query(&case["query"])?;
        if platform == Platform::Drupal {
            drupal_ops.extend(query.filters().iter().map(|f| format!("{:?}", f.op)));
            empty_drupal |= case["query"].as_object().is_some_and(|o| o.is_empty());
        }
        let got = to_query_string(platform, &query);
        match (&case["expected"], &case["error"]) {
            (Value::String(expected), _) => {
                ensure(got.as_ref() == Ok(expected), || format!("{case}: got {got:?}"))?;
                positive += 1;
            }
            (_, Value::String(kind)) => ensure(
                matches!(
                    (kind.as_str(), &got),
                    ("UnsupportedFilter", Err(QueryError::UnsupportedFilter(_)))
                        | ("UnsupportedSort", Err(QueryError::UnsupportedSort(_)))
                ),
                || format!("{case}: got {got:?}"),
            )?,
            _ => return Err(format!("case without expectation: {case}")),
        }
    }
    ensure(positive >= MIN_GOLDEN_QUERY_STRINGS, || format!("only {positive} positive cases"))?;
    ensure(empty_drupal, || "no empty Drupal query".into())?;
    ensure(drupal_ops.len() == 5, || format!("Drupal operators covered: {drupal_ops:?}"))?;
    Ok(format!(
        "{positive} expected strings and {} error cases match, all five Drupal operators covered",
        cases.len() - positive
    ))
}

fn model_round_trip() -> Outcome {
    for seed in 0..RANDOM_MODELS {
        let model = random_model(&mut rng_for(seed));
        let saved = model_to_json(&model);
        let loaded = model_from_json(&saved).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(loaded == model, || format!("seed {seed}: load(save(m)) != m"))?;
        ensure(model_to_json(&loaded) == saved, || format!("seed {seed}: save(load(save(m))) != save(m)"))?;
    }
    Ok(format!("{RANDOM_MODELS} random models round-trip exactly"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 round-trip fidelity", round_trip_fidelity),
        ("2 query-oracle equivalence", query_oracle_equivalence),
        ("3 OpenAPI document conformance", openapi_conformance),
        ("4 journal scenario", journal_scenario),
        ("5 determinism", determinism),
        ("6 query-string goldens", query_string_goldens),
        ("7 model round-trip", model_round_trip),
    ];
    println!();
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(why) => {
                println!("FAIL [{name}] {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
