//! Criterion benchmarks for the cmsforge pipeline; see `benches/`.

use cmsforge_core::metamodel::Platform;
use cmsforge_core::mock::random::{random_definition, rng_for};
use cmsforge_core::mock::MockSiteDefinition;

/// The largest entity of a seeded random site, for query benchmarks.
pub fn largest_entity(platform: Platform, seed: u64) -> (MockSiteDefinition, String) {
    let def = random_definition(platform, &mut rng_for(seed));
    let raw = def
        .schema
        .iter()
        .max_by_key(|e| def.records(&e.raw_type_name).count())
        .map(|e| e.raw_type_name.clone())
        .expect("random sites have at least one entity");
    (def, raw)
}
