use std::sync::Arc;

use cmsforge_core::discovery::discover;
use cmsforge_core::drivers::{connect, SiteCredentials};
use cmsforge_core::metamodel::Platform;
use cmsforge_core::mock::random::{random_definition, random_query, rng_for};
use cmsforge_core::mock::{brute_force_query, induce_model, serve};
use rand::seq::IndexedRandom;

fn check_platform(platform: Platform, sites: u64) {
    for seed in 0..sites {
        let mut rng = rng_for(seed);
        let def = random_definition(platform, &mut rng);
        let server = serve(def.clone(), 0).unwrap();
        let report = discover(&server.base_url(), &SiteCredentials::none(), platform).unwrap();
        let expected = induce_model(&def).unwrap();
        assert_eq!(report.model, expected, "seed {seed}");

        let model = Arc::new(report.model);
        let driver = connect(model.clone(), &server.base_url(), SiteCredentials::none()).unwrap();
        let queryable: Vec<_> = model.extensions().filter(|c| c.endpoint_path.is_some()).collect();
        for _ in 0..5 {
            let Some(cls) = queryable.choose(&mut rng) else { break };
            let raw = def
                .schema
                .iter()
                .find(|e| {
                    cmsforge_core::mock::endpoint_path(platform, &e.raw_type_name)
                        == *cls.endpoint_path.as_ref().unwrap()
                })
                .unwrap();
            let query = random_query(&def, &raw.raw_type_name, &mut rng);
            let got: Vec<String> = driver.search(cls, &query).unwrap().into_iter().map(|r| r.id).collect();
            let want = brute_force_query(&def, &raw.raw_type_name, &query).unwrap();
            assert_eq!(got, want, "seed {seed}, {} {query:?}", raw.raw_type_name);
        }
    }
}

#[test]
fn drupal_sites_agree_with_oracles() {
    check_platform(Platform::Drupal, 25);
}

#[test]
fn wordpress_sites_agree_with_oracles() {
    check_platform(Platform::WordPress, 25);
}
