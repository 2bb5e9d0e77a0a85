use cmsforge_core::discovery::{build_model, drupal::parse_document};
use cmsforge_core::metamodel::{AttributeType, CoreKind, Multiplicity, Platform};
use cmsforge_core::model_io::{model_from_json, model_to_json};

const DOCUMENT: &str = include_str!("../fixtures/videoarticle.openapi.json");
const GOLDEN: &str = include_str!("../fixtures/videoarticle.cmsmodel.json");

#[test]
fn drupal_document_matches_golden_model() {
    let doc = serde_json::from_str(DOCUMENT).unwrap();
    let (site, entities) = parse_document(&doc).unwrap();
    let report = build_model(site, Platform::Drupal, entities).unwrap();
    assert!(report.warnings.is_empty());

    let cls = report.model.class("Videoarticle").unwrap();
    assert_eq!(cls.core_kind, CoreKind::ContentType);
    assert_eq!(cls.attribute("title").unwrap().ty, AttributeType::Text);
    let rel = cls.relationship("category").unwrap();
    assert_eq!((rel.target.as_str(), rel.multiplicity), ("Category", Multiplicity::Many));
    assert!(report.model.class("Category").unwrap().is_core);
    assert_eq!(report.model.classes().len(), 17);

    assert_eq!(model_to_json(&report.model), GOLDEN);
    assert_eq!(model_from_json(GOLDEN).unwrap(), report.model);
}
