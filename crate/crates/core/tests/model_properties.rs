//! Properties over randomly generated models.

use cmsforge_core::codegen::{forbidden_tokens, generate, CodegenError, GenerateOptions};
use cmsforge_core::diagram::emit_diagram;
use cmsforge_core::mock::random::{random_model, rng_for};
use cmsforge_core::model_io::{model_from_json, model_to_json};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn save_load_save_is_a_fixpoint(seed in any::<u64>()) {
        let model = random_model(&mut rng_for(seed));
        let text = model_to_json(&model);
        let loaded = model_from_json(&text).unwrap();
        prop_assert_eq!(&loaded, &model);
        prop_assert_eq!(model_to_json(&loaded), text);
    }

    #[test]
    fn diagrams_follow_the_line_grammar(seed in any::<u64>()) {
        let model = random_model(&mut rng_for(seed));
        let text = emit_diagram(&model);
        prop_assert_eq!(text.clone(), emit_diagram(&model));
        let lines: Vec<&str> = text.lines().collect();
        prop_assert_eq!(lines[0], "@startuml");
        prop_assert_eq!(*lines.last().unwrap(), "@enduml");
        let mut in_class = false;
        let (mut classes, mut generalizations, mut associations) = (0, 0, 0);
        for line in &lines[1..lines.len() - 1] {
            if in_class {
                if *line == "}" {
                    in_class = false;
                } else {
                    prop_assert!(line.starts_with("  +") && line.contains(" : "), "bad member line {:?}", line);
                }
            } else if line.starts_with("class ") && line.ends_with(" {") {
                in_class = true;
                classes += 1;
            } else if line.contains(" --|> ") {
                generalizations += 1;
            } else if line.contains(" --> \"1\" ") || line.contains(" --> \"*\" ") {
                associations += 1;
            } else {
                prop_assert!(line.starts_with("title ") || *line == "hide empty members", "bad line {:?}", line);
            }
        }
        prop_assert!(!in_class);
        prop_assert_eq!(classes, model.classes().len());
        // ContentEntity, Role and Permission are the only classes without a parent edge.
        prop_assert_eq!(generalizations, model.classes().len() - 3);
        prop_assert_eq!(associations, model.classes().iter().map(|c| c.relationships.len()).sum::<usize>());
    }

    #[test]
    fn generated_clients_stay_platform_free(seed in any::<u64>()) {
        let model = random_model(&mut rng_for(seed));
        match generate(&model, &GenerateOptions::default()) {
            Ok(plan) => {
                prop_assert!(forbidden_tokens(&plan).is_empty(), "{:?}", forbidden_tokens(&plan));
                prop_assert_eq!(plan.clone(), generate(&model, &GenerateOptions::default()).unwrap());
            }
            Err(CodegenError::IdentifierCollision { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
