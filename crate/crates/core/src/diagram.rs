//! PlantUML class diagrams of a model.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::metamodel::{CmsModel, Multiplicity};

fn is_plain(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Renders `model` as a PlantUML class diagram: one class block per class
/// (core classes stereotyped `<<core>>`), generalizations to the parent
/// kind, and one association per relationship. Output is deterministic.
pub fn emit_diagram(model: &CmsModel) -> String {
    // Names that are not plain identifiers are declared quoted with an alias.
    let mut alias: BTreeMap<&str, String> = BTreeMap::new();
    for (i, cls) in model.classes().iter().enumerate() {
        let a = if is_plain(&cls.name) { cls.name.clone() } else { format!("C{i}") };
        alias.insert(&cls.name, a);
    }
    let name_of = |n: &str| alias.get(n).cloned().unwrap_or_else(|| format!("\"{}\"", n.replace('"', "'")));

    let mut out = String::from("@startuml\n");
    if !model.site_name.is_empty() {
        writeln!(out, "title {}", model.site_name.replace('\n', " ")).unwrap();
    }
    out.push_str("hide empty members\n");
    for cls in model.classes() {
        let head = if is_plain(&cls.name) {
            format!("class {}", cls.name)
        } else {
            format!("class \"{}\" as {}", cls.name.replace('"', "'"), alias[cls.name.as_str()])
        };
        let stereotype = if cls.is_core { " <<core>>" } else { "" };
        writeln!(out, "{head}{stereotype} {{").unwrap();
        for a in &cls.attributes {
            let marker = if a.is_identifier { " {id}" } else { "" };
            writeln!(out, "  +{} : {}{marker}", a.name, a.ty).unwrap();
        }
        out.push_str("}\n");
    }
    for cls in model.classes() {
        let parent = if cls.is_core { cls.core_kind.parent() } else { Some(cls.core_kind) };
        if let Some(parent) = parent {
            writeln!(out, "{} --|> {}", name_of(&cls.name), name_of(parent.name())).unwrap();
        }
    }
    for cls in model.classes() {
        for r in &cls.relationships {
            let card = match r.multiplicity {
                Multiplicity::One => "1",
                Multiplicity::Many => "*",
            };
            writeln!(out, "{} --> \"{card}\" {} : {}", name_of(&cls.name), name_of(&r.target), r.name).unwrap();
        }
    }
    out.push_str("@enduml\n");
    out
}
