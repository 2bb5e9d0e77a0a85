//! Identifier mapping for generated Rust code.

use heck::{ToShoutySnakeCase, ToSnakeCase, ToUpperCamelCase};

pub const RUST_KEYWORDS: &[&str] = &[
    "abstract", "as", "async", "await", "become", "box", "break", "const", "continue", "crate", "do", "dyn", "else",
    "enum", "extern", "false", "final", "fn", "for", "gen", "if", "impl", "in", "let", "loop", "macro", "match", "mod",
    "move", "mut", "override", "priv", "pub", "ref", "return", "self", "Self", "static", "struct", "super", "trait",
    "true", "try", "type", "typeof", "unsafe", "unsized", "use", "virtual", "where", "while", "yield",
];

/// Type names the generated modules already use.
pub const RESERVED_TYPE_NAMES: &[&str] = &[
    "Self",
    "Option",
    "Some",
    "None",
    "Result",
    "Ok",
    "Err",
    "Vec",
    "String",
    "Box",
    "Arc",
    "Mutex",
    "OnceLock",
    "BTreeMap",
    "Value",
    "Driver",
    "DriverError",
    "GenericResource",
    "StagedResource",
    "SearchQuery",
    "SearchQueryBuilder",
    "SiteCredentials",
    "CmsModel",
    "Filter",
    "Sorter",
    "MobileApp",
    "ScenarioOutcome",
];

/// Replaces characters outside `[A-Za-z0-9_]` so the result is a plain
/// ASCII identifier fragment.
fn ascii_fragment(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c.to_string() } else { format!("u{:x}", c as u32) })
        .collect()
}

/// UpperCamelCase type identifier, before reserved-word escaping.
pub fn type_ident(name: &str) -> String {
    let camel = ascii_fragment(&name.to_upper_camel_case());
    if camel.starts_with(|c: char| c.is_ascii_digit()) {
        format!("_{camel}")
    } else {
        camel
    }
}

pub fn snake(name: &str) -> String {
    ascii_fragment(&name.to_snake_case())
}

pub fn shouty(name: &str) -> String {
    ascii_fragment(&name.to_shouty_snake_case())
}

/// Module (and file) name for a type identifier.
pub fn module_ident(type_ident: &str) -> String {
    let m = snake(type_ident.trim_end_matches('_'));
    let m = if m.starts_with(|c: char| c.is_ascii_digit()) { format!("_{m}") } else { m };
    if RUST_KEYWORDS.contains(&m.as_str()) || m == "mod" {
        format!("{m}_")
    } else {
        m
    }
}

/// The site identifier: a trailing " CMS" is dropped, the rest UpperCamel.
pub fn site_ident(site_name: &str) -> String {
    let trimmed = site_name.trim();
    let base = trimmed.strip_suffix(" CMS").or_else(|| trimmed.strip_suffix(" cms")).unwrap_or(trimmed);
    let ident = type_ident(base);
    if ident.is_empty() || ident.starts_with('_') {
        "Cms".to_string()
    } else {
        ident
    }
}
