//! Generation of a typed Rust client crate from a model.
//!
//! The output depends only on `cmsforge-core`: every read, search, update and
//! link traversal goes through a [`Driver`](crate::drivers::Driver), so the
//! generated sources carry no URLs, query syntax or payload shapes.

pub mod naming;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use minijinja::Environment;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::metamodel::{AttributeType, CmsClass, CmsModel, CoreKind, ModelError, Multiplicity, Platform};
use crate::model_io::{canonical_json, model_to_json};
use naming::{module_ident, shouty, site_ident, snake, type_ident, RESERVED_TYPE_NAMES};

pub const MANIFEST_FILE: &str = "MANIFEST.json";
pub const MANIFEST_VERSION: &str = "cmsforge-manifest/1";
pub const SCENARIO_FILE: &str = "src/mobile_app.rs";

/// Class names the integration scenario needs.
pub const SCENARIO_VIDEO_CLASS: &str = "VideoArticle";
pub const SCENARIO_NEWS_CLASS: &str = "NewsArticle";
pub const SCENARIO_LIKES_ATTRIBUTE: &str = "likes";

/// Substrings that must never appear in generated sources.
pub const FORBIDDEN_TOKENS: &[&str] =
    &["http://", "https://", "ureq", "filter[", "page[limit]", "_links", "per_page", "vnd.api", "openapi", "wp-json"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodegenError {
    #[error(transparent)]
    InvalidModel(#[from] ModelError),
    #[error("class `{class}`: identifier `{identifier}` would be generated twice")]
    IdentifierCollision { class: String, identifier: String },
    #[error("integration scenario needs {0}")]
    MissingScenarioClasses(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("template: {0}")]
    Template(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Cargo package name; defaults to `{site}-client`.
    pub crate_name: Option<String>,
    /// TOML value for the `cmsforge-core` dependency line.
    pub core_dependency: String,
    /// Overrides the model's site name for naming the site manager.
    pub site_name: Option<String>,
    pub scenario: bool,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            crate_name: None,
            core_dependency: format!("\"{}\"", env!("CARGO_PKG_VERSION")),
            site_name: None,
            scenario: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedFile {
    /// Relative path with `/` separators.
    pub path: String,
    pub content: String,
}

/// A model name that could not be used verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameEscape {
    pub class: String,
    pub original: String,
    pub escaped: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedArtifactPlan {
    pub crate_name: String,
    pub entry_module_name: String,
    pub site_manager: String,
    /// Sorted by path.
    pub files: Vec<GeneratedFile>,
    pub escapes: Vec<NameEscape>,
}

impl GeneratedArtifactPlan {
    pub fn file(&self, path: &str) -> Option<&GeneratedFile> {
        self.files.iter().find(|f| f.path == path)
    }

    /// Canonical JSON listing every file with its SHA-256.
    pub fn manifest(&self) -> String {
        let files: Vec<_> = self
            .files
            .iter()
            .map(|f| json!({"path": f.path, "sha256": hex::encode(Sha256::digest(f.content.as_bytes())), "bytes": f.content.len()}))
            .collect();
        canonical_json(&json!({
            "version": MANIFEST_VERSION,
            "crate": self.crate_name,
            "siteManager": self.site_manager,
            "files": files,
        }))
    }
}

/// Writes every planned file plus the manifest under `dir`.
pub fn write_plan(plan: &GeneratedArtifactPlan, dir: &Path) -> Result<(), CodegenError> {
    let io = |p: &Path, e: std::io::Error| CodegenError::Io { path: p.display().to_string(), message: e.to_string() };
    for f in &plan.files {
        let path = dir.join(&f.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
        }
        std::fs::write(&path, &f.content).map_err(|e| io(&path, e))?;
    }
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(MANIFEST_FILE);
    std::fs::write(&path, plan.manifest()).map_err(|e| io(&path, e))
}

/// Every (file, token) pair where a forbidden token occurs in a Rust source
/// or the manifest of the generated crate.
pub fn forbidden_tokens(plan: &GeneratedArtifactPlan) -> Vec<(String, &'static str)> {
    let mut hits = Vec::new();
    for f in &plan.files {
        if f.path.ends_with(".rs") || f.path.ends_with(".toml") {
            for t in FORBIDDEN_TOKENS {
                if f.content.contains(t) {
                    hits.push((f.path.clone(), *t));
                }
            }
        }
    }
    hits
}

#[derive(Debug, Clone, Serialize)]
struct AttrCtx {
    name: String,
    konst: String,
    getter: String,
    setter: String,
    rust_type: &'static str,
    param_type: &'static str,
    read_expr: String,
    to_value: &'static str,
}

#[derive(Debug, Clone, Serialize)]
struct RelCtx {
    name: String,
    konst: String,
    method: String,
    target_type: String,
    many: bool,
}

#[derive(Debug, Clone, Serialize)]
struct RecordCtx {
    class_name: String,
    type_name: String,
    module: String,
    kind: &'static str,
    is_core: bool,
    allow_case: bool,
    queryable: bool,
    stem: String,
    imports: Vec<String>,
    attributes: Vec<AttrCtx>,
    relationships: Vec<RelCtx>,
}

/// Everything derived from the model before rendering.
#[derive(Debug, Clone)]
struct Naming {
    site_name: String,
    manager: String,
    records: Vec<RecordCtx>,
    escapes: Vec<NameEscape>,
}

fn collision(class: &str, identifier: &str) -> CodegenError {
    CodegenError::IdentifierCollision { class: class.to_string(), identifier: identifier.to_string() }
}

/// Classes that get a record type: every extension, core `User`, and any
/// core class a relationship points at.
fn record_classes(model: &CmsModel) -> Vec<&CmsClass> {
    let mut wanted: BTreeSet<&str> = model.extensions().map(|c| c.name.as_str()).collect();
    wanted.insert(CoreKind::User.name());
    for c in model.classes() {
        for r in &c.relationships {
            wanted.insert(&r.target);
        }
    }
    wanted.into_iter().filter_map(|n| model.class(n)).collect()
}

fn is_queryable(cls: &CmsClass) -> bool {
    cls.endpoint_path.is_some() || (cls.is_core && cls.core_kind == CoreKind::User)
}

fn attribute_shape(ty: AttributeType, konst: &str) -> (&'static str, &'static str, String, &'static str) {
    let read = |m: &str| format!("self.inner.{m}(Self::{konst})");
    match ty {
        AttributeType::Text | AttributeType::DateTime => {
            ("String", "impl Into<String>", read("text"), "Value::String(value.into())")
        }
        AttributeType::Integer => ("i64", "i64", read("integer"), "Value::from(value)"),
        AttributeType::Float => ("f64", "f64", read("float"), "Value::from(value)"),
        AttributeType::Boolean => ("bool", "bool", read("boolean"), "Value::Bool(value)"),
        AttributeType::Unknown => ("Value", "Value", format!("{}.cloned()", read("raw")), "value"),
    }
}

fn name_model(model: &CmsModel, site_name: Option<&str>) -> Result<Naming, CodegenError> {
    model.validate()?;
    let site_name = site_name.unwrap_or(&model.site_name).to_string();
    let manager = format!("{}SiteManager", site_ident(&site_name));
    let classes = record_classes(model);

    let mut escapes = Vec::new();
    let mut types: BTreeMap<String, String> = BTreeMap::new();
    let mut taken_types: BTreeSet<String> = BTreeSet::new();
    let mut taken_modules: BTreeSet<String> = BTreeSet::new();
    let mut taken_stems: BTreeSet<String> = BTreeSet::new();
    let mut records = Vec::new();

    for cls in &classes {
        let plain = type_ident(&cls.name);
        let reserved = RESERVED_TYPE_NAMES.contains(&plain.as_str()) || plain == manager;
        let ty = if reserved { format!("{plain}_") } else { plain };
        if ty.is_empty() || !taken_types.insert(ty.clone()) {
            return Err(collision(&cls.name, &ty));
        }
        if ty != cls.name {
            escapes.push(NameEscape { class: cls.name.clone(), original: cls.name.clone(), escaped: ty.clone() });
        }
        types.insert(cls.name.clone(), ty);
    }

    for cls in &classes {
        let ty = types[&cls.name].clone();
        let module = module_ident(&ty);
        if !taken_modules.insert(module.clone()) {
            return Err(collision(&cls.name, &module));
        }
        let stem = module.trim_end_matches('_').to_string();
        let queryable = is_queryable(cls);
        if queryable && !taken_stems.insert(stem.clone()) {
            return Err(collision(&cls.name, &format!("get_{stem}_by_id")));
        }

        let mut consts = BTreeSet::new();
        let mut methods = BTreeSet::new();
        let mut attributes = Vec::new();
        for a in cls.attributes.iter().filter(|a| !a.is_identifier) {
            let s = snake(&a.name);
            let konst = format!("FIELD_{}", shouty(&a.name));
            let (getter, setter) = (format!("get_{s}"), format!("set_{s}"));
            if s.is_empty() || !consts.insert(konst.clone()) {
                return Err(collision(&cls.name, &konst));
            }
            for m in [&getter, &setter] {
                if !methods.insert(m.clone()) {
                    return Err(collision(&cls.name, m));
                }
            }
            let (rust_type, param_type, read_expr, to_value) = attribute_shape(a.ty, &konst);
            attributes.push(AttrCtx {
                name: a.name.clone(),
                konst,
                getter,
                setter,
                rust_type,
                param_type,
                read_expr,
                to_value,
            });
        }

        let mut imports = BTreeSet::new();
        let mut relationships = Vec::new();
        for r in &cls.relationships {
            let s = snake(&r.name);
            let konst = format!("REL_{}", shouty(&r.name));
            let method = format!("get_{s}");
            if s.is_empty() || !consts.insert(konst.clone()) {
                return Err(collision(&cls.name, &konst));
            }
            if !methods.insert(method.clone()) {
                return Err(collision(&cls.name, &method));
            }
            let target_type =
                types.get(&r.target).cloned().ok_or_else(|| ModelError::UnknownClass(r.target.clone()))?;
            if target_type != ty {
                imports.insert(target_type.clone());
            }
            relationships.push(RelCtx {
                name: r.name.clone(),
                konst,
                method,
                target_type,
                many: r.multiplicity == Multiplicity::Many,
            });
        }

        records.push(RecordCtx {
            class_name: cls.name.clone(),
            allow_case: !ty.starts_with(|c: char| c.is_ascii_uppercase()) || ty.contains('_'),
            type_name: ty,
            module,
            kind: cls.core_kind.name(),
            is_core: cls.is_core,
            queryable,
            stem,
            imports: imports.into_iter().collect(),
            attributes,
            relationships,
        });
    }
    records.sort_by(|a, b| a.module.cmp(&b.module));
    Ok(Naming { site_name, manager, records, escapes })
}

fn environment() -> Environment<'static> {
    let mut env = Environment::new();
    env.set_trim_blocks(true);
    env.set_lstrip_blocks(true);
    env.set_keep_trailing_newline(true);
    env.set_auto_escape_callback(|_| minijinja::AutoEscape::None);
    env.add_filter("rust_str", |s: String| format!("{s:?}"));
    env.add_filter("toml_str", |s: String| serde_json::to_string(&s).expect("strings serialize"));
    env.add_filter("doc", |s: String| s.replace(['\r', '\n'], " "));
    env.add_filter("toml_comment", |s: String| s.replace(['\r', '\n'], " "));
    for (name, src) in [
        ("Cargo.toml", include_str!("../../templates/Cargo.toml.jinja")),
        ("lib.rs", include_str!("../../templates/lib.rs.jinja")),
        ("records_mod.rs", include_str!("../../templates/records_mod.rs.jinja")),
        ("record.rs", include_str!("../../templates/record.rs.jinja")),
        ("site_manager.rs", include_str!("../../templates/site_manager.rs.jinja")),
        ("mobile_app.rs", include_str!("../../templates/mobile_app.rs.jinja")),
    ] {
        env.add_template(name, src).expect("built-in templates parse");
    }
    env
}

fn render(env: &Environment<'_>, name: &str, ctx: serde_json::Value) -> Result<String, CodegenError> {
    env.get_template(name).and_then(|t| t.render(ctx)).map_err(|e| CodegenError::Template(e.to_string()))
}

fn valid_crate_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_alphabetic())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Renders the generated client crate for `model`.
pub fn generate(model: &CmsModel, options: &GenerateOptions) -> Result<GeneratedArtifactPlan, CodegenError> {
    let naming = name_model(model, options.site_name.as_deref())?;
    let crate_name = match &options.crate_name {
        Some(n) => n.clone(),
        None => format!("{}-client", heck::AsKebabCase(naming.manager.trim_end_matches("SiteManager"))),
    };
    if !valid_crate_name(&crate_name) {
        return Err(CodegenError::InvalidOption(format!("crate name `{crate_name}`")));
    }
    let driver = match model.platform {
        Platform::Drupal => "DrupalDriver",
        Platform::WordPress => "WordPressDriver",
    };
    let env = environment();
    let queryable: Vec<&RecordCtx> = naming.records.iter().filter(|r| r.queryable).collect();
    let common = json!({
        "site_name": naming.site_name,
        "manager": naming.manager,
        "records": naming.records,
        "queryable": queryable,
        "scenario": options.scenario,
        "crate_name": crate_name,
        "core_dependency": options.core_dependency,
        "driver": driver,
    });

    let mut files = vec![
        GeneratedFile { path: "Cargo.toml".into(), content: render(&env, "Cargo.toml", common.clone())? },
        GeneratedFile { path: "src/lib.rs".into(), content: render(&env, "lib.rs", common.clone())? },
        GeneratedFile { path: "src/model.cmsmodel.json".into(), content: model_to_json(model) },
        GeneratedFile { path: "src/records/mod.rs".into(), content: render(&env, "records_mod.rs", common.clone())? },
        GeneratedFile { path: "src/site_manager.rs".into(), content: render(&env, "site_manager.rs", common)? },
    ];
    for r in &naming.records {
        files.push(GeneratedFile {
            path: format!("src/records/{}.rs", r.module),
            content: render(&env, "record.rs", json!({ "r": r }))?,
        });
    }
    if options.scenario {
        files.push(scenario_file(&env, &naming)?);
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(GeneratedArtifactPlan {
        entry_module_name: crate_name.replace('-', "_"),
        crate_name,
        site_manager: naming.manager,
        files,
        escapes: naming.escapes,
    })
}

/// Renders only the sample app module (`src/mobile_app.rs`).
pub fn render_integration_scenario(model: &CmsModel, options: &GenerateOptions) -> Result<GeneratedFile, CodegenError> {
    let naming = name_model(model, options.site_name.as_deref())?;
    scenario_file(&environment(), &naming)
}

fn scenario_file(env: &Environment<'_>, naming: &Naming) -> Result<GeneratedFile, CodegenError> {
    let missing = |what: &str| CodegenError::MissingScenarioClasses(what.to_string());
    let find = |name: &str| naming.records.iter().find(|r| r.class_name == name);
    let video = find(SCENARIO_VIDEO_CLASS).ok_or_else(|| missing("a `VideoArticle` class"))?;
    let news = find(SCENARIO_NEWS_CLASS).ok_or_else(|| missing("a `NewsArticle` class"))?;
    if !video.queryable {
        return Err(missing("an endpoint for `VideoArticle`"));
    }
    let likes = video
        .attributes
        .iter()
        .find(|a| a.name == SCENARIO_LIKES_ATTRIBUTE && a.rust_type == "i64")
        .ok_or_else(|| missing("an Integer `likes` attribute on `VideoArticle`"))?;
    let related = video
        .relationships
        .iter()
        .find(|r| r.target_type == news.type_name)
        .ok_or_else(|| missing("a relationship from `VideoArticle` to `NewsArticle`"))?;
    let content = render(
        env,
        "mobile_app.rs",
        json!({
            "site_name": naming.site_name,
            "manager": naming.manager,
            "video": video.type_name,
            "video_stem": video.stem,
            "news": news.type_name,
            "likes_getter": likes.getter,
            "likes_setter": likes.setter,
            "related_method": related.method,
            "related_many": related.many,
        }),
    )?;
    Ok(GeneratedFile { path: SCENARIO_FILE.to_string(), content })
}
