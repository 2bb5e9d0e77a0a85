//! `cmsforge`: discover a CMS schema, generate a typed client, draw the
//! model, or serve a mock site.
//!
//! Exit codes: 0 success, 1 usage error, 2 operation failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cmsforge_core::codegen::{generate, write_plan, GenerateOptions};
use cmsforge_core::diagram::emit_diagram;
use cmsforge_core::discovery::discover;
use cmsforge_core::drivers::SiteCredentials;
use cmsforge_core::metamodel::Platform;
use cmsforge_core::mock::{serve_with, MockSiteDefinition, ServeOptions};
use cmsforge_core::model_io::{load_model, model_to_json};

#[derive(Debug, Parser)]
#[command(name = "cmsforge", version, about = "Reverse engineer headless CMS schemas into typed clients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read a live site's schema and write its model.
    Discover {
        #[arg(long)]
        url: String,
        #[arg(long, value_parser = parse_platform)]
        platform: Platform,
        #[arg(long, requires = "secret_env")]
        user: Option<String>,
        /// Environment variable holding the password or application secret.
        #[arg(long, requires = "user")]
        secret_env: Option<String>,
        /// Model file to write; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a client crate from a model.
    Generate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also emit the sample mobile-app module.
        #[arg(long)]
        scenario: bool,
        #[arg(long)]
        crate_name: Option<String>,
        /// Site name used for the site manager type, instead of the model's.
        #[arg(long)]
        site_name: Option<String>,
        /// Depend on cmsforge-core by path instead of by version.
        #[arg(long)]
        core_path: Option<PathBuf>,
    },
    /// Render a model as a PlantUML class diagram.
    Diagram {
        #[arg(long)]
        model: PathBuf,
        /// Diagram file to write; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve a mock site until interrupted.
    Mock {
        #[arg(long)]
        site: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn parse_platform(s: &str) -> Result<Platform, String> {
    s.parse().map_err(|_| format!("expected `drupal` or `wordpress`, got `{s}`"))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Operation(String),
}

fn op(e: impl std::fmt::Display) -> Failure {
    Failure::Operation(e.to_string())
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| op(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(op)
        }
    }
}

fn credentials(user: Option<String>, secret_env: Option<String>) -> Result<SiteCredentials, Failure> {
    match (user, secret_env) {
        (Some(user), Some(var)) => {
            let secret = std::env::var(&var)
                .ok()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Failure::Usage(format!("environment variable `{var}` is not set")))?;
            Ok(SiteCredentials::basic(user, secret))
        }
        _ => Ok(SiteCredentials::none()),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Discover { url, platform, user, secret_env, out } => {
            if url.split_once("://").is_some_and(|(_, rest)| rest.split('/').next().unwrap_or("").contains('@')) {
                return Err(Failure::Usage(
                    "credentials must not be part of --url; use --user and --secret-env".into(),
                ));
            }
            let credentials = credentials(user, secret_env)?;
            let report = discover(&url, &credentials, platform).map_err(op)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            write_output(out.as_deref(), &model_to_json(&report.model))
        }
        Command::Generate { model, out, scenario, crate_name, site_name, core_path } => {
            let model = load_model(&model).map_err(op)?;
            let mut options = GenerateOptions { crate_name, site_name, scenario, ..Default::default() };
            if let Some(path) = core_path {
                let path = path.to_str().ok_or_else(|| Failure::Usage("--core-path must be valid UTF-8".into()))?;
                options.core_dependency = format!("{{ path = {} }}", cmsforge_core::serde_json::Value::from(path));
            }
            let plan = generate(&model, &options).map_err(op)?;
            for e in &plan.escapes {
                eprintln!("note: `{}` is generated as `{}`", e.original, e.escaped);
            }
            write_plan(&plan, &out).map_err(op)
        }
        Command::Diagram { model, out } => {
            let model = load_model(&model).map_err(op)?;
            write_output(out.as_deref(), &emit_diagram(&model))
        }
        Command::Mock { site, port } => {
            let text = std::fs::read_to_string(&site).map_err(|e| op(format!("{}: {e}", site.display())))?;
            let def = MockSiteDefinition::from_json(&text).map_err(op)?;
            let server =
                serve_with(def, ServeOptions { port, log_to_stderr: true, ..Default::default() }).map_err(op)?;
            // The address goes to stdout so scripts can pick it up.
            println!("{}", server.base_url());
            std::io::stdout().flush().map_err(op)?;
            server.run_until_ctrl_c().map_err(op)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Operation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
