#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn cmsforge() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmsforge"))
}

pub fn run(args: &[&str]) -> Output {
    cmsforge().args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

pub fn journal_site_file() -> PathBuf {
    core_dir().join("fixtures/journal.mocksite.json")
}

pub fn journal_client_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../journal-client")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}
