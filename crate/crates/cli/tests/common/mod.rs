#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const IX3: &str = r#"{"terms":[{"power":3,"re":0.0,"im":1.0}]}"#;
pub const X2: &str = r#"{"terms":[{"power":2,"re":1.0,"im":0.0}]}"#;
pub const SHIFTED: &str = r#"{"terms":[{"power":1,"re":0.0,"im":2.0},{"power":2,"re":1.0,"im":0.0}]}"#;
/// `[[i, 0.5], [0.5, −i]]`, symmetric under `σ_x ∘ conj`.
pub const BROKEN_2X2: &str =
    r#"{"n":2,"basis":"raw","entries_re":[[0.0,0.5],[0.5,0.0]],"entries_im":[[1.0,0.0],[0.0,-1.0]]}"#;
pub const SIGMA_X: &str = r#"{"n":2,"w_re":[[0.0,1.0],[1.0,0.0]],"w_im":[[0.0,0.0],[0.0,0.0]]}"#;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<Output> for Run {
    fn from(out: Output) -> Self {
        Self {
            code: out.status.code().expect("process exited normally"),
            stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        }
    }
}

pub fn ptreal(args: &[&str]) -> Run {
    Command::new(env!("CARGO_BIN_EXE_ptreal"))
        .args(args)
        .output()
        .expect("spawn ptreal")
        .into()
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write fixture");
    path
}

pub fn s(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}
