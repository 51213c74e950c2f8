#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use rounding_core::jets::Jet2;
use serde_json::{json, Value};

pub const BIN: &str = env!("CARGO_BIN_EXE_rounding-forge");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

pub fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

pub fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ROUNDING_FORGE_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn jet_json(jet: &Jet2) -> Value {
    let s = |r: &rounding_core::Rational| Value::String(r.to_string());
    let a: Vec<Vec<Value>> = jet.linear().linear_matrix().iter().map(|row| row.iter().map(s).collect()).collect();
    let b: Vec<Vec<Vec<Value>>> = jet
        .quadratic()
        .quadratic_forms()
        .iter()
        .map(|f| f.matrix().iter().map(|row| row.iter().map(s).collect()).collect())
        .collect();
    json!({
        "kind": "jet",
        "m": jet.source_dim(),
        "n": jet.target_dim(),
        "A": a,
        "B": b,
    })
}

pub fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
