#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}):\n{}", self.stdout))
    }
}

pub fn cyclodiff(args: &[&str]) -> Run {
    cyclodiff_env(args, &[])
}

pub fn cyclodiff_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclodiff"));
    cmd.args(args).env_remove("CYCLODIFF_LIMITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn cyclodiff");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// A fresh path under the system temp directory.
pub fn scratch(name: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let n = N.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("cyclodiff-{}-{n}-{name}", std::process::id()))
}

/// Writes `sys gen` and the solution command's output to files, then runs `sys verify`.
pub fn verify_pair(gen: &[&str], solution: &[&str], mode: &str) -> Run {
    let sys = scratch("sys.txt");
    let sol = scratch("sol.json");
    let (sys_s, sol_s) = (sys.to_str().unwrap(), sol.to_str().unwrap());
    let g = cyclodiff(&[gen, &["-o", sys_s]].concat());
    assert_eq!(g.code, 0, "{}", g.stderr);
    let s = cyclodiff(&[solution, &["-o", sol_s]].concat());
    assert_eq!(s.code, 0, "{}", s.stderr);
    let r = cyclodiff(&["sys", "verify", "--system", sys_s, "--solution", sol_s, "--mode", mode]);
    let _ = std::fs::remove_file(&sys);
    let _ = std::fs::remove_file(&sol);
    r
}
