#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn maghho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maghho"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn read(path: impl AsRef<Path>) -> String {
    let p = path.as_ref();
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Drops the trailing `seconds` column of a convergence CSV.
pub fn without_seconds(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

/// Parses `i j re im` lines.
pub fn parse_coo(text: &str) -> Vec<(usize, usize, f64, f64)> {
    text.lines()
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            assert_eq!(t.len(), 4, "bad COO line '{l}'");
            (t[0].parse().unwrap(), t[1].parse().unwrap(), t[2].parse().unwrap(), t[3].parse().unwrap())
        })
        .collect()
}
