#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cournot(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_cournot")).args(args).output().expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

pub fn scenario_text(d: f64, extra: &str) -> String {
    format!(r#"{{"markets":[{{"a":200}},{{"a":150}},{{"a":100}}],"firms":[{{"c":20}},{{"c":40}}],"d":{d:?}{extra}}}"#)
}

pub fn write_scenario(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

pub fn reference_scenario(dir: &Path, d: f64) -> PathBuf {
    write_scenario(dir, &format!("reference_{d}.json"), &scenario_text(d, ""))
}

pub fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_owned();
    (header, lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

/// `(firm, market) -> quantity` from an `equilibrium.csv`.
pub fn read_equilibrium(path: &Path) -> BTreeMap<(usize, usize), f64> {
    let (header, rows) = read_csv(path);
    assert_eq!(header, "firm,market,quantity");
    rows.iter().map(|r| ((r[0].parse().unwrap(), r[1].parse().unwrap()), r[2].parse().unwrap())).collect()
}

/// Rows of a long-format step table grouped by step, keyed by `(firm, market)`.
/// `model` filters the `compare.csv` model column when present.
pub fn read_steps(path: &Path, model: Option<&str>) -> Vec<BTreeMap<(usize, usize), f64>> {
    let (_, rows) = read_csv(path);
    let mut steps: Vec<BTreeMap<(usize, usize), f64>> = Vec::new();
    for r in rows {
        let (step, rest) = match model {
            Some(m) if r[1] != m => continue,
            Some(_) => (r[0].parse::<usize>().unwrap(), &r[2..]),
            None => (r[0].parse::<usize>().unwrap(), &r[1..]),
        };
        if steps.len() <= step {
            steps.resize_with(step + 1, BTreeMap::new);
        }
        steps[step].insert((rest[0].parse().unwrap(), rest[1].parse().unwrap()), rest[2].parse().unwrap());
    }
    steps
}

pub fn sup_diff(a: &BTreeMap<(usize, usize), f64>, b: &BTreeMap<(usize, usize), f64>) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().map(|(k, v)| (v - b[k]).abs()).fold(0.0, f64::max)
}
