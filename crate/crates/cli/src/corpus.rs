//! Golden jobs: every `[[checks]]` entry runs a command and compares the
//! result with `expect`.
//!
//! Special keys: `value` (an ideal expression, a generator list, or a list
//! of module vectors; compared as submodules), `count` (number of minimal
//! generators), `contains` and `not_contains` (element or vector lists).
//! Every other key is matched against the JSON outputs, where tables only
//! need to agree on the keys they list.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rrtool_core::{Field, RingElement, Submodule};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::job::{Check, Session};
use crate::output::render_submodule;
use crate::run::Outcome;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub command: String,
    pub note: Option<String>,
    pub passed: bool,
    pub diffs: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct JobReport {
    pub file: String,
    pub checks: Vec<CheckOutcome>,
    pub error: Option<String>,
}

impl JobReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

/// Expected JSON must agree with the actual value on every key it lists.
pub fn json_matches(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e
            .iter()
            .all(|(k, v)| a.get(k).is_some_and(|av| json_matches(v, av))),
        (Value::Array(e), Value::Array(a)) => {
            e.len() == a.len() && e.iter().zip(a).all(|(x, y)| json_matches(x, y))
        }
        (Value::Number(e), Value::Number(a)) => match (e.as_i64(), a.as_i64()) {
            (Some(x), Some(y)) => x == y,
            _ => e == a,
        },
        _ => expected == actual,
    }
}

impl<F: Field> Session<F> {
    fn expected_submodule(&self, like: &Submodule<F>, spec: &toml::Value) -> CliResult<Submodule<F>> {
        match spec {
            toml::Value::String(expr) => {
                if like.ambient().rank() == 1 && like.ambient().is_ring() {
                    self.ideal(expr)
                } else {
                    self.module(expr)
                }
            }
            toml::Value::Array(items) => {
                let vecs = items
                    .iter()
                    .map(|it| self.vector_of(it, like.ambient().rank()))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Submodule::from_vectors(like.ambient(), &vecs)?)
            }
            _ => Err(CliError::validation("value must be an expression or a list")),
        }
    }

    fn vector_of(&self, item: &toml::Value, rank: usize) -> CliResult<Vec<RingElement<F>>> {
        match item {
            toml::Value::String(s) if rank == 1 => Ok(vec![self.element(s)?]),
            toml::Value::Array(parts) if parts.len() == rank => parts
                .iter()
                .map(|p| match p {
                    toml::Value::String(s) => self.element(s),
                    _ => Err(CliError::validation("vector entries must be strings")),
                })
                .collect(),
            _ => Err(CliError::validation(format!("expected an element or a vector of length {rank}"))),
        }
    }

    pub fn compare(&self, outcome: &Outcome<F>, expect: &toml::Table) -> CliResult<Vec<String>> {
        let mut diffs = Vec::new();
        for (key, spec) in expect {
            match key.as_str() {
                "value" | "count" | "contains" | "not_contains" => {
                    let Some(v) = &outcome.value else {
                        diffs.push(format!("{key}: command has no submodule result"));
                        continue;
                    };
                    match (key.as_str(), spec) {
                        ("value", _) => {
                            let want = self.expected_submodule(v, spec)?;
                            if !v.equals(&want)? {
                                diffs.push(format!(
                                    "value: expected {} got {}",
                                    render_submodule(&want),
                                    render_submodule(v)
                                ));
                            }
                        }
                        ("count", toml::Value::Integer(c)) => {
                            let got = v.minimal_generators().len();
                            if got as i64 != *c {
                                diffs.push(format!("count: expected {c} got {got}"));
                            }
                        }
                        (_, toml::Value::Array(items)) => {
                            let want = key == "contains";
                            for it in items {
                                let comps = self.vector_of(it, v.ambient().rank())?;
                                let inside = match v.ambient().vector(&comps)? {
                                    Some(h) => v.contains_vector(&h)?,
                                    None => true,
                                };
                                if inside != want {
                                    diffs.push(format!("{key}: {it} {}", if want { "missing" } else { "present" }));
                                }
                            }
                        }
                        _ => return Err(CliError::validation(format!("malformed expectation {key}"))),
                    }
                }
                _ => {
                    let want = serde_json::to_value(spec).map_err(|e| CliError::validation(e.to_string()))?;
                    let got = outcome.outputs.get(key).cloned().unwrap_or(Value::Null);
                    if !json_matches(&want, &got) {
                        diffs.push(format!("{key}: expected {want} got {got}"));
                    }
                }
            }
        }
        Ok(diffs)
    }

    pub fn check(&self, check: &Check) -> CheckOutcome {
        let result = self
            .run(&check.command, &check.params)
            .and_then(|o| self.compare(&o, &check.expect));
        let diffs = match result {
            Ok(d) => d,
            Err(e) => vec![e.to_string()],
        };
        CheckOutcome {
            command: check.command.clone(),
            note: check.note.clone(),
            passed: diffs.is_empty(),
            diffs,
        }
    }

    pub fn check_all(&self) -> Vec<CheckOutcome> {
        self.job.checks.iter().map(|c| self.check(c)).collect()
    }
}

pub fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::validation(format!("no .toml jobs in {}", dir.display())));
    }
    Ok(files)
}

/// Runs every job in `dir` concurrently; reports are ordered by file name.
pub fn verify_corpus(dir: &Path, overrides: &crate::job::Params) -> CliResult<Vec<JobReport>> {
    let files = corpus_files(dir)?;
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| s.spawn(move || verify_file(f, overrides)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker")).collect()
    });
    Ok(reports)
}

pub fn verify_file(path: &Path, overrides: &crate::job::Params) -> JobReport {
    let file = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return JobReport {
                file,
                checks: Vec::new(),
                error: Some(e.to_string()),
            }
        }
    };
    match crate::AnySession::open(&text, overrides) {
        Ok(s) => {
            let checks = s.check_all();
            let error = checks.is_empty().then(|| "job has no [[checks]]".to_string());
            JobReport { file, checks, error }
        }
        Err(e) => JobReport {
            file,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

pub fn render_matrix(reports: &[JobReport]) -> String {
    let mut s = String::new();
    let width = reports.iter().map(|r| r.file.len()).max().unwrap_or(4);
    for r in reports {
        let ok = r.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            s,
            "{:<width$}  {:>3}/{:<3} {}",
            r.file,
            ok,
            r.checks.len(),
            if r.passed() { "PASS" } else { "FAIL" }
        );
        if let Some(e) = &r.error {
            let _ = writeln!(s, "    error: {e}");
        }
        for (i, c) in r.checks.iter().enumerate().filter(|(_, c)| !c.passed) {
            let label = c.note.as_deref().unwrap_or("");
            let _ = writeln!(s, "    check {} ({}) {label}", i + 1, c.command);
            for d in &c.diffs {
                let _ = writeln!(s, "      {d}");
            }
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(s, "{passed}/{} jobs pass", reports.len());
    s
}
