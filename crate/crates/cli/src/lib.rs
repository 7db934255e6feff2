//! Job runner for the Ratliff-Rush toolkit: parses job files, dispatches
//! computations and emits canonical JSON plus a text report.

pub mod corpus;
pub mod error;
pub mod job;
pub mod output;
pub mod parse;
pub mod properties;
pub mod run;

use std::path::PathBuf;

use rrtool_core::{FieldSpec, PrimeField, Rationals};
use serde_json::{json, Value};

pub use error::{CliError, CliResult, Kind};
pub use job::{parse_job, print_job, JobFile, Params, Session};

pub fn bundled_corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub enum AnySession {
    Prime(Session<PrimeField>),
    Rational(Session<Rationals>),
}

macro_rules! with_session {
    ($s:expr, $v:ident => $e:expr) => {
        match $s {
            AnySession::Prime($v) => $e,
            AnySession::Rational($v) => $e,
        }
    };
}

/// Everything a single command run produces.
#[derive(Debug)]
pub struct RunResult {
    pub document: Value,
    pub report: String,
    pub certified: Option<bool>,
    pub violation: Option<String>,
}

impl AnySession {
    /// Parses `text` and builds the ring; `overrides` are laid over `[params]`.
    pub fn open(text: &str, overrides: &Params) -> CliResult<Self> {
        let mut job = parse_job(text)?;
        job.params = job.params.overlay(overrides);
        let spec = match &job.params.field {
            Some(f) => job::field_spec(Some(&job::FieldValue::Name(f.clone())))?,
            None => job::field_spec(job.ring.field.as_ref())?,
        };
        Ok(match spec {
            FieldSpec::Prime(p) => AnySession::Prime(Session::new(job, text, PrimeField::new(p)?)?),
            FieldSpec::Rationals => AnySession::Rational(Session::new(job, text, Rationals)?),
        })
    }

    pub fn job(&self) -> &JobFile {
        with_session!(self, s => &s.job)
    }

    pub fn field(&self) -> FieldSpec {
        with_session!(self, s => rrtool_core::Field::spec(s.ring.field()))
    }

    pub fn run(&self, command: Option<&str>) -> CliResult<RunResult> {
        let command = match command.or(self.job().command.as_deref()) {
            Some(c) => c.to_string(),
            None => return Err(CliError::validation("no command given on the command line or in the job")),
        };
        with_session!(self, s => {
            let o = s.run(&command, &Params::default())?;
            let mut warnings = s.warnings.clone();
            warnings.extend(o.warnings.iter().cloned());
            if o.certified == Some(false) {
                warnings.push("result is heuristic: no stability certificate".into());
            }
            if let Some(v) = &o.violation {
                warnings.push(format!("internal check failed: {v}"));
            }
            let document = json!({
                "tool": "rrtool",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "field": self.field().to_string(),
                "truncation": s.ring.truncation(),
                "params": serde_json::to_value(&s.job.params).unwrap_or(Value::Null),
                "options": options_json(&s.job.params.options()),
                "job": serde_json::to_value(&s.job).unwrap_or(Value::Null),
                "outputs": o.outputs,
                "warnings": warnings,
            });
            Ok(RunResult {
                document,
                report: o.report,
                certified: o.certified,
                violation: o.violation,
            })
        })
    }

    pub fn check_all(&self) -> Vec<corpus::CheckOutcome> {
        with_session!(self, s => s.check_all())
    }

    pub fn check(&self, check: &job::Check) -> corpus::CheckOutcome {
        with_session!(self, s => s.check(check))
    }

    /// Runs a command and compares it with an expectation table written in
    /// TOML, e.g. `value = "I^2 + (x^20*y^24)"`.
    pub fn check_toml(&self, command: &str, params: &str, expect: &str) -> CliResult<corpus::CheckOutcome> {
        let params: Params = toml::from_str(params).map_err(|e| CliError::validation(e.to_string()))?;
        let expect: toml::Table = toml::from_str(expect).map_err(|e| CliError::validation(e.to_string()))?;
        Ok(self.check(&job::Check {
            command: command.to_string(),
            note: None,
            params,
            expect,
        }))
    }

    pub fn run_properties(&self, direct_sum: bool) -> Vec<properties::PropertyResult> {
        with_session!(self, s => s.run_properties(direct_sum))
    }
}

fn options_json(o: &rrtool_core::ratliff::Options) -> Value {
    json!({
        "r_max": o.r_max,
        "trials": o.trials,
        "seed": o.seed,
        "window": o.window,
        "n_top": o.n_top,
        "use_rho": o.use_rho,
    })
}

/// Canonical pretty JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
