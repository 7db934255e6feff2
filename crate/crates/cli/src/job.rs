//! Job files: a TOML document with `[ring]`, `[ideals]`, `[modules.NAME]`,
//! `[params]` and optional `[[checks]]`. See `docs/job-format.md`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rrtool_core::field::DEFAULT_PRIME;
use rrtool_core::present::{present_module, Presented};
use rrtool_core::ratliff::{Analysis, Options};
use rrtool_core::ring::Product;
use rrtool_core::{build_ring, Field, FieldSpec, Ring, RingElement, RingPresentation, Submodule};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{CliError, CliResult};
use crate::parse::{parse_expression, parse_polynomial, ExprTerm, ParseError, Symbols};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub ring: RingBlock,
    #[serde(default)]
    pub ideals: BTreeMap<String, Vec<Spanned<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleBlock>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Polynomial,
    Semigroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Prime(u64),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub kind: RingKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<Spanned<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<u32>,
    /// Semigroup aliases: names[i] stands for t^generators[i].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<usize>>,
    pub generators: Vec<Vec<Spanned<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    /// Second ideal, for max-element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_top: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_rho: Option<bool>,
    /// Overrides `[ring].field`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

const STRING_PARAMS: &[&str] = &["ideal", "module", "element", "other", "field"];

impl Params {
    /// Fields set in `top` win.
    pub fn overlay(&self, top: &Params) -> Params {
        Params {
            ideal: top.ideal.clone().or_else(|| self.ideal.clone()),
            module: top.module.clone().or_else(|| self.module.clone()),
            element: top.element.clone().or_else(|| self.element.clone()),
            other: top.other.clone().or_else(|| self.other.clone()),
            n: top.n.or(self.n),
            n_max: top.n_max.or(self.n_max),
            n_top: top.n_top.or(self.n_top),
            k: top.k.or(self.k),
            r_max: top.r_max.or(self.r_max),
            trials: top.trials.or(self.trials),
            seed: top.seed.or(self.seed),
            window: top.window.or(self.window),
            use_rho: top.use_rho.or(self.use_rho),
            field: top.field.clone().or_else(|| self.field.clone()),
        }
    }

    /// Applies a `key=value` assignment from the command line.
    pub fn set(&mut self, assignment: &str) -> CliResult<()> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(CliError::validation(format!("parameter '{assignment}' is not of the form key=value")));
        };
        let (key, value) = (key.trim(), value.trim());
        let mut table = toml::Table::try_from(&*self).map_err(|e| CliError::validation(e.to_string()))?;
        let parsed = if STRING_PARAMS.contains(&key) {
            toml::Value::String(value.to_string())
        } else {
            toml::from_str::<toml::Table>(&format!("v = {value}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()))
        };
        table.insert(key.to_string(), parsed);
        *self = table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::validation(format!("parameter {key}: {}", e.message())))?;
        Ok(())
    }

    pub fn options(&self) -> Options {
        let d = Options::default();
        Options {
            r_max: self.r_max.unwrap_or(d.r_max),
            trials: self.trials.unwrap_or(d.trials),
            seed: self.seed.unwrap_or(d.seed),
            window: self.window.unwrap_or(d.window),
            n_top: self.n_top.unwrap_or(d.n_top),
            use_rho: self.use_rho.unwrap_or(d.use_rho),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default)]
    pub params: Params,
    pub expect: toml::Table,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_job(text: &str) -> CliResult<JobFile> {
    toml::from_str(text).map_err(|e: toml::de::Error| {
        let msg = e.message().trim().to_string();
        match e.span() {
            Some(s) => {
                let (l, c) = line_col(text, s.start);
                CliError::validation(format!("line {l}, column {c}: {msg}"))
            }
            None => CliError::validation(msg),
        }
    })
}

pub fn print_job(job: &JobFile) -> CliResult<String> {
    toml::to_string(job).map_err(|e| CliError::validation(e.to_string()))
}

pub fn field_spec(value: Option<&FieldValue>) -> CliResult<FieldSpec> {
    match value {
        None => Ok(FieldSpec::Prime(DEFAULT_PRIME)),
        Some(FieldValue::Prime(p)) => Ok(FieldSpec::Prime(*p)),
        Some(FieldValue::Name(s)) => match s.trim() {
            "QQ" | "Q" | "rationals" => Ok(FieldSpec::Rationals),
            t => t
                .trim_start_matches("GF(")
                .trim_end_matches(')')
                .parse()
                .map(FieldSpec::Prime)
                .map_err(|_| CliError::validation(format!("unknown field '{s}' (use a prime or QQ)"))),
        },
    }
}

fn symbols_of(ring: &RingBlock) -> CliResult<Symbols> {
    match ring.kind {
        RingKind::Polynomial => {
            if ring.variables.is_empty() {
                return Err(CliError::validation("[ring] polynomial rings need variables"));
            }
            Ok(Symbols::Variables(ring.variables.clone()))
        }
        RingKind::Semigroup => {
            if ring.generators.is_empty() {
                return Err(CliError::validation("[ring] semigroup rings need generators"));
            }
            if !ring.names.is_empty() && ring.names.len() != ring.generators.len() {
                return Err(CliError::validation("[ring] names must match generators one to one"));
            }
            Ok(Symbols::Semigroup {
                names: ring.names.clone(),
                generators: ring.generators.clone(),
            })
        }
    }
}

/// Error located at a character inside a quoted TOML string.
fn located(source: &str, s: &Spanned<String>, e: ParseError) -> CliError {
    let (l, c) = line_col(source, s.span().start + 1 + e.offset);
    CliError::validation(format!("line {l}, column {c}: {} in \"{}\"", e.message, s.get_ref()))
}

fn degree_of(ring: &RingBlock, exps: &[u32]) -> usize {
    match ring.kind {
        RingKind::Semigroup => exps[0] as usize,
        RingKind::Polynomial => exps
            .iter()
            .enumerate()
            .map(|(j, &e)| e as usize * ring.weights.get(j).copied().unwrap_or(1) as usize)
            .sum(),
    }
}

/// D = (n_max + r + 2)·maxdeg(I) + maxdeg(M) + 8 with r = r_max if given,
/// else 2, and n_max the largest n/n_max mentioned anywhere in the job.
pub fn recommended_truncation(job: &JobFile, source: &str) -> CliResult<usize> {
    let sym = symbols_of(&job.ring)?;
    let maxdeg = |list: &[Spanned<String>]| -> CliResult<usize> {
        let mut m = 0;
        for s in list {
            for (_, e) in parse_polynomial(s.get_ref(), &sym).map_err(|e| located(source, s, e))? {
                m = m.max(degree_of(&job.ring, &e));
            }
        }
        Ok(m)
    };
    let mut deg_i = 0;
    for list in job.ideals.values() {
        deg_i = deg_i.max(maxdeg(list)?);
    }
    let mut deg_m = 0;
    for m in job.modules.values() {
        for v in &m.generators {
            deg_m = deg_m.max(maxdeg(v)?);
        }
    }
    let mut n = 1;
    for p in std::iter::once(&job.params).chain(job.checks.iter().map(|c| &c.params)) {
        n = n.max(p.n.unwrap_or(1)).max(p.n_max.unwrap_or(1));
    }
    let r = job.params.r_max.unwrap_or(2);
    Ok((n + r + 2) * deg_i + deg_m + 8)
}

pub struct Session<F: Field> {
    pub job: JobFile,
    pub source: String,
    pub ring: Ring<F>,
    pub symbols: Symbols,
    pub ideals: BTreeMap<String, Submodule<F>>,
    pub modules: BTreeMap<String, Presented<F>>,
    pub warnings: Vec<String>,
    cache: Mutex<HashMap<String, Arc<Analysis<F>>>>,
}

impl<F: Field> Session<F> {
    pub fn new(job: JobFile, source: &str, field: F) -> CliResult<Self> {
        let symbols = symbols_of(&job.ring)?;
        let mut warnings = Vec::new();
        let truncation = match job.ring.truncation {
            Some(d) => d,
            None => {
                let d = recommended_truncation(&job, source)?;
                warnings.push(format!("truncation not given; using the recommended D = {d}"));
                d
            }
        };
        let presentation = match job.ring.kind {
            RingKind::Semigroup => {
                let mut p = RingPresentation::semigroup(&job.ring.generators, truncation);
                p.variables = job.ring.names.clone();
                p
            }
            RingKind::Polynomial => {
                let mut quotient = Vec::new();
                for q in &job.ring.quotient {
                    let terms = parse_polynomial(q.get_ref(), &symbols).map_err(|e| located(source, q, e))?;
                    match terms.as_slice() {
                        [(1, e)] => quotient.push(e.clone()),
                        _ => {
                            return Err(CliError::validation(format!(
                                "quotient entry \"{}\" must be a single monomial",
                                q.get_ref()
                            )))
                        }
                    }
                }
                let vars: Vec<&str> = job.ring.variables.iter().map(|s| s.as_str()).collect();
                let mut p = RingPresentation::polynomial(&vars, quotient, truncation);
                if !job.ring.weights.is_empty() {
                    p.weights = job.ring.weights.clone();
                }
                p
            }
        };
        let ring = build_ring(field.clone(), presentation.with_field(field.spec()))?;
        let mut session = Session {
            job: job.clone(),
            source: source.to_string(),
            ring,
            symbols,
            ideals: BTreeMap::new(),
            modules: BTreeMap::new(),
            warnings,
            cache: Mutex::new(HashMap::new()),
        };
        for (name, gens) in &job.ideals {
            if name == "R" {
                return Err(CliError::validation("the name R is reserved for the ring"));
            }
            if gens.is_empty() {
                return Err(CliError::validation(format!("ideal {name} has no generators")));
            }
            let elems = gens
                .iter()
                .map(|g| session.element_at(g))
                .collect::<CliResult<Vec<_>>>()?;
            session.ideals.insert(name.clone(), Submodule::ideal(&session.ring, &elems)?);
        }
        let seed = job.params.seed.unwrap_or(0);
        for (name, m) in &job.modules {
            if name == "R" || job.ideals.contains_key(name) {
                return Err(CliError::validation(format!("module name {name} clashes with an ideal or R")));
            }
            let mut vecs = Vec::new();
            for v in &m.generators {
                if v.len() != m.rank {
                    return Err(CliError::validation(format!(
                        "module {name}: generator with {} entries, rank is {}",
                        v.len(),
                        m.rank
                    )));
                }
                vecs.push(v.iter().map(|c| session.element_at(c)).collect::<CliResult<Vec<_>>>()?);
            }
            if vecs.is_empty() {
                return Err(CliError::validation(format!("module {name} has no generators")));
            }
            let p = present_module(&session.ring, m.rank, &vecs, m.shifts.clone(), seed)?;
            if let Some(note) = &p.note {
                session.warnings.push(format!("module {name}: {note}"));
            }
            session.modules.insert(name.clone(), p);
        }
        Ok(session)
    }

    fn element_at(&self, s: &Spanned<String>) -> CliResult<RingElement<F>> {
        let terms = parse_polynomial(s.get_ref(), &self.symbols).map_err(|e| located(&self.source, s, e))?;
        self.element_from_terms(&terms)
            .map_err(|e| {
                let (l, c) = line_col(&self.source, s.span().start);
                CliError { message: format!("line {l}, column {c}: {}", e.message), ..e }
            })
    }

    pub fn element(&self, text: &str) -> CliResult<RingElement<F>> {
        let terms = parse_polynomial(text, &self.symbols)
            .map_err(|e| CliError::validation(format!("{e} in \"{text}\"")))?;
        self.element_from_terms(&terms)
    }

    fn element_from_terms(&self, terms: &[(i64, Vec<u32>)]) -> CliResult<RingElement<F>> {
        let f = self.ring.field();
        let mut out = RingElement::zero(&self.ring);
        for (c, e) in terms {
            match self.ring.classify(e) {
                Product::Mono(m) => out.add_term(m, &f.from_i64(*c)),
                Product::Zero if self.ring.is_semigroup() => {
                    return Err(CliError::validation(format!("t^{} is not in the semigroup", e[0])));
                }
                Product::Zero => {}
                Product::Overflow => {
                    return Err(CliError::validation(format!(
                        "a term has degree above the truncation {}",
                        self.ring.truncation()
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Evaluates an ideal expression: names (or R), powers, and
    /// parenthesized generator lists joined by `+`.
    pub fn ideal(&self, expr: &str) -> CliResult<Submodule<F>> {
        let terms = parse_expression(expr).map_err(|e| CliError::validation(format!("{e} in \"{expr}\"")))?;
        let mut acc: Option<Submodule<F>> = None;
        for t in terms {
            let part = match t {
                ExprTerm::Named { name, power } => {
                    let base = if name == "R" {
                        Submodule::unit_ideal(&self.ring)
                    } else {
                        self.ideals.get(&name).cloned().ok_or_else(|| {
                            if self.ideals.is_empty() {
                                CliError::validation(format!("ideal {name} is not defined: the [ideals] table is empty"))
                            } else {
                                CliError::validation(format!("ideal {name} is not defined"))
                            }
                        })?
                    };
                    Submodule::power(&base, power)?
                }
                ExprTerm::Generators(gens) => {
                    let elems = gens.iter().map(|g| self.element(g)).collect::<CliResult<Vec<_>>>()?;
                    Submodule::ideal(&self.ring, &elems)?
                }
            };
            acc = Some(match acc {
                None => part,
                Some(a) => a.sum(&part)?,
            });
        }
        acc.ok_or_else(|| CliError::validation("empty ideal expression"))
    }

    /// A module name from `[modules]`, or an ideal expression viewed as a
    /// submodule of R.
    pub fn module(&self, expr: &str) -> CliResult<Submodule<F>> {
        match self.modules.get(expr.trim()) {
            Some(p) => Ok(p.module.clone()),
            None => self.ideal(expr),
        }
    }

    pub fn params(&self, over: &Params) -> Params {
        self.job.params.overlay(over)
    }

    pub fn default_ideal(&self, p: &Params) -> CliResult<String> {
        if let Some(i) = &p.ideal {
            return Ok(i.clone());
        }
        if self.ideals.contains_key("I") || self.ideals.len() != 1 {
            return Ok("I".into());
        }
        Ok(self.ideals.keys().next().unwrap().clone())
    }

    /// Shared per-(ideal, module, options) analysis, so checks in one job
    /// reuse powers, colons and certificates.
    pub fn analysis(&self, ideal: &str, module: &str, opts: &Options) -> CliResult<Arc<Analysis<F>>> {
        let key = format!("{ideal}|{module}|{opts:?}");
        if let Some(a) = self.cache.lock().unwrap().get(&key) {
            return Ok(a.clone());
        }
        let an = Arc::new(Analysis::new(&self.ideal(ideal)?, &self.module(module)?, opts)?);
        self.cache.lock().unwrap().insert(key, an.clone());
        Ok(an)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_and_column() {
        let t = "a\nbc\ndef";
        assert_eq!(line_col(t, 0), (1, 1));
        assert_eq!(line_col(t, 3), (2, 2));
        assert_eq!(line_col(t, 5), (3, 1));
    }

    #[test]
    fn params_from_command_line() {
        let mut p = Params::default();
        p.set("n=3").unwrap();
        p.set("element = x^22 + y^22").unwrap();
        p.set("field=1000003").unwrap();
        p.set("use_rho=false").unwrap();
        assert_eq!(p.n, Some(3));
        assert_eq!(p.element.as_deref(), Some("x^22 + y^22"));
        assert_eq!(p.field.as_deref(), Some("1000003"));
        assert_eq!(p.use_rho, Some(false));
        assert!(p.set("bogus=1").is_err());
        assert!(p.set("n=x").is_err());
        assert!(p.set("n").is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let base = Params {
            n: Some(1),
            seed: Some(5),
            ..Params::default()
        };
        let top = Params {
            n: Some(2),
            ..Params::default()
        };
        let o = base.overlay(&top);
        assert_eq!((o.n, o.seed), (Some(2), Some(5)));
    }

    #[test]
    fn field_names() {
        assert_eq!(field_spec(None).unwrap(), FieldSpec::Prime(32003));
        assert_eq!(field_spec(Some(&FieldValue::Name("QQ".into()))).unwrap(), FieldSpec::Rationals);
        assert_eq!(field_spec(Some(&FieldValue::Name("GF(101)".into()))).unwrap(), FieldSpec::Prime(101));
        assert!(field_spec(Some(&FieldValue::Name("reals".into()))).is_err());
    }
}
