use std::fmt::Write as _;

use rrtool_core::closure::integral_closure;
use rrtool_core::hilbert::{
    bounded_closure_in, dim_one_report_in, find_superficial, hilbert_function, max_element_check, rho_in,
    superficial_check, torsion_length,
};
use rrtool_core::ratliff::{closure_witness_module, find_principal_reduction, verify_involution};
use rrtool_core::{Field, Submodule};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, Kind};
use crate::job::{Params, Session};
use crate::output::{self, render_submodule};

pub const COMMANDS: &[&str] = &[
    "rr-ideal",
    "rr-closure",
    "chain-term",
    "filtration",
    "hilbert",
    "dim-one",
    "reduction",
    "superficial",
    "rho",
    "bounded-closure",
    "closure-witness",
    "integral-closure",
    "verify-involution",
    "inclusion-chain",
    "torsion",
    "max-element",
];

pub struct Outcome<F: Field> {
    pub outputs: Value,
    /// The primary ideal or submodule result, for expectations.
    pub value: Option<Submodule<F>>,
    /// Whether the answer carries a stability certificate (None when the
    /// command has no such notion).
    pub certified: Option<bool>,
    /// A theorem-backed identity failed on the computed data.
    pub violation: Option<String>,
    pub warnings: Vec<String>,
    pub report: String,
}

impl<F: Field> Outcome<F> {
    fn new(outputs: Value) -> Self {
        Outcome {
            outputs,
            value: None,
            certified: None,
            violation: None,
            warnings: Vec::new(),
            report: String::new(),
        }
    }
}

/// Chain values must be known through the truncation; a partial answer
/// means the horizon ran out.
fn complete<F: Field>(m: &Submodule<F>, what: &str) -> CliResult<()> {
    if m.is_complete() {
        return Ok(());
    }
    Err(CliError {
        kind: Kind::Horizon,
        message: format!(
            "{what} is only known through degree {} of {}; raise [ring].truncation",
            m.horizon(),
            m.ambient().truncation()
        ),
    })
}

fn note_of<F: Field>(m: &Submodule<F>, what: &str, warnings: &mut Vec<String>) {
    if m.is_truncated() {
        warnings.push(format!("{what}: generators above the truncation were dropped"));
    }
    if !m.is_complete() {
        warnings.push(format!("{what}: known only through degree {}", m.horizon()));
    }
}

impl<F: Field> Session<F> {
    pub fn run(&self, command: &str, over: &Params) -> CliResult<Outcome<F>> {
        let p = self.params(over);
        let opts = p.options();
        let ideal = self.default_ideal(&p)?;
        let module = p.module.clone().unwrap_or_else(|| "R".into());
        let n = p.n.unwrap_or(1);
        let n_top = p.n_top.unwrap_or(opts.n_top);
        let mut rep = String::new();
        let out = match command {
            "rr-ideal" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let res = an.rr_ideal(n)?;
                complete(&res.value, "r(I^n, M)")?;
                let equals_power = res.value.equals(&Submodule::power(&an.ideal, n)?)?;
                let mut v = output::chain(&res);
                v["n"] = json!(n);
                v["equals_power"] = json!(equals_power);
                let _ = writeln!(rep, "r({ideal}^{n}, {module}) = {}", render_submodule(&res.value));
                if module != "R" {
                    let tilde = self.analysis(&ideal, "R", &opts)?.rr_ideal(n)?;
                    v["equals_ring_closure"] = json!(tilde.value.equals(&res.value)?);
                }
                let _ = writeln!(rep, "certificate: {}", res.certificate.label());
                let mut o = Outcome::new(v);
                note_of(&res.value, "result", &mut o.warnings);
                o.certified = Some(res.certificate.is_certified());
                o.value = Some(res.value);
                o
            }
            "rr-closure" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let res = an.rr_module(n)?;
                complete(&res.value, "the closure of I^n M")?;
                let inm = Submodule::ideal_times(&Submodule::power(&an.ideal, n)?, &an.module)?;
                let mut v = output::chain(&res);
                v["n"] = json!(n);
                v["equals_power_times_module"] = json!(res.value.equals(&inm)?);
                v["equals_power_plus_torsion"] = json!(res.value.equals(&inm.sum(&an.torsion.module)?)?);
                let _ = writeln!(rep, "closure of {ideal}^{n}{module} = {}", render_submodule(&res.value));
                let _ = writeln!(rep, "certificate: {}", res.certificate.label());
                let mut o = Outcome::new(v);
                o.certified = Some(res.certificate.is_certified());
                o.value = Some(res.value);
                o
            }
            "chain-term" => {
                let k = p.k.unwrap_or(1);
                let an = self.analysis(&ideal, &module, &opts)?;
                let vi = an.chain_ideal(n, k)?;
                let vm = an.chain_module(n, k)?;
                complete(&vi, "the colon term")?;
                let _ = writeln!(rep, "({ideal}^{} {module} : {ideal}^{k} {module}) = {}", n + k, render_submodule(&vi));
                let mut o = Outcome::new(json!({
                    "n": n,
                    "k": k,
                    "value": output::submodule(&vi),
                    "module_value": output::submodule(&vm),
                }));
                o.value = Some(vi);
                o
            }
            "filtration" => {
                let n_max = p.n_max.unwrap_or(4);
                let an = self.analysis(&ideal, &module, &opts)?;
                let f = an.filtration(n_max)?;
                let terms: Vec<Value> = f
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let mut v = output::chain(t);
                        v["n"] = json!(i + 1);
                        v
                    })
                    .collect();
                for (i, t) in f.terms.iter().enumerate() {
                    let _ = writeln!(rep, "n={}: {} [{}]", i + 1, render_submodule(&t.value), t.certificate.label());
                }
                let _ = writeln!(rep, "recursion onset: {:?}", f.recursion_onset);
                let mut o = Outcome::new(json!({
                    "n_max": n_max,
                    "terms": terms,
                    "q": output::submodule(&f.q),
                    "recursion_onset": f.recursion_onset,
                    "principal_recursion_onset": f.principal_recursion_onset,
                    "principal_element": an.reduction().map(|r| r.x.to_string()),
                    "descending": f.descending,
                    "multiplicative": f.multiplicative,
                    "exhausted_at": f.exhausted_at,
                }));
                if let Some(e) = f.exhausted_at {
                    o.warnings.push(format!("horizon exhausted at n = {e}"));
                }
                if !f.descending || !f.multiplicative {
                    o.violation = Some("the filtration is not descending and multiplicative".into());
                }
                o.certified = Some(f.terms.iter().all(|t| t.certificate.is_certified()));
                o
            }
            "hilbert" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let data = hilbert_function(&an.ideal, &an.module, n_top)?;
                let mut v = json!({
                    "n_top": n_top,
                    "values": data.values,
                    "eta_unresolved": data.eta_unresolved(),
                    "torsion": {
                        "zero": an.torsion.is_zero,
                        "value": output::submodule(&an.torsion.module),
                    },
                });
                let _ = writeln!(rep, "H(n) = {:?}", data.values);
                if let Some(fit) = &data.fit {
                    v["dim"] = json!(fit.dim);
                    v["e"] = json!(fit.e);
                    v["eta"] = json!(fit.eta);
                    v["numerator"] = json!(fit.numerator);
                    let _ = writeln!(rep, "dim {} e {:?} eta {} numerator {:?}", fit.dim, fit.e, fit.eta, fit.numerator);
                    if fit.dim == 1 {
                        v["e1_minus_e0_plus_length"] = json!(fit.e[1] - fit.e[0] + data.values[0] as i64);
                    }
                    let len = if an.torsion.is_zero {
                        Some(0)
                    } else {
                        torsion_length(&an, n_top).ok()
                    };
                    v["torsion"]["length"] = json!(len);
                }
                let mut o = Outcome::new(v);
                if data.eta_unresolved() {
                    o.warnings.push("eta unresolved: raise n_top or the truncation".into());
                }
                o
            }
            "dim-one" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let r = dim_one_report_in(&an, n_top)?;
                let _ = writeln!(
                    rep,
                    "e0 {} e1 {} l(H0) {} lhs {} equality {}",
                    r.e0, r.e1, r.torsion_length, r.lhs, r.equality_attained
                );
                let mut o = Outcome::new(json!({
                    "n_top": n_top,
                    "e0": r.e0,
                    "e1": r.e1,
                    "torsion_length": r.torsion_length,
                    "length_mod_im": r.length_mod_im,
                    "graded_lengths": r.graded_lengths,
                    "numerator": r.numerator,
                    "cohen_macaulay": r.cohen_macaulay,
                    "tail_onset": r.tail_onset,
                    "lhs": r.lhs,
                    "inequality_holds": r.inequality_holds,
                    "equality_attained": r.equality_attained,
                    "equality_criterion": r.equality_criterion,
                }));
                if !r.inequality_holds {
                    o.violation = Some("e1 - e0 + l(M/IM) < 0".into());
                } else if r.equality_attained != r.equality_criterion {
                    o.violation = Some("equality and its criterion disagree".into());
                }
                o
            }
            "reduction" => {
                let i = self.ideal(&ideal)?;
                let red = find_principal_reduction(&i, opts.r_max, opts.trials, opts.seed)?;
                match &red {
                    Some(r) => {
                        let _ = writeln!(rep, "{ideal}^{} = ({})·{ideal}^{}", r.r + 1, r.x, r.r);
                    }
                    None => {
                        let _ = writeln!(rep, "no principal reduction with r <= {}", opts.r_max);
                    }
                }
                Outcome::new(json!({
                    "found": red.is_some(),
                    "x": red.as_ref().map(|r| output::element(&r.x)),
                    "x_text": red.as_ref().map(|r| r.x.to_string()),
                    "r": red.as_ref().map(|r| r.r),
                    "r_max": opts.r_max,
                }))
            }
            "superficial" => {
                let i = self.ideal(&ideal)?;
                let m = self.module(&module)?;
                let cert = match &p.element {
                    Some(e) => superficial_check(&self.element(e)?, &i, &m, p.n_top.unwrap_or(4))?,
                    None => find_superficial(&i, &m, &opts)?,
                };
                let _ = match &cert {
                    Some(c) => writeln!(rep, "{} is superficial (c = {:?})", c.x, c.c),
                    None => writeln!(rep, "no superficial element verified"),
                };
                Outcome::new(json!({
                    "verified": cert.is_some(),
                    "certificate": cert.as_ref().map(output::superficial),
                }))
            }
            "rho" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let r = rho_in(&an)?;
                let _ = writeln!(rep, "rho = {} (offset {} certified: {})", r.rho, r.bound, r.is_certified());
                let mut o = Outcome::new(json!({
                    "rho": r.rho,
                    "bound": r.bound,
                    "certified": r.is_certified(),
                    "method": output::rho_method(&r.method),
                    "differences": r.differences,
                }));
                o.certified = Some(r.is_certified());
                o
            }
            "bounded-closure" => {
                let k = p
                    .k
                    .ok_or_else(|| CliError::validation("bounded-closure needs the parameter k"))?;
                let an = self.analysis(&ideal, &module, &opts)?;
                let r = rho_in(&an)?;
                let b = bounded_closure_in(&an, &r, n, k)?;
                complete(&b.ideal, "the bounded closure")?;
                let _ = writeln!(rep, "(I^{} M : I^{k} M) = {}", n + k, render_submodule(&b.ideal));
                let mut o = Outcome::new(json!({
                    "n": n,
                    "k": k,
                    "rho": b.rho,
                    "value": output::submodule(&b.ideal),
                    "module_value": output::submodule(&b.module),
                }));
                o.certified = Some(true);
                o.value = Some(b.ideal);
                o
            }
            "closure-witness" => {
                let z = p
                    .element
                    .as_ref()
                    .ok_or_else(|| CliError::validation("closure-witness needs the parameter element"))?;
                let i = self.ideal(&ideal)?;
                let w = closure_witness_module(&i, &self.element(z)?, p.n_max.unwrap_or(4))?;
                let _ = writeln!(rep, "degree {} witness {} verified {}", w.degree, render_submodule(&w.module), w.verified);
                let mut o = Outcome::new(json!({
                    "degree": w.degree,
                    "verified": w.verified,
                    "module": output::submodule(&w.module),
                }));
                if !w.verified {
                    o.violation = Some("z·N is not contained in I·N".into());
                }
                o.value = Some(w.module);
                o
            }
            "integral-closure" => {
                let c = integral_closure(&self.ideal(&ideal)?)?;
                let _ = writeln!(rep, "closure of {ideal} = {}", render_submodule(&c));
                let mut o = Outcome::new(json!({"value": output::submodule(&c)}));
                o.value = Some(c);
                o
            }
            "verify-involution" => {
                let r = verify_involution(&self.ideal(&ideal)?, &self.module(&module)?, &opts)?;
                let _ = writeln!(rep, "r(r({ideal},{module}),{module}) = r({ideal},{module}): {}", r.fixpoint);
                let mut o = Outcome::new(json!({
                    "fixpoint": r.fixpoint,
                    "first_difference": r.first_difference,
                    "checked_through": r.checked_through,
                    "value": output::submodule(&r.r.value),
                    "certificate": output::certificate(&r.r.certificate),
                    "second_certificate": output::certificate(&r.rr.certificate),
                }));
                if !r.fixpoint {
                    o.violation = Some(format!("involution fails in degree {:?}", r.first_difference));
                }
                o.certified = Some(r.r.certificate.is_certified() && r.rr.certificate.is_certified());
                o.value = Some(r.r.value);
                o
            }
            "inclusion-chain" => {
                let i = self.ideal(&ideal)?;
                let tilde = self.analysis(&ideal, "R", &opts)?.rr_ideal(n)?;
                let r = self.analysis(&ideal, &module, &opts)?.rr_ideal(n)?;
                let i_n = Submodule::power(&i, n)?;
                let i_in_tilde = tilde.value.contains(&i_n)?;
                let tilde_in_r = r.value.contains(&tilde.value)?;
                let _ = writeln!(rep, "I^n in closure: {i_in_tilde}; closure in r(I^n,M): {tilde_in_r}");
                let mut o = Outcome::new(json!({
                    "n": n,
                    "i_in_tilde": i_in_tilde,
                    "tilde_in_r": tilde_in_r,
                    "i_strictly_smaller": !tilde.value.equals(&i_n)?,
                    "tilde_strictly_smaller": !r.value.equals(&tilde.value)?,
                    "tilde": output::submodule(&tilde.value),
                    "r": output::submodule(&r.value),
                }));
                if !i_in_tilde || !tilde_in_r {
                    o.violation = Some("inclusion chain I^n ⊆ closure ⊆ r(I^n,M) fails".into());
                }
                o.certified = Some(tilde.certificate.is_certified() && r.certificate.is_certified());
                o
            }
            "torsion" => {
                let an = self.analysis(&ideal, &module, &opts)?;
                let t = &an.torsion;
                let length = if t.is_zero { Some(0) } else { torsion_length(&an, n_top).ok() };
                let _ = writeln!(rep, "H0 = {} (length {:?})", render_submodule(&t.module), length);
                let mut o = Outcome::new(json!({
                    "zero": t.is_zero,
                    "everything": t.is_everything,
                    "stabilized_at": t.stabilized_at,
                    "length": length,
                    "value": output::submodule(&t.module),
                    "q": output::submodule(&an.q()?),
                }));
                o.value = Some(t.module.clone());
                o
            }
            "max-element" => {
                let j = p
                    .other
                    .as_ref()
                    .ok_or_else(|| CliError::validation("max-element needs the parameter other"))?;
                let r = max_element_check(&self.ideal(&ideal)?, &self.ideal(j)?, &self.module(&module)?, n_top, &opts)?;
                let _ = writeln!(rep, "{j} is a maximal element: {}", r.member);
                Outcome::new(json!({
                    "polynomials_agree": r.polynomials_agree,
                    "contained_in_rr": r.contained_in_rr,
                    "member": r.member,
                }))
            }
            other => {
                return Err(CliError::validation(format!(
                    "unknown command '{other}' (known: {}, verify-examples)",
                    COMMANDS.join(", ")
                )))
            }
        };
        let mut out = out;
        out.report = rep;
        Ok(out)
    }
}
