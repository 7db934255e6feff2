//! Structural identities checked on every (ideal, module) pair of a job.

use rrtool_core::hilbert::{bounded_closure_in, rho_in};
use rrtool_core::ratliff::{rr_ideal, verify_involution, Analysis, Certificate};
use rrtool_core::{Field, Result, Submodule};

use crate::job::Session;

#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub property: &'static str,
    pub pair: String,
    /// None when the property does not apply (no certificate, nonzero torsion).
    pub passed: Option<bool>,
    pub detail: String,
}

fn record(
    out: &mut Vec<PropertyResult>,
    property: &'static str,
    pair: &str,
    r: Result<Option<(bool, String)>>,
) {
    let (passed, detail) = match r {
        Ok(Some((b, d))) => (Some(b), d),
        Ok(None) => (None, "not applicable".into()),
        Err(e) => (Some(false), e.to_string()),
    };
    out.push(PropertyResult {
        property,
        pair: pair.to_string(),
        passed,
        detail,
    });
}

/// Largest n used by the n-indexed identities.
const N_CHECK: usize = 2;

impl<F: Field> Session<F> {
    /// Module names to pair with the default ideal: R and every declared module.
    pub fn property_pairs(&self) -> Vec<String> {
        std::iter::once("R".to_string())
            .chain(self.modules.keys().cloned())
            .collect()
    }

    pub fn run_properties(&self, direct_sum: bool) -> Vec<PropertyResult> {
        let mut out = Vec::new();
        let p = self.params(&Default::default());
        let opts = p.options();
        let Ok(ideal_name) = self.default_ideal(&p) else { return out };
        for module_name in self.property_pairs() {
            let pair = format!("({ideal_name}, {module_name})");
            let an = match self.analysis(&ideal_name, &module_name, &opts) {
                Ok(a) => a,
                Err(e) => {
                    out.push(PropertyResult {
                        property: "setup",
                        pair,
                        passed: Some(false),
                        detail: e.to_string(),
                    });
                    continue;
                }
            };
            let ring_an = self.analysis(&ideal_name, "R", &opts).expect("ring pair builds when the module pair does");
            let i = an.ideal.clone();
            let m = an.module.clone();

            record(&mut out, "involution", &pair, (|| {
                let r = verify_involution(&i, &m, &opts)?;
                Ok(Some((r.fixpoint, format!("checked through degree {}", r.checked_through))))
            })());

            record(&mut out, "inclusion-chain", &pair, (|| {
                let mut ok = true;
                for n in 1..=N_CHECK {
                    let i_n = Submodule::power(&i, n)?;
                    let tilde = ring_an.rr_ideal(n)?.value;
                    let r = an.rr_ideal(n)?.value;
                    ok &= tilde.contains(&i_n)? && r.contains(&tilde)?;
                }
                Ok(Some((ok, format!("n = 1..{N_CHECK}"))))
            })());

            record(&mut out, "closure-invariance", &pair, (|| {
                let tilde = ring_an.rr_ideal(1)?.value;
                let a = rr_ideal(&tilde, &m, 1, &opts)?.value;
                let b = an.rr_ideal(1)?.value;
                Ok(Some((a.equals(&b)?, "r(closure of I, M) vs r(I, M)".into())))
            })());

            record(&mut out, "module-shift", &pair, (|| {
                let base = an.rr_ideal(1)?.value;
                let mut ok = true;
                for s in 1..=2 {
                    let ism = Submodule::ideal_times(&Submodule::power(&i, s)?, &m)?;
                    ok &= rr_ideal(&i, &ism, 1, &opts)?.value.equals(&base)?;
                }
                Ok(Some((ok, "r(I, I^s M) for s = 1, 2".into())))
            })());

            record(&mut out, "superficial-colon", &pair, (|| {
                if !an.torsion.is_zero {
                    return Ok(None);
                }
                let x = match an.rr_ideal(1)?.certificate {
                    Certificate::Reduction { x, .. } | Certificate::Rho { x, .. } => x,
                    _ => return Ok(None),
                };
                let xi = Submodule::ideal(i.ring(), std::slice::from_ref(&x))?;
                let mut ok = true;
                for n in 1..=N_CHECK {
                    let upper = an.rr_ideal(n + 1)?.value;
                    ok &= Submodule::colon_ideal(&upper, &xi)?.equals(&an.rr_ideal(n)?.value)?;
                }
                Ok(Some((ok, format!("x = {x}, n = 1..{N_CHECK}"))))
            })());

            record(&mut out, "bounded-closure", &pair, (|| {
                if !an.torsion.is_zero {
                    return Ok(None);
                }
                let rho = rho_in(&an)?;
                if !rho.is_certified() {
                    return Ok(None);
                }
                let k0 = rho.bound.max(rho.rho);
                let mut ok = true;
                for n in 1..=N_CHECK {
                    let chain = an.rr_ideal(n)?.value;
                    for k in [k0, k0 + 1] {
                        ok &= bounded_closure_in(&an, &rho, n, k)?.ideal.equals(&chain)?;
                    }
                }
                Ok(Some((ok, format!("rho = {}, k = {k0}, {}", rho.rho, k0 + 1))))
            })());

            let filtration = an.filtration(4);
            record(&mut out, "recursion-onset", &pair, match &filtration {
                Ok(f) if an.torsion.is_everything => Ok(Some((true, format!("torsion module; onset {:?}", f.recursion_onset)))),
                Ok(f) => Ok(Some((f.recursion_onset.is_some(), format!("onset {:?}", f.recursion_onset)))),
                Err(e) => Err(e.clone()),
            });
            record(&mut out, "multiplicativity", &pair, match &filtration {
                Ok(f) => Ok(Some((f.multiplicative && f.descending, "terms n = 1..4".into()))),
                Err(e) => Err(e.clone()),
            });

            record(&mut out, "closure-times-module", &pair, tail_identity(&an));
        }
        if direct_sum {
            for module_name in self.modules.keys() {
                let pair = format!("({ideal_name}, {module_name} + R)");
                record(&mut out, "direct-sum", &pair, (|| {
                    let an = self.analysis(&ideal_name, module_name, &opts).map_err(to_core)?;
                    let ring_an = self.analysis(&ideal_name, "R", &opts).map_err(to_core)?;
                    let sum = Submodule::direct_sum(&an.module, &ring_an.module)?;
                    let joint = rr_ideal(&an.ideal, &sum, 1, &opts)?.value;
                    let meet = an.rr_ideal(1)?.value.intersect(&ring_an.rr_ideal(1)?.value)?;
                    Ok(Some((joint.equals(&meet)?, "r(I, M + R) vs r(I, M) ∩ r(I, R)".into())))
                })());
            }
        }
        out
    }
}

fn to_core(e: crate::error::CliError) -> rrtool_core::Error {
    rrtool_core::Error::Validation(e.message)
}

/// ĨⁿM̃ = IⁿM + H⁰ from the certified offset on (or from n = 3 when no
/// certified offset exists), for two consecutive n.
fn tail_identity<F: Field>(an: &Analysis<F>) -> Result<Option<(bool, String)>> {
    if an.torsion.is_everything {
        return Ok(None);
    }
    let start = if an.torsion.is_zero {
        let rho = rho_in(an)?;
        if rho.is_certified() {
            rho.rho
        } else {
            3
        }
    } else {
        3
    };
    let mut ok = true;
    for n in start..start + 2 {
        let inm = Submodule::ideal_times(&Submodule::power(&an.ideal, n)?, &an.module)?;
        ok &= an.rr_module(n)?.value.equals(&inm.sum(&an.torsion.module)?)?;
    }
    Ok(Some((ok, format!("n = {start}, {}", start + 1))))
}
