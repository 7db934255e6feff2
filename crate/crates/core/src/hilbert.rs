use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{Length, Submodule};
use crate::ratliff::{Analysis, Options, Tower};
use crate::ring::RingElement;

/// Eventual polynomial of an integer sequence H(0..=n_top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub dim: usize,
    /// e_0..e_dim with P(X) = Σ (-1)^i e_i C(X+dim-i, dim-i).
    pub e: Vec<i64>,
    pub eta: usize,
    /// Numerator h with Σ H(n) t^n = h(t)/(1-t)^{dim+1}.
    pub numerator: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct HilbertData {
    /// H(n) = ℓ(M/I^{n+1}M) for n = 0..=n_top.
    pub values: Vec<u64>,
    /// None when no polynomial is confirmed by two extra points.
    pub fit: Option<Fit>,
}

impl HilbertData {
    pub fn n_top(&self) -> usize {
        self.values.len() - 1
    }

    pub fn eta_unresolved(&self) -> bool {
        self.fit.is_none()
    }

    fn resolved(&self, what: &str) -> Result<&Fit> {
        self.fit
            .as_ref()
            .ok_or_else(|| Error::Horizon(format!("{what}: eta unresolved through n = {}", self.n_top())))
    }
}

pub(crate) fn binom(n: i128, k: usize) -> i128 {
    // generalized: n may be negative
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

impl Fit {
    pub fn eval(&self, x: i64) -> i128 {
        let r = self.dim;
        (0..=r)
            .map(|i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                s * self.e[i] as i128 * binom(x as i128 + (r - i) as i128, r - i)
            })
            .sum()
    }
}

/// Smallest r whose degree-≤r interpolant of the last r+1 values agrees with
/// a suffix of at least r+3 values; eta is where that suffix begins.
pub fn fit(values: &[u64]) -> Option<Fit> {
    let len = values.len();
    let v: Vec<i128> = values.iter().map(|&x| x as i128).collect();
    for r in 0..len {
        if len < r + 3 {
            break;
        }
        let n0 = len - 1 - r;
        // forward differences at n0
        let mut diffs = Vec::with_capacity(r + 1);
        let mut row: Vec<i128> = v[n0..].to_vec();
        for _ in 0..=r {
            diffs.push(row[0]);
            row = row.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let p = |n: i128| -> i128 { (0..=r).map(|i| diffs[i] * binom(n - n0 as i128, i)).sum() };
        let mut start = n0;
        while start > 0 && p(start as i128 - 1) == v[start - 1] {
            start -= 1;
        }
        if len - start < r + 3 {
            continue;
        }
        // a_k = ∇^k P(-1)
        let a: Vec<i128> = (0..=r)
            .map(|k| {
                (0..=k)
                    .map(|t| {
                        let s = if t % 2 == 0 { 1 } else { -1 };
                        s * binom(k as i128, t) * p(-1 - t as i128)
                    })
                    .sum()
            })
            .collect();
        let e: Vec<i64> = (0..=r)
            .map(|i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                (s * a[r - i]) as i64
            })
            .collect();
        let mut numerator: Vec<i64> = (0..len)
            .map(|j| {
                (0..=(r + 1).min(j))
                    .map(|i| {
                        let s = if i % 2 == 0 { 1 } else { -1 };
                        s * binom((r + 1) as i128, i) * v[j - i]
                    })
                    .sum::<i128>() as i64
            })
            .collect();
        while numerator.last() == Some(&0) {
            numerator.pop();
        }
        return Some(Fit {
            dim: r,
            e,
            eta: start,
            numerator,
        });
    }
    None
}

/// ℓ(M/(I^{n+1}M + extra)) for n = 0..=n_top.
/// With `adaptive`, stops quietly at the first n the horizon cannot certify.
pub(crate) fn lengths<F: Field>(tower: &Tower<F>, n_top: usize, adaptive: bool) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n_top + 1);
    for n in 0..=n_top {
        let bottom = match tower.dividend(n + 1) {
            Ok(b) if !(adaptive && b.is_truncated()) => b,
            Ok(_) | Err(Error::Horizon(_)) | Err(Error::Overflow { .. }) if adaptive && n > 0 => break,
            Ok(b) => b,
            Err(e) => return Err(e),
        };
        let len = Submodule::quotient_length(&tower.module, &bottom)?;
        if adaptive && n > 0 && matches!(len, Length::Unknown { .. }) {
            break;
        }
        match len {
            Length::Finite(l) => out.push(l),
            Length::Infinite => {
                return Err(Error::Validation(
                    "the ideal is not primary to the maximal ideal on this module".into(),
                ))
            }
            Length::Unknown { through } => {
                return Err(Error::Horizon(format!(
                    "length of M/I^{}M not certified below degree {through}",
                    n + 1
                )))
            }
        }
    }
    Ok(out)
}

fn data_for<F: Field>(tower: &Tower<F>, n_top: usize, adaptive: bool) -> Result<HilbertData> {
    let values = lengths(tower, n_top, adaptive)?;
    let fit = fit(&values);
    Ok(HilbertData { values, fit })
}

pub fn hilbert_function<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, n_top: usize) -> Result<HilbertData> {
    data_for(&Tower::new(ideal, module, None), n_top, false)
}

/// Hilbert data of M/(extra) with respect to I.
pub fn hilbert_function_mod<F: Field>(
    ideal: &Submodule<F>,
    module: &Submodule<F>,
    extra: &Submodule<F>,
    n_top: usize,
) -> Result<HilbertData> {
    data_for(&Tower::new(ideal, module, Some(extra.clone())), n_top, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuperficialMethod {
    ColonWindow,
    CoefficientMatch,
}

#[derive(Clone, Debug)]
pub struct SuperficialCertificate<F: Field> {
    pub x: RingElement<F>,
    /// Least c for the colon window; None for coefficient-match.
    pub c: Option<usize>,
    pub n_top: usize,
    pub method: SuperficialMethod,
}

fn colon_window<F: Field>(an: &Analysis<F>, x: &RingElement<F>, n_top: usize) -> Result<Option<usize>> {
    let tower = an.tower();
    let xi = Submodule::ideal(x.ring(), std::slice::from_ref(x))?;
    let mut colons = Vec::with_capacity(n_top + 1);
    for n in 0..=n_top {
        colons.push(Submodule::colon_module(&tower.dividend(n + 1)?, &xi, Some(&an.module))?);
    }
    'c: for c in 0..n_top {
        let ic = tower.dividend(c)?;
        for (n, col) in colons.iter().enumerate().skip(c) {
            if !col.intersect(&ic)?.equals(&tower.dividend(n)?)? {
                continue 'c;
            }
        }
        return Ok(Some(c));
    }
    Ok(None)
}

fn coefficient_match<F: Field>(an: &Analysis<F>, x: &RingElement<F>, n_top: usize) -> Result<bool> {
    let n_top = n_top.max(an.opts.n_top);
    let Some(full) = working_data(an, n_top, true)?.fit else { return Ok(false) };
    let Some(cut) = quotient_data(an, x, n_top, true)?.fit else { return Ok(false) };
    if full.dim == 0 || cut.dim + 1 != full.dim {
        return Ok(false);
    }
    Ok((0..full.dim).all(|i| full.e[i] == cut.e[i]))
}

/// Hilbert data of the working module M/H⁰_I(M).
pub(crate) fn working_data<F: Field>(an: &Analysis<F>, n_top: usize, adaptive: bool) -> Result<HilbertData> {
    data_for(an.tower(), n_top, adaptive)
}

/// Hilbert data of N/xN for the working module N.
pub(crate) fn quotient_data<F: Field>(
    an: &Analysis<F>,
    x: &RingElement<F>,
    n_top: usize,
    adaptive: bool,
) -> Result<HilbertData> {
    let xm = Submodule::ideal_times(&Submodule::ideal(x.ring(), std::slice::from_ref(x))?, &an.module)?;
    let extra = match &an.tower().extra {
        Some(h) => xm.sum(h)?,
        None => xm,
    };
    data_for(&Tower::new(&an.ideal, &an.module, Some(extra)), n_top, adaptive)
}

pub(crate) fn superficial_in<F: Field>(
    an: &Analysis<F>,
    x: &RingElement<F>,
    n_top: usize,
) -> Result<Option<SuperficialCertificate<F>>> {
    if x.homogeneous_degree().is_none() {
        return Err(Error::Validation(format!("{x} is not homogeneous")));
    }
    if !an.ideal.contains_element(x)? {
        return Err(Error::Validation(format!("{x} is not in the ideal")));
    }
    if let Some(c) = colon_window(an, x, n_top)? {
        return Ok(Some(SuperficialCertificate {
            x: x.clone(),
            c: Some(c),
            n_top,
            method: SuperficialMethod::ColonWindow,
        }));
    }
    if coefficient_match(an, x, n_top)? {
        return Ok(Some(SuperficialCertificate {
            x: x.clone(),
            c: None,
            n_top,
            method: SuperficialMethod::CoefficientMatch,
        }));
    }
    Ok(None)
}

pub fn superficial_check<F: Field>(
    x: &RingElement<F>,
    ideal: &Submodule<F>,
    module: &Submodule<F>,
    n_top: usize,
) -> Result<Option<SuperficialCertificate<F>>> {
    let an = Analysis::new(ideal, module, &Options::default())?;
    superficial_in(&an, x, n_top)
}

/// Candidates in order: single minimal-degree generators, the sum of the
/// first and last of them, then seeded random two-term combinations.
fn candidates<F: Field>(ideal: &Submodule<F>, trials: usize, seed: u64) -> Vec<RingElement<F>> {
    let gens = ideal.generator_elements();
    let mindeg = ideal.minimal_generators()[0].degree;
    let low: Vec<RingElement<F>> = gens
        .into_iter()
        .zip(ideal.minimal_generators())
        .filter(|(_, h)| h.degree == mindeg)
        .map(|(g, _)| g)
        .collect();
    let mut out = low.clone();
    if low.len() >= 2 {
        if let Ok(s) = low[0].add(low.last().unwrap()) {
            out.push(s);
        }
        let f = ideal.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let i = rng.gen_range(0..low.len());
            let mut j = rng.gen_range(0..low.len() - 1);
            if j >= i {
                j += 1;
            }
            let a = low[i].scale(&f.random_nonzero(&mut rng));
            let b = low[j].scale(&f.random_nonzero(&mut rng));
            if let Ok(s) = a.add(&b) {
                out.push(s);
            }
        }
    }
    out
}

pub(crate) fn find_superficial_in<F: Field>(an: &Analysis<F>) -> Result<Option<SuperficialCertificate<F>>> {
    let n_top = an.opts.n_top.min(4);
    for x in candidates(&an.ideal, an.opts.trials, an.opts.seed) {
        match superficial_in(an, &x, n_top) {
            Ok(Some(cert)) => return Ok(Some(cert)),
            Ok(None) => {}
            Err(Error::Horizon(_)) | Err(Error::Overflow { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

pub fn find_superficial<F: Field>(
    ideal: &Submodule<F>,
    module: &Submodule<F>,
    opts: &Options,
) -> Result<Option<SuperficialCertificate<F>>> {
    find_superficial_in(&Analysis::new(ideal, module, opts)?)
}

#[derive(Clone, Debug)]
pub struct EtaBound<F: Field> {
    /// η(x,N)+1 with η(x,N) = max(η(N), η(N/xN)).
    pub bound: usize,
    pub x: RingElement<F>,
    pub eta_module: usize,
    pub eta_quotient: usize,
    pub superficial: SuperficialCertificate<F>,
}

impl<F: Field> EtaBound<F> {
    pub fn eta(&self) -> usize {
        self.eta_module.max(self.eta_quotient)
    }
}

/// The ρ bound from a verified superficial element, or None when some
/// ingredient (m-primary lengths, a resolved fit, a superficial x) is missing.
pub(crate) fn eta_bound<F: Field>(an: &Analysis<F>) -> Result<Option<EtaBound<F>>> {
    if an.torsion.is_everything {
        return Ok(None);
    }
    let n_top = an.opts.n_top;
    let soft = |r: Result<HilbertData>| match r {
        Ok(d) => Ok(d.fit),
        Err(Error::Horizon(_)) | Err(Error::Validation(_)) | Err(Error::Overflow { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let Some(full) = soft(working_data(an, n_top, true))? else { return Ok(None) };
    if full.dim == 0 {
        return Ok(None);
    }
    let Some(cert) = find_superficial_in(an)? else { return Ok(None) };
    let Some(cut) = soft(quotient_data(an, &cert.x, n_top, true))? else { return Ok(None) };
    let eta = full.eta.max(cut.eta);
    Ok(Some(EtaBound {
        bound: eta + 1,
        x: cert.x.clone(),
        eta_module: full.eta,
        eta_quotient: cut.eta,
        superficial: cert,
    }))
}

pub fn eta<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, opts: &Options) -> Result<Option<EtaBound<F>>> {
    eta_bound(&Analysis::new(ideal, module, opts)?)
}

#[derive(Clone, Debug)]
pub enum RhoMethod<F: Field> {
    Reduction { x: RingElement<F>, r: usize },
    Eta(EtaBound<F>),
    Heuristic { window: usize },
}

#[derive(Clone, Debug)]
pub struct RhoReport<F: Field> {
    pub rho: usize,
    /// Offset known to be ≥ ρ (for the heuristic method, the last index tried).
    pub bound: usize,
    pub method: RhoMethod<F>,
    /// Indices i with ĨⁱM̃ ≠ IⁱM.
    pub differences: Vec<usize>,
}

impl<F: Field> RhoReport<F> {
    pub fn is_certified(&self) -> bool {
        !matches!(self.method, RhoMethod::Heuristic { .. })
    }
}

pub fn rho_in<F: Field>(an: &Analysis<F>) -> Result<RhoReport<F>> {
    if !an.torsion.is_zero {
        return Err(Error::Validation("rho needs grade(I,M) > 0, but H0_I(M) is nonzero".into()));
    }
    let tower = an.tower();
    let method = if let Some(red) = an.reduction() {
        RhoMethod::Reduction {
            x: red.x.clone(),
            r: red.r,
        }
    } else if let Some(b) = eta_bound(an)? {
        RhoMethod::Eta(b)
    } else {
        RhoMethod::Heuristic {
            window: an.opts.window.max(3),
        }
    };
    let bound = match &method {
        RhoMethod::Reduction { r, .. } => (*r).max(1),
        RhoMethod::Eta(b) => b.bound,
        RhoMethod::Heuristic { .. } => 0,
    };
    let mut differences = Vec::new();
    if bound > 0 {
        for i in 1..bound {
            if !an.chain_module(i, bound)?.equals(&tower.module_power(i)?)? {
                differences.push(i);
            }
        }
        let rho = differences.last().map_or(1, |d| d + 1);
        return Ok(RhoReport {
            rho,
            bound,
            method,
            differences,
        });
    }
    let w = an.opts.window.max(3);
    let mut run = 0;
    let mut i = 1;
    loop {
        let tilde = an.rr_module(i)?;
        if tilde.value.equals(&tower.module_power(i)?)? {
            run += 1;
        } else {
            differences.push(i);
            run = 0;
        }
        if run >= w {
            break;
        }
        i += 1;
    }
    Ok(RhoReport {
        rho: differences.last().map_or(1, |d| d + 1),
        bound: i,
        method,
        differences,
    })
}

pub fn rho<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, opts: &Options) -> Result<RhoReport<F>> {
    rho_in(&Analysis::new(ideal, module, opts)?)
}

#[derive(Clone, Debug)]
pub struct BoundedClosure<F: Field> {
    pub ideal: Submodule<F>,
    pub module: Submodule<F>,
    pub rho: usize,
}

/// (I^{n+k}M : I^kM) and (I^{n+k}M :_M I^k) for k ≥ ρ.
pub fn bounded_closure_in<F: Field>(an: &Analysis<F>, rho: &RhoReport<F>, n: usize, k: usize) -> Result<BoundedClosure<F>> {
    if !rho.is_certified() {
        return Err(Error::Unsupported("rho is only heuristic here; no certified offset".into()));
    }
    if k < rho.rho {
        return Err(Error::Validation(format!("offset {k} is below rho = {}", rho.rho)));
    }
    Ok(BoundedClosure {
        ideal: an.chain_ideal(n, k)?,
        module: an.chain_module(n, k)?,
        rho: rho.rho,
    })
}

pub fn bounded_closure<F: Field>(
    ideal: &Submodule<F>,
    module: &Submodule<F>,
    n: usize,
    k: usize,
    opts: &Options,
) -> Result<BoundedClosure<F>> {
    let an = Analysis::new(ideal, module, opts)?;
    let rho = rho_in(&an)?;
    bounded_closure_in(&an, &rho, n, k)
}

/// ℓ(H⁰_I(M)) as the constant gap between the Hilbert polynomials of M and
/// M/H⁰_I(M).
pub fn torsion_length<F: Field>(an: &Analysis<F>, n_top: usize) -> Result<u64> {
    if an.torsion.is_zero {
        return Ok(0);
    }
    let full = hilbert_function(&an.ideal, &an.module, n_top)?;
    let cut = working_data(an, n_top, false)?;
    let (Some(a), Some(b)) = (&full.fit, &cut.fit) else {
        return Err(Error::Horizon("eta unresolved while measuring the torsion".into()));
    };
    let gap = a.eval(n_top as i64 + 1) - b.eval(n_top as i64 + 1);
    if a.dim != b.dim || a.eval(n_top as i64 + 2) - b.eval(n_top as i64 + 2) != gap || gap < 0 {
        return Err(Error::InternalCheck("torsion gap between Hilbert polynomials is not constant".into()));
    }
    Ok(gap as u64)
}

#[derive(Clone, Debug)]
pub struct DimOneReport {
    pub e0: i64,
    pub e1: i64,
    pub torsion_length: u64,
    pub length_mod_im: u64,
    /// ℓ(ĨⁿM̃/Ĩⁿ⁺¹M̃) for n = 0..=n_top.
    pub graded_lengths: Vec<u64>,
    /// Σ ℓ_n t^n = h(t)/(1-t).
    pub numerator: Vec<i64>,
    pub cohen_macaulay: bool,
    /// ℓ(M/Ĩⁿ⁺¹M̃) = e₀(n+1) − e₁ − ℓ(H⁰) holds from this n through n_top.
    pub tail_onset: Option<usize>,
    /// e₁ − e₀ + ℓ(M/IM).
    pub lhs: i64,
    pub inequality_holds: bool,
    pub equality_attained: bool,
    /// ĨM̃ = IM and ĨⁿM̃ = IⁿM + H⁰ for 2 ≤ n ≤ n_top.
    pub equality_criterion: bool,
}

pub fn dim_one_report_in<F: Field>(an: &Analysis<F>, n_top: usize) -> Result<DimOneReport> {
    let data = hilbert_function(&an.ideal, &an.module, n_top)?;
    let fit = data.resolved("dim_one_report")?;
    if fit.dim != 1 {
        return Err(Error::Validation(format!("dim_one_report needs dim M = 1, found {}", fit.dim)));
    }
    let (e0, e1) = (fit.e[0], fit.e[1]);
    let hlen = torsion_length(an, n_top)?;
    let tower = an.tower();
    let mut tildes = Vec::with_capacity(n_top + 1);
    for n in 1..=n_top + 1 {
        tildes.push(an.rr_module(n)?.value);
    }
    let mut cumulative = Vec::with_capacity(n_top + 1);
    for t in &tildes {
        match Submodule::quotient_length(&an.module, t)? {
            Length::Finite(l) => cumulative.push(l),
            _ => return Err(Error::Horizon("length of M modulo the closure not certified".into())),
        }
    }
    let graded_lengths: Vec<u64> = (0..cumulative.len())
        .map(|n| cumulative[n] - if n == 0 { 0 } else { cumulative[n - 1] })
        .collect();
    let mut numerator: Vec<i64> = (0..graded_lengths.len())
        .map(|j| graded_lengths[j] as i64 - if j == 0 { 0 } else { graded_lengths[j - 1] as i64 })
        .collect();
    while numerator.last() == Some(&0) {
        numerator.pop();
    }
    let cohen_macaulay = numerator.iter().all(|&h| h >= 0);
    let ok: Vec<bool> = cumulative
        .iter()
        .enumerate()
        .map(|(n, &l)| l as i64 == e0 * (n as i64 + 1) - e1 - hlen as i64)
        .collect();
    let tail_onset = ok.iter().rposition(|b| !b).map_or(Some(0), |i| (i + 1 < ok.len()).then_some(i + 1));
    let length_mod_im = data.values[0];
    let lhs = e1 - e0 + length_mod_im as i64;
    let bound = -(hlen as i64);
    let mut criterion = tildes[0].equals(&tower.module_power(1)?)?;
    let h = &an.torsion.module;
    for n in 2..=n_top {
        if !criterion {
            break;
        }
        criterion = tildes[n - 1].equals(&tower.module_power(n)?.sum(h)?)?;
    }
    Ok(DimOneReport {
        e0,
        e1,
        torsion_length: hlen,
        length_mod_im,
        graded_lengths,
        numerator,
        cohen_macaulay,
        tail_onset,
        lhs,
        inequality_holds: lhs >= bound,
        equality_attained: lhs == bound,
        equality_criterion: criterion,
    })
}

pub fn dim_one_report<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, n_top: usize, opts: &Options) -> Result<DimOneReport> {
    dim_one_report_in(&Analysis::new(ideal, module, opts)?, n_top)
}

#[derive(Clone, Debug)]
pub struct MaxElementReport {
    pub polynomials_agree: bool,
    pub contained_in_rr: bool,
    pub member: bool,
}

/// Whether J (with I ⊆ J) has the Hilbert polynomial of I on M and lies in r(I,M).
pub fn max_element_check<F: Field>(
    ideal: &Submodule<F>,
    j: &Submodule<F>,
    module: &Submodule<F>,
    n_top: usize,
    opts: &Options,
) -> Result<MaxElementReport> {
    if !j.contains(ideal)? {
        return Err(Error::Validation("max_element_check needs I ⊆ J".into()));
    }
    let an = Analysis::new(ideal, module, opts)?;
    if !an.torsion.is_zero {
        return Err(Error::Validation("max_element_check needs grade(I,M) > 0".into()));
    }
    let pi = hilbert_function(ideal, module, n_top)?;
    let pj = hilbert_function(j, module, n_top)?;
    let a = pi.resolved("Hilbert polynomial of I")?;
    let b = pj.resolved("Hilbert polynomial of J")?;
    let polynomials_agree = a.dim == b.dim && a.e == b.e;
    let rr = an.rr_ideal(1)?;
    let contained_in_rr = rr.value.contains(j)?;
    Ok(MaxElementReport {
        polynomials_agree,
        contained_in_rr,
        member: polynomials_agree && contained_in_rr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct oracle: evaluate Σ (-1)^i e_i C(X+r-i, r-i).
    fn poly_values(e: &[i64], n: usize) -> Vec<u64> {
        let r = e.len() - 1;
        (0..n)
            .map(|x| {
                (0..=r)
                    .map(|i| {
                        let s: i128 = if i % 2 == 0 { 1 } else { -1 };
                        s * e[i] as i128 * binom((x + r - i) as i128, r - i)
                    })
                    .sum::<i128>() as u64
            })
            .collect()
    }

    #[test]
    fn fit_of_binomials() {
        let v: Vec<u64> = (0..8).map(|n| ((n + 1) * (n + 2) / 2) as u64).collect();
        let f = fit(&v).unwrap();
        assert_eq!((f.dim, f.e.clone(), f.eta), (2, vec![1, 0, 0], 0));
        assert_eq!(f.numerator, vec![1]);
    }

    #[test]
    fn fit_with_late_onset() {
        let f = fit(&[1, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!((f.dim, f.e.clone(), f.eta), (1, vec![1, -1], 1));
        assert_eq!(f.numerator, vec![1, 1, -1]);
    }

    #[test]
    fn unresolved_when_too_short() {
        assert!(fit(&[1, 3, 4, 5]).is_none());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom(-1, 0), 1);
        assert_eq!(binom(-1, 2), 1);
        assert_eq!(binom(-2, 1), -2);
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(1, 2), 0);
    }

    proptest! {
        #[test]
        fn fit_recovers_polynomial(e0 in 1i64..20, e1 in 0i64..10, e2 in -5i64..5, head in prop::collection::vec(0u64..50, 0..3)) {
            let e = vec![e0, e1, e2];
            let mut v = poly_values(&e, 12);
            prop_assume!(v.iter().all(|&x| x < 1 << 40) && v.windows(2).all(|w| w[0] <= w[1]));
            // perturb the first values only
            for (i, h) in head.iter().enumerate() {
                v[i] = v[i].wrapping_add(*h);
            }
            let f = fit(&v).unwrap();
            prop_assert!(f.eta <= head.len());
            for (n, &x) in v.iter().enumerate().skip(f.eta) {
                prop_assert_eq!(f.eval(n as i64), x as i128);
            }
            if f.dim == 2 {
                prop_assert_eq!(f.e, e);
            }
        }
    }
}
