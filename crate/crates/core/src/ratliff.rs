use std::sync::{Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hilbert;
use crate::module::{Comparison, Submodule};
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub r_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Equal consecutive chain terms required by the heuristic certificate.
    pub window: usize,
    /// Largest n used when fitting Hilbert polynomials for the η bound.
    pub n_top: usize,
    pub use_rho: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            r_max: 6,
            trials: 16,
            seed: 0,
            window: 3,
            n_top: 8,
            use_rho: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionData<F: Field> {
    pub x: RingElement<F>,
    pub r: usize,
}

#[derive(Clone, Debug)]
pub enum Certificate<F: Field> {
    /// H⁰_I(M) = M, so the answer is the unit ideal (or M itself).
    Torsion,
    /// I^{r+1} = x·I^r with x regular on the working module.
    Reduction { x: RingElement<F>, r: usize },
    /// Offset k = η(x,M)+1 ≥ ρ for a verified superficial x.
    Rho { bound: usize, x: RingElement<F> },
    /// `window` consecutive equal chain terms, no proof of stability.
    Heuristic { window: usize },
}

impl<F: Field> Certificate<F> {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Certificate::Heuristic { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Certificate::Torsion => "torsion",
            Certificate::Reduction { .. } => "reduction-certified",
            Certificate::Rho { .. } => "rho-certified",
            Certificate::Heuristic { .. } => "heuristic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainResult<F: Field> {
    pub value: Submodule<F>,
    pub stabilized_at: usize,
    pub certificate: Certificate<F>,
    pub horizon: usize,
}

#[derive(Clone, Debug)]
pub struct Torsion<F: Field> {
    pub module: Submodule<F>,
    pub stabilized_at: usize,
    pub is_zero: bool,
    pub is_everything: bool,
}

/// H⁰_I(M) as the stable value of (0 :_M I^k).
pub fn h0<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>) -> Result<Torsion<F>> {
    let zero = Submodule::zero(module.ambient());
    let mut prev = zero;
    for k in 1.. {
        let next = Submodule::colon_module(&prev, ideal, Some(module)).map_err(exhausted)?;
        let cmp = next.compare(&prev)?;
        if next.horizon() < module.max_gen_degree().unwrap_or(0) {
            return Err(Error::Horizon("torsion chain ran past the horizon".into()));
        }
        if cmp.equal {
            let is_zero = next.is_zero();
            let is_everything = module.compare(&next)?.equal;
            return Ok(Torsion {
                module: if is_everything { module.clone() } else { next },
                stabilized_at: k - 1,
                is_zero,
                is_everything,
            });
        }
        prev = next;
    }
    unreachable!()
}

fn exhausted(e: Error) -> Error {
    match e {
        Error::Horizon(msg) => Error::Horizon(format!("horizon exhausted before stabilization: {msg}")),
        other => other,
    }
}

/// Cached powers I^k, I^kM and I^kM + extra.
pub(crate) struct Tower<F: Field> {
    pub ideal: Submodule<F>,
    pub module: Submodule<F>,
    pub extra: Option<Submodule<F>>,
    ideal_pows: Mutex<Vec<Submodule<F>>>,
    module_pows: Mutex<Vec<Submodule<F>>>,
    dividends: Mutex<Vec<Submodule<F>>>,
}

impl<F: Field> Tower<F> {
    pub fn new(ideal: &Submodule<F>, module: &Submodule<F>, extra: Option<Submodule<F>>) -> Self {
        let extra = extra.filter(|e| !e.is_zero());
        Tower {
            ideal: ideal.clone(),
            module: module.clone(),
            extra,
            ideal_pows: Mutex::new(vec![Submodule::unit_ideal(ideal.ring())]),
            module_pows: Mutex::new(vec![module.clone()]),
            dividends: Mutex::new(Vec::new()),
        }
    }

    pub fn ideal_power(&self, k: usize) -> Result<Submodule<F>> {
        let mut p = self.ideal_pows.lock().unwrap();
        while p.len() <= k {
            let next = Submodule::ideal_times(&self.ideal, p.last().unwrap())?;
            p.push(next);
        }
        Ok(p[k].clone())
    }

    pub fn module_power(&self, k: usize) -> Result<Submodule<F>> {
        let mut p = self.module_pows.lock().unwrap();
        while p.len() <= k {
            let next = Submodule::ideal_times(&self.ideal, p.last().unwrap())?;
            p.push(next);
        }
        Ok(p[k].clone())
    }

    /// I^kM + extra: the preimage of I^k·(M/extra).
    pub fn dividend(&self, k: usize) -> Result<Submodule<F>> {
        let Some(extra) = &self.extra else {
            return self.module_power(k);
        };
        let mut p = self.dividends.lock().unwrap();
        while p.len() <= k {
            let next = self.module_power(p.len())?.sum(extra)?;
            p.push(next);
        }
        Ok(p[k].clone())
    }
}

#[derive(Clone, Debug)]
enum Plan<F: Field> {
    Torsion,
    Offset { k: usize, certificate: Certificate<F> },
    Heuristic,
}

/// Everything about one pair (I, M): torsion, power caches and the chosen
/// certification route, shared by all the chain computations.
pub struct Analysis<F: Field> {
    pub ideal: Submodule<F>,
    pub module: Submodule<F>,
    pub opts: Options,
    pub torsion: Torsion<F>,
    tower: Tower<F>,
    plan: OnceLock<std::result::Result<Plan<F>, Error>>,
    reduction: OnceLock<Option<ReductionData<F>>>,
}

impl<F: Field> Analysis<F> {
    pub fn new(ideal: &Submodule<F>, module: &Submodule<F>, opts: &Options) -> Result<Self> {
        if !ideal.is_ideal() {
            return Err(Error::Validation("first argument must be an ideal".into()));
        }
        if ideal.is_zero() {
            return Err(Error::Validation("the ideal is zero".into()));
        }
        if module.is_zero() {
            return Err(Error::Validation("the module is zero".into()));
        }
        let torsion = h0(ideal, module)?;
        let extra = if torsion.is_zero || torsion.is_everything {
            None
        } else {
            Some(torsion.module.clone())
        };
        Ok(Analysis {
            ideal: ideal.clone(),
            module: module.clone(),
            opts: opts.clone(),
            torsion,
            tower: Tower::new(ideal, module, extra),
            plan: OnceLock::new(),
            reduction: OnceLock::new(),
        })
    }

    pub(crate) fn tower(&self) -> &Tower<F> {
        &self.tower
    }

    pub fn reduction(&self) -> Option<&ReductionData<F>> {
        self.reduction
            .get_or_init(|| {
                find_principal_reduction(&self.ideal, self.opts.r_max, self.opts.trials, self.opts.seed)
                    .ok()
                    .flatten()
            })
            .as_ref()
    }

    fn plan(&self) -> Result<Plan<F>> {
        self.plan
            .get_or_init(|| {
                if self.torsion.is_everything {
                    return Ok(Plan::Torsion);
                }
                if let Some(red) = self.reduction() {
                    return Ok(Plan::Offset {
                        k: red.r.max(1),
                        certificate: Certificate::Reduction {
                            x: red.x.clone(),
                            r: red.r,
                        },
                    });
                }
                if self.opts.use_rho {
                    if let Some(b) = hilbert::eta_bound(self)? {
                        return Ok(Plan::Offset {
                            k: b.bound,
                            certificate: Certificate::Rho {
                                bound: b.bound,
                                x: b.x,
                            },
                        });
                    }
                }
                Ok(Plan::Heuristic)
            })
            .clone()
    }

    /// (I^{n+k}M + H : I^kM).
    pub fn chain_ideal(&self, n: usize, k: usize) -> Result<Submodule<F>> {
        let top = self.tower.dividend(n + k)?;
        let bottom = self.tower.module_power(k)?;
        Submodule::colon_ideal(&top, &bottom)
    }

    /// (I^{n+k}M + H :_M I^k).
    pub fn chain_module(&self, n: usize, k: usize) -> Result<Submodule<F>> {
        let top = self.tower.dividend(n + k)?;
        let ik = self.tower.ideal_power(k)?;
        Submodule::colon_module(&top, &ik, Some(&self.module))
    }

    fn run_chain(&self, n: usize, module_side: bool) -> Result<ChainResult<F>> {
        if n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        let term = |k: usize| {
            if module_side {
                self.chain_module(n, k)
            } else {
                self.chain_ideal(n, k)
            }
        };
        match self.plan()? {
            Plan::Torsion => {
                let value = if module_side {
                    self.module.clone()
                } else {
                    Submodule::unit_ideal(self.ideal.ring())
                };
                let horizon = value.horizon();
                Ok(ChainResult {
                    value,
                    stabilized_at: 0,
                    certificate: Certificate::Torsion,
                    horizon,
                })
            }
            Plan::Offset { k, certificate } => {
                let value = term(k).map_err(exhausted)?;
                let mut stabilized_at = k;
                for j in 1..k {
                    if term(j)?.compare(&value)?.equal {
                        stabilized_at = j;
                        break;
                    }
                }
                let horizon = value.horizon();
                Ok(ChainResult {
                    value,
                    stabilized_at,
                    certificate,
                    horizon,
                })
            }
            Plan::Heuristic => {
                let w = self.opts.window.max(3);
                let mut prev = term(1).map_err(exhausted)?;
                let mut start = 1;
                let mut run = 1;
                for k in 2.. {
                    let cur = term(k).map_err(exhausted)?;
                    if cur.compare(&prev)?.equal {
                        run += 1;
                    } else {
                        run = 1;
                        start = k;
                    }
                    prev = cur;
                    if run >= w {
                        break;
                    }
                }
                let horizon = prev.horizon();
                Ok(ChainResult {
                    value: prev,
                    stabilized_at: start,
                    certificate: Certificate::Heuristic { window: w },
                    horizon,
                })
            }
        }
    }

    /// r(I^n, M).
    pub fn rr_ideal(&self, n: usize) -> Result<ChainResult<F>> {
        self.run_chain(n, false)
    }

    /// The Ratliff-Rush submodule of I^nM.
    pub fn rr_module(&self, n: usize) -> Result<ChainResult<F>> {
        self.run_chain(n, true)
    }

    /// q = (H⁰_I(M) : M).
    pub fn q(&self) -> Result<Submodule<F>> {
        Submodule::colon_ideal(&self.torsion.module, &self.module)
    }

    pub fn filtration(&self, n_max: usize) -> Result<FiltrationReport<F>> {
        if n_max < 2 {
            return Err(Error::Validation("filtration needs n_max >= 2".into()));
        }
        let mut terms = Vec::new();
        let mut exhausted_at = None;
        for n in 1..=n_max {
            match self.rr_ideal(n) {
                Ok(t) => terms.push(t),
                Err(Error::Horizon(_)) | Err(Error::Overflow { .. }) => {
                    exhausted_at = Some(n);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let q = self.q()?;
        let values: Vec<Submodule<F>> = terms.iter().map(|t| t.value.clone()).collect();
        let mut descending = true;
        for w in values.windows(2) {
            descending &= w[0].contains(&w[1])?;
        }
        let mut multiplicative = true;
        for a in 1..=values.len() {
            for b in a..=values.len() {
                if a + b > values.len() {
                    break;
                }
                let prod = Submodule::ideal_times(&values[a - 1], &values[b - 1])?;
                multiplicative &= values[a + b - 1].contains(&prod)?;
            }
        }
        let step_ok: Vec<bool> = (1..values.len())
            .map(|n| {
                let next = Submodule::ideal_times(&self.ideal, &values[n - 1])?.sum(&q)?;
                Ok(next.compare(&values[n])?.equal)
            })
            .collect::<Result<_>>()?;
        let recursion_onset = onset(&step_ok);
        let principal_recursion_onset = match self.reduction() {
            Some(red) => {
                let x = Submodule::ideal(self.ideal.ring(), std::slice::from_ref(&red.x))?;
                let ok: Vec<bool> = (1..values.len())
                    .map(|n| Ok(Submodule::ideal_times(&x, &values[n - 1])?.compare(&values[n])?.equal))
                    .collect::<Result<_>>()?;
                onset(&ok)
            }
            None => None,
        };
        Ok(FiltrationReport {
            terms,
            q,
            recursion_onset,
            principal_recursion_onset,
            descending,
            multiplicative,
            exhausted_at,
        })
    }
}

/// Smallest n (1-based) such that every check from n on holds.
fn onset(ok: &[bool]) -> Option<usize> {
    let mut first = None;
    for (i, &b) in ok.iter().enumerate().rev() {
        if b {
            first = Some(i + 1);
        } else {
            break;
        }
    }
    first
}

#[derive(Clone, Debug)]
pub struct FiltrationReport<F: Field> {
    pub terms: Vec<ChainResult<F>>,
    pub q: Submodule<F>,
    /// Smallest n with r(I^{m+1},M) = I·r(I^m,M) + q for all checked m ≥ n.
    pub recursion_onset: Option<usize>,
    /// Same with x·r(I^m,M), when a principal reduction (x) is known.
    pub principal_recursion_onset: Option<usize>,
    pub descending: bool,
    pub multiplicative: bool,
    /// Set when the horizon ran out before n_max.
    pub exhausted_at: Option<usize>,
}

pub fn rr_ideal<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, n: usize, opts: &Options) -> Result<ChainResult<F>> {
    Analysis::new(ideal, module, opts)?.rr_ideal(n)
}

pub fn rr_module<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, n: usize, opts: &Options) -> Result<ChainResult<F>> {
    Analysis::new(ideal, module, opts)?.rr_module(n)
}

pub fn rr_filtration<F: Field>(
    ideal: &Submodule<F>,
    module: &Submodule<F>,
    n_max: usize,
    opts: &Options,
) -> Result<FiltrationReport<F>> {
    Analysis::new(ideal, module, opts)?.filtration(n_max)
}

#[derive(Clone, Debug)]
pub struct InvolutionReport<F: Field> {
    pub fixpoint: bool,
    pub first_difference: Option<usize>,
    pub checked_through: usize,
    pub r: ChainResult<F>,
    pub rr: ChainResult<F>,
}

/// r(r(I,M),M) against r(I,M).
pub fn verify_involution<F: Field>(ideal: &Submodule<F>, module: &Submodule<F>, opts: &Options) -> Result<InvolutionReport<F>> {
    let r = rr_ideal(ideal, module, 1, opts)?;
    let rr = rr_ideal(&r.value, module, 1, opts)?;
    let Comparison {
        equal,
        through,
        first_difference,
    } = rr.value.compare(&r.value)?;
    Ok(InvolutionReport {
        fixpoint: equal,
        first_difference,
        checked_through: through,
        r,
        rr,
    })
}

/// Looks for x with I^{k+1} = x·I^k, k ≤ r_max: first among minimal-degree
/// generators (smallest k wins), then among seeded random combinations of them.
pub fn find_principal_reduction<F: Field>(
    ideal: &Submodule<F>,
    r_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<ReductionData<F>>> {
    if ideal.is_zero() {
        return Err(Error::Validation("reduction of the zero ideal".into()));
    }
    let ring = ideal.ring().clone();
    let gens = ideal.generator_elements();
    let mindeg = ideal.minimal_generators()[0].degree;
    let low: Vec<RingElement<F>> = gens
        .iter()
        .zip(ideal.minimal_generators())
        .filter(|(_, h)| h.degree == mindeg)
        .map(|(g, _)| g.clone())
        .collect();
    let tower = Tower::new(ideal, &Submodule::unit_ideal(&ring), None);

    let test = |x: &RingElement<F>| -> Result<Option<usize>> {
        let xi = Submodule::ideal(&ring, std::slice::from_ref(x))?;
        for k in 0..=r_max {
            let next = match tower.ideal_power(k + 1) {
                Ok(p) if !p.is_truncated() => p,
                Ok(_) | Err(Error::Overflow { .. }) | Err(Error::Horizon(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let xk = Submodule::ideal_times(&xi, &tower.ideal_power(k)?)?;
            if xk.contains(&next)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    };

    let mut best: Option<ReductionData<F>> = None;
    for x in &low {
        if let Some(r) = test(x)? {
            if best.as_ref().is_none_or(|b| r < b.r) {
                best = Some(ReductionData { x: x.clone(), r });
            }
        }
    }
    if best.is_some() || low.len() < 2 {
        return Ok(best);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = ring.field().clone();
    for _ in 0..trials {
        let mut x = RingElement::zero(&ring);
        for g in &low {
            x = x.add(&g.scale(&f.random_nonzero(&mut rng)))?;
        }
        if x.is_zero() {
            continue;
        }
        if let Some(r) = test(&x)? {
            return Ok(Some(ReductionData { x, r }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct Witness<F: Field> {
    pub degree: usize,
    pub module: Submodule<F>,
    pub verified: bool,
}

/// Finds the least n ≤ n_max with z^n ∈ Σ_{i=1}^{n} I^i z^{n-i} and returns
/// N = ⟨z, I⟩^{n-1} together with the check z·N ⊆ I·N.
pub fn closure_witness_module<F: Field>(ideal: &Submodule<F>, z: &RingElement<F>, n_max: usize) -> Result<Witness<F>> {
    let ring = ideal.ring().clone();
    if z.homogeneous_degree().is_none() {
        return Err(Error::Validation(format!("{z} is not homogeneous")));
    }
    let zi = Submodule::ideal(&ring, std::slice::from_ref(z))?;
    let tower = Tower::new(ideal, &Submodule::unit_ideal(&ring), None);
    for n in 1..=n_max {
        let zn = z.pow(n)?;
        let mut rhs = Submodule::zero(ideal.ambient());
        for i in 1..=n {
            let zpow = Submodule::ideal(&ring, &[z.pow(n - i)?])?;
            rhs = rhs.sum(&Submodule::ideal_times(&tower.ideal_power(i)?, &zpow)?)?;
        }
        if rhs.contains_element(&zn)? {
            let zi_plus = zi.sum(ideal)?;
            let n_mod = Submodule::power(&zi_plus, n - 1)?;
            let lhs = Submodule::ideal_times(&zi, &n_mod)?;
            let rhs = Submodule::ideal_times(ideal, &n_mod)?;
            let verified = rhs.contains(&lhs)?;
            return Ok(Witness {
                degree: n,
                module: n_mod,
                verified,
            });
        }
    }
    Err(Error::Validation(format!(
        "no integral equation of degree at most {n_max} found for {z}"
    )))
}

/// Whether r(I, J) equals the integral closure of I.
pub fn check_in_closure_set<F: Field>(ideal: &Submodule<F>, j: &Submodule<F>, opts: &Options) -> Result<bool> {
    let closure = crate::closure::integral_closure(ideal)?;
    let r = rr_ideal(ideal, j, 1, opts)?;
    r.value.equals(&closure)
}
