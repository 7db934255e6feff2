use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

pub type MonoId = u32;
pub type Ring<F> = Arc<TruncatedAlgebra<F>>;

pub const DEFAULT_BASIS_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Polynomial ring modulo monomials; `quotient` holds exponent vectors.
    MonomialQuotient { quotient: Vec<Vec<u32>> },
    /// k[t^a : a in generators].
    NumericalSemigroup { generators: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    pub backend: Backend,
    /// Monomial-quotient: the polynomial variables. Semigroup: optional names
    /// for the generators (empty or one per generator).
    pub variables: Vec<String>,
    /// Monomial-quotient only; the semigroup grading is the exponent of t.
    pub weights: Vec<u32>,
    pub field: FieldSpec,
    pub truncation: usize,
    pub basis_budget: usize,
}

impl RingPresentation {
    pub fn polynomial(variables: &[&str], quotient: Vec<Vec<u32>>, truncation: usize) -> Self {
        RingPresentation {
            backend: Backend::MonomialQuotient { quotient },
            variables: variables.iter().map(|s| s.to_string()).collect(),
            weights: vec![1; variables.len()],
            field: FieldSpec::default(),
            truncation,
            basis_budget: DEFAULT_BASIS_BUDGET,
        }
    }

    pub fn semigroup(generators: &[u32], truncation: usize) -> Self {
        RingPresentation {
            backend: Backend::NumericalSemigroup {
                generators: generators.to_vec(),
            },
            variables: Vec::new(),
            weights: Vec::new(),
            field: FieldSpec::default(),
            truncation,
            basis_budget: DEFAULT_BASIS_BUDGET,
        }
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn is_semigroup(&self) -> bool {
        matches!(self.backend, Backend::NumericalSemigroup { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    Mono(MonoId),
    /// Lies in the quotient ideal.
    Zero,
    /// Degree above the truncation.
    Overflow,
}

/// Graded reverse lexicographic comparison of equal-degree exponent vectors.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

pub fn semigroup_membership(generators: &[u32], bound: usize) -> Vec<bool> {
    let mut member = vec![false; bound + 1];
    member[0] = true;
    for d in 1..=bound {
        member[d] = generators
            .iter()
            .any(|&a| (a as usize) <= d && member[d - a as usize]);
    }
    member
}

pub struct TruncatedAlgebra<F: Field> {
    field: F,
    presentation: RingPresentation,
    exps: Vec<Box<[u32]>>,
    degree_of: Vec<u32>,
    degree_start: Vec<usize>,
    index: HashMap<Box<[u32]>, MonoId>,
    quotient: Vec<Vec<u32>>,
    gen_monos: Vec<MonoId>,
    gen_weights: Vec<usize>,
    gen_mul: Vec<Vec<Product>>,
}

impl<F: Field> fmt::Debug for TruncatedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedAlgebra")
            .field("presentation", &self.presentation)
            .field("basis_size", &self.exps.len())
            .finish()
    }
}

fn enumerate_weighted(weights: &[u32], d: usize, out: &mut Vec<Vec<u32>>) {
    fn rec(weights: &[u32], i: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i] as usize;
        let mut a = 0;
        while a * w <= left {
            cur[i] = a as u32;
            rec(weights, i + 1, left - a * w, cur, out);
            a += 1;
        }
        cur[i] = 0;
    }
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, d, &mut cur, out);
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn build_ring<F: Field>(field: F, presentation: RingPresentation) -> Result<Ring<F>> {
    if field.spec() != presentation.field {
        return Err(Error::Validation(format!(
            "field object {} does not match presentation {}",
            field.spec(),
            presentation.field
        )));
    }
    let d_max = presentation.truncation;
    let mut exps: Vec<Box<[u32]>> = Vec::new();
    let mut degree_of = Vec::new();
    let mut degree_start = Vec::with_capacity(d_max + 2);
    let gen_exps: Vec<Vec<u32>>;
    let gen_weights: Vec<usize>;
    let mut quotient = Vec::new();

    match &presentation.backend {
        Backend::MonomialQuotient { quotient: q } => {
            let n = presentation.variables.len();
            if n == 0 {
                return Err(Error::Validation("ring needs at least one variable".into()));
            }
            if presentation.weights.len() != n {
                return Err(Error::Validation(format!(
                    "{} weights for {} variables",
                    presentation.weights.len(),
                    n
                )));
            }
            if presentation.weights.contains(&0) {
                return Err(Error::Validation("variable weights must be positive".into()));
            }
            let max_w = *presentation.weights.iter().max().unwrap() as usize;
            if d_max < max_w {
                return Err(Error::Validation(format!(
                    "truncation {d_max} is below the largest weight {max_w}"
                )));
            }
            for m in q {
                if m.len() != n {
                    return Err(Error::Validation(format!(
                        "quotient monomial {m:?} has wrong length"
                    )));
                }
                if m.iter().all(|&e| e == 0) {
                    return Err(Error::Validation("quotient monomial 1 kills the ring".into()));
                }
            }
            quotient = q.clone();
            let mut level = Vec::new();
            for d in 0..=d_max {
                degree_start.push(exps.len());
                level.clear();
                enumerate_weighted(&presentation.weights, d, &mut level);
                level.retain(|e| !q.iter().any(|m| divides(m, e)));
                level.sort_by(|a, b| grevlex_cmp(b, a));
                for e in level.drain(..) {
                    exps.push(e.into_boxed_slice());
                    degree_of.push(d as u32);
                }
                if exps.len() > presentation.basis_budget {
                    return Err(Error::Validation(format!(
                        "basis exceeds budget of {} monomials at degree {d}",
                        presentation.basis_budget
                    )));
                }
            }
            gen_exps = (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e
                })
                .collect();
            gen_weights = presentation.weights.iter().map(|&w| w as usize).collect();
        }
        Backend::NumericalSemigroup { generators } => {
            if generators.is_empty() || generators.contains(&0) {
                return Err(Error::Validation("semigroup generators must be positive".into()));
            }
            let g = generators.iter().fold(0u32, |acc, &a| acc.gcd(&a));
            if g != 1 {
                return Err(Error::Validation(format!(
                    "semigroup generators have gcd {g}, expected 1"
                )));
            }
            if !presentation.variables.is_empty() && presentation.variables.len() != generators.len() {
                return Err(Error::Validation(format!(
                    "{} names for {} semigroup generators",
                    presentation.variables.len(),
                    generators.len()
                )));
            }
            let max_w = *generators.iter().max().unwrap() as usize;
            if d_max < max_w {
                return Err(Error::Validation(format!(
                    "truncation {d_max} is below the largest generator {max_w}"
                )));
            }
            let member = semigroup_membership(generators, d_max);
            for (d, &inside) in member.iter().enumerate() {
                degree_start.push(exps.len());
                if inside {
                    exps.push(vec![d as u32].into_boxed_slice());
                    degree_of.push(d as u32);
                }
            }
            gen_exps = generators.iter().map(|&a| vec![a]).collect();
            gen_weights = generators.iter().map(|&a| a as usize).collect();
        }
    }
    degree_start.push(exps.len());

    let index: HashMap<Box<[u32]>, MonoId> = exps
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i as MonoId))
        .collect();
    let gen_monos: Vec<MonoId> = gen_exps
        .iter()
        .map(|e| {
            index
                .get(&e[..])
                .copied()
                .ok_or_else(|| Error::Validation("a ring generator lies in the quotient".into()))
        })
        .collect::<Result<_>>()?;

    let mut ring = TruncatedAlgebra {
        field,
        presentation,
        exps,
        degree_of,
        degree_start,
        index,
        quotient,
        gen_monos,
        gen_weights,
        gen_mul: Vec::new(),
    };
    let mut tables = Vec::with_capacity(ring.gen_monos.len());
    for &g in &ring.gen_monos {
        let table = (0..ring.exps.len() as MonoId).map(|m| ring.mul(g, m)).collect();
        tables.push(table);
    }
    ring.gen_mul = tables;
    Ok(Arc::new(ring))
}

impl<F: Field> TruncatedAlgebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn truncation(&self) -> usize {
        self.presentation.truncation
    }

    pub fn is_semigroup(&self) -> bool {
        self.presentation.is_semigroup()
    }

    pub fn basis_len(&self) -> usize {
        self.exps.len()
    }

    pub fn dim(&self, d: usize) -> usize {
        if d > self.truncation() {
            return 0;
        }
        self.degree_start[d + 1] - self.degree_start[d]
    }

    /// Ids of degree-d monomials, in canonical order (largest first).
    pub fn degree_range(&self, d: usize) -> std::ops::Range<MonoId> {
        if d > self.truncation() {
            return 0..0;
        }
        self.degree_start[d] as MonoId..self.degree_start[d + 1] as MonoId
    }

    /// Position of a monomial within its degree piece.
    pub fn position(&self, m: MonoId) -> usize {
        m as usize - self.degree_start[self.degree_of[m as usize] as usize]
    }

    pub fn degree(&self, m: MonoId) -> usize {
        self.degree_of[m as usize] as usize
    }

    pub fn exponents(&self, m: MonoId) -> &[u32] {
        &self.exps[m as usize]
    }

    pub fn one_id(&self) -> MonoId {
        0
    }

    pub fn lookup(&self, exps: &[u32]) -> Option<MonoId> {
        self.index.get(exps).copied()
    }

    /// Classifies an exponent vector that may be out of range or in the
    /// quotient. Semigroup exponent vectors have length 1.
    pub fn classify(&self, exps: &[u32]) -> Product {
        let deg = self.exponent_degree(exps);
        if deg > self.truncation() {
            return Product::Overflow;
        }
        match self.lookup(exps) {
            Some(m) => Product::Mono(m),
            None => Product::Zero,
        }
    }

    fn exponent_degree(&self, exps: &[u32]) -> usize {
        match &self.presentation.backend {
            Backend::NumericalSemigroup { .. } => exps[0] as usize,
            Backend::MonomialQuotient { .. } => exps
                .iter()
                .zip(&self.presentation.weights)
                .map(|(&e, &w)| e as usize * w as usize)
                .sum(),
        }
    }

    pub fn mul(&self, a: MonoId, b: MonoId) -> Product {
        let deg = self.degree(a) + self.degree(b);
        if deg > self.truncation() {
            return Product::Overflow;
        }
        let ea = &self.exps[a as usize];
        let eb = &self.exps[b as usize];
        let sum: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
        if self.quotient.iter().any(|q| divides(q, &sum)) {
            return Product::Zero;
        }
        match self.index.get(&sum[..]) {
            Some(&m) => Product::Mono(m),
            None => Product::Zero,
        }
    }

    /// The algebra generators x_j (variables, or t^a for semigroup generators).
    pub fn generators(&self) -> &[MonoId] {
        &self.gen_monos
    }

    pub fn generator_weights(&self) -> &[usize] {
        &self.gen_weights
    }

    pub fn max_generator_weight(&self) -> usize {
        *self.gen_weights.iter().max().unwrap()
    }

    pub fn mul_by_generator(&self, j: usize, m: MonoId) -> Product {
        self.gen_mul[j][m as usize]
    }

    /// True when the ring has no zero divisors: semigroup rings and
    /// polynomial rings without monomial relations.
    pub fn is_domain(&self) -> bool {
        match &self.presentation.backend {
            Backend::NumericalSemigroup { .. } => true,
            Backend::MonomialQuotient { quotient } => quotient.is_empty(),
        }
    }

    pub fn quotient_monomials(&self) -> &[Vec<u32>] {
        &self.quotient
    }

    pub fn evaluate_monomial(&self, m: MonoId, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.one();
        for (e, x) in self.exps[m as usize].iter().zip(point) {
            for _ in 0..*e {
                acc = f.mul(&acc, x);
            }
        }
        acc
    }

    /// Number of coordinates in a point for `evaluate_monomial`.
    pub fn point_len(&self) -> usize {
        match &self.presentation.backend {
            Backend::NumericalSemigroup { .. } => 1,
            Backend::MonomialQuotient { .. } => self.presentation.variables.len(),
        }
    }

    pub fn render_monomial(&self, m: MonoId) -> String {
        let e = &self.exps[m as usize];
        match &self.presentation.backend {
            Backend::NumericalSemigroup { .. } => match e[0] {
                0 => "1".to_string(),
                1 => "t".to_string(),
                s => format!("t^{s}"),
            },
            Backend::MonomialQuotient { .. } => {
                let parts: Vec<String> = e
                    .iter()
                    .zip(&self.presentation.variables)
                    .filter(|(&a, _)| a > 0)
                    .map(|(&a, v)| if a == 1 { v.clone() } else { format!("{v}^{a}") })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
        }
    }
}

/// A finite combination of basis monomials with nonzero coefficients.
pub struct RingElement<F: Field> {
    ring: Ring<F>,
    terms: BTreeMap<MonoId, F::Elem>,
}

impl<F: Field> Clone for RingElement<F> {
    fn clone(&self) -> Self {
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.clone(),
        }
    }
}

impl<F: Field> PartialEq for RingElement<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for RingElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for RingElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        // highest degree first reads more naturally
        let mut ids: Vec<&MonoId> = self.terms.keys().collect();
        ids.sort_by(|a, b| {
            self.ring
                .degree(**b)
                .cmp(&self.ring.degree(**a))
                .then(a.cmp(b))
        });
        for (i, m) in ids.into_iter().enumerate() {
            let c = field.render(&self.terms[m]);
            let (neg, abs) = match c.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = self.ring.render_monomial(*m);
            if mono == "1" {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> RingElement<F> {
    pub fn zero(ring: &Ring<F>) -> Self {
        RingElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring<F>) -> Self {
        Self::monomial(ring, ring.one_id(), ring.field().one())
    }

    pub fn monomial(ring: &Ring<F>, m: MonoId, c: F::Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !ring.field().is_zero(&c) {
            terms.insert(m, c);
        }
        RingElement {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Ring<F>, terms: impl IntoIterator<Item = (MonoId, F::Elem)>) -> Self {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn generator(ring: &Ring<F>, j: usize) -> Self {
        Self::monomial(ring, ring.generators()[j], ring.field().one())
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<MonoId, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: MonoId, c: &F::Elem) {
        let f = self.ring.field().clone();
        let v = match self.terms.get(&m) {
            Some(old) => f.add(old, c),
            None => c.clone(),
        };
        if f.is_zero(&v) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::Validation("elements belong to different rings".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let f = self.ring.field();
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.ring.field();
        let terms = if f.is_zero(c) {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))).collect()
        };
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Exact product; any term pair above the truncation is an error.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let f = self.ring.field();
        let mut out = Self::zero(&self.ring);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                match self.ring.mul(*a, *b) {
                    Product::Mono(m) => out.add_term(m, &f.mul(ca, cb)),
                    Product::Zero => {}
                    Product::Overflow => {
                        return Err(Error::Overflow {
                            degree: self.ring.degree(*a) + self.ring.degree(*b),
                            truncation: self.ring.truncation(),
                        })
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| self.ring.degree(*m));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| self.ring.degree(*m)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| self.ring.degree(*m)).max()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        let f = self.ring.field();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            acc = f.add(&acc, &f.mul(c, &self.ring.evaluate_monomial(*m, point)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;

    fn gf() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn dims<F: Field>(r: &TruncatedAlgebra<F>) -> Vec<usize> {
        (0..=r.truncation()).map(|d| r.dim(d)).collect()
    }

    #[test]
    fn polynomial_ring_dims() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![], 5)).unwrap();
        assert_eq!(dims(&r), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn semigroup_basis_degrees() {
        let r = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 30)).unwrap();
        // independent sieve: sums a*4 + b*11 + c*17 + d*18
        let mut sieve = [false; 31];
        for a in 0..8 {
            for b in 0..3 {
                for c in 0..2 {
                    for d in 0..2 {
                        let s = 4 * a + 11 * b + 17 * c + 18 * d;
                        if s <= 30 {
                            sieve[s] = true;
                        }
                    }
                }
            }
        }
        for d in 0..=30 {
            assert_eq!(r.dim(d) == 1, sieve[d], "degree {d}");
        }
        for d in [4, 8, 11, 12, 15, 16, 17, 18] {
            assert_eq!(r.dim(d), 1);
        }
        for d in [1, 2, 3, 5, 6, 7, 9, 10, 13, 14] {
            assert_eq!(r.dim(d), 0);
        }
    }

    #[test]
    fn quotient_basis() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![vec![0, 3]], 4)).unwrap();
        let basis: Vec<String> = r.degree_range(3).map(|m| r.render_monomial(m)).collect();
        assert_eq!(basis, vec!["x^3", "x^2*y", "x*y^2"]);
    }

    #[test]
    fn element_products() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![vec![0, 3]], 6)).unwrap();
        let y = RingElement::generator(&r, 1);
        let y2 = y.mul(&y).unwrap();
        assert!(y.mul(&y2).unwrap().is_zero());

        let s = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 30)).unwrap();
        let t4 = RingElement::generator(&s, 0);
        let t11 = RingElement::generator(&s, 1);
        assert_eq!(t4.mul(&t11).unwrap().to_string(), "t^15");

        let p = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![], 4)).unwrap();
        let x = RingElement::generator(&p, 0);
        let y = RingElement::generator(&p, 1);
        let prod = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        assert_eq!(prod.to_string(), "x^2 - y^2");
    }

    #[test]
    fn overflow_is_distinct_from_zero() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![vec![0, 3]], 4)).unwrap();
        let x = RingElement::generator(&r, 0);
        let x3 = x.pow(3).unwrap();
        assert!(matches!(x3.mul(&x3), Err(Error::Overflow { .. })));
    }

    #[test]
    fn construction_errors() {
        let bad_gcd = RingPresentation::semigroup(&[4, 6], 20);
        assert!(build_ring(gf(), bad_gcd).is_err());
        let low_d = RingPresentation::semigroup(&[4, 11], 10);
        assert!(build_ring(gf(), low_d).is_err());
        let mut weighted = RingPresentation::polynomial(&["x", "y"], vec![], 2);
        weighted.weights = vec![1, 3];
        assert!(build_ring(gf(), weighted).is_err());
    }

    #[test]
    fn enumeration_matches_divisibility_count() {
        let r = build_ring(
            gf(),
            RingPresentation::polynomial(&["x", "y", "z"], vec![vec![2, 1, 0], vec![0, 3, 0], vec![1, 1, 1]], 10),
        )
        .unwrap();
        for d in 0..=10 {
            let mut count = 0;
            for a in 0..=d {
                for b in 0..=d - a {
                    let c = d - a - b;
                    let blocked = (a >= 2 && b >= 1) || b >= 3 || (a >= 1 && b >= 1 && c >= 1);
                    if !blocked {
                        count += 1;
                    }
                }
            }
            assert_eq!(r.dim(d), count, "degree {d}");
        }
    }

    proptest! {
        #[test]
        fn associativity(i in 0usize..200, j in 0usize..200, k in 0usize..200) {
            let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y", "z"], vec![vec![1, 2, 0], vec![0, 0, 4]], 12)).unwrap();
            let n = r.degree_range(4).end as usize;
            let (a, b, c) = ((i % n) as MonoId, (j % n) as MonoId, (k % n) as MonoId);
            prop_assume!(r.degree(a) + r.degree(b) + r.degree(c) <= 12);
            let left = match r.mul(a, b) {
                Product::Mono(ab) => r.mul(ab, c),
                other => other,
            };
            let right = match r.mul(b, c) {
                Product::Mono(bc) => r.mul(a, bc),
                other => other,
            };
            prop_assert_eq!(left, right);
            prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        }

        #[test]
        fn semigroup_dims_match_sieve(g1 in 2u32..9, g2 in 2u32..13, g3 in 2u32..17) {
            let gens = [g1, g2, g3];
            let g = gens.iter().fold(0u32, |acc, &a| acc.gcd(&a));
            prop_assume!(g == 1);
            let r = build_ring(gf(), RingPresentation::semigroup(&gens, 60)).unwrap();
            let mut sieve = [false; 61];
            for a in 0..=30usize {
                for b in 0..=30usize {
                    for c in 0..=30usize {
                        let s = a * g1 as usize + b * g2 as usize + c * g3 as usize;
                        if s <= 60 { sieve[s] = true; }
                    }
                }
            }
            for d in 0..=60 {
                prop_assert_eq!(r.dim(d) == 1, sieve[d]);
                prop_assert!(r.dim(d) <= 1);
            }
        }
    }
}
