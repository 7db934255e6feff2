use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{combine, kernel, normalize_terms, Echelon, SparseRow};
use crate::ring::{MonoId, Product, Ring, RingElement};

/// R(-s_1) ⊕ ... ⊕ R(-s_k), with the degree-d coordinates laid out component
/// by component, each block ordered like the ring basis of degree d - s_i.
pub struct FreeModule<F: Field> {
    ring: Ring<F>,
    shifts: Vec<usize>,
    offsets: Vec<Vec<u32>>,
}

pub type Ambient<F> = Arc<FreeModule<F>>;

impl<F: Field> fmt::Debug for FreeModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeModule").field("shifts", &self.shifts).finish()
    }
}

/// A homogeneous vector of the ambient free module.
pub struct HVec<F: Field> {
    pub degree: usize,
    pub row: SparseRow<F>,
}

impl<F: Field> Clone for HVec<F> {
    fn clone(&self) -> Self {
        HVec {
            degree: self.degree,
            row: self.row.clone(),
        }
    }
}

impl<F: Field> PartialEq for HVec<F> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.row == other.row
    }
}

impl<F: Field> fmt::Debug for HVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HVec(deg {}, {:?})", self.degree, self.row)
    }
}

impl<F: Field> FreeModule<F> {
    pub fn new(ring: &Ring<F>, shifts: Vec<usize>) -> Result<Ambient<F>> {
        if shifts.is_empty() {
            return Err(Error::Validation("free module of rank 0".into()));
        }
        let d_max = ring.truncation();
        let offsets = (0..=d_max)
            .map(|d| {
                let mut acc = 0u32;
                let mut row = Vec::with_capacity(shifts.len() + 1);
                for &s in &shifts {
                    row.push(acc);
                    if d >= s {
                        acc += ring.dim(d - s) as u32;
                    }
                }
                row.push(acc);
                row
            })
            .collect();
        Ok(Arc::new(FreeModule {
            ring: ring.clone(),
            shifts,
            offsets,
        }))
    }

    pub fn ring_module(ring: &Ring<F>) -> Ambient<F> {
        Self::new(ring, vec![0]).expect("rank one")
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn truncation(&self) -> usize {
        self.ring.truncation()
    }

    pub fn is_ring(&self) -> bool {
        self.shifts == [0]
    }

    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.shifts == other.shifts
    }

    pub fn dim(&self, d: usize) -> usize {
        if d > self.truncation() {
            return 0;
        }
        *self.offsets[d].last().unwrap() as usize
    }

    pub fn col(&self, d: usize, comp: usize, m: MonoId) -> u32 {
        self.offsets[d][comp] + self.ring.position(m) as u32
    }

    pub fn decode(&self, d: usize, col: u32) -> (usize, MonoId) {
        let offs = &self.offsets[d];
        let comp = offs.partition_point(|&o| o <= col) - 1;
        let rd = d - self.shifts[comp];
        let m = self.ring.degree_range(rd).start + (col - offs[comp]);
        (comp, m)
    }

    /// Builds a homogeneous vector; `None` for the zero vector.
    pub fn vector(&self, comps: &[RingElement<F>]) -> Result<Option<HVec<F>>> {
        if comps.len() != self.rank() {
            return Err(Error::Validation(format!(
                "vector has {} components, module has rank {}",
                comps.len(),
                self.rank()
            )));
        }
        let mut degree = None;
        let mut terms = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            if !Arc::ptr_eq(c.ring(), &self.ring) {
                return Err(Error::Validation("component from another ring".into()));
            }
            for (m, v) in c.terms() {
                let d = self.ring.degree(*m) + self.shifts[i];
                match degree {
                    None => degree = Some(d),
                    Some(d0) if d0 != d => {
                        return Err(Error::Validation(format!(
                            "vector is not homogeneous for shifts {:?}",
                            self.shifts
                        )))
                    }
                    _ => {}
                }
                if d > self.truncation() {
                    return Err(Error::Overflow {
                        degree: d,
                        truncation: self.truncation(),
                    });
                }
                terms.push((i, *m, v.clone()));
            }
        }
        let Some(degree) = degree else { return Ok(None) };
        let row = terms
            .into_iter()
            .map(|(i, m, v)| (self.col(degree, i, m), v))
            .collect();
        Ok(Some(HVec {
            degree,
            row: normalize_terms(self.field(), row),
        }))
    }

    pub fn unit_vector(&self, comp: usize) -> HVec<F> {
        let d = self.shifts[comp];
        HVec {
            degree: d,
            row: vec![(self.col(d, comp, self.ring.one_id()), self.field().one())],
        }
    }

    pub fn components(&self, v: &HVec<F>) -> Vec<RingElement<F>> {
        let mut comps = vec![RingElement::zero(&self.ring); self.rank()];
        for (col, c) in &v.row {
            let (i, m) = self.decode(v.degree, *col);
            comps[i].add_term(m, c);
        }
        comps
    }

    pub fn render(&self, v: &HVec<F>) -> String {
        let comps = self.components(v);
        if comps.len() == 1 {
            return comps[0].to_string();
        }
        let parts: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(", "))
    }

    pub fn mul_mono(&self, m: MonoId, deg: usize, row: &[(u32, F::Elem)]) -> Result<SparseRow<F>> {
        let target = deg + self.ring.degree(m);
        if target > self.truncation() {
            return Err(Error::Overflow {
                degree: target,
                truncation: self.truncation(),
            });
        }
        let mut out = Vec::with_capacity(row.len());
        for (col, c) in row {
            let (i, mono) = self.decode(deg, *col);
            if let Product::Mono(p) = self.ring.mul(m, mono) {
                out.push((self.col(target, i, p), c.clone()));
            }
        }
        // monomial orders are multiplicative, so columns stay sorted
        debug_assert!(out.windows(2).all(|w| w[0].0 < w[1].0));
        Ok(out)
    }

    /// Multiplication by the j-th algebra generator; `None` past the truncation.
    pub fn mul_generator(&self, j: usize, deg: usize, row: &[(u32, F::Elem)]) -> Option<SparseRow<F>> {
        let target = deg + self.ring.generator_weights()[j];
        if target > self.truncation() {
            return None;
        }
        let mut out = Vec::with_capacity(row.len());
        for (col, c) in row {
            let (i, mono) = self.decode(deg, *col);
            if let Product::Mono(p) = self.ring.mul_by_generator(j, mono) {
                out.push((self.col(target, i, p), c.clone()));
            }
        }
        debug_assert!(out.windows(2).all(|w| w[0].0 < w[1].0));
        Some(out)
    }

    /// a·v for a homogeneous ring element a.
    pub fn mul_element(&self, a: &RingElement<F>, v: &HVec<F>) -> Result<HVec<F>> {
        let f = self.field();
        let Some(da) = a.homogeneous_degree() else {
            if a.is_zero() {
                return Ok(HVec { degree: v.degree, row: Vec::new() });
            }
            return Err(Error::Validation(format!("{a} is not homogeneous")));
        };
        let mut terms = Vec::new();
        for (m, c) in a.terms() {
            for (col, x) in self.mul_mono(*m, v.degree, &v.row)? {
                terms.push((col, f.mul(c, &x)));
            }
        }
        Ok(HVec {
            degree: v.degree + da,
            row: normalize_terms(f, terms),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(u64),
    Infinite,
    /// No finiteness certificate below the horizon.
    Unknown { through: usize },
}

impl Length {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(*n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    /// Degrees up to which the comparison is exact.
    pub through: usize,
    pub first_difference: Option<usize>,
}

struct Inner<F: Field> {
    ambient: Ambient<F>,
    gens: Vec<HVec<F>>,
    horizon: usize,
    pieces: RwLock<Vec<Arc<Echelon<F>>>>,
    minimal: OnceLock<Vec<HVec<F>>>,
    note: Option<String>,
    /// Some generators would lie above the ring truncation and were dropped;
    /// pieces stay exact but the generator list is incomplete.
    truncated: bool,
}

/// A graded submodule known through `horizon`: its generators of degree at
/// most `horizon` are all recorded, so every piece up to there is exact.
/// A horizon equal to the ring truncation means the module is fully known.
pub struct Submodule<F: Field>(Arc<Inner<F>>);

impl<F: Field> Clone for Submodule<F> {
    fn clone(&self) -> Self {
        Submodule(self.0.clone())
    }
}

impl<F: Field> fmt::Debug for Submodule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.0.gens.iter().map(|g| self.0.ambient.render(g)).collect();
        f.debug_struct("Submodule")
            .field("gens", &gens)
            .field("horizon", &self.0.horizon)
            .finish()
    }
}

impl<F: Field> fmt::Display for Submodule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .minimal_generators()
            .iter()
            .map(|g| self.0.ambient.render(g))
            .collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

fn check_same<F: Field>(a: &FreeModule<F>, b: &FreeModule<F>) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::Validation("submodules live in different free modules".into()))
    }
}

/// One linear condition "image of v lies in target", for the colon solver.
struct Constraint<'a, F: Field> {
    target: Arc<Echelon<F>>,
    image_cols: usize,
    map: Box<dyn Fn(&SparseRow<F>) -> Result<SparseRow<F>> + 'a>,
}

/// Vectors of `domain` (given by spanning rows) whose images satisfy every
/// constraint. Constraints are applied one at a time so the candidate space
/// shrinks early.
fn solve_constraints<F: Field>(
    field: &F,
    ncols: usize,
    domain: Vec<SparseRow<F>>,
    constraints: &[Constraint<'_, F>],
) -> Result<Echelon<F>> {
    let mut cand = domain;
    for c in constraints {
        if cand.is_empty() {
            break;
        }
        let images = cand
            .iter()
            .map(|v| Ok(c.target.reduce(&(c.map)(v)?)))
            .collect::<Result<Vec<_>>>()?;
        if images.iter().all(|i| i.is_empty()) {
            continue;
        }
        let combos = kernel(field, c.image_cols, images);
        cand = combos.iter().map(|k| combine(field, k, &cand)).collect();
    }
    Ok(Echelon::from_rows(field, ncols, cand))
}

impl<F: Field> Submodule<F> {
    fn build(ambient: Ambient<F>, mut gens: Vec<HVec<F>>, horizon: usize, note: Option<String>) -> Self {
        gens.retain(|g| !g.row.is_empty());
        gens.sort_by_key(|g| g.degree);
        Submodule(Arc::new(Inner {
            ambient,
            gens,
            horizon,
            pieces: RwLock::new(Vec::new()),
            minimal: OnceLock::new(),
            note,
            truncated: false,
        }))
    }

    fn mark_truncated(self) -> Self {
        let inner = Arc::try_unwrap(self.0).unwrap_or_else(|_| unreachable!("fresh module"));
        Submodule(Arc::new(Inner { truncated: true, ..inner }))
    }

    pub fn is_truncated(&self) -> bool {
        self.0.truncated
    }

    pub fn span(ambient: &Ambient<F>, gens: Vec<HVec<F>>, horizon: usize) -> Result<Self> {
        if horizon > ambient.truncation() {
            return Err(Error::Validation(format!(
                "horizon {horizon} above truncation {}",
                ambient.truncation()
            )));
        }
        if let Some(g) = gens.iter().find(|g| g.degree > horizon) {
            return Err(Error::Horizon(format!(
                "generator of degree {} above horizon {horizon}",
                g.degree
            )));
        }
        Ok(Self::build(ambient.clone(), gens, horizon, None))
    }

    /// Span valid through the full truncation.
    pub fn generated(ambient: &Ambient<F>, gens: Vec<HVec<F>>) -> Result<Self> {
        Self::span(ambient, gens, ambient.truncation())
    }

    pub fn zero(ambient: &Ambient<F>) -> Self {
        Self::build(ambient.clone(), Vec::new(), ambient.truncation(), None)
    }

    pub fn whole(ambient: &Ambient<F>) -> Self {
        let gens = (0..ambient.rank()).map(|i| ambient.unit_vector(i)).collect();
        Self::build(ambient.clone(), gens, ambient.truncation(), None)
    }

    pub fn unit_ideal(ring: &Ring<F>) -> Self {
        Self::whole(&FreeModule::ring_module(ring))
    }

    pub fn ideal(ring: &Ring<F>, elems: &[RingElement<F>]) -> Result<Self> {
        let amb = FreeModule::ring_module(ring);
        let mut gens = Vec::new();
        for e in elems {
            if let Some(v) = amb.vector(std::slice::from_ref(e))? {
                gens.push(v);
            }
        }
        Self::generated(&amb, gens)
    }

    /// Ideal in the same ring, with the ideal's own ambient R.
    pub fn ideal_like(&self, elems: &[RingElement<F>]) -> Result<Self> {
        Self::ideal(self.ring(), elems)
    }

    pub fn from_vectors(ambient: &Ambient<F>, vecs: &[Vec<RingElement<F>>]) -> Result<Self> {
        let mut gens = Vec::new();
        for v in vecs {
            if let Some(h) = ambient.vector(v)? {
                gens.push(h);
            }
        }
        Self::generated(ambient, gens)
    }

    pub fn ambient(&self) -> &Ambient<F> {
        &self.0.ambient
    }

    pub fn ring(&self) -> &Ring<F> {
        self.0.ambient.ring()
    }

    pub fn field(&self) -> &F {
        self.0.ambient.field()
    }

    pub fn horizon(&self) -> usize {
        self.0.horizon
    }

    pub fn is_complete(&self) -> bool {
        self.0.horizon == self.0.ambient.truncation()
    }

    pub fn is_ideal(&self) -> bool {
        self.0.ambient.is_ring()
    }

    pub fn note(&self) -> Option<&str> {
        self.0.note.as_deref()
    }

    pub fn generators(&self) -> &[HVec<F>] {
        &self.0.gens
    }

    pub fn is_zero(&self) -> bool {
        self.0.gens.is_empty()
    }

    pub fn max_gen_degree(&self) -> Option<usize> {
        self.0.gens.last().map(|g| g.degree)
    }

    /// Smallest generator degree; past the horizon when no generator is known.
    pub fn low_degree(&self) -> usize {
        self.0.gens.first().map_or(self.0.horizon + 1, |g| g.degree)
    }

    pub fn same_object(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Reduced echelon basis of the degree-d piece.
    pub fn piece(&self, d: usize) -> Result<Arc<Echelon<F>>> {
        if d > self.0.horizon {
            return Err(Error::Horizon(format!(
                "degree {d} requested, submodule known through {}",
                self.0.horizon
            )));
        }
        {
            let pieces = self.0.pieces.read().unwrap();
            if d < pieces.len() {
                return Ok(pieces[d].clone());
            }
        }
        let mut pieces = self.0.pieces.write().unwrap();
        let amb = &self.0.ambient;
        let ring = amb.ring();
        let f = amb.field();
        while pieces.len() <= d {
            let e = pieces.len();
            let mut ech = Echelon::new(f, amb.dim(e));
            if e >= self.low_degree() {
                for (j, &w) in ring.generator_weights().iter().enumerate() {
                    if e < w {
                        continue;
                    }
                    let below = &pieces[e - w];
                    for row in below.rows() {
                        if ech.is_full() {
                            break;
                        }
                        if let Some(r) = amb.mul_generator(j, e - w, row) {
                            ech.insert(r);
                        }
                    }
                }
                for g in self.0.gens.iter().filter(|g| g.degree == e) {
                    ech.insert(g.row.clone());
                }
            }
            pieces.push(Arc::new(ech));
        }
        Ok(pieces[d].clone())
    }

    pub fn dim(&self, d: usize) -> Result<usize> {
        Ok(self.piece(d)?.dim())
    }

    /// Span of x_j·N_{d-w_j}: the part of N_d coming from lower degrees.
    fn decomposable_part(&self, d: usize) -> Result<Echelon<F>> {
        let amb = &self.0.ambient;
        let ring = amb.ring();
        let mut ech = Echelon::new(amb.field(), amb.dim(d));
        for (j, &w) in ring.generator_weights().iter().enumerate() {
            if d < w {
                continue;
            }
            let below = self.piece(d - w)?;
            for row in below.rows() {
                if let Some(r) = amb.mul_generator(j, d - w, row) {
                    ech.insert(r);
                }
            }
        }
        Ok(ech)
    }

    /// Canonical minimal generators: per degree, the reduced echelon basis of
    /// N_d modulo (maximal ideal)·N in degree d.
    pub fn minimal_generators(&self) -> &[HVec<F>] {
        self.0.minimal.get_or_init(|| {
            let f = self.field();
            let mut out = Vec::new();
            let mut degrees: Vec<usize> = self.0.gens.iter().map(|g| g.degree).collect();
            degrees.dedup();
            for d in degrees {
                let piece = self.piece(d).expect("generator degree within horizon");
                let lower = self.decomposable_part(d).expect("within horizon");
                if lower.dim() == piece.dim() {
                    continue;
                }
                let residues = Echelon::from_rows(f, piece.ncols(), piece.rows().iter().map(|r| lower.reduce(r)));
                for r in residues.rows() {
                    out.push(HVec { degree: d, row: r.clone() });
                }
            }
            out
        })
    }

    fn from_pieces(ambient: &Ambient<F>, pieces: Vec<Echelon<F>>, horizon: usize, note: Option<String>) -> Self {
        // Generators are extracted degree by degree from the supplied pieces.
        let f = ambient.field().clone();
        let ring = ambient.ring().clone();
        let pieces: Vec<Arc<Echelon<F>>> = pieces.into_iter().map(Arc::new).collect();
        let mut gens = Vec::new();
        for (d, piece) in pieces.iter().enumerate() {
            if piece.dim() == 0 {
                continue;
            }
            let mut lower = Echelon::new(&f, ambient.dim(d));
            for (j, &w) in ring.generator_weights().iter().enumerate() {
                if d < w {
                    continue;
                }
                for row in pieces[d - w].rows() {
                    if let Some(r) = ambient.mul_generator(j, d - w, row) {
                        lower.insert(r);
                    }
                }
            }
            if lower.dim() == piece.dim() {
                continue;
            }
            let residues = Echelon::from_rows(&f, piece.ncols(), piece.rows().iter().map(|r| lower.reduce(r)));
            for r in residues.rows() {
                gens.push(HVec { degree: d, row: r.clone() });
            }
        }
        let module = Self::build(ambient.clone(), gens.clone(), horizon, note);
        *module.0.pieces.write().unwrap() = pieces;
        let _ = module.0.minimal.set(gens);
        module
    }

    pub fn contains_vector(&self, v: &HVec<F>) -> Result<bool> {
        if v.row.is_empty() {
            return Ok(true);
        }
        Ok(self.piece(v.degree)?.contains(&v.row))
    }

    pub fn contains_element(&self, a: &RingElement<F>) -> Result<bool> {
        match self.0.ambient.vector(std::slice::from_ref(a))? {
            None => Ok(true),
            Some(v) => self.contains_vector(&v),
        }
    }

    /// Whether other ⊆ self, through the common horizon.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        check_same(&self.0.ambient, &other.0.ambient)?;
        let h = self.horizon().min(other.horizon());
        for g in other.generators().iter().filter(|g| g.degree <= h) {
            if !self.contains_vector(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        check_same(&self.0.ambient, &other.0.ambient)?;
        let h = self.horizon().min(other.horizon());
        if self.is_complete() && other.is_complete() {
            let mut first: Option<usize> = None;
            for (a, b) in [(self, other), (other, self)] {
                for g in b.generators() {
                    if first.is_some_and(|d| d <= g.degree) {
                        break;
                    }
                    if !a.contains_vector(g)? {
                        first = Some(g.degree);
                        break;
                    }
                }
            }
            return Ok(Comparison {
                equal: first.is_none(),
                through: h,
                first_difference: first,
            });
        }
        for d in 0..=h {
            if self.piece(d)? != other.piece(d)? {
                return Ok(Comparison {
                    equal: false,
                    through: h,
                    first_difference: Some(d),
                });
            }
        }
        Ok(Comparison {
            equal: true,
            through: h,
            first_difference: None,
        })
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.compare(other)?.equal)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_same(&self.0.ambient, &other.0.ambient)?;
        let h = self.horizon().min(other.horizon());
        let gens = self
            .generators()
            .iter()
            .chain(other.generators())
            .filter(|g| g.degree <= h)
            .cloned()
            .collect();
        let out = Self::build(self.0.ambient.clone(), gens, h, None);
        Ok(if self.is_truncated() || other.is_truncated() { out.mark_truncated() } else { out })
    }

    /// I·M for an ideal I of the same ring.
    pub fn ideal_times(ideal: &Self, module: &Self) -> Result<Self> {
        if !ideal.is_ideal() {
            return Err(Error::Validation("left factor must be an ideal".into()));
        }
        if !Arc::ptr_eq(ideal.ring(), module.ring()) {
            return Err(Error::Validation("ideal and module over different rings".into()));
        }
        let amb = module.ambient();
        let d_max = amb.truncation();
        let h = d_max
            .min(ideal.horizon() + module.low_degree())
            .min(module.horizon() + ideal.low_degree());
        let ring = ideal.ring();
        let mut gens = Vec::new();
        let mut truncated = ideal.is_truncated() || module.is_truncated();
        let ring_amb = FreeModule::ring_module(ring);
        for a in ideal.minimal_generators() {
            let elem = &ring_amb.components(a)[0];
            for g in module.minimal_generators() {
                let deg = a.degree + g.degree;
                if deg > h {
                    truncated |= deg > d_max;
                    continue;
                }
                gens.push(amb.mul_element(elem, g)?);
            }
        }
        let product = Self::build(amb.clone(), gens, h, None).minimalized();
        Ok(if truncated { product.mark_truncated() } else { product })
    }

    /// Same module, generator list replaced by its minimal one.
    pub fn minimalized(&self) -> Self {
        let gens = self.minimal_generators().to_vec();
        let mut m = Self::build(self.0.ambient.clone(), gens.clone(), self.0.horizon, self.0.note.clone());
        if self.is_truncated() {
            m = m.mark_truncated();
        }
        *m.0.pieces.write().unwrap() = self.0.pieces.read().unwrap().clone();
        let _ = m.0.minimal.set(gens);
        m
    }

    pub fn power(ideal: &Self, n: usize) -> Result<Self> {
        let mut acc = Self::unit_ideal(ideal.ring());
        for _ in 0..n {
            acc = Self::ideal_times(ideal, &acc)?;
        }
        Ok(acc)
    }

    /// (N : L) = {r ∈ R : r·L ⊆ N}.
    pub fn colon_ideal(n: &Self, l: &Self) -> Result<Self> {
        check_same(&n.0.ambient, &l.0.ambient)?;
        let ring = n.ring().clone();
        if l.is_zero() {
            let unit = Self::unit_ideal(&ring);
            return Ok(Self::build(
                unit.0.ambient.clone(),
                unit.0.gens.clone(),
                unit.0.horizon,
                Some("colon by the zero module: every element qualifies".into()),
            ));
        }
        check_divisor(l)?;
        let lgens = l.minimal_generators().to_vec();
        let maxdeg = lgens.iter().map(|g| g.degree).max().unwrap();
        let h = n.horizon().checked_sub(maxdeg).ok_or_else(|| {
            Error::Horizon(format!(
                "colon needs degree {maxdeg}, dividend known through {}",
                n.horizon()
            ))
        })?;
        let amb = n.ambient().clone();
        let ring_amb = FreeModule::ring_module(&ring);
        let unit = Self::whole(&ring_amb);
        let f = ring.field().clone();
        let mut pieces = Vec::new();
        let mut cofinite_from = None;
        for e in 0..=h {
            let start = ring.degree_range(e).start;
            let dom_dim = ring.dim(e);
            let domain: Vec<SparseRow<F>> = (0..dom_dim as u32).map(|p| vec![(p, f.one())]).collect();
            let mut constraints = Vec::with_capacity(lgens.len());
            for g in &lgens {
                let target = n.piece(e + g.degree)?;
                let amb = amb.clone();
                let f = f.clone();
                constraints.push(Constraint {
                    target,
                    image_cols: amb.dim(e + g.degree),
                    map: Box::new(move |v: &SparseRow<F>| {
                        let mut terms = Vec::new();
                        for (p, c) in v {
                            for (col, x) in amb.mul_mono(start + p, g.degree, &g.row)? {
                                terms.push((col, f.mul(c, &x)));
                            }
                        }
                        Ok(normalize_terms(&f, terms))
                    }),
                });
            }
            let sol = solve_constraints(&f, dom_dim, domain, &constraints)?;
            pieces.push(sol);
            if cofinite_window(&pieces, &unit)? {
                cofinite_from = Some(e);
                break;
            }
        }
        let horizon = if cofinite_from.is_some() { ring.truncation() } else { h };
        Ok(Self::from_pieces(&ring_amb, pieces, horizon, None))
    }

    /// (N :_W I) = {v ∈ W : I·v ⊆ N}, where W is `within` (the whole ambient
    /// module when `None`).
    pub fn colon_module(n: &Self, ideal: &Self, within: Option<&Self>) -> Result<Self> {
        if !ideal.is_ideal() || !Arc::ptr_eq(ideal.ring(), n.ring()) {
            return Err(Error::Validation("colon_module needs an ideal of the same ring".into()));
        }
        let amb = n.ambient().clone();
        let whole = Self::whole(&amb);
        let within = within.unwrap_or(&whole);
        check_same(&amb, within.ambient())?;
        if ideal.is_zero() {
            return Ok(Self::build(
                amb.clone(),
                within.0.gens.clone(),
                within.horizon(),
                Some("colon by the zero ideal: every vector qualifies".into()),
            ));
        }
        check_divisor(ideal)?;
        let igens: Vec<RingElement<F>> = ideal
            .minimal_generators()
            .iter()
            .map(|g| ideal.ambient().components(g).remove(0))
            .collect();
        let maxdeg = ideal.minimal_generators().iter().map(|g| g.degree).max().unwrap();
        let h = n
            .horizon()
            .checked_sub(maxdeg)
            .ok_or_else(|| Error::Horizon("dividend horizon below divisor degree".into()))?
            .min(within.horizon());
        let f = amb.field().clone();
        let mut pieces = Vec::new();
        let mut cofinite_from = None;
        for e in 0..=h {
            let domain = within.piece(e)?.rows().to_vec();
            let mut constraints = Vec::with_capacity(igens.len());
            for a in &igens {
                let da = a.homogeneous_degree().unwrap();
                let target = n.piece(e + da)?;
                let amb = amb.clone();
                constraints.push(Constraint {
                    target,
                    image_cols: amb.dim(e + da),
                    map: Box::new(move |v: &SparseRow<F>| {
                        Ok(amb.mul_element(a, &HVec { degree: e, row: v.clone() })?.row)
                    }),
                });
            }
            let sol = solve_constraints(&f, amb.dim(e), domain, &constraints)?;
            pieces.push(sol);
            if within.is_complete() && cofinite_window(&pieces, within)? {
                cofinite_from = Some(e);
                break;
            }
        }
        let horizon = if cofinite_from.is_some() { amb.truncation() } else { h };
        Ok(Self::from_pieces(&amb, pieces, horizon, None))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_same(&self.0.ambient, &other.0.ambient)?;
        let h = self.horizon().min(other.horizon());
        let mut pieces = Vec::with_capacity(h + 1);
        for d in 0..=h {
            let a = self.piece(d)?;
            let b = other.piece(d)?;
            pieces.push(a.intersect(&b));
        }
        Ok(Self::from_pieces(&self.0.ambient, pieces, h, None))
    }

    /// ℓ(top/bottom) for bottom ⊆ top.
    pub fn quotient_length(top: &Self, bottom: &Self) -> Result<Length> {
        check_same(&top.0.ambient, &bottom.0.ambient)?;
        if !top.contains(bottom)? {
            return Err(Error::Validation("quotient_length: bottom is not contained in top".into()));
        }
        let h = top.horizon().min(bottom.horizon());
        let amb = &top.0.ambient;
        let w = amb.ring().max_generator_weight();
        let min_start = top
            .max_gen_degree()
            .map_or(0, |d| d + 1)
            .max(*amb.shifts().iter().max().unwrap());
        let mut total = 0u64;
        let mut run = 0usize;
        let mut certified = false;
        for d in 0..=h {
            let diff = top.dim(d)? - bottom.dim(d)?;
            total += diff as u64;
            if diff == 0 {
                run += 1;
            } else {
                run = 0;
                certified = false;
            }
            if top.is_complete() && !top.is_truncated() && run >= w && d + 1 - w >= min_start {
                certified = true;
            }
        }
        if certified {
            return Ok(Length::Finite(total));
        }
        if top.is_complete() && bottom.is_complete() && provably_infinite(top, bottom) {
            return Ok(Length::Infinite);
        }
        Ok(Length::Unknown { through: h })
    }

    /// A ⊕ B inside the direct sum of the ambients.
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        if !Arc::ptr_eq(a.ring(), b.ring()) {
            return Err(Error::Validation("direct sum over different rings".into()));
        }
        let mut shifts = a.ambient().shifts().to_vec();
        shifts.extend_from_slice(b.ambient().shifts());
        let amb = FreeModule::new(a.ring(), shifts)?;
        let ka = a.ambient().rank();
        let h = a.horizon().min(b.horizon());
        let mut gens = Vec::new();
        for (src, off) in [(a, 0usize), (b, ka)] {
            for g in src.minimal_generators().iter().filter(|g| g.degree <= h) {
                let row = g
                    .row
                    .iter()
                    .map(|(col, c)| {
                        let (i, m) = src.ambient().decode(g.degree, *col);
                        (amb.col(g.degree, i + off, m), c.clone())
                    })
                    .collect();
                gens.push(HVec { degree: g.degree, row });
            }
        }
        Self::span(&amb, gens, h)
    }

    /// Generators as ring-element vectors, canonical order.
    pub fn generator_vectors(&self) -> Vec<Vec<RingElement<F>>> {
        self.minimal_generators()
            .iter()
            .map(|g| self.0.ambient.components(g))
            .collect()
    }

    /// For ideals: generators as ring elements, canonical order.
    pub fn generator_elements(&self) -> Vec<RingElement<F>> {
        self.generator_vectors().into_iter().map(|mut v| v.remove(0)).collect()
    }
}

fn check_divisor<F: Field>(l: &Submodule<F>) -> Result<()> {
    if l.is_truncated() {
        return Err(Error::Overflow {
            degree: l.ambient().truncation() + 1,
            truncation: l.ambient().truncation(),
        });
    }
    if !l.is_complete() {
        return Err(Error::Horizon("colon divisor is only partially known".into()));
    }
    Ok(())
}

/// The newest pieces agree with `bound` on a full window of generator weights
/// above bound's generators, so the module equals bound from there on.
fn cofinite_window<F: Field>(pieces: &[Echelon<F>], bound: &Submodule<F>) -> Result<bool> {
    let amb = bound.ambient();
    let w = amb.ring().max_generator_weight();
    let e = pieces.len() - 1;
    if pieces.len() < w || bound.is_truncated() {
        return Ok(false);
    }
    let start = e + 1 - w;
    let min_start = bound
        .max_gen_degree()
        .map_or(0, |d| d + 1)
        .max(*amb.shifts().iter().max().unwrap());
    if start < min_start {
        return Ok(false);
    }
    for (d, piece) in pieces.iter().enumerate().skip(start) {
        if piece.dim() != bound.dim(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Count argument for R/J with J a monomial ideal: infinite length iff some
/// algebra generator has no power in J (and is not nilpotent).
fn provably_infinite<F: Field>(top: &Submodule<F>, bottom: &Submodule<F>) -> bool {
    if !top.is_ideal() || !bottom.is_ideal() {
        return false;
    }
    let unit = Submodule::unit_ideal(top.ring());
    if !matches!(top.compare(&unit), Ok(Comparison { equal: true, .. })) {
        return false;
    }
    let ring = top.ring();
    if ring.is_semigroup() {
        return bottom.is_zero();
    }
    let gens = bottom.minimal_generators();
    if gens.iter().any(|g| g.row.len() != 1) {
        return false;
    }
    let amb = bottom.ambient();
    let monos: Vec<&[u32]> = gens
        .iter()
        .map(|g| ring.exponents(amb.decode(g.degree, g.row[0].0).1))
        .collect();
    let n = ring.point_len();
    (0..n).any(|i| {
        let pure = |e: &[u32]| e.iter().enumerate().all(|(k, &a)| k == i || a == 0);
        !monos.iter().any(|e| pure(e)) && !ring.quotient_monomials().iter().any(|q| pure(q))
    })
}

/// M/K with K ⊆ M, both submodules of one free module.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    pub top: Submodule<F>,
    pub bottom: Submodule<F>,
}

impl<F: Field> Subquotient<F> {
    pub fn new(top: Submodule<F>, bottom: Submodule<F>) -> Result<Self> {
        if !top.contains(&bottom)? {
            return Err(Error::Validation("subquotient bottom not contained in top".into()));
        }
        Ok(Subquotient { top, bottom })
    }

    /// I^k·(M/K) represented by its preimage I^k M + K.
    pub fn ideal_times(&self, ideal: &Submodule<F>) -> Result<Submodule<F>> {
        Submodule::ideal_times(ideal, &self.top)?.sum(&self.bottom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::{build_ring, RingPresentation};

    fn gf() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn poly(vars: &[&str], q: Vec<Vec<u32>>, d: usize) -> Ring<PrimeField> {
        build_ring(gf(), RingPresentation::polynomial(vars, q, d)).unwrap()
    }

    fn mono(r: &Ring<PrimeField>, e: &[u32]) -> RingElement<PrimeField> {
        RingElement::monomial(r, r.lookup(e).unwrap(), 1)
    }

    fn t(r: &Ring<PrimeField>, s: u32) -> RingElement<PrimeField> {
        mono(r, &[s])
    }

    fn exps_of(m: &Submodule<PrimeField>) -> Vec<Vec<u32>> {
        m.generator_elements()
            .iter()
            .map(|e| {
                assert!(e.is_monomial());
                m.ring().exponents(*e.terms().keys().next().unwrap()).to_vec()
            })
            .collect()
    }

    #[test]
    fn span_of_maximal_ideal() {
        let r = poly(&["x", "y"], vec![], 6);
        let m = Submodule::ideal(&r, &[mono(&r, &[1, 0]), mono(&r, &[0, 1])]).unwrap();
        let m = Submodule::span(m.ambient(), m.generators().to_vec(), 3).unwrap();
        assert_eq!(m.dim(2).unwrap(), 3);
        assert!(m.piece(4).is_err());
    }

    #[test]
    fn semigroup_span_pieces() {
        let r = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 30)).unwrap();
        let i = Submodule::ideal(&r, &[t(&r, 4), t(&r, 11)]).unwrap();
        // oracle: e = 4 + s or 11 + s with s in the semigroup
        let member = crate::ring::semigroup_membership(&[4, 11, 17, 18], 30);
        for e in 0..=30usize {
            let expected = (e >= 4 && member[e - 4]) || (e >= 11 && member[e - 11]);
            assert_eq!(i.dim(e).unwrap() == 1, expected, "degree {e}");
        }
        assert_eq!(i.dim(15).unwrap(), 1);
        assert_eq!(i.dim(17).unwrap(), 0);
    }

    #[test]
    fn module_in_rank_two() {
        let r = poly(&["x", "y"], vec![vec![0, 3]], 6);
        let amb = FreeModule::new(&r, vec![0, 0]).unwrap();
        let zero = RingElement::zero(&r);
        let m = Submodule::from_vectors(
            &amb,
            &[
                vec![zero.clone(), mono(&r, &[0, 2])],
                vec![mono(&r, &[0, 1]), mono(&r, &[1, 0])],
            ],
        )
        .unwrap();
        assert_eq!(m.dim(1).unwrap(), 1);
        // oracle: degree 2 is spanned by (0,y^2), x(y,x), y(y,x)
        assert_eq!(m.dim(2).unwrap(), 3);
    }

    #[test]
    fn sums_products_powers() {
        let r = poly(&["x", "y"], vec![], 10);
        let x = Submodule::ideal(&r, &[mono(&r, &[1, 0])]).unwrap();
        let y = Submodule::ideal(&r, &[mono(&r, &[0, 1])]).unwrap();
        let m = x.sum(&y).unwrap();
        assert_eq!(exps_of(&m), vec![vec![1, 0], vec![0, 1]]);
        let m2 = Submodule::power(&m, 2).unwrap();
        assert_eq!(exps_of(&m2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(Submodule::power(&m, 0).unwrap().equals(&Submodule::unit_ideal(&r)).unwrap());
        let inter = x.intersect(&y).unwrap();
        assert_eq!(exps_of(&inter), vec![vec![1, 1]]);
        assert!(m.sum(&Submodule::zero(m.ambient())).unwrap().equals(&m).unwrap());
    }

    #[test]
    fn semigroup_powers() {
        let r = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 60)).unwrap();
        let i = Submodule::ideal(&r, &[t(&r, 4), t(&r, 11)]).unwrap();
        let i3 = Submodule::power(&i, 3).unwrap();
        let listed = Submodule::ideal(&r, &[t(&r, 12), t(&r, 19), t(&r, 26), t(&r, 33)]).unwrap();
        assert!(i3.equals(&listed).unwrap());
        // t^33 = t^12 * t^21 is not needed
        assert_eq!(exps_of(&i3), vec![vec![12], vec![19], vec![26]]);
    }

    #[test]
    fn colon_examples() {
        let r = poly(&["x", "y"], vec![vec![0, 3]], 8);
        let unit = Submodule::unit_ideal(&r);
        let zero = Submodule::zero(unit.ambient());
        let y = Submodule::ideal(&r, &[mono(&r, &[0, 1])]).unwrap();
        let ann = Submodule::colon_module(&zero, &y, Some(&unit)).unwrap();
        assert_eq!(exps_of(&ann), vec![vec![0, 2]]);

        let m = Submodule::ideal(&r, &[mono(&r, &[1, 0]), mono(&r, &[0, 1])]).unwrap();
        let c = Submodule::colon_ideal(&m, &unit).unwrap();
        assert!(c.equals(&m).unwrap());
        let same = Submodule::colon_module(&m, &unit, None).unwrap();
        assert!(same.equals(&m).unwrap());
    }

    #[test]
    fn zero_colon_is_flagged_unit() {
        let r = poly(&["x", "y"], vec![], 6);
        let unit = Submodule::unit_ideal(&r);
        let x = Submodule::ideal(&r, &[mono(&r, &[1, 0])]).unwrap();
        let c = Submodule::colon_ideal(&x, &Submodule::zero(unit.ambient())).unwrap();
        assert!(c.equals(&unit).unwrap());
        assert!(c.note().is_some());
    }

    #[test]
    fn quotient_lengths() {
        let r = poly(&["x", "y"], vec![vec![1, 1], vec![0, 2]], 12);
        let unit = Submodule::unit_ideal(&r);
        let m = Submodule::ideal(&r, &[mono(&r, &[1, 0]), mono(&r, &[0, 1])]).unwrap();
        let lens: Vec<u64> = (1..=3)
            .map(|k| {
                let p = Submodule::power(&m, k).unwrap();
                Submodule::quotient_length(&unit, &p).unwrap().finite().unwrap()
            })
            .collect();
        assert_eq!(lens, vec![1, 3, 4]);

        let p = poly(&["x", "y"], vec![], 10);
        let x = Submodule::ideal(&p, &[mono(&p, &[1, 0])]).unwrap();
        let unit = Submodule::unit_ideal(&p);
        assert_eq!(Submodule::quotient_length(&unit, &x).unwrap(), Length::Infinite);

        let s = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 60)).unwrap();
        let i = Submodule::ideal(&s, &[t(&s, 4), t(&s, 11)]).unwrap();
        let it = i.sum(&Submodule::ideal(&s, &[t(&s, 18)]).unwrap()).unwrap();
        assert_eq!(Submodule::quotient_length(&it, &i).unwrap(), Length::Finite(1));
        let unit = Submodule::unit_ideal(&s);
        let max = Submodule::ideal(&s, &[t(&s, 4), t(&s, 11), t(&s, 17), t(&s, 18)]).unwrap();
        assert_eq!(Submodule::quotient_length(&unit, &max).unwrap(), Length::Finite(1));
    }

    #[test]
    fn minimal_generators_strip_redundancy() {
        let r = poly(&["x", "y"], vec![], 6);
        let i = Submodule::ideal(&r, &[mono(&r, &[1, 0]), mono(&r, &[2, 0]), mono(&r, &[0, 1])]).unwrap();
        assert_eq!(exps_of(&i), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn direct_sum_pieces_add() {
        let r = poly(&["x", "y"], vec![], 6);
        let a = Submodule::ideal(&r, &[mono(&r, &[1, 0])]).unwrap();
        let b = Submodule::ideal(&r, &[mono(&r, &[0, 1]), mono(&r, &[1, 0])]).unwrap();
        let s = Submodule::direct_sum(&a, &b).unwrap();
        for d in 0..=6 {
            assert_eq!(s.dim(d).unwrap(), a.dim(d).unwrap() + b.dim(d).unwrap());
        }
    }
}
