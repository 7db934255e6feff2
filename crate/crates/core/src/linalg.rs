use crate::field::Field;

/// Sparse vector: (column, coefficient) pairs, strictly increasing columns,
/// no zero coefficients.
pub type SparseRow<F> = Vec<(u32, <F as Field>::Elem)>;

/// Sorts and merges raw (column, coefficient) terms into a `SparseRow`.
pub fn normalize_terms<F: Field>(field: &F, mut terms: Vec<(u32, F::Elem)>) -> SparseRow<F> {
    terms.sort_by_key(|t| t.0);
    let mut out: SparseRow<F> = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

pub fn scale_row<F: Field>(field: &F, row: &[(u32, F::Elem)], c: &F::Elem) -> SparseRow<F> {
    if field.is_zero(c) {
        return Vec::new();
    }
    row.iter().map(|(i, v)| (*i, field.mul(v, c))).collect()
}

/// a + c*b, both sorted.
pub fn axpy<F: Field>(field: &F, a: &[(u32, F::Elem)], c: &F::Elem, b: &[(u32, F::Elem)]) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn coeff_at<F: Field>(row: &[(u32, F::Elem)], col: u32) -> Option<&F::Elem> {
    row.binary_search_by_key(&col, |t| t.0).ok().map(|i| &row[i].1)
}

/// A subspace of k^ncols in reduced row echelon form: pivots strictly
/// increasing, pivot coefficients 1, pivot columns cleared in all other rows.
/// Two equal subspaces have identical `Echelon` values.
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseRow<F>>,
}

impl<F: Field> Clone for Echelon<F> {
    fn clone(&self) -> Self {
        Echelon {
            field: self.field.clone(),
            ncols: self.ncols,
            rows: self.rows.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for Echelon<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Echelon")
            .field("ncols", &self.ncols)
            .field("rows", &self.rows)
            .finish()
    }
}

impl<F: Field> PartialEq for Echelon<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn full(field: &F, ncols: usize) -> Self {
        let rows = (0..ncols as u32).map(|c| vec![(c, field.one())]).collect();
        Echelon {
            field: field.clone(),
            ncols,
            rows,
        }
    }

    pub fn from_rows(field: &F, ncols: usize, rows: impl IntoIterator<Item = SparseRow<F>>) -> Self {
        let mut e = Self::new(field, ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[SparseRow<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    fn pivot_row(&self, col: u32) -> Option<usize> {
        self.rows.binary_search_by_key(&col, |r| r[0].0).ok()
    }

    /// Normal form of `v` modulo the span.
    pub fn reduce(&self, v: &[(u32, F::Elem)]) -> SparseRow<F> {
        let f = &self.field;
        let mut hits = Vec::new();
        let mut rest: Vec<(u32, F::Elem)> = Vec::with_capacity(v.len());
        for (c, a) in v {
            match self.pivot_row(*c) {
                Some(i) => hits.push((i, a.clone())),
                None => rest.push((*c, a.clone())),
            }
        }
        if hits.is_empty() {
            return rest;
        }
        if hits.len() == 1 && self.rows[hits[0].0].len() == 1 {
            return rest;
        }
        let mut terms = rest;
        for (i, a) in hits {
            let na = f.neg(&a);
            for (c, b) in self.rows[i].iter().skip(1) {
                terms.push((*c, f.mul(&na, b)));
            }
        }
        normalize_terms(f, terms)
    }

    pub fn contains(&self, v: &[(u32, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds a vector; returns whether the span grew.
    pub fn insert(&mut self, v: SparseRow<F>) -> bool {
        let nf = self.reduce(&v);
        if nf.is_empty() {
            return false;
        }
        self.insert_reduced(nf);
        true
    }

    /// `nf` must already be reduced against the current rows.
    fn insert_reduced(&mut self, nf: SparseRow<F>) {
        let f = self.field.clone();
        let lead_inv = f.inv(&nf[0].1);
        let nf = if f.is_one(&nf[0].1) { nf } else { scale_row(&f, &nf, &lead_inv) };
        let pivot = nf[0].0;
        for row in self.rows.iter_mut() {
            if let Some(c) = coeff_at::<F>(row, pivot) {
                let nc = f.neg(c);
                *row = axpy(&f, row, &nc, &nf);
            }
        }
        let pos = self.rows.partition_point(|r| r[0].0 < pivot);
        self.rows.insert(pos, nf);
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let combos = kernel(
            &self.field,
            self.ncols,
            self.rows.iter().map(|r| other.reduce(r)).collect(),
        );
        let vecs = combos.into_iter().map(|c| combine(&self.field, &c, &self.rows));
        Echelon::from_rows(&self.field, self.ncols, vecs)
    }
}

/// Σ c_j rows[j].
pub fn combine<F: Field>(field: &F, coeffs: &[(u32, F::Elem)], rows: &[SparseRow<F>]) -> SparseRow<F> {
    let mut terms = Vec::new();
    for (j, c) in coeffs {
        for (col, v) in &rows[*j as usize] {
            terms.push((*col, field.mul(c, v)));
        }
    }
    normalize_terms(field, terms)
}

/// Basis of {c : Σ c_j images[j] = 0}, as sparse coefficient vectors over the
/// index j. Images live in k^img_cols.
pub fn kernel<F: Field>(field: &F, img_cols: usize, images: Vec<SparseRow<F>>) -> Vec<SparseRow<F>> {
    let m = images.len();
    let mut ech = Echelon::new(field, img_cols + m);
    for (j, mut img) in images.into_iter().enumerate() {
        img.push(((img_cols + j) as u32, field.one()));
        ech.insert(img);
    }
    ech.rows
        .into_iter()
        .filter(|r| r[0].0 as usize >= img_cols)
        .map(|r| r.into_iter().map(|(c, v)| (c - img_cols as u32, v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn dense_rank(f: &PrimeField, mut m: Vec<Vec<u64>>) -> usize {
        let mut rank = 0;
        let cols = m.first().map_or(0, |r| r.len());
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rank, p);
            let inv = f.inv(&m[rank][c]);
            for i in 0..m.len() {
                if i != rank && m[i][c] != 0 {
                    let k = f.mul(&m[i][c], &inv);
                    for j in 0..cols {
                        let s = f.mul(&k, &m[rank][j]);
                        m[i][j] = f.sub(&m[i][j], &s);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_sparse(row: &[u64]) -> SparseRow<PrimeField> {
        row.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (i as u32, *v))
            .collect()
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<u64>>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(prop_oneof![Just(0u64), 0u64..101], c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_matches_dense_elimination(m in matrix()) {
            let f = gf();
            let cols = m[0].len();
            let ech = Echelon::from_rows(&f, cols, m.iter().map(|r| to_sparse(r)));
            prop_assert_eq!(ech.dim(), dense_rank(&f, m.clone()));
            for r in &m {
                prop_assert!(ech.contains(&to_sparse(r)));
            }
        }

        #[test]
        fn canonical_under_row_permutation(m in matrix()) {
            let f = gf();
            let cols = m[0].len();
            let a = Echelon::from_rows(&f, cols, m.iter().map(|r| to_sparse(r)));
            let b = Echelon::from_rows(&f, cols, m.iter().rev().map(|r| to_sparse(r)));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn kernel_vectors_annihilate(m in matrix()) {
            let f = gf();
            let cols = m[0].len();
            let images: Vec<_> = m.iter().map(|r| to_sparse(r)).collect();
            let ker = kernel(&f, cols, images.clone());
            prop_assert_eq!(ker.len() + dense_rank(&f, m.clone()), m.len());
            for c in &ker {
                prop_assert!(combine(&f, c, &images).is_empty());
            }
        }
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let f = gf();
        let a = Echelon::from_rows(&f, 3, vec![vec![(0, 1)], vec![(1, 1)]]);
        let b = Echelon::from_rows(&f, 3, vec![vec![(1, 1)], vec![(2, 1)]]);
        let i = a.intersect(&b);
        assert_eq!(i.rows(), &[vec![(1u32, 1u64)]]);
    }
}
