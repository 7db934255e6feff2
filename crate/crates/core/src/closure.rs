use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{FreeModule, Submodule};
use crate::ring::{MonoId, RingElement};

/// Integral closure of a monomial ideal.
///
/// Semigroup rings: everything of valuation at least the smallest generator
/// exponent. Monomial quotients k[x]/Q: a monomial is integral over I when,
/// for every minimal prime P of Q, it lies in P or its exponent lies in the
/// Newton polyhedron of the generators of I surviving modulo P.
pub fn integral_closure<F: Field>(ideal: &Submodule<F>) -> Result<Submodule<F>> {
    if !ideal.is_ideal() {
        return Err(Error::Validation("integral closure needs an ideal".into()));
    }
    let ring = ideal.ring().clone();
    let gens = ideal.generator_elements();
    if gens.iter().any(|g| !g.is_monomial()) {
        return Err(Error::Unsupported(
            "integral closure is implemented for monomial ideals only".into(),
        ));
    }
    if ideal.is_truncated() || !ideal.is_complete() {
        return Err(Error::Horizon("integral closure needs a fully known ideal".into()));
    }
    if gens.is_empty() {
        return Ok(ideal.clone());
    }
    let gen_exps: Vec<Vec<u32>> = gens
        .iter()
        .map(|g| ring.exponents(*g.terms().keys().next().unwrap()).to_vec())
        .collect();
    let d = ring.truncation();
    let mut members: Vec<MonoId> = Vec::new();
    if ring.is_semigroup() {
        let low = gen_exps.iter().map(|e| e[0]).min().unwrap() as usize;
        for deg in low..=d {
            members.extend(ring.degree_range(deg));
        }
    } else {
        let weights = ring.generator_weights().to_vec();
        let top = (ideal.max_gen_degree().unwrap() + weights.iter().sum::<usize>()).min(d);
        let primes = minimal_primes(weights.len(), ring.quotient_monomials());
        for deg in 0..=top {
            for m in ring.degree_range(deg) {
                let e = ring.exponents(m);
                let ok = primes.iter().all(|p| {
                    if p.iter().any(|&j| e[j] > 0) {
                        return true;
                    }
                    let pts: Vec<&Vec<u32>> = gen_exps
                        .iter()
                        .filter(|g| p.iter().all(|&j| g[j] == 0))
                        .collect();
                    in_newton_polyhedron(&pts, e)
                });
                if ok {
                    members.push(m);
                }
            }
        }
    }
    let elems: Vec<RingElement<F>> = members
        .into_iter()
        .map(|m| RingElement::monomial(&ring, m, ring.field().one()))
        .collect();
    let amb = FreeModule::ring_module(&ring);
    let vecs = elems
        .iter()
        .filter_map(|e| amb.vector(std::slice::from_ref(e)).transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(Submodule::span(&amb, vecs, d)?.minimalized())
}

/// Minimal vertex covers of the supports of the quotient monomials, i.e. the
/// minimal primes of the monomial ideal they generate, as variable sets.
pub fn minimal_primes(nvars: usize, quotient: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let supports: Vec<u64> = quotient
        .iter()
        .map(|q| {
            q.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    let mut covers: Vec<u64> = Vec::new();
    let mut masks: Vec<u64> = (0..(1u64 << nvars)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        if supports.iter().all(|s| s & m != 0) && !covers.iter().any(|c| c & m == *c) {
            covers.push(m);
        }
    }
    covers
        .into_iter()
        .map(|c| (0..nvars).filter(|j| c & (1 << j) != 0).collect())
        .collect()
}

/// Whether e ∈ conv(points) + R≥0^n, decided by an exact phase-one simplex on
/// λ ≥ 0, Σλ = 1, Σ λ_i p_i + s = e, s ≥ 0.
pub fn in_newton_polyhedron(points: &[&Vec<u32>], e: &[u32]) -> bool {
    if points.is_empty() {
        return false;
    }
    if points.iter().any(|p| p.iter().zip(e).all(|(a, b)| a <= b)) {
        return true;
    }
    let n = e.len();
    let m = points.len();
    // Columns: λ (m), slack (n); rows: n coordinate rows then the convexity row.
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![BigRational::zero(); m + n];
        for (i, p) in points.iter().enumerate() {
            row[i] = BigRational::from_integer(p[j].into());
        }
        row[m + j] = BigRational::one();
        a.push(row);
        b.push(BigRational::from_integer(e[j].into()));
    }
    let mut conv = vec![BigRational::zero(); m + n];
    for c in conv.iter_mut().take(m) {
        *c = BigRational::one();
    }
    a.push(conv);
    b.push(BigRational::one());
    phase_one_feasible(a, b)
}

/// Feasibility of {x ≥ 0 : Ax = b} with b ≥ 0, via artificial variables and
/// Bland's rule.
fn phase_one_feasible(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    let total = cols + rows;
    let mut t: Vec<Vec<BigRational>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            for k in 0..rows {
                r.push(if k == i { BigRational::one() } else { BigRational::zero() });
            }
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (cols..total).collect();
    // Reduced costs of minimizing the sum of artificials.
    let mut cost = vec![BigRational::zero(); total + 1];
    for r in &t {
        for (c, v) in cost.iter_mut().zip(r) {
            *c -= v;
        }
    }
    for c in cost.iter_mut().take(total).skip(cols) {
        *c = BigRational::zero();
    }
    loop {
        let Some(enter) = (0..total).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[total] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else { break };
        let piv = t[li][enter].clone();
        for v in t[li].iter_mut() {
            *v /= &piv;
        }
        let prow = t[li].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != li && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (v, p) in r.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v -= &f * p;
        }
        basis[li] = enter;
    }
    cost[total].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::{build_ring, RingPresentation};

    fn gf() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn newton_polyhedron_membership() {
        let p1 = vec![2, 0];
        let p2 = vec![0, 2];
        let pts = vec![&p1, &p2];
        assert!(in_newton_polyhedron(&pts, &[1, 1]));
        assert!(!in_newton_polyhedron(&pts, &[1, 0]));
        assert!(in_newton_polyhedron(&pts, &[3, 0]));
        let q1 = vec![3, 0];
        let q2 = vec![0, 3];
        let qs = vec![&q1, &q2];
        assert!(!in_newton_polyhedron(&qs, &[1, 1]));
        assert!(in_newton_polyhedron(&qs, &[2, 1]));
    }

    #[test]
    fn minimal_primes_of_monomial_ideals() {
        assert_eq!(minimal_primes(2, &[]), vec![Vec::<usize>::new()]);
        assert_eq!(minimal_primes(2, &[vec![0, 3]]), vec![vec![1]]);
        assert_eq!(minimal_primes(2, &[vec![1, 1], vec![0, 2]]), vec![vec![1]]);
        assert_eq!(minimal_primes(3, &[vec![1, 1, 0]]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn closure_of_square_powers() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![], 10)).unwrap();
        let m = |e: &[u32]| RingElement::monomial(&r, r.lookup(e).unwrap(), 1);
        let i = Submodule::ideal(&r, &[m(&[2, 0]), m(&[0, 2])]).unwrap();
        let expect = Submodule::ideal(&r, &[m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]).unwrap();
        assert!(integral_closure(&i).unwrap().equals(&expect).unwrap());
    }

    #[test]
    fn closure_with_nilpotents() {
        let r = build_ring(gf(), RingPresentation::polynomial(&["x", "y"], vec![vec![0, 3]], 10)).unwrap();
        let m = |e: &[u32]| RingElement::monomial(&r, r.lookup(e).unwrap(), 1);
        let i = Submodule::ideal(&r, &[m(&[2, 0])]).unwrap();
        let expect = Submodule::ideal(&r, &[m(&[2, 0]), m(&[0, 1])]).unwrap();
        assert!(integral_closure(&i).unwrap().equals(&expect).unwrap());
    }

    #[test]
    fn semigroup_closure_is_valuation_ideal() {
        let r = build_ring(gf(), RingPresentation::semigroup(&[4, 11, 17, 18], 60)).unwrap();
        let t = |s: u32| RingElement::monomial(&r, r.lookup(&[s]).unwrap(), 1);
        let i = Submodule::ideal(&r, &[t(4), t(11)]).unwrap();
        let mm = Submodule::ideal(&r, &[t(4), t(11), t(17), t(18)]).unwrap();
        assert!(integral_closure(&i).unwrap().equals(&mm).unwrap());
        let i2 = Submodule::ideal(&r, &[t(8), t(15)]).unwrap();
        let c = integral_closure(&i2).unwrap();
        assert!(c.contains_element(&t(11)).unwrap());
        assert!(!c.contains_element(&t(4)).unwrap());
        assert!(c.contains_element(&t(12)).unwrap());
    }
}
