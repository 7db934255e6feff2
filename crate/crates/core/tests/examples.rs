use rrtool_core::hilbert::{self, SuperficialMethod};
use rrtool_core::present::present_module;
use rrtool_core::ratliff::{self, Analysis, Certificate, Options};
use rrtool_core::*;

type R = Ring<PrimeField>;
type E = RingElement<PrimeField>;
type S = Submodule<PrimeField>;

fn gf() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn semigroup(gens: &[u32], d: usize) -> R {
    build_ring(gf(), RingPresentation::semigroup(gens, d)).unwrap()
}

fn poly(q: Vec<Vec<u32>>, d: usize) -> R {
    build_ring(gf(), RingPresentation::polynomial(&["x", "y"], q, d)).unwrap()
}

fn mono(r: &R, e: &[u32]) -> E {
    RingElement::monomial(r, r.lookup(e).unwrap(), 1)
}

fn ideal(r: &R, es: &[&[u32]]) -> S {
    Submodule::ideal(r, &es.iter().map(|e| mono(r, e)).collect::<Vec<_>>()).unwrap()
}

fn exponents(i: &S) -> Vec<Vec<u32>> {
    i.generator_elements()
        .iter()
        .map(|e| {
            assert!(e.is_monomial(), "{e} is not a monomial");
            i.ring().exponents(*e.terms().keys().next().unwrap()).to_vec()
        })
        .collect()
}

fn t_exps(i: &S) -> Vec<u32> {
    exponents(i).into_iter().map(|e| e[0]).collect()
}

fn ex813_ideal(r: &R) -> S {
    ideal(
        r,
        &[&[0, 22], &[4, 18], &[7, 15], &[8, 14], &[11, 11], &[14, 8], &[15, 7], &[18, 4], &[22, 0]],
    )
}

#[test]
fn semigroup_example_strict_chain() {
    let r = semigroup(&[4, 11, 17, 18], 100);
    let i = ideal(&r, &[&[4], &[11]]);
    let m = ideal(&r, &[&[4], &[11], &[17]]);
    let unit = Submodule::unit_ideal(&r);
    let opts = Options::default();
    let tilde = ratliff::rr_ideal(&i, &unit, 1, &opts).unwrap();
    let rim = ratliff::rr_ideal(&i, &m, 1, &opts).unwrap();
    assert_eq!(t_exps(&tilde.value), vec![4, 11, 18]);
    assert_eq!(t_exps(&rim.value), vec![4, 11, 17, 18]);
    assert!(tilde.value.contains(&i).unwrap() && !i.contains(&tilde.value).unwrap());
    assert!(rim.value.contains(&tilde.value).unwrap() && !tilde.value.contains(&rim.value).unwrap());
    assert!(matches!(rim.certificate, Certificate::Reduction { r: 2, .. }));
}

#[test]
fn semigroup_example_powers_of_i() {
    // I^n = <t^{4n+7i} : 0 <= i <= n>, checked against the listed set
    let r = semigroup(&[4, 11, 17, 18], 100);
    let i = ideal(&r, &[&[4], &[11]]);
    for n in 1..=5u32 {
        let listed: Vec<Vec<u32>> = (0..=n).map(|k| vec![4 * n + 7 * k]).collect();
        let refs: Vec<&[u32]> = listed.iter().map(|v| v.as_slice()).collect();
        assert!(Submodule::power(&i, n as usize).unwrap().equals(&ideal(&r, &refs)).unwrap());
    }
}

#[test]
fn semigroup_example_recursions_and_witness() {
    let r = semigroup(&[4, 11, 17, 18], 120);
    let i = ideal(&r, &[&[4], &[11]]);
    let m = ideal(&r, &[&[4], &[11], &[17]]);
    let unit = Submodule::unit_ideal(&r);
    let opts = Options::default();
    let am = Analysis::new(&i, &m, &opts).unwrap();
    let ar = Analysis::new(&i, &unit, &opts).unwrap();
    assert_eq!(am.reduction().unwrap().r, 2);
    let x = ideal(&r, &[&[4]]);
    let mut prev_m = am.rr_ideal(1).unwrap().value;
    let mut prev_r = ar.rr_ideal(1).unwrap().value;
    assert_eq!(prev_m.minimal_generators().len(), 4);
    assert_eq!(prev_r.minimal_generators().len(), 3);
    for n in 1..=5usize {
        if n > 1 {
            let cm = am.rr_ideal(n).unwrap().value;
            let cr = ar.rr_ideal(n).unwrap().value;
            assert!(cm.equals(&Submodule::ideal_times(&x, &prev_m).unwrap()).unwrap());
            assert!(cr.equals(&Submodule::ideal_times(&x, &prev_r).unwrap()).unwrap());
            prev_m = cm;
            prev_r = cr;
        }
        let witness = mono(&r, &[4 * n as u32 + 13]);
        assert!(!prev_r.contains_element(&witness).unwrap(), "n = {n}");
        assert!(prev_m.contains_element(&witness).unwrap());
    }
}

#[test]
fn polynomial_example_closures() {
    let r = poly(vec![], 190);
    let i = ex813_ideal(&r);
    let m = ideal(&r, &[&[2, 0], &[0, 3]]);
    let unit = Submodule::unit_ideal(&r);
    let opts = Options::default();

    let ar = Analysis::new(&i, &unit, &opts).unwrap();
    let t1 = ar.rr_ideal(1).unwrap();
    assert!(t1.value.equals(&i).unwrap());
    assert!(matches!(t1.certificate, Certificate::Rho { bound: 3, .. }));
    let extra = [&[20u32, 24][..], &[24, 20]];
    let i2 = Submodule::power(&i, 2).unwrap();
    let expect2 = i2.sum(&ideal(&r, &extra)).unwrap();
    assert!(ar.rr_ideal(2).unwrap().value.equals(&expect2).unwrap());
    assert!(ar.chain_ideal(2, 3).unwrap().equals(&expect2).unwrap());
    for n in 3..=5 {
        assert!(ar.rr_ideal(n).unwrap().value.equals(&Submodule::power(&i, n).unwrap()).unwrap());
    }

    let am = Analysis::new(&i, &m, &opts).unwrap();
    let c = am.chain_ideal(1, 3).unwrap();
    let oracle = monomial_colon_oracle(
        &monomial_power_times(&I813, 4, &[[2, 0], [0, 3]]),
        &monomial_power_times(&I813, 3, &[[2, 0], [0, 3]]),
        60,
    );
    let refs: Vec<&[u32]> = oracle.iter().map(|v| v.as_slice()).collect();
    assert!(c.equals(&ideal(&r, &refs)).unwrap());
    // the oracle finds x^10*y^13 on top of the four listed extra generators
    let listed = ideal(&r, &[&[2, 21], &[6, 17], &[13, 10], &[20, 3]]);
    assert!(c.contains(&listed).unwrap());
    assert!(c.contains_element(&mono(&r, &[10, 13])).unwrap());
    assert!(!i.sum(&listed).unwrap().contains_element(&mono(&r, &[10, 13])).unwrap());
}

const I813: [[u32; 2]; 9] = [[0, 22], [4, 18], [7, 15], [8, 14], [11, 11], [14, 8], [15, 7], [18, 4], [22, 0]];

fn divides(a: &[u32; 2], b: &[u32; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1]
}

/// Monomial generators of I^k·M by direct exponent sums.
fn monomial_power_times(i: &[[u32; 2]], k: usize, m: &[[u32; 2]]) -> Vec<[u32; 2]> {
    let mut acc: Vec<[u32; 2]> = m.to_vec();
    for _ in 0..k {
        let mut next: Vec<[u32; 2]> = acc.iter().flat_map(|a| i.iter().map(move |b| [a[0] + b[0], a[1] + b[1]])).collect();
        next.sort();
        next.dedup();
        let keep: Vec<[u32; 2]> = next.iter().filter(|a| !next.iter().any(|b| b != *a && divides(b, a))).cloned().collect();
        acc = keep;
    }
    acc
}

/// Minimal monomials z of total degree ≤ bound with z·B ⊆ A.
fn monomial_colon_oracle(a: &[[u32; 2]], b: &[[u32; 2]], bound: u32) -> Vec<Vec<u32>> {
    let inside = |z: [u32; 2]| b.iter().all(|g| a.iter().any(|h| divides(h, &[z[0] + g[0], z[1] + g[1]])));
    let all: Vec<[u32; 2]> = (0..=bound)
        .flat_map(|d| (0..=d).map(move |x| [x, d - x]))
        .filter(|z| inside(*z))
        .collect();
    all.iter()
        .filter(|z| !all.iter().any(|w| w != *z && divides(w, z)))
        .map(|z| z.to_vec())
        .collect()
}

#[test]
fn polynomial_example_superficial_and_eta() {
    let r = poly(vec![], 190);
    let i = ex813_ideal(&r);
    let unit = Submodule::unit_ideal(&r);
    let u = mono(&r, &[22, 0]).add(&mono(&r, &[0, 22])).unwrap();
    let cert = hilbert::superficial_check(&u, &i, &unit, 4).unwrap().unwrap();
    assert_eq!(cert.method, SuperficialMethod::ColonWindow);

    let data = hilbert::hilbert_function(&i, &unit, 6).unwrap();
    let fit = data.fit.clone().unwrap();
    // numerator from the Poincare series, whose constant term ℓ(R/I) is 277
    assert_eq!(data.values[0], 277);
    assert_eq!(fit.numerator, vec![277, 189, 10, 10, -2]);
    assert_eq!(fit.e[..2], [484, 231]);
    let cut = hilbert::hilbert_function_mod(&i, &unit, &Submodule::ideal(&r, std::slice::from_ref(&u)).unwrap(), 6).unwrap();
    let cfit = cut.fit.unwrap();
    assert_eq!(cfit.numerator, vec![277, 189, 12, 6]);
    assert_eq!(cfit.e, vec![484, 231]);

    let b = hilbert::eta(&i, &unit, &Options::default()).unwrap().unwrap();
    assert_eq!((b.eta_module, b.eta_quotient), (2, 2));
    assert_eq!(b.bound, 3);
}

fn ex92a() -> (R, S) {
    let r = poly(vec![vec![0, 3]], 30);
    let z = RingElement::zero(&r);
    let vecs = vec![vec![z, mono(&r, &[0, 2])], vec![mono(&r, &[0, 1]), mono(&r, &[1, 0])]];
    let p = present_module(&r, 2, &vecs, None, 0).unwrap();
    assert_eq!(p.shifts, vec![0, 0]);
    (r, p.module)
}

#[test]
fn truncated_plane_module_example() {
    let (r, m) = ex92a();
    let max = ideal(&r, &[&[1, 0], &[0, 1]]);
    let opts = Options::default();
    let an = Analysis::new(&max, &m, &opts).unwrap();
    let red = an.reduction().unwrap();
    assert_eq!(red.r, 2);
    assert_eq!(red.x.to_string(), "x");
    for n in 1..=4 {
        let c = an.rr_ideal(n).unwrap();
        assert!(matches!(c.certificate, Certificate::Reduction { r: 2, .. }));
        assert!(c.value.equals(&Submodule::power(&max, n).unwrap()).unwrap());
    }
    let tilde = an.rr_module(1).unwrap().value;
    let z = RingElement::zero(&r);
    let expect = Submodule::from_vectors(
        m.ambient(),
        &[
            vec![z, mono(&r, &[0, 2])],
            vec![mono(&r, &[0, 2]), mono(&r, &[1, 1])],
            vec![mono(&r, &[1, 1]), mono(&r, &[2, 0])],
        ],
    )
    .unwrap();
    assert!(tilde.equals(&expect).unwrap());
    let mm = Submodule::ideal_times(&max, &m).unwrap();
    assert!(!tilde.equals(&mm).unwrap());
    let cert = hilbert::superficial_check(&mono(&r, &[1, 0]), &max, &m, 4).unwrap().unwrap();
    assert_eq!(cert.method, SuperficialMethod::ColonWindow);
}

#[test]
fn semigroup_free_module_example() {
    let r = semigroup(&[6, 7, 15], 200);
    let t = |s: u32| mono(&r, &[s]);
    let p = present_module(&r, 2, &[vec![t(12), t(30)], vec![t(7), t(22)]], None, 0).unwrap();
    assert!(p.free_on_generators);
    let m = p.module;
    let max = ideal(&r, &[&[6], &[7], &[15]]);
    let unit = Submodule::unit_ideal(&r);
    let opts = Options::default();
    let am = Analysis::new(&max, &m, &opts).unwrap();
    let ar = Analysis::new(&max, &unit, &opts).unwrap();
    assert_eq!(am.reduction().unwrap().r, 5);
    for n in 1..=6 {
        let rm = am.rr_ideal(n).unwrap().value;
        let tilde = ar.rr_ideal(n).unwrap().value;
        assert!(rm.equals(&tilde).unwrap(), "n = {n}");
        let pow = Submodule::power(&max, n).unwrap();
        assert_eq!(tilde.equals(&pow).unwrap(), !(2..=4).contains(&n), "n = {n}");
    }
    let mm = Submodule::ideal_times(&max, &m).unwrap();
    assert!(am.rr_module(1).unwrap().value.equals(&mm).unwrap());
}

#[test]
fn dimension_one_example_with_torsion() {
    let r = poly(vec![vec![1, 1], vec![0, 2]], 30);
    let max = ideal(&r, &[&[1, 0], &[0, 1]]);
    let unit = Submodule::unit_ideal(&r);
    let opts = Options::default();
    let data = hilbert::hilbert_function(&max, &unit, 8).unwrap();
    let fit = data.fit.unwrap();
    assert_eq!(fit.numerator, vec![1, 1, -1]);
    assert_eq!(fit.e[1] - fit.e[0] + 1, -1);
    let an = Analysis::new(&max, &unit, &opts).unwrap();
    assert!(an.torsion.module.equals(&ideal(&r, &[&[0, 1]])).unwrap());
    let rep = hilbert::dim_one_report_in(&an, 8).unwrap();
    assert_eq!(rep.torsion_length, 1);
    assert_eq!(rep.lhs, -1);
    assert!(rep.equality_attained && rep.equality_criterion && rep.inequality_holds);
    assert!(rep.cohen_macaulay);
    // the closure filtration has ẽ0 = e0 and ẽ1 = e1 + ℓ(H⁰)
    assert_eq!(rep.tail_onset, Some(0));
}
