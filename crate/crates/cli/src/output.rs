//! Canonical JSON: generators are the canonical minimal generators of the
//! submodule, each a list of terms with exponent tuples and the coefficient
//! rendered as a symmetric integer (or a reduced fraction over QQ).

use rrtool_core::hilbert::{RhoMethod, SuperficialCertificate, SuperficialMethod};
use rrtool_core::ratliff::{Certificate, ChainResult};
use rrtool_core::{Field, RingElement, Submodule};
use serde_json::{json, Value};

pub fn element<F: Field>(a: &RingElement<F>) -> Value {
    let ring = a.ring();
    let f = ring.field();
    let mut terms: Vec<(&u32, &F::Elem)> = a.terms().iter().collect();
    terms.sort_by_key(|(m, _)| std::cmp::Reverse(**m));
    Value::Array(
        terms
            .into_iter()
            .map(|(m, c)| json!({"exponents": ring.exponents(*m), "coefficient": f.render(c)}))
            .collect(),
    )
}

pub fn submodule<F: Field>(m: &Submodule<F>) -> Value {
    let amb = m.ambient();
    let rank = amb.rank();
    let gens: Vec<Value> = m
        .minimal_generators()
        .iter()
        .map(|v| {
            if rank == 1 {
                return element(&amb.components(v)[0]);
            }
            let mut terms = Vec::new();
            for (i, c) in amb.components(v).iter().enumerate() {
                if let Value::Array(ts) = element(c) {
                    for mut t in ts {
                        t["component"] = json!(i);
                        terms.push(t);
                    }
                }
            }
            Value::Array(terms)
        })
        .collect();
    json!({
        "rank": rank,
        "count": gens.len(),
        "generators": gens,
        "complete": m.is_complete(),
        "truncated": m.is_truncated(),
    })
}

pub fn render_submodule<F: Field>(m: &Submodule<F>) -> String {
    let amb = m.ambient();
    let parts: Vec<String> = m.minimal_generators().iter().map(|v| amb.render(v)).collect();
    format!("<{}>", parts.join(", "))
}

pub fn certificate<F: Field>(c: &Certificate<F>) -> Value {
    match c {
        Certificate::Torsion => json!({"kind": c.label()}),
        Certificate::Reduction { x, r } => json!({"kind": c.label(), "x": element(x), "x_text": x.to_string(), "r": r}),
        Certificate::Rho { bound, x } => {
            json!({"kind": c.label(), "bound": bound, "x": element(x), "x_text": x.to_string()})
        }
        Certificate::Heuristic { window } => json!({"kind": c.label(), "window": window}),
    }
}

pub fn chain<F: Field>(c: &ChainResult<F>) -> Value {
    json!({
        "value": submodule(&c.value),
        "certificate": certificate(&c.certificate),
        "stabilized_at": c.stabilized_at,
        "horizon": c.horizon,
    })
}

pub fn superficial<F: Field>(s: &SuperficialCertificate<F>) -> Value {
    json!({
        "x": element(&s.x),
        "x_text": s.x.to_string(),
        "c": s.c,
        "n_top": s.n_top,
        "method": match s.method {
            SuperficialMethod::ColonWindow => "colon-window",
            SuperficialMethod::CoefficientMatch => "coefficient-match",
        },
    })
}

pub fn rho_method<F: Field>(m: &RhoMethod<F>) -> Value {
    match m {
        RhoMethod::Reduction { x, r } => json!({"kind": "reduction", "x": element(x), "x_text": x.to_string(), "r": r}),
        RhoMethod::Eta(b) => json!({
            "kind": "eta",
            "bound": b.bound,
            "eta": b.eta(),
            "eta_module": b.eta_module,
            "eta_quotient": b.eta_quotient,
            "superficial": superficial(&b.superficial),
        }),
        RhoMethod::Heuristic { window } => json!({"kind": "heuristic", "window": window}),
    }
}
