use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Echelon;
use crate::module::{FreeModule, Submodule};
use crate::ring::{Ring, RingElement};

#[derive(Clone, Debug)]
pub struct Presented<F: Field> {
    pub module: Submodule<F>,
    pub shifts: Vec<usize>,
    /// The generators were independent over a domain, so the module was
    /// replaced by the free module on them.
    pub free_on_generators: bool,
    pub note: Option<String>,
}

/// Shifts s with deg(v_j) + s_j constant along every generator v, normalized
/// so each connected block of components has minimum shift 0.
pub fn infer_shifts<F: Field>(rank: usize, vecs: &[Vec<RingElement<F>>]) -> Option<Vec<usize>> {
    // edges j -> k with s_k - s_j = deg_j - deg_k
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rank];
    for v in vecs {
        let mut nz = Vec::new();
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            nz.push((j, c.homogeneous_degree()? as i64));
        }
        for w in nz.windows(2) {
            let ((j, dj), (k, dk)) = (w[0], w[1]);
            adj[j].push((k, dj - dk));
            adj[k].push((j, dk - dj));
        }
    }
    let mut shift: Vec<Option<i64>> = vec![None; rank];
    let mut out = vec![0usize; rank];
    for root in 0..rank {
        if shift[root].is_some() {
            continue;
        }
        shift[root] = Some(0);
        let mut block = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            let sj = shift[j].unwrap();
            for &(k, delta) in &adj[j] {
                match shift[k] {
                    None => {
                        shift[k] = Some(sj + delta);
                        block.push(k);
                        queue.push_back(k);
                    }
                    Some(sk) if sk != sj + delta => return None,
                    _ => {}
                }
            }
        }
        let low = block.iter().map(|&j| shift[j].unwrap()).min().unwrap();
        for j in block {
            out[j] = (shift[j].unwrap() - low) as usize;
        }
    }
    Some(out)
}

/// Builds the submodule generated by `vecs` in R^rank. Without explicit
/// shifts they are inferred; if no grading makes the generators homogeneous
/// and the ring is a domain with the generators independent (checked by a
/// seeded random evaluation), the module is replaced by the free module on
/// the generators.
pub fn present_module<F: Field>(
    ring: &Ring<F>,
    rank: usize,
    vecs: &[Vec<RingElement<F>>],
    shifts: Option<Vec<usize>>,
    seed: u64,
) -> Result<Presented<F>> {
    if vecs.iter().any(|v| v.len() != rank) {
        return Err(Error::Validation(format!("module generators must have {rank} components")));
    }
    if let Some(s) = shifts {
        if s.len() != rank {
            return Err(Error::Validation(format!("{} shifts for rank {rank}", s.len())));
        }
        let amb = FreeModule::new(ring, s.clone())?;
        return Ok(Presented {
            module: Submodule::from_vectors(&amb, vecs)?,
            shifts: s,
            free_on_generators: false,
            note: None,
        });
    }
    if let Some(s) = infer_shifts(rank, vecs) {
        let amb = FreeModule::new(ring, s.clone())?;
        return Ok(Presented {
            module: Submodule::from_vectors(&amb, vecs)?,
            shifts: s,
            free_on_generators: false,
            note: None,
        });
    }
    if !ring.is_domain() {
        return Err(Error::Unsupported(
            "generators admit no grading and the ring is not a domain".into(),
        ));
    }
    let f = ring.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point: Vec<F::Elem> = (0..ring.point_len()).map(|_| f.random_nonzero(&mut rng)).collect();
    let rows = vecs.iter().map(|v| {
        let row: Vec<(u32, F::Elem)> = v
            .iter()
            .enumerate()
            .map(|(j, c)| (j as u32, c.evaluate(&point)))
            .filter(|(_, x)| !f.is_zero(x))
            .collect();
        row
    });
    let ech = Echelon::from_rows(&f, rank, rows);
    if ech.dim() != vecs.len() {
        return Err(Error::Unsupported(
            "generators admit no grading and are not independent; no graded model".into(),
        ));
    }
    let s = vec![0; vecs.len()];
    let amb = FreeModule::new(ring, s.clone())?;
    Ok(Presented {
        module: Submodule::whole(&amb),
        shifts: s,
        free_on_generators: true,
        note: Some(format!(
            "generators are independent over a domain; computed in the free module of rank {}",
            vecs.len()
        )),
    })
}
