//! Exact computation of Ratliff-Rush ideals, closures and Hilbert-Samuel
//! data over truncated graded rings.

pub mod closure;
pub mod error;
pub mod field;
pub mod hilbert;
pub mod linalg;
pub mod module;
pub mod present;
pub mod ratliff;
pub mod ring;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use module::{Ambient, Comparison, FreeModule, HVec, Length, Submodule, Subquotient};
pub use ring::{build_ring, Backend, MonoId, Ring, RingElement, RingPresentation, TruncatedAlgebra};
