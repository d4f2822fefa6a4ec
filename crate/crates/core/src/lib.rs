//! Exact conjugacy-class invariants for elements of the symplectic group
//! `Sp_n(F_q)` over finite fields of odd characteristic.
//!
//! The pipeline runs bottom-up:
//!
//! * [`field`] and [`poly`]: prime and extension field arithmetic, dense
//!   polynomials, factorization and the reciprocal ("bar") operation.
//! * [`linalg`]: exact dense matrices, kernels, minimal polynomials and
//!   general-linear multiplicities.
//! * [`symform`]: alternating forms, symplectic bases and random symplectic
//!   elements.
//! * [`ringmod`]: the truncated local ring `K[X]/(q^m)` with its involution,
//!   the trace-like functional, the Hermitian form of a primary block and the
//!   forms it induces on the filtration quotients.
//! * [`classify`]: primary decomposition, invariant descriptors, canonical
//!   labels, conjugacy tests and enumeration of all classes.
//! * [`centralizer`]: centralizer orders from the descriptor.
//! * [`oracle`]: brute-force enumeration of small symplectic groups, used as
//!   independent ground truth.

pub mod centralizer;
pub mod classify;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod ringmod;
pub mod symform;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, SquareClass};
pub use linalg::Matrix;
pub use poly::Poly;
