//! Finite-truncation numerics for bipartite entanglement.
//!
//! Given any density operator `D` on `H1 ⊗ H2` and a trace-norm budget `ε`,
//! [`genericity::entangling_perturbation`] produces a nonseparable density
//! operator within trace distance `ε` of `D` (after embedding `H1` into a
//! larger space). The construction purifies `D` with an ancilla `H3`, nudges
//! the purification to a vector whose Schmidt coefficients across
//! `H1 | H2 ⊗ H3` are all nonzero, and reduces back to `H1 ⊗ H2`.
//!
//! Modules, bottom up:
//!
//! - [`linops`]: dense complex kernels (Kronecker product, trace norm,
//!   Hermitian eigendecomposition, SVD, partial trace and transpose).
//! - [`states`]: state vectors, density operators, purification, the
//!   reduction map, Schmidt decomposition and the conjugate-renormalize
//!   calculus for mixtures.
//! - [`separability`]: partial-transpose witnesses, 1-cyclic and separating
//!   vector tests, and the purity-ball separability check.
//! - [`genericity`]: the separating perturbation, the entangling pipeline and
//!   seeded samplers.
//! - [`cli`]: the `perturb`, `sweep` and `witness` commands behind the
//!   `nonsep` binary, plus the matrix and config file formats.

pub mod cli;
pub mod error;
pub mod genericity;
pub mod linops;
pub mod separability;
pub mod states;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
pub use linops::{ComplexMatrix, C64};
pub use separability::{Verdict, WitnessReport};
pub use states::{DensityOperator, DimensionProfile, StateVector};
