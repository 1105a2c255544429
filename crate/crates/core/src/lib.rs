//! Matrix exponential by finite elements in artificial time.
//!
//! `Psi(t) = exp(A t)` solves `dPsi/dt = A Psi` with `Psi(0) = I`. The
//! interval `[0, 1]` is split into elements; on each one the solution is
//! expanded in integrated Chebyshev polynomials, a weighted Galerkin
//! projection turns the ODE into one dense linear system per column, and the
//! end state of each element seeds the next. `Psi(1)` is `exp(A)`.
//!
//! ```
//! use fete_expm::{expm_fete, oracles, max_abs_diff};
//!
//! let report = expm_fete(&oracles::m2(), 8, 8)?;
//! assert!(max_abs_diff(&report.result, &oracles::exact_m2())? < 5e-14);
//! # Ok::<(), fete_expm::Error>(())
//! ```
//!
//! The guide under `book/` walks through the construction; its code
//! snippets compile and run as doc-tests of this crate.

pub mod basis;
pub mod dense;
pub mod error;
pub mod matfile;
pub mod mesh;
pub mod oracles;
pub mod propagator;
pub mod study;

pub use basis::{build_tables, eval_s, eval_t, BasisTables};
pub use dense::{
    lu_factor, lu_solve, mat_mul, max_abs_diff, ComplexMatrix, ComplexScalar, LuFactorization,
};
pub use error::{Error, Result};
pub use mesh::{uniform_mesh, TimeMesh};
pub use propagator::{
    assemble_gamma, assemble_omega, expm_fete, propagate_element, ExpmReport,
    PropagatorFactorization, DEFAULT_BASIS, DEFAULT_ELEMENTS,
};

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/mesh.md")]
    mod mesh {}
    #[doc = include_str!("../../../book/src/basis.md")]
    mod basis {}
    #[doc = include_str!("../../../book/src/propagation.md")]
    mod propagation {}
    #[doc = include_str!("../../../book/src/accuracy.md")]
    mod accuracy {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
