//! Numerical laboratory for the truncated Laplacian `P⁻ₖ(X) = λ₁(X) + … + λₖ(X)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`operator`] evaluates ordered spectra of symmetric matrices and the partial sums `P⁻ₖ`.
//! * [`models`] holds the reaction terms `f` and the explicit one-dimensional and radial profiles.
//! * [`viscosity`] decides whether an embedded profile is a viscosity sub/super solution of
//!   `P⁻ₖ(D²u) + f(u) = 0`.
//! * [`radial`] integrates the radial reduction `v' + (r/k) f(v) = 0` and its quadrature form.
//! * [`eigenbound`] checks the test-function inequality on the collapsing domains `Qₙ`.
//! * [`fd`] is a wide-stencil monotone finite-difference solver for `P⁻₁(D²u) + f(u) = 0` in 2D.

pub mod eigenbound;
pub mod error;
pub mod fd;
pub mod models;
pub mod operator;
pub mod radial;
pub mod viscosity;

pub use error::{Error, Result};
pub use models::{Candidate, CandidateKind, CatalogEntry, Corner, Nonlinearity, Profile1D};
pub use operator::{eigenvalues_sym, pminus_k, Spectrum, SymmetricMatrix};
pub use viscosity::{Status, Verdict};
