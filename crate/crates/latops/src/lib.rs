//! Exact divided-difference calculus on nonuniform lattices.
//!
//! Everything is computed over the Gaussian rationals Q(i) with no floating
//! point, so identities are asserted with equality rather than tolerance.
//! The crate provides:
//!
//! - [`scalar`], [`poly`], [`recurrence`]: the exact coefficient field,
//!   dense polynomial algebra, and the monic three-term recurrence builder
//! - [`lattice`]: q-quadratic and quadratic lattices with their structure
//!   sequences and the polynomials U1, U2
//! - [`ddops`]: monomial-basis tables for D_x and S_x built from the product
//!   rules, an independent pointwise oracle, and derived sequences
//! - [`functionals`]: truncated moment functionals, the dual operator
//!   calculus, dual bases, and the Pearson moment solver
//! - [`families`]: closed-form recurrence coefficients (Askey-Wilson,
//!   Meixner second kind, Pearson-derived, and the two solution families of
//!   the characterization D_x P_{n+1} = (gamma_{n+1}/alpha_n) S_x P_n)
//! - [`verify`]: end-to-end cross-validation suites and finite
//!   non-existence witnesses

pub mod ddops;
pub mod error;
pub mod families;
pub mod functionals;
pub mod lattice;
pub mod poly;
pub mod recurrence;
pub mod report;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::Lattice;
pub use poly::Poly;
pub use scalar::Scalar;
