//! Exact masses of supersingular elliptic curves and their quaternionic
//! counterparts.
//!
//! The same number `(p − 1)/24` is reached three ways:
//!
//! * geometrically, by summing `1/#Aut(E)` over supersingular j-invariants
//!   found as roots of the Hasse polynomial ([`supersingular`]);
//! * arithmetically, by summing `1/#Γ_c` over right ideal classes of a
//!   maximal order in the definite quaternion algebra ramified at `p`
//!   ([`quaternion`]);
//! * analytically, from special values of the Riemann zeta function
//!   ([`formulas`]).
//!
//! All arithmetic is exact. Batch work goes through [`par`], which uses rayon
//! when the `parallel` feature is enabled.

// Index loops read most clearly in the fixed-size matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod exact;
pub mod finitefield;
pub mod formulas;
pub mod newton;
pub mod par;
pub mod primes;
pub mod quaternion;
pub mod supersingular;
pub mod verify;

pub use exact::Rational;
pub use par::Execution;
