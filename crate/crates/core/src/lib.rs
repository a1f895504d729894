//! Numerics for Bernstein-type inequalities on rational functions with poles
//! outside the unit disc.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`rational`]: partial-fraction rational functions, Blaschke products,
//!   exact derivatives, Taylor coefficients and dilations;
//! * [`weights`]: radial weights `w(ρ)` on `(0, 1)` and their moments;
//! * [`quadrature`]: the uniform circle rule, Gauss–Legendre / Gauss–Jacobi
//!   radial rules and composite annulus integration;
//! * [`norms`]: Hardy and weighted Bergman norms by quadrature and by series;
//! * [`kernel`]: the kernel integrals `I(t, r)`, `φ_r(t)`, `ψ(r)` and the
//!   tail integrals used to compare Bergman norms of Cauchy-type kernels;
//! * [`bernstein`]: ratios `‖f′‖/‖f‖`, extremal lower bounds, exact `H²`
//!   operator norms on confluent model spaces, random probes and sweeps.
//!
//! IO, file formats and the command-line front end live in the `ratnorm`
//! companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bernstein;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod norms;
pub mod quadrature;
pub mod rational;
pub mod weights;

mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
