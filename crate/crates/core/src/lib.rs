//! Exact algebra for roundings: maps that send every line through the
//! origin to a circle.
//!
//! The crate is `no_std` (it needs `alloc`). All symbolic work is carried
//! out over arbitrary-precision rationals; floating point only appears in
//! the numerical circle-fitting oracle ([`circles::fit`]) and in
//! [`spheres::QuadSphereMap::evaluate_factored`].
//!
//! Module map:
//!
//! * [`polycore`]: rationals, sparse multivariate polynomials, quadratic
//!   forms and their inertia, polynomial maps of degree at most two.
//! * [`jets`]: 2-jet validation, the canonical fractional quadratic
//!   representative, degeneracy, projection factoring and equivalence.
//! * [`circles`]: exact line-to-circle rank test plus a float oracle.
//! * [`spheres`]: lifting a nondegenerate jet to a quadratic map between
//!   unit spheres.
//! * [`cliff`]: Clifford generators, Hurwitz-Radon and Yiu functions,
//!   normed pairings and Hopf maps.
//! * [`samples`]: named jet families and a randomized generator of valid
//!   jets.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circles;
pub mod cliff;
mod error;
pub mod jets;
pub mod polycore;
pub mod samples;
pub mod spheres;

pub use error::{Error, Result};
pub use polycore::{
    form::{QuadForm, Signature},
    poly::{Monomial, Poly},
    polymap::{inner_poly, rank_linear, PolyMap},
    Rational,
};
