//! Coadjoint orbits of U(n), their contactifications, and contact dynamics on
//! odd spheres.
//!
//! * [`lie`]: Hermitian and anti-Hermitian matrices, pairings, brackets, actions.
//! * [`orbit`]: isotropy algebras, the Kirillov-Kostant-Souriau form, reduction checks.
//! * [`integrality`]: exact rational spectra, the generator hbar, dimension bookkeeping.
//! * [`contact`]: the contact sphere, its Reeb field and the Hopf fibration.
//! * [`dynamics`]: Hamiltonian flow on S^2 and its Euler-Lagrange lift to S^3.
//! * [`verify`]: seeded invariant suites.

// `!(x <= tol)` is used so that NaN fails tolerance checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contact;
pub mod dynamics;
pub mod error;
pub mod integrality;
pub mod lie;
pub mod orbit;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
