//! Numerical verification of weighted L² inequalities for square functions.
//!
//! The crate implements the dyadic square function and its Haar machinery,
//! dyadic A_p characteristics, three explicit Bellman functions together with
//! sampling certificates of their majorization and concavity properties, the
//! dyadic induction engine that turns those properties into weighted
//! inequalities, a Monte-Carlo check of the continuous-martingale analogue,
//! and quadrature versions of the Littlewood–Paley operators on the disc and
//! for the one-dimensional heat semigroup.

pub mod bellman;
pub mod certify;
pub mod dyadic;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod par;
pub mod report;
pub mod rng;
pub mod stats;
pub mod stochastic;
pub mod weights;

pub use error::{Error, Result};
