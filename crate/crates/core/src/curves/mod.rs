//! Algebraic identities for the quotient curves: rationality of the lower
//! level curve, the plane model at level 2, and its genus.

pub mod plane;
pub mod poly;
pub mod rational;

pub use plane::{verify_plane_model, PlaneModelReport, RandomizedCheck};
pub use poly::{MultivariatePolynomial, RationalFunction};
pub use rational::{verify_rationality, RationalityReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Genus `(ℓ² − ℓ)/2` of the plane model.
pub fn genus_plane_model(ell: u64) -> u64 {
    (ell * ell - ell) / 2
}

/// Outcome of a negative control: the identity must fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Control {
    pub name: &'static str,
    pub holds: bool,
}
