//! Finite-field validators for the census, coverage and invariant-ring computations.

pub mod avoidant;
pub mod classify;
pub mod commutant;
pub mod eval;
pub mod jacobian;
pub mod matrix;

use crate::error::{AtlasError, Result};
use crate::finite_group::{twisted_orbits, FiniteGroup};

/// Largest group handled by the brute-force twisted orbit count.
pub const MAX_BRUTEFORCE_ORDER: usize = 10_000;

/// Number of orbits of `a -> g a phi(g)^-1`, by direct enumeration.
pub fn twisted_orbits_bruteforce(group: &FiniteGroup, phi: &[usize]) -> Result<usize> {
    if group.order() > MAX_BRUTEFORCE_ORDER {
        return Err(AtlasError::BudgetExceeded {
            required: group.order() as u128,
            budget: MAX_BRUTEFORCE_ORDER as u128,
        });
    }
    if !group.is_automorphism(phi) {
        return Err(AtlasError::NotAnAutomorphism);
    }
    Ok(twisted_orbits(group, phi).len())
}

pub use avoidant::{avoidant_check, AvoidanceReport};
pub use classify::{classify_twist, Detector, TwistClassification};
pub use commutant::{centralizer, solve_commutant, DEFAULT_ORACLE_BUDGET};
pub use eval::{eval_identity_trials, EvalReport};
pub use jacobian::{jacobian_probe, JacobianReport};
pub use matrix::{Mat, MatrixGroup};
