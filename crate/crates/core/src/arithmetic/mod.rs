//! Fundamental discriminants, twist families, root numbers and truncated
//! Euler products.

pub mod euler;
pub mod family;
pub mod kronecker;
pub mod sieve;

pub use euler::{
    a_f_alpha_derivative, a_f_local, a_tilde_local, lambda_power_from, lambda_power_satake, satake,
    truncated_a_f, truncated_a_tilde, EulerProduct, NewformLocalData, Shifts,
};
pub use family::{
    cardinality_estimate, enumerate_family, family_log_scale, level_character, oscillatory_family_sum,
    oscillatory_sum_over, psi_d_minus_m, self_cm_nebentypus, sum_log_family, sum_log_over, twisted_root_number,
    FamilySpec, FamilySum,
};
pub use kronecker::{is_fundamental_discriminant, is_squarefree, kronecker, reciprocity_sign};
pub use sieve::{is_prime, primes_up_to};

use crate::error::Result;
use crate::theory::PairCorrCoefficients;

/// `(e₁, e₂, e₃)` from the raw fields of `pc`.
pub fn e_coefficients_from_inputs(pc: &PairCorrCoefficients) -> Result<(f64, f64, f64)> {
    pc.recompute()
}
