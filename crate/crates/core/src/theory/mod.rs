//! Closed-form evaluators.

pub mod cutoff;
pub mod density;
pub mod lower_order;
pub mod pair;
pub mod quadrature;
pub mod special;

pub use cutoff::{h_asymp, h_exact_so_even, small_value_prob, vanishing_count, VanishingCount, VanishingModel};
pub use density::{
    bin_average_density, density_range, finite_n_density, scaled_density_exact, scaled_density_expansion,
    scaled_density_limit,
};
pub use lower_order::{
    coefficient_assembly, n_eff, n_eff_generic, n_std, q_lower_order, CoefficientInputs, GenericScale,
    SymmetryCase,
};
pub use pair::{
    e_coefficients, l2_objective, montgomery_r2, n_eff_l2_closed_form, n_eff_l2_optimize, pair_corr_expansion,
    u_pair_corr, u_pair_corr_exact, PairCorrCoefficients,
};
pub use special::{barnes_g_half, digamma, ln_gamma, EULER_GAMMA, GLAISHER, STIELTJES_1};
