//! Robust self-testing: the linear fidelity bound, the operator inequalities behind it,
//! unitary-restricted average fidelities, and the parametric families probing tightness.

mod align;
mod curves;
mod inequality;
mod nelder_mead;

pub use align::{
    avg_fidelity_measurements, avg_fidelity_states, axis_angle_unitary, rotation_matrix,
    AlignOptions, FidelityReport, DEFAULT_RESTARTS,
};
pub use curves::{
    conjectured_curve_meas, conjectured_curve_states, evaluate_states_curve, meas_curve_strategy,
    states_curve_strategy, strategy_s2, strategy_s3, upper_conjecture,
};
pub use inequality::{
    meas_ineq_coeffs, meas_inequalities, prep_ineq_coeffs, prep_inequalities, sweep_inequalities,
    theta_grid, verify_operator_inequality, InequalityInstance, InequalityKind, OperatorIneqCoeffs,
    SweepRow, SweepSummary,
};
pub use nelder_mead::{Minimum, NelderMead};

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Q₂ = (1 + 1/√2)/2, the qubit optimum of the 2→1 RAC.
pub const Q2: f64 = 0.5 * (1.0 + FRAC_1_SQRT_2);
/// C₂ = 3/4, the one-bit classical optimum.
pub const C2: f64 = 0.75;
/// s = 4(1 + √2)
pub const S_OPT: f64 = 4.0 * (1.0 + SQRT_2);
/// min_θ t(θ) for preparations: (2 − √2)/4
pub const T_PREP_MIN: f64 = (2.0 - SQRT_2) / 4.0;
/// min_θ t(θ) for measurements: −3/(2√2)
pub const T_MEAS_MIN: f64 = -1.5 * FRAC_1_SQRT_2;

/// L(A₂) = (1 + √2) A₂ − 3/(2√2); bounds both the state and the measurement average fidelity.
pub fn linear_lower_bound(a2: f64) -> f64 {
    (1.0 + SQRT_2) * a2 - 1.5 * FRAC_1_SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_values() {
        assert!((linear_lower_bound(Q2) - 1.0).abs() < 1e-12);
        assert!((linear_lower_bound(0.75) - 0.75).abs() < 1e-12);
        assert!((linear_lower_bound(0.5) - 0.14645).abs() < 1e-5);
    }

    #[test]
    fn lower_bound_is_s_over_4_form() {
        for &a in &[0.6, 0.7, 0.8] {
            let via_t = S_OPT / 4.0 * (a - 0.5) + T_PREP_MIN;
            assert!((via_t - linear_lower_bound(a)).abs() < 1e-12);
        }
    }
}
