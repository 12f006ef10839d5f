use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use super::align::{avg_fidelity_measurements, avg_fidelity_states, AlignOptions};
use super::{C2, Q2};
use crate::error::{Error, Result};
use crate::linalg::{c, sigma_x, HermitianOperator};
use crate::quantum::{Observable, Povm, State};
use crate::scenario::{witness_value, Strategy, Witness};

fn check_range(name: &'static str, v: f64, hi: f64) -> Result<()> {
    if !(0.0..=hi + 1e-15).contains(&v) {
        return Err(Error::Domain { name, value: v });
    }
    Ok(())
}

fn ket(a: f64, b: f64) -> Result<State> {
    State::pure(&[c(a, 0.0), c(b, 0.0)])
}

/// S₂: ρ_x = (1 + (−1)^{x₀x₁} σ_z)/2 with M₀ = M₁ = σ_z.
pub fn strategy_s2() -> Strategy {
    let z = [0.0, 0.0, 1.0];
    Strategy::from_bloch(&[z, z, z, [0.0, 0.0, -1.0]], &[z, z]).expect("static strategy")
}

/// S₃: M₀ = σ_z, M₁ = 1, with ρ₀₀ = ρ₀₁ = |0⟩⟨0| and ρ₁₀ = ρ₁₁ = |1⟩⟨1|.
pub fn strategy_s3() -> Strategy {
    meas_curve_strategy(0.0).expect("θ = 0 is in range")
}

/// Pure states |0⟩, cos θ|0⟩ ± sin θ|1⟩, |1⟩ with M_y = cos φ σ_z + (−1)^y sin φ σ_x, tan φ = sin 2θ.
pub fn states_curve_strategy(phi: f64) -> Result<Strategy> {
    check_range("phi", phi, FRAC_PI_4)?;
    let theta = 0.5 * phi.tan().min(1.0).asin();
    let (sn, cs) = theta.sin_cos();
    let states = vec![ket(1.0, 0.0)?, ket(cs, sn)?, ket(cs, -sn)?, ket(0.0, 1.0)?];
    let (sp, cp) = phi.sin_cos();
    let measurements = [[sp, 0.0, cp], [-sp, 0.0, cp]]
        .iter()
        .map(|n| Observable::from_bloch(*n).map(|o| Povm::from_observable(&o)))
        .collect::<Result<_>>()?;
    Strategy::new(states, measurements)
}

/// M₀ = σ_z, M₁ = η σ_x + (1−η)·1 with η = tan 2θ, and states cos θ|0⟩ ± sin θ|1⟩, cos θ|1⟩ ± sin θ|0⟩.
pub fn meas_curve_strategy(theta: f64) -> Result<Strategy> {
    check_range("theta", theta, FRAC_PI_8)?;
    let eta = (2.0 * theta).tan().min(1.0);
    let (sn, cs) = theta.sin_cos();
    let states = vec![ket(cs, sn)?, ket(cs, -sn)?, ket(sn, cs)?, ket(-sn, cs)?];
    let m0 = Observable::from_bloch([0.0, 0.0, 1.0])?;
    let m1 = Observable::new(
        sigma_x()
            .scale(eta)
            .add(&HermitianOperator::identity(2).scale(1.0 - eta)),
    )?;
    Strategy::new(
        states,
        vec![Povm::from_observable(&m0), Povm::from_observable(&m1)],
    )
}

/// Closed form along the states family: A₂ = ½ + ¼√(1 + tan²φ), F = ¼(3 + tan φ).
pub fn conjectured_curve_states(phi: f64) -> Result<(f64, f64)> {
    check_range("phi", phi, FRAC_PI_4)?;
    let t = phi.tan();
    Ok((0.5 + 0.25 * (1.0 + t * t).sqrt(), 0.25 * (3.0 + t)))
}

/// Direct evaluation of the states family: witness value and unitary-aligned state fidelity.
pub fn evaluate_states_curve(phi: f64, opts: &AlignOptions) -> Result<(f64, f64)> {
    let s = states_curve_strategy(phi)?;
    let ideal = Strategy::rac2_ideal();
    let a2 = witness_value(&Witness::rac(2)?, &s)?;
    let f = avg_fidelity_states(s.states(), ideal.states(), opts)?.avg_fidelity;
    Ok((a2, f))
}

/// Measurement family evaluated directly on the constructed strategy (witness value and
/// unitary-aligned measurement fidelity).
pub fn conjectured_curve_meas(theta: f64, opts: &AlignOptions) -> Result<(f64, f64)> {
    let s = meas_curve_strategy(theta)?;
    let ideal = Strategy::rac2_ideal();
    let a2 = witness_value(&Witness::rac(2)?, &s)?;
    let f = avg_fidelity_measurements(s.measurements(), ideal.measurements(), opts)?.avg_fidelity;
    Ok((a2, f))
}

/// Linear upper line through (3/4, Q₂) and (Q₂, 1); a reporting overlay only.
pub fn upper_conjecture(a2: f64) -> f64 {
    ((1.0 - Q2) * a2 + Q2 * Q2 - C2) / (Q2 - C2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::linear_lower_bound;

    #[test]
    fn states_curve_endpoints() {
        let (a, f) = conjectured_curve_states(FRAC_PI_4).unwrap();
        assert!((a - Q2).abs() < 1e-12 && (f - 1.0).abs() < 1e-12);
        assert_eq!(conjectured_curve_states(0.0).unwrap(), (0.75, 0.75));
        assert!(conjectured_curve_states(1.0).is_err());
    }

    #[test]
    fn states_curve_direct_matches_closed_form() {
        for k in 0..=8 {
            let phi = FRAC_PI_4 * k as f64 / 8.0;
            let (a, f) = evaluate_states_curve(phi, &AlignOptions::default()).unwrap();
            let (ea, ef) = conjectured_curve_states(phi).unwrap();
            assert!((a - ea).abs() < 1e-12, "phi {phi}: {a} vs {ea}");
            assert!((f - ef).abs() < 1e-9, "phi {phi}: {f} vs {ef}");
        }
    }

    #[test]
    fn meas_curve_endpoints() {
        let (a, f) = conjectured_curve_meas(FRAC_PI_8, &AlignOptions::default()).unwrap();
        assert!((a - Q2).abs() < 1e-12 && (f - 1.0).abs() < 1e-9);
        let (a, f) = conjectured_curve_meas(0.0, &AlignOptions::default()).unwrap();
        assert!((a - 0.75).abs() < 1e-12 && (f - 0.75).abs() < 1e-9);
    }

    #[test]
    fn special_strategies() {
        let w = Witness::rac(2).unwrap();
        let ideal = Strategy::rac2_ideal();
        let s2 = strategy_s2();
        assert!((witness_value(&w, &s2).unwrap() - 0.75).abs() < 1e-12);
        let f = avg_fidelity_states(s2.states(), ideal.states(), &AlignOptions::default()).unwrap();
        assert!((f.avg_fidelity - 0.75).abs() < 1e-9);
        let s3 = strategy_s3();
        assert!((witness_value(&w, &s3).unwrap() - 0.75).abs() < 1e-12);
        let f = avg_fidelity_measurements(
            s3.measurements(),
            ideal.measurements(),
            &AlignOptions::default(),
        )
        .unwrap();
        assert!((f.avg_fidelity - linear_lower_bound(0.75)).abs() < 1e-9);
    }

    #[test]
    fn upper_line_endpoints() {
        assert!((upper_conjecture(Q2) - 1.0).abs() < 1e-12);
        assert!((upper_conjecture(0.75) - Q2).abs() < 1e-12);
    }
}
