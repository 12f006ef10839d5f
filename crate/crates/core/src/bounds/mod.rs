//! Analytic compatibility bounds on RAC-type witnesses for qubit and qutrit strategies.

mod biased;
mod nbit;
mod qutrit;

pub use biased::{biased_bound, biased_max, biased_optimal_overlap, BiasedBoundReport};
pub use nbit::{meas_compat_bound_n, prep_compat_bound_n, rac_n_quantum_bound};
pub use qutrit::{jordan_form, qutrit_bound, qutrit_max, JordanForm};

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{dot3, HermitianOperator};
use crate::quantum::{Observable, State};

pub(crate) const RADICAND_TOL: f64 = 1e-9;

/// √r for r ≥ 0; r ∈ [−1e−9, 0) is treated as round-off and clamped.
pub(crate) fn clamped_sqrt(r: f64) -> Result<f64> {
    if r >= 0.0 {
        Ok(r.sqrt())
    } else if r >= -RADICAND_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand(r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrepBoundReport {
    pub beta: f64,
    pub alpha: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasBoundReport {
    pub mu: f64,
    pub nu: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub bound: f64,
}

fn qubit_blochs(states: &[State], expected: usize) -> Result<Vec<[f64; 3]>> {
    if states.len() != expected {
        return Err(Error::Shape(format!(
            "expected {expected} states, got {}",
            states.len()
        )));
    }
    states.iter().map(State::bloch).collect()
}

/// Upper bound on A₂ given the four preparations ρ_{x₀x₁} (index 2x₀ + x₁).
pub fn prep_compat_bound_2(states: &[State]) -> Result<PrepBoundReport> {
    let m = qubit_blochs(states, 4)?;
    let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
    let sq: f64 = m.iter().map(|v| dot3(*v, *v)).sum();
    let beta = 0.5 * sq - dot3(m00, m11) - dot3(m01, m10);
    let d0 = [m00[0] - m11[0], m00[1] - m11[1], m00[2] - m11[2]];
    let d1 = [m01[0] - m10[0], m01[1] - m10[1], m01[2] - m10[2]];
    let alpha = dot3(d0, d1);
    let bound = 0.5 + (clamped_sqrt(beta + alpha)? + clamped_sqrt(beta - alpha)?) / (8.0 * SQRT_2);
    Ok(PrepBoundReport { beta, alpha, bound })
}

/// Upper bound on A₂ given the two binary qubit observables.
pub fn meas_compat_bound_2(m0: &Observable, m1: &Observable) -> Result<MeasBoundReport> {
    for m in [m0, m1] {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: m.dim(),
            });
        }
    }
    let (a, b) = (m0.op(), m1.op());
    let mu = a.square().trace() + b.square().trace();
    let nu = a.anticommutator(b).trace();
    let eta_plus = a.trace() + b.trace();
    let eta_minus = a.trace() - b.trace();
    let bound = 0.5
        + (clamped_sqrt(2.0 * mu + 2.0 * nu - eta_plus * eta_plus)?
            + clamped_sqrt(2.0 * mu - 2.0 * nu - eta_minus * eta_minus)?)
            / 16.0;
    Ok(MeasBoundReport {
        mu,
        nu,
        eta_plus,
        eta_minus,
        bound,
    })
}

/// ½ + (1/16) Σ_{x₀x₁} λ_max[(−1)^{x₀} M₀ + (−1)^{x₁} M₁]: the exact optimum over states
/// for fixed binary observables, valid in any dimension.
pub fn rac2_value_for_observables(m0: &HermitianOperator, m1: &HermitianOperator) -> Result<f64> {
    let mut total = 0.0;
    for (s0, s1) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let op = m0.scale(s0).try_add(&m1.scale(s1))?;
        total += crate::linalg::lambda_max(&op)?;
    }
    Ok(0.5 + total / 16.0)
}
