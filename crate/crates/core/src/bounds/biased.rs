use super::clamped_sqrt;
use crate::error::{Error, Result};
use crate::quantum::Observable;

/// Biased 2→1 RAC bound in observable form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasedBoundReport {
    /// 2Tr(M₀² + M₁²) − (Tr M₀)² − (Tr M₁)²
    pub beta: f64,
    /// 2Tr{M₀, M₁} − 2 Tr M₀ Tr M₁
    pub alpha: f64,
    pub bound: f64,
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain {
            name: "q",
            value: q,
        });
    }
    Ok(())
}

/// ½ + (1/8)[q √(β+α) + (1−q) √(β−α)].
pub fn biased_bound(q: f64, m0: &Observable, m1: &Observable) -> Result<BiasedBoundReport> {
    check_q(q)?;
    for m in [m0, m1] {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: m.dim(),
            });
        }
    }
    let (a, b) = (m0.op(), m1.op());
    let (ta, tb) = (a.trace(), b.trace());
    let beta = 2.0 * (a.square().trace() + b.square().trace()) - ta * ta - tb * tb;
    let alpha = 2.0 * a.anticommutator(b).trace() - 2.0 * ta * tb;
    let bound =
        0.5 + (q * clamped_sqrt(beta + alpha)? + (1.0 - q) * clamped_sqrt(beta - alpha)?) / 8.0;
    Ok(BiasedBoundReport { beta, alpha, bound })
}

/// Bloch overlap n₀·n₁ = (2q−1)/(1−2q+2q²) of the optimal observables.
pub fn biased_optimal_overlap(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((2.0 * q - 1.0) / (1.0 - 2.0 * q + 2.0 * q * q))
}

/// ½(1 + √(1−2q+2q²))
pub fn biased_max(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(0.5 * (1.0 + (1.0 - 2.0 * q + 2.0 * q * q).sqrt()))
}
