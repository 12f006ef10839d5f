use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{lambda_min, psd_check, sigma_x, sigma_z, HermitianOperator};
use crate::quantum::{check_theta, dephasing_channel, dephasing_coefficient, State};
use crate::scenario::rac2_ideal_states;

/// Eigenvalue offsets t_e (x ∈ {00, 11}, or y = 0) and t_o (x ∈ {01, 10}, or y = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorIneqCoeffs {
    pub theta: f64,
    pub s: f64,
    pub t_e: f64,
    pub t_o: f64,
    pub t: f64,
}

impl OperatorIneqCoeffs {
    fn new(theta: f64, s: f64, t_e: f64, t_o: f64) -> Self {
        Self {
            theta,
            s,
            t_e,
            t_o,
            t: 0.5 * (t_e + t_o),
        }
    }
}

/// Largest t_e, t_o for which the preparation inequalities hold at measurement angle θ.
pub fn prep_ineq_coeffs(theta: f64, s: f64) -> Result<OperatorIneqCoeffs> {
    let c = dephasing_coefficient(theta, s)?;
    let (sn, cs) = theta.sin_cos();
    let (t_e, t_o) = if theta <= FRAC_PI_4 {
        (
            (1.0 - s / 8.0 * cs).min(s / 8.0 * cs),
            ((4.0 + 4.0 * c - s * sn) / 8.0).min((4.0 - 4.0 * c + s * sn) / 8.0),
        )
    } else {
        (
            ((4.0 + 4.0 * c - s * cs) / 8.0).min((4.0 - 4.0 * c + s * cs) / 8.0),
            (1.0 - s / 8.0 * sn).min(s / 8.0 * sn),
        )
    };
    Ok(OperatorIneqCoeffs::new(theta, s, t_e, t_o))
}

/// Largest t_e, t_o for which the measurement inequalities hold at state angle θ.
pub fn meas_ineq_coeffs(theta: f64, s: f64) -> Result<OperatorIneqCoeffs> {
    let c = dephasing_coefficient(theta, s)?;
    let (sn, cs) = theta.sin_cos();
    let (t_e, t_o) = if theta <= FRAC_PI_4 {
        (
            ((8.0 - s - s * cs) / 8.0).min(s / 8.0 * (cs - 1.0)),
            ((4.0 * c - s * sn - s + 4.0) / 8.0).min((-4.0 * c + s * sn - s + 4.0) / 8.0),
        )
    } else {
        (
            ((4.0 * c - s * cs - s + 4.0) / 8.0).min((-4.0 * c + s * cs - s + 4.0) / 8.0),
            (s / 8.0 * (sn - 1.0)).min((8.0 - s - s * sn) / 8.0),
        )
    };
    Ok(OperatorIneqCoeffs::new(theta, s, t_e, t_o))
}

/// K − sW − t·1 ⪰ −tol
pub fn verify_operator_inequality(
    k: &HermitianOperator,
    w: &HermitianOperator,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<bool> {
    Ok(psd_check(&inequality_operator(k, w, s, t)?, tol))
}

fn inequality_operator(
    k: &HermitianOperator,
    w: &HermitianOperator,
    s: f64,
    t: f64,
) -> Result<HermitianOperator> {
    Ok(k.try_sub(&w.scale(s))?.shift(-t))
}

/// One instance K ⪰ sW + t·1 of the family at a given angle.
#[derive(Clone, Debug)]
pub struct InequalityInstance {
    pub label: &'static str,
    pub k: HermitianOperator,
    pub w: HermitianOperator,
    pub t: f64,
}

impl InequalityInstance {
    pub fn min_eigenvalue(&self, s: f64) -> Result<f64> {
        lambda_min(&inequality_operator(&self.k, &self.w, s, self.t)?)
    }
}

/// Preparation family at θ: K_x = Λ_θ†[ρ_x^ideal], W_x = (1/16) Σ_y (−1)^{x_y} M_y with
/// M_y = cos θ σ_x ± sin θ σ_z.
pub fn prep_inequalities(theta: f64, s: f64) -> Result<Vec<InequalityInstance>> {
    let coeffs = prep_ineq_coeffs(theta, s)?;
    let dual = dephasing_channel(theta, s)?.dual();
    let (sn, cs) = theta.sin_cos();
    let m0 = sigma_x().scale(cs).add(&sigma_z().scale(sn));
    let m1 = sigma_x().scale(cs).sub(&sigma_z().scale(sn));
    let labels = ["x=00", "x=01", "x=10", "x=11"];
    rac2_ideal_states()
        .iter()
        .enumerate()
        .map(|(x, m)| {
            let ideal = State::from_bloch(*m)?;
            let (s0, s1) = (sign(x >> 1), sign(x & 1));
            let w = m0.scale(s0).add(&m1.scale(s1)).scale(1.0 / 16.0);
            let t = if x == 0 || x == 3 {
                coeffs.t_e
            } else {
                coeffs.t_o
            };
            Ok(InequalityInstance {
                label: labels[x],
                k: dual.apply(ideal.rho())?,
                w,
                t,
            })
        })
        .collect()
}

/// Measurement family at θ: K_{yb} = Λ_θ†[P_{yb}] with P_{0b}, P_{1b} the σ_x, σ_z eigenprojectors,
/// Z_{yb} = (1/8) Σ_x ρ_x δ_{b,x_y} for the antipodal state pairs at angle θ.
pub fn meas_inequalities(theta: f64, s: f64) -> Result<Vec<InequalityInstance>> {
    let coeffs = meas_ineq_coeffs(theta, s)?;
    let dual = dephasing_channel(theta, s)?.dual();
    let (sn, cs) = theta.sin_cos();
    let blochs = [
        [cs, 0.0, sn],
        [cs, 0.0, -sn],
        [-cs, 0.0, sn],
        [-cs, 0.0, -sn],
    ];
    let states: Vec<State> = blochs
        .iter()
        .map(|m| State::from_bloch(*m))
        .collect::<Result<_>>()?;
    let axes = [sigma_x(), sigma_z()];
    let labels = ["y=0,b=0", "y=0,b=1", "y=1,b=0", "y=1,b=1"];
    let mut out = Vec::with_capacity(4);
    for y in 0..2 {
        for b in 0..2 {
            let ideal = axes[y].scale(sign(b)).shift(1.0).scale(0.5);
            let mut z = HermitianOperator::zeros(2);
            for (x, rho) in states.iter().enumerate() {
                let xy = if y == 0 { x >> 1 } else { x & 1 };
                if xy == b {
                    z = z.add(rho.rho());
                }
            }
            out.push(InequalityInstance {
                label: labels[2 * y + b],
                k: dual.apply(&ideal)?,
                w: z.scale(1.0 / 8.0),
                t: if y == 0 { coeffs.t_e } else { coeffs.t_o },
            });
        }
    }
    Ok(out)
}

fn sign(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequalityKind {
    Preparations,
    Measurements,
}

/// Per-angle outcome of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub coeffs: OperatorIneqCoeffs,
    /// Smallest eigenvalue of K − sW − t·1 over the four instances.
    pub min_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub min_residual: f64,
    pub min_t: f64,
    pub argmin_t: f64,
}

impl SweepSummary {
    pub fn passed(&self, tol: f64) -> bool {
        self.min_residual >= -tol
    }
}

/// θ_k = k (π/2)/(grid − 1) for k in 0..grid.
pub fn theta_grid(grid: usize) -> Result<Vec<f64>> {
    if grid < 2 {
        return Err(Error::Domain {
            name: "grid",
            value: grid as f64,
        });
    }
    let step = FRAC_PI_2 / (grid - 1) as f64;
    Ok((0..grid)
        .map(|k| {
            if k + 1 == grid {
                FRAC_PI_2
            } else {
                k as f64 * step
            }
        })
        .collect())
}

pub fn sweep_inequalities(
    kind: InequalityKind,
    s: f64,
    grid: usize,
    exec: Exec,
) -> Result<SweepSummary> {
    let thetas = theta_grid(grid)?;
    let rows: Vec<Result<SweepRow>> = exec.map(thetas.len(), |k| {
        let theta = thetas[k];
        check_theta(theta)?;
        let (coeffs, instances) = match kind {
            InequalityKind::Preparations => {
                (prep_ineq_coeffs(theta, s)?, prep_inequalities(theta, s)?)
            }
            InequalityKind::Measurements => {
                (meas_ineq_coeffs(theta, s)?, meas_inequalities(theta, s)?)
            }
        };
        let mut min_residual = f64::INFINITY;
        for inst in &instances {
            min_residual = min_residual.min(inst.min_eigenvalue(s)?);
        }
        Ok(SweepRow {
            theta,
            coeffs,
            min_residual,
        })
    });
    let rows: Vec<SweepRow> = rows.into_iter().collect::<Result<_>>()?;
    let min_residual = rows
        .iter()
        .map(|r| r.min_residual)
        .fold(f64::INFINITY, f64::min);
    let best = rows
        .iter()
        .min_by(|a, b| a.coeffs.t.total_cmp(&b.coeffs.t))
        .expect("non-empty grid");
    Ok(SweepSummary {
        min_t: best.coeffs.t,
        argmin_t: best.theta,
        min_residual,
        rows,
    })
}
