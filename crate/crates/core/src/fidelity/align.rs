use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::nelder_mead::NelderMead;
use crate::error::{Error, Result};
use crate::exec::{stream_rng, Exec};
use crate::linalg::{bloch_components, c, ComplexMatrix, HermitianOperator};
use crate::quantum::{Povm, State};

pub const DEFAULT_RESTARTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignOptions {
    pub restarts: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// Best unitary-restricted alignment found; a lower bound on the channel-optimal average fidelity.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub witness_value: Option<f64>,
    pub avg_fidelity: f64,
    pub aligning_unitary: ComplexMatrix,
}

impl FidelityReport {
    pub fn with_witness_value(mut self, value: f64) -> Self {
        self.witness_value = Some(value);
        self
    }
}

/// U = exp(−i |v|/2 v̂·σ), which rotates Bloch vectors by |v| about v̂.
pub fn axis_angle_unitary(v: [f64; 3]) -> ComplexMatrix {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle == 0.0 {
        return ComplexMatrix::identity(2);
    }
    let n = [v[0] / angle, v[1] / angle, v[2] / angle];
    let (sn, cs) = (angle / 2.0).sin_cos();
    // cos·1 − i sin (n_x σ_x + n_y σ_y + n_z σ_z)
    ComplexMatrix::from_row_major(vec![
        c(cs, -sn * n[2]),
        c(-sn * n[1], -sn * n[0]),
        c(sn * n[1], -sn * n[0]),
        c(cs, sn * n[2]),
    ])
    .expect("2x2")
}

/// Rodrigues rotation matrix for axis-angle vector v.
pub fn rotation_matrix(v: [f64; 3]) -> [[f64; 3]; 3] {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle == 0.0 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let n = [v[0] / angle, v[1] / angle, v[2] / angle];
    let (sn, cs) = angle.sin_cos();
    let k = 1.0 - cs;
    [
        [
            cs + n[0] * n[0] * k,
            n[0] * n[1] * k - n[2] * sn,
            n[0] * n[2] * k + n[1] * sn,
        ],
        [
            n[1] * n[0] * k + n[2] * sn,
            cs + n[1] * n[1] * k,
            n[1] * n[2] * k - n[0] * sn,
        ],
        [
            n[2] * n[0] * k - n[1] * sn,
            n[2] * n[1] * k + n[0] * sn,
            cs + n[2] * n[2] * k,
        ],
    ]
}

/// Mean of Tr(U A_i U† B_i) for qubit operators, as `constant + Σ_jk R_jk G_jk` in the rotation R of U.
/// With A = a·1 + b·σ and B = p·1 + n·σ, Tr(U A U† B) = 2(a p + n·R b).
struct PairObjective {
    constant: f64,
    g: [[f64; 3]; 3],
}

impl PairObjective {
    fn new(pairs: &[(&HermitianOperator, &HermitianOperator)]) -> Self {
        let w = 1.0 / pairs.len() as f64;
        let mut constant = 0.0;
        let mut g = [[0.0; 3]; 3];
        for (a, b) in pairs {
            let (ta, tb) = (a.trace() / 2.0, b.trace() / 2.0);
            let (va, vb) = (bloch_components(a), bloch_components(b));
            constant += 2.0 * w * ta * tb;
            for j in 0..3 {
                for k in 0..3 {
                    g[j][k] += 2.0 * w * vb[j] * va[k];
                }
            }
        }
        Self { constant, g }
    }

    fn value(&self, v: &[f64]) -> f64 {
        let r = rotation_matrix([v[0], v[1], v[2]]);
        let mut s = self.constant;
        for j in 0..3 {
            for k in 0..3 {
                s += r[j][k] * self.g[j][k];
            }
        }
        s
    }
}

fn random_start(rng: &mut impl Rng) -> [f64; 3] {
    let d: [f64; 3] = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt().max(1e-300);
    let radius = PI * rng.random::<f64>().cbrt();
    [
        d[0] / norm * radius,
        d[1] / norm * radius,
        d[2] / norm * radius,
    ]
}

fn align(
    pairs: &[(&HermitianOperator, &HermitianOperator)],
    opts: &AlignOptions,
) -> Result<ComplexMatrix> {
    if opts.restarts < 1 {
        return Err(Error::Domain {
            name: "restarts",
            value: 0.0,
        });
    }
    for (a, b) in pairs {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::UnsupportedDimension(a.dim().max(b.dim())));
        }
    }
    let objective = PairObjective::new(pairs);
    let nm = NelderMead::default();
    let runs = opts.exec.map(opts.restarts, |k| {
        let start = if k == 0 {
            [0.0; 3]
        } else {
            random_start(&mut stream_rng(opts.seed, k as u64))
        };
        nm.minimize(|v| -objective.value(v), &start)
    });
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, m)| m)
        .expect("at least one restart");
    Ok(axis_angle_unitary([best.x[0], best.x[1], best.x[2]]))
}

fn mean_overlap(pairs: &[(&HermitianOperator, &HermitianOperator)], u: &ComplexMatrix) -> f64 {
    pairs
        .iter()
        .map(|(a, b)| a.conjugate_by(u).trace_with(b))
        .sum::<f64>()
        / pairs.len() as f64
}

/// max_U (1/n) Σ_x Tr(U ρ_x U† ρ_x^ideal) over qubit unitaries.
pub fn avg_fidelity_states(
    states: &[State],
    ideal: &[State],
    opts: &AlignOptions,
) -> Result<FidelityReport> {
    if states.len() != ideal.len() || states.is_empty() {
        return Err(Error::Shape(format!(
            "{} states vs {} ideal states",
            states.len(),
            ideal.len()
        )));
    }
    for s in ideal {
        if !s.is_pure() {
            return Err(Error::Precondition("ideal states must be pure".into()));
        }
    }
    let pairs: Vec<_> = states
        .iter()
        .zip(ideal)
        .map(|(s, i)| (s.rho(), i.rho()))
        .collect();
    let u = align(&pairs, opts)?;
    let f = mean_overlap(&pairs, &u).clamp(0.0, 1.0);
    Ok(FidelityReport {
        witness_value: None,
        avg_fidelity: f,
        aligning_unitary: u,
    })
}

/// max_U (1/Σ_y n_b) Σ_{y,b} Tr(U M_y^b U† P_y^b) against ideal projective effects P_y^b.
pub fn avg_fidelity_measurements(
    povms: &[Povm],
    ideal: &[Povm],
    opts: &AlignOptions,
) -> Result<FidelityReport> {
    if povms.len() != ideal.len() || povms.is_empty() {
        return Err(Error::Shape(format!(
            "{} measurements vs {} ideal",
            povms.len(),
            ideal.len()
        )));
    }
    let mut pairs = Vec::new();
    for (p, q) in povms.iter().zip(ideal) {
        if p.n_outcomes() != q.n_outcomes() {
            return Err(Error::Shape("outcome counts differ".into()));
        }
        pairs.extend(p.effects().iter().zip(q.effects()));
    }
    let u = align(&pairs, opts)?;
    let f = mean_overlap(&pairs, &u).clamp(0.0, 1.0);
    Ok(FidelityReport {
        witness_value: None,
        avg_fidelity: f,
        aligning_unitary: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Strategy;

    #[test]
    fn unitary_matches_rotation() {
        let v = [0.3, -1.1, 0.7];
        let u = axis_angle_unitary(v);
        let r = rotation_matrix(v);
        let m = [0.2, 0.5, -0.4];
        let rotated = State::from_bloch(m).unwrap().rotated(&u).bloch().unwrap();
        for j in 0..3 {
            let expected: f64 = (0..3).map(|k| r[j][k] * m[k]).sum();
            assert!((rotated[j] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn ideal_vs_itself() {
        let s = Strategy::rac2_ideal();
        let r = avg_fidelity_states(s.states(), s.states(), &AlignOptions::default()).unwrap();
        assert!((r.avg_fidelity - 1.0).abs() < 1e-12);
        let r =
            avg_fidelity_measurements(s.measurements(), s.measurements(), &AlignOptions::default())
                .unwrap();
        assert!((r.avg_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_states_give_half() {
        let s = Strategy::rac2_ideal();
        let mixed = vec![State::maximally_mixed(2); 4];
        let r = avg_fidelity_states(&mixed, s.states(), &AlignOptions::default()).unwrap();
        assert!((r.avg_fidelity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn recovers_hidden_rotation() {
        let s = Strategy::rac2_ideal();
        let u = axis_angle_unitary([2.0, -0.4, 1.3]);
        let rotated: Vec<State> = s.states().iter().map(|x| x.rotated(&u)).collect();
        let r = avg_fidelity_states(
            &rotated,
            s.states(),
            &AlignOptions {
                restarts: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((r.avg_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_restarts_rejected() {
        let s = Strategy::rac2_ideal();
        let opts = AlignOptions {
            restarts: 0,
            ..Default::default()
        };
        assert!(avg_fidelity_states(s.states(), s.states(), &opts).is_err());
    }

    #[test]
    fn deterministic_across_exec_modes() {
        let s = Strategy::rac2_ideal();
        let states: Vec<State> = (0..4)
            .map(|k| crate::quantum::random_pure_state(2, &mut stream_rng(77, k)))
            .collect();
        let a = avg_fidelity_states(
            &states,
            s.states(),
            &AlignOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let b = avg_fidelity_states(
            &states,
            s.states(),
            &AlignOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
