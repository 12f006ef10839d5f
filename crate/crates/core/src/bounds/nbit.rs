use std::f64::consts::SQRT_2;

use super::clamped_sqrt;
use crate::error::{Error, Result};
use crate::quantum::{Observable, State};
use crate::scenario::{rac_bit, MAX_RAC_BITS};

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_RAC_BITS).contains(&n) {
        return Err(Error::Domain {
            name: "N",
            value: n as f64,
        });
    }
    Ok(())
}

/// ½(1 + 1/√N)
pub fn rac_n_quantum_bound(n: usize) -> f64 {
    0.5 * (1.0 + 1.0 / (n as f64).sqrt())
}

/// Preparation bound for the N→1 RAC:
/// ½ + 1/(N 2^N) Σ_y √(½ [Σ_x Tr ρ_x² + Σ_{k<l} (−1)^{k_y+l_y} Tr{ρ_k, ρ_l}]).
///
/// The bracket is Tr V_y² with V_y = Σ_x (−1)^{x_y} ρ_x; the ½ makes N = 2 coincide with
/// [`super::prep_compat_bound_2`].
pub fn prep_compat_bound_n(states: &[State], n: usize) -> Result<f64> {
    check_n(n)?;
    let nx = 1usize << n;
    if states.len() != nx {
        return Err(Error::Shape(format!(
            "N = {n} needs {nx} states, got {}",
            states.len()
        )));
    }
    for s in states {
        if s.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: s.dim(),
            });
        }
    }
    let purity: f64 = states.iter().map(State::purity).sum();
    let mut anti = vec![0.0; nx * nx];
    for k in 0..nx {
        for l in k + 1..nx {
            anti[k * nx + l] = 2.0 * states[k].rho().trace_with(states[l].rho());
        }
    }
    let mut total = 0.0;
    for y in 0..n {
        let mut r = purity;
        for k in 0..nx {
            for l in k + 1..nx {
                let sign = if rac_bit(k, y, n) == rac_bit(l, y, n) {
                    1.0
                } else {
                    -1.0
                };
                r += sign * anti[k * nx + l];
            }
        }
        total += clamped_sqrt(0.5 * r)?;
    }
    Ok(0.5 + total / (n as f64 * nx as f64))
}

/// Measurement bound for the N→1 RAC:
/// ½ + √2/(N 2^{N+1}) Σ_z √(Σ_y Tr M_y² + Σ_{k<l} (−1)^{z_k+z_l} Tr{M_k, M_l}),
/// z over N-bit strings with last bit 0 (x and its complement share a term).
///
/// Trace terms of the observables are dropped, so for N = 2 this matches
/// [`super::meas_compat_bound_2`] only on traceless observables and is looser otherwise.
pub fn meas_compat_bound_n(observables: &[Observable]) -> Result<f64> {
    let n = observables.len();
    check_n(n)?;
    for m in observables {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: m.dim(),
            });
        }
    }
    let sq: f64 = observables.iter().map(|m| m.op().square().trace()).sum();
    let mut anti = vec![0.0; n * n];
    for k in 0..n {
        for l in k + 1..n {
            anti[k * n + l] = observables[k]
                .op()
                .anticommutator(observables[l].op())
                .trace();
        }
    }
    let mut total = 0.0;
    for half in 0..(1usize << (n - 1)) {
        let z = half << 1;
        let mut r = sq;
        for k in 0..n {
            for l in k + 1..n {
                let sign = if rac_bit(z, k, n) == rac_bit(z, l, n) {
                    1.0
                } else {
                    -1.0
                };
                r += sign * anti[k * n + l];
            }
        }
        total += clamped_sqrt(r)?;
    }
    Ok(0.5 + SQRT_2 * total / (n as f64 * (1usize << (n + 1)) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{meas_compat_bound_2, prep_compat_bound_2};
    use crate::scenario::rac2_ideal_states;

    fn obs(n: [f64; 3]) -> Observable {
        Observable::from_bloch(n).unwrap()
    }

    #[test]
    fn n2_consistency_with_dedicated_bounds() {
        let states: Vec<State> = rac2_ideal_states()
            .iter()
            .map(|m| State::from_bloch(*m).unwrap())
            .collect();
        let a = prep_compat_bound_n(&states, 2).unwrap();
        let b = prep_compat_bound_2(&states).unwrap().bound;
        assert!((a - b).abs() < 1e-12);
        assert!((a - rac_n_quantum_bound(2)).abs() < 1e-12);

        let pair = [obs([1.0, 0.0, 0.0]), obs([0.0, 0.0, 1.0])];
        let a = meas_compat_bound_n(&pair).unwrap();
        let b = meas_compat_bound_2(&pair[0], &pair[1]).unwrap().bound;
        assert!((a - b).abs() < 1e-12);

        let same = [obs([0.0, 0.0, 1.0]), obs([0.0, 0.0, 1.0])];
        assert!((meas_compat_bound_n(&same).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn three_paulis() {
        let p = [
            obs([1.0, 0.0, 0.0]),
            obs([0.0, 1.0, 0.0]),
            obs([0.0, 0.0, 1.0]),
        ];
        let v = meas_compat_bound_n(&p).unwrap();
        assert!((v - rac_n_quantum_bound(3)).abs() < 1e-12);
    }

    #[test]
    fn cube_states() {
        let r = 1.0 / 3f64.sqrt();
        // x = (x₀ x₁ x₂) ↦ Bloch ((−1)^{x₀}, (−1)^{x₁}, (−1)^{x₂})/√3
        let states: Vec<State> = (0..8)
            .map(|x| {
                let sgn = |y| if rac_bit(x, y, 3) == 0 { r } else { -r };
                State::from_bloch([sgn(0), sgn(1), sgn(2)]).unwrap()
            })
            .collect();
        let v = prep_compat_bound_n(&states, 3).unwrap();
        assert!((v - rac_n_quantum_bound(3)).abs() < 1e-12);
    }

    #[test]
    fn classical_encodings_stay_below_c2() {
        // pure states on ±z: deterministic one-bit encodings of the two input bits
        for e in 0..16usize {
            let states: Vec<State> = (0..4)
                .map(|x| {
                    State::from_bloch([0.0, 0.0, if (e >> x) & 1 == 0 { 1.0 } else { -1.0 }])
                        .unwrap()
                })
                .collect();
            assert!(prep_compat_bound_n(&states, 2).unwrap() <= 0.75 + 1e-12);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(prep_compat_bound_n(&vec![State::maximally_mixed(2); 4], 3).is_err());
        assert!(meas_compat_bound_n(&[obs([1.0, 0.0, 0.0])]).is_err());
    }
}
