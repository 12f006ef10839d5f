//! Alternating best-response (seesaw) optimisation of witness values, and random region sweeps.

mod response;
mod sweep;

pub use response::{optimal_measurements_for_states, optimal_states_for_measurements};
pub use sweep::{region_sweep, SweepOptions, SweepPoint};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{stream_rng, Exec};
use crate::linalg::HermitianOperator;
use crate::quantum::{random_projective_observable, random_unitary, Field, Povm};
use crate::scenario::{witness_value, Strategy, Witness};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once one full iteration improves the value by less than this.
    pub tol: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 500,
            tol: 1e-11,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub value: f64,
    pub strategy: Strategy,
    pub iterations: usize,
    pub converged: bool,
    /// Witness value after every half-step.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub best_value: f64,
    pub best_strategy: Strategy,
    /// Iterations used by the restart that produced the best value.
    pub iterations: usize,
    pub converged: bool,
    pub restart_values: Vec<f64>,
}

/// Haar-random projective starting measurements.
fn random_measurements(w: &Witness, d: usize, rng: &mut impl Rng) -> Vec<Povm> {
    (0..w.ny())
        .map(|_| {
            if w.nb() == 2 {
                Povm::from_observable(&random_projective_observable(d, rng))
            } else {
                let u = random_unitary(d, Field::Complex, rng);
                let basis: Vec<Vec<_>> = (0..d)
                    .map(|j| (0..d).map(|i| u[(i, j)]).collect())
                    .collect();
                let outcome: Vec<usize> = (0..d).map(|_| rng.random_range(0..w.nb())).collect();
                Povm::from_basis_assignment(&basis, &outcome, w.nb())
            }
        })
        .collect()
}

/// One restart from the given starting measurements.
pub fn seesaw_from(
    w: &Witness,
    start: Vec<Povm>,
    max_iters: usize,
    tol: f64,
) -> Result<RestartOutcome> {
    let mut measurements = start;
    let mut history = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    let mut strategy = None;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let states = optimal_states_for_measurements(w, &measurements)?;
        let s = Strategy::new(states, measurements)?;
        history.push(witness_value(w, &s)?);
        let improved = response::best_response_measurements(w, s.states(), Some(s.measurements()))?;
        let s = Strategy::new(s.states().to_vec(), improved)?;
        let value = witness_value(w, &s)?;
        history.push(value);
        measurements = s.measurements().to_vec();
        strategy = Some(s);
        if value - previous < tol {
            converged = true;
            break;
        }
        previous = value;
    }
    let strategy = strategy.ok_or(Error::Domain {
        name: "max_iters",
        value: 0.0,
    })?;
    let value = *history.last().expect("at least one iteration");
    Ok(RestartOutcome {
        value,
        strategy,
        iterations,
        converged,
        history,
    })
}

/// Best value over `restarts` independent seesaw runs in dimension d; restart k uses RNG stream k.
pub fn seesaw(w: &Witness, d: usize, opts: &SeesawOptions) -> Result<SeesawResult> {
    if d < 2 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
        });
    }
    if opts.restarts < 1 {
        return Err(Error::Domain {
            name: "restarts",
            value: 0.0,
        });
    }
    let runs: Vec<Result<RestartOutcome>> = opts.exec.map(opts.restarts, |k| {
        let mut rng = stream_rng(opts.seed, k as u64);
        seesaw_from(
            w,
            random_measurements(w, d, &mut rng),
            opts.max_iters,
            opts.tol,
        )
    });
    let runs: Vec<RestartOutcome> = runs.into_iter().collect::<Result<_>>()?;
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let best = runs
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    Ok(SeesawResult {
        best_value: best.value,
        best_strategy: best.strategy.clone(),
        iterations: best.iterations,
        converged: best.converged,
        restart_values,
    })
}

/// Bloch vectors of the binary observables of a qubit strategy.
pub fn observable_blochs(s: &Strategy) -> Result<Vec<[f64; 3]>> {
    s.observables()?.iter().map(|o| o.bloch()).collect()
}

pub(crate) fn is_identity_multiple(h: &HermitianOperator, tol: f64) -> bool {
    let d = h.dim();
    let mean = h.trace() / d as f64;
    h.matrix()
        .max_abs_diff(HermitianOperator::identity(d).scale(mean).matrix())
        <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{biased_max, qutrit_max, rac_n_quantum_bound};
    use crate::fidelity::Q2;

    fn opts(restarts: usize) -> SeesawOptions {
        SeesawOptions {
            restarts,
            seed: 7,
            ..Default::default()
        }
    }

    #[test]
    fn rac2_qubit() {
        let r = seesaw(&Witness::rac(2).unwrap(), 2, &opts(16)).unwrap();
        assert!((r.best_value - Q2).abs() < 1e-6);
    }

    #[test]
    fn rac3_qubit() {
        let r = seesaw(&Witness::rac(3).unwrap(), 2, &opts(32)).unwrap();
        assert!((r.best_value - rac_n_quantum_bound(3)).abs() < 1e-5);
    }

    #[test]
    fn rac2_qutrit() {
        let r = seesaw(&Witness::rac(2).unwrap(), 3, &opts(64)).unwrap();
        assert!(
            (r.best_value - qutrit_max()).abs() < 1e-4,
            "{}",
            r.best_value
        );
    }

    #[test]
    fn example2_qubit() {
        let r = seesaw(&Witness::example2(), 2, &opts(16)).unwrap();
        assert!((r.best_value - 5.0).abs() < 1e-6);
    }

    #[test]
    fn biased_grid_point() {
        let r = seesaw(&Witness::biased_rac(0.3).unwrap(), 2, &opts(16)).unwrap();
        assert!((r.best_value - biased_max(0.3).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn monotone_history() {
        let w = Witness::rac(3).unwrap();
        let mut rng = stream_rng(3, 0);
        let out = seesaw_from(&w, random_measurements(&w, 2, &mut rng), 500, 1e-11).unwrap();
        for pair in out.history.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
    }

    #[test]
    fn bad_arguments() {
        let w = Witness::rac(2).unwrap();
        assert!(seesaw(&w, 1, &opts(4)).is_err());
        assert!(seesaw(&w, 2, &opts(0)).is_err());
    }

    #[test]
    fn schedule_independent() {
        let w = Witness::rac(2).unwrap();
        let a = seesaw(
            &w,
            2,
            &SeesawOptions {
                exec: Exec::Sequential,
                ..opts(6)
            },
        )
        .unwrap();
        let b = seesaw(
            &w,
            2,
            &SeesawOptions {
                exec: Exec::Parallel,
                ..opts(6)
            },
        )
        .unwrap();
        assert_eq!(a.restart_values, b.restart_values);
    }
}
