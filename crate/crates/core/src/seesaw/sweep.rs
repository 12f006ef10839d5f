use super::optimal_measurements_for_states;
use crate::error::{Error, Result};
use crate::exec::{stream_rng, Exec};
use crate::fidelity::{avg_fidelity_measurements, avg_fidelity_states, AlignOptions};
use crate::quantum::{random_pure_state, State};
use crate::scenario::{witness_value, Strategy, Witness};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub a2: f64,
    /// Unitary-restricted average fidelities.
    pub f_states: f64,
    pub f_meas: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub samples: usize,
    pub seed: u64,
    /// Alignment restarts per fidelity evaluation.
    pub restarts: usize,
    pub exec: Exec,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            samples: 2000,
            seed: 0,
            restarts: 8,
            exec: Exec::default(),
        }
    }
}

/// Random pure preparations, best-response measurements, then the witness value and both
/// fidelities to `ideal`. Sample k draws from RNG stream k; alignments use stream k of seed + 1.
pub fn region_sweep(w: &Witness, ideal: &Strategy, opts: &SweepOptions) -> Result<Vec<SweepPoint>> {
    if opts.samples < 1 {
        return Err(Error::Domain {
            name: "samples",
            value: 0.0,
        });
    }
    if ideal.nx() != w.nx() || ideal.ny() != w.ny() {
        return Err(Error::Shape(
            "ideal strategy does not fit the witness".into(),
        ));
    }
    let points = opts.exec.map(opts.samples, |k| {
        let mut rng = stream_rng(opts.seed, k as u64);
        let states: Vec<State> = (0..w.nx())
            .map(|_| random_pure_state(ideal.dim(), &mut rng))
            .collect();
        evaluate_point(
            w,
            ideal,
            states,
            opts.restarts,
            opts.seed.wrapping_add(1).wrapping_add(k as u64),
        )
    });
    points.into_iter().collect()
}

pub(crate) fn evaluate_point(
    w: &Witness,
    ideal: &Strategy,
    states: Vec<State>,
    restarts: usize,
    seed: u64,
) -> Result<SweepPoint> {
    let povms = optimal_measurements_for_states(w, &states)?;
    let s = Strategy::new(states, povms)?;
    let a2 = witness_value(w, &s)?;
    let align = AlignOptions {
        restarts,
        seed,
        exec: Exec::Sequential,
    };
    let f_states = avg_fidelity_states(s.states(), ideal.states(), &align)?.avg_fidelity;
    let f_meas =
        avg_fidelity_measurements(s.measurements(), ideal.measurements(), &align)?.avg_fidelity;
    Ok(SweepPoint {
        a2,
        f_states,
        f_meas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::{linear_lower_bound, Q2};

    #[test]
    fn ideal_point() {
        let ideal = Strategy::rac2_ideal();
        let p = evaluate_point(
            &Witness::rac(2).unwrap(),
            &ideal,
            ideal.states().to_vec(),
            4,
            0,
        )
        .unwrap();
        assert!((p.a2 - Q2).abs() < 1e-12);
        assert!((p.f_states - 1.0).abs() < 1e-12 && (p.f_meas - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_sweep_respects_lower_bound() {
        let opts = SweepOptions {
            samples: 50,
            seed: 1,
            ..Default::default()
        };
        let pts = region_sweep(&Witness::rac(2).unwrap(), &Strategy::rac2_ideal(), &opts).unwrap();
        assert_eq!(pts.len(), 50);
        for p in pts {
            assert!(p.f_states >= linear_lower_bound(p.a2) - 1e-7);
            assert!(p.f_meas >= linear_lower_bound(p.a2) - 1e-7);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let opts = SweepOptions {
            samples: 0,
            ..Default::default()
        };
        assert!(region_sweep(&Witness::rac(2).unwrap(), &Strategy::rac2_ideal(), &opts).is_err());
    }
}
