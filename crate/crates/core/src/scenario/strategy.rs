use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{MeasurementDoc, Observable, OperatorDoc, Povm, State};

/// Preparations and measurements sharing one Hilbert-space dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    dim: usize,
    states: Vec<State>,
    measurements: Vec<Povm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub dim: usize,
    pub states: Vec<OperatorDoc>,
    pub measurements: Vec<MeasurementDoc>,
}

impl Strategy {
    pub fn new(states: Vec<State>, measurements: Vec<Povm>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::Shape(
                "strategy needs at least one preparation".into(),
            ));
        };
        if measurements.is_empty() {
            return Err(Error::Shape(
                "strategy needs at least one measurement".into(),
            ));
        }
        let dim = first.dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
        }
        for m in &measurements {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            states,
            measurements,
        })
    }

    /// Qubit strategy from state Bloch vectors and binary-observable Bloch vectors.
    pub fn from_bloch(states: &[[f64; 3]], observables: &[[f64; 3]]) -> Result<Self> {
        let states = states
            .iter()
            .map(|m| State::from_bloch(*m))
            .collect::<Result<_>>()?;
        let measurements = observables
            .iter()
            .map(|n| Observable::from_bloch(*n).map(|o| Povm::from_observable(&o)))
            .collect::<Result<_>>()?;
        Self::new(states, measurements)
    }

    /// Optimal 2→1 RAC qubit strategy: ρ_x on ±x, ±z and M_y = (σ_x ± σ_z)/√2.
    pub fn rac2_ideal() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_bloch(&rac2_ideal_states(), &[[h, 0.0, h], [h, 0.0, -h]])
            .expect("static strategy")
    }

    /// Triangle states with the measurements that attain 5 on the three-input witness.
    pub fn example2_ideal() -> Self {
        let r = 3f64.sqrt() / 2.0;
        Self::from_bloch(&example2_ideal_states(), &[[0.5, 0.0, r], [r, 0.0, -0.5]])
            .expect("static strategy")
    }

    pub fn from_doc(doc: &StrategyDoc) -> Result<Self> {
        let states: Vec<State> = doc
            .states
            .iter()
            .map(OperatorDoc::to_state)
            .collect::<Result<_>>()?;
        let measurements: Vec<Povm> = doc
            .measurements
            .iter()
            .map(MeasurementDoc::to_povm)
            .collect::<Result<_>>()?;
        let s = Self::new(states, measurements)?;
        if s.dim != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                got: s.dim,
            });
        }
        Ok(s)
    }

    pub fn to_doc(&self) -> StrategyDoc {
        StrategyDoc {
            dim: self.dim,
            states: self
                .states
                .iter()
                .map(|s| OperatorDoc::from_operator(s.rho()))
                .collect(),
            measurements: self
                .measurements
                .iter()
                .map(MeasurementDoc::from_povm)
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StrategyDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn measurements(&self) -> &[Povm] {
        &self.measurements
    }

    pub fn nx(&self) -> usize {
        self.states.len()
    }

    pub fn ny(&self) -> usize {
        self.measurements.len()
    }

    /// Binary observables M_y = M_y⁰ − M_y¹ (two-outcome measurements only).
    pub fn observables(&self) -> Result<Vec<Observable>> {
        self.measurements.iter().map(Povm::observable).collect()
    }

    /// P(b|x,y) = Tr(ρ_x M_y^b)
    pub fn probability(&self, x: usize, y: usize, b: usize) -> Result<f64> {
        let state = self
            .states
            .get(x)
            .ok_or_else(|| Error::Index(format!("x = {x} out of range 0..{}", self.nx())))?;
        let povm = self
            .measurements
            .get(y)
            .ok_or_else(|| Error::Index(format!("y = {y} out of range 0..{}", self.ny())))?;
        let effect = povm.effects().get(b).ok_or_else(|| {
            Error::Index(format!("b = {b} out of range 0..{}", povm.n_outcomes()))
        })?;
        Ok(effect.trace_with(state.rho()))
    }
}

pub fn rac2_ideal_states() -> [[f64; 3]; 4] {
    [
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [-1.0, 0.0, 0.0],
    ]
}

pub fn example2_ideal_states() -> [[f64; 3]; 3] {
    let r = 3f64.sqrt() / 2.0;
    [[1.0, 0.0, 0.0], [-0.5, 0.0, r], [-0.5, 0.0, -r]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_rac_probability() {
        let s = Strategy::rac2_ideal();
        let p = s.probability(0, 0, 0).unwrap();
        assert!((p - (1.0 + FRAC_1_SQRT_2) / 2.0).abs() < 1e-12);
        let total: f64 = (0..2).map(|b| s.probability(3, 1, b).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn index_errors() {
        let s = Strategy::rac2_ideal();
        assert!(matches!(s.probability(4, 0, 0), Err(Error::Index(_))));
        assert!(matches!(s.probability(0, 2, 0), Err(Error::Index(_))));
        assert!(matches!(s.probability(0, 0, 2), Err(Error::Index(_))));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let q = State::maximally_mixed(2);
        let t = State::maximally_mixed(3);
        let m = Povm::from_observable(&Observable::from_bloch([0.0, 0.0, 1.0]).unwrap());
        assert!(Strategy::new(vec![q, t], vec![m]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = Strategy::example2_ideal();
        let text = serde_json::to_string(&s.to_doc()).unwrap();
        let back = Strategy::from_json(&text).unwrap();
        for x in 0..3 {
            for y in 0..2 {
                let a = s.probability(x, y, 0).unwrap();
                let b = back.probability(x, y, 0).unwrap();
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bloch_shorthand_strategy() {
        let text = r#"{"dim":2,
            "states":[{"bloch":[1,0,0]},{"bloch":[0,0,1]}],
            "measurements":[{"observable":{"bloch":[0,0,1]}}]}"#;
        let s = Strategy::from_json(text).unwrap();
        assert!((s.probability(1, 0, 0).unwrap() - 1.0).abs() < 1e-15);
    }
}
