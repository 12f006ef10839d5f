//! JSON documents for operators: `{"dim": d, "re": [[..]], "im": [[..]]}` or, for qubits,
//! the Bloch shorthand `{"bloch": [x, y, z]}`.

use serde::{Deserialize, Serialize};

use super::{Observable, Povm, State};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorDoc {
    Matrix {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Bloch {
        bloch: [f64; 3],
    },
}

impl OperatorDoc {
    pub fn from_operator(op: &HermitianOperator) -> Self {
        let m = op.matrix();
        let d = m.dim();
        OperatorDoc::Matrix {
            dim: d,
            re: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    fn matrix(&self) -> Result<Option<HermitianOperator>> {
        match self {
            OperatorDoc::Matrix { dim, re, im } => {
                let m = ComplexMatrix::from_real_imag(re, im)?;
                if m.dim() != *dim {
                    return Err(Error::Parse(format!(
                        "declared dim {dim} but matrix is {}x{}",
                        m.dim(),
                        m.dim()
                    )));
                }
                Ok(Some(HermitianOperator::new(m)?))
            }
            OperatorDoc::Bloch { .. } => Ok(None),
        }
    }

    /// Bloch form means ρ = (1 + m·σ)/2.
    pub fn to_state(&self) -> Result<State> {
        match self {
            OperatorDoc::Bloch { bloch } => State::from_bloch(*bloch),
            _ => State::new(self.matrix()?.expect("matrix variant")),
        }
    }

    /// Bloch form means M = n·σ.
    pub fn to_observable(&self) -> Result<Observable> {
        match self {
            OperatorDoc::Bloch { bloch } => Observable::from_bloch(*bloch),
            _ => Observable::new(self.matrix()?.expect("matrix variant")),
        }
    }

    /// Raw operator; Bloch form means n·σ.
    pub fn to_operator(&self) -> Result<HermitianOperator> {
        match self {
            OperatorDoc::Bloch { bloch } => Ok(Observable::from_bloch(*bloch)?.op().clone()),
            _ => Ok(self.matrix()?.expect("matrix variant")),
        }
    }
}

/// A measurement given either by its effects or, for two outcomes, by its observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementDoc {
    Effects { effects: Vec<OperatorDoc> },
    Observable { observable: OperatorDoc },
}

impl MeasurementDoc {
    pub fn from_povm(p: &Povm) -> Self {
        MeasurementDoc::Effects {
            effects: p.effects().iter().map(OperatorDoc::from_operator).collect(),
        }
    }

    pub fn to_povm(&self) -> Result<Povm> {
        match self {
            MeasurementDoc::Effects { effects } => Povm::new(
                effects
                    .iter()
                    .map(|e| e.to_operator())
                    .collect::<Result<_>>()?,
            ),
            MeasurementDoc::Observable { observable } => {
                Ok(Povm::from_observable(&observable.to_observable()?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bloch_shorthand_parses() {
        let doc: OperatorDoc = serde_json::from_str(r#"{"bloch": [0, 0, 1]}"#).unwrap();
        let s = doc.to_state().unwrap();
        assert!((s.rho().matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_doc_round_trip() {
        let s = State::from_bloch([0.6, 0.0, 0.8]).unwrap();
        let doc = OperatorDoc::from_operator(s.rho());
        let text = serde_json::to_string(&doc).unwrap();
        let back: OperatorDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_state().unwrap(), s);
    }

    #[test]
    fn dim_mismatch_rejected() {
        let doc: OperatorDoc =
            serde_json::from_str(r#"{"dim": 3, "re": [[1,0],[0,0]], "im": [[0,0],[0,0]]}"#)
                .unwrap();
        assert!(doc.to_state().is_err());
    }

    #[test]
    fn observable_measurement_doc() {
        let doc: MeasurementDoc =
            serde_json::from_str(r#"{"observable": {"bloch": [1, 0, 0]}}"#).unwrap();
        let povm = doc.to_povm().unwrap();
        assert_eq!(povm.n_outcomes(), 2);
    }
}
