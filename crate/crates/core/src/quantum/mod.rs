//! States, observables, POVMs, channels and random sampling of quantum objects.

mod channel;
mod doc;
mod random;

pub(crate) use channel::check_theta;
pub use channel::{dephasing_channel, dephasing_coefficient, Channel, Direction};
pub use doc::{MeasurementDoc, OperatorDoc};
pub use random::{
    random_observable_with_rank, random_projective_observable, random_pure_state,
    random_pure_vector, random_unitary, Field,
};

use crate::error::{Error, Result};
use crate::linalg::{
    bloch_components, bloch_operator, eig_hermitian, norm3, ComplexMatrix, HermitianOperator, C64,
};

const STATE_TOL: f64 = 1e-10;
const PURITY_TOL: f64 = 1e-9;
const SPECTRUM_TOL: f64 = 1e-9;

/// Density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    rho: HermitianOperator,
}

impl State {
    pub fn new(rho: HermitianOperator) -> Result<Self> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = eig_hermitian(&rho)?.min();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { rho })
    }

    /// |ψ><ψ| for a (not necessarily normalised) non-zero vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self {
            rho: HermitianOperator::projector(&v),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            rho: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// ρ = (1 + m·σ)/2
    pub fn from_bloch(m: [f64; 3]) -> Result<Self> {
        let n = norm3(m);
        if n > 1.0 + 1e-12 {
            return Err(Error::InvalidBloch(n));
        }
        Ok(Self {
            rho: bloch_operator(m).shift(1.0).scale(0.5),
        })
    }

    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.dim(),
            });
        }
        let b = bloch_components(&self.rho);
        Ok([2.0 * b[0], 2.0 * b[1], 2.0 * b[2]])
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &HermitianOperator {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        self.rho.trace_with(&self.rho)
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    /// U ρ U†
    pub fn rotated(&self, u: &ComplexMatrix) -> Self {
        Self {
            rho: self.rho.conjugate_by(u),
        }
    }

    /// Convex mixture p·self + (1−p)·other.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        let rho = self.rho.scale(p).try_add(&other.rho.scale(1.0 - p))?;
        Ok(Self { rho })
    }
}

/// Tr(σ ρ_ideal) for a pure reference state.
pub fn fidelity_to_pure(ideal: &State, sigma: &State) -> Result<f64> {
    if !ideal.is_pure() {
        return Err(Error::Precondition(format!(
            "reference state has purity {} < 1",
            ideal.purity()
        )));
    }
    if ideal.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: ideal.dim(),
            got: sigma.dim(),
        });
    }
    Ok(ideal.rho().trace_with(sigma.rho()).clamp(0.0, 1.0))
}

/// Binary observable M = M⁰ − M¹ with spectrum in [−1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    op: HermitianOperator,
}

impl Observable {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let e = eig_hermitian(&op)?;
        if e.max() > 1.0 + SPECTRUM_TOL || e.min() < -1.0 - SPECTRUM_TOL {
            return Err(Error::InvalidObservable(format!(
                "spectrum [{}, {}] outside [-1, 1]",
                e.min(),
                e.max()
            )));
        }
        Ok(Self { op })
    }

    /// n·σ with |n| ≤ 1.
    pub fn from_bloch(n: [f64; 3]) -> Result<Self> {
        let len = norm3(n);
        if len > 1.0 + 1e-12 {
            return Err(Error::InvalidObservable(format!(
                "Bloch vector norm {len} > 1"
            )));
        }
        Ok(Self {
            op: bloch_operator(n),
        })
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.dim(),
            });
        }
        Ok(bloch_components(&self.op))
    }

    pub fn is_projective(&self, tol: f64) -> bool {
        self.op
            .square()
            .matrix()
            .max_abs_diff(HermitianOperator::identity(self.dim()).matrix())
            <= tol
    }
}

/// Measurement: positive effects summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return Err(Error::InvalidPovm("no effects".into()));
        };
        let d = first.dim();
        let mut total = HermitianOperator::zeros(d);
        for (b, e) in effects.iter().enumerate() {
            if e.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: e.dim(),
                });
            }
            let min = eig_hermitian(e)?.min();
            if min < -STATE_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {b} has negative eigenvalue {min:.3e}"
                )));
            }
            total = total.add(e);
        }
        let defect = total
            .matrix()
            .max_abs_diff(HermitianOperator::identity(d).matrix());
        if defect > STATE_TOL {
            return Err(Error::InvalidPovm(format!(
                "effects sum to identity only within {defect:.3e}"
            )));
        }
        Ok(Self { effects })
    }

    /// Effects (1 ± M)/2.
    pub fn from_observable(m: &Observable) -> Self {
        let d = m.dim();
        let id = HermitianOperator::identity(d);
        Self {
            effects: vec![id.add(m.op()).scale(0.5), id.sub(m.op()).scale(0.5)],
        }
    }

    /// Projective measurement from an orthonormal basis and an outcome label per basis vector.
    pub fn from_basis_assignment(basis: &[Vec<C64>], outcome: &[usize], n_outcomes: usize) -> Self {
        let d = basis.len();
        let mut effects = vec![HermitianOperator::zeros(d); n_outcomes];
        for (v, &b) in basis.iter().zip(outcome) {
            effects[b] = effects[b].add(&HermitianOperator::projector(v));
        }
        Self { effects }
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn n_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Tr(ρ M^b) for each outcome.
    pub fn probabilities(&self, state: &State) -> Vec<f64> {
        self.effects
            .iter()
            .map(|e| e.trace_with(state.rho()))
            .collect()
    }

    /// M⁰ − M¹ for a two-outcome measurement.
    pub fn observable(&self) -> Result<Observable> {
        if self.effects.len() != 2 {
            return Err(Error::Shape(format!(
                "observable needs 2 outcomes, POVM has {}",
                self.effects.len()
            )));
        }
        Ok(Observable {
            op: self.effects[0].sub(&self.effects[1]),
        })
    }

    pub fn rotated(&self, u: &ComplexMatrix) -> Self {
        Self {
            effects: self.effects.iter().map(|e| e.conjugate_by(u)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, sigma_x, sigma_z};

    #[test]
    fn bloch_examples() {
        let mixed = State::from_bloch([0.0; 3]).unwrap();
        assert_eq!(mixed, State::maximally_mixed(2));
        let plus_x = State::from_bloch([1.0, 0.0, 0.0]).unwrap();
        let expected = sigma_x().shift(1.0).scale(0.5);
        assert!(plus_x.rho().matrix().max_abs_diff(expected.matrix()) < 1e-15);
        let minus_z = State::from_bloch([0.0, 0.0, -1.0]).unwrap();
        let expected = sigma_z().scale(-1.0).shift(1.0).scale(0.5);
        assert!(minus_z.rho().matrix().max_abs_diff(expected.matrix()) < 1e-15);
        assert!(matches!(
            State::from_bloch([1.0, 1.0, 0.0]),
            Err(Error::InvalidBloch(_))
        ));
    }

    #[test]
    fn fidelity_examples() {
        let ideal = State::from_bloch([1.0, 0.0, 0.0]).unwrap();
        let orth = State::from_bloch([-1.0, 0.0, 0.0]).unwrap();
        assert!((fidelity_to_pure(&ideal, &ideal).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity_to_pure(&ideal, &orth).unwrap().abs() < 1e-15);
        let mixed = State::maximally_mixed(2);
        assert!((fidelity_to_pure(&ideal, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            fidelity_to_pure(&mixed, &ideal),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn state_validation() {
        let bad = HermitianOperator::diag(&[1.2, -0.2]);
        assert!(State::new(bad).is_err());
        let bad_trace = HermitianOperator::diag(&[0.5, 0.4]);
        assert!(State::new(bad_trace).is_err());
        let psi = State::pure(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(psi.is_pure());
        let b = psi.bloch().unwrap();
        assert!((b[1] + 1.0).abs() < 1e-15 || (b[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn observable_and_povm() {
        assert!(Observable::new(sigma_z().scale(1.5)).is_err());
        let m = Observable::new(sigma_x()).unwrap();
        let povm = Povm::from_observable(&m);
        assert!(Povm::new(povm.effects().to_vec()).is_ok());
        let back = povm.observable().unwrap();
        assert!(back.op().matrix().max_abs_diff(m.op().matrix()) < 1e-15);
        assert!(Povm::new(vec![HermitianOperator::identity(2).scale(0.4)]).is_err());
        let p = povm.probabilities(&State::maximally_mixed(2));
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }
}
