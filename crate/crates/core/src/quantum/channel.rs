use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::linalg::{sigma_x, sigma_z, ComplexMatrix, HermitianOperator};

const TP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// ρ ↦ Σ K ρ K†
    Schrodinger,
    /// A ↦ Σ K† A K
    Heisenberg,
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    direction: Direction,
}

impl Channel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidChannel("no Kraus operators".into()));
        };
        let d = first.dim();
        let mut sum = ComplexMatrix::zeros(d);
        for k in &kraus {
            if k.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: k.dim(),
                });
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if defect > TP_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            kraus,
            direction: Direction::Schrodinger,
        })
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
            direction: Direction::Schrodinger,
        }
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Same Kraus set acting in the opposite picture.
    pub fn dual(&self) -> Self {
        Self {
            kraus: self.kraus.clone(),
            direction: match self.direction {
                Direction::Schrodinger => Direction::Heisenberg,
                Direction::Heisenberg => Direction::Schrodinger,
            },
        }
    }

    pub fn apply(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(a.dim());
        for k in &self.kraus {
            let term = match self.direction {
                Direction::Schrodinger => &(k * a.matrix()) * &k.adjoint(),
                Direction::Heisenberg => &(&k.adjoint() * a.matrix()) * k,
            };
            out = &out + &term;
        }
        Ok(HermitianOperator::symmetrized(out))
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        let id = HermitianOperator::identity(self.dim());
        match self.apply(&id) {
            Ok(img) => img.matrix().max_abs_diff(id.matrix()) <= tol,
            Err(_) => false,
        }
    }
}

/// Dephasing strength c(θ) = min{1, (s/4) sin θ} on [0, π/4] and min{1, (s/4) cos θ} on (π/4, π/2].
pub fn dephasing_coefficient(theta: f64, s: f64) -> Result<f64> {
    check_theta(theta)?;
    if s <= 0.0 || !s.is_finite() {
        return Err(Error::Domain {
            name: "s",
            value: s,
        });
    }
    let trig = if theta <= FRAC_PI_4 {
        theta.sin()
    } else {
        theta.cos()
    };
    Ok((s / 4.0 * trig).min(1.0))
}

/// Λ_θ(ρ) = (1+c)/2 ρ + (1−c)/2 ΓρΓ with Γ = σ_x on [0, π/4] and σ_z above.
pub fn dephasing_channel(theta: f64, s: f64) -> Result<Channel> {
    let c = dephasing_coefficient(theta, s)?;
    let gamma = if theta <= FRAC_PI_4 {
        sigma_x()
    } else {
        sigma_z()
    };
    let kraus = vec![
        ComplexMatrix::identity(2).scale(((1.0 + c) / 2.0).sqrt()),
        gamma.matrix().scale(((1.0 - c) / 2.0).sqrt()),
    ];
    Channel::new(kraus)
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&theta) {
        return Err(Error::Domain {
            name: "theta",
            value: theta,
        });
    }
    Ok(())
}
