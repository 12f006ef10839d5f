use crate::error::{Error, Result};
use crate::linalg::{c, eig_hermitian, HermitianOperator};
use crate::quantum::Observable;

const JORDAN_TOL: f64 = 1e-8;

/// Two projective qutrit observables in Jordan normal form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JordanForm {
    /// Three 1×1 blocks: the observables commute.
    Commuting,
    /// One 2×2 block (cos α σ_x ± sin α σ_z) plus a 1×1 block carrying the eigenvalues r, s.
    Block { alpha: f64, r: i8, s: i8 },
}

/// ½ + (1/16)(2 + 4|sin α| + 2|cos α|) if r = s, else ½ + (1/16)(2 + 2|sin α| + 4|cos α|).
/// Only the relation r = s matters, not the signs themselves.
pub fn qutrit_bound(alpha: f64, r: i8, s: i8) -> f64 {
    let (sa, ca) = (alpha.sin().abs(), alpha.cos().abs());
    let sum = if r == s {
        2.0 + 4.0 * sa + 2.0 * ca
    } else {
        2.0 + 2.0 * sa + 4.0 * ca
    };
    0.5 + sum / 16.0
}

/// (5 + √5)/8
pub fn qutrit_max() -> f64 {
    (5.0 + 5f64.sqrt()) / 8.0
}

/// Extracts (α, r, s) from two projective qutrit observables. The 1×1 block is the kernel of
/// i[M₀, M₁]; α ∈ [0, π/2] comes from Tr(M₀M₁) on the 2×2 block, which fixes |sin α| and
/// |cos α| (all the bound depends on).
pub fn jordan_form(m0: &Observable, m1: &Observable) -> Result<JordanForm> {
    for m in [m0, m1] {
        if m.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: m.dim(),
            });
        }
        if !m.is_projective(JORDAN_TOL) {
            return Err(Error::InvalidObservable(
                "Jordan form needs projective observables".into(),
            ));
        }
    }
    let (a, b) = (m0.op().matrix(), m1.op().matrix());
    let comm = &(a * b) - &(b * a);
    if comm.max_abs() < JORDAN_TOL {
        return Ok(JordanForm::Commuting);
    }
    let h = HermitianOperator::symmetrized(comm.scale_c(c(0.0, 1.0)));
    let e = eig_hermitian(&h)?;
    let k = (0..3)
        .min_by(|&i, &j| e.values[i].abs().total_cmp(&e.values[j].abs()))
        .expect("three eigenvalues");
    let v = &e.vectors[k];
    let sign = |m: &Observable| -> Result<i8> {
        let x = m.op().expectation(v);
        if (x.abs() - 1.0).abs() > 1e-6 {
            return Err(Error::Precondition(format!(
                "1x1 Jordan block is not an eigenvector (expectation {x})"
            )));
        }
        Ok(if x > 0.0 { 1 } else { -1 })
    };
    let (r, s) = (sign(m0)?, sign(m1)?);
    let block_overlap = a.trace_product(b).re - f64::from(r * s);
    let cos2 = (block_overlap / 2.0).clamp(-1.0, 1.0);
    Ok(JordanForm::Block {
        alpha: cos2.acos() / 2.0,
        r,
        s,
    })
}
