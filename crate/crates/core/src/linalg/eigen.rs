use num_complex::Complex64;

use super::matrix::{c, ComplexMatrix, HermitianOperator, C64};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition with eigenvalues sorted in descending order.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

impl Eigen {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Σ λ_k v_k v_k†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj() * *lambda;
                }
            }
        }
        m
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// Closed form for 2×2, cyclic complex Jacobi rotations otherwise.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<Eigen> {
    match h.dim() {
        1 => Ok(Eigen {
            values: vec![h.matrix()[(0, 0)].re],
            vectors: vec![vec![c(1.0, 0.0)]],
        }),
        2 => Ok(eig_2x2(h.matrix())),
        _ => jacobi(h.matrix()),
    }
}

fn eig_2x2(m: &ComplexMatrix) -> Eigen {
    let a = m[(0, 0)].re;
    let b = m[(1, 1)].re;
    let off = m[(0, 1)];
    let mean = 0.5 * (a + b);
    let half_diff = 0.5 * (a - b);
    let radius = (half_diff * half_diff + off.norm_sqr()).sqrt();
    let (l0, l1) = (mean + radius, mean - radius);

    if off.norm() <= f64::EPSILON * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
        let e0 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e1 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        return if a >= b {
            Eigen {
                values: vec![a, b],
                vectors: vec![e0, e1],
            }
        } else {
            Eigen {
                values: vec![b, a],
                vectors: vec![e1, e0],
            }
        };
    }

    let vec_for = |lambda: f64| -> Vec<C64> {
        // (off, λ-a) and (λ-b, conj(off)) both solve (H-λ)v = 0; keep the better conditioned one.
        let u = [off, c(lambda - a, 0.0)];
        let w = [c(lambda - b, 0.0), off.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if nu >= nw {
            vec![u[0] / nu, u[1] / nu]
        } else {
            vec![w[0] / nw, w[1] / nw]
        }
    };
    Eigen {
        values: vec![l0, l1],
        vectors: vec![vec_for(l0), vec_for(l1)],
    }
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix) -> Result<Eigen> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::EigenNoConvergence {
            sweeps,
            residual: off_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // stable sort keeps the original index order among exact ties
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[(i, k)]).collect())
        .collect();
    Ok(Eigen { values, vectors })
}

/// One complex Jacobi rotation annihilating a[p][q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r; // e^{iφ}

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // G restricted to (p,q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = -phase.conj() * sn;
    let g_qq = phase.conj() * cs;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// λ₀ − λ₁ of a 2×2 Hermitian matrix from its trace invariants: √(2 Tr T² − (Tr T)²).
pub fn eigenvalue_gap_2x2(t: &HermitianOperator) -> Result<f64> {
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: t.dim(),
        });
    }
    let chi = t.trace();
    let zeta = t.trace_with(t);
    Ok((2.0 * zeta - chi * chi).max(0.0).sqrt())
}

pub fn lambda_max(h: &HermitianOperator) -> Result<f64> {
    Ok(eig_hermitian(h)?.max())
}

pub fn lambda_min(h: &HermitianOperator) -> Result<f64> {
    Ok(eig_hermitian(h)?.min())
}

/// True iff the smallest eigenvalue is ≥ −tol.
pub fn psd_check(h: &HermitianOperator, tol: f64) -> bool {
    match eig_hermitian(h) {
        Ok(e) => e.min() >= -tol,
        Err(_) => false,
    }
}
