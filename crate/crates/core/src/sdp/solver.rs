//! Infeasible-start primal-dual interior-point method (HKM direction, Mehrotra
//! predictor-corrector) for block-diagonal linear matrix inequalities.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

type Blocks = Vec<DMatrix<f64>>;

/// minimise c·y + c₀ subject to F₀ + Σ_i y_i F_i ⪰ 0, with every F block-diagonal and real
/// symmetric. Linear inequalities are 1×1 blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub offset: Blocks,
    pub basis: Vec<Blocks>,
    pub objective: Vec<f64>,
    pub objective_offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative duality gap ⟨X, Z⟩ / (1 + |p| + |d|).
    pub gap_tol: f64,
    /// Relative primal and dual residual norms.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Phase-I margin below which the constraints count as infeasible.
    pub infeasibility_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-7,
            residual_tol: 1e-8,
            max_iters: 200,
            infeasibility_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution {
    /// c·y + c₀ at the returned y.
    pub value: f64,
    pub y: Vec<f64>,
    /// Objective bound from the dual certificate; `value` is within `gap` of the optimum.
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// [[A, −B], [B, A]] for H = A + iB; PSD exactly when H is.
pub fn real_embedding(h: &ComplexMatrix) -> DMatrix<f64> {
    let n = h.dim();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

impl SdpProblem {
    pub fn new(offset: Blocks, basis: Vec<Blocks>, objective: Vec<f64>) -> Result<Self> {
        if basis.len() != objective.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: objective.len(),
            });
        }
        for (k, b) in offset.iter().enumerate() {
            if !b.is_square() || (b - b.transpose()).amax() > 1e-9 * (1.0 + b.amax()) {
                return Err(Error::Shape(format!("offset block {k} is not symmetric")));
            }
        }
        for f in &basis {
            if f.len() != offset.len() {
                return Err(Error::Shape(
                    "basis element has the wrong number of blocks".into(),
                ));
            }
            for (a, b) in f.iter().zip(&offset) {
                if a.shape() != b.shape() || (a - a.transpose()).amax() > 1e-9 * (1.0 + a.amax()) {
                    return Err(Error::Shape(
                        "basis block is not symmetric or has the wrong size".into(),
                    ));
                }
            }
        }
        Ok(Self {
            offset,
            basis,
            objective,
            objective_offset: 0.0,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.basis.len()
    }

    /// Adds g·y ≥ h as a 1×1 block.
    pub fn add_linear_inequality(&mut self, g: &[f64], h: f64) -> Result<()> {
        if g.len() != self.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: g.len(),
            });
        }
        self.offset.push(DMatrix::from_element(1, 1, -h));
        for (f, gi) in self.basis.iter_mut().zip(g) {
            f.push(DMatrix::from_element(1, 1, *gi));
        }
        Ok(())
    }

    pub fn constraint_at(&self, y: &[f64]) -> Blocks {
        let mut f = self.offset.clone();
        for (yi, fi) in y.iter().zip(&self.basis) {
            for (a, b) in f.iter_mut().zip(fi) {
                *a += b * *yi;
            }
        }
        f
    }

    /// Smallest eigenvalue of F(y) over all blocks.
    pub fn min_eigenvalue_at(&self, y: &[f64]) -> f64 {
        self.constraint_at(y)
            .into_iter()
            .map(|b| SymmetricEigen::new(b).eigenvalues.min())
            .fold(f64::INFINITY, f64::min)
    }

    /// max s s.t. F(y) ⪰ s·1 and s ≤ 1, as a problem in (y, s).
    fn phase_one(&self) -> Self {
        let mut basis: Vec<Blocks> = self
            .basis
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.push(DMatrix::zeros(1, 1));
                f
            })
            .collect();
        let mut s_dir: Blocks = self
            .offset
            .iter()
            .map(|b| -DMatrix::identity(b.nrows(), b.ncols()))
            .collect();
        s_dir.push(DMatrix::from_element(1, 1, -1.0));
        basis.push(s_dir);
        let mut offset = self.offset.clone();
        offset.push(DMatrix::from_element(1, 1, 1.0));
        let mut objective = vec![0.0; self.n_vars()];
        objective.push(-1.0);
        Self {
            offset,
            basis,
            objective,
            objective_offset: 0.0,
        }
    }
}

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn norm(a: &Blocks) -> f64 {
    inner(a, a).sqrt()
}

fn axpy(acc: &mut Blocks, s: f64, x: &Blocks) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b * s;
    }
}

fn sym(a: &mut Blocks) {
    for b in a.iter_mut() {
        let t = b.transpose();
        *b += t;
        *b *= 0.5;
    }
}

fn triple(x: &Blocks, m: &Blocks, zinv: &Blocks) -> Blocks {
    x.iter()
        .zip(m)
        .zip(zinv)
        .map(|((x, m), z)| x * m * z)
        .collect()
}

/// Largest α with X + α·ΔX ⪰ 0 (infinite if ΔX never leaves the cone).
fn max_step(x: &Blocks, dx: &Blocks) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let l = Cholesky::new(xb.clone())?.unpack();
        let t = l.solve_lower_triangular(db)?;
        let mut w = l.solve_lower_triangular(&t.transpose())?;
        let wt = w.transpose();
        w += wt;
        w *= 0.5;
        let lmin = SymmetricEigen::new(w).eigenvalues.min();
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Some(alpha)
}

enum Outcome {
    Converged(SdpSolution),
    /// Iteration cap, numerical breakdown, or a diverging primal iterate.
    Failed(String),
}

/// Dual form: max bᵀy s.t. C − Σ y_i A_i = Z ⪰ 0 with C = F₀, A_i = −F_i, b = −c.
fn interior_point(p: &SdpProblem, opts: &SolverOptions) -> Outcome {
    let m = p.n_vars();
    let c_mat = &p.offset;
    let a: Vec<Blocks> = p
        .basis
        .iter()
        .map(|f| f.iter().map(|b| -b).collect())
        .collect();
    let b = DVector::from_iterator(m, p.objective.iter().map(|c| -c));
    let n_total: usize = c_mat.iter().map(|b| b.nrows()).sum();
    let norm_c = norm(c_mat);
    let norm_b = b.norm();

    let mut x: Blocks = Vec::new();
    let mut z: Blocks = Vec::new();
    for (k, ck) in c_mat.iter().enumerate() {
        let nk = ck.nrows() as f64;
        let mut xi: f64 = 10f64.max(nk.sqrt());
        let mut eta: f64 = 10f64.max(nk.sqrt()).max(ck.norm());
        for (ai, bi) in a.iter().zip(b.iter()) {
            let an = ai[k].norm();
            xi = xi.max(nk * (1.0 + bi.abs()) / (1.0 + an));
            eta = eta.max(an);
        }
        x.push(DMatrix::identity(ck.nrows(), ck.nrows()) * xi);
        z.push(DMatrix::identity(ck.nrows(), ck.nrows()) * eta);
    }
    let mut y = DVector::<f64>::zeros(m);
    let a_of = |xm: &Blocks| DVector::from_iterator(m, a.iter().map(|ai| inner(ai, xm)));
    let at_of = |v: &DVector<f64>| {
        let mut out: Blocks = c_mat
            .iter()
            .map(|b| DMatrix::zeros(b.nrows(), b.ncols()))
            .collect();
        for (ai, vi) in a.iter().zip(v.iter()) {
            axpy(&mut out, *vi, ai);
        }
        out
    };

    for it in 0..opts.max_iters {
        let zinv: Option<Blocks> = z
            .iter()
            .map(|zb| Cholesky::new(zb.clone()).map(|c| c.inverse()))
            .collect();
        let Some(zinv) = zinv else {
            return Outcome::Failed("dual iterate left the cone".into());
        };
        let ax = a_of(&x);
        let rp = &b - &ax;
        let mut rd = c_mat.clone();
        axpy(&mut rd, -1.0, &z);
        axpy(&mut rd, -1.0, &at_of(&y));
        let pobj = inner(c_mat, &x);
        let dobj = b.dot(&y);
        let xz = inner(&x, &z);
        let mu = xz / n_total as f64;
        let rel_gap = xz / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = norm(&rd) / (1.0 + norm_c);
        if rel_gap < opts.gap_tol && pinf < opts.residual_tol && dinf < opts.residual_tol {
            let value = -dobj + p.objective_offset;
            return Outcome::Converged(SdpSolution {
                value,
                y: y.iter().copied().collect(),
                dual_value: -pobj + p.objective_offset,
                gap: (pobj - dobj).abs().max(xz),
                iterations: it,
            });
        }
        // a diverging primal iterate with ⟨C, X⟩ → −∞ signals an empty feasible set
        if pobj < 0.0 && -pobj > 1e8 * (1.0 + ax.norm()) {
            return Outcome::Failed("primal iterate diverges".into());
        }

        // Schur complement M_ij = Tr(A_i X A_j Z⁻¹)
        let g: Vec<Blocks> = a.iter().map(|aj| triple(&x, aj, &zinv)).collect();
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = 0.5 * (inner(&a[i], &g[j]) + inner(&a[j], &g[i]));
                schur[(i, j)] = v;
                schur[(j, i)] = v;
            }
        }
        let chol = Cholesky::new(schur.clone()).or_else(|| {
            let eps = 1e-12 * schur.diagonal().amax().max(1e-300);
            Cholesky::new(schur + DMatrix::identity(m, m) * eps)
        });
        let Some(chol) = chol else {
            return Outcome::Failed("Schur complement is singular".into());
        };

        let x_rd_zinv = a_of(&triple(&x, &rd, &zinv));
        let a_zinv = a_of(&zinv);
        let direction = |sigma_mu: f64, corr: Option<&Blocks>| {
            let mut rhs = &b - &a_zinv * sigma_mu + &x_rd_zinv;
            if let Some(cm) = corr {
                rhs += a_of(cm);
            }
            let dy = chol.solve(&rhs);
            let mut dz = rd.clone();
            axpy(&mut dz, -1.0, &at_of(&dy));
            let mut dx: Blocks = zinv.iter().map(|zi| zi * sigma_mu).collect();
            axpy(&mut dx, -1.0, &x);
            axpy(&mut dx, -1.0, &triple(&x, &dz, &zinv));
            if let Some(cm) = corr {
                axpy(&mut dx, -1.0, cm);
            }
            sym(&mut dx);
            (dx, dy, dz)
        };

        let (dxa, _, dza) = direction(0.0, None);
        let (Some(ap), Some(ad)) = (max_step(&x, &dxa), max_step(&z, &dza)) else {
            return Outcome::Failed("Cholesky failure in step length".into());
        };
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut xa = x.clone();
        axpy(&mut xa, ap, &dxa);
        let mut za = z.clone();
        axpy(&mut za, ad, &dza);
        let mu_aff = inner(&xa, &za) / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr = triple(&dxa, &dza, &zinv);
        let (dx, dy, dz) = direction(sigma * mu, Some(&corr));
        let (Some(sp), Some(sd)) = (max_step(&x, &dx), max_step(&z, &dz)) else {
            return Outcome::Failed("Cholesky failure in step length".into());
        };
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let (sp, sd) = ((gamma * sp).min(1.0), (gamma * sd).min(1.0));
        axpy(&mut x, sp, &dx);
        axpy(&mut z, sd, &dz);
        y += dy * sd;
    }
    Outcome::Failed(format!(
        "no convergence within {} iterations",
        opts.max_iters
    ))
}

/// Solves the problem; an empty feasible set is reported as [`Error::Infeasible`], decided by a
/// phase-I problem whenever the main iteration fails.
pub fn sdp_solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    if p.n_vars() == 0 {
        let lmin = p.min_eigenvalue_at(&[]);
        if lmin < -opts.infeasibility_tol {
            return Err(Error::Infeasible);
        }
        let v = p.objective_offset;
        return Ok(SdpSolution {
            value: v,
            y: vec![],
            dual_value: v,
            gap: 0.0,
            iterations: 0,
        });
    }
    match interior_point(p, opts) {
        Outcome::Converged(s) => Ok(s),
        Outcome::Failed(reason) => match interior_point(&p.phase_one(), opts) {
            Outcome::Converged(s) if -s.value < -opts.infeasibility_tol => Err(Error::Infeasible),
            _ => Err(Error::NoConvergence(reason)),
        },
    }
}

/// λ_max(H) as min t s.t. t·1 − H ⪰ 0, through the real embedding.
pub fn lambda_max_sdp(h: &ComplexMatrix, opts: &SolverOptions) -> Result<f64> {
    let e = real_embedding(h);
    let n = e.nrows();
    let p = SdpProblem::new(vec![-e], vec![vec![DMatrix::identity(n, n)]], vec![1.0])?;
    Ok(sdp_solve(&p, opts)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream_rng;
    use crate::linalg::{eig_hermitian, HermitianOperator};
    use crate::quantum::{random_unitary, Field};

    #[test]
    fn embedding_preserves_spectrum() {
        let mut rng = stream_rng(4, 0);
        let u = random_unitary(3, Field::Complex, &mut rng);
        let h = HermitianOperator::diag(&[1.0, -0.5, 0.25]).conjugate_by(&u);
        let e = SymmetricEigen::new(real_embedding(h.matrix())).eigenvalues;
        let mut v: Vec<f64> = e.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        let want = [-0.5, -0.5, 0.25, 0.25, 1.0, 1.0];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_max_oracle() {
        for seed in 0..5 {
            let mut rng = stream_rng(seed, 1);
            let u = random_unitary(4, Field::Complex, &mut rng);
            let h = HermitianOperator::diag(&[0.3, -1.2, 2.5, 0.1]).conjugate_by(&u);
            let want = eig_hermitian(&h).unwrap().max();
            let got = lambda_max_sdp(h.matrix(), &SolverOptions::default()).unwrap();
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn linear_program() {
        // min −y₁ − y₂ s.t. y₁ ≥ 0, y₂ ≥ 0, 1 − y₁ − 2y₂ ≥ 0, 1 − 2y₁ − y₂ ≥ 0 → −2/3
        let mut p = SdpProblem::new(vec![], vec![vec![], vec![]], vec![-1.0, -1.0]).unwrap();
        p.add_linear_inequality(&[1.0, 0.0], 0.0).unwrap();
        p.add_linear_inequality(&[0.0, 1.0], 0.0).unwrap();
        p.add_linear_inequality(&[-1.0, -2.0], -1.0).unwrap();
        p.add_linear_inequality(&[-2.0, -1.0], -1.0).unwrap();
        let s = sdp_solve(&p, &SolverOptions::default()).unwrap();
        assert!((s.value + 2.0 / 3.0).abs() < 1e-6, "{}", s.value);
    }

    #[test]
    fn infeasible_constraints() {
        // y ≥ 1 and y ≤ 0
        let mut p = SdpProblem::new(vec![], vec![vec![]], vec![1.0]).unwrap();
        p.add_linear_inequality(&[1.0], 1.0).unwrap();
        p.add_linear_inequality(&[-1.0], 0.0).unwrap();
        assert!(matches!(
            sdp_solve(&p, &SolverOptions::default()),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn two_by_two_psd() {
        // min y s.t. [[1, y], [y, 1]] ⪰ 0 → −1
        let f0 = DMatrix::identity(2, 2);
        let f1 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let p = SdpProblem::new(vec![f0], vec![vec![f1]], vec![1.0]).unwrap();
        let s = sdp_solve(&p, &SolverOptions::default()).unwrap();
        assert!((s.value + 1.0).abs() < 1e-6);
        assert!(p.min_eigenvalue_at(&s.y) > -1e-6);
    }

    #[test]
    fn rejects_asymmetric_blocks() {
        let f0 = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(SdpProblem::new(vec![f0], vec![], vec![]).is_err());
    }
}
