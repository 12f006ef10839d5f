use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

use super::moments::{hermitian_to_vec, moment_matrix, vec_to_hermitian, Realization};
use super::solver::{real_embedding, sdp_solve, SdpProblem, SolverOptions};
use super::span::{AffineSpan, SpanOptions};
use super::words::{HierarchySpec, Letter, Word};
use crate::error::{Error, Result};
use crate::exec::stream_rng;
use crate::linalg::{
    c, dot3, eig_hermitian, norm3, sigma_x, ComplexMatrix, HermitianOperator, C64,
};
use crate::quantum::{Field, State};
use crate::scenario::{Strategy, Witness};

/// Swap gate S = UVU on system ⊗ ancilla built from two ±1 observables, with
/// U = 1⊗|0⟩⟨0| + B₁⊗|1⟩⟨1| and V = ½(1+B₀)⊗1 + ½(1−B₀)⊗σ_x.
/// It is the two-qubit swap when B₀ = σ_z and B₁ = σ_x.
pub fn swap_operator(b0: &HermitianOperator, b1: &HermitianOperator) -> Result<ComplexMatrix> {
    let d = b0.dim();
    if b1.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: b1.dim(),
        });
    }
    let id = ComplexMatrix::identity(d);
    let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
    let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
    let u = &id.kron(&p0) + &b1.matrix().kron(&p1);
    let plus = (&id + b0.matrix()).scale(0.5);
    let minus = (&id - b0.matrix()).scale(0.5);
    let v = &plus.kron(&ComplexMatrix::identity(2)) + &minus.kron(sigma_x().matrix());
    Ok(&(&u * &v) * &u)
}

/// Word form of T_ik = s_{k0}† s_{i0}, where S = ½ Σ_ij s_ij ⊗ |i⟩⟨j|.
pub fn swap_t_words(i: usize, k: usize) -> Vec<(f64, Word)> {
    use Letter::Obs;
    let (b0, b1) = (Obs(0), Obs(1));
    match (i, k) {
        (0, 0) => vec![(2.0, vec![]), (2.0, vec![b0])],
        (1, 1) => vec![(2.0, vec![]), (-2.0, vec![b0])],
        (0, 1) => vec![
            (1.0, vec![b1]),
            (1.0, vec![b1, b0]),
            (-1.0, vec![b0, b1]),
            (-1.0, vec![b0, b1, b0]),
        ],
        (1, 0) => vec![
            (1.0, vec![b1]),
            (-1.0, vec![b1, b0]),
            (1.0, vec![b0, b1]),
            (-1.0, vec![b0, b1, b0]),
        ],
        _ => Vec::new(),
    }
}

/// The four T_ik as operators for given B₀, B₁.
pub fn swap_t_operators(b0: &HermitianOperator, b1: &HermitianOperator) -> [[ComplexMatrix; 2]; 2] {
    let d = b0.dim();
    let eval = |terms: Vec<(f64, Word)>| {
        let mut acc = ComplexMatrix::zeros(d);
        for (coef, w) in terms {
            let mut m = ComplexMatrix::identity(d);
            for l in w {
                let o = if l == Letter::Obs(0) { b0 } else { b1 };
                m = &m * o.matrix();
            }
            acc = &acc + &m.scale(coef);
        }
        acc
    };
    [
        [eval(swap_t_words(0, 0)), eval(swap_t_words(0, 1))],
        [eval(swap_t_words(1, 0)), eval(swap_t_words(1, 1))],
    ]
}

/// Ideal Bloch vectors rotated so that the ideal B₀ becomes σ_z and B₁ becomes σ_x.
pub fn swap_frame_states(ideal: &Strategy) -> Result<Vec<[f64; 3]>> {
    if ideal.dim() != 2 || ideal.ny() < 2 {
        return Err(Error::Precondition(
            "swap frame needs a qubit strategy with two measurements".into(),
        ));
    }
    let obs = ideal.observables()?;
    let n0 = obs[0].bloch()?;
    let n1 = obs[1].bloch()?;
    if (norm3(n0) - 1.0).abs() > 1e-9 || (norm3(n1) - 1.0).abs() > 1e-9 || dot3(n0, n1).abs() > 1e-9
    {
        return Err(Error::Precondition(
            "ideal observables must be anticommuting and rank one".into(),
        ));
    }
    let n2 = [
        n0[1] * n1[2] - n0[2] * n1[1],
        n0[2] * n1[0] - n0[0] * n1[2],
        n0[0] * n1[1] - n0[1] * n1[0],
    ];
    ideal
        .states()
        .iter()
        .map(|s| {
            let m = s.bloch()?;
            Ok([dot3(m, n1), dot3(m, n2), dot3(m, n0)])
        })
        .collect()
}

/// Re Σ coeff · χ_ab.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional {
    pub terms: Vec<(usize, usize, C64)>,
}

impl LinearFunctional {
    pub fn eval(&self, chi: &ComplexMatrix) -> f64 {
        self.terms
            .iter()
            .map(|(a, b, k)| (k * chi[(*a, *b)]).re)
            .sum()
    }

    fn add(
        &mut self,
        spec: &HierarchySpec,
        idx: &HashMap<Word, (usize, usize)>,
        k: C64,
        w: &[Letter],
    ) -> Result<()> {
        let (a, b) = spec.locate(idx, w)?;
        self.terms.push((a, b, k));
        Ok(())
    }
}

/// Average swap fidelity (1/4nₓ) Σ_x Σ_ik ⟨k|σ_x|i⟩ Tr(T_ik ρ_x) to the ideal Bloch vectors.
pub fn swap_fidelity_functional(
    spec: &HierarchySpec,
    ideal: &[[f64; 3]],
) -> Result<LinearFunctional> {
    if ideal.len() != spec.nx {
        return Err(Error::Shape(format!(
            "{} ideal states for {} preparations",
            ideal.len(),
            spec.nx
        )));
    }
    let idx = spec.monomial_index();
    let mut f = LinearFunctional { terms: Vec::new() };
    let norm = 1.0 / (4.0 * spec.nx as f64);
    for (x, m) in ideal.iter().enumerate() {
        let sigma = State::from_bloch(*m)?;
        let sigma = sigma.rho();
        for i in 0..2 {
            for k in 0..2 {
                let amp = sigma.matrix()[(k, i)] * norm;
                for (coef, mut w) in swap_t_words(i, k) {
                    w.push(Letter::State(x));
                    f.add(spec, &idx, amp * coef, &w)?;
                }
            }
        }
    }
    Ok(f)
}

/// Witness value Σ α_xyb (1 + (−1)^b Tr(B_y ρ_x))/2 with binary outcomes.
pub fn witness_functional(spec: &HierarchySpec, w: &Witness) -> Result<LinearFunctional> {
    if w.nb() != 2 || w.nx() != spec.nx || w.ny() != spec.ny {
        return Err(Error::Shape("witness does not match the hierarchy".into()));
    }
    let idx = spec.monomial_index();
    let mut f = LinearFunctional { terms: Vec::new() };
    for x in 0..w.nx() {
        for y in 0..w.ny() {
            let (a0, a1) = (w.coeff(x, y, 0), w.coeff(x, y, 1));
            f.add(spec, &idx, c(0.5 * (a0 + a1), 0.0), &[Letter::State(x)])?;
            f.add(
                spec,
                &idx,
                c(0.5 * (a0 - a1), 0.0),
                &[Letter::Obs(y), Letter::State(x)],
            )?;
        }
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapOptions {
    pub seed: u64,
    pub field: Field,
    /// Also sample the trivial observables ±1.
    pub trivial_observables: bool,
    pub span: SpanOptions,
    pub solver: SolverOptions,
}

impl Default for SwapOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            field: Field::Complex,
            trivial_observables: true,
            span: SpanOptions::default(),
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapBound {
    pub a_star: f64,
    /// Lower bound on the swap fidelity over qubit strategies with witness value ≥ a_star.
    pub fidelity: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Qubit moment relaxation for one witness and ideal, reusable across thresholds.
#[derive(Clone, Debug)]
pub struct SwapRelaxation {
    pub spec: HierarchySpec,
    /// Dimension of the sampled affine span.
    pub span_dim: usize,
    pub samples: usize,
    /// Size of the PSD block after facial reduction and real embedding.
    pub block_size: usize,
    problem: SdpProblem,
    witness: (Vec<f64>, f64),
}

impl SwapRelaxation {
    pub fn build(w: &Witness, ideal_frame: &[[f64; 3]], opts: &SwapOptions) -> Result<Self> {
        let spec = HierarchySpec::for_shape(w.nx(), w.ny())?;
        Self::build_with(spec, w, ideal_frame, opts)
    }

    pub fn build_with(
        spec: HierarchySpec,
        w: &Witness,
        ideal_frame: &[[f64; 3]],
        opts: &SwapOptions,
    ) -> Result<Self> {
        let fid = swap_fidelity_functional(&spec, ideal_frame)?;
        let wit = witness_functional(&spec, w)?;
        let n = spec.len();
        let sample = |k: usize| {
            let mut rng = stream_rng(opts.seed, k as u64);
            let r = Realization::random_with_ranks(
                spec.nx,
                &rank_pattern(k, spec.ny, opts),
                2,
                opts.field,
                &mut rng,
            );
            Ok(hermitian_to_vec(&moment_matrix(&spec, &r)?))
        };
        let mut sum = vec![0.0; n * n];
        let span = AffineSpan::grow(
            sample,
            |v| sum.iter_mut().zip(v).for_each(|(s, x)| *s += x),
            &opts.span,
        )?;
        let offset = vec_to_hermitian(&span.offset, n);
        let basis: Vec<ComplexMatrix> = span.basis.iter().map(|b| vec_to_hermitian(b, n)).collect();
        let reduce = FaceReduction::new(&vec_to_hermitian(&sum, n))?;
        let mut problem = SdpProblem::new(
            vec![reduce.apply(&offset)],
            basis.iter().map(|b| vec![reduce.apply(b)]).collect(),
            basis.iter().map(|b| fid.eval(b)).collect(),
        )?;
        problem.objective_offset = fid.eval(&offset);
        let witness = (
            basis.iter().map(|b| wit.eval(b)).collect(),
            wit.eval(&offset),
        );
        Ok(Self {
            block_size: problem.offset[0].nrows(),
            spec,
            span_dim: span.dim(),
            samples: span.samples,
            problem,
            witness,
        })
    }

    /// Minimum swap fidelity subject to witness value ≥ a_star.
    pub fn bound(&self, a_star: f64, opts: &SolverOptions) -> Result<SwapBound> {
        if !a_star.is_finite() {
            return Err(Error::Domain {
                name: "a_star",
                value: a_star,
            });
        }
        let mut p = self.problem.clone();
        p.add_linear_inequality(&self.witness.0, a_star - self.witness.1)?;
        let s = sdp_solve(&p, opts)?;
        Ok(SwapBound {
            a_star,
            fidelity: s.value,
            gap: s.gap,
            iterations: s.iterations,
        })
    }

    /// Largest witness value allowed by the relaxation.
    pub fn max_witness(&self, opts: &SolverOptions) -> Result<f64> {
        let mut p = self.problem.clone();
        p.objective = self.witness.0.iter().map(|g| -g).collect();
        p.objective_offset = -self.witness.1;
        Ok(-sdp_solve(&p, opts)?.value)
    }
}

/// Swap-extracted average fidelity of an explicit qubit strategy with binary measurements,
/// (1/nₓ) Σ_x Tr[S(ρ_x ⊗ |0⟩⟨0|)S† (1 ⊗ σ_x)], with S built from its first two observables.
pub fn direct_swap_fidelity(s: &Strategy, ideal_frame: &[[f64; 3]]) -> Result<f64> {
    if s.dim() != 2 || s.ny() < 2 || ideal_frame.len() != s.nx() {
        return Err(Error::Shape(
            "direct swap fidelity needs a matching qubit strategy".into(),
        ));
    }
    let obs = s.observables()?;
    let gate = swap_operator(obs[0].op(), obs[1].op())?;
    let anc0 = ComplexMatrix::diag(&[1.0, 0.0]);
    let mut total = 0.0;
    for (rho, m) in s.states().iter().zip(ideal_frame) {
        let out = &(&gate * &rho.rho().matrix().kron(&anc0)) * &gate.adjoint();
        let target = ComplexMatrix::identity(2).kron(State::from_bloch(*m)?.rho().matrix());
        total += out.trace_product(&target).re;
    }
    Ok(total / s.nx() as f64)
}

/// Swap fidelity bound at one threshold for an ideal qubit strategy.
pub fn swap_fidelity_bound(
    w: &Witness,
    ideal: &Strategy,
    a_star: f64,
    opts: &SwapOptions,
) -> Result<SwapBound> {
    SwapRelaxation::build(w, &swap_frame_states(ideal)?, opts)?.bound(a_star, &opts.solver)
}

/// Bounds at several thresholds sharing one relaxation; thresholds are solved concurrently.
pub fn swap_bound_grid(
    w: &Witness,
    ideal: &Strategy,
    a_stars: &[f64],
    opts: &SwapOptions,
) -> Result<(SwapRelaxation, Vec<Result<SwapBound>>)> {
    let rel = SwapRelaxation::build(w, &swap_frame_states(ideal)?, opts)?;
    let out = opts
        .span
        .exec
        .map(a_stars.len(), |k| rel.bound(a_stars[k], &opts.solver));
    Ok((rel, out))
}

/// Rank splits of sample k: rank one throughout, or with trivial observables every split
/// pattern in turn so that each stability window sees all of them.
fn rank_pattern(k: usize, ny: usize, opts: &SwapOptions) -> Vec<usize> {
    if !opts.trivial_observables {
        return vec![1; ny];
    }
    let mut k = k;
    (0..ny)
        .map(|_| {
            let r = k % 3;
            k /= 3;
            r
        })
        .collect()
}

/// Restriction to the range of a PSD matrix containing every feasible range, followed by the
/// real embedding when the matrices are complex.
struct FaceReduction {
    v: Isometry,
}

enum Isometry {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

impl FaceReduction {
    const REL_TOL: f64 = 1e-9;

    fn new(sum: &ComplexMatrix) -> Result<Self> {
        let n = sum.dim();
        if sum.is_real(1e-12) {
            let eig = SymmetricEigen::new(DMatrix::from_fn(n, n, |i, j| sum[(i, j)].re));
            let top = eig.eigenvalues.amax();
            let keep: Vec<usize> = (0..n)
                .filter(|&k| eig.eigenvalues[k] > Self::REL_TOL * top)
                .collect();
            let v = DMatrix::from_fn(n, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
            return Ok(Self {
                v: Isometry::Real(v),
            });
        }
        let eig = eig_hermitian(&HermitianOperator::symmetrized(sum.clone()))?;
        let top = eig.max();
        let keep: Vec<&Vec<C64>> = eig
            .values
            .iter()
            .zip(&eig.vectors)
            .filter(|(l, _)| **l > Self::REL_TOL * top)
            .map(|(_, v)| v)
            .collect();
        let v = DMatrix::from_fn(n, keep.len(), |i, j| keep[j][i]);
        Ok(Self {
            v: Isometry::Complex(v),
        })
    }

    fn apply(&self, m: &ComplexMatrix) -> DMatrix<f64> {
        let n = m.dim();
        let out = match &self.v {
            Isometry::Real(v) => v.transpose() * DMatrix::from_fn(n, n, |i, j| m[(i, j)].re) * v,
            Isometry::Complex(v) => {
                let reduced = v.adjoint() * DMatrix::from_fn(n, n, |i, j| m[(i, j)]) * v;
                let r = reduced.nrows();
                real_embedding(&ComplexMatrix::from_fn(r, |i, j| reduced[(i, j)]))
            }
        };
        (&out + out.transpose()) * 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream_rng;
    use crate::linalg::sigma_z;
    use crate::quantum::random_observable_with_rank;

    fn block(s: &ComplexMatrix, i: usize, j: usize) -> ComplexMatrix {
        let d = s.dim() / 2;
        ComplexMatrix::from_fn(d, |a, b| s[(2 * a + i, 2 * b + j)])
    }

    #[test]
    fn swap_gate_for_ideal_observables() {
        let s = swap_operator(&sigma_z(), &sigma_x()).unwrap();
        let swap = ComplexMatrix::from_fn(4, |r, col| {
            let (a, i) = (r / 2, r % 2);
            let (b, j) = (col / 2, col % 2);
            c(if a == j && i == b { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(s.max_abs_diff(&swap) < 1e-15);
    }

    #[test]
    fn t_operators_match_explicit_blocks() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..5 {
            let b0 = random_observable_with_rank(2, 1, Field::Complex, &mut rng)
                .op()
                .clone();
            let b1 = random_observable_with_rank(2, 1, Field::Complex, &mut rng)
                .op()
                .clone();
            let s = swap_operator(&b0, &b1).unwrap();
            let t = swap_t_operators(&b0, &b1);
            for i in 0..2 {
                for k in 0..2 {
                    // T_ik = 4 S_k0† S_i0 with S_ij the ancilla blocks
                    let want = (&block(&s, k, 0).adjoint() * &block(&s, i, 0)).scale(4.0);
                    assert!(t[i][k].max_abs_diff(&want) < 1e-12, "T{i}{k}");
                }
            }
        }
    }

    #[test]
    fn functional_matches_explicit_swap_fidelity() {
        let spec = HierarchySpec::products(4);
        let ideal = swap_frame_states(&Strategy::rac2_ideal()).unwrap();
        let f = swap_fidelity_functional(&spec, &ideal).unwrap();
        let mut rng = stream_rng(12, 0);
        for _ in 0..5 {
            let r = Realization::random(4, 2, 2, Field::Complex, false, &mut rng);
            let b0 = HermitianOperator::new(r.observables[0].clone()).unwrap();
            let b1 = HermitianOperator::new(r.observables[1].clone()).unwrap();
            let s = swap_operator(&b0, &b1).unwrap();
            let mut want = 0.0;
            for (x, m) in ideal.iter().enumerate() {
                let anc0 = ComplexMatrix::diag(&[1.0, 0.0]);
                let out = (&(&s * &r.states[x].kron(&anc0)) * &s.adjoint()).clone();
                let sigma = State::from_bloch(*m).unwrap();
                let obs = ComplexMatrix::identity(2).kron(sigma.rho().matrix());
                want += out.trace_product(&obs).re / 4.0;
            }
            let got = f.eval(&moment_matrix(&spec, &r).unwrap());
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn frame_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = swap_frame_states(&Strategy::rac2_ideal()).unwrap();
        assert!(
            (m[0][0] - h).abs() < 1e-12 && m[0][1].abs() < 1e-12 && (m[0][2] - h).abs() < 1e-12
        );
        let m = swap_frame_states(&Strategy::example2_ideal()).unwrap();
        let r3 = 3f64.sqrt() / 2.0;
        for (got, want) in m
            .iter()
            .zip([[r3, 0.0, 0.5], [-r3, 0.0, 0.5], [0.0, 0.0, -1.0]])
        {
            for k in 0..3 {
                assert!((got[k] - want[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ideal_realization_has_unit_fidelity() {
        for (w, ideal) in [
            (Witness::rac(2).unwrap(), Strategy::rac2_ideal()),
            (Witness::example2(), Strategy::example2_ideal()),
        ] {
            let frame = swap_frame_states(&ideal).unwrap();
            let spec = HierarchySpec::for_shape(w.nx(), w.ny()).unwrap();
            let states = frame
                .iter()
                .map(|m| State::from_bloch(*m).unwrap().rho().clone())
                .collect();
            let r = Realization::new(states, vec![sigma_z(), sigma_x()]).unwrap();
            let chi = moment_matrix(&spec, &r).unwrap();
            assert!(
                (swap_fidelity_functional(&spec, &frame).unwrap().eval(&chi) - 1.0).abs() < 1e-12
            );
            let a = witness_functional(&spec, &w).unwrap().eval(&chi);
            let want = crate::scenario::witness_value(&w, &ideal).unwrap();
            assert!((a - want).abs() < 1e-12);
        }
    }

    fn relaxation(w: &Witness, ideal: &Strategy, field: Field, trivial: bool) -> SwapRelaxation {
        let opts = SwapOptions {
            field,
            trivial_observables: trivial,
            ..Default::default()
        };
        SwapRelaxation::build(w, &swap_frame_states(ideal).unwrap(), &opts).unwrap()
    }

    #[test]
    fn real_and_complex_sampling_agree() {
        let w = Witness::rac(2).unwrap();
        let solver = SolverOptions::default();
        let re = relaxation(&w, &Strategy::rac2_ideal(), Field::Real, true)
            .bound(0.8, &solver)
            .unwrap();
        let cx = relaxation(&w, &Strategy::rac2_ideal(), Field::Complex, true)
            .bound(0.8, &solver)
            .unwrap();
        assert!((re.fidelity - cx.fidelity).abs() < 1e-6);
    }

    #[test]
    fn stability_window_does_not_truncate_the_span() {
        let w = Witness::example2();
        let short = relaxation(&w, &Strategy::example2_ideal(), Field::Real, true);
        let opts = SwapOptions {
            field: Field::Real,
            span: SpanOptions {
                stable_window: 300,
                budget: 5000,
                ..Default::default()
            },
            ..Default::default()
        };
        let long = SwapRelaxation::build(
            &w,
            &swap_frame_states(&Strategy::example2_ideal()).unwrap(),
            &opts,
        )
        .unwrap();
        assert_eq!(short.span_dim, long.span_dim);
    }

    #[test]
    fn trivial_observables_weaken_the_bound() {
        let w = Witness::example2();
        let solver = SolverOptions::default();
        let with = relaxation(&w, &Strategy::example2_ideal(), Field::Real, true)
            .bound(4.9, &solver)
            .unwrap();
        let without = relaxation(&w, &Strategy::example2_ideal(), Field::Real, false)
            .bound(4.9, &solver)
            .unwrap();
        assert!(with.fidelity < without.fidelity - 1e-3);
    }

    #[test]
    fn unreachable_threshold_is_infeasible() {
        let rel = relaxation(
            &Witness::rac(2).unwrap(),
            &Strategy::rac2_ideal(),
            Field::Real,
            true,
        );
        assert!(
            (rel.max_witness(&SolverOptions::default()).unwrap() - crate::fidelity::Q2).abs()
                < 1e-6
        );
        assert!(matches!(
            rel.bound(1.1, &SolverOptions::default()),
            Err(Error::Infeasible)
        ));
    }
}
