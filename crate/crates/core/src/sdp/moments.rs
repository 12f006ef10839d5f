use rand::Rng;

use super::words::{HierarchySpec, Letter};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::quantum::{random_observable_with_rank, random_pure_vector, Field};

/// Concrete operators substituted for the letters of a word.
#[derive(Clone, Debug)]
pub struct Realization {
    pub states: Vec<ComplexMatrix>,
    pub observables: Vec<ComplexMatrix>,
}

impl Realization {
    /// Pure states and ±1-valued observables from their Hermitian forms.
    pub fn new(
        states: Vec<HermitianOperator>,
        observables: Vec<HermitianOperator>,
    ) -> Result<Self> {
        let d = states
            .first()
            .map(HermitianOperator::dim)
            .ok_or_else(|| Error::Shape("no states".into()))?;
        if states.iter().chain(&observables).any(|o| o.dim() != d) {
            return Err(Error::Shape(
                "realization operators differ in dimension".into(),
            ));
        }
        Ok(Self {
            states: states
                .into_iter()
                .map(HermitianOperator::into_matrix)
                .collect(),
            observables: observables
                .into_iter()
                .map(HermitianOperator::into_matrix)
                .collect(),
        })
    }

    /// Pure states and projective observables; rank splits 0..=d are allowed when `trivial` is set.
    pub fn random<R: Rng + ?Sized>(
        nx: usize,
        ny: usize,
        d: usize,
        field: Field,
        trivial: bool,
        rng: &mut R,
    ) -> Self {
        let ranks: Vec<usize> = (0..ny)
            .map(|_| {
                if trivial {
                    rng.random_range(0..=d)
                } else {
                    rng.random_range(1..d)
                }
            })
            .collect();
        Self::random_with_ranks(nx, &ranks, d, field, rng)
    }

    /// Pure states and projective observables whose +1 eigenspaces have the given ranks.
    pub fn random_with_ranks<R: Rng + ?Sized>(
        nx: usize,
        ranks: &[usize],
        d: usize,
        field: Field,
        rng: &mut R,
    ) -> Self {
        let states = (0..nx)
            .map(|_| ComplexMatrix::projector(&random_pure_vector(d, field, rng)))
            .collect();
        let observables = ranks
            .iter()
            .map(|&rank| {
                random_observable_with_rank(d, rank.min(d), field, rng)
                    .op()
                    .matrix()
                    .clone()
            })
            .collect();
        Self {
            states,
            observables,
        }
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn word(&self, w: &[Letter]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::identity(self.dim());
        for l in w {
            let m = match *l {
                Letter::State(x) => &self.states[x],
                Letter::Obs(y) => &self.observables[y],
            };
            acc = &acc * m;
        }
        acc
    }
}

/// χ_ab = Tr(w_a† w_b) for one realization.
pub fn moment_matrix(spec: &HierarchySpec, r: &Realization) -> Result<ComplexMatrix> {
    if r.states.len() != spec.nx || r.observables.len() != spec.ny {
        return Err(Error::Shape(
            "realization does not match the hierarchy".into(),
        ));
    }
    let ops: Vec<ComplexMatrix> = spec.words.iter().map(|w| r.word(w)).collect();
    let n = ops.len();
    let mut chi = ComplexMatrix::zeros(n);
    for a in 0..n {
        let adj = ops[a].adjoint();
        for b in a..n {
            let v = adj.trace_product(&ops[b]);
            chi[(a, b)] = v;
            chi[(b, a)] = v.conj();
        }
    }
    Ok(chi)
}

/// Moment matrix of one sampled realization together with the words indexing it.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    pub words: Vec<super::words::Word>,
    pub chi: HermitianOperator,
}

/// Moment matrix of random d-dimensional pure states and rank-split projective observables.
pub fn sample_moment_matrix<R: Rng + ?Sized>(
    spec: &HierarchySpec,
    d: usize,
    field: Field,
    rng: &mut R,
) -> Result<MomentMatrix> {
    if d < 2 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
        });
    }
    let r = Realization::random(spec.nx, spec.ny, d, field, true, rng);
    let chi = HermitianOperator::symmetrized(moment_matrix(spec, &r)?);
    Ok(MomentMatrix {
        words: spec.words.clone(),
        chi,
    })
}

/// Real coordinates of a Hermitian matrix: the diagonal, then Re and Im of the strict upper triangle.
pub fn hermitian_to_vec(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut v = Vec::with_capacity(n * n);
    v.extend((0..n).map(|i| m[(i, i)].re));
    for i in 0..n {
        for j in i + 1..n {
            v.push(m[(i, j)].re);
            v.push(m[(i, j)].im);
        }
    }
    v
}

pub fn vec_to_hermitian(v: &[f64], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = crate::linalg::c(v[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = crate::linalg::c(v[k], v[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream_rng;
    use crate::linalg::psd_check;

    #[test]
    fn moment_matrix_is_a_gram_matrix() {
        let spec = HierarchySpec::products(4);
        let mut rng = stream_rng(1, 0);
        let r = Realization::random(4, 2, 2, Field::Complex, false, &mut rng);
        let chi = moment_matrix(&spec, &r).unwrap();
        let h = HermitianOperator::new(chi.clone()).unwrap();
        assert!(psd_check(&h, 1e-10));
        // identity word: Tr(1) = d
        assert!((chi[(0, 0)].re - 2.0).abs() < 1e-12);
        // Gram matrix of vectors in a 4-dimensional operator space
        let eig = crate::linalg::eig_hermitian(&h).unwrap();
        assert!(eig.values[4].abs() < 1e-9);
    }

    #[test]
    fn sampled_probabilities_match_direct_evaluation() {
        use crate::quantum::{Observable, Povm, State};
        use crate::scenario::{probability, Strategy};
        let spec = HierarchySpec::products(4);
        let idx = spec.monomial_index();
        let mut rng = stream_rng(5, 0);
        let r = Realization::random(4, 2, 2, Field::Complex, false, &mut rng);
        let chi = moment_matrix(&spec, &r).unwrap();
        let states: Vec<State> = r
            .states
            .iter()
            .map(|m| State::new(HermitianOperator::symmetrized(m.clone())).unwrap())
            .collect();
        let povms: Vec<Povm> = r
            .observables
            .iter()
            .map(|m| {
                Povm::from_observable(
                    &Observable::new(HermitianOperator::symmetrized(m.clone())).unwrap(),
                )
            })
            .collect();
        let s = Strategy::new(states, povms).unwrap();
        for x in 0..4 {
            for y in 0..2 {
                let (a, b) = spec
                    .locate(&idx, &[Letter::Obs(y), Letter::State(x)])
                    .unwrap();
                for outcome in 0..2 {
                    let sign = if outcome == 0 { 1.0 } else { -1.0 };
                    let p = 0.5 * (1.0 + sign * chi[(a, b)].re);
                    assert!((p - probability(&s, x, y, outcome).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sample_is_reproducible_and_psd() {
        let spec = HierarchySpec::one_ab_bb_bba(3);
        let a = sample_moment_matrix(&spec, 2, Field::Complex, &mut stream_rng(9, 0)).unwrap();
        let b = sample_moment_matrix(&spec, 2, Field::Complex, &mut stream_rng(9, 0)).unwrap();
        assert_eq!(a.chi, b.chi);
        assert!(psd_check(&a.chi, 1e-9));
        assert!(sample_moment_matrix(&spec, 1, Field::Complex, &mut stream_rng(9, 0)).is_err());
    }

    #[test]
    fn vectorization_round_trip() {
        let spec = HierarchySpec::one_ab_bb_bba(3);
        let mut rng = stream_rng(2, 0);
        let chi = moment_matrix(
            &spec,
            &Realization::random(3, 2, 2, Field::Complex, true, &mut rng),
        )
        .unwrap();
        let v = hermitian_to_vec(&chi);
        assert_eq!(v.len(), 400);
        assert!(vec_to_hermitian(&v, 20).max_abs_diff(&chi) < 1e-15);
    }

    #[test]
    fn located_entries_match_traces() {
        use Letter::*;
        let spec = HierarchySpec::one_ab_bb_bba(3);
        let idx = spec.monomial_index();
        let mut rng = stream_rng(3, 0);
        let r = Realization::random(3, 2, 2, Field::Complex, false, &mut rng);
        let chi = moment_matrix(&spec, &r).unwrap();
        for target in [
            vec![Obs(0), Obs(1), Obs(0), State(2)],
            vec![Obs(1), State(0)],
            vec![State(1)],
        ] {
            let (a, b) = spec.locate(&idx, &target).unwrap();
            assert!((chi[(a, b)] - r.word(&target).trace()).norm() < 1e-12);
        }
    }
}
