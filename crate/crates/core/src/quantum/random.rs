use rand::Rng;
use rand_distr::StandardNormal;

use super::{Observable, State};
use crate::linalg::{c, ComplexMatrix, HermitianOperator, C64};

/// Number field used when sampling vectors and unitaries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Field {
    #[default]
    Complex,
    /// Real amplitudes only (orthogonal rather than unitary transformations).
    Real,
}

fn gaussian_vector<R: Rng + ?Sized>(d: usize, field: Field, rng: &mut R) -> Vec<C64> {
    (0..d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Complex => rng.sample(StandardNormal),
                Field::Real => 0.0,
            };
            c(re, im)
        })
        .collect()
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
    n
}

/// Haar-random unit vector (normalised Gaussian).
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, field: Field, rng: &mut R) -> Vec<C64> {
    loop {
        let mut v = gaussian_vector(d, field, rng);
        if normalize(&mut v) > 1e-8 {
            return v;
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> State {
    State::pure(&random_pure_vector(d, Field::Complex, rng)).expect("non-zero vector")
}

/// Haar-random unitary: Gram-Schmidt of Gaussian columns, which is QR with a positive R diagonal.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, field: Field, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vector(d, field, rng);
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        if normalize(&mut v) > 1e-8 {
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// U D U† with D = diag(+1 × rank_plus, −1 × rest) and Haar U.
pub fn random_observable_with_rank<R: Rng + ?Sized>(
    d: usize,
    rank_plus: usize,
    field: Field,
    rng: &mut R,
) -> Observable {
    let diag: Vec<f64> = (0..d)
        .map(|i| if i < rank_plus { 1.0 } else { -1.0 })
        .collect();
    let u = random_unitary(d, field, rng);
    let op = HermitianOperator::diag(&diag).conjugate_by(&u);
    Observable::new(op).expect("projective observable has unit spectrum")
}

/// Projective observable with a uniformly drawn non-trivial rank split (1 ≤ rank ≤ d−1).
pub fn random_projective_observable<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Observable {
    let rank = if d <= 2 { 1 } else { rng.random_range(1..d) };
    random_observable_with_rank(d, rank, Field::Complex, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream_rng;

    #[test]
    fn deterministic_per_seed() {
        let a = random_pure_state(3, &mut stream_rng(11, 0));
        let b = random_pure_state(3, &mut stream_rng(11, 0));
        assert_eq!(a, b);
        let c = random_pure_state(3, &mut stream_rng(11, 1));
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = stream_rng(3, 0);
        for d in 2..6 {
            let u = random_unitary(d, Field::Complex, &mut rng);
            let uu = &u.adjoint() * &u;
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
            let o = random_unitary(d, Field::Real, &mut rng);
            assert!(o.is_real(0.0));
        }
    }

    #[test]
    fn sampled_observable_is_involution() {
        let mut rng = stream_rng(5, 0);
        for d in 2..5 {
            let o = random_projective_observable(d, &mut rng);
            assert!(o.is_projective(1e-10));
        }
    }

    #[test]
    fn haar_states_have_small_mean_bloch_vector() {
        let mut rng = stream_rng(2024, 0);
        let n = 10_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let b = random_pure_state(2, &mut rng).bloch().unwrap();
            for k in 0..3 {
                mean[k] += b[k] / n as f64;
            }
        }
        let norm = (mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]).sqrt();
        assert!(norm <= 0.05, "mean Bloch vector norm {norm}");
    }
}
