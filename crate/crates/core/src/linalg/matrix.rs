use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 32;

const HERMITIAN_TOL: f64 = 1e-12;

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::Shape(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_real_imag(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if dim == 0 || im.len() != dim {
            return Err(Error::Shape(
                "real and imaginary parts differ in size".into(),
            ));
        }
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            if re[i].len() != dim || im[i].len() != dim {
                return Err(Error::Shape(format!("row {i} has wrong length")));
            }
            for j in 0..dim {
                m[(i, j)] = c(re[i][j], im[i][j]);
            }
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = c(*v, 0.0);
        }
        m
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.matmul(other))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    fn matmul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim;
        assert_eq!(n, other.dim, "trace_product dimension mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |A_ij - conj(A_ji)|
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    /// <u|A|v>
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.mat_vec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    /// U A U†
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

// Operator impls panic on mismatched dimensions; the `try_*` methods return errors instead.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix dimension mismatch in add")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix dimension mismatch in sub")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimension mismatch in mul")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

/// Hermitian operator; Hermiticity is enforced at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Accepts matrices whose asymmetry is within 1e-12 and symmetrises them.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() == 0 || matrix.dim() > MAX_DIM {
            return Err(Error::UnsupportedDimension(matrix.dim()));
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// (A + A†)/2 without any tolerance check.
    pub fn symmetrized(matrix: ComplexMatrix) -> Self {
        let n = matrix.dim();
        let mut m = matrix;
        for i in 0..n {
            m[(i, i)] = c(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self { matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::diag(values),
        }
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::symmetrized(ComplexMatrix::projector(v))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr(AB) for Hermitian A, B (real).
    pub fn trace_with(&self, other: &Self) -> f64 {
        self.matrix.trace_product(&other.matrix).re
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.try_add(&other.matrix)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.try_sub(&other.matrix)?,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("dimension mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("dimension mismatch")
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }

    /// self + s·1
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            m[(i, i)] += c(s, 0.0);
        }
        Self { matrix: m }
    }

    /// Anticommutator {A, B} = AB + BA.
    pub fn anticommutator(&self, other: &Self) -> Self {
        let ab = &self.matrix * &other.matrix;
        Self::symmetrized(&ab + &ab.adjoint())
    }

    pub fn square(&self) -> Self {
        Self::symmetrized(&self.matrix * &self.matrix)
    }

    /// U A U†, which stays Hermitian.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrized(self.matrix.conjugate_by(u))
    }

    pub fn expectation(&self, v: &[C64]) -> f64 {
        self.matrix.sandwich(v, v).re
    }
}

/// Linear combination Σ w_i A_i of Hermitian operators with real weights.
pub fn weighted_sum<'a>(
    dim: usize,
    terms: impl IntoIterator<Item = (f64, &'a HermitianOperator)>,
) -> HermitianOperator {
    let mut acc = ComplexMatrix::zeros(dim);
    for (w, op) in terms {
        if w == 0.0 {
            continue;
        }
        for (a, b) in acc.data.iter_mut().zip(&op.matrix().data) {
            *a += b * w;
        }
    }
    HermitianOperator::symmetrized(acc)
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [HermitianOperator; 3] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        HermitianOperator::symmetrized(
            ComplexMatrix::from_row_major(vec![o, one, one, o]).unwrap(),
        ),
        HermitianOperator::symmetrized(ComplexMatrix::from_row_major(vec![o, -i, i, o]).unwrap()),
        HermitianOperator::symmetrized(
            ComplexMatrix::from_row_major(vec![one, o, o, -one]).unwrap(),
        ),
    ]
}

pub fn sigma_x() -> HermitianOperator {
    pauli()[0].clone()
}

pub fn sigma_y() -> HermitianOperator {
    pauli()[1].clone()
}

pub fn sigma_z() -> HermitianOperator {
    pauli()[2].clone()
}

/// n·σ for a real 3-vector.
pub fn bloch_operator(n: [f64; 3]) -> HermitianOperator {
    let p = pauli();
    weighted_sum(2, [(n[0], &p[0]), (n[1], &p[1]), (n[2], &p[2])])
}

/// Components (Tr(Aσ_x), Tr(Aσ_y), Tr(Aσ_z))/2 of a qubit operator.
pub fn bloch_components(a: &HermitianOperator) -> [f64; 3] {
    let p = pauli();
    [
        a.trace_with(&p[0]) / 2.0,
        a.trace_with(&p[1]) / 2.0,
        a.trace_with(&p[2]) / 2.0,
    ]
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatched_dims_rejected() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn hermitian_construction_rejects_asymmetric() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn hermitian_construction_absorbs_roundoff() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        m[(1, 0)] = c(0.5 + 1e-13, 0.0);
        let h = HermitianOperator::new(m).unwrap();
        assert_eq!(h.matrix().hermitian_defect(), 0.0);
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = pauli();
        let xy = x.matrix() * y.matrix();
        let iz = z.matrix().scale_c(c(0.0, 1.0));
        assert!(xy.max_abs_diff(&iz) < 1e-15);
        assert!(x.anticommutator(&z).matrix().max_abs() < 1e-15);
        assert_eq!(x.square(), HermitianOperator::identity(2));
    }

    #[test]
    fn kron_dimensions_and_values() {
        let z = sigma_z();
        let k = z.matrix().kron(&ComplexMatrix::identity(2));
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(2, 2)], c(-1.0, 0.0));
        assert_eq!(k[(1, 1)], c(1.0, 0.0));
    }
}
