//! Dense Gaussian-integer matrices and the Hermitian subclass used as
//! Hamiltonians and quadratic observables.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A Gaussian integer `a + ib` with arbitrary-precision parts.
pub type GaussianInt = Complex<BigInt>;

/// Square matrix with Gaussian-integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianMatrix {
    dim: usize,
    entries: Vec<GaussianInt>,
}

impl GaussianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![GaussianInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = GaussianInt::one();
        }
        m
    }

    /// Builds `re + i·im` from two integer matrices of equal square shape.
    pub fn from_parts(re: &[Vec<i64>], im: &[Vec<i64>]) -> Result<Self> {
        let dim = re.len();
        check_square(re, dim, "real part")?;
        check_square(im, dim, "imaginary part")?;
        let entries = re
            .iter()
            .zip(im)
            .flat_map(|(r, i)| {
                r.iter()
                    .zip(i)
                    .map(|(&a, &b)| GaussianInt::new(BigInt::from(a), BigInt::from(b)))
            })
            .collect();
        Ok(Self { dim, entries })
    }

    pub fn from_entries(dim: usize, entries: Vec<GaussianInt>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianInt {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[GaussianInt] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: &GaussianInt) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[GaussianInt]) -> Result<Vec<GaussianInt>> {
        self.check_dim(v.len())?;
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                let mut acc = GaussianInt::zero();
                for (j, vj) in v.iter().enumerate() {
                    let g = self.get(i, j);
                    if !g.is_zero() && !vj.is_zero() {
                        acc += g * vj;
                    }
                }
                acc
            })
            .collect())
    }

    /// Real and imaginary parts as `i64` matrices, when every entry fits.
    pub fn to_parts_i64(&self) -> Option<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        let n = self.dim;
        let mut re = vec![vec![0i64; n]; n];
        let mut im = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                re[i][j] = i64::try_from(&e.re).ok()?;
                im[i][j] = i64::try_from(&e.im).ok()?;
            }
        }
        Some((re, im))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let e = self.get(i, j);
                        format!("{}{:+}i", e.re, e.im)
                    })
                    .collect()
            })
            .collect();
        write!(f, "{rows:?}")
    }
}

fn check_square(m: &[Vec<i64>], dim: usize, what: &str) -> Result<()> {
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidSpec(format!("{what} is not a {dim}x{dim} matrix")));
    }
    Ok(())
}

/// A Gaussian-integer matrix equal to its conjugate transpose,
/// `G = G_S + i·G_A` with `G_S` symmetric and `G_A` antisymmetric.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermitianIntMatrix(GaussianMatrix);

impl HermitianIntMatrix {
    pub fn new(m: GaussianMatrix) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::NotHermitian("Hermitian"));
        }
        Ok(Self(m))
    }

    pub fn from_parts(re: &[Vec<i64>], im: &[Vec<i64>]) -> Result<Self> {
        Self::new(GaussianMatrix::from_parts(re, im)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self(GaussianMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(GaussianMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn matrix(&self) -> &GaussianMatrix {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianInt {
        self.0.get(row, col)
    }

    /// `G²`, Hermitian whenever `G` is.
    pub fn square(&self) -> Self {
        Self(self.0.mul(&self.0).expect("square of a square matrix"))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.0.commutator(&other.0)?.is_zero())
    }

    /// Entry-wise real and imaginary parts as floating point.
    pub fn to_f64_parts(&self) -> (Vec<f64>, Vec<f64>) {
        use num_traits::ToPrimitive;
        let to = |b: &BigInt| b.to_f64().unwrap_or(f64::NAN);
        (
            self.0.entries.iter().map(|e| to(&e.re)).collect(),
            self.0.entries.iter().map(|e| to(&e.im)).collect(),
        )
    }
}

impl fmt::Debug for HermitianIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
