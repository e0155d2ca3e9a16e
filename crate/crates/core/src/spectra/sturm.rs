//! Univariate rational polynomials, exact characteristic polynomials and
//! Sturm-sequence root counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hermitian::{GaussianInt, GaussianMatrix};

/// Dense polynomial, coefficients from the constant term upwards, no
/// trailing zeros. The zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Self(self.0.iter().map(|c| c / &l).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&zero) - other.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Euclidean division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        let lead = d.lead();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factors `f_1, f_2, ...` with `self = Π f_i^i` up to a
    /// constant (Yun's algorithm over the rationals).
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let c = self.gcd(&d);
        let mut w = self.div_rem(&c).0;
        let mut y = d.div_rem(&c).0;
        let mut z = y.sub(&w.derivative());
        while w.degree().unwrap_or(0) > 0 {
            let g = w.gcd(&z);
            w = w.div_rem(&g).0;
            y = z.div_rem(&g).0;
            z = y.sub(&w.derivative());
            out.push(g);
        }
        out
    }
}

/// Characteristic polynomial `det(xI − M)` by Faddeev–LeVerrier. The
/// traces are divided exactly; for a Hermitian input every coefficient
/// is a real integer.
pub fn characteristic_polynomial(m: &GaussianMatrix) -> Vec<GaussianInt> {
    let n = m.dim();
    let mut coeffs = vec![GaussianInt::zero(); n + 1];
    coeffs[n] = GaussianInt::one();
    // `am` holds A·M_{k-1}, starting from M_0 = 0.
    let mut am = GaussianMatrix::zeros(n);
    let ident = GaussianMatrix::identity(n);
    for k in 1..=n {
        let mk = add_scaled_identity(&am, &ident, &coeffs[n - k + 1]);
        am = m.mul(&mk).expect("square");
        let tr: GaussianInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        let kk = BigInt::from(k);
        debug_assert!((&tr.re % &kk).is_zero() && (&tr.im % &kk).is_zero());
        coeffs[n - k] = GaussianInt::new(-(tr.re / &kk), -(tr.im / &kk));
    }
    coeffs
}

fn add_scaled_identity(m: &GaussianMatrix, ident: &GaussianMatrix, c: &GaussianInt) -> GaussianMatrix {
    let scaled = ident.scale(c);
    let entries = m
        .entries()
        .iter()
        .zip(scaled.entries())
        .map(|(a, b)| a + b)
        .collect();
    GaussianMatrix::from_entries(m.dim(), entries).expect("same shape")
}

/// Sturm sequence of a square-free polynomial.
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(UPoly::new(r.0.into_iter().map(|c| -c).collect()));
    }
    seq
}

/// Evaluation point for sign-change counting.
#[derive(Debug, Clone)]
pub enum Point {
    NegInf,
    At(BigRational),
    PosInf,
}

fn sign_at(p: &UPoly, at: &Point) -> i8 {
    let signum = |v: &BigRational| {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    match at {
        Point::At(x) => signum(&p.eval(x)),
        Point::PosInf => p.0.last().map_or(0, signum),
        Point::NegInf => {
            let s = p.0.last().map_or(0, signum);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

pub fn sign_changes(seq: &[UPoly], at: &Point) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign_at(p, at)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of a square-free `p` in `(a, b]`.
pub fn count_roots(seq: &[UPoly], a: &Point, b: &Point) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}
