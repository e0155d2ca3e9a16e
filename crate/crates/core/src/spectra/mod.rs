//! Band tests for integer Hamiltonians: does the spectrum sit inside
//! `[-2, 2]`, where the stationary-energy equation has real solutions?

mod scan;
pub mod sturm;

pub use scan::{
    canonical_form, enumerate_bounded_spectrum, frobenius_prefilter, CanonicalMatrix, IntMatrix,
    ScanConfig, ScanReport, Survivor, SEARCH_SPACE_LIMIT,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::continuum::eigen_decompose;
use crate::error::{Error, Result};
use crate::hermitian::HermitianIntMatrix;
use sturm::{characteristic_polynomial, count_roots, sturm_sequence, Point, UPoly};

/// Band-membership tolerance of the numeric mode.
pub const NUMERIC_TOL: f64 = 1e-9;

/// Largest dimension accepted by the exact mode.
pub const EXACT_MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// Every eigenvalue in the open band `(-2, 2)`.
    Inside,
    /// Every eigenvalue in `[-2, 2]`, at least one at an edge.
    Boundary,
    Outside,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        }
    }

    /// Spectrum contained in the closed band.
    pub fn in_closed_band(self) -> bool {
        self != Verdict::Outside
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Numeric,
    Exact,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(Mode::Numeric),
            "exact" => Ok(Mode::Exact),
            other => Err(Error::InvalidArgument(format!(
                "mode must be numeric or exact, got {other:?}"
            ))),
        }
    }
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Numeric => "numeric",
            Mode::Exact => "exact",
        }
    }
}

/// Eigenvalue counts with multiplicity, by region of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SturmCounts {
    pub below: usize,
    pub at_minus_two: usize,
    pub inside: usize,
    pub at_plus_two: usize,
    pub above: usize,
}

impl SturmCounts {
    pub fn total(&self) -> usize {
        self.below + self.at_minus_two + self.inside + self.at_plus_two + self.above
    }

    pub fn verdict(&self) -> Verdict {
        if self.below + self.above > 0 {
            Verdict::Outside
        } else if self.at_minus_two + self.at_plus_two > 0 {
            Verdict::Boundary
        } else {
            Verdict::Inside
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Eigenvalues(Vec<f64>),
    Sturm(SturmCounts),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandTestResult {
    pub matrix: HermitianIntMatrix,
    pub verdict: Verdict,
    pub witness: Witness,
}

pub fn spectrum_in_band(m: &HermitianIntMatrix, mode: Mode) -> Result<BandTestResult> {
    let (verdict, witness) = match mode {
        Mode::Numeric => {
            let values = eigen_decompose(m).values;
            (numeric_verdict(&values), Witness::Eigenvalues(values))
        }
        Mode::Exact => {
            if m.dim() > EXACT_MAX_DIM {
                return Err(Error::InvalidArgument(format!(
                    "exact mode supports dim <= {EXACT_MAX_DIM}, got {}",
                    m.dim()
                )));
            }
            let counts = sturm_counts(m)?;
            (counts.verdict(), Witness::Sturm(counts))
        }
    };
    Ok(BandTestResult {
        matrix: m.clone(),
        verdict,
        witness,
    })
}

pub fn numeric_verdict(values: &[f64]) -> Verdict {
    if values.iter().any(|v| v.abs() > 2.0 + NUMERIC_TOL) {
        Verdict::Outside
    } else if values.iter().any(|v| (v.abs() - 2.0).abs() <= NUMERIC_TOL) {
        Verdict::Boundary
    } else {
        Verdict::Inside
    }
}

/// Exact eigenvalue census from the characteristic polynomial.
pub fn sturm_counts(m: &HermitianIntMatrix) -> Result<SturmCounts> {
    let coeffs = characteristic_polynomial(m.matrix());
    if coeffs.iter().any(|c| !c.im.is_zero()) {
        return Err(Error::Internal("characteristic polynomial of a Hermitian matrix has complex coefficients".into()));
    }
    let mut p = UPoly::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.re)).collect());
    let mut counts = SturmCounts {
        at_plus_two: strip_root(&mut p, 2),
        at_minus_two: strip_root(&mut p, -2),
        ..SturmCounts::default()
    };
    let two = Point::At(BigRational::from_integer(BigInt::from(2)));
    let minus_two = Point::At(BigRational::from_integer(BigInt::from(-2)));
    for (i, factor) in p.squarefree_decomposition().iter().enumerate() {
        let mult = i + 1;
        let seq = sturm_sequence(factor);
        counts.below += mult * count_roots(&seq, &Point::NegInf, &minus_two);
        counts.inside += mult * count_roots(&seq, &minus_two, &two);
        counts.above += mult * count_roots(&seq, &two, &Point::PosInf);
    }
    if counts.total() != m.dim() {
        return Err(Error::Internal(format!(
            "found {} real eigenvalues for a {}x{} Hermitian matrix",
            counts.total(),
            m.dim(),
            m.dim()
        )));
    }
    Ok(counts)
}

/// Divides out `(x - r)` as often as it divides `p`, returning the count.
fn strip_root(p: &mut UPoly, r: i64) -> usize {
    let root = BigRational::from_integer(r.into());
    let linear = UPoly::from_ints(&[-r, 1]);
    let mut k = 0;
    while p.degree().unwrap_or(0) > 0 && p.eval(&root).is_zero() {
        *p = p.div_rem(&linear).0;
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// Adjacency matrix of the `n`-path or `n`-cycle.
pub fn known_family(family: Family, n: usize) -> Result<HermitianIntMatrix> {
    let min = match family {
        Family::Path => 1,
        Family::Cycle => 3,
    };
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "{family:?} needs n >= {min}, got {n}"
        )));
    }
    let mut re = vec![vec![0i64; n]; n];
    for i in 0..n.saturating_sub(1) {
        re[i][i + 1] = 1;
        re[i + 1][i] = 1;
    }
    if family == Family::Cycle {
        re[0][n - 1] = 1;
        re[n - 1][0] = 1;
    }
    HermitianIntMatrix::from_parts(&re, &vec![vec![0; n]; n])
}
