//! Automaton definition: the integer matrices `S` (symmetric) and `A`
//! (antisymmetric), the time-increment sequence `c_n` and the physical
//! scale `l` of one tick.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hermitian::{GaussianMatrix, HermitianIntMatrix};

/// Unvalidated automaton data, as read from a model file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSpec {
    pub s: Vec<Vec<i64>>,
    pub a: Vec<Vec<i64>>,
    /// Periodic list of time increments; `c_n = c[n mod len]`.
    pub c: Vec<i64>,
    pub scale_l: f64,
}

/// A validated Hamiltonian cellular automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomatonSpec {
    dim: usize,
    s: Vec<Vec<i64>>,
    a: Vec<Vec<i64>>,
    c: Vec<i64>,
    scale_l: f64,
}

/// Checks symmetry of `S`, antisymmetry of `A`, shapes, `c` and `l`.
pub fn validate_spec(raw: RawSpec) -> Result<AutomatonSpec> {
    let dim = raw.s.len();
    if dim == 0 {
        return Err(Error::InvalidSpec("dimension must be positive".into()));
    }
    if raw.s.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidSpec(format!("S is not a {dim}x{dim} matrix")));
    }
    if raw.a.len() != dim || raw.a.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidSpec(format!(
            "A is not a {dim}x{dim} matrix matching S"
        )));
    }
    for i in 0..dim {
        for j in 0..dim {
            if raw.s[i][j] != raw.s[j][i] {
                return Err(Error::InvalidSpec(format!(
                    "S not symmetric: S[{i}][{j}] = {} but S[{j}][{i}] = {}",
                    raw.s[i][j], raw.s[j][i]
                )));
            }
            if raw.a[i][j].checked_neg() != Some(raw.a[j][i]) {
                return Err(Error::InvalidSpec(format!(
                    "A not antisymmetric: A[{i}][{j}] = {} but A[{j}][{i}] = {}",
                    raw.a[i][j], raw.a[j][i]
                )));
            }
        }
    }
    if raw.c.is_empty() {
        return Err(Error::InvalidSpec("c must contain at least one entry".into()));
    }
    if !(raw.scale_l.is_finite() && raw.scale_l > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "scale_l must be positive, got {}",
            raw.scale_l
        )));
    }
    Ok(AutomatonSpec {
        dim,
        s: raw.s,
        a: raw.a,
        c: raw.c,
        scale_l: raw.scale_l,
    })
}

impl AutomatonSpec {
    /// Shorthand for a spec with `c ≡ 1` and `l = 1`.
    pub fn new(s: Vec<Vec<i64>>, a: Vec<Vec<i64>>) -> Result<Self> {
        validate_spec(RawSpec {
            s,
            a,
            c: vec![1],
            scale_l: 1.0,
        })
    }

    /// Symmetric-only automaton (`A = 0`, `c ≡ 1`, `l = 1`).
    pub fn symmetric(s: Vec<Vec<i64>>) -> Result<Self> {
        let dim = s.len();
        Self::new(s, vec![vec![0; dim]; dim])
    }

    pub fn with_c(mut self, c: Vec<i64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidSpec("c must contain at least one entry".into()));
        }
        self.c = c;
        Ok(self)
    }

    pub fn with_scale(mut self, scale_l: f64) -> Result<Self> {
        if !(scale_l.is_finite() && scale_l > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "scale_l must be positive, got {scale_l}"
            )));
        }
        self.scale_l = scale_l;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> &[Vec<i64>] {
        &self.s
    }

    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn c(&self) -> &[i64] {
        &self.c
    }

    pub fn scale_l(&self) -> f64 {
        self.scale_l
    }

    /// `c_n`, with the list extended periodically in both directions.
    pub fn c_at(&self, tick: i64) -> i64 {
        let len = self.c.len() as i64;
        self.c[tick.rem_euclid(len) as usize]
    }

    /// True when `c` has a single entry.
    pub fn has_constant_c(&self) -> bool {
        self.c.iter().all(|&v| v == self.c[0])
    }

    /// `2H = S_ab (p_a p_b + x_a x_b) + 2 A_ab p_a x_b`, an exact integer.
    pub fn doubled_energy(&self, x: &[BigInt], p: &[BigInt]) -> BigInt {
        // Contract with the small matrices first so only 3n products are
        // between two large values.
        let mut acc = BigInt::zero();
        for i in 0..self.dim {
            let (mut sx, mut sp, mut ax) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
            for j in 0..self.dim {
                let (s, a) = (self.s[i][j], self.a[i][j]);
                if s != 0 {
                    sx += &x[j] * s;
                    sp += &p[j] * s;
                }
                if a != 0 {
                    ax += &x[j] * (2 * a);
                }
            }
            acc += &x[i] * sx + &p[i] * (sp + ax);
        }
        acc
    }
}

/// `Ĥ = S + iA`.
pub fn hamiltonian_matrix(spec: &AutomatonSpec) -> HermitianIntMatrix {
    let m = GaussianMatrix::from_parts(&spec.s, &spec.a).expect("validated shapes");
    HermitianIntMatrix::new(m).expect("S symmetric and A antisymmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::GaussianInt;

    fn raw(s: Vec<Vec<i64>>, a: Vec<Vec<i64>>) -> RawSpec {
        RawSpec {
            s,
            a,
            c: vec![1],
            scale_l: 1.0,
        }
    }

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re.into(), im.into())
    }

    #[test]
    fn accepts_symmetric_adjacency() {
        let spec = validate_spec(raw(vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 0]]));
        assert!(spec.is_ok());
    }

    #[test]
    fn rejects_non_symmetric_s() {
        let err =
            validate_spec(raw(vec![vec![0, 1], vec![2, 0]], vec![vec![0, 0], vec![0, 0]])).unwrap_err();
        assert!(err.to_string().contains("S not symmetric"), "{err}");
    }

    #[test]
    fn accepts_canonical_antisymmetric() {
        assert!(validate_spec(raw(vec![vec![0, 0], vec![0, 0]], vec![vec![0, 1], vec![-1, 0]])).is_ok());
    }

    #[test]
    fn rejects_bad_a_and_shapes() {
        let err = validate_spec(raw(vec![vec![1]], vec![vec![1]])).unwrap_err();
        assert!(err.to_string().contains("A not antisymmetric"));
        assert!(validate_spec(raw(vec![vec![0, 1]], vec![vec![0, 0]])).is_err());
        assert!(validate_spec(raw(vec![vec![1]], vec![vec![0], vec![0]])).is_err());
        assert!(validate_spec(raw(vec![], vec![])).is_err());
        let mut r = raw(vec![vec![1]], vec![vec![0]]);
        r.scale_l = 0.0;
        assert!(validate_spec(r).unwrap_err().to_string().contains("scale_l"));
        let mut r = raw(vec![vec![1]], vec![vec![0]]);
        r.scale_l = -1.0;
        assert!(validate_spec(r).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let h = hamiltonian_matrix(&AutomatonSpec::symmetric(vec![vec![1]]).unwrap());
        assert_eq!(h.get(0, 0), &gi(1, 0));

        let spec = AutomatonSpec::new(vec![vec![0, 0], vec![0, 0]], vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let h = hamiltonian_matrix(&spec);
        assert_eq!(h.get(0, 1), &gi(0, 1));
        assert_eq!(h.get(1, 0), &gi(0, -1));
        assert_eq!(h.get(0, 0), &gi(0, 0));

        let spec = AutomatonSpec::new(vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let h = hamiltonian_matrix(&spec);
        assert_eq!(h.get(0, 1), &gi(1, 1));
        assert_eq!(h.get(1, 0), &gi(1, -1));
    }

    #[test]
    fn c_is_periodic_in_both_directions() {
        let spec = AutomatonSpec::symmetric(vec![vec![1]]).unwrap().with_c(vec![1, 2, 3]).unwrap();
        assert_eq!(spec.c_at(0), 1);
        assert_eq!(spec.c_at(4), 2);
        assert_eq!(spec.c_at(-1), 3);
        assert!(!spec.has_constant_c());
    }

    #[test]
    fn doubled_energy_is_odd_for_odd_diagonal() {
        let spec = AutomatonSpec::symmetric(vec![vec![1]]).unwrap();
        let e = spec.doubled_energy(&[BigInt::from(1)], &[BigInt::from(0)]);
        assert_eq!(e, BigInt::from(1));
    }
}
