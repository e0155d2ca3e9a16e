//! Sparse multivariate polynomials with exact rational coefficients over the
//! automaton's dynamical variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Highest total degree accepted by the variational calculus.
pub const MAX_DEGREE: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    X,
    P,
    Tau,
    Pi,
}

impl VarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::X => "x",
            VarKind::P => "p",
            VarKind::Tau => "tau",
            VarKind::Pi => "pi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x" => Some(VarKind::X),
            "p" => Some(VarKind::P),
            "tau" => Some(VarKind::Tau),
            "pi" => Some(VarKind::Pi),
            _ => None,
        }
    }

    /// The conjugate partner in the `(X, P)` pairing.
    pub fn conjugate(self) -> Self {
        match self {
            VarKind::X => VarKind::P,
            VarKind::P => VarKind::X,
            VarKind::Tau => VarKind::Pi,
            VarKind::Pi => VarKind::Tau,
        }
    }

    pub fn is_coordinate(self) -> bool {
        matches!(self, VarKind::X | VarKind::Tau)
    }
}

/// One dynamical variable: kind, degree-of-freedom index and tick.
/// `τ` and `π` always carry index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub tick: i64,
    pub kind: VarKind,
    pub index: u32,
}

impl Var {
    pub fn x(index: u32, tick: i64) -> Self {
        Self { tick, kind: VarKind::X, index }
    }

    pub fn p(index: u32, tick: i64) -> Self {
        Self { tick, kind: VarKind::P, index }
    }

    pub fn tau(tick: i64) -> Self {
        Self { tick, kind: VarKind::Tau, index: 0 }
    }

    pub fn pi(tick: i64) -> Self {
        Self { tick, kind: VarKind::Pi, index: 0 }
    }

    pub fn conjugate(self) -> Self {
        Self {
            kind: self.kind.conjugate(),
            ..self
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::X | VarKind::P => write!(f, "{}{}_{}", self.kind.as_str(), self.index, self.tick),
            _ => write!(f, "{}_{}", self.kind.as_str(), self.tick),
        }
    }
}

/// Product of variable powers, kept sorted by variable with positive powers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn new(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, k) in factors {
            if k > 0 {
                *map.entry(v).or_default() += k;
            }
        }
        Self(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    pub fn power_of(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// This monomial with the power of `v` replaced by `k`.
    fn with_power(&self, v: Var, k: u32) -> Self {
        let mut out: Vec<(Var, u32)> = self.0.iter().copied().filter(|(w, _)| *w != v).collect();
        if k > 0 {
            out.push((v, k));
            out.sort();
        }
        Self(out)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(&other.0).copied())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, k)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial `Σ coeff · monomial` with no zero coefficients stored, so
/// equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::new([(v, 1)]), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Builds an integer-coefficient polynomial, rejecting degree above the cap.
    pub fn from_int_terms(terms: impl IntoIterator<Item = (i64, Monomial)>) -> Result<Self> {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(m, BigRational::from_integer(c.into()));
        }
        p.check_degree()?;
        Ok(p)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigRational, Monomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn check_degree(&self) -> Result<()> {
        match self.degree() {
            d if d > MAX_DEGREE => Err(Error::DegreeTooHigh(d)),
            _ => Ok(()),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Every variable occurring in some term.
    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        let mut seen: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        seen.sort();
        seen.dedup();
        seen.into_iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn eval(&self, value: impl Fn(&Var) -> BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, k) in &m.0 {
                let x = value(v);
                for _ in 0..*k {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Ordinary partial derivative with respect to `v`.
    pub fn partial(&self, v: &Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.power_of(v);
            if k > 0 {
                out.add_term(m.with_power(*v, k - 1), c * BigInt::from(k));
            }
        }
        out
    }

    /// Symmetric difference quotient `[g(v + δ) − g(v − δ)] / 2δ`, expanded
    /// symbolically: `v^k ↦ Σ_{j odd} C(k, j) v^{k−j} δ^{j−1}`.
    pub fn symmetric_difference(&self, v: &Var, delta: i64) -> Self {
        let d = BigInt::from(delta);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.power_of(v);
            let mut j = 1;
            while j <= k {
                let factor = binomial(k, j) * d.pow(j - 1);
                out.add_term(m.with_power(*v, k - j), c * factor);
                j += 2;
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
