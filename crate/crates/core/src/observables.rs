//! Integer variational calculus, the Poisson bracket built on it, and the
//! algebra of quadratic observables `ψ†Gψ/2`.
//!
//! The variational derivative of `g` in `f` with integer step `δ` is the
//! symmetric difference quotient `[g(f + δ) − g(f − δ)] / 2δ`. On polynomials
//! of degree at most two it coincides with the ordinary partial derivative;
//! a cube picks up `δ²`, which is what breaks closure beyond quadratics.
//!
//! The bracket is `{A, B} = Σ (δ_X A · δ_P B − δ_X B · δ_P A)` summed over
//! the conjugate pairs `(x^α_n, p^α_n)` and `(τ_n, π_n)`. With that sign the
//! flow of a linear amplitude is `ψ̇_n = τ̇_n {ψ_n, ℋ}`, and on quadratic
//! forms `{Q_{G1}, Q_{G2}} = Q_K` with `K = −i[G1, G2]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::automaton::{hamiltonian_matrix, AutomatonSpec};
use crate::dynamics::{step_forward, StatePair};
use crate::error::{Error, Result};
use crate::hermitian::{GaussianInt, HermitianIntMatrix};
use crate::polynomial::{Monomial, Polynomial, Var, VarKind};

/// Integer step sizes for the variables being varied.
///
/// A variable with no step (neither an explicit entry nor a default) is not
/// varied and its variational derivative is identically zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VariationChoice {
    default: Option<i64>,
    steps: BTreeMap<Var, i64>,
}

impl VariationChoice {
    /// The same step `δ` for every variable.
    pub fn uniform(delta: i64) -> Result<Self> {
        nonzero(delta)?;
        Ok(Self {
            default: Some(delta),
            steps: BTreeMap::new(),
        })
    }

    /// Steps only for the listed variables.
    pub fn explicit(steps: impl IntoIterator<Item = (Var, i64)>) -> Result<Self> {
        let steps: BTreeMap<Var, i64> = steps.into_iter().collect();
        for &d in steps.values() {
            nonzero(d)?;
        }
        Ok(Self {
            default: None,
            steps,
        })
    }

    pub fn with(mut self, v: Var, delta: i64) -> Result<Self> {
        nonzero(delta)?;
        self.steps.insert(v, delta);
        Ok(self)
    }

    pub fn step(&self, v: &Var) -> Option<i64> {
        self.steps.get(v).copied().or(self.default)
    }
}

fn nonzero(delta: i64) -> Result<()> {
    if delta == 0 {
        return Err(Error::InvalidVariation(
            "variation steps must be nonzero; omit the variable instead".into(),
        ));
    }
    Ok(())
}

/// `δ_f g` for the step assigned to `f` in `choice`.
pub fn var_derivative(g: &Polynomial, f: &Var, choice: &VariationChoice) -> Result<Polynomial> {
    g.check_degree()?;
    Ok(match choice.step(f) {
        Some(delta) => g.symmetric_difference(f, delta),
        None => Polynomial::zero(),
    })
}

/// Outcome of a variational bracket evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketResult {
    pub value: Polynomial,
    /// True when the value differs from the `δ → 0` limit, i.e. the result
    /// depends on the chosen integer steps.
    pub delta_dependent: bool,
}

/// Conjugate pairs `(X, P)` touched by either polynomial.
fn conjugate_pairs(a: &Polynomial, b: &Polynomial) -> Vec<(Var, Var)> {
    let mut pairs: Vec<(Var, Var)> = a
        .variables()
        .chain(b.variables())
        .map(|v| if v.kind.is_coordinate() { (v, v.conjugate()) } else { (v.conjugate(), v) })
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

fn bracket_with(a: &Polynomial, b: &Polynomial, d: impl Fn(&Polynomial, &Var) -> Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (x, p) in conjugate_pairs(a, b) {
        let t1 = &d(a, &x) * &d(b, &p);
        let t2 = &d(b, &x) * &d(a, &p);
        out = &out + &(&t1 - &t2);
    }
    out
}

/// `{A, B}` with variational derivatives taken at the steps in `choice`.
pub fn poisson_bracket_variational(
    a: &Polynomial,
    b: &Polynomial,
    choice: &VariationChoice,
) -> Result<BracketResult> {
    a.check_degree()?;
    b.check_degree()?;
    let value = bracket_with(a, b, |g, v| match choice.step(v) {
        Some(delta) => g.symmetric_difference(v, delta),
        None => Polynomial::zero(),
    });
    let limit = bracket_with(a, b, |g, v| match choice.step(v) {
        Some(_) => g.partial(v),
        None => Polynomial::zero(),
    });
    let delta_dependent = value != limit;
    Ok(BracketResult {
        value,
        delta_dependent,
    })
}

/// The quadratic form `ψ_n†Gψ_n/2` over the variables of tick `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticObservable {
    pub g: HermitianIntMatrix,
    pub tick: i64,
}

impl QuadraticObservable {
    pub fn new(g: HermitianIntMatrix, tick: i64) -> Self {
        Self { g, tick }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Expansion `½ G_S(x x + p p) + G_A p x` with `G = G_S + iG_A`.
    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.dim();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut out = Polynomial::zero();
        for a in 0..n {
            for b in 0..n {
                let e = self.g.get(a, b);
                let (xa, xb) = (Var::x(a as u32, self.tick), Var::x(b as u32, self.tick));
                let (pa, pb) = (Var::p(a as u32, self.tick), Var::p(b as u32, self.tick));
                if !e.re.is_zero() {
                    let c = &half * BigRational::from_integer(e.re.clone());
                    out.add_term(Monomial::new([(xa, 1), (xb, 1)]), c.clone());
                    out.add_term(Monomial::new([(pa, 1), (pb, 1)]), c);
                }
                if !e.im.is_zero() {
                    out.add_term(
                        Monomial::new([(pa, 1), (xb, 1)]),
                        BigRational::from_integer(e.im.clone()),
                    );
                }
            }
        }
        out
    }
}

/// `{Q_{G1}, Q_{G2}} = Q_K` with `K = −i[G1, G2]`. Forms at different ticks
/// share no variables and bracket to zero.
pub fn bracket_closed_form(g1: &QuadraticObservable, g2: &QuadraticObservable) -> Result<QuadraticObservable> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            got: g2.dim(),
        });
    }
    if g1.tick != g2.tick {
        return Ok(QuadraticObservable::new(HermitianIntMatrix::zeros(g1.dim()), g1.tick));
    }
    let comm = g1.g.matrix().commutator(g2.g.matrix())?;
    let minus_i = GaussianInt::new(BigInt::zero(), BigInt::from(-1));
    let k = HermitianIntMatrix::new(comm.scale(&minus_i))
        .map_err(|_| Error::Internal("commutator of Hermitian matrices not anti-Hermitian".into()))?;
    Ok(QuadraticObservable::new(k, g1.tick))
}

/// `ψ†Gψ/2` for `ψ = x + ip`, exact with denominator dividing 2.
pub fn quadratic_form_value(g: &QuadraticObservable, x: &[BigInt], p: &[BigInt]) -> Result<BigRational> {
    let n = g.dim();
    for v in [x, p] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let psi: Vec<GaussianInt> = x
        .iter()
        .zip(p)
        .map(|(a, b)| Complex::new(a.clone(), b.clone()))
        .collect();
    let g_psi = g.g.matrix().apply(&psi)?;
    let mut total = GaussianInt::zero();
    for (a, b) in psi.iter().zip(&g_psi) {
        total += a.conj() * b;
    }
    if !total.im.is_zero() {
        return Err(Error::Internal("quadratic form of a Hermitian matrix not real".into()));
    }
    Ok(BigRational::new(total.re, BigInt::from(2)))
}

/// Per-component comparison made by [`hamiltonian_flow_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowComponent {
    pub index: usize,
    /// `c_n · {ψ^α_n, ℋ}` evaluated on the state, as `(re, im)`.
    pub bracket: (BigRational, BigRational),
    /// `ψ^α_{n+1} − ψ^α_{n−1}` from the stepper.
    pub discrete: (BigRational, BigRational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub components: Vec<FlowComponent>,
    pub pass: bool,
}

/// Checks `ψ̇_n = τ̇_n {ψ_n, ℋ}` against the stepper, with the bracket taken
/// variationally at each of the steps `δ ∈ {1, 2, 3}`.
pub fn hamiltonian_flow_check(spec: &AutomatonSpec, s: &StatePair) -> Result<FlowReport> {
    s.check_dim(spec.dim())?;
    let n = s.tick;
    let energy = QuadraticObservable::new(hamiltonian_matrix(spec), n).to_polynomial();
    let next = step_forward(spec, s);
    let c = BigRational::from_integer(spec.c_at(n).into());
    let value = |v: &Var| -> BigRational {
        let i = v.index as usize;
        let z = match (v.kind, v.tick == n) {
            (VarKind::X, true) => s.x_curr[i].clone(),
            (VarKind::P, true) => s.p_curr[i].clone(),
            _ => BigInt::zero(),
        };
        BigRational::from_integer(z)
    };
    let mut components = Vec::with_capacity(spec.dim());
    let mut pass = true;
    for alpha in 0..spec.dim() {
        let discrete = (
            BigRational::from_integer(&next.x_curr[alpha] - &s.x_prev[alpha]),
            BigRational::from_integer(&next.p_curr[alpha] - &s.p_prev[alpha]),
        );
        let mut first = None;
        for delta in [1, 2, 3] {
            let choice = VariationChoice::uniform(delta)?;
            let bx = poisson_bracket_variational(&Polynomial::var(Var::x(alpha as u32, n)), &energy, &choice)?;
            let bp = poisson_bracket_variational(&Polynomial::var(Var::p(alpha as u32, n)), &energy, &choice)?;
            let bracket = (&c * bx.value.eval(value), &c * bp.value.eval(value));
            pass &= bracket == discrete && !bx.delta_dependent && !bp.delta_dependent;
            first.get_or_insert(bracket);
        }
        components.push(FlowComponent {
            index: alpha,
            bracket: first.expect("at least one step"),
            discrete,
        });
    }
    Ok(FlowReport { components, pass })
}
