//! The automaton action and its stationarity under integer variations.
//!
//! Over a window of ticks `n0..=n1` the action is
//!
//! ```text
//! 𝒮 = Σ_{n=n0+1}^{n1} [ (p_n + p_{n−1})·Δx_n + (π_n + π_{n−1}) Δτ_n
//!                        − Δτ_n (H_n + H_{n−1}) − c_n π_n ]
//! ```
//!
//! and is stored doubled so that half-integer `H_n` and `π_n` stay exact.
//! Edge ticks are held fixed; only interior ticks are varied.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::automaton::AutomatonSpec;
use crate::dynamics::{StatePair, TickState, Trajectory};
use crate::error::{Error, Result};
use crate::polynomial::{Var, VarKind};

/// Contiguous run of tick states, ascending, at least three long.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryWindow {
    ticks: Vec<TickState>,
}

impl TrajectoryWindow {
    pub fn new(mut ticks: Vec<TickState>) -> Result<Self> {
        ticks.sort_by_key(|t| t.tick);
        if ticks.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "window needs at least 3 ticks, got {}",
                ticks.len()
            )));
        }
        if ticks.windows(2).any(|w| w[1].tick != w[0].tick + 1) {
            return Err(Error::InvalidArgument("window ticks are not contiguous".into()));
        }
        let dim = ticks[0].x.len();
        if ticks.iter().any(|t| t.x.len() != dim || t.p.len() != dim) {
            return Err(Error::InvalidArgument("window ticks differ in dimension".into()));
        }
        Ok(Self { ticks })
    }

    pub fn from_trajectory(t: &Trajectory) -> Result<Self> {
        Self::new(t.states.clone())
    }

    /// A window of all-zero ticks starting at `n0`.
    pub fn zeros(dim: usize, n0: i64, len: usize) -> Result<Self> {
        Self::new(
            (0..len as i64)
                .map(|k| TickState {
                    tick: n0 + k,
                    x: vec![BigInt::zero(); dim],
                    p: vec![BigInt::zero(); dim],
                    tau: BigInt::zero(),
                    pi2: BigInt::zero(),
                })
                .collect(),
        )
    }

    pub fn ticks(&self) -> &[TickState] {
        &self.ticks
    }

    pub fn ticks_mut(&mut self) -> &mut [TickState] {
        &mut self.ticks
    }

    pub fn first_tick(&self) -> i64 {
        self.ticks[0].tick
    }

    pub fn last_tick(&self) -> i64 {
        self.ticks[self.ticks.len() - 1].tick
    }

    pub fn dim(&self) -> usize {
        self.ticks[0].x.len()
    }

    fn index_of(&self, tick: i64) -> usize {
        (tick - self.first_tick()) as usize
    }
}

/// Doubled action `2𝒮`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionValue(pub BigInt);

impl ActionValue {
    /// `𝒮` itself, with denominator dividing 2.
    pub fn action(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::from(2))
    }
}

/// Twice the summand of the action that couples ticks `n − 1` and `n`.
fn doubled_term(spec: &AutomatonSpec, prev: &TickState, curr: &TickState) -> BigInt {
    let mut kinetic = BigInt::zero();
    for a in 0..prev.x.len() {
        kinetic += (&curr.p[a] + &prev.p[a]) * (&curr.x[a] - &prev.x[a]);
    }
    let dtau = &curr.tau - &prev.tau;
    let h2 = spec.doubled_energy(&curr.x, &curr.p) + spec.doubled_energy(&prev.x, &prev.p);
    kinetic * 2 + (&curr.pi2 + &prev.pi2) * &dtau - dtau * h2 - &curr.pi2 * spec.c_at(curr.tick)
}

pub fn action_value(spec: &AutomatonSpec, w: &TrajectoryWindow) -> ActionValue {
    ActionValue(
        w.ticks
            .windows(2)
            .map(|p| doubled_term(spec, &p[0], &p[1]))
            .sum(),
    )
}

/// Shifts the variable `v` of a tick by `amount` (in units of the variable,
/// so `π` moves its doubled value by `2·amount`).
fn shift(t: &mut TickState, v: &Var, amount: i64) {
    let i = v.index as usize;
    match v.kind {
        VarKind::X => t.x[i] += amount,
        VarKind::P => t.p[i] += amount,
        VarKind::Tau => t.tau += amount,
        VarKind::Pi => t.pi2 += 2 * amount,
    }
}

/// `δ_v 𝒮` for an interior variable: the symmetric difference quotient of
/// the terms that contain `v`.
fn action_derivative(spec: &AutomatonSpec, w: &TrajectoryWindow, v: &Var, delta: i64) -> BigRational {
    let m = w.index_of(v.tick);
    let (before, after) = (&w.ticks[m - 1], &w.ticks[m + 1]);
    let local = |amount: i64| {
        let mut t = w.ticks[m].clone();
        shift(&mut t, v, amount);
        doubled_term(spec, before, &t) + doubled_term(spec, &t, after)
    };
    // (2𝒮(v+δ) − 2𝒮(v−δ)) / 2δ, halved back to 𝒮
    BigRational::new(local(delta) - local(-delta), BigInt::from(4 * delta))
}

fn tick_vars(dim: usize, tick: i64) -> impl Iterator<Item = Var> {
    (0..dim as u32)
        .flat_map(move |a| [Var::x(a, tick), Var::p(a, tick)])
        .chain([Var::tau(tick), Var::pi(tick)])
}

/// One nonvanishing variational derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub var: Var,
    pub delta: i64,
    pub derivative: BigRational,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StationarityReport {
    pub violations: Vec<Violation>,
}

impl StationarityReport {
    pub fn is_stationary(&self) -> bool {
        self.violations.is_empty()
    }

    /// Ticks that carry at least one violation, ascending and deduplicated.
    pub fn ticks(&self) -> Vec<i64> {
        let mut t: Vec<i64> = self.violations.iter().map(|v| v.var.tick).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// Lists every interior variable and step for which `δ𝒮 ≠ 0`.
pub fn stationarity_check(spec: &AutomatonSpec, w: &TrajectoryWindow, deltas: &[i64]) -> Result<StationarityReport> {
    if deltas.is_empty() {
        return Err(Error::InvalidVariation("delta list is empty".into()));
    }
    if deltas.contains(&0) {
        return Err(Error::InvalidVariation("variation steps must be nonzero".into()));
    }
    if w.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: w.dim(),
        });
    }
    let mut violations = Vec::new();
    for tick in w.first_tick() + 1..w.last_tick() {
        for v in tick_vars(spec.dim(), tick) {
            for &delta in deltas {
                let d = action_derivative(spec, w, &v, delta);
                if !d.is_zero() {
                    violations.push(Violation {
                        var: v,
                        delta,
                        derivative: d,
                    });
                }
            }
        }
    }
    Ok(StationarityReport { violations })
}

/// Brute-force solver: finds the next tick by searching integer candidates
/// with `|component| ≤ bound` for the values that make every variational
/// derivative at the (now interior) current tick vanish.
///
/// Each stationarity condition at tick `n` involves exactly one unknown of
/// tick `n + 1` once `τ_{n+1}` is fixed (`δ/δπ_n` sees only `τ_{n+1}`,
/// `δ/δp^α_n` only `x^α_{n+1}`, `δ/δx^α_n` only `p^α_{n+1}`, `δ/δτ_n` adds
/// `π_{n+1}`), so the product search factors into one scan per unknown.
/// The assembled candidate is then re-checked against all conditions.
pub fn eom_from_stationarity_oracle(spec: &AutomatonSpec, boundary: &StatePair, bound: i64) -> Result<TickState> {
    boundary.check_dim(spec.dim())?;
    if bound <= 0 {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    let dim = spec.dim();
    let n = boundary.tick;
    let mut w = TrajectoryWindow::new(vec![
        boundary.prev(),
        boundary.curr(),
        TickState {
            tick: n + 1,
            x: vec![BigInt::zero(); dim],
            p: vec![BigInt::zero(); dim],
            tau: BigInt::zero(),
            pi2: BigInt::zero(),
        },
    ])?;

    let solve = |w: &mut TrajectoryWindow, unknown: Var, condition: Var, range: (i64, i64), what: &str| -> Result<()> {
        let mut found = Vec::new();
        for cand in range.0..=range.1 {
            set(&mut w.ticks[2], &unknown, cand);
            if action_derivative(spec, w, &condition, 1).is_zero() {
                found.push(cand);
            }
        }
        match found.as_slice() {
            [] => Err(Error::NoSolutionInBound(bound)),
            [v] => {
                set(&mut w.ticks[2], &unknown, *v);
                Ok(())
            }
            _ => Err(Error::NonUnique(format!("{what}: candidates {found:?}"))),
        }
    };

    solve(&mut w, Var::tau(n + 1), Var::pi(n), (-bound, bound), "tau")?;
    for a in 0..dim as u32 {
        solve(&mut w, Var::x(a, n + 1), Var::p(a, n), (-bound, bound), "x")?;
        solve(&mut w, Var::p(a, n + 1), Var::x(a, n), (-bound, bound), "p")?;
    }
    // doubled π ranges over half-integers of |π| ≤ bound
    solve(&mut w, Var::pi(n + 1), Var::tau(n), (-2 * bound, 2 * bound), "pi")?;

    let report = stationarity_check(spec, &w, &[1, 2])?;
    if !report.is_stationary() {
        return Err(Error::Internal(format!(
            "assembled oracle solution not stationary: {:?}",
            report.violations
        )));
    }
    Ok(w.ticks[2].clone())
}

/// Writes a candidate value; for `π` the value is the doubled `2π`.
fn set(t: &mut TickState, v: &Var, value: i64) {
    let i = v.index as usize;
    match v.kind {
        VarKind::X => t.x[i] = value.into(),
        VarKind::P => t.p[i] = value.into(),
        VarKind::Tau => t.tau = value.into(),
        VarKind::Pi => t.pi2 = value.into(),
    }
}
