//! Exact evolution of the discrete Hamilton equations.
//!
//! The automaton is a second-order recurrence, so a state is the pair of
//! adjacent ticks `(n − 1, n)`. With `ψ = x + ip` and `Ȯ_n = O_{n+1} − O_{n−1}`:
//!
//! ```text
//! ψ_{n+1}   = ψ_{n−1} − i c_n Ĥ ψ_n
//! τ_{n+1}   = τ_{n−1} + c_n
//! 2π_{n+1}  = 2π_{n−1} + 2H_{n+1} − 2H_{n−1}
//! ```
//!
//! `H_n` is half-integer when a diagonal entry of `S` is odd, so `H` and `π`
//! are carried doubled. Nothing here ever rounds.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::automaton::AutomatonSpec;
use crate::error::{Error, Result};
use crate::hermitian::{GaussianInt, HermitianIntMatrix};

/// Default cap on the bit length of any state component.
pub const DEFAULT_BITCAP: u64 = 1_000_000;

/// Full dynamical data at one tick.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TickState {
    pub tick: i64,
    pub x: Vec<BigInt>,
    pub p: Vec<BigInt>,
    pub tau: BigInt,
    /// `2π_n`.
    pub pi2: BigInt,
}

impl TickState {
    pub fn psi(&self) -> Vec<GaussianInt> {
        psi_of(&self.x, &self.p)
    }

    fn max_bits(&self) -> u64 {
        self.x
            .iter()
            .chain(&self.p)
            .chain([&self.tau, &self.pi2])
            .map(BigInt::bits)
            .max()
            .unwrap_or(0)
    }
}

/// State at ticks `n − 1` ("prev") and `n` ("curr").
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatePair {
    pub x_prev: Vec<BigInt>,
    pub p_prev: Vec<BigInt>,
    pub x_curr: Vec<BigInt>,
    pub p_curr: Vec<BigInt>,
    pub tau_prev: BigInt,
    pub tau_curr: BigInt,
    pub pi2_prev: BigInt,
    pub pi2_curr: BigInt,
    /// Index `n` of the "curr" slot.
    pub tick: i64,
}

impl StatePair {
    /// Pair with the given coordinates at ticks `(tick − 1, tick)` and zero
    /// `τ`, `π`.
    pub fn from_xp(
        x_prev: Vec<BigInt>,
        p_prev: Vec<BigInt>,
        x_curr: Vec<BigInt>,
        p_curr: Vec<BigInt>,
        tick: i64,
    ) -> Self {
        Self {
            x_prev,
            p_prev,
            x_curr,
            p_curr,
            tau_prev: BigInt::zero(),
            tau_curr: BigInt::zero(),
            pi2_prev: BigInt::zero(),
            pi2_curr: BigInt::zero(),
            tick,
        }
    }

    /// Pair built from Gaussian-integer amplitudes `ψ_{n−1}, ψ_n` given as
    /// `(re, im)` tuples, with `τ = π = 0` and `n = 0`.
    pub fn from_psi(prev: &[(i64, i64)], curr: &[(i64, i64)]) -> Self {
        let re = |v: &[(i64, i64)]| v.iter().map(|&(r, _)| BigInt::from(r)).collect();
        let im = |v: &[(i64, i64)]| v.iter().map(|&(_, i)| BigInt::from(i)).collect();
        Self::from_xp(re(prev), im(prev), re(curr), im(curr), 0)
    }

    pub fn from_ticks(prev: &TickState, curr: &TickState) -> Result<Self> {
        if curr.tick != prev.tick + 1 {
            return Err(Error::InvalidArgument(format!(
                "ticks {} and {} are not adjacent",
                prev.tick, curr.tick
            )));
        }
        if prev.x.len() != curr.x.len() || prev.p.len() != prev.x.len() || curr.p.len() != curr.x.len()
        {
            return Err(Error::DimensionMismatch {
                expected: prev.x.len(),
                got: curr.x.len(),
            });
        }
        Ok(Self {
            x_prev: prev.x.clone(),
            p_prev: prev.p.clone(),
            x_curr: curr.x.clone(),
            p_curr: curr.p.clone(),
            tau_prev: prev.tau.clone(),
            tau_curr: curr.tau.clone(),
            pi2_prev: prev.pi2.clone(),
            pi2_curr: curr.pi2.clone(),
            tick: curr.tick,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_curr.len()
    }

    pub fn prev(&self) -> TickState {
        TickState {
            tick: self.tick - 1,
            x: self.x_prev.clone(),
            p: self.p_prev.clone(),
            tau: self.tau_prev.clone(),
            pi2: self.pi2_prev.clone(),
        }
    }

    pub fn curr(&self) -> TickState {
        TickState {
            tick: self.tick,
            x: self.x_curr.clone(),
            p: self.p_curr.clone(),
            tau: self.tau_curr.clone(),
            pi2: self.pi2_curr.clone(),
        }
    }

    pub fn psi_prev(&self) -> Vec<GaussianInt> {
        psi_of(&self.x_prev, &self.p_prev)
    }

    pub fn psi_curr(&self) -> Vec<GaussianInt> {
        psi_of(&self.x_curr, &self.p_curr)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        for v in [&self.x_prev, &self.p_prev, &self.x_curr, &self.p_curr] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    fn same_xp(&self, other: &Self) -> bool {
        self.x_curr == other.x_curr
            && self.p_curr == other.p_curr
            && self.x_prev == other.x_prev
            && self.p_prev == other.p_prev
    }
}

fn psi_of(x: &[BigInt], p: &[BigInt]) -> Vec<GaussianInt> {
    x.iter()
        .zip(p)
        .map(|(a, b)| GaussianInt::new(a.clone(), b.clone()))
        .collect()
}

/// `(S·p + A·x, S·x − A·p)` scaled by `c`.
fn hamilton_rhs(spec: &AutomatonSpec, x: &[BigInt], p: &[BigInt], c: i64) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = spec.dim();
    let (s, a) = (spec.s(), spec.a());
    let mut dx = vec![BigInt::zero(); n];
    let mut dp = vec![BigInt::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let (sij, aij) = (s[i][j], a[i][j]);
            if sij != 0 {
                dx[i] += &p[j] * sij;
                dp[i] += &x[j] * sij;
            }
            if aij != 0 {
                dx[i] += &x[j] * aij;
                dp[i] -= &p[j] * aij;
            }
        }
        dx[i] *= c;
        dp[i] *= c;
    }
    (dx, dp)
}

/// Advances the pair from `(n − 1, n)` to `(n, n + 1)`.
pub fn step_forward(spec: &AutomatonSpec, s: &StatePair) -> StatePair {
    let h2_prev = spec.doubled_energy(&s.x_prev, &s.p_prev);
    forward_with(spec, s, &h2_prev).0
}

/// [`step_forward`] given `2H` at tick `n − 1`; also returns `2H` at `n + 1`.
fn forward_with(spec: &AutomatonSpec, s: &StatePair, h2_prev: &BigInt) -> (StatePair, BigInt) {
    let c = spec.c_at(s.tick);
    let (dx, dp) = hamilton_rhs(spec, &s.x_curr, &s.p_curr, c);
    let x_next: Vec<BigInt> = s.x_prev.iter().zip(dx).map(|(a, d)| a + d).collect();
    let p_next: Vec<BigInt> = s.p_prev.iter().zip(dp).map(|(a, d)| a - d).collect();
    let h2_next = spec.doubled_energy(&x_next, &p_next);
    let next = StatePair {
        x_prev: s.x_curr.clone(),
        p_prev: s.p_curr.clone(),
        x_curr: x_next,
        p_curr: p_next,
        tau_prev: s.tau_curr.clone(),
        tau_curr: &s.tau_prev + c,
        pi2_prev: s.pi2_curr.clone(),
        pi2_curr: &s.pi2_prev + &h2_next - h2_prev,
        tick: s.tick + 1,
    };
    (next, h2_next)
}

/// Inverse of [`step_forward`]: moves the pair from `(n − 1, n)` to `(n − 2, n − 1)`.
pub fn step_backward(spec: &AutomatonSpec, s: &StatePair) -> StatePair {
    let h2_curr = spec.doubled_energy(&s.x_curr, &s.p_curr);
    backward_with(spec, s, &h2_curr).0
}

/// [`step_backward`] given `2H` at tick `n`; also returns `2H` at `n − 2`.
fn backward_with(spec: &AutomatonSpec, s: &StatePair, h2_curr: &BigInt) -> (StatePair, BigInt) {
    let c = spec.c_at(s.tick - 1);
    let (dx, dp) = hamilton_rhs(spec, &s.x_prev, &s.p_prev, c);
    let x_before: Vec<BigInt> = s.x_curr.iter().zip(dx).map(|(a, d)| a - d).collect();
    let p_before: Vec<BigInt> = s.p_curr.iter().zip(dp).map(|(a, d)| a + d).collect();
    let h2_before = spec.doubled_energy(&x_before, &p_before);
    let before = StatePair {
        x_curr: s.x_prev.clone(),
        p_curr: s.p_prev.clone(),
        x_prev: x_before,
        p_prev: p_before,
        tau_curr: s.tau_prev.clone(),
        tau_prev: &s.tau_curr - c,
        pi2_curr: s.pi2_prev.clone(),
        pi2_prev: &s.pi2_curr - h2_curr + &h2_before,
        tick: s.tick - 1,
    };
    (before, h2_before)
}

/// Sequence of tick states in the order they were produced: the two
/// initial ticks first, then one new tick per step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<TickState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The pair formed by the last two produced ticks.
    pub fn last_pair(&self) -> Result<StatePair> {
        let n = self.states.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "trajectory needs at least two ticks".into(),
            ));
        }
        let (a, b) = (&self.states[n - 2], &self.states[n - 1]);
        if a.tick < b.tick {
            StatePair::from_ticks(a, b)
        } else {
            StatePair::from_ticks(b, a)
        }
    }

    /// States sorted by ascending tick.
    pub fn sorted(&self) -> Vec<TickState> {
        let mut v = self.states.clone();
        v.sort_by_key(|s| s.tick);
        v
    }

    /// Checks that every three consecutive ticks satisfy the recurrences.
    pub fn verify(&self, spec: &AutomatonSpec) -> bool {
        let sorted = self.sorted();
        if sorted.windows(2).any(|w| w[1].tick != w[0].tick + 1) {
            return false;
        }
        sorted.windows(3).all(|w| {
            let pair = match StatePair::from_ticks(&w[0], &w[1]) {
                Ok(p) => p,
                Err(_) => return false,
            };
            step_forward(spec, &pair).curr() == w[2]
        })
    }
}

/// Limits applied during evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolveConfig {
    pub bitcap: u64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            bitcap: DEFAULT_BITCAP,
        }
    }
}

/// Iterates `k` steps forward (`k < 0` runs backward) and records every tick.
pub fn evolve(spec: &AutomatonSpec, s: &StatePair, k: i64, cfg: &EvolveConfig) -> Result<Trajectory> {
    s.check_dim(spec.dim())?;
    let mut states = Vec::with_capacity(k.unsigned_abs() as usize + 2);
    states.push(s.prev());
    states.push(s.curr());
    for_each_step(spec, s, k, cfg, |pair, forward| {
        states.push(if forward { pair.curr() } else { pair.prev() });
    })?;
    Ok(Trajectory { states })
}

/// Like [`evolve`] but keeps only the final pair.
pub fn evolve_pair(spec: &AutomatonSpec, s: &StatePair, k: i64, cfg: &EvolveConfig) -> Result<StatePair> {
    s.check_dim(spec.dim())?;
    for_each_step(spec, s, k, cfg, |_, _| {})
}

/// Takes `|k|` steps (backward when `k < 0`), calling `visit` with each new
/// pair and the direction. Each tick's energy is computed once.
pub fn for_each_step(
    spec: &AutomatonSpec,
    s: &StatePair,
    k: i64,
    cfg: &EvolveConfig,
    mut visit: impl FnMut(&StatePair, bool),
) -> Result<StatePair> {
    s.check_dim(spec.dim())?;
    let forward = k >= 0;
    let mut cur = s.clone();
    // 2H at the tick that leaves the pair next and at the one that stays.
    let mut h2_old = spec.doubled_energy(&s.x_prev, &s.p_prev);
    let mut h2_kept = spec.doubled_energy(&s.x_curr, &s.p_curr);
    if !forward {
        std::mem::swap(&mut h2_old, &mut h2_kept);
    }
    for _ in 0..k.unsigned_abs() {
        let h2_new;
        (cur, h2_new) = if forward {
            forward_with(spec, &cur, &h2_old)
        } else {
            backward_with(spec, &cur, &h2_old)
        };
        h2_old = std::mem::replace(&mut h2_kept, h2_new);
        let fresh = if forward { cur.curr() } else { cur.prev() };
        let bits = fresh.max_bits();
        if bits > cfg.bitcap {
            return Err(Error::BitCapExceeded {
                bits,
                cap: cfg.bitcap,
                tick: fresh.tick,
            });
        }
        visit(&cur, forward);
    }
    Ok(cur)
}

/// Smallest `T ≥ 1` after which `(x, p)` at both ticks of the pair recur,
/// with `T` a multiple of the period of `c` so the increments also line up.
/// `τ` and `π` are ignored.
pub fn detect_period(spec: &AutomatonSpec, s: &StatePair, max_steps: u64) -> Option<u64> {
    let phase = spec.c().len() as u64;
    let mut cur = s.clone();
    for t in 1..=max_steps {
        cur = step_forward(spec, &cur);
        if t % phase == 0 && cur.same_xp(s) {
            return Some(t);
        }
    }
    None
}

/// `Q_G = 2·Re(ψ_{n−1}† G ψ_n)` for the pair at ticks `(n − 1, n)`.
pub fn two_point_invariant(g: &HermitianIntMatrix, s: &StatePair) -> Result<BigInt> {
    s.check_dim(g.dim())?;
    let a = s.psi_prev();
    let gb = g.matrix().apply(&s.psi_curr())?;
    // Re(conj(a)·b) = a.re·b.re + a.im·b.im
    let re: BigInt = a
        .iter()
        .zip(&gb)
        .map(|(ai, bi)| &ai.re * &bi.re + &ai.im * &bi.im)
        .sum();
    Ok(re * 2)
}

/// Values of `Q_G` along `steps` forward steps, starting with the initial pair.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries {
    /// `(n, Q_G)` where `n` is the "prev" tick of the pair.
    pub values: Vec<(i64, BigInt)>,
    /// First "prev" tick at which `Q_G` differs from its initial value.
    pub first_violation: Option<i64>,
}

impl InvariantSeries {
    pub fn is_constant(&self) -> bool {
        self.first_violation.is_none()
    }
}

pub fn invariant_series(
    spec: &AutomatonSpec,
    g: &HermitianIntMatrix,
    s: &StatePair,
    steps: i64,
    cfg: &EvolveConfig,
) -> Result<InvariantSeries> {
    s.check_dim(spec.dim())?;
    let q0 = two_point_invariant(g, s)?;
    let mut values = vec![(s.tick - 1, q0.clone())];
    let mut first_violation = None;
    let mut err = None;
    for_each_step(spec, s, steps, cfg, |pair, _| {
        if err.is_some() {
            return;
        }
        match two_point_invariant(g, pair) {
            Ok(q) => {
                if first_violation.is_none() && q != q0 {
                    first_violation = Some(pair.tick - 1);
                }
                values.push((pair.tick - 1, q));
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(InvariantSeries {
        values,
        first_violation,
    })
}

/// Largest absolute value among the `x`, `p` components of a tick.
pub fn max_abs_component(t: &TickState) -> BigInt {
    t.x.iter()
        .chain(&t.p)
        .map(|v| v.abs())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re.into(), im.into())
    }

    fn scalar(s: i64) -> AutomatonSpec {
        AutomatonSpec::symmetric(vec![vec![s]]).unwrap()
    }

    /// Independent scalar iteration of ψ_{n+1} = ψ_{n−1} − i·h·ψ_n on (re, im) pairs.
    fn scalar_oracle(h: i64, mut a: (i64, i64), mut b: (i64, i64), steps: usize) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for _ in 0..steps {
            // −i·h·(re + i·im) = h·im − i·h·re
            let next = (a.0 + h * b.1, a.1 - h * b.0);
            out.push(next);
            a = b;
            b = next;
        }
        out
    }

    #[test]
    fn worked_scalar_trajectory() {
        let oracle = scalar_oracle(1, (1, 0), (1, 0), 4);
        assert_eq!(oracle, vec![(1, -1), (0, -1), (0, -1), (-1, -1)]);

        let spec = scalar(1);
        let mut s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let expect = [gi(1, -1), gi(0, -1), gi(0, -1), gi(-1, -1)];
        for e in expect {
            s = step_forward(&spec, &s);
            assert_eq!(s.psi_curr(), vec![e]);
        }
    }

    #[test]
    fn tau_advances_by_c() {
        let spec = scalar(1);
        let mut s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let mut taus = Vec::new();
        for _ in 0..3 {
            s = step_forward(&spec, &s);
            taus.push(s.tau_curr.clone());
        }
        assert_eq!(taus, vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn zero_hamiltonian_decouples_ticks() {
        let spec = scalar(0);
        let s = StatePair::from_psi(&[(3, -2)], &[(5, 7)]);
        let next = step_forward(&spec, &s);
        assert_eq!(next.psi_curr(), s.psi_prev());
        let back = step_backward(&spec, &s);
        assert_eq!(back.psi_prev(), s.psi_curr());
        assert_eq!(back.psi_curr(), s.psi_prev());
    }

    #[test]
    fn backward_recovers_initial_tick() {
        let spec = scalar(1);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, -1)]);
        let back = step_backward(&spec, &s);
        assert_eq!(back.psi_prev(), vec![gi(1, 0)]);
        assert_eq!(back.tick, -1);
    }

    #[test]
    fn evolve_zero_steps() {
        let spec = scalar(1);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let traj = evolve(&spec, &s, 0, &EvolveConfig::default()).unwrap();
        assert_eq!(traj.len(), 2);
        assert_eq!(traj.last_pair().unwrap(), s);
    }

    #[test]
    fn evolve_twelve_returns_to_start() {
        let spec = scalar(1);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let traj = evolve(&spec, &s, 12, &EvolveConfig::default()).unwrap();
        let last = traj.last_pair().unwrap();
        assert_eq!(last.psi_prev(), vec![gi(1, 0)]);
        assert_eq!(last.psi_curr(), vec![gi(1, 0)]);
        assert_eq!(last.tick, 12);
        assert!(traj.verify(&spec));
    }

    #[test]
    fn backward_evolution_orders_and_inverts() {
        let spec = AutomatonSpec::new(vec![vec![1, 1], vec![1, -1]], vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let s = StatePair::from_psi(&[(1, 2), (0, -1)], &[(3, 0), (2, 2)]);
        let back = evolve(&spec, &s, -5, &EvolveConfig::default()).unwrap();
        assert_eq!(back.states.last().unwrap().tick, -6);
        assert!(back.verify(&spec));
        let pair = back.last_pair().unwrap();
        let fwd = evolve_pair(&spec, &pair, 5, &EvolveConfig::default()).unwrap();
        assert_eq!(fwd, s);
    }

    #[test]
    fn growth_regime_is_exponential() {
        let spec = scalar(3);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let traj = evolve(&spec, &s, 64, &EvolveConfig::default()).unwrap();
        let maxes: Vec<BigInt> = traj.states.iter().map(max_abs_component).collect();
        for w in maxes[1..].windows(2) {
            assert!(w[1] > w[0], "{:?} not increasing", w);
        }
        assert!(maxes.last().unwrap().bits() > 60);
    }

    #[test]
    fn bitcap_aborts() {
        let spec = scalar(3);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let err = evolve(&spec, &s, 200, &EvolveConfig { bitcap: 32 }).unwrap_err();
        assert!(matches!(err, Error::BitCapExceeded { cap: 32, .. }));
    }

    #[test]
    fn periods() {
        let spec = scalar(1);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        assert_eq!(detect_period(&spec, &s, 100), Some(12));

        let spec0 = scalar(0);
        assert_eq!(detect_period(&spec0, &StatePair::from_psi(&[(2, 1)], &[(2, 1)]), 10), Some(1));
        assert_eq!(detect_period(&spec0, &StatePair::from_psi(&[(2, 1)], &[(0, 1)]), 10), Some(2));

        assert_eq!(detect_period(&scalar(3), &s, 50), None);
    }

    #[test]
    fn path_two_period_divides_twelve() {
        let spec = AutomatonSpec::symmetric(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let s = StatePair::from_psi(&[(1, 0), (0, 0)], &[(1, 0), (0, 0)]);
        // oracle: direct iteration until the pair recurs
        let mut cur = s.clone();
        let mut t = 0;
        loop {
            cur = step_forward(&spec, &cur);
            t += 1;
            if cur.psi_prev() == s.psi_prev() && cur.psi_curr() == s.psi_curr() {
                break;
            }
        }
        let period = detect_period(&spec, &s, 1000).unwrap();
        assert_eq!(period, t);
        assert_eq!(12 % period, 0);
    }

    #[test]
    fn period_respects_c_phase() {
        let spec = scalar(0).with_c(vec![1, 2]).unwrap();
        let s = StatePair::from_psi(&[(2, 1)], &[(2, 1)]);
        assert_eq!(detect_period(&spec, &s, 10), Some(2));
    }

    #[test]
    fn identity_invariant_examples() {
        let spec = scalar(1);
        let g = HermitianIntMatrix::identity(1);
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        assert_eq!(two_point_invariant(&g, &s).unwrap(), BigInt::from(2));
        let s1 = step_forward(&spec, &s);
        assert_eq!(two_point_invariant(&g, &s1).unwrap(), BigInt::from(2));
        let series = invariant_series(&spec, &g, &s, 1000, &EvolveConfig::default()).unwrap();
        assert!(series.is_constant());
        assert_eq!(series.values.len(), 1001);
    }

    #[test]
    fn non_commuting_observable_changes() {
        let spec = AutomatonSpec::symmetric(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let g = HermitianIntMatrix::from_parts(&[vec![1, 0], vec![0, 0]], &[vec![0, 0], vec![0, 0]]).unwrap();
        let s = StatePair::from_psi(&[(1, 0), (0, 0)], &[(1, 0), (0, 0)]);
        let series = invariant_series(&spec, &g, &s, 20, &EvolveConfig::default()).unwrap();
        assert!(!series.is_constant());
        assert!(two_point_invariant(&g, &StatePair::from_psi(&[(1, 0)], &[(1, 0)])).is_err());
    }

    #[test]
    fn parity_chains_of_pi_minus_h() {
        let spec = AutomatonSpec::new(vec![vec![1, 1], vec![1, 0]], vec![vec![0, -1], vec![1, 0]]).unwrap();
        let s = StatePair::from_psi(&[(1, 0), (2, -1)], &[(0, 1), (1, 1)]);
        let traj = evolve(&spec, &s, 40, &EvolveConfig::default()).unwrap();
        let sorted = traj.sorted();
        for w in sorted.windows(3) {
            let d0 = &w[0].pi2 - spec.doubled_energy(&w[0].x, &w[0].p);
            let d2 = &w[2].pi2 - spec.doubled_energy(&w[2].x, &w[2].p);
            assert_eq!(d0, d2);
        }
    }
}
