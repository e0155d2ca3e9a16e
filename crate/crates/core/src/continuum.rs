//! Map from the automaton to band-limited continuum wavefunctions and the
//! modified dispersion relation of its stationary states.
//!
//! Samples `ψ_n` sit at `t_n = n·l`; the bandwidth is `ω_max = π/l`, so the
//! reconstruction kernel is `sinc(π(t − t_n)/l)`. Under this map the
//! recurrence `ψ_{n+1} − ψ_{n−1} = −iĤψ_n` becomes
//! `2 sinh(l∂_t) ψ(t) = −iĤ ψ(t)`, and a stationary state `e^{−iEt}` of an
//! eigenvalue `ε` of `Ĥ` needs `sin(E·l) = ε/2`.
//!
//! Everything here is `f64`; the discrete side stays exact until the
//! samples are handed over.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::automaton::{hamiltonian_matrix, AutomatonSpec};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::hermitian::{GaussianInt, HermitianIntMatrix};

/// Gaussian-integer samples at consecutive ticks starting at `first_tick`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    first_tick: i64,
    samples: Vec<Vec<GaussianInt>>,
    scale_l: f64,
    /// When set, the first `period` samples are repeated in both directions.
    period: Option<usize>,
}

impl SampledWavefunction {
    pub fn new(first_tick: i64, samples: Vec<Vec<GaussianInt>>, scale_l: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let dim = samples[0].len();
        if samples.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidArgument("samples differ in dimension".into()));
        }
        if !(scale_l.is_finite() && scale_l > 0.0) {
            return Err(Error::InvalidArgument(format!("scale_l must be positive, got {scale_l}")));
        }
        Ok(Self {
            first_tick,
            samples,
            scale_l,
            period: None,
        })
    }

    pub fn from_trajectory(t: &Trajectory, scale_l: f64) -> Result<Self> {
        let sorted = t.sorted();
        let first = sorted.first().ok_or(Error::EmptySamples)?.tick;
        Self::new(first, sorted.iter().map(|s| s.psi()).collect(), scale_l)
    }

    /// Extends the first `period` samples periodically.
    pub fn periodic(mut self, period: usize) -> Result<Self> {
        if period == 0 || period > self.samples.len() {
            return Err(Error::InvalidArgument(format!(
                "period {period} not in 1..={}",
                self.samples.len()
            )));
        }
        self.period = Some(period);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    pub fn scale_l(&self) -> f64 {
        self.scale_l
    }

    /// `ω_max = π/l`.
    pub fn omega_max(&self) -> f64 {
        PI / self.scale_l
    }

    pub fn first_tick(&self) -> i64 {
        self.first_tick
    }

    pub fn last_tick(&self) -> i64 {
        self.first_tick + self.samples.len() as i64 - 1
    }

    /// Sample at tick `n`, or `None` outside the data when not periodic.
    pub fn sample(&self, n: i64) -> Option<&[GaussianInt]> {
        let offset = n - self.first_tick;
        match self.period {
            Some(p) => Some(&self.samples[offset.rem_euclid(p as i64) as usize]),
            None if (0..self.samples.len() as i64).contains(&offset) => Some(&self.samples[offset as usize]),
            None => None,
        }
    }
}

fn to_c64(z: &GaussianInt) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Value of the band-limited interpolant at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub value: Vec<Complex64>,
    /// Bound on the norm of the omitted part of the sinc series.
    pub tail_bound: f64,
    /// The window was clipped by the ends of a non-periodic sample set.
    pub truncated: bool,
    /// The exact sample when `t` falls on a node.
    pub node: Option<Vec<GaussianInt>>,
}

/// Offsets closer than this (in ticks) to an integer are treated as nodes.
const NODE_EPS: f64 = 1e-12;

/// Node range `[k − window + 1, k + window]` around `u = t/l`, clipped to
/// the data when not periodic.
fn node_range(w: &SampledWavefunction, u: f64, window: usize) -> (i64, i64, bool) {
    let k = u.floor() as i64;
    let (mut lo, mut hi) = (k - window as i64 + 1, k + window as i64);
    let mut truncated = false;
    if w.period.is_none() {
        if lo < w.first_tick {
            lo = w.first_tick;
            truncated = true;
        }
        if hi > w.last_tick() {
            hi = w.last_tick();
            truncated = true;
        }
    }
    (lo, hi, truncated)
}

fn node_at(u: f64) -> Option<i64> {
    let k = u.floor();
    let frac = u - k;
    if frac < NODE_EPS {
        Some(k as i64)
    } else if 1.0 - frac < NODE_EPS {
        Some(k as i64 + 1)
    } else {
        None
    }
}

/// Sinc series over nodes `lo..=hi` at an off-node `u`, with the bound on
/// what the omitted nodes contribute.
fn sinc_series(w: &SampledWavefunction, u: f64, lo: i64, hi: i64) -> (Vec<Complex64>, f64) {
    let k = u.floor() as i64;
    // sin(π(u − n)) = (−1)^{k+n} sin(π·frac)
    let s = (PI * (u - k as f64)).sin();
    let mut value = vec![Complex64::new(0.0, 0.0); w.dim()];
    for n in lo..=hi {
        let Some(sample) = w.sample(n) else { continue };
        let sign = if (k + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let kern = sign * s / (PI * (u - n as f64));
        for (acc, z) in value.iter_mut().zip(sample) {
            *acc += to_c64(z) * kern;
        }
    }
    let tail = match w.period {
        None => {
            let mut tail = 0.0;
            for n in (w.first_tick..lo).chain(hi + 1..=w.last_tick()) {
                let sample: Vec<Complex64> = w.sample(n).expect("in range").iter().map(to_c64).collect();
                tail += norm(&sample) / (PI * (u - n as f64).abs());
            }
            tail
        }
        Some(p) => periodic_tail(w, p, k, lo, hi, u, s),
    };
    (value, tail)
}

/// Truncated sinc series over the `window` nodes on each side of `t`.
pub fn reconstruct(w: &SampledWavefunction, t: f64, window: usize) -> Result<Reconstruction> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let u = t / w.scale_l;
    if let Some(n) = node_at(u) {
        // kernel is 1 at its own node and 0 at every other node
        let (node, truncated) = match w.sample(n) {
            Some(s) => (s.to_vec(), false),
            None => (vec![GaussianInt::default(); w.dim()], true),
        };
        return Ok(Reconstruction {
            value: node.iter().map(to_c64).collect(),
            tail_bound: 0.0,
            truncated,
            node: Some(node),
        });
    }
    let (lo, hi, truncated) = node_range(w, u, window);
    let (value, tail_bound) = sinc_series(w, u, lo, hi);
    Ok(Reconstruction {
        value,
        tail_bound,
        truncated,
        node: None,
    })
}

/// Abel-summation bound on the infinite omitted tails of a periodic sample
/// sequence. With `h_n = (−1)^n ψ_n` split into its mean and a zero-mean
/// part, the zero-mean part contributes at most `B/(π d)` per side (`B` the
/// spread of its partial sums, `d` the distance to the first omitted node)
/// and the two mean tails cancel up to `|mean|·|b − a|/(π·min(a, b))`.
fn periodic_tail(w: &SampledWavefunction, p: usize, k: i64, lo: i64, hi: i64, u: f64, s: f64) -> f64 {
    let span = if p.is_multiple_of(2) { p } else { 2 * p };
    let start = w.first_tick;
    let dim = w.dim();
    let h = |n: i64, a: usize| -> Complex64 {
        let sign = if (k + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        to_c64(&w.sample(n).expect("periodic")[a]) * sign
    };
    let a_dist = u - lo as f64;
    let b_dist = hi as f64 - u;
    let mut total_sq = 0.0;
    for a in 0..dim {
        let mean: Complex64 = (0..span as i64).map(|j| h(start + j, a)).sum::<Complex64>() / span as f64;
        let mut partial = Complex64::new(0.0, 0.0);
        let mut spread: f64 = 0.0;
        let mut prefixes = vec![partial];
        for j in 0..span as i64 {
            partial += h(start + j, a) - mean;
            prefixes.push(partial);
        }
        for x in &prefixes {
            for y in &prefixes {
                spread = spread.max((x - y).norm());
            }
        }
        let mean_part = mean.norm() * (b_dist - a_dist).abs() / a_dist.min(b_dist);
        let zero_mean_part = spread / (a_dist + 1.0) + spread / (b_dist + 1.0);
        let bound = s.abs() / PI * (mean_part + zero_mean_part);
        total_sq += bound * bound;
    }
    total_sq.sqrt()
}

/// Residual of `2 sinh(l∂_t)ψ(t) = −iĤψ(t)` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub residual: f64,
    /// Combined tail bound of the three reconstructions involved.
    pub tail_bound: f64,
}

/// Evaluates `2 sinh(l∂_t)ψ(t)` via the exact shift identity
/// `ψ(t + l) − ψ(t − l)` and compares with `−iĤψ(t)`.
pub fn modified_schrodinger_residual(
    spec: &AutomatonSpec,
    w: &SampledWavefunction,
    t: f64,
    window: usize,
) -> Result<ResidualReport> {
    if spec.c().iter().any(|&c| c != 1) {
        return Err(Error::InvalidArgument("the continuum map assumes c ≡ 1".into()));
    }
    if spec.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: w.dim(),
        });
    }
    if window < 2 {
        return Err(Error::InvalidArgument("residual window must be at least 2".into()));
    }
    let h = hamiltonian_matrix(spec);
    let u = t / w.scale_l;

    if let Some(m) = node_at(u) {
        let sample = |n: i64| -> Vec<GaussianInt> {
            w.sample(n).map(<[GaussianInt]>::to_vec).unwrap_or_else(|| vec![GaussianInt::default(); w.dim()])
        };
        let minus_i = GaussianInt::new(0.into(), (-1).into());
        let rhs = h.matrix().apply(&sample(m))?;
        let diff: Vec<Complex64> = sample(m + 1)
            .iter()
            .zip(&sample(m - 1))
            .zip(&rhs)
            .map(|((x, y), r)| to_c64(&(x - y - r * &minus_i)))
            .collect();
        return Ok(ResidualReport {
            residual: norm(&diff),
            tail_bound: 0.0,
        });
    }

    // one truncated interpolant, built on the nodes around t, is shifted by ±l
    let (lo, hi, _) = node_range(w, u, window);
    let plus = sinc_series(w, u + 1.0, lo, hi);
    let minus = sinc_series(w, u - 1.0, lo, hi);
    let here = sinc_series(w, u, lo, hi);

    let (re, im) = h.to_f64_parts();
    let n = spec.dim();
    let mut diff = Vec::with_capacity(n);
    for i in 0..n {
        let mut h_psi = Complex64::new(0.0, 0.0);
        for j in 0..n {
            h_psi += Complex64::new(re[i * n + j], im[i * n + j]) * here.0[j];
        }
        let rhs = Complex64::new(0.0, -1.0) * h_psi;
        diff.push(plus.0[i] - minus.0[i] - rhs);
    }
    let h_norm = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    Ok(ResidualReport {
        residual: norm(&diff),
        tail_bound: plus.1 + minus.1 + h_norm * here.1,
    })
}

/// Eigenvalues of a Hermitian matrix, ascending, with `‖Hv − εv‖` per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

pub fn eigen_decompose(h: &HermitianIntMatrix) -> Eigen {
    let n = h.dim();
    let (re, im) = h.to_f64_parts();
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(re[i * n + j], im[i * n + j]));
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for i in order {
        let lambda = eig.eigenvalues[i];
        let v: DVector<Complex64> = eig.eigenvectors.column(i).into_owned();
        let r = &m * &v - &v * Complex64::new(lambda, 0.0);
        values.push(lambda);
        residuals.push(r.norm());
        vectors.push(v.iter().copied().collect());
    }
    Eigen {
        values,
        vectors,
        residuals,
    }
}

/// Principal-branch solution of `sin(E·l) = ε/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSolution {
    pub epsilon: f64,
    pub epsbar: f64,
    pub energy: f64,
    pub scale_l: f64,
}

/// Eigenvalues this close beyond `±2` are taken to lie on the band edge.
const BAND_EDGE_SLACK: f64 = 1e-12;

fn band_epsbar(epsilon: f64, l: f64) -> Result<f64> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidArgument(format!("scale_l must be positive, got {l}")));
    }
    if !epsilon.is_finite() || epsilon.abs() > 2.0 + BAND_EDGE_SLACK {
        return Err(Error::NoRealEnergy { epsilon: epsilon.abs() });
    }
    Ok((epsilon / 2.0).clamp(-1.0, 1.0))
}

/// `E = arcsin(ε/2)/l` with `E·l ∈ [−π/2, π/2]`.
pub fn dispersion_energy(epsilon: f64, l: f64) -> Result<DispersionSolution> {
    let epsbar = band_epsbar(epsilon, l)?;
    Ok(DispersionSolution {
        epsilon,
        epsbar,
        energy: epsbar.asin() / l,
        scale_l: l,
    })
}

/// Truncated expansion `E ≈ ε̄(1 + ε̄²/6)/l` (order 3) or `ε̄/l` (order 1).
pub fn dispersion_series(epsilon: f64, l: f64, order: u32) -> Result<f64> {
    let e = band_epsbar(epsilon, l)?;
    match order {
        1 => Ok(e / l),
        3 => Ok(e * (1.0 + e * e / 6.0) / l),
        _ => Err(Error::InvalidArgument(format!("series order must be 1 or 3, got {order}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, EvolveConfig, StatePair};

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re.into(), im.into())
    }

    fn constant_ones(len: usize) -> SampledWavefunction {
        SampledWavefunction::new(-(len as i64) / 2, vec![vec![gi(1, 0)]; len], 1.0).unwrap()
    }

    #[test]
    fn node_values_are_exact() {
        let w = SampledWavefunction::new(-2, vec![vec![gi(3, -1)], vec![gi(0, 2)], vec![gi(5, 5)]], 0.25).unwrap();
        for (n, expect) in [(-2, gi(3, -1)), (-1, gi(0, 2)), (0, gi(5, 5))] {
            let r = reconstruct(&w, n as f64 * 0.25, 4).unwrap();
            assert_eq!(r.node, Some(vec![expect]));
            assert_eq!(r.tail_bound, 0.0);
        }
    }

    #[test]
    fn single_sample_half_tick() {
        let w = SampledWavefunction::new(0, vec![vec![gi(1, 0)]], 1.0).unwrap();
        let r = reconstruct(&w, 0.5, 1).unwrap();
        assert!((r.value[0].re - 2.0 / PI).abs() < 1e-15);
        assert!((r.value[0].re - 0.6366197723675814).abs() < 1e-12);
    }

    #[test]
    fn constant_samples_converge_to_one_at_midpoint() {
        // oracle: direct partial sums of Σ sinc(π(0.5 − n)) at growing windows
        let direct = |window: i64| -> f64 {
            (-window + 1..=window)
                .map(|n| {
                    let d = PI * (0.5 - n as f64);
                    d.sin() / d
                })
                .sum()
        };
        let w = constant_ones(20_001);
        let mut last = f64::INFINITY;
        for window in [100usize, 1000, 10_000] {
            let r = reconstruct(&w, 0.5, window).unwrap();
            let resid = (r.value[0].re - 1.0).abs();
            assert!((r.value[0].re - direct(window as i64)).abs() < 1e-9);
            assert!(resid < last, "window {window}: {resid} !< {last}");
            last = resid;
        }
    }

    #[test]
    fn truncation_is_reported() {
        let w = SampledWavefunction::new(0, vec![vec![gi(1, 0)]; 5], 1.0).unwrap();
        assert!(reconstruct(&w, 2.5, 10).unwrap().truncated);
        assert!(!reconstruct(&w, 2.5, 2).unwrap().truncated);
        assert!(SampledWavefunction::new(0, vec![], 1.0).is_err());
    }

    fn period_twelve() -> (AutomatonSpec, SampledWavefunction) {
        let spec = AutomatonSpec::symmetric(vec![vec![1]]).unwrap();
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        let t = evolve(&spec, &s, 12, &EvolveConfig::default()).unwrap();
        let w = SampledWavefunction::from_trajectory(&t, 1.0).unwrap().periodic(12).unwrap();
        (spec, w)
    }

    #[test]
    fn residual_at_nodes_is_zero() {
        let (spec, w) = period_twelve();
        for n in -3..15 {
            let r = modified_schrodinger_residual(&spec, &w, n as f64, 16).unwrap();
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn residual_off_node_shrinks_with_window() {
        let (spec, w) = period_twelve();
        let mut last = f64::INFINITY;
        for window in [16, 64, 256] {
            let r = modified_schrodinger_residual(&spec, &w, 0.5, window).unwrap();
            assert!(r.residual < last, "window {window}: {} !< {last}", r.residual);
            assert!(r.residual <= r.tail_bound + 1e-12);
            last = r.residual;
        }
    }

    #[test]
    fn free_constant_samples_residual_is_boundary_only() {
        let spec = AutomatonSpec::symmetric(vec![vec![0]]).unwrap();
        let w = SampledWavefunction::new(0, vec![vec![gi(2, 1)]; 4], 1.0).unwrap().periodic(1).unwrap();
        for t in [0.3f64, 1.7, -2.25] {
            assert_eq!(modified_schrodinger_residual(&spec, &w, t.round(), 8).unwrap().residual, 0.0);
            let mut last = f64::INFINITY;
            for window in [16, 64, 256, 1024] {
                let r = modified_schrodinger_residual(&spec, &w, t, window).unwrap();
                assert!(r.residual <= r.tail_bound + 1e-12, "{t}: {} > {}", r.residual, r.tail_bound);
                assert!(r.residual < last);
                last = r.residual;
            }
            assert!(last < 1e-3);
        }
    }

    #[test]
    fn eigen_examples() {
        let x = HermitianIntMatrix::from_parts(&[vec![0, 1], vec![1, 0]], &[vec![0, 0], vec![0, 0]]).unwrap();
        let y = HermitianIntMatrix::from_parts(&[vec![0, 0], vec![0, 0]], &[vec![0, 1], vec![-1, 0]]).unwrap();
        for m in [x, y] {
            let e = eigen_decompose(&m);
            assert!((e.values[0] + 1.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
            assert!(e.residuals.iter().all(|&r| r < 1e-12));
        }
        let one = HermitianIntMatrix::from_parts(&[vec![1]], &[vec![0]]).unwrap();
        assert_eq!(eigen_decompose(&one).values, vec![1.0]);
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion_energy(0.0, 1.0).unwrap().energy, 0.0);
        assert!((dispersion_energy(2.0, 0.5).unwrap().energy - PI).abs() < 1e-15);
        let e = dispersion_energy(1.0, 1.0).unwrap();
        assert!((e.energy - 0.5235987755982988).abs() < 1e-12);
        assert!((e.energy - PI / 6.0).abs() < 1e-12);
        assert!(matches!(dispersion_energy(3.0, 1.0), Err(Error::NoRealEnergy { .. })));
        assert!(dispersion_energy(-2.5, 1.0).is_err());
    }

    #[test]
    fn series_examples() {
        for order in [1, 3] {
            assert_eq!(dispersion_series(0.0, 1.0, order).unwrap(), 0.0);
        }
        let approx = dispersion_series(1.0, 1.0, 3).unwrap();
        assert!((approx - 0.5208333333333334).abs() < 1e-15);
        let err = dispersion_energy(1.0, 1.0).unwrap().energy - approx;
        assert!((err - 2.7654e-3).abs() < 1e-6, "{err}");
        assert!(dispersion_series(1.0, 1.0, 2).is_err());
        assert!(dispersion_series(4.1, 1.0, 3).is_err());
    }

    #[test]
    fn energy_is_monotone_and_inverts() {
        let mut last = f64::NEG_INFINITY;
        for k in -200..=200 {
            let eps = k as f64 / 100.0;
            let sol = dispersion_energy(eps, 0.7).unwrap();
            assert!(sol.energy > last);
            last = sol.energy;
            if eps.abs() < 2.0 && eps != 0.0 {
                let back = (sol.energy * 0.7).sin();
                assert!(((back - eps / 2.0) / (eps / 2.0)).abs() <= 1e-12);
            }
        }
    }
}
