//! Exhaustive search for small integer matrices with spectrum in the
//! closed band, and canonical forms under signed permutations.

use rayon::prelude::*;

use super::{spectrum_in_band, Mode, Verdict, Witness};
use crate::error::{Error, Result};
use crate::hermitian::HermitianIntMatrix;

/// Largest number of candidates a single scan may visit.
pub const SEARCH_SPACE_LIMIT: u128 = 1_000_000_000;

const MAX_DIM: usize = 5;
const MAX_HERMITIAN_DIM: usize = 3;

/// Small dense Hermitian matrix with machine-integer parts, row-major.
/// The derived order is lexicographic on the real part, then the
/// imaginary part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    re: Vec<i64>,
    im: Vec<i64>,
}

impl IntMatrix {
    pub fn symmetric(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        Self::hermitian(rows, &vec![vec![0; n]; n])
    }

    pub fn hermitian(re: &[Vec<i64>], im: &[Vec<i64>]) -> Result<Self> {
        // Validation is shared with the big-integer type.
        HermitianIntMatrix::from_parts(re, im)?;
        Ok(Self {
            dim: re.len(),
            re: re.concat(),
            im: im.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn re(&self, i: usize, j: usize) -> i64 {
        self.re[i * self.dim + j]
    }

    pub fn im(&self, i: usize, j: usize) -> i64 {
        self.im[i * self.dim + j]
    }

    pub fn re_rows(&self) -> Vec<Vec<i64>> {
        self.re.chunks(self.dim.max(1)).map(<[i64]>::to_vec).collect()
    }

    pub fn im_rows(&self) -> Vec<Vec<i64>> {
        self.im.chunks(self.dim.max(1)).map(<[i64]>::to_vec).collect()
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(|&v| v == 0)
    }

    pub fn to_hermitian(&self) -> HermitianIntMatrix {
        HermitianIntMatrix::from_parts(&self.re_rows(), &self.im_rows()).expect("validated on construction")
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            re: self.re.iter().map(|v| -v).collect(),
            im: self.im.iter().map(|v| -v).collect(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            re: self.re.clone(),
            im: self.im.iter().map(|v| -v).collect(),
        }
    }

    /// `D·P·M·Pᵀ·D` with `(P M Pᵀ)_{ij} = M_{perm[i] perm[j]}` and
    /// `D = diag(signs)`.
    pub fn signed_permute(&self, perm: &[usize], signs: &[i64]) -> Self {
        let n = self.dim;
        let mut re = vec![0; n * n];
        let mut im = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = signs[i] * signs[j];
                re[i * n + j] = s * self.re(perm[i], perm[j]);
                im[i * n + j] = s * self.im(perm[i], perm[j]);
            }
        }
        Self { dim: n, re, im }
    }

    /// `Σ |M_ij|²`, which equals `Σ λ²`.
    pub fn frobenius_sq(&self) -> i64 {
        self.re.iter().chain(&self.im).map(|v| v * v).sum()
    }
}

/// A representative that is the lexicographic minimum of its orbit
/// under simultaneous permutation and switching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalMatrix(IntMatrix);

impl CanonicalMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sign vectors with the first entry fixed to `+1`; flipping all signs
/// acts trivially.
fn switchings(n: usize) -> Vec<Vec<i64>> {
    (0..1u32 << n.saturating_sub(1))
        .map(|mask| {
            (0..n)
                .map(|k| if k > 0 && mask >> (k - 1) & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

pub fn canonical_form(m: &IntMatrix) -> CanonicalMatrix {
    let perms = permutations(m.dim);
    let signs = switchings(m.dim);
    canonical_with(m, &perms, &signs)
}

fn canonical_with(m: &IntMatrix, perms: &[Vec<usize>], signs: &[Vec<i64>]) -> CanonicalMatrix {
    let mut best = m.clone();
    for p in perms {
        for s in signs {
            let c = m.signed_permute(p, s);
            if c < best {
                best = c;
            }
        }
    }
    CanonicalMatrix(best)
}

/// Necessary condition for spectrum in `[-2, 2]`: `Σ λ² ≤ 4·dim`.
pub fn frobenius_prefilter(m: &IntMatrix) -> bool {
    m.frobenius_sq() <= 4 * m.dim as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub dim: usize,
    pub entry_bound: i64,
    pub dedup: bool,
    pub mode: Mode,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Also vary the antisymmetric imaginary part.
    pub hermitian: bool,
}

impl ScanConfig {
    pub fn new(dim: usize, entry_bound: i64) -> Self {
        Self {
            dim,
            entry_bound,
            dedup: false,
            mode: Mode::Numeric,
            jobs: None,
            hermitian: false,
        }
    }

    fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                out.push(Slot { i, j, imag: false });
                if self.hermitian && j > i {
                    out.push(Slot { i, j, imag: true });
                }
            }
        }
        out
    }

    pub fn search_space(&self) -> Option<u128> {
        let slots = u32::try_from(self.slots().len()).ok()?;
        (2 * self.entry_bound as u128 + 1).checked_pow(slots)
    }

    fn validate(&self) -> Result<u128> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("dim must be in 1..={MAX_DIM}, got {}", self.dim)));
        }
        if self.hermitian && self.dim > MAX_HERMITIAN_DIM {
            return Err(Error::InvalidArgument(format!(
                "Hermitian scans support dim <= {MAX_HERMITIAN_DIM}, got {}",
                self.dim
            )));
        }
        if self.entry_bound < 1 {
            return Err(Error::InvalidArgument(format!(
                "entry bound must be positive, got {}",
                self.entry_bound
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be positive".into()));
        }
        let size = self.search_space().unwrap_or(u128::MAX);
        if size > SEARCH_SPACE_LIMIT {
            return Err(Error::SearchSpaceOverflow {
                size,
                limit: SEARCH_SPACE_LIMIT,
            });
        }
        Ok(size)
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    i: usize,
    j: usize,
    imag: bool,
}

impl Slot {
    /// Contribution of one free value to the Frobenius sum.
    fn weight(&self) -> i64 {
        if self.i == self.j {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Survivor {
    pub matrix: IntMatrix,
    pub verdict: Verdict,
    pub witness: Witness,
    pub canonical: CanonicalMatrix,
    /// Raw survivors sharing this canonical form; 1 without dedup.
    pub class_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub search_space: u128,
    pub prefilter_rejected: u128,
    pub spectral_rejected: u128,
    pub raw_count: usize,
    pub dedup_count: usize,
    /// Sorted by canonical form, then by matrix.
    pub survivors: Vec<Survivor>,
}

#[derive(Default)]
struct Partial {
    survivors: Vec<(IntMatrix, Verdict, Witness)>,
    prefilter_rejected: u128,
    spectral_rejected: u128,
}

struct Search<'a> {
    cfg: &'a ScanConfig,
    slots: &'a [Slot],
    values: Vec<i64>,
    out: Partial,
    error: Option<Error>,
}

impl Search<'_> {
    fn leaves_below(&self, depth: usize) -> u128 {
        (2 * self.cfg.entry_bound as u128 + 1).pow((self.slots.len() - depth) as u32)
    }

    fn fill(&mut self, depth: usize, budget: i64) {
        if self.error.is_some() {
            return;
        }
        if depth == self.slots.len() {
            self.test_leaf();
            return;
        }
        let b = self.cfg.entry_bound;
        let w = self.slots[depth].weight();
        for v in -b..=b {
            let cost = w * v * v;
            if cost > budget {
                self.out.prefilter_rejected += self.leaves_below(depth + 1);
                continue;
            }
            self.values[depth] = v;
            self.fill(depth + 1, budget - cost);
        }
    }

    fn test_leaf(&mut self) {
        let m = build(self.cfg.dim, self.slots, &self.values);
        match spectrum_in_band(&m.to_hermitian(), self.cfg.mode) {
            Ok(r) if r.verdict.in_closed_band() => self.out.survivors.push((m, r.verdict, r.witness)),
            Ok(_) => self.out.spectral_rejected += 1,
            Err(e) => self.error = Some(e),
        }
    }
}

fn build(n: usize, slots: &[Slot], values: &[i64]) -> IntMatrix {
    let mut re = vec![0; n * n];
    let mut im = vec![0; n * n];
    for (s, &v) in slots.iter().zip(values) {
        if s.imag {
            im[s.i * n + s.j] = v;
            im[s.j * n + s.i] = -v;
        } else {
            re[s.i * n + s.j] = v;
            re[s.j * n + s.i] = v;
        }
    }
    IntMatrix { dim: n, re, im }
}

/// Index of `k` in the mixed-radix expansion used to split the search
/// over the leading-row slots.
fn leading_values(mut k: u128, lead: usize, bound: i64) -> Vec<i64> {
    let radix = 2 * bound as u128 + 1;
    let mut out = vec![0; lead];
    for slot in out.iter_mut().rev() {
        *slot = (k % radix) as i64 - bound;
        k /= radix;
    }
    out
}

fn run_partition(cfg: &ScanConfig, slots: &[Slot], lead: usize, k: u128) -> Result<Partial> {
    let mut search = Search {
        cfg,
        slots,
        values: vec![0; slots.len()],
        out: Partial::default(),
        error: None,
    };
    let head = leading_values(k, lead, cfg.entry_bound);
    let mut budget = 4 * cfg.dim as i64;
    for (d, &v) in head.iter().enumerate() {
        search.values[d] = v;
        budget -= slots[d].weight() * v * v;
    }
    if budget < 0 {
        search.out.prefilter_rejected += search.leaves_below(lead);
    } else {
        search.fill(lead, budget);
    }
    match search.error {
        Some(e) => Err(e),
        None => Ok(search.out),
    }
}

/// Every matrix in the configured box whose spectrum lies in `[-2, 2]`.
/// The output is independent of the number of workers.
pub fn enumerate_bounded_spectrum(cfg: &ScanConfig) -> Result<ScanReport> {
    let search_space = cfg.validate()?;
    let slots = cfg.slots();
    let lead = slots.iter().take_while(|s| s.i == 0).count();
    let parts = (2 * cfg.entry_bound as u128 + 1).pow(lead as u32);
    let work = || -> Result<Vec<Partial>> {
        (0..parts)
            .into_par_iter()
            .map(|k| run_partition(cfg, &slots, lead, k))
            .collect()
    };
    let partials = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let perms = permutations(cfg.dim);
    let signs = switchings(cfg.dim);
    let mut prefilter_rejected = 0;
    let mut spectral_rejected = 0;
    let mut survivors = Vec::new();
    for p in partials {
        prefilter_rejected += p.prefilter_rejected;
        spectral_rejected += p.spectral_rejected;
        for (matrix, verdict, witness) in p.survivors {
            let canonical = canonical_with(&matrix, &perms, &signs);
            survivors.push(Survivor {
                matrix,
                verdict,
                witness,
                canonical,
                class_size: 1,
            });
        }
    }
    survivors.sort_by(|a, b| (&a.canonical, &a.matrix).cmp(&(&b.canonical, &b.matrix)));
    let raw_count = survivors.len();
    let accounted = prefilter_rejected + spectral_rejected + raw_count as u128;
    if accounted != search_space {
        return Err(Error::Internal(format!(
            "scan visited {accounted} of {search_space} candidates"
        )));
    }

    let mut classes: Vec<Survivor> = Vec::new();
    for s in &survivors {
        match classes.last_mut() {
            Some(last) if last.canonical == s.canonical => last.class_size += 1,
            _ => classes.push(Survivor {
                class_size: 1,
                ..s.clone()
            }),
        }
    }
    let dedup_count = classes.len();
    if cfg.dedup {
        // Report each class by its canonical member, which is itself a
        // raw survivor because the band condition is orbit invariant.
        for c in &mut classes {
            let rep = survivors
                .iter()
                .find(|s| s.matrix == *c.canonical.matrix())
                .ok_or_else(|| Error::Internal("canonical form missing from survivors".into()))?;
            c.matrix = rep.matrix.clone();
            c.verdict = rep.verdict;
            c.witness = rep.witness.clone();
        }
        survivors = classes;
    }
    Ok(ScanReport {
        config: cfg.clone(),
        search_space,
        prefilter_rejected,
        spectral_rejected,
        raw_count,
        dedup_count,
        survivors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::symmetric(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn dim_one_bound_three() {
        let r = enumerate_bounded_spectrum(&ScanConfig::new(1, 3)).unwrap();
        let got: Vec<i64> = r.survivors.iter().map(|s| s.matrix.re(0, 0)).collect();
        assert_eq!(got, vec![-2, -1, 0, 1, 2]);
        assert_eq!(r.raw_count, 5);
        // [x] and [-x] are switching-equivalent only for dim > 1.
        assert_eq!(r.dedup_count, 5);
        assert_eq!(r.search_space, 7);
    }

    #[test]
    fn permutation_list_sizes() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(switchings(3).len(), 4);
        assert_eq!(switchings(1), vec![vec![1]]);
    }

    #[test]
    fn canonical_form_is_idempotent_and_minimal() {
        let m = sym(&[&[0, -1, 1], &[-1, 1, 0], &[1, 0, -1]]);
        let c = canonical_form(&m);
        assert_eq!(canonical_form(c.matrix()), c);
        assert!(c.matrix() <= &m);
    }

    #[test]
    fn switching_identifies_sign_of_path_edge() {
        let a = canonical_form(&sym(&[&[0, 1], &[1, 0]]));
        let b = canonical_form(&sym(&[&[0, -1], &[-1, 0]]));
        assert_eq!(a, b);
        assert_eq!(a.matrix(), &sym(&[&[0, -1], &[-1, 0]]));
    }

    #[test]
    fn overflow_and_bad_config() {
        assert!(matches!(
            enumerate_bounded_spectrum(&ScanConfig::new(5, 2)),
            Err(Error::SearchSpaceOverflow { .. })
        ));
        assert!(enumerate_bounded_spectrum(&ScanConfig::new(0, 2)).is_err());
        assert!(enumerate_bounded_spectrum(&ScanConfig::new(2, 0)).is_err());
        let mut c = ScanConfig::new(4, 1);
        c.hermitian = true;
        assert!(enumerate_bounded_spectrum(&c).is_err());
    }

    #[test]
    fn dedup_preserves_total_class_size() {
        let mut cfg = ScanConfig::new(2, 2);
        let raw = enumerate_bounded_spectrum(&cfg).unwrap();
        cfg.dedup = true;
        let d = enumerate_bounded_spectrum(&cfg).unwrap();
        assert_eq!(d.survivors.len(), d.dedup_count);
        assert_eq!(d.raw_count, raw.raw_count);
        assert_eq!(d.survivors.iter().map(|s| s.class_size).sum::<usize>(), raw.raw_count);
        for s in &d.survivors {
            assert_eq!(&s.matrix, s.canonical.matrix());
        }
    }
}
