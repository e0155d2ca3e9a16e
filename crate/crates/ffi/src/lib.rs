//! C ABI over `hca-core`.
//!
//! Objects cross the boundary as opaque handles (`HcaSpec`, `HcaState`)
//! created and released by this library. Every fallible call returns an
//! [`HcaStatus`]; on failure a message is kept per thread and can be read
//! with [`hca_last_error_message`]. Arbitrary-precision integers leave the
//! library as decimal strings that the caller frees with [`hca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hca_core::automaton::AutomatonSpec;
use hca_core::continuum::dispersion_energy;
use hca_core::dynamics::{
    detect_period, evolve_pair, step_backward, step_forward, two_point_invariant, EvolveConfig, StatePair,
    DEFAULT_BITCAP,
};
use hca_core::error::Error;
use hca_core::hermitian::HermitianIntMatrix;
use hca_core::io::{model_to_json, parse_model};
use hca_core::spectra::{spectrum_in_band, Mode, Verdict};
use num_bigint::BigInt;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSpec = 3,
    DimensionMismatch = 4,
    BitCapExceeded = 5,
    NoRealEnergy = 6,
    SearchSpaceOverflow = 7,
    /// The requested quantity does not exist, e.g. no period within the limit.
    NotFound = 8,
    Internal = 9,
    Panic = 10,
}

/// Which slot of a state pair to read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcaComponent {
    XPrev = 0,
    PPrev = 1,
    XCurr = 2,
    PCurr = 3,
    TauPrev = 4,
    TauCurr = 5,
    /// `2π` at the earlier tick.
    Pi2Prev = 6,
    Pi2Curr = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcaMode {
    Numeric = 0,
    Exact = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcaVerdict {
    Inside = 0,
    Boundary = 1,
    Outside = 2,
}

/// Opaque automaton specification.
pub struct HcaSpec(AutomatonSpec);

/// Opaque state pair at ticks `(n − 1, n)`.
pub struct HcaState(StatePair);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> HcaStatus {
    match e {
        Error::InvalidSpec(_) | Error::NotHermitian(_) => HcaStatus::InvalidSpec,
        Error::DimensionMismatch { .. } => HcaStatus::DimensionMismatch,
        Error::BitCapExceeded { .. } => HcaStatus::BitCapExceeded,
        Error::NoRealEnergy { .. } => HcaStatus::NoRealEnergy,
        Error::SearchSpaceOverflow { .. } => HcaStatus::SearchSpaceOverflow,
        Error::NoSolutionInBound(_) => HcaStatus::NotFound,
        Error::Internal(_) => HcaStatus::Internal,
        _ => HcaStatus::InvalidArgument,
    }
}

struct Fail(HcaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HcaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HcaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcaStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            HcaStatus::Panic
        }
    }
}

unsafe fn ref_of<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn mut_of<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice_of<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_of<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HcaStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Reads a row-major `dim × dim` matrix; a null pointer means all zeros.
unsafe fn matrix_of(p: *const i64, dim: usize, what: &str) -> Result<Vec<Vec<i64>>, Fail> {
    if p.is_null() {
        return Ok(vec![vec![0; dim]; dim]);
    }
    let flat = slice_of(p, dim * dim, what)?;
    Ok(flat.chunks(dim.max(1)).map(<[i64]>::to_vec).collect())
}

fn new_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a spec from row-major `dim × dim` matrices `s` (symmetric) and
/// `a` (antisymmetric, null for zero), with `c ≡ 1` and `l = 1`.
///
/// # Safety
/// `s` and a non-null `a` must point to `dim * dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_spec_new(dim: usize, s: *const i64, a: *const i64, out: *mut *mut HcaSpec) -> HcaStatus {
    guard(|| {
        if s.is_null() {
            return Err(null("s"));
        }
        let spec = AutomatonSpec::new(matrix_of(s, dim, "s")?, matrix_of(a, dim, "a")?)?;
        put(out, Box::into_raw(Box::new(HcaSpec(spec))), "out")
    })
}

/// Replaces the tick-dependent step sequence `c` (repeated periodically).
///
/// # Safety
/// `spec` must be a live handle and `c` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hca_spec_set_c(spec: *mut HcaSpec, c: *const i64, len: usize) -> HcaStatus {
    guard(|| {
        let spec = mut_of(spec, "spec")?;
        spec.0 = spec.0.clone().with_c(slice_of(c, len, "c")?.to_vec())?;
        Ok(())
    })
}

/// Dimension of the spec, or 0 for null.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hca_spec_dim(spec: *const HcaSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `spec` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hca_spec_free(spec: *mut HcaSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// State pair with `ψ = x + ip` at ticks `(−1, 0)` and `τ = π = 0`.
///
/// # Safety
/// The four arrays must each hold `dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_state_new(
    dim: usize,
    x_prev: *const i64,
    p_prev: *const i64,
    x_curr: *const i64,
    p_curr: *const i64,
    out: *mut *mut HcaState,
) -> HcaStatus {
    guard(|| {
        let psi = |x: *const i64, p: *const i64, what: &str| -> Result<Vec<(i64, i64)>, Fail> {
            let (x, p) = (slice_of(x, dim, what)?, slice_of(p, dim, what)?);
            Ok(x.iter().copied().zip(p.iter().copied()).collect())
        };
        let s = StatePair::from_psi(&psi(x_prev, p_prev, "prev")?, &psi(x_curr, p_curr, "curr")?);
        put(out, Box::into_raw(Box::new(HcaState(s))), "out")
    })
}

/// Parses a model file (the JSON accepted by the command-line tool).
/// Either output may be null; the state output receives null when the
/// model has no initial data.
///
/// # Safety
/// `json` must be a NUL-terminated string; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_model_from_json(
    json: *const c_char,
    spec_out: *mut *mut HcaSpec,
    state_out: *mut *mut HcaState,
) -> HcaStatus {
    guard(|| {
        let model = parse_model(str_of(json, "json")?)?;
        if !state_out.is_null() {
            let state = model.initial.map_or(ptr::null_mut(), |s| Box::into_raw(Box::new(HcaState(s))));
            state_out.write(state);
        }
        if !spec_out.is_null() {
            spec_out.write(Box::into_raw(Box::new(HcaSpec(model.spec))));
        }
        Ok(())
    })
}

/// Serialises a spec and state into a model file.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_model_to_json(
    spec: *const HcaSpec,
    state: *const HcaState,
    out: *mut *mut c_char,
) -> HcaStatus {
    guard(|| {
        let (spec, state) = (ref_of(spec, "spec")?, ref_of(state, "state")?);
        state.0.check_dim(spec.0.dim())?;
        put(out, new_string(model_to_json(&spec.0, &state.0)), "out")
    })
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_state_clone(state: *const HcaState, out: *mut *mut HcaState) -> HcaStatus {
    guard(|| {
        let s = ref_of(state, "state")?.0.clone();
        put(out, Box::into_raw(Box::new(HcaState(s))), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hca_state_free(state: *mut HcaState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Index `n` of the later tick of the pair.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_state_tick(state: *const HcaState, out: *mut i64) -> HcaStatus {
    guard(|| put(out, ref_of(state, "state")?.0.tick, "out"))
}

/// Decimal string of one component. `index` selects the coordinate for the
/// vector slots and must be 0 for `τ` and `2π`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_state_component(
    state: *const HcaState,
    which: HcaComponent,
    index: usize,
    out: *mut *mut c_char,
) -> HcaStatus {
    guard(|| {
        let s = &ref_of(state, "state")?.0;
        let scalar = |v: &BigInt| {
            if index == 0 {
                Ok(v.clone())
            } else {
                Err(Fail(HcaStatus::InvalidArgument, format!("{which:?} is a scalar, index must be 0")))
            }
        };
        let vector = |v: &[BigInt]| {
            v.get(index).cloned().ok_or_else(|| {
                Fail(HcaStatus::InvalidArgument, format!("index {index} out of range for dimension {}", v.len()))
            })
        };
        let value = match which {
            HcaComponent::XPrev => vector(&s.x_prev)?,
            HcaComponent::PPrev => vector(&s.p_prev)?,
            HcaComponent::XCurr => vector(&s.x_curr)?,
            HcaComponent::PCurr => vector(&s.p_curr)?,
            HcaComponent::TauPrev => scalar(&s.tau_prev)?,
            HcaComponent::TauCurr => scalar(&s.tau_curr)?,
            HcaComponent::Pi2Prev => scalar(&s.pi2_prev)?,
            HcaComponent::Pi2Curr => scalar(&s.pi2_curr)?,
        };
        put(out, new_string(value.to_string()), "out")
    })
}

unsafe fn with_pair(
    spec: *const HcaSpec,
    state: *mut HcaState,
    f: impl FnOnce(&AutomatonSpec, &StatePair) -> Result<StatePair, Fail>,
) -> HcaStatus {
    guard(|| {
        let (spec, state) = (ref_of(spec, "spec")?, mut_of(state, "state")?);
        state.0.check_dim(spec.0.dim())?;
        state.0 = f(&spec.0, &state.0)?;
        Ok(())
    })
}

/// Advances the state one tick in place.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn hca_step_forward(spec: *const HcaSpec, state: *mut HcaState) -> HcaStatus {
    with_pair(spec, state, |sp, s| Ok(step_forward(sp, s)))
}

/// Moves the state back one tick in place.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn hca_step_backward(spec: *const HcaSpec, state: *mut HcaState) -> HcaStatus {
    with_pair(spec, state, |sp, s| Ok(step_backward(sp, s)))
}

/// Takes `k` steps in place (backward for `k < 0`). A `bitcap` of 0 selects
/// the default cap; when exceeded the state is left unchanged.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn hca_evolve(spec: *const HcaSpec, state: *mut HcaState, k: i64, bitcap: u64) -> HcaStatus {
    let cfg = EvolveConfig {
        bitcap: if bitcap == 0 { DEFAULT_BITCAP } else { bitcap },
    };
    with_pair(spec, state, |sp, s| Ok(evolve_pair(sp, s, k, &cfg)?))
}

/// Smallest period within `max_steps`, or `NotFound`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_detect_period(
    spec: *const HcaSpec,
    state: *const HcaState,
    max_steps: u64,
    out: *mut u64,
) -> HcaStatus {
    guard(|| {
        let (spec, state) = (ref_of(spec, "spec")?, ref_of(state, "state")?);
        state.0.check_dim(spec.0.dim())?;
        match detect_period(&spec.0, &state.0, max_steps) {
            Some(t) => put(out, t, "out"),
            None => Err(Fail(HcaStatus::NotFound, format!("no period within {max_steps} steps"))),
        }
    })
}

/// Two-point invariant `Q_G` of the state for the Hermitian `G = re + i·im`
/// (row-major, `im` null for real), as a decimal string.
///
/// # Safety
/// `state` must be live, the matrices must hold `dim * dim` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_invariant(
    state: *const HcaState,
    dim: usize,
    g_re: *const i64,
    g_im: *const i64,
    out: *mut *mut c_char,
) -> HcaStatus {
    guard(|| {
        let state = ref_of(state, "state")?;
        if g_re.is_null() {
            return Err(null("g_re"));
        }
        let g = HermitianIntMatrix::from_parts(&matrix_of(g_re, dim, "g_re")?, &matrix_of(g_im, dim, "g_im")?)?;
        let q = two_point_invariant(&g, &state.0)?;
        put(out, new_string(q.to_string()), "out")
    })
}

/// Principal solution `E` of `sin(E·l) = ε/2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_dispersion_energy(epsilon: f64, scale_l: f64, out: *mut f64) -> HcaStatus {
    guard(|| put(out, dispersion_energy(epsilon, scale_l)?.energy, "out"))
}

/// Classifies the spectrum of the Hermitian `re + i·im` against `[−2, 2]`.
///
/// # Safety
/// The matrices must hold `dim * dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hca_spectrum_in_band(
    dim: usize,
    re: *const i64,
    im: *const i64,
    mode: HcaMode,
    out: *mut HcaVerdict,
) -> HcaStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let m = HermitianIntMatrix::from_parts(&matrix_of(re, dim, "re")?, &matrix_of(im, dim, "im")?)?;
        let mode = match mode {
            HcaMode::Numeric => Mode::Numeric,
            HcaMode::Exact => Mode::Exact,
        };
        let verdict = match spectrum_in_band(&m, mode)?.verdict {
            Verdict::Inside => HcaVerdict::Inside,
            Verdict::Boundary => HcaVerdict::Boundary,
            Verdict::Outside => HcaVerdict::Outside,
        };
        put(out, verdict, "out")
    })
}
