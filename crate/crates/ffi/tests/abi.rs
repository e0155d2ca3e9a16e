use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hca_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { hca_string_free(p) };
    s
}

fn last_error() -> String {
    let p = hca_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn component(state: *const HcaState, which: HcaComponent, index: usize) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hca_state_component(state, which, index, &mut out) }, HcaStatus::Ok);
    take_string(out)
}

struct Fixture {
    spec: *mut HcaSpec,
    state: *mut HcaState,
}

impl Fixture {
    fn new(s: &[i64], dim: usize) -> Self {
        let mut spec = ptr::null_mut();
        assert_eq!(unsafe { hca_spec_new(dim, s.as_ptr(), ptr::null(), &mut spec) }, HcaStatus::Ok);
        let ones = vec![1i64; dim];
        let zeros = vec![0i64; dim];
        let mut state = ptr::null_mut();
        let st = unsafe { hca_state_new(dim, ones.as_ptr(), zeros.as_ptr(), ones.as_ptr(), zeros.as_ptr(), &mut state) };
        assert_eq!(st, HcaStatus::Ok);
        Self { spec, state }
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        unsafe {
            hca_state_free(self.state);
            hca_spec_free(self.spec);
        }
    }
}

#[test]
fn period_twelve_fixture() {
    let f = Fixture::new(&[1], 1);
    assert_eq!(unsafe { hca_spec_dim(f.spec) }, 1);
    let mut t = 0;
    assert_eq!(unsafe { hca_detect_period(f.spec, f.state, 100, &mut t) }, HcaStatus::Ok);
    assert_eq!(t, 12);
    assert_eq!(unsafe { hca_evolve(f.spec, f.state, 12, 0) }, HcaStatus::Ok);
    let mut tick = 0;
    assert_eq!(unsafe { hca_state_tick(f.state, &mut tick) }, HcaStatus::Ok);
    assert_eq!(tick, 12);
    assert_eq!(component(f.state, HcaComponent::XCurr, 0), "1");
    assert_eq!(component(f.state, HcaComponent::PCurr, 0), "0");
    // τ_{n+1} = τ_{n−1} + c advances once per two ticks
    assert_eq!(component(f.state, HcaComponent::TauCurr, 0), "6");
}

#[test]
fn steps_are_inverse_and_match_evolve() {
    let f = Fixture::new(&[3, 1, 1, -2], 2);
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { hca_state_clone(f.state, &mut copy) }, HcaStatus::Ok);
    for _ in 0..50 {
        assert_eq!(unsafe { hca_step_forward(f.spec, f.state) }, HcaStatus::Ok);
    }
    assert_eq!(unsafe { hca_evolve(f.spec, copy, 50, 0) }, HcaStatus::Ok);
    for which in [HcaComponent::XCurr, HcaComponent::PPrev, HcaComponent::Pi2Curr] {
        assert_eq!(component(f.state, which, 0), component(copy, which, 0));
    }
    // numbers beyond 64 bits come through as decimal strings
    assert!(component(f.state, HcaComponent::XCurr, 1).trim_start_matches('-').len() > 19);
    for _ in 0..50 {
        assert_eq!(unsafe { hca_step_backward(f.spec, f.state) }, HcaStatus::Ok);
    }
    assert_eq!(component(f.state, HcaComponent::XCurr, 1), "1");
    assert_eq!(component(f.state, HcaComponent::Pi2Prev, 0), "0");
    unsafe { hca_state_free(copy) };
}

#[test]
fn invariant_is_conserved_and_matches_hand_value() {
    let f = Fixture::new(&[0, 1, 1, 0], 2);
    let g = [1i64, 0, 0, 1];
    let q = |s| {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { hca_invariant(s, 2, g.as_ptr(), ptr::null(), &mut out) }, HcaStatus::Ok);
        take_string(out)
    };
    // 2·Re(ψ_prev·ψ_curr) with both equal to (1, 1)
    assert_eq!(q(f.state), "4");
    assert_eq!(unsafe { hca_evolve(f.spec, f.state, 37, 0) }, HcaStatus::Ok);
    assert_eq!(q(f.state), "4");
}

#[test]
fn bitcap_leaves_state_untouched() {
    let f = Fixture::new(&[3], 1);
    assert_eq!(unsafe { hca_evolve(f.spec, f.state, 500, 64) }, HcaStatus::BitCapExceeded);
    assert!(last_error().contains("exceeds cap of 64 bits"));
    let mut tick = -1;
    unsafe { hca_state_tick(f.state, &mut tick) };
    assert_eq!(tick, 0);
}

#[test]
fn errors_map_to_codes() {
    let mut spec = ptr::null_mut();
    let asym = [0i64, 1, 2, 0];
    assert_eq!(unsafe { hca_spec_new(2, asym.as_ptr(), ptr::null(), &mut spec) }, HcaStatus::InvalidSpec);
    assert!(spec.is_null());
    assert_eq!(unsafe { hca_spec_new(1, ptr::null(), ptr::null(), &mut spec) }, HcaStatus::NullPointer);
    assert_eq!(last_error(), "s is null");

    let f = Fixture::new(&[1], 1);
    let g = Fixture::new(&[1, 0, 0, 1], 2);
    assert_eq!(unsafe { hca_step_forward(f.spec, g.state) }, HcaStatus::DimensionMismatch);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hca_state_component(f.state, HcaComponent::XCurr, 3, &mut out) },
        HcaStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hca_state_component(f.state, HcaComponent::TauCurr, 1, &mut out) },
        HcaStatus::InvalidArgument
    );
    let mut e = 0.0;
    assert_eq!(unsafe { hca_dispersion_energy(2.5, 1.0, &mut e) }, HcaStatus::NoRealEnergy);
    let mut t = 0;
    let zero = Fixture::new(&[3], 1);
    assert_eq!(unsafe { hca_detect_period(zero.spec, zero.state, 50, &mut t) }, HcaStatus::NotFound);
    assert_eq!(unsafe { hca_spec_set_c(f.spec, ptr::null(), 0) }, HcaStatus::InvalidSpec);
    assert!(last_error().contains("at least one"));
    let c = [1i64, 2];
    assert_eq!(unsafe { hca_spec_set_c(f.spec, c.as_ptr(), 2) }, HcaStatus::Ok);
    assert_eq!(unsafe { hca_step_forward(f.spec, f.state) }, HcaStatus::Ok);
    assert_eq!(unsafe { hca_step_forward(ptr::null(), f.state) }, HcaStatus::NullPointer);
}

#[test]
fn dispersion_and_band_test() {
    let mut e = 0.0;
    assert_eq!(unsafe { hca_dispersion_energy(1.0, 1.0, &mut e) }, HcaStatus::Ok);
    assert!((e - std::f64::consts::PI / 6.0).abs() < 1e-15);
    // path on three vertices: eigenvalues 0, ±√2
    let path = [0i64, 1, 0, 1, 0, 1, 0, 1, 0];
    // cycle on three vertices: eigenvalues 2, −1, −1
    let cycle = [0i64, 1, 1, 1, 0, 1, 1, 1, 0];
    let star = [0i64, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0];
    for mode in [HcaMode::Numeric, HcaMode::Exact] {
        let verdict = |dim, m: &[i64]| {
            let mut v = HcaVerdict::Outside;
            assert_eq!(unsafe { hca_spectrum_in_band(dim, m.as_ptr(), ptr::null(), mode, &mut v) }, HcaStatus::Ok);
            v
        };
        assert_eq!(verdict(3, &path), HcaVerdict::Inside);
        assert_eq!(verdict(3, &cycle), HcaVerdict::Boundary);
        // star K_{1,3}: ±√3
        assert_eq!(verdict(4, &star), HcaVerdict::Inside);
        assert_eq!(verdict(1, &[3]), HcaVerdict::Outside);
    }
}

#[test]
fn model_json_round_trip() {
    let json = CString::new(r#"{"dim": 1, "S": [[1]], "initial": {"x_prev": [1], "p_prev": [0], "x_curr": [1], "p_curr": [0]}}"#).unwrap();
    let (mut spec, mut state) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe { hca_model_from_json(json.as_ptr(), &mut spec, &mut state) };
    assert_eq!(st, HcaStatus::Ok, "{}", if st == HcaStatus::Ok { String::new() } else { last_error() });
    assert!(!state.is_null());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hca_model_to_json(spec, state, &mut out) }, HcaStatus::Ok);
    let text = take_string(out);
    let again = CString::new(text).unwrap();
    let (mut spec2, mut state2) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { hca_model_from_json(again.as_ptr(), &mut spec2, &mut state2) }, HcaStatus::Ok);
    let mut t = 0;
    assert_eq!(unsafe { hca_detect_period(spec2, state2, 100, &mut t) }, HcaStatus::Ok);
    assert_eq!(t, 12);

    let broken = CString::new(r#"{"dim": 1, "S": [[1.5]]}"#).unwrap();
    assert_eq!(
        unsafe { hca_model_from_json(broken.as_ptr(), ptr::null_mut(), ptr::null_mut()) },
        HcaStatus::InvalidArgument
    );
    assert!(last_error().contains("S"));
    unsafe {
        hca_state_free(state);
        hca_state_free(state2);
        hca_spec_free(spec);
        hca_spec_free(spec2);
    }
}
