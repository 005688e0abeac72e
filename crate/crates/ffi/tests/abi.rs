use std::ffi::{CStr, CString};
use std::ptr;

use subord_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(subord_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn thresholds_through_the_abi() {
    let mut d = f64::NAN;
    unsafe {
        assert_eq!(subord_delta_linear(0.5, 1.0, 1, 1.0, &mut d), SubordStatus::Ok);
        assert!((d - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(subord_delta_logderiv_pure(0.25, 1, 2.0, &mut d), SubordStatus::Ok);
        assert!((d + 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(subord_delta_square(0.0, 2.0, 1, 0.0, &mut d), SubordStatus::Ok);
        assert_eq!(d, -2.0);
        assert_eq!(subord_sigma_max(0.0, 2, 1.0, &mut d), SubordStatus::Ok);
        assert!((d + 7.0 / 6.0).abs() < 1e-15);
        assert_eq!(subord_sigma_max(0.0, 1, 3.0, &mut d), SubordStatus::Domain);
        assert!(last_error().contains("mu"));
        assert_eq!(subord_delta_linear(0.0, 1.0, 1, 1.0, ptr::null_mut()), SubordStatus::NullPointer);
    }
}

#[test]
fn threshold_variants() {
    let mut t = SubordThresholds::default();
    unsafe {
        assert_eq!(subord_threshold_set(1.0, 0.0, 1.0, 1, 2.0, false, &mut t), SubordStatus::Ok);
    }
    assert_eq!((t.delta1, t.delta2, t.delta3, t.delta4), (-0.5, -0.5, 0.0, 0.0));
    unsafe {
        assert_eq!(subord_threshold_set(1.0, 0.0, 1.0, 1, 2.0, true, &mut t), SubordStatus::Ok);
    }
    assert_eq!((t.delta1, t.delta2), (0.5, 0.5));
}

#[test]
fn series_handles() {
    let re = [1.0, 2.0, 3.0];
    let im = [0.0, 0.5, 0.0];
    let mut a = ptr::null_mut();
    let mut sq = ptr::null_mut();
    unsafe {
        assert_eq!(subord_series_new(1, re.as_ptr(), im.as_ptr(), 3, 8, &mut a), SubordStatus::Ok);
        assert_eq!(subord_series_order(a), 8);
        assert_eq!(subord_series_low_exp(a), 1);
        assert_eq!(subord_series_mul(a, a, &mut sq), SubordStatus::Ok);
        assert_eq!(subord_series_low_exp(sq), 2);
        let (mut x, mut y) = (0.0, 0.0);
        // (z + (2 + i/2) z^2 + ...)^2: z^3 coefficient 2 (2 + i/2)
        assert_eq!(subord_series_coeff(sq, 3, &mut x, &mut y), SubordStatus::Ok);
        assert_eq!((x, y), (4.0, 1.0));
        assert_eq!(subord_series_coeff(sq, 40, &mut x, &mut y), SubordStatus::Domain);
        assert_eq!(subord_series_evaluate(a, 0.5, 0.0, &mut x, &mut y), SubordStatus::Ok);
        assert!((x - (0.5 + 0.5 + 3.0 / 8.0)).abs() < 1e-15 && (y - 0.125).abs() < 1e-15);

        let zero = [0.0, 1.0];
        let mut z = ptr::null_mut();
        let mut q = ptr::null_mut();
        assert_eq!(subord_series_new(0, zero.as_ptr(), ptr::null(), 2, 4, &mut z), SubordStatus::Ok);
        let one = [1.0];
        let mut o = ptr::null_mut();
        assert_eq!(subord_series_new(0, one.as_ptr(), ptr::null(), 1, 4, &mut o), SubordStatus::Ok);
        // the stored leading slot is zero: no implicit renormalisation
        assert_eq!(subord_series_div(o, z, &mut q), SubordStatus::ZeroLeadingCoefficient);
        assert!(q.is_null());
        subord_series_free(z);
        assert_eq!(subord_series_new(1, one.as_ptr(), ptr::null(), 1, 4, &mut z), SubordStatus::Ok);
        assert_eq!(subord_series_div(o, z, &mut q), SubordStatus::Ok, "{}", last_error());
        assert_eq!(subord_series_low_exp(q), -1);
        subord_series_free(q);
        subord_series_free(o);
        subord_series_free(z);
        subord_series_free(sq);
        subord_series_free(a);
        subord_series_free(ptr::null_mut());
    }
}

#[test]
fn admissibility_scan() {
    let id = CString::new("L2_5").unwrap();
    let mut scan = SubordScan::default();
    unsafe {
        assert_eq!(subord_admissibility_scan(id.as_ptr(), 0.0, 0.0, 1.0, 1, 2.0, 4, 401, &mut scan), SubordStatus::Ok);
    }
    assert!(scan.max_re.abs() < 1e-12);
    assert_eq!(scan.argmax_rho, 0.0);
    let bad = CString::new("T2_1.1").unwrap();
    unsafe {
        assert_eq!(subord_admissibility_scan(bad.as_ptr(), 1.0, 0.0, 1.0, 1, 2.0, 4, 401, &mut scan), SubordStatus::UnknownResult);
    }
}

#[test]
fn verify_report_json() {
    let id = CString::new("T2_3.2").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(subord_verify_json(id.as_ptr(), 1.0, 0.0, 1.0, 1, 0.5, 30, 7, &mut out), SubordStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        subord_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["result_id"], "T2_3.2");
        assert_eq!(v["trials"], 30);
        assert_eq!(v["implication_violations"], 0);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/subord.h")).unwrap();
    for name in ["subord_series_new", "subord_threshold_set", "subord_verify_json", "SUBORD_STATUS_DOMAIN", "typedef struct SubordSeries SubordSeries"] {
        assert!(header.contains(name), "{name}");
    }
}
