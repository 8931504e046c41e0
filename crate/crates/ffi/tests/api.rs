use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use distrealize_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dr_last_error()) }.to_string_lossy().into_owned()
}

fn golden(name: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/golden").join(name);
    c(&std::fs::read_to_string(path).unwrap())
}

unsafe fn decide(family: *const DrFamily, emit: bool) -> (bool, String) {
    let mut decision = ptr::null_mut();
    assert_eq!(dr_decide(family, DrStrategy::Topology, emit, &mut decision), DrStatus::Ok, "{}", last_error());
    let mut feasible = false;
    assert_eq!(dr_decision_is_feasible(decision, &mut feasible), DrStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(dr_decision_to_json(decision, &mut json), DrStatus::Ok);
    let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
    dr_string_free(json);
    dr_decision_free(decision);
    (feasible, text)
}

#[test]
fn triangle_built_pair_by_pair() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(dr_family_new(3, DrVariant::GraphClosed, &mut family), DrStatus::Ok);
        for (i, j, lo, hi) in [(2, 1, "4", "5"), (1, 3, "2", "2"), (2, 3, "2", "2")] {
            assert_eq!(dr_family_set_bounds(family, i, j, c(lo).as_ptr(), c(hi).as_ptr()), DrStatus::Ok);
        }
        let (feasible, json) = decide(family, false);
        assert!(feasible);
        assert!(json.contains("\"weight\": \"4\""));

        assert_eq!(dr_family_set_bounds(family, 1, 2, c("5").as_ptr(), c("5").as_ptr()), DrStatus::Ok);
        let (feasible, json) = decide(family, false);
        assert!(!feasible);
        assert!(json.contains("\"violation\""));
        dr_family_free(family);
    }
}

#[test]
fn golden_documents_match_cli_output() {
    for name in ["unit_quartet", "distinct_sums", "triangle_feasible", "triangle_infeasible"] {
        unsafe {
            let mut family = ptr::null_mut();
            let input = golden(&format!("{name}.json"));
            assert_eq!(dr_family_from_json(input.as_ptr(), &mut family), DrStatus::Ok);
            let (_, json) = decide(family, true);
            let frozen = golden(&format!("{name}.result.json"));
            assert_eq!(json, frozen.to_str().unwrap(), "{name}");
            dr_family_free(family);
        }
    }
}

#[test]
fn verify_round_trip_and_failure() {
    unsafe {
        let input = golden("unit_quartet.json");
        let result = golden("unit_quartet.result.json");
        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(dr_verify_json(input.as_ptr(), result.as_ptr(), &mut passed, &mut report), DrStatus::Ok);
        assert!(passed);
        assert!(CStr::from_ptr(report).to_str().unwrap().contains("\"passed\": true"));
        dr_string_free(report);

        let bent = c(&result.to_str().unwrap().replacen("\"weight\": \"1\"", "\"weight\": \"11\"", 1));
        assert_eq!(dr_verify_json(input.as_ptr(), bent.as_ptr(), &mut passed, ptr::null_mut()), DrStatus::Ok);
        assert!(!passed);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(dr_family_new(1, DrVariant::TreeGeneralOpen, &mut family), DrStatus::InvalidArgument);
        assert!(last_error().contains("at least 2"));

        assert_eq!(dr_family_new(4, DrVariant::TreeGeneralOpen, &mut family), DrStatus::Ok);
        assert_eq!(dr_family_set_bounds(family, 1, 5, c("1").as_ptr(), c("2").as_ptr()), DrStatus::InvalidArgument);
        assert_eq!(dr_family_set_bounds(family, 1, 2, c("1.5").as_ptr(), c("2").as_ptr()), DrStatus::Parse);
        assert_eq!(dr_family_set_bounds(family, 1, 2, ptr::null(), c("2").as_ptr()), DrStatus::NullPointer);

        let mut decision = ptr::null_mut();
        assert_eq!(dr_decide(family, DrStrategy::Topology, false, &mut decision), DrStatus::InvalidArgument);
        assert!(last_error().contains("no bounds set for pair {1,2}"), "{}", last_error());
        assert!(decision.is_null());
        dr_family_free(family);

        assert_eq!(dr_family_from_json(c("{\"n\": 2}").as_ptr(), &mut family), DrStatus::Parse);
        assert_eq!(dr_decide(ptr::null(), DrStrategy::Raw, false, &mut decision), DrStatus::NullPointer);
        dr_family_free(ptr::null_mut());
        dr_decision_free(ptr::null_mut());
        dr_string_free(ptr::null_mut());
    }
}

#[test]
fn oversized_search_reports_size_limit() {
    unsafe {
        let n = 9;
        let mut family = ptr::null_mut();
        assert_eq!(dr_family_new(n, DrVariant::TreeGeneralOpen, &mut family), DrStatus::Ok);
        for i in 1..=n {
            for j in i + 1..=n {
                dr_family_set_bounds(family, i, j, c("1").as_ptr(), c("2").as_ptr());
            }
        }
        let mut decision = ptr::null_mut();
        assert_eq!(dr_decide(family, DrStrategy::Topology, false, &mut decision), DrStatus::SizeLimit);
        dr_family_free(family);
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which("cc") else { return };
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/distrealize.h");
    let status = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which(tool: &str) -> Result<std::path::PathBuf, ()> {
    std::env::var_os("PATH")
        .and_then(|paths| std::env::split_paths(&paths).map(|p| p.join(tool)).find(|p| p.is_file()))
        .ok_or(())
}
