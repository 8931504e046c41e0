//! C ABI over the `distrealize` engine.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Every function returns a [`DrStatus`]; on failure,
//! [`dr_last_error`] describes the error for the calling thread. Rationals
//! cross the boundary as NUL-terminated strings such as `"7/4"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use distrealize::cli::decide_document;
use distrealize::doc::{to_pretty_json, InstanceDocument, ReportDocument, ResultDocument, Witness, WitnessDocument};
use distrealize::pair::{all_pairs, pair_count, PairIndex};
use distrealize::rational::parse_rational;
use distrealize::verify::{verify_graph, verify_tree};
use distrealize::{Error, Interval, IntervalFamily, Rational, Strategy, Variant};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Unsupported = 4,
    SizeLimit = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrVariant {
    GraphClosed = 0,
    TreeGeneralOpen = 1,
    TreeGeneralClosed = 2,
    TreePositiveOpen = 3,
    StarOpen = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrStrategy {
    Topology = 0,
    Raw = 1,
}

impl From<DrVariant> for Variant {
    fn from(v: DrVariant) -> Self {
        match v {
            DrVariant::GraphClosed => Variant::GraphClosed,
            DrVariant::TreeGeneralOpen => Variant::TreeGeneralOpen,
            DrVariant::TreeGeneralClosed => Variant::TreeGeneralClosed,
            DrVariant::TreePositiveOpen => Variant::TreePositiveOpen,
            DrVariant::StarOpen => Variant::StarOpen,
        }
    }
}

/// Interval bounds under construction; validated by `dr_decide`.
pub struct DrFamily {
    n: usize,
    variant: Variant,
    bounds: Vec<Option<(Rational, Rational)>>,
}

pub struct DrDecision {
    document: ResultDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(DrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => DrStatus::Parse,
            Error::UnsupportedVariant(_) => DrStatus::Unsupported,
            Error::Size(_) => DrStatus::SizeLimit,
            _ => DrStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DrStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DrStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            DrStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(DrStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn build_family(f: &DrFamily) -> Result<IntervalFamily, Failure> {
    let mut bounds = Vec::with_capacity(f.bounds.len());
    for (pair, b) in all_pairs(f.n).zip(&f.bounds) {
        match b {
            Some((lo, hi)) => bounds.push(Interval::new(lo.clone(), hi.clone())),
            None => {
                return Err(Failure(DrStatus::InvalidArgument, format!("no bounds set for pair {pair}")));
            }
        }
    }
    Ok(IntervalFamily::new(f.n, f.variant, bounds)?)
}

/// A family on `n` labels with no bounds set yet.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dr_family_new(n: usize, variant: DrVariant, out_family: *mut *mut DrFamily) -> DrStatus {
    guard(|| {
        if n < 2 {
            return Err(Failure(DrStatus::InvalidArgument, format!("n must be at least 2, got {n}")));
        }
        let family = DrFamily { n, variant: variant.into(), bounds: vec![None; pair_count(n)] };
        out(out_family, Box::into_raw(Box::new(family)), "out_family")
    })
}

/// Sets the bounds of pair `{i, j}` (1-based labels, either order).
///
/// # Safety
/// `family` must come from this library; `lo` and `hi` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn dr_family_set_bounds(
    family: *mut DrFamily,
    i: usize,
    j: usize,
    lo: *const c_char,
    hi: *const c_char,
) -> DrStatus {
    guard(|| {
        let f = family.as_mut().ok_or_else(|| null("family"))?;
        let pair = PairIndex::new(i, j)
            .ok()
            .filter(|p| p.j() <= f.n)
            .ok_or_else(|| Failure(DrStatus::InvalidArgument, format!("{{{i}, {j}}} is not a pair of 1..={}", f.n)))?;
        let lo = parse_rational(text(lo, "lo")?)?;
        let hi = parse_rational(text(hi, "hi")?)?;
        if lo > hi {
            return Err(Failure(DrStatus::InvalidArgument, format!("lo > hi for pair {pair}")));
        }
        let rank = pair.rank(f.n);
        f.bounds[rank] = Some((lo, hi));
        Ok(())
    })
}

/// Parses an instance document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_family` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dr_family_from_json(json: *const c_char, out_family: *mut *mut DrFamily) -> DrStatus {
    guard(|| {
        let family = InstanceDocument::parse(text(json, "json")?)?.to_family()?;
        let handle = DrFamily {
            n: family.n(),
            variant: family.variant(),
            bounds: family.intervals().map(|(_, iv)| Some((iv.lo.clone(), iv.hi.clone()))).collect(),
        };
        out(out_family, Box::into_raw(Box::new(handle)), "out_family")
    })
}

/// # Safety
/// `family` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn dr_family_free(family: *mut DrFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Decides the family. Graph families use the shortest-path test, star
/// families the star decider, and tree families search over `strategy`.
///
/// # Safety
/// `family` must come from this library; `out_decision` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dr_decide(
    family: *const DrFamily,
    strategy: DrStrategy,
    emit_certificates: bool,
    out_decision: *mut *mut DrDecision,
) -> DrStatus {
    guard(|| {
        let f = build_family(family.as_ref().ok_or_else(|| null("family"))?)?;
        let strategy = match strategy {
            DrStrategy::Topology => Strategy::Topology,
            DrStrategy::Raw => Strategy::Raw,
        };
        let document = decide_document(&f, strategy, emit_certificates)?;
        out(out_decision, Box::into_raw(Box::new(DrDecision { document })), "out_decision")
    })
}

/// # Safety
/// `decision` must come from this library; `out_feasible` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dr_decision_is_feasible(decision: *const DrDecision, out_feasible: *mut bool) -> DrStatus {
    guard(|| {
        let d = decision.as_ref().ok_or_else(|| null("decision"))?;
        out(out_feasible, d.document.feasible, "out_feasible")
    })
}

/// The result document as JSON; release it with `dr_string_free`.
///
/// # Safety
/// `decision` must come from this library; `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dr_decision_to_json(decision: *const DrDecision, out_json: *mut *mut c_char) -> DrStatus {
    guard(|| {
        let d = decision.as_ref().ok_or_else(|| null("decision"))?;
        out(out_json, owned_string(to_pretty_json(&d.document)), "out_json")
    })
}

/// # Safety
/// `decision` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn dr_decision_free(decision: *mut DrDecision) {
    if !decision.is_null() {
        drop(Box::from_raw(decision));
    }
}

/// Checks a witness (or a result document carrying one) against an
/// instance. `out_report_json` may be null; otherwise it receives the
/// report, to be released with `dr_string_free`.
///
/// # Safety
/// Both inputs must be NUL-terminated strings; `out_passed` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn dr_verify_json(
    instance_json: *const c_char,
    witness_json: *const c_char,
    out_passed: *mut bool,
    out_report_json: *mut *mut c_char,
) -> DrStatus {
    guard(|| {
        let family = InstanceDocument::parse(text(instance_json, "instance_json")?)?.to_family()?;
        let witness = WitnessDocument::parse(text(witness_json, "witness_json")?)?.to_witness()?;
        let report = match witness {
            Witness::Graph(g) => verify_graph(&g, &family)?,
            Witness::Tree(t) => verify_tree(&t, &family)?,
        };
        out(out_passed, report.passed(), "out_passed")?;
        if !out_report_json.is_null() {
            out_report_json.write(owned_string(to_pretty_json(&ReportDocument::from_report(&report))));
        }
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn dr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or `""`. The
/// pointer stays valid until another call fails on this thread.
#[no_mangle]
pub extern "C" fn dr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
