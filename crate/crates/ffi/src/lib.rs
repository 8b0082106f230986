//! C interface to `cuboid-core`.
//!
//! Every fallible call returns a [`CuboidStatus`] and writes its result
//! through an out-pointer. Handles are opaque and owned by the caller, who
//! releases them with the matching `*_free` function; strings returned to C
//! are released with [`cuboid_string_free`]. Numbers cross the boundary as
//! decimal `"p/q"` text so no precision is lost.
//!
//! After a non-`Ok` status, [`cuboid_last_error`] describes the failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;

use cuboid_core::cuboid::CuboidRecord;
use cuboid_core::inverse::RecoveredRecord;
use cuboid_core::json::PointRecord;
use cuboid_core::{
    build_npc, recover, Cuboid, Curve, CurvePoint, Error, FactorBudget, InverseFamily, Parametrization, Rational,
    RecoveredSolutions, SolutionPair,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuboidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    BudgetExhausted = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Which of the three reflections [`cuboid_point_reflect`] applies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuboidReflection {
    First = 1,
    Second = 2,
    Third = 3,
}

/// A point on a congruent number curve, or its point at infinity.
pub struct CuboidPoint(CurvePoint);

/// A nearly-perfect cuboid together with its `a`-`b` diagonal square.
pub struct CuboidNpc(Cuboid);

/// Congruent number and solution pairs recovered from a cuboid.
pub struct CuboidRecovered(RecoveredSolutions);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CuboidStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => CuboidStatus::ParseError,
            e if e.is_resource_exhaustion() => CuboidStatus::BudgetExhausted,
            _ => CuboidStatus::DomainError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CuboidStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, catching panics and recording errors for [`cuboid_last_error`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CuboidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CuboidStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CuboidStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CuboidStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn rational(p: *const c_char, what: &str) -> Result<Rational, Failure> {
    text(p, what)?
        .parse()
        .map_err(|e: Error| Failure(CuboidStatus::ParseError, format!("{what}: {e}")))
}

unsafe fn curve(n: *const c_char) -> Result<Curve, Failure> {
    let s = text(n, "n")?;
    let n: num_bigint::BigInt = s
        .trim()
        .parse()
        .map_err(|_| Failure(CuboidStatus::ParseError, format!("n: {s:?} is not an integer")))?;
    Ok(Curve::new(n)?)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cuboid_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cuboid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validated affine point on `y^2 = x^3 - n^2 x`.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_new(
    n: *const c_char,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut CuboidPoint,
) -> CuboidStatus {
    guard(|| {
        let p = CurvePoint::new(curve(n)?, rational(x, "x")?, rational(y, "y")?)?;
        put(out, CuboidPoint(p))
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_free(p: *mut CuboidPoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_add(
    a: *const CuboidPoint,
    b: *const CuboidPoint,
    out: *mut *mut CuboidPoint,
) -> CuboidStatus {
    guard(|| {
        let sum = handle(a, "a")?.0.add(&handle(b, "b")?.0)?;
        put(out, CuboidPoint(sum))
    })
}

/// # Safety
/// `p` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_double(p: *const CuboidPoint, out: *mut *mut CuboidPoint) -> CuboidStatus {
    guard(|| put(out, CuboidPoint(handle(p, "p")?.0.double())))
}

/// # Safety
/// `p` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_mul(p: *const CuboidPoint, k: i64, out: *mut *mut CuboidPoint) -> CuboidStatus {
    guard(|| put(out, CuboidPoint(handle(p, "p")?.0.mul(k))))
}

/// # Safety
/// `p` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_reflect(
    p: *const CuboidPoint,
    which: CuboidReflection,
    out: *mut *mut CuboidPoint,
) -> CuboidStatus {
    guard(|| {
        let p = &handle(p, "p")?.0;
        let r = match which {
            CuboidReflection::First => p.reflect_first()?,
            CuboidReflection::Second => p.reflect_second()?,
            CuboidReflection::Third => p.reflect_third()?,
        };
        put(out, CuboidPoint(r))
    })
}

/// False when `p` is null.
///
/// # Safety
/// `p` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_is_infinity(p: *const CuboidPoint) -> bool {
    p.as_ref().is_some_and(|p| p.0.is_infinity())
}

/// `{"N": .., "x": "p/q", "y": "p/q"}` or `{"N": .., "infinity": true}`.
///
/// # Safety
/// `p` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_point_to_json(p: *const CuboidPoint, out: *mut *mut c_char) -> CuboidStatus {
    guard(|| put_string(out, json(&PointRecord::from_point(&handle(p, "p")?.0))))
}

/// Cuboid from the pair with x-coordinates `x`, `z` on curve `n`.
///
/// `param` is one of `first`, `first_reflected`, `second`,
/// `second_reflected`, `invariant`.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_npc_generate(
    n: *const c_char,
    x: *const c_char,
    z: *const c_char,
    param: *const c_char,
    out: *mut *mut CuboidNpc,
) -> CuboidStatus {
    guard(|| {
        let c = curve(n)?;
        let param: Parametrization = text(param, "param")?.parse()?;
        let pair = SolutionPair::from_x(&c, &rational(x, "x")?, &rational(z, "z")?)?;
        put(out, CuboidNpc(build_npc(&pair, param)?))
    })
}

/// Cuboid from a JSON record with fields `a`, `b`, `c`, `d_ac`, `d_bc`, `d_s`.
///
/// # Safety
/// `record` must be null or nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_npc_from_json(record: *const c_char, out: *mut *mut CuboidNpc) -> CuboidStatus {
    guard(|| {
        let rec: CuboidRecord = serde_json::from_str(text(record, "record")?)
            .map_err(|e| Failure(CuboidStatus::ParseError, e.to_string()))?;
        put(out, CuboidNpc(rec.to_cuboid()?))
    })
}

/// # Safety
/// `c` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cuboid_npc_free(c: *mut CuboidNpc) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Writes whether all relations hold and whether the box is perfect.
///
/// # Safety
/// `c` must be live; `valid` and `pc` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_npc_verify(c: *const CuboidNpc, valid: *mut bool, pc: *mut bool) -> CuboidStatus {
    guard(|| {
        let c = &handle(c, "cuboid")?.0;
        if valid.is_null() || pc.is_null() {
            return Err(null("out"));
        }
        let ok = c.verify().is_empty();
        *valid = ok;
        *pc = ok && c.pc_condition();
        Ok(())
    })
}

/// # Safety
/// `c` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_npc_to_json(c: *const CuboidNpc, out: *mut *mut c_char) -> CuboidStatus {
    guard(|| put_string(out, json(&CuboidRecord::from_cuboid(&handle(c, "cuboid")?.0, None))))
}

/// Recovers `N` and the solution pairs; `family` is `invariant`, `first` or `second`.
///
/// # Safety
/// `c` must be live, `family` null or nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_invert(
    c: *const CuboidNpc,
    family: *const c_char,
    out: *mut *mut CuboidRecovered,
) -> CuboidStatus {
    guard(|| {
        let c = &handle(c, "cuboid")?.0;
        let family: InverseFamily = text(family, "family")?.parse()?;
        let budget = FactorBudget::from_env()?;
        put(out, CuboidRecovered(recover(c, family, &budget)?))
    })
}

/// # Safety
/// `r` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cuboid_recovered_free(r: *mut CuboidRecovered) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_recovered_n(r: *const CuboidRecovered, out: *mut *mut c_char) -> CuboidStatus {
    guard(|| put_string(out, handle(r, "recovered")?.0.n.to_string()))
}

/// Number of recovered pairs; 0 when `r` is null.
///
/// # Safety
/// `r` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn cuboid_recovered_pair_count(r: *const CuboidRecovered) -> usize {
    r.as_ref().map_or(0, |r| r.0.pairs.len())
}

/// X and Z of pair `index` (I, II, III, IV in that order).
///
/// # Safety
/// `r` must be live; `x` and `z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_recovered_pair(
    r: *const CuboidRecovered,
    index: usize,
    x: *mut *mut c_char,
    z: *mut *mut c_char,
) -> CuboidStatus {
    guard(|| {
        let r = &handle(r, "recovered")?.0;
        let p = r.pairs.get(index).ok_or_else(|| {
            Failure(
                CuboidStatus::OutOfRange,
                format!("pair index {index} out of range (have {})", r.pairs.len()),
            )
        })?;
        if x.is_null() || z.is_null() {
            return Err(null("out"));
        }
        put_string(x, p.pair.x().to_string())?;
        put_string(z, p.pair.z().to_string())
    })
}

/// # Safety
/// `r` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cuboid_recovered_to_json(r: *const CuboidRecovered, out: *mut *mut c_char) -> CuboidStatus {
    guard(|| put_string(out, json(&RecoveredRecord::from(&handle(r, "recovered")?.0))))
}
