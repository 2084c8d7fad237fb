//! C ABI over `hoffman-core`.
//!
//! Instances are opaque handles. Every entry point returns a [`HofStatus`];
//! results come back as NUL-terminated JSON strings owned by the caller and
//! released with [`hof_string_free`]. On failure the message is available from
//! [`hof_last_error`] on the same thread. Vectors are passed as comma-separated
//! rationals such as `"0,1/2,-3"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hoffman::exact::{parse_vector, Vector};
use hoffman::instance_file::{parse_instance_text, ParseMode, ParsedInstance};
use hoffman::validator::{self, SampleConfig};
use hoffman::{instances, kkt, moduli, report, segment, Error, Limits};

/// Status codes. Values 2 to 4 match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HofStatus {
    Ok = 0,
    /// A required pointer was null or a handle was misused.
    InvalidArgument = 1,
    /// Malformed input: JSON, rationals, dimensions.
    InputError = 2,
    /// The parameter or point lies outside the domain of the computation.
    DomainError = 3,
    /// An enumeration cap was exceeded.
    CapExceeded = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Opaque problem instance.
pub struct HofInstance {
    parsed: ParsedInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HofStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            3 => HofStatus::DomainError,
            4 => HofStatus::CapExceeded,
            _ => HofStatus::InputError,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(HofStatus::InvalidArgument, msg.to_string())
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HofStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(Failure(HofStatus::Panic, format!("panic: {msg}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            HofStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(Some(msg));
            status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HofStatus::InputError, format!("{what} is not valid UTF-8")))
}

unsafe fn vector(p: *const c_char, what: &str) -> Result<Vector, Failure> {
    parse_vector(text(p, what)?).map_err(|e| Failure(HofStatus::InputError, format!("{what}: {e}")))
}

unsafe fn handle<'a>(inst: *const HofInstance) -> Result<&'a HofInstance, Failure> {
    inst.as_ref().ok_or_else(|| invalid("instance is null"))
}

unsafe fn emit(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    let c = CString::new(value).map_err(|_| invalid("result contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

/// Runs `f` on the instance and writes its JSON to `out`.
unsafe fn with_instance(
    inst: *const HofInstance,
    out: *mut *mut c_char,
    f: impl FnOnce(&ParsedInstance) -> Result<serde_json::Value, Failure>,
) -> HofStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = ptr::null_mut();
        let value = f(&handle(inst)?.parsed)?;
        emit(out, value.to_string())
    })
}

unsafe fn store(out: *mut *mut HofInstance, parsed: ParsedInstance) {
    *out = Box::into_raw(Box::new(HofInstance { parsed }));
}

/// Parses an instance from JSON text. `lenient` ignores unknown fields.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hof_instance_from_json(json: *const c_char, lenient: bool, out: *mut *mut HofInstance) -> HofStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = ptr::null_mut();
        let mode = if lenient { ParseMode::Lenient } else { ParseMode::Strict };
        store(out, parse_instance_text(text(json, "json")?, mode)?);
        Ok(())
    })
}

/// Looks up a bundled instance: instanceA, instanceB, instanceC or zeroRows.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hof_instance_bundled(name: *const c_char, out: *mut *mut HofInstance) -> HofStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = ptr::null_mut();
        let name = text(name, "name")?;
        let parsed = instances::bundled(name)
            .ok_or_else(|| Failure(HofStatus::InputError, format!("{name}: no such bundled instance")))?;
        store(out, parsed);
        Ok(())
    })
}

/// Sets the constraint enumeration cap (the analogue of `HOFFMAN_ENUM_CAP`).
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hof_instance_set_enum_cap(inst: *mut HofInstance, cap: usize) -> HofStatus {
    guard(|| {
        let inst = inst.as_mut().ok_or_else(|| invalid("instance is null"))?;
        if cap == 0 {
            return Err(invalid("cap must be positive"));
        }
        inst.parsed.instance = inst.parsed.instance.clone().with_limits(Limits::with_constraint_cap(cap));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hof_instance_free(inst: *mut HofInstance) {
    if !inst.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(inst))));
    }
}

/// Hex SHA-256 digest of the canonical instance JSON.
///
/// # Safety
/// `inst` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hof_instance_digest(inst: *const HofInstance, out: *mut *mut c_char) -> HofStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = ptr::null_mut();
        emit(out, report::instance_digest(&handle(inst)?.parsed.instance))
    })
}

/// Minimal KKT subsets; pass `b = NULL` for the whole family.
///
/// # Safety
/// `inst` must be a live handle, `b` null or a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_kkt(inst: *const HofInstance, b: *const c_char, out: *mut *mut c_char) -> HofStatus {
    with_instance(inst, out, |p| {
        let family = if b.is_null() {
            kkt::minimal_kkt_family(&p.instance)?
        } else {
            kkt::minimal_kkt_at(&p.instance, &vector(b, "b")?)?
        };
        Ok(report::family_result(&family))
    })
}

/// Hoffman constant with its witness.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_hoffman(inst: *const HofInstance, out: *mut *mut c_char) -> HofStatus {
    with_instance(inst, out, |p| Ok(report::modulus_result(&moduli::hoffman_constant(&p.instance)?)))
}

/// Calmness modulus at `(b, x)`.
///
/// # Safety
/// `inst` must be a live handle, `b` and `x` NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_calmness(
    inst: *const HofInstance,
    b: *const c_char,
    x: *const c_char,
    out: *mut *mut c_char,
) -> HofStatus {
    with_instance(inst, out, |p| {
        let r = moduli::calmness_modulus(&p.instance, &vector(b, "b")?, &vector(x, "x")?)?;
        Ok(report::modulus_result(&r))
    })
}

/// Lipschitz upper semicontinuity modulus at `b`.
///
/// # Safety
/// `inst` must be a live handle, `b` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_lipschitz_usc(inst: *const HofInstance, b: *const c_char, out: *mut *mut c_char) -> HofStatus {
    with_instance(inst, out, |p| {
        Ok(report::modulus_result(&moduli::lipschitz_usc_modulus(&p.instance, &vector(b, "b")?)?))
    })
}

/// Break steps and pieces of the segment from `from` to `to`.
///
/// # Safety
/// `inst` must be a live handle, `from` and `to` NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_breaks(
    inst: *const HofInstance,
    from: *const c_char,
    to: *const c_char,
    out: *mut *mut c_char,
) -> HofStatus {
    with_instance(inst, out, |p| {
        let s = segment::connecting_subdivision(&p.instance, &vector(from, "from")?, &vector(to, "to")?)?;
        Ok(report::segment_result(&s))
    })
}

/// Hoffman constant under joint perturbations of `(c, b)`.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_canonical(inst: *const HofInstance, out: *mut *mut c_char) -> HofStatus {
    with_instance(inst, out, |p| Ok(report::canonical_result(moduli::canonical_hoffman(&p.instance))))
}

/// Sampling validation with the default radius and grid.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hof_validate(
    inst: *const HofInstance,
    seed: u64,
    samples: usize,
    out: *mut *mut c_char,
) -> HofStatus {
    with_instance(inst, out, |p| {
        let cfg = SampleConfig::new(seed, samples);
        let r = validator::validate(&p.instance, &cfg)?;
        Ok(report::validation_result(&r, seed, samples))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hof_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hof_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hof_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
