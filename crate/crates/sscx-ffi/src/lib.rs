//! C ABI for the sscx library.
//!
//! Conventions, mirrored in the generated `include/sscx.h`:
//!
//! - every fallible function returns an [`SscxStatus`] and writes its result
//!   through out pointers only on `SSCX_STATUS_OK`;
//! - strings returned through `*mut c_char` out parameters are heap
//!   allocated and must be released with `sscx_string_free`;
//! - [`sscx_last_error_message`] describes the most recent failure on the
//!   calling thread;
//! - panics never unwind across the boundary; they surface as
//!   `SSCX_STATUS_PANIC`.
//!
//! Handles are immutable after creation, so one handle may be shared across
//! threads as long as `sscx_brandt_free` is called exactly once.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sscx::semigroup::FiniteSemigroup;
use sscx::{brandt, relation, semigroup, verify, ElementSet, Error};

/// Result code returned by every fallible entry point.
///
/// Passing a value outside this enumeration back into the library is
/// undefined behavior.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SscxStatus {
    /// The call succeeded and every out parameter was written.
    Ok = 0,
    /// A pointer was null or a scalar argument was out of range.
    InvalidArgument = 1,
    /// The request exceeds a library cap; nothing was computed.
    SizeLimit = 2,
    /// The input is structurally outside the domain of the operation.
    Unsupported = 3,
    /// A documented precondition of the operation does not hold.
    Contract = 4,
    /// Malformed textual input.
    Parse = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// Opaque handle to the aperiodic Brandt semigroup B(n).
pub struct SscxBrandt {
    degree: usize,
    semigroup: FiniteSemigroup,
}

struct Failure {
    status: SscxStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::SizeLimit { .. } => SscxStatus::SizeLimit,
            Error::Unsupported(_) => SscxStatus::Unsupported,
            Error::Contract(_) => SscxStatus::Contract,
            Error::Parse(_) => SscxStatus::Parse,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        status: SscxStatus::InvalidArgument,
        message: message.into(),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> SscxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SscxStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic across the C boundary".to_string());
            set_last_error(&message);
            SscxStatus::Panic
        }
    }
}

unsafe fn out_slot<'a, T>(out: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    out.as_mut()
        .ok_or_else(|| invalid(format!("{name} must not be null")))
}

unsafe fn handle_ref<'a>(handle: *const SscxBrandt) -> Result<&'a SscxBrandt, Failure> {
    handle
        .as_ref()
        .ok_or_else(|| invalid("handle must not be null"))
}

unsafe fn id_slice<'a>(ids: *const usize, len: usize) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ids.is_null() {
        return Err(invalid("ids must not be null when len > 0"));
    }
    Ok(std::slice::from_raw_parts(ids, len))
}

fn element_set(h: &SscxBrandt, ids: &[usize]) -> Result<ElementSet, Failure> {
    let order = h.semigroup.size();
    if let Some(&bad) = ids.iter().find(|&&id| id >= order) {
        return Err(invalid(format!(
            "element id {bad} is out of range for B({})",
            h.degree
        )));
    }
    Ok(ElementSet::from_elems(order, ids.iter().copied()))
}

fn export_string(slot: &mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|_| Failure {
        status: SscxStatus::Contract,
        message: "interior NUL in output".into(),
    })?;
    *slot = c.into_raw();
    Ok(())
}

/// Returns the library version as a static string; never free it.
#[no_mangle]
pub extern "C" fn sscx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Returns a static name for a status code; never free it.
#[no_mangle]
pub extern "C" fn sscx_status_name(status: SscxStatus) -> *const c_char {
    let name: &'static str = match status {
        SscxStatus::Ok => "ok\0",
        SscxStatus::InvalidArgument => "invalid-argument\0",
        SscxStatus::SizeLimit => "size-limit\0",
        SscxStatus::Unsupported => "unsupported\0",
        SscxStatus::Contract => "contract\0",
        SscxStatus::Parse => "parse\0",
        SscxStatus::Panic => "panic\0",
    };
    name.as_ptr().cast()
}

/// Returns the message recorded by the most recent failing call on this
/// thread, or an empty string. The pointer stays valid until the next
/// failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn sscx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates B(n) and writes an owned handle to `out`.
///
/// Element ids follow the library convention: 0 is the zero and the pair
/// (i,j) with 1 <= i,j <= n has id (i-1)*n + j.
///
/// # Safety
/// `out` must be a valid pointer. On `SSCX_STATUS_OK` the caller owns the
/// handle and must release it with `sscx_brandt_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_brandt_new(degree: usize, out: *mut *mut SscxBrandt) -> SscxStatus {
    guarded(|| {
        let slot = out_slot(out, "out")?;
        let semigroup = semigroup::brandt(degree)?;
        *slot = Box::into_raw(Box::new(SscxBrandt { degree, semigroup }));
        Ok(())
    })
}

/// Releases a handle created by `sscx_brandt_new`; null is a no-op.
///
/// # Safety
/// `handle` must be null or a handle that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn sscx_brandt_free(handle: *mut SscxBrandt) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Returns n for a B(n) handle, or 0 if `handle` is null.
///
/// # Safety
/// `handle` must be null or a live handle from `sscx_brandt_new`.
#[no_mangle]
pub unsafe extern "C" fn sscx_brandt_degree(handle: *const SscxBrandt) -> usize {
    handle.as_ref().map_or(0, |h| h.degree)
}

/// Returns the element count n*n + 1, or 0 if `handle` is null.
///
/// # Safety
/// `handle` must be null or a live handle from `sscx_brandt_new`.
#[no_mangle]
pub unsafe extern "C" fn sscx_brandt_order(handle: *const SscxBrandt) -> usize {
    handle.as_ref().map_or(0, |h| h.semigroup.size())
}

/// Writes the display name of an element id (`"0"` or `"(i,j)"`).
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer. Release the
/// string with `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_element_name(
    handle: *const SscxBrandt,
    id: usize,
    out: *mut *mut c_char,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        if id >= h.semigroup.size() {
            return Err(invalid(format!(
                "element id {id} is out of range for B({})",
                h.degree
            )));
        }
        export_string(slot, h.semigroup.name(id).to_string())
    })
}

/// Writes the product of two element ids to `out`.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sscx_product(
    handle: *const SscxBrandt,
    a: usize,
    b: usize,
    out: *mut usize,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let order = h.semigroup.size();
        if a >= order || b >= order {
            return Err(invalid(format!("element ids must be below {order}")));
        }
        *slot = h.semigroup.product(a, b);
        Ok(())
    })
}

/// Tests whether the listed element ids form a face of H(B(n)).
///
/// Uses the separating-edge peeling fast path; duplicates in `ids` are
/// allowed and the empty set is a face.
///
/// # Safety
/// `handle` must be a live handle, `ids` must point to `len` readable
/// elements (or be null when `len` is 0), and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sscx_is_face(
    handle: *const SscxBrandt,
    ids: *const usize,
    len: usize,
    out: *mut bool,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let set = element_set(h, id_slice(ids, len)?)?;
        *slot = brandt::is_face_fast(h.degree, &set)?;
        Ok(())
    })
}

/// Tests membership in the inverse subsemigroup complex IH0(B(n)).
///
/// # Safety
/// Same contract as `sscx_is_face`.
#[no_mangle]
pub unsafe extern "C" fn sscx_is_inverse_face(
    handle: *const SscxBrandt,
    ids: *const usize,
    len: usize,
    out: *mut bool,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let set = element_set(h, id_slice(ids, len)?)?;
        *slot = brandt::inverse_complex_face(h.degree, &set)?;
        Ok(())
    })
}

/// Runs the peeling witness on the listed element ids and writes a JSON
/// document: `{"face":true,"enumeration":[...],"schema":1}` on success,
/// `{"face":false,"schema":1,"stuck":[...]}` otherwise, where `enumeration`
/// is an admissible order and `stuck` is the chord-only residual arc set,
/// both as element ids.
///
/// # Safety
/// `handle` must be a live handle, `ids` must point to `len` readable
/// elements (or be null when `len` is 0), and `out` must be valid. Release
/// the string with `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_peel_json(
    handle: *const SscxBrandt,
    ids: *const usize,
    len: usize,
    out: *mut *mut c_char,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let set = element_set(h, id_slice(ids, len)?)?;
        let value = match brandt::peel(h.degree, &set)? {
            brandt::PeelOutcome::Face { enumeration } => serde_json::json!({
                "schema": 1,
                "face": true,
                "enumeration": enumeration,
            }),
            brandt::PeelOutcome::NotFace { stuck } => serde_json::json!({
                "schema": 1,
                "face": false,
                "stuck": stuck.to_vec(),
            }),
        };
        export_string(slot, value.to_string())
    })
}

/// Writes the number of facets of H(B(n)) to `out`.
///
/// Facet enumeration is capped; beyond the cap the call returns
/// `SSCX_STATUS_SIZE_LIMIT` and leaves `out` untouched.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sscx_facet_count(handle: *const SscxBrandt, out: *mut u64) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let count = brandt::facet_count(h.degree)?;
        *slot = u64::try_from(&count).map_err(|_| Failure {
            status: SscxStatus::SizeLimit,
            message: format!("facet count {count} does not fit in 64 bits"),
        })?;
        Ok(())
    })
}

/// Writes every facet of H(B(n)) as a JSON document
/// `{"count":...,"degree":n,"facets":[[ids...],...],"schema":1}`.
///
/// The facet order and the bytes are stable across calls. The same cap as
/// `sscx_facet_count` applies.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer. Release the
/// string with `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_facets_json(
    handle: *const SscxBrandt,
    out: *mut *mut c_char,
) -> SscxStatus {
    guarded(|| {
        let h = handle_ref(handle)?;
        let slot = out_slot(out, "out")?;
        let facets: Vec<Vec<usize>> = brandt::enumerate_facets(h.degree)?
            .iter()
            .map(ElementSet::to_vec)
            .collect();
        let value = serde_json::json!({
            "schema": 1,
            "degree": h.degree,
            "count": facets.len(),
            "facets": facets,
        });
        export_string(slot, value.to_string())
    })
}

/// Writes T(n), the number of transitive binary relations on an n-element
/// set, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer. Release the string with
/// `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_transitive_count(degree: usize, out: *mut *mut c_char) -> SscxStatus {
    guarded(|| {
        let slot = out_slot(out, "out")?;
        export_string(slot, relation::count_transitive(degree)?.to_string())
    })
}

/// Writes the number of subsemigroups of B(n), T(n) + n + 1, as a decimal
/// string.
///
/// # Safety
/// `out` must be a valid pointer. Release the string with
/// `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_subsemigroup_count(
    degree: usize,
    out: *mut *mut c_char,
) -> SscxStatus {
    guarded(|| {
        let slot = out_slot(out, "out")?;
        export_string(slot, relation::count_subsemigroups(degree)?.to_string())
    })
}

/// Returns the number of verification criteria; their ids are 1-based.
#[no_mangle]
pub extern "C" fn sscx_criterion_count() -> usize {
    verify::criterion_count()
}

/// Writes the name of verification criterion `id` (ids run from 1 to
/// `sscx_criterion_count`).
///
/// # Safety
/// `out` must be a valid pointer. Release the string with
/// `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_criterion_name(id: usize, out: *mut *mut c_char) -> SscxStatus {
    guarded(|| {
        let slot = out_slot(out, "out")?;
        let name = verify::criterion_name(id)
            .ok_or_else(|| invalid(format!("no criterion has id {id}")))?;
        export_string(slot, name.to_string())
    })
}

/// Runs verification criterion `id`, writing the verdict to `out_passed`
/// and a newline-separated detail report to `out_report`.
///
/// Some criteria take seconds; the verdict is deterministic.
///
/// # Safety
/// `out_passed` and `out_report` must be valid pointers. Release the report
/// with `sscx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sscx_run_criterion(
    id: usize,
    out_passed: *mut bool,
    out_report: *mut *mut c_char,
) -> SscxStatus {
    guarded(|| {
        let passed_slot = out_slot(out_passed, "out_passed")?;
        let report_slot = out_slot(out_report, "out_report")?;
        if verify::criterion_name(id).is_none() {
            return Err(invalid(format!("no criterion has id {id}")));
        }
        let report = verify::run_criterion(id);
        let mut lines = vec![report.name.to_string()];
        lines.extend(report.details.iter().cloned());
        *passed_slot = report.passed;
        export_string(report_slot, lines.join("\n"))
    })
}

/// Releases a string returned by this library; null is a no-op.
///
/// # Safety
/// `s` must be null or a string pointer obtained from this library that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn sscx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
