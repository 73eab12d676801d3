//! C ABI over `residue-core`.
//!
//! Every entry point returns a [`ResidueStatus`]. Strings handed out through
//! `out` parameters are owned by the caller and must be released with
//! [`residue_string_free`]; on failure the message is available from
//! [`residue_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use residue_core::cli::{execute, CommandKind, format_output, run_job, split_list, JobFile, OutputMode, Query, Session};
use residue_core::ring::{CoeffField, Ctx, RingContext};
use residue_core::verify::{run_rule, InstanceSpec, Rule};
use residue_core::Error;

/// Result codes of the C ABI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Usage = 4,
    NotZeroDimensional = 5,
    NotCertifiedFree = 6,
    Computation = 7,
    Panic = 8,
}

impl From<&Error> for ResidueStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::MixedDegree { .. } | Error::UnknownVariable { .. } => ResidueStatus::Syntax,
            Error::NotZeroDimensional => ResidueStatus::NotZeroDimensional,
            Error::NotCertifiedFree => ResidueStatus::NotCertifiedFree,
            e if e.is_usage() => ResidueStatus::Usage,
            _ => ResidueStatus::Computation,
        }
    }
}

/// Opaque ring handle.
pub struct ResidueContext {
    ring: Ctx,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Status(ResidueStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ResidueStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ResidueStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(format!("{}: {e}", e.code()));
            ResidueStatus::from(&e)
        }
        Err(_) => {
            set_error("PANIC: computation panicked".into());
            ResidueStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(ResidueStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(ResidueStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn slot<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, Failure> {
    out.as_mut().ok_or_else(|| Failure::Status(ResidueStatus::NullPointer, "`out` is null".into()))
}

fn hand_out(out: &mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Status(ResidueStatus::Computation, "result contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn context<'a>(ctx: *const ResidueContext) -> Result<&'a ResidueContext, Failure> {
    ctx.as_ref().ok_or_else(|| Failure::Status(ResidueStatus::NullPointer, "`ctx` is null".into()))
}

fn session(ring: &Ctx) -> Session {
    Session { ring: Some(ring.clone()), field: ring.field().clone(), seed: 0, trials: 25, timing: false }
}

fn value_text(v: serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn residue_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn residue_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a ring such as `QQ[x,y]`, `Fp:7[x]` or `QQ[y][T]`.
///
/// # Safety
/// `ring` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn residue_context_new(ring: *const c_char, out: *mut *mut ResidueContext) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let ring = RingContext::parse(text(ring, "ring")?)?;
        *out = Box::into_raw(Box::new(ResidueContext { ring }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`residue_context_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn residue_context_free(ctx: *mut ResidueContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Canonical text of the ring.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_context_describe(ctx: *const ResidueContext, out: *mut *mut c_char) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let c = context(ctx)?;
        hand_out(out, c.ring.to_string())
    })
}

/// `Res[form; denoms]` over the whole ring; `denoms` is comma-separated.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_symbol(
    ctx: *const ResidueContext,
    form: *const c_char,
    denoms: *const c_char,
    out: *mut *mut c_char,
) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let c = context(ctx)?;
        let mut q = Query::new(CommandKind::Residue);
        q.form = Some(text(form, "form")?.to_string());
        q.denoms = Some(split_list(text(denoms, "denoms")?));
        hand_out(out, value_text(execute(&session(&c.ring), &q)?))
    })
}

/// Trace of `element` for the finite algebra cut out by `relations`
/// (comma-separated) over the base block.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_trace(
    ctx: *const ResidueContext,
    relations: *const c_char,
    element: *const c_char,
    out: *mut *mut c_char,
) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let c = context(ctx)?;
        let mut q = Query::new(CommandKind::Trace);
        q.denoms = Some(split_list(text(relations, "relations")?));
        q.element = Some(text(element, "element")?.to_string());
        hand_out(out, value_text(execute(&session(&c.ring), &q)?))
    })
}

/// Runs one query given as a JSON object (same schema as a job query) and
/// returns its value as JSON.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_query(ctx: *const ResidueContext, query_json: *const c_char, out: *mut *mut c_char) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let c = context(ctx)?;
        let q: Query = serde_json::from_str(text(query_json, "query_json")?)
            .map_err(|e| Failure::Core(Error::Syntax { line: e.line(), col: e.column(), msg: e.to_string() }))?;
        hand_out(out, execute(&session(&c.ring), &q)?.to_string())
    })
}

/// Runs a job file and returns one JSON record per line.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_run_job(job_json: *const c_char, out: *mut *mut c_char) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let job = JobFile::parse(text(job_json, "job_json")?)?;
        let ring = job.ring.context()?;
        let records = run_job(&job, &session(&ring));
        let ndjson: String = records.iter().map(|r| format_output(r, OutputMode::Json)).collect();
        hand_out(out, ndjson)
    })
}

/// Runs `trials` trials of a conformance rule (`"R1"` … `"R10"`,
/// `"jacobian"`, `"tate"`, `"pairing"`, `"sum"`, `"cech"`) and returns the
/// report as JSON. `field` is `"QQ"` or `"Fp:p"`.
///
/// # Safety
/// Pointer arguments must be valid as documented on the module.
#[no_mangle]
pub unsafe extern "C" fn residue_verify(
    rule: *const c_char,
    n: usize,
    m: usize,
    degree: u32,
    field: *const c_char,
    seed: u64,
    trials: u64,
    out: *mut *mut c_char,
) -> ResidueStatus {
    guard(|| {
        let out = slot(out)?;
        let rule: Rule = text(rule, "rule")?.parse()?;
        let field = CoeffField::parse(text(field, "field")?)?;
        let spec = InstanceSpec { n, m, degree, field, seed };
        let mut report = run_rule(rule, trials, &spec)?;
        report.wall_time_ms = None;
        hand_out(out, serde_json::to_string(&report).expect("serializable"))
    })
}
