//! C ABI over the cutoff-tcft engine.
//!
//! Handles are opaque and owned by the caller: every `*_new` or `out`
//! handle is released with the matching `*_free`, every returned string
//! with [`tcft_string_free`]. Functions return a [`TcftStatus`]; on failure
//! [`tcft_last_error_message`] describes the error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use cutoff_tcft::engine::{integrate_chain_in, TensorOperator};
use cutoff_tcft::graph::parse_chain;
use cutoff_tcft::spectral::{Basis, EigenvalueSet};
use cutoff_tcft::verify::{self, CutoffSpec, RunConfig};
use cutoff_tcft::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Parse = 4,
    Engine = 5,
    /// The suite ran but at least one check failed.
    CheckFailed = 6,
    Panic = 7,
}

/// Truncated eigenform space on `T^dim` and the cutoff it was built from.
pub struct TcftEngine {
    config: RunConfig,
    cutoff: EigenvalueSet,
    space: Arc<Basis>,
}

/// A finite operator between tensor powers of the engine's space.
pub struct TcftOperator {
    op: TensorOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> TcftStatus {
    match e {
        Error::Config(_) | Error::InvalidManifold(_) | Error::UnrealizedEigenvalue { .. } => TcftStatus::Config,
        Error::Parse { .. } | Error::Io { .. } => TcftStatus::Parse,
        Error::UnknownTarget(_) | Error::Arity { .. } => TcftStatus::InvalidArgument,
        _ => TcftStatus::Engine,
    }
}

/// Runs `f`, turning errors and panics into a status plus a message.
fn guard(f: impl FnOnce() -> Result<(), (TcftStatus, String)>) -> TcftStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcftStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TcftStatus::Panic
        }
    }
}

fn engine_err(e: Error) -> (TcftStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TcftStatus, String) {
    (TcftStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or points to a live value of type `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (TcftStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TcftStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TcftStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (TcftStatus, String)> {
    let c = CString::new(s).map_err(|_| (TcftStatus::Engine, "string contains NUL".to_string()))?;
    // SAFETY: callers check `out` for null before producing the string.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn give_operator(op: TensorOperator, out: *mut *mut TcftOperator) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(TcftOperator { op })) };
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn tcft_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Engine over eigenvalues `0..=max_eigenvalue` on `T^dim`.
///
/// # Safety
/// `out` is a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn tcft_engine_new(dim: usize, max_eigenvalue: u32, out: *mut *mut TcftEngine) -> TcftStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let config = RunConfig {
            dim,
            cutoff: CutoffSpec::up_to(max_eigenvalue),
            ..RunConfig::default()
        };
        config.validate().map_err(engine_err)?;
        let cutoff = config.cutoff_set().map_err(engine_err)?;
        let space = Basis::shared(dim, &cutoff).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(TcftEngine { config, cutoff, space }));
        Ok(())
    })
}

/// # Safety
/// `engine` is null or a handle from [`tcft_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcft_engine_free(engine: *mut TcftEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Number of basis forms; 0 for a null engine.
///
/// # Safety
/// `engine` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcft_basis_len(engine: *const TcftEngine) -> usize {
    engine.as_ref().map_or(0, |e| e.space.len())
}

/// Label of basis form `index`, e.g. `sin[1,0]dx2`.
///
/// # Safety
/// `engine` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_basis_label(
    engine: *const TcftEngine,
    index: usize,
    out: *mut *mut c_char,
) -> TcftStatus {
    guard(|| {
        let e = borrow(engine, "engine")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if index >= e.space.len() {
            return Err((TcftStatus::InvalidArgument, format!("basis index {index} out of range")));
        }
        give_string(e.space.get(index).to_string(), out)
    })
}

/// Integrates a chain in the text format to an operator.
///
/// # Safety
/// `engine` is a live handle, `chain` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_from_chain(
    engine: *const TcftEngine,
    chain: *const c_char,
    out: *mut *mut TcftOperator,
) -> TcftStatus {
    guard(|| {
        let e = borrow(engine, "engine")?;
        let source = text(chain, "chain")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = parse_chain("<chain>", source).map_err(engine_err)?;
        give_operator(integrate_chain_in(&c, &e.cutoff, &e.space).map_err(engine_err)?, out);
        Ok(())
    })
}

/// The projector onto the space, on `m` factors.
///
/// # Safety
/// `engine` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_identity(
    engine: *const TcftEngine,
    m: usize,
    out: *mut *mut TcftOperator,
) -> TcftStatus {
    guard(|| {
        let e = borrow(engine, "engine")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_operator(TensorOperator::identity(e.space.clone(), m), out);
        Ok(())
    })
}

/// `second ∘ first`.
///
/// # Safety
/// Both operators are live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_compose(
    second: *const TcftOperator,
    first: *const TcftOperator,
    out: *mut *mut TcftOperator,
) -> TcftStatus {
    guard(|| {
        let (s, f) = (borrow(second, "second")?, borrow(first, "first")?);
        if out.is_null() {
            return Err(null("out"));
        }
        give_operator(s.op.compose(&f.op).map_err(engine_err)?, out);
        Ok(())
    })
}

/// Input and output arity.
///
/// # Safety
/// `op` is a live handle; `in_arity` and `out_arity` are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_shape(
    op: *const TcftOperator,
    in_arity: *mut usize,
    out_arity: *mut usize,
) -> TcftStatus {
    guard(|| {
        let o = borrow(op, "op")?;
        if in_arity.is_null() || out_arity.is_null() {
            return Err(null("arity pointer"));
        }
        *in_arity = o.op.in_arity();
        *out_arity = o.op.out_arity();
        Ok(())
    })
}

/// Matrix entry for basis-index tuples `input` and `output`.
///
/// # Safety
/// `op` is a live handle, `input` and `output` point to arrays of the given
/// lengths (either may be null when its length is 0) and `value` is valid.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_entry(
    op: *const TcftOperator,
    input: *const u32,
    input_len: usize,
    output: *const u32,
    output_len: usize,
    value: *mut f64,
) -> TcftStatus {
    guard(|| {
        let o = borrow(op, "op")?;
        if value.is_null() {
            return Err(null("value"));
        }
        let slice = |p: *const u32, n: usize, what: &str| {
            if n == 0 {
                Ok(&[][..])
            } else if p.is_null() {
                Err(null(what))
            } else {
                Ok(std::slice::from_raw_parts(p, n))
            }
        };
        let (i, j) = (slice(input, input_len, "input")?, slice(output, output_len, "output")?);
        if (i.len(), j.len()) != (o.op.in_arity(), o.op.out_arity()) {
            return Err((
                TcftStatus::InvalidArgument,
                format!(
                    "operator takes {} inputs and {} outputs",
                    o.op.in_arity(),
                    o.op.out_arity()
                ),
            ));
        }
        let len = o.op.space().len() as u32;
        if i.iter().chain(j).any(|&k| k >= len) {
            return Err((TcftStatus::InvalidArgument, "basis index out of range".to_string()));
        }
        *value = o.op.get(i, j);
        Ok(())
    })
}

/// Text dump, one nonzero entry per line.
///
/// # Safety
/// `op` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_dump(op: *const TcftOperator, out: *mut *mut c_char) -> TcftStatus {
    guard(|| {
        let o = borrow(op, "op")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(o.op.dump(), out)
    })
}

/// # Safety
/// `op` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcft_operator_free(op: *mut TcftOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `s` is null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tcft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs check groups at the engine's cutoff. `groups` is a comma-separated
/// list, or null for all groups. The report text goes to `report`; the
/// status is `CheckFailed` when any check fails.
///
/// # Safety
/// `engine` is a live handle, `groups` null or a NUL-terminated string and
/// `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcft_run_suite(
    engine: *const TcftEngine,
    groups: *const c_char,
    jobs: usize,
    report: *mut *mut c_char,
) -> TcftStatus {
    let mut passed = true;
    let status = guard(|| {
        let e = borrow(engine, "engine")?;
        if report.is_null() {
            return Err(null("report"));
        }
        let mut config = RunConfig {
            jobs,
            ..e.config.clone()
        };
        if !groups.is_null() {
            let list = text(groups, "groups")?;
            config.catalog = Some(
                list.split(',')
                    .map(str::trim)
                    .filter(|g| !g.is_empty())
                    .map(String::from)
                    .collect(),
            );
        }
        let r = verify::run_suite(&config).map_err(engine_err)?;
        passed = r.passed();
        give_string(r.render(), report)
    });
    if status == TcftStatus::Ok && !passed {
        set_error("at least one check failed");
        return TcftStatus::CheckFailed;
    }
    status
}
