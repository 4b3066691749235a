//! C interface to `biamalg_core`.
//!
//! Every entry point returns a [`BiamalgStatus`]. On failure a message is
//! kept per thread and can be read with [`biamalg_last_error_message`] until
//! the next failing call on the same thread. Scripts are loaded into an
//! opaque [`BiamalgEnv`] handle which the caller releases with
//! [`biamalg_env_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use biamalg_core::error::Error;
use biamalg_core::harness::{verify, HarnessOptions, TheoremId};
use biamalg_core::instances::{fuzz, InstanceGenConfig};
use biamalg_core::properties::{check_property, Property};
use biamalg_core::report::verdict_line;
use biamalg_core::ring::Caps;
use biamalg_core::script::{eval_script_with_caps, parse_script, Env, ScriptError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiamalgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// invalid datum, unknown name or ill-typed binding
    Invalid = 4,
    CapExceeded = 5,
    /// a theorem's two sides disagree
    Disagreement = 6,
    Panic = 7,
}

/// A loaded script.
pub struct BiamalgEnv {
    env: Env,
}

/// Both sides of one theorem evaluation.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BiamalgVerdict {
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BiamalgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::SizeCap { .. } | Error::LatticeTooLarge { .. } => BiamalgStatus::CapExceeded,
            Error::OracleDisagreement(_) => BiamalgStatus::Disagreement,
            _ => BiamalgStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

impl From<ScriptError> for Failure {
    fn from(e: ScriptError) -> Self {
        match e {
            ScriptError::Parse(_) => Failure(BiamalgStatus::Parse, e.to_string()),
            ScriptError::Eval { line, error } => {
                let Failure(status, msg) = Failure::from(error);
                Failure(status, format!("line {line}: {msg}"))
            }
            ScriptError::Lookup(msg) => Failure(BiamalgStatus::Invalid, msg),
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BiamalgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BiamalgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            BiamalgStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(BiamalgStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(BiamalgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a>(env: *const BiamalgEnv) -> Result<&'a BiamalgEnv, Failure> {
    env.as_ref()
        .ok_or_else(|| Failure(BiamalgStatus::NullArgument, "env is null".to_string()))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(BiamalgStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn theorem_id(name: &str) -> Result<TheoremId, Failure> {
    name.parse().map_err(Failure::from)
}

fn caps_with(mut caps: Caps, max_ring_size: usize, max_ideal_enum: usize) -> Caps {
    if max_ring_size != 0 {
        caps.max_ring_size = max_ring_size;
    }
    if max_ideal_enum != 0 {
        caps.max_ideal_enum = max_ideal_enum;
    }
    caps
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn biamalg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn biamalg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Length in bytes of the last error message, without the terminator.
#[no_mangle]
pub extern "C" fn biamalg_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Parse and evaluate a script. A zero cap keeps the script's own option,
/// or the library default when the script sets none.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn biamalg_env_load(
    source: *const c_char,
    max_ring_size: usize,
    max_ideal_enum: usize,
    out: *mut *mut BiamalgEnv,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let source = text(source, "source")?;
        let script = parse_script(source).map_err(ScriptError::from)?;
        let base = script.options.as_ref().map_or(Caps::default(), |o| o.apply(Caps::default()));
        let caps = caps_with(base, max_ring_size, max_ideal_enum);
        let env = eval_script_with_caps(&script, caps)?;
        *out = Box::into_raw(Box::new(BiamalgEnv { env }));
        Ok(())
    })
}

/// Release an environment. NULL is ignored.
///
/// # Safety
/// `env` must come from [`biamalg_env_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn biamalg_env_free(env: *mut BiamalgEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Number of elements of a ring bound in the script.
///
/// # Safety
/// Pointers must be valid; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn biamalg_ring_size(
    env: *const BiamalgEnv,
    name: *const c_char,
    out_size: *mut usize,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out_size, "out_size")?;
        let env = handle(env)?;
        let ring = env.env.ring(text(name, "name")?)?;
        *out_size = ring.size();
        Ok(())
    })
}

/// Decide a property (`chained`, `arithmetical`, `reduced`, `wdim-le-1`,
/// `von-neumann-regular`, `coherent`, `semihereditary`) of a bound ring.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn biamalg_check_property(
    env: *const BiamalgEnv,
    property: *const c_char,
    ring: *const c_char,
    out_holds: *mut bool,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out_holds, "out_holds")?;
        let env = handle(env)?;
        let name = text(property, "property")?;
        let property = Property::from_name(name)
            .ok_or_else(|| Failure(BiamalgStatus::Invalid, format!("unknown property `{name}`")))?;
        let ring = env.env.ring(text(ring, "ring")?)?;
        *out_holds = check_property(ring, property, &env.env.caps)?.holds;
        Ok(())
    })
}

/// Evaluate both sides of a theorem on a datum bound in the script. A
/// disagreement still fills `out` and returns `Disagreement`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn biamalg_verify(
    env: *const BiamalgEnv,
    theorem: *const c_char,
    datum: *const c_char,
    out: *mut BiamalgVerdict,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let env = handle(env)?;
        let theorem = theorem_id(text(theorem, "theorem")?)?;
        let datum = env.env.datum(text(datum, "datum")?)?;
        let opts = HarnessOptions {
            caps: env.env.caps,
            mutant: false,
        };
        let v = verify(theorem, datum, &opts)?;
        *out = BiamalgVerdict {
            lhs: v.lhs,
            rhs: v.rhs,
            agree: v.agree,
        };
        if v.agree {
            Ok(())
        } else {
            Err(Failure(BiamalgStatus::Disagreement, verdict_line(&v)))
        }
    })
}

/// Like [`biamalg_verify`] but hands back the verdict as a record line.
/// The string is released with [`biamalg_string_free`].
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn biamalg_verify_record(
    env: *const BiamalgEnv,
    theorem: *const c_char,
    datum: *const c_char,
    out_line: *mut *mut c_char,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out_line, "out_line")?;
        *out_line = ptr::null_mut();
        let env = handle(env)?;
        let theorem = theorem_id(text(theorem, "theorem")?)?;
        let datum = env.env.datum(text(datum, "datum")?)?;
        let opts = HarnessOptions {
            caps: env.env.caps,
            mutant: false,
        };
        let v = verify(theorem, datum, &opts)?;
        let line = verdict_line(&v);
        *out_line = CString::new(line).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn biamalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Check a theorem on `count` generated instances. Stops at the first
/// disagreement and returns `Disagreement`. Zero caps mean the defaults.
///
/// # Safety
/// `theorem` must be NUL-terminated; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn biamalg_fuzz(
    theorem: *const c_char,
    seed: u64,
    count: usize,
    max_ring_size: usize,
    max_ideal_enum: usize,
    out_examined: *mut usize,
    out_agreeing: *mut usize,
) -> BiamalgStatus {
    guard(|| {
        out_ptr(out_examined, "out_examined")?;
        out_ptr(out_agreeing, "out_agreeing")?;
        let theorem = theorem_id(text(theorem, "theorem")?)?;
        let cfg = InstanceGenConfig {
            seed,
            count,
            ..InstanceGenConfig::default()
        };
        let opts = HarnessOptions {
            caps: caps_with(Caps::default(), max_ring_size, max_ideal_enum),
            mutant: false,
        };
        let outcome = fuzz(theorem, &cfg, &opts)?;
        *out_examined = outcome.verdicts.len();
        *out_agreeing = outcome.verdicts.iter().filter(|v| v.agree).count();
        match outcome.counterexample {
            None => Ok(()),
            Some(ce) => Err(Failure(BiamalgStatus::Disagreement, verdict_line(&ce.shrunk_verdict))),
        }
    })
}
