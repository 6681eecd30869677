//! C interface to `commat`.
//!
//! Every fallible function returns a [`CommatStatus`]; on failure the message
//! is available from [`commat_last_error`] on the same thread. Strings handed
//! out by this library are NUL-terminated UTF-8 and must be released with
//! [`commat_string_free`]; diagram handles with [`commat_diagram_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use commat::cli::{
    family_report, rt_command, AnalysisReport, CliError, FamilyParams, InputIdentity, InputKind,
};
use commat::diagrams::{
    parallelogram_lint, parse_diagram, realize, serialize_diagram, DiagramError, ModuleDiagram,
};
use commat::exactlin::FieldSpec;
use commat::search::{run_search, SearchConfig};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    LintError = 4,
    NonCommuting = 5,
    InvalidArgument = 6,
    Internal = 7,
}

/// Opaque parsed diagram.
pub struct CommatDiagram {
    inner: ModuleDiagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CommatStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match &e {
            CliError::Parse(_) => CommatStatus::ParseError,
            CliError::Lint { .. } => CommatStatus::LintError,
            CliError::NonCommuting(_) => CommatStatus::NonCommuting,
            CliError::Io(_) | CliError::Search(_) => CommatStatus::Internal,
            _ => CommatStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CommatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CommatStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CommatStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            CommatStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CommatStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        read_str(p, what).map(Some)
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            CommatStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(CommatStatus::Internal, "string contains NUL".into()))?;
    write_out(out, c.into_raw())
}

fn field_arg(text: Option<&str>, default: FieldSpec) -> Result<FieldSpec, Failure> {
    match text {
        None => Ok(default),
        Some(t) => {
            FieldSpec::parse(t).map_err(|e| Failure(CommatStatus::InvalidArgument, e.to_string()))
        }
    }
}

fn diagram_failure(e: DiagramError) -> Failure {
    let status = match e {
        DiagramError::Syntax { .. }
        | DiagramError::UnknownName { .. }
        | DiagramError::DuplicateEdge { .. }
        | DiagramError::DuplicateName(_)
        | DiagramError::Cycle(_) => CommatStatus::ParseError,
        DiagramError::Algebra(commat::algebra::AlgebraError::NonCommuting { .. }) => {
            CommatStatus::NonCommuting
        }
        _ => CommatStatus::InvalidArgument,
    };
    Failure(status, e.to_string())
}

/// Last error message on this thread, or null. Owned by the caller; free it
/// with [`commat_string_free`].
#[no_mangle]
pub extern "C" fn commat_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn commat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn commat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `.cdg` text. `field` may be null to keep the field named in the text.
///
/// # Safety
/// `text` and `field` must be NUL-terminated strings or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_parse(
    text: *const c_char,
    field: *const c_char,
    out: *mut *mut CommatDiagram,
) -> CommatStatus {
    guard(|| {
        let t = read_str(text, "text")?;
        let mut d = parse_diagram(t).map_err(diagram_failure)?;
        if let Some(f) = opt_str(field, "field")? {
            let f = field_arg(Some(f), d.field())?;
            d = d.with_field(f);
        }
        write_out(out, Box::into_raw(Box::new(CommatDiagram { inner: d })))
    })
}

/// # Safety
/// `d` must come from [`commat_diagram_parse`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_free(d: *mut CommatDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn diagram<'a>(d: *const CommatDiagram) -> Result<&'a CommatDiagram, Failure> {
    d.as_ref()
        .ok_or_else(|| Failure(CommatStatus::NullPointer, "diagram is null".into()))
}

/// Number of vertices, generators and edges.
///
/// # Safety
/// `d` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_size(
    d: *const CommatDiagram,
    vertices: *mut usize,
    generators: *mut usize,
    edges: *mut usize,
) -> CommatStatus {
    guard(|| {
        let d = &diagram(d)?.inner;
        write_out(vertices, d.vertices().len())?;
        write_out(generators, d.generators().len())?;
        write_out(edges, d.edges().len())
    })
}

/// Number of parallelogram violations; zero exactly when the diagram commutes.
///
/// # Safety
/// `d` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_lint(
    d: *const CommatDiagram,
    count: *mut usize,
) -> CommatStatus {
    guard(|| write_out(count, parallelogram_lint(&diagram(d)?.inner).len()))
}

/// `dim M` and `dim A` of the realized diagram.
///
/// # Safety
/// `d` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_dims(
    d: *const CommatDiagram,
    dim_m: *mut usize,
    dim_a: *mut usize,
) -> CommatStatus {
    guard(|| {
        let action = realize(&diagram(d)?.inner).map_err(diagram_failure)?;
        let r = AnalysisReport::of_action(inline_identity(), &action);
        write_out(dim_m, r.dim_m)?;
        write_out(dim_a, r.dim_a)
    })
}

fn inline_identity() -> InputIdentity {
    InputIdentity {
        kind: InputKind::Inline,
        name: String::new(),
        params: BTreeMap::new(),
    }
}

/// Full analysis report as JSON.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_report_json(
    d: *const CommatDiagram,
    out: *mut *mut c_char,
) -> CommatStatus {
    guard(|| {
        let action = realize(&diagram(d)?.inner).map_err(diagram_failure)?;
        let r = AnalysisReport::of_action(inline_identity(), &action);
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// The diagram in `.cdg` syntax.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_diagram_to_cdg(
    d: *const CommatDiagram,
    out: *mut *mut c_char,
) -> CommatStatus {
    guard(|| write_string(out, serialize_diagram(&diagram(d)?.inner)))
}

/// Analysis report of a named family as JSON. Unused parameters are ignored;
/// pass 0 for them. `n` points to `n_len` values (may be null when 0).
///
/// # Safety
/// `name` must be a string; `field` a string or null; `n` valid for `n_len` reads.
#[no_mangle]
pub unsafe extern "C" fn commat_family_report_json(
    name: *const c_char,
    m: usize,
    e0: usize,
    e1: usize,
    n: *const usize,
    n_len: usize,
    field: *const c_char,
    out: *mut *mut c_char,
) -> CommatStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let field = field_arg(opt_str(field, "field")?, FieldSpec::Rationals)?;
        let n = if n_len == 0 {
            Vec::new()
        } else if n.is_null() {
            return Err(Failure(CommatStatus::NullPointer, "n is null".into()));
        } else {
            std::slice::from_raw_parts(n, n_len).to_vec()
        };
        let nz = |v: usize| (v != 0).then_some(v);
        let params = FamilyParams {
            m: nz(m),
            e0: nz(e0),
            e1: nz(e1),
            n,
        };
        let (r, _) = family_report(name, &params, field)?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// Length comparison for a module over a PID with one endomorphism, as JSON.
/// `factors` is comma separated; `endo` is a matrix literal, or null for a
/// random endomorphism drawn from `seed`.
///
/// # Safety
/// `ring` and `factors` must be strings; `endo` a string or null; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn commat_rt_json(
    ring: *const c_char,
    factors: *const c_char,
    endo: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> CommatStatus {
    guard(|| {
        let ring = read_str(ring, "ring")?;
        let factors: Vec<String> = read_str(factors, "factors")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let endo = opt_str(endo, "endo")?;
        let r = rt_command(ring, &factors, endo, endo.is_none(), 6, seed)?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// Diagram search report as JSON. A `budget` of 0 keeps the default.
///
/// # Safety
/// `field` must be a string or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn commat_search_json(
    generators: usize,
    max_vertices: usize,
    budget: u64,
    workers: usize,
    field: *const c_char,
    out: *mut *mut c_char,
) -> CommatStatus {
    guard(|| {
        let mut cfg = SearchConfig::new(generators, max_vertices);
        cfg.field = field_arg(opt_str(field, "field")?, cfg.field)?;
        if budget > 0 {
            cfg.budget = budget;
        }
        cfg.workers = workers.max(1);
        let r =
            run_search(&cfg).map_err(|e| Failure(CommatStatus::InvalidArgument, e.to_string()))?;
        write_string(out, serde_json::to_string(&r).expect("report serializes"))
    })
}
