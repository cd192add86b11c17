//! C ABI over `pptop`.
//!
//! Digraphs cross the boundary as opaque `PptDigraph` handles. Every entry
//! point returns a `PptStatus`; on failure a message is kept per thread and
//! read with `ppt_last_error`. Strings handed out by the library must be
//! released with `ppt_string_free`, handles with `ppt_digraph_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pptop::digraph::{decode, encode};
use pptop::minorcond::resolve_condition;
use pptop::{
    classify, core_of, find_hom, has_maltsev, satisfies, ClassifyOptions, Digraph, Error, Family,
    Format, Limits, SearchBudget,
};

/// Outcome of a call. Negative answers (no homomorphism, condition fails)
/// are reported through out-parameters, not as errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed text, out-of-range values, or an input the operation rejects.
    InvalidInput = 2,
    /// A search node limit or size budget was hit; the answer is unknown.
    ResourceLimit = 3,
    Internal = 4,
    Panic = 5,
}

/// Opaque digraph handle.
pub struct PptDigraph {
    inner: Digraph,
}

/// Resource limits; a zero field keeps the library default.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PptLimits {
    pub node_limit: u64,
    pub vertex_budget: usize,
    pub edge_budget: usize,
}

impl PptLimits {
    fn resolve(&self) -> Limits {
        let d = Limits::default();
        let or = |v: usize, def: usize| if v == 0 { def } else { v };
        Limits {
            search: if self.node_limit == 0 {
                d.search
            } else {
                SearchBudget::new(self.node_limit)
            },
            vertex_budget: or(self.vertex_budget, d.vertex_budget),
            edge_budget: or(self.edge_budget, d.edge_budget),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PptStatus {
    match e {
        e if e.is_resource_limit() => PptStatus::ResourceLimit,
        Error::InternalInconsistency(_) => PptStatus::Internal,
        _ => PptStatus::InvalidInput,
    }
}

struct Failure(PptStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PptStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any failure or panic in the thread's error slot.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PptStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PptStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside pptop".into());
            PptStatus::Panic
        }
    }
}

unsafe fn digraph<'a>(g: *const PptDigraph, what: &str) -> Result<&'a Digraph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null(what))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PptStatus::InvalidInput, format!("{what} is not UTF-8: {e}")))
}

unsafe fn limits(l: *const PptLimits) -> Limits {
    l.as_ref().copied().unwrap_or_default().resolve()
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle(out: *mut *mut PptDigraph, g: Digraph) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(PptDigraph { inner: g })), "out")
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(PptStatus::Internal, e.to_string()))?;
    put(out, c.into_raw(), "out")
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ppt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a digraph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`u0, v0, u1, v1, ...`). `edges` may be null when `edge_count` is 0.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut PptDigraph,
) -> PptStatus {
    guard(|| {
        let flat = if edge_count == 0 {
            &[][..]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            let len = edge_count
                .checked_mul(2)
                .ok_or_else(|| Failure(PptStatus::InvalidInput, "edge_count overflows".into()))?;
            std::slice::from_raw_parts(edges, len)
        };
        let g = Digraph::new(n, flat.chunks_exact(2).map(|p| (p[0], p[1])))?;
        put_handle(out, g)
    })
}

/// Parses JSON (`{"n":..,"edges":..}`) or an edge list; JSON is recognised
/// by a leading `{`.
///
/// # Safety
/// `text_in` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_parse(
    text_in: *const c_char,
    out: *mut *mut PptDigraph,
) -> PptStatus {
    guard(|| {
        let s = text(text_in, "text")?;
        let format = if s.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::EdgeList
        };
        put_handle(out, decode(s, format)?)
    })
}

/// `family` is one of `cycle`, `path`, `tournament`, `clique`.
///
/// # Safety
/// `family` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_family(
    family: *const c_char,
    k: usize,
    out: *mut *mut PptDigraph,
) -> PptStatus {
    guard(|| {
        let f: Family = text(family, "family")?.parse()?;
        put_handle(out, f.generate(k)?)
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_free(g: *mut PptDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_vertex_count(g: *const PptDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_edge_count(g: *const PptDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// JSON encoding of `g`; free the result with `ppt_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppt_digraph_to_json(
    g: *const PptDigraph,
    out: *mut *mut c_char,
) -> PptStatus {
    guard(|| put_string(out, encode(digraph(g, "g")?, Format::Json)))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ppt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Searches for a homomorphism `g -> h`. On success `*found` tells whether
/// one exists and, if so, `map_out[0..n(g)]` holds it.
///
/// # Safety
/// `map_out` must have room for `n(g)` values; `limits` may be null.
#[no_mangle]
pub unsafe extern "C" fn ppt_find_hom(
    g: *const PptDigraph,
    h: *const PptDigraph,
    limits_in: *const PptLimits,
    map_out: *mut usize,
    found: *mut bool,
) -> PptStatus {
    guard(|| {
        let (g, h) = (digraph(g, "g")?, digraph(h, "h")?);
        if map_out.is_null() {
            return Err(null("map_out"));
        }
        let hom = find_hom(g, h, &[], &limits(limits_in).search)?;
        if let Some(hom) = &hom {
            ptr::copy_nonoverlapping(hom.map().as_ptr(), map_out, hom.map().len());
        }
        put(found, hom.is_some(), "found")
    })
}

/// The core of `g` as a new handle, re-indexed densely.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable; `limits` may be null.
#[no_mangle]
pub unsafe extern "C" fn ppt_core(
    g: *const PptDigraph,
    limits_in: *const PptLimits,
    out: *mut *mut PptDigraph,
) -> PptStatus {
    guard(|| {
        let core = core_of(digraph(g, "g")?, &limits(limits_in).search)?;
        put_handle(out, core.digraph)
    })
}

/// Decides whether the polymorphisms of `g` satisfy `condition`, either a
/// builtin name (`cyclic:5`, `maltsev`, `constant`, `fourfold`) or identities
/// such as `f(x,x,y)=f(y,x,x)`.
///
/// # Safety
/// `condition` must be a nul-terminated string; `limits` may be null.
#[no_mangle]
pub unsafe extern "C" fn ppt_check_condition(
    g: *const PptDigraph,
    condition: *const c_char,
    limits_in: *const PptLimits,
    satisfied: *mut bool,
) -> PptStatus {
    guard(|| {
        let g = digraph(g, "g")?;
        let cond = resolve_condition(text(condition, "condition")?)?;
        let witness = satisfies(g, &cond, &limits(limits_in))?;
        put(satisfied, witness.is_some(), "satisfied")
    })
}

/// Whether `g` is totally rectangular (has an idempotent Maltsev
/// polymorphism).
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppt_has_maltsev(g: *const PptDigraph, result: *mut bool) -> PptStatus {
    guard(|| {
        let answer = has_maltsev(digraph(g, "g")?).is_ok();
        put(result, answer, "result")
    })
}

/// Full classification as JSON; free the result with `ppt_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable; `limits` may be null.
#[no_mangle]
pub unsafe extern "C" fn ppt_classify_json(
    g: *const PptDigraph,
    limits_in: *const PptLimits,
    out: *mut *mut c_char,
) -> PptStatus {
    guard(|| {
        let opts = ClassifyOptions {
            limits: limits(limits_in),
            ..ClassifyOptions::default()
        };
        let c = classify(digraph(g, "g")?, &opts)?;
        let json =
            serde_json::to_string(&c).map_err(|e| Failure(PptStatus::Internal, e.to_string()))?;
        put_string(out, json)
    })
}
