//! C interface to `gwprod-core`.
//!
//! Every function returns a [`GwpStatus`]; on anything but `GWP_STATUS_OK`
//! the message is available from [`gwp_last_error`] until the next call on
//! the same thread. Strings handed out are owned by the caller and released
//! with [`gwp_string_free`]; graphs with [`gwp_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gwprod_core::curve::{CurveClass, MonoidMap};
use gwprod_core::fraction;
use gwprod_core::functors::pushforward_stabilize;
use gwprod_core::graph::{canonicalize, MarkedGraph};
use gwprod_core::gw::{kunneth_sign, wdvv_number, TargetSpace};
use gwprod_core::mbar::{evaluate_monomial, CycleMonomial};
use gwprod_core::verify::verify_product;
use gwprod_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Unstable = 4,
    OutOfRange = 5,
    Unsupported = 6,
    Inconsistent = 7,
    Panic = 8,
}

/// Opaque marked graph.
pub struct GwpGraph {
    inner: MarkedGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GwpStatus {
    match e {
        Error::Unstable(_) | Error::NoStableModel(_) => GwpStatus::Unstable,
        Error::DimensionOutOfRange(_)
        | Error::CapExceeded { .. }
        | Error::TooLarge(_)
        | Error::DegenerateBidegree(..) => GwpStatus::OutOfRange,
        Error::UnsupportedTarget(_) => GwpStatus::Unsupported,
        Error::MorphismMismatch(_) | Error::OrbitComposition(_) | Error::InconsistentSystem(_) => {
            GwpStatus::Inconsistent
        }
        _ => GwpStatus::InvalidInput,
    }
}

struct Fail(GwpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> GwpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            GwpStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GwpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GwpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(GwpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GwpStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(GwpStatus::InvalidInput, "interior NUL".into()))?;
    put(out, c.into_raw(), "output pointer")
}

unsafe fn graph<'a>(g: *const GwpGraph) -> Result<&'a MarkedGraph, Fail> {
    g.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Fail(GwpStatus::NullPointer, "graph is null".into()))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `gwp_*` call on this thread.
#[no_mangle]
pub extern "C" fn gwp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gwp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from its JSON encoding.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_from_json(json: *const c_char, out: *mut *mut GwpGraph) -> GwpStatus {
    guard(|| {
        let g = MarkedGraph::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(GwpGraph { inner: g })), "out")
    })
}

/// # Safety
/// `g` is null or a graph from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_free(g: *mut GwpGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` is a live graph; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_to_json(g: *const GwpGraph, out: *mut *mut c_char) -> GwpStatus {
    guard(|| put_string(out, graph(g)?.to_json().to_string()))
}

/// Canonical form as JSON, and the order of the automorphism group.
///
/// # Safety
/// `g` is a live graph; `out` and `automorphisms` are writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_canonical(
    g: *const GwpGraph,
    out: *mut *mut c_char,
    automorphisms: *mut u64,
) -> GwpStatus {
    guard(|| {
        let c = canonicalize(graph(g)?);
        put(automorphisms, c.automorphisms, "automorphisms")?;
        let form = serde_json::to_string(&c.form).expect("canonical form serializes");
        put_string(out, form)
    })
}

/// # Safety
/// `g` is a live graph; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_is_stable(g: *const GwpGraph, out: *mut bool) -> GwpStatus {
    guard(|| put(out, graph(g)?.is_stable(), "out"))
}

/// Pushes the marking along a monoid map and stabilizes. `map` is
/// `"identity"`, `"zero"` or the JSON encoding of a map.
///
/// # Safety
/// `g` is a live graph; `map` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_graph_stabilize(
    g: *const GwpGraph,
    map: *const c_char,
    out: *mut *mut GwpGraph,
) -> GwpStatus {
    guard(|| {
        let g = graph(g)?;
        let map = match text(map, "map")? {
            "identity" => MonoidMap::identity(g.monoid()),
            "zero" => MonoidMap::zero(g.monoid()),
            json => serde_json::from_str(json).map_err(|e| Fail(GwpStatus::InvalidInput, format!("map: {e}")))?,
        };
        let (s, _) = pushforward_stabilize(g, &map)?;
        put(out, Box::into_raw(Box::new(GwpGraph { inner: s })), "out")
    })
}

/// Checks the product formula for bidegree `(d1, d2)`. `equal` receives the
/// outcome and `report` the JSON report.
///
/// # Safety
/// `equal` and `report` are writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_verify_product(
    d1: u32,
    d2: u32,
    cap_n: usize,
    equal: *mut bool,
    report: *mut *mut c_char,
) -> GwpStatus {
    guard(|| {
        let r = verify_product(d1, d2, cap_n)?;
        put(equal, r.equal, "equal")?;
        put_string(report, r.to_json(false).to_string())
    })
}

/// Genus-0 count through the expected number of points, as `"p/q"`.
/// `target` is `"p2"` or `"p1xp1"`.
///
/// # Safety
/// `target` is a NUL-terminated string; `degree` points to `len` values;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_wdvv_number(
    target: *const c_char,
    degree: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> GwpStatus {
    guard(|| {
        let t = TargetSpace::by_name(text(target, "target")?)?;
        if degree.is_null() {
            return Err(Fail(GwpStatus::NullPointer, "degree is null".into()));
        }
        let beta = CurveClass::new(std::slice::from_raw_parts(degree, len).to_vec());
        put_string(out, fraction::to_string(&wdvv_number(&t, &beta)?))
    })
}

/// `∫` of a monomial over `M̄_{0,n}`, as `"p/q"`. The monomial is a JSON
/// list of factors such as `["1,2", "psi3"]`.
///
/// # Safety
/// `monomial` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_mbar_evaluate(n: usize, monomial: *const c_char, out: *mut *mut c_char) -> GwpStatus {
    guard(|| {
        let m = CycleMonomial::parse_factors(n, text(monomial, "monomial")?)?;
        put_string(out, fraction::to_string(&evaluate_monomial(&m).value))
    })
}

/// # Safety
/// `gamma` and `eps` point to `len` values each; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gwp_kunneth_sign(gamma: *const i64, eps: *const i64, len: usize, out: *mut i32) -> GwpStatus {
    guard(|| {
        let slice = |p: *const i64| {
            if len == 0 {
                Ok(&[][..])
            } else if p.is_null() {
                Err(Fail(GwpStatus::NullPointer, "degree vector is null".into()))
            } else {
                Ok(std::slice::from_raw_parts(p, len))
            }
        };
        put(out, kunneth_sign(slice(gamma)?, slice(eps)?)?, "out")
    })
}

/// Null-terminated version string with static lifetime.
#[no_mangle]
pub extern "C" fn gwp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
