//! C interface to `latfix`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns a
//! [`LatfixStatus`]; the message of the last failure on the calling thread is
//! available from [`latfix_last_error_message`]. Strings returned by the
//! library are released with [`latfix_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latfix::autonet::{interaction_graph, robert_original, Network};
use latfix::dependency::{depends, DepKind};
use latfix::dynamics::canonical_witness;
use latfix::io;
use latfix::robert::robert_certify;
use latfix::{Config, Error, LatMap, Lattice};

/// Result codes. The numeric values of 0 to 4 match the command-line exit
/// codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatfixStatus {
    Ok = 0,
    PropertyFalse = 1,
    InvalidInput = 2,
    CapExceeded = 3,
    Internal = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Dependency kinds for [`latfix_depends`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatfixDepKind {
    PreMeet = 0,
    PreJoin = 1,
    PostMeet = 2,
    PostJoin = 3,
}

fn dep_kind(k: u32) -> Result<DepKind, LatfixStatus> {
    const KINDS: [(LatfixDepKind, DepKind); 4] = [
        (LatfixDepKind::PreMeet, DepKind::PreMeet),
        (LatfixDepKind::PreJoin, DepKind::PreJoin),
        (LatfixDepKind::PostMeet, DepKind::PostMeet),
        (LatfixDepKind::PostJoin, DepKind::PostJoin),
    ];
    KINDS.iter().find(|(c, _)| *c as u32 == k).map(|&(_, d)| d).ok_or_else(|| {
        set_error(format!("unknown dependency kind {k}"));
        LatfixStatus::InvalidInput
    })
}

/// Opaque finite lattice.
pub struct LatfixLattice(std::sync::Arc<Lattice>);

/// Opaque self-map of a lattice.
pub struct LatfixMap(LatMap);

/// Opaque automata network.
pub struct LatfixNetwork(Network);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LatfixStatus {
    match e.exit_code() {
        1 => LatfixStatus::PropertyFalse,
        2 => LatfixStatus::InvalidInput,
        3 => LatfixStatus::CapExceeded,
        _ => LatfixStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), LatfixStatus>) -> LatfixStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LatfixStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside latfix".into());
            LatfixStatus::Panic
        }
    }
}

fn fail(e: Error) -> LatfixStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> LatfixStatus {
    set_error(format!("null pointer: {what}"));
    LatfixStatus::NullPointer
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, LatfixStatus> {
    if s.is_null() {
        return Err(null("string argument"));
    }
    // SAFETY: caller passes a valid nul-terminated string.
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        LatfixStatus::InvalidInput
    })
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, LatfixStatus> {
    // SAFETY: caller passes a handle obtained from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), LatfixStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: checked non-null; caller guarantees it is writable.
    unsafe { out.write(v) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), LatfixStatus> {
    let c = CString::new(s).map_err(|_| LatfixStatus::Internal)?;
    // SAFETY: forwarded from the caller.
    unsafe { write_out(out, c.into_raw()) }
}

fn cfg() -> Config {
    Config::default()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn latfix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn latfix_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latfix_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

// ----- lattices --------------------------------------------------------------

/// Builds a lattice from a JSON descriptor.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_lattice_from_json(
    json: *const c_char,
    out: *mut *mut LatfixLattice,
) -> LatfixStatus {
    guard(|| {
        let text = unsafe { read_str(json)? };
        let d = io::parse(text).map_err(fail)?;
        let l = io::lattice_from_doc(&d, &cfg()).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(LatfixLattice(l)))) }
    })
}

/// # Safety
/// `l` is a lattice handle.
#[no_mangle]
pub unsafe extern "C" fn latfix_lattice_size(l: *const LatfixLattice, out: *mut usize) -> LatfixStatus {
    guard(|| {
        let l = unsafe { deref(l, "lattice")? };
        unsafe { write_out(out, l.0.size()) }
    })
}

/// `a ∨ b` and `a ∧ b`.
///
/// # Safety
/// `l` is a lattice handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_lattice_join_meet(
    l: *const LatfixLattice,
    a: usize,
    b: usize,
    join: *mut usize,
    meet: *mut usize,
) -> LatfixStatus {
    guard(|| {
        let l = &unsafe { deref(l, "lattice")? }.0;
        if a >= l.size() || b >= l.size() {
            set_error(format!("element out of range for a lattice of size {}", l.size()));
            return Err(LatfixStatus::InvalidInput);
        }
        unsafe {
            write_out(join, l.join(a, b))?;
            write_out(meet, l.meet(a, b))
        }
    })
}

/// # Safety
/// `l` is null or a lattice handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latfix_lattice_free(l: *mut LatfixLattice) {
    if !l.is_null() {
        // SAFETY: created by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(l) });
    }
}

// ----- maps ------------------------------------------------------------------

/// Reads a map document or a network document.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_from_json(json: *const c_char, out: *mut *mut LatfixMap) -> LatfixStatus {
    guard(|| {
        let text = unsafe { read_str(json)? };
        let v = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let m = io::any_map(v, &cfg()).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(LatfixMap(m)))) }
    })
}

/// Map on `l` from a table of `len` element ids.
///
/// # Safety
/// `l` is a lattice handle; `table` points to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_new(
    l: *const LatfixLattice,
    table: *const usize,
    len: usize,
    out: *mut *mut LatfixMap,
) -> LatfixStatus {
    guard(|| {
        let l = unsafe { deref(l, "lattice")? };
        if table.is_null() {
            return Err(null("table"));
        }
        // SAFETY: caller guarantees `len` readable entries.
        let t = unsafe { std::slice::from_raw_parts(table, len) }.to_vec();
        let m = LatMap::new(&l.0, t).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(LatfixMap(m)))) }
    })
}

/// # Safety
/// `m` is a map handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_apply(m: *const LatfixMap, x: usize, out: *mut usize) -> LatfixStatus {
    guard(|| {
        let m = &unsafe { deref(m, "map")? }.0;
        if x >= m.lattice().size() {
            set_error(format!("element {x} out of range"));
            return Err(LatfixStatus::InvalidInput);
        }
        unsafe { write_out(out, m.apply(x)) }
    })
}

/// Whether the map preserves all joins.
///
/// # Safety
/// `m` is a map handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_is_graph(m: *const LatfixMap, out: *mut bool) -> LatfixStatus {
    guard(|| {
        let m = &unsafe { deref(m, "map")? }.0;
        unsafe { write_out(out, m.is_graph()) }
    })
}

/// # Safety
/// `m` is a map handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_fixed_point_count(m: *const LatfixMap, out: *mut usize) -> LatfixStatus {
    guard(|| {
        let m = &unsafe { deref(m, "map")? }.0;
        unsafe { write_out(out, m.fixed_points().len()) }
    })
}

/// Dependency verdict of `phi` on `rho`; `kind` is a [`LatfixDepKind`] value.
///
/// # Safety
/// `phi`, `rho` are map handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_depends(
    kind: u32,
    phi: *const LatfixMap,
    rho: *const LatfixMap,
    out: *mut bool,
) -> LatfixStatus {
    guard(|| {
        let phi = &unsafe { deref(phi, "phi")? }.0;
        let rho = &unsafe { deref(rho, "rho")? }.0;
        let r = depends(dep_kind(kind)?, phi, rho, &cfg()).map_err(fail)?;
        unsafe { write_out(out, r) }
    })
}

/// Pre-meet certificate for a co-graph `phi` against `phi⁺` with the
/// canonical witness sequence, as a JSON string.
///
/// # Safety
/// `phi` is a map handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_robert_certify_json(
    phi: *const LatfixMap,
    out: *mut *mut c_char,
) -> LatfixStatus {
    guard(|| {
        let phi = &unsafe { deref(phi, "phi")? }.0;
        if !phi.is_cograph() {
            set_error("map is not a co-graph; no default dependency".into());
            return Err(LatfixStatus::InvalidInput);
        }
        let rho = phi.residuated();
        let c = canonical_witness(DepKind::PreMeet, &rho)
            .and_then(|a| robert_certify(phi, DepKind::PreMeet, &rho, &a, &cfg()))
            .map_err(fail)?;
        let text = io::emit(&io::certificate_to_doc(&c, phi.lattice())).map_err(fail)?;
        unsafe { write_string(out, text) }
    })
}

/// # Safety
/// `m` is null or a map handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latfix_map_free(m: *mut LatfixMap) {
    if !m.is_null() {
        // SAFETY: created by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(m) });
    }
}

// ----- networks --------------------------------------------------------------

/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_network_from_json(
    json: *const c_char,
    out: *mut *mut LatfixNetwork,
) -> LatfixStatus {
    guard(|| {
        let text = unsafe { read_str(json)? };
        let doc = io::parse(text).map_err(fail)?;
        let net = io::network_from_doc(&doc, &cfg()).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(LatfixNetwork(net)))) }
    })
}

/// Interaction graph as a digraph JSON document.
///
/// # Safety
/// `net` is a network handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_network_interaction_graph_json(
    net: *const LatfixNetwork,
    out: *mut *mut c_char,
) -> LatfixStatus {
    guard(|| {
        let net = &unsafe { deref(net, "network")? }.0;
        let d = interaction_graph(net, &cfg()).map_err(fail)?;
        let text = io::emit(&io::digraph_to_doc(&d)).map_err(fail)?;
        unsafe { write_string(out, text) }
    })
}

/// Nilpotence index from the acyclic-interaction certificate.
///
/// # Safety
/// `net` is a network handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn latfix_network_robert(
    net: *const LatfixNetwork,
    k: *mut usize,
    fixed_point: *mut usize,
) -> LatfixStatus {
    guard(|| {
        let net = &unsafe { deref(net, "network")? }.0;
        let c = robert_original(net, &cfg()).map_err(fail)?;
        unsafe {
            write_out(k, c.k().unwrap_or(0))?;
            write_out(fixed_point, c.e)
        }
    })
}

/// # Safety
/// `net` is null or a network handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latfix_network_free(net: *mut LatfixNetwork) {
    if !net.is_null() {
        // SAFETY: created by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(net) });
    }
}
