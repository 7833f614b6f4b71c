//! C ABI over `depthsep`. Networks are opaque handles owned by the caller and
//! released with [`ds_network_free`]; strings returned by the library are
//! released with [`ds_string_free`]. Every fallible call returns a
//! [`DsStatus`] and leaves a message for [`ds_last_error`] on failure.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use depthsep::calculus::{compose, parallelize};
use depthsep::constructions::{hinge_square_net, scaled_square_net, square_net, target_net, target_net_for_eps, target_psi};
use depthsep::json::{from_json, to_json};
use depthsep::measures::{l2_error_mc, l2_error_separable};
use depthsep::{Error, Network};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    Shape = 2,
    Parse = 3,
    Parameter = 4,
    Domain = 5,
    Quadrature = 6,
    Numeric = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

/// Opaque network handle.
pub struct DsNetwork(Network);

/// Architecture summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DsStats {
    pub depth: usize,
    pub hidden_layers: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub params: usize,
    pub inf_norm: f64,
}

/// L² error estimate; `std_error` is negative and `samples` zero for the
/// deterministic method.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DsErrorEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::Shape(_) => DsStatus::Shape,
        Error::Parse(_) => DsStatus::Parse,
        Error::Parameter(_) => DsStatus::Parameter,
        Error::Domain(_) => DsStatus::Domain,
        Error::Quadrature(_) => DsStatus::Quadrature,
        Error::Numeric(_) => DsStatus::Numeric,
    }
}

fn fail(status: DsStatus, msg: &str) -> DsStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (DsStatus, String)>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DsStatus::Ok
        }
        Ok(Err((s, m))) => fail(s, &m),
        Err(_) => fail(DsStatus::Panic, "panic inside depthsep"),
    }
}

fn lib<T>(r: depthsep::Result<T>) -> Result<T, (DsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (DsStatus, String) {
    (DsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn net_ref<'a>(p: *const DsNetwork, what: &str) -> Result<&'a Network, (DsStatus, String)> {
    p.as_ref().map(|n| &n.0).ok_or_else(|| null(what))
}

unsafe fn emit(out: *mut *mut DsNetwork, net: depthsep::Result<Network>) -> Result<(), (DsStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let net = lib(net)?;
    *out = Box::into_raw(Box::new(DsNetwork(net)));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn ds_square_net(m: u32, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| emit(out, square_net(m)))
}

#[no_mangle]
pub unsafe extern "C" fn ds_scaled_square_net(m: u32, r: f64, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| emit(out, scaled_square_net(m, r)))
}

#[no_mangle]
pub unsafe extern "C" fn ds_hinge_square_net(a: f64, m: u32, r: f64, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| emit(out, hinge_square_net(a, m, r)))
}

#[no_mangle]
pub unsafe extern "C" fn ds_target_net(d: usize, m: u32, r: f64, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| emit(out, target_net(d, m, r).map(|p| p.0)))
}

#[no_mangle]
pub unsafe extern "C" fn ds_target_net_for_eps(d: usize, eps: f64, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| emit(out, target_net_for_eps(d, eps).map(|p| p.0)))
}

/// Parses a NUL-terminated JSON network.
#[no_mangle]
pub unsafe extern "C" fn ds_network_from_json(json: *const c_char, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let s = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (DsStatus::InvalidUtf8, format!("json is not UTF-8: {e}")))?;
        emit(out, from_json(s))
    })
}

/// Serializes `net`; free the string with [`ds_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ds_network_to_json(net: *const DsNetwork, out: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let n = net_ref(net, "net")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(to_json(n)).map_err(|e| (DsStatus::Numeric, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Evaluates `net` at `x` (length `x_len`) into `y` (length `y_len`). The
/// lengths must match the network's input and output widths.
#[no_mangle]
pub unsafe extern "C" fn ds_network_realize(
    net: *const DsNetwork,
    x: *const f64,
    x_len: usize,
    y: *mut f64,
    y_len: usize,
) -> DsStatus {
    guard(|| {
        let n = net_ref(net, "net")?;
        if (x.is_null() && x_len > 0) || (y.is_null() && y_len > 0) {
            return Err(null("x or y"));
        }
        if y_len != n.output_dim() {
            return Err((DsStatus::Shape, format!("y has length {y_len}, network has {} outputs", n.output_dim())));
        }
        let xs = if x_len == 0 { &[][..] } else { std::slice::from_raw_parts(x, x_len) };
        let r = lib(n.realize(xs))?;
        if y_len > 0 {
            std::slice::from_raw_parts_mut(y, y_len).copy_from_slice(&r);
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ds_network_stats(net: *const DsNetwork, out: *mut DsStats) -> DsStatus {
    guard(|| {
        let n = net_ref(net, "net")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let a = n.architecture();
        *out = DsStats {
            depth: a.depth,
            hidden_layers: a.hidden_layers,
            inputs: a.inputs,
            outputs: a.outputs,
            params: a.params,
            inf_norm: n.inf_norm(),
        };
        Ok(())
    })
}

/// Writes up to `cap` layer widths into `dims`; `len` receives the total
/// count (depth + 1) even when `cap` is too small.
#[no_mangle]
pub unsafe extern "C" fn ds_network_dims(net: *const DsNetwork, dims: *mut usize, cap: usize, len: *mut usize) -> DsStatus {
    guard(|| {
        let n = net_ref(net, "net")?;
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        let d = n.dims();
        *len = d.len();
        if cap > 0 {
            if dims.is_null() {
                return Err(null("dims"));
            }
            let k = cap.min(d.len());
            std::slice::from_raw_parts_mut(dims, k).copy_from_slice(&d[..k]);
        }
        Ok(())
    })
}

/// `f ∘ g`.
#[no_mangle]
pub unsafe extern "C" fn ds_network_compose(f: *const DsNetwork, g: *const DsNetwork, out: *mut *mut DsNetwork) -> DsStatus {
    guard(|| {
        let (f, g) = (net_ref(f, "f")?, net_ref(g, "g")?);
        emit(out, compose(f, g))
    })
}

/// Parallelization of `count` networks with equal depth.
#[no_mangle]
pub unsafe extern "C" fn ds_network_parallelize(
    nets: *const *const DsNetwork,
    count: usize,
    out: *mut *mut DsNetwork,
) -> DsStatus {
    guard(|| {
        if nets.is_null() {
            return Err(null("nets"));
        }
        let handles = std::slice::from_raw_parts(nets, count);
        let refs = handles
            .iter()
            .enumerate()
            .map(|(i, p)| net_ref(*p, &format!("nets[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        emit(out, parallelize(&refs))
    })
}

/// Monte-Carlo L² error of `net` against the normalized target in dimension `d`.
#[no_mangle]
pub unsafe extern "C" fn ds_l2_error_mc(
    net: *const DsNetwork,
    d: usize,
    samples: u64,
    seed: u64,
    out: *mut DsErrorEstimate,
) -> DsStatus {
    guard(|| {
        let n = net_ref(net, "net")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = lib(l2_error_mc(n, d, samples, seed))?;
        *out = DsErrorEstimate { value: e.value, std_error: e.std_error.unwrap_or(-1.0), samples: e.samples.unwrap_or(0) };
        Ok(())
    })
}

/// Deterministic L² error of `target_net(d, m, r)`.
#[no_mangle]
pub unsafe extern "C" fn ds_target_error_separable(d: usize, m: u32, r: f64, out: *mut DsErrorEstimate) -> DsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (_, spec) = lib(target_net(d, m, r))?;
        let psi = lib(target_psi(&spec))?;
        let e = lib(l2_error_separable(&psi, spec.scale(), d))?;
        *out = DsErrorEstimate { value: e.value, std_error: -1.0, samples: 0 };
        Ok(())
    })
}

/// Releases a handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_network_free(net: *mut DsNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Releases a string returned by this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
