//! C ABI over the quantile-recycling kernels and solved maps.
//!
//! Conventions: fallible calls return a [`QrStatus`] and write results
//! through out-pointers; null pointers are reported, never dereferenced.
//! Handles are opaque, created by `qr_*_new`-style constructors that
//! transfer ownership to the caller, and released by the matching
//! `qr_*_free` (which accepts null as a no-op). Evaluation entry points
//! take handles by shared reference and are safe to call from multiple
//! threads once construction is done.
//!
//! The C header is generated into `include/quantile_recycling.h` at build
//! time.

use std::os::raw::c_char;

use quantile_recycling::dist::{
    hyperbolic_split, vg_split, Hyperbolic, HyperbolicParams, VarianceGamma, VgParams,
};
use quantile_recycling::normal::{
    icnd_double, icnd_double_slice, icnd_f1, icnd_f2, q77, sample_normal_antithetic,
    tail_supplement, AntitheticKernel,
};
use quantile_recycling::rode::{
    build_hyperbolic_problems, build_vg_problems, dd_exp_to_normal_problem,
    dd_gaussian_to_student, solve_pair, solve_rode_dd, QuantileMap, RkOrder, DEFAULT_STEP,
};
use quantile_recycling::special::Accuracy;
use quantile_recycling::student::{StudentMap, StudentMapConfig};
use quantile_recycling::{Error, Result};

/// Status of a fallible call. Zero is success; everything else names the
/// failure class of the underlying computation.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    /// An argument lies outside its documented domain.
    Domain = 1,
    /// A requested accuracy could not be met.
    Accuracy = 2,
    /// A solved map stopped being strictly increasing.
    Monotonicity = 3,
    /// Non-finite state or magnitude blow-up.
    Overflow = 4,
    /// The requested combination is not provided.
    Unsupported = 5,
    /// The reference computation itself failed.
    Oracle = 6,
    /// Evaluation outside a map's tabulated range.
    OutOfRange = 7,
    /// A required pointer was null.
    NullArgument = 8,
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::Domain(_) => QrStatus::Domain,
        Error::Accuracy(_) => QrStatus::Accuracy,
        Error::MonotonicityLoss(_) => QrStatus::Monotonicity,
        Error::Overflow(_) => QrStatus::Overflow,
        Error::Unsupported(_) => QrStatus::Unsupported,
        Error::OracleFailure(_) => QrStatus::Oracle,
        Error::OutOfRange(_) => QrStatus::OutOfRange,
    }
}

/// Opaque handle to a Student t composite quantile map.
pub struct QrStudentMap(StudentMap);

/// Opaque handle to a solved recycling map.
pub struct QrMap(QuantileMap);

unsafe fn write_value(r: Result<f64>, out: *mut f64) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    match r {
        Ok(v) => {
            *out = v;
            QrStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Version of the underlying library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Tail-depth normal quantile `z(v) = Phi^{-1}(1 - e^{-v}/2)` through the
/// (7,7) rational fit. Accurate to 1.06e-9 relative for `0 <= v <= 37`;
/// values beyond degrade smoothly instead of failing.
#[no_mangle]
pub extern "C" fn qr_q77(v: f64) -> f64 {
    q77(v)
}

/// Branchless whole-range normal quantile over the (7,7) fit.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_icnd_f1(u: f64, out: *mut f64) -> QrStatus {
    write_value(icnd_f1(u), out)
}

/// Branchless whole-range normal quantile over the cheaper (5,5) fit,
/// accurate to about 4e-7 relative.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_icnd_f2(u: f64, out: *mut f64) -> QrStatus {
    write_value(icnd_f2(u), out)
}

/// Branchless whole-range normal quantile over the (13,13) fit, about
/// 1e-13 relative for `u` in `[1e-30, 1 - 1e-16]`.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_icnd_double(u: f64, out: *mut f64) -> QrStatus {
    write_value(icnd_double(u), out)
}

/// Bulk form of [`qr_icnd_double`]; the first invalid probability aborts
/// the fill and nothing past it is written.
///
/// # Safety
/// `u` must point to `len` readable doubles and `out` to `len` writable
/// doubles; the two ranges must not overlap.
#[no_mangle]
pub unsafe extern "C" fn qr_icnd_double_array(
    u: *const f64,
    out: *mut f64,
    len: usize,
) -> QrStatus {
    if u.is_null() || out.is_null() {
        return QrStatus::NullArgument;
    }
    let us = std::slice::from_raw_parts(u, len);
    let os = std::slice::from_raw_parts_mut(out, len);
    match icnd_double_slice(us, os) {
        Ok(()) => QrStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Closed-form continuation of the normal quantile past the rational fits;
/// valid for `v >= 37`.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_tail_supplement(v: f64, out: *mut f64) -> QrStatus {
    write_value(tail_supplement(v), out)
}

/// Antithetic normal pair from one uniform draw; the two outputs always
/// sum to zero bit-for-bit. `use_double_kernel` selects the (13,13) fit
/// over the (7,7) one.
///
/// # Safety
/// `z` and `z_mirror` must each point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_normal_antithetic(
    u: f64,
    use_double_kernel: bool,
    z: *mut f64,
    z_mirror: *mut f64,
) -> QrStatus {
    if z.is_null() || z_mirror.is_null() {
        return QrStatus::NullArgument;
    }
    let kernel = if use_double_kernel {
        AntitheticKernel::RationalDouble
    } else {
        AntitheticKernel::Rational77
    };
    match sample_normal_antithetic(u, kernel) {
        Ok((a, b)) => {
            *z = a;
            *z_mirror = b;
            QrStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Creates a Student t quantile map (central series plus tail model) for
/// `n` degrees of freedom; `n = 4` uses the validated fast path.
///
/// # Safety
/// `out` must point to a writable handle slot. On success the caller owns
/// the handle and must release it with [`qr_student_map_free`].
#[no_mangle]
pub unsafe extern "C" fn qr_student_map_new(n: f64, out: *mut *mut QrStudentMap) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    let map = if n == 4.0 {
        Ok(StudentMap::n4())
    } else {
        StudentMap::new(n, &StudentMapConfig::default())
    };
    match map {
        Ok(m) => {
            *out = Box::into_raw(Box::new(QrStudentMap(m)));
            QrStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Student t quantile in Gaussian depth: the sample `z(v)` of a standard
/// normal converts to a Student t sample at the same probability.
///
/// # Safety
/// `map` must be a live handle from [`qr_student_map_new`]; `out` must
/// point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_student_map_eval(
    map: *const QrStudentMap,
    v: f64,
    out: *mut f64,
) -> QrStatus {
    let Some(m) = map.as_ref() else {
        return QrStatus::NullArgument;
    };
    write_value(Ok(m.0.eval(v)), out)
}

/// Releases a Student map handle; null is a no-op.
///
/// # Safety
/// `map` must be null or a handle from [`qr_student_map_new`] that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_student_map_free(map: *mut QrStudentMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

fn wrap_map(r: Result<QuantileMap>, out: &mut *mut QrMap) -> QrStatus {
    match r {
        Ok(m) => {
            *out = Box::into_raw(Box::new(QrMap(m)));
            QrStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

fn effective_step(step: f64) -> f64 {
    if step > 0.0 {
        step
    } else {
        DEFAULT_STEP
    }
}

/// Solves the Gaussian -> Student t recycling map over `[-v_max, v_max]`.
/// `step <= 0` selects the default step size.
///
/// # Safety
/// `out` must point to a writable handle slot. On success the caller owns
/// the handle and must release it with [`qr_map_free`].
#[no_mangle]
pub unsafe extern "C" fn qr_map_gaussian_to_student(
    n: f64,
    v_max: f64,
    step: f64,
    out: *mut *mut QrMap,
) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    let r = dd_gaussian_to_student(n, v_max)
        .and_then(|p| solve_rode_dd(&p, effective_step(step), RkOrder::Rk6))
        .and_then(|m| m.mirror_odd());
    wrap_map(r, out)
}

/// Solves the exponential -> normal recycling map over `[0, v_max]`;
/// `v` is exponential depth, the map value is the upper-half normal
/// quantile. `step <= 0` selects the default.
///
/// # Safety
/// `out` must point to a writable handle slot; ownership as in
/// [`qr_map_gaussian_to_student`].
#[no_mangle]
pub unsafe extern "C" fn qr_map_exp_to_normal(
    v_max: f64,
    step: f64,
    out: *mut *mut QrMap,
) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    let r = dd_exp_to_normal_problem(v_max)
        .and_then(|p| solve_rode_dd(&p, effective_step(step), RkOrder::Rk6));
    wrap_map(r, out)
}

/// Solves the two-sided-exponential -> hyperbolic recycling map over
/// `[-v_max, v_max]` for shape `alpha`, skew `beta`, scale `delta`.
/// `step <= 0` selects the default.
///
/// # Safety
/// `out` must point to a writable handle slot; ownership as in
/// [`qr_map_gaussian_to_student`].
#[no_mangle]
pub unsafe extern "C" fn qr_map_exp_to_hyperbolic(
    alpha: f64,
    beta: f64,
    delta: f64,
    v_max: f64,
    step: f64,
    out: *mut *mut QrMap,
) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    let acc = Accuracy::default();
    let r = HyperbolicParams::new(alpha, beta, delta)
        .and_then(|hp| Hyperbolic::new(hp, &acc))
        .and_then(|target| {
            let split = hyperbolic_split(&target, &acc)?;
            let (left, right) = build_hyperbolic_problems(&target, &split, v_max)?;
            solve_pair(&left, &right, effective_step(step), RkOrder::Rk6)
        });
    wrap_map(r, out)
}

/// Solves the two-sided-exponential -> variance gamma recycling map over
/// `[-v_max, v_max]`; needs `lambda >= 1`. `step <= 0` selects the
/// default.
///
/// # Safety
/// `out` must point to a writable handle slot; ownership as in
/// [`qr_map_gaussian_to_student`].
#[no_mangle]
pub unsafe extern "C" fn qr_map_exp_to_vg(
    lambda: f64,
    alpha: f64,
    beta: f64,
    v_max: f64,
    step: f64,
    out: *mut *mut QrMap,
) -> QrStatus {
    let Some(out) = out.as_mut() else {
        return QrStatus::NullArgument;
    };
    let acc = Accuracy::default();
    let r = VgParams::new(lambda, alpha, beta)
        .and_then(|vp| Ok((VarianceGamma::new(vp, &acc)?, vg_split(&vp, &acc)?)))
        .and_then(|(target, split)| {
            let (left, right) = build_vg_problems(&target, &split, v_max)?;
            solve_pair(&left, &right, effective_step(step), RkOrder::Rk6)
        });
    wrap_map(r, out)
}

/// Evaluates a solved map at `v`; fails with an out-of-range status
/// outside the tabulated interval.
///
/// # Safety
/// `map` must be a live handle from a `qr_map_*` constructor; `out` must
/// point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_map_eval(map: *const QrMap, v: f64, out: *mut f64) -> QrStatus {
    let Some(m) = map.as_ref() else {
        return QrStatus::NullArgument;
    };
    write_value(m.0.eval(v), out)
}

/// Reports the tabulated range of a solved map.
///
/// # Safety
/// `map` must be a live handle; `lo` and `hi` must each point to a
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn qr_map_range(map: *const QrMap, lo: *mut f64, hi: *mut f64) -> QrStatus {
    let Some(m) = map.as_ref() else {
        return QrStatus::NullArgument;
    };
    if lo.is_null() || hi.is_null() {
        return QrStatus::NullArgument;
    }
    let (a, b) = m.0.v_range();
    *lo = a;
    *hi = b;
    QrStatus::Ok
}

/// Number of tabulated nodes in a solved map; zero for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_map_node_count(map: *const QrMap) -> usize {
    match map.as_ref() {
        Some(m) => m.0.nodes().0.len(),
        None => 0,
    }
}

/// Copies the node abscissas and values of a solved map into caller
/// buffers; `len` must equal [`qr_map_node_count`].
///
/// # Safety
/// `map` must be a live handle; `vs` and `qs` must each point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_map_copy_nodes(
    map: *const QrMap,
    vs: *mut f64,
    qs: *mut f64,
    len: usize,
) -> QrStatus {
    let Some(m) = map.as_ref() else {
        return QrStatus::NullArgument;
    };
    if vs.is_null() || qs.is_null() {
        return QrStatus::NullArgument;
    }
    let (nv, nq) = m.0.nodes();
    if len != nv.len() {
        return QrStatus::Domain;
    }
    std::slice::from_raw_parts_mut(vs, len).copy_from_slice(nv);
    std::slice::from_raw_parts_mut(qs, len).copy_from_slice(nq);
    QrStatus::Ok
}

/// Releases a solved-map handle; null is a no-op.
///
/// # Safety
/// `map` must be null or a handle from a `qr_map_*` constructor that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_map_free(map: *mut QrMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}
