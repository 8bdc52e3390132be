//! Reference quantile values for error measurement.
//!
//! The shipped kernels are rational fits, truncated series, and ODE solves;
//! to measure their error honestly the reference values must come from
//! *different* constructions. This module provides them:
//!
//! * normal quantiles by Newton iteration on `erf`/`erfc` (with the tail
//!   iteration performed in log space so relative accuracy survives down to
//!   `u = 1e-300`),
//! * an independent second method, the power series of the normal quantile
//!   around `u = 1/2` with coefficients generated by recurrence at runtime,
//! * Student t quantiles from closed forms (1, 2, 4 degrees of freedom) and
//!   from tail-mass quadrature plus log-Newton for everything else,
//! * a generic CDF inverter (quadrature + bisection) for distributions with
//!   no closed form at all.
//!
//! Oracles cross-check each other in the tests; a disagreement fails loudly
//! as [`Error::OracleFailure`].

use crate::dist::{Distribution, StudentT};
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::special::{erf, erfc, erfcx, SQRT_PI};
use std::sync::OnceLock;

/// Iteration and quadrature budgets for oracle evaluations.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Target absolute accuracy on the probability scale.
    pub abs_tol: f64,
    /// Newton/bisection iteration cap.
    pub max_iter: usize,
    /// Quadrature tolerance for CDF evaluations.
    pub quad_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            abs_tol: 1e-16,
            max_iter: 200,
            quad_tol: 1e-12,
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail `1 - Phi(z)`, fully accurate for large `z`
/// where the CDF itself rounds to one.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Solves `erf(y) = s` for `s` in `(0, 0.6]` by Newton iteration.
fn inv_erf_newton(s: f64, cfg: &OracleConfig) -> Result<f64> {
    let mut y = 0.5 * SQRT_PI * s;
    let mut prev = f64::INFINITY;
    for it in 0..cfg.max_iter {
        let r = s - erf(y);
        let dy = r * 0.5 * SQRT_PI * (y * y).exp();
        y += dy;
        if dy.abs() <= 1e-15 * y.abs() {
            return Ok(y);
        }
        // Quadratic phase over: the step has hit the rounding floor.
        if it >= 3 && dy.abs() >= prev {
            return Ok(y);
        }
        prev = dy.abs();
    }
    Err(Error::OracleFailure(format!(
        "inverse-erf Newton stalled at s = {s}"
    )))
}

/// Solves `ln erfc(y) = target_ln` for `y > 0` by Newton iteration in log
/// space: `y <- y + (ln erfcx(y) - y^2 - target_ln) * sqrt(pi)/2 * erfcx(y)`.
///
/// Working on the log keeps every quantity O(1) no matter how deep the tail,
/// and the only rounding exposure is one `ln` and the `y^2` term, so the
/// solved `y` carries relative error at the few-ulp level.
fn tail_y_from_log(target_ln: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(target_ln < 0.0) {
        return Err(Error::Domain(format!(
            "tail solve needs a negative log-probability, got {target_ln}"
        )));
    }
    let mut y = (-target_ln).max(0.16).sqrt();
    let mut prev = f64::INFINITY;
    for it in 0..cfg.max_iter {
        let ex = erfcx(y);
        let g = ex.ln() - y * y - target_ln;
        let dy = g * 0.5 * SQRT_PI * ex;
        y += dy;
        if y <= 0.0 {
            y = 0.5 * (y - dy); // undo half a step rather than leave the domain
            continue;
        }
        if dy.abs() <= 1e-15 * y.abs() {
            return Ok(y);
        }
        if it >= 3 && dy.abs() >= prev {
            return Ok(y);
        }
        prev = dy.abs();
    }
    Err(Error::OracleFailure(format!(
        "log-space erfc Newton stalled at target {target_ln}"
    )))
}

// Coefficients a_m of Phi^{-1}(1/2 + w) = sum a_m w^m (odd m only), from
// the recurrence (m+2)(m+1) a_{m+2} = sum_{i+j+k=m} a_i (j+1)a_{j+1} (k+1)a_{k+1},
// a_1 = sqrt(2 pi), which encodes z'' = z (z')^2 term by term.
fn probit_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        const M: usize = 1200;
        let mut a = vec![0.0f64; M + 2];
        let mut b = vec![0.0f64; M + 1]; // b_m = (m+1) a_{m+1}
        let mut d = vec![0.0f64; M]; // d_m = (b * b)_m, Cauchy square
        a[1] = (2.0 * std::f64::consts::PI).sqrt();
        b[0] = a[1];
        for m in 0..M {
            let mut dm = 0.0;
            for p in 0..=m {
                dm += b[p] * b[m - p];
            }
            d[m] = dm;
            // e_m = (a * d)_m; a_0 = 0 so the i = 0 term vanishes.
            let mut em = 0.0;
            for i in 1..=m {
                em += a[i] * d[m - i];
            }
            a[m + 2] = em / ((m + 2) as f64 * (m + 1) as f64);
            b[m + 1] = (m + 2) as f64 * a[m + 2];
        }
        a
    })
}

/// The center series evaluated at `w = u - 1/2`; valid for `|w| <= 0.45`.
///
/// All coefficients are positive, so for `w > 0` the partial sums grow
/// monotonically and there is no cancellation to amplify rounding.
pub(crate) fn probit_series_eval(w: f64) -> Result<f64> {
    if !(w.abs() <= 0.45) {
        return Err(Error::Domain(format!(
            "center series needs |u - 1/2| <= 0.45, got w = {w}"
        )));
    }
    let a = probit_coeffs();
    let w2 = w * w;
    let mut sum = 0.0;
    let mut pw = w;
    let mut m = 1;
    while m < a.len() {
        let term = a[m] * pw;
        sum += term;
        if m > 5 && term.abs() <= 1e-18 * sum.abs() {
            return Ok(sum);
        }
        pw *= w2;
        m += 2;
    }
    Err(Error::OracleFailure(format!(
        "center series not converged at w = {w}"
    )))
}

/// Normal quantile `Phi^{-1}(u)` by Newton on the error function.
///
/// Three regimes: an exact complement fold to `u <= 1/2`, then Newton on
/// `erf(y) = 1 - 2u` near the center (the target is formed without rounding)
/// and log-space Newton on `erfc(y) = 2u` in the tail. Relative accuracy is
/// a few ulps throughout, including `z` near zero and `u` near zero.
pub fn oracle_normal_quantile(u: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile needs u in (0,1), got {u}")));
    }
    if u == 0.5 {
        return Ok(0.0);
    }
    if u > 0.5 {
        // 1 - u is exact for u in [1/2, 1).
        return Ok(-oracle_normal_quantile(1.0 - u, cfg)?);
    }
    if u >= 0.3 {
        let s = 1.0 - 2.0 * u; // exact: 2u in [0.6, 1)
        let y = inv_erf_newton(s, cfg)?;
        Ok(-std::f64::consts::SQRT_2 * y)
    } else {
        let y = tail_y_from_log((2.0 * u).ln(), cfg)?;
        Ok(-std::f64::consts::SQRT_2 * y)
    }
}

/// Normal quantile against exponential depth: `z = Phi^{-1}(1 - e^{-v}/2)`
/// without ever forming the probability.
///
/// For `v >= 0.02` the log-space Newton target is exactly `-v`; below that
/// the center series takes over through the exact map `w = -expm1(-v)/2`.
/// Both paths preserve relative accuracy as `z -> 0`, which a probability-
/// space round trip would not. Negative `v` (the coordinate reaches down to
/// `-ln 2` as `u -> 0`) is supported to `v >= -0.64`, where the center
/// series still converges; nothing in this crate needs the coordinate
/// deeper on that side.
pub fn oracle_z_from_v(v: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(v >= -0.64) {
        return Err(Error::Domain(format!("need v >= -0.64, got {v}")));
    }
    if v < 0.02 {
        let w = -0.5 * (-v).exp_m1();
        probit_series_eval(w)
    } else {
        Ok(std::f64::consts::SQRT_2 * tail_y_from_log(-v, cfg)?)
    }
}

/// Student t quantile. Closed forms for 1, 2 and 4 degrees of freedom;
/// tail-mass quadrature with log-Newton otherwise.
pub fn oracle_student_quantile(u: f64, n: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile needs u in (0,1), got {u}")));
    }
    if u >= 0.5 {
        oracle_student_upper(1.0 - u, n, cfg)
    } else {
        Ok(-oracle_student_upper(u, n, cfg)?)
    }
}

/// Student t quantile parameterized by upper-tail mass: the `t >= 0` with
/// `P(T > t) = q` for `q` in `(0, 1/2]`. Taking the tail mass directly (not
/// `1 - u`) keeps deep-tail comparisons exact.
pub fn oracle_student_upper(q: f64, n: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::Domain(format!(
            "upper-tail quantile needs q in (0, 1/2], got {q}"
        )));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("need n > 0, got {n}")));
    }
    if q == 0.5 {
        return Ok(0.0);
    }
    if n == 1.0 {
        // Cauchy: cot(pi q), relative-accurate for any tail depth.
        return Ok(1.0 / (std::f64::consts::PI * q).tan());
    }
    if n == 2.0 {
        return Ok((1.0 - 2.0 * q) / (2.0 * q * (1.0 - q)).sqrt());
    }
    if n == 4.0 {
        // Exact inverse of the quartic CDF. alpha = 4q(1-q) is symmetric in
        // q <-> 1-q and loses nothing for small q.
        let alpha = 4.0 * q * (1.0 - q);
        let sq = alpha.sqrt();
        let qq = ((sq.acos()) / 3.0).cos() / sq;
        return Ok(2.0 * (qq - 1.0).sqrt());
    }
    student_upper_by_quadrature(q, n, cfg)
}

fn student_upper_by_quadrature(q: f64, n: f64, cfg: &OracleConfig) -> Result<f64> {
    let dist = StudentT::new(n)?;
    // Tail mass S(t) = int_t^inf f, mapped to [0, 1] by x = t / y^m. The
    // power m >= 2/n flattens the y -> 0 endpoint (integrand ~ y^{mn - 1})
    // so the panels converge at Gauss speed even for small n.
    let m = ((2.0 / n).ceil() as i32).max(1);
    let mf = m as f64;
    let tail = |t: f64, tol: f64| -> Result<f64> {
        let g = |y: f64| {
            if y <= 0.0 {
                return 0.0;
            }
            let ym = y.powi(m);
            let x = t / ym;
            dist.density(x) * mf * t / (ym * y)
        };
        integrate(&g, 0.0, 1.0, tol)
    };

    // Seed from the normal quantile, or from the power-law tail when that
    // is heavier (small n, deep q).
    let z = -oracle_normal_quantile(q.min(0.49), cfg)?;
    let t_power = {
        // S(t) ~ f(t) * t / n for large t; invert the leading power law
        // anchored at the density value at 1.
        let f1 = dist.density(1.0);
        (f1 / (n * q)).powf(1.0 / n).max(1.0)
    };
    let mut t = z.max(0.5 * t_power).max(1e-8);

    let mut prev = f64::INFINITY;
    for it in 0..cfg.max_iter {
        let s_coarse = tail(t, q.max(1e-300) * 1e-4)?;
        let s = tail(t, (s_coarse.abs() + q) * 5e-14)?;
        let f = dist.density(t);
        if !(s > 0.0 && f > 0.0) {
            return Err(Error::OracleFailure(format!(
                "tail quadrature degenerate at t = {t}, n = {n}"
            )));
        }
        let dt = (s.ln() - q.ln()) * s / f;
        // Geometric safeguard: huge heavy-tail steps approach in factors.
        if dt > 3.0 * t {
            t *= 3.0;
            continue;
        }
        if t + dt <= 0.0 {
            t *= 0.5;
            continue;
        }
        t += dt;
        if dt.abs() <= 1e-12 * t {
            return Ok(t);
        }
        if it >= 6 && dt.abs() >= prev {
            return Ok(t);
        }
        prev = dt.abs();
    }
    Err(Error::OracleFailure(format!(
        "Student tail Newton stalled at q = {q}, n = {n}"
    )))
}

/// Inverts a CDF known only through its density: `CDF(x) = cdf0 +
/// int_0^x density`, solved for `CDF(x) = u` by geometric bracket growth
/// and bisection. Slow and dependable; used to check map outputs for
/// distributions with no closed-form quantile at all.
pub fn oracle_cdf_inverse<D: Distribution + ?Sized>(
    d: &D,
    cdf0: f64,
    u: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile needs u in (0,1), got {u}")));
    }
    let f_at = |x: f64| -> Result<f64> {
        if x == 0.0 {
            Ok(cdf0)
        } else if x > 0.0 {
            Ok(cdf0 + integrate(&|t| d.density(t), 0.0, x, 0.1 * cfg.quad_tol)?)
        } else {
            Ok(cdf0 - integrate(&|t| d.density(t), x, 0.0, 0.1 * cfg.quad_tol)?)
        }
    };
    if u == cdf0 {
        return Ok(0.0);
    }
    let dir = if u > cdf0 { 1.0 } else { -1.0 };
    let mut lo = 0.0f64;
    let mut step = 1.0f64;
    let mut hi = dir * step;
    let mut grown = 0;
    while (f_at(hi)? - u) * dir < 0.0 {
        lo = hi;
        step *= 2.0;
        hi = dir * step;
        grown += 1;
        if grown > 60 {
            return Err(Error::OracleFailure(format!(
                "no CDF bracket found for u = {u}"
            )));
        }
    }
    // lo and hi now straddle the solution (in the signed sense of dir).
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-13 * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if (f_at(mid)? - u) * dir < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
