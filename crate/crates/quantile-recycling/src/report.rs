//! Precision sweeps, QQ-map export, and their CSV contracts.
//!
//! Every verifiable kernel carries a documented relative error bound; a
//! sweep compares the kernel against the independent oracle over a grid
//! and passes when the observed maximum stays within 1.2x that bound. CSV
//! output is plain UTF-8 with LF line endings and 17-significant-digit
//! scientific notation, which round-trips doubles exactly and makes files
//! bit-identical across runs.

use std::io::Write;

use crate::dist::{hyperbolic_split, vg_split, Hyperbolic, HyperbolicParams, VarianceGamma, VgParams};
use crate::error::{Error, Result};
use crate::normal::{icnd_double, icnd_f1, icnd_f2, q77, tail_supplement};
use crate::oracle::{
    normal_upper_tail, oracle_normal_quantile, oracle_student_upper, oracle_z_from_v, OracleConfig,
};
use crate::rode::{
    build_hyperbolic_problems, build_vg_problems, dd_exp_to_normal_problem, dd_gaussian_to_student,
    solve_pair, solve_rode_dd, QuantileMap, RkOrder,
};
use crate::special::Accuracy;
use crate::student::StudentMap;

/// One decimal double, 17 significant digits: enough to reproduce the bit
/// pattern on read-back.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Identifier of a sweepable or benchmarkable kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelId {
    /// Tail-depth rational fit `z(v)`, the (7,7) kernel.
    Q77,
    /// Branchless whole-range quantile over the (7,7) fit.
    IcndF1,
    /// Branchless whole-range quantile over the cheaper (5,5) fit.
    IcndF2,
    /// Branchless whole-range quantile over the (13,13) fit.
    IcndDouble,
    /// Student t(4) series + tail composite in Gaussian depth.
    StudentN4,
    /// Closed-form continuation past the rational fits.
    Tail,
    /// Pass-through; benchmark baseline only, has no oracle.
    Identity,
}

impl KernelId {
    pub fn name(self) -> &'static str {
        match self {
            KernelId::Q77 => "q77",
            KernelId::IcndF1 => "icnd_f1",
            KernelId::IcndF2 => "icnd_f2",
            KernelId::IcndDouble => "icnd_double",
            KernelId::StudentN4 => "student_n4",
            KernelId::Tail => "tail",
            KernelId::Identity => "identity",
        }
    }

    /// Documented maximum relative error on the kernel's domain; the sweep
    /// pass line is 1.2x this. `None` for the identity pseudo-kernel.
    pub fn error_bound(self) -> Option<f64> {
        match self {
            KernelId::Q77 => Some(1.06e-9),
            KernelId::IcndF1 => Some(1.06e-9),
            KernelId::IcndF2 => Some(4e-7),
            KernelId::IcndDouble => Some(1e-13),
            KernelId::StudentN4 => Some(1.4e-5),
            KernelId::Tail => Some(1.06e-9),
            KernelId::Identity => None,
        }
    }

    /// Inclusive input domain a sweep grid must stay inside. Kernels in
    /// tail depth take `v`; the branchless ones take probabilities.
    ///
    /// q77 deliberately extends past its accuracy range (the bound holds
    /// to v = 37) so degradation studies can sweep the overflow region.
    pub fn domain(self) -> (f64, f64) {
        match self {
            KernelId::Q77 => (1e-300, 74.0),
            KernelId::IcndF1 => (1e-16, 1.0 - 1e-16),
            KernelId::IcndF2 => (1.1e-8, 1.0 - 1.1e-8),
            KernelId::IcndDouble => (9.7e-31, 1.0 - 1e-16),
            KernelId::StudentN4 => (-74.0, 74.0),
            KernelId::Tail => (37.0, 1e4),
            KernelId::Identity => (f64::MIN, f64::MAX),
        }
    }

    /// The kernels with an oracle, in reporting order.
    pub fn all_measurable() -> [KernelId; 6] {
        [
            KernelId::Q77,
            KernelId::IcndF1,
            KernelId::IcndF2,
            KernelId::IcndDouble,
            KernelId::StudentN4,
            KernelId::Tail,
        ]
    }
}

impl std::str::FromStr for KernelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q77" => Ok(KernelId::Q77),
            "icnd_f1" => Ok(KernelId::IcndF1),
            "icnd_f2" => Ok(KernelId::IcndF2),
            "icnd_double" => Ok(KernelId::IcndDouble),
            "student_n4" => Ok(KernelId::StudentN4),
            "tail" => Ok(KernelId::Tail),
            "identity" => Ok(KernelId::Identity),
            other => Err(Error::Domain(format!(
                "unknown kernel '{other}'; expected one of q77, icnd_f1, icnd_f2, \
                 icnd_double, student_n4, tail, identity"
            ))),
        }
    }
}

/// Sweep grid: `lo:hi:n` with an optional `:log` suffix for geometric
/// spacing. Both endpoints are included exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize, log: bool) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::Domain(format!(
                "grid bounds must be finite with lo < hi, got {lo}:{hi}"
            )));
        }
        if n < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 points, got {n}")));
        }
        if log && !(lo > 0.0) {
            return Err(Error::Domain(format!(
                "log spacing needs positive bounds, got lo = {lo}"
            )));
        }
        Ok(GridSpec { lo, hi, n, log })
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        let m = (self.n - 1) as f64;
        if self.log {
            let la = self.lo.ln();
            let lb = self.hi.ln();
            for i in 0..self.n {
                out.push((la + (lb - la) * i as f64 / m).exp());
            }
        } else {
            for i in 0..self.n {
                out.push(self.lo + (self.hi - self.lo) * i as f64 / m);
            }
        }
        // Exact endpoints regardless of rounding in the interior formula.
        out[0] = self.lo;
        *out.last_mut().unwrap() = self.hi;
        out
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 && parts.len() != 4 {
            return Err(Error::Domain(format!(
                "grid spec is lo:hi:n[:log], got '{s}'"
            )));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| Error::Domain(format!("bad grid lower bound '{}'", parts[0])))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Domain(format!("bad grid upper bound '{}'", parts[1])))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| Error::Domain(format!("bad grid count '{}'", parts[2])))?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(&"linear") => false,
            Some(other) => {
                return Err(Error::Domain(format!(
                    "grid spacing is 'log' or 'linear', got '{other}'"
                )))
            }
        };
        GridSpec::new(lo, hi, n, log)
    }
}

/// One sweep sample.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionRow {
    pub input: f64,
    pub approx: f64,
    pub oracle: f64,
    pub rel_error: f64,
}

/// Sweep result: rows plus summary statistics against the kernel's bound.
#[derive(Clone, Debug)]
pub struct PrecisionReport {
    pub kernel: KernelId,
    pub bound: f64,
    pub rows: Vec<PrecisionRow>,
    pub max_rel: f64,
    pub mean_rel: f64,
}

impl PrecisionReport {
    /// Pass line used for exit codes: observed max within 1.2x the
    /// documented bound.
    pub fn passes(&self) -> bool {
        self.max_rel <= self.bound * 1.2
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b"input,approx,oracle,rel_error\n")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(r.input),
                fmt17(r.approx),
                fmt17(r.oracle),
                fmt17(r.rel_error)
            )?;
        }
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} points, max rel {:.3e}, mean rel {:.3e}, bound {:.3e} (x1.2) -> {}",
            self.kernel.name(),
            self.rows.len(),
            self.max_rel,
            self.mean_rel,
            self.bound,
            if self.passes() { "pass" } else { "FAIL" }
        )
    }
}

/// Relative error with the documented floor, so an exactly-zero oracle
/// value (the quantile at the median) cannot divide out.
pub fn rel_error(approx: f64, oracle: f64) -> f64 {
    (approx - oracle).abs() / oracle.abs().max(1e-30)
}

/// Runs a kernel-vs-oracle sweep over `grid`. The grid must lie inside the
/// kernel's documented domain; the identity pseudo-kernel has no oracle and
/// is rejected.
pub fn run_precision(kernel: KernelId, grid: &GridSpec) -> Result<PrecisionReport> {
    let bound = kernel.error_bound().ok_or_else(|| {
        Error::Unsupported("identity has no oracle; it exists for benchmark baselines".into())
    })?;
    let (dlo, dhi) = kernel.domain();
    if grid.lo < dlo || grid.hi > dhi {
        return Err(Error::Domain(format!(
            "grid [{}, {}] leaves the {} domain [{dlo}, {dhi}]",
            grid.lo,
            grid.hi,
            kernel.name()
        )));
    }
    let cfg = OracleConfig::default();
    let smap;
    let eval: Box<dyn Fn(f64) -> Result<(f64, f64)>> = match kernel {
        KernelId::Q77 => Box::new(move |v| Ok((q77(v), oracle_z_from_v(v, &cfg)?))),
        KernelId::IcndF1 => Box::new(move |u| Ok((icnd_f1(u)?, oracle_normal_quantile(u, &cfg)?))),
        KernelId::IcndF2 => Box::new(move |u| Ok((icnd_f2(u)?, oracle_normal_quantile(u, &cfg)?))),
        KernelId::IcndDouble => {
            Box::new(move |u| Ok((icnd_double(u)?, oracle_normal_quantile(u, &cfg)?)))
        }
        KernelId::StudentN4 => {
            smap = StudentMap::n4();
            Box::new(move |v| {
                let want = oracle_student_upper(normal_upper_tail(v.abs()), 4.0, &cfg)?;
                Ok((smap.eval(v), want.copysign(v)))
            })
        }
        KernelId::Tail => Box::new(move |v| Ok((tail_supplement(v)?, oracle_z_from_v(v, &cfg)?))),
        KernelId::Identity => unreachable!(),
    };
    let mut rows = Vec::with_capacity(grid.n);
    let mut max_rel = 0.0f64;
    let mut sum = 0.0f64;
    for x in grid.points() {
        let (approx, oracle) = eval(x)?;
        let rel = rel_error(approx, oracle);
        max_rel = max_rel.max(rel);
        sum += rel;
        rows.push(PrecisionRow {
            input: x,
            approx,
            oracle,
            rel_error: rel,
        });
    }
    let mean_rel = sum / rows.len() as f64;
    Ok(PrecisionReport {
        kernel,
        bound,
        rows,
        max_rel,
        mean_rel,
    })
}

/// Base distribution of a recycling solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseId {
    Gaussian,
    Exponential,
}

impl std::str::FromStr for BaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "normal" => Ok(BaseId::Gaussian),
            "exponential" | "exp" => Ok(BaseId::Exponential),
            other => Err(Error::Domain(format!(
                "unknown base '{other}'; expected gaussian or exponential"
            ))),
        }
    }
}

/// Target distribution of a recycling solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetId {
    Normal,
    Student,
    Hyperbolic,
    VarianceGamma,
}

impl std::str::FromStr for TargetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(TargetId::Normal),
            "student" | "student_t" => Ok(TargetId::Student),
            "hyperbolic" => Ok(TargetId::Hyperbolic),
            "vg" | "variance_gamma" => Ok(TargetId::VarianceGamma),
            other => Err(Error::Domain(format!(
                "unknown target '{other}'; expected normal, student, hyperbolic, or vg"
            ))),
        }
    }
}

/// Parses `k=v,...` into name-value pairs; empty input is an empty list.
pub fn parse_params(s: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    for item in s.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("parameter '{item}' is not k=v")))?;
        let val: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("parameter '{k}' has non-numeric value '{v}'")))?;
        out.push((k.trim().to_string(), val));
    }
    Ok(out)
}

fn take_param(params: &[(String, f64)], key: &str, default: f64) -> f64 {
    params
        .iter()
        .rev()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .unwrap_or(default)
}

fn reject_unknown(params: &[(String, f64)], allowed: &[&str]) -> Result<()> {
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Domain(format!(
                "unknown parameter '{k}'; this pair takes {allowed:?}"
            )));
        }
    }
    Ok(())
}

/// Solves the recycling map for a supported base/target pair, sized to
/// cover `[v_lo, v_hi]`.
///
/// Supported pairs: gaussian -> student (`n`), exponential -> normal,
/// exponential -> hyperbolic (`alpha`, `beta`, `delta`), exponential -> vg
/// (`lambda`, `alpha`, `beta`). The Gaussian-base and normal-target solves
/// run in double-double, where depth amplifies origin roundoff past what
/// f64 can hold; the exponential-pair solves are f64 left/right merges.
pub fn solve_qqmap(
    base: BaseId,
    target: TargetId,
    params: &[(String, f64)],
    v_lo: f64,
    v_hi: f64,
    step: f64,
) -> Result<QuantileMap> {
    if !(v_lo < v_hi) || !v_lo.is_finite() || !v_hi.is_finite() {
        return Err(Error::Domain(format!(
            "map range must be finite with lo < hi, got [{v_lo}, {v_hi}]"
        )));
    }
    let extent = v_lo.abs().max(v_hi.abs());
    match (base, target) {
        (BaseId::Gaussian, TargetId::Student) => {
            reject_unknown(params, &["n"])?;
            let n = take_param(params, "n", 4.0);
            let p = dd_gaussian_to_student(n, extent)?;
            let right = solve_rode_dd(&p, step, RkOrder::Rk6)?;
            if v_lo < 0.0 {
                right.mirror_odd()
            } else {
                Ok(right)
            }
        }
        (BaseId::Exponential, TargetId::Normal) => {
            reject_unknown(params, &[])?;
            if v_lo < 0.0 {
                return Err(Error::Domain(format!(
                    "exponential depth is one-sided; range starts at {v_lo}"
                )));
            }
            let p = dd_exp_to_normal_problem(v_hi)?;
            solve_rode_dd(&p, step, RkOrder::Rk6)
        }
        (BaseId::Exponential, TargetId::Hyperbolic) => {
            reject_unknown(params, &["alpha", "beta", "delta"])?;
            let alpha = take_param(params, "alpha", 1.0);
            let beta = take_param(params, "beta", 0.0);
            let delta = take_param(params, "delta", 1.0);
            let acc = Accuracy::default();
            let hp = HyperbolicParams::new(alpha, beta, delta)?;
            let target = Hyperbolic::new(hp, &acc)?;
            let split = hyperbolic_split(&target, &acc)?;
            let (left, right) = build_hyperbolic_problems(&target, &split, extent)?;
            solve_pair(&left, &right, step, RkOrder::Rk6)
        }
        (BaseId::Exponential, TargetId::VarianceGamma) => {
            reject_unknown(params, &["lambda", "alpha", "beta"])?;
            let lambda = take_param(params, "lambda", 1.0);
            let alpha = take_param(params, "alpha", 1.0);
            let beta = take_param(params, "beta", 0.0);
            let acc = Accuracy::default();
            let vp = VgParams::new(lambda, alpha, beta)?;
            let target = VarianceGamma::new(vp, &acc)?;
            let split = vg_split(&vp, &acc)?;
            let (left, right) = build_vg_problems(&target, &split, extent)?;
            solve_pair(&left, &right, step, RkOrder::Rk6)
        }
        (b, t) => Err(Error::Unsupported(format!(
            "no recycling route {b:?} -> {t:?}; supported: gaussian->student, \
             exponential->{{normal, hyperbolic, vg}}"
        ))),
    }
}

/// Samples a solved map on a grid for export.
pub fn qqmap_rows(map: &QuantileMap, grid: &GridSpec) -> Result<Vec<(f64, f64)>> {
    grid.points()
        .into_iter()
        .map(|v| Ok((v, map.eval(v)?)))
        .collect()
}

/// `v,q,identity` rows; the third column repeats `v` so plotting tools get
/// the diagonal without recomputation.
pub fn write_qqmap_csv<W: Write + ?Sized>(rows: &[(f64, f64)], w: &mut W) -> std::io::Result<()> {
    w.write_all(b"v,q,identity\n")?;
    for &(v, q) in rows {
        writeln!(w, "{},{},{}", fmt17(v), fmt17(q), fmt17(v))?;
    }
    Ok(())
}
