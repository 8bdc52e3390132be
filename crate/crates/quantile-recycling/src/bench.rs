//! Micro-benchmarks of the quantile kernels.
//!
//! Absolute timings are machine-bound, so nothing here asserts a number.
//! The harness reports overhead-subtracted cost per call: each kernel is
//! timed against a baseline pass that draws the same PRNG stream and
//! applies the same input transform but skips the kernel itself, and the
//! difference is what the kernel costs. Both passes run through the same
//! loop shape and dynamic dispatch, so the subtraction removes generator,
//! transform, and harness overhead together.
//!
//! One uniform draw feeds every kernel in its native coordinate: the
//! tail-depth kernels take `v = -log u` (plus an offset into the
//! supplement's region), the branchless probability kernels take `u`
//! directly. Runs are single-threaded; the per-call accumulator is
//! returned as a checksum so the work cannot be optimized away and equal
//! seeds provably see equal streams.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::normal::{icnd_double, icnd_f1, icnd_f2, q77, tail_supplement};
use crate::report::{fmt17, KernelId};
use crate::student::StudentMap;

const TWO_NEG_53: f64 = 1.0 / 9007199254740992.0;

/// Timing summary for one kernel; medians are over repetitions.
#[derive(Clone, Debug)]
pub struct KernelTiming {
    pub kernel: KernelId,
    /// Median per-call cost with the baseline pass subtracted. Near zero
    /// (or slightly negative, within noise) for the identity kernel.
    pub net_ns_per_call: f64,
    /// Median per-call cost of the baseline pass alone.
    pub baseline_ns_per_call: f64,
    /// Net cost relative to the cheapest positive net in the same run.
    pub rel_cost: f64,
    /// Coefficient of variation of the gross per-call times across
    /// repetitions; the stability measure behind the noise warning.
    pub cv: f64,
    /// Accumulated kernel outputs from the last repetition; depends only
    /// on the seed, so it doubles as a determinism witness.
    pub checksum: f64,
    /// Per-repetition net ns/call, in run order.
    pub net_reps: Vec<f64>,
}

impl KernelTiming {
    pub fn noisy(&self) -> bool {
        self.cv > 0.10
    }
}

/// Input transform from a uniform draw to the kernel's native coordinate.
fn transform(kernel: KernelId) -> fn(f64) -> f64 {
    match kernel {
        KernelId::Q77 | KernelId::StudentN4 | KernelId::Identity => |u: f64| -u.ln(),
        KernelId::IcndF1 | KernelId::IcndF2 | KernelId::IcndDouble => |u: f64| u,
        KernelId::Tail => |u: f64| 37.0 - u.ln(),
    }
}

fn kernel_eval(kernel: KernelId) -> Box<dyn Fn(f64) -> f64> {
    match kernel {
        KernelId::Q77 => Box::new(q77),
        KernelId::IcndF1 => Box::new(|u| icnd_f1(u).unwrap_or(f64::NAN)),
        KernelId::IcndF2 => Box::new(|u| icnd_f2(u).unwrap_or(f64::NAN)),
        KernelId::IcndDouble => Box::new(|u| icnd_double(u).unwrap_or(f64::NAN)),
        KernelId::StudentN4 => {
            let smap = StudentMap::n4();
            Box::new(move |v| smap.eval(v))
        }
        KernelId::Tail => Box::new(|v| tail_supplement(v).unwrap_or(f64::NAN)),
        KernelId::Identity => Box::new(|x| x),
    }
}

/// One timed pass over `n` draws; returns (elapsed ns, output sum).
fn time_pass(seed: u64, n: u64, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n {
        let x = rng.next_u64();
        // (k + 1/2) * 2^-53 lies strictly inside (0, 1).
        let u = ((x >> 11) as f64 + 0.5) * TWO_NEG_53;
        acc += f(u);
    }
    (start.elapsed().as_secs_f64() * 1e9, acc)
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Runs the harness for the listed kernels. `n_samples >= 1e6` keeps a
/// single pass long enough to time; each repetition reruns baseline and
/// kernel passes on the same derived seed so their streams match.
pub fn run_bench(
    kernels: &[KernelId],
    n_samples: u64,
    repetitions: u32,
    seed: u64,
) -> Result<Vec<KernelTiming>> {
    if n_samples < 1_000_000 {
        return Err(Error::Domain(format!(
            "benchmark needs at least 1e6 samples per pass, got {n_samples}"
        )));
    }
    if repetitions == 0 {
        return Err(Error::Domain("benchmark needs at least one repetition".into()));
    }
    if kernels.is_empty() {
        return Err(Error::Domain("no kernels selected".into()));
    }
    let mut out = Vec::with_capacity(kernels.len());
    for &k in kernels {
        let t = transform(k);
        let eval = kernel_eval(k);
        // The baseline routes through a boxed do-nothing evaluation so
        // both passes pay the same indirect call; the subtraction then
        // isolates the kernel body alone.
        let base_eval = kernel_eval(KernelId::Identity);
        let base_fn = |u: f64| base_eval(t(u));
        let gross_fn = |u: f64| eval(t(u));
        let mut net = Vec::with_capacity(repetitions as usize);
        let mut bases = Vec::with_capacity(repetitions as usize);
        let mut gross = Vec::with_capacity(repetitions as usize);
        let mut checksum = 0.0;
        for r in 0..repetitions {
            let rep_seed = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(r as u64));
            let (base_ns, _) = time_pass(rep_seed, n_samples, &base_fn);
            let (gross_ns, acc) = time_pass(rep_seed, n_samples, &gross_fn);
            checksum = acc;
            let n = n_samples as f64;
            net.push((gross_ns - base_ns) / n);
            bases.push(base_ns / n);
            gross.push(gross_ns / n);
        }
        let mean_g = gross.iter().sum::<f64>() / gross.len() as f64;
        let var_g =
            gross.iter().map(|g| (g - mean_g) * (g - mean_g)).sum::<f64>() / gross.len() as f64;
        let cv = if mean_g > 0.0 { var_g.sqrt() / mean_g } else { 0.0 };
        out.push(KernelTiming {
            kernel: k,
            net_ns_per_call: median(&net),
            baseline_ns_per_call: median(&bases),
            rel_cost: 0.0,
            cv,
            checksum,
            net_reps: net,
        });
    }
    // The identity row is a noise reading, not a cost; anchoring to it
    // would inflate every ratio.
    let floor = out
        .iter()
        .filter(|t| t.kernel != KernelId::Identity)
        .map(|t| t.net_ns_per_call)
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    for t in &mut out {
        t.rel_cost = if floor.is_finite() && t.net_ns_per_call > 0.0 {
            t.net_ns_per_call / floor
        } else {
            0.0
        };
    }
    Ok(out)
}

/// Human-readable table with per-kernel noise warnings.
pub fn format_bench_table(timings: &[KernelTiming], n_samples: u64, repetitions: u32) -> String {
    let mut s = format!(
        "{} calls/pass, {} repetitions (median reported, baseline subtracted)\n",
        n_samples, repetitions
    );
    s.push_str(&format!(
        "{:<12} {:>12} {:>12} {:>9} {:>7}\n",
        "kernel", "net ns/call", "base ns/call", "rel cost", "cv %"
    ));
    for t in timings {
        s.push_str(&format!(
            "{:<12} {:>12.2} {:>12.2} {:>9.2} {:>7.1}{}\n",
            t.kernel.name(),
            t.net_ns_per_call,
            t.baseline_ns_per_call,
            t.rel_cost,
            t.cv * 100.0,
            if t.noisy() { "  [noisy: cv > 10%]" } else { "" }
        ));
    }
    s
}

pub fn write_bench_csv<W: std::io::Write + ?Sized>(
    timings: &[KernelTiming],
    w: &mut W,
) -> std::io::Result<()> {
    w.write_all(b"kernel,net_ns_per_call,baseline_ns_per_call,rel_cost,cv,checksum\n")?;
    for t in timings {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            t.kernel.name(),
            fmt17(t.net_ns_per_call),
            fmt17(t.baseline_ns_per_call),
            fmt17(t.rel_cost),
            fmt17(t.cv),
            fmt17(t.checksum)
        )?;
    }
    Ok(())
}
