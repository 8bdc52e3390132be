//! CLI harness over the quantile-recycling library: precision sweeps
//! against the oracle, QQ-map export, and kernel micro-benchmarks, all
//! emitting CSV suitable for plotting or CI gating.
//!
//! Exit codes: 0 success (and, for `precision`, bound respected); 1 for a
//! violated error bound or a failed ODE solve; 2 for usage and I/O
//! problems.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use quantile_recycling::bench::{format_bench_table, run_bench, write_bench_csv};
use quantile_recycling::report::{
    parse_params, qqmap_rows, run_precision, solve_qqmap, write_qqmap_csv, BaseId, GridSpec,
    KernelId, TargetId,
};
use quantile_recycling::Error;

#[derive(Parser)]
#[command(
    name = "qrecycle",
    version,
    about = "Quantile-recycling kernels: precision sweeps, QQ-map export, micro-benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep a kernel against the oracle; CSV columns input,approx,oracle,rel_error
    Precision {
        /// Kernel: q77, icnd_f1, icnd_f2, icnd_double, student_n4, tail
        #[arg(long)]
        kernel: String,
        /// Sweep grid lo:hi:n[:log]
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a recycling map; CSV columns v,q,identity
    Qqmap {
        /// Base distribution: gaussian or exponential
        #[arg(long)]
        base: String,
        /// Target distribution: normal, student, hyperbolic, vg
        #[arg(long)]
        target: String,
        /// Target parameters as k=v,... (e.g. alpha=1,beta=0,delta=1)
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
        /// Output grid lo:hi:n[:log]; also sets the solve extent
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Integrator step size
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time kernels with RNG/transform overhead subtracted
    Bench {
        /// Comma-separated kernel list, or "all"
        #[arg(long, default_value = "all")]
        kernel: String,
        /// Calls per timed pass (minimum 1e6)
        #[arg(long, default_value_t = 100_000_000)]
        n_samples: u64,
        /// Repetitions; the median is reported
        #[arg(long, default_value_t = 3)]
        reps: u32,
        /// PRNG seed for the input stream
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional CSV path for the timing table
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(
    path: &Option<PathBuf>,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            emit(&mut f)?;
            f.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)
        }
    }
}

fn cmd_precision(kernel: &str, grid: &str, out: &Option<PathBuf>) -> i32 {
    let kernel: KernelId = match kernel.parse() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let grid: GridSpec = match grid.parse() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match run_precision(kernel, &grid) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = write_out(out, |w| report.write_csv(w)) {
        eprintln!("error: {e}");
        return 2;
    }
    eprintln!("{}", report.summary_line());
    if report.passes() {
        0
    } else {
        1
    }
}

fn cmd_qqmap(
    base: &str,
    target: &str,
    params: &str,
    grid: &str,
    step: f64,
    out: &Option<PathBuf>,
) -> i32 {
    let parsed: Result<(BaseId, TargetId, Vec<(String, f64)>, GridSpec), Error> = (|| {
        Ok((base.parse()?, target.parse()?, parse_params(params)?, grid.parse()?))
    })();
    let (base, target, params, grid) = match parsed {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rows = match solve_qqmap(base, target, &params, grid.lo, grid.hi, step)
        .and_then(|map| qqmap_rows(&map, &grid))
    {
        Ok(rows) => rows,
        Err(e @ (Error::Domain(_) | Error::Unsupported(_))) => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(e) => {
            eprintln!("ODE failure: {e}");
            return 1;
        }
    };
    if let Err(e) = write_out(out, |w| write_qqmap_csv(&rows, w)) {
        eprintln!("error: {e}");
        return 2;
    }
    eprintln!(
        "solved {base:?} -> {target:?} on [{}, {}], {} rows",
        grid.lo,
        grid.hi,
        rows.len()
    );
    0
}

fn cmd_bench(kernel: &str, n_samples: u64, reps: u32, seed: u64, out: &Option<PathBuf>) -> i32 {
    let kernels: Vec<KernelId> = if kernel == "all" {
        let mut ks = KernelId::all_measurable().to_vec();
        ks.push(KernelId::Identity);
        ks
    } else {
        match kernel.split(',').map(|s| s.trim().parse()).collect() {
            Ok(ks) => ks,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    };
    let timings = match run_bench(&kernels, n_samples, reps, seed) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    print!("{}", format_bench_table(&timings, n_samples, reps));
    if out.is_some() {
        if let Err(e) = write_out(out, |w| write_bench_csv(&timings, w)) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    0
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Precision { kernel, grid, out } => cmd_precision(kernel, grid, out),
        Cmd::Qqmap {
            base,
            target,
            params,
            grid,
            step,
            out,
        } => cmd_qqmap(base, target, params, grid, *step, out),
        Cmd::Bench {
            kernel,
            n_samples,
            reps,
            seed,
            out,
        } => cmd_bench(kernel, *n_samples, *reps, *seed, out),
    };
    std::process::exit(code);
}
