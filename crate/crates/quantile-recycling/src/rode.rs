//! The recycling ODE and its solver.
//!
//! A sample `v` from a base distribution with quantile function `Q0` can be
//! converted into a sample from a target distribution by the map
//! `Q(v) = F^{-1}(F0(v))`. Eliminating the probability from that relation
//! leaves a second-order ODE in the map alone,
//!
//! ```text
//! Q'' + Hb(v) Q' = H(Q) (Q')^2
//! ```
//!
//! where `Hb` and `H` are the negative log-density slopes of base and
//! target. Solving it once yields a tabulated [`QuantileMap`] that converts
//! an entire stream of base samples at interpolation cost, with no
//! probability ever computed.
//!
//! The integrator is fixed-step explicit Runge-Kutta (classical 4th order,
//! plus a 6th-order option) over the first-order system `(Q, Q')`. The
//! problems this crate poses are smooth away from the origin, so adaptivity
//! buys nothing; step 1e-3 is the working default. Left half-line problems
//! reuse the same forward integrator through the substitution `v -> -v`,
//! which flips both `H` functions as documented on [`solve_rode`].
//!
//! A double-double variant of the identical scheme ([`solve_rode_dd`])
//! serves deep solves whose error amplification exceeds what plain f64
//! roundoff permits; [`DdRecyclingProblem`] documents the mechanism.

use crate::dd::Dd;
use crate::dist::{hyperbolic_h, student_h, Distribution, Hyperbolic, TwoSidedExponential, VarianceGamma};
use crate::error::{Error, Result};
use crate::special::half_ratio_scaled_dd;
use crate::student::student_gamma;

/// Negative log-density slope as a boxed closure; the solver treats base
/// and target uniformly through this shape.
pub type HFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which half line a problem covers, measured from its start point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// Integrator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkOrder {
    Rk4,
    Rk6,
}

/// Default integration step; small enough that the 6th-order truncation
/// error sits well below the map tolerances used anywhere in the crate.
pub const DEFAULT_STEP: f64 = 1e-3;

/// One half-line instance of the recycling ODE.
pub struct RecyclingProblem {
    pub base_h: HFn,
    pub target_h: HFn,
    /// Start abscissa, usually 0.
    pub v0: f64,
    /// Map value at `v0`.
    pub q0: f64,
    /// Map slope at `v0`; quantile maps are increasing, so this must be
    /// strictly positive.
    pub slope0: f64,
    pub direction: Direction,
    /// How far from `v0` to integrate; strictly positive.
    pub v_max: f64,
}

impl RecyclingProblem {
    pub fn new(
        base_h: HFn,
        target_h: HFn,
        v0: f64,
        q0: f64,
        slope0: f64,
        direction: Direction,
        v_max: f64,
    ) -> Result<Self> {
        if !(slope0 > 0.0) || !slope0.is_finite() {
            return Err(Error::Domain(format!(
                "initial slope must be positive and finite, got {slope0}"
            )));
        }
        if !(v_max > 0.0) || !v_max.is_finite() {
            return Err(Error::Domain(format!(
                "solve extent must be positive and finite, got {v_max}"
            )));
        }
        if !v0.is_finite() || !q0.is_finite() {
            return Err(Error::Domain(format!(
                "initial point ({v0}, {q0}) must be finite"
            )));
        }
        Ok(RecyclingProblem {
            base_h,
            target_h,
            v0,
            q0,
            slope0,
            direction,
            v_max,
        })
    }
}

/// Second derivative of the map: `H(q) qp^2 - Hb(v) qp`.
#[inline]
pub fn rode_rhs(
    v: f64,
    q: f64,
    qp: f64,
    base_h: &dyn Fn(f64) -> f64,
    target_h: &dyn Fn(f64) -> f64,
) -> f64 {
    target_h(q) * qp * qp - base_h(v) * qp
}

fn rk4_step<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: &F, s: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = f(s, y);
    let k2 = f(
        s + 0.5 * h,
        [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
    );
    let k3 = f(
        s + 0.5 * h,
        [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
    );
    let k4 = f(s + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

// Butcher's 7-stage 6th-order scheme; verified against its order
// conditions in the tests below.
const RK6_C: [f64; 7] = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 0.5, 0.5, 1.0];
const RK6_B: [f64; 7] = [
    11.0 / 120.0,
    0.0,
    27.0 / 40.0,
    27.0 / 40.0,
    -4.0 / 15.0,
    -4.0 / 15.0,
    11.0 / 120.0,
];
const RK6_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 2.0 / 3.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0, 0.0, 0.0, 0.0],
    [-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0, 0.0, 0.0],
    [0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 0.5, 0.0],
    [9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0],
];

fn rk6_step<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: &F, s: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let mut k = [[0.0f64; 2]; 7];
    for i in 0..7 {
        let mut yi = y;
        for j in 0..i {
            let a = RK6_A[i][j];
            if a != 0.0 {
                yi[0] += h * a * k[j][0];
                yi[1] += h * a * k[j][1];
            }
        }
        k[i] = f(s + RK6_C[i] * h, yi);
    }
    let mut out = y;
    for (ki, bi) in k.iter().zip(RK6_B.iter()) {
        out[0] += h * bi * ki[0];
        out[1] += h * bi * ki[1];
    }
    out
}

/// Integrates a [`RecyclingProblem`] and tabulates the resulting map.
///
/// Left problems are reflected onto the positive axis and run through the
/// same forward loop: with `w = -v` and `X(w) = -Q(-w)`, the ODE keeps its
/// form under `Hb*(w) = -Hb(-w)`, `H*(x) = -H(-x)`, and the initial slope
/// is unchanged. Grid nodes are un-reflected on the way out, so the
/// returned map always has strictly increasing abscissas.
///
/// Aborts with a monotonicity-loss error the moment `Q'` stops being
/// positive and with an overflow error on non-finite state or `|Q| > 1e12`;
/// both signal blow-up or ill-posed initial data rather than a recoverable
/// condition.
pub fn solve_rode(p: &RecyclingProblem, step: f64, order: RkOrder) -> Result<QuantileMap> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let n_steps = (p.v_max / step).ceil() as usize;
    if n_steps > 20_000_000 {
        return Err(Error::Domain(format!(
            "step {step} over extent {} needs {n_steps} nodes",
            p.v_max
        )));
    }
    let left = p.direction == Direction::Left;
    let rhs = |s: f64, y: [f64; 2]| -> [f64; 2] {
        let (v, q) = if left { (-s, -y[0]) } else { (s, y[0]) };
        let hb = (p.base_h)(v);
        let ht = (p.target_h)(q);
        // Reflection flips both H values; qp is invariant.
        let (hb, ht) = if left { (-hb, -ht) } else { (hb, ht) };
        [y[1], ht * y[1] * y[1] - hb * y[1]]
    };

    let s0 = if left { -p.v0 } else { p.v0 };
    let x0 = if left { -p.q0 } else { p.q0 };
    let mut y = [x0, p.slope0];
    let mut s = s0;
    let mut nodes_s = Vec::with_capacity(n_steps + 1);
    let mut nodes_x = Vec::with_capacity(n_steps + 1);
    let mut nodes_xp = Vec::with_capacity(n_steps + 1);
    nodes_s.push(s);
    nodes_x.push(y[0]);
    nodes_xp.push(y[1]);
    let s_end = s0 + p.v_max;
    for i in 1..=n_steps {
        // Land the last node exactly on the requested extent; the min
        // guards against ceil() overshoot when v_max/step is integral up
        // to rounding.
        let s_next = if i == n_steps {
            s_end
        } else {
            (s0 + i as f64 * step).min(s_end)
        };
        if s_next <= s {
            continue;
        }
        let h = s_next - s;
        y = match order {
            RkOrder::Rk4 => rk4_step(&rhs, s, y, h),
            RkOrder::Rk6 => rk6_step(&rhs, s, y, h),
        };
        s = s_next;
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::Overflow(format!(
                "non-finite state near v = {}",
                if left { -s } else { s }
            )));
        }
        if y[1] <= 0.0 {
            return Err(Error::MonotonicityLoss(format!(
                "map slope {} at v = {}",
                y[1],
                if left { -s } else { s }
            )));
        }
        if y[0].abs() > 1e12 {
            return Err(Error::Overflow(format!(
                "map value {} at v = {}",
                y[0],
                if left { -s } else { s }
            )));
        }
        nodes_s.push(s);
        nodes_x.push(y[0]);
        nodes_xp.push(y[1]);
    }

    let n = nodes_s.len();
    let mut vs = Vec::with_capacity(n);
    let mut qs = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    if left {
        for i in (0..n).rev() {
            let v = if nodes_s[i] == 0.0 { 0.0 } else { -nodes_s[i] };
            vs.push(v);
            qs.push(if nodes_x[i] == 0.0 { 0.0 } else { -nodes_x[i] });
            ds.push(nodes_xp[i]);
        }
    } else {
        vs = nodes_s;
        qs = nodes_x;
        ds = nodes_xp;
    }
    QuantileMap::from_nodes(vs, qs, ds)
}

/// Negative log-density slope carried in double-double arithmetic.
pub type DdHFn = Box<dyn Fn(Dd) -> Dd + Send + Sync>;

/// Right-half-line instance of the recycling ODE carried entirely in
/// double-double arithmetic.
///
/// The ODE amplifies early perturbations by the ratio of target densities
/// along the solution: a deviation injected at the origin surfaces at `v`
/// multiplied by roughly `f(Q(0)) / f(Q(v))`. Into a heavy-tailed target
/// from a Gaussian base that ratio reaches ~1e10 by `v = 6`, so per-step
/// f64 roundoff (~1e-16) floors the achievable end-node accuracy near 1e-4
/// absolute regardless of step size, and even the one-rounding error in a
/// f64 initial slope costs ~1e-8 relative at the far end. Carrying state,
/// right-hand side, tableau, and initial slope in double-double pushes the
/// injected noise to ~1e-32 and restores the integrator's design accuracy.
///
/// Only right problems from the origin are provided: every target this
/// path serves is symmetric, so the left half follows by oddness through
/// [`QuantileMap::mirror_odd`].
pub struct DdRecyclingProblem {
    pub base_h: DdHFn,
    pub target_h: DdHFn,
    /// Map value at the origin.
    pub q0: Dd,
    /// Map slope at the origin; strictly positive.
    pub slope0: Dd,
    /// How far from the origin to integrate; strictly positive.
    pub v_max: f64,
}

impl DdRecyclingProblem {
    pub fn new(base_h: DdHFn, target_h: DdHFn, q0: Dd, slope0: Dd, v_max: f64) -> Result<Self> {
        let s = slope0.to_f64();
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!(
                "initial slope must be positive and finite, got {s}"
            )));
        }
        if !(v_max > 0.0) || !v_max.is_finite() {
            return Err(Error::Domain(format!(
                "solve extent must be positive and finite, got {v_max}"
            )));
        }
        if !q0.to_f64().is_finite() {
            return Err(Error::Domain("initial value must be finite".into()));
        }
        Ok(DdRecyclingProblem {
            base_h,
            target_h,
            q0,
            slope0,
            v_max,
        })
    }
}

/// Butcher tableau with every entry formed as an exact rational in
/// double-double, so tableau rounding never re-enters the solve.
struct DdTableau {
    c: [Dd; 7],
    b: [Dd; 7],
    a: [[Dd; 6]; 7],
    stages: usize,
}

fn dd_tableau(order: RkOrder) -> &'static DdTableau {
    use std::sync::OnceLock;
    static RK4: OnceLock<DdTableau> = OnceLock::new();
    static RK6: OnceLock<DdTableau> = OnceLock::new();
    let r = Dd::from_ratio;
    match order {
        RkOrder::Rk4 => RK4.get_or_init(|| {
            let mut t = DdTableau {
                c: [Dd::ZERO; 7],
                b: [Dd::ZERO; 7],
                a: [[Dd::ZERO; 6]; 7],
                stages: 4,
            };
            t.c[1] = r(1.0, 2.0);
            t.c[2] = r(1.0, 2.0);
            t.c[3] = Dd::ONE;
            t.a[1][0] = r(1.0, 2.0);
            t.a[2][1] = r(1.0, 2.0);
            t.a[3][2] = Dd::ONE;
            t.b[0] = r(1.0, 6.0);
            t.b[1] = r(1.0, 3.0);
            t.b[2] = r(1.0, 3.0);
            t.b[3] = r(1.0, 6.0);
            t
        }),
        RkOrder::Rk6 => RK6.get_or_init(|| {
            let mut t = DdTableau {
                c: [Dd::ZERO; 7],
                b: [Dd::ZERO; 7],
                a: [[Dd::ZERO; 6]; 7],
                stages: 7,
            };
            t.c = [
                Dd::ZERO,
                r(1.0, 3.0),
                r(2.0, 3.0),
                r(1.0, 3.0),
                r(1.0, 2.0),
                r(1.0, 2.0),
                Dd::ONE,
            ];
            t.b = [
                r(11.0, 120.0),
                Dd::ZERO,
                r(27.0, 40.0),
                r(27.0, 40.0),
                r(-4.0, 15.0),
                r(-4.0, 15.0),
                r(11.0, 120.0),
            ];
            t.a[1][0] = r(1.0, 3.0);
            t.a[2][1] = r(2.0, 3.0);
            t.a[3] = [r(1.0, 12.0), r(1.0, 3.0), r(-1.0, 12.0), Dd::ZERO, Dd::ZERO, Dd::ZERO];
            t.a[4] = [
                r(-1.0, 16.0),
                r(9.0, 8.0),
                r(-3.0, 16.0),
                r(-3.0, 8.0),
                Dd::ZERO,
                Dd::ZERO,
            ];
            t.a[5] = [Dd::ZERO, r(9.0, 8.0), r(-3.0, 8.0), r(-3.0, 4.0), r(1.0, 2.0), Dd::ZERO];
            t.a[6] = [
                r(9.0, 44.0),
                r(-9.0, 11.0),
                r(63.0, 44.0),
                r(18.0, 11.0),
                Dd::ZERO,
                r(-16.0, 11.0),
            ];
            t
        }),
    }
}

fn rk_step_dd<F: Fn(Dd, [Dd; 2]) -> [Dd; 2]>(
    f: &F,
    t: &DdTableau,
    s: Dd,
    y: [Dd; 2],
    h: Dd,
) -> [Dd; 2] {
    let mut k = [[Dd::ZERO; 2]; 7];
    for i in 0..t.stages {
        let mut yi = y;
        for (j, kj) in k.iter().enumerate().take(i) {
            let a = t.a[i][j];
            if a.hi != 0.0 || a.lo != 0.0 {
                let ha = h * a;
                yi[0] = yi[0] + ha * kj[0];
                yi[1] = yi[1] + ha * kj[1];
            }
        }
        k[i] = f(s + t.c[i] * h, yi);
    }
    let mut out = y;
    for (ki, bi) in k.iter().zip(t.b.iter()).take(t.stages) {
        if bi.hi != 0.0 || bi.lo != 0.0 {
            let hb = h * *bi;
            out[0] = out[0] + hb * ki[0];
            out[1] = out[1] + hb * ki[1];
        }
    }
    out
}

/// Double-double counterpart of [`solve_rode`]; same stepping scheme and
/// guards, origin-anchored right problems only. Nodes are rounded to f64
/// once, on output.
pub fn solve_rode_dd(p: &DdRecyclingProblem, step: f64, order: RkOrder) -> Result<QuantileMap> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let n_steps = (p.v_max / step).ceil() as usize;
    if n_steps > 20_000_000 {
        return Err(Error::Domain(format!(
            "step {step} over extent {} needs {n_steps} nodes",
            p.v_max
        )));
    }
    let tab = dd_tableau(order);
    let rhs = |s: Dd, y: [Dd; 2]| -> [Dd; 2] {
        let hb = (p.base_h)(s);
        let ht = (p.target_h)(y[0]);
        [y[1], ht * y[1] * y[1] - hb * y[1]]
    };
    let mut y = [p.q0, p.slope0];
    let mut s = Dd::ZERO;
    let s_end = Dd::from_f64(p.v_max);
    let mut vs = Vec::with_capacity(n_steps + 1);
    let mut qs = Vec::with_capacity(n_steps + 1);
    let mut ds = Vec::with_capacity(n_steps + 1);
    vs.push(0.0);
    qs.push(y[0].to_f64());
    ds.push(y[1].to_f64());
    for i in 1..=n_steps {
        let s_next = if i == n_steps {
            s_end
        } else {
            let target = Dd::from_f64(step) * i as f64;
            if target.to_f64() >= p.v_max {
                s_end
            } else {
                target
            }
        };
        let h = s_next - s;
        if !(h.to_f64() > 0.0) {
            continue;
        }
        y = rk_step_dd(&rhs, tab, s, y, h);
        s = s_next;
        let (q, qp) = (y[0].to_f64(), y[1].to_f64());
        if !q.is_finite() || !qp.is_finite() {
            return Err(Error::Overflow(format!("non-finite state near v = {}", s.to_f64())));
        }
        if qp <= 0.0 {
            return Err(Error::MonotonicityLoss(format!(
                "map slope {qp} at v = {}",
                s.to_f64()
            )));
        }
        if q.abs() > 1e12 {
            return Err(Error::Overflow(format!("map value {q} at v = {}", s.to_f64())));
        }
        vs.push(s.to_f64());
        qs.push(q);
        ds.push(qp);
    }
    QuantileMap::from_nodes(vs, qs, ds)
}

/// Gaussian base onto itself in double-double; health check for the
/// extended-precision path.
pub fn dd_gaussian_identity(v_max: f64) -> Result<DdRecyclingProblem> {
    DdRecyclingProblem::new(Box::new(|v| v), Box::new(|q| q), Dd::ZERO, Dd::ONE, v_max)
}

/// Pi to double-double accuracy; the low word is the familiar sin(pi)
/// residue of the rounded double.
const PI_DD: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473531772e-16,
};

/// Unit-rate exponential base to the upper half of the standard normal,
/// double-double throughout. The initial slope `sqrt(pi/2)` is formed from
/// double-double pi: by `v = 37` the solve amplifies an origin-slope
/// perturbation by ~1e15, so even the one-rounding f64 slope would destroy
/// the far end.
pub fn dd_exp_to_normal_problem(v_max: f64) -> Result<DdRecyclingProblem> {
    let slope = (PI_DD / Dd::from_f64(2.0)).sqrt();
    DdRecyclingProblem::new(
        Box::new(|_| Dd::ONE),
        Box::new(|q| q),
        Dd::ZERO,
        slope,
        v_max,
    )
}

/// Gaussian base to Student t with `n` degrees of freedom, double-double
/// throughout: `H(q) = (1 + 1/n) q / (1 + q^2/n)` evaluated in dd and the
/// initial density-ratio slope taken from the dd gamma computation without
/// an intermediate f64 rounding.
pub fn dd_gaussian_to_student(n: f64, v_max: f64) -> Result<DdRecyclingProblem> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("degrees of freedom must be positive, got {n}")));
    }
    let slope = half_ratio_scaled_dd(n);
    let inv_n = Dd::ONE / Dd::from_f64(n);
    let c1 = Dd::ONE + inv_n;
    DdRecyclingProblem::new(
        Box::new(|v| v),
        Box::new(move |q| c1 * q / (q * q * inv_n + 1.0)),
        Dd::ZERO,
        slope,
        v_max,
    )
}

/// A tabulated monotone map with one-sided derivatives at every node,
/// evaluated by cubic Hermite interpolation.
///
/// Derivatives are stored separately for the two sides of each node because
/// a merged left/right solve has a genuine slope jump at the junction
/// whenever the base density jumps there (the two-sided exponential does).
/// Interior nodes of a single solve carry the same value on both sides.
#[derive(Clone, Debug)]
pub struct QuantileMap {
    vs: Vec<f64>,
    qs: Vec<f64>,
    dl: Vec<f64>,
    dr: Vec<f64>,
}

impl QuantileMap {
    /// Builds a map from nodes with a continuous derivative. Abscissas and
    /// values must both be strictly increasing.
    pub fn from_nodes(vs: Vec<f64>, qs: Vec<f64>, ds: Vec<f64>) -> Result<Self> {
        if vs.len() < 2 || vs.len() != qs.len() || vs.len() != ds.len() {
            return Err(Error::Domain(format!(
                "map needs >= 2 equal-length node arrays, got {}/{}/{}",
                vs.len(),
                qs.len(),
                ds.len()
            )));
        }
        for i in 1..vs.len() {
            if !(vs[i] > vs[i - 1]) {
                return Err(Error::Domain(format!(
                    "abscissas not strictly increasing at index {i}"
                )));
            }
            if !(qs[i] > qs[i - 1]) {
                return Err(Error::MonotonicityLoss(format!(
                    "map values not strictly increasing at v = {}",
                    vs[i]
                )));
            }
        }
        let dl = ds.clone();
        let dr = ds;
        Ok(QuantileMap { vs, qs, dl, dr })
    }

    /// Joins a left-half and right-half solve sharing their junction node.
    /// The junction keeps the left solve's derivative on its left side and
    /// the right solve's on its right side.
    pub fn merge(left: QuantileMap, right: QuantileMap) -> Result<QuantileMap> {
        let lv = *left.vs.last().unwrap();
        let lq = *left.qs.last().unwrap();
        if (lv - right.vs[0]).abs() > 1e-12 || (lq - right.qs[0]).abs() > 1e-9 * lq.abs().max(1.0)
        {
            return Err(Error::Domain(format!(
                "maps do not share a junction: ({lv}, {lq}) vs ({}, {})",
                right.vs[0], right.qs[0]
            )));
        }
        if left.qs[left.qs.len() - 2] >= right.qs[1] {
            return Err(Error::MonotonicityLoss(
                "merged map not increasing across the junction".into(),
            ));
        }
        let mut vs = left.vs;
        let mut qs = left.qs;
        let mut dl = left.dl;
        let mut dr = left.dr;
        *dr.last_mut().unwrap() = right.dr[0];
        vs.extend_from_slice(&right.vs[1..]);
        qs.extend_from_slice(&right.qs[1..]);
        dl.extend_from_slice(&right.dl[1..]);
        dr.extend_from_slice(&right.dr[1..]);
        Ok(QuantileMap { vs, qs, dl, dr })
    }

    /// Reflects a right-half map into a full two-sided one by the odd
    /// symmetry `Q(-v) = -Q(v)`; valid only for symmetric targets, and the
    /// map must be anchored at `(0, 0)`. Slopes carry over with their node
    /// sides swapped, which keeps one-sided derivatives exact.
    pub fn mirror_odd(&self) -> Result<QuantileMap> {
        if self.vs[0] != 0.0 || self.qs[0] != 0.0 {
            return Err(Error::Domain(format!(
                "odd reflection needs a map anchored at (0, 0), got ({}, {})",
                self.vs[0], self.qs[0]
            )));
        }
        let n = self.vs.len();
        let mut vs = Vec::with_capacity(2 * n - 1);
        let mut qs = Vec::with_capacity(2 * n - 1);
        let mut dl = Vec::with_capacity(2 * n - 1);
        let mut dr = Vec::with_capacity(2 * n - 1);
        for i in (1..n).rev() {
            vs.push(-self.vs[i]);
            qs.push(-self.qs[i]);
            dl.push(self.dr[i]);
            dr.push(self.dl[i]);
        }
        vs.extend_from_slice(&self.vs);
        qs.extend_from_slice(&self.qs);
        dl.extend_from_slice(&self.dl);
        dr.extend_from_slice(&self.dr);
        Ok(QuantileMap { vs, qs, dl, dr })
    }

    pub fn v_range(&self) -> (f64, f64) {
        (self.vs[0], *self.vs.last().unwrap())
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.vs, &self.qs)
    }

    /// Cubic Hermite evaluation; defined only inside the tabulated range.
    pub fn eval(&self, v: f64) -> Result<f64> {
        let (lo, hi) = self.v_range();
        if !(v >= lo && v <= hi) {
            return Err(Error::OutOfRange(format!(
                "v = {v} outside tabulated [{lo}, {hi}]"
            )));
        }
        if v == hi {
            return Ok(*self.qs.last().unwrap());
        }
        // Index of the last node <= v; partition_point counts nodes <= v.
        let i = self.vs.partition_point(|&x| x <= v) - 1;
        let h = self.vs[i + 1] - self.vs[i];
        let t = (v - self.vs[i]) / h;
        let omt = 1.0 - t;
        let t2 = t * t;
        let h00 = (1.0 + 2.0 * t) * omt * omt;
        let h10 = t * omt * omt;
        let h01 = t2 * (3.0 - 2.0 * t);
        let h11 = t2 * (t - 1.0);
        Ok(h00 * self.qs[i]
            + h01 * self.qs[i + 1]
            + h * (h10 * self.dr[i] + h11 * self.dl[i + 1]))
    }
}

/// Gaussian base onto itself: the exact solution is the identity, which
/// makes this the standard integrator-health check.
pub fn gaussian_identity_problem(v_max: f64) -> Result<RecyclingProblem> {
    RecyclingProblem::new(
        Box::new(|v| v),
        Box::new(|q| q),
        0.0,
        0.0,
        1.0,
        Direction::Right,
        v_max,
    )
}

/// Gaussian base to Student t with `n` degrees of freedom, as a symmetric
/// left/right problem pair from the origin. The initial slope is the exact
/// ratio of the densities at zero.
pub fn gaussian_to_student_problems(
    n: f64,
    v_max: f64,
) -> Result<(RecyclingProblem, RecyclingProblem)> {
    let slope = student_gamma(n)?;
    let mk = |dir| {
        RecyclingProblem::new(
            Box::new(|v| v),
            Box::new(move |q| student_h(q, n)),
            0.0,
            0.0,
            slope,
            dir,
            v_max,
        )
    };
    Ok((mk(Direction::Left)?, mk(Direction::Right)?))
}

/// Unit-rate exponential base to the upper half of the standard normal.
/// The solution is `Q(v) = Phi^{-1}(1 - e^{-v}/2)`, the same map the
/// branchless kernels approximate; the initial slope `sqrt(pi/2)` is the
/// density ratio `(1/2) / phi(0)`.
pub fn exp_to_normal_problem(v_max: f64) -> Result<RecyclingProblem> {
    RecyclingProblem::new(
        Box::new(|_| 1.0),
        Box::new(|q| q),
        0.0,
        0.0,
        (std::f64::consts::PI / 2.0).sqrt(),
        Direction::Right,
        v_max,
    )
}

/// Problem pair converting a two-sided exponential base into a hyperbolic
/// target. The split supplies the base masses and rates; initial slopes
/// are the density ratios `f0(0+-) / f(0)`.
pub fn build_hyperbolic_problems(
    target: &Hyperbolic,
    split: &TwoSidedExponential,
    v_max: f64,
) -> Result<(RecyclingProblem, RecyclingProblem)> {
    let f0 = target.density(0.0);
    let slope_r = split.p_plus * split.rate_right / f0;
    let slope_l = split.p_minus * split.rate_left / f0;
    let params = target.params;
    let rr = split.rate_right;
    let rl = split.rate_left;
    let left = RecyclingProblem::new(
        Box::new(move |_| -rl),
        Box::new(move |q| hyperbolic_h(q, &params)),
        0.0,
        0.0,
        slope_l,
        Direction::Left,
        v_max,
    )?;
    let right = RecyclingProblem::new(
        Box::new(move |_| rr),
        Box::new(move |q| hyperbolic_h(q, &params)),
        0.0,
        0.0,
        slope_r,
        Direction::Right,
        v_max,
    )?;
    Ok((left, right))
}

/// Problem pair converting a two-sided exponential base into a variance
/// gamma target; needs `lambda >= 1` (below that the target's `h` diverges
/// at the origin and this construction does not apply).
///
/// At `lambda = 1` the target *is* a two-sided exponential, `h` is the
/// piecewise constant `+-alpha - beta`, and with the matching split the
/// built problems solve to the identity map. For `lambda > 1` the `h`
/// limit at the origin is `-beta` from both sides; the closures patch that
/// single point so the first integrator stage is well defined. Bessel
/// failures deep in a solve surface as non-finite state, aborting with an
/// overflow error.
pub fn build_vg_problems(
    target: &VarianceGamma,
    split: &TwoSidedExponential,
    v_max: f64,
) -> Result<(RecyclingProblem, RecyclingProblem)> {
    let p = target.params;
    if p.lambda < 1.0 {
        return Err(Error::Unsupported(format!(
            "recycling into variance gamma needs lambda >= 1, got {}",
            p.lambda
        )));
    }
    let f0 = target.density_at_zero();
    if !(f0 > 0.0) || !f0.is_finite() {
        return Err(Error::Domain(format!("density at zero is {f0}")));
    }
    let slope_r = split.p_plus * split.rate_right / f0;
    let slope_l = split.p_minus * split.rate_left / f0;
    let rr = split.rate_right;
    let rl = split.rate_left;
    let h0_right = if p.lambda == 1.0 { p.alpha - p.beta } else { -p.beta };
    let h0_left = if p.lambda == 1.0 { -(p.alpha + p.beta) } else { -p.beta };
    let tr = target.clone();
    let tl = target.clone();
    let left = RecyclingProblem::new(
        Box::new(move |_| -rl),
        Box::new(move |q| if q == 0.0 { h0_left } else { tl.h(q) }),
        0.0,
        0.0,
        slope_l,
        Direction::Left,
        v_max,
    )?;
    let right = RecyclingProblem::new(
        Box::new(move |_| rr),
        Box::new(move |q| if q == 0.0 { h0_right } else { tr.h(q) }),
        0.0,
        0.0,
        slope_r,
        Direction::Right,
        v_max,
    )?;
    Ok((left, right))
}

/// Solves a left/right pair and merges the halves into one map.
pub fn solve_pair(
    left: &RecyclingProblem,
    right: &RecyclingProblem,
    step: f64,
    order: RkOrder,
) -> Result<QuantileMap> {
    QuantileMap::merge(solve_rode(left, step, order)?, solve_rode(right, step, order)?)
}
