//! Distribution definitions and the log-density slope fields that drive the
//! change-of-variables ODE.
//!
//! Every distribution here exposes `h(x) = -d/dx log density(x)`. The ODE
//! solver only ever sees `h` for the base and target measures, so the
//! structures in this module are deliberately small: parameters, a
//! normalization constant computed once, and the closed-form `h`.
//!
//! The two-sided exponential is special: it is the natural base measure for
//! asymmetric targets (hyperbolic, variance gamma), and its mass split
//! `(p_minus, p_plus)` must match the target's mass split across zero for
//! the quantile map to be differentiable there. `hyperbolic_split` and
//! `vg_split` compute those splits, by quadrature and in closed form
//! respectively.

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::special::{bessel_k, bessel_k_scaled, gamma_ratio_half, hyp2f1, lgamma, Accuracy};
use crate::special::SQRT_PI;

/// Where a distribution lives; drives solver direction choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    RealLine,
    PositiveHalfLine,
}

/// A univariate distribution as seen by the quantile-transport machinery.
///
/// `h` is the negated log-density slope; `cdf` and `quantile` are optional
/// and only provided where a closed form exists (they are used to seed and
/// cross-check solves, never required by the ODE itself).
pub trait Distribution {
    fn support(&self) -> Support;
    fn density(&self, x: f64) -> f64;
    fn h(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> Option<f64> {
        let _ = x;
        None
    }
    fn quantile(&self, u: f64) -> Option<f64> {
        let _ = u;
        None
    }
}

/// `h` for the standard normal: the identity.
pub fn normal_h(v: f64) -> f64 {
    v
}

/// `h` for the unit exponential on the positive half-line: constant one.
pub fn exponential_h(_v: f64) -> f64 {
    1.0
}

/// `h` for Student t with `n` degrees of freedom.
///
/// `(1 + 1/n) q / (1 + q^2/n)`; the large-`q` branch avoids overflow in
/// `q^2` and is the exact limit `(n+1)/q`.
pub fn student_h(q: f64, n: f64) -> f64 {
    if q.abs() > 1e150 {
        (n + 1.0) / q
    } else {
        (1.0 + 1.0 / n) * q / (1.0 + q * q / n)
    }
}

/// `h` for the hyperbolic distribution.
pub fn hyperbolic_h(x: f64, p: &HyperbolicParams) -> f64 {
    p.alpha * x / (p.delta * p.delta + x * x).sqrt() - p.beta
}

/// `h` for the variance gamma distribution, `x != 0`.
///
/// `sign(x) * alpha * K_{lambda-3/2}(alpha|x|) / K_{lambda-1/2}(alpha|x|) - beta`.
/// At `lambda = 1` the Bessel ratio is exactly one. The ratio is formed from
/// exponentially scaled Bessel values so it stays finite for large `|x|`
/// where the unscaled values underflow. `x = 0` is rejected: the field
/// diverges there for `lambda < 1` and is discontinuous for every `lambda`,
/// so callers must treat the origin as a junction, not a sample point.
pub fn vg_h(x: f64, p: &VgParams, acc: &Accuracy) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain(
            "vg_h is undefined at x = 0 (junction point)".into(),
        ));
    }
    if p.lambda == 1.0 {
        return Ok(x.signum() * p.alpha - p.beta);
    }
    let z = p.alpha * x.abs();
    let ratio = bessel_k_scaled(p.lambda - 1.5, z, acc)? / bessel_k_scaled(p.lambda - 0.5, z, acc)?;
    Ok(x.signum() * p.alpha * ratio - p.beta)
}

/// Standard normal distribution.
#[derive(Clone, Copy, Debug, Default)]
pub struct StdNormal;

impl Distribution for StdNormal {
    fn support(&self) -> Support {
        Support::RealLine
    }
    fn density(&self, x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }
    fn h(&self, x: f64) -> f64 {
        normal_h(x)
    }
    fn cdf(&self, x: f64) -> Option<f64> {
        Some(0.5 * crate::special::erfc(-x / std::f64::consts::SQRT_2))
    }
}

/// Unit-rate exponential on the positive half-line.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitExponential;

impl Distribution for UnitExponential {
    fn support(&self) -> Support {
        Support::PositiveHalfLine
    }
    fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            (-x).exp()
        }
    }
    fn h(&self, x: f64) -> f64 {
        exponential_h(x)
    }
    fn cdf(&self, x: f64) -> Option<f64> {
        Some(if x < 0.0 { 0.0 } else { -(-x).exp_m1() })
    }
    fn quantile(&self, u: f64) -> Option<f64> {
        if u <= 0.0 || u >= 1.0 {
            None
        } else {
            Some(-(-u).ln_1p())
        }
    }
}

/// Student t with real `n > 0` degrees of freedom.
#[derive(Clone, Copy, Debug)]
pub struct StudentT {
    pub n: f64,
    /// `1 / (sqrt(n pi) * Gamma(n/2) / Gamma((n+1)/2))`.
    norm: f64,
}

impl StudentT {
    pub fn new(n: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain(format!("Student t needs n > 0, got {n}")));
        }
        let norm = 1.0 / ((n * std::f64::consts::PI).sqrt() * gamma_ratio_half(n)?);
        Ok(StudentT { n, norm })
    }
}

impl Distribution for StudentT {
    fn support(&self) -> Support {
        Support::RealLine
    }
    fn density(&self, x: f64) -> f64 {
        // (1 + x^2/n)^{-(n+1)/2}, via ln_1p for accuracy at small x^2/n
        // and overflow safety at large x.
        let l = (x * x / self.n).ln_1p();
        self.norm * (-0.5 * (self.n + 1.0) * l).exp()
    }
    fn h(&self, x: f64) -> f64 {
        student_h(x, self.n)
    }
}

/// Two-sided exponential with unequal rates and unequal mass on each side.
///
/// Density `p_plus * rate_right * exp(-rate_right * x)` for `x > 0` and
/// `p_minus * rate_left * exp(rate_left * x)` for `x < 0`. This is the base
/// measure whose quantile function is cheap enough to recycle samples
/// through: one log per draw.
#[derive(Clone, Copy, Debug)]
pub struct TwoSidedExponential {
    pub p_minus: f64,
    pub p_plus: f64,
    pub rate_left: f64,
    pub rate_right: f64,
}

impl TwoSidedExponential {
    /// Masses must be a probability split (sum within 1e-12 of one) and
    /// rates strictly positive.
    pub fn new(p_minus: f64, p_plus: f64, rate_left: f64, rate_right: f64) -> Result<Self> {
        if !(p_minus > 0.0 && p_plus > 0.0) || (p_minus + p_plus - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "mass split ({p_minus}, {p_plus}) does not sum to one"
            )));
        }
        if !(rate_left > 0.0 && rate_right > 0.0) {
            return Err(Error::Domain(format!(
                "rates ({rate_left}, {rate_right}) must be positive"
            )));
        }
        Ok(TwoSidedExponential {
            p_minus,
            p_plus,
            rate_left,
            rate_right,
        })
    }

    /// Closed-form quantile. `u = p_minus` maps exactly to zero.
    pub fn quantile_checked(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile needs u in (0,1), got {u}")));
        }
        Ok(if u < self.p_minus {
            (u / self.p_minus).ln() / self.rate_left
        } else if u > self.p_minus {
            -((1.0 - u) / self.p_plus).ln() / self.rate_right
        } else {
            0.0
        })
    }
}

impl Distribution for TwoSidedExponential {
    fn support(&self) -> Support {
        Support::RealLine
    }
    fn density(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.p_plus * self.rate_right * (-self.rate_right * x).exp()
        } else {
            self.p_minus * self.rate_left * (self.rate_left * x).exp()
        }
    }
    /// Piecewise constant; the value at the `x = 0` junction is taken from
    /// the right (the jump itself is handled by side-aware solve builders).
    fn h(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.rate_right
        } else {
            -self.rate_left
        }
    }
    fn cdf(&self, x: f64) -> Option<f64> {
        Some(if x < 0.0 {
            self.p_minus * (self.rate_left * x).exp()
        } else {
            1.0 - self.p_plus * (-self.rate_right * x).exp()
        })
    }
    fn quantile(&self, u: f64) -> Option<f64> {
        self.quantile_checked(u).ok()
    }
}

/// Parameters of the hyperbolic distribution: steepness `alpha`, asymmetry
/// `beta`, scale `delta`, with `|beta| < alpha` and `delta > 0`.
#[derive(Clone, Copy, Debug)]
pub struct HyperbolicParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl HyperbolicParams {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && delta > 0.0 && beta.abs() < alpha) {
            return Err(Error::Domain(format!(
                "hyperbolic needs alpha > 0, delta > 0, |beta| < alpha; got ({alpha}, {beta}, {delta})"
            )));
        }
        Ok(HyperbolicParams { alpha, beta, delta })
    }

    /// `sqrt(alpha^2 - beta^2)`.
    pub fn gamma(&self) -> f64 {
        (self.alpha * self.alpha - self.beta * self.beta).sqrt()
    }
}

/// Hyperbolic distribution: log-density is a hyperbola,
/// `-alpha sqrt(delta^2 + x^2) + beta x + const`.
#[derive(Clone, Copy, Debug)]
pub struct Hyperbolic {
    pub params: HyperbolicParams,
    /// `gamma / (2 alpha delta K_1(delta gamma))`.
    norm: f64,
}

impl Hyperbolic {
    pub fn new(params: HyperbolicParams, acc: &Accuracy) -> Result<Self> {
        let g = params.gamma();
        let k1 = bessel_k(1.0, params.delta * g, acc)?;
        Ok(Hyperbolic {
            params,
            norm: g / (2.0 * params.alpha * params.delta * k1),
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

impl Distribution for Hyperbolic {
    fn support(&self) -> Support {
        Support::RealLine
    }
    fn density(&self, x: f64) -> f64 {
        let p = &self.params;
        self.norm * (-p.alpha * (p.delta * p.delta + x * x).sqrt() + p.beta * x).exp()
    }
    fn h(&self, x: f64) -> f64 {
        hyperbolic_h(x, &self.params)
    }
}

/// Parameters of the variance gamma distribution: shape `lambda > 0`,
/// steepness `alpha`, asymmetry `beta` with `|beta| < alpha`.
#[derive(Clone, Copy, Debug)]
pub struct VgParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl VgParams {
    pub fn new(lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(lambda > 0.0 && alpha > 0.0 && beta.abs() < alpha) {
            return Err(Error::Domain(format!(
                "variance gamma needs lambda > 0, alpha > 0, |beta| < alpha; got ({lambda}, {alpha}, {beta})"
            )));
        }
        Ok(VgParams { lambda, alpha, beta })
    }
}

/// Variance gamma distribution with density
/// `c e^{beta x} |x|^{lambda - 1/2} K_{lambda - 1/2}(alpha |x|)`.
#[derive(Clone, Debug)]
pub struct VarianceGamma {
    pub params: VgParams,
    /// `(alpha^2 - beta^2)^lambda / ((2 alpha)^{lambda - 1/2} sqrt(pi) Gamma(lambda))`.
    norm: f64,
    acc: Accuracy,
}

impl VarianceGamma {
    pub fn new(params: VgParams, acc: &Accuracy) -> Result<Self> {
        let g2 = params.alpha * params.alpha - params.beta * params.beta;
        let norm = g2.powf(params.lambda)
            / ((2.0 * params.alpha).powf(params.lambda - 0.5) * SQRT_PI)
            / lgamma(params.lambda)?.exp();
        Ok(VarianceGamma {
            params,
            norm,
            acc: *acc,
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Density at the origin: the finite limit
    /// `c 2^{lambda - 3/2} Gamma(lambda - 1/2) / alpha^{lambda - 1/2}` for
    /// `lambda > 1/2`, infinite at and below `lambda = 1/2`.
    pub fn density_at_zero(&self) -> f64 {
        let l = self.params.lambda;
        if l <= 0.5 {
            return f64::INFINITY;
        }
        let lg = match lgamma(l - 0.5) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        self.norm * (std::f64::consts::LN_2 * (l - 1.5) + lg
            - (l - 0.5) * self.params.alpha.ln())
        .exp()
    }
}

impl Distribution for VarianceGamma {
    fn support(&self) -> Support {
        Support::RealLine
    }
    fn density(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.density_at_zero();
        }
        let p = &self.params;
        let ax = x.abs();
        match bessel_k(p.lambda - 0.5, p.alpha * ax, &self.acc) {
            // K underflows for alpha|x| beyond ~740; the true density is
            // below the smallest positive double there.
            Ok(k) => self.norm * (p.beta * x).exp() * ax.powf(p.lambda - 0.5) * k,
            Err(_) => f64::NAN,
        }
    }
    fn h(&self, x: f64) -> f64 {
        vg_h(x, &self.params, &self.acc).unwrap_or(f64::NAN)
    }
}

/// Computes the mass split of a hyperbolic distribution across zero and
/// packages it, with the matching exponential rates `alpha -+ beta`, as the
/// base measure for a recycling solve.
///
/// The two half-line integrals are done by adaptive quadrature; the domain
/// is truncated where the integrand is provably below `e^{-50}` times its
/// peak, and the constructor's mass-sum check cross-validates the result
/// against the closed-form normalization constant.
pub fn hyperbolic_split(h: &Hyperbolic, acc: &Accuracy) -> Result<TwoSidedExponential> {
    let p = h.params;
    let tol = 0.1 * acc.rel_tol;
    // For x > 0: density <= norm * exp(-(alpha - beta) x); for x < 0 the
    // mirror bound holds with alpha + beta.
    let t_right = 50.0 / (p.alpha - p.beta);
    let t_left = 50.0 / (p.alpha + p.beta);
    let p_plus = integrate(&|x| h.density(x), 0.0, t_right, tol)?;
    let p_minus = integrate(&|x| h.density(x), -t_left, 0.0, tol)?;
    TwoSidedExponential::new(p_minus, p_plus, p.alpha + p.beta, p.alpha - p.beta)
}

/// Closed-form mass split of a variance gamma distribution across zero.
///
/// `p_plus = 2^{2 lambda - 1} ((alpha+beta)/(alpha-beta))^lambda
///   Gamma(lambda + 1/2) F(2 lambda, lambda; lambda + 1; (alpha+beta)/(beta-alpha))
///   / (sqrt(pi) Gamma(lambda + 1))`
/// and `p_minus` is the same with `beta` negated. Requires `lambda >= 1`;
/// below that the distribution's `h` diverges at the origin and the
/// recycling construction does not apply.
pub fn vg_split(p: &VgParams, acc: &Accuracy) -> Result<TwoSidedExponential> {
    if p.lambda < 1.0 {
        return Err(Error::Unsupported(format!(
            "mass split needs lambda >= 1, got {}",
            p.lambda
        )));
    }
    let side = |b: f64| -> Result<f64> {
        let z = (p.alpha + b) / (b - p.alpha);
        let f = hyp2f1(2.0 * p.lambda, p.lambda, p.lambda + 1.0, z, acc)?;
        // Gamma(lambda + 1/2) / Gamma(lambda + 1) = Gamma(m/2)/Gamma((m+1)/2)
        // at m = 2 lambda + 1.
        let ratio = gamma_ratio_half(2.0 * p.lambda + 1.0)?;
        Ok((2.0f64).powf(2.0 * p.lambda - 1.0)
            * ((p.alpha + b) / (p.alpha - b)).powf(p.lambda)
            * ratio
            * f
            / SQRT_PI)
    };
    TwoSidedExponential::new(side(-p.beta)?, side(p.beta)?, p.alpha + p.beta, p.alpha - p.beta)
}
