//! Double-double arithmetic: an unevaluated sum of two `f64`s giving about
//! 32 significant decimal digits.
//!
//! The Student central-series recurrence cancels heavily: run in plain
//! doubles it loses five to six digits by the tenth coefficient, which is
//! not enough to reproduce reference values to 1e-15. The handful of
//! operations here (error-free transformations composed into `+ - * /` and
//! `sqrt`) recover full double accuracy for those internal computations.
//! This is deliberately not a general multiprecision type: no NaN/infinity
//! handling, no directed rounding, panics nowhere, and only the operations
//! the crate actually uses.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s = fl(a+b)` and `a + b = s + e`
/// exactly. No magnitude precondition.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|` (or either is zero).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add: `a*b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = f64::mul_add(a, b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact quotient of two small integers would not fit one double in
    /// general; this forms `a/b` correct to double-double accuracy.
    #[inline]
    pub fn from_ratio(a: f64, b: f64) -> Self {
        Dd::from_f64(a) / Dd::from_f64(b)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Square root by one Newton correction on the double estimate; the
    /// result is accurate to within a few units in the last (second) place.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let y = self.hi.sqrt();
        let yd = Dd::from_f64(y);
        let r = (self - yd * yd).hi / (2.0 * y);
        yd + Dd::from_f64(r)
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Dd::ONE / self.powi(-n);
        }
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        // Long division: three double-precision quotient digits.
        let q1 = self.hi / rhs.hi;
        let mut r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e) + Dd::from_f64(q3)
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: f64) -> Dd {
        self * Dd::from_f64(rhs)
    }
}

impl std::ops::Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: f64) -> Dd {
        self + Dd::from_f64(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_free_transforms_are_exact() {
        let (s, e) = two_sum(1.0, 2f64.powi(-60));
        assert_eq!(s, 1.0);
        assert_eq!(e, 2f64.powi(-60));

        // 3 * (2^27 + 1) squared needs more than 53 bits.
        let a = 402653187.0f64;
        let (p, e) = two_prod(a, a);
        assert_eq!(p + e, a * a);
        assert_ne!(e, 0.0);
    }

    #[test]
    fn mul_catches_low_order_bits() {
        let one_plus = Dd::new(1.0, 2f64.powi(-60));
        let one_minus = Dd::new(1.0, -(2f64.powi(-60)));
        let prod = one_plus * one_minus;
        // (1+e)(1-e) = 1 - e^2 with e^2 = 2^-120 below dd resolution.
        assert_eq!(prod.hi, 1.0);
        assert!(prod.lo.abs() < 2f64.powi(-100));
    }

    #[test]
    fn div_inverts_mul() {
        let a = Dd::from_ratio(355.0, 113.0);
        let b = Dd::from_ratio(113.0, 355.0);
        let prod = a * b;
        assert!((prod - Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let s = Dd::from_f64(2.0).sqrt();
        assert!((s * s - Dd::from_f64(2.0)).to_f64().abs() < 1e-30);
        // Correctly rounded double part.
        assert_eq!(s.hi, std::f64::consts::SQRT_2);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = Dd::from_ratio(10.0, 7.0);
        let mut acc = Dd::ONE;
        for _ in 0..7 {
            acc = acc * x;
        }
        assert!((x.powi(7) - acc).to_f64().abs() < 1e-28);
        assert!((x.powi(-3) * x.powi(3) - Dd::ONE).to_f64().abs() < 1e-30);
    }
}
