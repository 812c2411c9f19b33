//! Closed real intervals with outward-rounded endpoint arithmetic.
//!
//! Rounding is directed per endpoint without touching the FPU rounding mode:
//! every correctly rounded `+ - * / sqrt` result is corrected with an exact
//! error-free transform (TwoSum, FMA residual), so an endpoint is moved one
//! ulp outward only when the nearest-rounded value actually lies on the wrong
//! side. Near the underflow threshold, where those transforms stop being
//! exact, the result is widened by one ulp unconditionally.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Below this magnitude FMA residuals may no longer be exact.
const TINY: f64 = 1.0e-290;

pub(crate) mod round {
    use super::TINY;

    #[inline]
    fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
        let bb = s - a;
        (a - (s - bb)) + (b - bb)
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            if a.is_finite() && b.is_finite() && s < 0.0 {
                return -f64::MAX;
            }
            return s;
        }
        if two_sum_err(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        -add_up(-a, -b)
    }

    #[inline]
    pub fn sub_up(a: f64, b: f64) -> f64 {
        add_up(a, -b)
    }

    #[inline]
    pub fn sub_down(a: f64, b: f64) -> f64 {
        add_down(a, -b)
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if p.is_infinite() {
            if a.is_infinite() || b.is_infinite() || p > 0.0 {
                return p;
            }
            return -f64::MAX;
        }
        if p.abs() < TINY {
            return p.next_up();
        }
        if a.mul_add(b, -p) > 0.0 {
            p.next_up()
        } else {
            p
        }
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        -mul_up(-a, b)
    }

    /// `b` must be nonzero.
    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let q = a / b;
        if b.is_infinite() || a.is_infinite() {
            return q;
        }
        if q.is_infinite() {
            return if q > 0.0 { q } else { -f64::MAX };
        }
        if q.abs() < TINY || a.abs() < TINY {
            return q.next_up();
        }
        // a - q*b is exact; the true quotient is q + r/b.
        let r = (-q).mul_add(b, a);
        if (r > 0.0) == (b > 0.0) && r != 0.0 {
            q.next_up()
        } else {
            q
        }
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        -div_up(-a, b)
    }

    /// `a` must be nonnegative.
    #[inline]
    pub fn sqrt_up(a: f64) -> f64 {
        let s = a.sqrt();
        if a == 0.0 || a.is_infinite() {
            return s;
        }
        if a < TINY {
            return s.next_up();
        }
        if (-s).mul_add(s, a) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn sqrt_down(a: f64) -> f64 {
        let s = a.sqrt();
        if a == 0.0 || a.is_infinite() {
            return s;
        }
        if a < TINY {
            return s.next_down().max(0.0);
        }
        if (-s).mul_add(s, a) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }
}

/// A nonempty closed interval `[lo, hi]` of extended reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Rejects NaN endpoints, `lo > hi` and the degenerate infinite points.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// Builds an interval from endpoints that are known to be ordered.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "raw interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval `[x, x]`. Panics on non-finite input.
    #[inline]
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval from non-finite {x}");
        Interval { lo: x, hi: x }
    }

    /// Encloses `p / q` with width of at most one ulp.
    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("ratio with zero denominator".into()));
        }
        Interval::from_i64(p).checked_div(Interval::from_i64(q))
    }

    pub fn from_i64(p: i64) -> Self {
        let f = p as f64;
        // i64 -> f64 rounds to nearest; compare back in i128 to find the side.
        let back = f as i128;
        let exact = p as i128;
        if back == exact {
            Interval::point(f)
        } else if back > exact {
            Interval::raw(f.next_down(), f)
        } else {
            Interval::raw(f, f.next_up())
        }
    }

    /// Enclosure of pi.
    pub fn pi() -> Self {
        // The nearest double to pi lies below it.
        Interval::raw(std::f64::consts::PI, std::f64::consts::PI.next_up())
    }

    /// Enclosure of ln 2.
    pub fn ln2() -> Self {
        // The nearest double to ln 2 lies below it.
        Interval::raw(std::f64::consts::LN_2, std::f64::consts::LN_2.next_up())
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// An upper bound of `hi - lo`.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY {
            if self.hi == f64::INFINITY {
                return 0.0;
            }
            return f64::MIN;
        }
        if self.hi == f64::INFINITY {
            return f64::MAX;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Smallest radius `r` such that `[mid - r, mid + r]` contains `self`.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        round::sub_up(self.hi, m).max(round::sub_up(m, self.lo))
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound of `|x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection, or `None` if disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    pub fn abs(&self) -> Interval {
        Interval::raw(self.mig(), self.mag())
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn sqr(&self) -> Interval {
        let lo2 = round::mul_down(self.mig(), self.mig());
        let hi2 = round::mul_up(self.mag(), self.mag());
        Interval::raw(lo2, hi2)
    }

    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => *self,
            2 => self.sqr(),
            _ if n % 2 == 0 => self.powi(n / 2).sqr(),
            _ => *self * self.powi(n - 1),
        }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::Domain(format!("division by {rhs}, which contains 0")));
        }
        let (a, b) = (self, rhs);
        let cands_lo = [
            round::div_down(a.lo, b.lo),
            round::div_down(a.lo, b.hi),
            round::div_down(a.hi, b.lo),
            round::div_down(a.hi, b.hi),
        ];
        let cands_hi = [
            round::div_up(a.lo, b.lo),
            round::div_up(a.lo, b.hi),
            round::div_up(a.hi, b.lo),
            round::div_up(a.hi, b.hi),
        ];
        Ok(Interval::raw(
            cands_lo.iter().copied().fold(f64::INFINITY, f64::min),
            cands_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ))
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("sqrt of {self}, which has negative members")));
        }
        Ok(Interval::raw(round::sqrt_down(self.lo), round::sqrt_up(self.hi)))
    }

    /// Square root of the nonnegative part; `[max(lo,0), hi]`.
    pub fn sqrt_nonneg(self) -> Interval {
        let clipped = Interval::raw(self.lo.max(0.0), self.hi.max(0.0));
        clipped.sqrt().expect("clipped to nonnegative")
    }

    pub fn exp(self) -> Interval {
        let lo = if self.lo == f64::NEG_INFINITY {
            0.0
        } else {
            exp_point(self.lo).lo
        };
        let hi = if self.hi == f64::INFINITY {
            f64::INFINITY
        } else {
            exp_point(self.hi).hi
        };
        Interval::raw(lo.max(0.0), hi)
    }

    /// `exp(x) - 1`, accurate for small arguments.
    pub fn expm1(self) -> Interval {
        let lo = if self.lo == f64::NEG_INFINITY {
            -1.0
        } else {
            expm1_point(self.lo).lo
        };
        let hi = if self.hi == f64::INFINITY {
            f64::INFINITY
        } else {
            expm1_point(self.hi).hi
        };
        Interval::raw(lo.max(-1.0), hi)
    }
}

/// Horner evaluation of `sum_{j=1..n} x^j / j!` plus a rigorous remainder.
/// Requires `|x| <= 0.5`.
fn expm1_series(x: Interval) -> Interval {
    const TERMS: u32 = 22;
    debug_assert!(x.mag() <= 0.5);
    let mut acc = Interval::ONE;
    for j in (2..=TERMS).rev() {
        let jj = Interval::point(j as f64);
        acc = Interval::ONE + (x * acc).checked_div(jj).expect("j > 0");
    }
    let series = x * acc;
    // |remainder| <= |x|^(n+1)/(n+1)! * e^|x| <= 2 |x|^(n+1)/(n+1)!
    let m = Interval::point(x.mag());
    let mut fact = Interval::ONE;
    for j in 2..=(TERMS + 1) {
        fact = fact * Interval::point(j as f64);
    }
    let rem = (m.powi(TERMS + 1) * Interval::point(2.0))
        .checked_div(fact)
        .expect("factorial is positive")
        .hi;
    series + Interval::raw(-rem, rem)
}

fn expm1_point(x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ZERO;
    }
    if x.abs() <= 0.35 {
        return expm1_series(Interval::point(x));
    }
    let e = exp_point(x);
    e - Interval::ONE
}

fn exp_point(x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ONE;
    }
    if x > 709.0 {
        return Interval::raw(exp_point(709.0).lo, f64::INFINITY);
    }
    if x < -708.0 {
        return Interval::raw(0.0, exp_point(-708.0).hi);
    }
    // x = k ln2 + r with |r| <= ln2/2 (+ rounding slack)
    let k = (x / std::f64::consts::LN_2).round();
    let r = Interval::point(x) - Interval::point(k) * Interval::ln2();
    let er = Interval::ONE + expm1_series(r);
    let k = k as i32;
    debug_assert!((-1021..=1023).contains(&k));
    let scale = f64::from_bits(((k + 1023) as u64) << 52);
    // multiplication by a power of two is exact in the normal range
    Interval::raw(er.lo * scale, er.hi * scale)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(round::add_down(self.lo, rhs.lo), round::add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(round::sub_down(self.lo, rhs.hi), round::sub_up(self.hi, rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval::raw(round::mul_down(a.lo, b.lo), round::mul_up(a.hi, b.hi));
        }
        let lo = round::mul_down(a.lo, b.lo)
            .min(round::mul_down(a.lo, b.hi))
            .min(round::mul_down(a.hi, b.lo))
            .min(round::mul_down(a.hi, b.hi));
        let hi = round::mul_up(a.lo, b.lo)
            .max(round::mul_up(a.lo, b.hi))
            .max(round::mul_up(a.hi, b.lo))
            .max(round::mul_up(a.hi, b.hi));
        Interval::raw(lo, hi)
    }
}

/// Division by an interval containing zero yields the entire real line,
/// which is still an enclosure. Use [`Interval::checked_div`] to get an error
/// instead.
impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).unwrap_or(Interval::ENTIRE)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            #[inline]
            fn $m(self, rhs: f64) -> Interval {
                $tr::$m(self, Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            #[inline]
            fn $m(self, rhs: Interval) -> Interval {
                $tr::$m(Interval::point(self), rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}
