//! Dyadic numbers `m 2^e` with `BITS`-bit mantissas and directed rounding,
//! and intervals over them.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use stverify::Interval;

pub const BITS: u64 = 320;

#[derive(Clone, Debug)]
pub struct D {
    m: BigInt,
    e: i64,
}

#[derive(Clone, Copy, PartialEq)]
pub enum Dir {
    Down,
    Up,
}

fn floor_shr(m: &BigInt, k: u64) -> BigInt {
    m.div_floor(&(BigInt::one() << k))
}

impl D {
    pub fn zero() -> Self {
        D { m: BigInt::zero(), e: 0 }
    }

    pub fn int(n: i64) -> Self {
        D { m: n.into(), e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return D::zero();
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant);
        D { m: if x < 0.0 { -m } else { m }, e }
    }

    pub fn ratio(p: i64, q: i64, dir: Dir) -> Self {
        D::int(p).div(&D::int(q), dir)
    }

    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }

    pub fn round(mut self, dir: Dir) -> Self {
        let b = self.m.bits();
        if b > BITS {
            let k = b - BITS;
            self.m = match dir {
                Dir::Down => floor_shr(&self.m, k),
                Dir::Up => -floor_shr(&-&self.m, k),
            };
            self.e += k as i64;
        }
        self
    }

    fn align(&self, o: &D) -> (BigInt, BigInt, i64) {
        let e = self.e.min(o.e);
        ((&self.m) << (self.e - e) as u64, (&o.m) << (o.e - e) as u64, e)
    }

    pub fn add(&self, o: &D, dir: Dir) -> D {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(o);
        D { m: a + b, e }.round(dir)
    }

    pub fn neg(&self) -> D {
        D {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn sub(&self, o: &D, dir: Dir) -> D {
        self.add(&o.neg(), dir)
    }

    pub fn mul(&self, o: &D, dir: Dir) -> D {
        D {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
        .round(dir)
    }

    pub fn div(&self, o: &D, dir: Dir) -> D {
        assert!(!o.is_zero());
        if self.is_zero() {
            return D::zero();
        }
        let k = (BITS + 2 + o.m.bits()).saturating_sub(self.m.bits());
        let num = (&self.m) << k;
        let q = match dir {
            Dir::Down => num.div_floor(&o.m),
            Dir::Up => -(-num).div_floor(&o.m),
        };
        D {
            m: q,
            e: self.e - o.e - k as i64,
        }
        .round(dir)
    }

    /// Scales by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> D {
        D {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    pub fn sqrt(&self, dir: Dir) -> D {
        assert!(!self.m.is_negative());
        if self.is_zero() {
            return D::zero();
        }
        let mut k = (2 * BITS + 2).saturating_sub(self.m.bits());
        if (self.e - k as i64).rem_euclid(2) != 0 {
            k += 1;
        }
        let big = (&self.m) << k;
        let mut s = big.sqrt();
        if dir == Dir::Up && &s * &s != big {
            s += 1;
        }
        D {
            m: s,
            e: (self.e - k as i64) / 2,
        }
        .round(dir)
    }

    pub fn abs(&self) -> D {
        D {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.m.bits() as i64;
        let shift = (b - 60).max(0);
        let top = floor_shr(&self.m, shift as u64);
        let t: f64 = top.to_string().parse().unwrap();
        t * 2f64.powi((self.e + shift) as i32)
    }
}

impl PartialEq for D {
    fn eq(&self, o: &D) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for D {}

impl PartialOrd for D {
    fn partial_cmp(&self, o: &D) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for D {
    fn cmp(&self, o: &D) -> Ordering {
        let (a, b, _) = self.align(o);
        a.cmp(&b)
    }
}

/// `exp(y)` for `|y| <= 1/2`.
fn exp_small(y: &D, dir: Dir) -> D {
    D::int(1).add(&expm1_small(y, dir), dir)
}

pub fn exp(x: &D, dir: Dir) -> D {
    if x.is_zero() {
        return D::int(1);
    }
    let half = D::int(1).ldexp(-1);
    let mut s = 0;
    while x.abs().ldexp(-s) > half {
        s += 1;
    }
    let mut v = exp_small(&x.ldexp(-s), dir);
    for _ in 0..s {
        v = v.mul(&v, dir);
    }
    v
}

/// `exp(x) - 1`, summed without the leading term near zero so the error
/// stays relative to `|x|`.
pub fn expm1(x: &D, dir: Dir) -> D {
    if x.abs() > D::int(1).ldexp(-1) {
        return exp(x, dir).sub(&D::int(1), dir);
    }
    expm1_small(x, dir)
}

fn expm1_small(x: &D, dir: Dir) -> D {
    const N: i64 = 64;
    if x.is_zero() {
        return D::zero();
    }
    let mut sum = D::zero();
    let mut term = D::int(1);
    for j in 1..=N {
        term = term.mul(x, Dir::Down).div(&D::int(j), Dir::Down);
        sum = sum.add(&term, Dir::Down);
    }
    // terms and partial sums are below 2 |x|, each with relative error
    // below 2^{2-BITS} per operation; the tail is below 2 |x|^{N+1} / (N+1)!
    let ax = x.abs();
    let slack = ax.mul(&D::int(8 * (N + 1)), Dir::Up).ldexp(-(BITS as i64));
    let mut rem = D::int(2);
    for j in 1..=(N + 1) {
        rem = rem.mul(&ax, Dir::Up).div(&D::int(j), Dir::Up);
    }
    let r = rem.add(&slack, Dir::Up);
    match dir {
        Dir::Down => sum.sub(&r, Dir::Down),
        Dir::Up => sum.add(&r, Dir::Up),
    }
}

/// Interval over dyadics.
#[derive(Clone, Debug)]
pub struct DI {
    pub lo: D,
    pub hi: D,
}

impl DI {
    pub fn point(x: D) -> Self {
        DI { lo: x.clone(), hi: x }
    }

    pub fn from_f64(x: f64) -> Self {
        DI::point(D::from_f64(x))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        DI {
            lo: D::ratio(p, q, Dir::Down),
            hi: D::ratio(p, q, Dir::Up),
        }
    }

    fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    pub fn add(&self, o: &DI) -> DI {
        DI {
            lo: self.lo.add(&o.lo, Dir::Down),
            hi: self.hi.add(&o.hi, Dir::Up),
        }
    }

    pub fn sub(&self, o: &DI) -> DI {
        DI {
            lo: self.lo.sub(&o.hi, Dir::Down),
            hi: self.hi.sub(&o.lo, Dir::Up),
        }
    }

    pub fn neg(&self) -> DI {
        DI {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    fn hull4(f: impl Fn(&D, &D, Dir) -> D, a: &DI, b: &DI) -> DI {
        let pairs = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)];
        let lo = pairs.iter().map(|(x, y)| f(x, y, Dir::Down)).min().unwrap();
        let hi = pairs.iter().map(|(x, y)| f(x, y, Dir::Up)).max().unwrap();
        DI { lo, hi }
    }

    pub fn mul(&self, o: &DI) -> DI {
        DI::hull4(|x, y, d| x.mul(y, d), self, o)
    }

    pub fn div(&self, o: &DI) -> Option<DI> {
        if o.contains_zero() {
            return None;
        }
        Some(DI::hull4(|x, y, d| x.div(y, d), self, o))
    }

    pub fn sqr(&self) -> DI {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, big) = if a < b { (a, b) } else { (b, a) };
        let small = if self.contains_zero() { D::zero() } else { small };
        DI {
            lo: small.mul(&small, Dir::Down),
            hi: big.mul(&big, Dir::Up),
        }
    }

    pub fn sqrt(&self) -> Option<DI> {
        if self.lo.sign() == Sign::Minus {
            return None;
        }
        Some(DI {
            lo: self.lo.sqrt(Dir::Down),
            hi: self.hi.sqrt(Dir::Up),
        })
    }

    pub fn exp(&self) -> DI {
        DI {
            lo: exp(&self.lo, Dir::Down),
            hi: exp(&self.hi, Dir::Up),
        }
    }

    pub fn expm1(&self) -> DI {
        DI {
            lo: expm1(&self.lo, Dir::Down),
            hi: expm1(&self.hi, Dir::Up),
        }
    }

    /// `f` encloses every value of `self`.
    pub fn inside(&self, f: &Interval) -> bool {
        (f.lo() == f64::NEG_INFINITY || D::from_f64(f.lo()) <= self.lo)
            && (f.hi() == f64::INFINITY || self.hi <= D::from_f64(f.hi()))
    }
}
