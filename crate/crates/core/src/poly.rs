//! Polynomials with interval coefficients on the reference cell.
//!
//! A [`BiPoly`] is `sum c[p][q] xi^p eta^q` in local coordinates
//! `(xi, eta) in [0,1]^2`. Every coefficient interval contains the
//! coefficient of the exact polynomial being tracked, so all derived
//! quantities (values, integrals, range bounds) are enclosures.

use crate::interval::Interval;

/// Univariate polynomial `sum c[p] x^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1 {
    coeffs: Vec<Interval>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<Interval>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![Interval::ZERO] } else { coeffs };
        Poly1 { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Poly1::new(coeffs.iter().map(|&c| Interval::point(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn eval(&self, x: Interval) -> Interval {
        self.coeffs.iter().rev().fold(Interval::ZERO, |acc, &c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.mid())
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() == 1 {
            return Poly1::new(vec![Interval::ZERO]);
        }
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, &c)| c * Interval::point(p as f64))
                .collect(),
        )
    }

    /// `q(xi) = self(a + b xi)`.
    pub fn compose_affine(&self, a: Interval, b: Interval) -> Poly1 {
        // Horner in polynomial arithmetic: acc = acc * (a + b xi) + c
        let mut acc = vec![Interval::ZERO];
        for &c in self.coeffs.iter().rev() {
            let mut next = vec![Interval::ZERO; acc.len() + 1];
            for (p, &v) in acc.iter().enumerate() {
                next[p] = next[p] + v * a;
                next[p + 1] = next[p + 1] + v * b;
            }
            next[0] = next[0] + c;
            acc = next;
        }
        Poly1::new(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    dx: usize,
    dt: usize,
    c: Vec<Interval>,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut r = 1.0f64;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

impl BiPoly {
    pub fn zero(dx: usize, dt: usize) -> Self {
        BiPoly {
            dx,
            dt,
            c: vec![Interval::ZERO; (dx + 1) * (dt + 1)],
        }
    }

    pub fn constant(v: Interval) -> Self {
        BiPoly { dx: 0, dt: 0, c: vec![v] }
    }

    pub fn from_fn(dx: usize, dt: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut p = BiPoly::zero(dx, dt);
        for i in 0..=dx {
            for j in 0..=dt {
                p.c[i * (dt + 1) + j] = f(i, j);
            }
        }
        p
    }

    /// Outer product `a(xi) * b(eta)`.
    pub fn tensor(a: &Poly1, b: &Poly1) -> Self {
        BiPoly::from_fn(a.degree(), b.degree(), |i, j| a.coeffs()[i] * b.coeffs()[j])
    }

    pub fn degree_x(&self) -> usize {
        self.dx
    }

    pub fn degree_t(&self) -> usize {
        self.dt
    }

    #[inline]
    pub fn coeff(&self, p: usize, q: usize) -> Interval {
        if p > self.dx || q > self.dt {
            return Interval::ZERO;
        }
        self.c[p * (self.dt + 1) + q]
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.c
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let (dx, dt) = (self.dx.max(o.dx), self.dt.max(o.dt));
        BiPoly::from_fn(dx, dt, |p, q| self.coeff(p, q) + o.coeff(p, q))
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let (dx, dt) = (self.dx.max(o.dx), self.dt.max(o.dt));
        BiPoly::from_fn(dx, dt, |p, q| self.coeff(p, q) - o.coeff(p, q))
    }

    pub fn scale(&self, s: Interval) -> BiPoly {
        BiPoly {
            dx: self.dx,
            dt: self.dt,
            c: self.c.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add_constant(&self, s: Interval) -> BiPoly {
        let mut r = self.clone();
        r.c[0] = r.c[0] + s;
        r
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut r = BiPoly::zero(self.dx + o.dx, self.dt + o.dt);
        let rt = r.dt + 1;
        for p in 0..=self.dx {
            for q in 0..=self.dt {
                let a = self.coeff(p, q);
                if a == Interval::ZERO {
                    continue;
                }
                for s in 0..=o.dx {
                    for t in 0..=o.dt {
                        let k = (p + s) * rt + q + t;
                        r.c[k] = r.c[k] + a * o.coeff(s, t);
                    }
                }
            }
        }
        r
    }

    /// `d/dxi` in local coordinates.
    pub fn deriv_x(&self) -> BiPoly {
        if self.dx == 0 {
            return BiPoly::zero(0, self.dt);
        }
        BiPoly::from_fn(self.dx - 1, self.dt, |p, q| {
            self.coeff(p + 1, q) * Interval::point((p + 1) as f64)
        })
    }

    /// `d/deta` in local coordinates.
    pub fn deriv_t(&self) -> BiPoly {
        if self.dt == 0 {
            return BiPoly::zero(self.dx, 0);
        }
        BiPoly::from_fn(self.dx, self.dt - 1, |p, q| {
            self.coeff(p, q + 1) * Interval::point((q + 1) as f64)
        })
    }

    pub fn eval(&self, x: Interval, t: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for p in (0..=self.dx).rev() {
            let mut row = Interval::ZERO;
            for q in (0..=self.dt).rev() {
                row = row * t + self.coeff(p, q);
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Restriction to `eta = t` as a polynomial in `xi`.
    pub fn at_time(&self, t: Interval) -> Poly1 {
        Poly1::new(
            (0..=self.dx)
                .map(|p| (0..=self.dt).rev().fold(Interval::ZERO, |acc, q| acc * t + self.coeff(p, q)))
                .collect(),
        )
    }

    /// Exact `int_0^1 int_0^1` from the monomial moments.
    pub fn integrate_unit(&self) -> Interval {
        let mut s = Interval::ZERO;
        for p in 0..=self.dx {
            for q in 0..=self.dt {
                let w = Interval::ONE / Interval::point(((p + 1) * (q + 1)) as f64);
                s = s + self.coeff(p, q) * w;
            }
        }
        s
    }

    /// Bernstein coefficients on the unit square, `b[i][j]` row-major.
    pub fn bernstein(&self) -> Vec<Interval> {
        let (nx, nt) = (self.dx, self.dt);
        let mut tmp = vec![Interval::ZERO; (nx + 1) * (nt + 1)];
        // along xi: b_i = sum_{p<=i} C(i,p)/C(nx,p) a_p
        for q in 0..=nt {
            for i in 0..=nx {
                let mut s = Interval::ZERO;
                for p in 0..=i {
                    let w = Interval::point(binomial(i, p)) / Interval::point(binomial(nx, p));
                    s = s + w * self.coeff(p, q);
                }
                tmp[i * (nt + 1) + q] = s;
            }
        }
        let mut out = vec![Interval::ZERO; (nx + 1) * (nt + 1)];
        for i in 0..=nx {
            for j in 0..=nt {
                let mut s = Interval::ZERO;
                for q in 0..=j {
                    let w = Interval::point(binomial(j, q)) / Interval::point(binomial(nt, q));
                    s = s + w * tmp[i * (nt + 1) + q];
                }
                out[i * (nt + 1) + j] = s;
            }
        }
        out
    }

    /// Enclosure of the range over the unit square, from the hull of the
    /// Bernstein coefficients. If the resulting sup-norm bound exceeds the
    /// sampled maximum of `|p|` by more than 10%, the square is split once
    /// into four quarters and the quarter bounds are merged.
    pub fn range_enclosure(&self) -> Interval {
        let b = self.bernstein();
        let whole = hull_all(&b);
        let sampled = self.sampled_abs_max(8);
        if whole.mag() <= 1.1 * sampled || whole.mag() == 0.0 {
            return whole;
        }
        let nt = self.dt;
        let mut merged: Option<Interval> = None;
        for left in [true, false] {
            let bx = split_rows(&b, self.dx, nt, left);
            for lower in [true, false] {
                let bq = split_cols(&bx, self.dx, nt, lower);
                let h = hull_all(&bq);
                merged = Some(merged.map_or(h, |m| m.hull(&h)));
            }
        }
        let merged = merged.expect("four quarters");
        merged.intersect(&whole).unwrap_or(merged)
    }

    fn sampled_abs_max(&self, n: usize) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let x = Interval::point(i as f64 / n as f64);
                let t = Interval::point(j as f64 / n as f64);
                m = m.max(self.eval(x, t).mid().abs());
            }
        }
        m
    }
}

fn hull_all(v: &[Interval]) -> Interval {
    v.iter().skip(1).fold(v[0], |a, b| a.hull(b))
}

/// de Casteljau subdivision at 1/2 of a Bernstein coefficient sequence.
fn casteljau_half(b: &[Interval], left: bool) -> Vec<Interval> {
    let n = b.len();
    let mut work = b.to_vec();
    let mut first = vec![work[0]];
    let mut last = vec![work[n - 1]];
    let half = Interval::point(0.5);
    for r in 1..n {
        for i in 0..(n - r) {
            work[i] = (work[i] + work[i + 1]) * half;
        }
        first.push(work[0]);
        last.push(work[n - 1 - r]);
    }
    if left {
        first
    } else {
        last.reverse();
        last
    }
}

fn split_rows(b: &[Interval], nx: usize, nt: usize, left: bool) -> Vec<Interval> {
    let mut out = vec![Interval::ZERO; b.len()];
    for j in 0..=nt {
        let col: Vec<Interval> = (0..=nx).map(|i| b[i * (nt + 1) + j]).collect();
        for (i, v) in casteljau_half(&col, left).into_iter().enumerate() {
            out[i * (nt + 1) + j] = v;
        }
    }
    out
}

fn split_cols(b: &[Interval], nx: usize, nt: usize, lower: bool) -> Vec<Interval> {
    let mut out = vec![Interval::ZERO; b.len()];
    for i in 0..=nx {
        let row = &b[i * (nt + 1)..(i + 1) * (nt + 1)];
        for (j, v) in casteljau_half(row, lower).into_iter().enumerate() {
            out[i * (nt + 1) + j] = v;
        }
    }
    out
}
