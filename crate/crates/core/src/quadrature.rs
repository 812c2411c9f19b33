//! Gauss–Legendre rules on [0,1] with verified node and weight enclosures.
//!
//! Nodes are located in floating point and then certified by an interval
//! Newton step on the Legendre polynomial, so each node interval provably
//! contains exactly one root. For a polynomial integrand of degree at most
//! `2n - 1`, summing interval weights times the integrand evaluated on the
//! node intervals therefore encloses the exact integral.

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<Interval>,
    weights: Vec<Interval>,
}

/// Returns `(P_n(x), P_n'(x))` evaluated in interval arithmetic.
fn legendre(n: usize, x: Interval) -> (Interval, Interval) {
    let mut p_prev = Interval::ONE;
    let mut p = x;
    let mut d_prev = Interval::ZERO;
    let mut d = Interval::ONE;
    if n == 0 {
        return (Interval::ONE, Interval::ZERO);
    }
    for k in 1..n {
        let kk = Interval::point(k as f64);
        let two_k1 = Interval::point((2 * k + 1) as f64);
        let p_next = (two_k1 * x * p - kk * p_prev) / Interval::point((k + 1) as f64);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        let d_next = d_prev + two_k1 * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn legendre_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("quadrature needs at least one node".into()));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_f64(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-17 {
                    break;
                }
            }
            let root = certify_root(n, x)?;
            let (_, dp) = legendre(n, root);
            let w = Interval::point(2.0) / ((Interval::ONE - root.sqr()) * dp.sqr());
            // map [-1,1] -> [0,1]
            nodes.push((root + Interval::ONE) * Interval::point(0.5));
            weights.push(w * Interval::point(0.5));
        }
        nodes.reverse();
        weights.reverse();
        Ok(GaussLegendre { nodes, weights })
    }

    /// Smallest rule that is exact for polynomials of the given degree.
    pub fn exact_for_degree(degree: usize) -> Self {
        GaussLegendre::new(degree / 2 + 1).expect("n >= 1")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Interval] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Interval] {
        &self.weights
    }

    /// Encloses `int_0^1 f` for polynomial `f` of degree `<= 2n - 1`.
    pub fn integrate(&self, f: impl Fn(Interval) -> Interval) -> Interval {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn certify_root(n: usize, approx: f64) -> Result<Interval> {
    let xt = Interval::point(approx);
    let mut r = 4.0 * f64::EPSILON;
    for _ in 0..12 {
        let x = Interval::raw(approx - r, approx + r);
        let (p_mid, _) = legendre(n, xt);
        let (_, dp) = legendre(n, x);
        if let Ok(q) = p_mid.checked_div(dp) {
            let newton = xt - q;
            if newton.lo() > x.lo() && newton.hi() < x.hi() {
                return Ok(refine(n, newton));
            }
        }
        r *= 8.0;
    }
    Err(Error::BoundFailure(format!(
        "could not certify Legendre root near {approx} for n={n}"
    )))
}

/// Further interval Newton steps on an interval already known to hold the
/// root; each result is intersected with the previous enclosure.
fn refine(n: usize, mut x: Interval) -> Interval {
    for _ in 0..3 {
        let xm = Interval::point(x.mid());
        let (p_mid, _) = legendre(n, xm);
        let (_, dp) = legendre(n, x);
        match p_mid.checked_div(dp) {
            Ok(q) => match (xm - q).intersect(&x) {
                Some(y) => x = y,
                None => break,
            },
            Err(_) => break,
        }
    }
    x
}
