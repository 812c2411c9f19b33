//! Problem definition: `u_t - nu u_xx = g(u)` on `(0,1) x (0, l T)`,
//! `u = 0` on the boundary, `u(0) = u0`.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::{BiPoly, Poly1};

/// `g(u) = sum coeffs[p] u^p` with degree at most three.
#[derive(Clone, Debug, PartialEq)]
pub struct Nonlinearity {
    coeffs: [Interval; 4],
}

impl Nonlinearity {
    pub fn new(coeffs: &[Interval]) -> Result<Self> {
        let mut c = [Interval::ZERO; 4];
        for (p, &v) in coeffs.iter().enumerate() {
            if p > 3 {
                if v != Interval::ZERO {
                    return Err(Error::config("g", "unsupported nonlinearity degree"));
                }
                continue;
            }
            c[p] = v;
        }
        Ok(Nonlinearity { coeffs: c })
    }

    /// Fujita type `g(u) = u^2`.
    pub fn fujita() -> Self {
        Nonlinearity::new(&[Interval::ZERO, Interval::ZERO, Interval::ONE]).expect("degree 2")
    }

    /// Allen-Cahn type `g(u) = u (1 - u)(u - a) = -a u + (1+a) u^2 - u^3`.
    pub fn allen_cahn(a: Interval) -> Self {
        Nonlinearity::new(&[Interval::ZERO, -a, Interval::ONE + a, -Interval::ONE]).expect("degree 3")
    }

    pub fn coeffs(&self) -> &[Interval; 4] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        (0..4).rev().find(|&p| self.coeffs[p] != Interval::ZERO).unwrap_or(0)
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c.mid())
    }

    pub fn deriv_f64(&self, u: f64) -> f64 {
        let c: Vec<f64> = self.coeffs.iter().map(Interval::mid).collect();
        c[1] + u * (2.0 * c[2] + u * 3.0 * c[3])
    }

    /// `g(p)` as a polynomial.
    pub fn compose(&self, p: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::constant(self.coeffs[3]);
        for k in (0..3).rev() {
            acc = acc.mul(p).add_constant(self.coeffs[k]);
        }
        acc
    }

    /// `c = -g'(p)`.
    pub fn linear_coefficient(&self, p: &BiPoly) -> BiPoly {
        let [_, g1, g2, g3] = self.coeffs;
        let two = Interval::point(2.0);
        let three = Interval::point(3.0);
        let quad = p.scale(g3 * three).add_constant(g2 * two);
        quad.mul(p).add_constant(g1).scale(-Interval::ONE)
    }

    /// `d = g2 + 3 g3 p`, the coefficient of the quadratic remainder.
    pub fn quadratic_coefficient(&self, p: &BiPoly) -> BiPoly {
        let [_, _, g2, g3] = self.coeffs;
        p.scale(g3 * Interval::point(3.0)).add_constant(g2)
    }
}

/// Everything that defines one verification run apart from output options.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub nu: Interval,
    pub g: Nonlinearity,
    pub u0: Poly1,
    /// Spatial element count (verification and reference mesh).
    pub space_elements: usize,
    /// Temporal elements per step.
    pub time_elements: usize,
    /// Length `T_i` of every step.
    pub step_length: Interval,
    pub steps: usize,
    /// Reference-space spatial degree, 3 or 5.
    pub px: usize,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        match self.validate_all().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Every violated constraint, in field order.
    pub fn validate_all(&self) -> Vec<Error> {
        let mut errs = Vec::new();
        if !(self.nu.lo() > 0.0) || !self.nu.hi().is_finite() {
            errs.push(Error::config("nu", "must be positive and finite"));
        }
        if !(self.step_length.lo() > 0.0) || !self.step_length.hi().is_finite() {
            errs.push(Error::config("T", "must be positive and finite"));
        }
        if self.steps < 1 {
            errs.push(Error::config("steps", "need at least 1 step"));
        }
        let ends = [self.u0.eval(Interval::ZERO), self.u0.eval(Interval::ONE)];
        if ends.iter().any(|v| v.mag() > 1e-12) {
            errs.push(Error::config("u0", "must vanish at x = 0 and x = 1"));
        }
        if self.space_elements < 2 {
            errs.push(Error::config("mesh.space_elements", "need at least 2 elements"));
        }
        if self.time_elements < 1 {
            errs.push(Error::config("mesh.time_elements", "need at least 1 element"));
        }
        if self.px != 3 && self.px != 5 {
            errs.push(Error::config("reference.px", "must be 3 or 5"));
        }
        errs
    }
}
