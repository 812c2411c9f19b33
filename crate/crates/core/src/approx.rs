//! Approximate solution in the richer space: piecewise Hermite in space,
//! continuous piecewise quadratic in time.
//!
//! The solve itself is plain floating point (Galerkin in space, 2-stage
//! Gauss collocation in time, Newton per temporal element). Its output is a
//! set of float degrees of freedom that *define* the approximate solution
//! exactly; every later quantity (residual, coefficient bounds, initial
//! mismatch) is an interval enclosure computed from those DOFs.

use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::assembly::CoefficientField;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::{BiPoly, Poly1};
use crate::problem::{Nonlinearity, ProblemSpec};
use crate::quadrature::GaussLegendre;

const CUBIC: [[f64; 6]; 4] = [
    [1.0, 0.0, -3.0, 2.0, 0.0, 0.0],
    [0.0, 1.0, -2.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 3.0, -2.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 1.0, 0.0, 0.0],
];

const QUINTIC: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
];

/// Quadratic Lagrange basis in `eta` at `0, 1/2, 1`.
const LAGRANGE: [[f64; 3]; 3] = [[1.0, -3.0, 2.0], [0.0, 4.0, -4.0], [0.0, -1.0, 2.0]];

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn deriv_coeffs(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(p, &v)| v * p as f64).collect()
}

/// Hermite finite element space on a uniform mesh of `(0,1)` with zero
/// boundary values. DOFs at each node are `h^d u^{(d)}` for
/// `d < px / 2 + 1`; boundary value DOFs are removed.
#[derive(Clone, Debug)]
pub struct HermiteSpace {
    elems: usize,
    px: usize,
    per_node: usize,
    h: f64,
    h_iv: Interval,
    /// Global index of (node, order), `None` for eliminated DOFs.
    index: Vec<Vec<Option<usize>>>,
    ndof: usize,
}

impl HermiteSpace {
    pub fn new(elems: usize, px: usize) -> Result<Self> {
        if px != 3 && px != 5 {
            return Err(Error::Domain(format!("Hermite degree {px} not supported")));
        }
        if elems == 0 {
            return Err(Error::EmptySpace("no spatial elements".into()));
        }
        let per_node = px / 2 + 1;
        let mut index = Vec::with_capacity(elems + 1);
        let mut next = 0;
        for v in 0..=elems {
            let mut row = Vec::with_capacity(per_node);
            for d in 0..per_node {
                if d == 0 && (v == 0 || v == elems) {
                    row.push(None);
                } else {
                    row.push(Some(next));
                    next += 1;
                }
            }
            index.push(row);
        }
        Ok(HermiteSpace {
            elems,
            px,
            per_node,
            h: 1.0 / elems as f64,
            h_iv: Interval::from_ratio(1, elems as i64)?,
            index,
            ndof: next,
        })
    }

    pub fn ndof(&self) -> usize {
        self.ndof
    }

    pub fn elements(&self) -> usize {
        self.elems
    }

    pub fn degree(&self) -> usize {
        self.px
    }

    fn shapes(&self) -> Vec<&'static [f64]> {
        if self.px == 3 {
            CUBIC.iter().map(|r| &r[..4]).collect()
        } else {
            QUINTIC.iter().map(|r| &r[..]).collect()
        }
    }

    /// Global DOF index of each local shape function on element `e`.
    fn local_dofs(&self, e: usize) -> Vec<Option<usize>> {
        let mut out = Vec::with_capacity(2 * self.per_node);
        for v in [e, e + 1] {
            out.extend_from_slice(&self.index[v]);
        }
        out
    }

    /// Hermite interpolant of a polynomial.
    pub fn interpolate(&self, u0: &Poly1) -> Vec<f64> {
        let mut out = vec![0.0; self.ndof];
        let mut derivs = vec![u0.clone()];
        for _ in 1..self.per_node {
            let d = derivs.last().expect("nonempty").derivative();
            derivs.push(d);
        }
        for v in 0..=self.elems {
            let x = Interval::from_ratio(v as i64, self.elems as i64).expect("nonzero");
            for d in 0..self.per_node {
                if let Some(i) = self.index[v][d] {
                    let scale = self.h_iv.powi(d as u32);
                    out[i] = (derivs[d].eval(x) * scale).mid();
                }
            }
        }
        out
    }

    /// Local polynomial in `xi` on element `e`, enclosing the exact one.
    pub fn local_poly(&self, e: usize, dofs: &[f64]) -> Poly1 {
        let shapes = self.shapes();
        let mut c = vec![Interval::ZERO; self.px + 1];
        for (s, g) in shapes.iter().zip(self.local_dofs(e)) {
            let Some(g) = g else { continue };
            let w = Interval::point(dofs[g]);
            for (p, &v) in s.iter().enumerate() {
                if v != 0.0 {
                    c[p] = c[p] + w * Interval::point(v);
                }
            }
        }
        Poly1::new(c)
    }

    /// Float value of the function with the given DOFs at `x`.
    pub fn eval(&self, dofs: &[f64], x: f64) -> f64 {
        let e = ((x / self.h).floor() as usize).min(self.elems - 1);
        let xi = x / self.h - e as f64;
        self.shapes()
            .iter()
            .zip(self.local_dofs(e))
            .filter_map(|(s, g)| g.map(|g| dofs[g] * horner(s, xi)))
            .sum()
    }
}

/// Reference solution on one step: per-cell polynomials plus the DOF
/// vectors at the temporal element nodes and midpoints.
#[derive(Clone, Debug)]
pub struct SpaceTimePoly {
    /// Spatial elements.
    nx: usize,
    /// Temporal elements.
    nt: usize,
    px: usize,
    h: Interval,
    k: Interval,
    /// `cells[it * nx + ix]` in local `(xi, eta)`.
    cells: Vec<BiPoly>,
    /// DOFs at `s_j`, length `nt + 1`.
    node_dofs: Vec<Vec<f64>>,
}

impl SpaceTimePoly {
    fn build(space: &HermiteSpace, k: Interval, node_dofs: Vec<Vec<f64>>, mid_dofs: Vec<Vec<f64>>) -> Self {
        let nx = space.elements();
        let nt = mid_dofs.len();
        let mut cells = Vec::with_capacity(nx * nt);
        let lag: Vec<Poly1> = LAGRANGE.iter().map(|c| Poly1::from_f64(c)).collect();
        for it in 0..nt {
            for ix in 0..nx {
                let a = space.local_poly(ix, &node_dofs[it]);
                let b = space.local_poly(ix, &mid_dofs[it]);
                let c = space.local_poly(ix, &node_dofs[it + 1]);
                let cell = BiPoly::tensor(&a, &lag[0])
                    .add(&BiPoly::tensor(&b, &lag[1]))
                    .add(&BiPoly::tensor(&c, &lag[2]));
                cells.push(cell);
            }
        }
        SpaceTimePoly {
            nx,
            nt,
            px: space.degree(),
            h: space.h_iv,
            k,
            cells,
            node_dofs,
        }
    }

    pub fn space_elements(&self) -> usize {
        self.nx
    }

    pub fn time_elements(&self) -> usize {
        self.nt
    }

    pub fn degree_x(&self) -> usize {
        self.px
    }

    pub fn h(&self) -> Interval {
        self.h
    }

    pub fn k(&self) -> Interval {
        self.k
    }

    pub fn cell(&self, ix: usize, it: usize) -> &BiPoly {
        &self.cells[it * self.nx + ix]
    }

    pub fn start_dofs(&self) -> &[f64] {
        &self.node_dofs[0]
    }

    pub fn end_dofs(&self) -> &[f64] {
        &self.node_dofs[self.nt]
    }

    /// Float value at `x` in `[0,1]` and step-local time `t` in `[0, T_i]`.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let (h, k) = (self.h.mid(), self.k.mid());
        let ix = ((x / h).floor() as usize).min(self.nx - 1);
        let it = ((t / k).floor() as usize).min(self.nt - 1);
        let xi = (x / h - ix as f64).clamp(0.0, 1.0);
        let eta = (t / k - it as f64).clamp(0.0, 1.0);
        self.cell(ix, it).eval(Interval::point(xi), Interval::point(eta)).mid()
    }

    /// Float value of `u_x` at the same points as [`SpaceTimePoly::eval`].
    pub fn eval_dx(&self, x: f64, t: f64) -> f64 {
        let (h, k) = (self.h.mid(), self.k.mid());
        let ix = ((x / h).floor() as usize).min(self.nx - 1);
        let it = ((t / k).floor() as usize).min(self.nt - 1);
        let xi = (x / h - ix as f64).clamp(0.0, 1.0);
        let eta = (t / k - it as f64).clamp(0.0, 1.0);
        self.cell(ix, it).deriv_x().eval(Interval::point(xi), Interval::point(eta)).mid() / h
    }

    /// Long-format coefficient dump: `step,ix,it,p,q,coefficient`.
    pub fn write_csv<W: Write>(&self, step: usize, mut out: W, header: bool) -> Result<()> {
        if header {
            writeln!(out, "step,ix,it,p,q,coefficient")?;
        }
        for it in 0..self.nt {
            for ix in 0..self.nx {
                let c = self.cell(ix, it);
                for p in 0..=c.degree_x() {
                    for q in 0..=c.degree_t() {
                        writeln!(out, "{step},{ix},{it},{p},{q},{:e}", c.coeff(p, q).mid())?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Float Galerkin solver for one step.
#[derive(Clone, Debug)]
pub struct ReferenceSolver {
    space: HermiteSpace,
    nu: f64,
    g: Nonlinearity,
    k: f64,
    k_iv: Interval,
    nt: usize,
    mass: DMatrix<f64>,
    stiff: DMatrix<f64>,
    /// Quadrature nodes/weights on [0,1] and shape values there.
    qw: Vec<f64>,
    shape_vals: Vec<Vec<f64>>,
}

impl ReferenceSolver {
    pub fn new(problem: &ProblemSpec) -> Result<Self> {
        let space = HermiteSpace::new(problem.space_elements, problem.px)?;
        let nt = problem.time_elements;
        let k_iv = problem.step_length / Interval::from_i64(nt as i64);
        let q = GaussLegendre::exact_for_degree(3 * problem.px + problem.px);
        let qx: Vec<f64> = q.nodes().iter().map(Interval::mid).collect();
        let qw: Vec<f64> = q.weights().iter().map(Interval::mid).collect();
        let shapes = space.shapes();
        let shape_vals: Vec<Vec<f64>> = shapes.iter().map(|s| qx.iter().map(|&x| horner(s, x)).collect()).collect();
        let n = space.ndof();
        let h = space.h;
        let mut mass = DMatrix::zeros(n, n);
        let mut stiff = DMatrix::zeros(n, n);
        let dshape: Vec<Vec<f64>> = shapes
            .iter()
            .map(|s| {
                let d = deriv_coeffs(s);
                qx.iter().map(|&x| horner(&d, x)).collect()
            })
            .collect();
        for e in 0..space.elements() {
            let loc = space.local_dofs(e);
            for (a, ga) in loc.iter().enumerate() {
                let Some(ga) = *ga else { continue };
                for (b, gb) in loc.iter().enumerate() {
                    let Some(gb) = *gb else { continue };
                    let mut mv = 0.0;
                    let mut kv = 0.0;
                    for (qi, &w) in qw.iter().enumerate() {
                        mv += w * shape_vals[a][qi] * shape_vals[b][qi];
                        kv += w * dshape[a][qi] * dshape[b][qi];
                    }
                    mass[(ga, gb)] += h * mv;
                    stiff[(ga, gb)] += kv / h;
                }
            }
        }
        Ok(ReferenceSolver {
            space,
            nu: problem.nu.mid(),
            g: problem.g.clone(),
            k: k_iv.mid(),
            k_iv,
            nt,
            mass,
            stiff,
            qw,
            shape_vals,
        })
    }

    pub fn space(&self) -> &HermiteSpace {
        &self.space
    }

    /// `f(U) = -nu K U + F(U)` and optionally the Jacobian of `F`.
    fn rhs(&self, u: &DVector<f64>, jac: Option<&mut DMatrix<f64>>) -> DVector<f64> {
        let n = self.space.ndof();
        let mut f = -(&self.stiff * u) * self.nu;
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        let h = self.space.h;
        for e in 0..self.space.elements() {
            let loc = self.space.local_dofs(e);
            for (qi, &w) in self.qw.iter().enumerate() {
                let mut val = 0.0;
                for (a, ga) in loc.iter().enumerate() {
                    if let Some(ga) = ga {
                        val += u[*ga] * self.shape_vals[a][qi];
                    }
                }
                let gv = self.g.eval_f64(val) * w * h;
                let dg = self.g.deriv_f64(val) * w * h;
                for (a, ga) in loc.iter().enumerate() {
                    let Some(ga) = *ga else { continue };
                    f[ga] += gv * self.shape_vals[a][qi];
                    if let Some(j) = jac.as_deref_mut() {
                        for (b, gb) in loc.iter().enumerate() {
                            let Some(gb) = *gb else { continue };
                            j[(ga, gb)] += dg * self.shape_vals[a][qi] * self.shape_vals[b][qi];
                        }
                    }
                }
            }
        }
        debug_assert_eq!(f.len(), n);
        f
    }

    /// One temporal element of 2-stage Gauss collocation. Returns the stage
    /// values.
    fn collocation_step(&self, un: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        let s3 = 3f64.sqrt() / 6.0;
        let a = [[0.25, 0.25 - s3], [0.25 + s3, 0.25]];
        let n = self.space.ndof();
        let mut y1 = un.clone();
        let mut y2 = un.clone();
        let mut j1 = DMatrix::zeros(n, n);
        let mut j2 = DMatrix::zeros(n, n);
        for _ in 0..50 {
            let f1 = self.rhs(&y1, Some(&mut j1));
            let f2 = self.rhs(&y2, Some(&mut j2));
            let r1 = &self.mass * (&y1 - un) - (&f1 * a[0][0] + &f2 * a[0][1]) * self.k;
            let r2 = &self.mass * (&y2 - un) - (&f1 * a[1][0] + &f2 * a[1][1]) * self.k;
            let lin1 = &j1 - &self.stiff * self.nu;
            let lin2 = &j2 - &self.stiff * self.nu;
            let mut jac = DMatrix::zeros(2 * n, 2 * n);
            jac.view_mut((0, 0), (n, n)).copy_from(&(&self.mass - &lin1 * (self.k * a[0][0])));
            jac.view_mut((0, n), (n, n)).copy_from(&(-&lin2 * (self.k * a[0][1])));
            jac.view_mut((n, 0), (n, n)).copy_from(&(-&lin1 * (self.k * a[1][0])));
            jac.view_mut((n, n), (n, n)).copy_from(&(&self.mass - &lin2 * (self.k * a[1][1])));
            let mut rhs = DVector::zeros(2 * n);
            rhs.rows_mut(0, n).copy_from(&r1);
            rhs.rows_mut(n, n).copy_from(&r2);
            let res_norm = rhs.amax();
            let delta = jac
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::ReferenceSolveFailure("singular Newton matrix".into()))?;
            y1 -= delta.rows(0, n);
            y2 -= delta.rows(n, n);
            let scale = 1.0 + y1.amax().max(y2.amax());
            if delta.amax() <= 1e-12 * scale || res_norm <= 1e-14 * scale {
                return Ok((y1, y2));
            }
            if !delta.amax().is_finite() {
                break;
            }
        }
        Err(Error::ReferenceSolveFailure(
            "Newton iteration did not converge in 50 iterations".into(),
        ))
    }

    /// Solves one step starting from the DOF vector `start`.
    pub fn solve_step(&self, start: &[f64]) -> Result<SpaceTimePoly> {
        if start.len() != self.space.ndof() {
            return Err(Error::State("start vector has the wrong length".into()));
        }
        let s3 = 3f64.sqrt() / 6.0;
        let (c1, c2) = (0.5 - s3, 0.5 + s3);
        // Lagrange weights through (0, c1, c2) for eta = 1/2 and eta = 1
        let lag = |eta: f64| {
            [
                (eta - c1) * (eta - c2) / (c1 * c2),
                eta * (eta - c2) / (c1 * (c1 - c2)),
                eta * (eta - c1) / (c2 * (c2 - c1)),
            ]
        };
        let (lm, le) = (lag(0.5), lag(1.0));
        let mut nodes = vec![start.to_vec()];
        let mut mids = Vec::with_capacity(self.nt);
        let mut un = DVector::from_column_slice(start);
        for _ in 0..self.nt {
            let (y1, y2) = self.collocation_step(&un)?;
            let um = &un * lm[0] + &y1 * lm[1] + &y2 * lm[2];
            let ue = &un * le[0] + &y1 * le[1] + &y2 * le[2];
            mids.push(um.as_slice().to_vec());
            nodes.push(ue.as_slice().to_vec());
            un = ue;
        }
        Ok(SpaceTimePoly::build(&self.space, self.k_iv, nodes, mids))
    }
}

/// Initial DOFs (Hermite interpolant of `u0`) and the first step.
pub fn solve_reference(problem: &ProblemSpec, start: Option<&[f64]>) -> Result<SpaceTimePoly> {
    let solver = ReferenceSolver::new(problem)?;
    let init;
    let s = match start {
        Some(s) => s,
        None => {
            init = solver.space().interpolate(&problem.u0);
            &init
        }
    };
    solver.solve_step(s)
}

/// `delta = g(u) - u_t + nu u_xx` on one cell, in local coordinates.
pub fn residual_cell(g: &Nonlinearity, nu: Interval, u: &BiPoly, h: Interval, k: Interval) -> BiPoly {
    let ut = u.deriv_t().scale(Interval::ONE / k);
    let uxx = u.deriv_x().deriv_x().scale(nu / h.sqr());
    g.compose(u).sub(&ut).add(&uxx)
}

/// Enclosure of `||delta||_{L2(J_i; L2)}`.
pub fn residual_norm(problem: &ProblemSpec, u: &SpaceTimePoly) -> Interval {
    let (h, k) = (u.h(), u.k());
    let mut total = Interval::ZERO;
    for it in 0..u.time_elements() {
        for ix in 0..u.space_elements() {
            let d = residual_cell(&problem.g, problem.nu, u.cell(ix, it), h, k);
            let sq = d.mul(&d).integrate_unit();
            total = total + Interval::raw(sq.lo().max(0.0), sq.hi().max(0.0));
        }
    }
    (total * h * k).sqrt_nonneg()
}

/// `(||u0 - u(0)||_{H1_0}, ||u0 - u(0)||_{L2})`.
pub fn initial_mismatch(u0: &Poly1, u: &SpaceTimePoly) -> (Interval, Interval) {
    let h = u.h();
    let mut l2 = Interval::ZERO;
    let mut h1 = Interval::ZERO;
    let one = Poly1::from_f64(&[1.0]);
    for ix in 0..u.space_elements() {
        let x0 = h * Interval::from_i64(ix as i64);
        let exact = u0.compose_affine(x0, h);
        let approx = u.cell(ix, 0).at_time(Interval::ZERO);
        let d = BiPoly::tensor(&exact, &one).sub(&BiPoly::tensor(&approx, &one));
        let dx = d.deriv_x();
        let a = d.mul(&d).integrate_unit();
        let b = dx.mul(&dx).integrate_unit();
        l2 = l2 + Interval::raw(a.lo().max(0.0), a.hi().max(0.0));
        h1 = h1 + Interval::raw(b.lo().max(0.0), b.hi().max(0.0));
    }
    ((h1 / h).sqrt_nonneg(), (l2 * h).sqrt_nonneg())
}

/// `c = -g'(u)` and `d = g2 + 3 g3 u` as coefficient fields on the cells.
pub fn linearization_field(problem: &ProblemSpec, u: &SpaceTimePoly) -> Result<(CoefficientField, CoefficientField)> {
    let (nx, nt) = (u.space_elements(), u.time_elements());
    let mut c = Vec::with_capacity(nx * nt);
    let mut d = Vec::with_capacity(nx * nt);
    for it in 0..nt {
        for ix in 0..nx {
            let cell = u.cell(ix, it);
            c.push(problem.g.linear_coefficient(cell));
            d.push(problem.g.quadratic_coefficient(cell));
        }
    }
    Ok((CoefficientField::new(nx, nt, c)?, CoefficientField::new(nx, nt, d)?))
}
