//! Space-time P1 x P1 matrices on the tensor basis `psi_j(t) phi_i(x)`.
//!
//! Flat index is time-major: basis function `(j, i)` (0-based) sits at
//! `j * n + i`. Every matrix except `G` is a Kronecker product of a 1D time
//! Gram matrix and a 1D space Gram matrix, so entries are enclosed as the
//! product of two enclosed 1D integrals.

use crate::error::{Error, Result};
use crate::imatrix::IMatrix;
use crate::interval::Interval;
use crate::mesh::{SpatialMesh, TemporalMesh};
use crate::poly::{BiPoly, Poly1};

#[derive(Clone, Debug)]
pub struct TensorBasis {
    space: SpatialMesh,
    time: TemporalMesh,
}

impl TensorBasis {
    pub fn new(space: SpatialMesh, time: TemporalMesh) -> Result<Self> {
        if space.interior_count() == 0 {
            return Err(Error::EmptySpace("spatial mesh has no interior node".into()));
        }
        if time.element_count() == 0 {
            return Err(Error::EmptySpace("temporal mesh has no element".into()));
        }
        Ok(TensorBasis { space, time })
    }

    pub fn space(&self) -> &SpatialMesh {
        &self.space
    }

    pub fn time(&self) -> &TemporalMesh {
        &self.time
    }

    /// Spatial dimension `n` (interior nodes).
    pub fn n(&self) -> usize {
        self.space.interior_count()
    }

    /// Temporal dimension `m` (elements, one basis function per non-initial node).
    pub fn m(&self) -> usize {
        self.time.element_count()
    }

    pub fn dim(&self) -> usize {
        self.n() * self.m()
    }

    #[inline]
    pub fn flat(&self, j: usize, i: usize) -> usize {
        j * self.n() + i
    }

    /// Inverse of [`flat`](Self::flat): `(j, i)`.
    pub fn unflat(&self, idx: usize) -> (usize, usize) {
        (idx / self.n(), idx % self.n())
    }
}

/// 1D Gram matrices of the interior spatial hats.
pub mod space1d {
    use super::*;

    /// `int phi_q phi_p`.
    pub fn mass(mesh: &SpatialMesh) -> IMatrix {
        let n = mesh.interior_count();
        let three = Interval::point(3.0);
        let six = Interval::point(6.0);
        IMatrix::from_fn_symmetric(n, |p, q| {
            // hat p lives on elements p and p+1
            if p == q {
                (mesh.element_length(p) + mesh.element_length(p + 1)) / three
            } else if q == p + 1 {
                mesh.element_length(p + 1) / six
            } else {
                Interval::ZERO
            }
        })
    }

    /// `int phi_q' phi_p'`.
    pub fn stiffness(mesh: &SpatialMesh) -> IMatrix {
        let n = mesh.interior_count();
        IMatrix::from_fn_symmetric(n, |p, q| {
            if p == q {
                Interval::ONE / mesh.element_length(p) + Interval::ONE / mesh.element_length(p + 1)
            } else if q == p + 1 {
                -(Interval::ONE / mesh.element_length(p + 1))
            } else {
                Interval::ZERO
            }
        })
    }
}

/// 1D Gram matrices of the temporal hats `psi_0..psi_{m-1}`.
pub mod time1d {
    use super::*;

    fn len_after(mesh: &TemporalMesh, a: usize) -> Option<Interval> {
        (a + 1 < mesh.element_count()).then(|| mesh.element_length(a + 1))
    }

    /// `int psi_b psi_a`.
    pub fn mass(mesh: &TemporalMesh) -> IMatrix {
        let m = mesh.element_count();
        let three = Interval::point(3.0);
        let six = Interval::point(6.0);
        IMatrix::from_fn_symmetric(m, |a, b| {
            if a == b {
                let mut s = mesh.element_length(a) / three;
                if let Some(k) = len_after(mesh, a) {
                    s = s + k / three;
                }
                s
            } else if b == a + 1 {
                mesh.element_length(a + 1) / six
            } else {
                Interval::ZERO
            }
        })
    }

    /// `int psi_b' psi_a'`.
    pub fn stiffness(mesh: &TemporalMesh) -> IMatrix {
        let m = mesh.element_count();
        IMatrix::from_fn_symmetric(m, |a, b| {
            if a == b {
                let mut s = Interval::ONE / mesh.element_length(a);
                if let Some(k) = len_after(mesh, a) {
                    s = s + Interval::ONE / k;
                }
                s
            } else if b == a + 1 {
                -(Interval::ONE / mesh.element_length(a + 1))
            } else {
                Interval::ZERO
            }
        })
    }

    /// `int psi_b psi_a'` (row `a`, column `b`).
    pub fn advection(mesh: &TemporalMesh) -> IMatrix {
        let m = mesh.element_count();
        let half = Interval::point(0.5);
        IMatrix::from_fn(m, m, |a, b| {
            if b + 1 == a {
                half
            } else if b == a + 1 {
                -half
            } else if a == b && a + 1 == m {
                half
            } else {
                Interval::ZERO
            }
        })
    }

    /// `psi_b(T) psi_a(T)`: a single one in the last diagonal slot.
    pub fn end_trace(mesh: &TemporalMesh) -> IMatrix {
        let m = mesh.element_count();
        IMatrix::from_fn_symmetric(m, |a, b| {
            if a + 1 == m && b + 1 == m {
                Interval::ONE
            } else {
                Interval::ZERO
            }
        })
    }
}

/// `T (x) S`, rows indexed `a * n + p`.
pub fn kron(t: &IMatrix, s: &IMatrix) -> IMatrix {
    let (m, n) = (t.rows(), s.rows());
    let mut out = IMatrix::from_fn(m * n, m * n, |r, c| {
        let (a, p) = (r / n, r % n);
        let (b, q) = (c / n, c % n);
        let tv = t.get(a, b);
        if tv == Interval::ZERO {
            return Interval::ZERO;
        }
        let sv = s.get(p, q);
        if sv == Interval::ZERO {
            return Interval::ZERO;
        }
        tv * sv
    });
    if t.symmetry_hint() && s.symmetry_hint() {
        out = out.with_symmetry_hint().expect("kron of symmetric factors");
    }
    out
}

/// `(d_t phi_J, d_t phi_I)`.
pub fn assemble_a(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::stiffness(basis.time()), &space1d::mass(basis.space()))
}

/// `(grad phi_J, grad phi_I)`.
pub fn assemble_m(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::mass(basis.time()), &space1d::stiffness(basis.space()))
}

/// `(grad phi_J, d_t grad phi_I)`.
pub fn assemble_b(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::advection(basis.time()), &space1d::stiffness(basis.space()))
}

/// `(phi_J, phi_I)`.
pub fn assemble_u(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::mass(basis.time()), &space1d::mass(basis.space()))
}

/// `(d_t grad phi_J, d_t grad phi_I)`.
pub fn assemble_w(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::stiffness(basis.time()), &space1d::stiffness(basis.space()))
}

/// `(phi_J(T), phi_I(T))` in `L2(Omega)`.
pub fn assemble_y(basis: &TensorBasis) -> IMatrix {
    kron(&time1d::end_trace(basis.time()), &space1d::mass(basis.space()))
}

/// Piecewise polynomial function of `(x, t)` on the cells of a tensor mesh,
/// stored per cell in local coordinates, with a range enclosure per cell.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    nx: usize,
    nt: usize,
    cells: Vec<BiPoly>,
    ranges: Vec<Interval>,
}

impl CoefficientField {
    /// `cells[et * nx + ex]` is the polynomial on spatial element `ex`,
    /// temporal element `et`.
    pub fn new(nx: usize, nt: usize, cells: Vec<BiPoly>) -> Result<Self> {
        if cells.len() != nx * nt {
            return Err(Error::Domain(format!(
                "coefficient field expects {} cells, got {}",
                nx * nt,
                cells.len()
            )));
        }
        let ranges = cells.iter().map(BiPoly::range_enclosure).collect();
        Ok(CoefficientField { nx, nt, cells, ranges })
    }

    pub fn constant(nx: usize, nt: usize, value: Interval) -> Self {
        CoefficientField::new(nx, nt, vec![BiPoly::constant(value); nx * nt])
            .expect("cell count matches")
    }

    /// The field `f(x, t)` for a global polynomial in physical coordinates
    /// `sum coeffs[p][q] x^p t^q`, rewritten per cell.
    pub fn from_global(
        basis: &TensorBasis,
        coeffs: &[Vec<Interval>],
    ) -> Result<Self> {
        let (nx, nt) = (basis.space().element_count(), basis.m());
        let mut cells = Vec::with_capacity(nx * nt);
        for et in 0..nt {
            let t0 = basis.time().node(et);
            let k = basis.time().element_length(et);
            for ex in 0..nx {
                let x0 = basis.space().node(ex);
                let h = basis.space().element_length(ex);
                let mut cell = BiPoly::zero(0, 0);
                for (p, row) in coeffs.iter().enumerate() {
                    for (q, &c) in row.iter().enumerate() {
                        let mut xp = vec![Interval::ZERO; p + 1];
                        xp[p] = c;
                        let mut tq = vec![Interval::ZERO; q + 1];
                        tq[q] = Interval::ONE;
                        let xs = Poly1::new(xp).compose_affine(x0, h);
                        let ts = Poly1::new(tq).compose_affine(t0, k);
                        cell = cell.add(&BiPoly::tensor(&xs, &ts));
                    }
                }
                cells.push(cell);
            }
        }
        CoefficientField::new(nx, nt, cells)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn cell(&self, ex: usize, et: usize) -> &BiPoly {
        &self.cells[et * self.nx + ex]
    }

    pub fn cell_range(&self, ex: usize, et: usize) -> Interval {
        self.ranges[et * self.nx + ex]
    }

    pub fn ranges(&self) -> &[Interval] {
        &self.ranges
    }
}

/// `||c||_{L_inf(J; L_inf)}`: `hi` is a verified upper bound, `lo` a
/// verified lower bound from cell corner values.
pub fn coefficient_bounds(c: &CoefficientField) -> Interval {
    let hi = c.ranges.iter().map(Interval::mag).fold(0.0, f64::max);
    let lo = c
        .cells
        .iter()
        .map(|p| p.eval(Interval::ZERO, Interval::ZERO).mig())
        .fold(0.0, f64::max);
    Interval::raw(lo.min(hi), hi)
}

/// `G = A + nu B + C` with `C_{IJ} = (c phi_J, d_t phi_I)`.
pub fn assemble_g(basis: &TensorBasis, c: Option<&CoefficientField>, nu: Interval) -> Result<IMatrix> {
    let a = assemble_a(basis);
    let b = assemble_b(basis);
    let mut g = a.add(&b.scale(nu))?;
    if let Some(c) = c {
        let cm = assemble_c(basis, c)?;
        g = g.add(&cm)?;
    }
    Ok(g)
}

/// Local shape functions of a P1 element in one variable: `1 - s` and `s`.
fn shape(which: usize) -> Poly1 {
    if which == 0 {
        Poly1::from_f64(&[1.0, -1.0])
    } else {
        Poly1::from_f64(&[0.0, 1.0])
    }
}

/// `int_0^1 int_0^1 c w` from monomial moments; exact up to rounding.
fn moment_product(c: &BiPoly, w: &BiPoly) -> Interval {
    let mut s = Interval::ZERO;
    for i in 0..=c.degree_x() {
        for j in 0..=c.degree_t() {
            let ci = c.coeff(i, j);
            if ci == Interval::ZERO {
                continue;
            }
            for k in 0..=w.degree_x() {
                for l in 0..=w.degree_t() {
                    let wk = w.coeff(k, l);
                    if wk == Interval::ZERO {
                        continue;
                    }
                    let d = Interval::from_i64(((i + k + 1) * (j + l + 1)) as i64);
                    s = s + ci * wk / d;
                }
            }
        }
    }
    s
}

/// The coefficient part `C` of `G`.
pub fn assemble_c(basis: &TensorBasis, c: &CoefficientField) -> Result<IMatrix> {
    let nx = basis.space().element_count();
    let (n, m) = (basis.n(), basis.m());
    if c.nx() != nx || c.nt() != m {
        return Err(Error::Domain(format!(
            "coefficient field is {}x{} cells, mesh is {nx}x{m}",
            c.nx(),
            c.nt()
        )));
    }
    // w[p][q][b] = N_p(xi) N_q(xi) T_b(eta)
    let mut w = Vec::with_capacity(8);
    for p in 0..2 {
        for q in 0..2 {
            let xq = BiPoly::tensor(&shape(p), &Poly1::from_f64(&[1.0]))
                .mul(&BiPoly::tensor(&shape(q), &Poly1::from_f64(&[1.0])));
            for bt in 0..2 {
                w.push(xq.mul(&BiPoly::tensor(&Poly1::from_f64(&[1.0]), &shape(bt))));
            }
        }
    }
    let dim = n * m;
    let mut data = vec![Interval::ZERO; dim * dim];
    for et in 0..m {
        for ex in 0..nx {
            let cell = c.cell(ex, et);
            let h = basis.space().element_length(ex);
            let mut loc = [Interval::ZERO; 8];
            for (slot, wv) in loc.iter_mut().zip(&w) {
                *slot = moment_product(cell, wv) * h;
            }
            // local time node lt in {0,1} -> global node et+lt -> basis index et+lt-1
            for la in 0..2usize {
                let Some(a) = (et + la).checked_sub(1) else { continue };
                // d_t psi_a on this element: -1/k for the left node, +1/k for the right;
                // the 1/k cancels the k of the cell measure.
                let sign = if la == 0 { -Interval::ONE } else { Interval::ONE };
                for lb in 0..2usize {
                    let Some(b) = (et + lb).checked_sub(1) else { continue };
                    for lp in 0..2usize {
                        let Some(p) = (ex + lp).checked_sub(1).filter(|&p| p < n) else { continue };
                        for lq in 0..2usize {
                            let Some(q) = (ex + lq).checked_sub(1).filter(|&q| q < n) else {
                                continue;
                            };
                            let row = a * n + p;
                            let col = b * n + q;
                            let v = loc[(lp * 2 + lq) * 2 + lb] * sign;
                            data[row * dim + col] = data[row * dim + col] + v;
                        }
                    }
                }
            }
        }
    }
    Ok(IMatrix::from_fn(dim, dim, |r, col| data[r * dim + col]))
}
