//! The constant cascade: projection error constants on the space-time mesh,
//! the `gamma` norms, and the bounds for the linearized operator.

use crate::assembly::{self, TensorBasis};
use crate::error::{Error, Result};
use crate::imatrix::IMatrix;
use crate::interval::Interval;
use crate::linalg::{self, ApproxInverse, CholeskyFactor, NormBound, Weight};
use crate::mesh;

/// The matrices that do not depend on the coefficient field.
#[derive(Clone, Debug)]
pub struct SpaceTimeMatrices {
    pub a: IMatrix,
    pub m: IMatrix,
    pub b: IMatrix,
    pub u: IMatrix,
    pub w: IMatrix,
    pub y: IMatrix,
}

impl SpaceTimeMatrices {
    pub fn assemble(basis: &TensorBasis) -> Self {
        SpaceTimeMatrices {
            a: assembly::assemble_a(basis),
            m: assembly::assemble_m(basis),
            b: assembly::assemble_b(basis),
            u: assembly::assemble_u(basis),
            w: assembly::assemble_w(basis),
            y: assembly::assemble_y(basis),
        }
    }
}

/// Weights `M`, `U`, `Y` and the factor of `A`, reused by every step.
#[derive(Clone, Debug)]
pub struct PreparedWeights {
    pub m: Weight,
    pub u: Weight,
    pub y: Weight,
    pub a: CholeskyFactor,
}

impl PreparedWeights {
    pub fn new(mats: &SpaceTimeMatrices) -> Result<Self> {
        Ok(PreparedWeights {
            m: Weight::new(&mats.m)?,
            u: Weight::new(&mats.u)?,
            y: Weight::new(&mats.y)?,
            a: CholeskyFactor::new(&mats.a)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionConstants {
    pub nu: Interval,
    pub c_omega: Interval,
    pub c_j: Interval,
    pub c_inv: Interval,
    pub c_p: Interval,
    pub c1: Interval,
    pub c0: Interval,
    /// `c_0(h)`, the end-time constant.
    pub c0_end: Interval,
    pub gamma1: Interval,
    pub gamma0: Interval,
    pub gamma_t: Interval,
    pub c1_tilde: Interval,
    pub c0_tilde: Interval,
    pub c0_end_tilde: Interval,
}

/// `(C_1, C_0, c_0)`.
pub fn theorem1_constants(
    nu: Interval,
    c_omega: Interval,
    c_j: Interval,
    c_inv: Interval,
) -> (Interval, Interval, Interval) {
    let two = Interval::point(2.0);
    let eight = Interval::point(8.0);
    let c1 = two / nu * c_omega + c_inv * c_j;
    let c0 = eight / nu * c_omega.sqr() + c_j;
    let c0_end = (eight / nu).sqrt_nonneg() * c_omega;
    (c1, c0, c0_end)
}

/// `(gamma_1, gamma_0, gamma_T)`, each `nu ||P^{T/2} (A + nu B)^{-1} W^{1/2}||`
/// with `P = M, U, Y`.
pub fn gammas(mats: &SpaceTimeMatrices, nu: Interval) -> Result<(NormBound, NormBound, NormBound)> {
    let k = mats.a.add(&mats.b.scale(nu))?;
    let inv = ApproxInverse::new(&k)?;
    let wf = CholeskyFactor::new(&mats.w)?;
    let scale = |b: NormBound| NormBound {
        value: Interval::raw(
            (nu * Interval::point(b.value.lo())).lo(),
            (nu * Interval::point(b.value.hi())).hi(),
        ),
        ..b
    };
    let g1 = linalg::inv_sandwich_norm_prepared(&Weight::new(&mats.m)?, &inv, &wf)?;
    let g0 = linalg::inv_sandwich_norm_prepared(&Weight::new(&mats.u)?, &inv, &wf)?;
    let gt = linalg::inv_sandwich_norm_prepared(&Weight::new(&mats.y)?, &inv, &wf)?;
    Ok((scale(g1), scale(g0), scale(gt)))
}

/// `(C~_1, C~_0, c~_0)`, each adding `C_J C_inv gamma`.
pub fn theorem2_constants(
    theorem1: (Interval, Interval, Interval),
    c_j: Interval,
    c_inv: Interval,
    gammas: (Interval, Interval, Interval),
) -> (Interval, Interval, Interval) {
    let f = c_j * c_inv;
    (
        theorem1.0 + f * gammas.0,
        theorem1.1 + f * gammas.1,
        theorem1.2 + f * gammas.2,
    )
}

/// Bound intervals as `[estimate, upper]`, clipped at zero from below.
pub(crate) fn bound_interval(b: &NormBound) -> Interval {
    Interval::raw(b.value.lo().max(0.0).min(b.value.hi()), b.value.hi())
}

impl ProjectionConstants {
    pub fn compute(basis: &TensorBasis, mats: &SpaceTimeMatrices, nu: Interval) -> Result<Self> {
        if !(nu.lo() > 0.0) {
            return Err(Error::Domain(format!("viscosity {nu} must be positive")));
        }
        let c_omega = mesh::constant_c_omega(basis.space());
        let c_j = mesh::constant_c_j(basis.time());
        let c_inv = mesh::constant_c_inv(basis.space());
        let c_p = mesh::constant_c_p();
        let t1 = theorem1_constants(nu, c_omega, c_j, c_inv);
        let (g1, g0, gt) = gammas(mats, nu)?;
        let g = (bound_interval(&g1), bound_interval(&g0), bound_interval(&gt));
        let t2 = theorem2_constants(t1, c_j, c_inv, g);
        Ok(ProjectionConstants {
            nu,
            c_omega,
            c_j,
            c_inv,
            c_p,
            c1: t1.0,
            c0: t1.1,
            c0_end: t1.2,
            gamma1: g.0,
            gamma0: g.1,
            gamma_t: g.2,
            c1_tilde: t2.0,
            c0_tilde: t2.1,
            c0_end_tilde: t2.2,
        })
    }

    /// `(name, value)` pairs in report order.
    pub fn named(&self) -> Vec<(&'static str, Interval)> {
        vec![
            ("C_Omega", self.c_omega),
            ("C_J", self.c_j),
            ("C_inv", self.c_inv),
            ("C_p", self.c_p),
            ("C1", self.c1),
            ("C0", self.c0),
            ("c0", self.c0_end),
            ("gamma1", self.gamma1),
            ("gamma0", self.gamma0),
            ("gammaT", self.gamma_t),
            ("C1_tilde", self.c1_tilde),
            ("C0_tilde", self.c0_tilde),
            ("c0_tilde", self.c0_end_tilde),
        ]
    }
}

/// `M_1, M_0, M_T`: `||P^{T/2} G^{-1} A^{1/2}||` with `P = M, U, Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichNorms {
    pub m1: Interval,
    pub m0: Interval,
    pub mt: Interval,
}

pub fn sandwich_norms(g: &IMatrix, weights: &PreparedWeights) -> Result<SandwichNorms> {
    let inv = ApproxInverse::new(g)?;
    let m1 = linalg::inv_sandwich_norm_prepared(&weights.m, &inv, &weights.a)?;
    let m0 = linalg::inv_sandwich_norm_prepared(&weights.u, &inv, &weights.a)?;
    let mt = linalg::inv_sandwich_norm_prepared(&weights.y, &inv, &weights.a)?;
    Ok(SandwichNorms {
        m1: bound_interval(&m1),
        m0: bound_interval(&m0),
        mt: bound_interval(&mt),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearizedConstants {
    pub c_b: Interval,
    pub c_c: Interval,
    pub tau: Interval,
    pub e_cal: Interval,
    pub kappa: Interval,
    pub c_delta: Interval,
    pub c_q: Interval,
    pub m1: Interval,
    pub m0: Interval,
    pub mt: Interval,
    pub m1_cal: Interval,
    pub m0_cal: Interval,
    pub mt_cal: Interval,
}

/// Evaluates `tau, E, kappa`; fails with [`Error::ContractionFailure`]
/// unless the upper bound of `kappa` is below one.
pub fn cascade(
    norms: SandwichNorms,
    proj: &ProjectionConstants,
    c_b: Interval,
    c_c: Interval,
) -> Result<LinearizedConstants> {
    let c_b = c_b.abs();
    let c_c = c_c.abs();
    let tau = proj.c1_tilde * c_b + proj.c0_tilde * c_c;
    let e_cal = norms.m1 * c_b + norms.m0 * c_c + Interval::ONE;
    let kappa = tau * e_cal;
    if !(kappa.hi() < 1.0) {
        return Err(Error::ContractionFailure { kappa_hi: kappa.hi() });
    }
    let c_delta = e_cal / (Interval::ONE - kappa);
    let c_q = tau * c_delta + Interval::ONE;
    Ok(LinearizedConstants {
        c_b,
        c_c,
        tau,
        e_cal,
        kappa,
        c_delta,
        c_q,
        m1: norms.m1,
        m0: norms.m0,
        mt: norms.mt,
        m1_cal: norms.m1 * c_q + proj.c1_tilde * c_delta,
        m0_cal: norms.m0 * c_q + proj.c0_tilde * c_delta,
        mt_cal: norms.mt * c_q + proj.c0_end_tilde * c_delta,
    })
}

/// One-shot version: sandwich norms of `G` against `A, M, U, Y`, then the cascade.
#[allow(clippy::too_many_arguments)]
pub fn linearized_constants(
    g: &IMatrix,
    a: &IMatrix,
    m: &IMatrix,
    u: &IMatrix,
    y: &IMatrix,
    proj: &ProjectionConstants,
    c_b: Interval,
    c_c: Interval,
) -> Result<LinearizedConstants> {
    let weights = PreparedWeights {
        m: Weight::new(m)?,
        u: Weight::new(u)?,
        y: Weight::new(y)?,
        a: CholeskyFactor::new(a)?,
    };
    cascade(sandwich_norms(g, &weights)?, proj, c_b, c_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{SpatialMesh, TemporalMesh};

    #[test]
    fn theorem1_example_values() {
        let s = SpatialMesh::uniform(10).unwrap();
        let t = TemporalMesh::uniform(Interval::from_ratio(1, 10).unwrap(), 100).unwrap();
        let (c1, _, c0e) = theorem1_constants(
            Interval::ONE,
            mesh::constant_c_omega(&s),
            mesh::constant_c_j(&t),
            mesh::constant_c_inv(&s),
        );
        // 2/(10 pi) + sqrt(12) * 10 / (1000 pi)
        let pi = std::f64::consts::PI;
        let want = 0.2 / pi + 12f64.sqrt() * 10.0 / (1000.0 * pi);
        assert!((c1.mid() - want).abs() < 1e-14 && c1.hi() >= want - 1e-16);
        assert!((c0e.mid() - 8f64.sqrt() / (10.0 * pi)).abs() < 1e-14);
    }

    #[test]
    fn vanishing_c_omega_reduces_c1() {
        let (c1, _, _) = theorem1_constants(Interval::ONE, Interval::ZERO, Interval::point(0.5), Interval::point(3.0));
        assert!(c1.contains(1.5));
    }

    #[test]
    fn zero_gamma_keeps_theorem1_constants() {
        let t1 = (Interval::point(1.0), Interval::point(2.0), Interval::point(3.0));
        let z = (Interval::ZERO, Interval::ZERO, Interval::ZERO);
        assert_eq!(theorem2_constants(t1, Interval::ONE, Interval::ONE, z), t1);
    }

    #[test]
    fn toy_gammas_match_scalar_formula() {
        let basis = TensorBasis::new(
            SpatialMesh::uniform(2).unwrap(),
            TemporalMesh::uniform(Interval::ONE, 1).unwrap(),
        )
        .unwrap();
        let mats = SpaceTimeMatrices::assemble(&basis);
        let (g1, g0, gt) = gammas(&mats, Interval::ONE).unwrap();
        // 1x1: gamma = nu sqrt(P W) / (A + nu B)
        let (a, b, w) = (1.0f64 / 3.0, 2.0f64, 4.0f64);
        for (g, p) in [(g1, 4.0f64 / 3.0), (g0, 1.0 / 9.0), (gt, 1.0 / 3.0)] {
            let want = (p * w).sqrt() / (a + b);
            assert!(g.upper() >= want && g.upper() <= want * (1.0 + 1e-10), "{g:?} vs {want}");
        }
    }

    #[test]
    fn zero_coefficients_reduce_cascade() {
        let basis = TensorBasis::new(
            SpatialMesh::uniform(4).unwrap(),
            TemporalMesh::uniform(Interval::point(0.1), 4).unwrap(),
        )
        .unwrap();
        let mats = SpaceTimeMatrices::assemble(&basis);
        let proj = ProjectionConstants::compute(&basis, &mats, Interval::ONE).unwrap();
        let g = assembly::assemble_g(&basis, None, Interval::ONE).unwrap();
        let lin = linearized_constants(&g, &mats.a, &mats.m, &mats.u, &mats.y, &proj, Interval::ZERO, Interval::ZERO)
            .unwrap();
        assert_eq!(lin.tau, Interval::ZERO);
        assert_eq!(lin.kappa, Interval::ZERO);
        assert!(lin.c_delta.contains(1.0) && lin.c_q.contains(1.0));
        assert!(lin.m1_cal.hi() >= (lin.m1 + proj.c1_tilde).hi() - 1e-15);
        assert!(proj.c1_tilde.hi() >= proj.c1.hi());
    }

    #[test]
    fn large_coefficient_fails_contraction() {
        let basis = TensorBasis::new(
            SpatialMesh::uniform(2).unwrap(),
            TemporalMesh::uniform(Interval::ONE, 2).unwrap(),
        )
        .unwrap();
        let mats = SpaceTimeMatrices::assemble(&basis);
        let proj = ProjectionConstants::compute(&basis, &mats, Interval::ONE).unwrap();
        let norms = SandwichNorms {
            m1: Interval::ONE,
            m0: Interval::ONE,
            mt: Interval::ONE,
        };
        let r = cascade(norms, &proj, Interval::ZERO, Interval::point(1e3));
        assert!(matches!(r, Err(Error::ContractionFailure { .. })));
    }
}
