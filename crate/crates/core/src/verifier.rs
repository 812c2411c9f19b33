//! Time-evolving verification. On each step `u = u_bar + v + w`, where `v`
//! carries the initial mismatch through the linearized flow and `w` is
//! located by a fixed-point argument in a ball of radii `(alpha, beta)`.

use std::time::{Duration, Instant};

use crate::approx::{self, ReferenceSolver, SpaceTimePoly};
use crate::assembly::{self, TensorBasis};
use crate::constants::{self, LinearizedConstants, PreparedWeights, ProjectionConstants, SandwichNorms, SpaceTimeMatrices};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mesh::{self, SpatialMesh, TemporalMesh};
use crate::problem::ProblemSpec;

/// Inflation factor of the radius iteration.
pub const RADIUS_INFLATION: f64 = 0.01;
pub const RADIUS_MAX_ITER: usize = 100;

#[derive(Clone, Debug)]
pub struct StepState {
    /// 1-based step index.
    pub index: usize,
    pub t_start: Interval,
    pub step_length: Interval,
    pub eps_h1: Interval,
    pub eps_l2: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VNorms {
    pub h1_end: Interval,
    pub l2_end: Interval,
    pub l2h1: Interval,
    pub l2l2: Interval,
    pub v1l2: Interval,
    pub sup_h1: Interval,
    pub linf: Interval,
    pub rho: Interval,
    pub rho_omega: Interval,
}

/// `rho(T) = exp(-lambda T)` and `rho_Omega(T) = sqrt((1 - rho(2T)) / (2 lambda))`
/// where `lambda = nu pi^2`. Both decrease in `lambda`, so the upper
/// endpoints are governed by its lower endpoint.
pub fn decay_factors(nu: Interval, t: Interval) -> (Interval, Interval) {
    let lam = mesh::lambda_min(nu);
    let t_hi = t;
    let rho = (-(lam * t_hi)).exp();
    let rho = Interval::raw(rho.lo().max(0.0), rho.hi().min(1.0));
    let two = Interval::point(2.0);
    let q = -(-(two * lam * t_hi)).expm1() / (two * lam);
    let ro = Interval::raw(q.lo().max(0.0), q.hi().max(0.0)).sqrt_nonneg();
    let cap = Interval::point(t.hi()).sqrt_nonneg().hi();
    let ro = Interval::raw(ro.lo().min(cap), ro.hi().min(cap));
    (rho, ro)
}

pub fn v_norm_bounds(state: &StepState, lin: &LinearizedConstants, nu: Interval) -> VNorms {
    let (rho, ro) = decay_factors(nu, state.step_length);
    let (e1, e0) = (state.eps_h1, state.eps_l2);
    let src = ro * (lin.c_b * e1 + lin.c_c * e0);
    let inv_sqrt_nu = (Interval::ONE / nu).sqrt_nonneg();
    let sup_h1 = e1 + inv_sqrt_nu * lin.c_delta * src;
    VNorms {
        h1_end: rho * e1 + inv_sqrt_nu * lin.c_delta * src,
        l2_end: rho * e0 + lin.mt_cal * src,
        l2h1: ro * e1 + lin.m1_cal * src,
        l2l2: ro * e0 + lin.m0_cal * src,
        v1l2: (nu / Interval::point(2.0)).sqrt_nonneg() * e1 + lin.c_delta * src,
        sup_h1,
        linf: sup_h1 * Interval::point(0.5),
        rho,
        rho_omega: ro,
    }
}

/// `K~_w(p) = sqrt(2^p T) K_w(p)^p`, `K_w(p) = p/(2 pi) (p-1)^{-1/(2p)} sin(pi/p)^{1/2}`.
pub fn embedding_constant(p: u32, t: Interval) -> Result<Interval> {
    let pi = Interval::pi();
    let st = Interval::point(t.hi()).sqrt()?;
    match p {
        // K_w(2) = 1/pi
        2 => Ok(Interval::point(2.0) * st / pi.sqr()),
        // K_w(3)^3 = 27 * 3^{3/4} / (32 pi^3)
        3 => {
            let three_34 = Interval::point(27.0).sqrt()?.sqrt()?;
            let kw3 = Interval::point(27.0) * three_34 / (Interval::point(32.0) * pi.powi(3));
            Ok(Interval::point(8.0).sqrt()? * st * kw3)
        }
        _ => Err(Error::Domain(format!("embedding constant for p={p} not available"))),
    }
}

fn r2(alpha: Interval, beta: Interval) -> Interval {
    alpha.sqr() + beta.sqr()
}

/// Bound of `||(v+w)^2||_{L2 L2}` over the candidate set.
pub fn g2_bound(v: &VNorms, alpha: Interval, beta: Interval, k2: Interval, c_p: Interval) -> Interval {
    v.linf * v.l2l2 + k2 * r2(alpha, beta) + Interval::point(2.0) * c_p * v.linf * alpha
}

/// Bound of `||(v+w)^3||_{L2 L2}` over the candidate set.
pub fn g3_bound(v: &VNorms, alpha: Interval, beta: Interval, k2: Interval, k3: Interval, c_p: Interval) -> Interval {
    let three = Interval::point(3.0);
    let r = r2(alpha, beta);
    v.linf.sqr() * v.l2l2
        + k3 * r * r.sqrt_nonneg()
        + three * v.linf * k2 * r
        + three * c_p * v.linf.sqr() * alpha
}

/// Everything `G(alpha, beta)` needs besides the radii.
#[derive(Clone, Copy, Debug)]
pub struct GInputs {
    pub delta: Interval,
    pub v: VNorms,
    pub k2: Interval,
    pub k3: Interval,
    pub c_p: Interval,
    /// `||g2 + 3 g3 u_bar||_inf` bound.
    pub c_d: Interval,
    /// `|g3|`.
    pub g3: Interval,
    pub degree: usize,
}

/// `G = ||delta|| + C_d G2 + |g3| G3` (the terms vanish for lower degrees).
pub fn g_total(inp: &GInputs, alpha: Interval, beta: Interval) -> Result<Interval> {
    match inp.degree {
        0 | 1 => Ok(inp.delta),
        2 => Ok(inp.delta + inp.c_d * g2_bound(&inp.v, alpha, beta, inp.k2, inp.c_p)),
        3 => Ok(inp.delta
            + inp.c_d * g2_bound(&inp.v, alpha, beta, inp.k2, inp.c_p)
            + inp.g3 * g3_bound(&inp.v, alpha, beta, inp.k2, inp.k3, inp.c_p)),
        d => Err(Error::config("g", format!("unsupported nonlinearity degree {d}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiiStatus {
    Verified,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateRadii {
    pub alpha: f64,
    pub beta: f64,
    pub status: RadiiStatus,
    pub iterations: usize,
}

impl CandidateRadii {
    pub fn is_verified(&self) -> bool {
        self.status == RadiiStatus::Verified
    }
}

/// Checks `M1 G(alpha, beta) < alpha` and `C_Delta G(alpha, beta) < beta`.
pub fn check_radii(
    m1_cal: Interval,
    c_delta: Interval,
    g: &dyn Fn(Interval, Interval) -> Result<Interval>,
    alpha: f64,
    beta: f64,
) -> Result<bool> {
    let gv = g(Interval::point(alpha), Interval::point(beta))?;
    Ok((m1_cal * gv).hi() < alpha && (c_delta * gv).hi() < beta)
}

pub fn find_radii(
    m1_cal: Interval,
    c_delta: Interval,
    g: &dyn Fn(Interval, Interval) -> Result<Interval>,
) -> Result<CandidateRadii> {
    let infl = Interval::point(1.0 + RADIUS_INFLATION);
    let step = |gv: Interval| {
        let a = (infl * m1_cal * gv).hi();
        let b = (infl * c_delta * gv).hi();
        (
            if a > 0.0 { a } else { f64::MIN_POSITIVE },
            if b > 0.0 { b } else { f64::MIN_POSITIVE },
        )
    };
    let (mut alpha, mut beta) = step(g(Interval::ZERO, Interval::ZERO)?);
    for it in 0..RADIUS_MAX_ITER {
        if !(alpha.is_finite() && beta.is_finite()) {
            break;
        }
        let gv = g(Interval::point(alpha), Interval::point(beta))?;
        if (m1_cal * gv).hi() < alpha && (c_delta * gv).hi() < beta {
            return Ok(CandidateRadii {
                alpha,
                beta,
                status: RadiiStatus::Verified,
                iterations: it + 1,
            });
        }
        (alpha, beta) = step(gv);
    }
    Ok(CandidateRadii {
        alpha: f64::INFINITY,
        beta: f64::INFINITY,
        status: RadiiStatus::Failed,
        iterations: RADIUS_MAX_ITER,
    })
}

/// `(||eps_{i+1}||_{H1_0}, ||eps_{i+1}||_{L2})`.
pub fn propagate_epsilon(
    v: &VNorms,
    lin: &LinearizedConstants,
    radii: &CandidateRadii,
    g_val: Interval,
    nu: Interval,
) -> Result<(Interval, Interval)> {
    if !radii.is_verified() {
        return Err(Error::State("cannot propagate from unverified radii".into()));
    }
    let inv_sqrt_nu = (Interval::ONE / nu).sqrt_nonneg();
    Ok((
        v.h1_end + inv_sqrt_nu * lin.c_delta * g_val,
        v.l2_end + lin.mt_cal * g_val,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Ok,
    Failed,
    ContractionFailure,
}

impl StepStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepStatus::Ok => "ok",
            StepStatus::Failed => "failed",
            StepStatus::ContractionFailure => "contraction-failure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub index: usize,
    pub m1_cal: Option<Interval>,
    pub m0_cal: Option<Interval>,
    pub mt_cal: Option<Interval>,
    pub c_delta: Option<Interval>,
    pub m1: Option<Interval>,
    pub m0: Option<Interval>,
    pub mt: Option<Interval>,
    pub alpha: f64,
    pub beta: f64,
    pub delta: Option<Interval>,
    pub eps_h1: Option<Interval>,
    pub eps_l2: Option<Interval>,
    pub status: StepStatus,
    pub c_c: Option<Interval>,
    pub c_d: Option<Interval>,
    pub kappa: Option<Interval>,
    pub g_value: Option<Interval>,
    pub v: Option<VNorms>,
    pub note: Option<String>,
}

impl StepReport {
    fn empty(index: usize) -> Self {
        StepReport {
            index,
            m1_cal: None,
            m0_cal: None,
            mt_cal: None,
            c_delta: None,
            m1: None,
            m0: None,
            mt: None,
            alpha: f64::INFINITY,
            beta: f64::INFINITY,
            delta: None,
            eps_h1: None,
            eps_l2: None,
            status: StepStatus::Failed,
            c_c: None,
            c_d: None,
            kappa: None,
            g_value: None,
            v: None,
            note: None,
        }
    }

    fn with_norms(mut self, n: &SandwichNorms) -> Self {
        self.m1 = Some(n.m1);
        self.m0 = Some(n.m0);
        self.mt = Some(n.mt);
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub constants: ProjectionConstants,
    /// `(||eps_1||_{H1_0}, ||eps_1||_{L2})`.
    pub initial_mismatch: (Interval, Interval),
    pub steps: Vec<StepReport>,
    pub requested_steps: usize,
    /// First step at which `alpha` has changed by less than 1e-3 relative over
    /// five consecutive steps. Informational only.
    pub stabilized_at: Option<usize>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn verified(&self) -> bool {
        self.steps.len() == self.requested_steps && self.steps.iter().all(|s| s.status == StepStatus::Ok)
    }
}

/// The step-independent part of a run.
pub struct Discretization {
    pub basis: TensorBasis,
    pub matrices: SpaceTimeMatrices,
    pub constants: ProjectionConstants,
    pub weights: PreparedWeights,
}

impl Discretization {
    pub fn new(problem: &ProblemSpec) -> Result<Self> {
        problem.validate()?;
        let basis = TensorBasis::new(
            SpatialMesh::uniform(problem.space_elements)?,
            TemporalMesh::uniform(problem.step_length, problem.time_elements)?,
        )?;
        let matrices = SpaceTimeMatrices::assemble(&basis);
        let constants = ProjectionConstants::compute(&basis, &matrices, problem.nu)?;
        let weights = PreparedWeights::new(&matrices)?;
        Ok(Discretization {
            basis,
            matrices,
            constants,
            weights,
        })
    }
}

/// Verifies a single step given the reference solution on it.
pub fn verify_step(
    problem: &ProblemSpec,
    disc: &Discretization,
    state: &StepState,
    ubar: &SpaceTimePoly,
) -> StepReport {
    let mut rep = StepReport::empty(state.index);
    let fail = |mut rep: StepReport, status: StepStatus, e: Error| {
        rep.status = status;
        rep.note = Some(e.to_string());
        rep
    };
    let (c, d) = match approx::linearization_field(problem, ubar) {
        Ok(x) => x,
        Err(e) => return fail(rep, StepStatus::Failed, e),
    };
    let c_c = assembly::coefficient_bounds(&c);
    let c_d = assembly::coefficient_bounds(&d);
    rep.c_c = Some(c_c);
    rep.c_d = Some(c_d);
    let delta = approx::residual_norm(problem, ubar);
    rep.delta = Some(delta);
    let g = match assembly::assemble_g(&disc.basis, Some(&c), problem.nu) {
        Ok(g) => g,
        Err(e) => return fail(rep, StepStatus::Failed, e),
    };
    let norms = match constants::sandwich_norms(&g, &disc.weights) {
        Ok(n) => n,
        Err(e) => return fail(rep, StepStatus::Failed, e),
    };
    rep = rep.with_norms(&norms);
    let lin = match constants::cascade(norms, &disc.constants, Interval::ZERO, c_c) {
        Ok(l) => l,
        Err(e) => return fail(rep, StepStatus::ContractionFailure, e),
    };
    rep.m1_cal = Some(lin.m1_cal);
    rep.m0_cal = Some(lin.m0_cal);
    rep.mt_cal = Some(lin.mt_cal);
    rep.c_delta = Some(lin.c_delta);
    rep.kappa = Some(lin.kappa);
    let v = v_norm_bounds(state, &lin, problem.nu);
    rep.v = Some(v);
    let inputs = match (embedding_constant(2, state.step_length), embedding_constant(3, state.step_length)) {
        (Ok(k2), Ok(k3)) => GInputs {
            delta,
            v,
            k2,
            k3,
            c_p: disc.constants.c_p,
            c_d,
            g3: problem.g.coeffs()[3].abs(),
            degree: problem.g.degree(),
        },
        (Err(e), _) | (_, Err(e)) => return fail(rep, StepStatus::Failed, e),
    };
    let gfun = |a: Interval, b: Interval| g_total(&inputs, a, b);
    let radii = match find_radii(lin.m1_cal, lin.c_delta, &gfun) {
        Ok(r) => r,
        Err(e) => return fail(rep, StepStatus::Failed, e),
    };
    if !radii.is_verified() {
        rep.status = StepStatus::Failed;
        rep.note = Some("radius iteration did not close".into());
        return rep;
    }
    rep.alpha = radii.alpha;
    rep.beta = radii.beta;
    let gv = match gfun(Interval::point(radii.alpha), Interval::point(radii.beta)) {
        Ok(g) => g,
        Err(e) => return fail(rep, StepStatus::Failed, e),
    };
    rep.g_value = Some(gv);
    match propagate_epsilon(&v, &lin, &radii, gv, problem.nu) {
        Ok((e1, e0)) => {
            rep.eps_h1 = Some(e1);
            rep.eps_l2 = Some(e0);
            rep.status = StepStatus::Ok;
        }
        Err(e) => return fail(rep, StepStatus::Failed, e),
    }
    rep
}

fn stabilization(steps: &[StepReport]) -> Option<usize> {
    const WINDOW: usize = 5;
    let alphas: Vec<f64> = steps.iter().take_while(|s| s.status == StepStatus::Ok).map(|s| s.alpha).collect();
    (WINDOW..alphas.len()).find_map(|i| {
        let stable = (i - WINDOW + 1..=i).all(|j| {
            let (a, b) = (alphas[j - 1], alphas[j]);
            (b - a).abs() <= 1e-3 * a.abs()
        });
        stable.then_some(i + 1)
    })
}

/// Runs all steps, calling `progress` after each one. Stops at the first
/// failed step.
pub fn run_with(problem: &ProblemSpec, progress: impl FnMut(&StepReport)) -> Result<RunReport> {
    let start = Instant::now();
    let disc = Discretization::new(problem)?;
    run_prepared(problem, &disc, start, progress)
}

/// [`run_with`] on an existing discretization of the same problem.
pub fn run_prepared(
    problem: &ProblemSpec,
    disc: &Discretization,
    start: Instant,
    mut progress: impl FnMut(&StepReport),
) -> Result<RunReport> {
    let solver = ReferenceSolver::new(problem)?;
    let mut dofs = solver.space().interpolate(&problem.u0);
    let mut steps = Vec::with_capacity(problem.steps);
    let mut mismatch = (Interval::ZERO, Interval::ZERO);
    let mut eps = (Interval::ZERO, Interval::ZERO);
    for i in 1..=problem.steps {
        let ubar = match solver.solve_step(&dofs) {
            Ok(u) => u,
            Err(e) => {
                let mut rep = StepReport::empty(i);
                rep.note = Some(e.to_string());
                progress(&rep);
                steps.push(rep);
                break;
            }
        };
        if i == 1 {
            mismatch = approx::initial_mismatch(&problem.u0, &ubar);
            eps = mismatch;
        }
        let state = StepState {
            index: i,
            t_start: problem.step_length * Interval::from_i64(i as i64 - 1),
            step_length: problem.step_length,
            eps_h1: eps.0,
            eps_l2: eps.1,
        };
        let rep = verify_step(problem, disc, &state, &ubar);
        progress(&rep);
        let ok = rep.status == StepStatus::Ok;
        if ok {
            eps = (rep.eps_h1.expect("set on success"), rep.eps_l2.expect("set on success"));
        }
        steps.push(rep);
        if !ok {
            break;
        }
        dofs = ubar.end_dofs().to_vec();
    }
    Ok(RunReport {
        constants: disc.constants,
        initial_mismatch: mismatch,
        stabilized_at: stabilization(&steps),
        steps,
        requested_steps: problem.steps,
        wall_time: start.elapsed(),
    })
}

pub fn run(problem: &ProblemSpec) -> Result<RunReport> {
    run_with(problem, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_lin() -> LinearizedConstants {
        LinearizedConstants {
            c_b: Interval::ZERO,
            c_c: Interval::ZERO,
            tau: Interval::ZERO,
            e_cal: Interval::ONE,
            kappa: Interval::ZERO,
            c_delta: Interval::ONE,
            c_q: Interval::ONE,
            m1: Interval::point(0.5),
            m0: Interval::point(0.5),
            mt: Interval::point(0.5),
            m1_cal: Interval::point(0.6),
            m0_cal: Interval::point(0.6),
            mt_cal: Interval::point(0.6),
        }
    }

    fn state(e1: f64, e0: f64, t: f64) -> StepState {
        StepState {
            index: 1,
            t_start: Interval::ZERO,
            step_length: Interval::point(t),
            eps_h1: Interval::point(e1),
            eps_l2: Interval::point(e0),
        }
    }

    #[test]
    fn decay_factors_example() {
        let (rho, ro) = decay_factors(Interval::ONE, Interval::point(0.1));
        let pi2 = std::f64::consts::PI.powi(2);
        let near = |x: Interval, want: f64| x.lo() - 1e-15 <= want && want <= x.hi() + 1e-15 && x.width() < 1e-14;
        assert!(near(rho, (-pi2 / 10.0).exp()));
        assert!(near(ro, (-(-2.0 * pi2 * 0.1f64).exp_m1() / (2.0 * pi2)).sqrt()));
    }

    #[test]
    fn decay_factor_sweep() {
        for e in -6..4 {
            let t = 10f64.powi(e);
            let (rho, ro) = decay_factors(Interval::point(0.3), Interval::point(t));
            assert!(rho.lo() >= 0.0 && rho.hi() <= 1.0);
            assert!(ro.hi() <= t.sqrt() * (1.0 + 1e-15));
        }
    }

    #[test]
    fn homogeneous_v_is_zero() {
        let v = v_norm_bounds(&state(0.0, 0.0, 0.1), &zero_lin(), Interval::ONE);
        for x in [v.h1_end, v.l2_end, v.l2h1, v.l2l2, v.v1l2, v.sup_h1, v.linf] {
            assert_eq!(x.mag(), 0.0);
        }
    }

    #[test]
    fn vanishing_coefficients_give_pure_decay() {
        let nu = Interval::point(2.0);
        let v = v_norm_bounds(&state(1.0, 0.0, 0.1), &zero_lin(), nu);
        let (rho, ro) = decay_factors(nu, Interval::point(0.1));
        assert_eq!(v.h1_end, rho);
        assert_eq!(v.l2h1, ro);
        assert!(v.v1l2.contains(1.0));
    }

    #[test]
    fn embedding_constants_respect_caps() {
        for t in [0.01, 0.1, 1.0, 10.0] {
            let k2 = embedding_constant(2, Interval::point(t)).unwrap();
            let k3 = embedding_constant(3, Interval::point(t)).unwrap();
            assert!(k2.hi() < 0.2027 * t.sqrt());
            assert!(k3.hi() < 0.1755 * t.sqrt());
        }
        assert!(embedding_constant(4, Interval::ONE).is_err());
    }

    #[test]
    fn g_reductions() {
        let zero_v = v_norm_bounds(&state(0.0, 0.0, 1.0), &zero_lin(), Interval::ONE);
        let k2 = embedding_constant(2, Interval::ONE).unwrap();
        let k3 = embedding_constant(3, Interval::ONE).unwrap();
        let cp = mesh::constant_c_p();
        let (a, b) = (Interval::point(0.3), Interval::point(0.4));
        assert_eq!(g2_bound(&zero_v, Interval::ZERO, Interval::ZERO, k2, cp).mag(), 0.0);
        assert!(g2_bound(&zero_v, a, b, k2, cp).contains((k2 * Interval::point(0.25)).mid()));
        let g3 = g3_bound(&zero_v, a, b, k2, k3, cp);
        assert!((g3.mid() - k3.mid() * 0.125).abs() < 1e-15);
    }

    #[test]
    fn radii_for_zero_and_constant_g() {
        let m1 = Interval::point(1.5);
        let cd = Interval::point(2.0);
        let r = find_radii(m1, cd, &|_, _| Ok(Interval::ZERO)).unwrap();
        assert!(r.is_verified() && r.alpha > 0.0 && r.alpha < 1e-300);
        let r = find_radii(m1, cd, &|_, _| Ok(Interval::point(1e-3))).unwrap();
        assert!(r.is_verified());
        assert_eq!(r.iterations, 1);
        assert!((r.alpha - 1.01 * 1.5e-3).abs() < 1e-12);
        assert!(check_radii(m1, cd, &|_, _| Ok(Interval::point(1e-3)), r.alpha, r.beta).unwrap());
    }

    #[test]
    fn radii_diverge_for_large_quadratic() {
        let r = find_radii(Interval::ONE, Interval::ONE, &|a, b| Ok(Interval::point(1.0) + a.sqr() + b.sqr())).unwrap();
        assert_eq!(r.status, RadiiStatus::Failed);
        assert!(r.alpha.is_infinite());
    }

    #[test]
    fn propagation_edge_cases() {
        let v = v_norm_bounds(&state(0.0, 0.0, 1.0), &zero_lin(), Interval::ONE);
        let ok = CandidateRadii {
            alpha: 1.0,
            beta: 1.0,
            status: RadiiStatus::Verified,
            iterations: 1,
        };
        let (a, b) = propagate_epsilon(&v, &zero_lin(), &ok, Interval::ZERO, Interval::ONE).unwrap();
        assert_eq!((a.mag(), b.mag()), (0.0, 0.0));
        let bad = CandidateRadii {
            status: RadiiStatus::Failed,
            ..ok
        };
        assert!(matches!(
            propagate_epsilon(&v, &zero_lin(), &bad, Interval::ZERO, Interval::ONE),
            Err(Error::State(_))
        ));
    }

    #[test]
    fn stabilization_needs_five_flat_steps() {
        let mk = |a: f64| StepReport {
            alpha: a,
            status: StepStatus::Ok,
            ..StepReport::empty(0)
        };
        let s: Vec<_> = [1.0, 0.5, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4].iter().map(|&a| mk(a)).collect();
        assert_eq!(stabilization(&s), Some(8));
        assert_eq!(stabilization(&s[..7]), None);
    }
}
