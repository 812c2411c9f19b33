//! Verified spectral bounds for interval matrices.
//!
//! Internally matrices are held in midpoint-radius form over `f64`. Products
//! use the floating-point kernel for the midpoint and an a priori bound
//! `gamma_n |A||B|` for its rounding error, so every enclosure is rigorous
//! without switching rounding modes.
//!
//! Eigenvalue bounds are certified by a float Cholesky factorization of a
//! shifted matrix whose residual is then enclosed: if `mu I - S = L L^T + E`
//! then `lambda_max(S) <= mu + ||E||`, whatever the quality of `L`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::imatrix::IMatrix;
use crate::interval::{round, Interval};

const U: f64 = f64::EPSILON / 2.0;

fn gamma(n: usize) -> f64 {
    let nu = (n as f64) * U;
    round::div_up(nu, round::sub_down(1.0, nu))
}

/// Midpoint-radius matrix; `rad == None` means a point matrix.
#[derive(Clone, Debug)]
pub(crate) struct MidRad {
    pub mid: DMatrix<f64>,
    pub rad: Option<DMatrix<f64>>,
}

impl MidRad {
    pub fn point(mid: DMatrix<f64>) -> Self {
        MidRad { mid, rad: None }
    }

    pub fn from_imatrix(m: &IMatrix) -> Self {
        let (r, c) = (m.rows(), m.cols());
        let mut mid = DMatrix::zeros(r, c);
        let mut rad = DMatrix::zeros(r, c);
        let mut any = false;
        for i in 0..r {
            for j in 0..c {
                let v = m.get(i, j);
                mid[(i, j)] = v.mid();
                let rr = v.rad();
                if rr > 0.0 {
                    any = true;
                }
                rad[(i, j)] = rr;
            }
        }
        MidRad {
            mid,
            rad: any.then_some(rad),
        }
    }

    pub fn nrows(&self) -> usize {
        self.mid.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mid.ncols()
    }

    /// Entrywise upper bound of `|x|` over the enclosure.
    pub fn mag(&self) -> DMatrix<f64> {
        let mut a = self.mid.abs();
        if let Some(r) = &self.rad {
            a.zip_apply(r, |x, y| *x = round::add_up(*x, y));
        }
        a
    }

    pub fn transpose(&self) -> MidRad {
        MidRad {
            mid: self.mid.transpose(),
            rad: self.rad.as_ref().map(DMatrix::transpose),
        }
    }

    /// Enclosure of every symmetric matrix inside `self`.
    pub fn symmetrize(&self) -> MidRad {
        let n = self.nrows();
        let mut mid = DMatrix::zeros(n, n);
        let mut rad = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.mid[(i, j)], self.mid[(j, i)]);
                let m = 0.5 * a + 0.5 * b;
                let ra = self.rad.as_ref().map_or(0.0, |r| r[(i, j)]);
                let rb = self.rad.as_ref().map_or(0.0, |r| r[(j, i)]);
                // the symmetric members lie in both entries; either one bounds the distance
                let da = round::add_up(round::sub_up(a, m).abs().max(round::sub_up(m, a).abs()), ra);
                let db = round::add_up(round::sub_up(b, m).abs().max(round::sub_up(m, b).abs()), rb);
                mid[(i, j)] = m;
                rad[(i, j)] = da.min(db);
            }
        }
        MidRad { mid, rad: Some(rad) }
    }

    /// Max row sum of magnitudes, rounded up.
    pub fn norm_inf(&self) -> f64 {
        row_sum_max(&self.mag())
    }

    /// Max column sum of magnitudes, rounded up.
    pub fn norm_1(&self) -> f64 {
        row_sum_max(&self.mag().transpose())
    }

    /// `||.||_2 <= sqrt(||.||_1 ||.||_inf)`.
    pub fn norm_2_bound(&self) -> f64 {
        round::sqrt_up(round::mul_up(self.norm_1(), self.norm_inf()))
    }

    pub fn radius_norm_inf(&self) -> f64 {
        self.rad.as_ref().map_or(0.0, row_sum_max)
    }
}

fn row_sum_max(a: &DMatrix<f64>) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..a.nrows() {
        let mut s = 0.0;
        for j in 0..a.ncols() {
            s = round::add_up(s, a[(i, j)]);
        }
        best = best.max(s);
    }
    best
}

/// Upper bound for an exact product of nonnegative matrices whose float
/// value is `c`, computed with inner dimension `n`.
fn nonneg_product_up(c: &mut DMatrix<f64>, n: usize) {
    let g = gamma(n + 2);
    let factor = round::add_up(1.0, round::mul_up(2.0, g));
    let floor = round::mul_up((n + 2) as f64, f64::MIN_POSITIVE);
    c.apply(|x| *x = round::add_up(round::mul_up(*x, factor), floor));
}

fn add_up_into(acc: &mut DMatrix<f64>, other: &DMatrix<f64>) {
    acc.zip_apply(other, |x, y| *x = round::add_up(*x, y));
}

/// Enclosure of `A B` for all members of the two enclosures.
pub(crate) fn mul(a: &MidRad, b: &MidRad) -> MidRad {
    let n = a.ncols();
    assert_eq!(n, b.nrows(), "inner dimensions differ");
    let mid = &a.mid * &b.mid;
    let a_abs = a.mid.abs();
    let b_abs = b.mid.abs();
    // rounding error of the midpoint product
    let mut s1 = &a_abs * &b_abs;
    nonneg_product_up(&mut s1, n);
    let g = gamma(n);
    s1.apply(|x| *x = round::mul_up(*x, g));
    let mut rad = s1;
    if let Some(br) = &b.rad {
        let mut s2 = &a_abs * br;
        nonneg_product_up(&mut s2, n);
        add_up_into(&mut rad, &s2);
    }
    if let Some(ar) = &a.rad {
        let q = b.mag();
        let mut s3 = ar * &q;
        nonneg_product_up(&mut s3, n);
        add_up_into(&mut rad, &s3);
    }
    MidRad { mid, rad: Some(rad) }
}

/// Enclosure of `A^T B`.
pub(crate) fn tr_mul(a: &MidRad, b: &MidRad) -> MidRad {
    mul(&a.transpose(), b)
}

/// Enclosure of `P - Q` where `Q` is a float point matrix, as magnitudes.
fn diff_mag(p: &MidRad, q: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(q.nrows(), q.ncols());
    for i in 0..q.nrows() {
        for j in 0..q.ncols() {
            let (a, b) = (p.mid[(i, j)], q[(i, j)]);
            let d = round::sub_up(a, b).abs().max(round::sub_down(a, b).abs());
            let r = p.rad.as_ref().map_or(0.0, |r| r[(i, j)]);
            out[(i, j)] = round::add_up(d, r);
        }
    }
    out
}

fn norm2_of_mag(m: &DMatrix<f64>) -> f64 {
    round::sqrt_up(round::mul_up(row_sum_max(&m.transpose()), row_sum_max(m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    Gershgorin,
    ShiftedCholesky,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// Shift `mu` used by the certificate (NaN for Gershgorin).
    pub shift: f64,
    /// Bound on the 2-norm of the certificate residual.
    pub residual: f64,
    /// Floating-point eigenvalue estimate.
    pub estimate: f64,
}

/// A verified bound. For maximum-type quantities `value.hi()` is the
/// rigorous upper bound and `value.lo()` an estimate; for minimum-type
/// quantities `value.lo()` is rigorous and `value.hi()` the estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBound {
    pub value: Interval,
    pub method: BoundMethod,
    pub diagnostics: Diagnostics,
}

impl NormBound {
    pub fn upper(&self) -> f64 {
        self.value.hi()
    }

    pub fn lower(&self) -> f64 {
        self.value.lo()
    }
}

fn start_vector(n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |i, _| 1.0 + 0.5 * ((i * 7919 + 13) % 101) as f64 / 101.0);
    let nv = v.norm();
    v / nv
}

/// Approximate `(lambda_min, lambda_max)` of a symmetric float matrix.
fn extreme_eigs(s: &DMatrix<f64>) -> (f64, f64) {
    let n = s.nrows();
    if n <= 160 {
        let e = SymmetricEigen::new(s.clone());
        let lo = e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = e.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return (lo, hi);
    }
    let k = n.min(80);
    let mut q: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut alpha = Vec::with_capacity(k);
    let mut beta: Vec<f64> = Vec::with_capacity(k);
    let scale = s.abs().column_sum().max().max(f64::MIN_POSITIVE);
    q.push(start_vector(n));
    for it in 0..k {
        let mut w = s * &q[it];
        let a = q[it].dot(&w);
        alpha.push(a);
        for _ in 0..2 {
            for qj in &q {
                let c = qj.dot(&w);
                w.axpy(-c, qj, 1.0);
            }
        }
        let b = w.norm();
        if it + 1 == k || b <= 1e-13 * scale {
            break;
        }
        beta.push(b);
        q.push(w / b);
    }
    let kk = alpha.len();
    let t = DMatrix::from_fn(kk, kk, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let e = SymmetricEigen::new(t);
    let lo = e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = e.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Tries `C = sign * (mu I - S)` with `sign = +1` (upper bounds) or `-1`
/// (lower bounds). Returns a bound on `||L L^T - C||_2` on success.
fn shifted_cholesky_residual(s: &MidRad, mu: f64, upper: bool) -> Option<f64> {
    let n = s.nrows();
    // exact C lies in c_enc; the float matrix c_float is factored
    let mut c_mid = DMatrix::zeros(n, n);
    let mut c_rad = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sij = s.mid[(i, j)];
            let (v, r) = if i == j {
                let (lo, hi) = if upper {
                    (round::sub_down(mu, sij), round::sub_up(mu, sij))
                } else {
                    (round::sub_down(sij, mu), round::sub_up(sij, mu))
                };
                let m = 0.5 * lo + 0.5 * hi;
                (m, round::sub_up(hi, m).max(round::sub_up(m, lo)))
            } else if upper {
                (-sij, 0.0)
            } else {
                (sij, 0.0)
            };
            c_mid[(i, j)] = v;
            c_rad[(i, j)] = r;
        }
    }
    let chol = nalgebra::Cholesky::new(c_mid.clone())?;
    let l = chol.l();
    let lm = MidRad::point(l.clone());
    let llt = mul(&lm, &lm.transpose());
    let c_enc = MidRad {
        mid: c_mid,
        rad: Some(c_rad),
    };
    // |L L^T - C| <= |mid(LL^T) - mid(C)| + rad(LL^T) + rad(C)
    let mut e = diff_mag(&llt, &c_enc.mid);
    add_up_into(&mut e, c_enc.rad.as_ref().expect("set above"));
    let res = norm2_of_mag(&e);
    res.is_finite().then_some(res)
}

fn gershgorin(s: &MidRad, upper: bool) -> f64 {
    let n = s.nrows();
    let mag = s.mag();
    let mut best = if upper { f64::NEG_INFINITY } else { f64::INFINITY };
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if j != i {
                off = round::add_up(off, mag[(i, j)]);
            }
        }
        let d = s.mid[(i, i)];
        let r = s.rad.as_ref().map_or(0.0, |r| r[(i, i)]);
        if upper {
            best = best.max(round::add_up(round::add_up(d, r), off));
        } else {
            best = best.min(round::sub_down(round::sub_down(d, r), off));
        }
    }
    best
}

fn eig_bound(s: &MidRad, upper: bool) -> Result<NormBound> {
    let n = s.nrows();
    if n == 0 || n != s.ncols() {
        return Err(Error::Domain("eigenvalue bound needs a non-empty square matrix".into()));
    }
    let s = s.symmetrize();
    let (lo_est, hi_est) = extreme_eigs(&s.mid);
    let est = if upper { hi_est } else { lo_est };
    let scale = lo_est.abs().max(hi_est.abs()).max(f64::MIN_POSITIVE);
    let rad_norm = s.radius_norm_inf();
    let mut rel = 1e-13;
    while rel <= 0.1 {
        let mu = if upper {
            round::add_up(est, rel * scale)
        } else {
            round::sub_down(est, rel * scale)
        };
        if let Some(res) = shifted_cholesky_residual(&s, mu, upper) {
            let slack = round::add_up(res, rad_norm);
            let (lo, hi) = if upper {
                let b = round::add_up(mu, slack);
                (est.min(b), b)
            } else {
                let b = round::sub_down(mu, slack);
                (b, est.max(b))
            };
            return Ok(NormBound {
                value: Interval::new(lo, hi)?,
                method: BoundMethod::ShiftedCholesky,
                diagnostics: Diagnostics {
                    shift: mu,
                    residual: res,
                    estimate: est,
                },
            });
        }
        rel *= 10.0;
    }
    let g = gershgorin(&s, upper);
    if !g.is_finite() {
        return Err(Error::BoundFailure("eigenvalue bound is not finite".into()));
    }
    let (lo, hi) = if upper { (est.min(g), g) } else { (g, est.max(g)) };
    Ok(NormBound {
        value: Interval::new(lo, hi)?,
        method: BoundMethod::Gershgorin,
        diagnostics: Diagnostics {
            shift: f64::NAN,
            residual: f64::NAN,
            estimate: est,
        },
    })
}

pub(crate) fn eig_max(s: &MidRad) -> Result<NormBound> {
    eig_bound(s, true)
}

pub(crate) fn eig_min(s: &MidRad) -> Result<NormBound> {
    eig_bound(s, false)
}

fn check_square(s: &IMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::Domain(format!(
            "expected a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    Ok(())
}

/// Upper bound of `lambda_max(S')` over all symmetric `S'` in `S`.
pub fn sym_eig_max_bound(s: &IMatrix) -> Result<NormBound> {
    check_square(s)?;
    eig_max(&MidRad::from_imatrix(s))
}

/// Lower bound (`value.lo()`) of `lambda_min(S')` over all symmetric `S'` in `S`.
pub fn sym_eig_min_bound(s: &IMatrix) -> Result<NormBound> {
    check_square(s)?;
    eig_min(&MidRad::from_imatrix(s))
}

fn sqrt_bound(b: NormBound) -> NormBound {
    let hi = round::sqrt_up(b.value.hi().max(0.0));
    let lo = round::sqrt_down(b.value.lo().max(0.0)).min(hi);
    NormBound {
        value: Interval::raw(lo, hi),
        ..b
    }
}

pub(crate) fn weighted_norm_midrad(p: &MidRad, x: &MidRad) -> Result<NormBound> {
    let px = mul(p, x);
    let s = tr_mul(x, &px);
    Ok(sqrt_bound(eig_max(&s)?))
}

/// Upper bound of `||P^{T/2} X||_2 = sqrt(lambda_max(X^T P X))`.
pub fn weighted_norm_bound(p: &IMatrix, x: &IMatrix) -> Result<NormBound> {
    check_square(p)?;
    if p.cols() != x.rows() {
        return Err(Error::Domain("weighted norm: shape mismatch".into()));
    }
    weighted_norm_midrad(&MidRad::from_imatrix(p), &MidRad::from_imatrix(x))
}

/// Float approximate inverse `R` of `mid K` with a certificate
/// `||I - K' R||_2 <= e < 1` for every `K'` in `K`.
#[derive(Clone, Debug)]
pub struct ApproxInverse {
    pub(crate) r: MidRad,
    /// Bound on `||I - K R||_2`.
    pub residual: f64,
    /// Bound on `||R||_2`.
    pub norm: f64,
    /// Bound on `||K'^{-1} - R||_2`.
    pub error: f64,
}

impl ApproxInverse {
    pub fn new(k: &IMatrix) -> Result<Self> {
        check_square(k)?;
        Self::from_midrad(&MidRad::from_imatrix(k))
    }

    pub(crate) fn from_midrad(k: &MidRad) -> Result<Self> {
        let n = k.nrows();
        let r = k
            .mid
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::Singularity { residual: f64::INFINITY })?;
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singularity { residual: f64::INFINITY });
        }
        let rm = MidRad::point(r);
        let kr = mul(k, &rm);
        let e = norm2_of_mag(&diff_mag(&kr, &DMatrix::identity(n, n)));
        if !(e < 1.0) {
            return Err(Error::Singularity { residual: e });
        }
        let norm = rm.norm_2_bound();
        let error = round::div_up(round::mul_up(norm, e), round::sub_down(1.0, e));
        Ok(ApproxInverse {
            r: rm,
            residual: e,
            norm,
            error,
        })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }
}

/// Float Cholesky factor `F` of `mid Q` with `||Q' - F F^T||_2 <= residual`.
#[derive(Clone, Debug)]
pub struct CholeskyFactor {
    pub(crate) f: MidRad,
    pub residual: f64,
    /// Upper bound of `lambda_max(Q)`.
    pub lambda_max: f64,
}

impl CholeskyFactor {
    pub fn new(q: &IMatrix) -> Result<Self> {
        check_square(q)?;
        Self::from_midrad(&MidRad::from_imatrix(q))
    }

    pub(crate) fn from_midrad(q: &MidRad) -> Result<Self> {
        let qs = q.symmetrize();
        let chol = nalgebra::Cholesky::new(qs.mid.clone())
            .ok_or_else(|| Error::BoundFailure("float Cholesky of weight matrix failed".into()))?;
        let f = MidRad::point(chol.l());
        let fft = mul(&f, &f.transpose());
        let mut e = diff_mag(&fft, &qs.mid);
        if let Some(r) = &qs.rad {
            add_up_into(&mut e, r);
        }
        let residual = norm2_of_mag(&e);
        let lambda_max = eig_max(&qs)?.upper();
        Ok(CholeskyFactor { f, residual, lambda_max })
    }
}

/// A PSD weight `P` with its largest eigenvalue bounded.
#[derive(Clone, Debug)]
pub struct Weight {
    pub(crate) p: MidRad,
    pub lambda_max: f64,
}

impl Weight {
    pub fn new(p: &IMatrix) -> Result<Self> {
        check_square(p)?;
        let p = MidRad::from_imatrix(p).symmetrize();
        let lambda_max = eig_max(&p)?.upper().max(0.0);
        Ok(Weight { p, lambda_max })
    }
}

/// `||P^{T/2} K^{-1} Q^{1/2}||_2` from precomputed pieces.
pub fn inv_sandwich_norm_prepared(p: &Weight, inv: &ApproxInverse, q: &CholeskyFactor) -> Result<NormBound> {
    if p.p.nrows() != inv.dim() || q.f.nrows() != inv.dim() {
        return Err(Error::Domain("sandwich norm: shape mismatch".into()));
    }
    let x = mul(&inv.r, &q.f);
    let main = eig_max(&tr_mul(&x, &mul(&p.p, &x)))?;
    let lam = main.value.hi().max(0.0);
    // Q = F F^T + E_Q adds at most lambda_max(P) ||R||^2 ||E_Q|| under the root
    let corr = round::mul_up(round::mul_up(p.lambda_max, round::mul_up(inv.norm, inv.norm)), q.residual);
    let t1 = round::sqrt_up(round::add_up(lam, corr));
    let t2 = round::mul_up(
        round::mul_up(round::sqrt_up(p.lambda_max), inv.error),
        round::sqrt_up(q.lambda_max),
    );
    let hi = round::add_up(t1, t2);
    let lo = round::sqrt_down(main.diagnostics.estimate.max(0.0)).min(hi);
    Ok(NormBound {
        value: Interval::new(lo, hi)?,
        method: main.method,
        diagnostics: Diagnostics {
            shift: main.diagnostics.shift,
            residual: inv.residual,
            estimate: main.diagnostics.estimate.max(0.0).sqrt(),
        },
    })
}

/// Upper bound of `||P^{T/2} K^{-1} Q^{1/2}||_2`.
pub fn inv_sandwich_norm(p: &IMatrix, k: &IMatrix, q: &IMatrix) -> Result<NormBound> {
    let inv = ApproxInverse::new(k)?;
    let qf = CholeskyFactor::new(q)?;
    let w = Weight::new(p)?;
    inv_sandwich_norm_prepared(&w, &inv, &qf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, v: &[f64]) -> IMatrix {
        IMatrix::from_points(n, n, v).unwrap()
    }

    #[test]
    fn identity_eigen_bounds() {
        let i = IMatrix::identity(2);
        let hi = sym_eig_max_bound(&i).unwrap();
        assert!(hi.upper() >= 1.0 && hi.upper() <= 1.001);
        let lo = sym_eig_min_bound(&i).unwrap();
        assert!(lo.lower() <= 1.0 && lo.lower() >= 0.999);
        assert_eq!(hi.method, BoundMethod::ShiftedCholesky);
    }

    #[test]
    fn diagonal_eigen_bound() {
        let d = m(2, &[1.0, 0.0, 0.0, 4.0]);
        let b = sym_eig_max_bound(&d).unwrap();
        assert!(b.upper() >= 4.0 && b.upper() <= 4.004);
    }

    #[test]
    fn weighted_norm_examples() {
        let b = weighted_norm_bound(&IMatrix::identity(5), &IMatrix::identity(5)).unwrap();
        assert!(b.upper() >= 1.0 && b.upper() <= 1.01);
        let b = weighted_norm_bound(&m(1, &[4.0]), &m(1, &[3.0])).unwrap();
        assert!(b.upper() >= 6.0 && b.upper() <= 6.01);
    }

    #[test]
    fn sandwich_examples() {
        let i = IMatrix::identity(3);
        let b = inv_sandwich_norm(&i, &i, &i).unwrap();
        assert!(b.upper() >= 1.0 && b.upper() <= 1.02);
        let k = IMatrix::identity(2).scale(Interval::point(2.0));
        let i2 = IMatrix::identity(2);
        let b = inv_sandwich_norm(&i2, &k, &i2).unwrap();
        assert!(b.upper() >= 0.5 && b.upper() <= 0.51);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let k = m(2, &[1.0, 1.0, 1.0, 1.0]);
        let i2 = IMatrix::identity(2);
        assert!(matches!(inv_sandwich_norm(&i2, &k, &i2), Err(Error::Singularity { .. })));
    }

    #[test]
    fn products_enclose_exact_small_integers() {
        let a = MidRad::point(DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.4]));
        let b = MidRad::point(DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 2.0, 5.0]));
        let c = mul(&a, &b);
        let r = c.rad.unwrap();
        // 0.1*3 + 0.2*2 = 0.7
        assert!((c.mid[(0, 0)] - 0.7).abs() <= r[(0, 0)] + 1e-17);
        assert!(r[(0, 0)] > 0.0 && r[(0, 0)] < 1e-14);
    }

    #[test]
    fn large_matrix_uses_lanczos_and_stays_sound() {
        // 1D Laplacian, eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 200;
        let s = IMatrix::from_fn_symmetric(n, |i, j| {
            if i == j {
                Interval::point(2.0)
            } else if j == i + 1 {
                Interval::point(-1.0)
            } else {
                Interval::ZERO
            }
        });
        let exact_max = 2.0 - 2.0 * (n as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let exact_min = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let hi = sym_eig_max_bound(&s).unwrap();
        assert!(hi.upper() >= exact_max && hi.upper() <= exact_max * 1.01, "{hi:?}");
        let lo = sym_eig_min_bound(&s).unwrap();
        assert!(lo.lower() <= exact_min, "{lo:?} vs {exact_min}");
    }

    #[test]
    fn widening_does_not_decrease_bound() {
        let s = m(3, &[2.0, 0.5, 0.1, 0.5, 3.0, 0.2, 0.1, 0.2, 1.0]);
        let wide = s.map(|x| Interval::new(x.lo() - 1e-3, x.hi() + 1e-3).unwrap());
        let a = sym_eig_max_bound(&s).unwrap().upper();
        let b = sym_eig_max_bound(&wide).unwrap().upper();
        assert!(b >= a);
    }

    #[test]
    fn bounds_are_deterministic() {
        let s = m(3, &[2.0, 0.5, 0.1, 0.5, 3.0, 0.2, 0.1, 0.2, 1.0]);
        let a = sym_eig_max_bound(&s).unwrap();
        let b = sym_eig_max_bound(&s).unwrap();
        assert_eq!(a.value.hi().to_bits(), b.value.hi().to_bits());
    }
}
