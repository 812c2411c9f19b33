//! Exact and high-precision oracles shared by the integration tests.
#![allow(dead_code)]

pub mod dyadic;
pub mod trees;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;


pub fn q(x: f64) -> Q {
    BigRational::from_float(x).expect("finite")
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits
}

const BITS: u64 = dyadic::BITS;

/// Enclosure of pi from Machin's formula.
pub fn pi_bounds() -> (Q, Q) {
    fn atan_inv(n: i64) -> (Q, Q) {
        // alternating series sum (-1)^j / ((2j+1) n^{2j+1})
        let mut sum = Q::zero();
        let mut pw = Q::new(BigInt::one(), BigInt::from(n));
        let n2 = qi(n * n);
        let mut j = 0i64;
        loop {
            let t = &pw / qi(2 * j + 1);
            if t < Q::new(BigInt::one(), pow2(BITS + 8)) {
                return (&sum - &t, &sum + &t);
            }
            if j % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            pw /= &n2;
            j += 1;
        }
    }
    let (a_lo, a_hi) = atan_inv(5);
    let (b_lo, b_hi) = atan_inv(239);
    (qi(16) * a_lo - qi(4) * b_hi, qi(16) * a_hi - qi(4) * b_lo)
}

/// Enclosure of ln 2 from `sum 1/(k 2^k)`.
pub fn ln2_bounds() -> (Q, Q) {
    let mut sum = Q::zero();
    let n = BITS as i64 + 8;
    for k in 1..=n {
        sum += Q::new(BigInt::one(), BigInt::from(k) << (k as usize));
    }
    // tail < 1/((n+1) 2^n)
    let tail = Q::new(BigInt::one(), BigInt::from(n + 1) << (n as usize));
    (sum.clone(), sum + tail)
}

/// Exact test for positive definiteness by an `LDL^T` sweep.
pub fn is_positive_definite(a: &[Vec<Q>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.to_vec();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
    }
    true
}

/// Exact test for positive semidefiniteness by symmetric pivoting: a zero
/// largest pivot forces the remaining block to vanish.
pub fn is_positive_semidefinite(a: &[Vec<Q>]) -> bool {
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut live: Vec<usize> = (0..m.len()).collect();
    while !live.is_empty() {
        let (pos, &k) = live.iter().enumerate().max_by(|x, y| m[*x.1][*x.1].cmp(&m[*y.1][*y.1])).unwrap();
        if m[k][k].is_negative() {
            return false;
        }
        if m[k][k].is_zero() {
            return live.iter().all(|&i| live.iter().all(|&j| m[i][j].is_zero()));
        }
        live.remove(pos);
        for &i in &live {
            let f = &m[i][k] / &m[k][k];
            if f.is_zero() {
                continue;
            }
            for &j in &live {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
    }
    true
}

pub fn mat_q(n: usize, v: &[f64]) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| q(v[i * n + j])).collect()).collect()
}

pub fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let d = &f * &m[c][j];
                    m[r][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `s I - A` for a rational `s`.
pub fn shift(a: &[Vec<Q>], s: &Q, sign: i32) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j { s.clone() } else { Q::zero() };
                    if sign > 0 {
                        diag - &a[i][j]
                    } else {
                        &a[i][j] - diag
                    }
                })
                .collect()
        })
        .collect()
}

pub fn sign_of(x: &Q) -> Sign {
    x.numer().sign()
}

