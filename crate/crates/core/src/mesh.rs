//! Spatial mesh on (0,1), temporal mesh on one step interval, and the P1
//! hat bases living on them.
//!
//! Node coordinates are stored as enclosures of the exact mesh points, so a
//! mesh `uniform_spatial(10)` really is the mesh with nodes `e/10`.

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Debug, PartialEq)]
pub struct SpatialMesh {
    nodes: Vec<Interval>,
    lengths: Vec<Interval>,
}

impl SpatialMesh {
    /// Equispaced mesh of (0,1) with `n_elems` elements.
    pub fn uniform(n_elems: usize) -> Result<Self> {
        if n_elems == 0 {
            return Err(Error::Domain("spatial mesh needs at least one element".into()));
        }
        let ne = n_elems as i64;
        let nodes = (0..=ne)
            .map(|e| Interval::from_ratio(e, ne))
            .collect::<Result<Vec<_>>>()?;
        let h = Interval::from_ratio(1, ne)?;
        Ok(SpatialMesh {
            nodes,
            lengths: vec![h; n_elems],
        })
    }

    pub fn element_count(&self) -> usize {
        self.lengths.len()
    }

    /// Interior node count, i.e. the dimension of the P1 space with zero
    /// boundary values.
    pub fn interior_count(&self) -> usize {
        self.lengths.len() - 1
    }

    pub fn node(&self, e: usize) -> Interval {
        self.nodes[e]
    }

    pub fn element_length(&self, e: usize) -> Interval {
        self.lengths[e]
    }

    /// Upper bound of the largest element length.
    pub fn h(&self) -> f64 {
        self.lengths.iter().map(Interval::hi).fold(0.0, f64::max)
    }

    /// Lower bound of the smallest element length.
    pub fn h_min(&self) -> f64 {
        self.lengths.iter().map(Interval::lo).fold(f64::INFINITY, f64::min)
    }

    pub fn is_uniform(&self) -> bool {
        self.lengths.windows(2).all(|w| w[0] == w[1])
    }

    fn locate(&self, x: f64) -> usize {
        let mids: Vec<f64> = self.nodes.iter().map(Interval::mid).collect();
        match mids.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(self.element_count() - 1),
            Err(i) => i.saturating_sub(1).min(self.element_count() - 1),
        }
    }

    /// Hat function attached to node `node` (0..=N, boundary hats included).
    pub fn eval_hat(&self, node: usize, x: f64) -> f64 {
        let xs: Vec<f64> = self.nodes.iter().map(Interval::mid).collect();
        let xn = xs[node];
        if node > 0 && x >= xs[node - 1] && x <= xn {
            return (x - xs[node - 1]) / (xn - xs[node - 1]);
        }
        if node < xs.len() - 1 && x >= xn && x <= xs[node + 1] {
            return (xs[node + 1] - x) / (xs[node + 1] - xn);
        }
        0.0
    }

    /// Interior basis function `phi_i`, `i` in `0..interior_count()`; it is
    /// the hat at node `i + 1`.
    pub fn eval_phi(&self, i: usize, x: f64) -> Result<f64> {
        self.check_interior(i)?;
        Ok(self.eval_hat(i + 1, x))
    }

    /// Derivative of `phi_i`, taken from the element containing `x` (the
    /// left element at a node).
    pub fn eval_phi_dx(&self, i: usize, x: f64) -> Result<f64> {
        self.check_interior(i)?;
        let e = self.locate(x);
        let node = i + 1;
        let len = self.lengths[e].mid();
        Ok(if e + 1 == node {
            1.0 / len
        } else if e == node {
            -1.0 / len
        } else {
            0.0
        })
    }

    fn check_interior(&self, i: usize) -> Result<()> {
        if i >= self.interior_count() {
            return Err(Error::Domain(format!(
                "basis index {i} out of range 0..{}",
                self.interior_count()
            )));
        }
        Ok(())
    }
}

/// Mesh of one step interval, in local time `0 = s_0 < ... < s_m = T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalMesh {
    nodes: Vec<Interval>,
    lengths: Vec<Interval>,
    length: Interval,
}

impl TemporalMesh {
    /// `m` equal elements on `[0, step_length]`.
    pub fn uniform(step_length: Interval, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("temporal mesh needs at least one element".into()));
        }
        if !(step_length.lo() > 0.0) {
            return Err(Error::Domain(format!("step length {step_length} must be positive")));
        }
        let mm = Interval::from_i64(m as i64);
        let k = step_length / mm;
        let nodes = (0..=m)
            .map(|j| {
                if j == m {
                    step_length
                } else {
                    step_length * Interval::from_i64(j as i64) / mm
                }
            })
            .collect();
        Ok(TemporalMesh {
            nodes,
            lengths: vec![k; m],
            length: step_length,
        })
    }

    pub fn element_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn step_length(&self) -> Interval {
        self.length
    }

    pub fn node(&self, j: usize) -> Interval {
        self.nodes[j]
    }

    pub fn element_length(&self, j: usize) -> Interval {
        self.lengths[j]
    }

    /// Upper bound of the largest element length.
    pub fn k(&self) -> f64 {
        self.lengths.iter().map(Interval::hi).fold(0.0, f64::max)
    }

    /// Basis function `psi_j`, `j` in `0..m`; it is the hat at node `j + 1`,
    /// so every basis function vanishes at `s_0`.
    pub fn eval_psi(&self, j: usize, t: f64) -> Result<f64> {
        self.check(j)?;
        let s: Vec<f64> = self.nodes.iter().map(Interval::mid).collect();
        let node = j + 1;
        if t >= s[node - 1] && t <= s[node] {
            return Ok((t - s[node - 1]) / (s[node] - s[node - 1]));
        }
        if node < s.len() - 1 && t >= s[node] && t <= s[node + 1] {
            return Ok((s[node + 1] - t) / (s[node + 1] - s[node]));
        }
        Ok(0.0)
    }

    /// Time derivative of `psi_j` on the element containing `t` (the left
    /// element at a node).
    pub fn eval_psi_dt(&self, j: usize, t: f64) -> Result<f64> {
        self.check(j)?;
        let s: Vec<f64> = self.nodes.iter().map(Interval::mid).collect();
        let e = match s.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i.saturating_sub(1),
        }
        .min(self.element_count() - 1);
        let len = self.lengths[e].mid();
        let node = j + 1;
        Ok(if e + 1 == node {
            1.0 / len
        } else if e == node {
            -1.0 / len
        } else {
            0.0
        })
    }

    fn check(&self, j: usize) -> Result<()> {
        if j >= self.element_count() {
            return Err(Error::Domain(format!(
                "temporal basis index {j} out of range 0..{}",
                self.element_count()
            )));
        }
        Ok(())
    }
}

/// `C_Omega(h) = h / pi`: H1-projection error constant on (0,1).
pub fn constant_c_omega(mesh: &SpatialMesh) -> Interval {
    Interval::point(mesh.h()) / Interval::pi()
}

/// `C_J(k) = k / pi`: P1 interpolation error constant in time.
pub fn constant_c_j(mesh: &TemporalMesh) -> Interval {
    Interval::point(mesh.k()) / Interval::pi()
}

/// `C_inv(h) = sqrt(12) / h_min`: inverse inequality constant for P1.
pub fn constant_c_inv(mesh: &SpatialMesh) -> Interval {
    Interval::point(12.0).sqrt_nonneg() / Interval::point(mesh.h_min())
}

/// Poincare constant of (0,1).
pub fn constant_c_p() -> Interval {
    Interval::ONE / Interval::pi()
}

/// Smallest eigenvalue of `-nu * Laplacian` on (0,1) with Dirichlet data.
pub fn lambda_min(nu: Interval) -> Interval {
    nu * Interval::pi().sqr()
}
