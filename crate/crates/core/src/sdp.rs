//! Primal–dual interior-point method for small dense SDPs
//!
//! ```text
//! min ⟨C, X⟩  s.t. ⟨A_k, X⟩ = b_k,  X ⪰ 0
//! max bᵀy     s.t. Z = C − Σ y_k A_k ⪰ 0
//! ```
//!
//! using the HKM search direction with Mehrotra's predictor–corrector.
//! Constraint matrices are sparse and symmetric.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, lambda_min, lower_inverse, spd_inverse, Matrix};

/// Symmetric constraint matrix listed entry by entry; an off-diagonal
/// coefficient appears once as `(i, j)` and once as `(j, i)`.
#[derive(Clone, Debug)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn diagonal(i: usize, v: f64) -> Self {
        SparseSym {
            entries: alloc::vec![(i, i, v)],
        }
    }

    /// `v (E_ij + E_ji)` for `i != j`.
    pub fn pair(i: usize, j: usize, v: f64) -> Self {
        SparseSym {
            entries: alloc::vec![(i, j, v), (j, i, v)],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseSym {
            entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn dot(&self, m: &Matrix) -> f64 {
        self.entries.iter().map(|&(a, b, v)| v * m[(a, b)]).sum()
    }

    fn add_to(&self, m: &mut Matrix, s: f64) {
        for &(a, b, v) in &self.entries {
            m[(a, b)] += s * v;
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub c: Matrix,
    pub a: Vec<SparseSym>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SdpState {
    pub x: Matrix,
    pub y: Vec<f64>,
    pub z: Matrix,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub state: SdpState,
    pub iterations: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// False when the iteration stopped on a numerical breakdown or the
    /// iteration limit; the state is then the last interior iterate.
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    pub max_iterations: usize,
    /// Stop once `⟨X, Z⟩` and both residuals fall below this, relative to
    /// `1 + |objective|`.
    pub tolerance: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            max_iterations: 100,
            tolerance: 1e-10,
        }
    }
}

impl SdpProblem {
    fn apply(&self, k: &Matrix) -> Vec<f64> {
        self.a.iter().map(|a| a.dot(k)).collect()
    }

    fn adjoint(&self, y: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(self.c.n);
        for (a, &yk) in self.a.iter().zip(y) {
            a.add_to(&mut m, yk);
        }
        m
    }

    /// `M_kl = tr(A_k X A_l Z⁻¹)`.
    fn schur(&self, x: &Matrix, zi: &Matrix) -> Matrix {
        let m = self.a.len();
        let mut s = Matrix::zeros(m);
        for k in 0..m {
            for l in k..m {
                let mut v = 0.0;
                for &(a, b, vk) in &self.a[k].entries {
                    for &(c, d, vl) in &self.a[l].entries {
                        v += vk * vl * x[(b, c)] * zi[(d, a)];
                    }
                }
                s[(k, l)] = v;
                s[(l, k)] = v;
            }
        }
        s
    }

    pub fn solve(&self, start: SdpState, opts: SdpOptions) -> Result<SdpSolution> {
        let n = self.c.n;
        let SdpState { mut x, mut y, mut z } = start;
        let mut iterations = 0;
        let finish = |x: Matrix, y: Vec<f64>, z: Matrix, iterations: usize, converged: bool| {
            let primal_objective = self.c.dot(&x);
            let dual_objective = self.b.iter().zip(&y).map(|(b, y)| b * y).sum();
            SdpSolution {
                state: SdpState { x, y, z },
                iterations,
                primal_objective,
                dual_objective,
                converged,
            }
        };
        loop {
            let pobj = self.c.dot(&x);
            let dobj: f64 = self.b.iter().zip(&y).map(|(b, y)| b * y).sum();
            let rp: Vec<f64> = self.b.iter().zip(self.apply(&x)).map(|(b, ax)| b - ax).collect();
            let rd = self.c.sub(&z).sub(&self.adjoint(&y));
            let gap = x.dot(&z);
            let scale = 1.0 + pobj.abs().max(dobj.abs());
            let pinf = rp.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let dinf = rd.data.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if gap <= opts.tolerance * scale && pinf <= opts.tolerance * scale && dinf <= opts.tolerance * scale {
                return Ok(finish(x, y, z, iterations, true));
            }
            if iterations >= opts.max_iterations {
                return Ok(finish(x, y, z, iterations, false));
            }
            let mu = gap / n as f64;
            let factors = spd_inverse(&z).and_then(|zi| {
                let lm = cholesky(&self.schur(&x, &zi))?;
                Some((zi, lm, cholesky(&x)?, cholesky(&z)?))
            });
            let Some((zi, lm, lx, lz)) = factors else {
                if iterations == 0 {
                    return Err(Error::SolverDiverged("starting point is not interior".into()));
                }
                return Ok(finish(x, y, z, iterations, false));
            };
            iterations += 1;
            let x_rd_zi = x.mul(&rd).mul(&zi);
            let base_rhs: Vec<f64> = self
                .b
                .iter()
                .zip(self.apply(&x_rd_zi))
                .map(|(b, v)| b + v)
                .collect();

            // predictor
            let (dx_a, dz_a) = self.direction(&x, &zi, &rd, &lm, &base_rhs, None);
            let ap = max_step(&lx, &dx_a);
            let ad = max_step(&lz, &dz_a);
            let mu_aff = x.axpy(ap.min(1.0), &dx_a).dot(&z.axpy(ad.min(1.0), &dz_a)) / n as f64;
            let ratio = (mu_aff / mu).clamp(0.0, 1.0);
            let sigma = ratio * ratio * ratio;

            // corrector
            let zi_a = self.apply(&zi);
            let cross = dx_a.mul(&dz_a).mul(&zi);
            let cross_a = self.apply(&cross);
            let rhs: Vec<f64> = (0..self.a.len())
                .map(|k| base_rhs[k] - sigma * mu * zi_a[k] + cross_a[k])
                .collect();
            let extra = zi.scale(sigma * mu).sub(&cross);
            let (dx, dz, dy) = self.direction_full(&x, &zi, &rd, &lm, &rhs, Some(&extra));
            let ap = (0.95 * max_step(&lx, &dx)).min(1.0);
            let ad = (0.95 * max_step(&lz, &dz)).min(1.0);
            x = x.axpy(ap, &dx).symmetrize();
            z = z.axpy(ad, &dz).symmetrize();
            for (yk, d) in y.iter_mut().zip(&dy) {
                *yk += ad * d;
            }
        }
    }

    fn direction(
        &self,
        x: &Matrix,
        zi: &Matrix,
        rd: &Matrix,
        lm: &Matrix,
        rhs: &[f64],
        extra: Option<&Matrix>,
    ) -> (Matrix, Matrix) {
        let (dx, dz, _) = self.direction_full(x, zi, rd, lm, rhs, extra);
        (dx, dz)
    }

    /// `ΔZ = R_d − Aᵀ Δy`, `ΔX = extra − X − X ΔZ Z⁻¹` (symmetrised).
    fn direction_full(
        &self,
        x: &Matrix,
        zi: &Matrix,
        rd: &Matrix,
        lm: &Matrix,
        rhs: &[f64],
        extra: Option<&Matrix>,
    ) -> (Matrix, Matrix, Vec<f64>) {
        let dy = cholesky_solve(lm, rhs);
        let dz = rd.sub(&self.adjoint(&dy));
        let mut dx = x.mul(&dz).mul(zi).add(x).scale(-1.0);
        if let Some(e) = extra {
            dx = dx.add(e);
        }
        (dx.symmetrize(), dz, dy)
    }
}

/// Largest `α` with `X + α ΔX ⪰ 0`, given `X = L Lᵀ` (infinite when `ΔX ⪰ 0`).
fn max_step(l: &Matrix, d: &Matrix) -> f64 {
    let li = lower_inverse(l);
    let m = li.mul(d).mul(&li.transpose());
    let lmin = lambda_min(&m);
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_eigenvalue_sdp() {
        // min ⟨C, X⟩, tr X = 1 has value λ_min(C)
        let c = Matrix::from_fn(3, |i, j| [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]][i][j]);
        let want = lambda_min(&c);
        let p = SdpProblem {
            c: c.clone(),
            a: alloc::vec![SparseSym::identity(3)],
            b: alloc::vec![1.0],
        };
        let start = SdpState {
            x: Matrix::identity(3).scale(1.0 / 3.0),
            y: alloc::vec![0.0],
            z: c,
        };
        let s = p.solve(start, SdpOptions::default()).unwrap();
        assert!((s.primal_objective - want).abs() < 1e-8);
        assert!((s.dual_objective - want).abs() < 1e-8);
    }
}
