//! Spectral points of confusability graphs.
//!
//! [`SpectralPointId::Lovasz`] and [`SpectralPointId::FracCliqueCover`] are
//! spectral points: additive under disjoint union, multiplicative under the
//! strong product, monotone under cohomomorphisms and equal to `d` on the
//! edgeless graph with `d` vertices. [`SpectralPointId::Alpha`] is included
//! as a lower bound on all of them.
//!
//! Every evaluator first checks whether `≃` is transitive. On such cluster
//! graphs each of the parameters equals the number of clusters, which is
//! returned without solving anything.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::cliques::{chromatic_number_masks, complement_masks, maximal_cliques, max_independent_set};
use crate::error::{cap_check, Error, Result};
use crate::graph::Graph;
use crate::linalg::{lambda_max, lambda_min, Matrix};
use crate::lp::{rational, solve_max, Scalar};
use crate::sdp::{SdpOptions, SdpProblem, SdpState, SparseSym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectralPointId {
    Alpha,
    Lovasz,
    FracCliqueCover,
}

impl SpectralPointId {
    pub const ALL: [SpectralPointId; 3] = [
        SpectralPointId::Alpha,
        SpectralPointId::Lovasz,
        SpectralPointId::FracCliqueCover,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            SpectralPointId::Alpha => "alpha",
            SpectralPointId::Lovasz => "theta",
            SpectralPointId::FracCliqueCover => "fcc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "alpha" => Some(SpectralPointId::Alpha),
            "theta" | "lovasz" => Some(SpectralPointId::Lovasz),
            "fcc" | "frac-clique-cover" => Some(SpectralPointId::FracCliqueCover),
            _ => None,
        }
    }

    /// Whether the id is a spectral point (α is only a lower bound).
    pub fn is_spectral_point(self) -> bool {
        self != SpectralPointId::Alpha
    }
}

impl core::fmt::Display for SpectralPointId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverTag {
    /// Closed form on cluster graphs.
    Clusters,
    BranchAndBound,
    InteriorPoint,
    Simplex,
    ExactSimplex,
    VertexTransitive,
}

impl SolverTag {
    pub fn name(self) -> &'static str {
        match self {
            SolverTag::Clusters => "clusters",
            SolverTag::BranchAndBound => "branch-and-bound",
            SolverTag::InteriorPoint => "interior-point",
            SolverTag::Simplex => "simplex",
            SolverTag::ExactSimplex => "exact-simplex",
            SolverTag::VertexTransitive => "vertex-transitive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub value: f64,
    /// Width of the certified interval around `value` (upper − lower).
    pub certified_gap: f64,
    pub iterations: usize,
    pub solver: SolverTag,
    /// Dual certificate, when the solver has one: a fractional independent
    /// set for χ̄_f (per vertex).
    pub dual: Option<Vec<f64>>,
}

impl SolveReport {
    fn exact(value: f64, solver: SolverTag) -> Self {
        SolveReport {
            value,
            certified_gap: 0.0,
            iterations: 0,
            solver,
            dual: None,
        }
    }
}

/// Vertex cap for the Lovász number.
pub const THETA_CAP: usize = 200;
/// Vertex cap for the exact clique cover number.
pub const CLIQUE_COVER_CAP: usize = 40;
/// Certified additive gap required of the Lovász number.
pub const THETA_GAP: f64 = 1e-6;
/// Relative gap of the floating-point χ̄_f solve before the exact fallback.
pub const FCC_REL_GAP: f64 = 1e-9;

fn cluster_count(g: &Graph) -> Option<usize> {
    g.cluster_ids().map(|ids| ids.iter().max().map_or(0, |m| m + 1))
}

/// Independence number (largest set of pairwise distinguishable letters).
pub fn alpha(g: &Graph) -> Result<usize> {
    if let Some(k) = cluster_count(g) {
        return Ok(k);
    }
    Ok(max_independent_set(g)?.len())
}

/// Lovász number `ϑ(g)` with a certified bracket.
pub fn lovasz_theta(g: &Graph) -> Result<SolveReport> {
    if let Some(k) = cluster_count(g) {
        return Ok(SolveReport::exact(k as f64, SolverTag::Clusters));
    }
    cap_check("Lovász number vertex count", g.n() as u128, THETA_CAP as u128)?;
    let n = g.n();
    let edges = g.edges();
    let non_edges = g.complement().edges();
    let opts = SdpOptions::default();
    let (lower, upper, iterations) = if edges.len() < n + non_edges.len() - 1 {
        // max ⟨J, X⟩, tr X = 1, X_ij = 0 on edges
        let mut a = vec![SparseSym::identity(n)];
        let mut b = vec![1.0];
        for &(i, j) in &edges {
            a.push(SparseSym::pair(i, j, 1.0));
            b.push(0.0);
        }
        let problem = SdpProblem {
            c: Matrix::from_fn(n, |_, _| -1.0),
            a,
            b,
        };
        let mut y = vec![0.0; problem.a.len()];
        y[0] = -(n as f64 + 1.0);
        let start = SdpState {
            x: Matrix::identity(n).scale(1.0 / n as f64),
            y,
            z: Matrix::from_fn(n, |i, j| if i == j { n as f64 } else { -1.0 }),
        };
        let sol = problem.solve(start, opts)?;
        let lower = packing_lower_bound(g, &sol.state.x);
        let mut am = Matrix::from_fn(n, |_, _| 1.0);
        for (e, &(i, j)) in edges.iter().enumerate() {
            am[(i, j)] = 1.0 + sol.state.y[e + 1];
            am[(j, i)] = am[(i, j)];
        }
        (lower, lambda_max(&am), sol.iterations)
    } else {
        // min t with Y = tI − A ⪰ 0, A_ii = 1 and A_ij = 1 on non-edges
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n - 1 {
            a.push(SparseSym {
                entries: vec![(i, i, 1.0), (i + 1, i + 1, -1.0)],
            });
            b.push(0.0);
        }
        for &(i, j) in &non_edges {
            a.push(SparseSym::pair(i, j, 1.0));
            b.push(-2.0);
        }
        let problem = SdpProblem {
            c: Matrix::identity(n).scale(1.0 / n as f64),
            a,
            b,
        };
        let mut x = Matrix::identity(n).scale(n as f64);
        for &(i, j) in &non_edges {
            x[(i, j)] = -1.0;
            x[(j, i)] = -1.0;
        }
        let start = SdpState {
            x,
            y: vec![0.0; problem.a.len()],
            z: Matrix::identity(n).scale(1.0 / n as f64),
        };
        let sol = problem.solve(start, opts)?;
        let lower = packing_lower_bound(g, &sol.state.z);
        let am = Matrix::from_fn(n, |i, j| {
            if i == j || !g.adjacent(i, j) {
                1.0
            } else {
                -sol.state.x[(i, j)]
            }
        });
        (lower, lambda_max(&am), sol.iterations)
    };
    let gap = (upper - lower).max(0.0);
    if gap > THETA_GAP {
        return Err(Error::SolverDiverged(format!(
            "Lovász bracket [{lower}, {upper}] wider than {THETA_GAP}"
        )));
    }
    Ok(SolveReport {
        value: 0.5 * (lower + upper),
        certified_gap: gap,
        iterations,
        solver: SolverTag::InteriorPoint,
        dual: None,
    })
}

/// `⟨J, B⟩ / tr B` for `B` the symmetric part of `m`, zeroed on edges and
/// shifted to be positive semidefinite: a feasible point of the maximisation.
fn packing_lower_bound(g: &Graph, m: &Matrix) -> f64 {
    let n = g.n();
    let mut b = m.symmetrize();
    for (i, j) in g.edges() {
        b[(i, j)] = 0.0;
        b[(j, i)] = 0.0;
    }
    let lmin = lambda_min(&b);
    if lmin < 0.0 {
        b = b.add(&Matrix::identity(n).scale(-lmin));
    }
    let tr = b.trace();
    if tr <= 0.0 {
        return 1.0;
    }
    b.sum() / tr
}

/// Fractional clique cover number over the maximal cliques of `g`.
pub fn frac_clique_cover(g: &Graph) -> Result<SolveReport> {
    if let Some(k) = cluster_count(g) {
        return Ok(SolveReport::exact(k as f64, SolverTag::Clusters));
    }
    let cliques = maximal_cliques(g)?;
    frac_clique_cover_from_cliques(g.n(), &cliques)
}

/// χ̄_f from an explicit clique list that contains every maximal clique
/// (non-maximal extra cliques do not change the value).
///
/// Solves the packing LP `max Σ w, Σ_{x∈C} w_x ≤ 1`; the covering
/// solution comes from the duals. Both are rescaled to exact feasibility,
/// which brackets the value; if the bracket is wider than
/// [`FCC_REL_GAP`] relative, the LP is re-solved in exact arithmetic.
pub fn frac_clique_cover_from_cliques(n: usize, cliques: &[Vec<usize>]) -> Result<SolveReport> {
    if n == 0 {
        return Ok(SolveReport::exact(0.0, SolverTag::Clusters));
    }
    let a: Vec<Vec<f64>> = cliques
        .iter()
        .map(|c| {
            let mut row = vec![0.0; n];
            for &v in c {
                row[v] = 1.0;
            }
            row
        })
        .collect();
    if let Some(v) = (0..n).find(|&v| a.iter().all(|row| row[v] == 0.0)) {
        return Err(Error::InvalidArgument(format!("vertex {v} lies in no listed clique")));
    }
    let sol = solve_max(&a, &vec![1.0; cliques.len()], &vec![1.0; n])?;
    let w: Vec<f64> = sol.x.iter().map(|v| v.max(0.0)).collect();
    let load = cliques
        .iter()
        .map(|c| c.iter().map(|&v| w[v]).sum::<f64>())
        .fold(0.0, f64::max);
    let lower = if load > 0.0 { w.iter().sum::<f64>() / load } else { 0.0 };
    let y: Vec<f64> = sol.y.iter().map(|v| v.max(0.0)).collect();
    let mut cover = vec![0.0; n];
    for (c, &yc) in cliques.iter().zip(&y) {
        for &v in c {
            cover[v] += yc;
        }
    }
    let min_cover = cover.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = if min_cover > 0.0 {
        y.iter().sum::<f64>() / min_cover
    } else {
        f64::INFINITY
    };
    if upper - lower <= FCC_REL_GAP * upper {
        let dual = w.iter().map(|v| v / load).collect();
        return Ok(SolveReport {
            value: 0.5 * (lower + upper),
            certified_gap: upper - lower,
            iterations: sol.pivots,
            solver: SolverTag::Simplex,
            dual: Some(dual),
        });
    }
    let aq: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|&v| rational(v as i64)).collect())
        .collect();
    let exact = solve_max(&aq, &vec![rational(1); cliques.len()], &vec![rational(1); n])?;
    Ok(SolveReport {
        value: exact.objective.to_f64(),
        certified_gap: 0.0,
        iterations: exact.pivots,
        solver: SolverTag::ExactSimplex,
        dual: Some(exact.x.iter().map(Scalar::to_f64).collect()),
    })
}

/// Clique cover number (chromatic number of the complement).
pub fn clique_cover_number(g: &Graph) -> Result<usize> {
    if let Some(k) = cluster_count(g) {
        return Ok(k);
    }
    cap_check("clique cover vertex count", g.n() as u128, CLIQUE_COVER_CAP as u128)?;
    let fcc = frac_clique_cover(g)?;
    let lower = crate::math::ceil(fcc.value - fcc.certified_gap - 1e-9) as usize;
    Ok(chromatic_number_masks(&complement_masks(g), lower))
}

/// Value of a spectral point (α as a real).
pub fn evaluate(id: SpectralPointId, g: &Graph) -> Result<f64> {
    Ok(evaluate_report(id, g)?.value)
}

pub fn evaluate_report(id: SpectralPointId, g: &Graph) -> Result<SolveReport> {
    match id {
        SpectralPointId::Alpha => {
            let tag = if g.is_cluster() {
                SolverTag::Clusters
            } else {
                SolverTag::BranchAndBound
            };
            Ok(SolveReport::exact(alpha(g)? as f64, tag))
        }
        SpectralPointId::Lovasz => lovasz_theta(g),
        SpectralPointId::FracCliqueCover => frac_clique_cover(g),
    }
}
