//! Numerical search for left-invariant Einstein metrics.
//!
//! The objective is the squared traceless Ricci tensor `|ric - (s/n) g|^2` on
//! the orthonormal frame of `g`, minimized by finite-difference gradient
//! descent with Armijo backtracking.
//!
//! Metrics are written `g = U^T U` with `U = D (1 + N)`, `D` positive
//! diagonal and `N` strictly upper triangular (zero for the diagonal family).
//! `log D^2` is restricted to the slice orthogonal to the scale direction
//! `(1, ..., 1)` and to the log-scales of diagonal automorphisms. Moving along
//! either of those only rescales or pulls back by an automorphism, so the
//! slice removes flat directions and keeps `det g = 1`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::almost_contact::{
    AlmostContactStructure, Classification, NormBounds, RatioBounds, RoughLaplacianIdentities,
};
use crate::error::{GeometryError, Result};
use crate::exterior::KForm;
use crate::lie_algebra::{LieAlgebra, Metric};
use crate::linalg;
use crate::riemannian::{ConnectionData, CurvatureData};

/// `|ric - (s/n) g|^2` on the orthonormal frame of `g`.
pub fn einstein_residual(algebra: &LieAlgebra, metric: &Metric) -> Result<f64> {
    let conn = ConnectionData::new(algebra, metric)?;
    let curv = CurvatureData::new(&conn);
    let n = curv.dimension();
    let traceless = curv.ricci() - DMatrix::identity(n, n) * (curv.scalar() / n as f64);
    Ok(linalg::frobenius_squared(&traceless))
}

/// Log-scale directions `u` with `u_i + u_j = u_k` whenever `c^k_{ij} != 0`.
/// `diag(exp(u/2))` is then an automorphism for every `u` in their span.
pub fn diagonal_automorphism_directions(algebra: &LieAlgebra) -> Vec<DVector<f64>> {
    let n = algebra.dimension();
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                if algebra.structure_constant(k, i, j) != 0.0 {
                    let mut r = DVector::zeros(n);
                    r[i] += 1.0;
                    r[j] += 1.0;
                    r[k] -= 1.0;
                    rows.push(r);
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(DVector::zeros(n));
    }
    let a = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
    linalg::null_space(&a, linalg::RANK_TOLERANCE)
}

/// Orthonormal basis (as columns) of the gauge slice in log-diagonal space.
pub fn gauge_slice(algebra: &LieAlgebra) -> DMatrix<f64> {
    let n = algebra.dimension();
    let mut span = diagonal_automorphism_directions(algebra);
    span.push(DVector::from_element(n, 1.0));
    let w = DMatrix::from_fn(span.len(), n, |r, c| span[r][c]);
    let basis = linalg::null_space(&w, linalg::RANK_TOLERANCE);
    let mut b = DMatrix::zeros(n, basis.len());
    for (i, v) in basis.iter().enumerate() {
        b.set_column(i, v);
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Diagonal,
    FullTriangular,
}

/// A point of a metric family with its parameter vector.
#[derive(Clone, Debug)]
pub struct MetricParameterization {
    kind: FamilyKind,
    dim: usize,
    slice: DMatrix<f64>,
    params: DVector<f64>,
}

impl MetricParameterization {
    /// The identity metric.
    pub fn identity(algebra: &LieAlgebra, kind: FamilyKind) -> Self {
        let slice = gauge_slice(algebra);
        let dim = algebra.dimension();
        let count = slice.ncols() + off_diagonal_count(kind, dim);
        MetricParameterization {
            kind,
            dim,
            slice,
            params: DVector::zeros(count),
        }
    }

    /// The family member closest to `metric`: the Cholesky factor is read off
    /// and `log D^2` projected onto the slice. For the diagonal family the
    /// off-diagonal part of `metric` is ignored.
    pub fn from_metric(algebra: &LieAlgebra, kind: FamilyKind, metric: &Metric) -> Result<Self> {
        let mut p = Self::identity(algebra, kind);
        if metric.dimension() != p.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: p.dim,
                found: metric.dimension(),
            });
        }
        let n = p.dim;
        let (log_d2, upper) = match kind {
            FamilyKind::Diagonal => (
                DVector::from_fn(n, |i, _| metric.matrix()[(i, i)].ln()),
                DMatrix::identity(n, n),
            ),
            FamilyKind::FullTriangular => {
                let chol = metric
                    .matrix()
                    .clone()
                    .cholesky()
                    .ok_or(GeometryError::MetricNotPositiveDefinite(f64::NAN))?;
                let u = chol.l().transpose();
                let d = DVector::from_fn(n, |i, _| u[(i, i)]);
                let unit = DMatrix::from_fn(n, n, |i, j| u[(i, j)] / d[i]);
                (d.map(|x| 2.0 * x.ln()), unit)
            }
        };
        let k = p.slice.ncols();
        let q = p.slice.transpose() * log_d2;
        p.params.rows_mut(0, k).copy_from(&q);
        if kind == FamilyKind::FullTriangular {
            let mut idx = k;
            for j in 0..n {
                for i in 0..j {
                    p.params[idx] = upper[(i, j)];
                    idx += 1;
                }
            }
        }
        Ok(p)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &DVector<f64> {
        &self.params
    }

    /// Basis of the log-diagonal slice (columns).
    pub fn slice(&self) -> &DMatrix<f64> {
        &self.slice
    }

    pub fn set_params(&mut self, params: DVector<f64>) {
        assert_eq!(params.len(), self.params.len());
        self.params = params;
    }

    pub fn metric(&self) -> Result<Metric> {
        self.metric_at(&self.params)
    }

    /// The metric at an arbitrary parameter vector, normalized to `det = 1`.
    pub fn metric_at(&self, params: &DVector<f64>) -> Result<Metric> {
        let n = self.dim;
        let k = self.slice.ncols();
        let log_d2 = &self.slice * params.rows(0, k);
        let mut u = DMatrix::<f64>::identity(n, n);
        if self.kind == FamilyKind::FullTriangular {
            let mut idx = k;
            for j in 0..n {
                for i in 0..j {
                    u[(i, j)] = params[idx];
                    idx += 1;
                }
            }
        }
        for i in 0..n {
            let d = (0.5 * log_d2[i]).exp();
            for j in 0..n {
                u[(i, j)] *= d;
            }
        }
        let mut g = u.transpose() * &u;
        g = (&g + g.transpose()) * 0.5;
        if !g.iter().all(|x| x.is_finite()) {
            return Err(GeometryError::MetricNotPositiveDefinite(f64::NAN));
        }
        let det = g.determinant();
        if !(det > 0.0) {
            return Err(GeometryError::MetricNotPositiveDefinite(det));
        }
        g /= det.powf(1.0 / n as f64);
        Metric::new(g)
    }
}

fn off_diagonal_count(kind: FamilyKind, n: usize) -> usize {
    match kind {
        FamilyKind::Diagonal => 0,
        FamilyKind::FullTriangular => n * (n - 1) / 2,
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_iterations: usize,
    /// Central-difference step relative to `max(1, |q_i|)`.
    pub relative_step: f64,
    pub armijo: f64,
    pub backtracking: f64,
    pub max_halvings: usize,
    pub residual_tolerance: f64,
    pub gradient_tolerance: f64,
    pub seed: u64,
    /// Number of restarts for [`multi_start`].
    pub starts: usize,
    /// Relative size of the random start perturbation.
    pub perturbation: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_iterations: 2000,
            relative_step: 1e-6,
            armijo: 1e-4,
            backtracking: 0.5,
            max_halvings: 60,
            residual_tolerance: 1e-10,
            gradient_tolerance: 1e-8,
            seed: 0,
            starts: 8,
            perturbation: 0.1,
        }
    }
}

impl SearchConfig {
    fn check(&self) -> Result<()> {
        let positive = [
            self.relative_step,
            self.armijo,
            self.backtracking,
            self.residual_tolerance,
            self.gradient_tolerance,
        ];
        if positive.iter().any(|x| !(*x > 0.0)) || self.backtracking >= 1.0 {
            return Err(GeometryError::InvalidInput(
                "search tolerances must be positive and the backtracking factor below 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    /// Residual at or below the residual tolerance.
    Converged,
    /// Gradient at or below the gradient tolerance with a nonzero residual.
    Stationary,
    MaxIterations,
    /// Backtracking found no acceptable step.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub parameterization: MetricParameterization,
    pub metric: Metric,
    pub residual: f64,
    pub initial_residual: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    /// Residual after every accepted step, starting with the initial value.
    pub trace: Vec<f64>,
    pub status: SearchStatus,
}

fn objective(algebra: &LieAlgebra, p: &MetricParameterization, q: &DVector<f64>) -> Option<f64> {
    let g = p.metric_at(q).ok()?;
    einstein_residual(algebra, &g).ok().filter(|r| r.is_finite())
}

fn gradient(
    algebra: &LieAlgebra,
    p: &MetricParameterization,
    q: &DVector<f64>,
    rel: f64,
) -> Option<DVector<f64>> {
    let mut grad = DVector::zeros(q.len());
    for i in 0..q.len() {
        let h = rel * q[i].abs().max(1.0);
        let mut plus = q.clone();
        plus[i] += h;
        let mut minus = q.clone();
        minus[i] -= h;
        grad[i] = (objective(algebra, p, &plus)? - objective(algebra, p, &minus)?) / (2.0 * h);
    }
    Some(grad)
}

/// Gradient descent from the current point of `start`.
pub fn minimize(
    algebra: &LieAlgebra,
    start: &MetricParameterization,
    config: &SearchConfig,
) -> Result<SearchResult> {
    config.check()?;
    if start.dimension() != algebra.dimension() {
        return Err(GeometryError::DimensionMismatch {
            expected: algebra.dimension(),
            found: start.dimension(),
        });
    }
    let mut q = start.params().clone();
    let mut f = einstein_residual(algebra, &start.metric()?)?;
    let initial = f;
    let mut trace = vec![f];
    let mut step = 1.0;
    let mut grad_norm = f64::NAN;
    let mut iterations = 0;
    let status = loop {
        if f <= config.residual_tolerance {
            break SearchStatus::Converged;
        }
        let Some(grad) = gradient(algebra, start, &q, config.relative_step) else {
            break SearchStatus::Stalled;
        };
        grad_norm = grad.norm();
        if grad_norm <= config.gradient_tolerance {
            break SearchStatus::Stationary;
        }
        if iterations >= config.max_iterations {
            break SearchStatus::MaxIterations;
        }
        // let the step grow again after a run of short ones
        step = (step / config.backtracking).min(1e6);
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let cand = &q - &grad * step;
            if let Some(fc) = objective(algebra, start, &cand) {
                if fc <= f - config.armijo * step * grad_norm * grad_norm {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            step *= config.backtracking;
        }
        let Some((cand, fc)) = accepted else {
            break SearchStatus::Stalled;
        };
        q = cand;
        f = fc;
        trace.push(f);
        iterations += 1;
    };
    let mut parameterization = start.clone();
    parameterization.set_params(q);
    let metric = parameterization.metric()?;
    Ok(SearchResult {
        parameterization,
        metric,
        residual: f,
        initial_residual: initial,
        gradient_norm: grad_norm,
        iterations,
        trace,
        status,
    })
}

/// A start near the identity: diagonal entries scaled by `1 + U(-a, a)` and,
/// for the full family, off-diagonal entries `U(-a, a)`.
pub fn perturbed_start<R: Rng + ?Sized>(
    algebra: &LieAlgebra,
    kind: FamilyKind,
    amplitude: f64,
    rng: &mut R,
) -> Result<MetricParameterization> {
    let n = algebra.dimension();
    let mut g = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        g[(i, i)] *= 1.0 + rng.random_range(-amplitude..=amplitude);
        if kind == FamilyKind::FullTriangular {
            for j in 0..i {
                let e = rng.random_range(-amplitude..=amplitude);
                g[(i, j)] = e;
                g[(j, i)] = e;
            }
        }
    }
    MetricParameterization::from_metric(algebra, kind, &Metric::new(g)?)
}

#[derive(Clone, Debug)]
pub struct MultiStart {
    pub runs: Vec<SearchResult>,
    /// Index of the run with the smallest residual.
    pub best: usize,
}

impl MultiStart {
    pub fn best(&self) -> &SearchResult {
        &self.runs[self.best]
    }

    pub fn converged(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.status == SearchStatus::Converged)
            .count()
    }
}

/// `config.starts` independent runs from perturbed identities; run `i` uses
/// the seed `config.seed + i`.
pub fn multi_start(algebra: &LieAlgebra, kind: FamilyKind, config: &SearchConfig) -> Result<MultiStart> {
    if config.starts == 0 {
        return Err(GeometryError::InvalidInput("at least one start is required".into()));
    }
    let runs = (0..config.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64));
            let start = perturbed_start(algebra, kind, config.perturbation, &mut rng)?;
            minimize(algebra, &start, config)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.residual.total_cmp(&b.1.residual))
        .map(|(i, _)| i)
        .expect("nonempty");
    Ok(MultiStart { runs, best })
}

/// Checks run on a candidate almost contact metric structure.
#[derive(Clone, Debug, Serialize)]
pub struct ContactVerification {
    pub classification: Classification,
    pub tau_star: f64,
    pub nabla_alpha_squared: f64,
    pub nabla_omega_squared: f64,
    pub rough_laplacian: Option<RoughLaplacianIdentities>,
    pub norm_bounds: Option<NormBounds>,
    pub ratio: Option<RatioBounds>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub residual: f64,
    /// `max |ric - (s/n) g|` on the orthonormal frame.
    pub einstein_deviation: f64,
    pub einstein_constant: Option<f64>,
    pub scalar_curvature: f64,
    pub unimodular: bool,
    pub ad_traces: Vec<f64>,
    /// Dimension of the space of parallel invariant 2-forms.
    pub parallel_two_forms: usize,
    pub contact: Option<ContactVerification>,
    pub tolerance: f64,
}

/// Einstein check plus, when `(alpha, omega)` is supplied, classification and
/// the Einstein identities and bounds of the almost contact structure.
pub fn verify_candidate(
    algebra: &LieAlgebra,
    metric: &Metric,
    contact: Option<(&KForm, &KForm)>,
    tol: f64,
) -> Result<CandidateReport> {
    let conn = ConnectionData::new(algebra, metric)?;
    let curv = CurvatureData::new(&conn);
    let n = curv.dimension();
    let traceless = curv.ricci() - DMatrix::identity(n, n) * (curv.scalar() / n as f64);
    let uni = algebra.unimodularity(tol);
    let contact = match contact {
        None => None,
        Some((alpha, omega)) => {
            let s = AlmostContactStructure::build_with_tolerance(algebra, metric, alpha, omega, tol)?;
            Some(ContactVerification {
                classification: s.classify(tol),
                tau_star: s.star_ricci().tau_star,
                nabla_alpha_squared: s.nabla_alpha_squared(),
                nabla_omega_squared: s.nabla_omega_squared(),
                rough_laplacian: s.rough_laplacian_identities(tol).ok(),
                norm_bounds: s.norm_bounds(tol).ok(),
                ratio: s.ratio_bounds(tol).ok(),
            })
        }
    };
    Ok(CandidateReport {
        residual: linalg::frobenius_squared(&traceless),
        einstein_deviation: linalg::max_abs(&traceless),
        einstein_constant: curv.einstein_constant(tol),
        scalar_curvature: curv.scalar(),
        unimodular: uni.unimodular,
        ad_traces: uni.traces,
        parallel_two_forms: conn.parallel_forms(2).len(),
        contact,
        tolerance: tol,
    })
}
