//! Almost contact metric structures `(alpha, omega, g)` on odd-dimensional
//! Lie algebras: Reeb field, `phi`, classification and the `*`-Ricci data.
//!
//! Conventions: `omega(X, Y) = g(phi X, Y)`, so `omega = e^{12}` gives
//! `phi e_1 = e_2`. Curvature quantities live on the orthonormal frame of `g`
//! (see [`crate::riemannian`]).

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::exterior::{hodge_star, KForm, Orientation};
use crate::lie_algebra::{LieAlgebra, Metric, DEFAULT_TOLERANCE};
use crate::linalg;
use crate::riemannian::{ConnectionData, CurvatureData, KillingReport};

/// Classification of a triple `(alpha, omega, g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "not-almost-contact-metric")]
    NotAlmostContactMetric,
    #[serde(rename = "almost-contact-metric")]
    AlmostContactMetric,
    #[serde(rename = "almost-cokähler")]
    AlmostCokahler,
    #[serde(rename = "cokähler")]
    Cokahler,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::NotAlmostContactMetric => "not-almost-contact-metric",
            Classification::AlmostContactMetric => "almost-contact-metric",
            Classification::AlmostCokahler => "almost-cokähler",
            Classification::Cokahler => "cokähler",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Residuals of the defining identities of an almost contact metric structure.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityResiduals {
    /// `|alpha(xi) - 1|`
    pub alpha_of_reeb: f64,
    /// `max |ι_xi omega|`
    pub reeb_in_kernel: f64,
    /// `max |phi^2 + id - xi ⊗ alpha|`
    pub phi_squared: f64,
    /// `max |g(phi., phi.) - g + alpha ⊗ alpha|`
    pub metric: f64,
}

impl CompatibilityResiduals {
    pub fn max(&self) -> f64 {
        self.alpha_of_reeb
            .max(self.reeb_in_kernel)
            .max(self.phi_squared)
            .max(self.metric)
    }
}

/// The `*`-Ricci form and its relatives.
#[derive(Clone, Debug)]
pub struct StarRicci {
    /// `rho*(X, Y) = sum_i <R(X, e_i) phi e_i, Y>` as a matrix on the frame.
    pub matrix: DMatrix<f64>,
    /// Antisymmetric part of `matrix` as a 2-form on the orthonormal coframe.
    pub form: KForm,
    /// `ric*(X, Y) = omega(sum_i R(X, e_i) phi e_i, Y)`.
    pub ric_star: DMatrix<f64>,
    /// `<omega, rho*> / n`.
    pub tau_star: f64,
    /// `max |rho* + rho*^T|`; a diagnostic, not an assumption.
    pub antisymmetry: f64,
}

/// Residuals `|∇*∇alpha + tau alpha|` and `|∇*∇omega - 2(rho* - tau omega)|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoughLaplacianIdentities {
    pub tau: f64,
    pub alpha_residual: f64,
    pub omega_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Norms of `∇alpha` and `∇omega` against their Einstein predictions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormBounds {
    pub minus_tau: f64,
    pub nabla_alpha_squared: f64,
    /// `2n(tau* - tau)`
    pub star_gap: f64,
    pub nabla_omega_squared: f64,
    /// `|∇alpha|^2 = -tau`
    pub alpha_identity: bool,
    /// `|∇omega|^2 = 2n(tau* - tau)`
    pub omega_identity: bool,
    /// `0 <= -tau <= 2n(tau* - tau)`
    pub inequality: bool,
    /// Both sides of the inequality agree.
    pub equality: bool,
    pub tolerance: f64,
}

/// Sign regime of the Einstein constant for the ratio bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioCase {
    /// `tau < 0`: the ratio `(tau - tau*)/tau` is bounded.
    NegativeEinstein,
    /// `tau = 0`: a compact example would have to be cokähler.
    RicciFlat,
    /// `tau > 0`: impossible for an Einstein almost cokähler structure.
    Contradiction,
}

/// `(tau - tau*)/tau` against `[1/(2n), (4n - 1 + sqrt(16n^2 - 8n - 14))/(10n)]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioBounds {
    pub case: RatioCase,
    pub ratio: Option<f64>,
    pub lower: f64,
    pub upper: Option<f64>,
    pub in_interval: Option<bool>,
    pub at_lower_endpoint: Option<bool>,
    pub note: Option<String>,
}

/// The ratio bounds for half-dimension `n`; `tol` is the slack for interval
/// membership.
pub fn ratio_bounds(tau: f64, tau_star: f64, n: usize, tol: f64) -> RatioBounds {
    let nf = n as f64;
    let lower = 1.0 / (2.0 * nf);
    let disc = 16.0 * nf * nf - 8.0 * nf - 14.0;
    let (upper, mut note) = if disc >= 0.0 {
        (Some((4.0 * nf - 1.0 + disc.sqrt()) / (10.0 * nf)), None)
    } else {
        (None, Some(format!("upper bound not real for n={n}")))
    };
    if tau.abs() <= tol {
        return RatioBounds {
            case: RatioCase::RicciFlat,
            ratio: None,
            lower,
            upper,
            in_interval: None,
            at_lower_endpoint: None,
            note: Some("tau = 0: expect tau* = 0 and a cokähler structure".into()),
        };
    }
    if tau > 0.0 {
        return RatioBounds {
            case: RatioCase::Contradiction,
            ratio: Some((tau - tau_star) / tau),
            lower,
            upper,
            in_interval: None,
            at_lower_endpoint: None,
            note: Some("tau > 0 contradicts 0 <= -tau".into()),
        };
    }
    let ratio = (tau - tau_star) / tau;
    let above = ratio >= lower - tol;
    let below = upper.is_none_or(|u| ratio <= u + tol);
    if !above {
        note.get_or_insert_with(|| "ratio below the lower bound".into());
    }
    RatioBounds {
        case: RatioCase::NegativeEinstein,
        ratio: Some(ratio),
        lower,
        upper,
        in_interval: Some(above && below),
        at_lower_endpoint: Some((ratio - lower).abs() <= tol),
        note,
    }
}

/// Outcome of the closed-and-Killing check on the Reeb field.
#[derive(Clone, Debug)]
pub struct ReebKillingReport {
    pub killing: KillingReport,
    pub alpha_closed: bool,
    /// `max |∇alpha|` over frame components.
    pub nabla_alpha_max: f64,
    /// `dalpha = 0` and Killing imply `∇alpha = 0`; vacuous otherwise.
    pub implication_holds: bool,
}

/// An almost contact metric structure with its connection and curvature.
#[derive(Clone, Debug)]
pub struct AlmostContactStructure {
    algebra: LieAlgebra,
    metric: Metric,
    alpha: KForm,
    omega: KForm,
    n: usize,
    conn: ConnectionData,
    curv: CurvatureData,
    alpha_frame: KForm,
    omega_frame: KForm,
    reeb_frame: DVector<f64>,
    phi_frame: DMatrix<f64>,
    residuals: CompatibilityResiduals,
}

impl AlmostContactStructure {
    /// Builds the structure, checking compatibility to [`DEFAULT_TOLERANCE`].
    pub fn build(algebra: &LieAlgebra, metric: &Metric, alpha: &KForm, omega: &KForm) -> Result<Self> {
        Self::build_with_tolerance(algebra, metric, alpha, omega, DEFAULT_TOLERANCE)
    }

    pub fn build_with_tolerance(
        algebra: &LieAlgebra,
        metric: &Metric,
        alpha: &KForm,
        omega: &KForm,
        tol: f64,
    ) -> Result<Self> {
        let dim = algebra.dimension();
        if dim.is_multiple_of(2) {
            return Err(GeometryError::EvenDimension(dim));
        }
        for f in [alpha, omega] {
            if f.dimension() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: f.dimension(),
                });
            }
        }
        if alpha.degree() != 1 {
            return Err(GeometryError::DegreeMismatch { left: 1, right: alpha.degree() });
        }
        if omega.degree() != 2 {
            return Err(GeometryError::DegreeMismatch { left: 2, right: omega.degree() });
        }
        let n = (dim - 1) / 2;
        let conn = ConnectionData::new(algebra, metric)?;
        let alpha_frame = conn.form_to_frame(alpha);
        let omega_frame = conn.form_to_frame(omega);

        // alpha ^ omega^n on the orthonormal coframe; equals ±n! when compatible
        let top = alpha_frame.wedge(&omega_frame.power(n)?)?;
        let top_value = top.max_abs();
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        let scale = alpha_frame.max_abs() * omega_frame.max_abs().powi(n as i32) * factorial;
        if !(top_value > tol * scale.max(1.0)) {
            return Err(GeometryError::NotAlmostContact(top_value));
        }

        // xi spans ker omega, normalized by alpha(xi) = 1
        let w = omega_frame.to_matrix();
        let kernel = linalg::null_space(&w, linalg::RANK_TOLERANCE);
        if kernel.len() != 1 {
            return Err(GeometryError::NotAlmostContact(top_value));
        }
        let a = alpha_frame.to_vector();
        let k = &kernel[0];
        let reeb_frame = k / a.dot(k);

        let phi_frame = w.transpose();
        let id = DMatrix::<f64>::identity(dim, dim);
        let xi_alpha = &reeb_frame * a.transpose();
        let residuals = CompatibilityResiduals {
            alpha_of_reeb: (a.dot(&reeb_frame) - 1.0).abs(),
            reeb_in_kernel: (w.transpose() * &reeb_frame).abs().max(),
            phi_squared: linalg::max_abs(&(&phi_frame * &phi_frame + &id - &xi_alpha)),
            metric: linalg::max_abs(&(phi_frame.transpose() * &phi_frame - &id + &a * a.transpose())),
        };
        if !(residuals.max() <= tol) {
            return Err(GeometryError::IncompatibleMetric(residuals.max()));
        }
        let curv = CurvatureData::new(&conn);
        Ok(AlmostContactStructure {
            algebra: algebra.clone(),
            metric: metric.clone(),
            alpha: alpha.clone(),
            omega: omega.clone(),
            n,
            conn,
            curv,
            alpha_frame,
            omega_frame,
            reeb_frame,
            phi_frame,
            residuals,
        })
    }

    /// Half-dimension: the algebra has dimension `2n + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        2 * self.n + 1
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// `alpha` in the input basis.
    pub fn alpha(&self) -> &KForm {
        &self.alpha
    }

    /// `omega` in the input basis.
    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    /// `alpha` on the orthonormal coframe.
    pub fn alpha_frame(&self) -> &KForm {
        &self.alpha_frame
    }

    /// `omega` on the orthonormal coframe.
    pub fn omega_frame(&self) -> &KForm {
        &self.omega_frame
    }

    pub fn connection(&self) -> &ConnectionData {
        &self.conn
    }

    pub fn curvature(&self) -> &CurvatureData {
        &self.curv
    }

    /// Reeb vector in the input basis.
    pub fn reeb(&self) -> DVector<f64> {
        self.conn.vector_from_frame(self.reeb_frame.as_slice())
    }

    /// Reeb vector on the orthonormal frame.
    pub fn reeb_frame(&self) -> &DVector<f64> {
        &self.reeb_frame
    }

    /// `phi` on the orthonormal frame (column `b` is `phi f_b`).
    pub fn phi_frame(&self) -> &DMatrix<f64> {
        &self.phi_frame
    }

    /// `phi` in the input basis.
    pub fn phi(&self) -> DMatrix<f64> {
        let p = self.conn.frame();
        let p_inv = p.clone().try_inverse().expect("frame is invertible");
        p * &self.phi_frame * p_inv
    }

    pub fn compatibility(&self) -> &CompatibilityResiduals {
        &self.residuals
    }

    /// `max(|dalpha|, |domega|)`.
    pub fn closedness(&self) -> f64 {
        let da = self.algebra.ce_differential(&self.alpha).expect("dimension checked");
        let dw = self.algebra.ce_differential(&self.omega).expect("dimension checked");
        da.max_abs().max(dw.max_abs())
    }

    /// `max(|∇alpha|, |∇omega|)` over frame components.
    pub fn parallelism(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for f in [&self.alpha_frame, &self.omega_frame] {
            for d in self.conn.covariant_derivative(f) {
                worst = worst.max(d.max_abs());
            }
        }
        worst
    }

    pub fn classify(&self, tol: f64) -> Classification {
        if self.closedness() > tol {
            Classification::AlmostContactMetric
        } else if self.parallelism() > tol {
            Classification::AlmostCokahler
        } else {
            Classification::Cokahler
        }
    }

    pub fn einstein_constant(&self, tol: f64) -> Option<f64> {
        self.curv.einstein_constant(tol)
    }

    /// `|∇alpha|^2`.
    pub fn nabla_alpha_squared(&self) -> f64 {
        self.conn.nabla_norm_squared(&self.alpha_frame)
    }

    /// `|∇omega|^2`.
    pub fn nabla_omega_squared(&self) -> f64 {
        self.conn.nabla_norm_squared(&self.omega_frame)
    }

    /// `rho*`, `ric*` and `tau*`.
    pub fn star_ricci(&self) -> StarRicci {
        let dim = self.dimension();
        let mut v = DMatrix::zeros(dim, dim);
        // row a holds V_a = sum_i R(f_a, f_i) phi f_i
        for a in 0..dim {
            let mut va = DVector::zeros(dim);
            for i in 0..dim {
                let phi_i = self.phi_frame.column(i);
                va += self.curv.endomorphism(a, i) * phi_i;
            }
            v.row_mut(a).copy_from(&va.transpose());
        }
        let w = self.omega_frame.to_matrix();
        let ric_star = &v * &w;
        let form = KForm::from_bilinear(&v);
        let tau_star = self.omega_frame.dot(&form) / self.n as f64;
        StarRicci {
            antisymmetry: linalg::max_abs(&(&v + v.transpose())),
            matrix: v,
            form,
            ric_star,
            tau_star,
        }
    }

    fn require_einstein(&self, tol: f64) -> Result<f64> {
        self.curv
            .einstein_constant(tol)
            .ok_or_else(|| GeometryError::NotEinstein(self.curv.einstein_deviation()))
    }

    /// Residuals of `∇*∇alpha = -tau alpha` and `∇*∇omega = 2(rho* - tau omega)`.
    pub fn rough_laplacian_identities(&self, tol: f64) -> Result<RoughLaplacianIdentities> {
        let tau = self.require_einstein(tol)?;
        let rho = self.star_ricci().form;
        let la = self.conn.rough_laplacian(&self.alpha_frame);
        let lw = self.conn.rough_laplacian(&self.omega_frame);
        let alpha_residual = la.max_abs_diff(&(&self.alpha_frame * -tau));
        let omega_residual = lw.max_abs_diff(&((&rho - &(&self.omega_frame * tau)) * 2.0));
        Ok(RoughLaplacianIdentities {
            tau,
            alpha_residual,
            omega_residual,
            tolerance: tol,
            passed: alpha_residual <= tol && omega_residual <= tol,
        })
    }

    /// `|∇alpha|^2 = -tau`, `|∇omega|^2 = 2n(tau* - tau)` and
    /// `0 <= -tau <= 2n(tau* - tau)`.
    pub fn norm_bounds(&self, tol: f64) -> Result<NormBounds> {
        let tau = self.require_einstein(tol)?;
        let tau_star = self.star_ricci().tau_star;
        let na = self.nabla_alpha_squared();
        let nw = self.nabla_omega_squared();
        let gap = 2.0 * self.n as f64 * (tau_star - tau);
        Ok(NormBounds {
            minus_tau: -tau,
            nabla_alpha_squared: na,
            star_gap: gap,
            nabla_omega_squared: nw,
            alpha_identity: (na + tau).abs() <= tol,
            omega_identity: (nw - gap).abs() <= tol,
            inequality: -tau >= -tol && -tau <= gap + tol,
            equality: (gap + tau).abs() <= tol,
            tolerance: tol,
        })
    }

    /// Ratio bounds from the Einstein constant and `tau*`.
    pub fn ratio_bounds(&self, tol: f64) -> Result<RatioBounds> {
        let tau = self.require_einstein(tol)?;
        Ok(ratio_bounds(tau, self.star_ricci().tau_star, self.n, tol))
    }

    /// `max |*alpha - omega^n / n!|` on the orthonormal coframe.
    pub fn hodge_alpha_residual(&self, orientation: Orientation) -> f64 {
        let dim = self.dimension();
        let star = hodge_star(&self.alpha_frame, &Metric::identity(dim), orientation)
            .expect("dimension checked");
        let factorial: f64 = (1..=self.n).map(|k| k as f64).product();
        let wn = self.omega_frame.power(self.n).expect("dimension checked") * (1.0 / factorial);
        star.max_abs_diff(&wn)
    }

    /// `max(|δalpha|, |δomega|, |Δalpha|, |Δomega|)`.
    pub fn harmonicity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for f in [&self.alpha_frame, &self.omega_frame] {
            worst = worst
                .max(self.conn.codifferential(f).max_abs())
                .max(self.conn.hodge_laplacian(f).max_abs());
        }
        worst
    }

    /// Checks that a closed `alpha` with Killing Reeb field is parallel.
    pub fn reeb_killing(&self, tol: f64) -> ReebKillingReport {
        let killing = self.conn.killing_check(self.reeb_frame.as_slice(), tol);
        let alpha_closed = self
            .algebra
            .ce_differential(&self.alpha)
            .expect("dimension checked")
            .max_abs()
            <= tol;
        let nabla_alpha_max = self
            .conn
            .covariant_derivative(&self.alpha_frame)
            .iter()
            .map(KForm::max_abs)
            .fold(0.0, f64::max);
        let implication_holds = !(alpha_closed && killing.is_killing) || nabla_alpha_max <= tol;
        ReebKillingReport {
            killing,
            alpha_closed,
            nabla_alpha_max,
            implication_holds,
        }
    }

    /// `|rho* - tau* omega|^2`.
    pub fn trace_free_star_ricci_squared(&self) -> f64 {
        let s = self.star_ricci();
        (&s.form - &(&self.omega_frame * s.tau_star)).norm_squared()
    }
}

/// Classification that maps construction failures to
/// [`Classification::NotAlmostContactMetric`].
pub fn classify_triple(
    algebra: &LieAlgebra,
    metric: &Metric,
    alpha: &KForm,
    omega: &KForm,
    tol: f64,
) -> Result<Classification> {
    match AlmostContactStructure::build_with_tolerance(algebra, metric, alpha, omega, tol) {
        Ok(s) => Ok(s.classify(tol)),
        Err(GeometryError::NotAlmostContact(_)) | Err(GeometryError::IncompatibleMetric(_)) => {
            Ok(Classification::NotAlmostContactMetric)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, ContactData};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn build(c: &ContactData) -> AlmostContactStructure {
        AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega).unwrap()
    }

    /// rho* summed over an orthonormal basis of H = xi^perp only.
    fn rho_star_on_h(s: &AlmostContactStructure) -> DMatrix<f64> {
        let dim = s.dimension();
        let xi = s.reeb_frame().clone();
        let xi_row = DMatrix::from_row_slice(1, dim, xi.as_slice());
        let h = linalg::null_space(&xi_row, 1e-12);
        assert_eq!(h.len(), dim - 1);
        let mut out = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            let x = linalg::unit(dim, a);
            for hi in &h {
                let jh = s.phi_frame() * hi;
                let r = s.curvature().endomorphism_along(x.as_slice(), hi.as_slice()) * jh;
                for b in 0..dim {
                    out[(a, b)] += r[b];
                }
            }
        }
        out
    }

    #[test]
    fn example_structure() {
        let s = build(&ContactData::einstein_example());
        assert_eq!(s.reeb().as_slice(), &[0.0, 0.0, 0.0, 0.0, 1.0]);
        let phi = s.phi();
        assert_eq!(phi[(1, 0)], 1.0);
        assert_eq!(phi[(0, 1)], -1.0);
        assert_eq!(phi[(3, 2)], 1.0);
        assert_eq!(phi[(2, 3)], -1.0);
        assert_eq!(phi.column(4).norm(), 0.0);
        assert_eq!(s.compatibility().max(), 0.0);
        assert_eq!(s.classify(1e-9), Classification::AlmostCokahler);
    }

    #[test]
    fn degenerate_omega_is_rejected() {
        let alpha = KForm::basis(5, &[5]);
        let omega = KForm::basis(5, &[1, 2]);
        let err = AlmostContactStructure::build(&catalog::einstein_example(), &Metric::identity(5), &alpha, &omega)
            .unwrap_err();
        assert!(matches!(err, GeometryError::NotAlmostContact(_)));
    }

    #[test]
    fn incompatible_metric_is_rejected() {
        let c = ContactData::einstein_example();
        let g = Metric::diagonal(&[2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let err = AlmostContactStructure::build(&c.algebra, &g, &c.alpha, &c.omega).unwrap_err();
        assert!(matches!(err, GeometryError::IncompatibleMetric(_)));
        assert_eq!(
            classify_triple(&c.algebra, &g, &c.alpha, &c.omega, 1e-9).unwrap(),
            Classification::NotAlmostContactMetric
        );
    }

    #[test]
    fn flat_structure_is_cokahler() {
        let s = build(&ContactData::abelian(2));
        assert_eq!(s.classify(1e-9), Classification::Cokahler);
        let sr = s.star_ricci();
        assert_eq!(sr.tau_star, 0.0);
        assert!(sr.form.is_zero(0.0));
    }

    #[test]
    fn heisenberg_structure_is_not_closed() {
        let (alpha, omega) = catalog::standard_contact_forms(2);
        let alg = catalog::heisenberg_plus_r2();
        // d(e^{34}) = de^3 ^ e^4 = e^{124}
        let dw = alg.ce_differential(&omega).unwrap();
        assert!(dw.approx_eq(&KForm::basis(5, &[1, 2, 4]), 0.0));
        let s = AlmostContactStructure::build(&alg, &Metric::identity(5), &alpha, &omega).unwrap();
        assert_eq!(s.classify(1e-9), Classification::AlmostContactMetric);
    }

    #[test]
    fn star_ricci_of_example() {
        let s = build(&ContactData::einstein_example());
        let sr = s.star_ricci();
        let expect = KForm::basis(5, &[1, 2]) * -0.75 + KForm::basis(5, &[3, 4]) * -1.5;
        assert!(sr.form.approx_eq(&expect, 1e-14));
        assert!((sr.tau_star + 1.125).abs() < 1e-14);
        assert!(sr.antisymmetry < 1e-14);
    }

    #[test]
    fn star_ricci_matches_h_only_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut cases = vec![ContactData::einstein_example()];
        let (alpha, omega) = catalog::standard_contact_forms(2);
        cases.push(ContactData {
            algebra: catalog::heisenberg_plus_r2(),
            metric: Metric::identity(5),
            alpha,
            omega,
        });
        for _ in 0..4 {
            cases.push(catalog::random_almost_cokahler(&mut rng, 2, false));
        }
        for c in &cases {
            let s = build(c);
            let full = s.star_ricci().matrix;
            let h = rho_star_on_h(&s);
            assert!(linalg::max_abs(&(full - h)) < 1e-10);
        }
    }

    #[test]
    fn rough_laplacian_identities_on_example() {
        let s = build(&ContactData::einstein_example());
        let r = s.rough_laplacian_identities(1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        let flat = build(&ContactData::abelian(2));
        assert!(flat.rough_laplacian_identities(1e-9).unwrap().passed);
    }

    #[test]
    fn non_einstein_is_refused() {
        let (alpha, omega) = catalog::standard_contact_forms(2);
        let alg = catalog::heisenberg_plus_r2();
        let s = AlmostContactStructure::build(&alg, &Metric::identity(5), &alpha, &omega).unwrap();
        assert!(matches!(
            s.rough_laplacian_identities(1e-9),
            Err(GeometryError::NotEinstein(_))
        ));
        assert!(s.norm_bounds(1e-9).is_err());
    }

    #[test]
    fn norm_bounds_scale_with_metric() {
        let base = build(&ContactData::einstein_example()).norm_bounds(1e-9).unwrap();
        for v in [base.minus_tau, base.nabla_alpha_squared, base.star_gap, base.nabla_omega_squared] {
            assert!((v - 1.5).abs() < 1e-13);
        }
        assert!(base.inequality && base.equality && base.alpha_identity && base.omega_identity);
        let scaled = build(&ContactData::einstein_example().scaled(2.0)).norm_bounds(1e-9).unwrap();
        for v in [scaled.minus_tau, scaled.nabla_alpha_squared, scaled.star_gap, scaled.nabla_omega_squared] {
            assert!((v - 0.75).abs() < 1e-13);
        }
        assert!(scaled.inequality && scaled.equality);
    }

    #[test]
    fn ratio_bounds_cases() {
        let r = ratio_bounds(-1.5, -1.125, 2, 1e-12);
        assert_eq!(r.case, RatioCase::NegativeEinstein);
        assert!((r.ratio.unwrap() - 0.25).abs() < 1e-15);
        assert!((r.upper.unwrap() - (7.0 + 34f64.sqrt()) / 20.0).abs() < 1e-15);
        assert_eq!(r.in_interval, Some(true));
        assert_eq!(r.at_lower_endpoint, Some(true));

        let equal = ratio_bounds(-1.0, -1.0, 2, 1e-12);
        assert_eq!(equal.in_interval, Some(false));

        let one = ratio_bounds(-1.0, -0.5, 1, 1e-12);
        assert_eq!(one.lower, 0.5);
        assert!(one.upper.is_none());
        assert!(one.note.unwrap().contains("not real"));

        assert_eq!(ratio_bounds(0.0, 0.0, 2, 1e-12).case, RatioCase::RicciFlat);
        assert_eq!(ratio_bounds(1.0, 0.0, 2, 1e-12).case, RatioCase::Contradiction);
    }

    #[test]
    fn hodge_dual_and_harmonic() {
        let s = build(&ContactData::einstein_example());
        assert!(s.hodge_alpha_residual(Orientation::Positive) < 1e-15);
        assert!(s.harmonicity() < 1e-13);
    }

    #[test]
    fn random_structures_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=2 {
            for killing in [false, true] {
                let c = catalog::random_almost_cokahler(&mut rng, n, killing);
                let s = build(&c);
                assert!(s.compatibility().max() < 1e-10);
                assert!(s.closedness() < 1e-10);
                assert!(s.harmonicity() < 1e-9, "{}", s.harmonicity());
                let rk = s.reeb_killing(1e-9);
                assert_eq!(rk.killing.is_killing, killing);
                assert!(rk.implication_holds);
            }
        }
    }

    #[test]
    fn example_reeb_field_is_not_killing() {
        let s = build(&ContactData::einstein_example());
        let rk = s.reeb_killing(1e-9);
        assert!(!rk.killing.is_killing);
        assert!((rk.killing.norm_squared - 1.5).abs() < 1e-14);
        assert!(rk.implication_holds);
    }
}
