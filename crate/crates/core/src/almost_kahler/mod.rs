//! Almost Hermitian structures `(h, J, Omega)` with `Omega(X, Y) = h(JX, Y)`,
//! and the two product constructions from almost contact metric structures:
//! `M × S^1` with `Omega = omega + alpha ^ theta`, and `M × M'` with
//! `Omega = omega + omega' + alpha ^ alpha'`.
//!
//! Products are assembled from the orthonormal-frame data of the factors, so
//! their metrics are the identity. The circle is a central line in the algebra.

mod operator;

pub use operator::{
    anti_invariant_projection, form_complex_structure, invariant_projection, pullback_by,
    two_form_map, two_form_type_split, CurvatureOperator, OperatorSplit,
};

use nalgebra::{DMatrix, DVector};

use crate::almost_contact::AlmostContactStructure;
use crate::error::{GeometryError, Result};
use crate::exterior::KForm;
use crate::lie_algebra::{LieAlgebra, Metric, DEFAULT_TOLERANCE};
use crate::linalg;
use crate::riemannian::{ConnectionData, CurvatureData};

/// An almost Hermitian structure on an even-dimensional Lie algebra.
#[derive(Clone, Debug)]
pub struct AlmostHermitianStructure {
    algebra: LieAlgebra,
    metric: Metric,
    kahler: KForm,
    conn: ConnectionData,
    curv: CurvatureData,
    kahler_frame: KForm,
    j_frame: DMatrix<f64>,
}

/// Curvature quantities of an almost Kähler structure, on the orthonormal frame.
#[derive(Clone, Debug)]
pub struct AlmostKahlerAnalysis {
    pub ricci: DMatrix<f64>,
    /// Part of `ric` commuting with `J`.
    pub ric_prime: DMatrix<f64>,
    /// Part of `ric` anticommuting with `J`.
    pub ric_double_prime: DMatrix<f64>,
    /// `rho^h(X, Y) = ric'(JX, Y)`.
    pub rho_h: KForm,
    /// `rho^{*h}(X, Y) = sum_i <R(X, e_i) J e_i, Y>`.
    pub rho_star_h: KForm,
    /// `2 <rho^h, Omega>`.
    pub s: f64,
    /// `2 <rho^{*h}, Omega>`.
    pub s_star: f64,
    /// `phi(X, Y) = <∇_{JX} Omega, ∇_Y Omega>`.
    pub phi_form: KForm,
    pub nabla_kahler_squared: f64,
    /// Gram matrix `<∇_{f_a} Omega, ∇_{f_b} Omega>`.
    pub nabla_gram: DMatrix<f64>,
    pub r_prime_squared: f64,
    pub r_double_prime_squared: f64,
    pub residuals: AnalysisResiduals,
}

/// Residuals of the identities checked by [`AlmostHermitianStructure::analyze`].
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisResiduals {
    /// `|s - tr ric|`
    pub scalar_trace: f64,
    /// `|s* - s - |∇Omega|^2|`
    pub star_gap: f64,
    /// `|<Omega, phi> - 1/2 |∇Omega|^2|`
    pub phi_pairing: f64,
    /// `max |<∇_X Omega, ∇_Y Omega> - <∇_{JX} Omega, ∇_{JY} Omega>|`
    pub j_invariance: f64,
    /// `max |phi + phi^T|` as a bilinear form.
    pub phi_antisymmetry: f64,
    /// `max(|ric' - J^T ric' J|, |ric'' + J^T ric'' J|)`
    pub ricci_split: f64,
    /// `max |R - R^T|` for the curvature operator.
    pub operator_self_adjointness: f64,
    /// `max |R(Omega) + rho^{*h}|`
    pub star_ricci_operator: f64,
}

impl AnalysisResiduals {
    pub fn max(&self) -> f64 {
        [
            self.scalar_trace,
            self.star_gap,
            self.phi_pairing,
            self.j_invariance,
            self.phi_antisymmetry,
            self.ricci_split,
            self.operator_self_adjointness,
            self.star_ricci_operator,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl AlmostHermitianStructure {
    /// Builds `J` from `Omega` and `h`, checking `J^2 = -1` and orthogonality.
    pub fn from_kahler_form(algebra: &LieAlgebra, metric: &Metric, kahler: &KForm) -> Result<Self> {
        Self::from_kahler_form_with_tolerance(algebra, metric, kahler, DEFAULT_TOLERANCE)
    }

    pub fn from_kahler_form_with_tolerance(
        algebra: &LieAlgebra,
        metric: &Metric,
        kahler: &KForm,
        tol: f64,
    ) -> Result<Self> {
        let m = algebra.dimension();
        if m % 2 == 1 {
            return Err(GeometryError::OddDimension(m));
        }
        if kahler.dimension() != m {
            return Err(GeometryError::DimensionMismatch {
                expected: m,
                found: kahler.dimension(),
            });
        }
        if kahler.degree() != 2 {
            return Err(GeometryError::DegreeMismatch { left: 2, right: kahler.degree() });
        }
        let conn = ConnectionData::new(algebra, metric)?;
        let kahler_frame = conn.form_to_frame(kahler);
        let j = kahler_frame.to_matrix().transpose();
        let id = DMatrix::<f64>::identity(m, m);
        let violation = linalg::max_abs(&(&j * &j + &id)).max(linalg::max_abs(&(j.transpose() * &j - &id)));
        if !(violation <= tol) {
            return Err(GeometryError::NotAlmostHermitian(violation));
        }
        let curv = CurvatureData::new(&conn);
        Ok(AlmostHermitianStructure {
            algebra: algebra.clone(),
            metric: metric.clone(),
            kahler: kahler.clone(),
            conn,
            curv,
            kahler_frame,
            j_frame: j,
        })
    }

    pub fn dimension(&self) -> usize {
        self.algebra.dimension()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn kahler_form(&self) -> &KForm {
        &self.kahler
    }

    pub fn kahler_frame(&self) -> &KForm {
        &self.kahler_frame
    }

    /// `J` on the orthonormal frame (column `b` is `J f_b`).
    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.j_frame
    }

    pub fn connection(&self) -> &ConnectionData {
        &self.conn
    }

    pub fn curvature(&self) -> &CurvatureData {
        &self.curv
    }

    /// `max |dOmega|`.
    pub fn kahler_differential(&self) -> f64 {
        self.conn.exterior_derivative(&self.kahler_frame).max_abs()
    }

    pub fn is_almost_kahler(&self, tol: f64) -> bool {
        self.kahler_differential() <= tol
    }

    /// `|∇Omega|^2`.
    pub fn nabla_kahler_squared(&self) -> f64 {
        self.conn.nabla_norm_squared(&self.kahler_frame)
    }

    /// `<∇_{f_a} Omega, ∇_{f_b} Omega>`.
    pub fn nabla_gram(&self) -> DMatrix<f64> {
        let d = self.conn.covariant_derivative(&self.kahler_frame);
        let m = self.dimension();
        DMatrix::from_fn(m, m, |a, b| d[a].dot(&d[b]))
    }

    /// `max |G - J^T G J|` for the Gram matrix `G` of `∇Omega`.
    pub fn j_invariance_residual(&self) -> f64 {
        let g = self.nabla_gram();
        let j = &self.j_frame;
        linalg::max_abs(&(&g - j.transpose() * &g * j))
    }

    /// `rho^{*h}` as a matrix on the frame.
    pub fn star_ricci_matrix(&self) -> DMatrix<f64> {
        let m = self.dimension();
        let mut v = DMatrix::zeros(m, m);
        for a in 0..m {
            let mut va = DVector::zeros(m);
            for i in 0..m {
                va += self.curv.endomorphism(a, i) * self.j_frame.column(i);
            }
            v.row_mut(a).copy_from(&va.transpose());
        }
        v
    }

    pub fn curvature_operator(&self) -> CurvatureOperator {
        CurvatureOperator::from_curvature(&self.curv)
    }

    /// Full analysis; requires `dOmega = 0` to `DEFAULT_TOLERANCE`.
    pub fn analyze(&self) -> Result<AlmostKahlerAnalysis> {
        self.analyze_with_tolerance(DEFAULT_TOLERANCE)
    }

    pub fn analyze_with_tolerance(&self, tol: f64) -> Result<AlmostKahlerAnalysis> {
        let d_omega = self.kahler_differential();
        if d_omega > tol {
            return Err(GeometryError::NotAlmostKahler(d_omega));
        }
        let j = &self.j_frame;
        let ricci = self.curv.ricci().clone();
        let twisted = j.transpose() * &ricci * j;
        let ric_prime = (&ricci + &twisted) * 0.5;
        let ric_double_prime = (&ricci - &twisted) * 0.5;
        let rho_h = KForm::from_bilinear(&(j.transpose() * &ric_prime));
        let rho_star_h = KForm::from_bilinear(&self.star_ricci_matrix());
        let s = 2.0 * rho_h.dot(&self.kahler_frame);
        let s_star = 2.0 * rho_star_h.dot(&self.kahler_frame);

        let gram = self.nabla_gram();
        let nabla_sq = gram.trace();
        let phi_matrix = j.transpose() * &gram;
        let phi_form = KForm::from_bilinear(&phi_matrix);

        let op = self.curvature_operator();
        let split = op.split(j);
        let r_omega = op.apply(&self.kahler_frame);

        let ricci_split = linalg::max_abs(&(&ric_prime - j.transpose() * &ric_prime * j))
            .max(linalg::max_abs(&(&ric_double_prime + j.transpose() * &ric_double_prime * j)));
        let residuals = AnalysisResiduals {
            scalar_trace: (s - ricci.trace()).abs(),
            star_gap: (s_star - s - nabla_sq).abs(),
            phi_pairing: (self.kahler_frame.dot(&phi_form) - 0.5 * nabla_sq).abs(),
            j_invariance: linalg::max_abs(&(&gram - j.transpose() * &gram * j)),
            phi_antisymmetry: linalg::max_abs(&(&phi_matrix + phi_matrix.transpose())),
            ricci_split,
            operator_self_adjointness: op.self_adjointness_residual(),
            star_ricci_operator: (&r_omega + &rho_star_h).max_abs(),
        };
        Ok(AlmostKahlerAnalysis {
            ricci,
            ric_prime,
            ric_double_prime,
            rho_h,
            rho_star_h,
            s,
            s_star,
            phi_form,
            nabla_kahler_squared: nabla_sq,
            nabla_gram: gram,
            r_prime_squared: split.commuting_norm_squared,
            r_double_prime_squared: split.anticommuting_norm_squared,
            residuals,
        })
    }
}

/// `M × S^1` with `h = g + theta ⊗ theta` and `Omega = omega + alpha ^ theta`.
#[derive(Clone, Debug)]
pub struct CircleProduct {
    pub structure: AlmostHermitianStructure,
    /// `alpha` pulled back to the product (orthonormal coframe).
    pub alpha: KForm,
    /// `theta = e^{2n+2}`.
    pub theta: KForm,
    /// Reeb field of the factor as a product vector.
    pub reeb: DVector<f64>,
    /// Half-dimension of the odd factor.
    pub n: usize,
}

/// Identities specific to circle products of Einstein almost cokähler factors.
#[derive(Clone, Debug)]
pub struct CircleReport {
    pub tau: f64,
    pub s: f64,
    pub s_star: f64,
    /// `max |ric'' - 1/2 tau (alpha ⊗ alpha - theta ⊗ theta)|`
    pub ric_double_prime_residual: f64,
    /// `|ric''|^2`
    pub ric_double_prime_squared: f64,
    /// `max |rho^h - tau (Omega - 1/2 alpha ^ theta)|`
    pub rho_h_residual: f64,
    /// `|∇Omega|^2`
    pub nabla_kahler_squared: f64,
    /// `| |∇Omega|^2 - |∇omega|^2 - |∇alpha|^2 |`
    pub nabla_split_residual: f64,
    /// `<Omega, phi>`
    pub phi_pairing: f64,
    /// `max |phi(xi, .)|`
    pub phi_reeb: f64,
    /// `<rho^h, phi>` and its prediction `1/2 tau |∇Omega|^2`.
    pub rho_h_phi: f64,
    pub rho_h_phi_predicted: f64,
    /// `|rho*_0|^2` for the odd factor.
    pub trace_free_star_ricci_squared: f64,
    pub r_double_prime_squared: f64,
    pub r_prime_squared: f64,
    /// `tau^2 / (16 n)`
    pub r_double_prime_bound: f64,
    /// `|∇*∇Omega|^2`
    pub rough_laplacian_squared: f64,
    /// `2|ric''|^2 - 8|R''|^2 - |∇*∇Omega|^2 - |phi|^2 + 4<rho^h, phi> - 4<rho^h, ∇*∇Omega>`,
    /// the curvature integrand with its divergence terms dropped.
    pub curvature_integrand: f64,
    pub analysis: AlmostKahlerAnalysis,
}

/// Builds `M × S^1` from an almost contact metric structure.
pub fn product_with_circle(odd: &AlmostContactStructure) -> Result<CircleProduct> {
    let n = odd.n();
    let m = 2 * n + 2;
    let algebra = odd.connection().frame_algebra().direct_sum(&LieAlgebra::abelian(1));
    let alpha = odd.alpha_frame().embed(m, 0);
    let omega = odd.omega_frame().embed(m, 0);
    let theta = KForm::basis(m, &[m]);
    let kahler = &omega + &alpha.wedge(&theta)?;
    let structure = AlmostHermitianStructure::from_kahler_form(&algebra, &Metric::identity(m), &kahler)?;
    let mut reeb = DVector::zeros(m);
    reeb.rows_mut(0, m - 1).copy_from(odd.reeb_frame());
    Ok(CircleProduct {
        structure,
        alpha,
        theta,
        reeb,
        n,
    })
}

/// Builds `M × M'` with `Omega = omega + omega' + alpha ^ alpha'`.
pub fn product_double(a: &AlmostContactStructure, b: &AlmostContactStructure) -> Result<AlmostHermitianStructure> {
    let (d1, d2) = (a.dimension(), b.dimension());
    let m = d1 + d2;
    let algebra = a
        .connection()
        .frame_algebra()
        .direct_sum(b.connection().frame_algebra());
    let alpha = a.alpha_frame().embed(m, 0);
    let alpha2 = b.alpha_frame().embed(m, d1);
    let kahler = a.omega_frame().embed(m, 0) + b.omega_frame().embed(m, d1) + alpha.wedge(&alpha2)?;
    AlmostHermitianStructure::from_kahler_form(&algebra, &Metric::identity(m), &kahler)
}

impl CircleProduct {
    /// Checks the circle-product identities; the factor must be Einstein and
    /// almost cokähler.
    pub fn report(&self, odd: &AlmostContactStructure, tol: f64) -> Result<CircleReport> {
        let tau = odd
            .einstein_constant(tol)
            .ok_or_else(|| GeometryError::NotEinstein(odd.curvature().einstein_deviation()))?;
        let analysis = self.structure.analyze_with_tolerance(tol)?;
        let a = self.alpha.to_vector();
        let t = self.theta.to_vector();
        let predicted_ric2 = (&a * a.transpose() - &t * t.transpose()) * (0.5 * tau);
        let alpha_theta = self.alpha.wedge(&self.theta)?;
        let predicted_rho = (self.structure.kahler_frame() - &(&alpha_theta * 0.5)) * tau;
        let phi_matrix = analysis.phi_form.to_matrix();
        let phi_reeb = (phi_matrix.transpose() * &self.reeb).abs().max();
        let nabla_split = odd.nabla_omega_squared() + odd.nabla_alpha_squared();
        let rough = self
            .structure
            .connection()
            .rough_laplacian(self.structure.kahler_frame());
        let ric2 = linalg::frobenius_squared(&analysis.ric_double_prime);
        let curvature_integrand = 2.0 * ric2 - 8.0 * analysis.r_double_prime_squared
            - rough.norm_squared()
            - analysis.phi_form.norm_squared()
            + 4.0 * analysis.rho_h.dot(&analysis.phi_form)
            - 4.0 * analysis.rho_h.dot(&rough);
        Ok(CircleReport {
            tau,
            s: analysis.s,
            s_star: analysis.s_star,
            ric_double_prime_residual: linalg::max_abs(&(&analysis.ric_double_prime - predicted_ric2)),
            ric_double_prime_squared: ric2,
            rho_h_residual: analysis.rho_h.max_abs_diff(&predicted_rho),
            nabla_kahler_squared: analysis.nabla_kahler_squared,
            nabla_split_residual: (analysis.nabla_kahler_squared - nabla_split).abs(),
            phi_pairing: self.structure.kahler_frame().dot(&analysis.phi_form),
            phi_reeb,
            rho_h_phi: analysis.rho_h.dot(&analysis.phi_form),
            rho_h_phi_predicted: 0.5 * tau * analysis.nabla_kahler_squared,
            trace_free_star_ricci_squared: odd.trace_free_star_ricci_squared(),
            r_double_prime_squared: analysis.r_double_prime_squared,
            r_prime_squared: analysis.r_prime_squared,
            r_double_prime_bound: tau * tau / (16.0 * self.n as f64),
            rough_laplacian_squared: rough.norm_squared(),
            curvature_integrand,
            analysis,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, ContactData};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn odd(c: &ContactData) -> AlmostContactStructure {
        AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega).unwrap()
    }

    #[test]
    fn circle_product_of_example() {
        let s = odd(&ContactData::einstein_example());
        let p = product_with_circle(&s).unwrap();
        assert!(p.structure.is_almost_kahler(1e-12));
        let r = p.report(&s, 1e-9).unwrap();
        assert!((r.s + 7.5).abs() < 1e-12);
        assert!((r.s_star + 4.5).abs() < 1e-12);
        assert!(r.ric_double_prime_residual < 1e-12);
        assert!((r.ric_double_prime_squared - 9.0 / 8.0).abs() < 1e-12);
        assert!(r.rho_h_residual < 1e-12);
        assert!((r.phi_pairing - 1.5).abs() < 1e-12);
        assert!(r.phi_reeb < 1e-12);
        assert!((r.rho_h_phi + 2.25).abs() < 1e-12);
        assert!((r.rho_h_phi - r.rho_h_phi_predicted).abs() < 1e-12);
        assert!(r.nabla_split_residual < 1e-12);
        assert!((r.rough_laplacian_squared - 4.5).abs() < 1e-12);
        assert!((r.trace_free_star_ricci_squared - 9.0 / 32.0).abs() < 1e-12);
        // the two curvature-operator parts
        assert!(r.r_double_prime_squared < 1e-24);
        assert!((r.r_prime_squared - 9.0 / 32.0).abs() < 1e-12);
        assert!(r.curvature_integrand.abs() < 1e-12);
        assert!(r.analysis.residuals.max() < 1e-12, "{:?}", r.analysis.residuals);
    }

    #[test]
    fn double_product_of_example() {
        let s = odd(&ContactData::einstein_example());
        let p = product_double(&s, &s).unwrap();
        let a = p.analyze().unwrap();
        assert!((a.s + 15.0).abs() < 1e-12);
        assert!((a.s_star + 9.0).abs() < 1e-12);
        assert!((a.nabla_kahler_squared - 6.0).abs() < 1e-12);
        assert!(p.curvature().einstein_constant(1e-9).is_some());
    }

    #[test]
    fn flat_products() {
        let s = odd(&ContactData::abelian(2));
        let a = product_with_circle(&s).unwrap().structure.analyze().unwrap();
        assert_eq!(a.s, 0.0);
        assert_eq!(a.s_star, 0.0);
        assert!(a.phi_form.is_zero(0.0));
        assert_eq!(a.r_prime_squared + a.r_double_prime_squared, 0.0);
        let d = product_double(&s, &s).unwrap().analyze().unwrap();
        assert_eq!(d.s_star, 0.0);
    }

    #[test]
    fn mixed_product_is_not_einstein() {
        let s = odd(&ContactData::einstein_example());
        let f = odd(&ContactData::abelian(2));
        let p = product_double(&s, &f).unwrap();
        assert!(p.analyze().is_ok());
        assert!(p.curvature().einstein_constant(1e-9).is_none());
    }

    #[test]
    fn odd_dimension_is_rejected() {
        let alg = catalog::einstein_example();
        let err = AlmostHermitianStructure::from_kahler_form(&alg, &Metric::identity(5), &KForm::zero(5, 2))
            .unwrap_err();
        assert_eq!(err, GeometryError::OddDimension(5));
    }

    #[test]
    fn non_closed_kahler_form_is_refused() {
        // Heisenberg ⊕ R^2 with the standard forms is not almost cokähler
        let (alpha, omega) = catalog::standard_contact_forms(2);
        let s = AlmostContactStructure::build(&catalog::heisenberg_plus_r2(), &Metric::identity(5), &alpha, &omega)
            .unwrap();
        let p = product_with_circle(&s).unwrap();
        assert!(matches!(p.structure.analyze(), Err(GeometryError::NotAlmostKahler(_))));
    }

    #[test]
    fn random_products_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=2 {
            let c = catalog::random_almost_cokahler(&mut rng, n, false);
            let s = odd(&c);
            let a = product_with_circle(&s).unwrap().structure.analyze().unwrap();
            assert!(a.residuals.max() < 1e-9, "{:?}", a.residuals);
            let d = product_double(&s, &s).unwrap().analyze().unwrap();
            assert!(d.residuals.max() < 1e-9, "{:?}", d.residuals);
        }
    }

    #[test]
    fn kahler_form_of_circle_product_is_invariant() {
        let s = odd(&ContactData::einstein_example());
        let p = product_with_circle(&s).unwrap();
        let (inv, anti) = two_form_type_split(p.structure.kahler_frame(), p.structure.complex_structure());
        assert!(inv.approx_eq(p.structure.kahler_frame(), 1e-15));
        assert!(anti.is_zero(1e-15));
    }
}
