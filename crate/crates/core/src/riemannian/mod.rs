//! Levi-Civita connection of a left-invariant metric and the operators built
//! from it.
//!
//! Everything is computed in the Gram–Schmidt orthonormal frame
//! `f_a = sum_i P_ia e_i` of the metric (see [`Metric::orthonormal_frame`]).
//! Methods of [`ConnectionData`] take and return forms written on the dual
//! orthonormal coframe; use [`ConnectionData::form_to_frame`] and
//! [`ConnectionData::form_from_frame`] to move between bases. For the identity
//! metric the two bases coincide.

mod curvature;

pub use curvature::{einstein_check, CurvatureData};

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::exterior::{basis_masks, hodge_star, KForm, Orientation};
use crate::lie_algebra::{LieAlgebra, Metric};
use crate::linalg;

/// Levi-Civita connection coefficients in an orthonormal frame.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    dim: usize,
    frame: DMatrix<f64>,
    frame_inverse: DMatrix<f64>,
    frame_algebra: LieAlgebra,
    /// `nabla[a][(c, b)] = Γ^c_{ab} = <∇_{f_a} f_b, f_c>`
    nabla: Vec<DMatrix<f64>>,
}

/// Symmetric part of `∇v` for a left-invariant vector field `v`.
#[derive(Clone, Debug)]
pub struct KillingReport {
    /// `S(f_a, f_b) = 1/2 (<∇_a v, f_b> + <∇_b v, f_a>)`
    pub symmetric: DMatrix<f64>,
    /// Frobenius `|S|^2`.
    pub norm_squared: f64,
    pub tolerance: f64,
    pub is_killing: bool,
}

/// Computes the Levi-Civita connection of `metric` on `algebra`.
pub fn levi_civita(algebra: &LieAlgebra, metric: &Metric) -> Result<ConnectionData> {
    ConnectionData::new(algebra, metric)
}

impl ConnectionData {
    pub fn new(algebra: &LieAlgebra, metric: &Metric) -> Result<Self> {
        let n = algebra.dimension();
        if metric.dimension() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: metric.dimension(),
            });
        }
        let (frame, frame_inverse, frame_algebra) = if metric.is_identity() {
            let id = DMatrix::identity(n, n);
            (id.clone(), id, algebra.clone())
        } else {
            let p = metric.orthonormal_frame();
            let p_inv = p.clone().try_inverse().ok_or(GeometryError::MetricNotPositiveDefinite(0.0))?;
            let fa = algebra.change_basis(&p)?;
            (p, p_inv, fa)
        };
        let c = |k: usize, i: usize, j: usize| frame_algebra.structure_constant(k, i, j);
        let mut nabla = Vec::with_capacity(n);
        for a in 0..n {
            let m = DMatrix::from_fn(n, n, |cc, b| 0.5 * (c(cc, a, b) - c(a, b, cc) + c(b, cc, a)));
            nabla.push(m);
        }
        Ok(ConnectionData {
            dim: n,
            frame,
            frame_inverse,
            frame_algebra,
            nabla,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Frame vectors as columns, in the input basis.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// The algebra written in the orthonormal frame.
    pub fn frame_algebra(&self) -> &LieAlgebra {
        &self.frame_algebra
    }

    /// `Γ^c_{ab} = <∇_{f_a} f_b, f_c>` (0-based).
    #[inline]
    pub fn christoffel(&self, a: usize, b: usize, c: usize) -> f64 {
        self.nabla[a][(c, b)]
    }

    /// `∇_{f_a}` as an endomorphism: column `b` is `∇_{f_a} f_b`.
    pub fn nabla(&self, a: usize) -> &DMatrix<f64> {
        &self.nabla[a]
    }

    /// `∇_X` for a frame vector `x`.
    pub fn nabla_along(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (a, &xa) in x.iter().enumerate() {
            if xa != 0.0 {
                m += &self.nabla[a] * xa;
            }
        }
        m
    }

    /// Components of an input-basis form on the orthonormal coframe.
    pub fn form_to_frame(&self, a: &KForm) -> KForm {
        a.pullback(&self.frame)
    }

    /// Input-basis components of a form given on the orthonormal coframe.
    pub fn form_from_frame(&self, a: &KForm) -> KForm {
        a.pullback(&self.frame_inverse)
    }

    /// Frame components of an input-basis vector.
    pub fn vector_to_frame(&self, v: &[f64]) -> DVector<f64> {
        &self.frame_inverse * DVector::from_column_slice(v)
    }

    /// Input-basis components of a frame vector.
    pub fn vector_from_frame(&self, v: &[f64]) -> DVector<f64> {
        &self.frame * DVector::from_column_slice(v)
    }

    /// `max |Γ^c_{ab} + Γ^b_{ac}|`.
    pub fn metric_compatibility_residual(&self) -> f64 {
        self.nabla
            .iter()
            .map(|m| linalg::max_abs(&(m + m.transpose())))
            .fold(0.0, f64::max)
    }

    /// `max |Γ^c_{ab} - Γ^c_{ba} - C^c_{ab}|`.
    pub fn torsion_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = self.christoffel(a, b, c)
                        - self.christoffel(b, a, c)
                        - self.frame_algebra.structure_constant(c, a, b);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    fn check_form(&self, a: &KForm) {
        assert_eq!(a.dimension(), self.dim, "form dimension does not match the algebra");
    }

    /// `∇_{f_a} η` for `a = 0..n`.
    pub fn covariant_derivative(&self, eta: &KForm) -> Vec<KForm> {
        self.check_form(eta);
        self.nabla.iter().map(|m| eta.derivation(m)).collect()
    }

    /// `|∇η|^2 = sum_a |∇_{f_a} η|^2`.
    pub fn nabla_norm_squared(&self, eta: &KForm) -> f64 {
        self.covariant_derivative(eta)
            .iter()
            .map(KForm::norm_squared)
            .sum()
    }

    /// Rough Laplacian `∇*∇η` from the frame formula
    /// `∇*(e^i ⊗ β) = -sum_j <e_j, ∇_{e_j} e_i> β - ∇_{e_i} β`.
    pub fn rough_laplacian(&self, eta: &KForm) -> KForm {
        let first = self.covariant_derivative(eta);
        let mut out = KForm::zero(self.dim, eta.degree());
        for (i, beta) in first.iter().enumerate() {
            let trace: f64 = (0..self.dim).map(|j| self.christoffel(j, i, j)).sum();
            out -= &(beta * trace);
            out -= &beta.derivation(&self.nabla[i]);
        }
        out
    }

    /// Chevalley–Eilenberg differential on the orthonormal coframe.
    pub fn exterior_derivative(&self, eta: &KForm) -> KForm {
        self.frame_algebra
            .ce_differential(eta)
            .expect("dimension checked")
    }

    /// `δη = -sum_j ι_{f_j} ∇_{f_j} η`; zero on functions.
    pub fn codifferential(&self, eta: &KForm) -> KForm {
        self.check_form(eta);
        if eta.degree() == 0 {
            return KForm::vanishing(self.dim, 0);
        }
        let mut out = KForm::zero(self.dim, eta.degree() - 1);
        for (j, d) in self.covariant_derivative(eta).iter().enumerate() {
            out -= &d.interior_basis(j);
        }
        out
    }

    /// `(-1)^{n(k+1)+1} * d *` on `k`-forms, an independent path to `δ`.
    pub fn codifferential_via_hodge(&self, eta: &KForm) -> KForm {
        self.check_form(eta);
        let n = self.dim;
        let k = eta.degree();
        if k == 0 {
            return KForm::vanishing(n, 0);
        }
        let id = Metric::identity(n);
        let pos = Orientation::Positive;
        let star = hodge_star(eta, &id, pos).expect("dimension checked");
        let d = self.exterior_derivative(&star);
        let back = hodge_star(&d, &id, pos).expect("dimension checked");
        let sign = if (n * (k + 1) + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        back * sign
    }

    /// Hodge Laplacian `dδ + δd`.
    pub fn hodge_laplacian(&self, eta: &KForm) -> KForm {
        let k = eta.degree();
        let mut out = KForm::zero(self.dim, k);
        if k > 0 {
            out += &self.exterior_derivative(&self.codifferential(eta));
        }
        if k < self.dim {
            out += &self.codifferential(&self.exterior_derivative(eta));
        }
        out
    }

    /// Basis of the parallel invariant `k`-forms, orthonormal on the frame.
    pub fn parallel_forms(&self, k: usize) -> Vec<KForm> {
        let masks = basis_masks(self.dim, k);
        let cols = masks.len();
        let block = cols;
        let mut system = DMatrix::zeros(self.dim * block, cols);
        for (col, &mask) in masks.iter().enumerate() {
            let mut basis = KForm::zero(self.dim, k);
            basis.add_to_mask(mask, 1.0);
            for (a, d) in self.covariant_derivative(&basis).iter().enumerate() {
                let dense = d.to_dense();
                system
                    .view_mut((a * block, col), (block, 1))
                    .copy_from(&dense);
            }
        }
        linalg::null_space(&system, linalg::RANK_TOLERANCE)
            .iter()
            .map(|v| KForm::from_dense(self.dim, k, v))
            .collect()
    }

    /// Symmetric part of `∇v` for a frame vector `v`.
    pub fn killing_check(&self, v: &[f64], tol: f64) -> KillingReport {
        assert_eq!(v.len(), self.dim);
        let vv = DVector::from_column_slice(v);
        let n = self.dim;
        // m[(a, b)] = <∇_{f_a} v, f_b>
        let mut m = DMatrix::zeros(n, n);
        for a in 0..n {
            let w = &self.nabla[a] * &vv;
            m.row_mut(a).copy_from(&w.transpose());
        }
        let symmetric = (&m + m.transpose()) * 0.5;
        let norm_squared = linalg::frobenius_squared(&symmetric);
        KillingReport {
            is_killing: linalg::max_abs(&symmetric) <= tol,
            symmetric,
            norm_squared,
            tolerance: tol,
        }
    }

    /// Curvature term `-sum_{h,k} e^h ^ ι_{e_k}(R(e_h, e_k) η)` of the
    /// Weitzenböck formula.
    pub fn weitzenboeck_curvature_term(&self, curvature: &CurvatureData, eta: &KForm) -> KForm {
        let n = self.dim;
        let k = eta.degree();
        let mut out = KForm::zero(n, k);
        if k == 0 {
            return out;
        }
        for h in 0..n {
            let mut inner = KForm::zero(n, k - 1);
            for kk in 0..n {
                if h == kk {
                    continue;
                }
                let r = eta.derivation(curvature.endomorphism(h, kk));
                inner += &r.interior_basis(kk);
            }
            let eh = KForm::basis(n, &[h + 1]);
            out -= &eh.wedge(&inner).expect("same dimension");
        }
        out
    }

    /// `|Δη - curvature term - ∇*∇η|` (largest coefficient).
    pub fn weitzenboeck_residual(&self, curvature: &CurvatureData, eta: &KForm) -> f64 {
        let lhs = self.hodge_laplacian(eta);
        let rhs = &self.weitzenboeck_curvature_term(curvature, eta) + &self.rough_laplacian(eta);
        lhs.max_abs_diff(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exterior::form_inner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> ConnectionData {
        ConnectionData::new(&catalog::einstein_example(), &Metric::identity(5)).unwrap()
    }

    fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> KForm {
        use rand::Rng;
        let masks = basis_masks(n, k);
        let v = DVector::from_fn(masks.len(), |_, _| rng.random_range(-1.0..1.0));
        KForm::from_dense(n, k, &v)
    }

    #[test]
    fn flat_connection() {
        let c = ConnectionData::new(&LieAlgebra::abelian(4), &Metric::identity(4)).unwrap();
        for a in 0..4 {
            assert_eq!(linalg::max_abs(c.nabla(a)), 0.0);
        }
    }

    #[test]
    fn heisenberg_koszul() {
        let c = ConnectionData::new(&catalog::heisenberg_plus_r2(), &Metric::identity(5)).unwrap();
        // ∇_{e1} e2 = 1/2 [e1, e2] = -1/2 e3
        assert_eq!(c.christoffel(0, 1, 2), -0.5);
        assert_eq!(c.christoffel(1, 0, 2), 0.5);
        let k = c.killing_check(&[0.0, 0.0, 0.0, 0.0, 1.0], 1e-12);
        assert!(k.is_killing);
    }

    #[test]
    fn example_koszul() {
        let c = example();
        // ∇_{e1} e1 = 1/2 e4 from [e1, e4] = -1/2 e1
        let col = c.nabla(0).column(0).clone_owned();
        assert_eq!(col.as_slice(), &[0.0, 0.0, 0.0, 0.5, 0.0]);
        assert!(c.metric_compatibility_residual() < 1e-15);
        assert!(c.torsion_residual() < 1e-15);
    }

    #[test]
    fn covariant_derivative_of_alpha() {
        let c = example();
        let alpha = KForm::basis(5, &[5]);
        let d = c.covariant_derivative(&alpha);
        let h = 3f64.sqrt() / 2.0;
        assert!((d[0].coefficient(&[2]) + h).abs() < 1e-15);
        assert!((d[1].coefficient(&[1]) + h).abs() < 1e-15);
        for a in 2..5 {
            assert!(d[a].is_zero(1e-15));
        }
        assert!((c.nabla_norm_squared(&alpha) - 1.5).abs() < 1e-14);
        let omega = KForm::basis(5, &[1, 2]) + KForm::basis(5, &[3, 4]);
        assert!((c.nabla_norm_squared(&omega) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rough_laplacian_on_example() {
        let c = example();
        let alpha = KForm::basis(5, &[5]);
        assert!(c.rough_laplacian(&alpha).approx_eq(&(alpha.clone() * 1.5), 1e-14));
        let omega = KForm::basis(5, &[1, 2]) + KForm::basis(5, &[3, 4]);
        let expect = KForm::basis(5, &[1, 2]) * 1.5;
        assert!(c.rough_laplacian(&omega).approx_eq(&expect, 1e-14));
    }

    #[test]
    fn codifferential_on_example() {
        let c = example();
        let alpha = KForm::basis(5, &[5]);
        let omega = KForm::basis(5, &[1, 2]) + KForm::basis(5, &[3, 4]);
        assert!(c.codifferential(&alpha).is_zero(1e-14));
        assert!(c.codifferential(&omega).is_zero(1e-14));
        assert!(c.hodge_laplacian(&alpha).is_zero(1e-14));
    }

    #[test]
    fn codifferential_two_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=6 {
            let alg = catalog::random_algebra(&mut rng, n);
            let g = catalog::random_metric(&mut rng, n);
            let c = ConnectionData::new(&alg, &g).unwrap();
            for k in 1..=n {
                let eta = random_form(&mut rng, n, k);
                let a = c.codifferential(&eta);
                let b = c.codifferential_via_hodge(&eta);
                assert!(a.approx_eq(&b, 1e-10), "n={n} k={k}: {}", a.max_abs_diff(&b));
            }
        }
    }

    #[test]
    fn rough_laplacian_pairs_to_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 3..=6 {
            let alg = catalog::random_algebra(&mut rng, n);
            let g = catalog::random_metric(&mut rng, n);
            let c = ConnectionData::new(&alg, &g).unwrap();
            let eta = random_form(&mut rng, n, 2);
            let lhs = c.rough_laplacian(&eta).dot(&eta);
            let rhs = c.nabla_norm_squared(&eta);
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn parallel_forms() {
        let flat = ConnectionData::new(&LieAlgebra::abelian(5), &Metric::identity(5)).unwrap();
        assert_eq!(flat.parallel_forms(2).len(), 10);
        let c = example();
        assert!(c.parallel_forms(2).is_empty());
        assert!(c.parallel_forms(1).is_empty());
        // Heisenberg ⊕ R^2: e^4, e^5 are parallel
        let h = ConnectionData::new(&catalog::heisenberg_plus_r2(), &Metric::identity(5)).unwrap();
        let p1 = h.parallel_forms(1);
        assert_eq!(p1.len(), 2);
        for f in &p1 {
            assert!(h.nabla_norm_squared(f) < 1e-18);
            assert!((form_inner(f, f, &Metric::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn killing_on_example_reeb_field() {
        let c = example();
        let k = c.killing_check(&[0.0, 0.0, 0.0, 0.0, 1.0], 1e-9);
        assert!(!k.is_killing);
        assert!((k.norm_squared - 1.5).abs() < 1e-14);
        let flat = ConnectionData::new(&LieAlgebra::abelian(5), &Metric::identity(5)).unwrap();
        assert!(flat.killing_check(&[0.0, 0.0, 0.0, 0.0, 1.0], 1e-12).is_killing);
    }

    #[test]
    fn frame_conversions_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alg = catalog::random_algebra(&mut rng, 4);
        let g = catalog::random_metric(&mut rng, 4);
        let c = ConnectionData::new(&alg, &g).unwrap();
        let eta = random_form(&mut rng, 4, 2);
        let on = c.form_to_frame(&eta);
        assert!(c.form_from_frame(&on).approx_eq(&eta, 1e-12));
        // norms agree across bases
        let lhs = form_inner(&eta, &eta, &g).unwrap();
        assert!((lhs - on.norm_squared()).abs() < 1e-12);
        let v = [0.3, -1.0, 0.5, 2.0];
        let back = c.vector_from_frame(c.vector_to_frame(&v).as_slice());
        assert!((back - DVector::from_column_slice(&v)).norm() < 1e-12);
    }
}
