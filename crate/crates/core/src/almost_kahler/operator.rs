//! The curvature operator on 2-forms and its splitting relative to an almost
//! complex structure.
//!
//! 2-forms are identified with vectors of coefficients on the orthonormal
//! basis `e^{ab}` (`a < b`, colexicographic order), so operators are square
//! matrices of size `C(m, 2)` and norms are Frobenius norms.

use nalgebra::{DMatrix, DVector};

use crate::exterior::{basis_masks, mask_indices, KForm};
use crate::linalg;
use crate::riemannian::CurvatureData;

/// Matrix of a linear map on 2-forms given on antisymmetric matrices.
pub fn two_form_map<F>(m: usize, f: F) -> DMatrix<f64>
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    let masks = basis_masks(m, 2);
    let size = masks.len();
    let mut out = DMatrix::zeros(size, size);
    for (col, &mask) in masks.iter().enumerate() {
        let mut basis = KForm::zero(m, 2);
        basis.add_to_mask(mask, 1.0);
        let image = KForm::from_bilinear(&f(&basis.to_matrix()));
        out.set_column(col, &image.to_dense());
    }
    out
}

/// `beta -> beta(J., J.)`.
pub fn pullback_by(j: &DMatrix<f64>) -> DMatrix<f64> {
    two_form_map(j.nrows(), |b| j.transpose() * b * j)
}

/// Projection onto the `J`-invariant 2-forms: `1/2 (beta + beta(J., J.))`.
pub fn invariant_projection(j: &DMatrix<f64>) -> DMatrix<f64> {
    let n = j.nrows() * (j.nrows() - 1) / 2;
    (DMatrix::identity(n, n) + pullback_by(j)) * 0.5
}

/// Projection onto the `J`-anti-invariant 2-forms.
pub fn anti_invariant_projection(j: &DMatrix<f64>) -> DMatrix<f64> {
    let n = j.nrows() * (j.nrows() - 1) / 2;
    (DMatrix::identity(n, n) - pullback_by(j)) * 0.5
}

/// Complex structure `(𝕁 beta)(X, Y) = -beta(JX, Y)` on anti-invariant 2-forms.
pub fn form_complex_structure(j: &DMatrix<f64>) -> DMatrix<f64> {
    two_form_map(j.nrows(), |b| -(j.transpose() * b))
}

/// Splits a 2-form into its `J`-invariant and anti-invariant parts.
pub fn two_form_type_split(beta: &KForm, j: &DMatrix<f64>) -> (KForm, KForm) {
    let b = beta.to_matrix();
    let jb = j.transpose() * &b * j;
    let invariant = KForm::from_bilinear(&((&b + &jb) * 0.5));
    let anti = KForm::from_bilinear(&((&b - &jb) * 0.5));
    (invariant, anti)
}

/// A self-adjoint (for curvature) endomorphism of `Λ^2`.
#[derive(Clone, Debug)]
pub struct CurvatureOperator {
    dim: usize,
    matrix: DMatrix<f64>,
}

/// Compression of a curvature operator to the anti-invariant 2-forms and
/// its parts commuting and anticommuting with `𝕁`.
#[derive(Clone, Debug)]
pub struct OperatorSplit {
    /// `P R P` with `P` the anti-invariant projection.
    pub compressed: DMatrix<f64>,
    /// `1/2 (R_20 - 𝕁 R_20 𝕁)`, commuting with `𝕁`.
    pub commuting: DMatrix<f64>,
    /// `1/2 (R_20 + 𝕁 R_20 𝕁)`, anticommuting with `𝕁`.
    pub anticommuting: DMatrix<f64>,
    pub commuting_norm_squared: f64,
    pub anticommuting_norm_squared: f64,
}

impl CurvatureOperator {
    /// `R(beta)(X, Y) = 1/2 sum_{ij} beta(e_i, e_j) <R(e_i, e_j) X, Y>`.
    pub fn from_curvature(curv: &CurvatureData) -> Self {
        let m = curv.dimension();
        let masks = basis_masks(m, 2);
        let size = masks.len();
        let mut matrix = DMatrix::zeros(size, size);
        for (col, &ab) in masks.iter().enumerate() {
            let mut it = mask_indices(ab);
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            let r = curv.endomorphism(a, b);
            for (row, &cd) in masks.iter().enumerate() {
                let mut it = mask_indices(cd);
                let (c, d) = (it.next().unwrap(), it.next().unwrap());
                // <R(f_a, f_b) f_c, f_d>
                matrix[(row, col)] = r[(d, c)];
            }
        }
        CurvatureOperator { dim: m, matrix }
    }

    /// An operator given directly on the basis `e^{ab}`.
    pub fn from_matrix(dim: usize, matrix: DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), dim * (dim - 1) / 2);
        assert_eq!(matrix.ncols(), matrix.nrows());
        CurvatureOperator { dim, matrix }
    }

    /// `sum_ij c_ij u_i ⊗ u_j` acting by `beta -> sum c_ij <u_j, beta> u_i`.
    pub fn from_tensor(dim: usize, forms: &[KForm], c: &DMatrix<f64>) -> Self {
        let size = dim * (dim - 1) / 2;
        let dense: Vec<DVector<f64>> = forms.iter().map(KForm::to_dense).collect();
        let mut matrix = DMatrix::zeros(size, size);
        for i in 0..forms.len() {
            for j in 0..forms.len() {
                matrix += &dense[i] * dense[j].transpose() * c[(i, j)];
            }
        }
        CurvatureOperator { dim, matrix }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, beta: &KForm) -> KForm {
        KForm::from_dense(self.dim, 2, &(&self.matrix * beta.to_dense()))
    }

    /// `max |R - R^T|`.
    pub fn self_adjointness_residual(&self) -> f64 {
        linalg::asymmetry(&self.matrix)
    }

    pub fn norm_squared(&self) -> f64 {
        linalg::frobenius_squared(&self.matrix)
    }

    /// Compresses to the anti-invariant forms of `j` and splits.
    pub fn split(&self, j: &DMatrix<f64>) -> OperatorSplit {
        let p = anti_invariant_projection(j);
        let jj = form_complex_structure(j);
        let compressed = &p * &self.matrix * &p;
        let twisted = &jj * &compressed * &jj;
        let commuting = (&compressed - &twisted) * 0.5;
        let anticommuting = (&compressed + &twisted) * 0.5;
        OperatorSplit {
            commuting_norm_squared: linalg::frobenius_squared(&commuting),
            anticommuting_norm_squared: linalg::frobenius_squared(&anticommuting),
            compressed,
            commuting,
            anticommuting,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_complex_structure;

    #[test]
    fn kahler_form_is_invariant() {
        let j = standard_complex_structure(2);
        let omega = KForm::basis(4, &[1, 2]) + KForm::basis(4, &[3, 4]);
        let (inv, anti) = two_form_type_split(&omega, &j);
        assert!(inv.approx_eq(&omega, 1e-15));
        assert!(anti.is_zero(1e-15));
    }

    #[test]
    fn sign_flip_form_is_anti_invariant() {
        let j = standard_complex_structure(2);
        let beta = KForm::basis(4, &[1, 3]) - KForm::basis(4, &[2, 4]);
        let (inv, anti) = two_form_type_split(&beta, &j);
        assert!(inv.is_zero(1e-15));
        assert!(anti.approx_eq(&beta, 1e-15));
    }

    #[test]
    fn projections_are_orthogonal_idempotents() {
        let j = standard_complex_structure(3);
        let p = anti_invariant_projection(&j);
        let q = invariant_projection(&j);
        assert!(linalg::max_abs(&(&p * &p - &p)) < 1e-15);
        assert!(linalg::max_abs(&(&p * &q)) < 1e-15);
        assert!(linalg::asymmetry(&p) < 1e-15);
        // 𝕁 squares to -1 on the anti-invariant forms
        let jj = form_complex_structure(&j);
        assert!(linalg::max_abs(&(&jj * &jj * &p + &p)) < 1e-15);
        assert!(linalg::max_abs(&(&jj * &p - &p * &jj)) < 1e-15);
    }

    #[test]
    fn split_of_a_rank_one_operator() {
        // u = e13 - e24 is anti-invariant; its image under b -> -b(J., .) is
        // w = e14 + e23, worked out by hand
        let j = standard_complex_structure(2);
        let u = KForm::basis(4, &[1, 3]) - KForm::basis(4, &[2, 4]);
        let w = KForm::basis(4, &[1, 4]) + KForm::basis(4, &[2, 3]);
        let op = CurvatureOperator::from_tensor(4, std::slice::from_ref(&u), &DMatrix::from_element(1, 1, 1.0));
        let split = op.split(&j);
        let (du, dw) = (u.to_dense(), w.to_dense());
        let uu = &du * du.transpose();
        let ww = &dw * dw.transpose();
        assert!(linalg::max_abs(&(&split.compressed - &uu)) < 1e-15);
        assert!(linalg::max_abs(&(&split.commuting - (&uu + &ww) * 0.5)) < 1e-15);
        assert!(linalg::max_abs(&(&split.anticommuting - (&uu - &ww) * 0.5)) < 1e-15);
        assert!((split.commuting_norm_squared - 2.0).abs() < 1e-14);
        assert!((split.anticommuting_norm_squared - 2.0).abs() < 1e-14);
    }
}
