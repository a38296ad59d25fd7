//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Default relative threshold for treating a singular value as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Orthonormal basis of the kernel of `m`. Singular values below
/// `rel_tol * sigma_max` count as zero; a zero matrix has the full space as
/// kernel.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad to at least square so the thin SVD returns a full right basis.
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = rel_tol * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s <= threshold)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect()
}

/// Numerical rank with the same relative threshold as [`null_space`].
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    m.ncols() - null_space(m, rel_tol).len()
}

/// Largest entry magnitude.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Squared Frobenius norm.
pub fn frobenius_squared(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum()
}

/// Frobenius pairing `sum_ij a_ij b_ij`.
pub fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `max |m - m^T|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Standard basis vector of length `n`.
pub fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let k = null_space(&m, RANK_TOLERANCE);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&m * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rank(&m, RANK_TOLERANCE), 1);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let m = DMatrix::<f64>::zeros(4, 3);
        assert_eq!(null_space(&m, RANK_TOLERANCE).len(), 3);
    }

    #[test]
    fn invertible_has_trivial_kernel() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        assert!(null_space(&m, RANK_TOLERANCE).is_empty());
    }
}
