//! Lie algebras given by structure equations, and left-invariant metrics.
//!
//! Sign convention (Maurer–Cartan): `de^k(e_i, e_j) = -c^k_{ij}` where
//! `[e_i, e_j] = sum_k c^k_{ij} e_k`. So `de^3 = e^{12}` means
//! `[e_1, e_2] = -e_3`.
//!
//! Vectors are plain component arrays (0-based); form multi-indices are
//! 1-based as in [`crate::exterior`]. Structure constants are accessed with
//! 0-based indices.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::exterior::{mask_indices, wedge_sign, KForm, MAX_DIMENSION};

/// Tolerance used when a caller does not supply one.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A finite-dimensional real Lie algebra with a fixed basis `e_1, ..., e_n`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    /// `c[(k * n + i) * n + j] = c^k_{ij}`
    constants: Vec<f64>,
    /// `de^k` for each basis covector.
    differential: Vec<KForm>,
}

/// Outcome of [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `max_k |d(de^k)|` (largest coefficient).
    pub d_squared: f64,
    /// Largest Jacobi violation over basis triples, from the brackets directly.
    pub jacobi: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Traces of the adjoint maps of the basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Unimodularity {
    /// `tr(ad_{e_i})` for each basis vector.
    pub traces: Vec<f64>,
    pub unimodular: bool,
}

impl LieAlgebra {
    /// Builds an algebra from the 2-forms `de^1, ..., de^n`.
    pub fn from_structure_equations(differential: Vec<KForm>) -> Result<Self> {
        let n = differential.len();
        if n == 0 || n > MAX_DIMENSION {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        let mut constants = vec![0.0; n * n * n];
        for (k, de) in differential.iter().enumerate() {
            if de.dimension() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    found: de.dimension(),
                });
            }
            if de.degree() != 2 {
                return Err(GeometryError::DegreeMismatch {
                    left: 2,
                    right: de.degree(),
                });
            }
            for (mask, c) in de.mask_terms() {
                let mut it = mask_indices(mask);
                let (i, j) = (it.next().unwrap(), it.next().unwrap());
                constants[(k * n + i) * n + j] = -c;
                constants[(k * n + j) * n + i] = c;
            }
        }
        Ok(LieAlgebra {
            dim: n,
            constants,
            differential,
        })
    }

    /// Builds an algebra from structure constants `c^k_{ij}` laid out as
    /// `data[(k * n + i) * n + j]`. The constants must be antisymmetric in
    /// `i, j` up to `1e-12` relative.
    pub fn from_structure_constants(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        if data.len() != n * n * n {
            return Err(GeometryError::DimensionMismatch {
                expected: n * n * n,
                found: data.len(),
            });
        }
        let scale = data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut violation: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let s = data[(k * n + i) * n + j] + data[(k * n + j) * n + i];
                    violation = violation.max(s.abs());
                }
            }
        }
        if violation > 1e-12 * scale {
            return Err(GeometryError::NotAntisymmetric(violation));
        }
        let mut differential = Vec::with_capacity(n);
        let mut constants = vec![0.0; n * n * n];
        for k in 0..n {
            let mut de = KForm::zero(n, 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = 0.5 * (data[(k * n + i) * n + j] - data[(k * n + j) * n + i]);
                    constants[(k * n + i) * n + j] = c;
                    constants[(k * n + j) * n + i] = -c;
                    de.add_to_mask((1 << i) | (1 << j), -c);
                }
            }
            differential.push(de);
        }
        Ok(LieAlgebra {
            dim: n,
            constants,
            differential,
        })
    }

    /// The abelian algebra `R^n`.
    pub fn abelian(n: usize) -> Self {
        Self::from_structure_equations((0..n).map(|_| KForm::vanishing(n, 2)).collect())
            .expect("abelian algebra")
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}` with 0-based indices.
    #[inline]
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.constants[(k * self.dim + i) * self.dim + j]
    }

    /// Raw constants, `data[(k * n + i) * n + j] = c^k_{ij}`.
    pub fn structure_constants(&self) -> &[f64] {
        &self.constants
    }

    /// `de^{k+1}` for 0-based `k`.
    pub fn differential_of_basis(&self, k: usize) -> &KForm {
        &self.differential[k]
    }

    pub fn structure_equations(&self) -> &[KForm] {
        &self.differential
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(|&c| c == 0.0)
    }

    fn check_vector(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            })
        } else {
            Ok(())
        }
    }

    /// `[X, Y]` for component vectors.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<DVector<f64>> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.structure_constant(k, i, j);
                }
            }
        }
        Ok(out)
    }

    /// `[e_i, e_j]` for 0-based indices.
    pub fn bracket_basis(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_fn(self.dim, |k, _| self.structure_constant(k, i, j))
    }

    /// Matrix of `ad_{e_i}`: entry `(k, j)` is `c^k_{ij}`.
    pub fn ad(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |k, j| self.structure_constant(k, i, j))
    }

    /// Chevalley–Eilenberg differential of an invariant form, extended from
    /// the structure equations as an anti-derivation.
    pub fn ce_differential(&self, a: &KForm) -> Result<KForm> {
        if a.dimension() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: a.dimension(),
            });
        }
        let degree = a.degree() + 1;
        if degree > self.dim {
            return Ok(KForm::vanishing(self.dim, degree));
        }
        let mut out = KForm::zero(self.dim, degree);
        for (mask, c) in a.mask_terms() {
            for (pos, i) in mask_indices(mask).enumerate() {
                let before = mask & ((1u32 << i) - 1);
                let after = mask & !((1u32 << (i + 1)) - 1);
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                for (m2, c2) in self.differential[i].mask_terms() {
                    if m2 & (before | after) != 0 {
                        continue;
                    }
                    let s = wedge_sign(before, m2) * wedge_sign(before | m2, after);
                    out.add_to_mask(before | m2 | after, sign * s * c * c2);
                }
            }
        }
        Ok(out)
    }

    /// Checks `d(de^k) = 0` for every `k` (equivalently, Jacobi).
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let d_squared = self
            .differential
            .iter()
            .map(|de| self.ce_differential(de).map(|f| f.max_abs()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let jacobi = self.jacobi_residual();
        ValidationReport {
            d_squared,
            jacobi,
            tolerance: tol,
            passed: d_squared <= tol,
        }
    }

    /// `max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += self.structure_constant(l, i, j) * self.structure_constant(m, l, k)
                                + self.structure_constant(l, j, k) * self.structure_constant(m, l, i)
                                + self.structure_constant(l, k, i) * self.structure_constant(m, l, j);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `tr(ad_{e_i}) = sum_k c^k_{ik}`.
    pub fn unimodularity(&self, tol: f64) -> Unimodularity {
        let n = self.dim;
        let traces: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|k| self.structure_constant(k, i, k)).sum())
            .collect();
        let unimodular = traces.iter().all(|t| t.abs() <= tol);
        Unimodularity { traces, unimodular }
    }

    /// The same algebra in the basis `f_a = sum_i p[(i, a)] e_i`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.nrows() != n || p.ncols() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: p.nrows(),
            });
        }
        let p_inv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::InvalidInput("basis change is singular".into()))?;
        // bracket of the new basis vectors, expressed in the old basis
        let mut data = vec![0.0; n * n * n];
        for a in 0..n {
            let fa = p.column(a).clone_owned();
            for b in (a + 1)..n {
                let fb = p.column(b).clone_owned();
                let old = self.bracket(fa.as_slice(), fb.as_slice())?;
                let new = &p_inv * old;
                for c in 0..n {
                    data[(c * n + a) * n + b] = new[c];
                    data[(c * n + b) * n + a] = -new[c];
                }
            }
        }
        LieAlgebra::from_structure_constants(n, data)
    }

    /// Direct sum `self ⊕ other`; the basis of `other` follows that of `self`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n1 = self.dim;
        let n = n1 + other.dim;
        let mut differential = Vec::with_capacity(n);
        for de in &self.differential {
            differential.push(de.embed(n, 0));
        }
        for de in &other.differential {
            differential.push(de.embed(n, n1));
        }
        LieAlgebra::from_structure_equations(differential).expect("direct sum")
    }

    /// Largest structure-constant difference to another algebra.
    pub fn max_abs_diff(&self, other: &LieAlgebra) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.constants
            .iter()
            .zip(&other.constants)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A left-invariant metric, stored as its symmetric positive-definite Gram
/// matrix on the algebra basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    matrix: DMatrix<f64>,
}

impl Metric {
    /// Validates symmetry (relative `1e-10`) and positive definiteness.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: matrix.ncols(),
            });
        }
        if n == 0 || n > MAX_DIMENSION {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        let scale = matrix.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let asym = crate::linalg::asymmetry(&matrix);
        if !asym.is_finite() || asym > 1e-10 * scale {
            return Err(GeometryError::MetricNotSymmetric(asym));
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let smallest = sym.clone().symmetric_eigenvalues().min();
        if !(smallest > 1e-12 * scale) {
            return Err(GeometryError::MetricNotPositiveDefinite(smallest));
        }
        Ok(Metric { matrix: sym })
    }

    pub fn identity(n: usize) -> Self {
        Metric {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Metric::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dimension();
        self.matrix == DMatrix::identity(n, n)
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.matrix
            .clone()
            .cholesky()
            .expect("metric is positive definite")
            .inverse()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `c * g` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Metric::new(&self.matrix * c)
    }

    /// `g(x, y)`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dimension();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.matrix[(i, j)] * y[j];
            }
        }
        s
    }

    /// Gram–Schmidt orthonormal frame of `e_1, ..., e_n`: an upper-triangular
    /// matrix `P` whose columns are the frame vectors, so `P^T g P = I`.
    pub fn orthonormal_frame(&self) -> DMatrix<f64> {
        let l = self
            .matrix
            .clone()
            .cholesky()
            .expect("metric is positive definite")
            .l();
        l.transpose()
            .try_inverse()
            .expect("Cholesky factor is invertible")
    }

    /// The metric `P^T g P` on the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        Metric::new(p.transpose() * &self.matrix * p)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Metric) -> Metric {
        let (n1, n2) = (self.dimension(), other.dimension());
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.matrix);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&other.matrix);
        Metric { matrix: m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(n: usize, idx: &[usize]) -> KForm {
        KForm::basis(n, idx)
    }

    /// Direct evaluation of `d eta(X_0, ..., X_k)` from brackets.
    fn d_oracle(alg: &LieAlgebra, eta: &KForm, args: &[usize]) -> f64 {
        let n = alg.dimension();
        let mut total = 0.0;
        for i in 0..args.len() {
            for j in (i + 1)..args.len() {
                let br = alg.bracket_basis(args[i], args[j]);
                let mut vecs: Vec<Vec<f64>> = vec![br.as_slice().to_vec()];
                for (p, &a) in args.iter().enumerate() {
                    if p != i && p != j {
                        vecs.push(crate::linalg::unit(n, a).as_slice().to_vec());
                    }
                }
                let refs: Vec<&[f64]> = vecs.iter().map(|v| v.as_slice()).collect();
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * eta.evaluate(&refs);
            }
        }
        total
    }

    #[test]
    fn abelian_validates() {
        let r = LieAlgebra::abelian(5).validate(1e-12);
        assert!(r.passed);
        assert_eq!(r.d_squared, 0.0);
    }

    #[test]
    fn example_validates() {
        let alg = catalog::einstein_example();
        let r = alg.validate(1e-12);
        assert!(r.passed, "{r:?}");
        assert!(r.jacobi < 1e-12);
    }

    #[test]
    fn listed_three_dimensional_case_is_a_lie_algebra() {
        // de^3 = e^{12}, de^1 = e^{23}: d(e^{12}) = e^{23} ^ e^2 = 0 and
        // d(e^{23}) = -e^2 ^ e^{12} = 0, so this one is consistent.
        let alg = LieAlgebra::from_structure_equations(vec![
            e(3, &[2, 3]),
            KForm::zero(3, 2),
            e(3, &[1, 2]),
        ])
        .unwrap();
        assert!(alg.validate(1e-12).passed);
        assert!(alg.jacobi_residual() < 1e-15);
    }

    #[test]
    fn inconsistent_equations_fail() {
        // de^1 = e^{12}, de^3 = e^{13}: d(de^3) = de^1 ^ e^3 = e^{123}
        let alg = LieAlgebra::from_structure_equations(vec![
            e(3, &[1, 2]),
            KForm::zero(3, 2),
            e(3, &[1, 3]),
        ])
        .unwrap();
        let r = alg.validate(1e-9);
        assert!(!r.passed);
        assert!((r.d_squared - 1.0).abs() < 1e-15);
        assert!(r.jacobi > 0.5);
        let oracle = d_oracle(&alg, alg.differential_of_basis(2), &[0, 1, 2]);
        assert!((oracle - 1.0).abs() < 1e-15);
    }

    #[test]
    fn brackets_of_example() {
        let alg = catalog::einstein_example();
        let b12 = alg.bracket_basis(0, 1);
        assert_eq!(b12.as_slice(), &[0.0, 0.0, -1.0, 0.0, 0.0]);
        let b14 = alg.bracket_basis(0, 3);
        assert_eq!(b14.as_slice(), &[-0.5, 0.0, 0.0, 0.0, 0.0]);
        let ab = LieAlgebra::abelian(5);
        assert_eq!(ab.bracket_basis(0, 1).norm(), 0.0);
        assert!(alg.bracket(&[1.0; 4], &[1.0; 5]).is_err());
    }

    #[test]
    fn differential_on_example() {
        let alg = catalog::einstein_example();
        assert!(alg.ce_differential(&e(5, &[5])).unwrap().is_zero(0.0));
        let omega = e(5, &[1, 2]) + e(5, &[3, 4]);
        assert!(alg.ce_differential(&omega).unwrap().is_zero(1e-15));
        let de3 = alg.ce_differential(&e(5, &[3])).unwrap();
        assert!(de3.approx_eq(&omega, 0.0));
    }

    #[test]
    fn differential_matches_bracket_formula() {
        let alg = catalog::einstein_example();
        let n = 5;
        let eta = e(n, &[1, 3]) * 0.7 + e(n, &[2, 5]) * -1.3 + e(n, &[4, 5]) * 0.2;
        let d = alg.ce_differential(&eta).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let got = d.coefficient(&[i + 1, j + 1, k + 1]);
                    let want = d_oracle(&alg, &eta, &[i, j, k]);
                    assert!((got - want).abs() < 1e-14, "{i}{j}{k}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn traces_of_adjoint() {
        let u = catalog::einstein_example().unimodularity(1e-9);
        assert!((u.traces[3] - 2.0).abs() < 1e-15);
        assert!(!u.unimodular);
        assert!(LieAlgebra::abelian(5).unimodularity(1e-9).unimodular);
        assert!(catalog::heisenberg_plus_r2().unimodularity(1e-9).unimodular);
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let mut data = vec![0.0; 8];
        data[1] = 1.0; // c^0_{01} without its partner
        assert!(matches!(
            LieAlgebra::from_structure_constants(2, data),
            Err(GeometryError::NotAntisymmetric(_))
        ));
    }

    #[test]
    fn basis_change_round_trip() {
        let alg = catalog::einstein_example();
        let p = DMatrix::from_fn(5, 5, |i, j| if i == j { 1.0 } else { 0.1 * (i + 2 * j) as f64 });
        let q = alg.change_basis(&p).unwrap();
        assert!(q.validate(1e-12).passed);
        let back = q.change_basis(&p.clone().try_inverse().unwrap()).unwrap();
        assert!(back.max_abs_diff(&alg) < 1e-12);
    }

    #[test]
    fn metric_validation() {
        assert!(Metric::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
        assert!(matches!(
            Metric::diagonal(&[1.0, -1.0]),
            Err(GeometryError::MetricNotPositiveDefinite(_))
        ));
        let g = Metric::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0])).unwrap();
        let p = g.orthonormal_frame();
        let id = p.transpose() * g.matrix() * &p;
        assert!((id - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-14);
        assert_eq!(p[(1, 0)], 0.0);
    }
}
