//! Riemann curvature of a left-invariant metric, with Ricci and scalar curvature.

use nalgebra::{DMatrix, DVector};

use super::ConnectionData;
use crate::exterior::KForm;
use crate::linalg;

/// Curvature `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_{[X,Y]} Z` on the
/// orthonormal frame.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    dim: usize,
    /// `endo[a * n + b]` is `R(f_a, f_b)` as a matrix.
    endo: Vec<DMatrix<f64>>,
    ricci: DMatrix<f64>,
    scalar: f64,
}

/// `Some(s/n)` when `max |ric - (s/n) g| <= tol` on the orthonormal frame.
pub fn einstein_check(curvature: &CurvatureData, tol: f64) -> Option<f64> {
    curvature.einstein_constant(tol)
}

impl CurvatureData {
    pub fn new(conn: &ConnectionData) -> Self {
        let n = conn.dimension();
        let alg = conn.frame_algebra();
        let mut endo = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (na, nb) = (conn.nabla(a), conn.nabla(b));
                let mut r = na * nb - nb * na;
                for c in 0..n {
                    let cc = alg.structure_constant(c, a, b);
                    if cc != 0.0 {
                        r -= conn.nabla(c) * cc;
                    }
                }
                endo.push(r);
            }
        }
        // ric(X, Y) = sum_i <R(f_i, X) Y, f_i>
        let ricci = DMatrix::from_fn(n, n, |a, b| (0..n).map(|i| endo[i * n + a][(i, b)]).sum());
        let ricci = (&ricci + ricci.transpose()) * 0.5;
        let scalar = ricci.trace();
        CurvatureData {
            dim: n,
            endo,
            ricci,
            scalar,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// `R(f_a, f_b)`; column `d` is `R(f_a, f_b) f_d`.
    pub fn endomorphism(&self, a: usize, b: usize) -> &DMatrix<f64> {
        &self.endo[a * self.dim + b]
    }

    /// `R(X, Y)` for frame vectors.
    pub fn endomorphism_along(&self, x: &[f64], y: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let w = x[a] * y[b];
                if w != 0.0 {
                    m += self.endomorphism(a, b) * w;
                }
            }
        }
        m
    }

    /// `R_{ijkl} = <R(f_i, f_j) f_l, f_k>`.
    #[inline]
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.endo[i * self.dim + j][(k, l)]
    }

    /// `R(X, Y) Z` for frame vectors.
    pub fn apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> DVector<f64> {
        self.endomorphism_along(x, y) * DVector::from_column_slice(z)
    }

    pub fn ricci(&self) -> &DMatrix<f64> {
        &self.ricci
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    /// `max |ric - (s/n) g|`.
    pub fn einstein_deviation(&self) -> f64 {
        let n = self.dim;
        let target = DMatrix::identity(n, n) * (self.scalar / n as f64);
        linalg::max_abs(&(&self.ricci - target))
    }

    /// `Some(s/n)` when the metric is Einstein to `tol` in max norm.
    pub fn einstein_constant(&self, tol: f64) -> Option<f64> {
        (self.einstein_deviation() <= tol).then(|| self.scalar / self.dim as f64)
    }

    /// Largest violation of `R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.component(i, j, k, l);
                        worst = worst
                            .max((r + self.component(j, i, k, l)).abs())
                            .max((r + self.component(i, j, l, k)).abs())
                            .max((r - self.component(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest component of `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y` on frame triples.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for m in 0..n {
                        let s = self.endomorphism(x, y)[(m, z)]
                            + self.endomorphism(y, z)[(m, x)]
                            + self.endomorphism(z, x)[(m, y)];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `R(f_a, f_b)` acting on a form as a derivation.
    pub fn act_on_form(&self, a: usize, b: usize, eta: &KForm) -> KForm {
        eta.derivation(self.endomorphism(a, b))
    }

    pub fn is_flat(&self, tol: f64) -> bool {
        self.endo.iter().all(|m| linalg::max_abs(m) <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie_algebra::{LieAlgebra, Metric};

    fn curvature_of(alg: &LieAlgebra) -> CurvatureData {
        let g = Metric::identity(alg.dimension());
        CurvatureData::new(&ConnectionData::new(alg, &g).unwrap())
    }

    #[test]
    fn flat_algebra() {
        let c = curvature_of(&LieAlgebra::abelian(5));
        assert!(c.is_flat(0.0));
        assert_eq!(c.scalar(), 0.0);
        assert_eq!(einstein_check(&c, 1e-9), Some(0.0));
    }

    #[test]
    fn example_is_einstein() {
        let c = curvature_of(&catalog::einstein_example());
        let tau = einstein_check(&c, 1e-9).expect("Einstein");
        assert!((tau + 1.5).abs() < 1e-14);
        assert!((c.scalar() + 7.5).abs() < 1e-13);
        assert!(c.symmetry_residual() < 1e-14);
        assert!(c.bianchi_residual() < 1e-14);
    }

    #[test]
    fn heisenberg_ricci() {
        let c = curvature_of(&catalog::heisenberg_plus_r2());
        let expect = DMatrix::from_diagonal(&DVector::from_column_slice(&[-0.5, -0.5, 0.5, 0.0, 0.0]));
        assert!(linalg::max_abs(&(c.ricci() - expect)) < 1e-15);
        assert_eq!(einstein_check(&c, 1e-9), None);
    }

    #[test]
    fn round_sphere_sign() {
        // so(3) with the bi-invariant metric making [e1,e2] = e3 has sectional
        // curvature 1/4 and ric = 1/2 g.
        let c = curvature_of(&catalog::simple_rank_one(true));
        let tau = einstein_check(&c, 1e-12).unwrap();
        assert!((tau - 0.5).abs() < 1e-15);
        // <R(e1,e2)e2, e1> = 1/4
        assert!((c.component(0, 1, 0, 1) - 0.25).abs() < 1e-15);
    }
}
