//! Named Lie algebras and seeded random generators of valid inputs.
//!
//! Random algebras are assembled from families that satisfy the Jacobi
//! identity by construction (semidirect products by commuting derivations,
//! two-step nilpotent algebras, simple summands) and then written in a random
//! well-conditioned basis, so the generated structure constants are dense.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::exterior::KForm;
use crate::lie_algebra::{LieAlgebra, Metric};

/// The five-dimensional solvable algebra with
/// `de^1 = (sqrt 3 / 2) e^{25} + 1/2 e^{14}`, `de^2 = (sqrt 3 / 2) e^{15} + 1/2 e^{24}`,
/// `de^3 = e^{12} + e^{34}`, `de^4 = de^5 = 0`.
pub fn einstein_example() -> LieAlgebra {
    let n = 5;
    let h = 3f64.sqrt() / 2.0;
    let de1 = KForm::basis(n, &[2, 5]) * h + KForm::basis(n, &[1, 4]) * 0.5;
    let de2 = KForm::basis(n, &[1, 5]) * h + KForm::basis(n, &[2, 4]) * 0.5;
    let de3 = KForm::basis(n, &[1, 2]) + KForm::basis(n, &[3, 4]);
    LieAlgebra::from_structure_equations(vec![de1, de2, de3, KForm::zero(n, 2), KForm::zero(n, 2)])
        .expect("example algebra")
}

/// Heisenberg algebra plus a two-dimensional abelian summand: `de^3 = e^{12}`.
pub fn heisenberg_plus_r2() -> LieAlgebra {
    let n = 5;
    let mut de: Vec<KForm> = (0..n).map(|_| KForm::zero(n, 2)).collect();
    de[2] = KForm::basis(n, &[1, 2]);
    LieAlgebra::from_structure_equations(de).expect("Heisenberg algebra")
}

/// `alpha = e^{2n+1}` and `omega = e^{12} + ... + e^{2n-1,2n}` in dimension `2n+1`.
pub fn standard_contact_forms(n: usize) -> (KForm, KForm) {
    let dim = 2 * n + 1;
    let alpha = KForm::basis(dim, &[dim]);
    (alpha, standard_symplectic_form(dim, n))
}

/// `e^{12} + ... + e^{2n-1,2n}` as a form on a space of dimension `dim`.
pub fn standard_symplectic_form(dim: usize, n: usize) -> KForm {
    let mut omega = KForm::zero(dim, 2);
    for i in 0..n {
        omega += &KForm::basis(dim, &[2 * i + 1, 2 * i + 2]);
    }
    omega
}

/// An algebra together with an almost contact metric structure on it.
#[derive(Clone, Debug)]
pub struct ContactData {
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub alpha: KForm,
    pub omega: KForm,
}

impl ContactData {
    /// The example algebra with `alpha = e^5`, `omega = e^{12} + e^{34}` and the
    /// identity metric.
    pub fn einstein_example() -> Self {
        let (alpha, omega) = standard_contact_forms(2);
        ContactData {
            algebra: einstein_example(),
            metric: Metric::identity(5),
            alpha,
            omega,
        }
    }

    /// The flat structure on `R^{2n+1}`.
    pub fn abelian(n: usize) -> Self {
        let (alpha, omega) = standard_contact_forms(n);
        ContactData {
            algebra: LieAlgebra::abelian(2 * n + 1),
            metric: Metric::identity(2 * n + 1),
            alpha,
            omega,
        }
    }

    /// The same structure in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Self {
        ContactData {
            algebra: self.algebra.change_basis(p).expect("invertible basis change"),
            metric: self.metric.change_basis(p).expect("invertible basis change"),
            alpha: self.alpha.pullback(p),
            omega: self.omega.pullback(p),
        }
    }

    /// Replaces `(alpha, omega, g)` by `(sqrt(c) alpha, c omega, c g)`, which is
    /// again compatible.
    pub fn scaled(&self, c: f64) -> Self {
        ContactData {
            algebra: self.algebra.clone(),
            metric: self.metric.scaled(c).expect("positive scale"),
            alpha: &self.alpha * c.sqrt(),
            omega: &self.omega * c,
        }
    }
}

fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, amp: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-amp..amp))
}

fn constants_to_algebra(n: usize, data: Vec<f64>) -> LieAlgebra {
    LieAlgebra::from_structure_constants(n, data).expect("antisymmetric by construction")
}

fn set_bracket(data: &mut [f64], n: usize, i: usize, j: usize, value: &DVector<f64>) {
    for k in 0..n {
        data[(k * n + i) * n + j] = value[k];
        data[(k * n + j) * n + i] = -value[k];
    }
}

/// `R e_0 ⋉_A R^{n-1}` with a random derivation `A`.
pub fn random_almost_abelian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LieAlgebra {
    assert!(n >= 2);
    let a = uniform_matrix(rng, n - 1, n - 1, 1.0);
    let mut data = vec![0.0; n * n * n];
    for j in 1..n {
        let mut v = DVector::zeros(n);
        for k in 1..n {
            v[k] = a[(k - 1, j - 1)];
        }
        set_bracket(&mut data, n, 0, j, &v);
    }
    constants_to_algebra(n, data)
}

/// A two-step nilpotent algebra with brackets from the first `p` basis
/// vectors into the span of the remaining ones.
pub fn random_two_step_nilpotent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LieAlgebra {
    assert!(n >= 3);
    let p = rng.random_range(2..n);
    let mut data = vec![0.0; n * n * n];
    for i in 0..p {
        for j in (i + 1)..p {
            let mut v = DVector::zeros(n);
            for k in p..n {
                v[k] = rng.random_range(-1.0..1.0);
            }
            set_bracket(&mut data, n, i, j, &v);
        }
    }
    constants_to_algebra(n, data)
}

/// `R^2 ⋉ R^{n-2}` acting by the commuting derivations `A` and a polynomial in `A`.
pub fn random_double_extension<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LieAlgebra {
    assert!(n >= 3);
    let m = n - 2;
    let a = uniform_matrix(rng, m, m, 1.0);
    let (c0, c1, c2) = (
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-0.5..0.5),
    );
    let b = DMatrix::identity(m, m) * c0 + &a * c1 + &a * &a * c2;
    let mut data = vec![0.0; n * n * n];
    for (x, mat) in [(0usize, &a), (1usize, &b)] {
        for j in 0..m {
            let mut v = DVector::zeros(n);
            for k in 0..m {
                v[k + 2] = mat[(k, j)];
            }
            set_bracket(&mut data, n, x, j + 2, &v);
        }
    }
    constants_to_algebra(n, data)
}

/// `so(3)` (compact) or `sl(2, R)` (split).
pub fn simple_rank_one(compact: bool) -> LieAlgebra {
    let n = 3;
    let mut data = vec![0.0; 27];
    let v = |x: [f64; 3]| DVector::from_column_slice(&x);
    if compact {
        set_bracket(&mut data, n, 0, 1, &v([0.0, 0.0, 1.0]));
        set_bracket(&mut data, n, 1, 2, &v([1.0, 0.0, 0.0]));
        set_bracket(&mut data, n, 2, 0, &v([0.0, 1.0, 0.0]));
    } else {
        // h, x, y with [h,x] = 2x, [h,y] = -2y, [x,y] = h
        set_bracket(&mut data, n, 0, 1, &v([0.0, 2.0, 0.0]));
        set_bracket(&mut data, n, 0, 2, &v([0.0, 0.0, -2.0]));
        set_bracket(&mut data, n, 1, 2, &v([1.0, 0.0, 0.0]));
    }
    constants_to_algebra(n, data)
}

/// A random invertible matrix close enough to the identity to be well conditioned.
pub fn random_basis_change<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    loop {
        let p = DMatrix::identity(n, n) + uniform_matrix(rng, n, n, 0.45);
        let sv = p.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if lo > 0.25 && hi / lo < 8.0 {
            return p;
        }
    }
}

/// A random Lie algebra of dimension `n >= 3`, from one of several families
/// that satisfy Jacobi by construction, in a random basis.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LieAlgebra {
    assert!(n >= 3, "random algebras start in dimension 3");
    let base = match rng.random_range(0..5) {
        0 => random_almost_abelian(rng, n),
        1 => random_two_step_nilpotent(rng, n),
        2 => random_double_extension(rng, n),
        3 => {
            let s = simple_rank_one(rng.random_bool(0.5));
            match n - 3 {
                0 => s,
                1 => s.direct_sum(&LieAlgebra::abelian(1)),
                k => s.direct_sum(&random_almost_abelian(rng, k)),
            }
        }
        _ => {
            let k = rng.random_range(2..=n - 1).min(n - 1);
            let first = random_almost_abelian(rng, k);
            let rest = n - k;
            let second = if rest >= 2 {
                random_almost_abelian(rng, rest)
            } else {
                LieAlgebra::abelian(rest)
            };
            first.direct_sum(&second)
        }
    };
    let p = random_basis_change(rng, n);
    base.change_basis(&p).expect("well-conditioned basis change")
}

/// `A A^T + 0.5 I` for a random `A` with entries in `[-1, 1)`.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Metric {
    let a = uniform_matrix(rng, n, n, 1.0);
    Metric::new(&a * a.transpose() + DMatrix::identity(n, n) * 0.5).expect("positive definite")
}

/// Matrix of the standard complex structure `J e_{2i-1} = e_{2i}` on `R^{2n}`.
pub fn standard_complex_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(2 * i + 1, 2 * i)] = 1.0;
        j[(2 * i, 2 * i + 1)] = -1.0;
    }
    j
}

/// A random element of `u(n)`: skew-symmetric and commuting with `J`.
pub fn random_unitary_derivation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let x = uniform_matrix(rng, 2 * n, 2 * n, 1.0);
    let x = &x - x.transpose();
    let j = standard_complex_structure(n);
    (&x - &j * &x * &j) * 0.5
}

/// A random element of `sp(2n)` for the standard symplectic form.
pub fn random_symplectic_derivation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let s = uniform_matrix(rng, 2 * n, 2 * n, 1.0);
    let s = (&s + s.transpose()) * 0.5;
    // matrix W of omega has W = -J, and D = W^{-1} S = J S lies in sp
    standard_complex_structure(n) * s
}

/// `R xi ⋉_D R^{2n}` with the standard `(alpha, omega)` and identity metric.
/// The structure is almost cokähler when `D` is in `sp(2n)`.
pub fn semidirect_contact(d: &DMatrix<f64>) -> ContactData {
    let m = d.nrows();
    assert!(m.is_multiple_of(2) && d.ncols() == m);
    let n = m / 2;
    let dim = m + 1;
    let mut data = vec![0.0; dim * dim * dim];
    let xi = m;
    for j in 0..m {
        let mut v = DVector::zeros(dim);
        for k in 0..m {
            v[k] = d[(k, j)];
        }
        set_bracket(&mut data, dim, xi, j, &v);
    }
    let (alpha, omega) = standard_contact_forms(n);
    ContactData {
        algebra: constants_to_algebra(dim, data),
        metric: Metric::identity(dim),
        alpha,
        omega,
    }
}

/// A random almost cokähler structure of dimension `2n+1` written in a random
/// basis. With `killing` the Reeb field is a Killing field.
pub fn random_almost_cokahler<R: Rng + ?Sized>(rng: &mut R, n: usize, killing: bool) -> ContactData {
    let mut d = random_unitary_derivation(rng, n);
    if !killing {
        d += random_symplectic_derivation(rng, n);
    }
    let base = semidirect_contact(&d);
    let p = random_basis_change(rng, 2 * n + 1);
    base.change_basis(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_algebras_satisfy_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=6 {
            for _ in 0..25 {
                let alg = random_algebra(&mut rng, n);
                let r = alg.validate(1e-12);
                assert!(r.passed, "dim {n}: {r:?}");
            }
        }
    }

    #[test]
    fn simple_algebras_are_unimodular() {
        for compact in [true, false] {
            let s = simple_rank_one(compact);
            assert!(s.validate(0.0).passed);
            assert!(s.unimodularity(0.0).unimodular);
        }
    }

    #[test]
    fn random_contact_data_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=2 {
            for killing in [false, true] {
                let c = random_almost_cokahler(&mut rng, n, killing);
                assert!(c.algebra.validate(1e-12).passed);
                assert!(c.algebra.ce_differential(&c.alpha).unwrap().is_zero(1e-12));
                assert!(c.algebra.ce_differential(&c.omega).unwrap().is_zero(1e-12));
            }
        }
    }

    #[test]
    fn unitary_derivation_commutes_with_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = random_unitary_derivation(&mut rng, 2);
        let j = standard_complex_structure(2);
        assert!((&k * &j - &j * &k).abs().max() < 1e-15);
        assert!((&k + k.transpose()).abs().max() < 1e-15);
    }
}
