//! Exterior algebra over a finite-dimensional inner-product space.
//!
//! A [`KForm`] stores the coefficients of a homogeneous alternating form on
//! strictly increasing multi-indices. Multi-indices are written 1-based in the
//! public API (`e^{12}` is `KForm::basis(n, &[1, 2])`); internally each
//! multi-index is a bitmask with bit `i - 1` set for every index `i`.
//!
//! Inner products use the determinant normalization: on an orthonormal
//! coframe the basis forms `e^{i_1 ... i_k}` are orthonormal, so
//! `|e^{12} + e^{34}|^2 = 2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::lie_algebra::Metric;

/// Largest supported dimension (multi-indices are stored as `u32` bitmasks).
pub const MAX_DIMENSION: usize = 32;

/// Orientation relative to the ordered basis `e^1 ^ ... ^ e^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            other => Err(GeometryError::InvalidInput(format!(
                "orientation must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// A homogeneous alternating form of fixed degree on an `n`-dimensional space.
#[derive(Clone, Debug)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u32, f64>,
}

// ---------------------------------------------------------------------------
// bitmask helpers

#[inline]
pub(crate) fn mask_indices(mask: u32) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Sign of `e^A ^ e^B` relative to `e^{A u B}` for disjoint masks.
#[inline]
pub(crate) fn wedge_sign(a: u32, b: u32) -> f64 {
    let mut count = 0u32;
    for i in mask_indices(a) {
        count += (b & ((1u32 << i) - 1)).count_ones();
    }
    if count.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All masks of the given popcount among the low `dim` bits, in increasing
/// numeric (colexicographic) order.
pub(crate) fn basis_masks(dim: usize, degree: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if degree > dim {
        return out;
    }
    if degree == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack enumerates k-subsets in increasing numeric order.
    let mut m: u64 = (1u64 << degree) - 1;
    let limit = 1u64 << dim;
    while m < limit {
        out.push(m as u32);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

fn full_mask(dim: usize) -> u32 {
    if dim == 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

/// Sorts a tuple of distinct 0-based indices, returning its mask and the sign
/// of the sorting permutation. Repeated indices give `None`.
fn sort_tuple(tuple: &[usize]) -> Option<(u32, f64)> {
    let mut mask = 0u32;
    let mut sign = 1.0;
    for (pos, &i) in tuple.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        // inversions with earlier entries larger than i
        for &j in &tuple[..pos] {
            if j > i {
                sign = -sign;
            }
        }
    }
    Some((mask, sign))
}

fn submatrix_det(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    match k {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
                - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        _ => DMatrix::from_fn(k, k, |r, c| m[(rows[r], cols[c])]).determinant(),
    }
}

fn check_dimension(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIMENSION {
        Err(GeometryError::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------

impl KForm {
    /// The zero form of the given degree.
    ///
    /// # Panics
    /// If `dim` is outside `1..=32` or `degree > dim`.
    pub fn zero(dim: usize, degree: usize) -> Self {
        check_dimension(dim).expect("invalid dimension");
        assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The zero form of a degree that may exceed the dimension.
    pub(crate) fn vanishing(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut f = KForm::zero(dim, 0);
        f.coeffs.insert(0, value);
        f
    }

    /// The basis form `e^{i_1} ^ ... ^ e^{i_k}` for 1-based indices in any
    /// order; repeated indices give the zero form.
    ///
    /// # Panics
    /// If an index is outside `1..=dim`.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::try_basis(dim, indices).expect("invalid basis multi-index")
    }

    pub fn try_basis(dim: usize, indices: &[usize]) -> Result<Self> {
        check_dimension(dim)?;
        if indices.len() > dim {
            return Err(GeometryError::InvalidDegree {
                degree: indices.len(),
                dimension: dim,
            });
        }
        let mut zero_based = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > dim {
                return Err(GeometryError::IndexOutOfRange {
                    index: i,
                    dimension: dim,
                });
            }
            zero_based.push(i - 1);
        }
        let mut f = KForm::zero(dim, indices.len());
        if let Some((mask, sign)) = sort_tuple(&zero_based) {
            f.coeffs.insert(mask, sign);
        }
        Ok(f)
    }

    /// Builds a form from `(indices, coefficient)` terms with 1-based indices.
    /// Repeated multi-indices accumulate.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        check_dimension(dim)?;
        if degree > dim {
            return Err(GeometryError::InvalidDegree {
                degree,
                dimension: dim,
            });
        }
        let mut f = KForm::zero(dim, degree);
        for (indices, c) in terms {
            if indices.len() != degree {
                return Err(GeometryError::DegreeMismatch {
                    left: degree,
                    right: indices.len(),
                });
            }
            f += &(KForm::try_basis(dim, &indices)? * c);
        }
        Ok(f)
    }

    /// A 1-form from its coefficients on `e^1, ..., e^n`.
    pub fn one_form(coefficients: &[f64]) -> Self {
        let dim = coefficients.len();
        let mut f = KForm::zero(dim, 1);
        for (i, &c) in coefficients.iter().enumerate() {
            if c != 0.0 {
                f.coeffs.insert(1 << i, c);
            }
        }
        f
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient on `e^{indices}` (1-based, any order, sign-adjusted).
    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        if indices.len() != self.degree || indices.iter().any(|&i| i == 0 || i > self.dim) {
            return 0.0;
        }
        let zero_based: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        match sort_tuple(&zero_based) {
            Some((mask, sign)) => sign * self.coeffs.get(&mask).copied().unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// Non-zero terms as `(1-based increasing indices, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.coeffs
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(&m, &c)| (mask_indices(m).map(|i| i + 1).collect(), c))
    }

    pub(crate) fn mask_terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.coeffs
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(&m, &c)| (m, c))
    }

    pub(crate) fn add_to_mask(&mut self, mask: u32, value: f64) {
        if value != 0.0 {
            *self.coeffs.entry(mask).or_insert(0.0) += value;
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Largest coefficient difference; infinite for incompatible forms.
    pub fn max_abs_diff(&self, other: &KForm) -> f64 {
        if self.dim != other.dim || self.degree != other.degree {
            return f64::INFINITY;
        }
        (self - other).max_abs()
    }

    pub fn approx_eq(&self, other: &KForm, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn pruned(&self, tol: f64) -> KForm {
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    /// Exterior product. A degree above the dimension gives a zero form.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Ok(KForm::vanishing(self.dim, degree));
        }
        let mut out = KForm::zero(self.dim, degree);
        for (a, ca) in self.mask_terms() {
            for (b, cb) in other.mask_terms() {
                if a & b == 0 {
                    out.add_to_mask(a | b, wedge_sign(a, b) * ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// `self ^ self ^ ... ^ self` (`p` factors); `p = 0` gives the constant 1.
    pub fn power(&self, p: usize) -> Result<KForm> {
        let mut out = KForm::scalar(self.dim, 1.0);
        for _ in 0..p {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Interior product `i_v` with a vector given by its components.
    pub fn interior(&self, v: &[f64]) -> Result<KForm> {
        if v.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if self.degree == 0 {
            return Err(GeometryError::InvalidDegree {
                degree: 0,
                dimension: self.dim,
            });
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (mask, c) in self.mask_terms() {
            for (pos, i) in mask_indices(mask).enumerate() {
                if v[i] == 0.0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.add_to_mask(mask & !(1 << i), sign * v[i] * c);
            }
        }
        Ok(out)
    }

    /// Interior product with the `i`-th basis vector (0-based).
    pub(crate) fn interior_basis(&self, i: usize) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (mask, c) in self.mask_terms() {
            if mask & (1 << i) != 0 {
                let pos = (mask & ((1u32 << i) - 1)).count_ones();
                let sign = if pos.is_multiple_of(2) { 1.0 } else { -1.0 };
                out.add_to_mask(mask & !(1 << i), sign * c);
            }
        }
        out
    }

    /// Evaluates the form on `k` vectors given by their components.
    pub fn evaluate(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let cols: Vec<usize> = (0..self.degree).collect();
        let m = DMatrix::from_fn(self.dim, self.degree, |r, c| vectors[c][r]);
        self.mask_terms()
            .map(|(mask, c)| {
                let rows: Vec<usize> = mask_indices(mask).collect();
                c * submatrix_det(&m, &rows, &cols)
            })
            .sum()
    }

    /// Orthonormal-coframe pairing `<a, b>` (determinant normalization).
    pub fn dot(&self, other: &KForm) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if self.degree != other.degree {
            return 0.0;
        }
        self.coeffs
            .iter()
            .map(|(m, c)| c * other.coeffs.get(m).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// Coefficients of the pulled-back form `eta(P., ..., P.)`, i.e. the
    /// components of `self` on the frame whose vectors are the columns of `p`.
    pub fn pullback(&self, p: &DMatrix<f64>) -> KForm {
        assert_eq!(p.nrows(), self.dim, "pullback row count");
        let new_dim = p.ncols();
        let mut out = KForm::zero(new_dim, self.degree);
        if self.degree == 0 {
            out.coeffs = self.coeffs.clone();
            return out;
        }
        let terms: Vec<(Vec<usize>, f64)> = self
            .mask_terms()
            .map(|(m, c)| (mask_indices(m).collect(), c))
            .collect();
        for target in basis_masks(new_dim, self.degree) {
            let cols: Vec<usize> = mask_indices(target).collect();
            let value: f64 = terms
                .iter()
                .map(|(rows, c)| c * submatrix_det(p, rows, &cols))
                .sum();
            out.add_to_mask(target, value);
        }
        out
    }

    /// Action of an endomorphism `A` as a derivation:
    /// `(A.eta)(Y_1, ..., Y_k) = -sum_i eta(Y_1, ..., A Y_i, ..., Y_k)`.
    ///
    /// `endo[(c, b)]` is the `c`-th component of `A e_b`.
    pub fn derivation(&self, endo: &DMatrix<f64>) -> KForm {
        assert_eq!(endo.nrows(), self.dim);
        assert_eq!(endo.ncols(), self.dim);
        let mut out = KForm::zero(self.dim, self.degree);
        for (mask, c) in self.mask_terms() {
            for i in mask_indices(mask) {
                let rest = mask & !(1 << i);
                for b in 0..self.dim {
                    let a_ib = endo[(i, b)];
                    if a_ib == 0.0 || rest & (1 << b) != 0 {
                        continue;
                    }
                    let (lo, hi) = if i < b { (i, b) } else { (b, i) };
                    let between = if hi - lo > 1 {
                        (rest & (((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1))).count_ones()
                    } else {
                        0
                    };
                    let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
                    out.add_to_mask(rest | (1 << b), -sign * a_ib * c);
                }
            }
        }
        out
    }

    /// Embeds the form into a larger space, shifting indices by `offset`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> KForm {
        assert!(self.dim + offset <= new_dim, "embedding does not fit");
        let mut out = KForm::zero(new_dim, self.degree);
        for (m, c) in self.mask_terms() {
            out.coeffs.insert(m << offset, c);
        }
        out
    }

    /// Dense coefficient vector in colexicographic basis order.
    pub fn to_dense(&self) -> DVector<f64> {
        let masks = basis_masks(self.dim, self.degree);
        DVector::from_iterator(
            masks.len(),
            masks.iter().map(|m| self.coeffs.get(m).copied().unwrap_or(0.0)),
        )
    }

    pub fn from_dense(dim: usize, degree: usize, values: &DVector<f64>) -> KForm {
        let masks = basis_masks(dim, degree);
        assert_eq!(masks.len(), values.len(), "dense length");
        let mut out = KForm::zero(dim, degree);
        for (m, v) in masks.into_iter().zip(values.iter()) {
            out.add_to_mask(m, *v);
        }
        out
    }

    /// The antisymmetric matrix `B[(i, j)] = beta(e_i, e_j)` of a 2-form.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.degree, 2, "to_matrix needs a 2-form");
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (mask, c) in self.mask_terms() {
            let mut it = mask_indices(mask);
            let (i, j) = (it.next().unwrap(), it.next().unwrap());
            m[(i, j)] += c;
            m[(j, i)] -= c;
        }
        m
    }

    /// The 2-form of the antisymmetric part of a bilinear form matrix.
    pub fn from_bilinear(m: &DMatrix<f64>) -> KForm {
        let dim = m.nrows();
        let mut out = KForm::zero(dim, 2);
        for j in 0..dim {
            for i in 0..j {
                out.add_to_mask((1 << i) | (1 << j), 0.5 * (m[(i, j)] - m[(j, i)]));
            }
        }
        out
    }

    /// Components of a 1-form as a vector.
    pub fn to_vector(&self) -> DVector<f64> {
        assert_eq!(self.degree, 1, "to_vector needs a 1-form");
        self.to_dense()
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (indices, c) in self.terms() {
            let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
            let sep = if self.dim > 9 { "," } else { "" };
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if indices.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*e^{{{}}}", idx.join(sep))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl AddAssign<&KForm> for KForm {
    fn add_assign(&mut self, rhs: &KForm) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        for (&m, &c) in &rhs.coeffs {
            self.add_to_mask(m, c);
        }
    }
}

impl SubAssign<&KForm> for KForm {
    fn sub_assign(&mut self, rhs: &KForm) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        for (&m, &c) in &rhs.coeffs {
            self.add_to_mask(m, -c);
        }
    }
}

impl Add<&KForm> for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(mut self, rhs: KForm) -> KForm {
        self += &rhs;
        self
    }
}

impl Sub<&KForm> for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(mut self, rhs: KForm) -> KForm {
        self -= &rhs;
        self
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(mut self) -> KForm {
        for c in self.coeffs.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<f64> for KForm {
    type Output = KForm;
    fn mul(mut self, rhs: f64) -> KForm {
        for c in self.coeffs.values_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<f64> for &KForm {
    type Output = KForm;
    fn mul(self, rhs: f64) -> KForm {
        self.clone() * rhs
    }
}

impl Mul<&KForm> for f64 {
    type Output = KForm;
    fn mul(self, rhs: &KForm) -> KForm {
        rhs.clone() * self
    }
}

// ---------------------------------------------------------------------------
// metric-dependent operations

/// Exterior product of two forms.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    a.wedge(b)
}

/// Interior product `i_v a`.
pub fn interior(v: &[f64], a: &KForm) -> Result<KForm> {
    a.interior(v)
}

/// Components `b^I = sum_J det(g^{-1}[I, J]) b_J` of the form with raised indices.
fn raise(b: &KForm, inverse: &DMatrix<f64>) -> BTreeMap<u32, f64> {
    let mut out = BTreeMap::new();
    if b.degree == 0 {
        for (&m, &c) in &b.coeffs {
            out.insert(m, c);
        }
        return out;
    }
    let terms: Vec<(Vec<usize>, f64)> = b
        .mask_terms()
        .map(|(m, c)| (mask_indices(m).collect(), c))
        .collect();
    for target in basis_masks(b.dim, b.degree) {
        let rows: Vec<usize> = mask_indices(target).collect();
        let v: f64 = terms
            .iter()
            .map(|(cols, c)| c * submatrix_det(inverse, &rows, cols))
            .sum();
        if v != 0.0 {
            out.insert(target, v);
        }
    }
    out
}

fn check_pair(a: &KForm, b: &KForm, metric: &Metric) -> Result<()> {
    if a.dim != b.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    if a.degree != b.degree {
        return Err(GeometryError::DegreeMismatch {
            left: a.degree,
            right: b.degree,
        });
    }
    if metric.dimension() != a.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim,
            found: metric.dimension(),
        });
    }
    Ok(())
}

/// Inner product of two forms of equal degree induced by `metric`.
pub fn form_inner(a: &KForm, b: &KForm, metric: &Metric) -> Result<f64> {
    check_pair(a, b, metric)?;
    if metric.is_identity() {
        return Ok(a.dot(b));
    }
    let raised = raise(b, &metric.inverse());
    Ok(a
        .coeffs
        .iter()
        .map(|(m, c)| c * raised.get(m).copied().unwrap_or(0.0))
        .sum())
}

/// Riemannian volume form `orientation * sqrt(det g) e^{1...n}`.
pub fn volume_form(metric: &Metric, orientation: Orientation) -> KForm {
    let n = metric.dimension();
    let mut vol = KForm::zero(n, n);
    vol.add_to_mask(full_mask(n), orientation.sign() * metric.determinant().sqrt());
    vol
}

/// Hodge star, characterized by `a ^ *b = <a, b> vol`.
pub fn hodge_star(a: &KForm, metric: &Metric, orientation: Orientation) -> Result<KForm> {
    let n = a.dim;
    if metric.dimension() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: metric.dimension(),
        });
    }
    let raised = if metric.is_identity() {
        a.coeffs.clone()
    } else {
        raise(a, &metric.inverse())
    };
    let scale = orientation.sign() * metric.determinant().sqrt();
    let full = full_mask(n);
    let mut out = KForm::zero(n, n - a.degree);
    for (mask, c) in raised {
        let complement = full & !mask;
        out.add_to_mask(complement, scale * wedge_sign(mask, complement) * c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega4(dim: usize) -> KForm {
        KForm::basis(dim, &[1, 2]) + KForm::basis(dim, &[3, 4])
    }

    #[test]
    fn basis_product() {
        let e1 = KForm::basis(3, &[1]);
        let e2 = KForm::basis(3, &[2]);
        assert!(e1.wedge(&e2).unwrap().approx_eq(&KForm::basis(3, &[1, 2]), 0.0));
        assert!(e2.wedge(&e1).unwrap().approx_eq(&(KForm::basis(3, &[1, 2]) * -1.0), 0.0));
    }

    #[test]
    fn omega_squared() {
        let w = omega4(4);
        let w2 = w.wedge(&w).unwrap();
        assert!(w2.approx_eq(&(KForm::basis(4, &[1, 2, 3, 4]) * 2.0), 1e-15));
    }

    #[test]
    fn alpha_wedge_omega_squared_is_volume() {
        let alpha = KForm::basis(5, &[5]);
        let w = omega4(5);
        let top = alpha.wedge(&w.power(2).unwrap()).unwrap();
        assert_eq!(top.coefficient(&[1, 2, 3, 4, 5]), 2.0);
    }

    #[test]
    fn wedge_dimension_mismatch() {
        let a = KForm::basis(3, &[1]);
        let b = KForm::basis(4, &[1]);
        assert!(matches!(
            a.wedge(&b),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn wedge_overflowing_degree_is_zero() {
        let a = KForm::basis(3, &[1, 2]);
        let b = KForm::basis(3, &[2, 3]);
        let p = a.wedge(&b).unwrap();
        assert_eq!(p.degree(), 4);
        assert!(p.is_zero(0.0));
    }

    #[test]
    fn interior_examples() {
        let e5 = KForm::basis(5, &[5]);
        let xi = [0.0, 0.0, 0.0, 0.0, 1.0];
        let c = e5.interior(&xi).unwrap();
        assert_eq!(c.degree(), 0);
        assert_eq!(c.coefficient(&[]), 1.0);
        assert!(omega4(5).interior(&xi).unwrap().is_zero(0.0));
        let e12 = KForm::basis(3, &[1, 2]);
        let i1 = e12.interior(&[1.0, 0.0, 0.0]).unwrap();
        assert!(i1.approx_eq(&KForm::basis(3, &[2]), 0.0));
        assert!(KForm::scalar(3, 1.0).interior(&[1.0, 0.0, 0.0]).is_err());
        assert!(e12.interior(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn inner_products() {
        let id = Metric::identity(5);
        let e12 = KForm::basis(5, &[1, 2]);
        assert_eq!(form_inner(&e12, &e12, &id).unwrap(), 1.0);
        let w = omega4(5);
        assert_eq!(form_inner(&w, &w, &id).unwrap(), 2.0);
        let rho = KForm::basis(5, &[1, 2]) * -0.75 + KForm::basis(5, &[3, 4]) * -1.5;
        assert_eq!(form_inner(&w, &rho, &id).unwrap(), -2.25);
        assert!(matches!(
            form_inner(&w, &KForm::basis(5, &[1]), &id),
            Err(GeometryError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_with_scaled_metric() {
        // |e^1|^2 = g^{11} = 1/4 for g = diag(4, 1, 1)
        let g = Metric::diagonal(&[4.0, 1.0, 1.0]).unwrap();
        let e1 = KForm::basis(3, &[1]);
        assert!((form_inner(&e1, &e1, &g).unwrap() - 0.25).abs() < 1e-15);
        let e12 = KForm::basis(3, &[1, 2]);
        assert!((form_inner(&e12, &e12, &g).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hodge_examples() {
        let id = Metric::identity(5);
        let pos = Orientation::Positive;
        let star_alpha = hodge_star(&KForm::basis(5, &[5]), &id, pos).unwrap();
        assert!(star_alpha.approx_eq(&KForm::basis(5, &[1, 2, 3, 4]), 0.0));
        let w2_half = omega4(5).power(2).unwrap() * 0.5;
        assert!(star_alpha.approx_eq(&w2_half, 1e-15));
        let star_one = hodge_star(&KForm::scalar(5, 1.0), &id, pos).unwrap();
        assert!(star_one.approx_eq(&KForm::basis(5, &[1, 2, 3, 4, 5]), 0.0));
        let star_e12 = hodge_star(&KForm::basis(5, &[1, 2]), &id, pos).unwrap();
        assert!(star_e12.approx_eq(&KForm::basis(5, &[3, 4, 5]), 0.0));
        let neg = hodge_star(&KForm::basis(5, &[1, 2]), &id, Orientation::Negative).unwrap();
        assert!(neg.approx_eq(&(KForm::basis(5, &[3, 4, 5]) * -1.0), 0.0));
    }

    #[test]
    fn basis_masks_are_colex_and_complete() {
        let m = basis_masks(4, 2);
        assert_eq!(m, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(basis_masks(5, 0), vec![0]);
        assert_eq!(basis_masks(5, 5), vec![0b11111]);
        assert_eq!(basis_masks(10, 3).len(), 120);
    }

    #[test]
    fn derivation_matches_definition() {
        // (A.eta)(Y1, Y2) = -eta(A Y1, Y2) - eta(Y1, A Y2)
        let a = DMatrix::from_row_slice(3, 3, &[0.3, -1.0, 2.0, 0.5, 0.1, -0.7, 1.2, 0.4, -0.2]);
        let eta = KForm::basis(3, &[1, 2]) * 1.5 + KForm::basis(3, &[2, 3]) * -0.5
            + KForm::basis(3, &[1, 3]) * 0.25;
        let d = eta.derivation(&a);
        for i in 0..3 {
            for j in 0..3 {
                let ei = DVector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 });
                let ej = DVector::from_fn(3, |r, _| if r == j { 1.0 } else { 0.0 });
                let aei = &a * &ei;
                let aej = &a * &ej;
                let expected = -eta.evaluate(&[aei.as_slice(), ej.as_slice()])
                    - eta.evaluate(&[ei.as_slice(), aej.as_slice()]);
                let got = d.evaluate(&[ei.as_slice(), ej.as_slice()]);
                assert!((expected - got).abs() < 1e-14, "{i}{j}: {expected} vs {got}");
            }
        }
    }

    #[test]
    fn coefficient_is_sign_aware() {
        let f = KForm::basis(4, &[3, 1]);
        assert_eq!(f.coefficient(&[1, 3]), -1.0);
        assert_eq!(f.coefficient(&[3, 1]), 1.0);
        assert_eq!(f.coefficient(&[1, 1]), 0.0);
        assert!(KForm::basis(4, &[2, 2]).is_zero(0.0));
        assert!(KForm::try_basis(4, &[5]).is_err());
    }

    #[test]
    fn display() {
        let rho = KForm::basis(5, &[1, 2]) * -0.75 + KForm::basis(5, &[3, 4]) * -1.5;
        assert_eq!(rho.to_string(), "-0.75*e^{12} - 1.5*e^{34}");
        assert_eq!(KForm::zero(3, 2).to_string(), "0");
    }
}
