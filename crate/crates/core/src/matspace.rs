//! Dense complex matrices and the state ↔ coefficient-matrix correspondence.
//!
//! A state `Σ a[p][p'] |p⟩|p'⟩` of `C^d ⊗ C^d'` is stored with amplitude index
//! `p·d' + p'` (first factor outer) and corresponds to the `d × d'` matrix
//! `[a[p][p']]`. Under this map the state overlap is `Tr(A†B)` and the Schmidt
//! number is `rank(A)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::math;
use crate::verify::VerifyConfig;

pub use num_complex::Complex64 as C64;

const SVD_MAX_SWEEPS: usize = 80;

/// Row-major `rows × cols` complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major buffer, rejecting wrong lengths and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix entry by entry.
    ///
    /// Panics if the generator yields a non-finite value or a dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let z = f(r, c);
                assert!(z.re.is_finite() && z.im.is_finite(), "non-finite matrix entry");
                data.push(z);
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::ShapeMismatch {
                    expected: (nrows, ncols),
                    found: (nrows, row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| C64::new(if r == c { 1.0 } else { 0.0 }, 0.0))
    }

    /// Square diagonal matrix.
    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r] } else { C64::new(0.0, 0.0) })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| f(self.get(r, c)))
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        }))
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + rhs.get(r, c)))
    }

    /// Multiplies column `c` by `phases[c]`, i.e. `self · diag(phases)`.
    pub fn mul_diag_right(&self, phases: &[C64]) -> Result<Self> {
        if phases.len() != self.cols {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, self.cols),
                found: (phases.len(), phases.len()),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * phases[c]))
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        self.same_shape(rhs)?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: rhs.shape(),
            });
        }
        Ok(())
    }

    /// Kronecker product; see [`kron`].
    pub fn kron(&self, rhs: &Self) -> Self {
        kron(self, rhs)
    }

    /// Singular values; see [`singular_values`].
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        singular_values(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &self.data[r * self.cols + c]
    }
}

/// Hilbert–Schmidt inner product `Tr(A†B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    a.same_shape(b)?;
    Ok(hs_inner_unchecked(a, b))
}

#[inline]
pub(crate) fn hs_inner_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum()
}

/// Kronecker product with row index `i·p + k` and column index `j·q + l` for
/// `A[i][j] · B[k][l]`, where `B` is `p × q`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = b.shape();
    ComplexMatrix::from_fn(a.rows * p, a.cols * q, |r, c| {
        a.get(r / p, c / q) * b.get(r % p, c % q)
    })
}

/// Singular values in descending order, `min(rows, cols)` of them.
///
/// One-sided Jacobi (Hestenes) on the narrower side. Column pairs are rotated
/// by complex Givens transforms until every pair is numerically orthogonal;
/// the column norms are then the singular values. This keeps zero singular
/// values at roundoff level rather than at the square root of it.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    // Columns of the working matrix: columns of A, or of A† when A is wide.
    let mut cols: Vec<Vec<C64>> = if a.cols <= a.rows {
        (0..a.cols).map(|c| a.column(c)).collect()
    } else {
        (0..a.rows)
            .map(|r| (0..a.cols).map(|c| a.get(r, c).conj()).collect())
            .collect()
    };
    let n = cols.len();
    let eps = 4.0 * f64::EPSILON;

    let mut converged = n < 2;
    for _ in 0..SVD_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (alpha, beta, gamma) = {
                    let (ci, cj) = (&cols[i], &cols[j]);
                    let alpha: f64 = ci.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cj.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = ci.iter().zip(cj).map(|(x, y)| x.conj() * y).sum();
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= eps * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + math::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let yp = phase * *y;
                    let xi = *x;
                    *x = xi * c - yp * s;
                    *y = xi * s + yp * c;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NumericalFailure("singular value iteration did not converge"));
    }

    let mut values: Vec<f64> = cols
        .iter()
        .map(|col| math::sqrt(col.iter().map(|z| z.norm_sqr()).sum()))
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// True iff `A†A` is the identity up to `cfg.tol_abs` in every entry.
pub fn is_unitary(a: &ComplexMatrix, cfg: &VerifyConfig) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (a.rows, a.rows),
            found: a.shape(),
        });
    }
    let gram = a.adjoint().matmul(a)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(a.rows))? <= cfg.tol_abs)
}

/// Pure state of `C^dim_a ⊗ C^dim_b`, amplitude `p·dim_b + p'` for `|p⟩|p'⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || amplitudes.len() != dim_a * dim_b {
            return Err(Error::ShapeMismatch {
                expected: (dim_a, dim_b),
                found: (amplitudes.len(), 1),
            });
        }
        if let Some(index) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    /// Sparse constructor: `scale · Σ coeff |p⟩|p'⟩` over `(p, p', coeff)` terms.
    pub fn from_terms(dim_a: usize, dim_b: usize, scale: f64, terms: &[(usize, usize, C64)]) -> Result<Self> {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim_a * dim_b];
        for &(p, q, z) in terms {
            if p >= dim_a || q >= dim_b {
                return Err(Error::ShapeMismatch {
                    expected: (dim_a, dim_b),
                    found: (p + 1, q + 1),
                });
            }
            amplitudes[p * dim_b + q] += z * scale;
        }
        Self::new(dim_a, dim_b, amplitudes)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, cfg: &VerifyConfig) -> bool {
        (self.norm_sqr() - 1.0).abs() <= cfg.tol_abs
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        state_to_matrix(self)
    }
}

/// Reshapes a state into its `dim_a × dim_b` coefficient matrix.
pub fn state_to_matrix(psi: &StateVector) -> ComplexMatrix {
    ComplexMatrix {
        rows: psi.dim_a,
        cols: psi.dim_b,
        data: psi.amplitudes.clone(),
    }
}

/// Inverse of [`state_to_matrix`].
pub fn matrix_to_state(a: &ComplexMatrix) -> StateVector {
    StateVector {
        dim_a: a.rows,
        dim_b: a.cols,
        amplitudes: a.data.clone(),
    }
}

/// Reshape with declared dimensions; fails when they disagree with the state.
pub fn state_to_matrix_checked(psi: &StateVector, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    if psi.dims() != (dim_a, dim_b) {
        return Err(Error::ShapeMismatch {
            expected: (dim_a, dim_b),
            found: psi.dims(),
        });
    }
    Ok(state_to_matrix(psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
            ComplexMatrix::new(rows, cols, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::InvalidLength { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn hs_inner_shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(3, 2);
        assert!(matches!(hs_inner(&a, &b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn kron_with_scalar_one_is_identity_map() {
        let m = ComplexMatrix::from_fn(2, 3, |r, c| C64::new(r as f64, c as f64 + 0.5));
        assert_eq!(kron(&ComplexMatrix::identity(1), &m), m);
        assert_eq!(kron(&m, &ComplexMatrix::identity(1)), m);
    }

    #[test]
    fn kron_places_entries_row_major() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let a = ComplexMatrix::from_rows(&[[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let b = ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (2, 6));
        for r in 0..2 {
            for col in 0..6 {
                let expected = if (r, col) == (0, 1) || (r, col) == (1, 3) { s } else { 0.0 };
                assert_eq!(k.get(r, col), c(expected, 0.0));
            }
        }
    }

    #[test]
    fn singular_values_of_simple_matrices() {
        assert_eq!(singular_values(&ComplexMatrix::zeros(2, 3)).unwrap(), vec![0.0, 0.0]);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let r10 = ComplexMatrix::from_rows(&[[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let sv = singular_values(&r10).unwrap();
        assert_eq!(sv.len(), 2);
        for v in sv {
            assert!((v - s).abs() < 1e-15);
        }
        let d = ComplexMatrix::diag(&[c(0.0, 3.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        let sv = singular_values(&d).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-15 && (sv[1] - 1.0).abs() < 1e-15 && sv[2] == 0.0);
    }

    #[test]
    fn rank_deficient_singular_values_stay_at_roundoff() {
        // outer product u v†, rank one
        let u = [c(0.3, 0.1), c(-0.2, 0.5), c(0.7, -0.4)];
        let v = [c(0.1, 0.9), c(0.4, -0.3), c(-0.6, 0.2), c(0.05, 0.0)];
        let m = ComplexMatrix::from_fn(3, 4, |r, col| u[r] * v[col].conj());
        let sv = singular_values(&m).unwrap();
        assert!(sv[1] < 1e-14 && sv[2] < 1e-14, "{sv:?}");
    }

    #[test]
    fn unitary_checks() {
        let cfg = VerifyConfig::default();
        assert!(is_unitary(&ComplexMatrix::identity(3), &cfg).unwrap());
        assert!(!is_unitary(&ComplexMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]), &cfg).unwrap());
        assert!(matches!(
            is_unitary(&ComplexMatrix::zeros(2, 3), &cfg),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn product_state_maps_to_unit_entry() {
        let psi = StateVector::from_terms(2, 3, 1.0, &[(0, 0, c(1.0, 0.0))]).unwrap();
        let m = state_to_matrix_checked(&psi, 2, 3).unwrap();
        assert_eq!(m.get(0, 0), c(1.0, 0.0));
        assert_eq!(m.entries().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert!(state_to_matrix_checked(&psi, 3, 2).is_err());
    }

    proptest! {
        #[test]
        fn hs_self_inner_is_frobenius(m in arb_matrix(3, 4)) {
            let z = hs_inner(&m, &m).unwrap();
            prop_assert!(z.im.abs() < 1e-15);
            prop_assert!(z.re >= 0.0);
            prop_assert!((z.re - m.frobenius_norm_sq()).abs() < 1e-13);
        }

        #[test]
        fn kron_is_associative(a in arb_matrix(2, 1), b in arb_matrix(1, 3), d in arb_matrix(2, 2)) {
            let left = kron(&kron(&a, &b), &d);
            let right = kron(&a, &kron(&b, &d));
            prop_assert_eq!(left.shape(), right.shape());
            prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-15);
        }

        #[test]
        fn kron_factorizes_inner_products(
            a in arb_matrix(2, 3), b in arb_matrix(2, 3), c2 in arb_matrix(2, 2), d in arb_matrix(2, 2)
        ) {
            let lhs = hs_inner(&kron(&a, &c2), &kron(&b, &d)).unwrap();
            let rhs = hs_inner(&a, &b).unwrap() * hs_inner(&c2, &d).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn squared_singular_values_sum_to_state_norm(m in arb_matrix(3, 4)) {
            let psi = matrix_to_state(&m);
            let total: f64 = singular_values(&state_to_matrix(&psi)).unwrap().iter().map(|s| s * s).sum();
            prop_assert!((total - psi.norm_sqr()).abs() < 1e-12);
        }

        #[test]
        fn reshape_round_trip_is_exact(m in arb_matrix(3, 4)) {
            prop_assert_eq!(state_to_matrix(&matrix_to_state(&m)), m);
        }
    }
}
