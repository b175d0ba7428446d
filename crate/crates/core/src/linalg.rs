//! Dense complex matrices and a one-sided Jacobi SVD.
//!
//! The SVD follows the `H = U diag(λ) V` convention with `U` square
//! (`rows × rows`) and `V` holding orthonormal rows (`rows × cols`), so
//! `rows ≤ cols` is required.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

use crate::error::{dimension, Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix lifted to the complex field.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return dimension(format!(
                "vector of length {} does not match {} columns",
                v.len(),
                self.cols
            ));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return dimension("shape mismatch in subtraction");
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Bytes of the row-major entries, used for bit-identity checks.
    pub fn to_bits(&self) -> Vec<u64> {
        self.data
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Factors of `H = U diag(λ) V`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::diag_real(&self.singular_values);
        self.u
            .matmul(&lambda)
            .and_then(|ul| ul.matmul(&self.v))
            .expect("factor shapes are consistent by construction")
    }
}

const MAX_SWEEPS: usize = 60;
const ORTHO_TOL: f64 = 1e-15;
/// Singular values below this fraction of the largest are clamped to zero.
pub const RANK_CLAMP: f64 = 1e-14;

/// Singular value decomposition by one-sided (Hestenes) Jacobi rotations on
/// the rows of `h`.
///
/// Rows of `V` are rephased so that their largest-magnitude entry is real
/// and non-negative, with the matching column of `U` absorbing the phase.
pub fn svd_decompose(h: &ComplexMatrix) -> Result<SvdFactors> {
    let (n, nt) = (h.rows, h.cols);
    if n == 0 || n > nt {
        return dimension(format!("svd needs 0 < rows <= cols, got {n}x{nt}"));
    }
    if h.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("svd input has non-finite entries".into()));
    }

    let mut w = h.clone();
    // Accumulates U† as the product of the row rotations.
    let mut uh = ComplexMatrix::identity(n);

    let mut converged = n == 1;
    let mut last_off = 0.0f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        last_off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..nt {
                    let (a, b) = (w[(i, k)], w[(j, k)]);
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a * b.conj();
                }
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                last_off = last_off.max(g / (alpha * beta).sqrt());
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_rows(&mut w, i, j, c, s, phase);
                rotate_rows(&mut uh, i, j, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "jacobi svd did not converge in {MAX_SWEEPS} sweeps (largest residual row cosine {last_off:.3e})"
        )));
    }

    let norms: Vec<f64> = (0..n)
        .map(|i| w.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let top = norms[order[0]];
    let mut singular_values = Vec::with_capacity(n);
    let mut v = ComplexMatrix::zeros(n, nt);
    let mut u = ComplexMatrix::zeros(n, n);
    let mut deficient = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let lam = norms[src];
        if lam > RANK_CLAMP * top && lam > 0.0 {
            singular_values.push(lam);
            for k in 0..nt {
                v[(dst, k)] = w[(src, k)] / lam;
            }
        } else {
            singular_values.push(0.0);
            deficient.push(dst);
        }
        for r in 0..n {
            u[(r, dst)] = uh[(src, r)].conj();
        }
    }
    for &row in &deficient {
        complete_row(&mut v, row, &deficient)?;
    }

    for i in 0..n {
        let (mut best, mut best_mag) = (0, -1.0);
        for k in 0..nt {
            let mag = v[(i, k)].norm();
            if mag > best_mag {
                best = k;
                best_mag = mag;
            }
        }
        if best_mag <= 0.0 {
            continue;
        }
        let phase = v[(i, best)] / best_mag;
        let conj = phase.conj();
        for k in 0..nt {
            v[(i, k)] *= conj;
        }
        v[(i, best)] = Complex64::new(v[(i, best)].re, 0.0);
        for r in 0..n {
            u[(r, i)] *= phase;
        }
    }

    Ok(SvdFactors {
        u,
        singular_values,
        v,
    })
}

fn rotate_rows(m: &mut ComplexMatrix, i: usize, j: usize, c: f64, s: f64, phase: Complex64) {
    for k in 0..m.cols {
        let a = m[(i, k)];
        let b = phase * m[(j, k)];
        m[(i, k)] = a * c - b * s;
        m[(j, k)] = a * s + b * c;
    }
}

/// Replaces row `row` of `v` with a unit vector orthogonal to every row that
/// is not pending completion.
fn complete_row(v: &mut ComplexMatrix, row: usize, pending: &[usize]) -> Result<()> {
    let (n, nt) = (v.rows, v.cols);
    for basis in 0..nt {
        let mut cand = vec![Complex64::new(0.0, 0.0); nt];
        cand[basis] = Complex64::new(1.0, 0.0);
        for other in 0..n {
            if other == row || (pending.contains(&other) && other > row) {
                continue;
            }
            let dot: Complex64 = (0..nt).map(|k| cand[k] * v[(other, k)].conj()).sum();
            for k in 0..nt {
                cand[k] -= dot * v[(other, k)];
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            for k in 0..nt {
                v[(row, k)] = cand[k] / norm;
            }
            return Ok(());
        }
    }
    Err(Error::Numeric(
        "could not complete an orthonormal basis for a rank-deficient channel".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unitarity_residual(m: &ComplexMatrix, rows_orthonormal: bool) -> f64 {
        let prod = if rows_orthonormal {
            m.matmul(&m.adjoint()).unwrap()
        } else {
            m.adjoint().matmul(m).unwrap()
        };
        prod.sub(&ComplexMatrix::identity(prod.rows()))
            .unwrap()
            .frobenius_norm()
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let f = svd_decompose(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(f.singular_values, vec![1.0, 1.0]);
        assert!(unitarity_residual(&f.u, true) < 1e-12);
        assert!(unitarity_residual(&f.v, true) < 1e-12);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let h = ComplexMatrix::diag_real(&[1.0, 3.0]);
        let f = svd_decompose(&h).unwrap();
        assert!((f.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((f.singular_values[1] - 1.0).abs() < 1e-14);
        let err = f.reconstruct().sub(&h).unwrap().frobenius_norm();
        assert!(err < 1e-14);
    }

    #[test]
    fn wide_matrix_reconstructs() {
        let h = ComplexMatrix::from_row_major(
            2,
            3,
            vec![c(1.0, 2.0), c(0.5, -1.0), c(0.0, 0.3), c(-0.7, 0.1), c(2.0, 0.0), c(1.0, 1.0)],
        )
        .unwrap();
        let f = svd_decompose(&h).unwrap();
        assert_eq!(f.v.rows(), 2);
        assert_eq!(f.v.cols(), 3);
        let err = f.reconstruct().sub(&h).unwrap().frobenius_norm() / h.frobenius_norm();
        assert!(err < 1e-13, "{err}");
        assert!(unitarity_residual(&f.v, true) < 1e-13);
        assert!(unitarity_residual(&f.u, true) < 1e-13);
    }

    #[test]
    fn rank_deficient_is_completed() {
        // Second row is a multiple of the first.
        let h = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 1.0), c(2.0, 0.0), c(2.0, 2.0), c(4.0, 0.0)],
        )
        .unwrap();
        let f = svd_decompose(&h).unwrap();
        assert_eq!(f.singular_values[1], 0.0);
        assert!(unitarity_residual(&f.v, true) < 1e-12);
        let err = f.reconstruct().sub(&h).unwrap().frobenius_norm() / h.frobenius_norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn phase_convention_applied() {
        let h = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(0.3, 1.0), c(-0.2, 0.4), c(1.5, -0.5), c(0.1, 0.9)],
        )
        .unwrap();
        let f = svd_decompose(&h).unwrap();
        for i in 0..2 {
            let row = f.v.row(i);
            let k = (0..2)
                .max_by(|&a, &b| row[a].norm().total_cmp(&row[b].norm()))
                .unwrap();
            assert_eq!(row[k].im, 0.0);
            assert!(row[k].re >= 0.0);
        }
    }

    #[test]
    fn tall_matrix_rejected() {
        let h = ComplexMatrix::zeros(3, 2);
        assert!(matches!(svd_decompose(&h), Err(Error::Dimension(_))));
    }

    #[test]
    fn non_finite_rejected() {
        let r = ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(r.is_err());
    }
}
