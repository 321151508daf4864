//! Dense matrices over [`Scalar`].
//!
//! Exact backends get exact rank (fraction-free elimination) and exact null
//! spaces (Gauss–Jordan over the field). The float backend goes through a
//! complex SVD, and numerical rank counts singular values above `rel · σ₁`.

mod bareiss;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::{Backend, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    backend: Backend,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, backend: Backend, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.backend() != backend) {
            return Err(Error::BackendMismatch(backend, bad.backend()));
        }
        Ok(Self {
            rows,
            cols,
            backend,
            data,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let backend = rows
            .first()
            .and_then(|row| row.first())
            .map(Scalar::backend)
            .ok_or_else(|| Error::DimensionMismatch("empty matrix has no backend".into()))?;
        Self::from_vec(r, c, backend, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, backend: Backend, columns: &[Vec<Scalar>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let cols = columns.len();
        let data = (0..rows)
            .flat_map(|i| columns.iter().map(move |c| c[i].clone()))
            .collect();
        Self::from_vec(rows, cols, backend, data)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        backend: Backend,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::from_vec(rows, cols, backend, data).expect("from_fn produced a foreign backend")
    }

    pub fn zeros(rows: usize, cols: usize, backend: Backend) -> Self {
        Self {
            rows,
            cols,
            backend,
            data: vec![Scalar::zero(backend); rows * cols],
        }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        Self::from_fn(n, n, backend, |i, j| Scalar::from_int(backend, (i == j) as i64))
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        let backend = entries
            .first()
            .map(Scalar::backend)
            .ok_or_else(|| Error::DimensionMismatch("empty diagonal".into()))?;
        let n = entries.len();
        let mut m = Self::zeros(n, n, backend);
        for (i, e) in entries.iter().enumerate() {
            if e.backend() != backend {
                return Err(Error::BackendMismatch(backend, e.backend()));
            }
            m.set(i, i, e.clone());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.backend(), self.backend, "set: backend mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.cols, self.rows, self.backend, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.backend != other.backend {
            return Err(Error::BackendMismatch(self.backend, other.backend));
        }
        Ok(Self::from_fn(self.rows, other.cols, self.backend, |i, j| {
            (0..self.cols).fold(Scalar::zero(self.backend), |acc, k| {
                acc + self.get(i, k) * other.get(k, j)
            })
        }))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let col = Matrix::from_columns(v.len(), self.backend, &[v.to_vec()])?;
        Ok(self.matmul(&col)?.column(0))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Result<Scalar>) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vec(self.rows, self.cols, self.backend, data)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, Scalar::checked_add)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, Scalar::checked_sub)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|a| a.checked_mul(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vec(self.rows, self.cols, self.backend, data)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Matrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        let backend = data.first().map_or(self.backend, Scalar::backend);
        Self::from_vec(self.rows, self.cols, backend, data)
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|s| s.to_backend(backend))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vec(self.rows, self.cols, backend, data)
    }

    /// Permutes columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Matrix {
        Self::from_fn(self.rows, perm.len(), self.backend, |i, j| self.get(i, perm[j]).clone())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        Self::from_fn(perm.len(), self.cols, self.backend, |i, j| self.get(perm[i], j).clone())
    }

    /// Largest entry modulus (as a double).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.data.iter().all(|s| s.is_zero(tol))
    }

    pub fn is_symmetric(&self, tol: &Tolerance) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i + 1..self.cols).all(|j| (self.get(i, j) - self.get(j, i)).is_zero(tol))
            })
    }

    /// `max |AᵀA - I|` over entries.
    pub fn orthogonality_residual(&self) -> Result<f64> {
        let gram = self.transpose().matmul(self)?;
        Ok(gram.sub(&Matrix::identity(self.cols, self.backend))?.max_abs())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(self.backend), |acc, i| acc + self.get(i, i))
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex64())
    }

    /// Singular values in descending order. Float backend only.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.backend.is_exact() {
            return Err(Error::RequiresFloat("singular_values"));
        }
        if self.rows == 0 || self.cols == 0 {
            return Ok(Vec::new());
        }
        let svd = self.to_nalgebra().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// Exact rank on exact backends; on the float backend, the number of
    /// singular values exceeding `tol.rel · σ₁`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.backend {
            Backend::Rational => {
                let rows = bareiss::integral_rows(&self.row_vecs()).expect("uniform backend");
                bareiss::rank_integral(rows, self.cols)
            }
            Backend::GaussianRational => {
                let rows = bareiss::gaussian_integral_rows(&self.row_vecs()).expect("uniform backend");
                bareiss::rank_integral(rows, self.cols)
            }
            Backend::ComplexFloat => {
                let s = self.singular_values().expect("float backend");
                numerical_rank(&s, tol)
            }
        }
    }

    /// Reduced row echelon form over the field, exact backends only in
    /// spirit (floats use partial pivoting with `tol.abs` as the zero test).
    /// Returns the reduced matrix and the pivot columns.
    pub fn rref(&self, tol: &Tolerance) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pick = if self.backend.is_exact() {
                (r..self.rows).find(|&i| !m.get(i, c).is_exact_zero())
            } else {
                (r..self.rows)
                    .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()))
                    .filter(|&i| !m.get(i, c).is_zero(tol))
            };
            let Some(p) = pick else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip().expect("nonzero pivot");
            for j in c..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_exact_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..self.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// A basis of the right null space, as the columns of a
    /// `cols × (cols - rank)` matrix.
    pub fn kernel_basis(&self, tol: &Tolerance) -> Matrix {
        if self.backend.is_exact() {
            self.exact_kernel(tol)
        } else {
            self.float_kernel(tol)
        }
    }

    fn exact_kernel(&self, tol: &Tolerance) -> Matrix {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(self.backend); self.cols];
                v[f] = Scalar::one(self.backend);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect();
        Matrix::from_columns(self.cols, self.backend, &basis).expect("consistent shapes")
    }

    fn float_kernel(&self, tol: &Tolerance) -> Matrix {
        let n = self.cols;
        if n == 0 {
            return Matrix::zeros(0, 0, self.backend);
        }
        // Pad with zero rows so the SVD returns a full set of right vectors.
        let rows = self.rows.max(n);
        let mut a = DMatrix::<Complex64>::zeros(rows, n);
        for i in 0..self.rows {
            for j in 0..n {
                a[(i, j)] = self.get(i, j).to_complex64();
            }
        }
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let sorted: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
        let rank = numerical_rank(&sorted, tol);
        let basis: Vec<Vec<Scalar>> = order[rank..]
            .iter()
            .map(|&k| (0..n).map(|j| Scalar::Complex(v_t[(k, j)].conj())).collect())
            .collect();
        Matrix::from_columns(n, self.backend, &basis).expect("consistent shapes")
    }

    /// Inverse of a square matrix. Float inputs are declared singular when a
    /// pivot falls below `n · ε · max|a|`.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, self.backend, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                Scalar::from_int(self.backend, (j - n == i) as i64)
            }
        });
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let tol = Tolerance {
            rel: 0.5,
            abs: scale * f64::EPSILON * n as f64,
        };
        let (r, pivots) = aug.rref(&tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        Ok(Matrix::from_fn(n, n, self.backend, |i, j| r.get(i, j + n).clone()))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one(self.backend);
        for c in 0..n {
            let p = if self.backend.is_exact() {
                (c..n).find(|&i| !m.get(i, c).is_exact_zero())
            } else {
                (c..n).max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()))
            };
            let Some(p) = p.filter(|&p| !m.get(p, c).is_exact_zero()) else {
                return Ok(Scalar::zero(self.backend));
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det * &pivot;
            for i in c + 1..n {
                let f = m.get(i, c) / &pivot;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Counts `σ_k > rel · σ₁` in a descending list.
pub fn numerical_rank(singular_values: &[f64], tol: &Tolerance) -> usize {
    match singular_values.first() {
        Some(&s1) if s1 > 0.0 => singular_values.iter().filter(|&&s| s > tol.rel * s1).count(),
        _ => 0,
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[(i64, i64)]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn rotation() -> Matrix {
        q(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]])
    }

    #[test]
    fn identity_product_and_double_transpose() {
        let m = q(&[&[(1, 2), (3, 1), (0, 1)], &[(-2, 3), (5, 7), (1, 1)], &[(1, 1), (1, 1), (1, 1)]]);
        assert_eq!(Matrix::identity(3, Backend::Rational).matmul(&m).unwrap(), m);
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let a = rotation();
        assert_eq!(a.transpose().matmul(&a).unwrap(), Matrix::identity(2, Backend::Rational));
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::zeros(2, 3, Backend::Rational);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch(_))));
        assert!(Matrix::from_rows(vec![vec![Scalar::ratio(1, 1)], vec![]]).is_err());
    }

    #[test]
    fn ranks() {
        let tol = Tolerance::default();
        assert_eq!(Matrix::zeros(4, 4, Backend::Rational).rank(&tol), 0);
        assert_eq!(Matrix::identity(5, Backend::Rational).rank(&tol), 5);
        let b = q(&[&[(5, 3), (-5, 4)], &[(5, 4), (5, 3)]]);
        assert_eq!(b.rank(&tol), 2);
        assert_eq!(Matrix::identity(3, Backend::ComplexFloat).rank(&tol), 3);
        let g = Matrix::identity(3, Backend::GaussianRational);
        assert_eq!(g.rank(&tol), 3);
    }

    #[test]
    fn kernels() {
        let tol = Tolerance::default();
        assert_eq!(Matrix::identity(3, Backend::Rational).kernel_basis(&tol).cols(), 0);
        let k = q(&[&[(1, 1), (1, 1)]]).kernel_basis(&tol);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![Scalar::ratio(-1, 1), Scalar::ratio(1, 1)]);

        let f = q(&[&[(1, 1), (1, 1)]]).to_backend(Backend::ComplexFloat).unwrap();
        let k = f.kernel_basis(&tol);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!((&v[0] + &v[1]).magnitude() < 1e-12);
        assert!(f.matmul(&k).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn singular_values_examples() {
        let i2 = Matrix::identity(2, Backend::ComplexFloat);
        let s = i2.singular_values().unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
        let d = Matrix::diagonal(&[Scalar::real(0.0), Scalar::real(3.0)]).unwrap();
        let s = d.singular_values().unwrap();
        assert!((s[0] - 3.0).abs() < 1e-14 && s[1].abs() < 1e-14);
        let c = Matrix::from_rows(vec![vec![Scalar::real(3.0)], vec![Scalar::real(4.0)]]).unwrap();
        let s = c.singular_values().unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 5.0).abs() < 1e-14);
        assert!(matches!(rotation().singular_values(), Err(Error::RequiresFloat(_))));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = rotation();
        assert_eq!(a.inverse().unwrap(), a.transpose());
        assert_eq!(a.determinant().unwrap(), Scalar::ratio(1, 1));
        let s = q(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.determinant().unwrap(), Scalar::ratio(0, 1));
        let f = a.to_backend(Backend::ComplexFloat).unwrap();
        let prod = f.matmul(&f.inverse().unwrap()).unwrap();
        assert!(prod.sub(&Matrix::identity(2, Backend::ComplexFloat)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn numerical_rank_is_relative() {
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&[1e12, 1e5, 1e3], &tol), 2);
        assert_eq!(numerical_rank(&[0.0, 0.0], &tol), 0);
        assert_eq!(numerical_rank(&[], &tol), 0);
    }

    #[test]
    fn json_rows() {
        let a = rotation();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["3/5","-4/5"],["4/5","3/5"]]"#);
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
