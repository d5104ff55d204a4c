//! Dense quaternion matrices with rank and inverse computed through the complex adjoint.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Row-major quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch {
                expected: format!("{cols} columns"),
                found: format!("{} columns", bad.len()),
            });
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: &[Quaternion]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &q) in entries.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out[(i, j)] = (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum();
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Ok(Self { data, ..*self })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(Self { data, ..*self })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.iter().map(|&q| q * s).collect(),
            ..*self
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = self.transpose();
        for q in &mut out.data {
            *q = q.conj();
        }
        out
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Reorders rows so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows)?;
        let rows = perm.iter().map(|&p| self.row(p).to_vec()).collect();
        Self::from_rows(rows).map(|m| Self { cols: self.cols, ..m })
    }

    /// The complex `2n x 2m` matrix `[[A1, A2], [-conj A2, conj A1]]` where `A = A1 + A2 j`.
    pub fn complex_adjoint(&self) -> DMatrix<Complex64> {
        let (n, m) = (self.rows, self.cols);
        let mut out = DMatrix::zeros(2 * n, 2 * m);
        for i in 0..n {
            for j in 0..m {
                let q = self[(i, j)];
                let a1 = Complex64::new(q.w, q.x);
                let a2 = Complex64::new(q.y, q.z);
                out[(i, j)] = a1;
                out[(i, j + m)] = a2;
                out[(i + n, j)] = -a2.conj();
                out[(i + n, j + m)] = a1.conj();
            }
        }
        out
    }

    /// Reads a quaternion matrix back from the top half of a complex adjoint.
    pub fn from_complex_adjoint(adj: &DMatrix<Complex64>) -> Result<Self> {
        if adj.nrows() % 2 != 0 || adj.ncols() % 2 != 0 {
            return Err(Error::ShapeMismatch {
                expected: "even dimensions".into(),
                found: format!("{}x{}", adj.nrows(), adj.ncols()),
            });
        }
        let (n, m) = (adj.nrows() / 2, adj.ncols() / 2);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                let a1 = adj[(i, j)];
                let a2 = adj[(i, j + m)];
                out[(i, j)] = Quaternion::new(a1.re, a1.im, a2.re, a2.im);
            }
        }
        Ok(out)
    }

    /// Left rank: half the complex rank of the adjoint.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let sv = self.complex_adjoint().singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_CUTOFF * top).count() / 2
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        if self.rank() < self.rows {
            return Err(Error::Singular);
        }
        let inv = self.complex_adjoint().try_inverse().ok_or(Error::Singular)?;
        Self::from_complex_adjoint(&inv)
    }
}

impl Index<(usize, usize)> for QuaternionMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QuaternionMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("permutation of {n}"),
            found: format!("{} entries", perm.len()),
        });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// True when the given row vectors are left linearly independent over the quaternions.
pub fn left_linearly_independent(vectors: &[Vec<Quaternion>]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let m = QuaternionMatrix::from_rows(vectors.to_vec())?;
    Ok(m.rank() == vectors.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn adjoint_of_j_and_product_law() {
        let j = QuaternionMatrix::new(1, 1, vec![Quaternion::J]).unwrap();
        let adj = j.complex_adjoint();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(adj[(0, 1)], one);
        assert_eq!(adj[(1, 0)], -one);
        assert_eq!(adj[(0, 0)], Complex64::new(0.0, 0.0));

        let a = QuaternionMatrix::new(1, 1, vec![q(1.0, 2.0, -1.0, 0.5)]).unwrap();
        let b = QuaternionMatrix::new(1, 1, vec![q(-0.3, 0.0, 4.0, 1.0)]).unwrap();
        let lhs = a.mul(&b).unwrap().complex_adjoint();
        let rhs = a.complex_adjoint() * b.complex_adjoint();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn rank_of_repeated_row() {
        let m = QuaternionMatrix::from_rows(vec![
            vec![Quaternion::ONE, Quaternion::I],
            vec![Quaternion::ONE, Quaternion::I],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn independent_pair() {
        let rows = vec![
            vec![Quaternion::ONE, Quaternion::I],
            vec![Quaternion::J, Quaternion::K],
        ];
        assert!(left_linearly_independent(&rows).unwrap());
    }

    #[test]
    fn inverse_round_trip() {
        let m = QuaternionMatrix::from_rows(vec![
            vec![q(1.0, 0.5, 0.0, -1.0), q(0.0, 2.0, 1.0, 0.0)],
            vec![q(0.3, 0.0, 0.0, 1.0), q(1.0, -1.0, 0.2, 0.0)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv).unwrap();
        let err = prod.sub(&QuaternionMatrix::identity(2)).unwrap().max_norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn permutation_validation() {
        let m = QuaternionMatrix::identity(3);
        assert!(m.permute_rows(&[2, 0, 1]).is_ok());
        assert!(m.permute_rows(&[0, 0, 1]).is_err());
        let p = m.permute_rows(&[2, 0, 1]).unwrap();
        assert_eq!(p[(0, 2)], Quaternion::ONE);
    }
}
