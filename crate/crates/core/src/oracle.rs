//! Independent reference computations used to cross-check the main routines.
//!
//! The tensor algebra is represented faithfully by real matrices: each complex factor
//! acts by 2x2 rotation blocks, the quaternion factor by 4x4 left multiplication, and
//! pure tensors by Kronecker products. Quaternion linear algebra is redone as real
//! linear algebra through left and right multiplication matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qmat::QuaternionMatrix;
use crate::quat::Quaternion;

/// Real 4x4 matrix of `v ↦ q v`.
pub fn left_mult_matrix(q: Quaternion) -> DMatrix<f64> {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    DMatrix::from_row_slice(4, 4, &[w, -x, -y, -z, x, w, -z, y, y, z, w, -x, z, -y, x, w])
}

/// Real 4x4 matrix of `v ↦ v q`.
pub fn right_mult_matrix(q: Quaternion) -> DMatrix<f64> {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    DMatrix::from_row_slice(4, 4, &[w, -x, -y, -z, x, w, z, -y, y, -z, w, x, z, y, -x, w])
}

fn kron_all(factors: &[DMatrix<f64>]) -> DMatrix<f64> {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Matrix of the `k`-th complex generator (1-based) in the `n`-factor algebra.
pub fn generator_matrix(n: usize, k: usize) -> DMatrix<f64> {
    let rotation = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let mut factors: Vec<DMatrix<f64>> = (1..=n)
        .map(|slot| if slot == k { rotation.clone() } else { DMatrix::identity(2, 2) })
        .collect();
    factors.push(DMatrix::identity(4, 4));
    kron_all(&factors)
}

/// Matrix of basis element `m` (1-based), multiplied out from its defining product of
/// generator pairs.
pub fn basis_matrix(n: usize, m: usize) -> DMatrix<f64> {
    let dim = (1usize << n) * 4;
    let bits = m - 1;
    let mut acc = DMatrix::identity(dim, dim);
    for level in (1..=n).rev() {
        if bits >> (level - 1) & 1 == 1 {
            acc = acc * generator_matrix(n, level);
            if level >= 2 {
                acc = acc * generator_matrix(n, level - 1);
            }
        }
    }
    acc
}

/// Matrix of `Σ_m basis(m) ⊗ c_m`.
pub fn tensor_matrix(n: usize, coeffs: &[Quaternion]) -> DMatrix<f64> {
    let dim = (1usize << n) * 4;
    let mut out = DMatrix::zeros(dim, dim);
    for (m, &c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut factors: Vec<DMatrix<f64>> = (0..n).map(|_| DMatrix::identity(2, 2)).collect();
        factors.push(left_mult_matrix(c));
        out += basis_matrix(n, m + 1) * kron_all(&factors);
    }
    out
}

fn real_rank(a: &DMatrix<f64>) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

/// Quaternionic dimension of `{(q_1, …, q_k) : Σ q_r v_r = 0}`, from the real system.
pub fn left_dependence_dimension(vectors: &[Vec<Quaternion>]) -> usize {
    let k = vectors.len();
    if k == 0 {
        return 0;
    }
    let len = vectors[0].len();
    let mut a = DMatrix::zeros(4 * len, 4 * k);
    for (r, v) in vectors.iter().enumerate() {
        for (c, &entry) in v.iter().enumerate() {
            let block = right_mult_matrix(entry);
            a.view_mut((4 * c, 4 * r), (4, 4)).copy_from(&block);
        }
    }
    (4 * k - real_rank(&a)) / 4
}

/// Solves `M x = b` over the quaternions as a real `4n x 4n` system.
pub fn solve_left_linear(m: &QuaternionMatrix, b: &[Quaternion]) -> Result<Vec<Quaternion>> {
    let n = m.nrows();
    if m.ncols() != n || b.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} system"),
            found: format!("{}x{} with {} values", m.nrows(), m.ncols(), b.len()),
        });
    }
    let mut a = DMatrix::zeros(4 * n, 4 * n);
    for i in 0..n {
        for j in 0..n {
            a.view_mut((4 * i, 4 * j), (4, 4)).copy_from(&left_mult_matrix(m[(i, j)]));
        }
    }
    let rhs = DVector::from_iterator(4 * n, b.iter().flat_map(|q| q.to_array()));
    let x = a.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok((0..n)
        .map(|i| Quaternion::new(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_matrices() {
        let p = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        let q = Quaternion::new(1.5, 0.0, -0.7, 2.0);
        let v = DVector::from_row_slice(&q.to_array());
        let left = left_mult_matrix(p) * &v;
        let right = right_mult_matrix(p) * &v;
        assert!((left - DVector::from_row_slice(&(p * q).to_array())).norm() < 1e-14);
        assert!((right - DVector::from_row_slice(&(q * p).to_array())).norm() < 1e-14);
    }

    #[test]
    fn dependence_of_small_sets() {
        let o = Quaternion::ONE;
        let i = Quaternion::I;
        assert_eq!(left_dependence_dimension(&[vec![o, i], vec![o, i]]), 1);
        assert_eq!(
            left_dependence_dimension(&[vec![o, i], vec![Quaternion::J, Quaternion::K]]),
            0
        );
    }

    #[test]
    fn generators_square_to_minus_one() {
        let e = generator_matrix(2, 2);
        let sq = &e * &e;
        assert!((sq + DMatrix::<f64>::identity(16, 16)).norm() < 1e-15);
    }
}
