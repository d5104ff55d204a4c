//! Matrices of imaginary units: unit products, slice matrices, slice rank and the stem
//! structure matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{check_permutation, QuaternionMatrix};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::stemtensor::basis;

/// A `2^N x N` matrix of imaginary units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SliceUnitMatrixRepr", into = "SliceUnitMatrixRepr")]
pub struct SliceUnitMatrix {
    n: usize,
    rows: Vec<Vec<ImaginaryUnit>>,
}

#[derive(Serialize, Deserialize)]
struct SliceUnitMatrixRepr {
    #[serde(rename = "N")]
    n: usize,
    rows: Vec<Vec<ImaginaryUnit>>,
}

impl TryFrom<SliceUnitMatrixRepr> for SliceUnitMatrix {
    type Error = Error;
    fn try_from(r: SliceUnitMatrixRepr) -> Result<Self> {
        Self::new(r.n, r.rows)
    }
}

impl From<SliceUnitMatrix> for SliceUnitMatrixRepr {
    fn from(m: SliceUnitMatrix) -> Self {
        Self { n: m.n, rows: m.rows }
    }
}

impl SliceUnitMatrix {
    pub fn new(n: usize, rows: Vec<Vec<ImaginaryUnit>>) -> Result<Self> {
        if n == 0 || n > basis::MAX_FACTORS {
            return Err(Error::Invalid(format!("unsupported number of parts {n}")));
        }
        if rows.len() != 1 << n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows of {n} units", 1usize << n),
                found: format!("{} rows", rows.len()),
            });
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<ImaginaryUnit>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[ImaginaryUnit] {
        &self.rows[i]
    }

    /// First `2^l` rows restricted to the first `l` columns.
    pub fn truncation(&self, l: usize) -> Result<Self> {
        if l == 0 || l > self.n {
            return Err(Error::IndexOutOfRange { index: l, max: self.n });
        }
        let rows = self.rows[..1 << l].iter().map(|r| r[..l].to_vec()).collect();
        Self::new(l, rows)
    }

    /// Row `i` of the result is row `perm[i]` of `self` (0-based).
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows.len())?;
        Ok(Self {
            n: self.n,
            rows: perm.iter().map(|&p| self.rows[p].clone()).collect(),
        })
    }
}

/// Ordered product of consecutive unit pairs selected by the bits of `m - 1`:
/// `(K_N K_{N-1})^{b_N} ⋯ (K_2 K_1)^{b_2} (K_1)^{b_1}`, `m` 1-based.
pub fn unit_product(units: &[ImaginaryUnit], m: usize) -> Result<Quaternion> {
    let n = units.len();
    if n > basis::MAX_FACTORS || m == 0 || m > 1 << n {
        return Err(Error::IndexOutOfRange {
            index: m,
            max: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
        });
    }
    let bits = m - 1;
    let mut acc = Quaternion::ONE;
    for level in (1..=n).rev() {
        if bits >> (level - 1) & 1 == 1 {
            let upper = units[level - 1].as_quaternion();
            let lower = if level >= 2 {
                units[level - 2].as_quaternion()
            } else {
                Quaternion::ONE
            };
            acc = acc * upper * lower;
        }
    }
    Ok(acc)
}

/// Row vector of all `2^N` unit products of `units`.
pub fn zeta(units: &[ImaginaryUnit]) -> Vec<Quaternion> {
    (1..=1usize << units.len())
        .map(|m| unit_product(units, m).expect("index in range"))
        .collect()
}

/// The unit matrix whose row `m` is `(±I, …, ±I)` with signs from the bits of `m - 1`,
/// most significant bit in the first column.
pub fn eta(n: usize, unit: ImaginaryUnit) -> SliceUnitMatrix {
    let rows = (0..1usize << n)
        .map(|bits| {
            (1..=n)
                .map(|col| {
                    let bit = bits >> (n - col) & 1;
                    if bit == 1 {
                        -unit
                    } else {
                        unit
                    }
                })
                .collect()
        })
        .collect();
    SliceUnitMatrix::new(n, rows).expect("well-formed shape")
}

/// The `2^N x 2^N` quaternion matrix with rows `zeta(J_m)`.
pub fn slice_matrix(j: &SliceUnitMatrix) -> QuaternionMatrix {
    QuaternionMatrix::from_rows(j.rows().iter().map(|r| zeta(r)).collect())
        .expect("rows share length")
}

pub fn is_left_slice_linearly_independent(j: &SliceUnitMatrix) -> bool {
    slice_matrix(j).rank() == 1 << j.n()
}

/// Every leading truncation has an invertible slice matrix.
pub fn has_full_slice_rank(j: &SliceUnitMatrix) -> bool {
    (1..=j.n()).all(|l| {
        let t = j.truncation(l).expect("level in range");
        slice_matrix(&t).rank() == 1 << l
    })
}

/// A row permutation (0-based; row `i` of the result is row `perm[i]` of the input)
/// under which a left slice-linearly independent matrix acquires full slice rank.
///
/// Works top down: at level `l` the leading `2^{l+1}` rows are scanned in ascending
/// order and a row is kept when its level-`l` unit products extend the rank of the rows
/// kept so far; the kept rows move to the front in their original order.
pub fn full_slice_rank_permutation(j: &SliceUnitMatrix) -> Result<Vec<usize>> {
    if !is_left_slice_linearly_independent(j) {
        return Err(Error::NotIndependent);
    }
    let mut order: Vec<usize> = (0..1 << j.n()).collect();
    for level in (1..j.n()).rev() {
        let window = &order[..1 << (level + 1)];
        let mut kept: Vec<usize> = Vec::new();
        let mut kept_rows: Vec<Vec<Quaternion>> = Vec::new();
        let mut rest: Vec<usize> = Vec::new();
        for &r in window {
            if kept.len() < 1 << level {
                let mut candidate = kept_rows.clone();
                candidate.push(zeta(&j.row(r)[..level]));
                let m = QuaternionMatrix::from_rows(candidate.clone())?;
                if m.rank() == candidate.len() {
                    kept.push(r);
                    kept_rows = candidate;
                    continue;
                }
            }
            rest.push(r);
        }
        if kept.len() < 1 << level {
            return Err(Error::NotIndependent);
        }
        let tail = order[1 << (level + 1)..].to_vec();
        order = kept.into_iter().chain(rest).chain(tail).collect();
    }
    Ok(order)
}

/// The diagonal matrix of the last column of `j`.
pub fn slice_diag(j: &SliceUnitMatrix) -> QuaternionMatrix {
    let last: Vec<Quaternion> = j
        .rows()
        .iter()
        .map(|r| r[j.n() - 1].as_quaternion())
        .collect();
    QuaternionMatrix::diagonal(&last)
}

/// Signed permutation matrix describing left multiplication by the last complex
/// generator on the tensor basis: `e_N · basis(m) = Σ_k basis(k) sigma[k][m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemStructureMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl StemStructureMatrix {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << n;
        let mut entries = vec![0i8; dim * dim];
        let (s_gen, gen) = basis::last_generator(n);
        for m in 1..=dim {
            let (s, k) = basis::basis_product(n, gen, m);
            entries[(k - 1) * dim + (m - 1)] = s * s_gen;
        }
        Self { n, entries }
    }

    /// Builds a matrix from explicit entries (row-major, `2^N x 2^N`).
    pub fn from_entries(n: usize, entries: Vec<i8>) -> Result<Self> {
        let dim = 1usize << n;
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", dim * dim),
                found: format!("{}", entries.len()),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn squared(&self) -> Self {
        let d = self.dim();
        let mut out = vec![0i8; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| self.get(i, k) * self.get(k, j)).sum();
            }
        }
        Self { n: self.n, entries: out }
    }

    /// `sigma · v` for a column of quaternions.
    pub fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .filter(|&k| self.get(i, k) != 0)
                    .map(|k| v[k] * f64::from(self.get(i, k)))
                    .sum()
            })
            .collect()
    }

    pub fn to_quaternion_matrix(&self) -> QuaternionMatrix {
        let d = self.dim();
        let data = self
            .entries
            .iter()
            .map(|&e| Quaternion::real(f64::from(e)))
            .collect();
        QuaternionMatrix::new(d, d, data).expect("square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(u: ImaginaryUnit) -> Quaternion {
        u.as_quaternion()
    }

    #[test]
    fn zeta_of_two_units() {
        let (k1, k2) = (ImaginaryUnit::I, ImaginaryUnit::J);
        let z = zeta(&[k1, k2]);
        assert_eq!(z, vec![Quaternion::ONE, q(k1), q(k2) * q(k1), -q(k2)]);
    }

    #[test]
    fn eta_rows() {
        let i = ImaginaryUnit::I;
        let e = eta(2, i);
        assert_eq!(e.row(0), &[i, i]);
        assert_eq!(e.row(1), &[i, -i]);
        assert_eq!(e.row(2), &[-i, i]);
        assert_eq!(e.row(3), &[-i, -i]);
    }

    #[test]
    fn slice_matrix_of_eta_two() {
        let m = slice_matrix(&eta(2, ImaginaryUnit::I));
        let (o, i) = (Quaternion::ONE, Quaternion::I);
        let expected = QuaternionMatrix::from_rows(vec![
            vec![o, i, -o, -i],
            vec![o, i, o, i],
            vec![o, -i, o, -i],
            vec![o, -i, -o, i],
        ])
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn eta_two_needs_a_swap() {
        let e = eta(2, ImaginaryUnit::I);
        assert!(is_left_slice_linearly_independent(&e));
        assert!(!has_full_slice_rank(&e));
        let perm = full_slice_rank_permutation(&e).unwrap();
        assert_eq!(perm, vec![0, 2, 1, 3]);
        assert!(has_full_slice_rank(&e.permute_rows(&perm).unwrap()));
    }

    #[test]
    fn sigma_small_cases() {
        assert_eq!(StemStructureMatrix::new(1).entries(), &[0, -1, 1, 0]);
        assert_eq!(
            StemStructureMatrix::new(2).entries(),
            &[0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0]
        );
    }

    #[test]
    fn unit_product_range() {
        assert!(unit_product(&[ImaginaryUnit::I], 3).is_err());
        assert!(unit_product(&[ImaginaryUnit::I], 0).is_err());
    }
}
