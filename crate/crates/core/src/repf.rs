//! Representation vectors: the column `G` with `f(K-lift) = ζ(K) · G` for every choice
//! of units `K` along an N-part path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monodromy::SliceFunctionModel;
use crate::paths::NPartPath;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::sliceunits::{eta, slice_matrix, zeta, SliceUnitMatrix};

/// Column of `2^N` quaternions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RepresentationVector(pub Vec<Quaternion>);

impl RepresentationVector {
    pub fn n(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    /// `ζ(K) · G`.
    pub fn evaluate(&self, units: &[ImaginaryUnit]) -> Result<Quaternion> {
        evaluate_via_formula(self, units)
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }
}

/// Values of `model` at the ends of the lifts of `path` along every row of `j`.
pub fn lifted_values(
    model: &SliceFunctionModel,
    path: &NPartPath,
    j: &SliceUnitMatrix,
    x0: f64,
) -> Result<Vec<Quaternion>> {
    if j.n() != path.n() {
        return Err(Error::ShapeMismatch {
            expected: format!("unit matrix with N = {}", path.n()),
            found: format!("N = {}", j.n()),
        });
    }
    j.rows()
        .iter()
        .map(|units| model.evaluate_lifted(path, units, x0, ImaginaryUnit::I))
        .collect()
}

/// Solves `M(J) G = values` for a left slice-linearly independent `j`.
pub fn representation_vector(
    model: &SliceFunctionModel,
    path: &NPartPath,
    j: &SliceUnitMatrix,
    x0: f64,
) -> Result<RepresentationVector> {
    let m = slice_matrix(j);
    let inv = m.inverse().map_err(|e| match e {
        Error::Singular => Error::NotIndependent,
        other => other,
    })?;
    let values = lifted_values(model, path, j, x0)?;
    Ok(RepresentationVector(inv.mul_vec(&values)?))
}

/// Representation vector for the sign-pattern units of `i`, whose slice matrix is
/// `2^{N/2}` times a unitary matrix; the inverse is the scaled conjugate transpose.
pub fn representation_vector_standard(
    model: &SliceFunctionModel,
    path: &NPartPath,
    x0: f64,
) -> Result<RepresentationVector> {
    let j = eta(path.n(), ImaginaryUnit::I);
    let values = lifted_values(model, path, &j, x0)?;
    let inv = slice_matrix(&j)
        .conj_transpose()
        .scale((-(path.n() as f64)).exp2());
    Ok(RepresentationVector(inv.mul_vec(&values)?))
}

/// `ζ(K) · G`.
pub fn evaluate_via_formula(g: &RepresentationVector, units: &[ImaginaryUnit]) -> Result<Quaternion> {
    if g.0.len() != 1 << units.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} entries", 1usize << units.len()),
            found: format!("{}", g.0.len()),
        });
    }
    Ok(zeta(units).iter().zip(&g.0).map(|(&z, &c)| z * c).sum())
}

/// Largest entry deviation between the representation vectors obtained from `j1`
/// and `j2`.
pub fn invariance_check(
    model: &SliceFunctionModel,
    path: &NPartPath,
    j1: &SliceUnitMatrix,
    j2: &SliceUnitMatrix,
    x0: f64,
) -> Result<f64> {
    let a = representation_vector(model, path, j1, x0)?;
    let b = representation_vector(model, path, j2, x0)?;
    Ok(a.max_distance(&b))
}
