//! Analytic continuation of slice-function models along lifted N-part paths.
//!
//! The state of a continuation is a point of the complex plane, a continuous argument,
//! the imaginary unit of the current slice and a quaternion datum. On the slice of `I`
//! the square root reads `r^{1/2} e^{θ I / 2} a`, the logarithm `ln r + θ I + a` and a
//! polynomial `Σ z^n c_n`. At a real junction the unit may change; the datum is then
//! re-solved so that the value is unchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{NPartPath, PathSegment, JUNCTION_TOLERANCE};
use crate::quat::{embed_slice, ImaginaryUnit, Quaternion};

/// Slice-function models whose continuation is known in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum SliceFunctionModel {
    /// Square root, starting from the positive root on the positive half-line.
    Sqrt,
    /// Logarithm, starting from the real logarithm on the positive half-line.
    Log,
    /// `Σ q^n c_n` with right coefficients.
    Poly { coeffs: Vec<Quaternion> },
}

/// Continuation state on one slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetState {
    /// Current point in the complex plane.
    pub point: Complex64,
    /// Continuous argument of `point` (only meaningful for branched models).
    pub theta: f64,
    /// Unit of the current slice.
    pub unit: ImaginaryUnit,
    /// Multiplicative datum for the square root, additive datum for the logarithm.
    pub datum: Quaternion,
}

impl SheetState {
    /// The current point placed on the current slice.
    pub fn quaternion_point(&self) -> Quaternion {
        embed_slice(self.point, self.unit)
    }
}

/// A germ identified by its real-axis base point on the slice and its value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GermKey {
    pub point: Quaternion,
    pub value: Quaternion,
}

impl GermKey {
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.point.approx_eq(other.point, tol) && self.value.approx_eq(other.value, tol)
    }
}

/// Outcome of an extension test.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendabilityVerdict {
    Extendable,
    /// Two witnesses reach the same germ of the reference model but different values of
    /// the tested model.
    Obstructed {
        witnesses: (usize, usize),
        values: (Quaternion, Quaternion),
    },
}

fn is_branched(model: &SliceFunctionModel) -> bool {
    !matches!(model, SliceFunctionModel::Poly { .. })
}

fn binomial_half(n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (0.5 - k as f64) / (k as f64 + 1.0))
}

impl SliceFunctionModel {
    /// Initial state at the real point `x0 > 0` (any real `x0` for polynomials).
    pub fn initial_state(&self, x0: f64, unit: ImaginaryUnit) -> Result<SheetState> {
        if is_branched(self) && x0 <= 0.0 {
            return Err(Error::BranchPoint { x: x0 });
        }
        Ok(SheetState {
            point: Complex64::new(x0, 0.0),
            theta: 0.0,
            unit,
            datum: match self {
                Self::Sqrt => Quaternion::ONE,
                _ => Quaternion::ZERO,
            },
        })
    }

    /// Value of the model in the given state.
    pub fn value(&self, state: &SheetState) -> Quaternion {
        match self {
            Self::Sqrt => self.slice_base(state.point.norm(), state.theta, state.unit) * state.datum,
            Self::Log => self.slice_base(state.point.norm(), state.theta, state.unit) + state.datum,
            Self::Poly { coeffs } => {
                let q = state.quaternion_point();
                coeffs.iter().rev().fold(Quaternion::ZERO, |acc, &c| q * acc + c)
            }
        }
    }

    /// The part of the value lying in the slice: `r^{1/2} e^{θI/2}` or `ln r + θ I`.
    fn slice_base(&self, r: f64, theta: f64, unit: ImaginaryUnit) -> Quaternion {
        match self {
            Self::Sqrt => embed_slice(Complex64::from_polar(r.sqrt(), theta / 2.0), unit),
            Self::Log => embed_slice(Complex64::new(r.ln(), theta), unit),
            Self::Poly { .. } => Quaternion::ONE,
        }
    }

    /// `n`-th slice derivative at the current state.
    pub fn derivative_value(&self, state: &SheetState, n: u32) -> Result<Quaternion> {
        if n == 0 {
            return Ok(self.value(state));
        }
        let q = state.quaternion_point();
        match self {
            Self::Sqrt => {
                let factorial: f64 = (1..=n).map(f64::from).product();
                let scale = binomial_half(n) * factorial;
                Ok(q.inverse()?.powi(n) * self.value(state) * scale)
            }
            Self::Log => {
                let factorial: f64 = (1..n).map(f64::from).product();
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                Ok(q.inverse()?.powi(n) * (sign * factorial))
            }
            Self::Poly { coeffs } => {
                let derived = crate::calculus::SliceRegularPoly::new(coeffs.clone()).derivative(n);
                Ok(derived.eval(q))
            }
        }
    }

    /// Continues the state along one piece lying on the current slice.
    pub fn continue_segment(&self, state: &SheetState, seg: &PathSegment) -> Result<SheetState> {
        let scale = state.point.norm().max(1.0);
        if (seg.start() - state.point).norm() > JUNCTION_TOLERANCE * scale {
            return Err(Error::PathMismatch);
        }
        let theta = if is_branched(self) {
            state.theta + seg.arg_change()?
        } else {
            0.0
        };
        Ok(SheetState {
            point: seg.end(),
            theta,
            ..*state
        })
    }

    /// Moves to the slice of `unit` at a real point, keeping the value.
    pub fn junction_switch(&self, state: &SheetState, unit: ImaginaryUnit) -> Result<SheetState> {
        let z = state.point;
        if z.im.abs() > JUNCTION_TOLERANCE * z.norm().max(1.0) {
            return Err(Error::NotAtRealPoint);
        }
        if !is_branched(self) {
            return Ok(SheetState { unit, ..*state });
        }
        if z.norm() <= JUNCTION_TOLERANCE {
            return Err(Error::BranchPoint { x: z.re });
        }
        let theta = if z.re > 0.0 { 0.0 } else { std::f64::consts::PI };
        let v = self.value(state);
        let base = self.slice_base(z.norm(), theta, unit);
        let datum = match self {
            Self::Sqrt => base.inverse()? * v,
            _ => v - base,
        };
        Ok(SheetState {
            point: z,
            theta,
            unit,
            datum,
        })
    }

    /// Continues from `x0` along `path`, part `k` on the slice of `units[k]`, and returns
    /// the final state.
    pub fn continue_along(
        &self,
        path: &NPartPath,
        units: &[ImaginaryUnit],
        x0: f64,
        initial_unit: ImaginaryUnit,
    ) -> Result<SheetState> {
        if units.len() != path.n() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} units", path.n()),
                found: format!("{}", units.len()),
            });
        }
        let mut state = self.initial_state(x0, initial_unit)?;
        for (part, &unit) in path.parts().iter().zip(units) {
            state = self.junction_switch(&state, unit)?;
            for seg in part.pieces() {
                state = self.continue_segment(&state, seg)?;
            }
        }
        Ok(state)
    }

    /// Value at the end of the lifted path.
    pub fn evaluate_lifted(
        &self,
        path: &NPartPath,
        units: &[ImaginaryUnit],
        x0: f64,
        initial_unit: ImaginaryUnit,
    ) -> Result<Quaternion> {
        let state = self.continue_along(path, units, x0, initial_unit)?;
        Ok(self.value(&state))
    }

    /// Germ key at the end of the lifted path, which must end on the real axis.
    pub fn germ_key(
        &self,
        path: &NPartPath,
        units: &[ImaginaryUnit],
        x0: f64,
        initial_unit: ImaginaryUnit,
    ) -> Result<GermKey> {
        let state = self.continue_along(path, units, x0, initial_unit)?;
        if state.point.im.abs() > JUNCTION_TOLERANCE * state.point.norm().max(1.0) {
            return Err(Error::NotAtRealPoint);
        }
        Ok(GermKey {
            point: Quaternion::real(state.point.re),
            value: self.value(&state),
        })
    }
}

/// Tests whether `tested` extends along the witnesses as a single function on the
/// domain of `reference`. All witnesses must reach one germ of `reference`; the verdict
/// is `Obstructed` when the values of `tested` then disagree.
pub fn extendability_check(
    reference: &SliceFunctionModel,
    tested: &SliceFunctionModel,
    witnesses: &[(NPartPath, Vec<ImaginaryUnit>)],
    x0: f64,
    tol: f64,
) -> Result<ExtendabilityVerdict> {
    let start = ImaginaryUnit::I;
    let mut keys = Vec::with_capacity(witnesses.len());
    let mut values = Vec::with_capacity(witnesses.len());
    for (path, units) in witnesses {
        keys.push(reference.germ_key(path, units, x0, start)?);
        values.push(tested.evaluate_lifted(path, units, x0, start)?);
    }
    for b in 1..keys.len() {
        if !keys[0].matches(&keys[b], tol) {
            return Err(Error::KeysDiffer { first: 1, second: b + 1 });
        }
    }
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            if !values[a].approx_eq(values[b], tol) {
                return Ok(ExtendabilityVerdict::Obstructed {
                    witnesses: (a + 1, b + 1),
                    values: (values[a], values[b]),
                });
            }
        }
    }
    Ok(ExtendabilityVerdict::Extendable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sqrt_out_and_back() {
        let b = NPartPath::out_and_back();
        let v = SliceFunctionModel::Sqrt
            .evaluate_lifted(&b, &[ImaginaryUnit::I, ImaginaryUnit::J], 1.0, ImaginaryUnit::I)
            .unwrap();
        assert!(v.approx_eq(Quaternion::K, 1e-12), "{v}");
    }

    #[test]
    fn log_out_and_back() {
        let b = NPartPath::out_and_back();
        let v = SliceFunctionModel::Log
            .evaluate_lifted(&b, &[ImaginaryUnit::I, ImaginaryUnit::J], 1.0, ImaginaryUnit::I)
            .unwrap();
        let expected = Quaternion::I * PI - Quaternion::J * PI;
        assert!(v.approx_eq(expected, 1e-12), "{v}");
    }

    #[test]
    fn branch_point_start() {
        assert_eq!(
            SliceFunctionModel::Sqrt.initial_state(0.0, ImaginaryUnit::I),
            Err(Error::BranchPoint { x: 0.0 })
        );
    }

    #[test]
    fn switch_off_axis_fails() {
        let mut s = SliceFunctionModel::Sqrt.initial_state(1.0, ImaginaryUnit::I).unwrap();
        s.point = Complex64::new(0.0, 1.0);
        assert_eq!(
            SliceFunctionModel::Sqrt.junction_switch(&s, ImaginaryUnit::J),
            Err(Error::NotAtRealPoint)
        );
    }

    #[test]
    fn polynomial_value() {
        let model = SliceFunctionModel::Poly {
            coeffs: vec![Quaternion::ONE, Quaternion::ZERO, Quaternion::J],
        };
        let path = NPartPath::from_segments(vec![PathSegment::half_turns(0.5)]).unwrap();
        let v = model.evaluate_lifted(&path, &[ImaginaryUnit::I], 1.0, ImaginaryUnit::I).unwrap();
        // 1 + i^2 j = 1 - j
        assert!(v.approx_eq(Quaternion::ONE - Quaternion::J, 1e-12));
    }
}
