//! Stem values, the tensor algebra they correspond to, and stem functions on disks.

pub mod basis;
mod sampled;
mod system;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monodromy::SliceFunctionModel;
use crate::paths::NPartPath;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::repf::representation_vector_standard;
use crate::sliceunits::{zeta, StemStructureMatrix};

pub use sampled::{SampleGrid, SampledStem};
pub use system::{
    validate_stem_system, ConditionReport, EntryOrigin, StemEntry, StemSystem, StemSystemFile,
    ValidationReport, ValidationSettings,
};

/// Default finite-difference step for stem derivatives.
pub const DEFAULT_STEP: f64 = 1e-5;

// ── Values ──

/// A column of `2^N` quaternions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Quaternion>", into = "Vec<Quaternion>")]
pub struct StemValue(Vec<Quaternion>);

impl TryFrom<Vec<Quaternion>> for StemValue {
    type Error = Error;
    fn try_from(v: Vec<Quaternion>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StemValue> for Vec<Quaternion> {
    fn from(v: StemValue) -> Self {
        v.0
    }
}

impl StemValue {
    pub fn new(coeffs: Vec<Quaternion>) -> Result<Self> {
        let len = coeffs.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << basis::MAX_FACTORS {
            return Err(Error::ShapeMismatch {
                expected: "2^N entries with N >= 1".into(),
                found: format!("{len} entries"),
            });
        }
        Ok(Self(coeffs))
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; 1 << n])
    }

    /// `(1, 0, …, 0)`: the stem value of the constant function one.
    pub fn one(n: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[0] = Quaternion::ONE;
        v
    }

    pub fn n(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|&q| q * s).collect())
    }

    /// Appends zeros up to `2^n` entries.
    pub fn padded(&self, n: usize) -> Result<Self> {
        if n < self.n() {
            return Err(Error::ShapeMismatch {
                expected: format!("at most N = {n}"),
                found: format!("N = {}", self.n()),
            });
        }
        let mut v = self.0.clone();
        v.resize(1 << n, Quaternion::ZERO);
        Ok(Self(v))
    }

    /// Largest entry norm of the difference; values of different size are compared
    /// after zero padding.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let n = self.n().max(other.n());
        let a = self.padded(n).expect("n is the maximum");
        let b = other.padded(n).expect("n is the maximum");
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| (*x - *y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// `σ_N · self`.
    pub fn apply_sigma(&self, sigma: &StemStructureMatrix) -> Self {
        Self(sigma.apply(&self.0))
    }

    /// `(x 𝕀 + y σ_N) · self`.
    pub fn apply_point(&self, z: Complex64, sigma: &StemStructureMatrix) -> Self {
        let s = self.apply_sigma(sigma);
        Self(
            self.0
                .iter()
                .zip(&s.0)
                .map(|(&a, &b)| a * z.re + b * z.im)
                .collect(),
        )
    }

    /// `ζ(K) · self`.
    pub fn slice_value(&self, units: &[ImaginaryUnit]) -> Result<Quaternion> {
        if units.len() != self.n() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} units", self.n()),
                found: format!("{}", units.len()),
            });
        }
        Ok(zeta(units).iter().zip(&self.0).map(|(&z, &c)| z * c).sum())
    }
}

impl Add for &StemValue {
    type Output = StemValue;
    fn add(self, o: &StemValue) -> StemValue {
        let n = self.n().max(o.n());
        let (a, b) = (self.padded(n).unwrap(), o.padded(n).unwrap());
        StemValue(a.0.iter().zip(&b.0).map(|(&x, &y)| x + y).collect())
    }
}

impl Sub for &StemValue {
    type Output = StemValue;
    fn sub(self, o: &StemValue) -> StemValue {
        self + &o.scale(-1.0)
    }
}

/// An element `Σ_m basis(m) ⊗ c_m` of the tensor algebra with `N` complex factors.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorValue {
    n: usize,
    coeffs: Vec<Quaternion>,
}

impl TensorValue {
    pub fn new(n: usize, coeffs: Vec<Quaternion>) -> Result<Self> {
        if n == 0 || n > basis::MAX_FACTORS || coeffs.len() != 1 << n {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coefficients", 1usize.checked_shl(n as u32).unwrap_or(0)),
                found: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// The last complex generator as a tensor.
    pub fn last_generator(n: usize) -> Self {
        let (sign, m) = basis::last_generator(n);
        let mut coeffs = vec![Quaternion::ZERO; 1 << n];
        coeffs[m - 1] = Quaternion::real(f64::from(sign));
        Self { n, coeffs }
    }

    /// `x + y e_N`.
    pub fn point(n: usize, z: Complex64) -> Self {
        let mut t = Self::last_generator(n).scale(z.im);
        t.coeffs[0] += Quaternion::real(z.re);
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&q| q * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch {
                expected: format!("N = {}", self.n),
                found: format!("N = {}", other.n),
            });
        }
        Ok(Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect(),
        })
    }
}

/// Product in the tensor algebra: basis signs times the quaternion product of
/// coefficients, left factor first.
pub fn tensor_mul(a: &TensorValue, b: &TensorValue) -> Result<TensorValue> {
    if a.n != b.n {
        return Err(Error::ShapeMismatch {
            expected: format!("N = {}", a.n),
            found: format!("N = {}", b.n),
        });
    }
    let n = a.n;
    let mut out = vec![Quaternion::ZERO; 1 << n];
    for (ia, &ca) in a.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (ib, &cb) in b.coeffs.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let (sign, c) = basis::basis_product(n, ia + 1, ib + 1);
            out[c - 1] += (ca * cb) * f64::from(sign);
        }
    }
    Ok(TensorValue { n, coeffs: out })
}

impl Mul for &TensorValue {
    type Output = TensorValue;
    fn mul(self, o: &TensorValue) -> TensorValue {
        tensor_mul(self, o).expect("equal number of factors")
    }
}

/// The isomorphism from stem values to tensors: entry `m` becomes the coefficient of
/// `basis(m)`.
pub fn to_tensor(v: &StemValue) -> TensorValue {
    TensorValue {
        n: v.n(),
        coeffs: v.0.clone(),
    }
}

pub fn from_tensor(t: &TensorValue) -> StemValue {
    StemValue(t.coeffs.clone())
}

/// Product of stem values through the tensor algebra; the smaller value is zero padded.
pub fn star_vector(a: &StemValue, b: &StemValue) -> Result<StemValue> {
    let n = a.n().max(b.n());
    let ta = to_tensor(&a.padded(n)?);
    let tb = to_tensor(&b.padded(n)?);
    Ok(from_tensor(&tensor_mul(&ta, &tb)?))
}

// ── Stem functions ──

/// A stem function on a disk: a map from points of the disk to stem values.
pub trait StemFunction: Send + Sync + fmt::Debug {
    fn n(&self) -> usize;
    fn center(&self) -> Complex64;
    fn radius(&self) -> f64;
    /// Value at `z`; callers keep `z` inside the disk.
    fn value(&self, z: Complex64) -> Result<StemValue>;
    /// For sampled functions: largest mismatch between stored samples and the function.
    fn sample_consistency(&self) -> Option<f64> {
        None
    }
}

pub type StemRef = Arc<dyn StemFunction>;

pub fn contains(f: &dyn StemFunction, z: Complex64) -> bool {
    (z - f.center()).norm() < f.radius()
}

/// Value at `z`, failing with `OutOfDomain` outside the disk.
pub fn eval_checked(f: &dyn StemFunction, z: Complex64) -> Result<StemValue> {
    if !contains(f, z) {
        return Err(Error::OutOfDomain);
    }
    f.value(z)
}

/// The stem function of a slice-function model along `path`: at `z` it is the
/// representation vector of the path extended to `z`.
#[derive(Debug, Clone)]
pub struct SliceStem {
    model: SliceFunctionModel,
    path: NPartPath,
    x0: f64,
    radius: f64,
}

impl SliceStem {
    pub fn new(model: SliceFunctionModel, path: NPartPath, x0: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Invalid(format!("radius {radius} must be positive")));
        }
        if !matches!(model, SliceFunctionModel::Poly { .. }) {
            let distance = path.end().norm() - radius;
            if distance <= crate::paths::BRANCH_CLEARANCE {
                return Err(Error::BranchPointCrossing {
                    distance: distance.max(0.0),
                });
            }
        }
        Ok(Self {
            model,
            path,
            x0,
            radius,
        })
    }

    pub fn model(&self) -> &SliceFunctionModel {
        &self.model
    }

    pub fn path(&self) -> &NPartPath {
        &self.path
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

impl StemFunction for SliceStem {
    fn n(&self) -> usize {
        self.path.n()
    }
    fn center(&self) -> Complex64 {
        self.path.end()
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, z: Complex64) -> Result<StemValue> {
        let g = representation_vector_standard(&self.model, &self.path.extend_to(z), self.x0)?;
        StemValue::new(g.0)
    }
}

/// `z ↦ (x 𝕀 + y σ_N) c` on the whole plane.
#[derive(Debug, Clone)]
pub struct LinearStem {
    c: StemValue,
    sigma: StemStructureMatrix,
}

impl LinearStem {
    pub fn new(c: StemValue) -> Self {
        let sigma = StemStructureMatrix::new(c.n());
        Self { c, sigma }
    }
}

impl StemFunction for LinearStem {
    fn n(&self) -> usize {
        self.c.n()
    }
    fn center(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn radius(&self) -> f64 {
        f64::INFINITY
    }
    fn value(&self, z: Complex64) -> Result<StemValue> {
        Ok(self.c.apply_point(z, &self.sigma))
    }
}

/// A constant stem value on a disk.
#[derive(Debug, Clone)]
pub struct ConstantStem {
    pub value: StemValue,
    pub center: Complex64,
    pub radius: f64,
}

impl StemFunction for ConstantStem {
    fn n(&self) -> usize {
        self.value.n()
    }
    fn center(&self) -> Complex64 {
        self.center
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, _z: Complex64) -> Result<StemValue> {
        Ok(self.value.clone())
    }
}

type StemClosure = dyn Fn(Complex64) -> Result<StemValue> + Send + Sync;

/// A stem function given by a closure.
#[derive(Clone)]
pub struct FnStem {
    n: usize,
    center: Complex64,
    radius: f64,
    f: Arc<StemClosure>,
}

impl FnStem {
    pub fn new(
        n: usize,
        center: Complex64,
        radius: f64,
        f: impl Fn(Complex64) -> Result<StemValue> + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            center,
            radius,
            f: Arc::new(f),
        }
    }

    /// Applies `map` to every value of `inner`, keeping its disk.
    pub fn mapped(
        inner: StemRef,
        map: impl Fn(StemValue) -> StemValue + Send + Sync + 'static,
    ) -> Self {
        let (n, center, radius) = (inner.n(), inner.center(), inner.radius());
        Self::new(n, center, radius, move |z| inner.value(z).map(&map))
    }
}

impl fmt::Debug for FnStem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnStem")
            .field("n", &self.n)
            .field("center", &self.center)
            .field("radius", &self.radius)
            .finish()
    }
}

impl StemFunction for FnStem {
    fn n(&self) -> usize {
        self.n
    }
    fn center(&self) -> Complex64 {
        self.center
    }
    fn radius(&self) -> f64 {
        self.radius
    }
    fn value(&self, z: Complex64) -> Result<StemValue> {
        (self.f)(z)
    }
}

/// Pointwise sum or star product of two stem functions on the same disk.
#[derive(Debug, Clone)]
pub enum Combined {
    Sum(StemRef, StemRef),
    Star(StemRef, StemRef),
}

impl Combined {
    fn operands(&self) -> (&StemRef, &StemRef) {
        match self {
            Self::Sum(a, b) | Self::Star(a, b) => (a, b),
        }
    }
}

impl StemFunction for Combined {
    fn n(&self) -> usize {
        let (a, b) = self.operands();
        a.n().max(b.n())
    }
    fn center(&self) -> Complex64 {
        self.operands().0.center()
    }
    fn radius(&self) -> f64 {
        let (a, b) = self.operands();
        a.radius().min(b.radius())
    }
    fn value(&self, z: Complex64) -> Result<StemValue> {
        let (a, b) = self.operands();
        let (va, vb) = (a.value(z)?, b.value(z)?);
        match self {
            Self::Sum(..) => Ok(&va + &vb),
            Self::Star(..) => star_vector(&va, &vb),
        }
    }
}

// ── Derivatives and slices ──

/// `(∂_x + σ_N ∂_y) F` at `z` by central differences, as the largest entry norm.
pub fn stem_cr_residual(f: &dyn StemFunction, z: Complex64, h: f64) -> Result<f64> {
    if (z - f.center()).norm() + h >= f.radius() {
        return Err(Error::OutOfDomain);
    }
    let sigma = StemStructureMatrix::new(f.n());
    let dx = &f.value(z + h)? - &f.value(z - h)?;
    let dy = &f.value(z + Complex64::new(0.0, h))? - &f.value(z - Complex64::new(0.0, h))?;
    let residual = (&dx + &dy.apply_sigma(&sigma)).scale(0.5 / h);
    Ok(residual.max_norm())
}

/// `½(∂_x - σ_N ∂_y) F` at `z` by central differences.
pub fn stem_derivative(f: &dyn StemFunction, z: Complex64, h: f64) -> Result<StemValue> {
    if (z - f.center()).norm() + h >= f.radius() {
        return Err(Error::OutOfDomain);
    }
    let sigma = StemStructureMatrix::new(f.n());
    let dx = &f.value(z + h)? - &f.value(z - h)?;
    let dy = &f.value(z + Complex64::new(0.0, h))? - &f.value(z - Complex64::new(0.0, h))?;
    Ok((&dx - &dy.apply_sigma(&sigma)).scale(0.25 / h))
}

/// `n`-th derivative at `z0` from values on the circle `|z - z0| = rho` (trapezoid rule
/// with `points` nodes) using the stem structure matrix.
pub fn stem_derivative_contour(
    f: &dyn StemFunction,
    z0: Complex64,
    order: u32,
    rho: f64,
    points: usize,
) -> Result<StemValue> {
    if (z0 - f.center()).norm() + rho >= f.radius() {
        return Err(Error::OutOfDomain);
    }
    let sigma = StemStructureMatrix::new(f.n());
    let mut acc = StemValue::zero(f.n());
    for k in 0..points {
        let phi = std::f64::consts::TAU * k as f64 / points as f64;
        let v = f.value(z0 + Complex64::from_polar(rho, phi))?;
        let angle = order as f64 * phi;
        let term = v.apply_point(Complex64::new(angle.cos(), -angle.sin()), &sigma);
        acc = &acc + &term;
    }
    let factorial: f64 = (1..=order).map(f64::from).product();
    Ok(acc.scale(factorial / (points as f64 * rho.powi(order as i32))))
}

/// Same as [`stem_derivative_contour`], computed in the tensor algebra with the last
/// complex generator in place of the stem structure matrix.
pub fn tensor_derivative_contour(
    f: &dyn StemFunction,
    z0: Complex64,
    order: u32,
    rho: f64,
    points: usize,
) -> Result<TensorValue> {
    if (z0 - f.center()).norm() + rho >= f.radius() {
        return Err(Error::OutOfDomain);
    }
    let n = f.n();
    let mut acc = TensorValue::new(n, vec![Quaternion::ZERO; 1 << n])?;
    for k in 0..points {
        let phi = std::f64::consts::TAU * k as f64 / points as f64;
        let v = to_tensor(&f.value(z0 + Complex64::from_polar(rho, phi))?);
        let angle = order as f64 * phi;
        let weight = TensorValue::point(n, Complex64::new(angle.cos(), -angle.sin()));
        acc = acc.add(&tensor_mul(&weight, &v)?)?;
    }
    let factorial: f64 = (1..=order).map(f64::from).product();
    Ok(acc.scale(factorial / (points as f64 * rho.powi(order as i32))))
}

/// `ζ(K) F(z)`: the slice function read off a stem function.
pub fn slice_from_stem(f: &dyn StemFunction, units: &[ImaginaryUnit], z: Complex64) -> Result<Quaternion> {
    eval_checked(f, z)?.slice_value(units)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn one_factor_star() {
        let a = StemValue::new(vec![q(1.0, 2.0, 0.0, 0.0), q(0.0, 0.0, 1.0, 0.0)]).unwrap();
        let b = StemValue::new(vec![q(0.0, 0.0, 0.0, 1.0), q(3.0, 0.0, 0.0, 0.0)]).unwrap();
        let c = star_vector(&a, &b).unwrap();
        let (a1, a2, b1, b2) = (a.0[0], a.0[1], b.0[0], b.0[1]);
        assert_eq!(c.0, vec![a1 * b1 - a2 * b2, a1 * b2 + a2 * b1]);
    }

    #[test]
    fn generator_squares() {
        let e = TensorValue::new(1, vec![Quaternion::ZERO, Quaternion::ONE]).unwrap();
        let sq = tensor_mul(&e, &e).unwrap();
        assert_eq!(sq.coeffs(), &[-Quaternion::ONE, Quaternion::ZERO]);
    }

    #[test]
    fn linear_stem_is_holomorphic() {
        let c = StemValue::new(vec![q(1.0, 0.0, 2.0, 0.0), q(0.0, 1.0, 0.0, -1.0)]).unwrap();
        let f = LinearStem::new(c.clone());
        let r = stem_cr_residual(&f, Complex64::new(0.3, -0.2), DEFAULT_STEP).unwrap();
        assert!(r < 1e-9, "{r}");
        let d = stem_derivative(&f, Complex64::new(0.3, -0.2), DEFAULT_STEP).unwrap();
        assert!(d.max_distance(&c) < 1e-9);
    }

    #[test]
    fn out_of_domain() {
        let f = SliceStem::new(SliceFunctionModel::Sqrt, NPartPath::constant(1.0), 1.0, 0.5).unwrap();
        assert_eq!(eval_checked(&f, Complex64::new(2.0, 0.0)), Err(Error::OutOfDomain));
        assert!(SliceStem::new(SliceFunctionModel::Sqrt, NPartPath::constant(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn initial_profile_of_sqrt() {
        let f = SliceStem::new(SliceFunctionModel::Sqrt, NPartPath::constant(1.0), 1.0, 0.5).unwrap();
        let v = f.value(Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.max_distance(&StemValue::one(1)) < 1e-14);
    }
}
