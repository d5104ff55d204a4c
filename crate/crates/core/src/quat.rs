//! Quaternions, imaginary units and the slice embedding of the complex plane.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from norm one within which a vector is accepted (and renormalized) as a unit.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A real quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero real part.
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    pub fn inverse(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n)
    }

    /// `self * other^{-1}`.
    pub fn right_div(self, other: Self) -> Result<Self> {
        Ok(self * other.inverse()?)
    }

    /// `other^{-1} * self`.
    pub fn left_div(self, other: Self) -> Result<Self> {
        Ok(other.inverse()? * self)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Writes `self` as `x + y I` with `y >= 0`. For real inputs the unit is `fallback`.
    pub fn to_slice(self, fallback: ImaginaryUnit) -> (Complex64, ImaginaryUnit) {
        let v = self.im();
        let y = v.norm();
        if y == 0.0 {
            return (Complex64::new(self.w, 0.0), fallback);
        }
        let unit = ImaginaryUnit {
            x: v.x / y,
            y: v.y / y,
            z: v.z / y,
        };
        (Complex64::new(self.w, y), unit)
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

// ── Arithmetic ──

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

// ── Imaginary units ──

/// A purely imaginary quaternion of norm one, stored as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryUnit {
    x: f64,
    y: f64,
    z: f64,
}

impl ImaginaryUnit {
    pub const I: Self = Self { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Self = Self { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Self = Self { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts vectors within [`UNIT_TOLERANCE`] of norm one and renormalizes them.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Interprets a quaternion as a unit; its real part must vanish.
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        if q.w.abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm: q.norm() });
        }
        Self::new(q.x, q.y, q.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn as_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }
}

impl Neg for ImaginaryUnit {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl TryFrom<[f64; 3]> for ImaginaryUnit {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<ImaginaryUnit> for [f64; 3] {
    fn from(u: ImaginaryUnit) -> Self {
        u.to_array()
    }
}

impl From<ImaginaryUnit> for Quaternion {
    fn from(u: ImaginaryUnit) -> Self {
        u.as_quaternion()
    }
}

/// Maps `x + y i` in the complex plane to `x + y I` on the slice of `unit`.
pub fn embed_slice(z: Complex64, unit: ImaginaryUnit) -> Quaternion {
    Quaternion::new(z.re, z.im * unit.x, z.im * unit.y, z.im * unit.z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * j * k, Quaternion::real(-1.0));
        for u in [i, j, k] {
            assert_eq!(u * u, Quaternion::real(-1.0));
        }
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(q.inverse().unwrap(), Quaternion::new(0.5, -0.5, 0.0, 0.0));
        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn unit_acceptance() {
        assert!(ImaginaryUnit::new(0.6, 0.8, 0.0).is_ok());
        assert!(ImaginaryUnit::new(1.0 + 5e-10, 0.0, 0.0).is_ok());
        assert!(matches!(
            ImaginaryUnit::new(1.0, 1.0, 0.0),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn slice_embedding() {
        let q = embed_slice(Complex64::new(2.0, 3.0), ImaginaryUnit::J);
        assert_eq!(q, Quaternion::new(2.0, 0.0, 3.0, 0.0));
        let (z, u) = q.to_slice(ImaginaryUnit::I);
        assert_eq!(z, Complex64::new(2.0, 3.0));
        assert_eq!(u, ImaginaryUnit::J);
    }

    #[test]
    fn serde_shapes() {
        let q: Quaternion = serde_json::from_str("[1, 2, 3, 4]").unwrap();
        assert_eq!(q, Quaternion::new(1.0, 2.0, 3.0, 4.0));
        let u: ImaginaryUnit = serde_json::from_str("[0, 0, 1]").unwrap();
        assert_eq!(u, ImaginaryUnit::K);
        assert!(serde_json::from_str::<ImaginaryUnit>("[0, 2, 0]").is_err());
    }
}
