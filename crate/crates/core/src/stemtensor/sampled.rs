//! Stem functions stored as values on a polar grid.
//!
//! A grid is reconstructed from its outer ring: on a circle every function of the
//! angle splits into a part `Σ w^n c_n` (powers of `x 𝕀 + y σ_N`) and a part
//! `Σ w̄^n d_n` (powers of `x 𝕀 - y σ_N`). The first extends holomorphically to the
//! disk and the second records any failure of holomorphy, so the reconstruction keeps
//! both and the validator can see it.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{StemFunction, StemValue};
use crate::error::{Error, Result};
use crate::sliceunits::StemStructureMatrix;

/// Fraction of the disk radius covered by the outermost sample ring.
pub const OUTER_RING_FRACTION: f64 = 0.9;

/// Values on rings `rho[k]` around the disk center at `angles` equally spaced angles,
/// stored ring by ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub rho: Vec<f64>,
    pub angles: usize,
    pub values: Vec<StemValue>,
}

impl SampleGrid {
    /// Samples `f` on `radii` rings from the center out to 0.9 of its radius.
    pub fn sample(f: &dyn StemFunction, radii: usize, angles: usize) -> Result<Self> {
        if radii < 2 || angles < 4 {
            return Err(Error::Invalid("grid needs at least 2 rings and 4 angles".into()));
        }
        let outer = OUTER_RING_FRACTION * f.radius();
        let rho: Vec<f64> = (0..radii)
            .map(|k| outer * k as f64 / (radii - 1) as f64)
            .collect();
        let mut values = Vec::with_capacity(radii * angles);
        for &r in &rho {
            for j in 0..angles {
                let phi = TAU * j as f64 / angles as f64;
                values.push(f.value(f.center() + Complex64::from_polar(r, phi))?);
            }
        }
        Ok(Self { rho, angles, values })
    }

    fn point(&self, center: Complex64, k: usize, j: usize) -> Complex64 {
        center + Complex64::from_polar(self.rho[k], TAU * j as f64 / self.angles as f64)
    }
}

/// A stem function reconstructed from a [`SampleGrid`].
#[derive(Debug, Clone)]
pub struct SampledStem {
    n: usize,
    center: Complex64,
    radius: f64,
    outer: f64,
    holomorphic: Vec<StemValue>,
    antiholomorphic: Vec<StemValue>,
    sigma: StemStructureMatrix,
    consistency: f64,
}

impl SampledStem {
    pub fn new(center: Complex64, radius: f64, grid: &SampleGrid) -> Result<Self> {
        let m = grid.angles;
        let rings = grid.rho.len();
        if rings == 0 || m < 4 || grid.values.len() != rings * m {
            return Err(Error::ShapeMismatch {
                expected: format!("{} samples", rings * m),
                found: format!("{}", grid.values.len()),
            });
        }
        let outer = grid.rho[rings - 1];
        if !(outer > 0.0) || outer >= radius {
            return Err(Error::Invalid("outer sample ring must lie inside the disk".into()));
        }
        let n = grid.values[0].n();
        if grid.values.iter().any(|v| v.n() != n) {
            return Err(Error::Invalid("samples disagree in size".into()));
        }
        let sigma = StemStructureMatrix::new(n);
        let ring = &grid.values[(rings - 1) * m..];
        let top = m / 2;
        let mut holomorphic = Vec::with_capacity(top);
        let mut antiholomorphic = Vec::with_capacity(top);
        for order in 0..top {
            let mut cos_part = StemValue::zero(n);
            let mut sin_part = StemValue::zero(n);
            for (j, v) in ring.iter().enumerate() {
                let angle = TAU * (order * j) as f64 / m as f64;
                cos_part = &cos_part + &v.scale(angle.cos() / m as f64);
                sin_part = &sin_part + &v.scale(angle.sin() / m as f64);
            }
            if order == 0 {
                holomorphic.push(cos_part);
                antiholomorphic.push(StemValue::zero(n));
            } else {
                let rotated = sin_part.apply_sigma(&sigma);
                holomorphic.push(&cos_part - &rotated);
                antiholomorphic.push(&cos_part + &rotated);
            }
        }
        let mut stem = Self {
            n,
            center,
            radius,
            outer,
            holomorphic,
            antiholomorphic,
            sigma,
            consistency: 0.0,
        };
        let mut worst: f64 = 0.0;
        for k in 0..rings - 1 {
            for j in 0..m {
                let v = stem.value(grid.point(center, k, j))?;
                worst = worst.max(v.max_distance(&grid.values[k * m + j]));
            }
        }
        stem.consistency = worst;
        Ok(stem)
    }

    /// Size of the part that is not holomorphic, relative to the outer ring.
    pub fn antiholomorphic_norm(&self) -> f64 {
        self.antiholomorphic.iter().map(StemValue::max_norm).fold(0.0, f64::max)
    }
}

impl StemFunction for SampledStem {
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
        let w = (z - self.center) / self.outer;
        let mut power = Complex64::new(1.0, 0.0);
        let mut acc = StemValue::zero(self.n);
        for (c, d) in self.holomorphic.iter().zip(&self.antiholomorphic) {
            acc = &acc + &c.apply_point(power, &self.sigma);
            acc = &acc + &d.apply_point(power.conj(), &self.sigma);
            power *= w;
        }
        Ok(acc)
    }
    fn sample_consistency(&self) -> Option<f64> {
        Some(self.consistency)
    }
}
