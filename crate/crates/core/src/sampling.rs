//! Seeded random samples of units, quaternions, unit matrices and polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::calculus::SliceRegularPoly;
use crate::qmat::QuaternionMatrix;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::sliceunits::{is_left_slice_linearly_independent, SliceUnitMatrix};
use crate::stemtensor::StemValue;

/// Deterministic sampler; equal seeds give equal sequences.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Uniform on the sphere of imaginary units.
    pub fn unit(&mut self) -> ImaginaryUnit {
        loop {
            let (x, y, z) = (self.normal(), self.normal(), self.normal());
            if let Ok(u) = ImaginaryUnit::normalized(x, y, z) {
                return u;
            }
        }
    }

    /// Standard Gaussian components.
    pub fn quaternion(&mut self) -> Quaternion {
        Quaternion::new(self.normal(), self.normal(), self.normal(), self.normal())
    }

    pub fn units(&mut self, n: usize) -> Vec<ImaginaryUnit> {
        (0..n).map(|_| self.unit()).collect()
    }

    /// A random `2^N x N` unit matrix with left slice-linearly independent rows.
    pub fn independent_unit_matrix(&mut self, n: usize) -> SliceUnitMatrix {
        loop {
            let rows = (0..1 << n).map(|_| self.units(n)).collect();
            let m = SliceUnitMatrix::new(n, rows).expect("shape");
            if is_left_slice_linearly_independent(&m) {
                return m;
            }
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> QuaternionMatrix {
        let data = (0..rows * cols).map(|_| self.quaternion()).collect();
        QuaternionMatrix::new(rows, cols, data).expect("shape")
    }

    /// Polynomial of the given degree with Gaussian coefficients.
    pub fn polynomial(&mut self, degree: usize) -> SliceRegularPoly {
        SliceRegularPoly::new((0..=degree).map(|_| self.quaternion()).collect())
    }

    pub fn stem_value(&mut self, n: usize) -> StemValue {
        StemValue::new((0..1 << n).map(|_| self.quaternion()).collect()).expect("shape")
    }
}
