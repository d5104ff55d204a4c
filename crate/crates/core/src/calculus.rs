//! Slice regular polynomials with right coefficients, their star product, conjugate,
//! symmetrization, reciprocal, derivatives and Taylor expansions, plus the matching
//! checks for stem functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monodromy::SliceFunctionModel;
use crate::paths::NPartPath;
use crate::quat::{embed_slice, ImaginaryUnit, Quaternion};
use crate::sliceunits::{eta, slice_matrix, StemStructureMatrix};
use crate::stemtensor::{
    stem_derivative_contour, tensor_derivative_contour, tensor_mul, to_tensor, SliceStem,
    StemFunction, StemValue, TensorValue,
};

/// `q ↦ Σ q^n c_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRegularPoly {
    pub coeffs: Vec<Quaternion>,
}

impl SliceRegularPoly {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Quaternion::ONE)
    }

    /// The identity function `q`.
    pub fn variable() -> Self {
        Self::new(vec![Quaternion::ZERO, Quaternion::ONE])
    }

    pub fn eval(&self, q: Quaternion) -> Quaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::ZERO, |acc, &c| q * acc + c)
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Self, k: usize| p.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO);
        Self::new((0..len).map(|k| at(self, k) + at(other, k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `self * c` for a constant `c`.
    pub fn mul_right(&self, c: Quaternion) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `c * self` for a constant `c`.
    pub fn mul_left(&self, c: Quaternion) -> Self {
        Self::new(self.coeffs.iter().map(|&a| c * a).collect())
    }

    /// Star product: convolution of coefficients, left factor first.
    pub fn star(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Quaternion::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Regular conjugate: conjugated coefficients.
    pub fn regular_conjugate(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Real-valued components `g_0 … g_3` with `f = g_0 + g_1 I + g_2 J + g_3 IJ` on the
    /// real axis, extracted with star products by the constants `I` and `J`.
    pub fn components(&self, i: ImaginaryUnit, j: ImaginaryUnit) -> [Self; 4] {
        let (iq, jq) = (i.as_quaternion(), j.as_quaternion());
        let real_part = |h: &Self| {
            let g4 = h.sub(&h.mul_left(iq).mul_right(iq)).scale(0.5);
            g4.sub(&g4.mul_left(jq).mul_right(jq)).scale(0.5)
        };
        [
            real_part(self),
            real_part(&self.mul_right(-iq)),
            real_part(&self.mul_right(-jq)),
            real_part(&self.mul_right(-(iq * jq))),
        ]
    }

    /// Regular conjugate assembled from [`SliceRegularPoly::components`], with `I`, `J`
    /// any orthogonal pair of units.
    pub fn regular_conjugate_by_components(&self, i: ImaginaryUnit, j: ImaginaryUnit) -> Self {
        let [g0, g1, g2, g3] = self.components(i, j);
        let (iq, jq) = (i.as_quaternion(), j.as_quaternion());
        g0.sub(&g1.mul_right(iq))
            .sub(&g2.mul_right(jq))
            .sub(&g3.mul_right(iq * jq))
    }

    /// `f * f^c`, a polynomial with real coefficients.
    pub fn symmetrization(&self) -> Self {
        self.star(&self.regular_conjugate())
    }

    /// `n`-th slice derivative.
    pub fn derivative(&self, n: u32) -> Self {
        let n = n as usize;
        if n >= self.coeffs.len() {
            return Self::new(vec![Quaternion::ZERO]);
        }
        let coeffs = (n..self.coeffs.len())
            .map(|k| {
                let falling: f64 = ((k - n + 1)..=k).map(|v| v as f64).product();
                self.coeffs[k] * falling
            })
            .collect();
        Self::new(coeffs)
    }

    /// Largest coefficient difference.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn real_roots_polynomial(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.w).collect()
    }
}

// ── Domains and reciprocals ──

/// Axially symmetric domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SliceDomain {
    Whole,
    /// Euclidean ball around a real center.
    Ball { center: f64, radius: f64 },
    /// Points `x + yJ` with both `x ± yI` in the disk of radius `radius` around `center`
    /// on the slice of `center`.
    SigmaBall { center: Quaternion, radius: f64 },
}

impl SliceDomain {
    pub fn contains(&self, q: Quaternion) -> bool {
        let (z, _) = q.to_slice(ImaginaryUnit::I);
        self.contains_slice_point(z)
    }

    /// Membership of `x + yJ` for `z = x + iy`, `y >= 0`.
    fn contains_slice_point(&self, z: Complex64) -> bool {
        match *self {
            Self::Whole => true,
            Self::Ball { center, radius } => (z - center).norm() < radius,
            Self::SigmaBall { center, radius } => sigma_ball_contains(center, radius, z),
        }
    }

    fn reference_point(&self) -> Quaternion {
        match *self {
            Self::Whole => Quaternion::ZERO,
            Self::Ball { center, .. } => Quaternion::real(center),
            Self::SigmaBall { center, .. } => center,
        }
    }
}

fn sigma_ball_contains(center: Quaternion, radius: f64, z: Complex64) -> bool {
    let (c, _) = center.to_slice(ImaginaryUnit::I);
    let y = z.im.abs();
    let plus = Complex64::new(z.re, y) - c;
    let minus = Complex64::new(z.re, -y) - c;
    plus.norm() < radius && minus.norm() < radius
}

/// Complex roots of a polynomial with real coefficients (lowest degree first).
fn real_polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let Some(top) = coeffs.iter().rposition(|c| c.abs() > 1e-14 * scale) else {
        return Vec::new();
    };
    if top == 0 {
        return Vec::new();
    }
    let lead = coeffs[top];
    let companion = nalgebra::DMatrix::from_fn(top, top, |i, j| {
        if i == 0 {
            -coeffs[top - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

/// `q ↦ f^s(q)^{-1} f^c(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularReciprocal {
    symmetrization: SliceRegularPoly,
    conjugate: SliceRegularPoly,
}

impl RegularReciprocal {
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.symmetrization.eval(q).inverse()? * self.conjugate.eval(q))
    }
}

/// Regular reciprocal of `f`, provided its symmetrization has no zero in `domain`.
///
/// The symmetrization has real coefficients, so its zero set is a union of spheres
/// `x + y S` over its complex roots `x + iy`; each root is tested for membership.
pub fn regular_reciprocal(f: &SliceRegularPoly, domain: &SliceDomain) -> Result<RegularReciprocal> {
    let fs = f.symmetrization();
    if fs.coeffs.iter().all(|c| c.norm() < 1e-14) {
        return Err(Error::SymmetrizationZero {
            witness: domain.reference_point().to_array(),
        });
    }
    for root in real_polynomial_roots(&fs.real_roots_polynomial()) {
        let z = Complex64::new(root.re, root.im.abs());
        if domain.contains_slice_point(z) {
            let witness = embed_slice(z, ImaginaryUnit::I);
            return Err(Error::SymmetrizationZero {
                witness: witness.to_array(),
            });
        }
    }
    Ok(RegularReciprocal {
        symmetrization: fs,
        conjugate: f.regular_conjugate(),
    })
}

/// `(f * g)(q)` from values: `f(q) g(f(q)^{-1} q f(q))`, or `0` where `f(q) = 0`.
pub fn star_eval(
    f: impl Fn(Quaternion) -> Result<Quaternion>,
    g: impl Fn(Quaternion) -> Result<Quaternion>,
    q: Quaternion,
) -> Result<Quaternion> {
    let fq = f(q)?;
    if fq.is_zero() {
        return Ok(Quaternion::ZERO);
    }
    let moved = fq.inverse()? * q * fq;
    Ok(fq * g(moved)?)
}

/// Distance between `(f*g)(q)` computed from coefficients and from values.
pub fn pointwise_star_check(f: &SliceRegularPoly, g: &SliceRegularPoly, q: Quaternion) -> f64 {
    let direct = f.star(g).eval(q);
    let via_values = star_eval(|p| Ok(f.eval(p)), |p| Ok(g.eval(p)), q).expect("polynomials");
    (direct - via_values).norm()
}

// ── Derivatives ──

/// `½(∂_x - I ∂_y) f` at `q = x + yI` by central differences.
pub fn slice_derivative_numeric(
    f: impl Fn(Quaternion) -> Quaternion,
    q: Quaternion,
    h: f64,
) -> Quaternion {
    let (_, unit) = q.to_slice(ImaginaryUnit::I);
    let u = unit.as_quaternion();
    let dx = (f(q + Quaternion::real(h)) - f(q - Quaternion::real(h))) / (2.0 * h);
    let dy = (f(q + u * h) - f(q - u * h)) / (2.0 * h);
    (dx - u * dy) * 0.5
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Largest coefficient gap in `(f*g)^{(n)} = Σ_m C(n,m) f^{(m)} * g^{(n-m)}`.
pub fn leibniz_residual(f: &SliceRegularPoly, g: &SliceRegularPoly, n: u32) -> f64 {
    let lhs = f.star(g).derivative(n);
    let rhs = (0..=n).fold(SliceRegularPoly::new(vec![Quaternion::ZERO]), |acc, m| {
        acc.add(&f.derivative(m).star(&g.derivative(n - m)).scale(binomial(n, m)))
    });
    lhs.max_distance(&rhs)
}

// ── Taylor series ──

/// Taylor coefficients `f^{(n)}(q0) / n!` for `n < terms`, and the radius of the largest
/// disk around `q0` on which the series converges to the model.
fn taylor_coefficients(
    model: &SliceFunctionModel,
    q0: Quaternion,
    unit: ImaginaryUnit,
    terms: usize,
) -> Result<(Vec<Quaternion>, f64)> {
    let (z0, _) = q0.to_slice(unit);
    match model {
        SliceFunctionModel::Poly { coeffs } => {
            let p = SliceRegularPoly::new(coeffs.clone());
            let mut out = Vec::with_capacity(terms);
            let mut factorial = 1.0;
            for n in 0..terms {
                if n > 0 {
                    factorial *= n as f64;
                }
                out.push(p.derivative(n as u32).eval(q0) / factorial);
            }
            Ok((out, f64::INFINITY))
        }
        SliceFunctionModel::Sqrt | SliceFunctionModel::Log => {
            if z0.im == 0.0 && z0.re <= 0.0 {
                return Err(Error::BranchPoint { x: z0.re });
            }
            let inv = z0.inv();
            let mut out = Vec::with_capacity(terms);
            let mut power = Complex64::new(1.0, 0.0);
            let root = z0.sqrt();
            let mut binom = 1.0;
            for n in 0..terms {
                let c = if matches!(model, SliceFunctionModel::Sqrt) {
                    let c = root * power * binom;
                    binom *= (0.5 - n as f64) / (n as f64 + 1.0);
                    c
                } else if n == 0 {
                    z0.ln()
                } else {
                    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                    power * (sign / n as f64)
                };
                out.push(embed_slice(c, unit));
                power *= inv;
            }
            Ok((out, z0.norm()))
        }
    }
}

/// Partial sum `Σ_{n < terms} (q - q0)^{*n} f^{(n)}(q0) / n!`.
///
/// The star powers are polynomials with coefficients in the slice of `q0`, so the sum is
/// evaluated at the two points `x ± yI` of that slice and combined with the
/// representation formula, which avoids the cancellation of the binomial expansion.
pub fn taylor_eval(model: &SliceFunctionModel, q0: Quaternion, q: Quaternion, terms: usize) -> Result<Quaternion> {
    let (_, q_unit) = q.to_slice(ImaginaryUnit::I);
    let (z0, unit) = q0.to_slice(q_unit);
    let (coeffs, radius) = taylor_coefficients(model, q0, unit, terms)?;
    let (zq, j) = q.to_slice(unit);
    let center = embed_slice(z0, unit);
    if radius.is_finite() && !sigma_ball_contains(center, radius, zq) {
        return Err(Error::OutOfBall);
    }
    let partial = |w: Complex64| {
        let step = embed_slice(w, unit) - center;
        let mut power = Quaternion::ONE;
        let mut acc = Quaternion::ZERO;
        for &c in &coeffs {
            acc += power * c;
            power = power * step;
        }
        acc
    };
    let plus = partial(zq);
    let minus = partial(zq.conj());
    let ji = j.as_quaternion() * unit.as_quaternion();
    Ok((Quaternion::ONE - ji) * plus * 0.5 + (Quaternion::ONE + ji) * minus * 0.5)
}

// ── Stem series ──

/// The `n`-th derivative of the stem function of `model` along `path`, evaluated at
/// the end of the path extended to `z` from slice derivatives at the lifted endpoints.
pub fn stem_derivative_from_slices(
    model: &SliceFunctionModel,
    path: &NPartPath,
    x0: f64,
    z: Complex64,
    order: u32,
) -> Result<StemValue> {
    let extended = path.extend_to(z);
    let j = eta(path.n(), ImaginaryUnit::I);
    let values = j
        .rows()
        .iter()
        .map(|units| {
            let state = model.continue_along(&extended, units, x0, ImaginaryUnit::I)?;
            model.derivative_value(&state, order)
        })
        .collect::<Result<Vec<_>>>()?;
    let inv = slice_matrix(&j)
        .conj_transpose()
        .scale((-(path.n() as f64)).exp2());
    StemValue::new(inv.mul_vec(&values)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesReport {
    /// Largest gap between the stem function and its power series on the probe circle.
    pub stem_series: f64,
    /// The same in the tensor algebra.
    pub tensor_series: f64,
    /// Largest disagreement among the three derivative routes.
    pub derivative_routes: f64,
}

/// Compares the stem function of `model` along `path` on the disk of `radius` with its
/// power series, and three routes to its derivatives up to `max_order`.
pub fn stem_series_check(
    model: &SliceFunctionModel,
    path: &NPartPath,
    x0: f64,
    radius: f64,
    terms: usize,
    max_order: u32,
) -> Result<SeriesReport> {
    let stem = SliceStem::new(model.clone(), path.clone(), x0, radius)?;
    let n = path.n();
    let z0 = path.end();
    let sigma = StemStructureMatrix::new(n);
    let derivatives = (0..terms as u32)
        .map(|k| stem_derivative_from_slices(model, path, x0, z0, k))
        .collect::<Result<Vec<_>>>()?;

    let mut stem_gap: f64 = 0.0;
    let mut tensor_gap: f64 = 0.0;
    for k in 0..8 {
        let offset = Complex64::from_polar(0.5 * radius, std::f64::consts::TAU * k as f64 / 8.0 + 0.3);
        let target = stem.value(z0 + offset)?;

        let mut series = StemValue::zero(n);
        let mut factorial = 1.0;
        for (order, d) in derivatives.iter().enumerate() {
            if order > 0 {
                factorial *= order as f64;
            }
            let mut term = d.clone();
            for _ in 0..order {
                term = term.apply_point(offset, &sigma);
            }
            series = &series + &term.scale(1.0 / factorial);
        }
        stem_gap = stem_gap.max(series.max_distance(&target));

        let step = TensorValue::point(n, offset);
        let mut power = TensorValue::point(n, Complex64::new(1.0, 0.0));
        let mut tensor_sum = TensorValue::new(n, vec![Quaternion::ZERO; 1 << n])?;
        let mut factorial = 1.0;
        for (order, d) in derivatives.iter().enumerate() {
            if order > 0 {
                factorial *= order as f64;
                power = tensor_mul(&power, &step)?;
            }
            tensor_sum = tensor_sum.add(&tensor_mul(&power, &to_tensor(d))?.scale(1.0 / factorial))?;
        }
        let gap = tensor_sum
            .coeffs()
            .iter()
            .zip(to_tensor(&target).coeffs())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        tensor_gap = tensor_gap.max(gap);
    }

    let mut spread: f64 = 0.0;
    let rho = 0.5 * radius;
    for order in 0..=max_order {
        let from_slices = &derivatives.get(order as usize).cloned().map_or_else(
            || stem_derivative_from_slices(model, path, x0, z0, order),
            Ok,
        )?;
        let from_stem = stem_derivative_contour(&stem, z0, order, rho, 64)?;
        let from_tensor = tensor_derivative_contour(&stem, z0, order, rho, 64)?;
        let from_tensor = StemValue::new(from_tensor.coeffs().to_vec())?;
        spread = spread
            .max(from_slices.max_distance(&from_stem))
            .max(from_slices.max_distance(&from_tensor))
            .max(from_stem.max_distance(&from_tensor));
    }

    Ok(SeriesReport {
        stem_series: stem_gap,
        tensor_series: tensor_gap,
        derivative_routes: spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn star_of_linear_factors() {
        // (q + i) * (q + j) = q^2 + q(i + j) + ij
        let a = SliceRegularPoly::new(vec![Quaternion::I, Quaternion::ONE]);
        let b = SliceRegularPoly::new(vec![Quaternion::J, Quaternion::ONE]);
        let c = a.star(&b);
        assert_eq!(c.coeffs, vec![Quaternion::K, Quaternion::I + Quaternion::J, Quaternion::ONE]);
    }

    #[test]
    fn conjugate_routes_agree() {
        let f = SliceRegularPoly::new(vec![q(1.0, 2.0, -1.0, 0.5), q(0.0, 1.0, 0.0, 3.0), q(-2.0, 0.0, 1.0, 1.0)]);
        let direct = f.regular_conjugate();
        let via = f.regular_conjugate_by_components(ImaginaryUnit::I, ImaginaryUnit::J);
        assert!(direct.max_distance(&via) < 1e-14);
    }

    #[test]
    fn reciprocal_detects_sphere_of_zeros() {
        let f = SliceRegularPoly::new(vec![-Quaternion::I, Quaternion::ONE]);
        let ball = SliceDomain::Ball { center: 0.0, radius: 2.0 };
        assert!(matches!(regular_reciprocal(&f, &ball), Err(Error::SymmetrizationZero { .. })));
        let away = SliceDomain::Ball { center: 3.0, radius: 1.0 };
        let r = regular_reciprocal(&f, &away).unwrap();
        let x = Quaternion::real(3.0);
        let prod = star_eval(|p| r.eval(p), |p| Ok(f.eval(p)), x).unwrap();
        assert!(prod.approx_eq(Quaternion::ONE, 1e-12));
    }

    #[test]
    fn derivative_of_cube() {
        let f = SliceRegularPoly::new(vec![Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO, Quaternion::J]);
        assert_eq!(f.derivative(2).coeffs, vec![Quaternion::ZERO, Quaternion::J * 6.0]);
    }

    #[test]
    fn sqrt_taylor_off_slice() {
        let v = taylor_eval(&SliceFunctionModel::Sqrt, Quaternion::real(4.0), q(4.0, 0.0, 1.0, 0.0), 40).unwrap();
        let exact = Complex64::new(4.0, 1.0).sqrt();
        assert!(v.approx_eq(q(exact.re, 0.0, exact.im, 0.0), 1e-12), "{v}");
        assert_eq!(
            taylor_eval(&SliceFunctionModel::Sqrt, Quaternion::real(4.0), Quaternion::real(9.0), 10),
            Err(Error::OutOfBall)
        );
    }
}
