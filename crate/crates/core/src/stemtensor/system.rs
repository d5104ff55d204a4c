//! Families of stem functions indexed by a truncation-closed set of paths, and the
//! four conditions such a family must satisfy.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sampled::{SampleGrid, SampledStem};
use super::{stem_cr_residual, Combined, ConstantStem, SliceStem, StemRef, StemValue};
use crate::error::{Error, Result};
use crate::monodromy::SliceFunctionModel;
use crate::paths::NPartPath;

/// Where an entry comes from: truncation of base path `base` at `t`, from the left when
/// `closed` is set and `t` is a junction parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryOrigin {
    pub base: usize,
    pub t: f64,
    pub closed: bool,
}

#[derive(Debug, Clone)]
pub struct StemEntry {
    pub path: NPartPath,
    pub origin: EntryOrigin,
    pub function: StemRef,
}

/// Stem functions attached to the truncations of a set of base paths starting at `x0`.
#[derive(Debug, Clone)]
pub struct StemSystem {
    x0: f64,
    entries: Vec<StemEntry>,
}

/// Serialized stem system: one path, radius, origin and sample grid per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StemSystemFile {
    pub x0: f64,
    pub paths: Vec<NPartPath>,
    pub radii: Vec<f64>,
    pub origins: Vec<EntryOrigin>,
    pub samples: Vec<SampleGrid>,
}

fn is_junction(t: f64, n: usize) -> bool {
    let s = t * n as f64;
    (s - s.round()).abs() < 1e-9
}

/// Truncation parameters `k / lattice` together with every junction parameter `m / n`.
fn truncation_parameters(n: usize, lattice: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..=lattice).map(|k| k as f64 / lattice as f64).collect();
    ts.extend((1..n).map(|m| m as f64 / n as f64));
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ts
}

impl StemSystem {
    pub fn new(x0: f64, entries: Vec<StemEntry>) -> Result<Self> {
        for e in &entries {
            if e.function.n() != e.path.n() {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} parts", e.path.n()),
                    found: format!("stem of size N = {}", e.function.n()),
                });
            }
            if (e.function.center() - e.path.end()).norm() > 1e-9 {
                return Err(Error::Invalid("stem disk is not centered at the path end".into()));
            }
            if (e.path.start() - Complex64::new(x0, 0.0)).norm() > 1e-9 {
                return Err(Error::Invalid("path does not start at the base point".into()));
            }
        }
        Ok(Self { x0, entries })
    }

    /// The stem functions of `model` along truncations of each base path. Disks have
    /// radius `max_radius`, shrunk for branched models to half the distance from the
    /// origin.
    pub fn from_model(
        model: &SliceFunctionModel,
        bases: &[NPartPath],
        x0: f64,
        lattice: usize,
        max_radius: f64,
    ) -> Result<Self> {
        let branched = !matches!(model, SliceFunctionModel::Poly { .. });
        let mut entries = Vec::new();
        for (b, base) in bases.iter().enumerate() {
            for t in truncation_parameters(base.n(), lattice.max(1)) {
                let mut variants = vec![false];
                if t > 0.0 && t < 1.0 && is_junction(t, base.n()) {
                    variants.push(true);
                }
                for closed in variants {
                    let path = if closed {
                        base.truncate_closed(t)?
                    } else {
                        base.truncate(t)?
                    };
                    let end = path.end();
                    let radius = if branched {
                        max_radius.min(0.5 * end.norm())
                    } else {
                        max_radius
                    };
                    let f = SliceStem::new(model.clone(), path.clone(), x0, radius)?;
                    entries.push(StemEntry {
                        path,
                        origin: EntryOrigin { base: b, t, closed },
                        function: Arc::new(f),
                    });
                }
            }
        }
        Self::new(x0, entries)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn entries(&self) -> &[StemEntry] {
        &self.entries
    }

    /// Same supports, each function replaced by `f(entry)`.
    pub fn map_functions(&self, f: impl Fn(&StemEntry) -> StemRef) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| StemEntry {
                function: f(e),
                ..e.clone()
            })
            .collect();
        Self::new(self.x0, entries)
    }

    /// Constant `(1, 0, …, 0)` on the same supports.
    pub fn identity_like(&self) -> Result<Self> {
        self.constant_like(StemValue::one)
    }

    pub fn zero_like(&self) -> Result<Self> {
        self.constant_like(StemValue::zero)
    }

    fn constant_like(&self, value: fn(usize) -> StemValue) -> Result<Self> {
        self.map_functions(|e| {
            Arc::new(ConstantStem {
                value: value(e.path.n()),
                center: e.function.center(),
                radius: e.function.radius(),
            })
        })
    }

    /// Entries of both systems; base indices of `other` are shifted past those of `self`.
    pub fn merged(&self, other: &Self) -> Result<Self> {
        if (self.x0 - other.x0).abs() > 1e-12 {
            return Err(Error::IncompatibleSupports);
        }
        let shift = self.entries.iter().map(|e| e.origin.base + 1).max().unwrap_or(0);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|e| StemEntry {
            origin: EntryOrigin {
                base: e.origin.base + shift,
                ..e.origin
            },
            ..e.clone()
        }));
        Self::new(self.x0, entries)
    }

    fn combine(&self, other: &Self, star: bool) -> Result<Self> {
        let same = self.entries.len() == other.entries.len()
            && (self.x0 - other.x0).abs() <= 1e-12
            && self.entries.iter().zip(&other.entries).all(|(a, b)| {
                a.path == b.path && (a.function.radius() - b.function.radius()).abs() <= 1e-12
            });
        if !same {
            return Err(Error::IncompatibleSupports);
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let (fa, fb) = (a.function.clone(), b.function.clone());
                let combined = if star {
                    Combined::Star(fa, fb)
                } else {
                    Combined::Sum(fa, fb)
                };
                StemEntry {
                    function: Arc::new(combined) as StemRef,
                    ..a.clone()
                }
            })
            .collect();
        Self::new(self.x0, entries)
    }

    /// Entrywise sum; both systems must share paths and disks.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    /// Entrywise star product; both systems must share paths and disks.
    pub fn star(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn to_file(&self, radii: usize, angles: usize) -> Result<StemSystemFile> {
        let mut file = StemSystemFile {
            x0: self.x0,
            paths: Vec::new(),
            radii: Vec::new(),
            origins: Vec::new(),
            samples: Vec::new(),
        };
        for e in &self.entries {
            file.paths.push(e.path.clone());
            file.radii.push(e.function.radius());
            file.origins.push(e.origin);
            file.samples.push(SampleGrid::sample(e.function.as_ref(), radii, angles)?);
        }
        Ok(file)
    }

    /// Rebuilds a system from samples; values between samples come from the
    /// reconstruction in [`SampledStem`].
    pub fn from_file(file: &StemSystemFile) -> Result<Self> {
        let len = file.paths.len();
        if file.radii.len() != len || file.origins.len() != len || file.samples.len() != len {
            return Err(Error::ShapeMismatch {
                expected: format!("{len} radii, origins and sample grids"),
                found: format!(
                    "{}, {}, {}",
                    file.radii.len(),
                    file.origins.len(),
                    file.samples.len()
                ),
            });
        }
        let mut entries = Vec::with_capacity(len);
        for k in 0..len {
            let path = file.paths[k].clone();
            let f = SampledStem::new(path.end(), file.radii[k], &file.samples[k])?;
            entries.push(StemEntry {
                path,
                origin: file.origins[k],
                function: Arc::new(f),
            });
        }
        Self::new(file.x0, entries)
    }

    fn base_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.entries.iter().map(|e| e.origin.base).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    fn base_path(&self, base: usize) -> Option<&StemEntry> {
        self.entries
            .iter()
            .find(|e| e.origin.base == base && (e.origin.t - 1.0).abs() < 1e-12)
    }
}

// ── Validation ──

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationSettings {
    /// Finite-difference step.
    pub step: f64,
    /// Bound on the Cauchy–Riemann residual.
    pub holomorphy_tolerance: f64,
    /// Bound on disagreements between entries.
    pub match_tolerance: f64,
    /// Probe rings per disk (inside 3/4 of the radius).
    pub probe_rings: usize,
    pub probe_angles: usize,
    /// Samples used to decide whether two disks cover the path between them.
    pub chain_samples: usize,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self {
            step: 1e-5,
            holomorphy_tolerance: 1e-6,
            match_tolerance: 1e-8,
            probe_rings: 3,
            probe_angles: 8,
            chain_samples: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub passed: bool,
    pub max_deviation: f64,
    pub checks: usize,
    pub failure: Option<String>,
}

impl ConditionReport {
    fn new() -> Self {
        Self {
            passed: true,
            max_deviation: 0.0,
            checks: 0,
            failure: None,
        }
    }

    fn record(&mut self, deviation: f64, tolerance: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if !(deviation <= tolerance) && self.passed {
            self.passed = false;
            self.failure = Some(what());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub local_holomorphy: ConditionReport,
    pub local_compatibility: ConditionReport,
    pub axial_compatibility: ConditionReport,
    pub initial_compatibility: ConditionReport,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failed_conditions().is_empty()
    }

    pub fn conditions(&self) -> [(&'static str, &ConditionReport); 4] {
        [
            ("local_holomorphy", &self.local_holomorphy),
            ("local_compatibility", &self.local_compatibility),
            ("axial_compatibility", &self.axial_compatibility),
            ("initial_compatibility", &self.initial_compatibility),
        ]
    }

    pub fn failed_conditions(&self) -> Vec<&'static str> {
        self.conditions()
            .into_iter()
            .filter(|(_, c)| !c.passed)
            .map(|(name, _)| name)
            .collect()
    }
}

fn effective_radius(f: &StemRef) -> f64 {
    let r = f.radius();
    if r.is_finite() {
        r
    } else {
        1.0
    }
}

fn probe_points(f: &StemRef, settings: &ValidationSettings) -> Vec<Complex64> {
    let c = f.center();
    let r = effective_radius(f);
    let mut points = vec![c];
    for k in 1..=settings.probe_rings {
        let rho = 0.75 * r * k as f64 / settings.probe_rings as f64;
        for j in 0..settings.probe_angles {
            let phi = std::f64::consts::TAU * (j as f64 + 0.5 * (k % 2) as f64)
                / settings.probe_angles as f64;
            points.push(c + Complex64::from_polar(rho, phi));
        }
    }
    points
}

fn real_probes(center: f64, radius: f64) -> Vec<Complex64> {
    [-0.6, -0.3, 0.0, 0.3, 0.6]
        .iter()
        .map(|s| Complex64::new(center + s * radius, 0.0))
        .collect()
}

fn inside(f: &StemRef, z: Complex64, fraction: f64) -> bool {
    (z - f.center()).norm() < fraction * effective_radius(f)
}

/// Checks local holomorphy, local compatibility along each base path, axial
/// compatibility at junctions and a common initial profile.
pub fn validate_stem_system(system: &StemSystem, settings: &ValidationSettings) -> Result<ValidationReport> {
    let mut holo = ConditionReport::new();
    for (k, e) in system.entries.iter().enumerate() {
        for z in probe_points(&e.function, settings) {
            let r = stem_cr_residual(e.function.as_ref(), z, settings.step)?;
            holo.record(r, settings.holomorphy_tolerance, || {
                format!("entry {k} at {z}: residual {r:e}")
            });
        }
        if let Some(c) = e.function.sample_consistency() {
            holo.record(c, settings.holomorphy_tolerance, || {
                format!("entry {k}: samples deviate from reconstruction by {c:e}")
            });
        }
    }

    let mut local = ConditionReport::new();
    let mut axial = ConditionReport::new();
    for base in system.base_ids() {
        let Some(full) = system.base_path(base) else {
            continue;
        };
        let gamma = &full.path;
        let n = gamma.n();
        let chain: Vec<(usize, &StemEntry)> = system
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.origin.base == base)
            .collect();
        for m in 1..=n {
            let lo = (m - 1) as f64 / n as f64;
            let hi = m as f64 / n as f64;
            let left: Vec<_> = chain
                .iter()
                .filter(|(_, e)| !e.origin.closed && e.origin.t >= lo - 1e-12 && e.origin.t < hi - 1e-12)
                .collect();
            let right: Vec<_> = chain
                .iter()
                .filter(|(_, e)| {
                    let t = e.origin.t;
                    if t <= lo + 1e-12 || t > hi + 1e-12 {
                        return false;
                    }
                    if is_junction(t, n) && t < 1.0 - 1e-12 {
                        e.origin.closed
                    } else {
                        !e.origin.closed
                    }
                })
                .collect();
            for (ka, a) in &left {
                for (kb, b) in &right {
                    if a.origin.t >= b.origin.t {
                        continue;
                    }
                    if !covered(gamma, a, b, settings.chain_samples)? {
                        continue;
                    }
                    let mut points = probe_points(&a.function, settings);
                    points.push(0.5 * (a.function.center() + b.function.center()));
                    for z in points {
                        if !inside(&a.function, z, 0.9) || !inside(&b.function, z, 0.9) {
                            continue;
                        }
                        let d = a.function.value(z)?.max_distance(&b.function.value(z)?);
                        local.record(d, settings.match_tolerance, || {
                            format!("entries {ka} and {kb} differ by {d:e} at {z}")
                        });
                    }
                }
            }
        }
        for m in 1..n {
            let t = m as f64 / n as f64;
            let find = |closed: bool| {
                chain
                    .iter()
                    .find(|(_, e)| e.origin.closed == closed && (e.origin.t - t).abs() < 1e-12)
            };
            let (Some((ko, open)), Some((kc, closed))) = (find(false), find(true)) else {
                continue;
            };
            let radius = effective_radius(&open.function).min(effective_radius(&closed.function));
            let center = open.function.center().re;
            for x in real_probes(center, radius) {
                let padded = closed.function.value(x)?.padded(open.path.n())?;
                let d = open.function.value(x)?.max_distance(&padded);
                axial.record(d, settings.match_tolerance, || {
                    format!("entries {ko} and {kc} differ by {d:e} at {}", x.re)
                });
            }
        }
    }

    let mut initial = ConditionReport::new();
    let starts: Vec<(usize, &StemEntry)> = system
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.origin.t == 0.0 && !e.origin.closed)
        .collect();
    if !starts.is_empty() {
        let radius = starts
            .iter()
            .map(|(_, e)| effective_radius(&e.function))
            .fold(f64::INFINITY, f64::min);
        for x in real_probes(system.x0, radius) {
            let mut profile: Option<StemValue> = None;
            for (k, e) in &starts {
                let v = e.function.value(x)?;
                let tail = v.coeffs()[1..].iter().map(|q| q.norm()).fold(0.0, f64::max);
                initial.record(tail, settings.match_tolerance, || {
                    format!("entry {k} has nonzero second component {tail:e} at {}", x.re)
                });
                match &profile {
                    None => profile = Some(v),
                    Some(p) => {
                        let d = (p.coeffs()[0] - v.coeffs()[0]).norm();
                        initial.record(d, settings.match_tolerance, || {
                            format!("entry {k} has a different profile ({d:e}) at {}", x.re)
                        });
                    }
                }
            }
        }
    }

    Ok(ValidationReport {
        local_holomorphy: holo,
        local_compatibility: local,
        axial_compatibility: axial,
        initial_compatibility: initial,
    })
}

/// Whether the base path between the two truncation parameters runs first inside the
/// disk of `a` and then inside the disk of `b`, switching at one parameter.
fn covered(gamma: &NPartPath, a: &StemEntry, b: &StemEntry, samples: usize) -> Result<bool> {
    let (t1, t2) = (a.origin.t, b.origin.t);
    let mut in_a = Vec::with_capacity(samples + 1);
    let mut in_b = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let z = gamma.eval(t1 + (t2 - t1) * k as f64 / samples as f64)?;
        in_a.push(inside(&a.function, z, 1.0));
        in_b.push(inside(&b.function, z, 1.0));
    }
    let prefix = in_a.iter().take_while(|&&x| x).count();
    let suffix_start = in_b.len() - in_b.iter().rev().take_while(|&&x| x).count();
    Ok(prefix > 0 && suffix_start < prefix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_include_junctions() {
        let ts = truncation_parameters(3, 4);
        assert!(ts.iter().any(|t| (t - 1.0 / 3.0).abs() < 1e-12));
        assert_eq!(ts.first(), Some(&0.0));
        assert_eq!(ts.last(), Some(&1.0));
    }

    #[test]
    fn sqrt_system_on_out_and_back_is_valid() {
        let sys = StemSystem::from_model(
            &SliceFunctionModel::Sqrt,
            &[NPartPath::out_and_back()],
            1.0,
            8,
            0.5,
        )
        .unwrap();
        let report = validate_stem_system(&sys, &ValidationSettings::default()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.local_compatibility.checks > 0);
        assert!(report.axial_compatibility.checks > 0);
    }
}
