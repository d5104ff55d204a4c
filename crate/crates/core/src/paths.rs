//! Piecewise paths in the complex plane whose parts meet on the real axis, their
//! truncations, extensions and lifts to quaternionic slices.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{embed_slice, ImaginaryUnit, Quaternion};

/// Paths closer than this to the origin count as crossing the branch point.
pub const BRANCH_CLEARANCE: f64 = 1e-9;
/// Tolerance for junction points being real and for consecutive parts meeting.
pub const JUNCTION_TOLERANCE: f64 = 1e-9;

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// A primitive piece: an arc `center + radius e^{iθ}` with `θ` running from `theta0`
/// to `theta1` (either direction, any number of turns) or a straight line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathSegment {
    Arc {
        #[serde(with = "complex_pair")]
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Line {
        #[serde(with = "complex_pair")]
        from: Complex64,
        #[serde(with = "complex_pair")]
        to: Complex64,
    },
}

impl PathSegment {
    /// Arc on the unit circle around the origin.
    pub fn unit_arc(theta0: f64, theta1: f64) -> Self {
        Self::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            theta0,
            theta1,
        }
    }

    /// Unit-circle arc from `1` through `mπ` radians counterclockwise.
    pub fn half_turns(m: f64) -> Self {
        Self::unit_arc(0.0, m * PI)
    }

    pub fn line(from: Complex64, to: Complex64) -> Self {
        Self::Line { from, to }
    }

    pub fn constant(at: Complex64) -> Self {
        Self::Line { from: at, to: at }
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        match *self {
            Self::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => center + Complex64::from_polar(radius, theta0 + s * (theta1 - theta0)),
            Self::Line { from, to } => from + (to - from) * s,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.eval(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.eval(1.0)
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Self::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => Self::Arc {
                center,
                radius,
                theta0: theta1,
                theta1: theta0,
            },
            Self::Line { from, to } => Self::Line { from: to, to: from },
        }
    }

    /// The portion traversed for parameters in `[0, u]`, reparametrized over `[0, 1]`.
    pub fn restricted(&self, u: f64) -> Self {
        match *self {
            Self::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => Self::Arc {
                center,
                radius,
                theta0,
                theta1: theta0 + u * (theta1 - theta0),
            },
            Self::Line { from, to } => Self::Line {
                from,
                to: from + (to - from) * u,
            },
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Self::Arc {
                radius,
                theta0,
                theta1,
                ..
            } => radius.abs() * (theta1 - theta0).abs(),
            Self::Line { from, to } => (to - from).norm(),
        }
    }

    /// Smallest distance from the origin to any point of the piece.
    pub fn distance_to_origin(&self) -> f64 {
        match *self {
            Self::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let endpoints = self.start().norm().min(self.end().norm());
                if center.norm() == 0.0 {
                    return radius.abs();
                }
                let (lo, hi) = (theta0.min(theta1), theta0.max(theta1));
                let closest = (-center).arg();
                let k = ((lo - closest) / TAU).ceil();
                if hi - lo >= TAU || closest + k * TAU <= hi {
                    (center.norm() - radius.abs()).abs()
                } else {
                    endpoints
                }
            }
            Self::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return from.norm();
                }
                let s = (-(from.conj() * d).re / len2).clamp(0.0, 1.0);
                (from + d * s).norm()
            }
        }
    }

    /// Continuous change of the argument along the piece.
    pub fn arg_change(&self) -> Result<f64> {
        let distance = self.distance_to_origin();
        if distance <= BRANCH_CLEARANCE {
            return Err(Error::BranchPointCrossing { distance });
        }
        match *self {
            Self::Arc {
                center,
                theta0,
                theta1,
                ..
            } if center.norm() == 0.0 => Ok(theta1 - theta0),
            Self::Arc { .. } => {
                let steps = (4.0 * self.length() / distance).ceil().clamp(16.0, 4.0e6) as usize;
                let mut total = 0.0;
                let mut prev = self.start();
                for k in 1..=steps {
                    let next = self.eval(k as f64 / steps as f64);
                    total += (next / prev).arg();
                    prev = next;
                }
                Ok(total)
            }
            Self::Line { from, to } => Ok((to / from).arg()),
        }
    }
}

/// One part of an N-part path: a chain of pieces, piece `k` covering parameters
/// `(ends[k-1], ends[k]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PartRepr", into = "PartRepr")]
pub struct Part {
    pieces: Vec<PathSegment>,
    ends: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PartRepr {
    Single(PathSegment),
    Chain {
        kind: ChainTag,
        pieces: Vec<PathSegment>,
        ends: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ChainTag {
    Chain,
}

impl TryFrom<PartRepr> for Part {
    type Error = Error;
    fn try_from(r: PartRepr) -> Result<Self> {
        match r {
            PartRepr::Single(seg) => Ok(Part::from(seg)),
            PartRepr::Chain { pieces, ends, .. } => Part::chain(pieces, ends),
        }
    }
}

impl From<Part> for PartRepr {
    fn from(p: Part) -> Self {
        if p.pieces.len() == 1 {
            PartRepr::Single(p.pieces[0])
        } else {
            PartRepr::Chain {
                kind: ChainTag::Chain,
                pieces: p.pieces,
                ends: p.ends,
            }
        }
    }
}

impl From<PathSegment> for Part {
    fn from(seg: PathSegment) -> Self {
        Self {
            pieces: vec![seg],
            ends: vec![1.0],
        }
    }
}

impl Part {
    pub fn chain(pieces: Vec<PathSegment>, ends: Vec<f64>) -> Result<Self> {
        if pieces.is_empty() || pieces.len() != ends.len() {
            return Err(Error::Invalid("chain needs one end per piece".into()));
        }
        let increasing = ends.windows(2).all(|w| w[0] < w[1]);
        if !increasing || ends[0] <= 0.0 || ends[ends.len() - 1] != 1.0 {
            return Err(Error::Invalid("chain ends must increase to 1".into()));
        }
        for (k, w) in pieces.windows(2).enumerate() {
            if (w[0].end() - w[1].start()).norm() > JUNCTION_TOLERANCE {
                return Err(Error::DisconnectedSegments { index: k + 2 });
            }
        }
        Ok(Self { pieces, ends })
    }

    pub fn pieces(&self) -> &[PathSegment] {
        &self.pieces
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces[self.pieces.len() - 1].end()
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        let k = self.ends.iter().position(|&e| s <= e).unwrap_or(self.ends.len() - 1);
        let lo = if k == 0 { 0.0 } else { self.ends[k - 1] };
        self.pieces[k].eval((s - lo) / (self.ends[k] - lo))
    }

    /// The portion for parameters in `[0, u]`, `0 < u <= 1`, reparametrized over `[0, 1]`.
    pub fn restricted(&self, u: f64) -> Self {
        let k = self.ends.iter().position(|&e| u <= e).unwrap_or(self.ends.len() - 1);
        let lo = if k == 0 { 0.0 } else { self.ends[k - 1] };
        let mut pieces = self.pieces[..k].to_vec();
        pieces.push(self.pieces[k].restricted((u - lo) / (self.ends[k] - lo)));
        let mut ends: Vec<f64> = self.ends[..k].iter().map(|e| e / u).collect();
        ends.push(1.0);
        Self { pieces, ends }
    }

    /// This part followed by `next`, each taking half of the parameter interval.
    pub fn then(&self, next: PathSegment) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.push(next);
        let mut ends: Vec<f64> = self.ends.iter().map(|e| e / 2.0).collect();
        ends.push(1.0);
        Self { pieces, ends }
    }

    pub fn reversed(&self) -> Self {
        let pieces = self.pieces.iter().rev().map(PathSegment::reversed).collect();
        let mut ends: Vec<f64> = self.ends.iter().rev().skip(1).map(|e| 1.0 - e).collect();
        ends.push(1.0);
        Self { pieces, ends }
    }
}

/// A path made of `N` parts whose junction points are real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct NPartPath {
    parts: Vec<Part>,
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    segments: Vec<Part>,
}

impl TryFrom<PathRepr> for NPartPath {
    type Error = Error;
    fn try_from(r: PathRepr) -> Result<Self> {
        Self::new(r.segments)
    }
}

impl From<NPartPath> for PathRepr {
    fn from(p: NPartPath) -> Self {
        Self { segments: p.parts }
    }
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= JUNCTION_TOLERANCE
}

impl NPartPath {
    pub fn new(parts: Vec<Part>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyPath);
        }
        for (k, w) in parts.windows(2).enumerate() {
            let end = w[0].end();
            if !is_real(end) {
                return Err(Error::NonRealJunction {
                    index: k + 1,
                    re: end.re,
                    im: end.im,
                });
            }
            if (end - w[1].start()).norm() > JUNCTION_TOLERANCE {
                return Err(Error::DisconnectedSegments { index: k + 2 });
            }
        }
        Ok(Self { parts })
    }

    pub fn from_segments(segments: Vec<PathSegment>) -> Result<Self> {
        Self::new(segments.into_iter().map(Part::from).collect())
    }

    /// One-part constant path.
    pub fn constant(at: f64) -> Self {
        Self {
            parts: vec![Part::from(PathSegment::constant(Complex64::new(at, 0.0)))],
        }
    }

    /// Upper unit half circle from 1 to -1 followed by the same arc traversed back.
    pub fn out_and_back() -> Self {
        Self::from_segments(vec![PathSegment::unit_arc(0.0, PI), PathSegment::unit_arc(PI, 0.0)])
            .expect("arcs meet at -1")
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn start(&self) -> Complex64 {
        self.parts[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.parts[self.parts.len() - 1].end()
    }

    /// The point reached at parameter `t`: part `⌊tN⌋ + 1` at local time `{tN}`.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        check_parameter(t)?;
        if t == 1.0 {
            return Ok(self.end());
        }
        let (idx, frac) = self.locate(t);
        Ok(self.parts[idx].eval(frac))
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let scaled = t * self.n() as f64;
        let rounded = scaled.round();
        if (scaled - rounded).abs() < 1e-12 {
            return (rounded as usize, 0.0);
        }
        let idx = scaled.floor() as usize;
        (idx, scaled - idx as f64)
    }

    /// Truncation at `t`: the first `⌊tN⌋` parts followed by the partial part traversed
    /// up to `t` (a constant part when `tN` is an integer). `t = 1` gives the path itself.
    pub fn truncate(&self, t: f64) -> Result<Self> {
        check_parameter(t)?;
        if t == 1.0 {
            return Ok(self.clone());
        }
        let (idx, frac) = self.locate(t);
        let mut parts = self.parts[..idx].to_vec();
        if frac == 0.0 {
            let at = if idx == 0 { self.start() } else { self.parts[idx - 1].end() };
            parts.push(Part::from(PathSegment::constant(at)));
        } else {
            parts.push(self.parts[idx].restricted(frac));
        }
        Ok(Self { parts })
    }

    /// Truncation from the left: at `t = m/N`, `m >= 1`, the first `m` parts; otherwise
    /// the same as [`NPartPath::truncate`].
    pub fn truncate_closed(&self, t: f64) -> Result<Self> {
        check_parameter(t)?;
        let (idx, frac) = self.locate(t);
        if frac == 0.0 && idx >= 1 {
            return Ok(Self {
                parts: self.parts[..idx].to_vec(),
            });
        }
        self.truncate(t)
    }

    /// Same number of parts; the last part continues along a straight line to `z`.
    pub fn extend_to(&self, z: Complex64) -> Self {
        let mut parts = self.parts.clone();
        let last = parts.pop().expect("nonempty");
        parts.push(last.then(PathSegment::line(last.end(), z)));
        Self { parts }
    }

    /// Parts traversed in reverse order, each reversed.
    pub fn reversed(&self) -> Self {
        Self {
            parts: self.parts.iter().rev().map(Part::reversed).collect(),
        }
    }

    /// Smallest distance from the origin along the whole path.
    pub fn distance_to_origin(&self) -> f64 {
        self.parts
            .iter()
            .flat_map(|p| p.pieces.iter())
            .map(PathSegment::distance_to_origin)
            .fold(f64::INFINITY, f64::min)
    }

    /// The path with every point replaced by its complex conjugate.
    pub fn conjugated(&self) -> Self {
        let flip = |s: &PathSegment| match *s {
            PathSegment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => PathSegment::Arc {
                center: center.conj(),
                radius,
                theta0: -theta0,
                theta1: -theta1,
            },
            PathSegment::Line { from, to } => PathSegment::Line {
                from: from.conj(),
                to: to.conj(),
            },
        };
        Self {
            parts: self
                .parts
                .iter()
                .map(|p| Part {
                    pieces: p.pieces.iter().map(flip).collect(),
                    ends: p.ends.clone(),
                })
                .collect(),
        }
    }
}

fn check_parameter(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { value: t });
    }
    Ok(())
}

/// An N-part path together with one imaginary unit per part.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPath {
    path: NPartPath,
    units: Vec<ImaginaryUnit>,
}

impl LiftedPath {
    pub fn path(&self) -> &NPartPath {
        &self.path
    }

    pub fn units(&self) -> &[ImaginaryUnit] {
        &self.units
    }

    /// Point at parameter `t`, placed on the slice of the unit of its part.
    pub fn eval(&self, t: f64) -> Result<Quaternion> {
        let z = self.path.eval(t)?;
        let idx = if t == 1.0 {
            self.path.n() - 1
        } else {
            self.path.locate(t).0
        };
        Ok(embed_slice(z, self.units[idx]))
    }
}

/// Places part `k` of `path` on the slice of `units[k]`.
pub fn lift(path: &NPartPath, units: &[ImaginaryUnit]) -> Result<LiftedPath> {
    if units.len() != path.n() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} units", path.n()),
            found: format!("{}", units.len()),
        });
    }
    Ok(LiftedPath {
        path: path.clone(),
        units: units.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn out_and_back_points() {
        let b = NPartPath::out_and_back();
        assert!((b.eval(0.25).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((b.eval(0.5).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((b.eval(1.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn junction_validation() {
        let bad = NPartPath::from_segments(vec![
            PathSegment::line(c(1.0, 0.0), c(0.0, 1.0)),
            PathSegment::line(c(0.0, 1.0), c(-1.0, 0.0)),
        ]);
        assert!(matches!(bad, Err(Error::NonRealJunction { index: 1, .. })));
        let gap = NPartPath::from_segments(vec![
            PathSegment::line(c(1.0, 0.0), c(2.0, 0.0)),
            PathSegment::line(c(3.0, 0.0), c(4.0, 0.0)),
        ]);
        assert!(matches!(gap, Err(Error::DisconnectedSegments { index: 2 })));
    }

    #[test]
    fn truncation_part_counts() {
        let b = NPartPath::out_and_back();
        assert_eq!(b.truncate(0.5).unwrap().n(), 2);
        assert_eq!(b.truncate_closed(0.5).unwrap().n(), 1);
        assert_eq!(b.truncate(0.0).unwrap(), NPartPath::constant(1.0));
        assert_eq!(b.truncate(1.0).unwrap(), b);
        assert!(b.truncate(1.5).is_err());
        let t = b.truncate(0.75).unwrap();
        assert!((t.end() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn extension_keeps_part_count() {
        let b = NPartPath::out_and_back();
        let e = b.extend_to(c(1.2, 0.3));
        assert_eq!(e.n(), 2);
        assert!((e.end() - c(1.2, 0.3)).norm() < 1e-15);
        assert!((e.eval(0.75).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert!((e.eval(0.5).unwrap() - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn arg_change_of_off_center_arc() {
        let around = PathSegment::Arc {
            center: c(0.5, 0.0),
            radius: 1.0,
            theta0: 0.0,
            theta1: TAU,
        };
        assert!((around.arg_change().unwrap() - TAU).abs() < 1e-12);
        let beside = PathSegment::Arc {
            center: c(3.0, 0.0),
            radius: 1.0,
            theta0: 0.0,
            theta1: TAU,
        };
        assert!(beside.arg_change().unwrap().abs() < 1e-12);
        let through = PathSegment::line(c(-1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(through.arg_change(), Err(Error::BranchPointCrossing { .. })));
    }

    #[test]
    fn json_round_trip() {
        let b = NPartPath::out_and_back().extend_to(c(1.0, 0.2));
        let text = serde_json::to_string(&b).unwrap();
        let back: NPartPath = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
        let plain: NPartPath = serde_json::from_str(
            r#"{"segments":[{"kind":"line","from":[1,0],"to":[2,0]}]}"#,
        )
        .unwrap();
        assert_eq!(plain.n(), 1);
    }
}
