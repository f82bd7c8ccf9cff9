use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{Arc, BoundaryPoint};
use super::moebius::MoebiusMap;
use crate::error::{Error, Result};

/// Minimum separation between endpoints of distinct geodesics (radians).
pub const ENDPOINT_TOL: f64 = 1e-10;

/// Which complementary arc is the positive side, named by its counterclockwise run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositiveSide {
    /// The arc running counterclockwise from `start` to `end`.
    StartToEnd,
    /// The arc running counterclockwise from `end` to `start`.
    EndToStart,
}

impl PositiveSide {
    pub fn flipped(self) -> Self {
        match self {
            PositiveSide::StartToEnd => PositiveSide::EndToStart,
            PositiveSide::EndToStart => PositiveSide::StartToEnd,
        }
    }
}

/// An oriented geodesic from `start` to `end` with a chosen positive side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    start: BoundaryPoint,
    end: BoundaryPoint,
    positive: PositiveSide,
}

impl Geodesic {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint, positive: PositiveSide) -> Result<Self> {
        if start.approx_eq(end, ENDPOINT_TOL) {
            return Err(Error::InvalidArgument(format!(
                "geodesic endpoints closer than {ENDPOINT_TOL:e} rad"
            )));
        }
        Ok(Geodesic { start, end, positive })
    }

    /// Geodesic whose positive side is `arc`, oriented from `arc.start()` to `arc.end()`.
    pub fn bounding(arc: &Arc) -> Result<Self> {
        Geodesic::new(arc.start(), arc.end(), PositiveSide::StartToEnd)
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    pub fn positive(&self) -> PositiveSide {
        self.positive
    }

    pub fn positive_arc(&self) -> Arc {
        match self.positive {
            PositiveSide::StartToEnd => Arc::between(self.start, self.end),
            PositiveSide::EndToStart => Arc::between(self.end, self.start),
        }
    }

    pub fn negative_arc(&self) -> Arc {
        self.positive_arc().complement()
    }

    /// Same geodesic and positive side, opposite orientation.
    pub fn reversed(&self) -> Geodesic {
        Geodesic { start: self.end, end: self.start, positive: self.positive.flipped() }
    }

    /// Moves the endpoints by `f`; the positive side is carried along since `f`
    /// preserves the cyclic order of S¹.
    pub fn transported(&self, f: &MoebiusMap) -> Geodesic {
        Geodesic {
            start: f.apply_boundary(self.start),
            end: f.apply_boundary(self.end),
            positive: self.positive,
        }
    }

    /// Whether an interior point lies on the positive side.
    pub fn on_positive_side(&self, z: Complex64) -> bool {
        let pos = self.positive_arc();
        // The geodesic is the image of a diameter; compare z against the
        // circle through the endpoints orthogonal to S¹.
        let (u, v) = (pos.start().to_complex(), pos.end().to_complex());
        let w = pos.width();
        if (w - std::f64::consts::PI).abs() < 1e-12 {
            // diameter: positive arc lies to the right of u → v
            let cross = (v - u).re * (z - u).im - (v - u).im * (z - u).re;
            return cross < 0.0;
        }
        let mid = pos.midpoint().to_complex();
        let half = 0.5 * w;
        let center = mid / half.cos();
        let radius = half.tan().abs();
        let inside = (z - center).norm() < radius;
        // for arcs shorter than π the positive region is the inside of the circle
        if w < std::f64::consts::PI {
            inside
        } else {
            !inside
        }
    }

    /// Euclidean centre and radius of the supporting orthogonal circle, or `None` for a diameter.
    pub fn circle(&self) -> Option<(Complex64, f64)> {
        let arc = Arc::between(self.start, self.end);
        let arc = if arc.width() <= std::f64::consts::PI { arc } else { arc.complement() };
        let half = 0.5 * arc.width();
        if (half - 0.5 * std::f64::consts::PI).abs() < 1e-12 {
            return None;
        }
        Some((arc.midpoint().to_complex() / half.cos(), half.tan()))
    }
}

/// True iff the endpoints of `g1` separate the endpoints of `g2` on S¹.
pub fn geodesics_cross(g1: &Geodesic, g2: &Geodesic) -> Result<bool> {
    let pts = [g1.start, g1.end, g2.start, g2.end];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].approx_eq(pts[j], ENDPOINT_TOL) {
                return Err(Error::AmbiguousConfiguration(format!(
                    "endpoints {} and {} coincide within {ENDPOINT_TOL:e}",
                    pts[i].angle(),
                    pts[j].angle()
                )));
            }
        }
    }
    let side = Arc::between(g1.start, g1.end);
    Ok(side.contains(g2.start) != side.contains(g2.end))
}

/// Intersection point of two geodesics given by endpoint pairs, using the Klein
/// model where geodesics are chords. `None` when the chords do not meet inside the disc.
pub fn geodesic_intersection(
    (u1, v1): (BoundaryPoint, BoundaryPoint),
    (u2, v2): (BoundaryPoint, BoundaryPoint),
) -> Option<Complex64> {
    let (p, r) = (u1.to_complex(), v1.to_complex() - u1.to_complex());
    let (q, s) = (u2.to_complex(), v2.to_complex() - u2.to_complex());
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let denom = cross(r, s);
    if denom.abs() < 1e-300 {
        return None;
    }
    let t = cross(q - p, s) / denom;
    let u = cross(q - p, r) / denom;
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
        return None;
    }
    let k = p + r * t;
    let k2 = k.norm_sqr();
    if k2 >= 1.0 {
        return None;
    }
    Some(k / (1.0 + (1.0 - k2).sqrt()))
}

/// Angle in `(0, π)` at `z` between the direction toward boundary point `toward`
/// along one geodesic and toward `other_toward` along another, both passing through `z`.
pub fn angle_between_at(z: Complex64, toward: BoundaryPoint, other_toward: BoundaryPoint) -> f64 {
    // move z to the origin, where geodesics through it are diameters
    let t = |w: Complex64| (w - z) / (Complex64::new(1.0, 0.0) - z.conj() * w);
    let d1 = t(toward.to_complex());
    let d2 = t(other_toward.to_complex());
    (d2 / d1).arg().abs()
}
