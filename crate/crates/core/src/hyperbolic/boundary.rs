use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for deciding that two boundary points coincide.
pub const POINT_TOL: f64 = 1e-12;

/// A point of S¹ stored as its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        BoundaryPoint { angle: a }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.im.atan2(z.re))
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// Counterclockwise angular offset from `self` to `other`, in `[0, 2π)`.
    pub fn ccw_offset_to(self, other: BoundaryPoint) -> f64 {
        let d = (other.angle - self.angle).rem_euclid(TAU);
        if d >= TAU {
            0.0
        } else {
            d
        }
    }

    /// Shortest angular distance between the two points.
    pub fn circular_distance(self, other: BoundaryPoint) -> f64 {
        let d = self.ccw_offset_to(other);
        d.min(TAU - d)
    }

    pub fn approx_eq(self, other: BoundaryPoint, tol: f64) -> bool {
        self.circular_distance(other) <= tol
    }

    pub fn antipode(self) -> BoundaryPoint {
        BoundaryPoint::new(self.angle + std::f64::consts::PI)
    }
}

/// Open counterclockwise interval of S¹ from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: BoundaryPoint,
    end: BoundaryPoint,
}

impl Arc {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start.approx_eq(end, POINT_TOL) {
            return Err(Error::InvalidArgument(format!(
                "arc endpoints coincide at angle {}",
                start.angle()
            )));
        }
        Ok(Arc { start, end })
    }

    /// Unchecked constructor for arcs produced by maps of valid arcs.
    pub(crate) fn between(start: BoundaryPoint, end: BoundaryPoint) -> Self {
        Arc { start, end }
    }

    pub fn from_angles(start: f64, end: f64) -> Result<Self> {
        Arc::new(BoundaryPoint::new(start), BoundaryPoint::new(end))
    }

    /// Arc of total width `2 * half_width` centred on `p`.
    pub fn centered(p: BoundaryPoint, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width < std::f64::consts::PI) {
            return Err(Error::InvalidArgument(format!("half width {half_width} outside (0, π)")));
        }
        Arc::from_angles(p.angle() - half_width, p.angle() + half_width)
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    pub fn width(&self) -> f64 {
        self.start.ccw_offset_to(self.end)
    }

    pub fn midpoint(&self) -> BoundaryPoint {
        BoundaryPoint::new(self.start.angle() + 0.5 * self.width())
    }

    /// The other open arc cut out by the same endpoints.
    pub fn complement(&self) -> Arc {
        Arc { start: self.end, end: self.start }
    }

    pub fn contains(&self, p: BoundaryPoint) -> bool {
        self.contains_with_margin(p, 0.0)
    }

    /// Membership with `p` at least `margin` radians away from both endpoints.
    pub fn contains_with_margin(&self, p: BoundaryPoint, margin: f64) -> bool {
        let o = self.start.ccw_offset_to(p);
        o > margin && o < self.width() - margin
    }

    /// Signed distance from `p` to the nearer endpoint: positive inside, negative outside.
    pub fn signed_margin(&self, p: BoundaryPoint) -> f64 {
        let o = self.start.ccw_offset_to(p);
        let w = self.width();
        if o < w {
            o.min(w - o)
        } else {
            -(o - w).min(TAU - o)
        }
    }

    /// Whether `other` lies inside `self` with both endpoints at least `margin` inside.
    pub fn contains_arc(&self, other: &Arc, margin: f64) -> bool {
        let o = self.start.ccw_offset_to(other.start);
        o >= margin && o + other.width() <= self.width() - margin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_angle_range() {
        assert_eq!(BoundaryPoint::new(TAU).angle(), 0.0);
        assert!((BoundaryPoint::new(-PI / 2.0).angle() - 1.5 * PI).abs() < 1e-15);
        assert!(BoundaryPoint::new(-1e-18).angle() < TAU);
    }

    #[test]
    fn arc_membership_wraps_through_zero() {
        let arc = Arc::from_angles(-0.5, 0.5).unwrap();
        assert!(arc.contains(BoundaryPoint::new(0.0)));
        assert!(arc.contains(BoundaryPoint::new(6.1)));
        assert!(!arc.contains(BoundaryPoint::new(PI)));
        assert!(arc.complement().contains(BoundaryPoint::new(PI)));
        assert!((arc.width() - 1.0).abs() < 1e-15);
        assert!(arc.midpoint().approx_eq(BoundaryPoint::new(0.0), 1e-15));
    }

    #[test]
    fn degenerate_arc_rejected() {
        assert!(Arc::from_angles(1.0, 1.0 + TAU).is_err());
    }

    #[test]
    fn nested_arcs() {
        let big = Arc::from_angles(-0.5, 0.5).unwrap();
        let small = Arc::from_angles(-0.1, 0.2).unwrap();
        assert!(big.contains_arc(&small, 1e-10));
        assert!(!small.contains_arc(&big, 1e-10));
        // sharing an endpoint fails the strict margin
        let touching = Arc::from_angles(-0.5, 0.2).unwrap();
        assert!(!big.contains_arc(&touching, 1e-10));
    }

    #[test]
    fn signed_margin_sign() {
        let arc = Arc::from_angles(0.0, 1.0).unwrap();
        assert!((arc.signed_margin(BoundaryPoint::new(0.25)) - 0.25).abs() < 1e-15);
        assert!((arc.signed_margin(BoundaryPoint::new(1.5)) + 0.5).abs() < 1e-15);
        assert!((arc.signed_margin(BoundaryPoint::new(-0.25)) + 0.25).abs() < 1e-15);
    }
}
