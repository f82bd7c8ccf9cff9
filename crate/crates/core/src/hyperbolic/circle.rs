use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{Arc, BoundaryPoint};
use crate::error::{Error, Result};

/// Euclidean circle, normally orthogonal to S¹ (so its trace in the disc is a geodesic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCircle {
    pub center: Complex64,
    pub radius: f64,
}

impl GeneratorCircle {
    /// Checked constructor: positive radius, orthogonal to the unit circle.
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("circle radius {radius} is not positive")));
        }
        let c = GeneratorCircle { center, radius };
        let defect = c.orthogonality_defect();
        if defect > 1e-12 * center.norm_sqr().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "circle is not orthogonal to S¹: |center|² − 1 − r² = {defect:e}"
            )));
        }
        Ok(c)
    }

    pub(crate) fn from_parts(center: Complex64, radius: f64) -> Self {
        GeneratorCircle { center, radius }
    }

    /// The orthogonal circle whose disc meets S¹ in `arc` (requires width < π).
    pub fn from_arc(arc: &Arc) -> Result<Self> {
        let half = 0.5 * arc.width();
        if !(half < 0.5 * std::f64::consts::PI - 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "arc of width {} has no bounding circle (diameter or larger)",
                arc.width()
            )));
        }
        let dir = arc.midpoint().to_complex();
        Ok(GeneratorCircle { center: dir / half.cos(), radius: half.tan() })
    }

    /// `| |center|² − 1 − r² |`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.center.norm_sqr() - 1.0 - self.radius * self.radius).abs()
    }

    /// The arc of S¹ inside this circle (for an orthogonal circle not containing 0).
    pub fn arc(&self) -> Arc {
        let dir = self.center.im.atan2(self.center.re);
        let half = (1.0 / self.center.norm()).clamp(-1.0, 1.0).acos();
        Arc::between(BoundaryPoint::new(dir - half), BoundaryPoint::new(dir + half))
    }

    pub fn contains_point(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, t)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}
