use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{Arc, BoundaryPoint};
use super::circle::GeneratorCircle;
use crate::error::{Error, Result};

/// A fractional linear map `z ↦ (m11 z + m12) / (m21 z + m22)`, stored with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl MoebiusMap {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MoebiusMap { m11: one, m12: zero, m21: zero, m22: one }
    }

    /// Builds the map and scales it to determinant 1.
    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Result<Self> {
        let det = m11 * m22 - m12 * m21;
        if !(det.norm() > 1e-300) || !det.is_finite() {
            return Err(Error::InvalidArgument(format!("singular matrix (det = {det})")));
        }
        Ok(MoebiusMap { m11, m12, m21, m22 }.scaled(det.sqrt().inv()))
    }

    fn scaled(self, s: Complex64) -> Self {
        MoebiusMap { m11: self.m11 * s, m12: self.m12 * s, m21: self.m21 * s, m22: self.m22 * s }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    fn normalized(self) -> Self {
        let det = self.determinant();
        self.scaled(det.sqrt().inv())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
        .normalized()
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { m11: self.m22, m12: -self.m12, m21: -self.m21, m22: self.m11 }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.m11 * z + self.m12) / (self.m21 * z + self.m22)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.apply(p.to_complex()))
    }

    /// Image of a counterclockwise arc. Disc automorphisms preserve the cyclic
    /// order of S¹, so the image is the counterclockwise arc between the image endpoints.
    pub fn apply_arc(&self, arc: &Arc) -> Arc {
        Arc::between(self.apply_boundary(arc.start()), self.apply_boundary(arc.end()))
    }

    /// Modulus of the derivative at `z`.
    pub fn derivative_norm(&self, z: Complex64) -> f64 {
        1.0 / (self.m21 * z + self.m22).norm_sqr()
    }

    /// Image of a circle, via the reflection of the pole in the circle (which
    /// maps to the image centre).
    pub fn apply_circle(&self, c: &GeneratorCircle) -> Result<GeneratorCircle> {
        if !(c.radius > 0.0) {
            return Err(Error::InvalidArgument(format!("circle radius {} is not positive", c.radius)));
        }
        let rim = c.center + Complex64::new(c.radius, 0.0);
        if self.m21.norm() < 1e-300 {
            let center = self.apply(c.center);
            let radius = (self.apply(rim) - center).norm();
            return Ok(GeneratorCircle::from_parts(center, radius));
        }
        let pole = -self.m22 / self.m21;
        let offset = pole - c.center;
        if (offset.norm() - c.radius).abs() <= 1e-12 * c.radius.max(1.0) {
            return Err(Error::InvalidArgument("circle passes through the pole; image is a line".into()));
        }
        // f(z0 + R²/q̄) written without dividing by q̄, so a pole at the centre
        // (reflection at infinity) is handled too
        let q = offset.conj();
        let top = c.center * q + c.radius * c.radius;
        let center = (self.m11 * top + self.m12 * q) / (self.m21 * top + self.m22 * q);
        let radius = (self.apply(rim) - center).norm();
        Ok(GeneratorCircle::from_parts(center, radius))
    }

    /// True when the matrix has the disc-automorphism shape `[α β; β̄ ᾱ]` up to sign.
    pub fn is_disc_preserving(&self, tol: f64) -> bool {
        (self.m22 - self.m11.conj()).norm() <= tol && (self.m21 - self.m12.conj()).norm() <= tol
            || (self.m22 + self.m11.conj()).norm() <= tol && (self.m21 + self.m12.conj()).norm() <= tol
    }

    /// Largest deviation between two maps acting on a fixed set of probe points.
    pub fn max_deviation(&self, other: &MoebiusMap) -> f64 {
        PROBES
            .iter()
            .map(|&(re, im)| {
                let z = Complex64::new(re, im);
                (self.apply(z) - other.apply(z)).norm()
            })
            .fold(0.0, f64::max)
    }
}

const PROBES: [(f64, f64); 5] = [(0.0, 0.0), (0.3, 0.1), (-0.2, 0.5), (0.1, -0.6), (-0.45, -0.3)];
