use num_complex::Complex64;

use super::boundary::Arc;
use super::geodesic::Geodesic;
use crate::error::{Error, Result};

fn check_inside(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("point {z} is not inside the open unit disc")))
    }
}

/// Poincaré distance (curvature −1).
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> Result<f64> {
    check_inside(z)?;
    check_inside(w)?;
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    Ok(2.0 * (num / den).min(1.0).atanh())
}

/// Distance from an interior point to the full geodesic.
pub fn distance_point_to_geodesic(z: Complex64, g: &Geodesic) -> Result<f64> {
    check_inside(z)?;
    let arc = Arc::between(g.start(), g.end());
    let half = 0.5 * arc.width();
    // rotate the arc midpoint onto the positive real axis
    let rot = Complex64::from_polar(1.0, -arc.midpoint().angle());
    let zr = z * rot;
    // the geodesic now crosses the real axis orthogonally at x0
    let x0 = half.cos() / (1.0 + half.sin());
    let u = (zr - x0) / (Complex64::new(1.0, 0.0) - zr * x0);
    let s = 2.0 * u.re.abs() / (1.0 - u.norm_sqr());
    Ok(s.asinh())
}
