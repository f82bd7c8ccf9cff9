//! Möbius maps of the Poincaré disc, boundary points and arcs, geodesics, and the metric.
//!
//! Boundary points are kept as angles so arc membership and separation tests
//! never need to reason about 2π wraparound on complex numbers.

mod boundary;
mod circle;
mod geodesic;
mod metric;
mod moebius;

pub use boundary::{Arc, BoundaryPoint, POINT_TOL};
pub use circle::GeneratorCircle;
pub use geodesic::{angle_between_at, geodesic_intersection, geodesics_cross, Geodesic, PositiveSide, ENDPOINT_TOL};
pub use metric::{distance_point_to_geodesic, hyperbolic_distance};
pub use moebius::MoebiusMap;

/// Comparison tolerance for pointwise map checks.
pub const COMPARE_TOL: f64 = 1e-10;

pub fn compose(f: &MoebiusMap, g: &MoebiusMap) -> MoebiusMap {
    f.compose(g)
}

pub fn apply_boundary(f: &MoebiusMap, p: BoundaryPoint) -> BoundaryPoint {
    f.apply_boundary(p)
}

pub fn apply_circle(f: &MoebiusMap, c: &GeneratorCircle) -> crate::Result<GeneratorCircle> {
    f.apply_circle(c)
}
