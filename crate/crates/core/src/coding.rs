//! The two directions of the symbolic coding.
//!
//! A reduced sequence `x₁x₂⋯` names the limit point cut out by the nested
//! cylinder circles `C_n = (g_{x₁}∘⋯∘g_{x_n})(circle of x_{n+1})`; conversely a
//! boundary point is coded by repeatedly asking which generator arc holds it
//! and pulling it back by the inverse generator. The crossing walk follows the
//! geodesic ray from 0 tile by tile and reads the same symbols off the
//! positive sides of the translates it crosses.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::SchottkyGroup;
use crate::hyperbolic::{
    angle_between_at, geodesic_intersection, geodesics_cross, hyperbolic_distance, Arc, BoundaryPoint, Geodesic,
    MoebiusMap, PositiveSide,
};
use crate::sequence::SymbolicSequence;
use crate::symbol::Symbol;

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_LEN: usize = 200;

/// Accuracy used for the forward endpoint when a ray is driven by its sequence.
const ANCHOR_EPSILON: f64 = 1e-12;

/// Rounding error charged for every boundary evaluation (radians).
const STEP_ERROR: f64 = 8.0 * f64::EPSILON;

/// Crossings closer to tangency than this are refused.
const MIN_CROSSING_ANGLE: f64 = 1e-9;

fn diameter_of(arc: &Arc) -> f64 {
    2.0 * (0.5 * arc.width()).tan()
}

/// Result of decoding a sequence to its limit point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decoded {
    pub point: BoundaryPoint,
    /// Number of symbols consumed.
    pub depth: usize,
    /// Euclidean diameter of the last cylinder circle.
    pub diameter: f64,
    /// Boundary arc of the last cylinder circle.
    pub arc: Arc,
}

/// Iterator over the cylinder arcs `C_0, C_1, …` of a sequence (`C_{n-1}` is the
/// neighbourhood `U_n` bounded by the n-th crossed translate).
pub struct CylinderArcs<'a> {
    group: &'a SchottkyGroup,
    seq: &'a SymbolicSequence,
    map: MoebiusMap,
    n: usize,
    prev: Option<Symbol>,
}

impl<'a> CylinderArcs<'a> {
    pub fn new(group: &'a SchottkyGroup, seq: &'a SymbolicSequence) -> Self {
        CylinderArcs { group, seq, map: MoebiusMap::identity(), n: 0, prev: None }
    }
}

impl Iterator for CylinderArcs<'_> {
    type Item = Result<Arc>;

    fn next(&mut self) -> Option<Result<Arc>> {
        let x = self.seq.get(self.n)?;
        if let Some(p) = self.prev {
            if !p.may_precede(x) {
                return Some(Err(Error::NonReduced { index: self.n }));
            }
        }
        let arc = self.map.apply_arc(&self.group.circle(x).arc());
        self.map = self.map.compose(self.group.generator(x));
        self.prev = Some(x);
        self.n += 1;
        Some(Ok(arc))
    }
}

/// The first `count` cylinder arcs `U_1, …, U_count`.
pub fn cylinder_arcs(group: &SchottkyGroup, s: &SymbolicSequence, count: usize) -> Result<Vec<Arc>> {
    let arcs: Vec<Arc> = CylinderArcs::new(group, s).take(count).collect::<Result<_>>()?;
    if arcs.len() < count {
        return Err(Error::NeedsMorePrefix { depth: arcs.len(), diameter: arcs.last().map_or(f64::INFINITY, diameter_of) });
    }
    Ok(arcs)
}

/// Sequence → limit point: the arc midpoint of the first cylinder circle whose
/// Euclidean diameter drops below `epsilon`.
pub fn decode(group: &SchottkyGroup, s: &SymbolicSequence, epsilon: f64) -> Result<Decoded> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut last = f64::INFINITY;
    for (n, arc) in CylinderArcs::new(group, s).enumerate() {
        let arc = arc?;
        let diameter = diameter_of(&arc);
        if diameter < epsilon {
            return Ok(Decoded { point: arc.midpoint(), depth: n + 1, diameter, arc });
        }
        last = diameter;
    }
    Err(Error::NeedsMorePrefix { depth: s.len().unwrap_or(0), diameter: last })
}

/// `σ`, re-exported here next to the coding maps it intertwines with.
pub fn shift(s: &SymbolicSequence) -> Result<SymbolicSequence> {
    s.shift()
}

/// Picks the generator arc holding `q`, given an absolute uncertainty on `q`.
fn classify_point(group: &SchottkyGroup, q: BoundaryPoint, uncertainty: f64, depth: usize) -> Result<Symbol> {
    let (best, margin) = Symbol::ALL
        .into_iter()
        .map(|s| (s, group.circle(s).arc().signed_margin(q)))
        .fold((Symbol::A, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if margin > uncertainty {
        Ok(best)
    } else if margin < -uncertainty {
        Err(Error::NotALimitPoint { depth })
    } else {
        Err(Error::Ambiguous { depth, margin, bound: uncertainty })
    }
}

/// Boundary point → first `max_len` symbols of its coding.
///
/// Each pull-back expands errors by the local derivative; the accumulated
/// bound is tracked, and a point closer to an arc endpoint than that bound is
/// reported as ambiguous rather than coded with a guessed symbol.
pub fn encode(group: &SchottkyGroup, p: BoundaryPoint, max_len: usize) -> Result<Vec<Symbol>> {
    let mut q = p;
    let mut err = STEP_ERROR;
    let mut out = Vec::with_capacity(max_len);
    for depth in 0..max_len {
        let s = classify_point(group, q, err, depth)?;
        out.push(s);
        let back = group.generator(s.inverse());
        err = err * back.derivative_norm(q.to_complex()) + STEP_ERROR;
        q = back.apply_boundary(q);
    }
    Ok(out)
}

/// One signed crossing of the ray from 0 with a labelled translate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub symbol: Symbol,
    /// Crossing point in the disc (saturates onto S¹ once the translates get tiny).
    pub point: Complex64,
    /// Angle in `(0, π)` between the ray and the translate oriented start → end.
    pub angle: f64,
    /// Hyperbolic distance from 0 to the crossing, measured along the ray.
    pub distance: f64,
}

/// State of the ray after `step` crossings, seen from the tile it is in
/// (i.e. pulled back by the word of the crossings so far).
#[derive(Debug, Clone, Copy)]
pub struct RayFrame {
    pub step: usize,
    /// Image of the ray's backward endpoint.
    pub back: BoundaryPoint,
    /// Image of the ray's forward endpoint.
    pub forward: BoundaryPoint,
    /// Image of 0, which is 0 in the frame where the orbit point `w_step` sits at 0.
    pub entry: Complex64,
}

fn family_symbol(crossed: Symbol, positive: bool) -> Symbol {
    match (crossed, positive) {
        (Symbol::A | Symbol::AInv, true) => Symbol::A,
        (Symbol::A | Symbol::AInv, false) => Symbol::AInv,
        (Symbol::B | Symbol::BInv, true) => Symbol::B,
        (Symbol::B | Symbol::BInv, false) => Symbol::BInv,
    }
}

/// Walks the geodesic ray from 0 through the tiling, one translate at a time.
///
/// `next_forward(step, pulled_back, crossed)` supplies the forward endpoint for
/// the next frame together with its uncertainty.
struct RayWalker<'a, F> {
    group: &'a SchottkyGroup,
    frame: RayFrame,
    uncertainty: f64,
    entry_side: Option<Symbol>,
    map: MoebiusMap,
    distance: f64,
    next_forward: F,
}

impl<'a, F> RayWalker<'a, F>
where
    F: FnMut(usize, BoundaryPoint, Symbol, f64) -> Result<(BoundaryPoint, f64)>,
{
    fn new(group: &'a SchottkyGroup, p: BoundaryPoint, uncertainty: f64, next_forward: F) -> Self {
        RayWalker {
            group,
            frame: RayFrame { step: 0, back: p.antipode(), forward: p, entry: Complex64::new(0.0, 0.0) },
            uncertainty,
            entry_side: None,
            map: MoebiusMap::identity(),
            distance: 0.0,
            next_forward,
        }
    }

    fn ambiguous(&self, reason: impl Into<String>) -> Error {
        Error::AmbiguousCrossing { step: self.frame.step, reason: reason.into() }
    }

    fn step(&mut self) -> Result<Crossing> {
        let RayFrame { step, back, forward, entry } = self.frame;
        let ray = Geodesic::new(back, forward, PositiveSide::StartToEnd)?;

        let mut exits = Vec::with_capacity(1);
        for s in Symbol::ALL {
            if Some(s) == self.entry_side {
                continue;
            }
            let side = self.group.side(s);
            let crosses = geodesics_cross(&ray, side).map_err(|e| self.ambiguous(e.to_string()))?;
            let margin = self.group.circle(s).arc().signed_margin(forward);
            if crosses && margin > -self.uncertainty {
                if margin < self.uncertainty {
                    return Err(Error::Ambiguous { depth: step, margin, bound: self.uncertainty });
                }
                exits.push(s);
            }
        }
        let crossed = match exits.as_slice() {
            [s] => *s,
            [] => return Err(Error::NotALimitPoint { depth: step }),
            many => return Err(self.ambiguous(format!("ray leaves the tile through {} sides", many.len()))),
        };
        let side = self.group.side(crossed);
        let z = geodesic_intersection((back, forward), (side.start(), side.end()))
            .ok_or_else(|| self.ambiguous("crossing point not found inside the disc"))?;
        let angle = angle_between_at(z, forward, side.end());
        if !(MIN_CROSSING_ANGLE..=PI - MIN_CROSSING_ANGLE).contains(&angle) {
            return Err(self.ambiguous(format!("tangential crossing (angle {angle:e})")));
        }
        let positive = side.positive_arc().contains(forward);
        self.distance += hyperbolic_distance(entry, z)?;
        let crossing = Crossing {
            symbol: family_symbol(crossed, positive),
            point: self.map.apply(z),
            angle,
            distance: self.distance,
        };

        // pull everything back into the tile beyond the crossed side
        let pull = self.group.generator(crossed.inverse());
        let (forward, uncertainty) =
            (self.next_forward)(step + 1, pull.apply_boundary(forward), crossed, self.uncertainty * pull.derivative_norm(forward.to_complex()))?;
        self.frame = RayFrame { step: step + 1, back: pull.apply_boundary(back), forward, entry: pull.apply(z) };
        self.uncertainty = uncertainty;
        self.entry_side = Some(crossed.inverse());
        self.map = self.map.compose(self.group.generator(crossed));
        Ok(crossing)
    }
}

/// Crossings of the ray from 0 to `p` with the labelled translates.
///
/// The forward endpoint is pulled back step by step, so accuracy runs out after
/// roughly as many steps as `p` carries significant bits; the walk then stops
/// with an ambiguity error instead of inventing symbols.
pub fn ray_crossing_sequence(group: &SchottkyGroup, p: BoundaryPoint, max_crossings: usize) -> Result<Vec<Crossing>> {
    let mut walker = RayWalker::new(group, p, STEP_ERROR, |_, pulled, _, err| Ok((pulled, err + STEP_ERROR)));
    (0..max_crossings).map(|_| walker.step()).collect()
}

/// Frames and crossings of the ray from 0 to `decode(s)`, with the forward
/// endpoint re-anchored from `σⁿ(s)` at every step so that depth is not
/// limited by the precision of a single angle.
pub fn sequence_ray_walk(
    group: &SchottkyGroup,
    s: &SymbolicSequence,
    max_crossings: usize,
) -> Result<Vec<(RayFrame, Crossing)>> {
    let p = decode(group, s, ANCHOR_EPSILON)?.point;
    let mut walker = RayWalker::new(group, p, ANCHOR_EPSILON, |step, _, _, _| {
        let shifted = s.shift_by(step)?;
        Ok((decode(group, &shifted, ANCHOR_EPSILON)?.point, ANCHOR_EPSILON))
    });
    let mut out = Vec::with_capacity(max_crossings);
    for _ in 0..max_crossings {
        let frame = walker.frame;
        out.push((frame, walker.step()?));
    }
    Ok(out)
}

/// Crossings of the ray from 0 to the limit point of `s`.
pub fn sequence_ray_crossings(group: &SchottkyGroup, s: &SymbolicSequence, max_crossings: usize) -> Result<Vec<Crossing>> {
    Ok(sequence_ray_walk(group, s, max_crossings)?.into_iter().map(|(_, c)| c).collect())
}
