//! Finite-depth evidence about the limit point of a sequence: block
//! recurrence (with certificates for the structured families), the orbit
//! distance to the ray, and the implication chain
//! controlled ⟹ concentration ⟹ separation ⟹ conical.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::coding::decode;
use crate::dsl::FamilySpec;
use crate::error::{Error, Result};
use crate::group::SchottkyGroup;
use crate::hyperbolic::{distance_point_to_geodesic, hyperbolic_distance, Arc, BoundaryPoint, Geodesic, PositiveSide};
use crate::lab::{
    search_concentration, search_controlled_chain, ChainCheck, ConcentrationCheck,
    ConcentrationTask, SeparationCheck, WitnessReport,
};
use crate::sequence::SymbolicSequence;
use crate::symbol::{letters_to_string, Symbol};

pub const DEFAULT_CONICAL_THRESHOLD: f64 = 5.0;

/// Decode accuracy for the forward endpoint of each normalized ray.
const PROBE_EPSILON: f64 = 1e-12;

fn symbols_as_text<S: Serializer>(letters: &[Symbol], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&letters_to_string(letters))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecurrenceOutcome {
    RecursAt { positions: Vec<usize> },
    NoRecurrenceFound,
}

/// Whether the block `x_N ⋯ x_{N+k}` shows up again before depth `D` (1-based positions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceVerdict {
    pub block_start: usize,
    pub window: usize,
    pub depth: usize,
    pub outcome: RecurrenceOutcome,
}

impl RecurrenceVerdict {
    /// Builds a verdict after checking every claimed position against `s`.
    pub fn new(s: &SymbolicSequence, block_start: usize, window: usize, depth: usize, positions: Vec<usize>) -> Result<Self> {
        let at = |i: usize| s.get(i - 1);
        for &m in &positions {
            let ok = m > block_start && m + window <= depth && (0..=window).all(|i| at(block_start + i) == at(m + i));
            if !ok {
                return Err(Error::InvalidArgument(format!("position {m} is not a recurrence of the block at {block_start}")));
            }
        }
        let outcome = if positions.is_empty() {
            RecurrenceOutcome::NoRecurrenceFound
        } else {
            RecurrenceOutcome::RecursAt { positions }
        };
        Ok(RecurrenceVerdict { block_start, window, depth, outcome })
    }

    pub fn recurs(&self) -> bool {
        matches!(self.outcome, RecurrenceOutcome::RecursAt { .. })
    }
}

/// For every window `k ≤ max_window`, where does `x_N ⋯ x_{N+k}` reappear at
/// some `N < m ≤ D − k`? A negative answer is evidence only.
pub fn check_controlled(s: &SymbolicSequence, block_start: usize, max_window: usize, depth: usize) -> Result<Vec<RecurrenceVerdict>> {
    if block_start == 0 {
        return Err(Error::InvalidArgument("positions are 1-based".into()));
    }
    if depth <= block_start + max_window {
        return Err(Error::InvalidArgument(format!("depth {depth} must exceed N + maxWindow = {}", block_start + max_window)));
    }
    let prefix = s.prefix(depth);
    if prefix.len() < depth {
        return Err(Error::NeedsMorePrefix { depth: prefix.len(), diameter: f64::NAN });
    }
    (0..=max_window)
        .into_par_iter()
        .map(|k| {
            let block = &prefix[block_start - 1..block_start + k];
            let positions: Vec<usize> = (block_start + 1..=depth - k)
                .filter(|&m| &prefix[m - 1..m + k] == block)
                .collect();
            RecurrenceVerdict::new(s, block_start, k, depth, positions)
        })
        .collect()
}

/// Why a structured family never repeats its first complete run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCertificate {
    pub family: String,
    #[serde(serialize_with = "symbols_as_text")]
    pub block: Vec<Symbol>,
    pub block_start: usize,
    /// `k` with the block equal to `x_N ⋯ x_{N+k}`.
    pub window: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certification {
    Certified(FamilyCertificate),
    NotApplicable { reason: String },
}

impl Certification {
    pub fn certificate(&self) -> Option<&FamilyCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::NotApplicable { .. } => None,
        }
    }
}

/// Run-length certificate: the block `b a^{r(1)} b` needs an `a`-run of length
/// exactly `r(1)` between two `b`s, and every later `a`-run is strictly longer.
pub fn certify_family_nonrecurrence(f: &FamilySpec) -> Certification {
    let (rule, other) = match f {
        FamilySpec::Thm43 { a_runs } => (*a_runs, None),
        FamilySpec::Thm42 { a_runs, abar_runs } => (*a_runs, Some(*abar_runs)),
        FamilySpec::Literal { .. } | FamilySpec::Periodic { .. } => {
            return Certification::NotApplicable { reason: format!("{f} has no increasing run structure") }
        }
    };
    if !rule.is_strictly_increasing() || other.is_some_and(|r| !r.is_strictly_increasing()) {
        return Certification::NotApplicable { reason: format!("{f} has a run rule that is not strictly increasing") };
    }
    let first = rule.eval(1) as usize;
    let mut block = vec![Symbol::B];
    block.extend(std::iter::repeat_n(Symbol::A, first));
    block.push(Symbol::B);
    let later = match other {
        Some(_) => "the a-runs after the first have lengths",
        None => "the runs after the first have lengths",
    };
    let reason = format!(
        "the block needs an a-run of length exactly {first} between two b's; {later} {}, {}, … (rule {rule}, coefficient {} > 0), and the b's and Ā-runs in between never form such a run",
        rule.eval(2),
        rule.eval(3),
        rule.coef
    );
    Certification::Certified(FamilyCertificate { family: f.to_string(), window: block.len() - 1, block, block_start: 1, reason })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicalEvidence {
    Bounded,
    Unbounded,
}

/// Distances `d_n` from the orbit points `w_n = (x₁⋯x_n)(0)` to the ray from 0 to `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicalProbe {
    /// `distances[n - 1] = d_n` for `n = 1..=depth`.
    pub distances: Vec<f64>,
    /// `tail_minimum[n - 1] = min_{m ≥ n} d_m`.
    pub tail_minimum: Vec<f64>,
    pub threshold: f64,
    /// Smallest distance among the last quarter of the indices.
    pub last_quartile_minimum: f64,
    pub evidence: ConicalEvidence,
}

impl ConicalProbe {
    fn from_distances(distances: Vec<f64>, threshold: f64) -> Self {
        let mut tail_minimum = distances.clone();
        for i in (0..tail_minimum.len().saturating_sub(1)).rev() {
            tail_minimum[i] = tail_minimum[i].min(tail_minimum[i + 1]);
        }
        let quartile = distances.len() - distances.len() / 4;
        let last_quartile_minimum = distances[quartile.min(distances.len() - 1)..].iter().copied().fold(f64::INFINITY, f64::min);
        let evidence = if last_quartile_minimum < threshold { ConicalEvidence::Bounded } else { ConicalEvidence::Unbounded };
        ConicalProbe { distances, tail_minimum, threshold, last_quartile_minimum, evidence }
    }

    /// Largest `d_n` over each maximal run of `a`/`ā` letters of `s`, in order.
    pub fn run_maxima(&self, s: &SymbolicSequence) -> Vec<f64> {
        let mut out = Vec::new();
        let mut current: Option<f64> = None;
        for (i, &d) in self.distances.iter().enumerate() {
            match s.get(i) {
                Some(Symbol::A | Symbol::AInv) => current = Some(current.map_or(d, |c: f64| c.max(d))),
                _ => out.extend(current.take()),
            }
        }
        out.extend(current);
        out
    }
}

/// `d_n` for the geodesic ray that starts at `origin` and runs from the
/// direction of `back` towards the limit point of `s`, computed in the frame of
/// `w_n` so that depth is not limited by the size of the word matrices.
pub fn conical_distances_from(
    group: &SchottkyGroup,
    s: &SymbolicSequence,
    back: BoundaryPoint,
    origin: Complex64,
    depth: usize,
) -> Result<Vec<f64>> {
    let mut back = back;
    let mut origin = Some(origin);
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth {
        let x = s.get(n - 1).ok_or(Error::NeedsMorePrefix { depth: n - 1, diameter: f64::NAN })?;
        let pull = group.generator(x.inverse());
        back = pull.apply_boundary(back);
        // the ray's start drifts to the boundary; once it is there the foot of
        // the perpendicular from w_n is certainly ahead of it
        origin = origin.map(|o| pull.apply(o)).filter(|o| o.norm() < 1.0 - 1e-9);
        let forward = decode(group, &s.shift_by(n)?, PROBE_EPSILON)?.point;
        let line = Geodesic::new(back, forward, PositiveSide::StartToEnd)?;
        let zero = Complex64::new(0.0, 0.0);
        let d = match origin {
            // foot of 0 is behind the start when the start is closer to the far end
            Some(o) if (o - back.to_complex()).norm() > (o - forward.to_complex()).norm() => hyperbolic_distance(zero, o)?,
            _ => distance_point_to_geodesic(zero, &line)?,
        };
        out.push(d);
    }
    Ok(out)
}

/// Orbit distances to the ray from 0 towards the limit point of `s`.
pub fn conical_probe(group: &SchottkyGroup, s: &SymbolicSequence, depth: usize) -> Result<ConicalProbe> {
    conical_probe_with(group, s, depth, DEFAULT_CONICAL_THRESHOLD)
}

pub fn conical_probe_with(group: &SchottkyGroup, s: &SymbolicSequence, depth: usize, threshold: f64) -> Result<ConicalProbe> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!("conical probe needs depth ≥ 2, got {depth}")));
    }
    let p = decode(group, s, PROBE_EPSILON)?.point;
    let distances = conical_distances_from(group, s, p.antipode(), Complex64::new(0.0, 0.0), depth)?;
    Ok(ConicalProbe::from_distances(distances, threshold))
}

/// Points of the implication chain, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Controlled,
    Concentration,
    Separation,
    Conical,
}

impl Property {
    pub const CHAIN: [Property; 4] = [Property::Controlled, Property::Concentration, Property::Separation, Property::Conical];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// A verified witness was found.
    Witnessed,
    /// Certified negative.
    Refuted,
    /// Searched to the bound without a witness.
    Exhausted,
    #[default]
    Untested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct HierarchyInput {
    pub controlled: Evidence,
    pub concentration: Evidence,
    pub separation: Evidence,
    pub conical: Evidence,
}

impl HierarchyInput {
    pub fn get(&self, p: Property) -> Evidence {
        match p {
            Property::Controlled => self.controlled,
            Property::Concentration => self.concentration,
            Property::Separation => self.separation,
            Property::Conical => self.conical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyIssue {
    pub upstream: Property,
    pub downstream: Property,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct HierarchyReport {
    /// A witnessed property whose consequence is certified false.
    pub violations: Vec<HierarchyIssue>,
    /// A witnessed property whose consequence was searched for and not found.
    pub unconfirmed: Vec<HierarchyIssue>,
}

impl HierarchyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn hierarchy_check(input: &HierarchyInput) -> HierarchyReport {
    let mut report = HierarchyReport::default();
    for (i, &up) in Property::CHAIN.iter().enumerate() {
        if input.get(up) != Evidence::Witnessed {
            continue;
        }
        for &down in &Property::CHAIN[i + 1..] {
            let issue = |what: &str| HierarchyIssue { upstream: up, downstream: down, detail: format!("{up:?} witnessed but {down:?} {what}") };
            match input.get(down) {
                Evidence::Refuted => report.violations.push(issue("refuted")),
                Evidence::Exhausted => report.unconfirmed.push(issue("not found within the search bound")),
                Evidence::Witnessed | Evidence::Untested => {}
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyOptions {
    /// Depth for recurrence scans and the conical probe.
    pub depth: usize,
    /// Word length bound for the searches.
    pub max_len: usize,
    pub max_window: usize,
    /// Index `n` of the target neighbourhood `V = U_n`.
    pub target: usize,
    pub parallel: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { depth: 500, max_len: 12, max_window: 8, target: 6, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighbourhoodSearch {
    pub label: String,
    pub u: Arc,
    pub report: WitnessReport<ConcentrationCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationSearch {
    pub label: String,
    pub lambda: Geodesic,
    pub report: WitnessReport<SeparationCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub sequence: String,
    pub point: BoundaryPoint,
    pub depth: usize,
    pub recurrence: Vec<RecurrenceVerdict>,
    pub certification: Certification,
    pub chain: WitnessReport<ChainCheck>,
    pub target: Arc,
    pub concentration: Vec<NeighbourhoodSearch>,
    pub separation: Vec<SeparationSearch>,
    pub conical: ConicalProbe,
    pub evidence: HierarchyInput,
    pub hierarchy: HierarchyReport,
}

/// Symbols that must stay available after the probe depth for the forward endpoint to decode.
const DECODE_HEADROOM: usize = 40;

/// Position of the next crossing of a translate of the same side as `λ₁`
/// (`3` when none occurs early on).
pub fn partner_index(s: &SymbolicSequence) -> usize {
    let first = s.get(0);
    (2..=64).find(|&n| s.get(n - 1).is_some() && s.get(n - 1) == first).unwrap_or(3)
}

/// The test neighbourhoods: `U₁`, and the two arcs bounded by one endpoint of
/// `λ₁` and one of its partner `λ_j` (see [`partner_index`]).
pub fn test_neighbourhoods(group: &SchottkyGroup, s: &SymbolicSequence) -> Result<Vec<(String, Arc)>> {
    let j = partner_index(s);
    let arcs = crate::coding::cylinder_arcs(group, s, j)?;
    let (u1, uj) = (arcs[0], arcs[j - 1]);
    Ok(vec![
        ("U1".to_string(), u1),
        (format!("U1|{j} left"), Arc::new(uj.start(), u1.end())?),
        (format!("U1|{j} right"), Arc::new(u1.start(), uj.end())?),
    ])
}

/// Geodesic between the endpoints of `u`, oriented to cross the ray to `p` from left to right.
pub fn bounding_geodesic(u: &Arc) -> Result<Geodesic> {
    Geodesic::new(u.end(), u.start(), PositiveSide::EndToStart)
}

/// Collects all evidence for one sequence.
pub fn classify(group: &SchottkyGroup, family_spec: &FamilySpec, options: &ClassifyOptions) -> Result<Classification> {
    let s = family_spec.expand();
    let depth = match s.len() {
        Some(len) => options.depth.min(len.saturating_sub(DECODE_HEADROOM)),
        None => options.depth,
    };
    if depth < options.max_window + 2 || depth < options.target {
        return Err(Error::NeedsMorePrefix { depth: s.len().unwrap_or(0), diameter: f64::NAN });
    }
    let point = decode(group, &s, PROBE_EPSILON)?.point;

    let recurrence = check_controlled(&s, 1, options.max_window, depth)?;
    let certification = certify_family_nonrecurrence(family_spec);
    let chain = search_controlled_chain(group, &s, options.max_window, 2, depth, None)?;
    let controlled = if certification.certificate().is_some() {
        Evidence::Refuted
    } else if recurrence.iter().all(RecurrenceVerdict::recurs) && chain.witness().is_some() {
        Evidence::Witnessed
    } else {
        Evidence::Exhausted
    };

    let target = crate::lab::neighbourhood(group, &s, options.target)?;
    let mut concentration = Vec::new();
    let mut separation = Vec::new();
    for (label, u) in test_neighbourhoods(group, &s)? {
        let task = ConcentrationTask::new(point, u, target, false, options.max_len)?.with_sequence(family_spec.to_string());
        let report = if options.parallel {
            search_concentration(group, &task)
        } else {
            crate::lab::search_concentration_with(group, &task, false)
        };
        concentration.push(NeighbourhoodSearch { label: label.clone(), u, report });
        let lambda = bounding_geodesic(&u)?;
        let report = crate::lab::search_separation_with(group, point, &lambda, &target, options.max_len, options.parallel)?;
        separation.push(SeparationSearch { label, lambda, report });
    }
    let all_found = |found: bool| if found { Evidence::Witnessed } else { Evidence::Exhausted };
    let concentration_evidence = all_found(concentration.iter().all(|c| c.report.witness().is_some()));
    let separation_evidence = all_found(separation.iter().all(|c| c.report.witness().is_some()));

    let conical = conical_probe(group, &s, depth)?;
    let conical_evidence = match conical.evidence {
        ConicalEvidence::Bounded => Evidence::Witnessed,
        ConicalEvidence::Unbounded => Evidence::Exhausted,
    };

    let evidence = HierarchyInput {
        controlled,
        concentration: concentration_evidence,
        separation: separation_evidence,
        conical: conical_evidence,
    };
    Ok(Classification {
        sequence: family_spec.to_string(),
        point,
        depth,
        recurrence,
        certification,
        chain,
        target,
        concentration,
        separation,
        conical,
        hierarchy: hierarchy_check(&evidence),
        evidence,
    })
}
