//! Bounded witness searches for concentration and geodesic separation.
//!
//! Every search scans reduced words in length-then-lexicographic order and
//! returns the first hit; exhaustion is an ordinary outcome carrying the
//! bound and the number of words looked at. Witnesses are re-checked from a
//! freshly built map before they are reported.

use rayon::prelude::*;
use serde::Serialize;

use crate::coding::cylinder_arcs;
use crate::error::{Error, Result};
use crate::group::{GroupWord, SchottkyGroup};
use crate::hyperbolic::{Arc, BoundaryPoint, Geodesic, MoebiusMap, POINT_TOL};
use crate::sequence::SymbolicSequence;
use crate::symbol::{letters_to_string, Symbol};

pub const CONTAINMENT_MARGIN: f64 = 1e-10;

/// How a geodesic crosses the ray from 0 to `p`, as seen by a traveller on the
/// ray facing `p` (left is counterclockwise of `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingDirection {
    LeftToRight,
    RightToLeft,
}

/// Direction in which the geodesic `from → to` crosses the ray to `p`, or
/// `None` when its endpoints do not separate `p` from 0's side.
pub fn crossing_direction(p: BoundaryPoint, from: BoundaryPoint, to: BoundaryPoint) -> Option<CrossingDirection> {
    let forward = Arc::new(from, to).ok()?;
    if forward.contains_with_margin(p, CONTAINMENT_MARGIN) {
        Some(CrossingDirection::RightToLeft)
    } else if forward.complement().contains_with_margin(p, CONTAINMENT_MARGIN) {
        Some(CrossingDirection::LeftToRight)
    } else {
        None
    }
}

/// How far `inner` sits inside `outer` (negative when it sticks out).
pub fn containment_margin(outer: &Arc, inner: &Arc) -> f64 {
    let o = outer.start().ccw_offset_to(inner.start());
    o.min(outer.width() - o - inner.width())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Witness { word: GroupWord },
    Exhausted { max_len: usize },
}

/// Outcome of a search plus the independent re-check of a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport<C> {
    pub outcome: Outcome,
    pub words_examined: u64,
    pub verification: Option<C>,
}

impl<C> WitnessReport<C> {
    pub fn witness(&self) -> Option<&GroupWord> {
        match &self.outcome {
            Outcome::Witness { word } => Some(word),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.outcome, Outcome::Exhausted { .. })
    }
}

/// Scans reduced words of length `0..=max_len` for the first accepted map.
///
/// Words of length ≥ 2 are split by their two-letter prefix; each part is a
/// depth-first scan that remembers its best hit in (length, lex) order, and
/// the parts are reduced in prefix order. The result and the word count do not
/// depend on `parallel`.
pub fn scan_words<F>(group: &SchottkyGroup, max_len: usize, parallel: bool, accept: F) -> (Option<GroupWord>, u64)
where
    F: Fn(&MoebiusMap) -> bool + Sync,
{
    let mut examined = 1u64;
    if accept(&MoebiusMap::identity()) {
        return (Some(GroupWord::identity()), examined);
    }
    if max_len == 0 {
        return (None, examined);
    }
    for s in Symbol::ALL {
        examined += 1;
        if accept(group.generator(s)) {
            return (Some(GroupWord::new(vec![s]).expect("single letter")), examined);
        }
    }
    if max_len == 1 {
        return (None, examined);
    }

    let prefixes: Vec<[Symbol; 2]> = Symbol::ALL
        .into_iter()
        .flat_map(|x| Symbol::ALL.into_iter().filter(move |&y| x.may_precede(y)).map(move |y| [x, y]))
        .collect();
    let run = |prefix: &[Symbol; 2]| {
        let map = group.generator(prefix[0]).compose(group.generator(prefix[1]));
        let mut part = Partition { group, accept: &accept, max_len, best: None, examined: 0 };
        let mut letters = prefix.to_vec();
        part.visit(&mut letters, &map);
        (part.best, part.examined)
    };
    let parts: Vec<(Option<Vec<Symbol>>, u64)> = if parallel {
        prefixes.par_iter().map(run).collect()
    } else {
        prefixes.iter().map(run).collect()
    };

    let mut best: Option<Vec<Symbol>> = None;
    for (hit, count) in parts {
        examined += count;
        if let Some(h) = hit {
            if best.as_ref().is_none_or(|b| (h.len(), &h) < (b.len(), b)) {
                best = Some(h);
            }
        }
    }
    (best.map(|b| GroupWord::new(b).expect("scan yields reduced words")), examined)
}

struct Partition<'a, F> {
    group: &'a SchottkyGroup,
    accept: &'a F,
    max_len: usize,
    best: Option<Vec<Symbol>>,
    examined: u64,
}

impl<F: Fn(&MoebiusMap) -> bool> Partition<'_, F> {
    fn visit(&mut self, letters: &mut Vec<Symbol>, map: &MoebiusMap) {
        self.examined += 1;
        if (self.accept)(map) {
            // lexicographic traversal: the first hit of a length is the smallest
            self.best = Some(letters.clone());
            return;
        }
        let bound = self.best.as_ref().map_or(self.max_len, |b| b.len() - 1);
        if letters.len() >= bound {
            return;
        }
        let last = *letters.last().expect("partition prefix is non-empty");
        for s in Symbol::ALL {
            if !last.may_precede(s) {
                continue;
            }
            letters.push(s);
            self.visit(letters, &map.compose(self.group.generator(s)));
            letters.pop();
            if self.best.as_ref().is_some_and(|b| b.len() <= letters.len() + 1) {
                return;
            }
        }
    }
}

/// Can `u` be pushed into `v` at `point` by a word of length ≤ `max_len`?
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationTask {
    pub point: BoundaryPoint,
    /// Text of the sequence that defines `point`, if any.
    pub sequence: Option<String>,
    pub u: Arc,
    pub v: Arc,
    pub control: bool,
    pub max_len: usize,
}

impl ConcentrationTask {
    pub fn new(point: BoundaryPoint, u: Arc, v: Arc, control: bool, max_len: usize) -> Result<Self> {
        if !u.contains_with_margin(point, CONTAINMENT_MARGIN) {
            return Err(Error::InvalidArgument("point is not inside U".into()));
        }
        if !v.contains_with_margin(point, CONTAINMENT_MARGIN) {
            return Err(Error::InvalidArgument("point is not inside V".into()));
        }
        Ok(ConcentrationTask { point, sequence: None, u, v, control, max_len })
    }

    pub fn with_sequence(mut self, text: impl Into<String>) -> Self {
        self.sequence = Some(text.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationCheck {
    /// `γ(U)`.
    pub image: Arc,
    /// Margin of `p` inside `γ(U)`.
    pub point_margin: f64,
    /// Margin of `γ(U)` inside `V`.
    pub containment_margin: f64,
    /// Margin of `p` inside `γ(V)`, when control was requested.
    pub control_margin: Option<f64>,
    pub verified: bool,
}

fn concentration_check(task: &ConcentrationTask, map: &MoebiusMap) -> ConcentrationCheck {
    let image = map.apply_arc(&task.u);
    let point_margin = image.signed_margin(task.point);
    let containment = containment_margin(&task.v, &image);
    let control_margin = task.control.then(|| map.apply_arc(&task.v).signed_margin(task.point));
    let verified = point_margin > CONTAINMENT_MARGIN
        && containment > CONTAINMENT_MARGIN
        && control_margin.is_none_or(|m| m > CONTAINMENT_MARGIN);
    ConcentrationCheck { image, point_margin, containment_margin: containment, control_margin, verified }
}

fn concentration_accepts(task: &ConcentrationTask, map: &MoebiusMap) -> bool {
    let image = map.apply_arc(&task.u);
    image.contains_with_margin(task.point, CONTAINMENT_MARGIN)
        && task.v.contains_arc(&image, CONTAINMENT_MARGIN)
        && (!task.control || map.apply_arc(&task.v).contains_with_margin(task.point, CONTAINMENT_MARGIN))
}

/// Recomputes the containments for `word` from scratch.
pub fn verify_concentration(group: &SchottkyGroup, task: &ConcentrationTask, word: &GroupWord) -> ConcentrationCheck {
    concentration_check(task, &group.word_to_map(word))
}

pub fn search_concentration(group: &SchottkyGroup, task: &ConcentrationTask) -> WitnessReport<ConcentrationCheck> {
    search_concentration_with(group, task, true)
}

pub fn search_concentration_with(
    group: &SchottkyGroup,
    task: &ConcentrationTask,
    parallel: bool,
) -> WitnessReport<ConcentrationCheck> {
    let (hit, words_examined) = scan_words(group, task.max_len, parallel, |m| concentration_accepts(task, m));
    match hit {
        Some(word) => WitnessReport {
            verification: Some(verify_concentration(group, task, &word)),
            outcome: Outcome::Witness { word },
            words_examined,
        },
        None => WitnessReport { outcome: Outcome::Exhausted { max_len: task.max_len }, words_examined, verification: None },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCheck {
    /// `γ(λ)` with its transported orientation.
    pub image: Geodesic,
    pub direction: Option<CrossingDirection>,
    /// Arc between the image endpoints that contains `p`.
    pub separated_arc: Option<Arc>,
    pub point_margin: f64,
    /// Margin of the separated arc inside `V`.
    pub containment_margin: f64,
    pub verified: bool,
}

fn separated_arc(p: BoundaryPoint, x: BoundaryPoint, y: BoundaryPoint) -> Option<Arc> {
    let arc = Arc::new(x, y).ok()?;
    Some(if arc.contains(p) { arc } else { arc.complement() })
}

fn separation_check(p: BoundaryPoint, lambda: &Geodesic, v: &Arc, map: &MoebiusMap) -> SeparationCheck {
    let image = lambda.transported(map);
    let arc = separated_arc(p, image.start(), image.end());
    let point_margin = arc.map_or(f64::NEG_INFINITY, |a| a.signed_margin(p));
    let containment = arc.map_or(f64::NEG_INFINITY, |a| containment_margin(v, &a));
    SeparationCheck {
        image,
        direction: crossing_direction(p, image.start(), image.end()),
        separated_arc: arc,
        point_margin,
        containment_margin: containment,
        verified: point_margin > CONTAINMENT_MARGIN && containment > CONTAINMENT_MARGIN,
    }
}

fn separation_accepts(p: BoundaryPoint, lambda: &Geodesic, v: &Arc, map: &MoebiusMap) -> bool {
    let x = map.apply_boundary(lambda.start());
    let y = map.apply_boundary(lambda.end());
    let ox = v.start().ccw_offset_to(x);
    let oy = v.start().ccw_offset_to(y);
    let op = v.start().ccw_offset_to(p);
    let w = v.width() - CONTAINMENT_MARGIN;
    ox > CONTAINMENT_MARGIN
        && oy > CONTAINMENT_MARGIN
        && ox < w
        && oy < w
        && ox.min(oy) + CONTAINMENT_MARGIN < op
        && op < ox.max(oy) - CONTAINMENT_MARGIN
}

fn check_separation_task(p: BoundaryPoint, lambda: &Geodesic, v: &Arc) -> Result<()> {
    if !(v.width() > CONTAINMENT_MARGIN && v.width() < std::f64::consts::TAU - 1e-9) {
        return Err(Error::InvalidArgument(format!("target arc of width {} is degenerate", v.width())));
    }
    if !v.contains_with_margin(p, CONTAINMENT_MARGIN) {
        return Err(Error::InvalidArgument("point is not inside V".into()));
    }
    let arc = separated_arc(p, lambda.start(), lambda.end())
        .filter(|a| a.contains_with_margin(p, CONTAINMENT_MARGIN))
        .ok_or_else(|| Error::InvalidArgument("geodesic endpoints do not separate the point".into()))?;
    if arc.width() >= std::f64::consts::PI {
        return Err(Error::InvalidArgument(format!(
            "geodesic cuts off an arc of width {} around the point; a small neighbourhood is required",
            arc.width()
        )));
    }
    Ok(())
}

/// Finds a word moving `lambda` so that its endpoints separate `p` from ∂V.
pub fn search_separation(
    group: &SchottkyGroup,
    p: BoundaryPoint,
    lambda: &Geodesic,
    v: &Arc,
    max_len: usize,
) -> Result<WitnessReport<SeparationCheck>> {
    search_separation_with(group, p, lambda, v, max_len, true)
}

pub fn search_separation_with(
    group: &SchottkyGroup,
    p: BoundaryPoint,
    lambda: &Geodesic,
    v: &Arc,
    max_len: usize,
    parallel: bool,
) -> Result<WitnessReport<SeparationCheck>> {
    check_separation_task(p, lambda, v)?;
    let (hit, words_examined) = scan_words(group, max_len, parallel, |m| separation_accepts(p, lambda, v, m));
    Ok(match hit {
        Some(word) => WitnessReport {
            verification: Some(separation_check(p, lambda, v, &group.word_to_map(&word))),
            outcome: Outcome::Witness { word },
            words_examined,
        },
        None => WitnessReport { outcome: Outcome::Exhausted { max_len }, words_examined, verification: None },
    })
}

/// Counts of all separation witnesses up to a length, split by direction.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DirectionTally {
    pub left_to_right: u64,
    pub right_to_left: u64,
    pub first_left_to_right: Option<GroupWord>,
    pub first_right_to_left: Option<GroupWord>,
}

/// Enumerates every separation witness of length ≤ `max_len` (serial, in search order).
pub fn separation_directions(
    group: &SchottkyGroup,
    p: BoundaryPoint,
    lambda: &Geodesic,
    v: &Arc,
    max_len: usize,
) -> Result<DirectionTally> {
    check_separation_task(p, lambda, v)?;
    let mut tally = DirectionTally::default();
    for word in std::iter::once(GroupWord::identity()).chain(crate::group::enumerate_words(max_len)) {
        let map = group.word_to_map(&word);
        if !separation_accepts(p, lambda, v, &map) {
            continue;
        }
        match separation_check(p, lambda, v, &map).direction {
            Some(CrossingDirection::LeftToRight) => {
                tally.left_to_right += 1;
                tally.first_left_to_right.get_or_insert(word);
            }
            Some(CrossingDirection::RightToLeft) => {
                tally.right_to_left += 1;
                tally.first_right_to_left.get_or_insert(word);
            }
            None => {}
        }
    }
    Ok(tally)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    /// 1-based index of the translate `λ_m` that `λ₁` is moved onto.
    pub m: usize,
    /// `γ(U₁)`.
    pub image: Arc,
    /// Largest endpoint discrepancy between `γ(U₁)` and `U_m`.
    pub endpoint_error: f64,
    /// Margin of `U_m` inside `V`.
    pub containment_margin: f64,
    /// Margin of `p` inside `γ(U_{1+k})`.
    pub point_margin: f64,
    /// Margin of `p` inside `γ(V)`.
    pub control_margin: f64,
    pub verified: bool,
}

/// Symbolic matches whose arcs are narrower than this cannot be checked geometrically.
const RESOLVABLE_WIDTH: f64 = 1e3 * CONTAINMENT_MARGIN;

/// Follows the constructive recurrence argument: find `m ≥ big_m` with
/// `x_{1+i} = x_{m+i}` for `0 ≤ i ≤ k` and use `γ = x₁⋯x_{m−1}`, which carries
/// `λ₁` onto `λ_m`. `v` defaults to `U_{big_m}`. Positions are 1-based.
pub fn search_controlled_chain(
    group: &SchottkyGroup,
    s: &SymbolicSequence,
    k: usize,
    big_m: usize,
    max_depth: usize,
    v: Option<Arc>,
) -> Result<WitnessReport<ChainCheck>> {
    if big_m < 2 {
        return Err(Error::InvalidArgument("M must be at least 2".into()));
    }
    s.check_prefix(max_depth + 1)?;
    let p = crate::coding::decode(group, s, 1e-13)?.point;
    let exhausted = |examined| WitnessReport { outcome: Outcome::Exhausted { max_len: max_depth }, words_examined: examined, verification: None };
    let block = s.prefix(k + 1);
    if block.len() < k + 1 {
        return Ok(exhausted(0));
    }
    let mut examined = 0u64;
    for m in big_m..=max_depth.saturating_sub(k) {
        examined += 1;
        if (0..=k).any(|i| s.get(m - 1 + i) != Some(block[i])) {
            continue;
        }
        let arcs = cylinder_arcs(group, s, m + k)?;
        let u_m = arcs[m - 1];
        if u_m.width() < RESOLVABLE_WIDTH {
            break;
        }
        let target = match v {
            Some(v) => v,
            None => arcs[big_m - 1],
        };
        let word = GroupWord::new(s.prefix(m - 1))?;
        let map = group.word_to_map(&word);
        let image = map.apply_arc(&arcs[0]);
        let endpoint_error = image.start().circular_distance(u_m.start()).max(image.end().circular_distance(u_m.end()));
        let containment = containment_margin(&target, &image);
        let point_margin = map.apply_arc(&arcs[k]).signed_margin(p);
        let control_margin = map.apply_arc(&target).signed_margin(p);
        // p is only known to the decode accuracy, and U_{m+k} can be narrower than
        // the containment margin, so the point test uses the point tolerance
        let verified = endpoint_error < 1e-9 && containment > CONTAINMENT_MARGIN && point_margin > POINT_TOL;
        if verified {
            let check = ChainCheck { m, image, endpoint_error, containment_margin: containment, point_margin, control_margin, verified };
            return Ok(WitnessReport { outcome: Outcome::Witness { word }, words_examined: examined, verification: Some(check) });
        }
    }
    Ok(exhausted(examined))
}

/// Readable form of a report's outcome, used in logs and reports.
pub fn describe_outcome(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Witness { word } => format!("witness {word}"),
        Outcome::Exhausted { max_len } => format!("exhausted({max_len})"),
    }
}

/// The neighbourhood `U_n` (1-based) of a sequence's limit point.
pub fn neighbourhood(group: &SchottkyGroup, s: &SymbolicSequence, n: usize) -> Result<Arc> {
    if n == 0 {
        return Err(Error::InvalidArgument("neighbourhoods are numbered from 1".into()));
    }
    Ok(cylinder_arcs(group, s, n)?[n - 1])
}

/// The labelled translate `λ_n` (1-based) crossed by the ray at step `n`.
pub fn crossed_translate(group: &SchottkyGroup, s: &SymbolicSequence, n: usize) -> Result<Geodesic> {
    if n == 0 {
        return Err(Error::InvalidArgument("translates are numbered from 1".into()));
    }
    let letters = s.prefix(n);
    if letters.len() < n {
        return Err(Error::NeedsMorePrefix { depth: letters.len(), diameter: f64::INFINITY });
    }
    let map = group.letters_to_map_checked(&letters[..n - 1])?;
    Ok(group.side(letters[n - 1]).transported(&map))
}

/// Compact label for a word list, e.g. in log lines.
pub fn words_label(words: &[Symbol]) -> String {
    letters_to_string(words)
}
