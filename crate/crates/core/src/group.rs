//! The two-generator Schottky group: four congruent circles orthogonal to S¹
//! centred at `c, −c, ic, −ic`, paired by `g_a` (real axis) and `g_b` (imaginary axis).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{Geodesic, GeneratorCircle, MoebiusMap};
use crate::symbol::{first_forbidden_pair, letters_to_string, parse_letters, Symbol};

pub const DEFAULT_RADIUS: f64 = 0.8;

/// Geometry of the generator circles, parametrized by their Euclidean radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchottkyConfig {
    pub radius: f64,
}

impl Default for SchottkyConfig {
    fn default() -> Self {
        SchottkyConfig { radius: DEFAULT_RADIUS }
    }
}

impl SchottkyConfig {
    /// Distance of each circle centre from 0: `sqrt(1 + r²)`.
    pub fn center_distance(&self) -> f64 {
        (1.0 + self.radius * self.radius).sqrt()
    }

    /// Checks positivity and the two disjointness inequalities.
    pub fn validate(&self) -> Result<()> {
        let r = self.radius;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::ConfigurationRejected(format!("radius must be a positive number, got {r}")));
        }
        let c = self.center_distance();
        let adjacent = c * std::f64::consts::SQRT_2;
        if !(adjacent > 2.0 * r) {
            return Err(Error::ConfigurationRejected(format!(
                "adjacent circles overlap: c*sqrt(2) > 2r violated ({adjacent} <= {})",
                2.0 * r
            )));
        }
        if !(2.0 * c > 2.0 * r) {
            return Err(Error::ConfigurationRejected(format!(
                "opposite circles overlap: 2c > 2r violated ({} <= {})",
                2.0 * c,
                2.0 * r
            )));
        }
        Ok(())
    }

    /// Parses `{"radius": r}` and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SchottkyConfig = serde_json::from_str(text)
            .map_err(|e| Error::ConfigurationRejected(format!("malformed config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A reduced word in `a, ā, b, b̄`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupWord {
    letters: Vec<Symbol>,
}

impl GroupWord {
    pub fn new(letters: Vec<Symbol>) -> Result<Self> {
        if let Some(index) = first_forbidden_pair(&letters) {
            return Err(Error::NonReduced { index });
        }
        Ok(GroupWord { letters })
    }

    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        GroupWord::new(parse_letters(text)?)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|s| s.inverse()).collect() }
    }

    /// Ordering used by every search: shorter first, then lexicographic in `a < ā < b < b̄`.
    pub fn length_lex_key(&self) -> (usize, &[Symbol]) {
        (self.letters.len(), &self.letters)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", letters_to_string(&self.letters))
        }
    }
}

impl TryFrom<String> for GroupWord {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        if s == "1" {
            return Ok(GroupWord::identity());
        }
        GroupWord::parse(&s)
    }
}

impl From<GroupWord> for String {
    fn from(w: GroupWord) -> String {
        w.to_string()
    }
}

/// The group together with its circles, generators, and labelled sides.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    config: SchottkyConfig,
    circles: [GeneratorCircle; 4],
    generators: [MoebiusMap; 4],
    sides: [Geodesic; 4],
}

/// Builds the group for circles of Euclidean radius `r`.
pub fn build_group(r: f64) -> Result<SchottkyGroup> {
    SchottkyGroup::new(SchottkyConfig { radius: r })
}

impl SchottkyGroup {
    pub fn new(config: SchottkyConfig) -> Result<Self> {
        config.validate()?;
        let r = config.radius;
        let c = config.center_distance();
        let cc = Complex64::new(c, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);

        // g_a(z) = (cz + 1)/(z + c), g_b(z) = (cz + i)/(-iz + c)
        let g_a = MoebiusMap::new(cc, one, one, cc)?;
        let g_b = MoebiusMap::new(cc, i, -i, cc)?;
        let generators = [g_a, g_a.inverse(), g_b, g_b.inverse()];

        let circles = [
            GeneratorCircle::new(Complex64::new(c, 0.0), r)?,
            GeneratorCircle::new(Complex64::new(-c, 0.0), r)?,
            GeneratorCircle::new(Complex64::new(0.0, c), r)?,
            GeneratorCircle::new(Complex64::new(0.0, -c), r)?,
        ];

        // positive side of a (resp. b) is the interior of A (resp. B); a′ and b′
        // inherit theirs by transport through g_a⁻¹ and g_b⁻¹
        let side_a = Geodesic::bounding(&circles[Symbol::A.index()].arc())?;
        let side_b = Geodesic::bounding(&circles[Symbol::B.index()].arc())?;
        let sides = [
            side_a,
            side_a.transported(&generators[Symbol::AInv.index()]),
            side_b,
            side_b.transported(&generators[Symbol::BInv.index()]),
        ];

        Ok(SchottkyGroup { config, circles, generators, sides })
    }

    pub fn config(&self) -> SchottkyConfig {
        self.config
    }

    pub fn generator(&self, s: Symbol) -> &MoebiusMap {
        &self.generators[s.index()]
    }

    /// The circle into which the generator `s` maps the exterior of the circle of `s⁻¹`.
    pub fn circle(&self, s: Symbol) -> &GeneratorCircle {
        &self.circles[s.index()]
    }

    /// Labelled side geodesic bounding the circle of `s`: `a` for `s = a`, `a′` for `s = ā`, etc.
    pub fn side(&self, s: Symbol) -> &Geodesic {
        &self.sides[s.index()]
    }

    pub fn circles(&self) -> &[GeneratorCircle; 4] {
        &self.circles
    }

    /// Left-to-right composition `g_{x1} ∘ g_{x2} ∘ …`.
    pub fn word_to_map(&self, w: &GroupWord) -> MoebiusMap {
        self.letters_to_map(w.letters())
    }

    /// As [`word_to_map`](Self::word_to_map) but rejects non-reduced input.
    pub fn letters_to_map_checked(&self, letters: &[Symbol]) -> Result<MoebiusMap> {
        if let Some(index) = first_forbidden_pair(letters) {
            return Err(Error::NonReduced { index });
        }
        Ok(self.letters_to_map(letters))
    }

    pub(crate) fn letters_to_map(&self, letters: &[Symbol]) -> MoebiusMap {
        letters
            .iter()
            .fold(MoebiusMap::identity(), |m, &s| m.compose(self.generator(s)))
    }

    /// Moves a labelled geodesic by the word, carrying its positive side.
    pub fn translate_geodesic_labels(&self, w: &GroupWord, g: &Geodesic) -> Geodesic {
        g.transported(&self.word_to_map(w))
    }
}

/// Number of reduced words of length exactly `len`.
pub fn reduced_word_count(len: usize) -> u64 {
    if len == 0 {
        1
    } else {
        4 * 3u64.pow(len as u32 - 1)
    }
}

/// Smallest symbol allowed after `prev`.
fn first_after(prev: Option<Symbol>) -> Symbol {
    match prev {
        Some(Symbol::AInv) => Symbol::AInv,
        _ => Symbol::A,
    }
}

fn next_after(current: Symbol, prev: Option<Symbol>) -> Option<Symbol> {
    Symbol::ALL
        .into_iter()
        .filter(|&s| s > current)
        .find(|&s| prev.is_none_or(|p| p.may_precede(s)))
}

/// Reduced words of one fixed length in lexicographic order, optionally with a fixed first letter.
#[derive(Debug, Clone)]
pub struct FixedLengthWords {
    current: Option<Vec<Symbol>>,
    fixed_first: bool,
}

impl FixedLengthWords {
    pub fn new(len: usize) -> Self {
        let mut w: Vec<Symbol> = Vec::with_capacity(len);
        for _ in 0..len {
            let prev = w.last().copied();
            w.push(first_after(prev));
        }
        FixedLengthWords { current: Some(w), fixed_first: false }
    }

    pub fn starting_with(first: Symbol, len: usize) -> Self {
        assert!(len >= 1);
        let mut w = vec![first];
        for _ in 1..len {
            let prev = w.last().copied();
            w.push(first_after(prev));
        }
        FixedLengthWords { current: Some(w), fixed_first: true }
    }

    fn advance(&mut self) {
        let Some(w) = self.current.as_mut() else { return };
        let lowest = usize::from(self.fixed_first);
        let mut i = w.len();
        while i > lowest {
            i -= 1;
            let prev = if i == 0 { None } else { Some(w[i - 1]) };
            if let Some(s) = next_after(w[i], prev) {
                w[i] = s;
                for j in i + 1..w.len() {
                    w[j] = first_after(Some(w[j - 1]));
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for FixedLengthWords {
    type Item = GroupWord;

    fn next(&mut self) -> Option<GroupWord> {
        let out = self.current.clone()?;
        if out.is_empty() {
            self.current = None;
        } else {
            self.advance();
        }
        Some(GroupWord { letters: out })
    }
}

/// All reduced words of length `1..=max_len` in length-then-lexicographic order.
pub fn enumerate_words(max_len: usize) -> impl Iterator<Item = GroupWord> {
    (1..=max_len).flat_map(FixedLengthWords::new)
}
