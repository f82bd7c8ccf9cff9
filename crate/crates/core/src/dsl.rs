//! A small language for the sequence families used in experiments.
//!
//! ```text
//! input   = literal | family ;
//! literal = term { term } ;
//! term    = symbol [ "^" integer ] ;
//! symbol  = "a" | "A" | "b" | "B" ;          (* A = ā, B = b̄ *)
//! family  = "periodic(" literal ")"
//!         | "thm42(" rule "," rule ")"
//!         | "thm43(" rule ")" ;
//! rule    = affine expression in k with nonnegative integer coefficients ;
//! ```
//!
//! `thm43(r)` expands to `b a^{r(1)} b a^{r(2)} b …` and `thm42(r1, r2)` to
//! `b a^{r1(1)} b A^{r2(1)} b a^{r1(2)} b A^{r2(2)} …`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SymbolicSequence;
use crate::symbol::{first_forbidden_pair, Symbol};

/// `coef·k + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub coef: u64,
    pub constant: u64,
}

impl Rule {
    pub fn eval(&self, k: u64) -> u64 {
        self.coef * k + self.constant
    }

    /// Strictly increasing in k, decided from the coefficient alone.
    pub fn is_strictly_increasing(&self) -> bool {
        self.coef > 0
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coef, self.constant) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "k"),
            (1, c) => write!(f, "k+{c}"),
            (m, 0) => write!(f, "{m}k"),
            (m, c) => write!(f, "{m}k+{c}"),
        }
    }
}

/// A symbol raised to a positive power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub symbol: Symbol,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    Literal { terms: Vec<Term> },
    Periodic { terms: Vec<Term> },
    Thm42 { a_runs: Rule, abar_runs: Rule },
    Thm43 { a_runs: Rule },
}

fn expand_terms(terms: &[Term]) -> Vec<Symbol> {
    terms
        .iter()
        .flat_map(|t| std::iter::repeat_n(t.symbol, t.power as usize))
        .collect()
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for t in terms {
        if t.power == 1 {
            write!(f, "{}", t.symbol)?;
        } else {
            write!(f, "{}^{}", t.symbol, t.power)?;
        }
    }
    Ok(())
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Literal { terms } => write_terms(f, terms),
            FamilySpec::Periodic { terms } => {
                write!(f, "periodic(")?;
                write_terms(f, terms)?;
                write!(f, ")")
            }
            FamilySpec::Thm42 { a_runs, abar_runs } => write!(f, "thm42({a_runs}, {abar_runs})"),
            FamilySpec::Thm43 { a_runs } => write!(f, "thm43({a_runs})"),
        }
    }
}

/// Finds the block containing `index` when block `k` (1-based) has length `len(k)`.
fn locate(index: usize, len: impl Fn(u64) -> usize) -> (u64, usize) {
    let mut rest = index;
    let mut k = 1u64;
    loop {
        let l = len(k);
        if rest < l {
            return (k, rest);
        }
        rest -= l;
        k += 1;
    }
}

impl FamilySpec {
    /// The lazily generated crossing sequence.
    pub fn expand(&self) -> SymbolicSequence {
        match self {
            FamilySpec::Literal { terms } => {
                SymbolicSequence::finite(expand_terms(terms)).expect("validated at parse time")
            }
            FamilySpec::Periodic { terms } => {
                SymbolicSequence::periodic(expand_terms(terms)).expect("validated at parse time")
            }
            FamilySpec::Thm43 { a_runs } => {
                let r = *a_runs;
                SymbolicSequence::from_fn(None, move |i| {
                    let (_, pos) = locate(i, |k| 1 + r.eval(k) as usize);
                    if pos == 0 {
                        Symbol::B
                    } else {
                        Symbol::A
                    }
                })
            }
            FamilySpec::Thm42 { a_runs, abar_runs } => {
                let (r1, r2) = (*a_runs, *abar_runs);
                SymbolicSequence::from_fn(None, move |i| {
                    let (k, pos) = locate(i, |k| 2 + (r1.eval(k) + r2.eval(k)) as usize);
                    let first = 1 + r1.eval(k) as usize;
                    if pos == 0 || pos == first {
                        Symbol::B
                    } else if pos < first {
                        Symbol::A
                    } else {
                        Symbol::AInv
                    }
                })
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, FamilySpec::Literal { .. })
    }
}

/// Parses DSL text into a validated [`FamilySpec`].
pub fn parse_family(text: &str) -> Result<FamilySpec> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    let family_spec = if p.peek_keyword("periodic") {
        p.expect_keyword("periodic")?;
        p.expect('(')?;
        let terms = p.literal()?;
        p.expect(')')?;
        let symbols = expand_terms(&terms);
        if let Some(index) = first_forbidden_pair(&symbols) {
            return Err(Error::NonReduced { index });
        }
        if !symbols[symbols.len() - 1].may_precede(symbols[0]) {
            return Err(Error::NonReduced { index: symbols.len() });
        }
        FamilySpec::Periodic { terms }
    } else if p.peek_keyword("thm42") {
        p.expect_keyword("thm42")?;
        p.expect('(')?;
        let a_runs = p.rule()?;
        p.expect(',')?;
        let abar_runs = p.rule()?;
        p.expect(')')?;
        FamilySpec::Thm42 { a_runs, abar_runs }
    } else if p.peek_keyword("thm43") {
        p.expect_keyword("thm43")?;
        p.expect('(')?;
        let a_runs = p.rule()?;
        p.expect(')')?;
        FamilySpec::Thm43 { a_runs }
    } else {
        let terms = p.literal()?;
        if let Some(index) = first_forbidden_pair(&expand_terms(&terms)) {
            return Err(Error::NonReduced { index });
        }
        FamilySpec::Literal { terms }
    };
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(family_spec)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        let found = self.chars.get(self.pos).map_or("end of input".to_string(), |c| format!("{c:?}"));
        Error::Syntax { position: self.pos, message: format!("{message} (found {found})") }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        let end = self.pos + kw.len();
        end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(kw.chars())
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.peek_keyword(kw) {
            self.pos += kw.chars().count();
            Ok(())
        } else {
            Err(self.error(&format!("expected {kw:?}")))
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::Syntax {
            position: start,
            message: format!("integer {digits} out of range"),
        })
    }

    fn literal(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        while let Some(symbol) = self.peek().and_then(Symbol::from_char) {
            self.pos += 1;
            let mut power = 1u32;
            if self.peek() == Some('^') {
                self.pos += 1;
                let at = {
                    self.skip_ws();
                    self.pos
                };
                let n = self.integer()?;
                if n == 0 || n > u32::MAX as u64 {
                    return Err(Error::Syntax { position: at, message: format!("exponent {n} must be in 1..=2^32-1") });
                }
                power = n as u32;
            }
            terms.push(Term { symbol, power });
        }
        if terms.is_empty() {
            return Err(self.error("expected a symbol a, A, b or B"));
        }
        Ok(terms)
    }

    /// `[int] ["*"] "k" ["+" int]` or `int ["+" [int] ["*"] "k"]`.
    fn rule(&mut self) -> Result<Rule> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let lead = if self.peek().is_some_and(|c| c.is_ascii_digit()) { Some(self.integer()?) } else { None };
        let mut coef = 0;
        let mut constant = 0;
        if self.peek() == Some('*') {
            self.pos += 1;
            if self.peek() != Some('k') {
                return Err(self.error("expected 'k' after '*'"));
            }
        }
        if self.peek() == Some('k') {
            self.pos += 1;
            coef = lead.unwrap_or(1);
            if self.peek() == Some('+') {
                self.pos += 1;
                constant = self.integer()?;
            }
        } else {
            let Some(c) = lead else {
                return Err(self.error("expected a rule such as k, 2k or 2k+1"));
            };
            constant = c;
            if self.peek() == Some('+') {
                self.pos += 1;
                coef = if self.peek().is_some_and(|c| c.is_ascii_digit()) { self.integer()? } else { 1 };
                if self.peek() == Some('*') {
                    self.pos += 1;
                }
                if self.peek() != Some('k') {
                    return Err(self.error("expected 'k'"));
                }
                self.pos += 1;
            }
        }
        let rule = Rule { coef, constant };
        if !rule.is_strictly_increasing() {
            return Err(Error::Syntax {
                position: start,
                message: format!("rule {rule} is not strictly increasing in k"),
            });
        }
        Ok(rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{letters_to_string, parse_letters};

    fn expand(text: &str, n: usize) -> String {
        letters_to_string(&parse_family(text).unwrap().expand().prefix(n))
    }

    #[test]
    fn periodic_family() {
        assert_eq!(expand("periodic(ab)", 8), "abababab");
        assert_eq!(expand(" periodic( a^2 B ) ", 7), "aaBaaBa");
    }

    #[test]
    fn thm43_family() {
        assert_eq!(expand("thm43(k)", 14), "babaabaaabaaaa");
        assert_eq!(expand("thm43(2k+1)", 10), "baaabaaaaa");
    }

    #[test]
    fn thm42_family() {
        // b a² b Ā³ b a⁴ b Ā⁵
        assert_eq!(expand("thm42(2k, 2k+1)", 18), "baabAAAbaaaabAAAAA");
        assert_eq!(expand("thm42(k,k+1)", 12), "babAAbaabAAA");
    }

    #[test]
    fn literal_family() {
        let s = parse_family("b a^3 B").unwrap().expand();
        assert_eq!(s.len(), Some(5));
        assert_eq!(s.prefix(10), parse_letters("baaaB").unwrap());
    }

    #[test]
    fn non_reduced_is_rejected_with_index() {
        assert_eq!(parse_family("a A"), Err(Error::NonReduced { index: 1 }));
        assert_eq!(parse_family("ab^2B"), Err(Error::NonReduced { index: 3 }));
        assert_eq!(parse_family("periodic(abA)"), Err(Error::NonReduced { index: 3 }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_family("thm43(k") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        match parse_family("abx") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_family("a^0"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_family("thm43(3)"), Err(Error::Syntax { position: 6, .. })));
        assert!(matches!(parse_family(""), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse_family("periodic()"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rule_forms() {
        let r = |t: &str| match parse_family(&format!("thm43({t})")).unwrap() {
            FamilySpec::Thm43 { a_runs } => a_runs,
            _ => unreachable!(),
        };
        assert_eq!(r("k"), Rule { coef: 1, constant: 0 });
        assert_eq!(r("2k+1"), Rule { coef: 2, constant: 1 });
        assert_eq!(r("3*k"), Rule { coef: 3, constant: 0 });
        assert_eq!(r("1+2k"), Rule { coef: 2, constant: 1 });
        assert_eq!(r("4 + k"), Rule { coef: 1, constant: 4 });
    }

    #[test]
    fn canonical_text() {
        for text in ["periodic(ab)", "thm43(k)", "thm42(2k, 2k+1)", "ba^3B", "thm43(3k+2)"] {
            assert_eq!(parse_family(text).unwrap().to_string(), text);
        }
        assert_eq!(parse_family("thm42( 2*k , 1+2k )").unwrap().to_string(), "thm42(2k, 2k+1)");
    }
}
