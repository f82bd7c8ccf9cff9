use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four generator letters. Displayed as `a`, `A` (ā), `b`, `B` (b̄).
///
/// The derived ordering is the enumeration order `a < ā < b < b̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "A")]
    AInv,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "B")]
    BInv,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::AInv, Symbol::B, Symbol::BInv];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn inverse(self) -> Symbol {
        match self {
            Symbol::A => Symbol::AInv,
            Symbol::AInv => Symbol::A,
            Symbol::B => Symbol::BInv,
            Symbol::BInv => Symbol::B,
        }
    }

    /// True for `a` and `b`, the letters recorded on positive crossings.
    pub fn is_positive(self) -> bool {
        matches!(self, Symbol::A | Symbol::B)
    }

    /// True when `self` followed by `next` is allowed in a reduced word.
    pub fn may_precede(self, next: Symbol) -> bool {
        next != self.inverse()
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::AInv => 'A',
            Symbol::B => 'b',
            Symbol::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'a' => Some(Symbol::A),
            'A' => Some(Symbol::AInv),
            'b' => Some(Symbol::B),
            'B' => Some(Symbol::BInv),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Index of the first forbidden adjacent pair (the index of its second letter), if any.
pub fn first_forbidden_pair(letters: &[Symbol]) -> Option<usize> {
    letters
        .windows(2)
        .position(|w| !w[0].may_precede(w[1]))
        .map(|i| i + 1)
}

/// Parses a plain run of letters such as `"abAB"`, ignoring whitespace.
pub fn parse_letters(text: &str) -> Result<Vec<Symbol>> {
    text.chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| {
            Symbol::from_char(c).ok_or_else(|| Error::Syntax {
                position: i,
                message: format!("unexpected character {c:?}"),
            })
        })
        .collect()
}

pub fn letters_to_string(letters: &[Symbol]) -> String {
    letters.iter().map(|s| s.as_char()).collect()
}
