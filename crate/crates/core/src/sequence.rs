use std::fmt;
use std::sync::Arc as Shared;

use crate::error::{Error, Result};
use crate::symbol::{first_forbidden_pair, letters_to_string, Symbol};

type Source = Shared<dyn Fn(usize) -> Symbol + Send + Sync>;

/// A reduced sequence `x₁x₂x₃⋯` over `{a, ā, b, b̄}`, evaluated lazily.
///
/// Indices are 0-based here (`get(0)` is `x₁`). Shifting is O(1): it only moves an offset.
#[derive(Clone)]
pub struct SymbolicSequence {
    source: Source,
    offset: usize,
    len: Option<usize>,
}

impl SymbolicSequence {
    /// Wraps a pure index function. The caller guarantees every prefix is reduced.
    pub fn from_fn(len: Option<usize>, f: impl Fn(usize) -> Symbol + Send + Sync + 'static) -> Self {
        SymbolicSequence { source: Shared::new(f), offset: 0, len }
    }

    /// Finite sequence; rejects forbidden pairs.
    pub fn finite(symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(index) = first_forbidden_pair(&symbols) {
            return Err(Error::NonReduced { index });
        }
        let n = symbols.len();
        let data: Shared<[Symbol]> = symbols.into();
        Ok(Self::from_fn(Some(n), move |i| data[i]))
    }

    /// Infinite repetition of `block`; the block must be reduced cyclically.
    pub fn periodic(block: Vec<Symbol>) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::InvalidArgument("periodic block is empty".into()));
        }
        if let Some(index) = first_forbidden_pair(&block) {
            return Err(Error::NonReduced { index });
        }
        if !block[block.len() - 1].may_precede(block[0]) {
            return Err(Error::NonReduced { index: block.len() });
        }
        let data: Shared<[Symbol]> = block.into();
        Ok(Self::from_fn(None, move |i| data[i % data.len()]))
    }

    /// Known length (remaining after shifts), or `None` for infinite sequences.
    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    pub fn is_finite(&self) -> bool {
        self.len.is_some()
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        match self.len {
            Some(n) if i >= n => None,
            _ => Some((self.source)(self.offset + i)),
        }
    }

    /// First `n` symbols (fewer if the sequence is shorter).
    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        let n = self.len.map_or(n, |len| len.min(n));
        (0..n).map(|i| (self.source)(self.offset + i)).collect()
    }

    /// `σ`: drops the first symbol.
    pub fn shift(&self) -> Result<Self> {
        self.shift_by(1)
    }

    /// `σᵐ`.
    pub fn shift_by(&self, m: usize) -> Result<Self> {
        if let Some(n) = self.len {
            if m > n || n == 0 {
                return Err(Error::InvalidArgument(format!(
                    "cannot shift a sequence of length {n} by {m}"
                )));
            }
        }
        Ok(SymbolicSequence {
            source: self.source.clone(),
            offset: self.offset + m,
            len: self.len.map(|n| n - m),
        })
    }

    /// Verifies reducedness of the first `n` symbols.
    pub fn check_prefix(&self, n: usize) -> Result<()> {
        match first_forbidden_pair(&self.prefix(n)) {
            Some(index) => Err(Error::NonReduced { index }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for SymbolicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.prefix(24);
        let more = self.len.is_none_or(|n| n > shown.len());
        write!(f, "SymbolicSequence({}{})", letters_to_string(&shown), if more { "…" } else { "" })
    }
}
