//! The two insertion encodings.
//!
//! Both describe a Cayley permutation as an *evolution*: a sequence of
//! configurations, each made of placed points and slots (promises of future
//! points), starting from a single empty slot. Each step fills or splits one
//! slot and is recorded as a letter; the word of letters is the encoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod horizontal;
pub mod vertical;

pub use horizontal::{ConfigH, KindH, LetterH, SlotH};
pub use vertical::{ConfigV, KindV, LetterV};

/// Which objects an evolution is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Any Cayley permutation.
    Cayley,
    /// Restricted growth functions.
    Rgf,
    /// RGFs in which every value occurs exactly twice (horizontal only).
    Matching,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cayley => "cayley",
            Mode::Rgf => "rgf",
            Mode::Matching => "matching",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cayley" => Ok(Mode::Cayley),
            "rgf" => Ok(Mode::Rgf),
            "matching" => Ok(Mode::Matching),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Horizontal,
    Vertical,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Horizontal => "horizontal",
            Encoding::Vertical => "vertical",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "horizontal" => Ok(Encoding::Horizontal),
            "v" | "vertical" => Ok(Encoding::Vertical),
            other => Err(Error::invalid(format!("unknown encoding {other:?}"))),
        }
    }
}

/// Splits `"m{1,1}u{3,1}"` into `(kind char, slot, flag)` triples. Whitespace
/// anywhere is ignored.
pub(crate) fn parse_letters(s: &str) -> Result<Vec<(char, usize, bool)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let kind = rest.chars().next().unwrap();
        rest = &rest[kind.len_utf8()..];
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| Error::invalid(format!("expected {{i,j}} after {kind:?} in {s:?}")))?;
        let (inner, tail) = body;
        let (i, j) = inner
            .split_once(',')
            .ok_or_else(|| Error::invalid(format!("expected i,j in {{{inner}}}")))?;
        let slot: usize = i.parse().map_err(|_| Error::invalid(format!("bad slot index {i:?}")))?;
        if slot == 0 {
            return Err(Error::invalid("slot indices start at 1"));
        }
        let flag = match j {
            "0" => false,
            "1" => true,
            _ => return Err(Error::invalid(format!("flag must be 0 or 1, got {j:?}"))),
        };
        out.push((kind, slot, flag));
        rest = tail;
    }
    Ok(out)
}

pub(crate) fn format_word<T: fmt::Display>(word: &[T]) -> String {
    word.iter().map(|l| l.to_string()).collect()
}
