//! Cayley permutations, restricted growth functions and pattern containment.
//!
//! A Cayley permutation is a nonempty word over the positive integers that
//! uses every value from 1 up to its maximum. Restricted growth functions
//! (RGFs) are the Cayley permutations whose first occurrences appear in
//! increasing order of value; they are the canonical words of unordered set
//! partitions. Matchings are RGFs in which every value occurs exactly twice.
//!
//! Everything here is exhaustive and deliberately simple: the generators in
//! this module are the brute-force oracles the rest of the crate is checked
//! against.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Cayley permutation, stored as its list of values (each at least 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CayleyPermutation(Vec<u32>);

impl CayleyPermutation {
    /// Validates that `values` is nonempty and covers `1..=max`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("Cayley permutation must be nonempty"));
        }
        let max = *values.iter().max().unwrap() as usize;
        if values.contains(&0) {
            return Err(Error::invalid("values must be positive"));
        }
        let mut seen = vec![false; max + 1];
        for &v in &values {
            seen[v as usize] = true;
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::invalid(format!(
                "{values:?} skips a value below its maximum"
            )));
        }
        Ok(CayleyPermutation(values))
    }

    /// Caller guarantees the Cayley property.
    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(CayleyPermutation::new(values.clone()).is_ok());
        CayleyPermutation(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Maximum value.
    pub fn height(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    /// Number of occurrences of each value, indexed by value (index 0 unused).
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.height() as usize + 1];
        for &v in &self.0 {
            counts[v as usize] += 1;
        }
        counts
    }

    pub fn is_rgf(&self) -> bool {
        is_rgf_word(&self.0)
    }

    pub fn is_matching_rgf(&self) -> bool {
        self.is_rgf() && self.occurrence_counts()[1..].iter().all(|&c| c == 2)
    }

    /// Returns an occurrence of `pattern`: increasing 0-based indices whose
    /// subword standardises to `pattern`.
    pub fn contains(&self, pattern: &CayleyPermutation) -> Option<Vec<usize>> {
        find_occurrence(&self.0, &pattern.0, false)
    }

    pub fn avoids(&self, basis: &Basis) -> bool {
        basis.iter().all(|b| self.contains(b).is_none())
    }

    /// The subword at the given indices, standardised.
    pub fn pattern_at(&self, indices: &[usize]) -> CayleyPermutation {
        let sub: Vec<u32> = indices.iter().map(|&i| self.0[i]).collect();
        standardise(&sub).expect("nonempty index set")
    }
}

impl fmt::Display for CayleyPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.height() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for CayleyPermutation {
    type Err = Error;

    /// Accepts `"121331"` or `"1,2,10,3"`.
    fn from_str(s: &str) -> Result<Self> {
        CayleyPermutation::new(parse_word(s)?)
    }
}

impl TryFrom<String> for CayleyPermutation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CayleyPermutation> for String {
    fn from(p: CayleyPermutation) -> String {
        p.to_string()
    }
}

/// Parses a word of positive integers in digit or comma form.
pub fn parse_word(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty word"));
    }
    let values: Vec<u32> = if s.contains(',') {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::invalid(format!("bad character {c:?} in {s:?}")))
            })
            .collect::<Result<_>>()?
    };
    if values.contains(&0) {
        return Err(Error::invalid(format!("{s:?} contains a zero")));
    }
    Ok(values)
}

/// Replaces the smallest value by 1, the next smallest by 2, and so on.
pub fn standardise(word: &[u32]) -> Result<CayleyPermutation> {
    if word.is_empty() {
        return Err(Error::invalid("cannot standardise an empty word"));
    }
    let mut distinct = word.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let values = word
        .iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32 + 1)
        .collect();
    Ok(CayleyPermutation(values))
}

pub(crate) fn is_rgf_word(word: &[u32]) -> bool {
    let mut max = 0;
    for &v in word {
        if v > max + 1 {
            return false;
        }
        max = max.max(v);
    }
    true
}

/// Backtracking search for an occurrence of `pattern` in `text`. With
/// `use_last` the occurrence must end at the final entry of `text`.
pub(crate) fn find_occurrence(text: &[u32], pattern: &[u32], use_last: bool) -> Option<Vec<usize>> {
    let k = pattern.len();
    if k > text.len() || k == 0 {
        return None;
    }
    let h = *pattern.iter().max().unwrap() as usize;
    // image[v] = text value assigned to pattern value v
    let mut image = vec![0u32; h + 1];
    let mut idx = Vec::with_capacity(k);
    if search(text, pattern, use_last, 0, &mut image, &mut idx) {
        Some(idx)
    } else {
        None
    }
}

fn search(
    text: &[u32],
    pattern: &[u32],
    use_last: bool,
    start: usize,
    image: &mut [u32],
    idx: &mut Vec<usize>,
) -> bool {
    let j = idx.len();
    if j == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - j;
    let last = text.len() - remaining;
    let lo_pos = if use_last && remaining == 1 { text.len() - 1 } else { start };
    let s = pattern[j] as usize;
    for pos in lo_pos..=last {
        let t = text[pos];
        if !compatible(image, s, t) {
            continue;
        }
        let prev = image[s];
        image[s] = t;
        idx.push(pos);
        if search(text, pattern, use_last, pos + 1, image, idx) {
            return true;
        }
        idx.pop();
        image[s] = prev;
    }
    false
}

fn compatible(image: &[u32], s: usize, t: u32) -> bool {
    if image[s] != 0 {
        return image[s] == t;
    }
    for (v, &w) in image.iter().enumerate().skip(1) {
        if w == 0 {
            continue;
        }
        let ok = match v.cmp(&s) {
            Ordering::Less => w < t,
            Ordering::Greater => w > t,
            Ordering::Equal => unreachable!(),
        };
        if !ok {
            return false;
        }
    }
    true
}

/// A canonical avoiding set: sorted by size then values, deduplicated, and
/// with every element that contains another element removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<CayleyPermutation>", into = "Vec<CayleyPermutation>")]
pub struct Basis(Vec<CayleyPermutation>);

impl Basis {
    pub fn new(patterns: impl IntoIterator<Item = CayleyPermutation>) -> Self {
        let mut v: Vec<CayleyPermutation> = patterns.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.values().cmp(b.values())));
        v.dedup();
        let mut kept: Vec<CayleyPermutation> = Vec::with_capacity(v.len());
        for p in v {
            // sorted by size, so anything p contains is already in `kept`
            if !kept.iter().any(|q| p.contains(q).is_some()) {
                kept.push(p);
            }
        }
        Basis(kept)
    }

    pub fn empty() -> Self {
        Basis(Vec::new())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CayleyPermutation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn patterns(&self) -> &[CayleyPermutation] {
        &self.0
    }

    /// Largest pattern size (0 for the empty basis).
    pub fn max_pattern_size(&self) -> usize {
        self.0.iter().map(|p| p.len()).max().unwrap_or(0)
    }

    /// True iff `word` (any word, not necessarily Cayley) avoids every element.
    pub fn avoided_by_word(&self, word: &[u32]) -> bool {
        self.0.iter().all(|b| find_occurrence(word, b.values(), false).is_none())
    }

    /// True iff no occurrence of a basis element ends at the last entry.
    pub(crate) fn avoided_at_last(&self, word: &[u32]) -> bool {
        self.0.iter().all(|b| find_occurrence(word, b.values(), true).is_none())
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromStr for Basis {
    type Err = Error;

    /// Patterns separated by whitespace, `;` or `/`. A comma-bearing token is
    /// first read as one comma-form pattern and, failing that, as a
    /// comma-separated list, so both `"{121, 221}"` and `"121,221"` work.
    /// `""` or `"{}"` is the empty basis.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut patterns = Vec::new();
        for token in s.split(|c: char| c.is_whitespace() || c == ';' || c == '/') {
            let token = token.trim_matches(',');
            if token.is_empty() {
                continue;
            }
            match token.parse() {
                Ok(p) => patterns.push(p),
                Err(e) if !token.contains(',') => return Err(e),
                Err(_) => {
                    for part in token.split(',').filter(|t| !t.is_empty()) {
                        patterns.push(part.parse()?);
                    }
                }
            }
        }
        Ok(Basis::new(patterns))
    }
}

impl TryFrom<Vec<CayleyPermutation>> for Basis {
    type Error = Error;

    fn try_from(v: Vec<CayleyPermutation>) -> Result<Self> {
        Ok(Basis::new(v))
    }
}

impl From<Basis> for Vec<CayleyPermutation> {
    fn from(b: Basis) -> Self {
        b.0
    }
}

impl<'a> IntoIterator for &'a Basis {
    type Item = &'a CayleyPermutation;
    type IntoIter = std::slice::Iter<'a, CayleyPermutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// All Cayley permutations of size `n`, in lexicographic order.
pub fn generate_cayley(n: usize) -> Result<Vec<CayleyPermutation>> {
    if n == 0 {
        return Err(Error::invalid("size must be at least 1"));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    let mut counts = vec![0usize; n + 2];
    cayley_rec(n, &mut word, &mut counts, &mut out);
    Ok(out)
}

fn cayley_rec(n: usize, word: &mut Vec<u32>, counts: &mut [usize], out: &mut Vec<CayleyPermutation>) {
    let remaining = n - word.len();
    let max = word.iter().copied().max().unwrap_or(0) as usize;
    let missing = (1..=max).filter(|&v| counts[v] == 0).count();
    if remaining == 0 {
        if missing == 0 {
            out.push(CayleyPermutation(word.clone()));
        }
        return;
    }
    if missing > remaining {
        return;
    }
    for v in 1..=n {
        // a value above the current max leaves max..v-1 to fill as well
        let extra_missing = v.saturating_sub(max + 1);
        if v > max && missing + extra_missing > remaining - 1 {
            break;
        }
        word.push(v as u32);
        counts[v] += 1;
        cayley_rec(n, word, counts, out);
        counts[v] -= 1;
        word.pop();
    }
}

/// All size-`n` RGFs avoiding `basis`, in lexicographic order.
pub fn generate_rgfs(n: usize, basis: &Basis) -> Result<Vec<CayleyPermutation>> {
    if n == 0 {
        return Err(Error::invalid("size must be at least 1"));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    rgf_rec(n, basis, &mut word, 0, &mut out);
    Ok(out)
}

fn rgf_rec(n: usize, basis: &Basis, word: &mut Vec<u32>, max: u32, out: &mut Vec<CayleyPermutation>) {
    if word.len() == n {
        out.push(CayleyPermutation(word.clone()));
        return;
    }
    for v in 1..=max + 1 {
        word.push(v);
        if basis.avoided_at_last(word) {
            rgf_rec(n, basis, word, max.max(v), out);
        }
        word.pop();
    }
}

/// All size-`n` matching RGFs avoiding `basis`; empty for odd `n`.
pub fn generate_matching_rgfs(n: usize, basis: &Basis) -> Vec<CayleyPermutation> {
    let mut out = Vec::new();
    if n == 0 || n % 2 == 1 {
        return out;
    }
    let mut word = Vec::with_capacity(n);
    let mut counts = vec![0u8; n / 2 + 2];
    matching_rec(n, basis, &mut word, 0, &mut counts, &mut out);
    out
}

fn matching_rec(
    n: usize,
    basis: &Basis,
    word: &mut Vec<u32>,
    max: u32,
    counts: &mut [u8],
    out: &mut Vec<CayleyPermutation>,
) {
    if word.len() == n {
        out.push(CayleyPermutation(word.clone()));
        return;
    }
    let open = (1..=max as usize).filter(|&v| counts[v] == 1).count();
    let remaining = n - word.len();
    for v in 1..=max + 1 {
        let vi = v as usize;
        if vi >= counts.len() || counts[vi] == 2 {
            continue;
        }
        // a new value opens one more pair that must close in time
        let open_after = if counts[vi] == 0 { open + 1 } else { open - 1 };
        if open_after > remaining - 1 {
            continue;
        }
        word.push(v);
        counts[vi] += 1;
        if basis.avoided_at_last(word) {
            matching_rec(n, basis, word, max.max(v), counts, out);
        }
        counts[vi] -= 1;
        word.pop();
    }
}
