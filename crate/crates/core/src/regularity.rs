//! Deciding when an RGF or matching class has a regular insertion encoding.
//!
//! A class of RGFs has a regular horizontal encoding exactly when it avoids
//! a member of each of `H(I,I)` and `H(I,D)`, and a regular vertical encoding
//! exactly when it avoids a member of each of the nine vertical families.
//! For the horizontal families and six of the vertical ones this reduces to
//! looking for a basis element inside the family. The remaining three
//! vertical families (the ones whose top part decreases) have alternations
//! that are not RGFs, so there we also search for alternations that the
//! class avoids, up to a configurable size.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cayley::{generate_cayley, generate_matching_rgfs, generate_rgfs, Basis, CayleyPermutation};
use crate::encoding::horizontal::max_slots_h;
use crate::encoding::vertical::max_slots_v;
use crate::encoding::{Encoding, Mode};
use crate::error::{Error, Result};
use crate::geometry::{alternation, in_class, ClassTag};

/// Default largest alternation parameter tried for the decreasing-top
/// vertical families.
pub const DEFAULT_SEARCH_BOUND: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Regular,
    Irregular,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Families in the order they were checked, each with the pattern that the
/// class avoids, if one was found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witnesses(pub Vec<(ClassTag, Option<CayleyPermutation>)>);

impl Witnesses {
    pub fn get(&self, tag: ClassTag) -> Option<&CayleyPermutation> {
        self.0.iter().find(|(t, _)| *t == tag).and_then(|(_, w)| w.as_ref())
    }

    pub fn missing(&self) -> impl Iterator<Item = ClassTag> + '_ {
        self.0.iter().filter(|(_, w)| w.is_none()).map(|(t, _)| *t)
    }
}

impl Serialize for Witnesses {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (tag, w) in &self.0 {
            map.serialize_entry(&tag.to_string(), w)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Witnesses {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Witnesses;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from family to pattern or null")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Witnesses, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Option<CayleyPermutation>>()? {
                    let tag = k.parse().map_err(serde::de::Error::custom)?;
                    out.push((tag, v));
                }
                Ok(Witnesses(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub encoding: Encoding,
    pub mode: Mode,
    pub verdict: Verdict,
    pub witnesses: Witnesses,
    /// Largest alternation parameter searched (vertical only).
    pub search_bound: Option<usize>,
}

impl ClassificationReport {
    /// True iff every family is witnessed by an element of `basis` itself,
    /// with no alternation search. The sweep reports this stricter test
    /// alongside the full verdict.
    pub fn witnessed_by_basis(&self, basis: &Basis) -> bool {
        !basis.is_empty()
            && self
                .witnesses
                .0
                .iter()
                .all(|(_, w)| w.as_ref().is_some_and(|w| basis.patterns().contains(w)))
    }

    /// One line explaining a non-regular verdict.
    pub fn reason(&self) -> Option<String> {
        let missing: Vec<String> = self.witnesses.missing().map(|t| t.to_string()).collect();
        match self.verdict {
            Verdict::Regular => None,
            Verdict::Irregular if self.witnesses.0.iter().all(|(_, w)| w.is_none()) && missing.is_empty() => {
                Some("empty basis: the class contains every alternation".into())
            }
            Verdict::Irregular => Some(format!("no avoided pattern in {}", missing.join(", "))),
            Verdict::Undecided => Some(format!(
                "no avoided alternation of size up to m={} in {}",
                self.search_bound.unwrap_or(0),
                missing.join(", ")
            )),
        }
    }
}

/// Horizontal classification in RGF or matching mode.
pub fn classify_h(basis: &Basis, mode: Mode) -> Result<ClassificationReport> {
    if mode == Mode::Cayley {
        return Err(Error::invalid("horizontal classification is defined for rgf and matching modes"));
    }
    let witnesses: Vec<_> = ClassTag::HORIZONTAL_FAMILIES
        .iter()
        .map(|&tag| (tag, basis.iter().find(|b| in_class(b, tag)).cloned()))
        .collect();
    let verdict = if !basis.is_empty() && witnesses.iter().all(|(_, w)| w.is_some()) {
        Verdict::Regular
    } else {
        Verdict::Irregular
    };
    Ok(ClassificationReport {
        encoding: Encoding::Horizontal,
        mode,
        verdict,
        witnesses: Witnesses(witnesses),
        search_bound: None,
    })
}

/// Vertical classification of an RGF class. `search_bound` is the largest
/// alternation parameter tried for the decreasing-top families.
pub fn classify_v(basis: &Basis, search_bound: usize) -> ClassificationReport {
    let mut witnesses = Vec::with_capacity(9);
    let mut exact_missing = basis.is_empty();
    let mut open_missing = false;
    for tag in ClassTag::VERTICAL_FAMILIES {
        let mut found = basis.iter().find(|b| in_class(b, tag)).cloned();
        if found.is_none() && tag.has_decreasing_top() && !basis.is_empty() {
            found = (1..=search_bound)
                .map(|m| alternation(tag, m).expect("valid family"))
                .find(|a| avoided_by_class(a, basis));
        }
        if found.is_none() {
            if tag.has_decreasing_top() {
                open_missing = true;
            } else {
                exact_missing = true;
            }
        }
        witnesses.push((tag, found));
    }
    let verdict = if exact_missing {
        Verdict::Irregular
    } else if open_missing {
        Verdict::Undecided
    } else {
        Verdict::Regular
    };
    ClassificationReport {
        encoding: Encoding::Vertical,
        mode: Mode::Rgf,
        verdict,
        witnesses: Witnesses(witnesses),
        search_bound: Some(search_bound),
    }
}

/// Dispatches on encoding. Vertical matching classes are not supported.
pub fn classify(basis: &Basis, encoding: Encoding, mode: Mode, search_bound: usize) -> Result<ClassificationReport> {
    match (encoding, mode) {
        (Encoding::Horizontal, _) => classify_h(basis, mode),
        (Encoding::Vertical, Mode::Rgf) => Ok(classify_v(basis, search_bound)),
        (Encoding::Vertical, other) => Err(Error::invalid(format!("vertical classification is defined for rgf mode, not {other}"))),
    }
}

/// True iff no RGF avoiding `basis` contains `gamma`.
///
/// Any RGF containing `gamma` contains one built from `gamma` by adding, for
/// some values, one extra copy placed before that value's first occurrence
/// (take the occurrence plus the first copy of each of its values). So it is
/// enough to look for such an extension that avoids the basis. Extensions
/// are built left to right, pruning as soon as a prefix contains a basis
/// element.
pub fn avoided_by_class(gamma: &CayleyPermutation, basis: &Basis) -> bool {
    class_member_containing(gamma, basis).is_none()
}

/// An RGF avoiding `basis` that contains `gamma`, if there is one; it has at
/// most `2·|gamma|` entries. See [`avoided_by_class`].
pub fn class_member_containing(gamma: &CayleyPermutation, basis: &Basis) -> Option<CayleyPermutation> {
    if basis.is_empty() {
        return Some(rgf_containing(gamma));
    }
    let mut word = Vec::with_capacity(2 * gamma.len());
    extension_avoids(gamma.values(), 0, 1, &mut word, basis)
        .then(|| CayleyPermutation::new(word).expect("extensions are RGFs"))
}

/// The smallest extension of `gamma` that is an RGF.
fn rgf_containing(gamma: &CayleyPermutation) -> CayleyPermutation {
    let mut word = Vec::with_capacity(2 * gamma.len());
    let mut next_new = 1;
    for &v in gamma.values() {
        while v > next_new {
            word.push(next_new);
            next_new += 1;
        }
        word.push(v);
        if v == next_new {
            next_new += 1;
        }
    }
    CayleyPermutation::new(word).expect("extensions are RGFs")
}

/// Leaves the successful extension in `word`.
fn extension_avoids(gamma: &[u32], i: usize, next_new: u32, word: &mut Vec<u32>, basis: &Basis) -> bool {
    if i == gamma.len() {
        return true;
    }
    let v = gamma[i];
    if v <= next_new {
        word.push(v);
        let next = if v == next_new { next_new + 1 } else { next_new };
        if basis.avoided_at_last(word) && extension_avoids(gamma, i + 1, next, word, basis) {
            return true;
        }
        word.pop();
    }
    // an extra copy of the next unseen value, as its first occurrence
    if gamma[i..].contains(&next_new) {
        word.push(next_new);
        if basis.avoided_at_last(word) && extension_avoids(gamma, i, next_new + 1, word, basis) {
            return true;
        }
        word.pop();
    }
    false
}

/// The Cayley permutations whose avoidance characterises RGFs of at most
/// `k` horizontal slots: `1 2 … k` followed by a permutation of `1..=k+1`.
pub fn sb_h_basis(k: usize) -> Result<Vec<CayleyPermutation>> {
    if k == 0 {
        return Err(Error::invalid("slot bound must be at least 1"));
    }
    let prefix: Vec<u32> = (1..=k as u32).collect();
    let mut out: Vec<_> = permutations(k + 1)
        .into_iter()
        .map(|p| {
            let mut v = prefix.clone();
            v.extend(p);
            CayleyPermutation::new(v).expect("prefix plus permutation is Cayley")
        })
        .collect();
    out.sort();
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn rec(avail: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if avail.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..avail.len() {
            let v = avail.remove(i);
            cur.push(v);
            rec(avail, cur, out);
            cur.pop();
            avail.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..=n as u32).collect(), &mut Vec::new(), &mut out);
    out
}

/// The Cayley permutations whose avoidance characterises RGFs of at most
/// `k` vertical slots.
///
/// Each is a minimal derivation of a configuration `1 2 … n ◊ a_1 ◊ … ◊ a_k ◊`
/// with `a` a Cayley permutation of size `k` and height `n`: one point per
/// slot, each of value at least `n`. A filler equal to `n` must lie right of
/// the last `n` of `a`, since copies of a value are inserted left to right.
pub fn sb_v_basis(k: usize) -> Result<Vec<CayleyPermutation>> {
    if k == 0 {
        return Err(Error::invalid("slot bound must be at least 1"));
    }
    let mut out = Vec::new();
    for a in generate_cayley(k)? {
        let n = a.height();
        let last_n = a.values().iter().rposition(|&x| x == n).unwrap() + 1;
        let mut fillers = vec![0u32; k + 1];
        loop {
            // fillers[i] = 0 means value n; positive values are n + fillers[i]
            let max = *fillers.iter().max().unwrap();
            let contiguous = (1..=max).all(|v| fillers.contains(&v));
            let order_ok = fillers.iter().enumerate().all(|(i, &f)| f > 0 || i >= last_n);
            if contiguous && order_ok {
                let mut v: Vec<u32> = (1..=n).collect();
                v.push(n + fillers[0]);
                for (x, f) in a.values().iter().zip(&fillers[1..]) {
                    v.push(*x);
                    v.push(n + f);
                }
                out.push(CayleyPermutation::new(v).expect("contiguous fillers give a Cayley permutation"));
            }
            if !odometer(&mut fillers, k as u32 + 1) {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn odometer(digits: &mut [u32], max: u32) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Largest slot count seen over RGFs (or matchings) of size at most `n_max`
/// avoiding `basis`. Growth with `n_max` is evidence against regularity.
pub fn slot_probe(basis: &Basis, encoding: Encoding, mode: Mode, n_max: usize) -> Result<usize> {
    let mut best = 0;
    for n in 1..=n_max {
        let members = match mode {
            Mode::Matching => generate_matching_rgfs(n, basis),
            _ => generate_rgfs(n, basis)?,
        };
        for pi in members {
            let s = match encoding {
                Encoding::Horizontal => max_slots_h(&pi),
                Encoding::Vertical => max_slots_v(&pi),
            };
            best = best.max(s);
        }
    }
    Ok(best)
}
