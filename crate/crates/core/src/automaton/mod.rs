//! Finite automata accepting the insertion encodings of slot-bounded classes.
//!
//! A state summarises a configuration by its *sub-configurations*: every way
//! of keeping fewer than `p` of the placed points (`p` the largest basis
//! pattern size) while keeping all slots. Any basis occurrence created later
//! uses fewer than `p` placed points plus future points, and how future
//! points relate to kept ones is fixed by the slots. So the set of
//! sub-configurations determines which continuations stay in the class, and
//! equal sets can share a state. Sub-configurations whose kept points can no
//! longer grow into an occurrence are dropped, and configurations with more
//! slots than the class allows are dead.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cayley::{standardise, Basis};
use crate::encoding::horizontal::{parse_word_h, LetterH};
use crate::encoding::vertical::{parse_word_v, LetterV};
use crate::encoding::{Encoding, Mode};
use crate::error::{Error, Result};
use crate::regularity::{avoided_by_class, classify, sb_h_basis, sb_v_basis, Verdict, DEFAULT_SEARCH_BOUND};

mod horizontal;
mod soundness;
mod vertical;

pub use soundness::{check_state_soundness, SoundnessReport};

/// Default cap on the number of explored signatures.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Largest slot bound tried when certifying slot-boundedness.
pub const MAX_SLOT_BOUND_H: usize = 6;
pub const MAX_SLOT_BOUND_V: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    H(LetterH),
    V(LetterV),
}

impl Letter {
    pub fn slot(self) -> usize {
        match self {
            Letter::H(l) => l.slot,
            Letter::V(l) => l.slot,
        }
    }

    pub fn parse(encoding: Encoding, s: &str) -> Result<Letter> {
        let letters: Vec<Letter> = match encoding {
            Encoding::Horizontal => parse_word_h(s)?.into_iter().map(Letter::H).collect(),
            Encoding::Vertical => parse_word_v(s)?.into_iter().map(Letter::V).collect(),
        };
        match letters.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::invalid(format!("expected a single letter, got {s:?}"))),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::H(l) => l.fmt(f),
            Letter::V(l) => l.fmt(f),
        }
    }
}

/// A trimmed deterministic automaton; missing transitions reject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub encoding: Encoding,
    pub mode: Mode,
    pub basis: Basis,
    pub slot_bound: usize,
    start: usize,
    accepting: Vec<bool>,
    // sorted by letter
    transitions: Vec<Vec<(Letter, usize)>>,
}

impl Dfa {
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn transitions(&self, state: usize) -> &[(Letter, usize)] {
        &self.transitions[state]
    }

    pub fn next(&self, state: usize, letter: Letter) -> Option<usize> {
        let row = &self.transitions[state];
        row.binary_search_by(|(l, _)| l.cmp(&letter)).ok().map(|i| row[i].1)
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut s = self.start;
        for &l in word {
            match self.next(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.accepting[s]
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    fn from_parts(
        encoding: Encoding,
        mode: Mode,
        basis: Basis,
        slot_bound: usize,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<(Letter, usize)>>,
    ) -> Dfa {
        let mut d = Dfa { encoding, mode, basis, slot_bound, start, accepting, transitions };
        for row in &mut d.transitions {
            row.sort();
        }
        d.trim()
    }

    /// Drops states that cannot reach acceptance and renumbers the rest
    /// breadth-first from the start, following letters in order.
    fn trim(&self) -> Dfa {
        let n = self.state_count();
        let mut reverse = vec![Vec::new(); n];
        for (s, row) in self.transitions.iter().enumerate() {
            for &(_, t) in row {
                reverse[t].push(s);
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| live[s]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &reverse[t] {
                if !live[s] {
                    live[s] = true;
                    queue.push_back(s);
                }
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut order = vec![self.start];
        id[self.start] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for &(_, t) in &self.transitions[s] {
                if live[t] && id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
        }
        let transitions = order
            .iter()
            .map(|&s| {
                self.transitions[s]
                    .iter()
                    .filter(|(_, t)| live[*t])
                    .map(|&(l, t)| (l, id[t]))
                    .collect()
            })
            .collect();
        Dfa {
            encoding: self.encoding,
            mode: self.mode,
            basis: self.basis.clone(),
            slot_bound: self.slot_bound,
            start: 0,
            accepting: order.iter().map(|&s| self.accepting[s]).collect(),
            transitions,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DfaJson::from(self)).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Dfa> {
        let raw: DfaJson = serde_json::from_value(value.clone())?;
        raw.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    encoding: Encoding,
    mode: Mode,
    basis: Basis,
    slot_bound: usize,
    states: usize,
    start: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, String, usize)>,
}

impl From<&Dfa> for DfaJson {
    fn from(d: &Dfa) -> Self {
        DfaJson {
            encoding: d.encoding,
            mode: d.mode,
            basis: d.basis.clone(),
            slot_bound: d.slot_bound,
            states: d.state_count(),
            start: d.start,
            accepting: (0..d.state_count()).filter(|&s| d.accepting[s]).collect(),
            transitions: d
                .transitions
                .iter()
                .enumerate()
                .flat_map(|(s, row)| row.iter().map(move |(l, t)| (s, l.to_string(), *t)))
                .collect(),
        }
    }
}

impl TryFrom<DfaJson> for Dfa {
    type Error = Error;

    fn try_from(raw: DfaJson) -> Result<Dfa> {
        let n = raw.states;
        let bad = |what: &str| Error::invalid(format!("automaton JSON: {what}"));
        if raw.start >= n.max(1) {
            return Err(bad("start state out of range"));
        }
        let mut accepting = vec![false; n];
        for s in raw.accepting {
            *accepting.get_mut(s).ok_or_else(|| bad("accepting state out of range"))? = true;
        }
        let mut transitions = vec![Vec::new(); n];
        for (s, text, t) in raw.transitions {
            if s >= n || t >= n {
                return Err(bad("transition state out of range"));
            }
            transitions[s].push((Letter::parse(raw.encoding, &text)?, t));
        }
        for row in &mut transitions {
            row.sort();
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(bad("nondeterministic transition"));
            }
        }
        Ok(Dfa {
            encoding: raw.encoding,
            mode: raw.mode,
            basis: raw.basis,
            slot_bound: raw.slot_bound,
            start: raw.start,
            accepting,
            transitions,
        })
    }
}

/// What the unplaced points of a basis occurrence need from the
/// sub-configuration holding its placed points. Each of these can only be
/// lost while the kept points stay the same.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Need {
    /// Gaps, counted from 0, that must still hold a slot: between kept
    /// points (vertical) or between kept levels (horizontal).
    pub gaps: Vec<usize>,
    /// Kept levels, by rank from 1, that must still have a repeating slot.
    pub levels: Vec<u32>,
    /// The largest kept value must still be the current maximum.
    pub top: bool,
}

/// Shared facts about the class that every signature step needs.
pub(crate) struct Context {
    pub mode: Mode,
    pub slot_bound: usize,
    /// Basis elements as value words.
    pub basis_words: HashSet<Vec<u32>>,
    /// Patterns a set of kept points may have and still be the placed part
    /// of a future occurrence, with what the rest of each occurrence needs.
    pub viable: HashMap<Vec<u32>, Vec<Need>>,
    /// Most points a viable pattern has.
    pub max_keep: usize,
}

impl Context {
    fn new(basis: &Basis, encoding: Encoding, mode: Mode, slot_bound: usize) -> Context {
        let basis_words = basis.iter().map(|b| b.values().to_vec()).collect();
        let mut viable: HashMap<Vec<u32>, Vec<Need>> = HashMap::new();
        for b in basis {
            let parts = match encoding {
                Encoding::Horizontal => horizontal::placed_parts(b.values()),
                Encoding::Vertical => vertical::placed_parts(b.values()),
            };
            for (word, need) in parts {
                let needs = viable.entry(word).or_default();
                if !needs.contains(&need) {
                    needs.push(need);
                }
            }
        }
        let max_keep = viable.keys().map(Vec::len).max().unwrap_or(0);
        Context { mode, slot_bound, basis_words, viable, max_keep }
    }

    /// Whether kept points forming `word` can still grow into an occurrence,
    /// given a test of the remaining slots.
    fn judge<T>(&self, word: &[u32], sub: T, meets: impl Fn(&T, &Need) -> bool) -> Outcome<T> {
        if word.is_empty() {
            Outcome::Keep(sub)
        } else if self.basis_words.contains(word) {
            Outcome::Dead
        } else if self.viable.get(word).is_some_and(|needs| needs.iter().any(|n| meets(&sub, n))) {
            Outcome::Keep(sub)
        } else {
            Outcome::Drop
        }
    }
}

pub(crate) fn standardised(word: &[u32]) -> Vec<u32> {
    if word.is_empty() {
        Vec::new()
    } else {
        standardise(word).expect("nonempty").into_values()
    }
}

/// What happens to one sub-configuration under a letter.
pub(crate) enum Outcome<T> {
    Keep(T),
    /// Its kept points can no longer be part of an occurrence.
    Drop,
    /// Its kept points form a basis element.
    Dead,
}

pub(crate) trait Signature: Clone + Eq + Hash {
    type L: Copy + Into<Letter>;

    fn letters(&self, ctx: &Context) -> Vec<Self::L>;
    /// `None` when the result contains a basis element or has too many slots.
    fn step(&self, letter: Self::L, ctx: &Context) -> Option<Self>;
    fn is_accepting(&self) -> bool;
    fn slot_count(&self) -> usize;
    /// Letters that fill a slot without opening another one. A state has an
    /// accepted continuation iff it has one using only these letters, since
    /// one point per slot is a pattern of every completion.
    fn completion_letters(&self, ctx: &Context) -> Vec<Self::L>;
}

fn live<S: Signature>(s: &S, ctx: &Context, memo: &mut HashMap<S, bool>) -> bool {
    if s.is_accepting() {
        return true;
    }
    if let Some(&v) = memo.get(s) {
        return v;
    }
    let v = s
        .completion_letters(ctx)
        .into_iter()
        .any(|l| s.step(l, ctx).is_some_and(|t| live(&t, ctx, memo)));
    memo.insert(s.clone(), v);
    v
}

impl From<LetterH> for Letter {
    fn from(l: LetterH) -> Letter {
        Letter::H(l)
    }
}

impl From<LetterV> for Letter {
    fn from(l: LetterV) -> Letter {
        Letter::V(l)
    }
}

struct Explored {
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Letter, usize)>>,
    /// Most slots of any explored state.
    max_slots: usize,
}

fn explore<S: Signature>(init: S, ctx: &Context, cap: usize) -> Result<Explored> {
    let mut ids: HashMap<S, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    ids.insert(init, 0);
    let mut transitions = Vec::new();
    let mut memo = HashMap::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        i += 1;
        let mut row = Vec::new();
        for letter in s.letters(ctx) {
            let Some(t) = s.step(letter, ctx) else { continue };
            if !live(&t, ctx, &mut memo) {
                continue;
            }
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    ids.insert(t.clone(), states.len());
                    states.push(t);
                    states.len() - 1
                }
            };
            row.push((letter.into(), id));
        }
        transitions.push(row);
    }
    let max_slots = states.iter().map(S::slot_count).max().unwrap_or(0);
    Ok(Explored { accepting: states.iter().map(S::is_accepting).collect(), transitions, max_slots })
}

/// Smallest `k ≤ k_max` such that every RGF in the class has at most `k`
/// slots, certified by the class avoiding every element of the slot-bound
/// avoider set. Matching classes use the bound of the RGF class.
pub fn slot_bound(basis: &Basis, encoding: Encoding, k_max: usize) -> Result<Option<usize>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let mut avoided_before: HashSet<Vec<u32>> = HashSet::new();
    for k in 1..=k_max {
        let set = match encoding {
            Encoding::Horizontal => sb_h_basis(k)?,
            Encoding::Vertical => sb_v_basis(k)?,
        };
        // a pattern containing an avoided one is avoided too; stopping at
        // the first pattern the class contains keeps the set sound
        let mut avoided = HashSet::new();
        let all = set.iter().all(|g| {
            let ok = has_small_deletion_in(g.values(), &avoided_before) || avoided_by_class(g, basis);
            if ok {
                avoided.insert(g.values().to_vec());
            }
            ok
        });
        if all {
            return Ok(Some(k));
        }
        avoided_before = avoided;
    }
    Ok(None)
}

/// True iff deleting one or two entries of `word` leaves a pattern in `set`.
fn has_small_deletion_in(word: &[u32], set: &HashSet<Vec<u32>>) -> bool {
    if set.is_empty() {
        return false;
    }
    let n = word.len();
    let without = |skip: &[usize]| -> Vec<u32> {
        let rest: Vec<u32> = (0..n).filter(|i| !skip.contains(i)).map(|i| word[i]).collect();
        standardised(&rest)
    };
    (0..n).any(|i| set.contains(&without(&[i])) || (i + 1..n).any(|j| set.contains(&without(&[i, j]))))
}

/// Builds the automaton whose words of length `n` are exactly the encodings
/// of the size-`n` members of the class.
///
/// Exploration keeps only states with an accepted continuation, so a state
/// with more slots than any class member never appears and no slot bound is
/// needed up front. The recorded bound is the most slots of any state, which
/// is the largest slot count in the evolution of any class member.
pub fn build_dfa(basis: &Basis, encoding: Encoding, mode: Mode, state_cap: usize) -> Result<Dfa> {
    if encoding == Encoding::Vertical && mode == Mode::Matching {
        return Err(Error::invalid("the vertical encoding has no matching mode"));
    }
    if mode == Mode::Cayley {
        return Err(Error::invalid("automata are built for rgf and matching classes"));
    }
    let report = classify(basis, encoding, mode, DEFAULT_SEARCH_BOUND)?;
    if report.verdict == Verdict::Irregular {
        return Err(Error::NotSlotBounded(report.reason().unwrap_or_default()));
    }
    let e = explore_class(basis, encoding, mode, usize::MAX, state_cap)?;
    Ok(Dfa::from_parts(encoding, mode, basis.clone(), e.max_slots, 0, e.accepting, e.transitions))
}

/// Like [`build_dfa`] with a caller-supplied slot bound. Configurations with
/// more than `slot_bound` slots are treated as dead, so the result is exact
/// only if the class really has at most that many slots.
pub fn build_dfa_with_bound(
    basis: &Basis,
    encoding: Encoding,
    mode: Mode,
    slot_bound: usize,
    state_cap: usize,
) -> Result<Dfa> {
    let e = explore_class(basis, encoding, mode, slot_bound, state_cap)?;
    Ok(Dfa::from_parts(encoding, mode, basis.clone(), slot_bound, 0, e.accepting, e.transitions))
}

fn explore_class(basis: &Basis, encoding: Encoding, mode: Mode, slot_bound: usize, state_cap: usize) -> Result<Explored> {
    let ctx = Context::new(basis, encoding, mode, slot_bound);
    match encoding {
        Encoding::Horizontal => explore(horizontal::StateH::initial(), &ctx, state_cap),
        Encoding::Vertical => explore(vertical::StateV::initial(), &ctx, state_cap),
    }
}

/// Number of accepted words of each length `0..=n_max`.
pub fn counts(d: &Dfa, n_max: usize) -> Vec<BigUint> {
    let mut cur = vec![BigUint::zero(); d.state_count()];
    cur[d.start] = BigUint::one();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let total = (0..d.state_count())
            .filter(|&s| d.accepting[s])
            .fold(BigUint::zero(), |acc, s| acc + &cur[s]);
        out.push(total);
        if n == n_max {
            break;
        }
        let mut next = vec![BigUint::zero(); d.state_count()];
        for (s, row) in d.transitions.iter().enumerate() {
            if cur[s].is_zero() {
                continue;
            }
            for &(_, t) in row {
                next[t] += &cur[s];
            }
        }
        cur = next;
    }
    out
}

/// Number of accepted words of length `n`.
pub fn count_accepted(d: &Dfa, n: usize) -> BigUint {
    counts(d, n).pop().expect("nonempty")
}

/// The minimal automaton for the same language, by partition refinement.
pub fn minimize(d: &Dfa) -> Dfa {
    let d = d.trim();
    let n = d.state_count();
    let mut class: Vec<usize> = d.accepting.iter().map(|&a| a as usize).collect();
    let mut count = class.iter().collect::<HashSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<(Letter, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let key = (class[s], d.transitions[s].iter().map(|&(l, t)| (l, class[t])).collect());
                let fresh = ids.len();
                *ids.entry(key).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut accepting = vec![false; count];
    let mut transitions = vec![Vec::new(); count];
    let mut done = vec![false; count];
    for s in 0..n {
        let c = class[s];
        if !done[c] {
            done[c] = true;
            accepting[c] = d.accepting[s];
            transitions[c] = d.transitions[s].iter().map(|&(l, t)| (l, class[t])).collect();
        }
    }
    Dfa::from_parts(d.encoding, d.mode, d.basis.clone(), d.slot_bound, class[d.start], accepting, transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::generate_rgfs;

    fn basis(s: &str) -> Basis {
        s.parse().unwrap()
    }

    fn small(d: &Dfa, n: usize) -> Vec<u64> {
        counts(d, n).iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn vertical_121() {
        let d = build_dfa(&basis("121"), Encoding::Vertical, Mode::Rgf, 10_000).unwrap();
        assert_eq!(small(&d, 5), vec![0, 1, 2, 4, 8, 16]);
        assert_eq!(count_accepted(&d, 10), BigUint::from(512u32));
        assert_eq!(count_accepted(&d, 0), BigUint::zero());
    }

    #[test]
    fn matching_121() {
        let d = build_dfa(&basis("121"), Encoding::Horizontal, Mode::Matching, 10_000).unwrap();
        assert_eq!(small(&d, 8), vec![0, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn empty_basis_refused() {
        for enc in [Encoding::Horizontal, Encoding::Vertical] {
            assert!(matches!(build_dfa(&Basis::empty(), enc, Mode::Rgf, 100), Err(Error::NotSlotBounded(_))));
        }
    }

    #[test]
    fn matches_brute_force() {
        for b in ["112", "121", "12", "111 123", "212 213"] {
            let b = basis(b);
            for enc in [Encoding::Horizontal, Encoding::Vertical] {
                let Ok(d) = build_dfa(&b, enc, Mode::Rgf, 100_000) else { continue };
                let got = small(&d, 8);
                for (n, &c) in got.iter().enumerate().skip(1) {
                    assert_eq!(c as usize, generate_rgfs(n, &b).unwrap().len(), "{b} {enc} n={n}");
                }
                let m = minimize(&d);
                assert!(m.state_count() <= d.state_count());
                assert_eq!(small(&m, 8), got);
                assert_eq!(minimize(&m).state_count(), m.state_count());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = minimize(&build_dfa(&basis("121"), Encoding::Vertical, Mode::Rgf, 10_000).unwrap());
        let v = d.to_json();
        assert_eq!(Dfa::from_json(&v).unwrap(), d);
        assert_eq!(v["transitions"][0][1], "l{1,1}");
    }
}
