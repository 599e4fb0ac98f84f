//! Brute-force validation of the state abstraction: configurations that get
//! the same signature must have the same future.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::cayley::{Basis, CayleyPermutation};
use crate::encoding::vertical::Item;
use crate::encoding::{ConfigH, ConfigV, Encoding, Mode};

use super::horizontal::{self, StateH};
use super::vertical::{self, StateV};
use super::{Context, Letter, Signature};

/// All index subsets of `0..n` with at most `max` elements, each sorted.
pub(crate) fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, max, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max, 0, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    /// Distinct live configurations examined.
    pub configurations: usize,
    /// Distinct signatures among them.
    pub signatures: usize,
    /// Pairs of configurations with equal signatures whose futures were compared.
    pub pairs_checked: usize,
    /// Description of the first disagreement, if any.
    pub counterexample: Option<String>,
}

trait Raw: Clone + Eq + Hash + std::fmt::Debug {
    type Sig: Signature + std::fmt::Debug;

    fn initial() -> Self;
    fn letters(&self, mode: Mode) -> Vec<Letter>;
    fn apply(&self, letter: Letter, mode: Mode) -> Self;
    fn placed(&self) -> Vec<u32>;
    fn finished(&self) -> Option<CayleyPermutation>;
    fn signature(&self, ctx: &Context) -> Self::Sig;
    fn sig_letter(letter: Letter) -> <Self::Sig as Signature>::L;
}

impl Raw for ConfigH {
    type Sig = StateH;

    fn initial() -> Self {
        ConfigH::initial()
    }

    fn letters(&self, mode: Mode) -> Vec<Letter> {
        self.legal_letters(mode).into_iter().map(Letter::H).collect()
    }

    fn apply(&self, letter: Letter, mode: Mode) -> Self {
        let Letter::H(l) = letter else { unreachable!() };
        self.step(l, mode).expect("legal letter")
    }

    fn placed(&self) -> Vec<u32> {
        self.prefix()
    }

    fn finished(&self) -> Option<CayleyPermutation> {
        self.finish().ok()
    }

    fn signature(&self, ctx: &Context) -> StateH {
        StateH { subs: horizontal::subs_of(self, ctx) }
    }

    fn sig_letter(letter: Letter) -> crate::encoding::LetterH {
        let Letter::H(l) = letter else { unreachable!() };
        l
    }
}

impl Raw for ConfigV {
    type Sig = StateV;

    fn initial() -> Self {
        ConfigV::initial()
    }

    fn letters(&self, mode: Mode) -> Vec<Letter> {
        self.legal_letters(mode).into_iter().map(Letter::V).collect()
    }

    fn apply(&self, letter: Letter, mode: Mode) -> Self {
        let Letter::V(l) = letter else { unreachable!() };
        self.step(l, mode).expect("legal letter")
    }

    fn placed(&self) -> Vec<u32> {
        self.items()
            .iter()
            .filter_map(|i| match i {
                Item::Value(v) => Some(*v),
                Item::Slot => None,
            })
            .collect()
    }

    fn finished(&self) -> Option<CayleyPermutation> {
        self.finish().ok()
    }

    fn signature(&self, ctx: &Context) -> StateV {
        StateV { threshold: self.run_threshold(), started: self.current_max() > 0, subs: vertical::subs_of(self, ctx) }
    }

    fn sig_letter(letter: Letter) -> crate::encoding::LetterV {
        let Letter::V(l) = letter else { unreachable!() };
        l
    }
}

/// Accepted continuations of length at most `depth`.
fn futures<C: Raw>(c: &C, basis: &Basis, mode: Mode, depth: usize) -> BTreeSet<Vec<Letter>> {
    fn rec<C: Raw>(c: &C, basis: &Basis, mode: Mode, depth: usize, word: &mut Vec<Letter>, out: &mut BTreeSet<Vec<Letter>>) {
        if !basis.avoided_by_word(&c.placed()) {
            return;
        }
        if let Some(pi) = c.finished() {
            if pi.avoids(basis) {
                out.insert(word.clone());
            }
            return;
        }
        if word.len() == depth {
            return;
        }
        for l in c.letters(mode) {
            word.push(l);
            rec(&c.apply(l, mode), basis, mode, depth, word, out);
            word.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(c, basis, mode, depth, &mut Vec::new(), &mut out);
    out
}

const MAX_PAIRS: usize = 400;

fn check<C: Raw>(basis: &Basis, mode: Mode, ctx: &Context, depth: usize) -> SoundnessReport {
    // live configurations reachable in at most `depth` letters
    let mut seen: HashMap<C, ()> = HashMap::new();
    let mut layer = vec![C::initial()];
    let mut all = vec![C::initial()];
    seen.insert(C::initial(), ());
    let mut counterexample = None;
    for _ in 0..depth {
        let mut next_layer = Vec::new();
        for c in &layer {
            let sig = c.signature(ctx);
            for l in c.letters(mode) {
                let d = c.apply(l, mode);
                let raw_alive = basis.avoided_by_word(&d.placed());
                let stepped = sig.step(C::sig_letter(l), ctx);
                match (&stepped, raw_alive) {
                    (Some(s), true) if *s != d.signature(ctx) => {
                        counterexample.get_or_insert_with(|| {
                            format!("signature after {l} from {c:?} differs from the signature computed from scratch")
                        });
                    }
                    (Some(_), false) | (None, true) => {
                        counterexample.get_or_insert_with(|| {
                            format!("letter {l} from {c:?}: signature and configuration disagree on liveness")
                        });
                    }
                    _ => {}
                }
                if raw_alive && !seen.contains_key(&d) {
                    seen.insert(d.clone(), ());
                    next_layer.push(d.clone());
                    all.push(d);
                }
            }
        }
        layer = next_layer;
    }
    let mut groups: HashMap<C::Sig, Vec<usize>> = HashMap::new();
    for (i, c) in all.iter().enumerate() {
        groups.entry(c.signature(ctx)).or_default().push(i);
    }
    let signatures = groups.len();
    let mut groups: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
    groups.sort();
    let mut pairs = 0;
    let mut cache: HashMap<usize, BTreeSet<Vec<Letter>>> = HashMap::new();
    'outer: for g in &groups {
        let first = g[0];
        for &other in &g[1..] {
            if pairs == MAX_PAIRS || counterexample.is_some() {
                break 'outer;
            }
            pairs += 1;
            let (a, b) = (&all[first], &all[other]);
            if a.letters(mode) != b.letters(mode) {
                counterexample = Some(format!("{a:?} and {b:?} share a signature but not their legal letters"));
                break 'outer;
            }
            let fa = cache.entry(first).or_insert_with(|| futures(a, basis, mode, depth)).clone();
            let fb = cache.entry(other).or_insert_with(|| futures(b, basis, mode, depth)).clone();
            if fa != fb {
                let diff = fa.symmetric_difference(&fb).next().unwrap();
                let word: String = diff.iter().map(|l| l.to_string()).collect();
                counterexample = Some(format!("{a:?} and {b:?} share a signature but differ on continuation {word}"));
                break 'outer;
            }
        }
    }
    SoundnessReport { configurations: all.len(), signatures, pairs_checked: pairs, counterexample }
}

/// Compares configurations reachable in at most `depth` letters: equal
/// signatures must give equal legal letters and equal accepted
/// continuations of length at most `depth`, and stepping a signature must
/// agree with recomputing it from the stepped configuration.
pub fn check_state_soundness(basis: &Basis, encoding: Encoding, mode: Mode, depth: usize) -> SoundnessReport {
    let ctx = Context::new(basis, encoding, mode, usize::MAX);
    match encoding {
        Encoding::Horizontal => check::<ConfigH>(basis, mode, &ctx, depth),
        Encoding::Vertical => check::<ConfigV>(basis, mode, &ctx, depth),
    }
}
