use std::collections::BTreeSet;

use crate::encoding::horizontal::{letters_for_profile, KindH, LetterH};

use super::{standardised, Context, Need, Outcome, Signature};

/// A stack cell of a horizontal sub-configuration, bottom to top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum HCell {
    New,
    /// A level holding kept points, with or without a repeating slot.
    Level(bool),
    /// The repeating slot of a level none of whose points are kept.
    Hidden,
}

impl HCell {
    fn is_slot(self) -> bool {
        matches!(self, HCell::New | HCell::Level(true) | HCell::Hidden)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct SubH {
    /// Kept points left to right, as ranks among the kept levels.
    pub word: Vec<u32>,
    pub stack: Vec<HCell>,
}

impl SubH {
    fn slot_position(&self, slot: usize) -> usize {
        self.stack
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_slot())
            .nth(slot - 1)
            .map(|(p, _)| p)
            .expect("letter index checked against the profile")
    }

    fn levels_below(&self, pos: usize) -> u32 {
        self.stack[..pos].iter().filter(|c| matches!(c, HCell::Level(_))).count() as u32
    }

    /// The letter applied without keeping the new point.
    fn hidden(&self, letter: LetterH) -> SubH {
        let pos = self.slot_position(letter.slot);
        let mut next = self.clone();
        match self.stack[pos] {
            HCell::New => {
                let (below, above) = splits(letter.kind);
                let mut cells = Vec::with_capacity(3);
                if below {
                    cells.push(HCell::New);
                }
                if letter.repeat {
                    cells.push(HCell::Hidden);
                }
                if above {
                    cells.push(HCell::New);
                }
                next.stack.splice(pos..=pos, cells);
            }
            HCell::Level(_) => next.stack[pos] = HCell::Level(letter.repeat),
            HCell::Hidden => {
                if !letter.repeat {
                    next.stack.remove(pos);
                }
            }
        }
        next
    }

    /// The letter applied keeping the new point.
    fn kept(&self, letter: LetterH) -> SubH {
        let pos = self.slot_position(letter.slot);
        let mut next = self.clone();
        let rank = self.levels_below(pos) + 1;
        match self.stack[pos] {
            HCell::Level(_) => {
                next.stack[pos] = HCell::Level(letter.repeat);
            }
            cell => {
                // a new level between the kept ones
                for v in &mut next.word {
                    if *v >= rank {
                        *v += 1;
                    }
                }
                let (below, above) = if cell == HCell::New { splits(letter.kind) } else { (false, false) };
                let mut cells = Vec::with_capacity(3);
                if below {
                    cells.push(HCell::New);
                }
                cells.push(HCell::Level(letter.repeat));
                if above {
                    cells.push(HCell::New);
                }
                next.stack.splice(pos..=pos, cells);
            }
        }
        next.word.push(rank);
        next
    }
}

impl SubH {
    fn meets(&self, need: &Need) -> bool {
        let mut slot_in_gap = vec![false];
        let mut repeating = Vec::new();
        for c in &self.stack {
            match c {
                HCell::Level(r) => {
                    repeating.push(*r);
                    slot_in_gap.push(false);
                }
                _ => *slot_in_gap.last_mut().expect("nonempty") = true,
            }
        }
        need.gaps.iter().all(|&g| slot_in_gap[g]) && need.levels.iter().all(|&l| repeating[l as usize - 1])
    }
}

/// Each proper prefix of `beta` as the placed part of an occurrence: the
/// other points come later, each on a kept level or in a gap between levels.
pub(crate) fn placed_parts(beta: &[u32]) -> Vec<(Vec<u32>, Need)> {
    (0..beta.len())
        .map(|len| {
            let placed = &beta[..len];
            let mut values = placed.to_vec();
            values.sort_unstable();
            values.dedup();
            let mut gaps = BTreeSet::new();
            let mut levels = BTreeSet::new();
            for v in &beta[len..] {
                match values.binary_search(v) {
                    Ok(i) => levels.insert(i as u32 + 1),
                    Err(g) => gaps.insert(g),
                };
            }
            let need = Need { gaps: gaps.into_iter().collect(), levels: levels.into_iter().collect(), top: false };
            (standardised(placed), need)
        })
        .collect()
}

fn splits(kind: KindH) -> (bool, bool) {
    match kind {
        KindH::U => (true, false),
        KindH::M => (true, true),
        KindH::D => (false, true),
        KindH::F => (false, false),
    }
}

/// Sorted, deduplicated sub-configurations; the one keeping no points is
/// always present and carries the slot profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct StateH {
    pub subs: Vec<SubH>,
}

impl StateH {
    pub fn initial() -> StateH {
        StateH { subs: vec![SubH { word: Vec::new(), stack: vec![HCell::New] }] }
    }

    fn profile(&self) -> Vec<bool> {
        self.subs[0].stack.iter().filter(|c| c.is_slot()).map(|c| *c == HCell::New).collect()
    }

    fn slot_count(&self) -> usize {
        self.subs[0].stack.iter().filter(|c| c.is_slot()).count()
    }
}

fn judge(sub: SubH, ctx: &Context) -> Outcome<SubH> {
    let word = sub.word.clone();
    ctx.judge(&word, sub, SubH::meets)
}

/// Applies a letter to a set of sub-configurations.
pub(crate) fn step_subs(subs: &[SubH], letter: LetterH, ctx: &Context) -> Option<Vec<SubH>> {
    let mut out = Vec::with_capacity(2 * subs.len());
    for sub in subs {
        for next in [sub.hidden(letter), sub.kept(letter)] {
            match judge(next, ctx) {
                Outcome::Keep(s) => out.push(s),
                Outcome::Drop => {}
                Outcome::Dead => return None,
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Sub-configurations of a raw configuration, computed from scratch.
pub(crate) fn subs_of(config: &crate::encoding::ConfigH, ctx: &Context) -> Vec<SubH> {
    let (cells, placed) = config.raw();
    let mut out = Vec::new();
    for subset in super::soundness::subsets(placed.len(), ctx.max_keep) {
        let kept_ids: Vec<u32> = subset.iter().map(|&i| placed[i]).collect();
        let mut stack = Vec::new();
        let mut rank_of = std::collections::HashMap::new();
        for cell in &cells {
            match cell {
                None => stack.push(HCell::New),
                Some((id, repeating)) if kept_ids.contains(id) => {
                    rank_of.insert(*id, rank_of.len() as u32 + 1);
                    stack.push(HCell::Level(*repeating));
                }
                Some((_, true)) => stack.push(HCell::Hidden),
                Some((_, false)) => {}
            }
        }
        let word: Vec<u32> = kept_ids.iter().map(|id| rank_of[id]).collect();
        if let Outcome::Keep(sub) = judge(SubH { word, stack }, ctx) {
            out.push(sub);
        }
    }
    out.sort();
    out.dedup();
    out
}

impl Signature for StateH {
    type L = LetterH;

    fn letters(&self, ctx: &Context) -> Vec<LetterH> {
        letters_for_profile(&self.profile(), ctx.mode)
    }

    fn step(&self, letter: LetterH, ctx: &Context) -> Option<StateH> {
        let subs = step_subs(&self.subs, letter, ctx)?;
        let next = StateH { subs };
        (next.slot_count() <= ctx.slot_bound).then_some(next)
    }

    fn is_accepting(&self) -> bool {
        self.slot_count() == 0
    }

    fn slot_count(&self) -> usize {
        StateH::slot_count(self)
    }

    fn completion_letters(&self, ctx: &Context) -> Vec<LetterH> {
        // a repeating fill keeps the slot, except on a New slot in matching
        // mode where it is the only way to fill it
        let profile = self.profile();
        self.letters(ctx)
            .into_iter()
            .filter(|l| l.kind == KindH::F && (!l.repeat || profile[l.slot - 1]))
            .collect()
    }
}
