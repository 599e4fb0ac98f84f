use std::collections::BTreeSet;

use crate::encoding::vertical::{letters_for, Item, KindV, LetterV};
use crate::encoding::ConfigV;

use super::{standardised, Context, Need, Outcome, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum VItem {
    Point(u32),
    Slot,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct SubV {
    /// Kept points (standardised values) and all slots, left to right.
    pub items: Vec<VItem>,
    /// The largest kept value equals the current maximum, so a later
    /// non-increase letter repeats it.
    pub top: bool,
}

impl SubV {
    fn word(&self) -> Vec<u32> {
        self.items
            .iter()
            .filter_map(|i| match i {
                VItem::Point(v) => Some(*v),
                VItem::Slot => None,
            })
            .collect()
    }

    fn apply(&self, letter: LetterV, keep: bool) -> SubV {
        let top = self.top && !letter.increase;
        let pos = self
            .items
            .iter()
            .enumerate()
            .filter(|(_, i)| matches!(i, VItem::Slot))
            .nth(letter.slot - 1)
            .map(|(p, _)| p)
            .expect("letter index checked against the slot count");
        let (left, right) = letter.kind.splits();
        let mut cells = Vec::with_capacity(3);
        if left {
            cells.push(VItem::Slot);
        }
        if keep {
            let max = self.word().into_iter().max().unwrap_or(0);
            cells.push(VItem::Point(if top { max } else { max + 1 }));
        }
        if right {
            cells.push(VItem::Slot);
        }
        let mut items = self.items.clone();
        items.splice(pos..=pos, cells);
        SubV { items, top: top || keep }
    }
}

impl SubV {
    fn meets(&self, need: &Need) -> bool {
        let mut slot_in_gap = vec![false];
        for i in &self.items {
            match i {
                VItem::Point(_) => slot_in_gap.push(false),
                VItem::Slot => *slot_in_gap.last_mut().expect("nonempty") = true,
            }
        }
        need.gaps.iter().all(|&g| slot_in_gap[g]) && (!need.top || self.top)
    }
}

/// The placed parts an occurrence of `beta` can have: all points below some
/// value `t`, plus the leftmost few points of value `t` (copies of a value
/// are placed left to right). The other points come later, each in a gap
/// between placed points, and those of value `t` need `t` to still be the
/// current maximum.
pub(crate) fn placed_parts(beta: &[u32]) -> Vec<(Vec<u32>, Need)> {
    let mut order: Vec<usize> = (0..beta.len()).collect();
    order.sort_by_key(|&i| (beta[i], i));
    (0..beta.len())
        .map(|size| {
            let mut placed = vec![false; beta.len()];
            for &i in &order[..size] {
                placed[i] = true;
            }
            let values: Vec<u32> = (0..beta.len()).filter(|&i| placed[i]).map(|i| beta[i]).collect();
            let t = values.iter().max().copied();
            let mut gaps = BTreeSet::new();
            let mut top = false;
            for u in (0..beta.len()).filter(|&u| !placed[u]) {
                gaps.insert(placed[..u].iter().filter(|&&p| p).count());
                top |= Some(beta[u]) == t;
            }
            (standardised(&values), Need { gaps: gaps.into_iter().collect(), levels: Vec::new(), top })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct StateV {
    pub threshold: usize,
    pub started: bool,
    /// Sorted and deduplicated; always includes the sub-configuration
    /// keeping no points.
    pub subs: Vec<SubV>,
}

impl StateV {
    pub fn initial() -> StateV {
        StateV { threshold: 1, started: false, subs: vec![SubV { items: vec![VItem::Slot], top: false }] }
    }

    fn slot_count(&self) -> usize {
        self.subs[0].items.iter().filter(|i| matches!(i, VItem::Slot)).count()
    }
}

fn judge(sub: SubV, ctx: &Context) -> Outcome<SubV> {
    let word = sub.word();
    ctx.judge(&word, sub, SubV::meets)
}

pub(crate) fn step_subs(subs: &[SubV], letter: LetterV, ctx: &Context) -> Option<Vec<SubV>> {
    let mut out = Vec::with_capacity(2 * subs.len());
    for sub in subs {
        for keep in [false, true] {
            match judge(sub.apply(letter, keep), ctx) {
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
pub(crate) fn subs_of(config: &ConfigV, ctx: &Context) -> Vec<SubV> {
    let items = config.items();
    let positions: Vec<usize> = (0..items.len()).filter(|&i| matches!(items[i], Item::Value(_))).collect();
    let mut out = Vec::new();
    for subset in super::soundness::subsets(positions.len(), ctx.max_keep) {
        let kept: Vec<usize> = subset.iter().map(|&i| positions[i]).collect();
        let values: Vec<u32> = kept
            .iter()
            .map(|&p| match items[p] {
                Item::Value(v) => v,
                Item::Slot => unreachable!(),
            })
            .collect();
        let word = standardised(&values);
        if !ctx.viable.contains_key(&word) {
            continue;
        }
        let mut next = word.iter();
        let sub_items = items
            .iter()
            .enumerate()
            .filter_map(|(p, it)| match it {
                Item::Slot => Some(VItem::Slot),
                Item::Value(_) if kept.contains(&p) => Some(VItem::Point(*next.next().unwrap())),
                Item::Value(_) => None,
            })
            .collect();
        let top = values.iter().max().is_some_and(|&m| m == config.current_max());
        if let Outcome::Keep(sub) = judge(SubV { items: sub_items, top }, ctx) {
            out.push(sub);
        }
    }
    out.sort();
    out.dedup();
    out
}

impl Signature for StateV {
    type L = LetterV;

    fn letters(&self, ctx: &Context) -> Vec<LetterV> {
        letters_for(self.slot_count(), self.threshold, self.started, ctx.mode)
    }

    fn step(&self, letter: LetterV, ctx: &Context) -> Option<StateV> {
        let subs = step_subs(&self.subs, letter, ctx)?;
        let next = StateV { threshold: letter.kind.threshold_after(letter.slot), started: true, subs };
        (next.slot_count() <= ctx.slot_bound).then_some(next)
    }

    fn is_accepting(&self) -> bool {
        self.started && self.slot_count() == 0
    }

    fn slot_count(&self) -> usize {
        StateV::slot_count(self)
    }

    fn completion_letters(&self, ctx: &Context) -> Vec<LetterV> {
        self.letters(ctx).into_iter().filter(|l| l.kind == KindV::F).collect()
    }
}
