//! Vertical insertion encoding: values are inserted smallest first, and
//! within one value leftmost occurrence first.
//!
//! Slots are maximal gaps of positions not yet filled. Inserting into a slot
//! with `l` (written `ℓ` in print) keeps the gap to the right of the new
//! point, `r` keeps it to the left, `m` keeps both and `f` fills it. The flag
//! says whether the inserted value is one more than the previous one.
//!
//! Occurrences of one value must be inserted left to right, so a letter
//! without increase must land strictly right of the previous point. This is
//! tracked as a minimum slot index, the run threshold.

use std::fmt;
use std::str::FromStr;

use crate::cayley::CayleyPermutation;
use crate::encoding::{format_word, parse_letters, Mode};
use crate::error::{Error, IllegalReason, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindV {
    L,
    M,
    R,
    F,
}

impl KindV {
    pub const ALL: [KindV; 4] = [KindV::L, KindV::M, KindV::R, KindV::F];

    fn symbol(self) -> char {
        match self {
            KindV::L => 'l',
            KindV::M => 'm',
            KindV::R => 'r',
            KindV::F => 'f',
        }
    }

    /// Whether a gap survives (left of, right of) the inserted point.
    pub fn splits(self) -> (bool, bool) {
        match self {
            KindV::L => (false, true),
            KindV::M => (true, true),
            KindV::R => (true, false),
            KindV::F => (false, false),
        }
    }

    /// Minimum slot index for the next same-value letter after inserting
    /// into slot `i`.
    pub fn threshold_after(self, i: usize) -> usize {
        match self {
            KindV::L | KindV::F => i,
            KindV::M | KindV::R => i + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterV {
    pub kind: KindV,
    /// 1-based, leftmost slot first.
    pub slot: usize,
    /// The inserted value is one larger than the previous one.
    pub increase: bool,
}

impl LetterV {
    pub fn new(kind: KindV, slot: usize, increase: bool) -> Self {
        LetterV { kind, slot, increase }
    }

    /// Allowed in the RGF alphabet: `f{1,1}`, `l{1,1}` or any non-increase.
    pub fn is_rgf_letter(self) -> bool {
        !self.increase || (self.slot == 1 && matches!(self.kind, KindV::F | KindV::L))
    }
}

impl fmt::Display for LetterV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{},{}}}", self.kind.symbol(), self.slot, self.increase as u8)
    }
}

impl FromStr for LetterV {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_word_v(s)?.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::invalid(format!("expected a single letter, got {s:?}"))),
        }
    }
}

/// Parses `"l{1,1}r{1,0}f{1,1}"`; `ℓ` is accepted for `l`.
pub fn parse_word_v(s: &str) -> Result<Vec<LetterV>> {
    parse_letters(s)?
        .into_iter()
        .map(|(c, slot, increase)| {
            let kind = match c {
                'l' | 'ℓ' => KindV::L,
                'm' => KindV::M,
                'r' => KindV::R,
                'f' => KindV::F,
                other => return Err(Error::invalid(format!("unknown vertical letter {other:?}"))),
            };
            Ok(LetterV { kind, slot, increase })
        })
        .collect()
}

pub fn format_word_v(word: &[LetterV]) -> String {
    format_word(word)
}

/// One position of a vertical configuration: a placed value or a gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Item {
    Value(u32),
    Slot,
}

/// Whether `letter` may be applied to a configuration with `slots` slots,
/// the given run threshold, and at least one point placed iff `started`.
pub(crate) fn letter_allowed(
    slots: usize,
    threshold: usize,
    started: bool,
    letter: LetterV,
    mode: Mode,
) -> std::result::Result<(), IllegalReason> {
    if letter.slot == 0 || letter.slot > slots {
        return Err(IllegalReason::IndexOutOfRange);
    }
    if !started && !letter.increase {
        return Err(IllegalReason::FirstLetterFlag);
    }
    if !letter.increase && letter.slot < threshold {
        return Err(IllegalReason::RunOrder);
    }
    if mode != Mode::Cayley && !letter.is_rgf_letter() {
        return Err(IllegalReason::ModeViolation);
    }
    Ok(())
}

pub(crate) fn letters_for(slots: usize, threshold: usize, started: bool, mode: Mode) -> Vec<LetterV> {
    let mut out = Vec::new();
    for slot in 1..=slots {
        for kind in KindV::ALL {
            for increase in [false, true] {
                let letter = LetterV { kind, slot, increase };
                if letter_allowed(slots, threshold, started, letter, mode).is_ok() {
                    out.push(letter);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigV {
    items: Vec<Item>,
    current_max: u32,
    run_threshold: usize,
}

impl Default for ConfigV {
    fn default() -> Self {
        ConfigV::initial()
    }
}

impl ConfigV {
    pub fn initial() -> Self {
        ConfigV { items: vec![Item::Slot], current_max: 0, run_threshold: 1 }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn current_max(&self) -> u32 {
        self.current_max
    }

    pub fn run_threshold(&self) -> usize {
        self.run_threshold
    }

    pub fn slot_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Slot)).count()
    }

    fn check(&self, letter: LetterV, mode: Mode) -> std::result::Result<usize, IllegalReason> {
        letter_allowed(self.slot_count(), self.run_threshold, self.current_max > 0, letter, mode)?;
        Ok(self
            .items
            .iter()
            .enumerate()
            .filter(|(_, it)| matches!(it, Item::Slot))
            .nth(letter.slot - 1)
            .map(|(p, _)| p)
            .expect("index checked"))
    }

    /// Applies `letter`. Matching mode is treated like RGF mode.
    pub fn step(&self, letter: LetterV, mode: Mode) -> Result<ConfigV> {
        let pos = self
            .check(letter, mode)
            .map_err(|reason| Error::IllegalLetter { letter: letter.to_string(), reason })?;
        let value = self.current_max + letter.increase as u32;
        let (left, right) = letter.kind.splits();
        let mut cells = Vec::with_capacity(3);
        if left {
            cells.push(Item::Slot);
        }
        cells.push(Item::Value(value));
        if right {
            cells.push(Item::Slot);
        }
        let mut items = self.items.clone();
        items.splice(pos..=pos, cells);
        Ok(ConfigV {
            items,
            current_max: value,
            run_threshold: letter.kind.threshold_after(letter.slot),
        })
    }

    pub fn legal_letters(&self, mode: Mode) -> Vec<LetterV> {
        letters_for(self.slot_count(), self.run_threshold, self.current_max > 0, mode)
    }

    pub fn finish(&self) -> Result<CayleyPermutation> {
        let mut values = Vec::with_capacity(self.items.len());
        for item in &self.items {
            match item {
                Item::Value(v) => values.push(*v),
                Item::Slot => return Err(Error::DanglingSlots(self.slot_count())),
            }
        }
        CayleyPermutation::new(values)
    }
}

/// The vertical insertion encoding of `pi`.
pub fn encode_v(pi: &CayleyPermutation) -> Vec<LetterV> {
    let values = pi.values();
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| (values[p], p));
    let mut filled = vec![false; n];
    let mut prev = 0;
    let mut word = Vec::with_capacity(n);
    for p in order {
        // index of the gap containing p: count gaps starting left of it
        let mut slot = 1;
        let mut q = 0;
        while q < p {
            if !filled[q] && (q == 0 || filled[q - 1]) {
                slot += 1;
            }
            q += 1;
        }
        // the gap containing p was counted if it starts before p
        let starts_at_p = p == 0 || filled[p - 1];
        if !starts_at_p {
            slot -= 1;
        }
        let left = !starts_at_p;
        let right = p + 1 < n && !filled[p + 1];
        let kind = match (left, right) {
            (false, true) => KindV::L,
            (true, true) => KindV::M,
            (true, false) => KindV::R,
            (false, false) => KindV::F,
        };
        filled[p] = true;
        word.push(LetterV { kind, slot, increase: values[p] != prev });
        prev = values[p];
    }
    word
}

pub fn decode_v(word: &[LetterV], mode: Mode) -> Result<CayleyPermutation> {
    let mut c = ConfigV::initial();
    for &letter in word {
        c = c.step(letter, mode)?;
    }
    c.finish()
}

/// True iff every letter is `f{1,1}`, `l{1,1}` or a non-increase letter.
pub fn conforms_v(word: &[LetterV]) -> bool {
    word.iter().all(|l| l.is_rgf_letter())
}

pub fn max_slots_v(pi: &CayleyPermutation) -> usize {
    let mut c = ConfigV::initial();
    let mut best = c.slot_count();
    for letter in encode_v(pi) {
        c = c.step(letter, Mode::Cayley).expect("encoding replays");
        best = best.max(c.slot_count());
    }
    best
}
