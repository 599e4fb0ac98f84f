//! Horizontal insertion encoding: points are placed left to right.
//!
//! A configuration keeps a vertical stack, bottom to top, of value levels and
//! new slots. A new slot (`◊`) stands for a gap of values not seen yet; a
//! level carrying a repeating slot (`◊̄`) promises another occurrence of that
//! value. Letters `u`, `m`, `d` split a new slot around the inserted value
//! (new slot below, both, above), `f` fills a slot without creating new ones.
//! The flag is 1 iff the inserted value occurs again later.

use std::fmt;
use std::str::FromStr;

use crate::cayley::{standardise, CayleyPermutation};
use crate::encoding::{format_word, parse_letters, Mode};
use crate::error::{Error, IllegalReason, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindH {
    U,
    M,
    D,
    F,
}

impl KindH {
    pub const ALL: [KindH; 4] = [KindH::U, KindH::M, KindH::D, KindH::F];

    fn symbol(self) -> char {
        match self {
            KindH::U => 'u',
            KindH::M => 'm',
            KindH::D => 'd',
            KindH::F => 'f',
        }
    }

    /// New slots left (below, above) the inserted value.
    fn splits(self) -> (bool, bool) {
        match self {
            KindH::U => (true, false),
            KindH::M => (true, true),
            KindH::D => (false, true),
            KindH::F => (false, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterH {
    pub kind: KindH,
    /// 1-based, bottom-most slot first.
    pub slot: usize,
    /// More occurrences of the inserted value follow.
    pub repeat: bool,
}

impl LetterH {
    pub fn new(kind: KindH, slot: usize, repeat: bool) -> Self {
        LetterH { kind, slot, repeat }
    }
}

impl fmt::Display for LetterH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{},{}}}", self.kind.symbol(), self.slot, self.repeat as u8)
    }
}

/// Parses a whole word such as `"m{1,1}u{3,1}f{2,0}"`.
pub fn parse_word_h(s: &str) -> Result<Vec<LetterH>> {
    parse_letters(s)?
        .into_iter()
        .map(|(c, slot, repeat)| {
            let kind = match c {
                'u' => KindH::U,
                'm' => KindH::M,
                'd' => KindH::D,
                'f' => KindH::F,
                other => return Err(Error::invalid(format!("unknown horizontal letter {other:?}"))),
            };
            Ok(LetterH { kind, slot, repeat })
        })
        .collect()
}

pub fn format_word_h(word: &[LetterH]) -> String {
    format_word(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cell {
    New,
    Level { id: u32, repeating: bool },
}

/// Kind of a slot as seen from the outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotH {
    New,
    /// Repeating slot at the given level (1-based rank among placed values).
    Repeat(u32),
}

/// Whether `letter` may go into a slot of the given kind under `mode`.
pub(crate) fn letter_allowed(is_new: bool, letter: LetterH, mode: Mode) -> std::result::Result<(), IllegalReason> {
    if !is_new && letter.kind != KindH::F {
        return Err(IllegalReason::RepeatingSlot);
    }
    let allowed = match mode {
        Mode::Cayley => true,
        Mode::Rgf => matches!(letter.kind, KindH::D | KindH::F),
        Mode::Matching => {
            if is_new {
                matches!(letter.kind, KindH::D | KindH::F) && letter.repeat
            } else {
                !letter.repeat
            }
        }
    };
    if allowed {
        Ok(())
    } else {
        Err(IllegalReason::ModeViolation)
    }
}

/// Slot kinds bottom to top: `true` for a new slot.
pub(crate) fn letters_for_profile(profile: &[bool], mode: Mode) -> Vec<LetterH> {
    let mut out = Vec::new();
    for (i, &is_new) in profile.iter().enumerate() {
        for kind in KindH::ALL {
            for repeat in [false, true] {
                let letter = LetterH { kind, slot: i + 1, repeat };
                if letter_allowed(is_new, letter, mode).is_ok() {
                    out.push(letter);
                }
            }
        }
    }
    out
}

/// Stack cells and placed level ids, as exposed by [`ConfigH::raw`].
pub(crate) type RawConfig<'a> = (Vec<Option<(u32, bool)>>, &'a [u32]);

/// A configuration of a horizontal evolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigH {
    // level ids of the placed points, left to right
    placed: Vec<u32>,
    // bottom to top
    stack: Vec<Cell>,
    next_id: u32,
}

impl Default for ConfigH {
    fn default() -> Self {
        ConfigH::initial()
    }
}

impl ConfigH {
    /// The single new slot every evolution starts from.
    pub fn initial() -> Self {
        ConfigH { placed: Vec::new(), stack: vec![Cell::New], next_id: 0 }
    }

    /// Slots bottom to top.
    pub fn slots(&self) -> Vec<SlotH> {
        let mut level = 0;
        let mut out = Vec::new();
        for cell in &self.stack {
            match cell {
                Cell::New => out.push(SlotH::New),
                Cell::Level { repeating, .. } => {
                    level += 1;
                    if *repeating {
                        out.push(SlotH::Repeat(level));
                    }
                }
            }
        }
        out
    }

    pub fn slot_count(&self) -> usize {
        self.stack
            .iter()
            .filter(|c| matches!(c, Cell::New | Cell::Level { repeating: true, .. }))
            .count()
    }

    pub fn placed_len(&self) -> usize {
        self.placed.len()
    }

    /// The placed points, standardised.
    pub fn prefix(&self) -> Vec<u32> {
        let rank = self.level_ranks();
        self.placed.iter().map(|id| rank[*id as usize]).collect()
    }

    fn level_ranks(&self) -> Vec<u32> {
        let mut rank = vec![0; self.next_id as usize];
        let mut r = 0;
        for cell in &self.stack {
            if let Cell::Level { id, .. } = cell {
                r += 1;
                rank[*id as usize] = r;
            }
        }
        rank
    }

    /// Stack position of slot `slot` (1-based).
    fn slot_position(&self, slot: usize) -> Option<usize> {
        self.stack
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Cell::New | Cell::Level { repeating: true, .. }))
            .nth(slot.checked_sub(1)?)
            .map(|(p, _)| p)
    }

    fn check(&self, letter: LetterH, mode: Mode) -> std::result::Result<usize, IllegalReason> {
        let pos = self.slot_position(letter.slot).ok_or(IllegalReason::IndexOutOfRange)?;
        letter_allowed(matches!(self.stack[pos], Cell::New), letter, mode)?;
        Ok(pos)
    }

    /// Applies `letter`, checking it against `mode`'s alphabet.
    pub fn step(&self, letter: LetterH, mode: Mode) -> Result<ConfigH> {
        let pos = self
            .check(letter, mode)
            .map_err(|reason| Error::IllegalLetter { letter: letter.to_string(), reason })?;
        let mut next = self.clone();
        match self.stack[pos] {
            Cell::New => {
                let id = next.next_id;
                next.next_id += 1;
                let (below, above) = letter.kind.splits();
                let mut cells = Vec::with_capacity(3);
                if below {
                    cells.push(Cell::New);
                }
                cells.push(Cell::Level { id, repeating: letter.repeat });
                if above {
                    cells.push(Cell::New);
                }
                next.stack.splice(pos..=pos, cells);
                next.placed.push(id);
            }
            Cell::Level { id, .. } => {
                next.stack[pos] = Cell::Level { id, repeating: letter.repeat };
                next.placed.push(id);
            }
        }
        Ok(next)
    }

    /// Every letter that may be applied in `mode`.
    pub fn legal_letters(&self, mode: Mode) -> Vec<LetterH> {
        let profile: Vec<bool> = self.slots().iter().map(|s| *s == SlotH::New).collect();
        letters_for_profile(&profile, mode)
    }

    /// Stack cells bottom to top as `(level id, repeating)`, `None` for a
    /// new slot, together with the level ids of the placed points.
    pub(crate) fn raw(&self) -> RawConfig<'_> {
        let cells = self
            .stack
            .iter()
            .map(|c| match c {
                Cell::New => None,
                Cell::Level { id, repeating } => Some((*id, *repeating)),
            })
            .collect();
        (cells, &self.placed)
    }

    /// The finished permutation, once no slots remain.
    pub fn finish(&self) -> Result<CayleyPermutation> {
        match self.slot_count() {
            0 => standardise(&self.prefix()),
            s => Err(Error::DanglingSlots(s)),
        }
    }
}

/// The horizontal insertion encoding of `pi`.
pub fn encode_h(pi: &CayleyPermutation) -> Vec<LetterH> {
    let values = pi.values();
    let m = pi.height() as usize;
    let mut remaining = pi.occurrence_counts();
    let mut seen = vec![false; m + 2];
    let mut word = Vec::with_capacity(values.len());
    for &v in values {
        let v = v as usize;
        // slots below v's own slot: one per unseen run and one per repeating level
        let mut slot = 1;
        let mut u = 1;
        while u < v {
            if seen[u] {
                if remaining[u] > 0 {
                    slot += 1;
                }
                u += 1;
            } else {
                while u <= m && !seen[u] {
                    u += 1;
                }
                if u > v {
                    // v lies inside this unseen run
                    break;
                }
                slot += 1;
            }
        }
        remaining[v] -= 1;
        let repeat = remaining[v] > 0;
        let kind = if seen[v] {
            KindH::F
        } else {
            let gap_below = v > 1 && !seen[v - 1];
            let gap_above = v < m && !seen[v + 1];
            match (gap_below, gap_above) {
                (true, true) => KindH::M,
                (true, false) => KindH::U,
                (false, true) => KindH::D,
                (false, false) => KindH::F,
            }
        };
        seen[v] = true;
        word.push(LetterH { kind, slot, repeat });
    }
    word
}

/// Replays `word` from the initial configuration.
pub fn decode_h(word: &[LetterH], mode: Mode) -> Result<CayleyPermutation> {
    let mut c = ConfigH::initial();
    for &letter in word {
        c = c.step(letter, mode)?;
    }
    c.finish()
}

/// True iff every letter of `word` is in `mode`'s alphabet for the slot it
/// is applied to (and the word is a valid evolution at all).
pub fn conforms_h(word: &[LetterH], mode: Mode) -> bool {
    let mut c = ConfigH::initial();
    for &letter in word {
        match c.step(letter, mode) {
            Ok(next) => c = next,
            Err(_) => return false,
        }
    }
    true
}

/// Maximum number of slots over the configurations of the evolution of `pi`.
pub fn max_slots_h(pi: &CayleyPermutation) -> usize {
    let mut c = ConfigH::initial();
    let mut best = c.slot_count();
    for letter in encode_h(pi) {
        c = c.step(letter, Mode::Cayley).expect("encoding replays");
        best = best.max(c.slot_count());
    }
    best
}

impl FromStr for LetterH {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_word_h(s)?.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::invalid(format!("expected a single letter, got {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(s: &str) -> CayleyPermutation {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Vec<LetterH> {
        parse_word_h(s).unwrap()
    }

    #[test]
    fn worked_encodings() {
        assert_eq!(encode_h(&cp("242143")), w("m{1,1}u{3,1}f{2,0}f{1,0}f{2,0}f{1,0}"));
        assert_eq!(encode_h(&cp("121331")), w("d{1,1}d{2,0}f{1,1}f{2,1}f{2,0}f{1,0}"));
        assert_eq!(encode_h(&cp("122313")), w("d{1,1}d{2,1}f{2,0}f{2,1}f{1,0}f{1,0}"));
        assert_eq!(encode_h(&cp("1")), w("f{1,0}"));
    }

    #[test]
    fn worked_decodings() {
        assert_eq!(decode_h(&w("m{1,1}u{3,1}f{2,0}f{1,0}f{2,0}f{1,0}"), Mode::Cayley).unwrap(), cp("242143"));
        assert_eq!(decode_h(&w("d{1,1}d{2,0}f{1,1}f{2,1}f{2,0}f{1,0}"), Mode::Rgf).unwrap(), cp("121331"));
        assert_eq!(decode_h(&w("d{1,1}d{2,1}f{2,0}f{2,1}f{1,0}f{1,0}"), Mode::Matching).unwrap(), cp("122313"));
        assert_eq!(decode_h(&w("f{1,0}"), Mode::Rgf).unwrap(), cp("1"));
        assert!(matches!(decode_h(&w("d{1,1}"), Mode::Rgf), Err(Error::DanglingSlots(2))));
        assert!(matches!(decode_h(&[], Mode::Rgf), Err(Error::DanglingSlots(1))));
    }

    #[test]
    fn steps() {
        let c = ConfigH::initial().step(w("m{1,1}")[0], Mode::Cayley).unwrap();
        assert_eq!(c.slots(), vec![SlotH::New, SlotH::Repeat(1), SlotH::New]);
        assert_eq!(c.prefix(), vec![1]);

        let c = ConfigH::initial().step(w("d{1,1}")[0], Mode::Rgf).unwrap();
        let c = c.step(w("d{2,0}")[0], Mode::Rgf).unwrap();
        assert_eq!(c.slots(), vec![SlotH::Repeat(1), SlotH::New]);
        assert_eq!(c.prefix(), vec![1, 2]);

        let c = ConfigH::initial().step(w("f{1,0}")[0], Mode::Rgf).unwrap();
        assert_eq!(c.slot_count(), 0);
        assert_eq!(c.prefix(), vec![1]);
    }

    #[test]
    fn illegal_letters() {
        let c = ConfigH::initial().step(w("f{1,1}")[0], Mode::Cayley).unwrap();
        let err = |l: &str, mode| match c.step(w(l)[0], mode) {
            Err(Error::IllegalLetter { reason, .. }) => reason,
            other => panic!("expected illegal letter, got {other:?}"),
        };
        assert_eq!(err("d{1,0}", Mode::Cayley), IllegalReason::RepeatingSlot);
        assert_eq!(err("f{2,0}", Mode::Cayley), IllegalReason::IndexOutOfRange);
        assert_eq!(err("f{1,1}", Mode::Matching), IllegalReason::ModeViolation);
        let init = ConfigH::initial();
        assert!(init.step(w("u{1,0}")[0], Mode::Rgf).is_err());
        assert!(init.step(w("d{1,0}")[0], Mode::Matching).is_err());
    }

    #[test]
    fn legal_letter_sets() {
        let init = ConfigH::initial();
        assert_eq!(init.legal_letters(Mode::Rgf), w("d{1,0}d{1,1}f{1,0}f{1,1}"));
        assert_eq!(init.legal_letters(Mode::Matching), w("d{1,1}f{1,1}"));
        assert_eq!(init.legal_letters(Mode::Cayley).len(), 8);
        let done = init.step(w("f{1,0}")[0], Mode::Rgf).unwrap();
        assert!(done.legal_letters(Mode::Cayley).is_empty());
    }

    #[test]
    fn conformance() {
        assert!(conforms_h(&encode_h(&cp("121331")), Mode::Rgf));
        assert!(!conforms_h(&encode_h(&cp("242143")), Mode::Rgf));
        assert!(conforms_h(&w("f{1,0}"), Mode::Rgf));
        assert!(conforms_h(&encode_h(&cp("122313")), Mode::Matching));
        assert!(!conforms_h(&encode_h(&cp("121331")), Mode::Matching));
    }

    #[test]
    fn slot_maxima() {
        assert_eq!(max_slots_h(&cp("121")), 2);
        assert_eq!(max_slots_h(&cp("11")), 1);
        assert_eq!(max_slots_h(&cp("1")), 1);
        assert_eq!(encode_h(&cp("121")), w("d{1,1}f{2,0}f{1,0}"));
    }

    #[test]
    fn text_form() {
        let word = w(" m{1,1} u{3, 1}\nf{2,0} ");
        assert_eq!(format_word_h(&word), "m{1,1}u{3,1}f{2,0}");
        assert!(parse_word_h("x{1,1}").is_err());
        assert!(parse_word_h("m{0,1}").is_err());
        assert!(parse_word_h("m{1,2}").is_err());
        assert!(parse_word_h("m{1,1").is_err());
    }
}
