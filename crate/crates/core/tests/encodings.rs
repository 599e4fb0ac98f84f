use std::collections::HashSet;

use insertion_encoding::cayley::{generate_cayley, generate_matching_rgfs, generate_rgfs};
use insertion_encoding::encoding::horizontal::{conforms_h, decode_h, encode_h, max_slots_h, ConfigH, SlotH};
use insertion_encoding::encoding::vertical::{conforms_v, decode_v, encode_v, ConfigV};
use insertion_encoding::{Basis, Mode};

#[test]
fn horizontal_round_trips() {
    for n in 1..=7 {
        for pi in generate_cayley(n).unwrap() {
            let word = encode_h(&pi);
            assert_eq!(word.len(), n);
            assert_eq!(decode_h(&word, Mode::Cayley).unwrap(), pi);
            assert_eq!(pi.is_rgf(), conforms_h(&word, Mode::Rgf), "{pi}");
        }
    }
    for pi in generate_rgfs(8, &Basis::empty()).unwrap() {
        assert_eq!(decode_h(&encode_h(&pi), Mode::Rgf).unwrap(), pi);
    }
    for n in [2, 4, 6, 8, 10] {
        for pi in generate_matching_rgfs(n, &Basis::empty()) {
            let word = encode_h(&pi);
            assert!(conforms_h(&word, Mode::Matching), "{pi}");
            assert_eq!(decode_h(&word, Mode::Matching).unwrap(), pi);
        }
    }
}

#[test]
fn horizontal_rgf_profile() {
    for pi in generate_rgfs(7, &Basis::empty()).unwrap() {
        let mut c = ConfigH::initial();
        for letter in encode_h(&pi) {
            c = c.step(letter, Mode::Rgf).unwrap();
            let slots = c.slots();
            let news: Vec<usize> = (0..slots.len()).filter(|&i| slots[i] == SlotH::New).collect();
            assert!(news.len() <= 1);
            if let Some(&i) = news.first() {
                assert_eq!(i, slots.len() - 1, "new slot of {pi} is not topmost");
            }
        }
        assert!(max_slots_h(&pi) >= 1);
    }
}

#[test]
fn vertical_round_trips() {
    for n in 1..=7 {
        for pi in generate_cayley(n).unwrap() {
            let word = encode_v(&pi);
            assert_eq!(word.len(), n);
            assert_eq!(decode_v(&word, Mode::Cayley).unwrap(), pi);
            assert_eq!(pi.is_rgf(), conforms_v(&word), "{pi}");
            if pi.is_rgf() {
                assert_eq!(decode_v(&word, Mode::Rgf).unwrap(), pi);
            }
        }
    }
}

#[test]
fn encodings_are_injective() {
    for n in 1..=6 {
        let all = generate_cayley(n).unwrap();
        let h: HashSet<_> = all.iter().map(encode_h).collect();
        let v: HashSet<_> = all.iter().map(encode_v).collect();
        assert_eq!(h.len(), all.len());
        assert_eq!(v.len(), all.len());
    }
}

/// Walks every legal word up to `max_len` letters and checks that each one
/// ending with no slots is the canonical encoding of what it decodes to.
#[test]
fn every_legal_word_is_canonical() {
    fn walk_h(c: &ConfigH, word: &mut Vec<insertion_encoding::encoding::LetterH>, max_len: usize, counts: &mut [usize]) {
        if c.slot_count() == 0 {
            let pi = c.finish().unwrap();
            assert_eq!(&encode_h(&pi), word);
            counts[word.len()] += 1;
            return;
        }
        if word.len() == max_len {
            return;
        }
        for letter in c.legal_letters(Mode::Cayley) {
            word.push(letter);
            walk_h(&c.step(letter, Mode::Cayley).unwrap(), word, max_len, counts);
            word.pop();
        }
    }
    fn walk_v(c: &ConfigV, word: &mut Vec<insertion_encoding::encoding::LetterV>, max_len: usize, counts: &mut [usize]) {
        if c.slot_count() == 0 {
            let pi = c.finish().unwrap();
            assert_eq!(&encode_v(&pi), word);
            counts[word.len()] += 1;
            return;
        }
        if word.len() == max_len {
            return;
        }
        for letter in c.legal_letters(Mode::Cayley) {
            word.push(letter);
            walk_v(&c.step(letter, Mode::Cayley).unwrap(), word, max_len, counts);
            word.pop();
        }
    }
    let expected: Vec<usize> = (0..=6).map(|n| if n == 0 { 0 } else { generate_cayley(n).unwrap().len() }).collect();
    let mut counts = vec![0; 7];
    walk_h(&ConfigH::initial(), &mut Vec::new(), 6, &mut counts);
    assert_eq!(counts, expected);
    let mut counts = vec![0; 7];
    walk_v(&ConfigV::initial(), &mut Vec::new(), 6, &mut counts);
    assert_eq!(counts, expected);
}
