//! Acceptance gate. Each test checks one numbered criterion and prints one
//! `[criterion N] PASS|FAIL` line to stderr (bypassing output capture), then
//! asserts. All tolerances are exact.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use insertion_encoding::automaton::{build_dfa, check_state_soundness, counts, Dfa, DEFAULT_STATE_CAP};
use insertion_encoding::catalog::{sweep_table, Catalog, SweepSpec};
use insertion_encoding::cayley::{
    generate_cayley, generate_matching_rgfs, generate_rgfs, standardise, Basis, CayleyPermutation,
};
use insertion_encoding::encoding::horizontal::{conforms_h, decode_h, encode_h, format_word_h, max_slots_h};
use insertion_encoding::encoding::vertical::{conforms_v, decode_v, encode_v, format_word_v, max_slots_v};
use insertion_encoding::genfunc::gf_from_dfa;
use insertion_encoding::geometry::{concatenation, g_alternation, in_class, vertical_alternation, ClassTag};
use insertion_encoding::regularity::{avoided_by_class, classify, sb_h_basis, sb_v_basis, Verdict, DEFAULT_SEARCH_BOUND};
use insertion_encoding::{Encoding, Mode};

const SAMPLE_SEED: u64 = 0x5eed_0003;
const RANDOM_BASES: usize = 25;
const ORACLE_N: usize = 9;
const MATCHING_ORACLE_N: usize = 10;
const SERIES_ORDER: usize = 12;
const SOUNDNESS_DEPTH: usize = 5;

fn report(n: u32, title: &str, detail: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[criterion {n}] {status} {title}: {detail}");
    assert!(failures.is_empty(), "criterion {n} failures:\n{}", failures.join("\n"));
}

fn cp(s: &str) -> CayleyPermutation {
    s.parse().unwrap()
}

fn basis(s: &str) -> Basis {
    s.parse().unwrap()
}

/// (encoding, mode) pairs for which automata exist.
const TARGETS: [(Encoding, Mode); 3] =
    [(Encoding::Vertical, Mode::Rgf), (Encoding::Horizontal, Mode::Rgf), (Encoding::Horizontal, Mode::Matching)];

fn is_regular(b: &Basis, encoding: Encoding, mode: Mode) -> bool {
    classify(b, encoding, mode, DEFAULT_SEARCH_BOUND).unwrap().verdict == Verdict::Regular
}

struct Case {
    basis: Basis,
    dfas: Vec<(Encoding, Mode, Dfa)>,
}

/// Regular singletons of size-3 patterns, then random bases of patterns of
/// sizes 2 to 4 that are regular under some encoding.
fn sample() -> &'static [Case] {
    static SAMPLE: OnceLock<Vec<Case>> = OnceLock::new();
    SAMPLE.get_or_init(|| {
        let mut bases: Vec<Basis> = generate_cayley(3)
            .unwrap()
            .into_iter()
            .map(|p| Basis::new([p]))
            .filter(|b| TARGETS.iter().any(|&(e, m)| is_regular(b, e, m)))
            .collect();
        let pool: Vec<CayleyPermutation> = (2..=4).flat_map(|n| generate_cayley(n).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut seen: BTreeSet<Basis> = bases.iter().cloned().collect();
        let mut random = 0;
        while random < RANDOM_BASES {
            let size = rng.gen_range(1..=3);
            let b = Basis::new(pool.choose_multiple(&mut rng, size).cloned());
            let regular = is_regular(&b, Encoding::Vertical, Mode::Rgf) || is_regular(&b, Encoding::Horizontal, Mode::Rgf);
            if regular && seen.insert(b.clone()) {
                bases.push(b);
                random += 1;
            }
        }
        bases
            .into_iter()
            .map(|b| {
                let dfas = TARGETS
                    .iter()
                    .filter(|&&(e, m)| is_regular(&b, e, m))
                    .map(|&(e, m)| (e, m, build_dfa(&b, e, m, DEFAULT_STATE_CAP).unwrap()))
                    .collect();
                Case { basis: b, dfas }
            })
            .collect()
    })
}

fn brute_counts(b: &Basis, mode: Mode, n_max: usize) -> Vec<usize> {
    (0..=n_max)
        .map(|n| match (n, mode) {
            (0, _) => 0,
            (_, Mode::Matching) => generate_matching_rgfs(n, b).len(),
            _ => generate_rgfs(n, b).unwrap().len(),
        })
        .collect()
}

#[test]
fn criterion_1_size3_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let mut catalog = Catalog::open(dir.path().join("sweep.jsonl"), false).unwrap();
    let spec = SweepSpec { pattern_size: 3, basis_sizes: 1..=13, search_bound: DEFAULT_SEARCH_BOUND, jobs: 0 };
    let table = sweep_table(&mut catalog, &spec).unwrap();
    let expected = [(13, 2, 5, 6), (78, 33, 58, 65), (286, 221, 262, 278), (715, 668, 699, 713), (1287, 1269, 1281, 1287)];
    let mut failures = Vec::new();
    for (row, want) in table.rows.iter().zip(expected) {
        let got = (row.classes, row.vertical, row.horizontal, row.either);
        if got != want {
            failures.push(format!("basis size {}: got {got:?}, want {want:?}", row.basis_size));
        }
    }
    if (table.total.classes, table.total.either) != (8191, 8161) {
        failures.push(format!("totals: got {} classes, {} regular", table.total.classes, table.total.either));
    }
    if table.total.undecided != 0 {
        failures.push(format!("{} undecided classes", table.total.undecided));
    }
    let extended: Vec<usize> = table.rows.iter().take(5).map(|r| r.vertical_extended).collect();
    let detail = format!(
        "{} classes, {} regular; rows 1-5 match; vertical with alternation search {:?}, either {}",
        table.total.classes, table.total.either, extended, table.total.either_extended
    );
    report(1, "size-3 sweep", &detail, &failures);
}

#[test]
fn criterion_2_worked_examples() {
    let mut failures = Vec::new();
    let mut check = |what: &str, got: String, want: &str| {
        if got != want {
            failures.push(format!("{what}: got {got}, want {want}"));
        }
    };
    check("encode_h(242143)", format_word_h(&encode_h(&cp("242143"))), "m{1,1}u{3,1}f{2,0}f{1,0}f{2,0}f{1,0}");
    check("encode_h(121331)", format_word_h(&encode_h(&cp("121331"))), "d{1,1}d{2,0}f{1,1}f{2,1}f{2,0}f{1,0}");
    check("encode_h(122313)", format_word_h(&encode_h(&cp("122313"))), "d{1,1}d{2,1}f{2,0}f{2,1}f{1,0}f{1,0}");
    check("encode_v(242143)", format_word_v(&encode_v(&cp("242143"))), "m{1,1}l{1,1}r{1,0}r{2,1}f{1,1}f{1,0}");
    check("standardise(677649)", standardise(&[6, 7, 7, 6, 4, 9]).unwrap().to_string(), "233214");
    check("1213214 contains 2213", cp("1213214").contains(&cp("2213")).is_some().to_string(), "true");
    check("1213214 contains 4321", cp("1213214").contains(&cp("4321")).is_some().to_string(), "false");
    if !conforms_h(&encode_h(&cp("122313")), Mode::Matching) {
        failures.push("122313 does not conform to the matching letters".into());
    }
    report(2, "worked examples", "four encodings, standardisation, two containment queries", &failures);
}

#[test]
fn criterion_3_letter_restrictions() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=7 {
        for pi in generate_cayley(n).unwrap() {
            checked += 1;
            if pi.is_rgf() != conforms_h(&encode_h(&pi), Mode::Rgf) {
                failures.push(format!("horizontal rgf letters disagree on {pi}"));
            }
            if pi.is_rgf() != conforms_v(&encode_v(&pi)) {
                failures.push(format!("vertical rgf letters disagree on {pi}"));
            }
        }
    }
    let mut matchings = 0;
    for n in (2..=10).step_by(2) {
        for pi in generate_matching_rgfs(n, &Basis::empty()) {
            matchings += 1;
            if !conforms_h(&encode_h(&pi), Mode::Matching) {
                failures.push(format!("matching {pi} does not conform"));
            }
        }
    }
    let detail = format!("{checked} Cayley permutations of size <= 7, {matchings} matchings of size <= 10");
    report(3, "letter restrictions", &detail, &failures);
}

#[test]
fn criterion_4_slot_bound_avoiders() {
    let mut failures = Vec::new();
    let sets = [
        ("horizontal", 1, sb_h_basis(1).unwrap()),
        ("horizontal", 2, sb_h_basis(2).unwrap()),
        ("vertical", 1, sb_v_basis(1).unwrap()),
    ];
    let mut checked = 0;
    for n in 1..=7 {
        for pi in generate_rgfs(n, &Basis::empty()).unwrap() {
            checked += 1;
            for (name, k, set) in &sets {
                let slots = if *name == "horizontal" { max_slots_h(&pi) } else { max_slots_v(&pi) };
                let avoids = set.iter().all(|g| pi.contains(g).is_none());
                if (slots <= *k) != avoids {
                    failures.push(format!("{name} k={k}: {pi} has {slots} slots but avoids={avoids}"));
                }
            }
        }
    }
    report(4, "slot-bound avoider sets", &format!("{checked} RGFs of size <= 7, three bounds"), &failures);
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut failures = Vec::new();
    let mut automata = 0;
    for case in sample() {
        for (e, m, d) in &case.dfas {
            automata += 1;
            let n_max = if *m == Mode::Matching { MATCHING_ORACLE_N } else { ORACLE_N };
            let got: Vec<String> = counts(d, n_max).iter().map(ToString::to_string).collect();
            let want: Vec<String> = brute_counts(&case.basis, *m, n_max).iter().map(ToString::to_string).collect();
            if got != want {
                failures.push(format!("{} {e} {m}: automaton {got:?}, brute force {want:?}", case.basis));
            }
        }
    }
    let detail = format!("{} bases, {automata} automata, n <= {ORACLE_N} (matching n <= {MATCHING_ORACLE_N})", sample().len());
    report(5, "automaton vs brute force", &detail, &failures);
}

#[test]
fn criterion_6_generating_functions() {
    let mut failures = Vec::new();
    let mut cross = 0;
    for case in sample() {
        for (e, m, d) in &case.dfas {
            let want: Vec<BigInt> = counts(d, SERIES_ORDER).into_iter().map(BigInt::from).collect();
            match gf_from_dfa(d).series(SERIES_ORDER) {
                Ok(got) if got == want => {}
                other => failures.push(format!("{} {e} {m}: series {other:?}, counts {want:?}", case.basis)),
            }
        }
        let rgf: Vec<_> = case.dfas.iter().filter(|(_, m, _)| *m == Mode::Rgf).map(|(_, _, d)| gf_from_dfa(d)).collect();
        if rgf.len() == 2 {
            cross += 1;
            if rgf[0] != rgf[1] {
                failures.push(format!("{}: vertical {} but horizontal {}", case.basis, rgf[0], rgf[1]));
            }
        }
    }
    let golden = [
        ("121", Encoding::Vertical, Mode::Rgf, "x/(1-2*x)"),
        ("12", Encoding::Vertical, Mode::Rgf, "x/(1-x)"),
        ("121", Encoding::Horizontal, Mode::Matching, "x^2/(1-x^2)"),
    ];
    for (b, e, m, want) in golden {
        let got = gf_from_dfa(&build_dfa(&basis(b), e, m, DEFAULT_STATE_CAP).unwrap()).to_string();
        if got != want {
            failures.push(format!("gf({{{b}}}, {e}, {m}) = {got}, want {want}"));
        }
    }
    let detail = format!("series to order {SERIES_ORDER} for every sampled automaton, {cross} cross-encoding pairs, 3 golden forms");
    report(6, "generating functions", &detail, &failures);
}

fn members_up_to(n: usize, tag: ClassTag) -> Vec<CayleyPermutation> {
    (1..=n).flat_map(|k| generate_cayley(k).unwrap()).filter(|p| in_class(p, tag)).collect()
}

#[test]
fn criterion_7_family_compositions() {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut check = |tag: ClassTag, n: usize, big: CayleyPermutation| {
        for p in members_up_to(n, tag) {
            checked += 1;
            if big.contains(&p).is_none() {
                failures.push(format!("{tag}: {big} misses {p}"));
            }
        }
    };
    for n in 1..=4 {
        for tag in ClassTag::HORIZONTAL_FAMILIES {
            check(tag, n, concatenation(tag, n).unwrap());
        }
        for tag in ClassTag::all().into_iter().filter(|t| matches!(t, ClassTag::V(..))) {
            check(tag, n, vertical_alternation(tag, n).unwrap());
        }
    }
    for n in 1..=3 {
        for tag in ClassTag::all().into_iter().filter(|t| matches!(t, ClassTag::G(..))) {
            check(tag, n, g_alternation(tag, n).unwrap());
        }
    }
    report(7, "family compositions", &format!("{checked} (family member, composition) pairs"), &failures);
}

#[test]
fn criterion_8_round_trips_and_soundness() {
    let mut failures = Vec::new();
    let mut round_trips = 0;
    for n in 1..=7 {
        for pi in generate_cayley(n).unwrap() {
            round_trips += 2;
            if decode_h(&encode_h(&pi), Mode::Cayley).ok().as_ref() != Some(&pi) {
                failures.push(format!("horizontal round trip fails on {pi}"));
            }
            if decode_v(&encode_v(&pi), Mode::Cayley).ok().as_ref() != Some(&pi) {
                failures.push(format!("vertical round trip fails on {pi}"));
            }
            if pi.is_rgf() {
                round_trips += 2;
                if decode_h(&encode_h(&pi), Mode::Rgf).ok().as_ref() != Some(&pi) {
                    failures.push(format!("horizontal rgf round trip fails on {pi}"));
                }
                if decode_v(&encode_v(&pi), Mode::Rgf).ok().as_ref() != Some(&pi) {
                    failures.push(format!("vertical rgf round trip fails on {pi}"));
                }
            }
        }
    }
    for pi in (2..=10).step_by(2).flat_map(|n| generate_matching_rgfs(n, &Basis::empty())) {
        round_trips += 1;
        if decode_h(&encode_h(&pi), Mode::Matching).ok().as_ref() != Some(&pi) {
            failures.push(format!("matching round trip fails on {pi}"));
        }
    }
    let mut checks = 0;
    let mut pairs = 0;
    for case in sample() {
        for (e, m, _) in &case.dfas {
            checks += 1;
            let r = check_state_soundness(&case.basis, *e, *m, SOUNDNESS_DEPTH);
            pairs += r.pairs_checked;
            if let Some(c) = r.counterexample {
                failures.push(format!("{} {e} {m}: {c}", case.basis));
            }
        }
    }
    let detail = format!("{round_trips} round trips; {checks} soundness checks at depth {SOUNDNESS_DEPTH}, {pairs} pairs compared");
    report(8, "round trips and signature soundness", &detail, &failures);
}

#[test]
fn criterion_9_avoided_by_class() {
    let mut failures = Vec::new();
    for (gamma, b, want) in [("21", "121", true), ("121", "112", false), ("1312", "112", true)] {
        if avoided_by_class(&cp(gamma), &basis(b)) != want {
            failures.push(format!("avoided_by_class({gamma}, {{{b}}}) should be {want}"));
        }
    }
    let pool: Vec<CayleyPermutation> = (1..=4).flat_map(|n| generate_cayley(n).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 9);
    let mut checked = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=4);
        let b = Basis::new(pool.choose_multiple(&mut rng, size).cloned());
        for beta in &b {
            checked += 1;
            if !avoided_by_class(beta, &b) {
                failures.push(format!("{beta} is in the class avoiding {b}"));
            }
        }
    }
    report(9, "avoided_by_class", &format!("3 golden cases, {checked} basis elements of random bases"), &failures);
}
