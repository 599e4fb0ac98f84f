//! A JSON Lines store of classification and enumeration results, and the
//! sweep over all bases drawn from the Cayley permutations of one size.
//!
//! Each line holds one [`CatalogRecord`] with its keys in sorted order. A
//! later line with the same key replaces an earlier one when the store is
//! read back.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{build_dfa, counts, slot_bound, DEFAULT_STATE_CAP, MAX_SLOT_BOUND_H, MAX_SLOT_BOUND_V};
use crate::cayley::{generate_cayley, Basis};
use crate::encoding::{Encoding, Mode};
use crate::error::{Error, Result};
use crate::genfunc::{gf_from_dfa, RationalGF};
use crate::regularity::{classify, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub basis: Basis,
    pub encoding: Encoding,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub basis: Basis,
    pub encoding: Encoding,
    pub mode: Mode,
    pub verdict: Verdict,
    /// Every family is witnessed by a basis element, without searching for
    /// avoided alternations.
    pub basis_witnessed: bool,
    pub search_bound: Option<usize>,
    /// Most slots in the evolution of any class member, for regular classes:
    /// read off the automaton when one is built, otherwise certified by the
    /// slot-bound avoider sets (absent if above the largest bound tried).
    pub slot_bound: Option<usize>,
    pub gf: Option<RationalGF>,
    /// Class sizes `0..=order`, as decimal strings.
    #[serde(with = "decimal")]
    pub counts: Vec<BigUint>,
    pub tool_version: String,
    pub timestamp: u64,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl CatalogRecord {
    /// Classifies the class and, when `order` is given and the class is
    /// regular, builds its automaton to record the generating function and
    /// the counts up to `order`.
    pub fn compute(basis: &Basis, encoding: Encoding, mode: Mode, search_bound: usize, order: Option<usize>) -> Result<Self> {
        let report = classify(basis, encoding, mode, search_bound)?;
        let regular = report.verdict == Verdict::Regular;
        let (slot_bound, gf, counts) = match order {
            Some(order) if regular => {
                let d = build_dfa(basis, encoding, mode, DEFAULT_STATE_CAP)?;
                (Some(d.slot_bound), Some(gf_from_dfa(&d)), counts(&d, order))
            }
            _ if regular => {
                let k_max = match encoding {
                    Encoding::Horizontal => MAX_SLOT_BOUND_H,
                    Encoding::Vertical => MAX_SLOT_BOUND_V,
                };
                (slot_bound(basis, encoding, k_max)?, None, Vec::new())
            }
            _ => (None, None, Vec::new()),
        };
        Ok(CatalogRecord {
            basis_witnessed: report.witnessed_by_basis(basis),
            basis: basis.clone(),
            encoding,
            mode,
            verdict: report.verdict,
            search_bound: report.search_bound,
            slot_bound,
            gf,
            counts,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        })
    }

    pub fn key(&self) -> RecordKey {
        RecordKey { basis: self.basis.clone(), encoding: self.encoding, mode: self.mode }
    }

    /// Counts agree with the series of the generating function when both
    /// are present.
    pub fn is_consistent(&self) -> bool {
        match (&self.gf, self.counts.len()) {
            (Some(gf), n) if n > 0 => gf.series(n - 1).is_ok_and(|s| {
                s.iter().zip(&self.counts).all(|(a, b)| a.to_biguint().as_ref() == Some(b))
            }),
            _ => true,
        }
    }

    /// One line of JSON with keys in sorted order.
    pub fn to_json_line(&self) -> String {
        // serde_json maps are ordered by key
        let value = serde_json::to_value(self).expect("records serialize");
        serde_json::to_string(&value).expect("values serialize")
    }
}

/// Conditions a record must meet to be returned by [`Catalog::scan`].
#[derive(Debug, Clone, Default)]
pub struct Filter {
    pub encoding: Option<Encoding>,
    pub mode: Option<Mode>,
    pub verdict: Option<Verdict>,
    pub basis_size: Option<usize>,
}

impl Filter {
    pub fn matches(&self, r: &CatalogRecord) -> bool {
        self.encoding.is_none_or(|e| e == r.encoding)
            && self.mode.is_none_or(|m| m == r.mode)
            && self.verdict.is_none_or(|v| v == r.verdict)
            && self.basis_size.is_none_or(|s| s == r.basis.len())
    }
}

/// An append-only record file with an in-memory index.
#[derive(Debug)]
pub struct Catalog {
    path: PathBuf,
    records: HashMap<RecordKey, CatalogRecord>,
    skipped: Vec<(usize, String)>,
}

impl Catalog {
    /// Reads the store at `path`, which need not exist yet. A line that does
    /// not parse is an error, or is skipped and remembered when `lenient`.
    pub fn open(path: impl AsRef<Path>, lenient: bool) -> Result<Catalog> {
        let path = path.as_ref().to_path_buf();
        let mut records = HashMap::new();
        let mut skipped = Vec::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CatalogRecord>(&line) {
                    Ok(r) => {
                        records.insert(r.key(), r);
                    }
                    Err(e) if lenient => skipped.push((i + 1, e.to_string())),
                    Err(e) => return Err(Error::CorruptRecord { line: i + 1, message: e.to_string() }),
                }
            }
        }
        Ok(Catalog { path, records, skipped })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Line numbers and parse errors of lines skipped in lenient mode.
    pub fn skipped(&self) -> &[(usize, String)] {
        &self.skipped
    }

    pub fn get(&self, key: &RecordKey) -> Option<&CatalogRecord> {
        self.records.get(key)
    }

    pub fn put(&mut self, record: CatalogRecord) -> Result<()> {
        self.put_all(std::iter::once(record))
    }

    /// Appends records in order, flushing once at the end.
    pub fn put_all(&mut self, records: impl IntoIterator<Item = CatalogRecord>) -> Result<()> {
        let file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut w = BufWriter::new(file);
        for r in records {
            writeln!(w, "{}", r.to_json_line())?;
            self.records.insert(r.key(), r);
        }
        w.flush()?;
        Ok(())
    }

    /// Matching records, ordered by key.
    pub fn scan<'a>(&'a self, filter: &'a Filter) -> impl Iterator<Item = &'a CatalogRecord> + 'a {
        let mut out: Vec<&CatalogRecord> = self.records.values().filter(|r| filter.matches(r)).collect();
        out.sort_by_key(|r| r.key());
        out.into_iter()
    }
}

/// Which bases a sweep covers and how they are classified.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub pattern_size: usize,
    pub basis_sizes: RangeInclusive<usize>,
    pub search_bound: usize,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
}

/// One row of the sweep table. The `vertical`, `horizontal` and `either`
/// columns use the basis-level test for the vertical encoding; the
/// `_extended` columns also accept classes certified by the alternation
/// search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub basis_size: usize,
    pub classes: usize,
    pub vertical: usize,
    pub horizontal: usize,
    pub either: usize,
    pub vertical_extended: usize,
    pub either_extended: usize,
    pub undecided: usize,
}

const COLUMNS: [&str; 8] =
    ["basis_size", "classes", "vertical", "horizontal", "either", "vertical_extended", "either_extended", "undecided"];

impl SweepRow {
    fn cells(&self) -> [usize; 8] {
        [
            self.basis_size,
            self.classes,
            self.vertical,
            self.horizontal,
            self.either,
            self.vertical_extended,
            self.either_extended,
            self.undecided,
        ]
    }

    fn add(&mut self, other: &SweepRow) {
        self.classes += other.classes;
        self.vertical += other.vertical;
        self.horizontal += other.horizontal;
        self.either += other.either;
        self.vertical_extended += other.vertical_extended;
        self.either_extended += other.either_extended;
        self.undecided += other.undecided;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub total: SweepRow,
    /// Classifications run by this sweep (zero on a warm store).
    pub classified: usize,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = COLUMNS.join(",");
        out.push('\n');
        for (label, row) in self.labelled() {
            let cells: Vec<String> = row.cells()[1..].iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{label},{}", cells.join(","));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<Vec<String>> = vec![COLUMNS.iter().map(|c| c.to_string()).collect()];
        for (label, row) in self.labelled() {
            let mut cells = vec![label];
            cells.extend(row.cells()[1..].iter().map(ToString::to_string));
            lines.push(cells);
        }
        let widths: Vec<usize> = (0..COLUMNS.len()).map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for l in lines {
            let cells: Vec<String> = l.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  "));
        }
        out
    }

    fn labelled(&self) -> impl Iterator<Item = (String, &SweepRow)> {
        self.rows
            .iter()
            .map(|r| (r.basis_size.to_string(), r))
            .chain(std::iter::once(("total".to_string(), &self.total)))
    }
}

/// All bases of `size` distinct patterns drawn from `patterns`.
fn combinations(patterns: &[crate::cayley::CayleyPermutation], size: usize) -> Vec<Basis> {
    fn rec(
        patterns: &[crate::cayley::CayleyPermutation],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Basis>,
    ) {
        if cur.len() == size {
            out.push(Basis::new(cur.iter().map(|&i| patterns[i].clone())));
            return;
        }
        for i in start..patterns.len() {
            cur.push(i);
            rec(patterns, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(patterns, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Classifies every basis of the sweep under both encodings in RGF mode,
/// skipping keys already in the store, and tabulates the results. Records
/// are computed in parallel and written by the calling thread.
pub fn sweep_table(catalog: &mut Catalog, spec: &SweepSpec) -> Result<SweepTable> {
    let patterns = generate_cayley(spec.pattern_size)?;
    let by_size: Vec<(usize, Vec<Basis>)> = spec
        .basis_sizes
        .clone()
        .take_while(|&r| r <= patterns.len())
        .filter(|&r| r >= 1)
        .map(|r| (r, combinations(&patterns, r)))
        .collect();
    let key = |basis: &Basis, encoding| RecordKey { basis: basis.clone(), encoding, mode: Mode::Rgf };
    let missing: Vec<(Basis, Encoding)> = by_size
        .iter()
        .flat_map(|(_, bases)| bases.iter())
        .flat_map(|b| [Encoding::Vertical, Encoding::Horizontal].map(|e| (b.clone(), e)))
        .filter(|(b, e)| catalog.get(&key(b, *e)).is_none())
        .collect();
    let classified = missing.len();
    if !missing.is_empty() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        let (tx, rx) = mpsc::channel::<Result<CatalogRecord>>();
        let search_bound = spec.search_bound;
        std::thread::scope(|scope| -> Result<()> {
            scope.spawn(move || {
                pool.install(|| {
                    missing.par_iter().for_each_with(tx, |tx, (b, e)| {
                        let _ = tx.send(CatalogRecord::compute(b, *e, Mode::Rgf, search_bound, None));
                    });
                });
            });
            // single writer: batch records to keep appends cheap
            let mut batch = Vec::new();
            for r in rx {
                batch.push(r?);
                if batch.len() == 256 {
                    catalog.put_all(batch.drain(..))?;
                }
            }
            catalog.put_all(batch)
        })?;
    }
    let mut rows = Vec::new();
    let mut total = SweepRow::default();
    for (size, bases) in &by_size {
        let mut row = SweepRow { basis_size: *size, ..SweepRow::default() };
        for b in bases {
            let v = catalog.get(&key(b, Encoding::Vertical)).expect("classified above");
            let h = catalog.get(&key(b, Encoding::Horizontal)).expect("classified above");
            let v_basic = v.verdict == Verdict::Regular && v.basis_witnessed;
            let v_full = v.verdict == Verdict::Regular;
            let h_reg = h.verdict == Verdict::Regular;
            row.classes += 1;
            row.vertical += usize::from(v_basic);
            row.horizontal += usize::from(h_reg);
            row.either += usize::from(v_basic || h_reg);
            row.vertical_extended += usize::from(v_full);
            row.either_extended += usize::from(v_full || h_reg);
            row.undecided += usize::from(v.verdict == Verdict::Undecided || h.verdict == Verdict::Undecided);
        }
        total.add(&row);
        rows.push(row);
    }
    Ok(SweepTable { rows, total, classified })
}
