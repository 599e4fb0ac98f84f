//! The `insenc` command line. Exit codes: 0 success, 1 domain error (for
//! example a class that is not regular), 2 usage error or malformed input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::automaton::{build_dfa, counts, minimize, Dfa, DEFAULT_STATE_CAP};
use crate::catalog::{sweep_table, Catalog, SweepSpec};
use crate::cayley::{generate_matching_rgfs, generate_rgfs, Basis, CayleyPermutation};
use crate::encoding::horizontal::{decode_h, encode_h, format_word_h, parse_word_h};
use crate::encoding::vertical::{decode_v, encode_v, format_word_v, parse_word_v};
use crate::encoding::{Encoding, Mode};
use crate::error::Error;
use crate::genfunc::gf_from_dfa;
use crate::regularity::{class_member_containing, classify, Verdict, DEFAULT_SEARCH_BOUND};

/// Environment variable naming the default sweep store.
pub const STORE_ENV: &str = "INSENC_STORE";

#[derive(Debug, Parser)]
#[command(name = "insenc", version, about = "Insertion encodings of pattern-avoiding RGFs and matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the class has a regular insertion encoding.
    Classify {
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
        #[arg(long, default_value = "v", value_parser = parse_encoding)]
        encoding: Encoding,
        #[arg(long, default_value = "rgf", value_parser = parse_mode)]
        mode: Mode,
        /// Largest alternation size searched for the decreasing-top families.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        mmax: usize,
        #[arg(long)]
        pretty: bool,
    },
    /// Count class members of each size up to --max-size.
    Count {
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
        #[arg(long)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = Method::Automaton)]
        method: Method,
        /// Encoding for --method automaton; defaults to the first regular one.
        #[arg(long, value_parser = parse_encoding)]
        encoding: Option<Encoding>,
        #[arg(long, default_value = "rgf", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        pretty: bool,
    },
    /// Print the rational generating function of a regular class.
    Genfunc {
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
        #[arg(long, default_value = "v", value_parser = parse_encoding)]
        encoding: Encoding,
        #[arg(long, default_value = "rgf", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        pretty: bool,
    },
    /// Print the automaton of a regular class as JSON.
    Automaton {
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
        #[arg(long, default_value = "v", value_parser = parse_encoding)]
        encoding: Encoding,
        #[arg(long, default_value = "rgf", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        minimize: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Encode a Cayley permutation as a word.
    Encode {
        #[arg(long, value_parser = parse_encoding)]
        encoding: Encoding,
        #[arg(long, default_value = "cayley", value_parser = parse_mode)]
        mode: Mode,
        #[arg(value_parser = parse_perm)]
        permutation: CayleyPermutation,
    },
    /// Decode a word into a Cayley permutation.
    Decode {
        #[arg(long, value_parser = parse_encoding)]
        encoding: Encoding,
        #[arg(long, default_value = "cayley", value_parser = parse_mode)]
        mode: Mode,
        word: String,
    },
    /// Decide whether every RGF avoiding --basis also avoids --gamma.
    Avoided {
        #[arg(long, value_parser = parse_perm)]
        gamma: CayleyPermutation,
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
        #[arg(long)]
        pretty: bool,
    },
    /// Classify every basis of patterns of one size and tabulate.
    Sweep {
        #[arg(long, default_value_t = 3)]
        pattern_size: usize,
        /// Inclusive range such as `1..5`, or a single size; defaults to all.
        #[arg(long, value_parser = parse_range)]
        basis_sizes: Option<RangeInclusive<usize>>,
        /// JSON Lines store; defaults to $INSENC_STORE.
        #[arg(long, env = STORE_ENV)]
        store: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        mmax: usize,
        /// Skip unreadable store lines instead of failing.
        #[arg(long)]
        lenient: bool,
        /// Aligned text instead of CSV.
        #[arg(long, conflicts_with = "json")]
        pretty: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Automaton,
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_perm(s: &str) -> Result<CayleyPermutation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_encoding(s: &str) -> Result<Encoding, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size {t:?}"));
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => num(s)?..=num(s)?,
    };
    if range.is_empty() {
        return Err(format!("empty range {s:?}"));
    }
    Ok(range)
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::InvalidInput(_)) { 2 } else { 1 };
        Failure(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure(1, e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Runs the command line with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, err) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            0
        }
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn json_out(value: &Value) -> String {
    serde_json::to_string(value).expect("values serialize")
}

fn regular_dfa(basis: &Basis, encoding: Encoding, mode: Mode, cap: usize) -> Result<Dfa, Failure> {
    let report = classify(basis, encoding, mode, DEFAULT_SEARCH_BOUND)?;
    if report.verdict == Verdict::Irregular {
        let reason = report.reason().unwrap_or_default();
        return Err(Failure(1, format!("{basis} is not regular under the {encoding} encoding: {reason}")));
    }
    Ok(build_dfa(basis, encoding, mode, cap)?)
}

fn execute(command: Command, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Classify { basis, encoding, mode, mmax, pretty } => {
            let report = classify(&basis, encoding, mode, mmax)?;
            if !pretty {
                return Ok(json_out(&serde_json::to_value(&report).expect("reports serialize")));
            }
            let mut s = format!("basis     {basis}\nencoding  {encoding}\nmode      {mode}\nverdict   {}\n", report.verdict);
            for (tag, w) in &report.witnesses.0 {
                let w = w.as_ref().map_or("-".to_string(), ToString::to_string);
                let _ = writeln!(s, "  {:<8}  {w}", tag.to_string());
            }
            if let Some(reason) = report.reason() {
                let _ = writeln!(s, "reason    {reason}");
            }
            Ok(s)
        }
        Command::Count { basis, max_size, method, encoding, mode, pretty } => {
            if mode == Mode::Cayley {
                return Err(Failure(2, "count supports --mode rgf or matching".into()));
            }
            let (values, used) = match method {
                Method::Brute => {
                    let mut v = Vec::with_capacity(max_size);
                    for n in 1..=max_size {
                        let c = match mode {
                            Mode::Matching => generate_matching_rgfs(n, &basis).len(),
                            _ => generate_rgfs(n, &basis)?.len(),
                        };
                        v.push(BigUint::from(c));
                    }
                    (v, None)
                }
                Method::Automaton => {
                    let enc = match (encoding, mode) {
                        (Some(e), _) => e,
                        (None, Mode::Matching) => Encoding::Horizontal,
                        (None, _) => [Encoding::Vertical, Encoding::Horizontal]
                            .into_iter()
                            .find(|&e| classify(&basis, e, mode, DEFAULT_SEARCH_BOUND).is_ok_and(|r| r.verdict == Verdict::Regular))
                            .ok_or_else(|| Failure(1, format!("{basis} is not regular under either encoding")))?,
                    };
                    let d = regular_dfa(&basis, enc, mode, DEFAULT_STATE_CAP)?;
                    (counts(&d, max_size).split_off(1), Some(enc))
                }
            };
            if pretty {
                let mut s = String::from("size  count\n");
                for (i, c) in values.iter().enumerate() {
                    let _ = writeln!(s, "{:>4}  {c}", i + 1);
                }
                return Ok(s);
            }
            let method = match method {
                Method::Brute => "brute",
                Method::Automaton => "automaton",
            };
            Ok(json_out(&json!({
                "basis": basis.to_string(),
                "mode": mode,
                "method": method,
                "encoding": used,
                "counts": values.iter().enumerate().map(|(i, c)| json!({"size": i + 1, "count": c.to_string()})).collect::<Vec<_>>(),
            })))
        }
        Command::Genfunc { basis, encoding, mode, pretty } => {
            let d = regular_dfa(&basis, encoding, mode, DEFAULT_STATE_CAP)?;
            let gf = gf_from_dfa(&d);
            let series: Vec<String> = gf.series(11)?.iter().map(ToString::to_string).collect();
            if pretty {
                return Ok(format!("{gf}\n{}\n{}\n", gf.coefficient_form(), series.join(", ")));
            }
            Ok(json_out(&json!({
                "basis": basis.to_string(),
                "encoding": encoding,
                "mode": mode,
                "gf": gf.to_string(),
                "coefficients": gf.coefficient_form(),
                "series": series,
            })))
        }
        Command::Automaton { basis, encoding, mode, minimize: min, state_cap } => {
            let d = regular_dfa(&basis, encoding, mode, state_cap)?;
            let d = if min { minimize(&d) } else { d };
            Ok(json_out(&d.to_json()))
        }
        Command::Encode { encoding, mode, permutation } => {
            let fits = match mode {
                Mode::Cayley => true,
                Mode::Rgf => permutation.is_rgf(),
                Mode::Matching => permutation.is_matching_rgf(),
            };
            if !fits {
                return Err(Failure(1, format!("{permutation} is not a valid {mode} object")));
            }
            Ok(match encoding {
                Encoding::Horizontal => format_word_h(&encode_h(&permutation)),
                Encoding::Vertical => format_word_v(&encode_v(&permutation)),
            })
        }
        Command::Decode { encoding, mode, word } => {
            let pi = match encoding {
                Encoding::Horizontal => decode_h(&parse_word_h(&word)?, mode),
                Encoding::Vertical => decode_v(&parse_word_v(&word)?, mode),
            }
            .map_err(|e| Failure(1, e.to_string()))?;
            Ok(pi.to_string())
        }
        Command::Avoided { gamma, basis, pretty } => {
            let member = class_member_containing(&gamma, &basis);
            if pretty {
                return Ok(match &member {
                    None => format!("{gamma} is avoided by every RGF avoiding {basis}"),
                    Some(m) => format!("{gamma} is not avoided: {m} avoids {basis} and contains it"),
                });
            }
            Ok(json_out(&json!({
                "gamma": gamma.to_string(),
                "basis": basis.to_string(),
                "avoided": member.is_none(),
                "refuting_rgf": member.map(|m| m.to_string()),
            })))
        }
        Command::Sweep { pattern_size, basis_sizes, store, jobs, mmax, lenient, pretty, json } => {
            let mut catalog = Catalog::open(&store, lenient)?;
            for (line, message) in catalog.skipped() {
                let _ = writeln!(err, "warning: skipped store line {line}: {message}");
            }
            let basis_sizes = basis_sizes.unwrap_or(1..=usize::MAX);
            let spec = SweepSpec { pattern_size, basis_sizes, search_bound: mmax, jobs };
            let table = sweep_table(&mut catalog, &spec)?;
            Ok(if json {
                json_out(&serde_json::to_value(&table).expect("tables serialize"))
            } else if pretty {
                table.to_text()
            } else {
                table.to_csv()
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("insenc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn examples() {
        let (code, out, _) = run_args(&["classify", "--basis", "121", "--encoding", "v"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"verdict\":\"Regular\""), "{out}");
        let (code, out, _) = run_args(&["genfunc", "--basis", "121", "--encoding", "v"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"gf\":\"x/(1-2*x)\""), "{out}");
        let (code, out, _) = run_args(&["encode", "--encoding", "v", "242143"]);
        assert_eq!((code, out.trim()), (0, "m{1,1}l{1,1}r{1,0}r{2,1}f{1,1}f{1,0}"));
        let (code, out, _) = run_args(&["decode", "--encoding", "v", "m{1,1}l{1,1}r{1,0}r{2,1}f{1,1}f{1,0}"]);
        assert_eq!((code, out.trim()), (0, "242143"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["classify", "--basis", "13", "--encoding", "v"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        let (code, _, err) = run_args(&["genfunc", "--basis", "123", "--encoding", "v"]);
        assert_eq!(code, 1);
        assert!(err.contains("not regular"), "{err}");
        assert_eq!(run_args(&["decode", "--encoding", "h", "q{1,1}"]).0, 2);
        assert_eq!(run_args(&["decode", "--encoding", "h", "f{2,0}"]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn brute_and_automaton_agree() {
        for basis in ["112", "121", "212 213"] {
            let (_, a, _) = run_args(&["count", "--basis", basis, "--max-size", "7", "--method", "brute"]);
            let (_, b, _) = run_args(&["count", "--basis", basis, "--max-size", "7", "--method", "automaton"]);
            let counts = |s: &str| serde_json::from_str::<Value>(s).unwrap()["counts"].clone();
            assert_eq!(counts(&a), counts(&b), "{basis}");
        }
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1..5"), Ok(1..=5));
        assert_eq!(parse_range("1..=5"), Ok(1..=5));
        assert_eq!(parse_range("3"), Ok(3..=3));
        assert!(parse_range("5..1").is_err());
    }
}
