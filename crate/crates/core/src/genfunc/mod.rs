//! Exact rational generating functions of automata.

mod poly;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automaton::{minimize, Dfa};
use crate::error::{Error, Result};

pub use poly::IntPolynomial;

/// A power series `num/den`, reduced so the two share no common factor and
/// `den(0) > 0`. Series with integer coefficients always have `den(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalGF {
    num: IntPolynomial,
    den: IntPolynomial,
}

/// Reduces `num/den` to canonical form.
pub fn normalize(num: IntPolynomial, den: IntPolynomial) -> Result<RationalGF> {
    if den.coeff(0).is_zero() {
        return Err(Error::NotNormalizable);
    }
    if num.is_zero() {
        return Ok(RationalGF { num, den: IntPolynomial::one() });
    }
    let g = num.gcd(&den);
    let mut num = num.div_exact(&g).expect("gcd divides");
    let mut den = den.div_exact(&g).expect("gcd divides");
    let c = num.content().gcd(&den.content());
    num = num.div_scalar(&c);
    den = den.div_scalar(&c);
    if den.coeff(0).is_negative() {
        num = -num;
        den = -den;
    }
    Ok(RationalGF { num, den })
}

impl RationalGF {
    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    /// Taylor coefficients `a_0..=a_order`.
    pub fn series(&self, order: usize) -> Result<Vec<BigInt>> {
        if !self.den.coeff(0).is_one() {
            return Err(Error::NotNormalized);
        }
        let den = self.den.coeffs();
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut a = self.num.coeff(n);
            for (i, d) in den.iter().enumerate().skip(1).take(n) {
                a -= d * &out[n - i];
            }
            out.push(a);
        }
        Ok(out)
    }

    /// `num_coeffs=[0,1]; den_coeffs=[1,-2]`, ascending degree.
    pub fn coefficient_form(&self) -> String {
        let list = |p: &IntPolynomial| p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        format!("num_coeffs=[{}]; den_coeffs=[{}]", list(&self.num), list(&self.den))
    }
}

/// Pretty form such as `x/(1-2*x)`.
impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = |p: &IntPolynomial| p.coeffs().iter().filter(|c| !c.is_zero()).count();
        let wrap = |p: &IntPolynomial| if terms(p) > 1 { format!("({p})") } else { p.to_string() };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Parses the coefficient form and normalizes the result.
impl FromStr for RationalGF {
    type Err = Error;

    fn from_str(s: &str) -> Result<RationalGF> {
        let list = |part: &str, name: &str| -> Result<IntPolynomial> {
            let body = part
                .trim()
                .strip_prefix(name)
                .and_then(|r| r.trim_start().strip_prefix('='))
                .and_then(|r| r.trim().strip_prefix('['))
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::invalid(format!("expected {name}=[...] in {s:?}")))?;
            let coeffs = body
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|_| Error::invalid(format!("bad coefficient {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(IntPolynomial::new(coeffs))
        };
        let (a, b) = s.split_once(';').ok_or_else(|| Error::invalid(format!("expected two coefficient lists in {s:?}")))?;
        normalize(list(a, "num_coeffs")?, list(b, "den_coeffs")?)
    }
}

impl Serialize for RationalGF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.coefficient_form())
    }
}

impl<'de> Deserialize<'de> for RationalGF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The generating function `Σ count_accepted(d, n) xⁿ`.
///
/// Solves `(I - xA) v = a` on the minimal automaton, where `A` counts
/// transitions and `a` marks accepting states, by fraction-free elimination
/// with the start state ordered last, so its value is a ratio of two
/// entries of the final row.
pub fn gf_from_dfa(d: &Dfa) -> RationalGF {
    let d = minimize(d);
    let n = d.state_count();
    if n == 0 {
        return RationalGF { num: IntPolynomial::zero(), den: IntPolynomial::one() };
    }
    // position of each state in the elimination order
    let start = d.start();
    let pos = |s: usize| match s {
        s if s == start => n - 1,
        s if s == n - 1 => start,
        s => s,
    };
    let mut counts = vec![vec![0i64; n]; n];
    for s in 0..n {
        for &(_, t) in d.transitions(s) {
            counts[pos(s)][pos(t)] += 1;
        }
    }
    let mut m: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|i| {
            let mut row: Vec<IntPolynomial> = (0..n)
                .map(|j| {
                    let diag = i64::from(i == j);
                    IntPolynomial::from_i64s(&[diag, -counts[i][j]])
                })
                .collect();
            let acc = d.is_accepting(pos(i));
            row.push(IntPolynomial::from_i64s(&[i64::from(acc)]));
            row
        })
        .collect();
    // Bareiss: every leading principal minor of I - xA is 1 at x = 0, so the
    // diagonal pivots are never zero
    let mut prev = IntPolynomial::one();
    for k in 0..n - 1 {
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..=n {
                let v = &(pivot * &row[j]) - &(&factor * &pivot_row[j]);
                row[j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[k] = IntPolynomial::zero();
        }
        prev = m[k][k].clone();
    }
    normalize(m[n - 1][n].clone(), m[n - 1][n - 1].clone()).expect("constant term of det(I - xA) is 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_dfa, counts, DEFAULT_STATE_CAP};
    use crate::encoding::{Encoding, Mode};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn gf(basis: &str, encoding: Encoding, mode: Mode) -> RationalGF {
        gf_from_dfa(&build_dfa(&basis.parse().unwrap(), encoding, mode, DEFAULT_STATE_CAP).unwrap())
    }

    #[test]
    fn normalize_examples() {
        let g = normalize(p(&[0, 2]), p(&[2, -4])).unwrap();
        assert_eq!(g.to_string(), "x/(1-2*x)");
        assert_eq!(g.coefficient_form(), "num_coeffs=[0,1]; den_coeffs=[1,-2]");
        assert_eq!(normalize(p(&[0, 1]), p(&[1])).unwrap().to_string(), "x/1");
        assert_eq!(normalize(g.num().clone(), g.den().clone()).unwrap(), g);
        assert!(matches!(normalize(p(&[1]), p(&[0, 1])), Err(Error::NotNormalizable)));
        let shared = normalize(&p(&[0, 1]) * &p(&[1, 1]), &p(&[-1, 1]) * &p(&[1, 1])).unwrap();
        assert_eq!(shared.to_string(), "-x/(1-x)");
    }

    #[test]
    fn series_examples() {
        let g: RationalGF = "num_coeffs=[0,1]; den_coeffs=[1,-2]".parse().unwrap();
        let want: Vec<BigInt> = [0, 1, 2, 4, 8, 16].into_iter().map(BigInt::from).collect();
        assert_eq!(g.series(5).unwrap(), want);
        let g = normalize(p(&[0, 1]), p(&[1, -1])).unwrap();
        assert_eq!(g.series(4).unwrap(), [0, 1, 1, 1, 1].map(BigInt::from).to_vec());
        let half = normalize(p(&[1]), p(&[2])).unwrap();
        assert!(matches!(half.series(2), Err(Error::NotNormalized)));
    }

    #[test]
    fn automaton_examples() {
        assert_eq!(gf("121", Encoding::Vertical, Mode::Rgf).to_string(), "x/(1-2*x)");
        assert_eq!(gf("12", Encoding::Vertical, Mode::Rgf).to_string(), "x/(1-x)");
        assert_eq!(gf("121", Encoding::Horizontal, Mode::Matching).to_string(), "x^2/(1-x^2)");
        assert_eq!(gf("121", Encoding::Horizontal, Mode::Rgf), gf("121", Encoding::Vertical, Mode::Rgf));
    }

    #[test]
    fn series_matches_counts() {
        for b in ["112", "212 213", "123", "1342", "111 123"] {
            for (enc, mode) in [(Encoding::Horizontal, Mode::Rgf), (Encoding::Vertical, Mode::Rgf), (Encoding::Horizontal, Mode::Matching)] {
                let Ok(d) = build_dfa(&b.parse().unwrap(), enc, mode, DEFAULT_STATE_CAP) else { continue };
                let want: Vec<BigInt> = counts(&d, 12).into_iter().map(BigInt::from).collect();
                assert_eq!(gf_from_dfa(&d).series(12).unwrap(), want, "{b} {enc:?} {mode:?}");
            }
        }
    }
}
