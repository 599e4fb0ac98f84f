//! Polynomial arithmetic, normal forms, and generating functions checked
//! against automaton counts far beyond the series order used elsewhere.

use num_bigint::{BigInt, Sign};
use proptest::prelude::*;

use insertion_encoding::automaton::{build_dfa, counts, minimize, DEFAULT_STATE_CAP};
use insertion_encoding::error::Error;
use insertion_encoding::genfunc::{gf_from_dfa, normalize, IntPolynomial, RationalGF};
use insertion_encoding::{Basis, Encoding, Mode};

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

/// Coefficients of magnitude below 2^256.
fn big() -> impl Strategy<Value = BigInt> {
    (any::<bool>(), prop::array::uniform8(any::<u32>())).prop_map(|(neg, digits)| {
        BigInt::from_slice(if neg { Sign::Minus } else { Sign::Plus }, &digits)
    })
}

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(big(), 0..6).prop_map(IntPolynomial::new)
}

proptest! {
    #[test]
    fn addition_is_associative(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn subtraction_inverts_addition(a in poly(), b in poly()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_undoes_products(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_divides_both(a in poly(), b in poly(), c in poly()) {
        prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y);
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
        // the common factor survives up to its content
        prop_assert!(g.div_exact(&c.primitive_part()).is_some());
    }

    #[test]
    fn normalize_is_canonical(n in poly(), d in poly(), k in big()) {
        prop_assume!(d.coeff(0) != BigInt::from(0) && k != BigInt::from(0));
        let once = normalize(n.clone(), d.clone()).unwrap();
        let again = normalize(once.num().clone(), once.den().clone()).unwrap();
        prop_assert_eq!(&again, &once);
        let scaled = normalize(n.scale(&k), d.scale(&k)).unwrap();
        prop_assert_eq!(&scaled, &once);
        prop_assert!(once.den().coeff(0) > BigInt::from(0));
    }
}

#[test]
fn normal_forms() {
    let g = normalize(p(&[0, 2]), p(&[2, -4])).unwrap();
    assert_eq!(g.to_string(), "x/(1-2*x)");
    assert_eq!(g.coefficient_form(), "num_coeffs=[0,1]; den_coeffs=[1,-2]");
    let common = normalize(&p(&[0, 1]) * &p(&[1, 1]), &p(&[1, -2]) * &p(&[1, 1])).unwrap();
    assert_eq!(common, g);
    assert_eq!(normalize(p(&[0, 1]), p(&[1])).unwrap().to_string(), "x/1");
    assert!(matches!(normalize(p(&[1]), p(&[0, 1])), Err(Error::NotNormalizable)));
    let half = normalize(p(&[0, 1]), p(&[2])).unwrap();
    assert!(matches!(half.series(3), Err(Error::NotNormalized)));
}

#[test]
fn text_forms_round_trip() {
    let g: RationalGF = "num_coeffs=[0,1]; den_coeffs=[1,-2]".parse().unwrap();
    assert_eq!(g.series(5).unwrap(), [0, 1, 2, 4, 8, 16].map(BigInt::from));
    assert_eq!(g.coefficient_form().parse::<RationalGF>().unwrap(), g);
    let json = serde_json::to_string(&g).unwrap();
    assert_eq!(serde_json::from_str::<RationalGF>(&json).unwrap(), g);
    assert!("num_coeffs=[0,1]".parse::<RationalGF>().is_err());
    assert!("num_coeffs=[a]; den_coeffs=[1]".parse::<RationalGF>().is_err());
}

/// Automaton counts to a long order match the series and satisfy the
/// recurrence read off the denominator.
#[test]
fn long_range_recurrence() {
    let cases = [
        ("112", Encoding::Vertical, Mode::Rgf),
        ("{1432, 2314}", Encoding::Horizontal, Mode::Rgf),
        ("{2121, 2314, 3212}", Encoding::Vertical, Mode::Rgf),
        ("{1324, 2431}", Encoding::Horizontal, Mode::Matching),
    ];
    for (b, e, m) in cases {
        let b: Basis = b.parse().unwrap();
        let d = build_dfa(&b, e, m, DEFAULT_STATE_CAP).unwrap();
        let gf = gf_from_dfa(&d);
        assert_eq!(gf_from_dfa(&minimize(&d)), gf, "{b} {e} {m}");
        let order = 60;
        let a: Vec<BigInt> = counts(&d, order).into_iter().map(BigInt::from).collect();
        assert_eq!(gf.series(order).unwrap(), a, "{b} {e} {m}");
        let den = gf.den().coeffs();
        let start = gf.num().degree().unwrap_or(0) + 1;
        for n in start.max(den.len())..=order {
            let s: BigInt = den.iter().enumerate().map(|(i, c)| c * &a[n - i]).sum();
            assert_eq!(s, BigInt::from(0), "{b} {e} {m}: recurrence fails at {n}");
        }
    }
}
