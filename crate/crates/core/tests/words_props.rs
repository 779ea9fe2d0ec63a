mod common;

use mzv_core::exactnum::{binomial, Rational};
use mzv_core::words::{
    mzv_to_word, normalize, regularize_leading_zeros, shuffle_lin, word_to_mzv, IISymbol, Letter,
    LinComb, MzvSymbol,
};
use num_traits::{One, Signed};
use proptest::prelude::*;

use common::{symbols, words};

fn single(w: &[Letter]) -> LinComb<Vec<Letter>> {
    LinComb::single(w.to_vec(), Rational::one())
}

#[test]
fn word_round_trip() {
    for modulus in [2, 4] {
        for n in 1..=6 {
            for z in symbols(modulus, n) {
                let (sign, w) = mzv_to_word(&z).unwrap();
                assert_eq!(w.body.len() as u32, n);
                let (back_sign, back) = word_to_mzv(&w).unwrap();
                assert_eq!(back, z);
                assert_eq!(sign * back_sign, 1);
            }
        }
    }
}

#[test]
fn shuffle_commutes_and_associates() {
    let alphabet = [Letter::Zero, Letter::root(2, 0), Letter::root(2, 1)];
    let all: Vec<Vec<Letter>> = (0..=3).flat_map(|n| words(&alphabet, n)).collect();
    for u in &all {
        for v in &all {
            assert_eq!(
                shuffle_lin(&single(u), &single(v)),
                shuffle_lin(&single(v), &single(u))
            );
        }
    }
    let short: Vec<&Vec<Letter>> = all.iter().filter(|w| w.len() <= 2).collect();
    for u in &short {
        for v in &short {
            let uv = shuffle_lin(&single(u), &single(v));
            for w in &all {
                let vw = shuffle_lin(&single(v), &single(w));
                assert_eq!(shuffle_lin(&uv, &single(w)), shuffle_lin(&single(u), &vw));
            }
        }
    }
}

proptest! {
    #[test]
    fn shuffle_associates_on_length_three(
        u in prop::collection::vec(0u8..3, 0..=3),
        v in prop::collection::vec(0u8..3, 0..=3),
        w in prop::collection::vec(0u8..3, 0..=3),
    ) {
        let to = |s: &[u8]| -> LinComb<Vec<Letter>> {
            single(&s.iter().map(|&c| if c == 0 { Letter::Zero } else { Letter::root(2, c as i64 - 1) }).collect::<Vec<_>>())
        };
        let (u, v, w) = (to(&u), to(&v), to(&w));
        prop_assert_eq!(shuffle_lin(&shuffle_lin(&u, &v), &w), shuffle_lin(&u, &shuffle_lin(&v, &w)));
    }
}

/// Weak compositions of `k` into `p` parts, by brute-force enumeration of all tuples.
fn count_compositions(k: u32, p: usize) -> u64 {
    let mut count = 0;
    let total = (k as u64 + 1).pow(p as u32);
    for mut code in 0..total {
        let mut sum = 0;
        for _ in 0..p {
            sum += code % (k as u64 + 1);
            code /= k as u64 + 1;
        }
        count += u64::from(sum == k as u64);
    }
    count
}

#[test]
fn leading_zero_regularization() {
    for modulus in [2, 4] {
        for n in 1..=5 {
            for base in symbols(modulus, n) {
                for k in 1..=3 {
                    let z = MzvSymbol { k, ..base.clone() };
                    for (t, _) in regularize_leading_zeros(&z).iter() {
                        assert_eq!((t.weight(), t.depth(), t.k), (z.weight(), z.depth(), 0));
                        assert_eq!(t.eps, z.eps);
                    }
                }
            }
        }
    }
    for p in 1..=4usize {
        for k in 0..=5u32 {
            let mut eps = vec![0; p];
            eps[p - 1] = 1;
            let z = MzvSymbol::new(2, k, vec![1; p], eps, 0).unwrap();
            let total: Rational = regularize_leading_zeros(&z)
                .iter()
                .map(|(_, c)| c.abs())
                .sum();
            assert_eq!(
                total,
                Rational::from_integer(count_compositions(k, p).into())
            );
            assert_eq!(
                total,
                Rational::from_integer(binomial((k as usize + p - 1) as i64, k as i64))
            );
        }
    }
}

#[test]
fn normalize_is_idempotent() {
    for modulus in [2u32, 4] {
        let mut alphabet = vec![Letter::Zero];
        alphabet.extend((0..modulus).map(|e| Letter::root(modulus, e as i64)));
        for len in 0..=3 {
            for body in words(&alphabet, len) {
                for start in &alphabet {
                    for end in &alphabet {
                        let w = IISymbol::new(*start, body.clone(), *end);
                        let once = normalize(&w, modulus);
                        for (t, _) in once.iter() {
                            assert_eq!(
                                normalize(t, modulus),
                                LinComb::single(t.clone(), Rational::one()),
                                "{w}"
                            );
                        }
                    }
                }
            }
        }
    }
}
