//! The combinatorial coaction on iterated-integral words, the weight-graded
//! derivations `D_r`, and their depth-graded parts `D_{r,p}` in ζ-notation.
//!
//! Left factors of `D_r` live in the Lie coalgebra, where products vanish;
//! [`lie_reduce`] maps `I^l(a; w; b)` to ζ-notation by composing paths
//! through 0 and keeping the two indecomposable ends.

use std::fmt;

use num_traits::{One, Zero};

use crate::depth1;
use crate::error::{MzvError, Result};
use crate::exactnum::{binomial, qb, qi, Rational};
use crate::words::{
    express_word, letter_depth, mzv_to_word, normalize, IISymbol, Letter, LinComb, MzvSymbol,
    RootOfUnity,
};

/// Origin of a term of `D_{r,p}`: one of the cut families, or a raw word cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Cut of the first block.
    A0,
    /// Cut ending inside a block, merging with the block on its left.
    A,
    /// Cut starting inside a block, merging with the block on its right.
    B,
    /// Cut spanning the junction of two interior blocks exactly.
    C,
    /// Deconcatenation cut ending inside the last block.
    D,
    /// Deconcatenation cut spanning the junction with the last block exactly.
    Dprime,
    /// A term computed on words, with no family attached.
    Raw,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::A0 => "a0",
            Tag::A => "a",
            Tag::B => "b",
            Tag::C => "c",
            Tag::D => "d",
            Tag::Dprime => "d'",
            Tag::Raw => "raw",
        })
    }
}

/// One basis tensor `left ⊗ right` of a [`TensorComb`], with its tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey<R> {
    pub tag: Tag,
    pub left: MzvSymbol,
    pub right: R,
}

/// Element of `L_r ⊗ H`, expanded on tagged basis tensors.
pub type TensorComb<R> = LinComb<TensorKey<R>>;

/// Forgets tags, merging terms that differ only by origin.
pub fn untagged<R: Ord + Clone>(t: &TensorComb<R>) -> TensorComb<R> {
    t.iter()
        .map(|(k, c)| {
            (
                TensorKey {
                    tag: Tag::Raw,
                    left: k.left.clone(),
                    right: k.right.clone(),
                },
                c.clone(),
            )
        })
        .collect()
}

/// Keeps only the terms with the given tag.
pub fn with_tag<R: Ord + Clone>(t: &TensorComb<R>, tag: Tag) -> TensorComb<R> {
    t.iter()
        .filter(|(k, _)| k.tag == tag)
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect()
}

/// The cut `I(a_p; a_{p+1}..a_{p+r}; a_{p+r+1})` of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutRecord {
    pub p: usize,
    pub r: usize,
    pub sub: IISymbol,
}

/// One term of `D_r` on a word: the cut, its left factor in ζ-notation, and the quotient word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub record: CutRecord,
    pub left: LinComb<MzvSymbol>,
    pub right: IISymbol,
}

fn modulus_of(w: &IISymbol) -> Result<u32> {
    [w.start, w.end]
        .into_iter()
        .chain(w.body.iter().copied())
        .find_map(|l| match l {
            Letter::Root(r) => Some(r.modulus()),
            Letter::Zero => None,
        })
        .ok_or_else(|| MzvError::Malformed(format!("word {w} carries no root of unity")))
}

/// `I^l(a; w; b)` in ζ-notation, modulo products:
/// `[b ≠ 0] I(0; w/b; 1) + [a ≠ 0] (-1)^{|w|} I(0; reversed w / a; 1)`.
pub fn lie_reduce(a: Letter, w: &[Letter], b: Letter, modulus: u32) -> LinComb<MzvSymbol> {
    let mut out = LinComb::new();
    if w.is_empty() {
        return out;
    }
    if let Letter::Root(beta) = b {
        let scaled: Vec<Letter> = w.iter().map(|l| l.scaled_down(beta)).collect();
        out.add_scaled(&express_word(&scaled, modulus), &Rational::one());
    }
    if let Letter::Root(alpha) = a {
        let scaled: Vec<Letter> = w.iter().rev().map(|l| l.scaled_down(alpha)).collect();
        let sign = if w.len().is_multiple_of(2) { 1 } else { -1 };
        out.add_scaled(&express_word(&scaled, modulus), &qi(sign));
    }
    out
}

fn cuts(w: &IISymbol, r: usize, modulus: u32) -> Vec<Cut> {
    let n = w.body.len();
    let mut a = Vec::with_capacity(n + 2);
    a.push(w.start);
    a.extend_from_slice(&w.body);
    a.push(w.end);
    (0..=n - r)
        .map(|p| {
            let sub = IISymbol::new(a[p], a[p + 1..p + r + 1].to_vec(), a[p + r + 1]);
            let left = lie_reduce(sub.start, &sub.body, sub.end, modulus);
            let mut body = a[1..p + 1].to_vec();
            body.extend_from_slice(&a[p + r + 1..n + 1]);
            Cut {
                record: CutRecord { p, r, sub },
                left,
                right: IISymbol::new(w.start, body, w.end),
            }
        })
        .collect()
}

/// `D_r` on a word of weight `n`: one term per cut of interior length `r`, ordered by cut position.
pub fn d_r_word(w: &IISymbol, r: usize) -> Result<Vec<Cut>> {
    let n = w.body.len();
    if r == 0 || r >= n {
        return Err(MzvError::InvalidArgument(format!(
            "D_r needs 1 <= r < n, got r={r}, n={n}"
        )));
    }
    Ok(cuts(w, r, modulus_of(w)?))
}

/// `D_r` on a ζ-symbol, with right factors rewritten in ζ-notation.
pub fn d_r_zeta(z: &MzvSymbol, r: usize) -> Result<TensorComb<MzvSymbol>> {
    let (sign, w) = mzv_to_word(z)?;
    let mut out = LinComb::new();
    for cut in d_r_word(&w, r)? {
        add_cut(&mut out, &cut, z.modulus, &qi(sign));
    }
    Ok(out)
}

fn add_cut(out: &mut TensorComb<MzvSymbol>, cut: &Cut, modulus: u32, scale: &Rational) {
    if cut.left.is_zero() {
        return;
    }
    let mut right = LinComb::new();
    for (w, c) in normalize(&cut.right, modulus).iter() {
        if w.start.is_zero() {
            right.add_scaled(&express_word(&w.body, modulus), c);
        }
    }
    for (l, lc) in cut.left.iter() {
        for (rt, rc) in right.iter() {
            out.add_term(
                TensorKey {
                    tag: Tag::Raw,
                    left: l.clone(),
                    right: rt.clone(),
                },
                lc * rc * scale,
            );
        }
    }
}

/// Depth-graded part of `D_r` computed on words: cuts whose quotient keeps `p-1` nonzero letters.
/// Admits `r = n`, where the only cut is the whole word.
pub fn d_rp_via_words(z: &MzvSymbol, r: usize) -> Result<TensorComb<MzvSymbol>> {
    if z.k != 0 {
        return Err(MzvError::InvalidArgument(
            "regularize leading zeros first".into(),
        ));
    }
    let (sign, w) = mzv_to_word(z)?;
    let n = w.body.len();
    if r == 0 || r > n {
        return Err(MzvError::InvalidArgument(format!("r={r} outside 1..={n}")));
    }
    let p = z.depth();
    let mut out = LinComb::new();
    for cut in cuts(&w, r, z.modulus) {
        if letter_depth(&cut.right.body) + 1 == p {
            add_cut(&mut out, &cut, z.modulus, &qi(sign));
        }
    }
    Ok(out)
}

fn pm(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn binom(n: u32, k: i64) -> Rational {
    qb(binomial(n as i64, k))
}

/// `D_{r,p}` from the closed cut formula, each term tagged with its family.
///
/// Left factors are `ζ^l(r; ε)`; the regularized `ζ^l(1; 1) = 0` is dropped.
/// Right factors have depth `p - 1`.
pub fn d_rp(z: &MzvSymbol, r: u32) -> Result<TensorComb<MzvSymbol>> {
    if z.k != 0 || z.s != 0 {
        return Err(MzvError::InvalidArgument(
            "D_{r,p} takes k = 0, s = 0 symbols".into(),
        ));
    }
    let p = z.depth();
    let n = z.modulus;
    let x = |i: usize| z.xs[i - 1];
    let e = |i: usize| RootOfUnity::new(n, z.eps[i - 1] as i64);
    let mut out = LinComb::new();
    let mut put = |tag: Tag, root: RootOfUnity, c: Rational, xs: Vec<u32>, eps: Vec<u32>| {
        if c.is_zero() || (r == 1 && root.is_one()) {
            return;
        }
        out.add_term(
            TensorKey {
                tag,
                left: MzvSymbol::raw(n, vec![r], vec![root.exp()]),
                right: MzvSymbol::raw(n, xs, eps),
            },
            c,
        );
    };
    // Replaces the 1-based positions i, i+1 by a single entry.
    let merge = |i: usize, nx: u32, ne: RootOfUnity| {
        let mut xs = z.xs.clone();
        let mut eps = z.eps.clone();
        xs.splice(i - 1..=i, [nx]);
        eps.splice(i - 1..=i, [ne.exp()]);
        (xs, eps)
    };
    if p == 0 {
        return Ok(out);
    }
    if r == x(1) {
        put(
            Tag::A0,
            e(1),
            Rational::one(),
            z.xs[1..].to_vec(),
            z.eps[1..].to_vec(),
        );
    }
    for i in 2..p {
        if x(i) <= r && r + 1 < x(i) + x(i - 1) {
            let c = qi(pm(r - x(i))) * binom(r - 1, (r - x(i)) as i64);
            let (xs, eps) = merge(i - 1, x(i) + x(i - 1) - r, e(i - 1).mul(e(i)));
            put(Tag::A, e(i), c, xs, eps);
        }
    }
    for i in 1..p {
        if x(i) <= r && r + 1 < x(i) + x(i + 1) {
            let c = qi(pm(x(i))) * binom(r - 1, (r - x(i)) as i64);
            let (xs, eps) = merge(i, x(i) + x(i + 1) - r, e(i).mul(e(i + 1)));
            put(Tag::B, e(i).inv(), c, xs, eps);
        }
    }
    for i in 2..p {
        let prod = e(i - 1).mul(e(i));
        if r + 1 == x(i) + x(i - 1) && !prod.is_one() {
            let (xs, eps) = merge(i - 1, 1, prod);
            let c1 = qi(pm(x(i - 1))) * binom(r - 1, (x(i) - 1) as i64);
            let c2 = qi(-pm(x(i - 1))) * binom(r - 1, (x(i - 1) - 1) as i64);
            put(Tag::C, e(i - 1).inv(), c1, xs.clone(), eps.clone());
            put(Tag::C, e(i), c2, xs, eps);
        }
    }
    if p >= 2 {
        let prod = e(p - 1).mul(e(p));
        if x(p) <= r && r + 1 < x(p) + x(p - 1) {
            let c = qi(pm(r - x(p))) * binom(r - 1, (r - x(p)) as i64);
            let (xs, eps) = merge(p - 1, x(p - 1) + x(p) - r, prod);
            put(Tag::D, e(p), c, xs, eps);
        }
        if r + 1 == x(p) + x(p - 1) && !prod.is_one() {
            let (xs, eps) = merge(p - 1, 1, prod);
            let c1 = qi(pm(x(p - 1))) * binom(r - 1, (x(p) - 1) as i64);
            let c2 = qi(-pm(x(p - 1))) * binom(r - 1, (x(p - 1) - 1) as i64);
            put(Tag::Dprime, e(p - 1).inv(), c1, xs.clone(), eps.clone());
            put(Tag::Dprime, e(p), c2, xs, eps);
        }
    }
    Ok(out)
}

/// Applies `Σ_η c_η D^η_{r,p}` for a functional on the depth-1 basis roots,
/// given as `(root exponent, weight)` pairs, to a combination of symbols.
pub fn d_functional_rp(
    z: &LinComb<MzvSymbol>,
    r: u32,
    functional: &[(u32, Rational)],
) -> Result<LinComb<MzvSymbol>> {
    let mut out = LinComb::new();
    for (sym, c) in z.iter() {
        for (key, kc) in d_rp(sym, r)?.iter() {
            let proj = depth1::reduce_coords(r, key.left.root(0))?
                .into_iter()
                .map(|(root, v)| {
                    functional
                        .iter()
                        .filter(|(f, _)| *f == root)
                        .fold(Rational::zero(), |s, (_, w)| s + w * &v)
                })
                .fold(Rational::zero(), |s, v| s + v);
            out.add_term(key.right.clone(), c * kc * proj);
        }
    }
    Ok(out)
}

/// `D^η_{r,p}`: the coordinate of `D_{r,p}(z)` on the depth-1 basis element `ζ^l(r; η)`.
pub fn d_eta_rp(z: &MzvSymbol, r: u32, eta: RootOfUnity) -> Result<LinComb<MzvSymbol>> {
    let basis = depth1::table(eta.modulus())?.basis_roots(r);
    if !basis.contains(&eta.exp()) {
        return Err(MzvError::InvalidArgument(format!(
            "ζ^l({r}; ξ_{}^{}) is not a depth-1 basis element",
            eta.modulus(),
            eta.exp()
        )));
    }
    d_functional_rp(
        &LinComb::single(z.clone(), Rational::one()),
        r,
        &[(eta.exp(), Rational::one())],
    )
}

/// One term of the coaction: a formal product of left factors and the quotient word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoactTerm {
    /// Nontrivial left factors, sorted; the empty product is 1.
    pub left: Vec<IISymbol>,
    pub right: IISymbol,
}

/// The coaction `Δ I(a_0; a_1..a_n; a_{n+1})` summed over all `2^n` subsequences.
///
/// Only `I(a; ; b) = 1` is applied; factors stay formal so that both sides of
/// coassociativity can be compared term by term. Use [`coact_normalized`] for
/// the reduced form.
pub fn coact(w: &IISymbol) -> LinComb<CoactTerm> {
    let n = w.body.len();
    let mut a = Vec::with_capacity(n + 2);
    a.push(w.start);
    a.extend_from_slice(&w.body);
    a.push(w.end);
    let mut out = LinComb::new();
    for mask in 0u64..(1u64 << n) {
        let mut idx = vec![0usize];
        idx.extend((1..=n).filter(|i| mask >> (i - 1) & 1 == 1));
        idx.push(n + 1);
        let mut left: Vec<IISymbol> = idx
            .windows(2)
            .filter(|s| s[1] > s[0] + 1)
            .map(|s| IISymbol::new(a[s[0]], a[s[0] + 1..s[1]].to_vec(), a[s[1]]))
            .collect();
        left.sort();
        let right = IISymbol::new(
            w.start,
            idx[1..idx.len() - 1].iter().map(|&i| a[i]).collect(),
            w.end,
        );
        out.add_term(CoactTerm { left, right }, Rational::one());
    }
    out
}

/// Normalizes every factor of a coaction term; zero factors kill the term, units drop out.
pub fn normalize_term(t: &CoactTerm, modulus: u32) -> LinComb<CoactTerm> {
    let unit = IISymbol::unit(modulus);
    let mut acc: LinComb<CoactTerm> = LinComb::new();
    let right = normalize(&t.right, modulus);
    for (r, rc) in right.iter() {
        acc.add_term(
            CoactTerm {
                left: Vec::new(),
                right: r.clone(),
            },
            rc.clone(),
        );
    }
    for f in &t.left {
        let nf = normalize(f, modulus);
        let mut next = LinComb::new();
        for (term, c) in acc.iter() {
            for (g, gc) in nf.iter() {
                let mut left = term.left.clone();
                if *g != unit {
                    left.push(g.clone());
                    left.sort();
                }
                next.add_term(
                    CoactTerm {
                        left,
                        right: term.right.clone(),
                    },
                    c * gc,
                );
            }
        }
        acc = next;
    }
    acc
}

/// [`coact`] followed by [`normalize_term`] on every term.
pub fn coact_normalized(w: &IISymbol, modulus: u32) -> LinComb<CoactTerm> {
    let mut out = LinComb::new();
    for (t, c) in coact(w).iter() {
        out.add_scaled(&normalize_term(t, modulus), c);
    }
    out
}

/// Number of subsequences enumerated by [`coact`] on a weight-`n` word.
pub fn coact_term_count(n: usize) -> u64 {
    1u64 << n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    fn z2(xs: &[u32], eps: &[u32]) -> MzvSymbol {
        MzvSymbol::new(2, 0, xs.to_vec(), eps.to_vec(), 0).unwrap()
    }

    fn closed_coeff(z: &MzvSymbol, r: u32, root: u32, right: &MzvSymbol) -> Rational {
        d_rp(z, r)
            .unwrap()
            .iter()
            .filter(|(k, _)| k.left.eps[0] == root && k.right == *right)
            .fold(Rational::zero(), |s, (_, c)| s + c)
    }

    #[test]
    fn coact_weight_one_is_primitive() {
        let w = IISymbol::standard(2, vec![Letter::root(2, 1)]);
        let c = coact_normalized(&w, 2);
        assert_eq!(c.len(), 2);
        let prim = CoactTerm {
            left: vec![w.clone()],
            right: IISymbol::unit(2),
        };
        let triv = CoactTerm {
            left: Vec::new(),
            right: w.clone(),
        };
        assert_eq!(c.coeff(&prim), qi(1));
        assert_eq!(c.coeff(&triv), qi(1));
    }

    #[test]
    fn coact_counts_subsequences() {
        let l = [
            Letter::Zero,
            Letter::root(2, 1),
            Letter::root(2, 0),
            Letter::Zero,
        ];
        let w = IISymbol::standard(2, l.to_vec());
        let total: Rational = coact(&w).iter().fold(Rational::zero(), |s, (_, c)| s + c);
        assert_eq!(total, qi(coact_term_count(4) as i64));
    }

    #[test]
    fn depth_one_only_first_cut() {
        let z = z2(&[5], &[1]);
        assert!(d_rp(&z, 3).unwrap().is_zero());
        let d = d_rp(&z, 5).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.keys().next().unwrap().tag, Tag::A0);
    }

    #[test]
    fn euler_sum_depth_two_bracket() {
        // D_{2r+1,2}(ζ(2a+1, -(2b+1))) projected on ζ^l(2r+1; -1).
        for a in 1..4u32 {
            for b in 1..4u32 {
                let z = z2(&[2 * a + 1, 2 * b + 1], &[0, 1]);
                for r in 1..=a + b {
                    let right = z2(&[2 * (a + b - r) + 1], &[1]);
                    let got = d_eta_rp(&z, 2 * r + 1, RootOfUnity::new(2, 1))
                        .unwrap()
                        .coeff(&right);
                    let t = q(1, 1 << (2 * r)) - qi(1);
                    let mut expect = Rational::zero();
                    if a <= r && r < a + b {
                        expect -= binom(2 * r, 2 * a as i64);
                    }
                    if r == a {
                        expect += qi(1);
                    }
                    if b <= r && r < a + b {
                        expect += binom(2 * r, 2 * b as i64) * (q(1, 1 << (2 * r)) - qi(1));
                    }
                    if r == a + b {
                        expect += (t - qi(1)) * binom(2 * (a + b), 2 * b as i64);
                    }
                    // Left factors are projected on ζ^l(2r+1; -1); the bracket uses ζ^l(2r+1; 1).
                    let ratio = depth1::euler_sum_ratio(r);
                    assert_eq!(got, expect * ratio, "a={a} b={b} r={r}");
                }
            }
        }
    }

    #[test]
    fn deconcatenation_on_odd_family() {
        let z = z2(&[3, 1], &[0, 1]);
        let d = d_eta_rp(&z, 1, RootOfUnity::new(2, 1)).unwrap();
        assert_eq!(d, LinComb::single(z2(&[3], &[1]), qi(1)));
        let z = z2(&[3, 5], &[0, 1]);
        assert!(d_eta_rp(&z, 1, RootOfUnity::new(2, 1)).unwrap().is_zero());
    }

    #[test]
    fn even_derivation_depth_two_closed_form() {
        for n in [3u32, 4] {
            let xi = RootOfUnity::new(n, 1);
            for x1 in 1..7u32 {
                for x2 in 1..7u32 {
                    let z = MzvSymbol::new(n, 0, vec![x1, x2], vec![0, 1], 0).unwrap();
                    for r in 1..=(x1 + x2) / 2 {
                        let d = d_eta_rp(&z, 2 * r, xi).unwrap();
                        let right = MzvSymbol::raw(n, vec![x1 + x2 - 2 * r], vec![1]);
                        let expect = if x2 <= 2 * r && 2 * r < x1 + x2 {
                            qi(pm(x2)) * binom(2 * r - 1, (x2 - 1) as i64)
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(d.coeff(&right), expect, "N={n} ({x1},{x2}) r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_words_on_samples() {
        let z = z2(&[3, 3, 3], &[0, 0, 1]);
        for r in 1..9 {
            assert_eq!(
                untagged(&d_rp(&z, r).unwrap()),
                d_rp_via_words(&z, r as usize).unwrap()
            );
        }
        let z = MzvSymbol::new(8, 0, vec![2, 1, 3], vec![4, 3, 5], 0).unwrap();
        for r in 1..6 {
            assert_eq!(
                untagged(&d_rp(&z, r).unwrap()),
                d_rp_via_words(&z, r as usize).unwrap()
            );
        }
        assert_eq!(
            closed_coeff(&z2(&[3, 3], &[0, 1]), 3, 1, &z2(&[3], &[1])),
            qi(1)
        );
    }

    #[test]
    fn d_r_rejects_full_weight() {
        let (_, w) = mzv_to_word(&z2(&[3], &[1])).unwrap();
        assert!(d_r_word(&w, 3).is_err());
        assert!(d_r_word(&w, 0).is_err());
        assert_eq!(d_r_word(&w, 1).unwrap().len(), 3);
    }
}
