//! Brute-force oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mzv_core::coaction::{
    coact, d_eta_rp, d_r_word, d_r_zeta, d_rp, d_rp_via_words, lie_reduce, untagged,
};
use mzv_core::depth1;
use mzv_core::exactnum::{QMatrix, Rational};
use mzv_core::words::{express_word, normalize, IISymbol, Letter, LinComb, MzvSymbol, RootOfUnity};
use num_traits::One;

/// All words of length `len` over `alphabet`.
pub fn words(alphabet: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(*l);
                    w
                })
            })
            .collect()
    })
}

/// All admissible `k = 0`, `s = 0` symbols of weight exactly `n` over `μ_N`.
pub fn symbols(modulus: u32, n: u32) -> Vec<MzvSymbol> {
    fn rec(
        modulus: u32,
        left: u32,
        xs: &mut Vec<u32>,
        eps: &mut Vec<u32>,
        out: &mut Vec<MzvSymbol>,
    ) {
        if left == 0 {
            if let Ok(z) = MzvSymbol::new(modulus, 0, xs.clone(), eps.clone(), 0) {
                out.push(z);
            }
            return;
        }
        for x in 1..=left {
            for e in 0..modulus {
                xs.push(x);
                eps.push(e);
                rec(modulus, left - x, xs, eps, out);
                xs.pop();
                eps.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(modulus, n, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// A formal term `L ⊗ M ⊗ R` with `L`, `M` products of symbols.
type Triple = (Vec<IISymbol>, Vec<IISymbol>, IISymbol);

/// `(id ⊗ Δ) Δ w`.
fn coassoc_right(w: &IISymbol) -> LinComb<Triple> {
    let mut out = LinComb::new();
    for (t, c) in coact(w).iter() {
        for (t2, c2) in coact(&t.right).iter() {
            out.add_term((t.left.clone(), t2.left.clone(), t2.right.clone()), c * c2);
        }
    }
    out
}

/// `(Δ ⊗ id) Δ w`, with `Δ` extended multiplicatively to products of left factors.
fn coassoc_left(w: &IISymbol) -> LinComb<Triple> {
    let mut out = LinComb::new();
    for (t, c) in coact(w).iter() {
        let mut acc: Vec<(Vec<IISymbol>, Vec<IISymbol>, Rational)> =
            vec![(Vec::new(), Vec::new(), c.clone())];
        for f in &t.left {
            let mut next = Vec::new();
            for (l, m, c) in &acc {
                for (t2, c2) in coact(f).iter() {
                    let mut l = l.clone();
                    l.extend(t2.left.iter().cloned());
                    let mut m = m.clone();
                    if !t2.right.body.is_empty() {
                        m.push(t2.right.clone());
                    }
                    next.push((l, m, c * c2));
                }
            }
            acc = next;
        }
        for (mut l, mut m, c) in acc {
            l.sort();
            m.sort();
            out.add_term((l, m, t.right.clone()), c);
        }
    }
    out
}

/// Normalizes every factor of every triple, multiplying out the resulting sums.
fn normalize_triples(t: &LinComb<Triple>, modulus: u32) -> LinComb<Triple> {
    let unit = IISymbol::unit(modulus);
    let product = |fs: &[IISymbol]| -> Vec<(Vec<IISymbol>, Rational)> {
        let mut acc = vec![(Vec::new(), Rational::one())];
        for f in fs {
            let nf = normalize(f, modulus);
            acc = acc
                .into_iter()
                .flat_map(|(p, c)| {
                    nf.iter()
                        .map(|(g, gc)| {
                            let mut p = p.clone();
                            if *g != unit {
                                p.push(g.clone());
                                p.sort();
                            }
                            (p, &c * gc)
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        acc
    };
    let mut out = LinComb::new();
    for ((l, m, r), c) in t.iter() {
        for (nl, cl) in product(l) {
            for (nm, cm) in product(m) {
                for (nr, cr) in normalize(r, modulus).iter() {
                    out.add_term((nl.clone(), nm.clone(), nr.clone()), c * &cl * &cm * cr);
                }
            }
        }
    }
    out
}

/// Checks `(Δ ⊗ id) Δ = (id ⊗ Δ) Δ` formally and after normalization on every word
/// `I(a; w; b)` over `{0, ±1}` of weight at most `max_weight`; returns the first failure.
pub fn coassociativity_failure(max_weight: usize) -> Option<IISymbol> {
    let alphabet = [Letter::Zero, Letter::root(2, 0), Letter::root(2, 1)];
    for n in 0..=max_weight {
        for body in words(&alphabet, n) {
            for a in alphabet {
                for b in alphabet {
                    let w = IISymbol::new(a, body.clone(), b);
                    let left = coassoc_left(&w);
                    let right = coassoc_right(&w);
                    if left != right || normalize_triples(&left, 2) != normalize_triples(&right, 2)
                    {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn shuffle(u: &[Letter], v: &[Letter]) -> LinComb<Vec<Letter>> {
    if u.is_empty() || v.is_empty() {
        return LinComb::single([u, v].concat(), Rational::one());
    }
    let mut out = LinComb::new();
    for (w, c) in shuffle(&u[1..], v).iter() {
        out.add_term([&u[..1], w.as_slice()].concat(), c.clone());
    }
    for (w, c) in shuffle(u, &v[1..]).iter() {
        out.add_term([&v[..1], w.as_slice()].concat(), c.clone());
    }
    out
}

/// `D_r I(0; w; 1)` as `(left factor, quotient body)` pairs, including the full cut when `r = |w|`.
fn d_r_cuts(w: &[Letter], r: usize, modulus: u32) -> Vec<(LinComb<MzvSymbol>, Vec<Letter>)> {
    if r == w.len() {
        return vec![(
            lie_reduce(Letter::Zero, w, Letter::root(modulus, 0), modulus),
            Vec::new(),
        )];
    }
    if r > w.len() {
        return Vec::new();
    }
    d_r_word(&IISymbol::standard(modulus, w.to_vec()), r)
        .unwrap()
        .into_iter()
        .map(|cut| (cut.left, cut.right.body))
        .collect()
}

/// `Σ_{w ∈ u ш v} D_r(w)` minus `D_r(u)·v + u·D_r(v)`, grouped by quotient word.
fn leibniz_defect(
    u: &[Letter],
    v: &[Letter],
    r: usize,
    modulus: u32,
) -> BTreeMap<Vec<Letter>, LinComb<MzvSymbol>> {
    let mut out: BTreeMap<Vec<Letter>, LinComb<MzvSymbol>> = BTreeMap::new();
    for (t, c) in shuffle(u, v).iter() {
        for (left, right) in d_r_cuts(t, r, modulus) {
            out.entry(right).or_default().add_scaled(&left, c);
        }
    }
    for (x, y, first) in [(u, v, true), (v, u, false)] {
        for (left, right) in d_r_cuts(x, r, modulus) {
            let quotients = if first {
                shuffle(&right, y)
            } else {
                shuffle(y, &right)
            };
            for (q, qc) in quotients.iter() {
                out.entry(q.clone()).or_default().add_scaled(&left, &-qc);
            }
        }
    }
    out
}

/// All products `I(0; x; 1) I(0; y; 1)` of weight `r` written in ζ-notation.
fn products(r: usize, modulus: u32) -> Vec<LinComb<MzvSymbol>> {
    let mut alphabet = vec![Letter::Zero];
    alphabet.extend((0..modulus).map(|e| Letter::root(modulus, e as i64)));
    let mut out = Vec::new();
    for i in 1..r {
        for x in words(&alphabet, i) {
            for y in words(&alphabet, r - i) {
                let mut p = LinComb::new();
                for (t, c) in shuffle(&x, &y).iter() {
                    p.add_scaled(&express_word(t, modulus), c);
                }
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn rank(vectors: &[&LinComb<MzvSymbol>]) -> usize {
    let index: BTreeMap<&MzvSymbol, usize> = vectors
        .iter()
        .flat_map(|v| v.keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, z)| (z, i))
        .collect();
    if vectors.is_empty() || index.is_empty() {
        return 0;
    }
    let mut m = QMatrix::zeros(vectors.len(), index.len());
    for (i, v) in vectors.iter().enumerate() {
        for (z, c) in v.iter() {
            m.set(i, index[z], c.clone());
        }
    }
    m.rank()
}

/// Letters from small codes: `0` is the letter 0, `e > 0` is `ξ_N^{e-1}`, codes taken mod `N + 1`.
pub fn letters(modulus: u32, codes: &[u32]) -> Vec<Letter> {
    codes
        .iter()
        .map(|&c| match c % (modulus + 1) {
            0 => Letter::Zero,
            e => Letter::root(modulus, e as i64 - 1),
        })
        .collect()
}

/// Whether `D_r` satisfies the Leibniz rule on `I(0; u; 1) I(0; v; 1)` for every `r`:
/// in each quotient slot the defect must lie in the span of products.
pub fn leibniz_holds(u: &[Letter], v: &[Letter], modulus: u32) -> bool {
    (1..u.len() + v.len()).all(|r| {
        let span = products(r, modulus);
        let base: Vec<&LinComb<MzvSymbol>> = span.iter().collect();
        let base_rank = rank(&base);
        leibniz_defect(u, v, r, modulus).values().all(|defect| {
            let mut with = base.clone();
            with.push(defect);
            rank(&with) == base_rank
        })
    })
}

/// For every `N = 2` symbol of weight `n`: the closed-form `D_{r,p}` equals the word route and
/// the depth-graded part of `D_r`, with the expected weights and depths. Returns the first failure.
pub fn depth_graded_failure(n: u32) -> Option<(MzvSymbol, u32)> {
    for z in symbols(2, n) {
        let p = z.depth();
        for r in 1..=n {
            let closed = d_rp(&z, r).unwrap();
            let via_words = d_rp_via_words(&z, r as usize).unwrap();
            let shapes = closed.keys().all(|k| {
                (k.left.weight(), k.left.depth()) == (r, 1)
                    && (k.right.weight(), k.right.depth() + 1) == (n - r, p)
            });
            let mut ok = shapes && untagged(&closed) == via_words;
            if r < n {
                let full = d_r_zeta(&z, r as usize).unwrap();
                ok &= full
                    .keys()
                    .all(|k| (k.left.weight(), k.right.weight()) == (r, n - r));
                let graded: LinComb<_> = full
                    .iter()
                    .filter(|(k, _)| k.right.depth() + 1 == p)
                    .map(|(k, c)| (k.clone(), c.clone()))
                    .collect();
                ok &= graded == via_words;
            }
            if !ok {
                return Some((z, r));
            }
        }
    }
    None
}

/// `D^η_{r,1} ζ(n; ε) = 0` for `r < n`, and `D^η_{n,1} ζ(n; ε)` is the table coordinate.
/// Returns the first failing `(N, n, ε exponent)`.
pub fn kernel_failure(max_weight: u32) -> Option<(u32, u32, u32)> {
    for modulus in [2u32, 3, 4, 6, 8] {
        for n in 1..=max_weight {
            for e in 0..modulus {
                let Ok(z) = MzvSymbol::new(modulus, 0, vec![n], vec![e], 0) else {
                    continue;
                };
                let lower = (1..n).all(|r| {
                    depth1::basis(modulus, r)
                        .unwrap()
                        .iter()
                        .all(|b| d_eta_rp(&z, r, b.root).unwrap().is_zero())
                });
                let eps = RootOfUnity::new(modulus, e as i64);
                let top = depth1::basis(modulus, n).unwrap().iter().all(|b| {
                    let expected = LinComb::single(
                        MzvSymbol::unit(modulus),
                        depth1::c_coeff(b.root, eps, n).unwrap(),
                    );
                    d_eta_rp(&z, n, b.root).unwrap() == expected
                });
                if !(lower && top) {
                    return Some((modulus, n, e));
                }
            }
        }
    }
    None
}
