//! Words over `{0} ∪ μ_N`, iterated-integral symbols, and the conversion
//! between word notation and ζ-notation.
//!
//! A multiple zeta value at roots of unity is written
//! `ζ_k(x_1..x_p; ε_1..ε_p) = Σ_{0<n_1<..<n_p} ε_1^{n_1}..ε_p^{n_p} / (n_1^{x_1}..n_p^{x_p})`
//! with `k` leading zeros in its word. Its iterated-integral form is
//! `(-1)^p I(0; 0^k η_1 0^{x_1-1} .. η_p 0^{x_p-1}; 1)` with `η_i = (ε_i..ε_p)^{-1}`.
//! Roots are stored as exponents of the fixed primitive root `ξ_N = exp(2πi/N)`.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{MzvError, Result};
use crate::exactnum::{binomial, format_rational, qb, qi, Rational};

/// Moduli for which the engine carries depth-1 tables and dimension data.
pub const SUPPORTED_MODULI: [u32; 6] = [1, 2, 3, 4, 6, 8];

/// Rejects moduli outside [`SUPPORTED_MODULI`].
pub fn check_modulus(n: u32) -> Result<()> {
    if SUPPORTED_MODULI.contains(&n) {
        Ok(())
    } else {
        Err(MzvError::Unsupported(format!("modulus N={n}")))
    }
}

/// The root of unity `ξ_N^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    modulus: u32,
    exp: u32,
}

impl RootOfUnity {
    /// `ξ_N^exp`, with the exponent reduced mod `N`.
    pub fn new(modulus: u32, exp: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        RootOfUnity {
            modulus,
            exp: exp.rem_euclid(modulus as i64) as u32,
        }
    }

    pub fn one(modulus: u32) -> Self {
        RootOfUnity::new(modulus, 0)
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }

    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        debug_assert_eq!(self.modulus, other.modulus);
        RootOfUnity::new(self.modulus, self.exp as i64 + other.exp as i64)
    }

    pub fn div(self, other: RootOfUnity) -> RootOfUnity {
        self.mul(other.inv())
    }

    pub fn inv(self) -> RootOfUnity {
        RootOfUnity::new(self.modulus, -(self.exp as i64))
    }
}

/// A letter of the alphabet `{0} ∪ μ_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    Root(RootOfUnity),
}

impl Letter {
    pub fn root(modulus: u32, exp: i64) -> Letter {
        Letter::Root(RootOfUnity::new(modulus, exp))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Letter::Zero)
    }

    /// Divides a nonzero letter by `a`; zero stays zero.
    pub fn scaled_down(self, a: RootOfUnity) -> Letter {
        match self {
            Letter::Zero => Letter::Zero,
            Letter::Root(r) => Letter::Root(r.div(a)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Zero => f.write_str("0"),
            Letter::Root(r) => write!(f, "x{}", r.exp),
        }
    }
}

/// Number of nonzero letters of a word.
pub fn letter_depth(w: &[Letter]) -> usize {
    w.iter().filter(|l| !l.is_zero()).count()
}

/// The iterated-integral symbol `I(a_0; a_1..a_n; a_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IISymbol {
    pub start: Letter,
    pub body: Vec<Letter>,
    pub end: Letter,
}

impl IISymbol {
    pub fn new(start: Letter, body: Vec<Letter>, end: Letter) -> Self {
        IISymbol { start, body, end }
    }

    /// `I(0; body; 1)` over `μ_N`.
    pub fn standard(modulus: u32, body: Vec<Letter>) -> Self {
        IISymbol::new(Letter::Zero, body, Letter::root(modulus, 0))
    }

    /// The unit `I(0; ; 1) = 1`.
    pub fn unit(modulus: u32) -> Self {
        IISymbol::standard(modulus, Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.body.len()
    }
}

impl fmt::Display for IISymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(ToString::to_string).collect();
        write!(f, "I({}; {}; {})", self.start, body.join(","), self.end)
    }
}

/// The symbol `ζ_k(x⃗; ε⃗)·(2πi)^s` over `μ_N`, roots stored as exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MzvSymbol {
    pub modulus: u32,
    pub k: u32,
    pub xs: Vec<u32>,
    pub eps: Vec<u32>,
    pub s: u32,
}

impl MzvSymbol {
    /// Validated constructor.
    pub fn new(modulus: u32, k: u32, xs: Vec<u32>, eps: Vec<u32>, s: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(MzvError::Malformed("modulus 0".into()));
        }
        if xs.len() != eps.len() {
            return Err(MzvError::Malformed(format!(
                "{} exponents but {} roots",
                xs.len(),
                eps.len()
            )));
        }
        if xs.contains(&0) {
            return Err(MzvError::Malformed("exponents must be positive".into()));
        }
        if let Some(&e) = eps.iter().find(|&&e| e >= modulus) {
            return Err(MzvError::Malformed(format!(
                "root exponent {e} not reduced mod {modulus}"
            )));
        }
        if xs.last() == Some(&1) && eps.last() == Some(&0) {
            return Err(MzvError::Malformed(
                "divergent symbol: (x_p, ε_p) = (1, 1)".into(),
            ));
        }
        if modulus <= 2 && s % 2 == 1 {
            return Err(MzvError::Malformed(format!(
                "odd power of 2πi for N={modulus}"
            )));
        }
        Ok(MzvSymbol {
            modulus,
            k,
            xs,
            eps,
            s,
        })
    }

    /// Constructor for internally generated symbols already known to be admissible.
    pub(crate) fn raw(modulus: u32, xs: Vec<u32>, eps: Vec<u32>) -> Self {
        debug_assert_eq!(xs.len(), eps.len());
        MzvSymbol {
            modulus,
            k: 0,
            xs,
            eps,
            s: 0,
        }
    }

    /// The depth-0 unit symbol.
    pub fn unit(modulus: u32) -> Self {
        MzvSymbol::raw(modulus, Vec::new(), Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.xs.len()
    }

    pub fn weight(&self) -> u32 {
        self.k + self.xs.iter().sum::<u32>() + self.s
    }

    pub fn root(&self, i: usize) -> RootOfUnity {
        RootOfUnity::new(self.modulus, self.eps[i] as i64)
    }

    /// Same symbol with the `(2πi)^s` factor removed.
    pub fn without_pi(&self) -> MzvSymbol {
        MzvSymbol {
            s: 0,
            ..self.clone()
        }
    }

    /// The `zeta(3,-5)` shorthand for Euler sums, when it applies.
    pub fn euler_shorthand(&self) -> Option<String> {
        if self.modulus != 2 || self.k != 0 {
            return None;
        }
        let args: Vec<String> = self
            .xs
            .iter()
            .zip(&self.eps)
            .map(|(x, e)| {
                if *e == 1 {
                    format!("-{x}")
                } else {
                    x.to_string()
                }
            })
            .collect();
        let mut out = format!("zeta({})", args.join(","));
        if self.s > 0 {
            out.push_str(&format!(" * pi^{}", self.s));
        }
        Some(out)
    }
}

impl fmt::Display for MzvSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "zeta[{}]({}; {} | {})",
            self.modulus,
            self.k,
            join(&self.xs),
            join(&self.eps)
        )?;
        if self.s > 0 {
            write!(f, " * pi^{}", self.s)?;
        }
        Ok(())
    }
}

fn parse_u32_list(s: &str, what: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| MzvError::Malformed(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

impl std::str::FromStr for MzvSymbol {
    type Err = MzvError;

    /// Parses `zeta[N](k; x1,..,xp | e1,..,ep) * pi^s`, or the Euler-sum shorthand `zeta(3,-5)`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| MzvError::Malformed(format!("{why} in {text:?}"));
        let (head, s) = match text.split_once('*') {
            Some((h, tail)) => {
                let tail = tail.trim();
                let pw = tail
                    .strip_prefix("pi^")
                    .ok_or_else(|| bad("expected pi^s after '*'"))?;
                (
                    h.trim(),
                    pw.trim().parse::<u32>().map_err(|_| bad("bad pi power"))?,
                )
            }
            None => (text.trim(), 0),
        };
        let rest = head
            .strip_prefix("zeta")
            .ok_or_else(|| bad("missing 'zeta'"))?;
        if let Some(rest) = rest.strip_prefix('[') {
            let (n, rest) = rest.split_once(']').ok_or_else(|| bad("unclosed '['"))?;
            let modulus: u32 = n.trim().parse().map_err(|_| bad("bad modulus"))?;
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("expected parenthesised arguments"))?;
            let (k, args) = inner.split_once(';').ok_or_else(|| bad("missing ';'"))?;
            let (xs, eps) = args.split_once('|').ok_or_else(|| bad("missing '|'"))?;
            let k: u32 = k
                .trim()
                .parse()
                .map_err(|_| bad("bad leading-zero count"))?;
            MzvSymbol::new(
                modulus,
                k,
                parse_u32_list(xs, "exponent")?,
                parse_u32_list(eps, "root")?,
                s,
            )
        } else {
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("expected parenthesised arguments"))?;
            let mut xs = Vec::new();
            let mut eps = Vec::new();
            for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let v: i64 = t.parse().map_err(|_| bad("bad Euler-sum argument"))?;
                if v == 0 {
                    return Err(bad("zero argument"));
                }
                xs.push(v.unsigned_abs() as u32);
                eps.push(u32::from(v < 0));
            }
            MzvSymbol::new(2, 0, xs, eps, s)
        }
    }
}

/// Finitely supported formal Q-linear combination; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinComb<T: Ord> {
    terms: BTreeMap<T, Rational>,
}

impl<T: Ord> Default for LinComb<T> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> LinComb<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: T, c: Rational) -> Self {
        let mut l = Self::new();
        l.add_term(t, c);
        l
    }

    /// Adds `c·t`, dropping the entry if it cancels.
    pub fn add_term(&mut self, t: T, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c·other`.
    pub fn add_scaled(&mut self, other: &LinComb<T>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (t, v) in &other.terms {
            self.add_term(t.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> LinComb<T> {
        let mut out = LinComb::new();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, t: &T) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    /// Applies a linear map given on generators.
    pub fn map_linear<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> LinComb<U>) -> LinComb<U> {
        let mut out = LinComb::new();
        for (t, c) in &self.terms {
            out.add_scaled(&f(t), c);
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<(T, Rational)> for LinComb<T> {
    fn from_iter<I: IntoIterator<Item = (T, Rational)>>(iter: I) -> Self {
        let mut l = LinComb::new();
        for (t, c) in iter {
            l.add_term(t, c);
        }
        l
    }
}

impl<T: Ord + fmt::Display> fmt::Display for LinComb<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("({})*{}", format_rational(c), t))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Signed word form `ζ_k(x⃗; ε⃗) = sign · I(0; word; 1)`.
pub fn mzv_to_word(z: &MzvSymbol) -> Result<(i64, IISymbol)> {
    if z.s != 0 {
        return Err(MzvError::InvalidArgument(
            "a (2πi)^s factor has no iterated-integral word".into(),
        ));
    }
    let n = z.modulus;
    let mut body = vec![Letter::Zero; z.k as usize];
    for i in 0..z.depth() {
        let prod: i64 = z.eps[i..].iter().map(|&e| e as i64).sum();
        body.push(Letter::root(n, -prod));
        body.extend(std::iter::repeat_n(Letter::Zero, z.xs[i] as usize - 1));
    }
    let sign = if z.depth().is_multiple_of(2) { 1 } else { -1 };
    Ok((sign, IISymbol::standard(n, body)))
}

/// Splits a body `0^k η_1 0^{x_1-1} .. η_p 0^{x_p-1}` into `(k, x⃗, η⃗)`.
fn parse_blocks(body: &[Letter]) -> (u32, Vec<u32>, Vec<RootOfUnity>) {
    let k = body.iter().take_while(|l| l.is_zero()).count();
    let mut xs = Vec::new();
    let mut etas = Vec::new();
    for l in &body[k..] {
        match l {
            Letter::Root(r) => {
                etas.push(*r);
                xs.push(1);
            }
            Letter::Zero => *xs.last_mut().expect("block after a root") += 1,
        }
    }
    (k as u32, xs, etas)
}

/// `ε_p = η_p^{-1}`, `ε_i = η_{i+1} / η_i`.
fn etas_to_eps(etas: &[RootOfUnity]) -> Vec<u32> {
    let p = etas.len();
    (0..p)
        .map(|i| {
            if i + 1 == p {
                etas[i].inv().exp()
            } else {
                etas[i + 1].div(etas[i]).exp()
            }
        })
        .collect()
}

/// Inverse of [`mzv_to_word`] for words of exactly that shape.
pub fn word_to_mzv(w: &IISymbol) -> Result<(i64, MzvSymbol)> {
    let malformed = |why: &str| MzvError::Malformed(format!("{why}: {w}"));
    let Letter::Root(one) = w.end else {
        return Err(malformed("word must end at 1"));
    };
    if !w.start.is_zero() || !one.is_one() {
        return Err(malformed("word must run from 0 to 1"));
    }
    let n = one.modulus();
    if w.body.is_empty() {
        return Ok((1, MzvSymbol::unit(n)));
    }
    if w.body.iter().all(|l| l.is_zero()) {
        return Err(malformed("body has no nonzero letter"));
    }
    let (k, xs, etas) = parse_blocks(&w.body);
    let eps = etas_to_eps(&etas);
    let sign = if xs.len() % 2 == 0 { 1 } else { -1 };
    let z = MzvSymbol::new(n, k, xs, eps, 0).map_err(|e| malformed(&e.to_string()))?;
    Ok((sign, z))
}

/// Reversal: `I(a; w; b) = (-1)^n I(b; reversed w; a)`.
pub fn reverse(w: &IISymbol) -> (i64, IISymbol) {
    let mut body = w.body.clone();
    body.reverse();
    let sign = if w.body.len().is_multiple_of(2) {
        1
    } else {
        -1
    };
    (sign, IISymbol::new(w.end, body, w.start))
}

/// Weight zero gives the unit, equal endpoints give zero,
/// and every other word is oriented to end at 1 (homothety first, reversal if the end is 0).
pub fn normalize(w: &IISymbol, modulus: u32) -> LinComb<IISymbol> {
    if w.body.is_empty() {
        return LinComb::single(IISymbol::unit(modulus), Rational::one());
    }
    if w.start == w.end {
        return LinComb::new();
    }
    let (sign, oriented) = match w.end {
        Letter::Root(_) => (1, w.clone()),
        Letter::Zero => reverse(w),
    };
    let Letter::Root(alpha) = oriented.end else {
        unreachable!("oriented word ends at a root");
    };
    let scaled = IISymbol::new(
        oriented.start.scaled_down(alpha),
        oriented.body.iter().map(|l| l.scaled_down(alpha)).collect(),
        oriented.end.scaled_down(alpha),
    );
    LinComb::single(scaled, qi(sign))
}

/// All interleavings of `u` and `v`, counted with multiplicity.
pub fn shuffle(u: &[Letter], v: &[Letter]) -> LinComb<Vec<Letter>> {
    let mut out = LinComb::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn rec(u: &[Letter], v: &[Letter], buf: &mut Vec<Letter>, out: &mut LinComb<Vec<Letter>>) {
        if u.is_empty() || v.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.add_term(w, Rational::one());
            return;
        }
        buf.push(u[0]);
        rec(&u[1..], v, buf, out);
        buf.pop();
        buf.push(v[0]);
        rec(u, &v[1..], buf, out);
        buf.pop();
    }
    rec(u, v, &mut buf, &mut out);
    out
}

/// Shuffle extended bilinearly to linear combinations of words.
pub fn shuffle_lin(a: &LinComb<Vec<Letter>>, b: &LinComb<Vec<Letter>>) -> LinComb<Vec<Letter>> {
    let mut out = LinComb::new();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            out.add_scaled(&shuffle(u, v), &(cu * cv));
        }
    }
    out
}

/// Weak compositions of `k` into `p` nonnegative parts.
pub(crate) fn weak_compositions(k: u32, p: usize) -> Vec<Vec<u32>> {
    if p == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if p == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in weak_compositions(k - first, p - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Shuffle regularization of leading zeros: `ζ_k(x⃗; ε⃗) = (-1)^k Σ_{|i⃗|=k} Π binom(x_j+i_j-1, i_j) ζ(x⃗+i⃗; ε⃗)`.
pub fn regularize_leading_zeros(z: &MzvSymbol) -> LinComb<MzvSymbol> {
    if z.k == 0 {
        return LinComb::single(z.clone(), Rational::one());
    }
    let p = z.depth();
    let mut out = LinComb::new();
    if p == 0 {
        return out;
    }
    let sign = if z.k.is_multiple_of(2) { 1 } else { -1 };
    for comp in weak_compositions(z.k, p) {
        let mut c = qi(sign);
        for (x, i) in z.xs.iter().zip(&comp) {
            c *= qb(binomial((x + i - 1) as i64, *i as i64));
        }
        let xs = z.xs.iter().zip(&comp).map(|(x, i)| x + i).collect();
        out.add_term(
            MzvSymbol {
                modulus: z.modulus,
                k: 0,
                xs,
                eps: z.eps.clone(),
                s: z.s,
            },
            c,
        );
    }
    out
}

/// Path composition through `x`: the `n+1` pairs `I(a_0; a_1..a_i; x) ⊗ I(x; a_{i+1}..a_n; a_{n+1})`, `i = 0..n`.
pub fn path_compose(w: &IISymbol, x: Letter) -> Vec<(IISymbol, IISymbol)> {
    (0..=w.body.len())
        .map(|i| {
            (
                IISymbol::new(w.start, w.body[..i].to_vec(), x),
                IISymbol::new(x, w.body[i..].to_vec(), w.end),
            )
        })
        .collect()
}

/// `I(0; w; 1)` as a combination of convergent `ζ` symbols with no leading zeros.
///
/// Trailing letters equal to 1 are removed with the shuffle relation against
/// `I(0; 1^m; 1) = 0`, leading zeros with [`regularize_leading_zeros`]. Letter-depth is preserved
/// term by term.
pub fn express_word(body: &[Letter], modulus: u32) -> LinComb<MzvSymbol> {
    let mut out = LinComb::new();
    if body.is_empty() {
        out.add_term(MzvSymbol::unit(modulus), Rational::one());
        return out;
    }
    if body.iter().all(|l| l.is_zero()) {
        return out;
    }
    let is_one = |l: &Letter| matches!(l, Letter::Root(r) if r.is_one());
    let m = body.iter().rev().take_while(|l| is_one(l)).count();
    if m > 0 {
        let v = &body[..body.len() - m];
        if v.is_empty() {
            return out;
        }
        let ones = vec![Letter::root(modulus, 0); m];
        for (t, c) in shuffle(v, &ones).iter() {
            let mut c = c.clone();
            if t.as_slice() == body {
                c -= Rational::one();
            }
            if !c.is_zero() {
                out.add_scaled(&express_word(t, modulus), &-c);
            }
        }
        return out;
    }
    let (k, xs, etas) = parse_blocks(body);
    let eps = etas_to_eps(&etas);
    let sign = if xs.len() % 2 == 0 { 1 } else { -1 };
    let z = MzvSymbol {
        modulus,
        k,
        xs,
        eps,
        s: 0,
    };
    out.add_scaled(&regularize_leading_zeros(&z), &qi(sign));
    out
}
