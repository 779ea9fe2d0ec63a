//! Exact rationals, P-adic valuations and the ring Z_{1[P]}.
//!
//! Rationals are `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator. This module adds the valuation
//! machinery used by the descent certificates and a few conversion helpers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{MzvError, Result};

/// Exact rational number in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num/den`.
///
/// # Panics
/// Panics when `den` is zero.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lifts a big integer into the rationals.
pub fn qb(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `2^e` (or any base) as a rational, with negative exponents allowed.
pub fn qpow(base: i64, e: i32) -> Rational {
    let b = qi(base);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b, (-e) as usize).recip()
    }
}

/// P-adic valuation of a rational: an integer, or infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    /// True when the valuation is at least `bound` (infinity dominates everything).
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= bound,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        n = quot;
        v += 1;
    }
}

/// `v_P(q) = v_P(numerator) - v_P(denominator)`, infinite for zero.
pub fn padic_valuation(x: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(MzvError::InvalidArgument(format!("{p} is not prime")));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let pb = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb),
    ))
}

/// Membership in `Z_{1[P]} = { a / (1 + bP) }`: the reduced denominator is prime to `P`.
pub fn in_z1p(x: &Rational, p: u64) -> bool {
    let pb = BigInt::from(p);
    !x.denom().mod_floor(&pb).is_zero()
}

/// Reduction of a `Z_{1[P]}` element modulo `P`, or `None` if the denominator is divisible by `P`.
pub fn mod_p(x: &Rational, p: u64) -> Option<u64> {
    if !in_z1p(x, p) {
        return None;
    }
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    // P is tiny, so the inverse is found by search.
    let inv = (1..p).find(|i| (den * i) % p == 1)?;
    Some((num * inv) % p)
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient as a rational.
pub fn binom_q(n: i64, k: i64) -> Rational {
    qb(binomial(n, k))
}

/// Serializes as `"a/b"`, or `"a"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || MzvError::Malformed(format!("rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Dense matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(data.len(), r * c, "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular or not square.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            inv.set(i, i, Rational::one());
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let pv = a.get(col, col).recip();
            for j in 0..n {
                let x = a.get(col, j) * &pv;
                a.set(col, j, x);
                let y = inv.get(col, j) * &pv;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Solves `self * x = b` for a square invertible matrix.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        Some(self.inverse()?.mul_vec(b))
    }

    /// Rank by fraction-free row reduction over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..a.cols {
                a.data.swap(pivot * a.cols + j, rank * a.cols + j);
            }
            for r in rank + 1..a.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) / a.get(rank, col);
                for j in col..a.cols {
                    let x = a.get(r, j) - &f * a.get(rank, j);
                    a.set(r, j, x);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= a.get(col, col);
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) / a.get(col, col);
                for j in col..n {
                    let x = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, x);
                }
            }
        }
        det
    }
}

/// Sign helper `(-1)^e`.
pub fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// True when the rational has P-adic valuation exactly zero.
pub fn is_unit_mod_p(x: &Rational, p: u64) -> bool {
    matches!(padic_valuation(x, p), Ok(Valuation::Finite(0)))
}
