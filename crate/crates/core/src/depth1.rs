//! Depth-1 relations: the chosen bases of the depth-graded Lie coalgebra in
//! depth 1 and the reduction of every `ζ^l(r; ε)` onto them.
//!
//! Each modulus contributes one [`Depth1Table`]; [`table`] selects it at
//! runtime. All tables are closed forms of the distribution and conjugation
//! relations, checked against each other by [`distribution_check`] and
//! numerically by the oracle.

use std::fmt;

use num_traits::Zero;

use crate::error::{MzvError, Result};
use crate::exactnum::{qi, qpow, Rational};
use crate::words::{check_modulus, LinComb, RootOfUnity};

/// The depth-1 symbol `ζ^l(r; root)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Depth1Symbol {
    pub weight: u32,
    pub root: RootOfUnity,
}

impl fmt::Display for Depth1Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "zeta_l[{}]({} | {})",
            self.root.modulus(),
            self.weight,
            self.root.exp()
        )
    }
}

/// Reduction rules for one modulus.
pub trait Depth1Table: Send + Sync {
    /// The modulus `N`.
    fn modulus(&self) -> u32;

    /// Exponents of the basis roots in weight `r`, in their fixed order.
    fn basis_roots(&self, r: u32) -> Vec<u32>;

    /// Coordinates of `ζ^l(r; ξ^e)` on [`Depth1Table::basis_roots`], as `(root exponent, coefficient)`.
    /// The caller guarantees `(r, e) != (1, 0)` and `e < N`.
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>>;
}

/// `(-1)^{r-1}`, the conjugation sign.
fn conj_sign(r: u32) -> i64 {
    if r % 2 == 1 {
        1
    } else {
        -1
    }
}

/// `2^{r-1} / (1 - 2^{r-1})`, the ratio `ζ^l(r; 1) / ζ^l(r; -1)` for odd `r > 1`.
fn two_ratio(r: u32) -> Rational {
    let t = qpow(2, r as i32 - 1);
    t.clone() / (qi(1) - t)
}

/// `2·3^{r-1} / (1 - 3^{r-1})`, the ratio `ζ^l(r; 1) / ζ^l(r; ξ_3)` for odd `r > 1`.
fn three_ratio(r: u32) -> Rational {
    let t = qpow(3, r as i32 - 1);
    qi(2) * t.clone() / (qi(1) - t)
}

fn one(root: u32) -> Vec<(u32, Rational)> {
    vec![(root, qi(1))]
}

fn times(root: u32, c: Rational) -> Vec<(u32, Rational)> {
    if c.is_zero() {
        Vec::new()
    } else {
        vec![(root, c)]
    }
}

struct TableN1;
struct TableN2;
struct TableN3;
struct TableN4;
struct TableN6;
struct TableN8;

impl Depth1Table for TableN1 {
    fn modulus(&self) -> u32 {
        1
    }
    fn basis_roots(&self, r: u32) -> Vec<u32> {
        if r % 2 == 1 && r > 1 {
            vec![0]
        } else {
            Vec::new()
        }
    }
    fn coords(&self, r: u32, _e: u32) -> Result<Vec<(u32, Rational)>> {
        Ok(if r % 2 == 1 { one(0) } else { Vec::new() })
    }
}

impl Depth1Table for TableN2 {
    fn modulus(&self) -> u32 {
        2
    }
    fn basis_roots(&self, r: u32) -> Vec<u32> {
        if r % 2 == 1 {
            vec![1]
        } else {
            Vec::new()
        }
    }
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>> {
        if r.is_multiple_of(2) {
            return Ok(Vec::new());
        }
        Ok(if e == 1 {
            one(1)
        } else {
            times(1, two_ratio(r))
        })
    }
}

impl Depth1Table for TableN3 {
    fn modulus(&self) -> u32 {
        3
    }
    fn basis_roots(&self, _r: u32) -> Vec<u32> {
        vec![1]
    }
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>> {
        Ok(match e {
            1 => one(1),
            2 => times(1, qi(conj_sign(r))),
            _ if r.is_multiple_of(2) => Vec::new(),
            _ => times(1, three_ratio(r)),
        })
    }
}

impl Depth1Table for TableN4 {
    fn modulus(&self) -> u32 {
        4
    }
    fn basis_roots(&self, _r: u32) -> Vec<u32> {
        vec![1]
    }
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>> {
        Ok(match e {
            1 => one(1),
            3 => times(1, qi(conj_sign(r))),
            _ if r.is_multiple_of(2) => Vec::new(),
            2 => times(1, qpow(2, r as i32)),
            _ => times(1, two_ratio(r) * qpow(2, r as i32)),
        })
    }
}

impl Depth1Table for TableN6 {
    fn modulus(&self) -> u32 {
        6
    }
    fn basis_roots(&self, r: u32) -> Vec<u32> {
        if r > 1 {
            vec![1]
        } else {
            Vec::new()
        }
    }
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>> {
        if r == 1 {
            // ζ(1; ξ_6^{±1}) = ∓iπ/3 vanishes in the unramified quotient; the
            // other roots generate the ramified part, which has no table.
            return match e {
                1 | 5 => Ok(Vec::new()),
                _ => Err(MzvError::Unsupported(format!(
                    "weight-1 root ξ_6^{e} is ramified; no depth-1 table"
                ))),
            };
        }
        let sq = qpow(2, r as i32 - 1) / (qi(1) - qpow(-2, r as i32 - 1));
        Ok(match e {
            1 => one(1),
            5 => times(1, qi(conj_sign(r))),
            2 => times(1, sq),
            4 => times(1, sq * qi(conj_sign(r))),
            _ if r.is_multiple_of(2) => Vec::new(),
            3 => times(1, three_ratio(r)),
            _ => times(1, three_ratio(r) * two_ratio(r)),
        })
    }
}

impl Depth1Table for TableN8 {
    fn modulus(&self) -> u32 {
        8
    }
    fn basis_roots(&self, _r: u32) -> Vec<u32> {
        vec![1, 5]
    }
    fn coords(&self, r: u32, e: u32) -> Result<Vec<(u32, Rational)>> {
        let both = |c: Rational| {
            if c.is_zero() {
                Vec::new()
            } else {
                vec![(1, c.clone()), (5, c)]
            }
        };
        let s = qi(conj_sign(r));
        let ci = qpow(2, r as i32 - 1);
        Ok(match e {
            1 => one(1),
            5 => one(5),
            7 => times(1, s),
            3 => times(5, s),
            2 => both(ci),
            6 => both(ci * s),
            _ if r.is_multiple_of(2) => Vec::new(),
            4 => both(ci * qpow(2, r as i32)),
            _ => both(two_ratio(r) * ci * qpow(2, r as i32)),
        })
    }
}

static N1: TableN1 = TableN1;
static N2: TableN2 = TableN2;
static N3: TableN3 = TableN3;
static N4: TableN4 = TableN4;
static N6: TableN6 = TableN6;
static N8: TableN8 = TableN8;

/// Registered tables, keyed by modulus.
pub fn registry() -> [(u32, &'static dyn Depth1Table); 6] {
    [(1, &N1), (2, &N2), (3, &N3), (4, &N4), (6, &N6), (8, &N8)]
}

/// The table for modulus `n`.
pub fn table(n: u32) -> Result<&'static dyn Depth1Table> {
    check_modulus(n)?;
    registry()
        .into_iter()
        .find(|(m, _)| *m == n)
        .map(|(_, t)| t)
        .ok_or_else(|| MzvError::Unsupported(format!("no depth-1 table for N={n}")))
}

/// The chosen basis of depth-1 symbols in weight `r`.
pub fn basis(n: u32, r: u32) -> Result<Vec<Depth1Symbol>> {
    Ok(table(n)?
        .basis_roots(r)
        .into_iter()
        .map(|e| Depth1Symbol {
            weight: r,
            root: RootOfUnity::new(n, e as i64),
        })
        .collect())
}

fn check_args(r: u32, eps: RootOfUnity) -> Result<()> {
    if r == 0 {
        return Err(MzvError::InvalidArgument("weight must be positive".into()));
    }
    if r == 1 && eps.is_one() {
        return Err(MzvError::InvalidArgument("ζ(1; 1) is excluded".into()));
    }
    Ok(())
}

/// Coordinates of `ζ^l(r; ε)` on the basis, as `(root exponent, coefficient)` pairs.
pub fn reduce_coords(r: u32, eps: RootOfUnity) -> Result<Vec<(u32, Rational)>> {
    check_args(r, eps)?;
    table(eps.modulus())?.coords(r, eps.exp())
}

/// `ζ^l(r; ε)` written on the chosen basis.
pub fn reduce_depth1(r: u32, eps: RootOfUnity) -> Result<LinComb<Depth1Symbol>> {
    let n = eps.modulus();
    Ok(reduce_coords(r, eps)?
        .into_iter()
        .map(|(e, c)| {
            (
                Depth1Symbol {
                    weight: r,
                    root: RootOfUnity::new(n, e as i64),
                },
                c,
            )
        })
        .collect())
}

/// Coefficient of `ζ^l(r; η)` in the reduction of `ζ^l(r; ε)`.
pub fn c_coeff(eta: RootOfUnity, eps: RootOfUnity, r: u32) -> Result<Rational> {
    let t = table(eta.modulus())?;
    if !t.basis_roots(r).contains(&eta.exp()) {
        return Err(MzvError::InvalidArgument(format!(
            "ξ^{} is not a basis root in weight {r} for N={}",
            eta.exp(),
            eta.modulus()
        )));
    }
    Ok(reduce_coords(r, eps)?
        .into_iter()
        .find(|(e, _)| *e == eta.exp())
        .map_or_else(Rational::zero, |(_, c)| c))
}

/// Both sides of `ζ(r; η) = d^{r-1} Σ_{ε^d = η} ζ(r; ε)` reduced to the basis,
/// for `d | N` and `η ∈ μ_{N/d}` given as an exponent of `ξ_{N/d}`.
pub fn distribution_check(
    n: u32,
    d: u32,
    r: u32,
    eta_exp: u32,
) -> Result<(LinComb<Depth1Symbol>, LinComb<Depth1Symbol>)> {
    if d == 0 || !n.is_multiple_of(d) {
        return Err(MzvError::InvalidArgument(format!(
            "{d} does not divide {n}"
        )));
    }
    let eta = RootOfUnity::new(n, (eta_exp * d) as i64);
    let lhs = reduce_depth1(r, eta)?;
    let mut rhs = LinComb::new();
    let scale = qpow(d as i64, r as i32 - 1);
    for e in 0..n {
        let eps = RootOfUnity::new(n, e as i64);
        if RootOfUnity::new(n, (e * d) as i64) == eta {
            rhs.add_scaled(&reduce_depth1(r, eps)?, &scale);
        }
    }
    Ok((lhs, rhs))
}

/// `2^{2r} / (1 - 2^{2r})`, the projection of `ζ^l(2r+1; 1)` on `ζ^l(2r+1; -1)`.
pub fn euler_sum_ratio(r: u32) -> Rational {
    let t = qpow(2, 2 * r as i32);
    t.clone() / (qi(1) - t)
}

/// Rational `2·6^{r-1} / ((1-2^{r-1})(1-3^{r-1}))`, the projection of `ζ^l(r; 1)` for `N = 6`, `r` odd.
pub fn six_ratio(r: u32) -> Rational {
    qi(2) * qpow(6, r as i32 - 1)
        / ((qi(1) - qpow(2, r as i32 - 1)) * (qi(1) - qpow(3, r as i32 - 1)))
}
