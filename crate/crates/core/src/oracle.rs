//! Numerical values of `ζ(x_1, ..., x_p; ε_1, ..., ε_p) = Σ_{0<n_1<...<n_p} Π ε_i^{n_i} n_i^{-x_i}`
//! at `ξ_N = exp(2πi/N)`, by truncated nested sums.
//!
//! The outermost sum is truncated at a multiple `M` of `N`; its tail is
//! estimated by Euler–Maclaurin on each residue class mod `N`, with the inner
//! sums expanded to first order around their value at `M`. The error bound
//! compares the results at `M` and `M/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::depth1::reduce_coords;
use crate::error::{MzvError, Result};
use crate::exactnum::Rational;
use crate::words::{LinComb, MzvSymbol, RootOfUnity};

/// A complex value with a truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericValue {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

impl NumericValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Smallest accepted truncation point.
pub const MIN_CUTOFF: u64 = 10;

fn root_value(e: RootOfUnity) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * e.exp() as f64 / e.modulus() as f64)
}

/// `Σ_{q ≥ q0} f(N q + j)` for `f(u) = u^{-s} (log u)^e`, `e ∈ {0, 1}`, by Euler–Maclaurin.
///
/// Where the integral diverges (`s = 1`) only its lower end is kept; the
/// discarded constant is the same for every class `j` and cancels against
/// `Σ_j ρ^j = 0` for `ρ ≠ 1`.
fn class_tail(s: u32, e: u32, modulus: u32, j: u32, q0: u64) -> f64 {
    let (n, s_f) = (modulus as f64, s as f64);
    let u = n * q0 as f64 + j as f64;
    let l = u.ln();
    let integral = match (s, e) {
        (1, 0) => -l,
        (1, _) => -l * l / 2.0,
        (_, 0) => u.powf(1.0 - s_f) / (s_f - 1.0),
        _ => u.powf(1.0 - s_f) * (l / (s_f - 1.0) + 1.0 / ((s_f - 1.0) * (s_f - 1.0))),
    } / n;
    let f = u.powf(-s_f) * if e == 0 { 1.0 } else { l };
    let df = u.powf(-s_f - 1.0) * if e == 0 { -s_f } else { 1.0 - s_f * l };
    let d3f = if e == 0 {
        -s_f * (s_f + 1.0) * (s_f + 2.0) * u.powf(-s_f - 3.0)
    } else {
        0.0
    };
    integral + f / 2.0 - n * df / 12.0 + n.powi(3) * d3f / 720.0
}

/// `Σ_{m > N q0} ρ^m m^{-s} (log m)^e`.
fn tail(s: u32, e: u32, rho: RootOfUnity, q0: u64) -> Complex64 {
    let n = rho.modulus();
    let z = root_value(rho);
    (1..=n)
        .map(|j| z.powu(j) * class_tail(s, e, n, j, q0))
        .sum()
}

/// Outer tail `Σ_{n > M} ε_p^n n^{-x_p} S(n-1)` given the partial sums at `M = N q0`.
///
/// `S(n-1)` is expanded to first order in the next-to-last index:
/// `S(n-1) ≈ S(M) + a Σ_{M<m<n} δ^m m^{-y}` with `a` the partial sum one depth lower.
fn outer_tail(z: &MzvSymbol, acc: &[Complex64], q0: u64) -> Complex64 {
    let p = z.depth();
    let (x, eps) = (z.xs[p - 1], z.root(p - 1));
    if p == 1 {
        return acc[0] * tail(x, 0, eps, q0);
    }
    let (y, delta) = (z.xs[p - 2], z.root(p - 2));
    let (s_m, a) = (acc[p - 1], acc[p - 2]);
    let m = (q0 * z.modulus as u64) as f64;
    if !delta.is_one() {
        let head = s_m + a * tail(y, 0, delta, q0);
        let d = root_value(delta);
        head * tail(x, 0, eps, q0) - a / (1.0 - d) * tail(x + y, 0, eps.mul(delta), q0)
    } else if y > 1 {
        let head = s_m + a * tail(y, 0, delta, q0);
        head * tail(x, 0, eps, q0)
            - a / (y as f64 - 1.0) * tail(x + y - 1, 0, eps, q0)
            - a / 2.0 * tail(x + y, 0, eps, q0)
    } else {
        let head = s_m - a * (m.ln() + 1.0 / (2.0 * m));
        head * tail(x, 0, eps, q0) + a * tail(x, 1, eps, q0) - a / 2.0 * tail(x + 1, 0, eps, q0)
    }
}

fn check_convergent(z: &MzvSymbol) -> Result<()> {
    if z.k != 0 || z.s != 0 {
        return Err(MzvError::InvalidArgument(format!(
            "{z}: evaluate symbols without leading zeros or (2πi) factors"
        )));
    }
    if z.depth() == 0 {
        return Ok(());
    }
    let p = z.depth() - 1;
    if z.xs[p] == 1 && z.root(p).is_one() {
        return Err(MzvError::InvalidArgument(format!("{z} diverges")));
    }
    Ok(())
}

/// Nested sum truncated at `m_half` and `2 m_half`, each with its outer tail.
fn nested(z: &MzvSymbol, q_half: u64) -> (Complex64, Complex64) {
    let p = z.depth();
    let modulus = z.modulus as u64;
    let roots: Vec<Complex64> = (0..p).map(|i| root_value(z.root(i))).collect();
    let mut powers = vec![Complex64::new(1.0, 0.0); p];
    // acc[k] = Σ over 0 < n_1 < ... < n_k <= current n
    let mut acc = vec![Complex64::new(0.0, 0.0); p + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    let mut at_half = Complex64::new(0.0, 0.0);
    let m_half = q_half * modulus;
    for n in 1..=2 * m_half {
        let nf = n as f64;
        for k in (1..=p).rev() {
            powers[k - 1] *= roots[k - 1];
            let term = acc[k - 1] * powers[k - 1] / nf.powi(z.xs[k - 1] as i32);
            acc[k] += term;
        }
        if n == m_half {
            at_half = acc[p] + outer_tail(z, &acc, q_half);
        }
    }
    let full = acc[p] + outer_tail(z, &acc, 2 * q_half);
    (at_half, full)
}

/// Evaluates a convergent symbol, summing the outermost index up to about `cutoff`.
pub fn eval_mzv(z: &MzvSymbol, cutoff: u64) -> Result<NumericValue> {
    check_convergent(z)?;
    if cutoff < MIN_CUTOFF {
        return Err(MzvError::InvalidArgument(format!(
            "cutoff must be at least {MIN_CUTOFF}"
        )));
    }
    if z.depth() == 0 {
        return Ok(NumericValue {
            re: 1.0,
            im: 0.0,
            error_bound: 0.0,
        });
    }
    let q_half = (cutoff / (2 * z.modulus as u64)).max(1);
    let (half, full) = nested(z, q_half);
    let terms = (2 * q_half * z.modulus as u64 * z.depth() as u64) as f64;
    let rounding = 2.0 * f64::EPSILON * terms * (1.0 + full.norm());
    Ok(NumericValue {
        re: full.re,
        im: full.im,
        error_bound: 2.0 * (full - half).norm() + rounding,
    })
}

/// Evaluates a combination; the bound is the coefficient-weighted sum of the bounds.
pub fn eval_comb(c: &LinComb<MzvSymbol>, cutoff: u64) -> Result<NumericValue> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for (z, coeff) in c.iter() {
        let v = eval_mzv(z, cutoff)?;
        let w = to_f64(coeff);
        value += v.value() * w;
        bound += v.error_bound * w.abs();
    }
    Ok(NumericValue {
        re: value.re,
        im: value.im,
        error_bound: bound,
    })
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Which part of the difference a relation constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Full,
    Real,
    Imaginary,
}

/// `|lhs - rhs|` in the chosen projection, with the combined error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub residual: f64,
    pub error_bound: f64,
}

pub fn check_relation(
    lhs: &LinComb<MzvSymbol>,
    rhs: &LinComb<MzvSymbol>,
    projection: Projection,
    cutoff: u64,
) -> Result<Residual> {
    let l = eval_comb(lhs, cutoff)?;
    let r = eval_comb(rhs, cutoff)?;
    let d = l.value() - r.value();
    let residual = match projection {
        Projection::Full => d.norm(),
        Projection::Real => d.re.abs(),
        Projection::Imaginary => d.im.abs(),
    };
    Ok(Residual {
        residual,
        error_bound: l.error_bound + r.error_bound,
    })
}

/// The period-level content of a depth-1 relation in weight `r`: products of
/// `2πi` are invisible to `ζ^l`, so odd weights constrain the real part and even
/// weights the imaginary part.
pub fn depth1_projection(r: u32) -> Projection {
    if r % 2 == 1 {
        Projection::Real
    } else {
        Projection::Imaginary
    }
}

/// Checks the table reduction of `ζ(r; ε)` numerically.
pub fn check_depth1_row(r: u32, eps: RootOfUnity, cutoff: u64) -> Result<Residual> {
    let n = eps.modulus();
    let single = |e: u32| MzvSymbol::new(n, 0, vec![r], vec![e], 0);
    let lhs = LinComb::single(single(eps.exp())?, Rational::from_integer(1.into()));
    let mut rhs = LinComb::new();
    for (root, c) in reduce_coords(r, eps)? {
        rhs.add_term(single(root)?, c);
    }
    check_relation(&lhs, &rhs, depth1_projection(r), cutoff)
}
