//! Closed-form systems for low-depth corrections, and the reference constants
//! they are checked against.
//!
//! * Euler sums in depth 3: `ζ(2a+1, 2b+1, \overline{2c+1})` is corrected by
//!   `-Σ_k α_k ζ(1, 2(n-k)+1, \overline{2k+1}) - C(2(b+c), 2c) ζ(2a+1, 1, \overline{2(b+c)+1})`
//!   with `M_3 α = A^{a,b,c}`, `n = a+b+c`.
//! * `N = 3, 4` in depth 2: `ζ(2a+1, 2b+1; 1, ξ)` is corrected by
//!   `-β ζ(1, n-1) - Σ_k α_k ζ(n-2k, 2k)` with `M α = A^{a,b}`, `n = 2(a+b+1)`.
//!
//! `M_3` is expressed on `ζ^l(2r+1; 1)`, so its rows are the basis-root
//! coordinates scaled by `2^{-2r} - 1`.

use num_traits::{One, Zero};

use crate::coaction::d_functional_rp;
use crate::error::{MzvError, Result};
use crate::exactnum::{binom_q, q, qi, qpow, QMatrix, Rational};
use crate::words::{LinComb, MzvSymbol};

use super::engine::Descent;

fn euler(xs: &[u32]) -> MzvSymbol {
    let mut eps = vec![0; xs.len()];
    *eps.last_mut().expect("positive depth") = 1;
    MzvSymbol::raw(2, xs.to_vec(), eps)
}

fn marked(modulus: u32, xs: &[u32]) -> MzvSymbol {
    MzvSymbol::raw(modulus, xs.to_vec(), vec![0, 1])
}

fn b(n: i64, k: i64) -> Rational {
    binom_q(n, k)
}

fn delta(c: bool) -> Rational {
    if c {
        Rational::one()
    } else {
        Rational::zero()
    }
}

fn check_abc(a: u32, b_: u32, c: u32) -> Result<()> {
    if a == 0 || b_ == 0 || c == 0 {
        return Err(MzvError::InvalidArgument(format!(
            "depth-3 system needs a, b, c >= 1, got ({a}, {b_}, {c})"
        )));
    }
    Ok(())
}

/// `M_3` for `(a, b, c)`, rows `r` and columns `k` in `1..=a+b+c`.
pub fn depth3_matrix(a: u32, b_: u32, c: u32) -> Result<QMatrix> {
    check_abc(a, b_, c)?;
    let n = (a + b_ + c) as i64;
    let mut m = QMatrix::zeros(n as usize, n as usize);
    for r in 1..=n {
        let damp = qpow(2, -2 * r as i32);
        for k in 1..=n {
            let v = delta(r == n) * (&damp - qi(2)) * b(2 * n, 2 * k)
                + delta(k <= r && r < n) * b(2 * r, 2 * k) * (&damp - qi(1))
                - delta(r < n - k) * b(2 * (n - r), 2 * k)
                - delta(n - k <= r && r < n) * b(2 * r, 2 * (n - k));
            m.set(r as usize - 1, k as usize - 1, v);
        }
    }
    Ok(m)
}

/// `A^{a,b,c}`, indexed by `r` in `1..=a+b+c`.
pub fn depth3_vector(a: u32, b_: u32, c: u32) -> Result<Vec<Rational>> {
    check_abc(a, b_, c)?;
    let (a, bb, c) = (a as i64, b_ as i64, c as i64);
    let n = a + bb + c;
    Ok((1..=n)
        .map(|r| {
            let damp = qpow(2, -2 * r as i32) - qi(1);
            delta(bb <= r && r < a + bb) * b(2 * (n - r), 2 * c) * b(2 * r, 2 * bb)
                - delta(a < r && r < a + bb) * b(2 * (n - r), 2 * c) * b(2 * r, 2 * a)
                - delta(bb <= r && r < bb + c) * b(2 * (n - r), 2 * a) * b(2 * r, 2 * bb)
                - delta(r <= a) * b(2 * (n - r), 2 * (bb + c)) * b(2 * (bb + c), 2 * c)
                + delta(r < bb + c) * b(2 * (n - r), 2 * a) * b(2 * (bb + c), 2 * c)
                + delta(c <= r && r < bb + c) * b(2 * r, 2 * c) * b(2 * (n - r), 2 * a) * damp
        })
        .collect())
}

/// Solves `M_3 α = A^{a,b,c}` and returns the correction to add to `ζ(2a+1, 2b+1, \overline{2c+1})`.
pub fn depth3_correction(a: u32, b_: u32, c: u32) -> Result<LinComb<MzvSymbol>> {
    let m = depth3_matrix(a, b_, c)?;
    let rhs = depth3_vector(a, b_, c)?;
    let n = a + b_ + c;
    let alpha = m.solve(&rhs).ok_or(MzvError::Singular {
        n: 2 * n + 3,
        p: 3,
        level: 1,
    })?;
    let mut out = LinComb::new();
    for (k, ak) in (1..=n).zip(alpha) {
        out.add_term(euler(&[1, 2 * (n - k) + 1, 2 * k + 1]), -ak);
    }
    out.add_term(
        euler(&[2 * a + 1, 1, 2 * (b_ + c) + 1]),
        -b(2 * (b_ + c) as i64, 2 * c as i64),
    );
    Ok(out)
}

/// `M_3` and `A^{a,b,c}` rebuilt from the derivations: the coordinate of
/// `D_{2r+1}` on `ζ(1, \overline{2(n-r)+1})` modulo level 0, rescaled to `ζ^l(2r+1; 1)`.
pub fn depth3_system_from_derivations(
    engine: &Descent,
    a: u32,
    b_: u32,
    c: u32,
) -> Result<(QMatrix, Vec<Rational>)> {
    check_abc(a, b_, c)?;
    if engine.spec().modulus() != 2 {
        return Err(MzvError::InvalidArgument(
            "the depth-3 system lives in N=2".into(),
        ));
    }
    let n = a + b_ + c;
    let entry = |y: &LinComb<MzvSymbol>, r: u32| -> Result<Rational> {
        let image = d_functional_rp(y, 2 * r + 1, &[(1, qi(1))])?;
        let w = 2 * (n - r) + 2;
        let cols = engine.columns(w, 2, 1)?;
        let coords = engine.coords(&image, w, 2, 1)?;
        let target = euler(&[1, 2 * (n - r) + 1]);
        let at = cols
            .iter()
            .position(|s| *s == target)
            .expect("target is a level-1 column");
        Ok(&coords[at] * (qpow(2, -2 * r as i32) - qi(1)))
    };
    let mut m = QMatrix::zeros(n as usize, n as usize);
    let mut rhs = Vec::with_capacity(n as usize);
    let mut z = LinComb::single(euler(&[2 * a + 1, 2 * b_ + 1, 2 * c + 1]), qi(1));
    z.add_term(
        euler(&[2 * a + 1, 1, 2 * (b_ + c) + 1]),
        -b(2 * (b_ + c) as i64, 2 * c as i64),
    );
    for r in 1..=n {
        for k in 1..=n {
            let col = LinComb::single(euler(&[1, 2 * (n - k) + 1, 2 * k + 1]), qi(1));
            m.set(r as usize - 1, k as usize - 1, entry(&col, r)?);
        }
        rhs.push(entry(&z, r)?);
    }
    Ok((m, rhs))
}

/// A depth-3 example as given, with `M_3`, `A` and the correction.
#[derive(Debug, Clone)]
pub struct ReferenceDepth3 {
    pub abc: (u32, u32, u32),
    pub m3: QMatrix,
    pub a: Vec<Rational>,
    pub correction: LinComb<MzvSymbol>,
}

fn rows(r: &[&[(i64, i64)]]) -> QMatrix {
    QMatrix::from_rows(
        r.iter()
            .map(|row| row.iter().map(|&(n, d)| q(n, d)).collect())
            .collect(),
    )
}

/// The two reference depth-3 examples, `(1,1,1)` and `(1,1,2)`.
pub fn reference_depth3() -> Vec<ReferenceDepth3> {
    let c111 = [
        (euler(&[1, 5, 3]), q(774, 191)),
        (euler(&[1, 3, 5]), q(-804, 191)),
        (euler(&[1, 1, 7]), q(450, 191)),
        (euler(&[3, 1, 5]), qi(-6)),
    ];
    let c112 = [
        (euler(&[1, 7, 3]), q(850920, 203117)),
        (euler(&[1, 5, 5]), q(838338, 203117)),
        (euler(&[1, 3, 7]), q(-3673590, 203117)),
        (euler(&[1, 1, 9]), q(20351100, 203117)),
        (euler(&[3, 1, 7]), qi(-15)),
    ];
    vec![
        ReferenceDepth3 {
            abc: (1, 1, 1),
            m3: rows(&[
                &[(27, 4), (-1, 1), (-1, 1)],
                &[(-53, 8), (-111, 16), (-1, 1)],
                &[(-1905, 64), (-1905, 64), (-127, 64)],
            ]),
            a: vec![q(51, 2), qi(0), qi(0)],
            correction: c111.into_iter().collect(),
        },
        ReferenceDepth3 {
            abc: (1, 1, 2),
            m3: rows(&[
                &[(-63, 4), (15, 1), (-1, 1), (-1, 1)],
                &[(-93, 8), (-31, 16), (-6, 1), (-1, 1)],
                &[(-1009, 64), (-1905, 64), (-1023, 64), (-1, 1)],
                &[(-3577, 64), (-17885, 128), (-3577, 64), (-511, 256)],
            ]),
            a: vec![qi(210), q(387, 8), qi(0), qi(0)],
            correction: c112.into_iter().collect(),
        },
    ]
}

/// The Euler depth-2 correction `-C(2(a+b), 2b) ζ(1, \overline{2(a+b)+1})` of `ζ(2a+1, \overline{2b+1})`.
pub fn euler_depth2_correction(a: u32, b_: u32) -> LinComb<MzvSymbol> {
    LinComb::single(
        euler(&[1, 2 * (a + b_) + 1]),
        -b(2 * (a + b_) as i64, 2 * b_ as i64),
    )
}

/// The reference depth-2 Euler examples: `(a, b)` and the reference coefficient of `ζ(1, \overline{2(a+b)+1})`.
pub const REFERENCE_EULER_DEPTH2: [((u32, u32), i64); 4] =
    [((1, 1), -6), ((1, 2), -15), ((2, 1), -15), ((2, 3), -210)];

fn check_ab(a: u32, b_: u32) -> Result<()> {
    if a == 0 || b_ == 0 {
        return Err(MzvError::InvalidArgument(format!(
            "need a, b >= 1, got ({a}, {b_})"
        )));
    }
    Ok(())
}

/// `M = (C(2r-1, 2k-1))` and `A^{a,b} = (-C(2r-1, 2b))` for `b+1 <= r, k <= a+b`.
pub fn n34_system(a: u32, b_: u32) -> Result<(QMatrix, Vec<Rational>)> {
    check_ab(a, b_)?;
    let range: Vec<i64> = (b_ as i64 + 1..=(a + b_) as i64).collect();
    let m = QMatrix::from_rows(
        range
            .iter()
            .map(|&r| range.iter().map(|&k| b(2 * r - 1, 2 * k - 1)).collect())
            .collect(),
    );
    let rhs = range
        .iter()
        .map(|&r| -b(2 * r - 1, 2 * b_ as i64))
        .collect();
    Ok((m, rhs))
}

/// `(α_k)_{k = b+1..=a+b}` and `β^{a,b}`.
pub fn n34_coefficients(a: u32, b_: u32) -> Result<(Vec<(u32, Rational)>, Rational)> {
    let (m, rhs) = n34_system(a, b_)?;
    let alpha = m.solve(&rhs).ok_or(MzvError::Singular {
        n: 2 * (a + b_ + 1),
        p: 2,
        level: 0,
    })?;
    let n = 2 * (a + b_ + 1) as i64;
    let ks: Vec<u32> = (b_ + 1..=a + b_).collect();
    let beta = ks
        .iter()
        .zip(&alpha)
        .fold(b(n - 2, 2 * b_ as i64), |s, (&k, ak)| {
            s + ak * b(n - 2, 2 * k as i64 - 1)
        });
    Ok((ks.into_iter().zip(alpha).collect(), beta))
}

/// Correction to add to `ζ(2a+1, 2b+1; 1, ξ_N)` for `N = 3, 4`.
pub fn n34_correction(modulus: u32, a: u32, b_: u32) -> Result<LinComb<MzvSymbol>> {
    if modulus != 3 && modulus != 4 {
        return Err(MzvError::InvalidArgument(format!(
            "N=3 or 4 expected, got {modulus}"
        )));
    }
    let (alpha, beta) = n34_coefficients(a, b_)?;
    let n = 2 * (a + b_ + 1);
    let mut out = LinComb::single(marked(modulus, &[1, n - 1]), -beta);
    for (k, ak) in alpha {
        out.add_term(marked(modulus, &[n - 2 * k, 2 * k]), -ak);
    }
    Ok(out)
}

/// Closed forms of `α^{a,b}_{b+i}` for `i = 1..=4`.
pub fn n34_alpha_closed_form(b_: u32, i: u32) -> Option<Rational> {
    let b_ = b_ as i64;
    match i {
        1 => Some(qi(-(2 * b_ + 1))),
        2 => Some(qi(2) * b(2 * b_ + 3, 3)),
        3 => Some(qi(-16) * b(2 * b_ + 5, 5)),
        4 => Some(qi(272) * b(2 * b_ + 7, 7)),
        _ => None,
    }
}

/// The reference `N = 3, 4` examples: `(x_1, x_2)` and the correction terms `((y_1, y_2), coeff)`.
///
/// The second example is given with `ζ(6, 2)`, which is not among the
/// correction terms `ζ(n-2k, 2k)`, `k > b`; it is recorded here as `ζ(2, 6)`.
pub const REFERENCE_N34: [((u32, u32), &[((u32, u32), i64)]); 5] = [
    ((5, 3), &[((1, 7), -75), ((4, 4), 3), ((2, 6), -20)]),
    ((3, 5), &[((1, 7), 15), ((2, 6), 5)]),
    ((5, 5), &[((1, 9), -350), ((4, 6), 5), ((2, 8), -70)]),
    (
        (7, 5),
        &[
            ((1, 11), 12810),
            ((6, 6), 5),
            ((4, 8), -70),
            ((2, 10), 2016),
        ],
    ),
    (
        (9, 5),
        &[
            ((1, 13), -685575),
            ((8, 6), 5),
            ((6, 8), -70),
            ((4, 10), 2016),
            ((2, 12), -89760),
        ],
    ),
];

/// A reference `N = 3, 4` example as a correction combination.
pub fn reference_n34_correction(modulus: u32, terms: &[((u32, u32), i64)]) -> LinComb<MzvSymbol> {
    terms
        .iter()
        .map(|&((y1, y2), c)| (marked(modulus, &[y1, y2]), qi(c)))
        .collect()
}

/// The reference mod-2 table of `\tilde M_{9,3}` for `N = 2`, entries before reduction.
pub fn reference_table_9_3() -> Vec<Vec<i64>> {
    let mut t = vec![vec![0i64; 10]; 10];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = 1;
    }
    t[7][5] = 6;
    t[8][6] = 6;
    t[9][6] = 15;
    t[9][8] = 15;
    t
}
