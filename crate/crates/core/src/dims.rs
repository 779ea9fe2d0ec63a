//! Generator counts, dimensions `d^N_n` and Hilbert series, with the
//! f-alphabet comodule model `H = Q<f^j_r> ⊗ Q[t]` used to cross-check them.

use crate::error::{MzvError, Result};

/// Generators of the motivic Lie algebra by degree, and the weight of `t = (2πi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenProfile {
    pub n: u32,
    pub m: u32,
    /// Generators in degree 1.
    pub a: u32,
    /// Generators in each degree `r > 1` (odd `r` only when `odd_only`).
    pub b: u32,
    pub odd_only: bool,
    /// Weight of the polynomial generator: 2 for `N <= 2` (`ζ(2)`), else 1.
    pub t_weight: u32,
}

impl GenProfile {
    /// Number of generators `f^j_r` in degree `r >= 1`.
    pub fn in_degree(&self, r: u32) -> u32 {
        if r == 0 || (self.odd_only && r.is_multiple_of(2)) {
            0
        } else if r == 1 {
            self.a
        } else {
            self.b
        }
    }

    /// The Hilbert series of `H`, as a closed string in `t`.
    pub fn hilbert_series(&self) -> String {
        match (self.n, self.m) {
            (1, _) => "1/(1-t^2-t^3)".into(),
            (2, _) => "1/(1-t-t^2)".into(),
            _ => {
                let lin = self.a + 1;
                let quad = self.a as i64 - self.b as i64;
                let lin = if lin == 1 {
                    "t".to_string()
                } else {
                    format!("{lin}t")
                };
                match quad {
                    0 => format!("1/(1-{lin})"),
                    q if q > 0 => format!(
                        "1/(1-{lin}+{}t^2)",
                        if q == 1 { String::new() } else { q.to_string() }
                    ),
                    q => format!(
                        "1/(1-{lin}-{}t^2)",
                        if q == -1 {
                            String::new()
                        } else {
                            (-q).to_string()
                        }
                    ),
                }
            }
        }
    }
}

/// The generator profile for `N` and ramification `M`.
pub fn gen_counts(n: u32, m: u32) -> Result<GenProfile> {
    let (a, b, odd_only) = match (n, m) {
        (1, 1) => (0, 1, true),
        (2, 2) => (1, 1, true),
        (3, 3) | (4, 4) => (1, 1, false),
        (8, 8) => (2, 2, false),
        (6, 6) => (2, 1, false),
        (6, 1) => (0, 1, false),
        _ => {
            return Err(MzvError::Unsupported(format!(
                "no generator profile for (N, M) = ({n}, {m})"
            )))
        }
    };
    Ok(GenProfile {
        n,
        m,
        a,
        b,
        odd_only,
        t_weight: if n <= 2 { 2 } else { 1 },
    })
}

/// The ramification `M` attached to `N` when none is given: `N` itself, and `1` for `N = 6`.
pub fn default_ramification(n: u32) -> u32 {
    if n == 6 {
        1
    } else {
        n
    }
}

/// `d_0, ..., d_{n_max}`: dimensions of the weight-graded pieces of `H`.
pub fn dims(n: u32, m: u32, n_max: usize) -> Result<Vec<u64>> {
    let g = gen_counts(n, m)?;
    let mut d: Vec<u64> = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        let at = |i: usize| {
            if i <= k {
                d.get(k - i).copied().unwrap_or(0)
            } else {
                0
            }
        };
        let v = match (n, k) {
            (_, 0) => 1,
            (1, 1) => 0,
            (1, 2) => 1,
            (1, _) => at(2) + at(3),
            (2, 1) => 1,
            (2, _) => at(1) + at(2),
            _ => {
                let lin = (g.a as i64 + 1) * at(1) as i64;
                let quad = (g.b as i64 - g.a as i64) * at(2) as i64;
                (lin + quad) as u64
            }
        };
        d.push(v);
    }
    Ok(d)
}

/// A word in the generators `f^j_r` times a power of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FWord {
    /// `(r, j)` with `1 <= j <= ` the number of generators in degree `r`.
    pub letters: Vec<(u32, u32)>,
    pub t_power: u32,
}

impl FWord {
    pub fn weight(&self, g: &GenProfile) -> u32 {
        self.letters.iter().map(|(r, _)| r).sum::<u32>() + self.t_power * g.t_weight
    }
}

fn words_of_degree(
    g: &GenProfile,
    n: u32,
    memo: &mut Vec<Option<Vec<Vec<(u32, u32)>>>>,
) -> Vec<Vec<(u32, u32)>> {
    if let Some(w) = &memo[n as usize] {
        return w.clone();
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    }
    for r in 1..=n {
        for j in 1..=g.in_degree(r) {
            for rest in words_of_degree(g, n - r, memo) {
                let mut w = vec![(r, j)];
                w.extend(rest);
                out.push(w);
            }
        }
    }
    memo[n as usize] = Some(out.clone());
    out
}

/// All `FWord`s of weight `n`.
pub fn f_words(g: &GenProfile, n: u32) -> Vec<FWord> {
    let mut memo = vec![None; n as usize + 1];
    let mut out = Vec::new();
    for k in 0..=n / g.t_weight {
        for letters in words_of_degree(g, n - k * g.t_weight, &mut memo) {
            out.push(FWord {
                letters,
                t_power: k,
            });
        }
    }
    out.sort();
    out
}

/// `D^j_r` on `H`: strips a leading `f^j_r`, else zero.
pub fn f_deconcat_dr(w: &FWord, r: u32, j: u32) -> Option<FWord> {
    match w.letters.first() {
        Some(&(r0, j0)) if r0 == r && j0 == j => Some(FWord {
            letters: w.letters[1..].to_vec(),
            t_power: w.t_power,
        }),
        _ => None,
    }
}

/// `dim (ker D_{<n} ∩ H_n)`: the degree-`n` generators, plus `t^{n/w}` when `n` is a multiple of the weight of `t`.
pub fn f_kernel_dim(n: u32, m: u32, weight: u32) -> Result<u64> {
    if weight == 0 {
        return Err(MzvError::InvalidArgument("weight must be positive".into()));
    }
    let g = gen_counts(n, m)?;
    Ok(g.in_degree(weight) as u64 + u64::from(weight.is_multiple_of(g.t_weight)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{qi, QMatrix};
    use std::collections::HashMap;

    const PROFILES: [(u32, u32); 7] = [(1, 1), (2, 2), (3, 3), (4, 4), (8, 8), (6, 6), (6, 1)];

    #[test]
    fn table_rows() {
        assert_eq!(dims(2, 2, 6).unwrap(), [1, 1, 2, 3, 5, 8, 13]);
        assert_eq!(dims(3, 3, 5).unwrap(), [1, 2, 4, 8, 16, 32]);
        assert_eq!(dims(8, 8, 4).unwrap(), [1, 3, 9, 27, 81]);
        assert_eq!(dims(1, 1, 8).unwrap(), [1, 0, 1, 1, 1, 2, 2, 3, 4]);
        assert_eq!(dims(6, 6, 3).unwrap(), [1, 3, 8, 21]);
        assert_eq!(dims(6, 1, 5).unwrap(), [1, 1, 2, 3, 5, 8]);
        let g = gen_counts(6, 1).unwrap();
        assert_eq!((g.in_degree(1), g.in_degree(2), g.in_degree(7)), (0, 1, 1));
        assert!(gen_counts(5, 5).is_err());
        assert!(gen_counts(6, 2).is_err());
    }

    #[test]
    fn hilbert_strings() {
        let s = |n, m| gen_counts(n, m).unwrap().hilbert_series();
        assert_eq!(s(1, 1), "1/(1-t^2-t^3)");
        assert_eq!(s(2, 2), "1/(1-t-t^2)");
        assert_eq!(s(4, 4), "1/(1-2t)");
        assert_eq!(s(8, 8), "1/(1-3t)");
        assert_eq!(s(6, 6), "1/(1-3t+t^2)");
        assert_eq!(s(6, 1), "1/(1-t-t^2)");
    }

    /// Power series coefficients of `1/(1 - c1 t - c2 t^2 - c3 t^3)`.
    fn series(c: [i64; 3], len: usize) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for k in 0..len {
            let mut v = if k == 0 { 1 } else { 0 };
            for (i, ci) in c.iter().enumerate() {
                if k > i {
                    v += ci * out[k - 1 - i];
                }
            }
            out.push(v);
        }
        out
    }

    #[test]
    fn dims_match_hilbert_series() {
        for (n, m) in PROFILES {
            let g = gen_counts(n, m).unwrap();
            let c = match n {
                1 => [0, 1, 1],
                2 => [1, 1, 0],
                _ => [g.a as i64 + 1, g.b as i64 - g.a as i64, 0],
            };
            let d: Vec<i64> = dims(n, m, 20)
                .unwrap()
                .into_iter()
                .map(|x| x as i64)
                .collect();
            assert_eq!(d, series(c, 21), "N={n} M={m}");
        }
    }

    #[test]
    fn word_counts_match_dims() {
        for (n, m) in PROFILES {
            let g = gen_counts(n, m).unwrap();
            let d = dims(n, m, 10).unwrap();
            for w in 0..=10u32 {
                let words = f_words(&g, w);
                assert!(words.iter().all(|x| x.weight(&g) == w));
                assert_eq!(words.len() as u64, d[w as usize], "N={n} M={m} n={w}");
            }
        }
    }

    #[test]
    fn deconcatenation() {
        let w = FWord {
            letters: vec![(3, 1), (5, 1)],
            t_power: 0,
        };
        assert_eq!(
            f_deconcat_dr(&w, 3, 1),
            Some(FWord {
                letters: vec![(5, 1)],
                t_power: 0
            })
        );
        assert_eq!(f_deconcat_dr(&w, 5, 1), None);
        let t = FWord {
            letters: vec![],
            t_power: 2,
        };
        assert_eq!(f_deconcat_dr(&t, 1, 1), None);
    }

    /// Kernel of `⊕_{r<n, j} D^j_r` on `H_n`, by exact rank.
    fn brute_kernel(n: u32, m: u32, weight: u32) -> u64 {
        let g = gen_counts(n, m).unwrap();
        let source = f_words(&g, weight);
        let mut targets: HashMap<(u32, u32, FWord), usize> = HashMap::new();
        let mut entries = Vec::new();
        for (c, w) in source.iter().enumerate() {
            for r in 1..weight {
                for j in 1..=g.in_degree(r) {
                    if let Some(img) = f_deconcat_dr(w, r, j) {
                        let len = targets.len();
                        let row = *targets.entry((r, j, img)).or_insert(len);
                        entries.push((row, c));
                    }
                }
            }
        }
        let mut mat = QMatrix::zeros(targets.len().max(1), source.len());
        for (r, c) in entries {
            mat.set(r, c, qi(1));
        }
        (source.len() - mat.rank()) as u64
    }

    #[test]
    fn kernel_dimension_by_brute_force() {
        assert_eq!(f_kernel_dim(4, 4, 3).unwrap(), 2);
        assert_eq!(f_kernel_dim(2, 2, 4).unwrap(), 1);
        assert_eq!(f_kernel_dim(8, 8, 1).unwrap(), 3);
        for (n, m) in PROFILES {
            for w in 1..=6 {
                assert_eq!(
                    f_kernel_dim(n, m, w).unwrap(),
                    brute_kernel(n, m, w),
                    "N={n} M={m} n={w}"
                );
            }
        }
    }
}
