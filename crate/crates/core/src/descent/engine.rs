//! Basis enumeration, the partial derivation matrices `M^i_{n,p}`, their mod-P
//! certificates, and the exact correction solves.
//!
//! Everything is depth-graded and works on the `s = 0` block; the `(2πi)^s`
//! factor is inert under the derivations and is carried along unchanged.
//!
//! Coordinates of a depth-`p` combination `Y` modulo `ℱ_{j-1}` are found by
//! matching its derivation image against the matrix of the level-`≥ j`
//! elements. Images are taken recursively in lower weight, so a block at
//! `(n, p, j)` pulls in blocks of smaller weight and depth; every block is
//! memoized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::coaction::d_functional_rp;
use crate::error::{MzvError, Result};
use crate::exactnum::{in_z1p, mod_p, padic_valuation, QMatrix, Rational, Valuation};
use crate::words::{weak_compositions, LinComb, MzvSymbol};

use super::spec::{eight_signs, Derivation, DescentSpec};

/// Compositions of `n` into `p` parts, each at least `min`.
fn compositions(n: u32, p: usize, min: u32) -> Vec<Vec<u32>> {
    let floor = min * p as u32;
    if n < floor {
        return Vec::new();
    }
    weak_compositions(n - floor, p)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + min).collect())
        .collect()
}

/// Ordering key: the reversed exponent tuple, interleaved with the signs for `N = 8`.
pub fn column_key(b: &MzvSymbol) -> Vec<i64> {
    if b.modulus != 8 {
        return b.xs.iter().rev().map(|&x| x as i64).collect();
    }
    let signs = eight_signs(b);
    (0..b.depth())
        .rev()
        .flat_map(|j| [b.xs[j] as i64, -(signs[j] as i64)])
        .collect()
}

/// The `s = 0` basis elements of weight `n` and depth `p`, sorted by [`column_key`].
pub fn basis_symbols(modulus: u32, n: u32, p: usize) -> Result<Vec<MzvSymbol>> {
    if p == 0 {
        return Ok(if n == 0 {
            vec![MzvSymbol::unit(modulus)]
        } else {
            Vec::new()
        });
    }
    let last_marked = |p: usize| {
        let mut eps = vec![0; p];
        eps[p - 1] = 1;
        eps
    };
    let mut out = Vec::new();
    match modulus {
        2 => {
            for xs in compositions(n, p, 1) {
                if xs.iter().all(|x| x % 2 == 1) {
                    out.push(MzvSymbol::raw(2, xs, last_marked(p)));
                }
            }
        }
        3 | 4 => {
            for xs in compositions(n, p, 1) {
                out.push(MzvSymbol::raw(modulus, xs, last_marked(p)));
            }
        }
        6 => {
            for xs in compositions(n, p, 2) {
                out.push(MzvSymbol::raw(6, xs, last_marked(p)));
            }
        }
        8 => {
            for xs in compositions(n, p, 1) {
                for mask in 0u32..(1 << p) {
                    let eps = (0..p)
                        .map(|j| {
                            let neg = 4 * (mask >> j & 1);
                            if j + 1 == p {
                                neg + 1
                            } else {
                                neg
                            }
                        })
                        .collect();
                    out.push(MzvSymbol::raw(8, xs.clone(), eps));
                }
            }
        }
        _ => {
            return Err(MzvError::Unsupported(format!(
                "no basis family for N={modulus}"
            )))
        }
    }
    out.sort_by_key(column_key);
    Ok(out)
}

/// All basis elements of total weight `n` and depth `p`, including the `(2πi)^s` factor
/// (`s` even for `N ≤ 2`), filtered by `keep`.
pub fn enumerate_basis(
    modulus: u32,
    n: u32,
    p: usize,
    keep: impl Fn(&MzvSymbol) -> bool,
) -> Result<Vec<MzvSymbol>> {
    let step = if modulus <= 2 { 2 } else { 1 };
    let mut out = Vec::new();
    for s in (0..=n).step_by(step) {
        for mut b in basis_symbols(modulus, n - s, p)? {
            b.s = s;
            if keep(&b) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// A row of `M^j_{n,p}`: a derivation of weight `r` and a target basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowKey {
    pub r: u32,
    pub derivation: Derivation,
    pub target: MzvSymbol,
}

/// The square matrix of the derivations on `ℬ_{n,p,≥j}`, rows then columns.
#[derive(Debug, Clone)]
pub struct PartialMatrix {
    pub n: u32,
    pub p: usize,
    pub level: u32,
    pub rows: Vec<RowKey>,
    pub cols: Vec<MzvSymbol>,
    pub matrix: QMatrix,
    inverse: Option<QMatrix>,
}

impl PartialMatrix {
    pub fn size(&self) -> usize {
        self.cols.len()
    }
}

/// How the mod-P certificate found a triangular shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangularOrder {
    /// Lower triangular with diagonal `≡ 1 mod P` in the canonical row and column order.
    Canonical,
    /// Triangular after permuting: `(row, column)` pivots in elimination order, each the
    /// only entry of its row that is nonzero mod P among the columns not yet used.
    Permuted(Vec<(usize, usize)>),
}

/// Evidence that a partial matrix is invertible over `Z_{1[P]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub spec: &'static str,
    pub n: u32,
    pub p: usize,
    pub level: u32,
    pub size: usize,
    pub prime: u64,
    pub order: TriangularOrder,
}

/// Checks that `m` has `P`-integral entries and is triangular mod `P` with unit pivots.
///
/// The canonical order is tried first; otherwise the rows are peeled one at a
/// time, each step taking a row with a single entry nonzero mod `P` among the
/// remaining columns.
pub fn check_unitriangular_mod_p(m: &QMatrix, prime: u64) -> Result<TriangularOrder> {
    if m.rows != m.cols {
        return Err(MzvError::Certificate(format!(
            "matrix is {}x{}, not square",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut residue = vec![vec![0u64; n]; n];
    for (i, row) in residue.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let e = m.get(i, j);
            if padic_valuation(e, prime)? < Valuation::Finite(0) {
                return Err(MzvError::Certificate(format!(
                    "entry ({i}, {j}) = {e} has negative {prime}-adic valuation"
                )));
            }
            *cell = mod_p(e, prime).expect("P-integral entry");
        }
    }
    let canonical = (0..n).all(|i| residue[i][i] == 1 && (i + 1..n).all(|j| residue[i][j] == 0));
    if canonical {
        return Ok(TriangularOrder::Canonical);
    }
    let mut rows_left: Vec<usize> = (0..n).collect();
    let mut cols_left = vec![true; n];
    let mut pivots = Vec::with_capacity(n);
    while !rows_left.is_empty() {
        let found = rows_left.iter().enumerate().find_map(|(k, &i)| {
            let mut nz = (0..n).filter(|&j| cols_left[j] && residue[i][j] != 0);
            match (nz.next(), nz.next()) {
                (Some(j), None) => Some((k, i, j)),
                _ => None,
            }
        });
        let Some((k, i, j)) = found else {
            return Err(MzvError::Certificate(format!(
                "no triangular order mod {prime}: {} rows cannot be peeled",
                rows_left.len()
            )));
        };
        rows_left.remove(k);
        cols_left[j] = false;
        pivots.push((i, j));
    }
    Ok(TriangularOrder::Permuted(pivots))
}

/// Outcome of [`Descent::descent_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentVerdict {
    pub holds: bool,
    /// First nonzero coordinate: derivation, target basis element and value.
    pub witness: Option<(String, MzvSymbol, Rational)>,
}

type BlockKey = (u32, usize, u32);
type ImageKey = (MzvSymbol, u32, usize);

/// The descent engine for one [`DescentSpec`], with its memoized blocks.
pub struct Descent {
    spec: &'static dyn DescentSpec,
    blocks: Mutex<HashMap<BlockKey, Arc<PartialMatrix>>>,
    images: Mutex<HashMap<ImageKey, LinComb<MzvSymbol>>>,
}

impl Descent {
    pub fn new(spec: &'static dyn DescentSpec) -> Result<Self> {
        if !spec.supports_matrices() {
            return Err(MzvError::Unsupported(format!(
                "descent {} provides its derivation split only",
                spec.name()
            )));
        }
        Ok(Descent {
            spec,
            blocks: Mutex::new(HashMap::new()),
            images: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &'static dyn DescentSpec {
        self.spec
    }

    fn modulus(&self) -> u32 {
        self.spec.modulus()
    }

    /// Level-`≥ j` basis elements of weight `n`, depth `p`, `s = 0`.
    pub fn columns(&self, n: u32, p: usize, j: u32) -> Result<Vec<MzvSymbol>> {
        Ok(basis_symbols(self.modulus(), n, p)?
            .into_iter()
            .filter(|b| self.spec.level(b) >= j)
            .collect())
    }

    /// Derivation row blocks of `M^j_{n,p}`: `(r, derivation, target level)`.
    fn row_blocks(&self, n: u32, p: usize) -> Vec<(u32, usize, Derivation)> {
        let mut out = Vec::new();
        for r in 1..=n {
            if ((n - r) as usize) < p - 1 {
                break;
            }
            for (di, d) in self.spec.derivations(r).into_iter().enumerate() {
                out.push((r, di, d));
            }
        }
        out
    }

    fn target_level(j: u32, d: &Derivation) -> i64 {
        if d.in_d {
            j as i64 - 1
        } else {
            j as i64
        }
    }

    /// Row labels of `M^j_{n,p}`, sorted by `(r, derivation, target key)`.
    pub fn rows(&self, n: u32, p: usize, j: u32) -> Result<Vec<RowKey>> {
        let mut out = Vec::new();
        for (r, _, d) in self.row_blocks(n, p) {
            let jt = Self::target_level(j, &d).max(0) as u32;
            for target in self.columns(n - r, p - 1, jt)? {
                out.push(RowKey {
                    r,
                    derivation: d.clone(),
                    target,
                });
            }
        }
        Ok(out)
    }

    /// `D(b)` for a basis element and a derivation, memoized.
    fn derive(
        &self,
        b: &MzvSymbol,
        r: u32,
        di: usize,
        d: &Derivation,
    ) -> Result<LinComb<MzvSymbol>> {
        let key = (b.clone(), r, di);
        if let Some(v) = self.images.lock().expect("image cache").get(&key) {
            return Ok(v.clone());
        }
        let v = d_functional_rp(
            &LinComb::single(b.clone(), Rational::one()),
            r,
            &d.exponents(),
        )?;
        self.images
            .lock()
            .expect("image cache")
            .insert(key, v.clone());
        Ok(v)
    }

    fn derive_comb(
        &self,
        y: &LinComb<MzvSymbol>,
        r: u32,
        di: usize,
        d: &Derivation,
    ) -> Result<LinComb<MzvSymbol>> {
        let mut out = LinComb::new();
        for (b, c) in y.iter() {
            out.add_scaled(&self.derive(b, r, di, d)?, c);
        }
        Ok(out)
    }

    /// The derivation image of a depth-`p` combination, as a vector in row order of `M^j_{n,p}`.
    pub fn image(&self, y: &LinComb<MzvSymbol>, n: u32, p: usize, j: u32) -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for (r, di, d) in self.row_blocks(n, p) {
            let yd = self.derive_comb(y, r, di, &d)?;
            out.extend(self.coords(&yd, n - r, p - 1, Self::target_level(j, &d))?);
        }
        Ok(out)
    }

    /// Coordinates of a depth-`p` combination on the level-`≥ j` basis elements, modulo `ℱ_{j-1}`.
    pub fn coords(
        &self,
        y: &LinComb<MzvSymbol>,
        n: u32,
        p: usize,
        j: i64,
    ) -> Result<Vec<Rational>> {
        let j = j.max(0) as u32;
        if p == 0 {
            let c = y.coeff(&MzvSymbol::unit(self.modulus()));
            return Ok(if j == 0 && n == 0 {
                vec![c]
            } else {
                Vec::new()
            });
        }
        let cols = self.columns(n, p, j)?;
        if y.is_zero() {
            return Ok(vec![Rational::zero(); cols.len()]);
        }
        let index: HashMap<&MzvSymbol, usize> =
            cols.iter().enumerate().map(|(i, b)| (b, i)).collect();
        if y.keys().all(|k| index.contains_key(k)) {
            let mut v = vec![Rational::zero(); cols.len()];
            for (k, c) in y.iter() {
                v[index[k]] = c.clone();
            }
            return Ok(v);
        }
        let block = self.partial_matrix(n, p, j)?;
        let inverse = block.inverse.as_ref().ok_or(MzvError::Singular {
            n,
            p: p as u32,
            level: j,
        })?;
        Ok(inverse.mul_vec(&self.image(y, n, p, j)?))
    }

    /// `M^j_{n,p}`, assembled on first use.
    pub fn partial_matrix(&self, n: u32, p: usize, j: u32) -> Result<Arc<PartialMatrix>> {
        if p == 0 {
            return Err(MzvError::InvalidArgument("depth must be positive".into()));
        }
        let key = (n, p, j);
        if let Some(b) = self.blocks.lock().expect("block cache").get(&key) {
            return Ok(Arc::clone(b));
        }
        let cols = self.columns(n, p, j)?;
        let rows = self.rows(n, p, j)?;
        if rows.len() != cols.len() {
            return Err(MzvError::Certificate(format!(
                "{}: M at n={n}, p={p}, level {j} has {} rows for {} columns",
                self.spec.name(),
                rows.len(),
                cols.len()
            )));
        }
        let mut matrix = QMatrix::zeros(rows.len(), cols.len());
        for (c, b) in cols.iter().enumerate() {
            let v = self.image(&LinComb::single(b.clone(), Rational::one()), n, p, j)?;
            for (r, x) in v.into_iter().enumerate() {
                matrix.set(r, c, x);
            }
        }
        let inverse = matrix.inverse();
        let block = Arc::new(PartialMatrix {
            n,
            p,
            level: j,
            rows,
            cols,
            matrix,
            inverse,
        });
        self.blocks
            .lock()
            .expect("block cache")
            .insert(key, Arc::clone(&block));
        Ok(block)
    }

    /// Mod-P certificate for `M^j_{n,p}`.
    pub fn certificate(&self, n: u32, p: usize, j: u32) -> Result<Certificate> {
        let m = self.partial_matrix(n, p, j)?;
        let order =
            check_unitriangular_mod_p(&m.matrix, self.spec.prime()).map_err(|e| match e {
                MzvError::Certificate(why) => MzvError::Certificate(format!(
                    "{} n={n} p={p} level {j}: {why}",
                    self.spec.name()
                )),
                other => other,
            })?;
        Ok(Certificate {
            spec: self.spec.name(),
            n,
            p,
            level: j,
            size: m.size(),
            prime: self.spec.prime(),
            order,
        })
    }

    /// Largest level among the depth-`p` elements of weight `n`.
    pub fn max_level(&self, n: u32, p: usize) -> Result<Option<u32>> {
        Ok(basis_symbols(self.modulus(), n, p)?
            .iter()
            .map(|b| self.spec.level(b))
            .max())
    }

    /// `cl(b)` with `b + cl(b) ∈ ℱ_i`: a combination of same-depth basis elements of level `≥ i+1`.
    ///
    /// Only the depth-`p` part is determined; lower-depth terms are left free.
    /// A `(2πi)^s` factor on `b` is carried to every term.
    pub fn solve_correction(&self, b: &MzvSymbol, i: u32) -> Result<LinComb<MzvSymbol>> {
        let core = b.without_pi();
        let p = core.depth();
        if !basis_symbols(self.modulus(), core.weight(), p)?.contains(&core) {
            return Err(MzvError::InvalidArgument(format!(
                "{b} is not a basis element"
            )));
        }
        let level = self.spec.level(&core);
        if level > i {
            return Err(MzvError::InvalidArgument(format!(
                "{b} has level {level}, above {i}"
            )));
        }
        if p == 0 {
            return Ok(LinComb::new());
        }
        let n = core.weight();
        let cols = self.columns(n, p, i + 1)?;
        let x = self.coords(&LinComb::single(core, Rational::one()), n, p, i as i64 + 1)?;
        Ok(cols
            .into_iter()
            .zip(x)
            .map(|(mut c, v)| {
                c.s = b.s;
                (c, -v)
            })
            .collect())
    }

    /// `{x + cl(x)}` over basis elements of weight `n` and level `≤ i`, or exactly `i` when `graded`.
    pub fn corrected_basis(
        &self,
        n: u32,
        i: u32,
        graded: bool,
    ) -> Result<Vec<(MzvSymbol, LinComb<MzvSymbol>)>> {
        let mut out = Vec::new();
        for p in 0..=n as usize {
            let keep = |b: &MzvSymbol| {
                let l = self.spec.level(b);
                if graded {
                    l == i
                } else {
                    l <= i
                }
            };
            for b in enumerate_basis(self.modulus(), n, p, keep)? {
                let mut comb = self.solve_correction(&b, i)?;
                comb.add_term(b.clone(), Rational::one());
                out.push((b, comb));
            }
        }
        Ok(out)
    }

    /// Whether a homogeneous combination lies in the smaller algebra, modulo lower depth.
    ///
    /// The top-depth part is tested: its image under `𝒟^d`, and the level-`≥ 1`
    /// coordinates of its image under the other derivations, must vanish.
    pub fn descent_check(&self, z: &LinComb<MzvSymbol>) -> Result<DescentVerdict> {
        let Some(p) = z.keys().map(MzvSymbol::depth).max() else {
            return Ok(DescentVerdict {
                holds: true,
                witness: None,
            });
        };
        let weights: Vec<u32> = z.keys().map(MzvSymbol::weight).collect();
        if weights.iter().any(|&w| w != weights[0]) {
            return Err(MzvError::InvalidArgument(
                "combination is not homogeneous".into(),
            ));
        }
        let mut top = LinComb::new();
        for (k, c) in z.iter().filter(|(k, _)| k.depth() == p) {
            if k.k != 0 {
                return Err(MzvError::InvalidArgument(
                    "regularize leading zeros first".into(),
                ));
            }
            top.add_term(k.without_pi(), c.clone());
        }
        if p == 0 {
            return Ok(DescentVerdict {
                holds: true,
                witness: None,
            });
        }
        let n = top.keys().next().expect("nonempty").weight();
        let rows = self.rows(n, p, 1)?;
        let image = self.image(&top, n, p, 1)?;
        let witness = rows
            .into_iter()
            .zip(image)
            .find(|(_, v)| !v.is_zero())
            .map(|(row, v)| (row.derivation.name, row.target, v));
        Ok(DescentVerdict {
            holds: witness.is_none(),
            witness,
        })
    }
}

/// Whether every coefficient lies in `Z_{1[P]}`.
pub fn all_in_z1p(c: &LinComb<MzvSymbol>, prime: u64) -> bool {
    c.iter().all(|(_, v)| in_z1p(v, prime))
}

/// Sufficient condition for membership in the smaller algebra, read off the roots.
///
/// `N = 2`: no root equals -1. `N = 6`: the word roots `η_i = (ε_i..ε_p)^{-1}`
/// all lie in `{1, ξ_6}` or all in `{1, ξ_6^{-1}}`.
pub fn honorary_precheck(z: &MzvSymbol) -> Result<bool> {
    match z.modulus {
        2 => Ok(z.eps.iter().all(|&e| e == 0)),
        6 => {
            let etas: Vec<u32> = (0..z.depth())
                .map(|i| (6 - z.eps[i..].iter().sum::<u32>() % 6) % 6)
                .collect();
            Ok(etas.iter().all(|e| [0, 1].contains(e)) || etas.iter().all(|e| [0, 5].contains(e)))
        }
        n => Err(MzvError::Unsupported(format!(
            "honorary precheck for N={n}"
        ))),
    }
}
