//! Galois descents `(k_N/k_{N'}, M/M')`: the level function on basis
//! elements and the split of the derivations into `𝒟^d` and its complement.
//!
//! Every descent implements [`DescentSpec`] and is registered by name in
//! [`registry`]; [`lookup`] and [`find`] select one at runtime.

use std::fmt;

use num_traits::One;

use crate::error::{MzvError, Result};
use crate::exactnum::{qi, Rational};
use crate::words::{MzvSymbol, RootOfUnity};

/// A derivation `Σ_η c_η D^η_r`, given by a functional on the depth-1 basis roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub weight: u32,
    pub functional: Vec<(RootOfUnity, Rational)>,
    /// True when the derivation belongs to `𝒟^d`, the part that must vanish on the smaller algebra.
    pub in_d: bool,
}

impl Derivation {
    fn new(label: &str, r: u32, functional: Vec<(RootOfUnity, Rational)>, in_d: bool) -> Self {
        Derivation {
            name: format!("{label}_{r}"),
            weight: r,
            functional,
            in_d,
        }
    }

    /// The functional with roots as exponents, as consumed by the coaction module.
    pub fn exponents(&self) -> Vec<(u32, Rational)> {
        self.functional
            .iter()
            .map(|(r, c)| (r.exp(), c.clone()))
            .collect()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// One Galois descent.
pub trait DescentSpec: Send + Sync {
    /// Registry name, e.g. `"k4/Q,2/1"`.
    fn name(&self) -> &'static str;
    fn modulus(&self) -> u32;
    /// `N'`, the modulus of the smaller algebra.
    fn target(&self) -> u32;
    /// Ramification `M` of the source.
    fn ram(&self) -> u32;
    /// Ramification `M'` of the target.
    fn ram_to(&self) -> u32;
    /// The prime `P` of the `Z_{1[P]}` structure.
    fn prime(&self) -> u64;
    /// Level of a basis element: the count the filtration is indexed by.
    fn level(&self, b: &MzvSymbol) -> u32;
    /// Derivations of weight `r`, in a fixed order.
    fn derivations(&self, r: u32) -> Vec<Derivation>;
    /// Whether matrices, certificates and corrections are available.
    fn supports_matrices(&self) -> bool {
        true
    }
}

/// Signs `σ_j ∈ {±1}` of an `N = 8` basis element, `ε_j = σ_j` for `j < p` and `ε_p = σ_p ξ`.
pub fn eight_signs(b: &MzvSymbol) -> Vec<i8> {
    let p = b.depth();
    b.eps
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let plus = if j + 1 == p { e == 1 } else { e == 0 };
            if plus {
                1
            } else {
                -1
            }
        })
        .collect()
}

fn count(b: &MzvSymbol, pred: impl Fn(u32) -> bool) -> u32 {
    b.xs.iter().filter(|&&x| pred(x)).count() as u32
}

fn xi_functional(n: u32) -> Vec<(RootOfUnity, Rational)> {
    vec![(RootOfUnity::new(n, 1), Rational::one())]
}

/// `N = 2` to `N' = 1`: `𝒟^d = {D^{-1}_1}`, level = number of entries equal to 1.
struct EulerToZeta;

impl DescentSpec for EulerToZeta {
    fn name(&self) -> &'static str {
        "Q/Q,2/1"
    }
    fn modulus(&self) -> u32 {
        2
    }
    fn target(&self) -> u32 {
        1
    }
    fn ram(&self) -> u32 {
        2
    }
    fn ram_to(&self) -> u32 {
        1
    }
    fn prime(&self) -> u64 {
        2
    }
    fn level(&self, b: &MzvSymbol) -> u32 {
        count(b, |x| x == 1)
    }
    fn derivations(&self, r: u32) -> Vec<Derivation> {
        if r.is_multiple_of(2) {
            return Vec::new();
        }
        vec![Derivation::new("D-1", r, xi_functional(2), r == 1)]
    }
}

/// Which of the three `N = 3, 4` descents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QuadKind {
    /// `(k_N/k_N, P/1)`: only the ramification drops.
    Unramify,
    /// `(k_N/Q, P/P)`.
    ToRational,
    /// `(k_N/Q, P/1)`.
    ToRationalUnramified,
}

/// `N = 3` (`P = 3`) or `N = 4` (`P = 2`).
struct Quadratic {
    name: &'static str,
    modulus: u32,
    kind: QuadKind,
}

impl Quadratic {
    fn in_d(&self, r: u32) -> bool {
        match self.kind {
            QuadKind::Unramify => r == 1,
            QuadKind::ToRational => r.is_multiple_of(2),
            QuadKind::ToRationalUnramified => r.is_multiple_of(2) || r == 1,
        }
    }
}

impl DescentSpec for Quadratic {
    fn name(&self) -> &'static str {
        self.name
    }
    fn modulus(&self) -> u32 {
        self.modulus
    }
    fn target(&self) -> u32 {
        match (self.kind, self.modulus) {
            (QuadKind::Unramify, n) => n,
            (QuadKind::ToRational, 4) => 2,
            _ => 1,
        }
    }
    fn ram(&self) -> u32 {
        self.prime() as u32
    }
    fn ram_to(&self) -> u32 {
        match self.kind {
            QuadKind::ToRational => self.prime() as u32,
            _ => 1,
        }
    }
    fn prime(&self) -> u64 {
        if self.modulus == 3 {
            3
        } else {
            2
        }
    }
    fn level(&self, b: &MzvSymbol) -> u32 {
        match self.kind {
            QuadKind::Unramify => count(b, |x| x == 1),
            QuadKind::ToRational => count(b, |x| x % 2 == 0),
            QuadKind::ToRationalUnramified => count(b, |x| x % 2 == 0 || x == 1),
        }
    }
    fn derivations(&self, r: u32) -> Vec<Derivation> {
        vec![Derivation::new(
            "Dxi",
            r,
            xi_functional(self.modulus),
            self.in_d(r),
        )]
    }
}

/// `N = 6` unramified to `N' = 1`: `𝒟^d = {D^ξ_{2r}}`, level = number of even entries.
struct SixToZeta;

impl DescentSpec for SixToZeta {
    fn name(&self) -> &'static str {
        "k6/Q,1/1"
    }
    fn modulus(&self) -> u32 {
        6
    }
    fn target(&self) -> u32 {
        1
    }
    fn ram(&self) -> u32 {
        1
    }
    fn ram_to(&self) -> u32 {
        1
    }
    fn prime(&self) -> u64 {
        3
    }
    fn level(&self, b: &MzvSymbol) -> u32 {
        count(b, |x| x % 2 == 0)
    }
    fn derivations(&self, r: u32) -> Vec<Derivation> {
        if r == 1 {
            return Vec::new();
        }
        vec![Derivation::new(
            "Dxi",
            r,
            xi_functional(6),
            r.is_multiple_of(2),
        )]
    }
}

/// Which of the three `N = 8` descents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EightKind {
    /// `(k_8/k_4, 2/2)`.
    ToFour,
    /// `(k_8/Q, 2/2)`.
    ToTwo,
    /// `(k_8/Q, 2/1)`.
    ToOne,
}

struct Eight {
    name: &'static str,
    kind: EightKind,
}

impl DescentSpec for Eight {
    fn name(&self) -> &'static str {
        self.name
    }
    fn modulus(&self) -> u32 {
        8
    }
    fn target(&self) -> u32 {
        match self.kind {
            EightKind::ToFour => 4,
            EightKind::ToTwo => 2,
            EightKind::ToOne => 1,
        }
    }
    fn ram(&self) -> u32 {
        2
    }
    fn ram_to(&self) -> u32 {
        match self.kind {
            EightKind::ToOne => 1,
            _ => 2,
        }
    }
    fn prime(&self) -> u64 {
        2
    }
    /// Counts indices `j` satisfying the descent's condition; an index meeting
    /// several conditions counts once.
    fn level(&self, b: &MzvSymbol) -> u32 {
        let signs = eight_signs(b);
        b.xs.iter()
            .zip(&signs)
            .filter(|(&x, &s)| match self.kind {
                EightKind::ToFour => s < 0,
                EightKind::ToTwo => s < 0 || x % 2 == 0,
                EightKind::ToOne => s < 0 || x % 2 == 0 || x == 1,
            })
            .count() as u32
    }
    fn derivations(&self, r: u32) -> Vec<Derivation> {
        let xi = RootOfUnity::new(8, 1);
        let mxi = RootOfUnity::new(8, 5);
        let both_in_d = match self.kind {
            EightKind::ToFour => false,
            EightKind::ToTwo => r.is_multiple_of(2),
            EightKind::ToOne => r.is_multiple_of(2) || r == 1,
        };
        if both_in_d {
            vec![
                Derivation::new("Dxi", r, vec![(xi, qi(1))], true),
                Derivation::new("D-xi", r, vec![(mxi, qi(1))], true),
            ]
        } else {
            vec![
                Derivation::new("Dxi", r, vec![(xi, qi(1))], false),
                Derivation::new("Dxi-D-xi", r, vec![(xi, qi(1)), (mxi, qi(-1))], true),
            ]
        }
    }
}

/// `N = 9` to `N' = 3`, `(k_9/k_3, 3/3)`: the split is known, no depth-1 tables or
/// matrices are provided. Roots `-ξ_9^k` live in `μ_18`.
struct NineToThree;

impl DescentSpec for NineToThree {
    fn name(&self) -> &'static str {
        "k9/k3,3/3"
    }
    fn modulus(&self) -> u32 {
        9
    }
    fn target(&self) -> u32 {
        3
    }
    fn ram(&self) -> u32 {
        3
    }
    fn ram_to(&self) -> u32 {
        3
    }
    fn prime(&self) -> u64 {
        3
    }
    fn level(&self, _b: &MzvSymbol) -> u32 {
        0
    }
    fn derivations(&self, r: u32) -> Vec<Derivation> {
        let xi = RootOfUnity::new(18, 2);
        let m4 = RootOfUnity::new(18, 9 + 8);
        let m7 = RootOfUnity::new(18, 9 + 14);
        vec![
            Derivation::new("Dxi-D-xi^4", r, vec![(xi, qi(1)), (m4, qi(-1))], true),
            Derivation::new("Dxi-D-xi^7", r, vec![(xi, qi(1)), (m7, qi(-1))], true),
        ]
    }
    fn supports_matrices(&self) -> bool {
        false
    }
}

static EULER: EulerToZeta = EulerToZeta;
static Q3_UNRAM: Quadratic = Quadratic {
    name: "k3/k3,3/1",
    modulus: 3,
    kind: QuadKind::Unramify,
};
static Q3_RAT: Quadratic = Quadratic {
    name: "k3/Q,3/3",
    modulus: 3,
    kind: QuadKind::ToRational,
};
static Q3_FULL: Quadratic = Quadratic {
    name: "k3/Q,3/1",
    modulus: 3,
    kind: QuadKind::ToRationalUnramified,
};
static Q4_UNRAM: Quadratic = Quadratic {
    name: "k4/k4,2/1",
    modulus: 4,
    kind: QuadKind::Unramify,
};
static Q4_RAT: Quadratic = Quadratic {
    name: "k4/Q,2/2",
    modulus: 4,
    kind: QuadKind::ToRational,
};
static Q4_FULL: Quadratic = Quadratic {
    name: "k4/Q,2/1",
    modulus: 4,
    kind: QuadKind::ToRationalUnramified,
};
static SIX: SixToZeta = SixToZeta;
static E_FOUR: Eight = Eight {
    name: "k8/k4,2/2",
    kind: EightKind::ToFour,
};
static E_TWO: Eight = Eight {
    name: "k8/Q,2/2",
    kind: EightKind::ToTwo,
};
static E_ONE: Eight = Eight {
    name: "k8/Q,2/1",
    kind: EightKind::ToOne,
};
static NINE: NineToThree = NineToThree;

/// Every registered descent, the eleven with matrix support first.
pub fn registry() -> Vec<&'static dyn DescentSpec> {
    vec![
        &EULER, &Q3_UNRAM, &Q3_RAT, &Q3_FULL, &Q4_UNRAM, &Q4_RAT, &Q4_FULL, &SIX, &E_FOUR, &E_TWO,
        &E_ONE, &NINE,
    ]
}

/// Descents whose matrices and certificates the engine provides.
pub fn supported() -> Vec<&'static dyn DescentSpec> {
    registry()
        .into_iter()
        .filter(|s| s.supports_matrices())
        .collect()
}

/// Descent by registry name, with or without the `N:` prefix (`"4:k4/Q,2/1"` or `"k4/Q,2/1"`).
pub fn lookup(name: &str) -> Result<&'static dyn DescentSpec> {
    let bare = name.split_once(':').map_or(name, |(_, rest)| rest).trim();
    registry()
        .into_iter()
        .find(|s| s.name() == bare)
        .ok_or_else(|| MzvError::Unsupported(format!("descent {name:?}")))
}

/// Descent by `(N, N', M, M')`; `M` defaults to the usual ramification of `N`.
pub fn find(
    n: u32,
    target: u32,
    ram: Option<u32>,
    ram_to: Option<u32>,
) -> Result<&'static dyn DescentSpec> {
    let matches: Vec<_> = registry()
        .into_iter()
        .filter(|s| {
            s.modulus() == n
                && s.target() == target
                && ram.is_none_or(|m| m == s.ram())
                && ram_to.is_none_or(|m| m == s.ram_to())
        })
        .collect();
    match matches.as_slice() {
        [one] => Ok(*one),
        [] => Err(MzvError::Unsupported(format!(
            "no descent from N={n} to N'={target} with ramification {ram:?}/{ram_to:?}"
        ))),
        _ => Err(MzvError::InvalidArgument(format!(
            "descent from N={n} to N'={target} is ambiguous; pass --ram-to"
        ))),
    }
}

/// `(𝒟^d, 𝒟^{∖d})` for all weights `1..=r_max`.
pub fn derivation_split(spec: &dyn DescentSpec, r_max: u32) -> (Vec<Derivation>, Vec<Derivation>) {
    (1..=r_max)
        .flat_map(|r| spec.derivations(r))
        .partition(|d| d.in_d)
}
