//! K-type labels `tau_{p,q,r}` and multiplicity bookkeeping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Irreducible representation `F^{p,q,r}` of `SU(2) x U(2)`:
/// `(u, v z) -> z^r S^p(u) (x) S^q(v)`, defined on `K` when `r = q (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KType {
    pub p: u32,
    pub q: u32,
    pub r: i32,
}

impl KType {
    pub fn new(p: u32, q: u32, r: i32) -> Result<Self> {
        if (r - q as i32).rem_euclid(2) != 0 {
            return Err(Error::InvalidLabel(format!("F^({p},{q},{r}) needs r = q mod 2")));
        }
        Ok(Self { p, q, r })
    }

    pub fn dim(&self) -> u64 {
        (self.p as u64 + 1) * (self.q as u64 + 1)
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F^({},{},{})", self.p, self.q, self.r)
    }
}

/// Representation `F^{s,r}` of the diagonal subgroup `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MLabel {
    pub s: u32,
    pub r: i32,
}

/// Clebsch-Gordan series `S^a (x) S^b = sum_{c = |a-b|, step 2}^{a+b} S^c`.
pub fn clebsch_gordan(a: u32, b: u32) -> impl Iterator<Item = u32> {
    (a.abs_diff(b)..=a + b).step_by(2)
}

/// Decomposition of `F^a (x) F^b`, sorted descending by `(p, q)`.
pub fn tensor_decompose(a: KType, b: KType) -> Vec<KType> {
    let r = a.r + b.r;
    let mut out: Vec<KType> =
        clebsch_gordan(a.p, b.p).flat_map(|p| clebsch_gordan(a.q, b.q).map(move |q| KType { p, q, r })).collect();
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// Restriction to the diagonal: `F^{p,q,r}|_M = sum_{j=0}^{min(p,q)} F^{p+q-2j, r}`.
pub fn restrict_to_m(a: KType) -> Vec<MLabel> {
    (0..=a.p.min(a.q)).map(|j| MLabel { s: a.p + a.q - 2 * j, r: a.r }).collect()
}

/// Multiplicity of `F^{p,q,r}` in smooth functions on `U(2)` (Peter-Weyl).
pub fn multiplicity_functions(a: KType) -> u32 {
    u32::from(a.p == a.q)
}

/// Multiplicity of `F^{p,q,r}` in one-forms, by Frobenius reciprocity against
/// `Lie(U(2))_C = F^{0,0} + F^{2,0}` as an `M`-module.
pub fn multiplicity_one_forms(a: KType) -> u32 {
    restrict_to_m(a).iter().filter(|m| m.s == 0 || m.s == 2).count() as u32
}

/// Multiplicity in closed one-forms: exact forms `dC^infinity` plus the class of `det^* dz/z`.
pub fn multiplicity_closed_one_forms(a: KType) -> u32 {
    let exact = u32::from(a.p == a.q && !(a.p == 0 && a.r == 0));
    let cohomology = u32::from(a.p == 0 && a.q == 0 && a.r == 0);
    exact + cohomology
}

/// Multiplicity in closed two-forms: `d` maps one-forms onto closed two-forms
/// with kernel the closed one-forms.
pub fn multiplicity_closed_two_forms(a: KType) -> u32 {
    multiplicity_one_forms(a) - multiplicity_closed_one_forms(a)
}

/// The three families making up the closed two-forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KerDFamily {
    /// `F^{k+2,k,r}`
    Upper,
    /// `F^{k,k+2,r}`
    Lower,
    /// `F^{k+1,k+1,r}`
    Middle,
}

/// K-types of closed two-forms with `k <= max_k` and `|r| <= r_bound`.
///
/// Each family is enumerated over the `r` values that make the label valid
/// (`r = q mod 2`); the middle family therefore has `r = k + 1 mod 2`.
pub fn ker_d_ktypes(max_k: u32, r_bound: u32) -> Vec<(KerDFamily, KType)> {
    let mut out = Vec::new();
    let rb = r_bound as i32;
    for k in 0..=max_k {
        let shapes = [(KerDFamily::Upper, k + 2, k), (KerDFamily::Lower, k, k + 2), (KerDFamily::Middle, k + 1, k + 1)];
        for (fam, p, q) in shapes {
            for r in -rb..=rb {
                if let Ok(kt) = KType::new(p, q, r) {
                    out.push((fam, kt));
                }
            }
        }
    }
    out
}

/// K-types of the Maxwell solutions: `|p - q| = 2` and `r = +-max(p, q)`.
pub fn is_maxwell_ktype(a: KType) -> bool {
    a.p.abs_diff(a.q) == 2 && a.r.unsigned_abs() == a.p.max(a.q)
}

/// `p^+` as a K-module.
pub const P_PLUS: KType = KType { p: 1, q: 1, r: -1 };
/// `p^-` as a K-module.
pub const P_MINUS: KType = KType { p: 1, q: 1, r: 1 };
