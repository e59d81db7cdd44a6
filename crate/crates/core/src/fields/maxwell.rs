//! Maxwell basis solutions, their K-type labels and the `J`-eigenspace test.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{coframe, FormField};
use crate::error::{Error, Result};
use crate::geometry::forms::{eigen_projection, Eigen, FormValue};
use crate::geometry::quadrature::haar_u2;
use crate::linalg::Mat2;
use crate::par::{self, Exec};
use crate::rep_core::ktype::KType;
use crate::rep_core::poly::GroupPoly;
use crate::rep_core::sym_power::psi_poly;

/// Sup-norm threshold for a vanishing eigen-projection.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Minimum number of sample points for [`j_classification`].
pub const CLASSIFY_POINTS: usize = 25;

/// `L`: K-types `(k, k+2, r)`; `R`: K-types `(k+2, k, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MaxwellBasisLabel {
    pub k: u32,
    pub side: Side,
    pub sign: Sign,
}

impl MaxwellBasisLabel {
    pub fn new(k: u32, side: Side, sign: Sign) -> Self {
        Self { k, side, sign }
    }

    /// `l = +-(k + 2)`.
    pub fn l(&self) -> i32 {
        self.sign.as_i32() * (self.k as i32 + 2)
    }

    pub fn ktype(&self) -> KType {
        let (k, r) = (self.k, self.l());
        match self.side {
            Side::L => KType { p: k, q: k + 2, r },
            Side::R => KType { p: k + 2, q: k, r },
        }
    }

    /// `J`-eigenvalue of the solution.
    pub fn eigen(&self) -> Eigen {
        match (self.side, self.sign) {
            (Side::L, Sign::Plus) | (Side::R, Sign::Minus) => Eigen::MinusI,
            (Side::L, Sign::Minus) | (Side::R, Sign::Plus) => Eigen::PlusI,
        }
    }

    /// All labels with `k <= k_max`.
    pub fn all(k_max: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for side in [Side::L, Side::R] {
            for sign in [Sign::Plus, Sign::Minus] {
                for k in 0..=k_max {
                    out.push(Self::new(k, side, sign));
                }
            }
        }
        out
    }
}

impl fmt::Display for MaxwellBasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::L => "L",
            Side::R => "R",
        };
        let sign = match self.sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        write!(f, "{}{}{}", self.k, side, sign)
    }
}

impl FromStr for MaxwellBasisLabel {
    type Err = Error;

    /// Parses `<k><L|R><+|->`, e.g. `0L+` or `3R-`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(format!("expected <k><L|R><+|->, got {s:?}"));
        let s = s.trim();
        let sign = match s.chars().last() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(bad()),
        };
        let body = &s[..s.len() - 1];
        let side = match body.chars().last() {
            Some('L' | 'l') => Side::L,
            Some('R' | 'r') => Side::R,
            _ => return Err(bad()),
        };
        let k = body[..body.len() - 1].parse().map_err(|_| bad())?;
        Ok(Self::new(k, side, sign))
    }
}

/// A solution `omega = d(potential)`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub omega: FormField,
    pub potential: FormField,
}

impl Solution {
    pub fn from_potential(potential: FormField) -> Result<Self> {
        let omega = potential.exterior_derivative()?;
        Ok(Self { omega, potential })
    }

    pub fn inversion_pullback(&self) -> Result<Self> {
        Ok(Self { omega: self.omega.inversion_pullback()?, potential: self.potential.inversion_pullback()? })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Self { omega: self.omega.add(&o.omega)?, potential: self.potential.add(&o.potential)? })
    }

    pub fn scale(&self, s: crate::linalg::C64) -> Self {
        Self { omega: self.omega.scale(s), potential: self.potential.scale(s) }
    }
}

/// The basis solution of a label.
///
/// Side `L`: `d(psi_{k,l} alpha_f^L)`. Side `R`: `eta^*` of the side-`L`
/// solution of opposite sign.
pub fn maxwell_basis(label: MaxwellBasisLabel) -> Result<Solution> {
    match label.side {
        Side::L => {
            let psi = psi_poly(label.k, label.l())?;
            Solution::from_potential(FormField::invariant(&coframe::alpha_f()).times(&psi))
        }
        Side::R => {
            let mirror = MaxwellBasisLabel::new(label.k, Side::L, label.sign.flip());
            maxwell_basis(mirror)?.inversion_pullback()
        }
    }
}

/// The three-dimensional lowest K-type of the `(side, sign)` family (`k = 0`).
///
/// Side `L` is spanned by `d(det^{+-1} alpha_b^L)`, `b = e, f, h`; side `R` by
/// the `eta^*` images of the opposite-sign side `L`.
pub fn lowest_ktype_basis(side: Side, sign: Sign) -> Result<Vec<Solution>> {
    match side {
        Side::L => {
            let det = GroupPoly::det_pow(sign.as_i32());
            [coframe::alpha_e(), coframe::alpha_f(), coframe::alpha_h()]
                .iter()
                .map(|a| Solution::from_potential(FormField::invariant(a).times(&det)))
                .collect()
        }
        Side::R => lowest_ktype_basis(Side::L, sign.flip())?.iter().map(|s| s.inversion_pullback()).collect(),
    }
}

/// Sup norms of the two eigen-projections over a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResiduals {
    pub plus_i: f64,
    pub minus_i: f64,
    pub norm: f64,
}

impl EigenResiduals {
    pub fn residual(&self, e: Eigen) -> f64 {
        match e {
            Eigen::PlusI => self.plus_i,
            Eigen::MinusI => self.minus_i,
        }
    }
}

pub fn eigen_residuals(w: &FormField, pts: &[Mat2], exec: Exec) -> Result<EigenResiduals> {
    let vals = par::map(exec, pts, |u| -> Result<(f64, f64, f64)> {
        let v = w.eval(u)?;
        Ok((
            eigen_projection(&v, Eigen::PlusI)?.norm_inf(),
            eigen_projection(&v, Eigen::MinusI)?.norm_inf(),
            v.norm_inf(),
        ))
    });
    let mut out = EigenResiduals { plus_i: 0.0, minus_i: 0.0, norm: 0.0 };
    for v in vals {
        let (p, m, n) = v?;
        out.plus_i = out.plus_i.max(p);
        out.minus_i = out.minus_i.max(m);
        out.norm = out.norm.max(n);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JClassification {
    pub k: u32,
    pub l: i32,
    pub is_maxwell: bool,
    pub eigen: Option<Eigen>,
    pub residuals: EigenResiduals,
    pub points: usize,
}

/// Decide whether `d(psi_{k,l} alpha_f^L)` lies in a `J`-eigenspace.
///
/// The form is in the `+i` eigenspace iff its `-i` projection vanishes at
/// every sample point, and conversely.
pub fn j_classification(k: u32, l: i32, samples: usize, seed: u64) -> Result<JClassification> {
    let psi = psi_poly(k, l)?;
    let w = FormField::invariant(&coframe::alpha_f()).times(&psi).exterior_derivative()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Mat2> = (0..samples.max(CLASSIFY_POINTS)).map(|_| haar_u2(&mut rng)).collect();
    let res = eigen_residuals(&w, &pts, Exec::default())?;
    let eigen = if res.norm <= CLASSIFY_TOL {
        None
    } else if res.minus_i < CLASSIFY_TOL {
        Some(Eigen::PlusI)
    } else if res.plus_i < CLASSIFY_TOL {
        Some(Eigen::MinusI)
    } else {
        None
    };
    Ok(JClassification { k, l, is_maxwell: eigen.is_some(), eigen, residuals: res, points: pts.len() })
}

/// One exported sample: the point (8 reals, row-major `[re, im]`) and the six
/// 2-form coefficients (12 reals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: [f64; 8],
    pub coeffs: Vec<f64>,
}

pub fn field_samples(w: &FormField, pts: &[Mat2]) -> Result<Vec<FieldSample>> {
    pts.iter()
        .map(|u| {
            let v: FormValue = w.eval(u)?;
            let point = [
                u[(0, 0)].re,
                u[(0, 0)].im,
                u[(0, 1)].re,
                u[(0, 1)].im,
                u[(1, 0)].re,
                u[(1, 0)].im,
                u[(1, 1)].re,
                u[(1, 1)].im,
            ];
            let coeffs = v.coeffs().iter().flat_map(|z| [z.re, z.im]).collect();
            Ok(FieldSample { point, coeffs })
        })
        .collect()
}
