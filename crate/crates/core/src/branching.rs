//! Exact character bookkeeping for the restriction of the Maxwell
//! representations to `C x S`.
//!
//! Series are in two variables: `y` for the diagonal torus `u(y) = diag(y, 1/y)`
//! of both `SU(2)` factors, and `x` for the one-parameter group
//! `a -> diag(aI, a^{-1}I)`, with `a^{-m}` recorded as `x^m`. With this
//! convention the `Maxw^+` characters carry positive powers of `x` and the
//! `Maxw^-` characters negative powers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{MaxwellBasisLabel, Side, Sign};
use crate::rep_core::{su2_character, LaurentPoly};

/// Which power of `x` the series index counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `coeffs[j]` multiplies `x^j`.
    Positive,
    /// `coeffs[j]` multiplies `x^{-j}`.
    Negative,
}

/// A power series in `x` (or `x^{-1}`) with integer Laurent-polynomial
/// coefficients in `y`, truncated after order `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XYSeries {
    pub truncation: u32,
    pub direction: Direction,
    coeffs: Vec<LaurentPoly>,
}

impl XYSeries {
    pub fn zero(truncation: u32, direction: Direction) -> Self {
        Self { truncation, direction, coeffs: vec![LaurentPoly::zero(); truncation as usize + 1] }
    }

    pub fn one(truncation: u32, direction: Direction) -> Self {
        let mut s = Self::zero(truncation, direction);
        s.coeffs[0] = LaurentPoly::constant(1);
        s
    }

    /// `c x^j` (or `c x^{-j}`); dropped if `j` exceeds the truncation.
    pub fn term(truncation: u32, direction: Direction, j: u32, c: LaurentPoly) -> Self {
        let mut s = Self::zero(truncation, direction);
        s.add_term(j, &c);
        s
    }

    pub fn add_term(&mut self, j: u32, c: &LaurentPoly) {
        if j <= self.truncation {
            let slot = &mut self.coeffs[j as usize];
            *slot = &*slot + c;
        }
    }

    /// Coefficient of the `j`-th power of the series variable.
    pub fn coeff(&self, j: u32) -> &LaurentPoly {
        &self.coeffs[j as usize]
    }

    /// Coefficient of `x^e` in the underlying variable `x`.
    pub fn coeff_x(&self, e: i32) -> LaurentPoly {
        let j = match self.direction {
            Direction::Positive => e,
            Direction::Negative => -e,
        };
        if j < 0 || j as u32 > self.truncation {
            return LaurentPoly::zero();
        }
        self.coeffs[j as usize].clone()
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.truncation != o.truncation || self.direction != o.direction {
            return Err(Error::Contract("series with different truncation or direction".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut s = self.clone();
        for (a, b) in s.coeffs.iter_mut().zip(&o.coeffs) {
            *a = &*a + b;
        }
        Ok(s)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut s = self.clone();
        for (a, b) in s.coeffs.iter_mut().zip(&o.coeffs) {
            *a = &*a - b;
        }
        Ok(s)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let n = self.truncation as usize;
        let mut out = Self::zero(self.truncation, self.direction);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant coefficient must be `+-y^e`.
    pub fn inverse(&self) -> Result<Self> {
        let (e, s) = self.coeffs[0]
            .as_unit_monomial()
            .ok_or_else(|| Error::Domain(format!("constant term {} is not a unit", self.coeffs[0])))?;
        let c0_inv = LaurentPoly::monomial(-e, s);
        let mut inv = Self::zero(self.truncation, self.direction);
        inv.coeffs[0] = c0_inv.clone();
        for m in 1..=self.truncation as usize {
            let mut acc = LaurentPoly::zero();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &inv.coeffs[m - j]);
                }
            }
            inv.coeffs[m] = -&(&acc * &c0_inv);
        }
        Ok(inv)
    }

    /// `sum_j c^j x^{step j}`, i.e. `1/(1 - c x^step)`.
    pub fn geometric(truncation: u32, direction: Direction, c: &LaurentPoly, step: u32) -> Result<Self> {
        if step == 0 {
            return Err(Error::Domain("geometric series needs a positive step".into()));
        }
        let mut out = Self::zero(truncation, direction);
        let mut pow = LaurentPoly::constant(1);
        let mut j = 0;
        while j <= truncation {
            out.coeffs[j as usize] = pow.clone();
            pow = &pow * c;
            j += step;
        }
        Ok(out)
    }

    /// Integer series obtained at `y = 1`.
    pub fn at_y_one(&self) -> Vec<i64> {
        self.coeffs.iter().map(|p| p.at_one()).collect()
    }

    /// Every coefficient invariant under `y -> 1/y`.
    pub fn is_y_symmetric(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_symmetric())
    }

    /// Smallest index with a nonzero coefficient.
    pub fn lowest_order(&self) -> Option<u32> {
        self.coeffs.iter().position(|p| !p.is_zero()).map(|j| j as u32)
    }

    /// First index at which the two series differ.
    pub fn first_mismatch(&self, o: &Self) -> Result<Option<u32>> {
        self.compatible(o)?;
        Ok(self.coeffs.iter().zip(&o.coeffs).position(|(a, b)| a != b).map(|j| j as u32))
    }
}

impl fmt::Display for XYSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.direction {
            Direction::Positive => "x",
            Direction::Negative => "x^-1",
        };
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*({var})^{j}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({var}^{})", self.truncation + 1)
    }
}

fn direction_of(sign: Sign) -> Direction {
    match sign {
        Sign::Plus => Direction::Positive,
        Sign::Minus => Direction::Negative,
    }
}

fn check_order(n: u32) -> Result<()> {
    if n < 4 {
        return Err(Error::Domain(format!("truncation order {n} < 4")));
    }
    Ok(())
}

/// `sum_k chi_{k+2}(y) chi_k(y) x^{+-(2k+4)}`, the character of `Maxw^{+-}` on side `R`.
pub fn maxw_character_series(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let mut s = XYSeries::zero(n, direction_of(sign));
    let mut k = 0;
    while 2 * k + 4 <= n {
        s.add_term(2 * k + 4, &(&su2_character(k + 2) * &su2_character(k)));
        k += 1;
    }
    Ok(s)
}

/// The same character assembled from the K-types `(p, q, r)` of the side-`R`
/// basis labels: `chi_p(y) chi_q(y) x^{2r}`.
pub fn ktype_character_series(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let mut s = XYSeries::zero(n, direction_of(sign));
    for k in 0.. {
        let t = MaxwellBasisLabel::new(k, Side::R, sign).ktype();
        let e = 2 * t.r;
        if e.unsigned_abs() > n {
            break;
        }
        let term = &su2_character(t.p) * &su2_character(t.q);
        match s.direction {
            Direction::Positive if e >= 0 => s.add_term(e as u32, &term),
            Direction::Negative if e <= 0 => s.add_term((-e) as u32, &term),
            _ => return Err(Error::Contract(format!("K-type {t:?} has the wrong S-frequency sign"))),
        }
    }
    Ok(s)
}

fn poly(terms: &[(i32, i64)]) -> LaurentPoly {
    terms.iter().fold(LaurentPoly::zero(), |acc, (e, c)| &acc + &LaurentPoly::monomial(*e, *c))
}

/// Expansion of `x^4 (y^4 - x^2 y^2 + y^2 + 1) / ((1 - x^2)(y^2 - x^2)(1 - x^2 y^2))`,
/// by the geometric series `1/(y^2 - x^2) = y^{-2} sum_j y^{-2j} x^{2j}`.
pub fn rational_side_series(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let d = direction_of(sign);
    let mut num = XYSeries::zero(n, d);
    num.add_term(4, &poly(&[(4, 1), (2, 1), (0, 1)]));
    num.add_term(6, &poly(&[(2, -1)]));
    let a = XYSeries::geometric(n, d, &LaurentPoly::constant(1), 2)?;
    let b = XYSeries::geometric(n, d, &LaurentPoly::monomial(-2, 1), 2)?.mul(&XYSeries::term(
        n,
        d,
        0,
        LaurentPoly::monomial(-2, 1),
    ))?;
    let c = XYSeries::geometric(n, d, &LaurentPoly::monomial(2, 1), 2)?;
    num.mul(&a)?.mul(&b)?.mul(&c)
}

/// The rational side again, by inverting the expanded denominator.
pub fn rational_side_by_division(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let d = direction_of(sign);
    let mut num = XYSeries::zero(n, d);
    num.add_term(4, &poly(&[(4, 1), (2, 1), (0, 1)]));
    num.add_term(6, &poly(&[(2, -1)]));
    let mut den = XYSeries::zero(n, d);
    // (1 - x^2)(y^2 - x^2)(1 - x^2 y^2)
    den.add_term(0, &poly(&[(2, 1)]));
    den.add_term(2, &poly(&[(4, -1), (2, -1), (0, -1)]));
    den.add_term(4, &poly(&[(4, 1), (2, 1), (0, 1)]));
    den.add_term(6, &poly(&[(2, -1)]));
    num.mul(&den.inverse()?)
}

/// `x^4 sum_k chi_{2k+2}(y) x^{2k}`.
pub fn shifted_even_character_series(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let mut s = XYSeries::zero(n, direction_of(sign));
    let mut k = 0;
    while 2 * k + 4 <= n {
        s.add_term(2 * k + 4, &su2_character(2 * k + 2));
        k += 1;
    }
    Ok(s)
}

/// `sum_{k >= 1} chi_{2k}(y) x^{2k+2} / (1 - x^2)`: the `SO(3)` harmonics of
/// degree `k` (character `chi_{2k}`) tensored with the holomorphic discrete
/// series whose lowest `S`-weight is `x^{2k+2}`.
pub fn dual_pair_series(n: u32, sign: Sign) -> Result<XYSeries> {
    check_order(n)?;
    let d = direction_of(sign);
    let geo = XYSeries::geometric(n, d, &LaurentPoly::constant(1), 2)?;
    let mut s = XYSeries::zero(n, d);
    let mut k = 1;
    while 2 * k + 2 <= n {
        let lowest = XYSeries::term(n, d, 2 * k + 2, su2_character(2 * k));
        s = s.add(&lowest.mul(&geo)?)?;
        k += 1;
    }
    Ok(s)
}

/// Outcome of comparing the different expansions of the character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingReport {
    pub order: u32,
    pub direction: Direction,
    /// `None` when the sum side equals the rational side.
    pub rational_mismatch: Option<u32>,
    pub division_mismatch: Option<u32>,
    pub ktype_mismatch: Option<u32>,
    /// `(1 - x^2)` times the series against `x^4 sum chi_{2k+2} x^{2k}`.
    pub shifted_mismatch: Option<u32>,
    pub dual_pair_mismatch: Option<u32>,
    pub y_symmetric: bool,
    /// First index where the `y = 1` value is not `(k+3)(k+1)` at `2k+4` (or zero elsewhere).
    pub dimension_mismatch: Option<u32>,
    pub lowest_order: Option<u32>,
}

impl BranchingReport {
    pub fn passed(&self) -> bool {
        self.rational_mismatch.is_none()
            && self.division_mismatch.is_none()
            && self.ktype_mismatch.is_none()
            && self.shifted_mismatch.is_none()
            && self.dual_pair_mismatch.is_none()
            && self.dimension_mismatch.is_none()
            && self.y_symmetric
            && self.lowest_order == Some(4)
    }
}

pub fn dual_pair_decomposition_check(n: u32, sign: Sign) -> Result<BranchingReport> {
    let sum = maxw_character_series(n, sign)?;
    let d = sum.direction;
    let one_minus_x2 = XYSeries::one(n, d).sub(&XYSeries::term(n, d, 2, LaurentPoly::constant(1)))?;
    let dims = sum.at_y_one();
    let dimension_mismatch = dims
        .iter()
        .enumerate()
        .position(|(j, v)| {
            let want = if j >= 4 && j % 2 == 0 {
                let k = (j as i64 - 4) / 2;
                (k + 3) * (k + 1)
            } else {
                0
            };
            *v != want
        })
        .map(|j| j as u32);
    Ok(BranchingReport {
        order: n,
        direction: d,
        rational_mismatch: sum.first_mismatch(&rational_side_series(n, sign)?)?,
        division_mismatch: sum.first_mismatch(&rational_side_by_division(n, sign)?)?,
        ktype_mismatch: sum.first_mismatch(&ktype_character_series(n, sign)?)?,
        shifted_mismatch: sum.mul(&one_minus_x2)?.first_mismatch(&shifted_even_character_series(n, sign)?)?,
        dual_pair_mismatch: sum.first_mismatch(&dual_pair_series(n, sign)?)?,
        y_symmetric: sum.is_y_symmetric(),
        dimension_mismatch,
        lowest_order: sum.lowest_order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_coefficients() {
        let s = maxw_character_series(10, Sign::Plus).unwrap();
        assert_eq!(s.coeff(4).to_string(), "y^2+1+y^-2");
        assert!(s.coeff(5).is_zero());
        assert_eq!(s.coeff(6).terms(), vec![(-4, 1), (-2, 2), (0, 2), (2, 2), (4, 1)]);
        let m = maxw_character_series(10, Sign::Minus).unwrap();
        assert_eq!(m.coeff_x(-4), s.coeff_x(4));
        assert!(m.coeff_x(4).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let mut a = XYSeries::zero(12, Direction::Positive);
        a.add_term(0, &LaurentPoly::monomial(2, -1));
        a.add_term(1, &su2_character(3));
        a.add_term(5, &LaurentPoly::constant(7));
        let p = a.mul(&a.inverse().unwrap()).unwrap();
        assert_eq!(p, XYSeries::one(12, Direction::Positive));
        a.add_term(0, &LaurentPoly::constant(1));
        assert!(a.inverse().is_err());
    }

    #[test]
    fn identities_hold_both_families() {
        for sign in [Sign::Plus, Sign::Minus] {
            let r = dual_pair_decomposition_check(40, sign).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn incompatible_series() {
        let a = XYSeries::one(8, Direction::Positive);
        assert!(a.add(&XYSeries::one(8, Direction::Negative)).is_err());
        assert!(a.mul(&XYSeries::one(9, Direction::Positive)).is_err());
        assert!(maxw_character_series(3, Sign::Plus).is_err());
    }
}
