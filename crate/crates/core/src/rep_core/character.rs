//! Integer Laurent polynomials in one variable `y`, and the `SU(2)` characters.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::linalg::C64;

/// Dense integer Laurent polynomial `sum_j coeffs[j] y^(offset + j)`.
///
/// Kept normalized: no leading or trailing zero coefficients, and the zero
/// polynomial has an empty coefficient vector with offset 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly {
    offset: i32,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    /// `c * y^e`.
    pub fn monomial(e: i32, c: i64) -> Self {
        Self::from_coeffs(e, vec![c])
    }

    pub fn from_coeffs(offset: i32, coeffs: Vec<i64>) -> Self {
        let mut p = Self { offset, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.offset += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.offset = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.offset)
    }

    pub fn max_degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `y^e`.
    pub fn coeff(&self, e: i32) -> i64 {
        let j = e - self.offset;
        if j < 0 {
            return 0;
        }
        self.coeffs.get(j as usize).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient, ascending.
    pub fn terms(&self) -> Vec<(i32, i64)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (self.offset + j as i32, *c)).collect()
    }

    /// If this is `+-y^e`, return `(e, +-1)`.
    pub fn as_unit_monomial(&self) -> Option<(i32, i64)> {
        match self.coeffs.as_slice() {
            [c] if c.abs() == 1 => Some((self.offset, *c)),
            _ => None,
        }
    }

    /// `p(y^{-1})`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let top = self.max_degree().unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(-top, coeffs)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    /// Multiply by `y^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { offset: self.offset + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::from_coeffs(self.offset, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Value at `y = 1`.
    pub fn at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, y: C64) -> C64 {
        self.terms().iter().map(|(e, c)| y.powi(*e) * *c as f64).sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.max_degree().unwrap().max(rhs.max_degree().unwrap());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.offset + rhs.offset, coeffs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().into_iter().rev() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (e, mag) {
                (0, m) => format!("{m}"),
                (1, 1) => "y".to_string(),
                (1, m) => format!("{m}y"),
                (e, 1) => format!("y^{e}"),
                (e, m) => format!("{m}y^{e}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// `chi_k(y) = y^k + y^(k-2) + ... + y^(-k)`, the character of `S^k(C^2)`
/// at `diag(y, y^{-1})`.
pub fn su2_character(k: u32) -> LaurentPoly {
    let mut coeffs = vec![0i64; 2 * k as usize + 1];
    for j in 0..=k as usize {
        coeffs[2 * j] = 1;
    }
    LaurentPoly::from_coeffs(-(k as i32), coeffs)
}

/// `chi_k` evaluated at a complex number.
pub fn su2_character_at(k: u32, y: C64) -> C64 {
    su2_character(k).eval(y)
}
