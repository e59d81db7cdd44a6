//! Polynomials in the entries of `v in U(2)` times integer powers of `det v`.
//!
//! Finite sums of matrix coefficients of `U(2)` are exactly these functions.
//! The class is closed under products, left- and right-invariant
//! differentiation, inversion `v -> v^{-1}` and, on `U(2)`, complex
//! conjugation, so every operation here is exact.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::linalg::{det2, Mat2, C64, ONE, ZERO};

/// `det^det * v11^e[0] * v12^e[1] * v21^e[2] * v22^e[3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub det: i32,
    pub exp: [u32; 4],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { det: 0, exp: [0; 4] };

    pub fn degree(&self) -> u32 {
        self.exp.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut exp = self.exp;
        for (e, o) in exp.iter_mut().zip(other.exp.iter()) {
            *e += o;
        }
        Monomial { det: self.det + other.det, exp }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupPoly {
    terms: BTreeMap<Monomial, C64>,
}

/// Entry index `(i, j)` to slot in [`Monomial::exp`].
const fn slot(i: usize, j: usize) -> usize {
    2 * i + j
}

impl GroupPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn monomial(m: Monomial, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != ZERO {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The coordinate function `v -> v[(i, j)]`.
    pub fn entry(i: usize, j: usize) -> Self {
        let mut exp = [0; 4];
        exp[slot(i, j)] = 1;
        Self::monomial(Monomial { det: 0, exp }, ONE)
    }

    /// `v -> det(v)^m`.
    pub fn det_pow(m: i32) -> Self {
        Self::monomial(Monomial { det: m, exp: [0; 4] }, ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest entry degree among the terms.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: C64) {
        if c == ZERO {
            return;
        }
        let e = self.terms.entry(m).or_insert(ZERO);
        *e += c;
        if *e == ZERO {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn eval(&self, v: &Mat2) -> C64 {
        if self.terms.is_empty() {
            return ZERO;
        }
        let d = det2(v);
        let e = [v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]];
        let mut acc = ZERO;
        for (m, c) in &self.terms {
            let mut t = *c * d.powi(m.det);
            for (x, p) in e.iter().zip(m.exp.iter()) {
                if *p > 0 {
                    t *= x.powu(*p);
                }
            }
            acc += t;
        }
        acc
    }

    /// Left-invariant derivative `x^L f(v) = d/dt f(v exp(t x))` at `t = 0`,
    /// extended complex-linearly in `x`.
    pub fn left_derivative(&self, x: &Mat2) -> Self {
        let tr = x[(0, 0)] + x[(1, 1)];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.det != 0 {
                out.add_term(*m, c * tr * m.det as f64);
            }
            // d/dt v_ij = (v x)_ij = sum_l v_il x_lj
            for i in 0..2 {
                for j in 0..2 {
                    let e = m.exp[slot(i, j)];
                    if e == 0 {
                        continue;
                    }
                    let mut base = *m;
                    base.exp[slot(i, j)] -= 1;
                    for l in 0..2 {
                        let coef = x[(l, j)];
                        if coef == ZERO {
                            continue;
                        }
                        let mut t = base;
                        t.exp[slot(i, l)] += 1;
                        out.add_term(t, c * coef * e as f64);
                    }
                }
            }
        }
        out
    }

    /// Right-invariant derivative `d/dt f(exp(-t x) v)` at `t = 0`.
    pub fn right_derivative(&self, x: &Mat2) -> Self {
        let tr = x[(0, 0)] + x[(1, 1)];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.det != 0 {
                out.add_term(*m, -c * tr * m.det as f64);
            }
            // d/dt v_ij = -(x v)_ij = -sum_l x_il v_lj
            for i in 0..2 {
                for j in 0..2 {
                    let e = m.exp[slot(i, j)];
                    if e == 0 {
                        continue;
                    }
                    let mut base = *m;
                    base.exp[slot(i, j)] -= 1;
                    for l in 0..2 {
                        let coef = x[(i, l)];
                        if coef == ZERO {
                            continue;
                        }
                        let mut t = base;
                        t.exp[slot(l, j)] += 1;
                        out.add_term(t, -c * coef * e as f64);
                    }
                }
            }
        }
        out
    }

    /// `f(v^{-1})`, using `v^{-1} = adj(v) / det(v)`.
    pub fn compose_inverse(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let [a, b, cc, d] = m.exp;
            let sign = if (b + cc) % 2 == 1 { -1.0 } else { 1.0 };
            let mono = Monomial { det: -m.det - m.degree() as i32, exp: [d, b, cc, a] };
            out.add_term(mono, c * sign);
        }
        out
    }

    /// Complex conjugate as a function on `U(2)`, using `conj(v_ij) = (v^{-1})_ji`.
    pub fn conj_unitary(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let [a, b, cc, d] = m.exp;
            let sign = if (b + cc) % 2 == 1 { -1.0 } else { 1.0 };
            let mono = Monomial { det: -m.det - m.degree() as i32, exp: [d, cc, b, a] };
            out.add_term(mono, c.conj() * sign);
        }
        out
    }
}

impl Add for &GroupPoly {
    type Output = GroupPoly;
    fn add(self, rhs: &GroupPoly) -> GroupPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&GroupPoly> for GroupPoly {
    fn add_assign(&mut self, rhs: &GroupPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, *c);
        }
    }
}

impl Sub for &GroupPoly {
    type Output = GroupPoly;
    fn sub(self, rhs: &GroupPoly) -> GroupPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &GroupPoly {
    type Output = GroupPoly;
    fn neg(self) -> GroupPoly {
        self.scale(-ONE)
    }
}

impl Mul for &GroupPoly {
    type Output = GroupPoly;
    fn mul(self, rhs: &GroupPoly) -> GroupPoly {
        let mut out = GroupPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}
