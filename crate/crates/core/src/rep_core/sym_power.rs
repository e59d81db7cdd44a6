//! Symmetric powers `S^k(C^2)`, matrix coefficients and the highest weight
//! functions `psi_{k,l}`.
//!
//! Basis index `i` of `S^k(C^2)` is the monomial `z1^(k-i) z2^i`, so
//! `e1^k` is index 0 and `e2^k` is index `k`. The invariant inner product
//! makes these monomials orthogonal with `|z1^(k-i) z2^i|^2 = 1 / C(k, i)`.

use nalgebra::{DMatrix, DVector};

use super::poly::GroupPoly;
use crate::error::{Error, Result};
use crate::linalg::{c, det2, frame, mat2, Mat2, C64, I, ONE, ZERO};

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Gram weights of the invariant inner product on `S^k(C^2)`.
pub fn inner_weights(k: u32) -> Vec<f64> {
    (0..=k).map(|i| 1.0 / binomial(k, i)).collect()
}

/// `<a, b> = sum_i a_i conj(b_i) / C(k, i)`.
pub fn inner(k: u32, a: &DVector<C64>, b: &DVector<C64>) -> C64 {
    inner_weights(k).iter().enumerate().map(|(i, w)| a[i] * b[i].conj() * *w).sum()
}

/// Coefficients of `(p0 e1 + p1 e2)^m (q0 e1 + q1 e2)^n` in the monomial basis
/// of `S^(m+n)`.
fn product_coeffs(p: (C64, C64), m: u32, q: (C64, C64), n: u32) -> Vec<C64> {
    let k = (m + n) as usize;
    let mut out = vec![ZERO; k + 1];
    for a in 0..=m {
        // a copies of e2 from the first factor
        let ca = p.0.powu(m - a) * p.1.powu(a) * binomial(m, a);
        for b in 0..=n {
            let cb = q.0.powu(n - b) * q.1.powu(b) * binomial(n, b);
            out[(a + b) as usize] += ca * cb;
        }
    }
    out
}

/// Matrix of `S^k(u)` in the monomial basis; column `i` is the image of
/// `z1^(k-i) z2^i`.
pub fn sym_power_matrix(k: u32, u: &Mat2) -> DMatrix<C64> {
    let n = k as usize + 1;
    let mut s = DMatrix::zeros(n, n);
    let col1 = (u[(0, 0)], u[(1, 0)]);
    let col2 = (u[(0, 1)], u[(1, 1)]);
    for i in 0..=k {
        let coeffs = product_coeffs(col1, k - i, col2, i);
        for (j, c) in coeffs.into_iter().enumerate() {
            s[(j, i as usize)] = c;
        }
    }
    s
}

/// Infinitesimal action `dS^k(x) = d/dt S^k(exp(t x))` at `t = 0`.
pub fn dsym_power(k: u32, x: &Mat2) -> DMatrix<C64> {
    let n = k as usize + 1;
    let mut d = DMatrix::zeros(n, n);
    for i in 0..=k as usize {
        let a = (k as usize - i) as f64;
        let b = i as f64;
        d[(i, i)] += x[(0, 0)] * a + x[(1, 1)] * b;
        if i < k as usize {
            d[(i + 1, i)] += x[(1, 0)] * a;
        }
        if i > 0 {
            d[(i - 1, i)] += x[(0, 1)] * b;
        }
    }
    d
}

/// `S^k(v)` with polynomial entries, for symbolic expansion of matrix coefficients.
pub fn sym_power_poly(k: u32) -> Vec<Vec<GroupPoly>> {
    let n = k as usize + 1;
    let v = |i, j| GroupPoly::entry(i, j);
    let mut s = vec![vec![GroupPoly::zero(); n]; n];
    for i in 0..=k {
        // (v11 e1 + v21 e2)^(k-i) (v12 e1 + v22 e2)^i
        let mut acc: Vec<GroupPoly> = vec![GroupPoly::one()];
        let factors = std::iter::repeat_n((v(0, 0), v(1, 0)), (k - i) as usize)
            .chain(std::iter::repeat_n((v(0, 1), v(1, 1)), i as usize));
        for (p0, p1) in factors {
            let mut next = vec![GroupPoly::zero(); acc.len() + 1];
            for (j, c) in acc.iter().enumerate() {
                next[j] += &(c * &p0);
                next[j + 1] += &(c * &p1);
            }
            acc = next;
        }
        for (j, c) in acc.into_iter().enumerate() {
            s[j][i as usize] = c;
        }
    }
    s
}

/// Complexified generators of `sl(2, C)` plus the central `x4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sl2Basis {
    E,
    F,
    H,
    X4,
}

impl Sl2Basis {
    pub fn matrix(self) -> Mat2 {
        let [x1, x2, x3, x4] = frame();
        match self {
            Sl2Basis::E => (x2 - x3 * I) * c(0.5, 0.0),
            Sl2Basis::F => -(x2 + x3 * I) * c(0.5, 0.0),
            Sl2Basis::H => -x1 * I,
            Sl2Basis::X4 => x4,
        }
    }
}

/// A matrix coefficient `v -> det(v)^m <S^k(v) left, right>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCoeffFn {
    pub k: u32,
    pub det_power: i32,
    pub left: DVector<C64>,
    pub right: DVector<C64>,
}

impl MatrixCoeffFn {
    pub fn new(k: u32, det_power: i32, left: DVector<C64>, right: DVector<C64>) -> Result<Self> {
        let n = k as usize + 1;
        if left.len() != n || right.len() != n {
            return Err(Error::Domain(format!("coefficient vectors must have length {n} for k = {k}")));
        }
        Ok(Self { k, det_power, left, right })
    }

    /// `phi_k(u) = <S^k(u) e1^k, e2^k>`.
    pub fn phi(k: u32) -> Self {
        let n = k as usize + 1;
        let mut left = DVector::zeros(n);
        let mut right = DVector::zeros(n);
        left[0] = ONE;
        right[k as usize] = ONE;
        Self { k, det_power: 0, left, right }
    }

    /// `psi_{k,l}` as a matrix coefficient.
    pub fn psi(k: u32, l: i32) -> Result<Self> {
        check_parity(k, l)?;
        let mut f = Self::phi(k);
        f.det_power = (l - k as i32) / 2;
        Ok(f)
    }

    pub fn eval(&self, v: &Mat2) -> C64 {
        let s = sym_power_matrix(self.k, v);
        det2(v).powi(self.det_power) * inner(self.k, &(s * &self.left), &self.right)
    }

    /// Exact left-invariant derivative along `x` (complex-linear in `x`).
    pub fn left_invariant_derivative(&self, x: &Mat2) -> Self {
        let tr = x[(0, 0)] + x[(1, 1)];
        let left = &self.left * (tr * self.det_power as f64) + dsym_power(self.k, x) * &self.left;
        Self { left, ..self.clone() }
    }

    pub fn to_poly(&self) -> GroupPoly {
        let s = sym_power_poly(self.k);
        let w = inner_weights(self.k);
        let mut acc = GroupPoly::zero();
        for (j, row) in s.iter().enumerate() {
            let rj = self.right[j].conj() * w[j];
            if rj == ZERO {
                continue;
            }
            for (i, entry) in row.iter().enumerate() {
                let c = self.left[i] * rj;
                if c != ZERO {
                    acc += &entry.scale(c);
                }
            }
        }
        &acc * &GroupPoly::det_pow(self.det_power)
    }
}

fn check_parity(k: u32, l: i32) -> Result<()> {
    if (l - k as i32).rem_euclid(2) != 0 {
        return Err(Error::InvalidLabel(format!("psi_(k,l) needs l = k mod 2, got k = {k}, l = {l}")));
    }
    Ok(())
}

/// `psi_{k,l}(v) = det(v)^((l-k)/2) v21^k`.
pub fn psi(k: u32, l: i32, v: &Mat2) -> Result<C64> {
    check_parity(k, l)?;
    Ok(det2(v).powi((l - k as i32) / 2) * v[(1, 0)].powu(k))
}

/// `psi_{k,l}` as an exact polynomial function.
pub fn psi_poly(k: u32, l: i32) -> Result<GroupPoly> {
    check_parity(k, l)?;
    let mut p = GroupPoly::det_pow((l - k as i32) / 2);
    for _ in 0..k {
        p = &p * &GroupPoly::entry(1, 0);
    }
    Ok(p)
}

/// Diagonal torus element `diag(w, conj(w))`.
pub fn torus(w: C64) -> Mat2 {
    mat2(w, ZERO, ZERO, w.conj())
}
