//! Pointwise exterior algebra on the invariant coframe `alpha_1..alpha_4`.
//!
//! A `g`-form value is stored by its coefficients against the lexicographic
//! basis `alpha_I`, `I` an increasing multi-index. For grade 2 the order is
//! `12, 13, 14, 23, 24, 34`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use std::sync::LazyLock as Lazy;

use crate::error::{Error, Result};
use crate::linalg::{frame, frame_coords, C64, I, ONE, ZERO};

/// Bit masks of the basis multi-indices, per grade (bit `j` is `alpha_{j+1}`).
const MASKS: [&[u8]; 5] = [
    &[0b0000],
    &[0b0001, 0b0010, 0b0100, 0b1000],
    &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100],
    &[0b0111, 0b1011, 0b1101, 0b1110],
    &[0b1111],
];

pub fn basis_masks(grade: usize) -> &'static [u8] {
    MASKS[grade]
}

pub fn dim(grade: usize) -> usize {
    MASKS[grade].len()
}

fn index_of(mask: u8) -> usize {
    let g = mask.count_ones() as usize;
    MASKS[g].iter().position(|m| *m == mask).expect("valid mask")
}

/// Sign of `alpha_A ^ alpha_B` relative to `alpha_{A u B}`; zero if they overlap.
fn merge_sign(a: u8, b: u8) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let mut inversions = 0;
    for i in 0..4 {
        if a & (1 << i) != 0 {
            inversions += (b & ((1 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Value of a form at one point of `U(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormValue {
    grade: u8,
    c: [C64; 6],
}

impl FormValue {
    pub fn zero(grade: usize) -> Self {
        assert!(grade <= 4, "grade {grade} > 4");
        Self { grade: grade as u8, c: [ZERO; 6] }
    }

    pub fn from_coeffs(grade: usize, coeffs: &[C64]) -> Result<Self> {
        if grade > 4 {
            return Err(Error::GradeOverflow(grade, 0));
        }
        if coeffs.len() != dim(grade) {
            return Err(Error::Domain(format!(
                "grade {grade} needs {} coefficients, got {}",
                dim(grade),
                coeffs.len()
            )));
        }
        let mut v = Self::zero(grade);
        v.c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(v)
    }

    pub fn scalar(s: C64) -> Self {
        let mut v = Self::zero(0);
        v.c[0] = s;
        v
    }

    /// `alpha_{i+1}` for `i in 0..4`.
    pub fn alpha(i: usize) -> Self {
        Self::basis(1 << i)
    }

    /// `alpha_{i+1} ^ alpha_{j+1}` (antisymmetric in `i, j`).
    pub fn alpha2(i: usize, j: usize) -> Self {
        Self::alpha(i).wedge(&Self::alpha(j)).expect("grade 2")
    }

    /// Basis element for a multi-index mask.
    pub fn basis(mask: u8) -> Self {
        let g = mask.count_ones() as usize;
        let mut v = Self::zero(g);
        v.c[index_of(mask)] = ONE;
        v
    }

    /// `gamma = alpha_1 ^ alpha_2 ^ alpha_3 ^ alpha_4`.
    pub fn volume() -> Self {
        Self::basis(0b1111)
    }

    pub fn grade(&self) -> usize {
        self.grade as usize
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.c[..dim(self.grade())]
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        let n = dim(self.grade());
        &mut self.c[..n]
    }

    /// Coefficient of the basis element with the given mask.
    pub fn coeff(&self, mask: u8) -> C64 {
        if mask.count_ones() as usize != self.grade() {
            return ZERO;
        }
        self.c[index_of(mask)]
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|z| z.is_finite())
    }

    pub fn conj(&self) -> Self {
        let mut v = *self;
        for z in v.coeffs_mut() {
            *z = z.conj();
        }
        v
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut v = *self;
        for z in v.coeffs_mut() {
            *z *= s;
        }
        v
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (ga, gb) = (self.grade(), other.grade());
        if ga + gb > 4 {
            return Err(Error::GradeOverflow(ga, gb));
        }
        let mut out = Self::zero(ga + gb);
        for (ia, ma) in MASKS[ga].iter().enumerate() {
            let ca = self.c[ia];
            if ca == ZERO {
                continue;
            }
            for (ib, mb) in MASKS[gb].iter().enumerate() {
                let s = merge_sign(*ma, *mb);
                if s == 0.0 {
                    continue;
                }
                out.c[index_of(ma | mb)] += ca * other.c[ib] * s;
            }
        }
        Ok(out)
    }

    /// Contraction with the vector whose frame coordinates are `x`.
    pub fn interior(&self, x: &[C64; 4]) -> Self {
        let g = self.grade();
        if g == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(g - 1);
        for (ia, ma) in MASKS[g].iter().enumerate() {
            let ca = self.c[ia];
            if ca == ZERO {
                continue;
            }
            let mut pos = 0;
            for bit in 0..4 {
                if ma & (1 << bit) == 0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.c[index_of(ma & !(1 << bit))] += ca * x[bit] * sign;
                pos += 1;
            }
        }
        out
    }

    /// Evaluate on `grade` vectors given by frame coordinates.
    pub fn eval_on(&self, vectors: &[[C64; 4]]) -> Result<C64> {
        if vectors.len() != self.grade() {
            return Err(Error::GradeMismatch { expected: self.grade(), got: vectors.len() });
        }
        let mut v = *self;
        for x in vectors {
            v = v.interior(x);
        }
        Ok(v.c[0])
    }

    /// Pull back through a linear map: `t[i][j] = alpha_i(T x_j)`.
    pub fn pullback_linear(&self, t: &[[C64; 4]; 4]) -> Self {
        let g = self.grade();
        let mut out = Self::zero(g);
        for (ij, mj) in MASKS[g].iter().enumerate() {
            let cols = bits(*mj);
            let mut acc = ZERO;
            for (ii, mi) in MASKS[g].iter().enumerate() {
                let ci = self.c[ii];
                if ci == ZERO {
                    continue;
                }
                let rows = bits(*mi);
                acc += ci * minor(t, &rows[..g], &cols[..g]);
            }
            out.c[ij] = acc;
        }
        out
    }
}

fn bits(mask: u8) -> [usize; 4] {
    let mut out = [0; 4];
    let mut n = 0;
    for b in 0..4 {
        if mask & (1 << b) != 0 {
            out[n] = b;
            n += 1;
        }
    }
    out
}

fn minor(t: &[[C64; 4]; 4], rows: &[usize], cols: &[usize]) -> C64 {
    match rows.len() {
        0 => ONE,
        1 => t[rows[0]][cols[0]],
        _ => {
            // Laplace expansion along the first row
            let mut acc = ZERO;
            for (k, &cj) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|c| *c != cj).collect();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += t[rows[0]][cj] * minor(t, &rows[1..], &sub_cols) * sign;
            }
            acc
        }
    }
}

impl Add for FormValue {
    type Output = FormValue;
    fn add(mut self, rhs: FormValue) -> FormValue {
        self += rhs;
        self
    }
}

impl AddAssign for FormValue {
    fn add_assign(&mut self, rhs: FormValue) {
        assert_eq!(self.grade, rhs.grade, "adding forms of different grade");
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
    }
}

impl Sub for FormValue {
    type Output = FormValue;
    fn sub(self, rhs: FormValue) -> FormValue {
        self + (-rhs)
    }
}

impl Neg for FormValue {
    type Output = FormValue;
    fn neg(self) -> FormValue {
        self.scale(-ONE)
    }
}

impl Mul<C64> for FormValue {
    type Output = FormValue;
    fn mul(self, s: C64) -> FormValue {
        self.scale(s)
    }
}

/// Matrix of the Hodge star `J` on 2-forms: column `j` is `J` of basis element `j`.
///
/// `J(12) = 34, J(13) = -24, J(14) = -23, J(23) = 14, J(24) = 13, J(34) = -12`.
pub const STAR: [[f64; 6]; 6] = [
    // rows: 12, 13, 14, 23, 24, 34
    [0.0, 0.0, 0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

/// Hodge star on a 2-form value.
pub fn hodge_star(v: &FormValue) -> Result<FormValue> {
    if v.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, got: v.grade() });
    }
    let mut out = FormValue::zero(2);
    for (i, row) in STAR.iter().enumerate() {
        out.c[i] = (0..6).map(|j| v.c[j] * row[j]).sum();
    }
    Ok(out)
}

/// Eigenvalue of `J` labelling a Maxwell subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Eigen {
    /// `J = +i`
    PlusI,
    /// `J = -i`
    MinusI,
}

impl Eigen {
    pub fn value(self) -> C64 {
        match self {
            Eigen::PlusI => I,
            Eigen::MinusI => -I,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Eigen::PlusI => Eigen::MinusI,
            Eigen::MinusI => Eigen::PlusI,
        }
    }
}

impl std::fmt::Display for Eigen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Eigen::PlusI => "+i",
            Eigen::MinusI => "-i",
        })
    }
}

/// Projection onto the `J`-eigenspace: `(I - i J)/2` for `+i`, `(I + i J)/2` for `-i`.
pub fn eigen_projection(v: &FormValue, e: Eigen) -> Result<FormValue> {
    let j = hodge_star(v)?;
    Ok((*v - j * e.value()) * crate::linalg::c(0.5, 0.0))
}

/// The bases of the `+i` and `-i` eigenspaces of `J`.
pub fn eigenbasis(e: Eigen) -> [FormValue; 3] {
    let s = match e {
        Eigen::PlusI => ONE,
        Eigen::MinusI => -ONE,
    };
    let a = FormValue::alpha2;
    [a(0, 3) + a(1, 2) * (I * s), a(1, 3) - a(0, 2) * (I * s), a(2, 3) + a(0, 1) * (I * s)]
}

/// Exterior derivatives of the coframe, `d alpha_i(x, y) = -alpha_i([x, y])`,
/// derived from the brackets of the frame.
pub static D_COFRAME: Lazy<[FormValue; 4]> = Lazy::new(|| {
    let f = frame();
    let mut out = [FormValue::zero(2); 4];
    for (i, out_i) in out.iter_mut().enumerate() {
        for (idx, mask) in MASKS[2].iter().enumerate() {
            let b = bits(*mask);
            let br = f[b[0]] * f[b[1]] - f[b[1]] * f[b[0]];
            out_i.c[idx] = -frame_coords(&br)[i];
        }
    }
    out
});

/// `d alpha_I` for a constant basis form, by the Leibniz rule.
pub fn d_basis(mask: u8) -> FormValue {
    let g = mask.count_ones() as usize;
    if g >= 4 {
        return FormValue::zero(4.min(g + 1));
    }
    let idx = bits(mask);
    let mut out = FormValue::zero(g + 1);
    for s in 0..g {
        let sign = if s % 2 == 0 { ONE } else { -ONE };
        let mut term = FormValue::scalar(ONE);
        for (t, &i) in idx[..g].iter().enumerate() {
            let factor = if t == s { D_COFRAME[i] } else { FormValue::alpha(i) };
            term = term.wedge(&factor).expect("grade <= 4");
        }
        out += term * sign;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame::SIGNATURE;
    use crate::linalg::c;

    fn a2(i: usize, j: usize) -> FormValue {
        FormValue::alpha2(i, j)
    }

    #[test]
    fn structure_equations() {
        assert_eq!(D_COFRAME[0], a2(1, 2) * c(-2.0, 0.0));
        assert_eq!(D_COFRAME[1], a2(0, 2) * c(2.0, 0.0));
        assert_eq!(D_COFRAME[2], a2(0, 1) * c(-2.0, 0.0));
        assert_eq!(D_COFRAME[3], FormValue::zero(2));
    }

    #[test]
    fn star_table() {
        let st = |v: FormValue| hodge_star(&v).unwrap();
        assert_eq!(st(a2(0, 1)), a2(2, 3));
        assert_eq!(st(a2(0, 2)), -a2(1, 3));
        assert_eq!(st(a2(0, 3)), -a2(1, 2));
        assert_eq!(st(a2(1, 2)), a2(0, 3));
        assert_eq!(st(a2(1, 3)), a2(0, 2));
        assert_eq!(st(a2(2, 3)), -a2(0, 1));
        for m in basis_masks(2) {
            let b = FormValue::basis(*m);
            assert_eq!(st(st(b)), -b);
        }
    }

    /// The table agrees with `eta ^ *omega = g(eta, omega) gamma` for the
    /// metric of signature (-,-,-,+) and `gamma = alpha_1234`.
    #[test]
    fn star_from_metric_definition() {
        for ma in basis_masks(2) {
            for mb in basis_masks(2) {
                let (ea, eb) = (FormValue::basis(*ma), FormValue::basis(*mb));
                let lhs = ea.wedge(&hodge_star(&eb).unwrap()).unwrap().coeff(0b1111);
                let g = if ma == mb { bits(*ma)[..2].iter().map(|i| SIGNATURE[*i]).product::<f64>() } else { 0.0 };
                assert_eq!(lhs, c(g, 0.0), "{ma:04b} {mb:04b}");
            }
        }
    }

    #[test]
    fn eigenspaces() {
        for e in [Eigen::PlusI, Eigen::MinusI] {
            for b in eigenbasis(e) {
                assert_eq!(hodge_star(&b).unwrap(), b * e.value());
                assert_eq!(eigen_projection(&b, e).unwrap(), b);
                assert_eq!(eigen_projection(&b, e.opposite()).unwrap(), FormValue::zero(2));
            }
        }
        for mu in eigenbasis(Eigen::PlusI) {
            for nu in eigenbasis(Eigen::MinusI) {
                assert_eq!(mu.wedge(&nu).unwrap(), FormValue::zero(4));
            }
        }
        let v = FormValue::from_coeffs(
            2,
            &[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(1.0, 1.0), c(0.2, -0.1), c(4.0, 0.0)],
        )
        .unwrap();
        let p = eigen_projection(&v, Eigen::PlusI).unwrap();
        let m = eigen_projection(&v, Eigen::MinusI).unwrap();
        assert!((p + m - v).norm_inf() < 1e-15);
        assert!((eigen_projection(&p, Eigen::PlusI).unwrap() - p).norm_inf() < 1e-15);
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(FormValue::alpha(0).wedge(&FormValue::alpha(0)).unwrap(), FormValue::zero(2));
        // brute-force sign of the permutation (1,4,2,3)
        let perm = [0usize, 3, 1, 2];
        let mut inv = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        let sign = if inv % 2 == 0 { 1.0 } else { -1.0 };
        let w = a2(0, 3).wedge(&a2(1, 2)).unwrap();
        assert_eq!(w, FormValue::volume() * c(sign, 0.0));
        assert!(FormValue::alpha2(0, 1).wedge(&FormValue::alpha2(1, 2).wedge(&FormValue::alpha(0)).unwrap()).is_err());
    }

    #[test]
    fn d_squared_vanishes_on_basis() {
        for g in 0..4 {
            for m in basis_masks(g) {
                let d1 = d_basis(*m);
                let mut d2 = FormValue::zero((g + 2).min(4));
                if g + 2 <= 4 {
                    for (idx, mm) in basis_masks(g + 1).iter().enumerate() {
                        d2 += d_basis(*mm) * d1.coeffs()[idx];
                    }
                    assert_eq!(d2, FormValue::zero(g + 2));
                }
            }
        }
    }

    #[test]
    fn eval_and_pullback_agree() {
        let v =
            FormValue::from_coeffs(2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.5, 0.5), c(3.0, 0.0)])
                .unwrap();
        let t = [
            [c(1.0, 0.0), c(0.2, 0.0), c(0.0, 0.3), c(0.1, 0.0)],
            [c(0.0, 0.0), c(1.5, 0.0), c(0.4, 0.0), c(0.0, -0.2)],
            [c(0.3, 0.1), c(0.0, 0.0), c(0.9, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.7, 0.0), c(0.0, 0.0), c(1.1, 0.0)],
        ];
        let pb = v.pullback_linear(&t);
        let col = |j: usize| [t[0][j], t[1][j], t[2][j], t[3][j]];
        for (idx, m) in basis_masks(2).iter().enumerate() {
            let b = bits(*m);
            let direct = v.eval_on(&[col(b[0]), col(b[1])]).unwrap();
            assert!((direct - pb.coeffs()[idx]).norm() < 1e-14);
        }
    }
}
