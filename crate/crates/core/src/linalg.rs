//! Small dense complex matrices and the fixed frame of `u(2)`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn mat2(a: C64, b: C64, cc: C64, d: C64) -> Mat2 {
    Mat2::new(a, b, cc, d)
}

/// The frame `x_1, x_2, x_3, x_4` of `u(2)`; pseudo-orthonormal for `-det`
/// with signature `(-1, -1, -1, +1)`.
pub fn frame() -> [Mat2; 4] {
    [mat2(I, ZERO, ZERO, -I), mat2(ZERO, ONE, -ONE, ZERO), mat2(ZERO, I, I, ZERO), mat2(I, ZERO, ZERO, I)]
}

/// Complex-linear coordinates of `x` in the frame: `x = sum_i c_i x_i`.
///
/// Valid for every complex 2x2 matrix since the frame spans `gl(2, C)` over `C`.
pub fn frame_coords(x: &Mat2) -> [C64; 4] {
    let (a, b, cc, d) = (x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]);
    let two_i = c(0.0, 2.0);
    [(a - d) / two_i, (b - cc) / 2.0, (b + cc) / two_i, (a + d) / two_i]
}

/// Matrix with the given frame coordinates.
pub fn from_frame_coords(cs: &[C64; 4]) -> Mat2 {
    let f = frame();
    let mut m = Mat2::zeros();
    for (ci, xi) in cs.iter().zip(f.iter()) {
        m += xi * *ci;
    }
    m
}

pub fn det2(m: &Mat2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

pub fn inv2(m: &Mat2) -> Option<Mat2> {
    let d = det2(m);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some(mat2(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / d)
}

/// Largest entry modulus of `m m* - I`.
pub fn unitarity_drift2(m: &Mat2) -> f64 {
    let e = m * m.adjoint() - Mat2::identity();
    e.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of `x + x*`.
pub fn skew_residual(x: &Mat2) -> f64 {
    (x + x.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs4(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values of a 2x2 complex matrix, largest first.
pub fn singular_values2(m: &Mat2) -> (f64, f64) {
    let fro2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let d = det2(m).norm();
    let disc = (fro2 * fro2 - 4.0 * d * d).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { d / s1 } else { 0.0 };
    (s1, s2)
}

/// 2-norm condition number; infinite when singular.
pub fn cond2(m: &Mat2) -> f64 {
    let (s1, s2) = singular_values2(m);
    if s2 == 0.0 {
        f64::INFINITY
    } else {
        s1 / s2
    }
}

/// Nearest unitary matrix (polar factor).
pub fn polar_unitary(m: &Mat2) -> Mat2 {
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    u * v_t
}

pub fn expm2(m: &Mat2) -> Mat2 {
    m.exp()
}

pub fn expm4(m: &Mat4) -> Mat4 {
    m.exp()
}

/// Assemble a 4x4 matrix from 2x2 blocks `[[a, b], [c, d]]`.
pub fn blocks(a: &Mat2, b: &Mat2, cc: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(cc);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Split a 4x4 matrix into its 2x2 blocks `(A, B, C, D)`.
pub fn split_blocks(m: &Mat4) -> (Mat2, Mat2, Mat2, Mat2) {
    (
        m.fixed_view::<2, 2>(0, 0).into_owned(),
        m.fixed_view::<2, 2>(0, 2).into_owned(),
        m.fixed_view::<2, 2>(2, 0).into_owned(),
        m.fixed_view::<2, 2>(2, 2).into_owned(),
    )
}

/// Row-major JSON form of a complex matrix: rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl MatrixJson {
    pub fn from_mat2(m: &Mat2) -> Self {
        Self((0..2).map(|i| (0..2).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    pub fn from_mat4(m: &Mat4) -> Self {
        Self((0..4).map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    pub fn to_mat2(&self) -> Option<Mat2> {
        if self.0.len() != 2 || self.0.iter().any(|r| r.len() != 2) {
            return None;
        }
        Some(Mat2::from_fn(|i, j| c(self.0[i][j][0], self.0[i][j][1])))
    }

    pub fn to_mat4(&self) -> Option<Mat4> {
        if self.0.len() != 4 || self.0.iter().any(|r| r.len() != 4) {
            return None;
        }
        Some(Mat4::from_fn(|i, j| c(self.0[i][j][0], self.0[i][j][1])))
    }
}
