//! Points of `U(2)`, the invariant frame and the Lorentzian metric `-det`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frame, frame_coords, skew_residual, unitarity_drift2, Mat2, MatrixJson, C64};

/// Unitarity tolerance for [`U2Point::new`].
pub const UNITARY_TOL: f64 = 1e-10;

/// A point of compactified Minkowski space, i.e. a 2x2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Point(Mat2);

impl U2Point {
    pub fn new(m: Mat2) -> Result<Self> {
        let drift = unitarity_drift2(&m);
        if !(drift <= UNITARY_TOL) {
            return Err(Error::Domain(format!("matrix is not unitary (drift {drift:.3e})")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn det(&self) -> C64 {
        crate::linalg::det2(&self.0)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }
}

impl Serialize for U2Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_mat2(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for U2Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        let m = m.to_mat2().ok_or_else(|| serde::de::Error::custom("expected a 2x2 matrix"))?;
        U2Point::new(m).map_err(serde::de::Error::custom)
    }
}

/// The frame `x_1..x_4` with its signature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBasis {
    pub x: [Mat2; 4],
    pub eps: [f64; 4],
}

impl Default for FrameBasis {
    fn default() -> Self {
        Self { x: frame(), eps: SIGNATURE }
    }
}

/// `<x_j, x_k> = eps_j delta_jk`.
pub const SIGNATURE: [f64; 4] = [-1.0, -1.0, -1.0, 1.0];

/// Complex-bilinear polarization of `-det`:
/// `<X, Y> = -(det(X + Y) - det(X) - det(Y)) / 2`.
///
/// In frame coordinates this is `sum_i eps_i a_i b_i`.
pub fn metric_bilinear(x: &Mat2, y: &Mat2) -> C64 {
    let a = frame_coords(x);
    let b = frame_coords(y);
    (0..4).map(|i| a[i] * b[i] * SIGNATURE[i]).sum()
}

/// Metric on `u(2) = T_u U(2)`; both arguments must be skew-Hermitian.
pub fn metric_on_tangent(x: &Mat2, y: &Mat2) -> Result<f64> {
    for m in [x, y] {
        let res = skew_residual(m);
        if res > 1e-10 {
            return Err(Error::Domain(format!("tangent vector not skew-Hermitian ({res:.2e})")));
        }
    }
    let d = |m: &Mat2| crate::linalg::det2(m);
    Ok((-(d(&(x + y)) - d(x) - d(y)) * 0.5).re)
}
