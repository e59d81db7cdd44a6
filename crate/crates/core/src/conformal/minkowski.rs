//! Minkowski space, its embedding into `U(2)` and the E/H dictionary.
//!
//! `x = (x1, x2, x3, t)` maps to `X = [[t + x3, x1 + i x2], [x1 - i x2, t - x3]]`
//! and then to `(I + iX)(I - iX)^{-1}`. A 2-form on Minkowski space is stored
//! against `dx_a ^ dx_b` (`x_4 = t`) in the order `12, 13, 14, 23, 24, 34`, with
//!
//! `omega = h1 dx2^dx3 - h2 dx1^dx3 + h3 dx1^dx2 - e1 dx1^dt - e2 dx2^dt - e3 dx3^dt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FormField;
use crate::geometry::forms::FormValue;
use crate::geometry::frame::U2Point;
use crate::linalg::{c, det2, frame_coords, inv2, mat2, Mat2, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkowskiPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub t: f64,
}

impl MinkowskiPoint {
    pub fn new(x1: f64, x2: f64, x3: f64, t: f64) -> Self {
        Self { x1, x2, x3, t }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.t]
    }

    /// Offset along coordinate `mu` (0..3 spatial, 3 time).
    pub fn shifted(&self, mu: usize, h: f64) -> Self {
        let mut a = self.to_array();
        a[mu] += h;
        Self::from_array(a)
    }

    /// `(x, x) = t^2 - x1^2 - x2^2 - x3^2 = det X`.
    pub fn lorentz_square(&self) -> f64 {
        self.t * self.t - self.x1 * self.x1 - self.x2 * self.x2 - self.x3 * self.x3
    }

    pub fn hermitian(&self) -> Mat2 {
        hermitian_of(self.to_array())
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

fn hermitian_of(a: [f64; 4]) -> Mat2 {
    let [x1, x2, x3, t] = a;
    mat2(c(t + x3, 0.0), c(x1, x2), c(x1, -x2), c(t - x3, 0.0))
}

/// `d/dx_mu` of `X` for `mu = x1, x2, x3, t`.
fn coordinate_directions() -> [Mat2; 4] {
    [mat2(ZERO, ONE, ONE, ZERO), mat2(ZERO, I, -I, ZERO), mat2(ONE, ZERO, ZERO, -ONE), Mat2::identity()]
}

/// Minkowski coordinates of a Hermitian matrix.
pub fn minkowski_of_hermitian(y: &Mat2) -> MinkowskiPoint {
    MinkowskiPoint::new(
        y[(0, 1)].re,
        y[(0, 1)].im,
        (y[(0, 0)].re - y[(1, 1)].re) / 2.0,
        (y[(0, 0)].re + y[(1, 1)].re) / 2.0,
    )
}

/// `F(x) = (I + iX)(I - iX)^{-1}`; always unitary.
pub fn embed_minkowski(p: &MinkowskiPoint) -> Result<U2Point> {
    let x = p.hermitian();
    let i = Mat2::identity();
    let den = inv2(&(i - x * I)).ok_or_else(|| Error::Domain("I - iX singular".into()))?;
    U2Point::new((i + x * I) * den)
}

/// `4 / (1 + 2 sum x_i^2 + (x, x)^2)`, the factor by which `F` scales the metric.
pub fn embedding_conformal_factor(p: &MinkowskiPoint) -> f64 {
    let s: f64 = p.to_array().iter().map(|v| v * v).sum();
    let q = p.lorentz_square();
    4.0 / (1.0 + 2.0 * s + q * q)
}

/// `t[i][mu] = alpha_i(dF(d/dx_mu))`, using `dF(V) = 2i (I - iX)^{-1} V (I - iX)^{-1}`.
pub fn embedding_tangent(p: &MinkowskiPoint) -> Result<[[C64; 4]; 4]> {
    let x = p.hermitian();
    let i = Mat2::identity();
    let r = inv2(&(i - x * I)).ok_or_else(|| Error::Domain("I - iX singular".into()))?;
    let f = embed_minkowski(p)?;
    let finv = f.matrix().adjoint();
    let mut t = [[ZERO; 4]; 4];
    for (mu, v) in coordinate_directions().iter().enumerate() {
        let df = r * v * r * c(0.0, 2.0);
        let cs = frame_coords(&(finv * df));
        for k in 0..4 {
            t[k][mu] = cs[k];
        }
    }
    Ok(t)
}

/// `F^* w` at `p`, against `dx_a ^ dx_b`.
pub fn minkowski_pullback(w: &FormField, p: &MinkowskiPoint) -> Result<FormValue> {
    let f = embed_minkowski(p)?;
    let t = embedding_tangent(p)?;
    Ok(w.eval(f.matrix())?.pullback_linear(&t))
}

/// Electric and magnetic field vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EH {
    pub e: [C64; 3],
    pub h: [C64; 3],
}

impl EH {
    pub fn max_abs(&self) -> f64 {
        self.e.iter().chain(&self.h).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, o: &EH) -> EH {
        EH { e: std::array::from_fn(|i| self.e[i] - o.e[i]), h: std::array::from_fn(|i| self.h[i] - o.h[i]) }
    }

    pub fn scale(&self, s: C64) -> EH {
        EH { e: self.e.map(|z| z * s), h: self.h.map(|z| z * s) }
    }
}

/// Read E and H off a Minkowski 2-form.
pub fn eh_from_two_form(v: &FormValue) -> Result<EH> {
    if v.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, got: v.grade() });
    }
    let w = |m: u8| v.coeff(m);
    Ok(EH { h: [w(0b0110), -w(0b0101), w(0b0011)], e: [-w(0b1001), -w(0b1010), -w(0b1100)] })
}

/// The Minkowski 2-form of the given fields.
pub fn two_form_from_eh(f: &EH) -> FormValue {
    let [e1, e2, e3] = f.e;
    let [h1, h2, h3] = f.h;
    // order 12, 13, 14, 23, 24, 34
    FormValue::from_coeffs(2, &[h3, -h2, -e1, h1, -e2, -e3]).expect("six coefficients")
}

/// Hodge star on Minkowski 2-forms for `(-,-,-,+)` and `gamma = dx1^dx2^dx3^dt`.
pub fn minkowski_star(v: &FormValue) -> Result<FormValue> {
    let f = eh_from_two_form(v)?;
    // star(dx2^dx3) = dx1^dt, star(dx1^dt) = -dx2^dx3, and cyclically
    Ok(two_form_from_eh(&EH { e: f.h.map(|z| -z), h: f.e }))
}

/// E and H of `F^* w` at `p`.
pub fn extract_eh(w: &FormField, p: &MinkowskiPoint) -> Result<EH> {
    eh_from_two_form(&minkowski_pullback(w, p)?)
}

/// Residuals of the vacuum equations by central differences.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MaxwellResidual {
    pub div_e: f64,
    pub div_h: f64,
    /// `|dE/dt + curl H|`
    pub ampere: f64,
    /// `|dH/dt - curl E|`
    pub faraday: f64,
}

impl MaxwellResidual {
    pub fn max(&self) -> f64 {
        self.div_e.max(self.div_h).max(self.ampere).max(self.faraday)
    }
}

/// Central-difference Maxwell residual of a field `x -> (E, H)` at `p`.
pub fn maxwell_residual_fd<F>(f: F, p: &MinkowskiPoint, h: f64) -> Result<MaxwellResidual>
where
    F: Fn(&MinkowskiPoint) -> Result<EH>,
{
    // d[mu] = d/dx_mu of (E, H)
    let mut d = [EH::default(); 4];
    for (mu, dm) in d.iter_mut().enumerate() {
        let plus = f(&p.shifted(mu, h))?;
        let minus = f(&p.shifted(mu, -h))?;
        *dm = plus.sub(&minus).scale(c(0.5 / h, 0.0));
    }
    let div = |sel: fn(&EH) -> [C64; 3]| (0..3).map(|i| sel(&d[i])[i]).sum::<C64>().norm();
    let curl = |sel: fn(&EH) -> [C64; 3]| -> [C64; 3] {
        [sel(&d[1])[2] - sel(&d[2])[1], sel(&d[2])[0] - sel(&d[0])[2], sel(&d[0])[1] - sel(&d[1])[0]]
    };
    let ce = curl(|x| x.e);
    let ch = curl(|x| x.h);
    let norm3 = |v: [C64; 3]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(MaxwellResidual {
        div_e: div(|x| x.e),
        div_h: div(|x| x.h),
        ampere: norm3(std::array::from_fn(|i| d[3].e[i] + ch[i])),
        faraday: norm3(std::array::from_fn(|i| d[3].h[i] - ce[i])),
    })
}

/// `det(I + X^2)`, the denominator of the conformal factor.
pub fn det_one_plus_square(p: &MinkowskiPoint) -> f64 {
    let x = p.hermitian();
    det2(&(Mat2::identity() + x * x)).re
}
