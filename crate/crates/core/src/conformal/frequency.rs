//! Characters of the one-parameter subgroup `S cap K = {diag(aI, a^{-1}I)}`.

use serde::{Deserialize, Serialize};

use super::group::ConformalElement;
use crate::error::{Error, Result};
use crate::fields::FormField;
use crate::linalg::{Mat2, C64};

/// Measured `n` with `pi(g_a) w = a^n w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacterFit {
    pub exponent: f64,
    pub rounded: i64,
    /// `|exponent - rounded|`
    pub integrality: f64,
    /// Relative sup of `pi(g_a) w - a^n w` with the rounded `n`.
    pub eigen_residual: f64,
}

/// Fits `pi(g_a) w = e^{i n theta} w` for `a = e^{i theta}` from the
/// coefficient-wise phase ratio at `pts`. `|n theta|` must stay below `pi`.
pub fn s_cap_k_character(w: &FormField, theta: f64, pts: &[Mat2]) -> Result<CharacterFit> {
    if !(theta.abs() > 0.0 && theta.abs() < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
    }
    let g = ConformalElement::s_cap_k(C64::from_polar(1.0, theta))?;
    let moved = g.represent(w);
    let mut pairs = Vec::new();
    let mut scale: f64 = 0.0;
    for z in pts {
        let (a, b) = (w.eval(z)?, moved.eval(z)?);
        scale = scale.max(a.norm_inf());
        pairs.push((a, b));
    }
    if !(scale > 0.0) {
        return Err(Error::Domain("field vanishes at every sample point".into()));
    }
    // the best-conditioned coefficient fixes the phase
    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for (a, b) in &pairs {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            num += x.conj() * y;
            den += x.norm_sqr();
        }
    }
    let exponent = (num / den).arg() / theta;
    let rounded = exponent.round() as i64;
    let lambda = C64::from_polar(1.0, rounded as f64 * theta);
    let eigen_residual = pairs.iter().map(|(a, b)| (*b - *a * lambda).norm_inf()).fold(0.0, f64::max) / scale;
    Ok(CharacterFit { exponent, rounded, integrality: (exponent - rounded as f64).abs(), eigen_residual })
}
