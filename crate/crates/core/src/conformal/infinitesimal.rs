//! The derived action `d pi(X) w = d/dt (exp(-tX))^* w` at `t = 0`.
//!
//! There is no closed form for the pulled-back coefficients, so this is a
//! central difference with one Richardson step. The results are flagged numeric.

use super::group::{split_complex_g1, ConformalElement, Realization};
use crate::error::{Error, Result};
use crate::fields::FormField;
use crate::geometry::forms::FormValue;
use crate::linalg::{c, max_abs4, Mat2, Mat4, I};

/// Default step of the central difference.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Smallest `h |X|` accepted; below this cancellation swamps the difference.
pub const MIN_STEP: f64 = 1e-7;

fn central(x: &Mat4, w: &FormField, z: &Mat2, h: f64) -> Result<FormValue> {
    let fwd = ConformalElement::exp(&(x * c(-h, 0.0)), Realization::G1)?;
    let bwd = ConformalElement::exp(&(x * c(h, 0.0)), Realization::G1)?;
    let a = fwd.pullback(w).eval(z)?;
    let b = bwd.pullback(w).eval(z)?;
    Ok((a - b) * c(0.5 / h, 0.0))
}

fn richardson(x: &Mat4, w: &FormField, z: &Mat2, h: f64) -> Result<FormValue> {
    let coarse = central(x, w, z, h)?;
    let fine = central(x, w, z, h / 2.0)?;
    Ok((fine * c(4.0, 0.0) - coarse) * c(1.0 / 3.0, 0.0))
}

fn check_step(x: &Mat4, h: f64) -> Result<()> {
    let scale = max_abs4(x);
    if !h.is_finite() || h <= 0.0 || h * scale.max(1.0) / 2.0 < MIN_STEP {
        return Err(Error::Domain(format!("finite-difference step {h:e} too small for |X| = {scale:.3e}")));
    }
    Ok(())
}

/// `d pi(X) w` for `X` in the real Lie algebra of `G_1`.
pub fn infinitesimal_action_real(x: &Mat4, w: &FormField, h: f64) -> Result<FormField> {
    super::group::check_lie(x, Realization::G1)?;
    check_step(x, h)?;
    let (x, w) = (*x, w.clone());
    Ok(FormField::sampled(w.grade(), move |z| richardson(&x, &w, z, h)).mark_numeric())
}

/// `d pi(X) w` extended complex-linearly: `X = X1 + i X2` with `X1, X2` real.
pub fn infinitesimal_action(x: &Mat4, w: &FormField, h: f64) -> Result<FormField> {
    let (x1, x2) = split_complex_g1(x);
    check_step(x, h)?;
    let w = w.clone();
    let tiny = 1e-15 * max_abs4(x).max(1.0);
    let use1 = max_abs4(&x1) > tiny;
    let use2 = max_abs4(&x2) > tiny;
    Ok(FormField::sampled(w.grade(), move |z| {
        let mut out = FormValue::zero(w.grade());
        if use1 {
            out += richardson(&x1, &w, z, h)?;
        }
        if use2 {
            out += richardson(&x2, &w, z, h)? * I;
        }
        Ok(out)
    })
    .mark_numeric())
}
