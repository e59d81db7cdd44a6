//! Plane-wave solutions `E = e^{i(z,x)} E0`, `H = e^{i(z,x)} H0` and the
//! light-cone functional on `Lie(Nbar)`.

use serde::{Deserialize, Serialize};

use super::minkowski::{MinkowskiPoint, EH};
use crate::error::{Error, Result};
use crate::linalg::{c, mat2, Mat2, C64, I, ZERO};

/// Relative tolerance of the plane-wave constraints.
pub const CONSTRAINT_TOL: f64 = 1e-12;

fn cross(a: [C64; 3], b: [C64; 3]) -> [C64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [C64; 3], b: [C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [C64; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn real3(a: [f64; 3]) -> [C64; 3] {
    a.map(|x| c(x, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub u: [f64; 3],
    pub freq: f64,
    pub e0: [C64; 3],
    pub h0: [C64; 3],
}

/// Residuals of the constraint system, each relative to its natural scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveConstraints {
    pub transverse_e: f64,
    pub transverse_h: f64,
    /// `|u x E0 + freq H0|`
    pub faraday: f64,
    /// `|u x H0 - freq E0|`
    pub ampere: f64,
    /// `|freq^2 - |u|^2|`
    pub null: f64,
}

impl PlaneWaveConstraints {
    pub fn max(&self) -> f64 {
        [self.transverse_e, self.transverse_h, self.faraday, self.ampere, self.null].into_iter().fold(0.0, f64::max)
    }
}

impl PlaneWave {
    /// Builds the wave with `H0 = -(u x E0)/freq`.
    pub fn new(u: [f64; 3], freq: f64, e0: [C64; 3]) -> Result<Self> {
        let un = norm(real3(u));
        if !(un > 0.0) || !freq.is_finite() {
            return Err(Error::Constraint("wave vector must be nonzero and finite".into()));
        }
        if (freq * freq - un * un).abs() > CONSTRAINT_TOL * un * un {
            return Err(Error::Constraint(format!(
                "(u, freq) not null: freq^2 = {}, |u|^2 = {}",
                freq * freq,
                un * un
            )));
        }
        let en = norm(e0);
        if dot(real3(u), e0).norm() > CONSTRAINT_TOL * un * en.max(1.0) {
            return Err(Error::Constraint("E0 is not transverse to u".into()));
        }
        // adding zero turns -0.0 into +0.0 in reports
        let h0 = cross(real3(u), e0).map(|z| -z / freq + C64::new(0.0, 0.0));
        Ok(Self { u, freq, e0, h0 })
    }

    /// `(z, x) = -u . x + freq t`.
    pub fn phase(&self, p: &MinkowskiPoint) -> f64 {
        -(self.u[0] * p.x1 + self.u[1] * p.x2 + self.u[2] * p.x3) + self.freq * p.t
    }

    pub fn fields_at(&self, p: &MinkowskiPoint) -> EH {
        let ph = C64::from_polar(1.0, self.phase(p));
        EH { e: self.e0.map(|z| z * ph), h: self.h0.map(|z| z * ph) }
    }

    pub fn constraints(&self) -> PlaneWaveConstraints {
        let u = real3(self.u);
        let un = norm(u);
        let en = norm(self.e0).max(f64::MIN_POSITIVE);
        let hn = norm(self.h0).max(f64::MIN_POSITIVE);
        let far = cross(u, self.e0);
        let amp = cross(u, self.h0);
        PlaneWaveConstraints {
            transverse_e: dot(u, self.e0).norm() / (un * en),
            transverse_h: dot(u, self.h0).norm() / (un * hn),
            faraday: norm(std::array::from_fn(|i| far[i] + self.h0[i] * self.freq)) / (un * en),
            ampere: norm(std::array::from_fn(|i| amp[i] - self.e0[i] * self.freq)) / (un * hn),
            null: (self.freq * self.freq - un * un).abs() / (un * un),
        }
    }

    /// Vacuum Maxwell residual from the analytic derivatives
    /// `grad -> -i u`, `d/dt -> i freq` (times the common phase, which has modulus 1).
    pub fn analytic_residual(&self) -> f64 {
        let mi_u = real3(self.u).map(|z| -I * z);
        let div_e = dot(mi_u, self.e0).norm();
        let div_h = dot(mi_u, self.h0).norm();
        let ce = cross(mi_u, self.e0);
        let ch = cross(mi_u, self.h0);
        let dt = I * self.freq;
        let amp = norm(std::array::from_fn(|i| self.e0[i] * dt + ch[i]));
        let far = norm(std::array::from_fn(|i| self.h0[i] * dt - ce[i]));
        div_e.max(div_h).max(amp).max(far)
    }

    /// `det[u/|u|, H0/|H0|, sgn(freq) E0/|E0|]` for real amplitudes; `+1` is a right-handed triad.
    pub fn triad_determinant(&self) -> Result<f64> {
        if self.e0.iter().any(|z| z.im != 0.0) {
            return Err(Error::Domain("handedness needs a real E0".into()));
        }
        let un = norm(real3(self.u));
        let a: [f64; 3] = self.u.map(|x| x / un);
        let hn = norm(self.h0);
        let b: [f64; 3] = self.h0.map(|z| z.re / hn);
        let en = norm(self.e0) * self.freq.signum();
        let cc: [f64; 3] = self.e0.map(|z| z.re / en);
        Ok(a[0] * (b[1] * cc[2] - b[2] * cc[1]) - a[1] * (b[0] * cc[2] - b[2] * cc[0])
            + a[2] * (b[0] * cc[1] - b[1] * cc[0]))
    }
}

/// `z = (k1, k2, k3, freq)` as a functional on `Lie(Nbar) = {[[0, 0], [Y, 0]]}`:
/// the coefficient of `q` in `det(Z + qY)/2`, `Z = [[freq + k3, k1 + i k2], [k1 - i k2, freq - k3]]`.
pub fn light_cone_functional(z: [f64; 4], y: &Mat2) -> Result<C64> {
    let [k1, k2, k3, w] = z;
    let kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (w * w - kk).abs() > CONSTRAINT_TOL * kk.max(w * w).max(1e-300) {
        return Err(Error::Constraint("z is not on the light cone".into()));
    }
    let zm = mat2(c(w + k3, 0.0), c(k1, k2), c(k1, -k2), c(w - k3, 0.0));
    let tr = |m: &Mat2| m[(0, 0)] + m[(1, 1)];
    Ok((tr(&zm) * tr(y) - tr(&(zm * y))) * 0.5)
}

/// The generator `[[0, 0], [xI, 0]]` of `Lie(S cap Nbar)`, as its lower-left block.
pub fn s_cap_nbar_block(x: f64) -> Mat2 {
    mat2(c(x, 0.0), ZERO, ZERO, c(x, 0.0))
}
