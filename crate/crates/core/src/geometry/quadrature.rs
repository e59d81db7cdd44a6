//! Haar sampling and product quadrature on `SU(2)`.
//!
//! Hopf coordinates `u = [[a, -conj(b)], [b, conj(a)]]` with
//! `a = cos(theta) e^{i xi_1}`, `b = sin(theta) e^{i xi_2}`. In `s = cos(2 theta)`
//! the normalized Haar measure is `ds/2 * dxi_1/2pi * dxi_2/2pi`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::forms::FormValue;
use crate::linalg::{c, mat2, Mat2, C64};
use crate::par::{self, compensated_sum, Exec};

/// `vol(SU(2))` for the coframe volume `alpha_1 ^ alpha_2 ^ alpha_3`.
pub const SU2_VOLUME: f64 = 2.0 * PI * PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton on the three-term recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Point of `SU(2)` from Hopf coordinates.
pub fn hopf_point(s: f64, xi1: f64, xi2: f64) -> Mat2 {
    let ca = ((1.0 + s) / 2.0).max(0.0).sqrt();
    let sb = ((1.0 - s) / 2.0).max(0.0).sqrt();
    let a = C64::from_polar(ca, xi1);
    let b = C64::from_polar(sb, xi2);
    mat2(a, -b.conj(), b, a.conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub s: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub weight: f64,
}

/// Product grid of order `n`: `n` Gauss-Legendre nodes in `s`, `n` trapezoid
/// nodes in each angle. Weights sum to 1.
///
/// Integrates exactly every polynomial in the entries of `u` and `conj(u)` of
/// total degree below `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SU2Grid {
    pub order: usize,
    pub nodes: Vec<GridNode>,
}

impl SU2Grid {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("quadrature order must be at least 1".into()));
        }
        let (xs, ws) = gauss_legendre(order);
        let h = 2.0 * PI / order as f64;
        let ang_w = 1.0 / (order * order) as f64;
        let mut nodes = Vec::with_capacity(order * order * order);
        for (s, w) in xs.iter().zip(&ws) {
            for i in 0..order {
                for j in 0..order {
                    nodes.push(GridNode { s: *s, xi1: h * i as f64, xi2: h * j as f64, weight: 0.5 * w * ang_w });
                }
            }
        }
        Ok(Self { order, nodes })
    }

    /// Default order for integrands built from degree-`k` matrix coefficients.
    pub fn default_order(k: u32) -> usize {
        2 * k as usize + 8
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Mat2> + '_ {
        self.nodes.iter().map(|n| hopf_point(n.s, n.xi1, n.xi2))
    }

    /// Normalized integral `int_{SU(2)} f du` with `int 1 = 1`.
    pub fn integrate<F>(&self, exec: Exec, f: F) -> Result<C64>
    where
        F: Fn(&Mat2) -> Result<C64> + Sync + Send,
    {
        let vals = par::map(exec, &self.nodes, |n| {
            let u = hopf_point(n.s, n.xi1, n.xi2);
            f(&u).map(|v| v * n.weight)
        });
        let mut out = Vec::with_capacity(vals.len());
        for v in vals {
            let v = v?;
            if !v.is_finite() {
                return Err(Error::NonFinite("integrand value".into()));
            }
            out.push(v);
        }
        Ok(compensated_sum(out))
    }

    /// `int_{SU(2)} w` for a 3-form, oriented so that `alpha_1 ^ alpha_2 ^ alpha_3` integrates to `2 pi^2`.
    pub fn integrate_threeform<F>(&self, exec: Exec, w: F) -> Result<C64>
    where
        F: Fn(&Mat2) -> Result<FormValue> + Sync + Send,
    {
        let avg = self.integrate(exec, |u| {
            let v = w(u)?;
            if v.grade() != 3 {
                return Err(Error::GradeMismatch { expected: 3, got: v.grade() });
            }
            Ok(v.coeff(0b0111))
        })?;
        Ok(avg * SU2_VOLUME)
    }
}

/// Haar-uniform point of `SU(2)`: a uniform point of the unit 3-sphere.
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            let a = c(g[0] / n, g[1] / n);
            let b = c(g[2] / n, g[3] / n);
            return mat2(a, -b.conj(), b, a.conj());
        }
    }
}

/// Haar-uniform point of `U(2)`: `SU(2)` times an independent uniform phase.
pub fn haar_u2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let u = haar_su2(rng);
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    u * phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det2, unitarity_drift2};
    use crate::rep_core::sym_power::psi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn legendre_rule() {
        let (x, w) = gauss_legendre(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact for x^8
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m - 2.0 / 9.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn grid_points_are_special_unitary() {
        let g = SU2Grid::new(4).unwrap();
        for u in g.points() {
            assert!(unitarity_drift2(&u) < 1e-14);
            assert!((det2(&u) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(SU2Grid::new(0).is_err());
        let total: f64 = g.nodes.iter().map(|n| n.weight).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn moments() {
        let g = SU2Grid::new(8).unwrap();
        let one = g.integrate(Exec::Sequential, |_| Ok(c(1.0, 0.0))).unwrap();
        assert!((one - c(1.0, 0.0)).norm() < 1e-14);
        let m = g.integrate(Exec::Sequential, |u| Ok(c(u[(0, 0)].norm_sqr(), 0.0))).unwrap();
        assert!((m.re - 0.5).abs() < 1e-14);
        let z = g.integrate(Exec::Sequential, |u| psi(2, 2, u)).unwrap();
        assert!(z.norm() < 1e-14);
    }

    #[test]
    fn monte_carlo_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| haar_su2(&mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 1e-2);
        let v = haar_u2(&mut rng);
        assert!(unitarity_drift2(&v) < 1e-14);
    }

    #[test]
    fn volume_form() {
        let g = SU2Grid::new(2).unwrap();
        let v = g.integrate_threeform(Exec::Sequential, |_| Ok(FormValue::basis(0b0111))).unwrap();
        assert!((v.re - SU2_VOLUME).abs() < 1e-13 && v.im.abs() < 1e-15);
    }
}
