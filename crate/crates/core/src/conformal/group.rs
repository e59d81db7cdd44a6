//! `U(2,2)` in the realizations `G` (skew pairing `J_0`) and `G_1` (`I_{2,2}`),
//! acting on `U(2)` by fractional-linear maps.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FormField, Solution};
use crate::geometry::frame::{metric_bilinear, U2Point, SIGNATURE};
use crate::geometry::quadrature::haar_u2;
use crate::linalg::{
    blocks, c, cond2, det2, expm4, frame, frame_coords, inv2, max_abs4, polar_unitary, split_blocks, unitarity_drift2,
    Mat2, Mat4, C64, I, ONE, ZERO,
};

pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Reject `CZ + D` above this condition number.
pub const COND_LIMIT: f64 = 1e8;
/// Outputs drifting more than this from unitary are polar-projected.
pub const REUNITARIZE_FROM: f64 = 1e-12;
/// Outputs drifting more than this are an error.
pub const DRIFT_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Realization {
    /// `g J_0 g^* = J_0`, `J_0 = [[0, iI], [-iI, 0]]`.
    G,
    /// `g I_{2,2} g^* = I_{2,2}`.
    G1,
}

impl Realization {
    pub fn form(self) -> Mat4 {
        match self {
            Realization::G => j0(),
            Realization::G1 => i22(),
        }
    }
}

pub fn j0() -> Mat4 {
    let z = Mat2::zeros();
    let i = Mat2::identity();
    blocks(&z, &(i * I), &(i * -I), &z)
}

pub fn i22() -> Mat4 {
    let z = Mat2::zeros();
    let i = Mat2::identity();
    blocks(&i, &z, &z, &(-i))
}

/// `L = [[I, iI], [I, -iI]] / sqrt(2)`.
pub fn cayley_l() -> Mat4 {
    let i = Mat2::identity();
    blocks(&i, &(i * I), &i, &(i * -I)) * c(FRAC_1_SQRT_2, 0.0)
}

fn is_hermitian(y: &Mat2, tol: f64) -> bool {
    (y - y.adjoint()).iter().all(|z| z.norm() <= tol)
}

/// An element of `U(2,2)` in one of its two realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalElement {
    m: Mat4,
    realization: Realization,
}

/// Result of the fractional-linear action at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActOutcome {
    pub point: U2Point,
    pub cond: f64,
    pub drift: f64,
    pub reunitarized: bool,
}

/// The conformal factor of `g` at `Z`, by both determinant expressions and by
/// the pulled-back frame Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    /// `det((AZ+B)^{-1} AZ - (CZ+D)^{-1} CZ)`
    pub det_first: C64,
    /// `det((AZ+B)^{-1} B - (CZ+D)^{-1} D)`
    pub det_second: C64,
    /// Scalar `s` with `Gram = s diag(eps)`, averaged over the diagonal.
    pub metric_ratio: f64,
    /// `max |Gram - s diag(eps)| / |s|`.
    pub gram_residual: f64,
}

impl ConformalElement {
    pub fn new(m: Mat4, realization: Realization) -> Result<Self> {
        let f = realization.form();
        let res = max_abs4(&(m * f * m.adjoint() - f));
        let scale = max_abs4(&m).powi(2).max(1.0);
        if !(res <= MEMBERSHIP_TOL * scale) {
            return Err(Error::NotInGroup(format!("{realization:?} pairing residual {res:.3e}")));
        }
        Ok(Self { m, realization })
    }

    pub fn identity(realization: Realization) -> Self {
        Self { m: Mat4::identity(), realization }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// `diag(A, D)` in `G_1`; `K` is the set of these with `A, D` unitary.
    pub fn k_element(a: &Mat2, d: &Mat2) -> Result<Self> {
        for m in [a, d] {
            if unitarity_drift2(m) > MEMBERSHIP_TOL {
                return Err(Error::NotInGroup("K blocks must be unitary".into()));
            }
        }
        let z = Mat2::zeros();
        Ok(Self { m: blocks(a, &z, &z, d), realization: Realization::G1 })
    }

    /// `nbar(Y) = [[I, 0], [Y, I]]` in `G`, `Y` Hermitian.
    pub fn n_bar(y: &Mat2) -> Result<Self> {
        if !is_hermitian(y, MEMBERSHIP_TOL) {
            return Err(Error::NotInGroup("nbar(Y) needs Y Hermitian".into()));
        }
        let i = Mat2::identity();
        Ok(Self { m: blocks(&i, &Mat2::zeros(), y, &i), realization: Realization::G })
    }

    /// `n(Y) = [[I, Y], [0, I]]` in `G`, `Y` Hermitian.
    pub fn n(y: &Mat2) -> Result<Self> {
        if !is_hermitian(y, MEMBERSHIP_TOL) {
            return Err(Error::NotInGroup("n(Y) needs Y Hermitian".into()));
        }
        let i = Mat2::identity();
        Ok(Self { m: blocks(&i, y, &Mat2::zeros(), &i), realization: Realization::G })
    }

    /// `diag(aI, a^{-1}I)` in `G_1`, `|a| = 1`: the group `S cap K`.
    pub fn s_cap_k(a: C64) -> Result<Self> {
        if (a.norm() - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::NotInGroup(format!("|a| = {} != 1", a.norm())));
        }
        let i = Mat2::identity();
        Self::k_element(&(i * a), &(i * a.inv()))
    }

    /// `exp(X)` for `X` in the real Lie algebra of the realization.
    pub fn exp(x: &Mat4, realization: Realization) -> Result<Self> {
        check_lie(x, realization)?;
        Ok(Self { m: expm4(x), realization })
    }

    /// Haar-random element of `K`.
    pub fn random_k<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (a, d) = (haar_u2(rng), haar_u2(rng));
        Self::k_element(&a, &d).expect("unitary blocks")
    }

    /// `exp(eps X)` with `X` a Gaussian element of `Lie(G_1)` (unit-scale entries).
    pub fn random_near_identity<R: Rng + ?Sized>(rng: &mut R, eps: f64) -> Self {
        let x = random_lie_g1(rng) * c(eps, 0.0);
        Self::exp(&x, Realization::G1).expect("Lie algebra element")
    }

    /// The Cayley isomorphism `sigma(g) = L g L^*` from `G` to `G_1`.
    pub fn cayley(&self) -> Result<Self> {
        if self.realization != Realization::G {
            return Err(Error::Contract("cayley expects an element of G".into()));
        }
        let l = cayley_l();
        Ok(Self { m: l * self.m * l.adjoint(), realization: Realization::G1 })
    }

    /// `sigma^{-1}(g) = L^* g L` from `G_1` to `G`.
    pub fn cayley_inverse(&self) -> Result<Self> {
        if self.realization != Realization::G1 {
            return Err(Error::Contract("inverse Cayley expects an element of G1".into()));
        }
        let l = cayley_l();
        Ok(Self { m: l.adjoint() * self.m * l, realization: Realization::G })
    }

    pub fn to_g1(&self) -> Self {
        match self.realization {
            Realization::G1 => *self,
            Realization::G => self.cayley().expect("realization G"),
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.realization != other.realization {
            return Err(Error::Contract("composing elements of different realizations".into()));
        }
        Ok(Self { m: self.m * other.m, realization: self.realization })
    }

    pub fn inverse(&self) -> Self {
        let f = self.realization.form();
        // g F g^* = F with F^2 = I gives g^{-1} = F g^* F
        Self { m: f * self.m.adjoint() * f, realization: self.realization }
    }

    fn g1_blocks(&self) -> (Mat2, Mat2, Mat2, Mat2) {
        split_blocks(&self.to_g1().m)
    }

    fn denominators(&self, z: &Mat2) -> Result<(Mat2, Mat2, f64)> {
        let (a, b, cc, d) = self.g1_blocks();
        let num = a * z + b;
        let den = cc * z + d;
        let cond = cond2(&den);
        if !(cond <= COND_LIMIT) {
            return Err(Error::NearSingular { cond, limit: COND_LIMIT });
        }
        Ok((num, den, cond))
    }

    /// `g . Z = (AZ + B)(CZ + D)^{-1}` with drift control.
    pub fn act_detailed(&self, z: &U2Point) -> Result<ActOutcome> {
        let (num, den, cond) = self.denominators(z.matrix())?;
        let w = num * inv2(&den).ok_or(Error::NearSingular { cond: f64::INFINITY, limit: COND_LIMIT })?;
        let drift = unitarity_drift2(&w);
        if !(drift <= DRIFT_LIMIT) {
            return Err(Error::UnitarityDrift(drift));
        }
        let (w, reunitarized) = if drift > REUNITARIZE_FROM { (polar_unitary(&w), true) } else { (w, false) };
        Ok(ActOutcome { point: U2Point::new(w)?, cond, drift, reunitarized })
    }

    pub fn act(&self, z: &U2Point) -> Result<U2Point> {
        Ok(self.act_detailed(z)?.point)
    }

    /// `t[i][j] = alpha_i(d phi_Z(Z x_j))` at `phi(Z)`, from
    /// `d phi_Z(ZX) = (AZX - phi(Z) C Z X)(CZ + D)^{-1}`.
    pub fn tangent_map(&self, z: &U2Point) -> Result<[[C64; 4]; 4]> {
        let (a, _, cc, _) = self.g1_blocks();
        let zm = z.matrix();
        let (_, den, _) = self.denominators(zm)?;
        let den_inv = inv2(&den).ok_or(Error::NearSingular { cond: f64::INFINITY, limit: COND_LIMIT })?;
        let phi = self.act(z)?;
        let phi_inv = phi.matrix().adjoint();
        let mut t = [[ZERO; 4]; 4];
        for (j, xj) in frame().iter().enumerate() {
            let zx = zm * xj;
            let dphi = (a * zx - phi.matrix() * cc * zx) * den_inv;
            let cs = frame_coords(&(phi_inv * dphi));
            for i in 0..4 {
                t[i][j] = cs[i];
            }
        }
        Ok(t)
    }

    pub fn conformal_factor(&self, z: &U2Point) -> Result<ConformalFactor> {
        let (a, b, cc, d) = self.g1_blocks();
        let zm = z.matrix();
        let (num, den, _) = self.denominators(zm)?;
        let singular = || Error::NearSingular { cond: f64::INFINITY, limit: COND_LIMIT };
        let num_inv = inv2(&num).ok_or_else(singular)?;
        let den_inv = inv2(&den).ok_or_else(singular)?;
        let det_first = det2(&(num_inv * a * zm - den_inv * cc * zm));
        let det_second = det2(&(num_inv * b - den_inv * d));
        let t = self.tangent_map(z)?;
        let cols: Vec<Mat2> =
            (0..4).map(|j| crate::linalg::from_frame_coords(&[t[0][j], t[1][j], t[2][j], t[3][j]])).collect();
        let mut gram = [[ZERO; 4]; 4];
        for j in 0..4 {
            for k in 0..4 {
                gram[j][k] = metric_bilinear(&cols[j], &cols[k]);
            }
        }
        let s = (0..4).map(|j| gram[j][j].re * SIGNATURE[j]).sum::<f64>() / 4.0;
        let mut res: f64 = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                let want = if j == k { s * SIGNATURE[j] } else { 0.0 };
                res = res.max((gram[j][k] - c(want, 0.0)).norm());
            }
        }
        Ok(ConformalFactor { det_first, det_second, metric_ratio: s, gram_residual: res / s.abs() })
    }

    /// `g^* w`, evaluated pointwise through the closed-form tangent map.
    pub fn pullback(&self, w: &FormField) -> FormField {
        let g = *self;
        let w = w.clone();
        FormField::sampled(w.grade(), move |z| {
            let p = U2Point::new(*z)?;
            let t = g.tangent_map(&p)?;
            Ok(w.eval(g.act(&p)?.matrix())?.pullback_linear(&t))
        })
    }

    /// Pullback of a solution together with its potential.
    pub fn pullback_solution(&self, s: &Solution) -> Solution {
        Solution { omega: self.pullback(&s.omega), potential: self.pullback(&s.potential) }
    }

    /// `pi(g) w = (g^{-1})^* w`.
    pub fn represent(&self, w: &FormField) -> FormField {
        self.inverse().pullback(w)
    }
}

/// Checks `X F + F X^* = 0` for the pairing `F` of the realization.
pub fn check_lie(x: &Mat4, realization: Realization) -> Result<()> {
    let f = realization.form();
    let res = max_abs4(&(x * f + f * x.adjoint()));
    if !(res <= MEMBERSHIP_TOL * max_abs4(x).max(1.0)) {
        return Err(Error::NotInGroup(format!("not in the Lie algebra (residual {res:.3e})")));
    }
    Ok(())
}

/// Split a complex `X` into `X_1 + i X_2` with `X_1, X_2` in `Lie(G_1)`.
pub fn split_complex_g1(x: &Mat4) -> (Mat4, Mat4) {
    let f = i22();
    let adj = f * x.adjoint() * f;
    let x1 = (x - adj) * c(0.5, 0.0);
    let x2 = (x + adj) * c(0.0, -0.5);
    (x1, x2)
}

/// Gaussian element of `Lie(G_1)`: `[[A, B], [B^*, D]]`, `A, D` skew-Hermitian.
pub fn random_lie_g1<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let mut g = || -> f64 { rng.sample(StandardNormal) };
    let mut skew = || {
        let h = Mat2::new(c(g(), 0.0), c(g(), g()), ZERO, c(g(), 0.0));
        let h = Mat2::new(h[(0, 0)], h[(0, 1)], h[(0, 1)].conj(), h[(1, 1)]);
        h * I
    };
    let a = skew();
    let d = skew();
    let b = Mat2::from_fn(|_, _| c(g(), g()));
    blocks(&a, &b, &b.adjoint(), &d)
}

/// Generators `E_ij` of `p^+` (upper-right block) or `p^-` (lower-left block).
pub fn p_generators(plus: bool) -> Vec<Mat4> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Mat2::zeros();
            e[(i, j)] = ONE;
            let z = Mat2::zeros();
            out.push(if plus { blocks(&z, &e, &z, &z) } else { blocks(&z, &z, &e, &z) });
        }
    }
    out
}
