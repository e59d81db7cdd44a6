//! The invariant Hermitian form `<omega, mu> = int_{SU(2)} alpha ^ conj(mu)`,
//! where `d alpha = omega`, and Gram matrices of basis solutions.

use std::sync::LazyLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::ConformalElement;
use crate::error::{Error, Result};
use crate::fields::{coframe, eigen_residuals, maxwell_basis, FormField, MaxwellBasisLabel, Solution};
use crate::geometry::forms::Eigen;
use crate::geometry::quadrature::{haar_u2, SU2Grid};
use crate::linalg::{Mat2, C64};
use crate::par::Exec;
use crate::rep_core::GroupPoly;

/// Relative size of the wrong-eigenspace component tolerated by the contract check.
pub const EIGEN_TOL: f64 = 1e-8;

static CHECK_POINTS: LazyLock<Vec<Mat2>> = LazyLock::new(|| {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..8).map(|_| haar_u2(&mut rng)).collect()
});

/// How many quadrature nodes to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OrderSpec {
    /// Fixed order; the error estimate compares against order `n + 2`.
    Fixed(usize),
    /// Doubling from `start` until the value changes by less than
    /// `rel_tol` relative (or `abs_tol` absolute), at most `max`.
    Adaptive { start: usize, max: usize, rel_tol: f64, abs_tol: f64 },
}

impl OrderSpec {
    pub fn adaptive(start: usize) -> Self {
        OrderSpec::Adaptive { start, max: 128, rel_tol: 1e-4, abs_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: C64,
    pub quadrature_order: usize,
    pub estimated_error: f64,
    /// False if adaptive refinement hit its maximum order first.
    pub converged: bool,
}

fn check_eigenspace(w: &FormField, eigen: Eigen, what: &str, exec: Exec) -> Result<()> {
    let r = eigen_residuals(w, &CHECK_POINTS, exec)?;
    let off = r.residual(eigen.opposite());
    if off > EIGEN_TOL * r.norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract(format!(
            "{what} is not in the {eigen} eigenspace (wrong component {off:.3e} of {:.3e})",
            r.norm
        )));
    }
    Ok(())
}

/// The raw integral on a grid of the given order, without contract checks.
pub fn pair_at_order(potential: &FormField, mu: &FormField, order: usize, exec: Exec) -> Result<C64> {
    let grid = SU2Grid::new(order)?;
    let mu_bar = mu.conj();
    grid.integrate_threeform(exec, |u| potential.eval(u)?.wedge(&mu_bar.eval(u)?))
}

fn pair_with_spec(potential: &FormField, mu: &FormField, spec: OrderSpec, exec: Exec) -> Result<PairingResult> {
    match spec {
        OrderSpec::Fixed(n) => {
            let v = pair_at_order(potential, mu, n, exec)?;
            let w = pair_at_order(potential, mu, n + 2, exec)?;
            Ok(PairingResult { value: v, quadrature_order: n, estimated_error: (v - w).norm(), converged: true })
        }
        OrderSpec::Adaptive { start, max, rel_tol, abs_tol } => {
            if start == 0 || start > max {
                return Err(Error::Domain(format!("adaptive orders {start}..{max}")));
            }
            let mut n = start;
            let mut v = pair_at_order(potential, mu, n, exec)?;
            loop {
                let next = (2 * n).min(max);
                if next == n {
                    return Ok(PairingResult {
                        value: v,
                        quadrature_order: n,
                        estimated_error: f64::NAN,
                        converged: false,
                    });
                }
                let w = pair_at_order(potential, mu, next, exec)?;
                let change = (w - v).norm();
                if change <= rel_tol * w.norm() || change <= abs_tol {
                    return Ok(PairingResult {
                        value: w,
                        quadrature_order: next,
                        estimated_error: change,
                        converged: true,
                    });
                }
                if next == max {
                    return Ok(PairingResult {
                        value: w,
                        quadrature_order: next,
                        estimated_error: change,
                        converged: false,
                    });
                }
                n = next;
                v = w;
            }
        }
    }
}

/// `<omega, mu>` with both arguments required to lie in the `eigen` eigenspace of the star.
pub fn hermitian_pair(
    omega: &Solution,
    mu: &FormField,
    eigen: Eigen,
    spec: OrderSpec,
    exec: Exec,
) -> Result<PairingResult> {
    if omega.potential.grade() != 1 {
        return Err(Error::GradeMismatch { expected: 1, got: omega.potential.grade() });
    }
    if mu.grade() != 2 || omega.omega.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, got: mu.grade().max(omega.omega.grade()) });
    }
    check_eigenspace(&omega.omega, eigen, "first argument", exec)?;
    check_eigenspace(mu, eigen, "second argument", exec)?;
    pair_with_spec(&omega.potential, mu, spec, exec)
}

/// Gram matrix of basis solutions from one eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gram {
    pub labels: Vec<String>,
    pub eigen: String,
    pub values: Vec<Vec<C64>>,
    pub quadrature_order: usize,
    pub estimated_error: f64,
}

impl Gram {
    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    m = m.max(v.norm());
                }
            }
        }
        m
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.values.iter().enumerate().map(|(i, r)| r[i]).collect()
    }
}

pub fn gram_matrix(labels: &[MaxwellBasisLabel], exec: Exec) -> Result<Gram> {
    let first = labels.first().ok_or_else(|| Error::Domain("no labels".into()))?;
    let eigen = first.eigen();
    if let Some(bad) = labels.iter().find(|l| l.eigen() != eigen) {
        return Err(Error::Contract(format!("{bad} is not in the {eigen} eigenspace of {first}")));
    }
    let sols: Vec<Solution> = labels.iter().map(|l| maxwell_basis(*l)).collect::<Result<_>>()?;
    let k_max = labels.iter().map(|l| l.k).max().unwrap_or(0);
    let order = SU2Grid::default_order(k_max);
    let mut values = vec![vec![C64::new(0.0, 0.0); labels.len()]; labels.len()];
    let mut err: f64 = 0.0;
    for (i, a) in sols.iter().enumerate() {
        for (j, b) in sols.iter().enumerate() {
            let r = pair_with_spec(&a.potential, &b.omega, OrderSpec::Fixed(order), exec)?;
            values[i][j] = r.value;
            err = err.max(r.estimated_error);
        }
    }
    Ok(Gram {
        labels: labels.iter().map(|l| l.to_string()).collect(),
        eigen: eigen.to_string(),
        values,
        quadrature_order: order,
        estimated_error: err,
    })
}

/// `<g^* omega, g^* mu>` against `<omega, mu>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub before: PairingResult,
    pub after: PairingResult,
    pub rel_error: f64,
}

pub fn invariance_check(
    g: &ConformalElement,
    omega: &Solution,
    mu: &Solution,
    eigen: Eigen,
    before_spec: OrderSpec,
    after_spec: OrderSpec,
    exec: Exec,
) -> Result<InvarianceReport> {
    let before = hermitian_pair(omega, &mu.omega, eigen, before_spec, exec)?;
    let go = g.pullback_solution(omega);
    let gm = g.pullback(&mu.omega);
    let after = hermitian_pair(&go, &gm, eigen, after_spec, exec)?;
    let rel_error = (after.value - before.value).norm() / before.value.norm().max(f64::MIN_POSITIVE);
    Ok(InvarianceReport { before, after, rel_error })
}

/// `<omega, mu>` recomputed with the potential `alpha + df + c alpha_4`.
/// Returns `(original, shifted)`.
pub fn potential_shift(
    omega: &Solution,
    mu: &FormField,
    f: &GroupPoly,
    shift: C64,
    order: usize,
    exec: Exec,
) -> Result<(C64, C64)> {
    let df = FormField::function(f.clone()).exterior_derivative()?;
    let closed = FormField::invariant(&coframe::alpha(3)).scale(shift);
    let alt = omega.potential.add(&df)?.add(&closed)?;
    Ok((pair_at_order(&omega.potential, mu, order, exec)?, pair_at_order(&alt, mu, order, exec)?))
}

/// `-(4k + 8)/(k + 1)`, the norm of the side-`L` basis solutions in units of `pi^2`.
pub fn expected_norm_pi2(k: u32) -> f64 {
    -(4.0 * k as f64 + 8.0) / (k as f64 + 1.0)
}
