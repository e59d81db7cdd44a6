//! Form fields on `U(2)` against the left-invariant coframe.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::forms::{basis_masks, d_basis, dim, hodge_star, FormValue};
use crate::linalg::{expm2, frame, frame_coords, inv2, Mat2, C64, I, ONE};
use crate::rep_core::poly::GroupPoly;

/// Pointwise evaluator of a black-box form field.
pub type Evaluator = Arc<dyn Fn(&Mat2) -> Result<FormValue> + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// Coefficients against `alpha_I`, lexicographic order.
    Exact(Vec<GroupPoly>),
    Sampled {
        eval: Evaluator,
        numeric: bool,
    },
}

/// A complex `g`-form on `U(2)`.
///
/// Exact fields carry polynomial coefficients and have closed-form exterior
/// derivatives. Sampled fields are pointwise evaluators (pullbacks, finite
/// differences); `numeric` marks values that went through finite differences.
#[derive(Clone)]
pub struct FormField {
    grade: usize,
    repr: Repr,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(cs) => f
                .debug_struct("FormField")
                .field("grade", &self.grade)
                .field("terms", &cs.iter().map(|p| p.len()).collect::<Vec<_>>())
                .finish(),
            Repr::Sampled { numeric, .. } => f
                .debug_struct("FormField")
                .field("grade", &self.grade)
                .field("sampled", &true)
                .field("numeric", numeric)
                .finish(),
        }
    }
}

impl FormField {
    pub fn zero(grade: usize) -> Self {
        Self { grade, repr: Repr::Exact(vec![GroupPoly::zero(); dim(grade)]) }
    }

    pub fn from_coeffs(grade: usize, coeffs: Vec<GroupPoly>) -> Result<Self> {
        if grade > 4 {
            return Err(Error::GradeOverflow(grade, 0));
        }
        if coeffs.len() != dim(grade) {
            return Err(Error::Domain(format!("grade {grade} needs {} coefficients", dim(grade))));
        }
        Ok(Self { grade, repr: Repr::Exact(coeffs) })
    }

    pub fn function(f: GroupPoly) -> Self {
        Self { grade: 0, repr: Repr::Exact(vec![f]) }
    }

    /// Constant-coefficient form (a left-invariant form).
    pub fn invariant(v: &FormValue) -> Self {
        let coeffs = v.coeffs().iter().map(|c| GroupPoly::constant(*c)).collect();
        Self { grade: v.grade(), repr: Repr::Exact(coeffs) }
    }

    pub fn sampled<F>(grade: usize, f: F) -> Self
    where
        F: Fn(&Mat2) -> Result<FormValue> + Send + Sync + 'static,
    {
        Self { grade, repr: Repr::Sampled { eval: Arc::new(f), numeric: false } }
    }

    /// Flags the values of a sampled field as finite-difference output.
    pub fn mark_numeric(self) -> Self {
        match self.repr {
            Repr::Sampled { eval, .. } => Self { grade: self.grade, repr: Repr::Sampled { eval, numeric: true } },
            exact => Self { grade: self.grade, repr: exact },
        }
    }

    fn sampled_tainted(grade: usize, eval: Evaluator, numeric: bool) -> Self {
        Self { grade, repr: Repr::Sampled { eval, numeric } }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// True if values were produced by finite differences.
    pub fn is_numeric(&self) -> bool {
        matches!(self.repr, Repr::Sampled { numeric: true, .. })
    }

    pub fn coeffs(&self) -> Option<&[GroupPoly]> {
        match &self.repr {
            Repr::Exact(cs) => Some(cs),
            Repr::Sampled { .. } => None,
        }
    }

    pub fn eval(&self, u: &Mat2) -> Result<FormValue> {
        let v = match &self.repr {
            Repr::Exact(cs) => {
                let vals: Vec<C64> = cs.iter().map(|p| p.eval(u)).collect();
                FormValue::from_coeffs(self.grade, &vals)?
            }
            Repr::Sampled { eval, .. } => {
                let v = eval(u)?;
                if v.grade() != self.grade {
                    return Err(Error::GradeMismatch { expected: self.grade, got: v.grade() });
                }
                v
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFinite("form value".into()));
        }
        Ok(v)
    }

    fn evaluator(&self) -> Evaluator {
        let me = self.clone();
        Arc::new(move |u| me.eval(u))
    }

    /// Exact exterior derivative: `d(f alpha_I) = sum_j (x_j^L f) alpha_j ^ alpha_I + f d alpha_I`.
    pub fn exterior_derivative(&self) -> Result<Self> {
        if self.grade >= 4 {
            return Err(Error::GradeOverflow(self.grade, 1));
        }
        let Repr::Exact(cs) = &self.repr else {
            return Err(Error::NeedsFiniteDifferences);
        };
        let g = self.grade;
        let xs = frame();
        let mut out = vec![GroupPoly::zero(); dim(g + 1)];
        for (f, mask) in cs.iter().zip(basis_masks(g)) {
            if f.is_empty() {
                continue;
            }
            let base = FormValue::basis(*mask);
            for (j, xj) in xs.iter().enumerate() {
                let df = f.left_derivative(xj);
                let w = FormValue::alpha(j).wedge(&base)?;
                accumulate(&mut out, &df, &w);
            }
            accumulate(&mut out, f, &d_basis(*mask));
        }
        Ok(Self { grade: g + 1, repr: Repr::Exact(out) })
    }

    /// Exterior derivative by central differences along `u exp(t x_j)`; always tainted.
    pub fn exterior_derivative_fd(&self, h: f64) -> Result<Self> {
        if self.grade >= 4 {
            return Err(Error::GradeOverflow(self.grade, 1));
        }
        if !(h > 0.0) || h < 1e-12 {
            return Err(Error::Domain(format!("finite-difference step {h} too small")));
        }
        let g = self.grade;
        let me = self.clone();
        let steps: Vec<(Mat2, Mat2)> =
            frame().iter().map(|x| (expm2(&(x * C64::new(h, 0.0))), expm2(&(x * C64::new(-h, 0.0))))).collect();
        let eval: Evaluator = Arc::new(move |u: &Mat2| {
            let here = me.eval(u)?;
            let mut out = FormValue::zero(g + 1);
            for (j, (p, m)) in steps.iter().enumerate() {
                let dv = (me.eval(&(u * p))? - me.eval(&(u * m))?) * C64::new(0.5 / h, 0.0);
                out += FormValue::alpha(j).wedge(&dv)?;
            }
            for (c, mask) in here.coeffs().iter().zip(basis_masks(g)) {
                out += d_basis(*mask) * *c;
            }
            Ok(out)
        });
        Ok(Self::sampled_tainted(g + 1, eval, true))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (ga, gb) = (self.grade, other.grade);
        if ga + gb > 4 {
            return Err(Error::GradeOverflow(ga, gb));
        }
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                let mut out = vec![GroupPoly::zero(); dim(ga + gb)];
                for (fa, ma) in a.iter().zip(basis_masks(ga)) {
                    if fa.is_empty() {
                        continue;
                    }
                    for (fb, mb) in b.iter().zip(basis_masks(gb)) {
                        if fb.is_empty() {
                            continue;
                        }
                        let w = FormValue::basis(*ma).wedge(&FormValue::basis(*mb))?;
                        accumulate(&mut out, &(fa * fb), &w);
                    }
                }
                Ok(Self { grade: ga + gb, repr: Repr::Exact(out) })
            }
            _ => {
                let (ea, eb) = (self.evaluator(), other.evaluator());
                let numeric = self.is_numeric() || other.is_numeric();
                let eval: Evaluator = Arc::new(move |u| ea(u)?.wedge(&eb(u)?));
                Ok(Self::sampled_tainted(ga + gb, eval, numeric))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { expected: self.grade, got: other.grade });
        }
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                let cs = a.iter().zip(b).map(|(x, y)| x + y).collect();
                Ok(Self { grade: self.grade, repr: Repr::Exact(cs) })
            }
            _ => {
                let (ea, eb) = (self.evaluator(), other.evaluator());
                let numeric = self.is_numeric() || other.is_numeric();
                let eval: Evaluator = Arc::new(move |u| Ok(ea(u)? + eb(u)?));
                Ok(Self::sampled_tainted(self.grade, eval, numeric))
            }
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        match &self.repr {
            Repr::Exact(cs) => Self { grade: self.grade, repr: Repr::Exact(cs.iter().map(|p| p.scale(s)).collect()) },
            Repr::Sampled { eval, numeric } => {
                let e = eval.clone();
                Self::sampled_tainted(self.grade, Arc::new(move |u| Ok(e(u)? * s)), *numeric)
            }
        }
    }

    /// Multiply by a function.
    pub fn times(&self, f: &GroupPoly) -> Self {
        match &self.repr {
            Repr::Exact(cs) => Self { grade: self.grade, repr: Repr::Exact(cs.iter().map(|p| f * p).collect()) },
            Repr::Sampled { eval, numeric } => {
                let (e, f) = (eval.clone(), f.clone());
                Self::sampled_tainted(self.grade, Arc::new(move |u| Ok(e(u)? * f.eval(u))), *numeric)
            }
        }
    }

    /// Pointwise complex conjugate (the coframe is real).
    pub fn conj(&self) -> Self {
        match &self.repr {
            Repr::Exact(cs) => {
                Self { grade: self.grade, repr: Repr::Exact(cs.iter().map(|p| p.conj_unitary()).collect()) }
            }
            Repr::Sampled { eval, numeric } => {
                let e = eval.clone();
                Self::sampled_tainted(self.grade, Arc::new(move |u| Ok(e(u)?.conj())), *numeric)
            }
        }
    }

    /// Hodge star of a 2-form, pointwise.
    pub fn star(&self) -> Result<Self> {
        if self.grade != 2 {
            return Err(Error::GradeMismatch { expected: 2, got: self.grade });
        }
        let e = self.evaluator();
        let numeric = self.is_numeric();
        Ok(Self::sampled_tainted(2, Arc::new(move |u| hodge_star(&e(u)?)), numeric))
    }

    /// Contraction with the left-invariant vector field with frame coordinates `x`.
    pub fn interior(&self, x: [C64; 4]) -> Result<Self> {
        if self.grade == 0 {
            return Ok(Self::zero(0));
        }
        let e = self.evaluator();
        let numeric = self.is_numeric();
        Ok(Self::sampled_tainted(self.grade - 1, Arc::new(move |u| Ok(e(u)?.interior(&x))), numeric))
    }

    /// Pullback through `eta(u) = u^{-1}`; exact fields stay exact.
    ///
    /// `d eta_u(u x) = -x u^{-1} = u^{-1} (-u x u^{-1})`.
    pub fn inversion_pullback(&self) -> Result<Self> {
        let g = self.grade;
        match &self.repr {
            Repr::Exact(cs) => {
                let coframe = inverted_coframe();
                let mut out = vec![GroupPoly::zero(); dim(g)];
                for (f, mask) in cs.iter().zip(basis_masks(g)) {
                    if f.is_empty() {
                        continue;
                    }
                    let mut prod = vec![GroupPoly::one()];
                    let mut grade = 0;
                    for (j, cj) in coframe.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            prod = wedge_exact(&prod, grade, cj, 1)?;
                            grade += 1;
                        }
                    }
                    let fi = f.compose_inverse();
                    for (o, p) in out.iter_mut().zip(&prod) {
                        *o += &(&fi * p);
                    }
                }
                Ok(Self { grade: g, repr: Repr::Exact(out) })
            }
            Repr::Sampled { eval, numeric } => {
                let e = eval.clone();
                let f: Evaluator = Arc::new(move |u: &Mat2| {
                    let ui = inv2(u).ok_or_else(|| Error::Domain("singular point".into()))?;
                    let t = adjoint_columns(u, -ONE);
                    Ok(e(&ui)?.pullback_linear(&t))
                });
                Ok(Self::sampled_tainted(g, f, *numeric))
            }
        }
    }
}

/// `t[i][j] = s * alpha_i(u x_j u^{-1})`.
fn adjoint_columns(u: &Mat2, s: C64) -> [[C64; 4]; 4] {
    let ui = inv2(u).expect("invertible");
    let mut t = [[C64::new(0.0, 0.0); 4]; 4];
    for (j, xj) in frame().iter().enumerate() {
        let cs = frame_coords(&(u * xj * ui));
        for i in 0..4 {
            t[i][j] = cs[i] * s;
        }
    }
    t
}

fn accumulate(out: &mut [GroupPoly], f: &GroupPoly, w: &FormValue) {
    for (o, c) in out.iter_mut().zip(w.coeffs()) {
        if *c != C64::new(0.0, 0.0) {
            *o += &f.scale(*c);
        }
    }
}

fn wedge_exact(a: &[GroupPoly], ga: usize, b: &[GroupPoly], gb: usize) -> Result<Vec<GroupPoly>> {
    let mut out = vec![GroupPoly::zero(); dim(ga + gb)];
    for (fa, ma) in a.iter().zip(basis_masks(ga)) {
        for (fb, mb) in b.iter().zip(basis_masks(gb)) {
            if fa.is_empty() || fb.is_empty() {
                continue;
            }
            let w = FormValue::basis(*ma).wedge(&FormValue::basis(*mb))?;
            accumulate(&mut out, &(fa * fb), &w);
        }
    }
    Ok(out)
}

/// `eta^* alpha_j = -sum_k alpha_j(u x_k u^{-1}) alpha_k` with polynomial coefficients.
fn inverted_coframe() -> [Vec<GroupPoly>; 4] {
    let e = |i, j| GroupPoly::entry(i, j);
    let dinv = GroupPoly::det_pow(-1);
    let u = [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]];
    let ui = [[&dinv * &e(1, 1), (&dinv * &e(0, 1)).scale(-ONE)], [(&dinv * &e(1, 0)).scale(-ONE), &dinv * &e(0, 0)]];
    let mut out: [Vec<GroupPoly>; 4] = std::array::from_fn(|_| vec![GroupPoly::zero(); 4]);
    for (k, xk) in frame().iter().enumerate() {
        // m = u x_k u^{-1}
        let mut m: [[GroupPoly; 2]; 2] = Default::default();
        for (a, row) in m.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let mut acc = GroupPoly::zero();
                for p in 0..2 {
                    for q in 0..2 {
                        let x = xk[(p, q)];
                        if x != C64::new(0.0, 0.0) {
                            acc += &(&u[a][p] * &ui[q][b]).scale(x);
                        }
                    }
                }
                *entry = acc;
            }
        }
        // frame coordinates, as in `frame_coords`
        let two_i = C64::new(0.0, 2.0);
        let coords = [
            (&m[0][0] - &m[1][1]).scale(ONE / two_i),
            (&m[0][1] - &m[1][0]).scale(C64::new(0.5, 0.0)),
            (&m[0][1] + &m[1][0]).scale(ONE / two_i),
            (&m[0][0] + &m[1][1]).scale(ONE / two_i),
        ];
        for (j, cj) in coords.into_iter().enumerate() {
            out[j][k] = cj.scale(-ONE);
        }
    }
    out
}

/// The coframe and the `sl(2)` combinations used for the Maxwell potentials.
pub mod coframe {
    use super::*;

    pub fn alpha(j: usize) -> FormValue {
        FormValue::alpha(j)
    }

    /// `alpha_h^L = i alpha_1`.
    pub fn alpha_h() -> FormValue {
        FormValue::alpha(0) * I
    }

    /// `alpha_f^L = -(alpha_2 - i alpha_3)`.
    pub fn alpha_f() -> FormValue {
        -(FormValue::alpha(1) - FormValue::alpha(2) * I)
    }

    /// `alpha_e^L = alpha_2 + i alpha_3`.
    pub fn alpha_e() -> FormValue {
        FormValue::alpha(1) + FormValue::alpha(2) * I
    }

    /// Right-invariant coframe `alpha_j^R = eta^* alpha_j`, dual to `x^R_u = -x u`.
    pub fn right(j: usize) -> FormField {
        FormField::invariant(&FormValue::alpha(j)).inversion_pullback().expect("exact field")
    }
}

#[cfg(test)]
mod tests {
    use super::coframe::*;
    use super::*;
    use crate::geometry::quadrature::haar_u2;
    use crate::linalg::{c, ZERO};
    use crate::rep_core::sym_power::{psi_poly, Sl2Basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn points(n: usize, seed: u64) -> Vec<Mat2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| haar_u2(&mut rng)).collect()
    }

    fn max_diff(a: &FormField, b: &FormField, pts: &[Mat2]) -> f64 {
        pts.iter().map(|u| (a.eval(u).unwrap() - b.eval(u).unwrap()).norm_inf()).fold(0.0, f64::max)
    }

    fn frame_c(x: &Mat2) -> [C64; 4] {
        frame_coords(x)
    }

    #[test]
    fn coframe_duals() {
        assert!((alpha_f().eval_on(&[frame_c(&Sl2Basis::F.matrix())]).unwrap() - ONE).norm() < 1e-15);
        assert!((alpha_h().eval_on(&[frame_c(&Sl2Basis::H.matrix())]).unwrap() - ONE).norm() < 1e-15);
        assert!((alpha_e().eval_on(&[frame_c(&Sl2Basis::E.matrix())]).unwrap() - ONE).norm() < 1e-15);
        assert!(alpha_f().eval_on(&[frame_c(&Sl2Basis::E.matrix())]).unwrap().norm() < 1e-15);
        for (j, xj) in frame().iter().enumerate() {
            for k in 0..4 {
                let v = alpha(k).eval_on(&[frame_c(xj)]).unwrap();
                assert_eq!(v, if j == k { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn d_of_coframe() {
        let d1 = FormField::invariant(&alpha(0)).exterior_derivative().unwrap();
        let want = FormValue::alpha2(1, 2) * c(-2.0, 0.0);
        assert_eq!(d1.eval(&Mat2::identity()).unwrap(), want);
        let d4 = FormField::invariant(&alpha(3)).exterior_derivative().unwrap();
        assert_eq!(d4.eval(&Mat2::identity()).unwrap(), FormValue::zero(2));
    }

    #[test]
    fn d_matches_finite_differences_and_squares_to_zero() {
        let pts = points(20, 3);
        let f = &psi_poly(2, 4).unwrap() + &GroupPoly::entry(0, 1);
        let a = FormField::invariant(&alpha_f())
            .times(&f)
            .add(&FormField::invariant(&alpha(3)).times(&GroupPoly::entry(1, 1)))
            .unwrap();
        let da = a.exterior_derivative().unwrap();
        let fd = a.exterior_derivative_fd(1e-4).unwrap();
        assert!(fd.is_numeric() && !da.is_numeric());
        assert!(max_diff(&da, &fd, &pts) < 1e-6);
        let dda = da.exterior_derivative().unwrap();
        let z = FormField::zero(3);
        assert!(max_diff(&dda, &z, &pts) < 1e-12);
        let black = FormField::sampled(1, |_| Ok(FormValue::alpha(0)));
        assert!(matches!(black.exterior_derivative(), Err(Error::NeedsFiniteDifferences)));
    }

    #[test]
    fn documented_derivative_of_potential() {
        // d(psi alpha_f) = i l psi alpha_4 ^ alpha_f + (k+2) psi alpha_h ^ alpha_f
        let pts = points(10, 4);
        for (k, l) in [(0u32, 2i32), (1, 3), (2, -4), (3, 1)] {
            let psi = psi_poly(k, l).unwrap();
            let a = FormField::invariant(&alpha_f()).times(&psi);
            let da = a.exterior_derivative().unwrap();
            let t1 = alpha(3).wedge(&alpha_f()).unwrap() * c(0.0, l as f64);
            let t2 = alpha_h().wedge(&alpha_f()).unwrap() * c(k as f64 + 2.0, 0.0);
            let want = FormField::invariant(&(t1 + t2)).times(&psi);
            assert!(max_diff(&da, &want, &pts) < 1e-12, "k={k} l={l}");
        }
    }

    #[test]
    fn inversion() {
        let pts = points(15, 5);
        let gamma = FormField::invariant(&FormValue::volume());
        assert!(max_diff(&gamma.inversion_pullback().unwrap(), &gamma, &pts) < 1e-12);
        let a = FormField::invariant(&alpha_f()).times(&psi_poly(1, 3).unwrap());
        let twice = a.inversion_pullback().unwrap().inversion_pullback().unwrap();
        assert!(max_diff(&twice, &a, &pts) < 1e-12);
        // exact and pointwise inversion agree
        let sampled = FormField::sampled(1, {
            let a = a.clone();
            move |u| a.eval(u)
        });
        assert!(max_diff(&a.inversion_pullback().unwrap(), &sampled.inversion_pullback().unwrap(), &pts) < 1e-12);
        // eta^* alpha_f^R = alpha_f^L
        let af_r = right(1).scale(-ONE).add(&right(2).scale(I)).unwrap();
        let back = af_r.inversion_pullback().unwrap();
        assert!(max_diff(&back, &FormField::invariant(&alpha_f()), &pts) < 1e-12);
    }

    #[test]
    fn right_coframe_is_dual_to_right_fields() {
        for u in points(5, 6) {
            for (k, xk) in frame().iter().enumerate() {
                // x^R_u = -x u, expressed in the left frame at u: u^{-1}(-x u)
                let v = frame_coords(&(inv2(&u).unwrap() * (-xk * u)));
                for j in 0..4 {
                    let val = right(j).eval(&u).unwrap().eval_on(&[v]).unwrap();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((val - c(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn wedge_and_conj() {
        let pts = points(5, 8);
        let a = FormField::invariant(&alpha(0)).times(&GroupPoly::entry(0, 0));
        let aa = a.wedge(&a).unwrap();
        assert!(max_diff(&aa, &FormField::zero(2), &pts) < 1e-15);
        let cc = a.conj();
        for u in &pts {
            let want = a.eval(u).unwrap().conj();
            assert!((cc.eval(u).unwrap() - want).norm_inf() < 1e-14);
        }
        assert!(FormField::invariant(&FormValue::alpha2(0, 1))
            .wedge(&FormField::invariant(&FormValue::alpha2(2, 3)).wedge(&a).unwrap_or(FormField::zero(3)))
            .is_err());
    }
}
