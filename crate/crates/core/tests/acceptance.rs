//! Acceptance checks. Runs without the libtest harness so that every
//! check prints exactly one PASS/FAIL line; exits nonzero on any failure.
//!
//! Expected values are computed here, independently of the library: frames,
//! metrics, fractional-linear actions, finite differences, integer series.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use confmax::branching::{maxw_character_series, rational_side_series, shifted_even_character_series};
use confmax::conformal::{
    embed_minkowski, embedding_conformal_factor, extract_eh, light_cone_functional, ConformalElement, MinkowskiPoint,
    PlaneWave, Realization, EH,
};
use confmax::fields::{
    eigen_residuals, j_classification, lowest_ktype_basis, maxwell_basis, FormField, MaxwellBasisLabel, Side, Sign,
    Solution,
};
use confmax::geometry::forms::{hodge_star, D_COFRAME};
use confmax::geometry::{haar_u2, Eigen, FormValue, SU2Grid, U2Point};
use confmax::pairing::{gram_matrix, hermitian_pair, invariance_check, OrderSpec};
use confmax::par::Exec;
use confmax::rep_core::psi;

type M2 = Matrix2<C>;
type M4 = Matrix4<C>;

const PI2: f64 = PI * PI;

fn cx(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Independent oracles.
mod oracle {
    use super::*;

    pub fn frame() -> [M2; 4] {
        let (o, z, i) = (cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0));
        [M2::new(i, z, z, -i), M2::new(z, o, -o, z), M2::new(z, i, i, z), M2::new(i, z, z, i)]
    }

    /// Coefficients of a skew-Hermitian matrix against the frame.
    pub fn coords(v: &M2) -> [f64; 4] {
        [(v[(0, 0)].im - v[(1, 1)].im) / 2.0, v[(0, 1)].re, v[(0, 1)].im, (v[(0, 0)].im + v[(1, 1)].im) / 2.0]
    }

    pub const EPS: [f64; 4] = [-1.0, -1.0, -1.0, 1.0];

    pub fn metric(a: &M2, b: &M2) -> f64 {
        let (x, y) = (coords(a), coords(b));
        (0..4).map(|i| EPS[i] * x[i] * y[i]).sum()
    }

    pub fn skew(m: &M2) -> M2 {
        (m - m.adjoint()) * cx(0.5, 0.0)
    }

    pub fn hermitian(p: [f64; 4]) -> M2 {
        let [x1, x2, x3, t] = p;
        M2::new(cx(t + x3, 0.0), cx(x1, x2), cx(x1, -x2), cx(t - x3, 0.0))
    }

    pub fn cayley(p: [f64; 4]) -> M2 {
        let x = hermitian(p) * cx(0.0, 1.0);
        let id = M2::identity();
        (id + x) * (id - x).try_inverse().unwrap()
    }

    pub fn blocks(g: &M4) -> (M2, M2, M2, M2) {
        (
            g.fixed_view::<2, 2>(0, 0).into_owned(),
            g.fixed_view::<2, 2>(0, 2).into_owned(),
            g.fixed_view::<2, 2>(2, 0).into_owned(),
            g.fixed_view::<2, 2>(2, 2).into_owned(),
        )
    }

    pub fn act(g: &M4, z: &M2) -> M2 {
        let (a, b, c, d) = blocks(g);
        (a * z + b) * (c * z + d).try_inverse().unwrap()
    }

    pub fn i22() -> M4 {
        M4::from_diagonal(&nalgebra::Vector4::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(-1.0, 0.0), cx(-1.0, 0.0)))
    }

    pub fn cross(a: [C; 3], b: [C; 3]) -> [C; 3] {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    }

    pub fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    }

    /// Dense integer coefficients `s[x_power][y_power + Y0]`.
    pub const Y0: i32 = 64;
    pub type Series = Vec<Vec<i64>>;

    pub fn zero(n: usize) -> Series {
        vec![vec![0; 2 * Y0 as usize + 1]; n + 1]
    }

    pub fn add(s: &mut Series, xp: usize, yp: i32, c: i64) {
        if xp < s.len() {
            s[xp][(yp + Y0) as usize] += c;
        }
    }

    pub fn chi(n: i32) -> Vec<i32> {
        (0..=n).map(|j| n - 2 * j).collect()
    }
}

struct Outcome {
    ok: bool,
    summary: String,
}

fn pass_if(ok: bool, summary: String) -> Outcome {
    Outcome { ok, summary }
}

fn norm_formula() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        for k in 0..=5u32 {
            let l = MaxwellBasisLabel::new(k, Side::L, sign);
            let s = maxwell_basis(l).unwrap();
            let r =
                hermitian_pair(&s, &s.omega, l.eigen(), OrderSpec::Fixed(SU2Grid::default_order(k)), Exec::default())
                    .unwrap();
            let want = -((4 * k + 8) as f64) / (k as f64 + 1.0) * PI2;
            worst = worst.max((r.value - cx(want, 0.0)).norm() / want.abs());
        }
    }
    let el = t.elapsed();
    pass_if(
        worst <= 1e-8 && el < Duration::from_secs(30),
        format!("max rel err {worst:.2e} over k=0..5, both signs, {el:.2?}"),
    )
}

fn schur() -> Outcome {
    // Haar on SU(2): |u21|^2 is uniform on [0, 1]; Simpson in t, random phases
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = 4000;
    let mut worst: f64 = 0.0;
    for k in 0..=6u32 {
        for l in [k as i32, -(k as i32), k as i32 + 2] {
            let mut acc = 0.0;
            for i in 0..=m {
                let t = i as f64 / m as f64;
                let w = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let (x1, x2, ph): (f64, f64, f64) =
                    (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
                let a = C::from_polar((1.0 - t).sqrt(), x1);
                let b = C::from_polar(t.sqrt(), x2);
                let u = M2::new(a, -b.conj(), b, a.conj()) * C::from_polar(1.0, ph);
                acc += w * psi(k, l, &u).unwrap().norm_sqr();
            }
            let v = acc / (3.0 * m as f64);
            worst = worst.max((v - 1.0 / (k as f64 + 1.0)).abs());
        }
    }
    pass_if(worst <= 1e-10, format!("max |int |psi|^2 - 1/(k+1)| = {worst:.2e} for k <= 6"))
}

fn structure() -> Outcome {
    let a2 = |i, j| FormValue::alpha2(i, j);
    let want = [a2(1, 2) * cx(-2.0, 0.0), a2(0, 2) * cx(2.0, 0.0), a2(0, 1) * cx(-2.0, 0.0), FormValue::zero(2)];
    let d_err = (0..4).map(|i| (D_COFRAME[i] - want[i]).norm_inf()).fold(0.0, f64::max);
    // J(12)=34, J(13)=-24, J(14)=-23, J(23)=14, J(24)=13, J(34)=-12
    let table = [
        ((0, 1), (2, 3), 1.0),
        ((0, 2), (1, 3), -1.0),
        ((0, 3), (1, 2), -1.0),
        ((1, 2), (0, 3), 1.0),
        ((1, 3), (0, 2), 1.0),
        ((2, 3), (0, 1), -1.0),
    ];
    let mut j_err: f64 = 0.0;
    let mut sq_err: f64 = 0.0;
    let mut dual_err: f64 = 0.0;
    for ((i, j), (k, l), s) in table {
        let b = a2(i, j);
        let sb = hodge_star(&b).unwrap();
        j_err = j_err.max((sb - a2(k, l) * cx(s, 0.0)).norm_inf());
        sq_err = sq_err.max((hodge_star(&sb).unwrap() + b).norm_inf());
        // eta ^ *w = g(eta, w) gamma with g(a_ij, a_ij) = eps_i eps_j
        for ((p, q), _, _) in table {
            let e = a2(p, q);
            let g = if (p, q) == (i, j) { oracle::EPS[i] * oracle::EPS[j] } else { 0.0 };
            let lhs = e.wedge(&sb).unwrap().coeff(0b1111);
            dual_err = dual_err.max((lhs - cx(g, 0.0)).norm());
        }
    }
    let worst = d_err.max(j_err).max(sq_err).max(dual_err);
    pass_if(
        worst <= 1e-12,
        format!("d alpha err {d_err:.1e}, table err {j_err:.1e}, J^2+1 err {sq_err:.1e}, duality err {dual_err:.1e}"),
    )
}

fn classification() -> Outcome {
    let tol = 1e-10;
    let mut bad = Vec::new();
    let mut n = 0;
    for k in 0..=5u32 {
        let ki = k as i32;
        let mut l = -(ki + 6);
        while l <= ki + 6 {
            n += 1;
            let j = j_classification(k, l, 25, 4).unwrap();
            let want = if l == ki + 2 {
                Some(Eigen::MinusI)
            } else if l == -(ki + 2) {
                Some(Eigen::PlusI)
            } else {
                None
            };
            if j.is_maxwell != want.is_some() || j.eigen != want {
                bad.push(format!("L(k={k},l={l})"));
            }
            l += 2;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<M2> = (0..25).map(|_| haar_u2(&mut rng)).collect();
    for (sign, want) in [(Sign::Plus, Eigen::PlusI), (Sign::Minus, Eigen::MinusI)] {
        for k in 0..=5 {
            n += 1;
            let s = maxwell_basis(MaxwellBasisLabel::new(k, Side::R, sign)).unwrap();
            let r = eigen_residuals(&s.omega, &pts, Exec::default()).unwrap();
            let other = if want == Eigen::PlusI { r.minus_i } else { r.plus_i };
            if other > tol * r.norm || r.norm == 0.0 {
                bad.push(format!("R(k={k},{sign:?})"));
            }
        }
    }
    pass_if(
        bad.is_empty(),
        format!("{n} labels, misclassified: {}", if bad.is_empty() { "none".into() } else { bad.join(" ") }),
    )
}

fn embedding_factor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut lib_vs_formula: f64 = 0.0;
    for _ in 0..100 {
        let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let f = oracle::cayley(p);
        let s2: f64 = p.iter().map(|v| v * v).sum();
        let q = p[3] * p[3] - p[0] * p[0] - p[1] * p[1] - p[2] * p[2];
        let formula = 4.0 / (1.0 + 2.0 * s2 + q * q);
        let lib = embedding_conformal_factor(&MinkowskiPoint::from_array(p));
        lib_vs_formula = lib_vs_formula.max((lib - formula).abs() / formula);
        let libf = embed_minkowski(&MinkowskiPoint::from_array(p)).unwrap();
        lib_vs_formula = lib_vs_formula.max((libf.matrix() - f).camax());
        for mu in 0..4 {
            let (mut a, mut b) = (p, p);
            a[mu] += h;
            b[mu] -= h;
            let v = oracle::skew(&(f.adjoint() * (oracle::cayley(a) - oracle::cayley(b)) * cx(0.5 / h, 0.0)));
            let eps = if mu == 3 { 1.0 } else { -1.0 };
            let ratio = oracle::metric(&v, &v) / eps;
            worst = worst.max((ratio - formula).abs() / formula);
        }
    }
    let origin = embedding_conformal_factor(&MinkowskiPoint::default());
    pass_if(
        worst <= 1e-6 && lib_vs_formula <= 1e-12 && origin == 4.0,
        format!("FD metric ratio rel err {worst:.2e}, library vs formula {lib_vs_formula:.1e}, origin {origin}"),
    )
}

fn group_factor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = 2e-3;
    let (mut off, mut dets, mut lib) = (0.0f64, 0.0f64, 0.0f64);
    let mut done = 0;
    while done < 50 {
        let g = ConformalElement::random_near_identity(&mut rng, 0.8);
        let z = haar_u2(&mut rng);
        let m = *g.matrix();
        let (a, b, c, d) = oracle::blocks(&m);
        let den = c * z + d;
        if den.svd(false, false).singular_values.min() < 1e-3 {
            continue;
        }
        let phi = oracle::act(&m, &z);
        let diff = |x: &M2, h: f64| {
            let p = oracle::act(&m, &(z * (x * cx(h, 0.0)).exp()));
            let q = oracle::act(&m, &(z * (x * cx(-h, 0.0)).exp()));
            (p - q) * cx(0.5 / h, 0.0)
        };
        // Richardson: O(h^4)
        let cols: Vec<M2> = oracle::frame()
            .iter()
            .map(|x| {
                oracle::skew(
                    &(phi.adjoint() * (diff(x, h / 2.0) * cx(4.0 / 3.0, 0.0) - diff(x, h) * cx(1.0 / 3.0, 0.0))),
                )
            })
            .collect();
        let s = (0..4).map(|j| oracle::EPS[j] * oracle::metric(&cols[j], &cols[j])).sum::<f64>() / 4.0;
        for j in 0..4 {
            for k in 0..4 {
                let want = if j == k { s * oracle::EPS[j] } else { 0.0 };
                off = off.max((oracle::metric(&cols[j], &cols[k]) - want).abs() / s.abs());
            }
        }
        let ai = (a * z + b).try_inverse().unwrap();
        let di = den.try_inverse().unwrap();
        let d1 = (ai * a * z - di * c * z).determinant();
        let d2 = (ai * b - di * d).determinant();
        dets = dets.max((d1 - cx(s, 0.0)).norm() / s.abs()).max((d2 - cx(s, 0.0)).norm() / s.abs());
        let f = g.conformal_factor(&U2Point::new(z).unwrap()).unwrap();
        lib = lib.max(f.gram_residual).max((f.metric_ratio - s).abs() / s.abs());
        done += 1;
    }
    pass_if(
        off <= 1e-8 && dets <= 1e-8 && lib <= 1e-8,
        format!("50 (g,Z): off-scalar {off:.1e}, determinant forms {dets:.1e}, closed-form tangent {lib:.1e}"),
    )
}

fn invariance() -> Outcome {
    let t = Instant::now();
    let b = |k| maxwell_basis(MaxwellBasisLabel::new(k, Side::L, Sign::Plus)).unwrap();
    let (s0, s1, s2) = (b(0), b(1), b(2));
    let omega: Solution = s0.add(&s1).unwrap();
    let mu: Solution = s1.add(&s2.scale(cx(0.0, 1.0))).unwrap();
    let eigen = Eigen::MinusI;
    // <s0 + s1, s1 + i s2> = <s1, s1> = -6 pi^2 by orthogonality
    let expected = -6.0 * PI2;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut wk, mut wg, mut wb) = (0.0f64, 0.0f64, 0.0f64);
    let mut certified = true;
    for i in 0..20 {
        let g = if i < 10 {
            ConformalElement::random_k(&mut rng)
        } else {
            ConformalElement::random_near_identity(&mut rng, 0.3)
        };
        let after = if i < 10 { OrderSpec::Fixed(12) } else { OrderSpec::adaptive(12) };
        let r = invariance_check(&g, &omega, &mu, eigen, OrderSpec::Fixed(12), after, Exec::default()).unwrap();
        wb = wb.max((r.before.value - cx(expected, 0.0)).norm() / expected.abs());
        let rel = (r.after.value - cx(expected, 0.0)).norm() / expected.abs();
        if i < 10 {
            wk = wk.max(rel);
        } else {
            wg = wg.max(rel);
            certified &= r.after.converged && r.after.estimated_error <= 1e-4 * r.after.value.norm();
        }
    }
    let el = t.elapsed();
    pass_if(
        wk <= 1e-6 && wg <= 1e-3 && wb <= 1e-10 && certified && el < Duration::from_secs(300),
        format!("K rel err {wk:.1e}, generic rel err {wg:.1e}, converged {certified}, {el:.2?}"),
    )
}

fn gram_signs() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_off: f64 = 0.0;
    for (side, sign) in [(Side::L, Sign::Plus), (Side::L, Sign::Minus), (Side::R, Sign::Plus), (Side::R, Sign::Minus)] {
        let labels: Vec<_> = (0..=3).map(|k| MaxwellBasisLabel::new(k, side, sign)).collect();
        let g = gram_matrix(&labels, Exec::default()).unwrap();
        let scale = g.diagonal().iter().map(|d| d.norm()).fold(0.0, f64::max);
        for (i, row) in g.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    let ok = match side {
                        Side::R => v.re > 0.0,
                        Side::L => v.re < 0.0,
                    };
                    if !ok {
                        bad.push(labels[i].to_string());
                    }
                } else {
                    worst_off = worst_off.max(v.norm() / scale);
                }
            }
        }
    }
    pass_if(
        bad.is_empty() && worst_off <= 1e-8,
        format!("wrong-sign diagonals: {bad:?}, max off-diagonal {worst_off:.1e} x scale"),
    )
}

fn richardson_action(x: &M4, w: &FormField, z: &M2) -> FormValue {
    let f = oracle::i22();
    let adj = f * x.adjoint() * f;
    let x1 = (x - adj) * cx(0.5, 0.0);
    let x2 = (x + adj) * cx(0.0, -0.5);
    let d = |y: &M4, h: f64| {
        let fwd = ConformalElement::new((y * cx(-h, 0.0)).exp(), Realization::G1).unwrap();
        let bwd = ConformalElement::new((y * cx(h, 0.0)).exp(), Realization::G1).unwrap();
        (fwd.pullback(w).eval(z).unwrap() - bwd.pullback(w).eval(z).unwrap()) * cx(0.5 / h, 0.0)
    };
    let rich = |y: &M4| {
        let h = 1e-4;
        (d(y, h / 2.0) * cx(4.0, 0.0) - d(y, h)) * cx(1.0 / 3.0, 0.0)
    };
    rich(&x1) + rich(&x2) * cx(0.0, 1.0)
}

fn annihilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pts: Vec<M2> = (0..6).map(|_| haar_u2(&mut rng)).collect();
    let gens = |upper: bool| -> Vec<M4> {
        let mut v = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut m = M4::zeros();
                if upper {
                    m[(i, 2 + j)] = cx(1.0, 0.0);
                } else {
                    m[(2 + i, j)] = cx(1.0, 0.0);
                }
                v.push(m);
            }
        }
        v
    };
    let ratio = |sign: Sign, upper: bool| -> f64 {
        let mut worst: f64 = 0.0;
        for s in lowest_ktype_basis(Side::R, sign).unwrap() {
            let norm = pts.iter().map(|z| s.omega.eval(z).unwrap().norm_inf()).fold(0.0, f64::max);
            for x in gens(upper) {
                for z in &pts {
                    worst = worst.max(richardson_action(&x, &s.omega, z).norm_inf() / norm);
                }
            }
        }
        worst
    };
    let plus = ratio(Sign::Plus, true);
    let minus = ratio(Sign::Minus, false);
    // control: the opposite generators must act nontrivially
    let control = ratio(Sign::Plus, false).min(ratio(Sign::Minus, true));
    pass_if(
        plus <= 1e-4 && minus <= 1e-4 && control > 1e-2,
        format!("p+ on (2,0,2): {plus:.1e}, p- on (2,0,-2): {minus:.1e}, opposite control {control:.2}"),
    )
}

fn branching() -> Outcome {
    let t = Instant::now();
    let n = 40usize;
    let chi = oracle::chi;
    // sum side
    let mut sum = oracle::zero(n);
    for k in 0..=((n - 4) / 2) as i32 {
        for a in chi(k + 2) {
            for b in chi(k) {
                oracle::add(&mut sum, (2 * k + 4) as usize, a + b, 1);
            }
        }
    }
    // rational side: numerator * sum x^2i * y^-2 sum x^2j y^-2j * sum x^2m y^2m
    let num: [(usize, i32, i64); 4] = [(4, 4, 1), (4, 2, 1), (4, 0, 1), (6, 2, -1)];
    let mut rat = oracle::zero(n);
    for (xp, yp, c) in num {
        for i in (0..=n).step_by(2) {
            for j in (0..=n).step_by(2) {
                for m in (0..=n).step_by(2) {
                    let x = xp + i + j + m;
                    if x <= n {
                        oracle::add(&mut rat, x, yp - 2 - j as i32 + m as i32, c);
                    }
                }
            }
        }
    }
    // x^4 sum chi_{2k+2} x^{2k}
    let mut shifted = oracle::zero(n);
    for k in 0..=((n - 4) / 2) as i32 {
        for a in chi(2 * k + 2) {
            oracle::add(&mut shifted, (2 * k + 4) as usize, a, 1);
        }
    }
    let lib_sum = maxw_character_series(n as u32, Sign::Plus).unwrap();
    let lib_rat = rational_side_series(n as u32, Sign::Plus).unwrap();
    let lib_shift = shifted_even_character_series(n as u32, Sign::Plus).unwrap();
    let lib_minus = maxw_character_series(n as u32, Sign::Minus).unwrap();
    let mut mism = Vec::new();
    for x in 0..=n {
        // (1 - x^2) * sum side, in the oracle
        let one_minus: Vec<i64> =
            (0..sum[x].len()).map(|y| sum[x][y] - if x >= 2 { sum[x - 2][y] } else { 0 }).collect();
        for yi in 0..sum[x].len() {
            let y = yi as i32 - oracle::Y0;
            let s = sum[x][yi];
            if s != rat[x][yi]
                || s != lib_sum.coeff(x as u32).coeff(y)
                || rat[x][yi] != lib_rat.coeff(x as u32).coeff(y)
            {
                mism.push(format!("x^{x} y^{y}"));
            }
            if one_minus[yi] != shifted[x][yi] || shifted[x][yi] != lib_shift.coeff(x as u32).coeff(y) {
                mism.push(format!("shifted x^{x} y^{y}"));
            }
            if lib_minus.coeff_x(-(x as i32)).coeff(y) != s {
                mism.push(format!("inverted x^-{x} y^{y}"));
            }
        }
        let at_one: i64 = sum[x].iter().sum();
        let want = if x >= 4 && x % 2 == 0 {
            let k = (x as i64 - 4) / 2;
            (k + 3) * (k + 1)
        } else {
            0
        };
        if at_one != want || lib_sum.coeff(x as u32).at_one() != want {
            mism.push(format!("y=1 at x^{x}"));
        }
    }
    let el = t.elapsed();
    pass_if(
        mism.is_empty() && el < Duration::from_secs(5),
        format!("order {n}: {} mismatches {:?}, {el:.2?}", mism.len(), mism.iter().take(3).collect::<Vec<_>>()),
    )
}

fn fd_maxwell(f: &dyn Fn([f64; 4]) -> EH, p: [f64; 4], h: f64) -> f64 {
    let d: Vec<EH> = (0..4)
        .map(|mu| {
            let (mut a, mut b) = (p, p);
            a[mu] += h;
            b[mu] -= h;
            let (fa, fb) = (f(a), f(b));
            EH {
                e: std::array::from_fn(|i| (fa.e[i] - fb.e[i]) / (2.0 * h)),
                h: std::array::from_fn(|i| (fa.h[i] - fb.h[i]) / (2.0 * h)),
            }
        })
        .collect();
    let div_e: C = (0..3).map(|i| d[i].e[i]).sum();
    let div_h: C = (0..3).map(|i| d[i].h[i]).sum();
    let curl = |g: &dyn Fn(&EH) -> [C; 3]| -> [C; 3] {
        [g(&d[1])[2] - g(&d[2])[1], g(&d[2])[0] - g(&d[0])[2], g(&d[0])[1] - g(&d[1])[0]]
    };
    let ce = curl(&|x: &EH| x.e);
    let ch = curl(&|x: &EH| x.h);
    let mut r = div_e.norm().max(div_h.norm());
    for i in 0..3 {
        // dE/dt = -curl H, dH/dt = curl E
        r = r.max((d[3].e[i] + ch[i]).norm()).max((d[3].h[i] - ce[i]).norm());
    }
    r
}

fn classical() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut star): (f64, f64) = (0.0, 0.0);
    for (side, sign) in [(Side::L, Sign::Plus), (Side::L, Sign::Minus), (Side::R, Sign::Plus), (Side::R, Sign::Minus)] {
        for k in 0..=2 {
            let s = maxwell_basis(MaxwellBasisLabel::new(k, side, sign)).unwrap();
            let starred = s.omega.star().unwrap();
            let f = |p: [f64; 4]| extract_eh(&s.omega, &MinkowskiPoint::from_array(p)).unwrap();
            for _ in 0..50 {
                let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
                let here = f(p);
                let scale = here.max_abs();
                worst = worst.max(fd_maxwell(&f, p, 1e-4) / scale);
                let st = extract_eh(&starred, &MinkowskiPoint::from_array(p)).unwrap();
                // E -> H slot, H -> -E slot: star(E, H) = (-H, E)
                let want = EH { e: here.h.map(|z| -z), h: here.e };
                star = star.max(st.sub(&want).max_abs() / scale);
            }
        }
    }
    pass_if(
        worst <= 1e-4 && star <= 1e-12,
        format!("600 evaluations: vacuum residual {worst:.1e} x scale, star duality {star:.1e}"),
    )
}

fn planewaves() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut cons, mut hand, mut cone): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut waves = vec![([0.0, 0.0, 1.0], 1.0, [1.0, 0.0, 0.0])];
    for _ in 0..30 {
        let u: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let e = oracle::cross(u.map(|v| cx(v, 0.0)), r.map(|v| cx(v, 0.0))).map(|z| z.re);
        waves.push((u, un, e));
        waves.push((u, -un, e));
    }
    for (u, freq, e) in waves {
        let w = PlaneWave::new(u, freq, e.map(|v| cx(v, 0.0))).unwrap();
        let uc = u.map(|v| cx(v, 0.0));
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let en = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = un * en;
        let ue = oracle::cross(uc, w.e0);
        let uh = oracle::cross(uc, w.h0);
        for i in 0..3 {
            cons = cons.max((ue[i] + w.h0[i] * freq).norm() / scale);
            cons = cons.max((uh[i] - w.e0[i] * freq).norm() / scale);
        }
        let dot = |a: [C; 3]| (0..3).map(|i| a[i] * uc[i]).sum::<C>().norm() / scale;
        cons = cons.max(dot(w.e0)).max(dot(w.h0)).max((freq * freq - un * un).abs() / (un * un));
        if freq > 0.0 {
            let hn = w.h0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let d = oracle::det3(u.map(|v| v / un), w.h0.map(|z| z.re / hn), e.map(|v| v / en));
            hand = hand.max((d - 1.0).abs());
        }
        let x: f64 = rng.gen_range(-3.0..3.0);
        let y = M2::identity() * cx(x, 0.0);
        let v = light_cone_functional([u[0], u[1], u[2], freq.abs()], &y).unwrap();
        cone = cone.max((v - cx(freq.abs() * x, 0.0)).norm() / (un * x.abs()).max(1.0));
    }
    pass_if(
        cons <= 1e-12 && hand <= 1e-12 && cone <= 1e-12,
        format!("61 waves: constraints {cons:.1e}, handedness {hand:.1e}, light cone {cone:.1e}"),
    )
}

fn frequencies() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pts: Vec<M2> = (0..6).map(|_| haar_u2(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    let mut wrong = Vec::new();
    for (sign, s) in [(Sign::Plus, -1i64), (Sign::Minus, 1)] {
        for k in 0..=5u32 {
            let want = s * (2 * k as i64 + 4);
            let theta = 0.05;
            let a = C::from_polar(1.0, theta);
            // pi(g_a) w = (g_a^{-1})^* w, g_a^{-1} = diag(a^{-1} I, a I)
            let ginv = M4::from_diagonal(&nalgebra::Vector4::new(a.inv(), a.inv(), a, a));
            let g = ConformalElement::new(ginv, Realization::G1).unwrap();
            let w = maxwell_basis(MaxwellBasisLabel::new(k, Side::R, sign)).unwrap().omega;
            let moved = g.pullback(&w);
            let (mut num, mut den) = (cx(0.0, 0.0), 0.0);
            let mut pairs = Vec::new();
            for z in &pts {
                let (x, y) = (w.eval(z).unwrap(), moved.eval(z).unwrap());
                for (p, q) in x.coeffs().iter().zip(y.coeffs()) {
                    num += p.conj() * q;
                    den += p.norm_sqr();
                }
                pairs.push((x, y));
            }
            let n = (num / den).arg() / theta;
            let lam = C::from_polar(1.0, want as f64 * theta);
            let scale = pairs.iter().map(|(x, _)| x.norm_inf()).fold(0.0, f64::max);
            let res = pairs.iter().map(|(x, y)| (*y - *x * lam).norm_inf()).fold(0.0, f64::max) / scale;
            worst = worst.max((n - want as f64).abs()).max(res);
            if n.round() as i64 != want {
                wrong.push(format!("{k}{sign:?}: {n:.3}"));
            }
        }
    }
    pass_if(
        wrong.is_empty() && worst <= 1e-8,
        format!("exponents -(2k+4) / +(2k+4) for k <= 5, max error {worst:.1e}, wrong {wrong:?}"),
    )
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 13] = [
        ("norm formula", norm_formula),
        ("Schur normalization", schur),
        ("structure equations and star table", structure),
        ("star eigen-classification", classification),
        ("embedding conformal factor", embedding_factor),
        ("group conformal factor", group_factor),
        ("pairing invariance", invariance),
        ("Gram sign pattern", gram_signs),
        ("p+/p- annihilation", annihilation),
        ("character identity", branching),
        ("classical Maxwell equations", classical),
        ("plane waves and light cone", planewaves),
        ("S cap K frequency signs", frequencies),
    ];
    let mut failed = 0;
    for (name, f) in checks {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome { ok: false, summary: format!("panicked: {}", msg.unwrap_or_default()) }
        });
        if !out.ok {
            failed += 1;
        }
        println!("[{}] {name}: {} ({:.2?})", if out.ok { "PASS" } else { "FAIL" }, out.summary, t.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
