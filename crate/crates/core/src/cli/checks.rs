//! The individual checks of each verification suite.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Check, SuiteConfig};
use crate::branching::dual_pair_decomposition_check;
use crate::conformal::minkowski::{eh_from_two_form, minkowski_pullback, two_form_from_eh};
use crate::conformal::planewave::s_cap_nbar_block;
use crate::conformal::{
    embed_minkowski, embedding_conformal_factor, extract_eh, infinitesimal_action, light_cone_functional,
    maxwell_residual_fd, minkowski_star, p_generators, s_cap_k_character, ConformalElement, MinkowskiPoint, PlaneWave,
    DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::fields::{
    eigen_residuals, j_classification, lowest_ktype_basis, maxwell_basis, MaxwellBasisLabel, Side, Sign, Solution,
};
use crate::geometry::forms::{basis_masks, hodge_star, D_COFRAME};
use crate::geometry::frame::metric_on_tangent;
use crate::geometry::quadrature::{haar_u2, SU2Grid};
use crate::geometry::FormValue;
use crate::linalg::{c, Mat2, C64};
use crate::pairing::{expected_norm_pi2, gram_matrix, invariance_check, OrderSpec};
use crate::par::Exec;
use crate::rep_core::psi;

const PI2: f64 = PI * PI;
/// Central-difference step for the Minkowski field derivatives.
const FD_STEP: f64 = 1e-4;

fn families() -> [(Side, Sign); 4] {
    [(Side::L, Sign::Plus), (Side::L, Sign::Minus), (Side::R, Sign::Plus), (Side::R, Sign::Minus)]
}

fn family_name(side: Side, sign: Sign) -> String {
    MaxwellBasisLabel::new(0, side, sign).to_string()[1..].to_string()
}

fn rng(cfg: &SuiteConfig, salt: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed_for(salt))
}

fn or_failed(id: &str, description: &str, r: Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::failed(id, description, &e)])
}

/// Checks of one suite.
pub fn run(suite: &str, cfg: &SuiteConfig, exec: Exec) -> Vec<Check> {
    match suite {
        "geometry" => [structure(cfg), embedding(cfg)].concat(),
        "ktypes" => schur(cfg, exec),
        "maxwell" => [classification(cfg), classical(cfg)].concat(),
        "conformal" => [conformal_factor(cfg), frequencies(cfg)].concat(),
        "pairing" => [gram_checks(cfg, exec), invariance(cfg, exec)].concat(),
        "lie-action" => annihilation(cfg),
        "branching" => branching(cfg),
        "planewave" => planewaves(cfg),
        _ => vec![Check::failed(suite, "unknown suite", &Error::InvalidLabel(suite.into()))],
    }
}

fn structure(cfg: &SuiteConfig) -> Vec<Check> {
    let tol = cfg.tol("structure");
    let want = [
        FormValue::alpha2(1, 2) * c(-2.0, 0.0),
        FormValue::alpha2(0, 2) * c(2.0, 0.0),
        FormValue::alpha2(0, 1) * c(-2.0, 0.0),
        FormValue::zero(2),
    ];
    let d_err = (0..4).map(|i| (D_COFRAME[i] - want[i]).norm_inf()).fold(0.0, f64::max);
    // star(a_ij) = s a_kl
    let table: [(u8, u8, f64); 6] = [
        (0b0011, 0b1100, 1.0),
        (0b0101, 0b1010, -1.0),
        (0b1001, 0b0110, -1.0),
        (0b0110, 0b1001, 1.0),
        (0b1010, 0b0101, 1.0),
        (0b1100, 0b0011, -1.0),
    ];
    let mut star_err: f64 = 0.0;
    let mut sq_err: f64 = 0.0;
    for (from, to, s) in table {
        match hodge_star(&FormValue::basis(from)) {
            Ok(v) => star_err = star_err.max((v - FormValue::basis(to) * c(s, 0.0)).norm_inf()),
            Err(e) => return vec![Check::failed("geometry.star.table", "star table", &e)],
        }
    }
    for m in basis_masks(2) {
        let b = FormValue::basis(*m);
        let ss = hodge_star(&b).and_then(|v| hodge_star(&v));
        match ss {
            Ok(v) => sq_err = sq_err.max((v + b).norm_inf()),
            Err(e) => return vec![Check::failed("geometry.star.square", "J^2 = -1", &e)],
        }
    }
    vec![
        Check::error(
            "geometry.structure.d_alpha",
            "d alpha_1 = -2 a23, d alpha_2 = 2 a13, d alpha_3 = -2 a12, d alpha_4 = 0",
            d_err,
            tol,
        ),
        Check::error("geometry.star.table", "six-entry star table on 2-forms", star_err, tol),
        Check::error("geometry.star.square", "J^2 = -1 on 2-forms", sq_err, tol),
    ]
}

fn skew_part(m: &Mat2) -> Mat2 {
    (m - m.adjoint()) * c(0.5, 0.0)
}

fn embedding(cfg: &SuiteConfig) -> Vec<Check> {
    let desc = "embedding conformal factor against finite-difference metric ratio";
    let res = (|| -> Result<Vec<Check>> {
        let mut rng = rng(cfg, "embedding");
        let n = cfg.samples_or(100);
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let p = MinkowskiPoint::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)));
            let f = embed_minkowski(&p)?;
            let finv = f.matrix().adjoint();
            let want = embedding_conformal_factor(&p);
            for mu in 0..4 {
                let a = embed_minkowski(&p.shifted(mu, h))?;
                let b = embed_minkowski(&p.shifted(mu, -h))?;
                let v = skew_part(&(finv * (a.matrix() - b.matrix()) * c(0.5 / h, 0.0)));
                let eps = if mu == 3 { 1.0 } else { -1.0 };
                let got = metric_on_tangent(&v, &v)? / eps;
                worst = worst.max((got - want).abs() / want);
            }
        }
        let origin = embedding_conformal_factor(&MinkowskiPoint::default());
        Ok(vec![
            Check::error("geometry.embedding.factor", desc, worst, cfg.tol("embedding"))
                .with_detail(format!("{n} points")),
            Check::value("geometry.embedding.origin", "conformal factor at the origin", origin, 4.0, 0.0, ""),
        ])
    })();
    or_failed("geometry.embedding.factor", desc, res)
}

fn schur(cfg: &SuiteConfig, exec: Exec) -> Vec<Check> {
    let tol = cfg.tol("schur");
    let mut out = Vec::new();
    for k in 0..=cfg.k_max.max(6) {
        let id = format!("ktypes.schur.k{k}");
        let desc = "int |psi_(k,l)|^2 dmu = 1/(k+1)";
        let r = (|| -> Result<f64> {
            let grid = SU2Grid::new(SU2Grid::default_order(k))?;
            let mut worst: f64 = 0.0;
            for l in [k as i32, k as i32 + 2, -(k as i32) - 2] {
                let v = grid.integrate(exec, |u| Ok(c(psi(k, l, u)?.norm_sqr(), 0.0)))?;
                worst = worst.max((v.re - 1.0 / (k as f64 + 1.0)).abs().max(v.im.abs()));
            }
            Ok(worst)
        })();
        out.push(match r {
            Ok(e) => Check::error(id, desc, e, tol),
            Err(e) => Check::failed(id, desc, &e),
        });
    }
    out
}

fn classification(cfg: &SuiteConfig) -> Vec<Check> {
    let tol = cfg.tol("classification");
    let samples = cfg.samples_or(25);
    let mut out = Vec::new();
    // psi-based families through the classifier
    let mut wrong = Vec::new();
    let mut count = 0;
    let mut err = None;
    for k in 0..=cfg.k_max {
        let ki = k as i32;
        let mut l = -(ki + 6);
        while l <= ki + 6 {
            count += 1;
            match j_classification(k, l, samples, cfg.seed_for("classification")) {
                Ok(j) => {
                    let res = j.residuals;
                    let scale = res.norm.max(f64::MIN_POSITIVE);
                    let plus = res.minus_i <= tol * scale;
                    let minus = res.plus_i <= tol * scale;
                    let expect_maxwell = l.abs() == ki + 2;
                    let ok = if expect_maxwell {
                        // l = k + 2 is the -i eigenspace, l = -(k + 2) the +i one
                        if l > 0 {
                            minus && !plus
                        } else {
                            plus && !minus
                        }
                    } else {
                        !plus && !minus
                    };
                    if !ok {
                        wrong.push(format!("(k={k}, l={l})"));
                    }
                }
                Err(e) => err = Some(e),
            }
            l += 2;
        }
    }
    if let Some(e) = err {
        out.push(Check::failed("maxwell.classification.side_l", "star eigen-classification of d(psi alpha_f)", &e));
    } else {
        out.push(Check::flag(
            "maxwell.classification.side_l",
            "star eigen-classification of d(psi alpha_f) for parity-valid |l| <= k+6",
            wrong.is_empty(),
            if wrong.is_empty() { format!("{count} labels") } else { format!("misclassified: {}", wrong.join(" ")) },
        ));
    }
    // side-R families by their own eigen-residuals
    let mut rng = rng(cfg, "classification-r");
    let pts: Vec<Mat2> = (0..samples).map(|_| haar_u2(&mut rng)).collect();
    for sign in [Sign::Plus, Sign::Minus] {
        let id = format!("maxwell.classification.side_r{}", if sign == Sign::Plus { "+" } else { "-" });
        let desc = "side-R basis solutions lie in the stated star eigenspace";
        let r = (|| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for k in 0..=cfg.k_max {
                let l = MaxwellBasisLabel::new(k, Side::R, sign);
                let s = maxwell_basis(l)?;
                let res = eigen_residuals(&s.omega, &pts, Exec::default())?;
                worst = worst.max(res.residual(l.eigen().opposite()) / res.norm);
                if res.residual(l.eigen()) < 0.5 * res.norm {
                    return Ok(f64::INFINITY);
                }
            }
            Ok(worst)
        })();
        out.push(match r {
            Ok(e) => Check::error(id, desc, e, tol),
            Err(e) => Check::failed(id, desc, &e),
        });
    }
    out
}

fn classical(cfg: &SuiteConfig) -> Vec<Check> {
    let n = cfg.samples_or(50);
    let k_cap = cfg.k_max.min(2);
    let mut out = Vec::new();
    for (side, sign) in families() {
        let fam = family_name(side, sign);
        let id = format!("maxwell.classical.vacuum.{fam}");
        let desc = "Minkowski pullback satisfies the vacuum equations (central differences)";
        let star_id = format!("maxwell.classical.star.{fam}");
        let star_desc = "pullback of the star equals the Minkowski star (E, H) -> (-H, E)";
        let r = (|| -> Result<(f64, f64)> {
            let mut rng = rng(cfg, &id);
            let mut worst: f64 = 0.0;
            let mut star_worst: f64 = 0.0;
            for k in 0..=k_cap {
                let s = maxwell_basis(MaxwellBasisLabel::new(k, side, sign))?;
                let starred = s.omega.star()?;
                for _ in 0..n {
                    let p = MinkowskiPoint::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)));
                    let eh = extract_eh(&s.omega, &p)?;
                    let scale = eh.max_abs().max(f64::MIN_POSITIVE);
                    let r = maxwell_residual_fd(|q| extract_eh(&s.omega, q), &p, FD_STEP)?;
                    worst = worst.max(r.max() / scale);
                    let direct = eh_from_two_form(&minkowski_pullback(&starred, &p)?)?;
                    let via = eh_from_two_form(&minkowski_star(&two_form_from_eh(&eh))?)?;
                    star_worst = star_worst.max(direct.sub(&via).max_abs() / scale);
                }
            }
            Ok((worst, star_worst))
        })();
        match r {
            Ok((a, b)) => {
                out.push(
                    Check::error(id, desc, a, cfg.tol("maxwell")).with_detail(format!("k <= {k_cap}, {n} points")),
                );
                out.push(Check::error(star_id, star_desc, b, cfg.tol("star")));
            }
            Err(e) => {
                out.push(Check::failed(id, desc, &e));
                out.push(Check::failed(star_id, star_desc, &e));
            }
        }
    }
    out
}

/// `exp(eps X)` for a Gaussian `X` in the Lie algebra.
fn generic_element(rng: &mut ChaCha8Rng, eps: f64) -> ConformalElement {
    ConformalElement::random_near_identity(rng, eps)
}

fn conformal_factor(cfg: &SuiteConfig) -> Vec<Check> {
    let desc = "pulled-back frame Gram is scalar * diag(-1,-1,-1,1), scalar = both determinant forms";
    let r = (|| -> Result<Vec<Check>> {
        let mut rng = rng(cfg, "factor");
        let n = cfg.samples_or(50);
        let (mut gram, mut d1, mut d2) = (0.0f64, 0.0f64, 0.0f64);
        let mut done = 0;
        let mut tries = 0;
        while done < n {
            tries += 1;
            if tries > 20 * n {
                return Err(Error::Domain("could not draw well-conditioned (g, Z) pairs".into()));
            }
            let g = generic_element(&mut rng, 0.8);
            let z = crate::geometry::U2Point::new(haar_u2(&mut rng))?;
            let f = match g.conformal_factor(&z) {
                Ok(f) => f,
                Err(Error::NearSingular { .. }) => continue,
                Err(e) => return Err(e),
            };
            let s = f.metric_ratio;
            gram = gram.max(f.gram_residual);
            d1 = d1.max((f.det_first - c(s, 0.0)).norm() / s.abs());
            d2 = d2.max((f.det_second - c(s, 0.0)).norm() / s.abs());
            done += 1;
        }
        let tol = cfg.tol("factor");
        Ok(vec![
            Check::error("conformal.factor.gram", desc, gram, tol).with_detail(format!("{n} pairs")),
            Check::error("conformal.factor.det_first", "scalar against det((AZ+B)^-1 AZ - (CZ+D)^-1 CZ)", d1, tol),
            Check::error("conformal.factor.det_second", "scalar against det((AZ+B)^-1 B - (CZ+D)^-1 D)", d2, tol),
        ])
    })();
    or_failed("conformal.factor.gram", desc, r)
}

fn frequencies(cfg: &SuiteConfig) -> Vec<Check> {
    let tol = cfg.tol("frequency");
    let mut rng = rng(cfg, "frequency");
    let pts: Vec<Mat2> = (0..cfg.samples_or(6)).map(|_| haar_u2(&mut rng)).collect();
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for k in 0..=cfg.k_max {
            let label = MaxwellBasisLabel::new(k, Side::R, sign);
            let id = format!("conformal.frequency.{label}");
            let desc = "S cap K character exponent of the basis solution";
            let want = -(sign.as_i32() as i64) * (2 * k as i64 + 4);
            let theta = 0.5 / (2.0 * k as f64 + 4.0);
            let r = maxwell_basis(label).and_then(|s| s_cap_k_character(&s.omega, theta, &pts));
            out.push(match r {
                Ok(fit) => {
                    let err = fit.integrality.max(fit.eigen_residual);
                    let mut ch = Check::value(&id, desc, fit.exponent, want as f64, tol, "exponent");
                    ch.passed = ch.passed && fit.rounded == want && err <= tol;
                    ch.with_detail(format!("eigen residual {:.3e}", fit.eigen_residual))
                }
                Err(e) => Check::failed(id, desc, &e),
            });
        }
    }
    out
}

fn gram_checks(cfg: &SuiteConfig, exec: Exec) -> Vec<Check> {
    let mut out = Vec::new();
    for (side, sign) in families() {
        let fam = family_name(side, sign);
        let labels: Vec<MaxwellBasisLabel> = (0..=cfg.k_max).map(|k| MaxwellBasisLabel::new(k, side, sign)).collect();
        let g = match gram_matrix(&labels, exec) {
            Ok(g) => g,
            Err(e) => {
                out.push(Check::failed(format!("pairing.gram.{fam}"), "Gram matrix", &e));
                continue;
            }
        };
        let diag = g.diagonal();
        let scale = diag.iter().map(|d| d.norm()).fold(0.0, f64::max);
        for (k, d) in diag.iter().enumerate() {
            let label = labels[k];
            let expected = expected_norm_pi2(k as u32);
            let v = d.re / PI2;
            if side == Side::L {
                let mut ch = Check::value(
                    format!("pairing.norm.{label}"),
                    "<w, w> = -(4k+8)/(k+1) pi^2",
                    v,
                    expected,
                    cfg.tol("norm"),
                    "pi^2",
                )
                .with_raw(d.re);
                ch.passed = ch.passed && d.im.abs() <= cfg.tol("norm") * d.norm();
                out.push(ch);
            }
            let positive = side == Side::R;
            let ok = if positive { d.re > 0.0 } else { d.re < 0.0 };
            out.push(
                Check::flag(
                    format!("pairing.sign.{label}"),
                    if positive { "Gram diagonal positive" } else { "Gram diagonal negative" },
                    ok,
                    format!("{v:.12} pi^2"),
                )
                .with_raw(d.re),
            );
        }
        out.push(
            Check::error(
                format!("pairing.offdiag.{fam}"),
                "off-diagonal Gram entries relative to the diagonal scale",
                g.max_off_diagonal() / scale,
                cfg.tol("offdiag"),
            )
            .with_detail(format!("order {}, k <= {}", g.quadrature_order, cfg.k_max)),
        );
    }
    out
}

fn invariance(cfg: &SuiteConfig, exec: Exec) -> Vec<Check> {
    let desc_k = "<g*w, g*m> = <w, m> for g in K";
    let desc_g = "<g*w, g*m> = <w, m> for generic g near the identity (adaptive quadrature)";
    let r = (|| -> Result<Vec<Check>> {
        let b = |k| maxwell_basis(MaxwellBasisLabel::new(k, Side::L, Sign::Plus));
        let (s0, s1, s2) = (b(0)?, b(1)?, b(2)?);
        let omega: Solution = s0.add(&s1)?;
        let mu: Solution = s1.add(&s2.scale(c(0.0, 1.0)))?;
        let eigen = MaxwellBasisLabel::new(0, Side::L, Sign::Plus).eigen();
        let base = cfg.order.map(|o| o as usize).unwrap_or(SU2Grid::default_order(2));
        let n = cfg.samples_or(10);
        let mut rng = rng(cfg, "invariance");
        let (mut wk, mut wg) = (0.0f64, 0.0f64);
        let mut unconverged = 0;
        let mut max_order = 0;
        for _ in 0..n {
            let g = ConformalElement::random_k(&mut rng);
            let r = invariance_check(&g, &omega, &mu, eigen, OrderSpec::Fixed(base), OrderSpec::Fixed(base), exec)?;
            wk = wk.max(r.rel_error);
        }
        for _ in 0..n {
            let g = generic_element(&mut rng, 0.3);
            let r = invariance_check(&g, &omega, &mu, eigen, OrderSpec::Fixed(base), OrderSpec::adaptive(base), exec)?;
            wg = wg.max(r.rel_error);
            max_order = max_order.max(r.after.quadrature_order);
            if !r.after.converged {
                unconverged += 1;
            }
        }
        let mut generic = Check::error("pairing.invariance.generic", desc_g, wg, cfg.tol("invariance_generic"))
            .with_detail(format!("{n} elements, max order {max_order}, {unconverged} unconverged"));
        generic.passed = generic.passed && unconverged == 0;
        Ok(vec![
            Check::error("pairing.invariance.k", desc_k, wk, cfg.tol("invariance_k"))
                .with_detail(format!("{n} elements")),
            generic,
        ])
    })();
    or_failed("pairing.invariance.k", desc_k, r)
}

fn annihilation(cfg: &SuiteConfig) -> Vec<Check> {
    let tol = cfg.tol("annihilation");
    let mut rng = rng(cfg, "annihilation");
    let pts: Vec<Mat2> = (0..cfg.samples_or(8)).map(|_| haar_u2(&mut rng)).collect();
    let mut out = Vec::new();
    for (sign, plus, name) in [(Sign::Plus, true, "p_plus.2,0,2"), (Sign::Minus, false, "p_minus.2,0,-2")] {
        let id = format!("lie-action.annihilation.{name}");
        let desc = "d pi(X) w = 0 on the lowest K-type (Richardson finite differences)";
        let r = (|| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for s in lowest_ktype_basis(Side::R, sign)? {
                let norm = pts.iter().map(|z| s.omega.eval(z).map(|v| v.norm_inf())).collect::<Result<Vec<_>>>()?;
                let norm = norm.into_iter().fold(0.0, f64::max);
                for x in p_generators(plus) {
                    let d = infinitesimal_action(&x, &s.omega, DEFAULT_STEP)?;
                    for z in &pts {
                        worst = worst.max(d.eval(z)?.norm_inf() / norm);
                    }
                }
            }
            Ok(worst)
        })();
        out.push(match r {
            Ok(e) => {
                Check::error(id, desc, e, tol).with_detail(format!("4 generators x 3 solutions, {} points", pts.len()))
            }
            Err(e) => Check::failed(id, desc, &e),
        });
    }
    out
}

fn branching(cfg: &SuiteConfig) -> Vec<Check> {
    let n = cfg.order.unwrap_or(40);
    let mut out = Vec::new();
    for (sign, name) in [(Sign::Plus, "plus"), (Sign::Minus, "minus")] {
        let id = format!("branching.identity.{name}");
        let desc = "sum side = rational side = K-type side = dual-pair side; y = 1 gives (k+3)(k+1)";
        out.push(match dual_pair_decomposition_check(n, sign) {
            Ok(r) => {
                let first = [
                    r.rational_mismatch,
                    r.division_mismatch,
                    r.ktype_mismatch,
                    r.shifted_mismatch,
                    r.dual_pair_mismatch,
                    r.dimension_mismatch,
                ]
                .into_iter()
                .flatten()
                .min();
                let detail = match first {
                    None if r.passed() => format!("exact match to x^{n}"),
                    None => format!("symmetric {}, lowest order {:?}", r.y_symmetric, r.lowest_order),
                    Some(j) => format!("first mismatch at order {j}"),
                };
                Check::flag(id, desc, r.passed(), detail)
            }
            Err(e) => Check::failed(id, desc, &e),
        });
    }
    out
}

fn planewaves(cfg: &SuiteConfig) -> Vec<Check> {
    let tol = cfg.tol("planewave");
    let desc = "plane-wave constraint system and handedness";
    let r = (|| -> Result<Vec<Check>> {
        let mut rng = rng(cfg, "planewave");
        let n = cfg.samples_or(50);
        let (mut cons, mut hand, mut cone) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            let u: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let un = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let freq = if i % 2 == 0 { un } else { -un };
            let r: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let proj = (r[0] * u[0] + r[1] * u[1] + r[2] * u[2]) / (un * un);
            let e0: [C64; 3] = std::array::from_fn(|j| c(r[j] - proj * u[j], 0.0));
            let w = PlaneWave::new(u, freq, e0)?;
            cons = cons.max(w.constraints().max());
            hand = hand.max((w.triad_determinant()? - 1.0).abs());
            let x: f64 = rng.gen_range(-2.0..2.0);
            let z = [u[0], u[1], u[2], un];
            let v = light_cone_functional(z, &s_cap_nbar_block(x))?;
            cone = cone.max((v - c(un * x, 0.0)).norm() / (un * x.abs()).max(1.0));
        }
        Ok(vec![
            Check::error("planewave.constraints", desc, cons, tol).with_detail(format!("{n} waves")),
            Check::error("planewave.handedness", "(u, H0, sgn(freq) E0) is right-handed", hand, tol),
            Check::error("planewave.light_cone", "light-cone functional on x I equals freq * x", cone, tol),
        ])
    })();
    or_failed("planewave.constraints", desc, r)
}
