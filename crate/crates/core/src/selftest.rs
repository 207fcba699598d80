//! Built-in verification suite: each check recomputes a published or
//! derived quantity and compares it with an independent oracle.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::cm_order::{frobenius_alpha, maximal_order_form, weil_counts, QuadInt};
use crate::emit::{write_obj, write_ply};
use crate::frobcheck::verify_phi_reduction;
use crate::hopfmap::{embedding_numerics, EmbeddingCtx};
use crate::lift::{build_scene, level_context, mult_group_points, EmbedOptions};
use crate::modclass::find_embedding_class;
use crate::spherecurve::{curve_area, curve_length, solve_curve, SphereCurveError};
use crate::weierstrass::{count_points_limited, torsion_profile, validate_curve, CurveParams};

/// The five curves drawn in the gallery.
pub const GALLERY: [(i64, i64, u64); 5] = [(3, 0, 5), (0, 3, 7), (5, 7, 11), (1, 3, 11), (1, 1, 5)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({}) [{:.2}s]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds
        )
    }
}

type Check = Result<String, String>;

fn timed(id: u32, title: &str, budget: Option<f64>, f: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let r = f();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = budget {
        if seconds > b {
            passed = false;
            detail = format!("{detail}; runtime {seconds:.2}s exceeds {b}s");
        }
    }
    CriterionResult { id, title: title.to_string(), passed, detail, seconds }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curve(a: i64, b: i64, p: u64) -> Result<CurveParams, String> {
    validate_curve(a, b, p).map_err(|e| e.to_string())
}

fn count_both(c: &CurveParams, n: u32, limit: u64) -> Result<(u64, u64), String> {
    let frob = frobenius_alpha(c).map_err(|e| e.to_string())?;
    let norm = weil_counts(frob.a_p, c.p(), n).map_err(|e| e.to_string())?[n as usize - 1];
    let brute = count_points_limited(c, n, limit).map_err(|e| e.to_string())?;
    Ok((norm, brute))
}

fn structure_check(c: &CurveParams, n: u32, expect: (u64, u64), limit: u64) -> Result<(), String> {
    let lc = level_context(c, n, limit).map_err(|e| e.to_string())?;
    let got = (lc.level.d1, lc.level.d2);
    ensure(got == expect, || format!("{c} n={n}: structure {got:?}, expected {expect:?}"))?;
    let torsion = torsion_profile(c, n, 12, limit).map_err(|e| e.to_string())?;
    for m in 1..=12u64 {
        let want = m.gcd(&got.0) * m.gcd(&got.1);
        ensure(torsion[m as usize - 1] == want, || {
            format!("{c} n={n}: #E[{m}] = {}, lattice predicts {want}", torsion[m as usize - 1])
        })?;
    }
    Ok(())
}

pub fn criterion_1(limit: u64) -> Vec<CriterionResult> {
    [(3, 0, 5, 640u64), (0, 3, 7, 2379)]
        .iter()
        .map(|&(a, b, p, want)| {
            timed(1, &format!("point count y^2 = x^3+{a}x+{b} over F_{p}^4"), Some(5.0), || {
                let c = curve(a, b, p)?;
                let (norm, brute) = count_both(&c, 4, limit)?;
                ensure(norm == want && brute == want, || {
                    format!("norm {norm}, brute {brute}, expected {want}")
                })?;
                Ok(format!("{want} points"))
            })
        })
        .collect()
}

pub fn criterion_2(limit: u64) -> CriterionResult {
    timed(2, "group structures vs torsion oracle", None, || {
        let c5 = curve(3, 0, 5)?;
        let c7 = curve(0, 3, 7)?;
        structure_check(&c5, 1, (1, 10), limit)?;
        structure_check(&c5, 2, (2, 10), limit)?;
        structure_check(&c7, 2, (1, 39), limit)?;
        Ok("(1,10), (2,10), (1,39)".into())
    })
}

pub fn criterion_3() -> CriterionResult {
    timed(3, "Frobenius root alpha", None, || {
        let mut out = Vec::new();
        for (a, b, p, want) in [(3, 0, 5, "-2 + 1*i"), (0, 3, 7, "-2 + 1*w")] {
            let c = curve(a, b, p)?;
            let f = frobenius_alpha(&c).map_err(|e| e.to_string())?;
            let form = maximal_order_form(&f.alpha.order);
            ensure(form.to_string() == want, || format!("{c}: alpha = {form}, expected {want}"))?;
            ensure(f.alpha.to_complex().im > 0.0, || "Im alpha must be positive".into())?;
            let z = form.xi() * form.b as f64 + form.a as f64;
            ensure((z - f.alpha.to_complex()).norm() < 1e-12, || "maximal-order form mismatch".into())?;
            out.push(form.to_string());
        }
        Ok(out.join(", "))
    })
}

pub fn criterion_4(limit: u64) -> CriterionResult {
    timed(4, "norm identity on gallery curves, n <= 6", Some(60.0), || {
        let mut brute_checked = 0;
        for &(a, b, p) in &GALLERY {
            let c = curve(a, b, p)?;
            let f = frobenius_alpha(&c).map_err(|e| e.to_string())?;
            // weil_counts fails on any N(α^n − 1) ≠ p^n + 1 − a_n
            let counts = weil_counts(f.a_p, p, 6).map_err(|e| e.to_string())?;
            for n in 1..=6u32 {
                if p.pow(n) > limit {
                    continue;
                }
                let brute = count_points_limited(&c, n, limit).map_err(|e| e.to_string())?;
                ensure(brute == counts[n as usize - 1], || {
                    format!("{c} n={n}: brute {brute}, norm {}", counts[n as usize - 1])
                })?;
                brute_checked += 1;
            }
        }
        Ok(format!("5 curves, {brute_checked} brute-force levels"))
    })
}

pub fn criterion_5(limit: u64) -> CriterionResult {
    timed(5, "derived levels F_3125 and F_625", None, || {
        let c = curve(3, 0, 5)?;
        let f = frobenius_alpha(&c).map_err(|e| e.to_string())?;
        let beta = f
            .alpha
            .pow(5)
            .and_then(|a| a.sub(&QuadInt::one(a.order)))
            .map_err(|e| e.to_string())?;
        ensure((beta.to_complex() - Complex64::new(37.0, 41.0)).norm() < 1e-9, || {
            format!("alpha^5 - 1 = {}", beta.to_complex())
        })?;
        let (norm, brute) = count_both(&c, 5, limit)?;
        ensure(norm == 3050 && brute == 3050, || format!("norm {norm}, brute {brute}"))?;
        structure_check(&c, 5, (1, 3050), limit)?;
        structure_check(&c, 4, (8, 80), limit)?;
        Ok("3050 = Z/3050, 640 = Z/8 x Z/80".into())
    })
}

pub fn criterion_6() -> CriterionResult {
    timed(6, "multiplicative group demo", None, || {
        for (n, want) in [(2u32, 8u64), (3, 26)] {
            let g = mult_group_points(3, n).map_err(|e| e.to_string())?;
            ensure(g.order == want && g.points.len() as u64 == want, || {
                format!("F_3^{n}: {} points", g.order)
            })?;
            let k = g.frobenius_order();
            ensure(n % k == 0, || format!("Frobenius order {k} does not divide {n}"))?;
        }
        Ok("8 and 26 points".into())
    })
}

/// τ for the Clifford, hexagonal and i√2 gallery classes.
pub fn gallery_taus() -> [(&'static str, Complex64); 3] {
    [
        ("clifford", Complex64::new(0.0, 1.0)),
        ("hexagonal", Complex64::new(0.5, 3f64.sqrt() / 2.0)),
        ("sqrt2", Complex64::new(0.0, 2f64.sqrt())),
    ]
}

pub fn criterion_7() -> CriterionResult {
    timed(7, "embedding numerics", Some(10.0), || {
        let mut worst = Vec::new();
        for (name, tau) in gallery_taus() {
            let class = find_embedding_class(tau).map_err(|e| e.to_string())?;
            let sc = solve_curve(class.a_star, class.l_star, 3).map_err(|e| e.to_string())?;
            let ctx = EmbeddingCtx::new(sc, class);
            let n = embedding_numerics(&ctx, 32, 1e-5).map_err(|e| e.to_string())?;
            ensure(n.unit_norm <= 1e-9, || format!("{name}: unit norm {}", n.unit_norm))?;
            ensure(n.ds_length <= 1e-4 && n.dt_length <= 1e-4 && n.ds_dt_inner <= 1e-4, || {
                format!("{name}: isometry residuals {n:?}")
            })?;
            ensure(n.conformal_eg <= 1e-3 && n.conformal_f <= 1e-3, || {
                format!("{name}: conformality {n:?}")
            })?;
            ensure(n.twist <= 1e-8, || format!("{name}: twist error {}", n.twist))?;
            ensure(n.seam <= 1e-6, || format!("{name}: seam error {}", n.seam))?;
            worst.push(format!("{name} iso {:.1e}", n.ds_length.max(n.dt_length).max(n.ds_dt_inner)));
        }
        Ok(worst.join(", "))
    })
}

pub fn criterion_8() -> CriterionResult {
    timed(8, "sphere curve solver", None, || {
        for (name, tau) in gallery_taus() {
            let class = find_embedding_class(tau).map_err(|e| e.to_string())?;
            let c = solve_curve(class.a_star, class.l_star, 3).map_err(|e| e.to_string())?;
            let (a, l) = (curve_area(&c), curve_length(&c));
            ensure((a - class.a_star).abs() <= 1e-8 && (l - class.l_star).abs() <= 1e-8, || {
                format!("{name}: area {a}, length {l}")
            })?;
            if name == "sqrt2" {
                ensure(c.amp == 0.0 && (c.phi0 - (1.0f64 / 3.0).acos()).abs() < 1e-12, || {
                    format!("sqrt2 circle: {c:?}")
                })?;
            }
        }
        ensure(
            matches!(solve_curve(PI, 0.1, 3), Err(SphereCurveError::Infeasible { .. })),
            || "(pi, 0.1) must be infeasible".into(),
        )?;
        Ok("three classes to 1e-8".into())
    })
}

pub fn criterion_9() -> CriterionResult {
    timed(9, "Frobenius lift reduces mod 5", Some(1.0), || {
        let r = verify_phi_reduction();
        ensure(r.phi1_numerator == "x^9 + 3x^7 + x^5" && r.phi1_denominator == "x^4 + 3x^2 + 1", || {
            format!("phi1 reduces to ({}) / ({})", r.phi1_numerator, r.phi1_denominator)
        })?;
        ensure(r.phi1_ok, || "phi1 is not x^5".into())?;
        ensure(r.phi2_ok, || format!("phi2 numerator {} != {}", r.phi2_numerator, r.phi2_target))?;
        Ok("phi1 = x^5, phi2 = y^5".into())
    })
}

pub fn criterion_10(limit: u64) -> CriterionResult {
    timed(10, "mesh validity and determinism", None, || {
        let opts = EmbedOptions { ns: 96, nt: 32, ..EmbedOptions::default() };
        for &(a, b, p, n) in &[(3, 0, 5, 1u32), (0, 3, 7, 2), (1, 3, 11, 1)] {
            let c = curve(a, b, p)?;
            let lc = level_context(&c, n, limit).map_err(|e| e.to_string())?;
            let render = || -> Result<(String, String), String> {
                let scene = build_scene(&lc, &opts).map_err(|e| e.to_string())?;
                let mesh = scene.mesh.as_ref().ok_or("missing mesh")?;
                ensure(mesh.is_closed_oriented_manifold(), || format!("{c}: mesh not closed"))?;
                ensure(mesh.euler_characteristic() == 0, || format!("{c}: Euler characteristic"))?;
                ensure(mesh.is_finite(), || format!("{c}: non-finite vertex"))?;
                ensure(scene.identity_count() == 1, || "identity marker count".into())?;
                ensure(scene.markers.len() as u64 == lc.level.count, || "marker count".into())?;
                Ok((
                    write_obj(mesh).map_err(|e| e.to_string())?,
                    write_ply(&scene).map_err(|e| e.to_string())?,
                ))
            };
            let first = render()?;
            let second = render()?;
            ensure(first == second, || format!("{c}: output differs between runs"))?;
        }
        Ok("3 scenes closed, chi = 0, byte-identical".into())
    })
}

/// Runs every criterion in order.
pub fn run_all(limit: u64) -> Vec<CriterionResult> {
    let mut out = criterion_1(limit);
    out.push(criterion_2(limit));
    out.push(criterion_3());
    out.push(criterion_4(limit));
    out.push(criterion_5(limit));
    out.push(criterion_6());
    out.push(criterion_7());
    out.push(criterion_8());
    out.push(criterion_9());
    out.push(criterion_10(limit));
    out
}

