//! The end-to-end pipeline for one curve: Frobenius data, the tower of fixed
//! lattices with oracle cross-checks, and the embedded scene. Also the
//! multiplicative-group picture and the real locus of a lattice.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::cm_order::{
    fixed_lattice, frobenius_alpha_limited, level_invariants, maximal_order_form, CmError,
    LatticeLevel, MaximalOrderForm, QuadInt, Tau,
};
use crate::finite_field::is_prime;
use crate::hopfmap::{
    generate_mesh, map_scene, EmbeddingCtx, HopfError, Rotation, Scene, SceneMetadata,
    TwistVariant,
};
use crate::modclass::{find_embedding_class_exact, Complex64Repr, EmbeddingClass, ModClassError};
use crate::spherecurve::{solve_curve, SphereCurveError, SphereCurveParams};
use crate::weierstrass::{
    count_points_limited, torsion_profile, CurveError, CurveParams, DEFAULT_ORACLE_LIMIT,
};

pub const MAX_N: u32 = 8;
pub const MAX_MULT_GROUP: u64 = 1_000_000;
/// Torsion orders compared against the lattice structure.
pub const TORSION_CHECK_MAX: u64 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("lift: n = {0} outside 1..={MAX_N}")]
    BadLevel(u32),
    #[error("lift: {0} is not prime")]
    NotPrime(u64),
    #[error("lift: group of order {0} exceeds the cap of {MAX_MULT_GROUP}")]
    TooManyPoints(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    ModClass(#[from] ModClassError),
    #[error(transparent)]
    Sphere(#[from] SphereCurveError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRecord {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

/// α = x + y·ξ over the maximal order, with its minimal polynomial X² − tX + p.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaRecord {
    pub x: i64,
    pub y: i64,
    pub xi: String,
    pub t: i64,
    pub p: i64,
    pub conductor: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRecord {
    pub n: u32,
    pub count: u64,
    pub d1: u64,
    pub d2: u64,
    pub oracle_checked: bool,
    pub oracle_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftReport {
    pub curve: CurveRecord,
    pub a_p: i64,
    pub alpha: AlphaRecord,
    pub tau: Complex64Repr,
    pub ordinary: bool,
    pub levels: Vec<LevelRecord>,
    pub warnings: Vec<String>,
}

fn alpha_record(alpha: &QuadInt, form: &MaximalOrderForm) -> AlphaRecord {
    AlphaRecord {
        x: form.a,
        y: form.b,
        xi: form.xi_name(),
        t: alpha.order.t,
        p: alpha.order.p,
        conductor: form.conductor,
    }
}

pub fn build_lift_report(curve: &CurveParams, n_max: u32) -> Result<LiftReport, LiftError> {
    build_lift_report_limited(curve, n_max, DEFAULT_ORACLE_LIMIT)
}

/// Runs brute-force count and torsion oracles wherever pⁿ ≤ `limit`.
pub fn build_lift_report_limited(
    curve: &CurveParams,
    n_max: u32,
    limit: u64,
) -> Result<LiftReport, LiftError> {
    if !(1..=MAX_N).contains(&n_max) {
        return Err(LiftError::BadLevel(n_max));
    }
    let frob = frobenius_alpha_limited(curve, limit.max(curve.p()))?;
    let alpha = frob.alpha;
    let form = maximal_order_form(&alpha.order);
    let tau = Tau::for_order(alpha.order);
    let mut warnings = Vec::new();
    if !frob.ordinary {
        warnings.push(format!(
            "supersingular: a_p = {} is divisible by p; levels use Z[alpha] and are checked by the oracles",
            frob.a_p
        ));
    }
    let p = curve.p();
    let mut levels = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let (_, count, snf) = level_invariants(&alpha, n)?;
        let (d1, d2) = (snf.d1 as u64, snf.d2 as u64);
        let q = p.checked_pow(n);
        let checked = q.is_some_and(|q| q <= limit);
        let mut agrees = false;
        if checked {
            let brute = count_points_limited(curve, n, limit)?;
            let torsion = torsion_profile(curve, n, TORSION_CHECK_MAX, limit)?;
            let count_ok = brute == count;
            let structure_ok = (1..=TORSION_CHECK_MAX)
                .all(|m| torsion[m as usize - 1] == m.gcd(&d1) * m.gcd(&d2));
            agrees = count_ok && structure_ok;
            if !count_ok {
                warnings.push(format!(
                    "level {n}: lattice count {count} disagrees with brute-force count {brute}"
                ));
            } else if !structure_ok {
                warnings.push(format!(
                    "level {n}: structure Z/{d1} x Z/{d2} from Z[alpha] disagrees with the torsion oracle \
                     (Z[alpha] has conductor {} and may be smaller than End(E))",
                    form.conductor
                ));
            }
        }
        levels.push(LevelRecord { n, count, d1, d2, oracle_checked: checked, oracle_agrees: agrees });
    }
    Ok(LiftReport {
        curve: CurveRecord { a: curve.a(), b: curve.b(), p },
        a_p: frob.a_p,
        alpha: alpha_record(&alpha, &form),
        tau: tau.value().into(),
        ordinary: frob.ordinary,
        levels,
        warnings,
    })
}

/// Everything needed to draw one level of one curve.
#[derive(Clone, Debug)]
pub struct LevelContext {
    pub curve: CurveParams,
    pub a_p: i64,
    pub alpha: QuadInt,
    pub form: MaximalOrderForm,
    pub tau: Tau,
    pub level: LatticeLevel,
    pub warnings: Vec<String>,
}

pub fn level_context(curve: &CurveParams, n: u32, limit: u64) -> Result<LevelContext, LiftError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(LiftError::BadLevel(n));
    }
    let frob = frobenius_alpha_limited(curve, limit.max(curve.p()))?;
    let tau = Tau::for_order(frob.alpha.order);
    let level = fixed_lattice(&frob.alpha, n, &tau)?;
    let mut warnings = Vec::new();
    if !frob.ordinary {
        warnings.push(format!("supersingular: a_p = {}", frob.a_p));
    }
    Ok(LevelContext {
        curve: *curve,
        a_p: frob.a_p,
        alpha: frob.alpha,
        form: maximal_order_form(&frob.alpha.order),
        tau,
        level,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbedOptions {
    pub k: u32,
    pub ns: usize,
    pub nt: usize,
    pub rotation: Rotation,
    pub twist: TwistVariant,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            k: 3,
            ns: 256,
            nt: 128,
            rotation: Rotation::IDENTITY,
            twist: TwistVariant::Squared,
        }
    }
}

pub fn embedding_class(tau: &Tau) -> Result<EmbeddingClass, LiftError> {
    Ok(find_embedding_class_exact(&tau.exact)?)
}

pub fn embedding_ctx(
    class: &EmbeddingClass,
    opts: &EmbedOptions,
) -> Result<(SphereCurveParams, EmbeddingCtx), LiftError> {
    let curve = solve_curve(class.a_star, class.l_star, opts.k)?;
    let ctx = EmbeddingCtx::with_options(curve, class.clone(), opts.rotation, opts.twist);
    Ok((curve, ctx))
}

/// Mesh, markers and Cayley polylines for one level on its Hopf torus.
pub fn build_scene(lc: &LevelContext, opts: &EmbedOptions) -> Result<Scene, LiftError> {
    let class = embedding_class(&lc.tau)?;
    let (_, ctx) = embedding_ctx(&class, opts)?;
    let mesh = generate_mesh(&ctx, opts.ns, opts.nt)?;
    let mut scene = map_scene(&ctx, &lc.level)?;
    scene.mesh = Some(mesh);
    scene.metadata = scene_metadata(lc, &class);
    Ok(scene)
}

pub fn scene_metadata(lc: &LevelContext, class: &EmbeddingClass) -> SceneMetadata {
    let t = lc.tau.value();
    let g = class.transform;
    SceneMetadata {
        curve: lc.curve.to_string(),
        p: lc.curve.p(),
        n: lc.level.n,
        alpha: lc.form.to_string(),
        tau: [t.re, t.im],
        tau_prime: [class.tau_prime.re, class.tau_prime.im],
        transform: [g.a, g.b, g.c, g.d],
        mirrored: class.mirrored,
        circle_flag: class.circle_flag,
        a_star: class.a_star,
        l_star: class.l_star,
        group: (lc.level.d1, lc.level.d2),
        warnings: lc.warnings.clone(),
    }
}

/// 𝔽_{pⁿ}^× as the (pⁿ − 1)-th roots of unity with the Frobenius z ↦ zᵖ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultGroup {
    pub p: u64,
    pub n: u32,
    pub order: u64,
    pub points: Vec<Complex64Repr>,
    /// k ↦ p·k mod (pⁿ − 1), the index of the image of point k.
    pub frobenius: Vec<usize>,
    pub cayley: Vec<(usize, usize)>,
}

impl MultGroup {
    /// Order of the Frobenius permutation.
    pub fn frobenius_order(&self) -> u32 {
        let id: Vec<usize> = (0..self.points.len()).collect();
        let mut cur = self.frobenius.clone();
        let mut k = 1;
        while cur != id {
            cur = cur.iter().map(|&i| self.frobenius[i]).collect();
            k += 1;
        }
        k
    }
}

pub fn mult_group_points(p: u64, n: u32) -> Result<MultGroup, LiftError> {
    if !is_prime(p) {
        return Err(LiftError::NotPrime(p));
    }
    if n == 0 {
        return Err(LiftError::BadLevel(n));
    }
    let q = p
        .checked_pow(n)
        .filter(|q| q - 1 <= MAX_MULT_GROUP)
        .ok_or(LiftError::TooManyPoints(u64::MAX))?;
    let m = q - 1;
    let points = (0..m)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64).into())
        .collect();
    let frobenius = (0..m).map(|k| ((k * p) % m) as usize).collect();
    let cayley = (0..m).map(|k| (k as usize, ((k + 1) % m) as usize)).collect();
    Ok(MultGroup { p, n, order: m, points, frobenius, cayley })
}

/// Components of the real locus of ℂ/(ℤ ⊕ τℤ) under z ↦ z̄.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealLocus {
    /// Horizontal circles Im z = u, u ∈ [0, Im τ); `halves[i]` is u in units of Im τ / 2.
    Circles { tau: Complex64Repr, offsets: Vec<f64>, halves: Vec<u32> },
    NotReflectionStable { tau: Complex64Repr },
}

const REAL_TOL: f64 = 1e-12;

/// The circles of points z with z̄ ≡ z (mod Λ), for Λ = ℤ ⊕ τℤ.
///
/// z − z̄ = 2i·Im z must lie in Λ. Writing 2i·u = a + bτ forces a = −b·Re τ,
/// so conjugation preserves Λ exactly when 2·Re τ ∈ ℤ, and u = b·Im τ/2 with
/// b·Re τ ∈ ℤ.
pub fn real_locus(tau: Complex64) -> RealLocus {
    let repr = tau.into();
    let two_re = 2.0 * tau.re;
    if !(tau.im > 0.0) || (two_re - two_re.round()).abs() > REAL_TOL {
        return RealLocus::NotReflectionStable { tau: repr };
    }
    let half_integer_re = (two_re.round() as i64).rem_euclid(2) == 1;
    let halves: Vec<u32> = if half_integer_re { vec![0] } else { vec![0, 1] };
    let offsets = halves.iter().map(|&b| b as f64 * tau.im / 2.0).collect();
    RealLocus::Circles { tau: repr, offsets, halves }
}
