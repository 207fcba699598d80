//! Hopf-torus embedding of a flat torus: lift a spherical curve through the
//! Hopf fibration S³ → S², sweep the fibers, and project stereographically.
//!
//! The flat coordinates (s, t) have s along the fiber (period 2π) and t along
//! the horizontal lift (t ∈ [0, L/2)). Closing the lift after one turn of the
//! base curve rotates the fiber by the holonomy f_tot = A/2, so the period
//! lattice is generated by (2π, 0) and (−A/2, L/2).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cm_order::{apply_int, rat_f64, LatticeLevel, Rat};
use crate::modclass::EmbeddingClass;
use crate::quadrature::{GaussLegendre, DEFAULT_ORDER};
use crate::spherecurve::SphereCurveParams;

pub const ARC_TABLE_SIZE: usize = 4096;
pub const EDGE_SEGMENTS: usize = 32;
const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HopfError {
    #[error("hopfmap: t = {t} outside [0, {half})")]
    OutOfDomain { t: f64, half: f64 },
    #[error("hopfmap: point too close to the projection pole")]
    ProjectionPole,
    #[error("hopfmap: Ns = {ns} is not a multiple of the shear denominator {den}")]
    ShearMisaligned { ns: usize, den: i64 },
    #[error("hopfmap: Nt = {0} is below the minimum of 8")]
    TooCoarse(usize),
}

/// Which integrand defines the fiber twist f(v).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TwistVariant {
    /// f′ = sin²(φ/2)·θ′; makes the fibers orthogonal to the lift.
    #[default]
    Squared,
    /// f′ = sin(φ/2)·θ′.
    Unsquared,
}

impl TwistVariant {
    fn density(self, phi: f64) -> f64 {
        let s = (0.5 * phi).sin();
        match self {
            TwistVariant::Squared => s * s,
            TwistVariant::Unsquared => s,
        }
    }
}

/// Unit quaternion w + xi + yj + zk acting on S³ by left multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rotation {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Normalizes (w, x, y, z); `None` for the zero quaternion.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Option<Rotation> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        (n > 0.0 && n.is_finite()).then(|| Rotation { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    /// q·h for h = h₀ + h₁i + h₂j + h₃k.
    pub fn apply(&self, h: [f64; 4]) -> [f64; 4] {
        let Rotation { w, x, y, z } = *self;
        [
            w * h[0] - x * h[1] - y * h[2] - z * h[3],
            w * h[1] + x * h[0] + y * h[3] - z * h[2],
            w * h[2] - x * h[3] + y * h[0] + z * h[1],
            w * h[3] + x * h[2] - y * h[1] + z * h[0],
        ]
    }
}

/// Immutable state for evaluating the embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingCtx {
    curve: SphereCurveParams,
    class: EmbeddingClass,
    rotation: Rotation,
    twist: TwistVariant,
    gl: GaussLegendre,
    /// Cumulative length and twist at v = 2π·i/ARC_TABLE_SIZE.
    arc: Vec<f64>,
    twist_table: Vec<f64>,
    l_tot: f64,
    f_tot: f64,
}

impl EmbeddingCtx {
    pub fn new(curve: SphereCurveParams, class: EmbeddingClass) -> Self {
        Self::with_options(curve, class, Rotation::IDENTITY, TwistVariant::Squared)
    }

    pub fn with_options(
        curve: SphereCurveParams,
        class: EmbeddingClass,
        rotation: Rotation,
        twist: TwistVariant,
    ) -> Self {
        let gl = GaussLegendre::new(DEFAULT_ORDER);
        let h = TAU / ARC_TABLE_SIZE as f64;
        let mut arc = Vec::with_capacity(ARC_TABLE_SIZE + 1);
        let mut tw = Vec::with_capacity(ARC_TABLE_SIZE + 1);
        let (mut l, mut f) = (0.0, 0.0);
        arc.push(0.0);
        tw.push(0.0);
        for i in 0..ARC_TABLE_SIZE {
            let (a, b) = (h * i as f64, h * (i + 1) as f64);
            l += gl.panel(&|x| curve.speed(x), a, b);
            f += gl.panel(&|x| twist.density(curve.phi(x)), a, b);
            arc.push(l);
            tw.push(f);
        }
        EmbeddingCtx { curve, class, rotation, twist, gl, arc, twist_table: tw, l_tot: l, f_tot: f }
    }

    pub fn curve(&self) -> &SphereCurveParams {
        &self.curve
    }

    pub fn class(&self) -> &EmbeddingClass {
        &self.class
    }

    pub fn twist_variant(&self) -> TwistVariant {
        self.twist
    }

    pub fn rotation(&self) -> Rotation {
        self.rotation
    }

    pub fn l_tot(&self) -> f64 {
        self.l_tot
    }

    pub fn f_tot(&self) -> f64 {
        self.f_tot
    }

    pub fn arc_table(&self) -> &[f64] {
        &self.arc
    }

    fn cell_width(&self) -> f64 {
        TAU / ARC_TABLE_SIZE as f64
    }

    fn cell_of(&self, v: f64) -> usize {
        ((v / self.cell_width()) as usize).min(ARC_TABLE_SIZE - 1)
    }

    /// Arc length of the base curve from 0 to v.
    pub fn length_at(&self, v: f64) -> f64 {
        let i = self.cell_of(v);
        let a = self.cell_width() * i as f64;
        self.arc[i] + self.gl.panel(&|x| self.curve.speed(x), a, v)
    }

    /// Fiber twist f(v).
    pub fn twist_at(&self, v: f64) -> f64 {
        let i = self.cell_of(v);
        let a = self.cell_width() * i as f64;
        self.twist_table[i] + self.gl.panel(&|x| self.twist.density(self.curve.phi(x)), a, v)
    }

    /// v with L(v) = len, for len ∈ [0, L_tot].
    pub fn invert_length(&self, len: f64) -> f64 {
        let i = match self.arc.binary_search_by(|x| x.total_cmp(&len)) {
            Ok(i) => return self.cell_width() * i as f64,
            Err(i) => i.clamp(1, ARC_TABLE_SIZE) - 1,
        };
        let (lo, hi) = (self.cell_width() * i as f64, self.cell_width() * (i + 1) as f64);
        let frac = (len - self.arc[i]) / (self.arc[i + 1] - self.arc[i]);
        let mut v = lo + frac * (hi - lo);
        for _ in 0..8 {
            let dv = (self.length_at(v) - len) / self.curve.speed(v);
            v = (v - dv).clamp(lo, hi);
            if dv.abs() < 1e-15 {
                break;
            }
        }
        v
    }

    /// The embedding into S³ ⊂ ℝ⁴ as (Re z, Im z, Re w, Im w), before rotation.
    pub fn embed_s3_unrotated(&self, s: f64, t: f64) -> Result<[f64; 4], HopfError> {
        let half = 0.5 * self.l_tot;
        if !(0.0..half).contains(&t) {
            return Err(HopfError::OutOfDomain { t, half });
        }
        let v = self.invert_length(2.0 * t);
        let theta = self.curve.theta(v);
        let phi = self.curve.phi(v);
        let f = self.twist_at(v);
        let (sp, cp) = (0.5 * phi).sin_cos();
        let z = Complex64::from_polar(sp, theta + s - f);
        let w = Complex64::from_polar(cp, s - f);
        Ok([z.re, z.im, w.re, w.im])
    }

    pub fn embed_s3(&self, s: f64, t: f64) -> Result<[f64; 4], HopfError> {
        Ok(self.rotation.apply(self.embed_s3_unrotated(s, t)?))
    }

    pub fn embed_point(&self, s: f64, t: f64) -> Result<[f64; 3], HopfError> {
        stereographic(self.embed_s3(s, t)?)
    }

    /// Point of the torus for arbitrary (s, t), wrapped into the fundamental strip.
    pub fn embed_wrapped(&self, s: f64, t: f64) -> Result<[f64; 3], HopfError> {
        let (s, t) = self.wrap(s, t);
        self.embed_point(s, t)
    }

    /// Shifts (s, t) by periods (−f_tot, L_tot/2) until t ∈ [0, L_tot/2).
    pub fn wrap(&self, s: f64, t: f64) -> (f64, f64) {
        let half = 0.5 * self.l_tot;
        let m = (t / half).floor();
        let (mut s, mut t) = (s + m * self.f_tot, t - m * half);
        if t >= half {
            t -= half;
            s += self.f_tot;
        }
        if t < 0.0 {
            t = 0.0;
        }
        (s.rem_euclid(TAU), t)
    }

    /// Maps a point given over {1, τ′} to flat (s, t) coordinates via the
    /// similarity 1 ↦ (−2π, 0), τ′ ↦ (−f_tot, L_tot/2).
    pub fn flat_coords(&self, c: [f64; 2]) -> (f64, f64) {
        // s = −2π·r − f_tot·u, t = (L_tot/2)·u
        let s = -TAU * c[0] - self.f_tot * c[1];
        let t = 0.5 * self.l_tot * c[1];
        (s, t)
    }

    /// Number of s-steps by which row Nt is shifted onto row 0.
    pub fn seam_shift(&self, ns: usize) -> Result<usize, HopfError> {
        let (u, w) = self.class.shear.ok_or(HopfError::ShearMisaligned { ns, den: 0 })?;
        if ns == 0 || ns as i64 % w != 0 {
            return Err(HopfError::ShearMisaligned { ns, den: w });
        }
        Ok(((u * ns as i64 / w).rem_euclid(ns as i64)) as usize)
    }
}

pub fn stereographic(h: [f64; 4]) -> Result<[f64; 3], HopfError> {
    let d = 1.0 - h[3];
    if d.abs() < POLE_TOL {
        return Err(HopfError::ProjectionPole);
    }
    Ok([h[0] / d, h[1] / d, h[2] / d])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise when viewed from outside.
    pub quads: Vec<[usize; 4]>,
    pub ns: usize,
    pub nt: usize,
}

impl Mesh {
    pub fn edge_count(&self) -> usize {
        let mut edges = std::collections::HashSet::new();
        for q in &self.quads {
            for k in 0..4 {
                let (a, b) = (q[k], q[(k + 1) % 4]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.quads.len() as i64
    }

    /// Every directed edge appears once and its reverse once.
    pub fn is_closed_oriented_manifold(&self) -> bool {
        let mut directed = std::collections::HashMap::new();
        for q in &self.quads {
            for k in 0..4 {
                *directed.entry((q[k], q[(k + 1) % 4])).or_insert(0usize) += 1;
            }
        }
        directed
            .iter()
            .all(|(&(a, b), &n)| n == 1 && directed.get(&(b, a)) == Some(&1))
    }

    /// Volume enclosed, positive for outward orientation.
    pub fn signed_volume(&self) -> f64 {
        let tri = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
            (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
                / 6.0
        };
        self.quads
            .iter()
            .map(|q| {
                let v = |i: usize| self.vertices[q[i]];
                tri(v(0), v(1), v(2)) + tri(v(0), v(2), v(3))
            })
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_finite())
    }
}

/// Ns × Nt grid over the fundamental strip, glued across the t-seam with the
/// shear of the lattice.
pub fn generate_mesh(ctx: &EmbeddingCtx, ns: usize, nt: usize) -> Result<Mesh, HopfError> {
    if nt < 8 {
        return Err(HopfError::TooCoarse(nt));
    }
    let shift = ctx.seam_shift(ns)?;
    let half = 0.5 * ctx.l_tot();
    let mut vertices = Vec::with_capacity(ns * nt);
    for j in 0..nt {
        let t = half * j as f64 / nt as f64;
        for i in 0..ns {
            let s = TAU * i as f64 / ns as f64;
            vertices.push(ctx.embed_point(s, t)?);
        }
    }
    let idx = |i: usize, j: usize| -> usize {
        if j == nt {
            // (s_i, L/2) is the point (s_i − A/2, 0)
            (i + ns - shift) % ns
        } else {
            j * ns + i % ns
        }
    };
    let mut quads = Vec::with_capacity(ns * nt);
    for j in 0..nt {
        for i in 0..ns {
            quads.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    let mut mesh = Mesh { vertices, quads, ns, nt };
    if mesh.signed_volume() < 0.0 {
        for q in &mut mesh.quads {
            q.reverse();
        }
    }
    Ok(mesh)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marker {
    pub position: [f64; 3],
    pub is_identity: bool,
    /// Smith-normal-form label (j, k).
    pub label: (u64, u64),
    /// Flat coordinates (s, t) of the point.
    pub flat: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<[f64; 3]>,
    pub generator: usize,
    pub from: usize,
    pub to: usize,
}

/// Descriptive data carried alongside the geometry.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SceneMetadata {
    pub curve: String,
    pub p: u64,
    pub n: u32,
    pub alpha: String,
    pub tau: [f64; 2],
    pub tau_prime: [f64; 2],
    pub transform: [i64; 4],
    pub mirrored: bool,
    pub circle_flag: bool,
    pub a_star: f64,
    pub l_star: f64,
    pub group: (u64, u64),
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scene {
    pub mesh: Option<Mesh>,
    pub markers: Vec<Marker>,
    pub polylines: Vec<Polyline>,
    pub metadata: SceneMetadata,
}

impl Scene {
    pub fn identity_count(&self) -> usize {
        self.markers.iter().filter(|m| m.is_identity).count()
    }
}

/// Places the points and Cayley edges of a level on the embedded torus.
pub fn map_scene(ctx: &EmbeddingCtx, level: &LatticeLevel) -> Result<Scene, HopfError> {
    let change = ctx.class().coordinate_change();
    let to_prime = |c: [Rat; 2]| -> [f64; 2] {
        let m = apply_int(&change, c);
        [rat_f64(&m[0]), rat_f64(&m[1])]
    };
    let mut markers = Vec::with_capacity(level.points.len());
    let mut flat = Vec::with_capacity(level.points.len());
    for (i, pt) in level.points.iter().enumerate() {
        let (s, t) = ctx.flat_coords(to_prime(pt.coords));
        let (s, t) = ctx.wrap(s, t);
        flat.push((s, t));
        markers.push(Marker {
            position: ctx.embed_point(s, t)?,
            is_identity: i == 0,
            label: level.labels[i],
            flat: (s, t),
        });
    }
    let steps: Vec<(f64, f64)> = level
        .generators
        .iter()
        .map(|g| ctx.flat_coords(to_prime(*g)))
        .collect();
    let mut polylines = Vec::with_capacity(level.edges.len());
    for e in &level.edges {
        let (s0, t0) = flat[e.from];
        let (ds, dt) = steps[e.generator];
        let mut points = Vec::with_capacity(EDGE_SEGMENTS + 1);
        for k in 0..=EDGE_SEGMENTS {
            let u = k as f64 / EDGE_SEGMENTS as f64;
            points.push(ctx.embed_wrapped(s0 + u * ds, t0 + u * dt)?);
        }
        polylines.push(Polyline { points, generator: e.generator, from: e.from, to: e.to });
    }
    Ok(Scene { mesh: None, markers, polylines, metadata: SceneMetadata::default() })
}

/// Worst-case residuals of the embedding over a sample grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Numerics {
    pub unit_norm: f64,
    pub ds_length: f64,
    pub dt_length: f64,
    pub ds_dt_inner: f64,
    pub conformal_eg: f64,
    pub conformal_f: f64,
    pub twist: f64,
    pub seam: f64,
}

fn diff4(a: [f64; 4], b: [f64; 4], h: f64) -> [f64; 4] {
    [(a[0] - b[0]) / h, (a[1] - b[1]) / h, (a[2] - b[2]) / h, (a[3] - b[3]) / h]
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Central differences with step `h` on a `grid` × `grid` cell-centred sample
/// of the strip, before and after stereographic projection.
pub fn embedding_numerics(ctx: &EmbeddingCtx, grid: usize, h: f64) -> Result<Numerics, HopfError> {
    let half = 0.5 * ctx.l_tot();
    let mut out = Numerics {
        twist: (ctx.f_tot() - 0.5 * ctx.class().a_star).abs(),
        ..Numerics::default()
    };
    for i in 0..grid {
        for j in 0..grid {
            let s = TAU * (i as f64 + 0.5) / grid as f64;
            let t = half * (j as f64 + 0.5) / grid as f64;
            let h0 = ctx.embed_s3(s, t)?;
            out.unit_norm = out.unit_norm.max((dot(&h0, &h0).sqrt() - 1.0).abs());
            let ds = diff4(ctx.embed_s3(s + h, t)?, ctx.embed_s3(s - h, t)?, 2.0 * h);
            let dt = diff4(ctx.embed_s3(s, t + h)?, ctx.embed_s3(s, t - h)?, 2.0 * h);
            out.ds_length = out.ds_length.max((dot(&ds, &ds).sqrt() - 1.0).abs());
            out.dt_length = out.dt_length.max((dot(&dt, &dt).sqrt() - 1.0).abs());
            out.ds_dt_inner = out.ds_dt_inner.max(dot(&ds, &dt).abs());
            let ps = sub3(ctx.embed_point(s + h, t)?, ctx.embed_point(s - h, t)?, 2.0 * h);
            let pt = sub3(ctx.embed_point(s, t + h)?, ctx.embed_point(s, t - h)?, 2.0 * h);
            let (e, f, g) = (dot(&ps, &ps), dot(&ps, &pt), dot(&pt, &pt));
            out.conformal_eg = out.conformal_eg.max((e - g).abs() / e);
            out.conformal_f = out.conformal_f.max(f.abs() / e);
        }
    }
    let below = half - 1e-9;
    for i in 0..grid {
        let s = TAU * i as f64 / grid as f64;
        let top = ctx.embed_point(s, below)?;
        let glued = ctx.embed_point((s - ctx.f_tot()).rem_euclid(TAU), 0.0)?;
        let d = sub3(top, glued, 1.0);
        out.seam = out.seam.max(dot(&d, &d).sqrt());
    }
    Ok(out)
}

fn sub3(a: [f64; 3], b: [f64; 3], h: f64) -> [f64; 3] {
    [(a[0] - b[0]) / h, (a[1] - b[1]) / h, (a[2] - b[2]) / h]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modclass::find_embedding_class;
    use crate::spherecurve::solve_curve;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ctx_for(tau: Complex64, k: u32) -> EmbeddingCtx {
        let class = find_embedding_class(tau).unwrap();
        let curve = solve_curve(class.a_star, class.l_star, k).unwrap();
        EmbeddingCtx::new(curve, class)
    }

    fn clifford() -> EmbeddingCtx {
        ctx_for(Complex64::new(0.0, 1.0), 3)
    }

    fn hexagonal() -> EmbeddingCtx {
        ctx_for(Complex64::new(0.5, 3f64.sqrt() / 2.0), 3)
    }

    fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    #[test]
    fn latitude_circle_base_point() {
        let class = find_embedding_class(Complex64::new(0.0, 2f64.sqrt())).unwrap();
        let curve = solve_curve(class.a_star, class.l_star, 3).unwrap();
        assert_eq!(curve.amp, 0.0);
        let ctx = EmbeddingCtx::new(curve, class);
        let p = ctx.embed_point(0.0, 0.0).unwrap();
        let h = 0.5 * curve.phi0;
        assert!(dist(p, [h.sin(), 0.0, h.cos()]) < 1e-15);
    }

    #[test]
    fn clifford_antipodal_fiber_point() {
        let ctx = clifford();
        assert_eq!(ctx.curve().phi0, FRAC_PI_2);
        let p = ctx.embed_point(PI, 0.0).unwrap();
        let r = 0.5f64.sqrt();
        assert!(dist(p, [-r, 0.0, -r]) < 1e-15);
    }

    #[test]
    fn totals_match_class() {
        for ctx in [clifford(), hexagonal()] {
            assert!((ctx.l_tot() - ctx.class().l_star).abs() < 1e-8);
            assert!((ctx.f_tot() - 0.5 * ctx.class().a_star).abs() < 1e-8);
        }
    }

    #[test]
    fn arc_length_inversion() {
        let ctx = hexagonal();
        for k in 0..50 {
            let len = ctx.l_tot() * k as f64 / 50.0;
            let v = ctx.invert_length(len);
            assert!((ctx.length_at(v) - len).abs() < 1e-12);
        }
    }

    #[test]
    fn fiber_period_and_unit_norm() {
        let ctx = hexagonal();
        for (s, t) in [(0.3, 0.0), (1.7, 1.2), (4.0, 2.5)] {
            let a = ctx.embed_point(s, t).unwrap();
            let b = ctx.embed_point(s + TAU, t).unwrap();
            assert!(dist(a, b) < 1e-9);
            let h = ctx.embed_s3(s, t).unwrap();
            let n: f64 = h.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seam_closes_with_negative_shear() {
        let ctx = hexagonal();
        let half = 0.5 * ctx.l_tot();
        for s in [0.0, 1.0, 2.5] {
            let top = ctx.embed_point(s, half * (1.0 - 1e-12)).unwrap();
            let glued = ctx.embed_point((s - ctx.f_tot()).rem_euclid(TAU), 0.0).unwrap();
            assert!(dist(top, glued) < 1e-6);
        }
    }

    #[test]
    fn out_of_domain() {
        let ctx = clifford();
        let half = 0.5 * ctx.l_tot();
        assert!(matches!(ctx.embed_point(0.0, half), Err(HopfError::OutOfDomain { .. })));
        assert!(matches!(ctx.embed_point(0.0, -0.1), Err(HopfError::OutOfDomain { .. })));
    }

    #[test]
    fn rotation_is_orthogonal() {
        let q = Rotation::new(0.3, -0.4, 0.5, 0.1).unwrap();
        let h = [0.1, 0.7, -0.2, 0.3];
        let r = q.apply(h);
        let n = |v: [f64; 4]| v.iter().map(|x| x * x).sum::<f64>();
        assert!((n(r) - n(h)).abs() < 1e-15);
        assert_eq!(Rotation::IDENTITY.apply(h), h);
    }

    #[test]
    fn clifford_mesh() {
        let ctx = clifford();
        let mesh = generate_mesh(&ctx, 64, 32).unwrap();
        assert_eq!(mesh.vertices.len(), 2048);
        assert_eq!(mesh.euler_characteristic(), 0);
        assert!(mesh.is_closed_oriented_manifold());
        assert!(mesh.signed_volume() > 0.0);
        assert!(mesh.is_finite());
    }

    #[test]
    fn hexagonal_shear() {
        let ctx = hexagonal();
        assert_eq!(ctx.class().shear, Some((1, 2)));
        assert_eq!(ctx.seam_shift(64).unwrap(), 32);
        assert_eq!(
            generate_mesh(&ctx, 63, 16),
            Err(HopfError::ShearMisaligned { ns: 63, den: 2 })
        );
        let mesh = generate_mesh(&ctx, 64, 16).unwrap();
        assert_eq!(mesh.euler_characteristic(), 0);
        assert!(mesh.is_closed_oriented_manifold());
    }

    #[test]
    fn squared_twist_is_isometric() {
        let n = embedding_numerics(&hexagonal(), 8, 1e-5).unwrap();
        assert!(n.ds_length < 1e-4 && n.dt_length < 1e-4 && n.ds_dt_inner < 1e-4, "{n:?}");
        assert!(n.conformal_eg < 1e-3 && n.conformal_f < 1e-3, "{n:?}");
    }

    #[test]
    fn unsquared_twist_breaks_orthogonality() {
        let base = hexagonal();
        let ctx = EmbeddingCtx::with_options(
            *base.curve(),
            base.class().clone(),
            Rotation::IDENTITY,
            TwistVariant::Unsquared,
        );
        let n = embedding_numerics(&ctx, 8, 1e-5).unwrap();
        assert!(n.ds_dt_inner > 1e-2, "{n:?}");
        assert!(n.twist > 1e-2);
    }

    #[test]
    fn wrap_lands_in_strip() {
        let ctx = hexagonal();
        let half = 0.5 * ctx.l_tot();
        for (s, t) in [(0.0, 3.0 * half + 0.1), (1.0, -0.5 * half), (7.0, half)] {
            let (ws, wt) = ctx.wrap(s, t);
            assert!((0.0..half).contains(&wt));
            assert!((0.0..TAU).contains(&ws));
        }
    }
}
