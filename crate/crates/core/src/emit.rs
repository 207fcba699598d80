//! Deterministic ASCII writers: OBJ, PLY, SVG and JSON.
//!
//! Every writer returns the full file body as a `String` with LF newlines;
//! nothing depends on time, locale or hash order.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cm_order::{rat_f64, LatticeLevel};
use crate::hopfmap::{Mesh, Scene};
use crate::lift::{MultGroup, RealLocus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("emit: mesh has no vertices or faces")]
    EmptyMesh,
}

/// Nine significant digits in fixed notation, trailing zeros trimmed, no −0.
pub fn fmt_float(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", v);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    // digits = d₀d₁…d₈ representing d₀.d₁…d₈ × 10^exp
    let mut out = String::new();
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.push_str(&"0".repeat(int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&digits);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if negative && out.chars().any(|c| c.is_ascii_digit() && c != '0') {
        out.insert(0, '-');
    }
    out
}

fn vec3(v: &[f64; 3]) -> String {
    format!("{} {} {}", fmt_float(v[0]), fmt_float(v[1]), fmt_float(v[2]))
}

/// `v x y z` lines followed by 1-indexed `f a b c d` lines.
pub fn write_obj(mesh: &Mesh) -> Result<String, EmitError> {
    if mesh.vertices.is_empty() || mesh.quads.is_empty() {
        return Err(EmitError::EmptyMesh);
    }
    let mut s = String::new();
    for v in &mesh.vertices {
        writeln!(s, "v {}", vec3(v)).unwrap();
    }
    for q in &mesh.quads {
        writeln!(s, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1).unwrap();
    }
    Ok(s)
}

/// Marker positions as an OBJ point cloud; the identity is the first point.
pub fn write_points_obj(scene: &Scene) -> String {
    let mut order: Vec<usize> = (0..scene.markers.len()).collect();
    order.sort_by_key(|&i| !scene.markers[i].is_identity);
    let mut s = String::new();
    for &i in &order {
        writeln!(s, "v {}", vec3(&scene.markers[i].position)).unwrap();
    }
    if !order.is_empty() {
        let idx: Vec<String> = (1..=order.len()).map(|k| k.to_string()).collect();
        writeln!(s, "p {}", idx.join(" ")).unwrap();
    }
    s
}

/// Parsed counts of an OBJ body: (vertices, faces).
pub fn obj_counts(obj: &str) -> (usize, usize) {
    let v = obj.lines().filter(|l| l.starts_with("v ")).count();
    let f = obj.lines().filter(|l| l.starts_with("f ")).count();
    (v, f)
}

const MESH_RGB: [u8; 3] = [200, 200, 210];
const IDENTITY_RGB: [u8; 3] = [220, 30, 30];
const MARKER_RGB: [u8; 3] = [250, 190, 20];
const EDGE_RGB: [[u8; 3]; 2] = [[30, 90, 220], [30, 170, 80]];

/// ASCII PLY with colored vertices (mesh, then markers, then polyline
/// vertices), quad faces, and colored edges along the polylines.
pub fn write_ply(scene: &Scene) -> Result<String, EmitError> {
    let mesh = scene.mesh.as_ref().ok_or(EmitError::EmptyMesh)?;
    if mesh.vertices.is_empty() || mesh.quads.is_empty() {
        return Err(EmitError::EmptyMesh);
    }
    let mut verts: Vec<([f64; 3], [u8; 3])> = mesh.vertices.iter().map(|v| (*v, MESH_RGB)).collect();
    for m in &scene.markers {
        verts.push((m.position, if m.is_identity { IDENTITY_RGB } else { MARKER_RGB }));
    }
    let mut edges = Vec::new();
    for pl in &scene.polylines {
        let rgb = EDGE_RGB[pl.generator % 2];
        let base = verts.len();
        verts.extend(pl.points.iter().map(|p| (*p, rgb)));
        for k in 1..pl.points.len() {
            edges.push((base + k - 1, base + k, rgb));
        }
    }
    let mut s = String::new();
    s.push_str("ply\nformat ascii 1.0\n");
    writeln!(s, "element vertex {}", verts.len()).unwrap();
    s.push_str("property float x\nproperty float y\nproperty float z\n");
    s.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    writeln!(s, "element face {}", mesh.quads.len()).unwrap();
    s.push_str("property list uchar int vertex_indices\n");
    writeln!(s, "element edge {}", edges.len()).unwrap();
    s.push_str("property int vertex1\nproperty int vertex2\n");
    s.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    s.push_str("end_header\n");
    for (v, c) in &verts {
        writeln!(s, "{} {} {} {}", vec3(v), c[0], c[1], c[2]).unwrap();
    }
    for q in &mesh.quads {
        writeln!(s, "4 {} {} {} {}", q[0], q[1], q[2], q[3]).unwrap();
    }
    for (a, b, c) in &edges {
        writeln!(s, "{a} {b} {} {} {}", c[0], c[1], c[2]).unwrap();
    }
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_report(report: &crate::lift::LiftReport) -> String {
    write_json(report)
}

/// JSON form of a lattice level: exact coordinates as "num/den" strings over {1, τ}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeRecord {
    pub n: u32,
    pub count: u64,
    pub d1: u64,
    pub d2: u64,
    pub tau: [f64; 2],
    pub points: Vec<LatticePointRecord>,
    pub generators: Vec<[String; 2]>,
    pub edges: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticePointRecord {
    pub label: (u64, u64),
    pub coords: [String; 2],
    pub z: [f64; 2],
}

impl LatticeRecord {
    pub fn from_level(level: &LatticeLevel) -> LatticeRecord {
        let tau = level.tau.value();
        let rat = |r: &crate::cm_order::Rat| format!("{}/{}", r.numer(), r.denom());
        LatticeRecord {
            n: level.n,
            count: level.count,
            d1: level.d1,
            d2: level.d2,
            tau: [tau.re, tau.im],
            points: level
                .points
                .iter()
                .zip(&level.labels)
                .map(|(p, &label)| {
                    let z = p.to_complex(tau);
                    LatticePointRecord {
                        label,
                        coords: [rat(&p.coords[0]), rat(&p.coords[1])],
                        z: [z.re, z.im],
                    }
                })
                .collect(),
            generators: level.generators.iter().map(|g| [rat(&g[0]), rat(&g[1])]).collect(),
            edges: level.edges.iter().map(|e| [e.from, e.to, e.generator]).collect(),
        }
    }
}

/// A level drawn in the fundamental parallelogram {1, τ}.
#[derive(Clone, Debug, PartialEq)]
pub struct FdScene {
    pub tau: Complex64,
    /// Coordinates over {1, τ} in [0, 1)².
    pub points: Vec<([f64; 2], bool)>,
    /// Start point and step over {1, τ}, and the generator index.
    pub edges: Vec<([f64; 2], [f64; 2], usize)>,
    pub title: String,
}

impl FdScene {
    pub fn from_level(level: &LatticeLevel, title: &str) -> FdScene {
        let f = |c: &[crate::cm_order::Rat; 2]| [rat_f64(&c[0]), rat_f64(&c[1])];
        let points = level
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (f(&p.coords), i == 0))
            .collect();
        let edges = level
            .edges
            .iter()
            .map(|e| (f(&level.points[e.from].coords), f(&level.generators[e.generator]), e.generator))
            .collect();
        FdScene { tau: level.tau.value(), points, edges, title: title.to_string() }
    }
}

const CLIP_EPS: f64 = 1e-12;

/// Splits the segment from `a` to `a + d` (over {1, τ}) at the lines where a
/// coordinate is an integer, and translates each piece into [0, 1]².
pub fn clip_edge(a: [f64; 2], d: [f64; 2]) -> Vec<[[f64; 2]; 2]> {
    let mut cuts = vec![0.0, 1.0];
    for k in 0..2 {
        if d[k].abs() < CLIP_EPS {
            continue;
        }
        let (lo, hi) = if d[k] > 0.0 { (a[k], a[k] + d[k]) } else { (a[k] + d[k], a[k]) };
        let mut n = lo.floor() + 1.0;
        while n < hi - CLIP_EPS {
            if n > lo + CLIP_EPS {
                cuts.push((n - a[k]) / d[k]);
            }
            n += 1.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < CLIP_EPS);
    cuts.windows(2)
        .map(|w| {
            let at = |l: f64| [a[0] + l * d[0], a[1] + l * d[1]];
            let mid = at(0.5 * (w[0] + w[1]));
            let shift = [mid[0].floor(), mid[1].floor()];
            let (p, q) = (at(w[0]), at(w[1]));
            [[p[0] - shift[0], p[1] - shift[1]], [q[0] - shift[0], q[1] - shift[1]]]
        })
        .collect()
}

struct SvgFrame {
    scale: f64,
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl SvgFrame {
    fn for_parallelogram(tau: Complex64) -> SvgFrame {
        let xs = [0.0, 1.0, tau.re, 1.0 + tau.re];
        let min_x = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max_x = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let scale = 400.0;
        let margin = 0.1;
        SvgFrame {
            scale,
            min_x: min_x - margin,
            max_y: tau.im + margin,
            width: (max_x - min_x + 2.0 * margin) * scale,
            height: (tau.im + 2.0 * margin) * scale,
        }
    }

    fn xy(&self, z: Complex64) -> (String, String) {
        (
            fmt_float((z.re - self.min_x) * self.scale),
            fmt_float((self.max_y - z.im) * self.scale),
        )
    }

    fn header(&self, title: &str) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
            fmt_float(self.width),
            fmt_float(self.height),
            fmt_float(self.width),
            fmt_float(self.height)
        )
        .unwrap();
        writeln!(s, "<title>{}</title>", xml_escape(title)).unwrap();
        writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn parallelogram(frame: &SvgFrame, tau: Complex64) -> String {
    let corners = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        tau + 1.0,
        tau,
    ];
    let pts: Vec<String> = corners
        .iter()
        .map(|z| {
            let (x, y) = frame.xy(*z);
            format!("{x},{y}")
        })
        .collect();
    format!(
        "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        pts.join(" ")
    )
}

const SVG_EDGE_COLORS: [&str; 2] = ["#1e5adc", "#1eaa50"];

/// Parallelogram, clipped Cayley edges, then points (identity in red).
pub fn write_svg(fd: &FdScene) -> String {
    let frame = SvgFrame::for_parallelogram(fd.tau);
    let to_c = |c: [f64; 2]| fd.tau * c[1] + c[0];
    let mut s = frame.header(&fd.title);
    s.push_str(&parallelogram(&frame, fd.tau));
    for (a, d, g) in &fd.edges {
        for seg in clip_edge(*a, *d) {
            let (x1, y1) = frame.xy(to_c(seg[0]));
            let (x2, y2) = frame.xy(to_c(seg[1]));
            writeln!(
                s,
                "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{}\" stroke-width=\"1\"/>",
                SVG_EDGE_COLORS[g % 2]
            )
            .unwrap();
        }
    }
    for (c, is_id) in &fd.points {
        let (x, y) = frame.xy(to_c(*c));
        let (r, fill) = if *is_id { ("5", "#dc1e1e") } else { ("3", "black") };
        writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{fill}\"/>").unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Roots of unity with Frobenius arrows z ↦ zᵖ and the Cayley cycle.
pub fn write_mult_group_svg(g: &MultGroup) -> String {
    let size = 500.0;
    let r = 200.0;
    let c = size / 2.0;
    let xy = |z: Complex64| (fmt_float(c + r * z.re), fmt_float(c - r * z.im));
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 500 500\" width=\"500\" height=\"500\">"
    )
    .unwrap();
    writeln!(s, "<title>F_{}^{} multiplicative group, order {}</title>", g.p, g.n, g.order).unwrap();
    s.push_str("<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c03020\"/></marker></defs>\n");
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    writeln!(s, "<circle cx=\"250\" cy=\"250\" r=\"200\" fill=\"none\" stroke=\"#999999\"/>").unwrap();
    let pts: Vec<Complex64> = g.points.iter().map(|p| (*p).into()).collect();
    for &(a, b) in &g.cayley {
        let (x1, y1) = xy(pts[a]);
        let (x2, y2) = xy(pts[b]);
        writeln!(s, "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#1e5adc\"/>").unwrap();
    }
    for (a, &b) in g.frobenius.iter().enumerate() {
        if a == b {
            let (x, y) = xy(pts[a] * 1.08);
            writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"6\" fill=\"none\" stroke=\"#c03020\"/>").unwrap();
            continue;
        }
        let (x1, y1) = xy(pts[a] * 0.97);
        let (x2, y2) = xy(pts[b] * 0.97);
        writeln!(
            s,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#c03020\" stroke-opacity=\"0.6\" marker-end=\"url(#arrow)\"/>"
        )
        .unwrap();
    }
    for (k, z) in pts.iter().enumerate() {
        let (x, y) = xy(*z);
        let fill = if k == 0 { "#dc1e1e" } else { "black" };
        writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{fill}\"/>").unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Fundamental parallelogram with the conjugation-fixed circles drawn as
/// horizontal segments.
pub fn write_real_locus_svg(locus: &RealLocus) -> String {
    let (tau, offsets): (Complex64, &[f64]) = match locus {
        RealLocus::Circles { tau, offsets, .. } => ((*tau).into(), offsets),
        RealLocus::NotReflectionStable { tau } => ((*tau).into(), &[]),
    };
    let frame = SvgFrame::for_parallelogram(tau);
    let mut s = frame.header("real locus");
    s.push_str(&parallelogram(&frame, tau));
    for &u in offsets {
        // the line Im z = u crosses the parallelogram from s = u / Im τ
        let v = u / tau.im;
        let a = tau * v;
        let (x1, y1) = frame.xy(a);
        let (x2, y2) = frame.xy(a + 1.0);
        writeln!(
            s,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#c03020\" stroke-width=\"3\"/>"
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_quad() -> Mesh {
        Mesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            quads: vec![[0, 1, 2, 3]],
            ns: 1,
            nt: 1,
        }
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(-2.5), "-2.5");
        assert_eq!(fmt_float(std::f64::consts::FRAC_1_SQRT_2), "0.707106781");
        assert_eq!(fmt_float(123456.789012), "123456.789");
        assert_eq!(fmt_float(1.5e-5), "0.000015");
        assert_eq!(fmt_float(-1e-20), "-0.00000000000000000001");
        assert_eq!(fmt_float(2.0e10), "20000000000");
    }

    #[test]
    fn unit_quad_obj() {
        let obj = write_obj(&unit_quad()).unwrap();
        assert_eq!(obj, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
        assert_eq!(obj_counts(&obj), (4, 1));
    }

    #[test]
    fn empty_mesh() {
        let m = Mesh { vertices: vec![], quads: vec![], ns: 0, nt: 0 };
        assert_eq!(write_obj(&m), Err(EmitError::EmptyMesh));
    }

    #[test]
    fn clip_straddling_right_edge() {
        let segs = clip_edge([0.8, 0.5], [0.4, 0.0]);
        assert_eq!(segs.len(), 2);
        let len: f64 = segs.iter().map(|s| (s[1][0] - s[0][0]).abs()).sum();
        assert!((len - 0.4).abs() < 1e-15);
        assert!((segs[1][0][0]).abs() < 1e-15);
    }

    #[test]
    fn clip_through_corner() {
        let segs = clip_edge([0.75, 0.75], [0.5, 0.5]);
        assert_eq!(segs.len(), 2);
        for s in &segs {
            for p in s {
                assert!((-1e-12..=1.0 + 1e-12).contains(&p[0]));
                assert!((-1e-12..=1.0 + 1e-12).contains(&p[1]));
            }
        }
    }

    #[test]
    fn empty_fd_scene_is_outline_only() {
        let fd = FdScene {
            tau: Complex64::new(0.0, 1.0),
            points: vec![],
            edges: vec![],
            title: "empty".into(),
        };
        let svg = write_svg(&fd);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(!svg.contains("<circle"));
        assert!(!svg.contains("<line"));
    }
}
