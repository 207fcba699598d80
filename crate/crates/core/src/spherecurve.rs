//! Wavy latitude circles θ(x) = x, φ(x) = φ₀ + a·cos(kx) on S², and a solver
//! matching a prescribed enclosed area and length.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{GaussLegendre, DEFAULT_ORDER};

pub const PANELS_PER_WOBBLE: usize = 256;
pub const MAX_ITERATIONS: usize = 200;
const SOLVE_TOL: f64 = 1e-11;
const CIRCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereCurveError {
    #[error("spherecurve: invalid parameters phi0 = {phi0}, amp = {amp}, k = {k}")]
    InvalidParams { phi0: f64, amp: f64, k: u32 },
    #[error("spherecurve: area {a} and length {l} violate the isoperimetric inequality")]
    Infeasible { a: f64, l: f64 },
    #[error("spherecurve: length {l} needs a wobble reaching a pole with k = {k}; try a larger k")]
    PoleCollision { l: f64, k: u32 },
    #[error("spherecurve: no convergence after {0} iterations")]
    NoConvergence(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereCurveParams {
    pub phi0: f64,
    pub amp: f64,
    pub k: u32,
}

impl SphereCurveParams {
    pub fn new(phi0: f64, amp: f64, k: u32) -> Result<Self, SphereCurveError> {
        let ok = k >= 2
            && amp >= 0.0
            && phi0.is_finite()
            && amp.is_finite()
            && phi0 - amp > 0.0
            && phi0 + amp < PI;
        if ok {
            Ok(SphereCurveParams { phi0, amp, k })
        } else {
            Err(SphereCurveError::InvalidParams { phi0, amp, k })
        }
    }

    pub fn theta(&self, x: f64) -> f64 {
        x
    }

    pub fn phi(&self, x: f64) -> f64 {
        self.phi0 + self.amp * (self.k as f64 * x).cos()
    }

    pub fn dphi(&self, x: f64) -> f64 {
        let k = self.k as f64;
        -self.amp * k * (k * x).sin()
    }

    /// Arc-length density |γ′(x)| on the unit sphere.
    pub fn speed(&self, x: f64) -> f64 {
        let s = self.phi(x).sin();
        let d = self.dphi(x);
        (s * s + d * d).sqrt()
    }

    pub fn panels(&self) -> usize {
        PANELS_PER_WOBBLE * self.k as usize
    }

    /// Point on S² ⊂ ℝ³ with colatitude φ.
    pub fn point(&self, x: f64) -> [f64; 3] {
        let (st, ct) = self.theta(x).sin_cos();
        let (sp, cp) = self.phi(x).sin_cos();
        [sp * ct, sp * st, cp]
    }
}

pub fn curve_area(c: &SphereCurveParams) -> f64 {
    curve_area_with_panels(c, c.panels())
}

pub fn curve_length(c: &SphereCurveParams) -> f64 {
    curve_length_with_panels(c, c.panels())
}

pub fn curve_area_with_panels(c: &SphereCurveParams, panels: usize) -> f64 {
    let gl = GaussLegendre::new(DEFAULT_ORDER);
    gl.integrate(|x| 1.0 - c.phi(x).cos(), 0.0, TAU, panels)
}

pub fn curve_length_with_panels(c: &SphereCurveParams, panels: usize) -> f64 {
    let gl = GaussLegendre::new(DEFAULT_ORDER);
    gl.integrate(|x| c.speed(x), 0.0, TAU, panels)
}

fn area_length(phi0: f64, amp: f64, k: u32) -> (f64, f64) {
    let c = SphereCurveParams { phi0, amp, k };
    (curve_area(&c), curve_length(&c))
}

fn inside(phi0: f64, amp: f64) -> bool {
    phi0 - amp.abs() > 0.0 && phi0 + amp.abs() < PI
}

/// Finds (φ₀, a) with enclosed area `a_star` ∈ (0, 2π] and length `l_star`.
pub fn solve_curve(a_star: f64, l_star: f64, k: u32) -> Result<SphereCurveParams, SphereCurveError> {
    let infeasible = SphereCurveError::Infeasible { a: a_star, l: l_star };
    if k < 2 || !(a_star > 0.0 && a_star <= TAU + 1e-12) || !(l_star > 0.0) {
        return Err(infeasible);
    }
    let gap = l_star * l_star - a_star * (4.0 * PI - a_star);
    if gap < -1e-9 {
        return Err(infeasible);
    }
    if gap.abs() <= CIRCLE_TOL * l_star.max(1.0) {
        let phi0 = (1.0 - a_star / TAU).acos();
        return SphereCurveParams::new(phi0, 0.0, k);
    }
    if (a_star - TAU).abs() <= 1e-12 {
        return solve_equator(l_star, k);
    }
    match newton(a_star, l_star, k) {
        Ok(c) => Ok(c),
        Err(SphereCurveError::NoConvergence(_)) => nested(a_star, l_star, k),
        Err(e) => Err(e),
    }
}

/// φ₀ = π/2 keeps the area at 2π for every amplitude; solve for a alone.
fn solve_equator(l_star: f64, k: u32) -> Result<SphereCurveParams, SphereCurveError> {
    let len = |a: f64| area_length(FRAC_PI_2, a, k).1 - l_star;
    let amp = bracket_and_solve(len, l_star, k)?;
    SphereCurveParams::new(FRAC_PI_2, amp, k)
}

/// Root of an increasing g on (0, π/2) with g(0) < 0: bisection to 1e-6, then secant-Newton.
fn bracket_and_solve<G: Fn(f64) -> f64>(g: G, l_star: f64, k: u32) -> Result<f64, SphereCurveError> {
    let hi_limit = FRAC_PI_2 * (1.0 - 1e-9);
    let (mut lo, mut hi) = (0.0, hi_limit);
    if g(hi) < 0.0 {
        return Err(SphereCurveError::PoleCollision { l: l_star, k });
    }
    let mut iters = 0;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    let mut a = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS - iters {
        let v = g(a);
        if v.abs() < SOLVE_TOL {
            return Ok(a);
        }
        let h = 1e-7;
        let d = (g(a + h) - g(a - h)) / (2.0 * h);
        let next = a - v / d;
        a = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if g(a) < 0.0 {
            lo = a;
        } else {
            hi = a;
        }
    }
    Err(SphereCurveError::NoConvergence(MAX_ITERATIONS))
}

/// Damped Newton on (φ₀, a) with a central-difference Jacobian.
fn newton(a_star: f64, l_star: f64, k: u32) -> Result<SphereCurveParams, SphereCurveError> {
    let residual = |phi0: f64, amp: f64| {
        let (a, l) = area_length(phi0, amp, k);
        [a - a_star, l - l_star]
    };
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let mut x = [(1.0 - a_star / TAU).acos(), 0.1];
    if !inside(x[0], x[1]) {
        x[1] = 0.5 * x[0].min(PI - x[0]);
    }
    let mut r = residual(x[0], x[1]);
    let h = 1e-7;
    for _ in 0..MAX_ITERATIONS {
        if r[0].abs() < SOLVE_TOL && r[1].abs() < SOLVE_TOL {
            return finish(x, k);
        }
        let rp0 = residual(x[0] + h, x[1]);
        let rm0 = residual(x[0] - h, x[1]);
        let rp1 = residual(x[0], x[1] + h);
        let rm1 = residual(x[0], x[1] - h);
        let j = [
            [(rp0[0] - rm0[0]) / (2.0 * h), (rp1[0] - rm1[0]) / (2.0 * h)],
            [(rp0[1] - rm0[1]) / (2.0 * h), (rp1[1] - rm1[1]) / (2.0 * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            break;
        }
        let dx = [
            (j[1][1] * r[0] - j[0][1] * r[1]) / det,
            (-j[1][0] * r[0] + j[0][0] * r[1]) / det,
        ];
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-6 {
            let cand = [x[0] - step * dx[0], x[1] - step * dx[1]];
            if inside(cand[0], cand[1]) {
                let rc = residual(cand[0], cand[1]);
                if norm(rc) < norm(r) {
                    x = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Err(SphereCurveError::NoConvergence(MAX_ITERATIONS))
}

/// Fallback: for each amplitude solve φ₀ for the area, then solve the
/// amplitude for the length.
fn nested(a_star: f64, l_star: f64, k: u32) -> Result<SphereCurveParams, SphereCurveError> {
    // area is increasing in φ₀ (∂A/∂φ₀ = ∫ sin φ > 0)
    let phi0_for = |amp: f64| -> Option<f64> {
        let (mut lo, mut hi) = (amp + 1e-12, PI - amp - 1e-12);
        if lo >= hi {
            return None;
        }
        let area = |p: f64| area_length(p, amp, k).0 - a_star;
        if area(lo) > 0.0 || area(hi) < 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if area(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    };
    let g = |amp: f64| match phi0_for(amp) {
        Some(p) => area_length(p, amp, k).1 - l_star,
        None => f64::INFINITY,
    };
    let amp = bracket_and_solve(g, l_star, k)?;
    let phi0 = phi0_for(amp).ok_or(SphereCurveError::PoleCollision { l: l_star, k })?;
    finish([phi0, amp], k)
}

fn finish(x: [f64; 2], k: u32) -> Result<SphereCurveParams, SphereCurveError> {
    // a ↦ −a is a shift by π/k and changes neither area nor length
    let (phi0, amp) = (x[0], x[1].abs());
    SphereCurveParams::new(phi0, amp, k).map_err(|_| SphereCurveError::PoleCollision { l: 0.0, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(c: &SphereCurveParams, a: f64, l: f64) {
        assert!((curve_area(c) - a).abs() <= 1e-8, "area {} vs {a}", curve_area(c));
        assert!((curve_length(c) - l).abs() <= 1e-8, "length {} vs {l}", curve_length(c));
        // stable under refinement
        let p = 2 * c.panels();
        assert!((curve_area_with_panels(c, p) - a).abs() <= 1e-8);
        assert!((curve_length_with_panels(c, p) - l).abs() <= 1e-8);
    }

    #[test]
    fn circle_closed_forms() {
        for phi0 in [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0] {
            let c = SphereCurveParams::new(phi0, 0.0, 3).unwrap();
            assert!((curve_area(&c) - TAU * (1.0 - phi0.cos())).abs() < 1e-10);
            assert!((curve_length(&c) - TAU * phi0.sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn balanced_wobble_keeps_half_sphere() {
        let c = SphereCurveParams::new(FRAC_PI_2, 0.5, 3).unwrap();
        assert!((curve_area(&c) - TAU).abs() < 1e-10);
    }

    #[test]
    fn rejects_pole_touching_params() {
        assert!(SphereCurveParams::new(0.5, 0.5, 3).is_err());
        assert!(SphereCurveParams::new(1.0, 0.1, 1).is_err());
    }

    #[test]
    fn solve_great_circle() {
        let c = solve_curve(TAU, TAU, 3).unwrap();
        assert_eq!((c.phi0, c.amp), (FRAC_PI_2, 0.0));
    }

    #[test]
    fn solve_hexagonal_length() {
        let l = 2.0 * 3f64.sqrt() * PI;
        let c = solve_curve(TAU, l, 3).unwrap();
        assert_eq!(c.phi0, FRAC_PI_2);
        assert!(c.amp > 0.0);
        check(&c, TAU, l);
    }

    #[test]
    fn solve_circle_case() {
        let c = solve_curve(4.0 * PI / 3.0, 4.0 * 2f64.sqrt() * PI / 3.0, 5).unwrap();
        assert_eq!(c.amp, 0.0);
        assert!((c.phi0 - (1.0f64 / 3.0).acos()).abs() < 1e-14);
    }

    #[test]
    fn solve_general_case() {
        for (a, l, k) in [(PI, 8.0, 3), (2.0, 7.5, 4), (5.0, 12.0, 3), (0.7, 5.0, 5)] {
            let c = solve_curve(a, l, k).unwrap();
            check(&c, a, l);
        }
    }

    #[test]
    fn nested_fallback_agrees() {
        let c = nested(PI, 8.0, 3).unwrap();
        check(&c, PI, 8.0);
    }

    #[test]
    fn infeasible_and_pole_errors() {
        assert!(matches!(solve_curve(TAU, 5.0, 3), Err(SphereCurveError::Infeasible { .. })));
        assert!(matches!(solve_curve(7.0, 9.0, 3), Err(SphereCurveError::Infeasible { .. })));
        assert!(matches!(
            solve_curve(TAU, 60.0, 2),
            Err(SphereCurveError::PoleCollision { .. })
        ));
    }
}
