//! Modular-group reduction of lattice parameters and selection of a
//! representative τ′ that a Hopf torus can realize.
//!
//! A lattice ℤ ⊕ τℤ is realizable as the preimage of a closed curve on S²
//! enclosing area A = 4π·Re τ′ with length L = 4π·Im τ′ when the sphere
//! isoperimetric inequality L² ≥ A(4π − A) holds, i.e. Im² ≥ Re(1 − Re).
//!
//! Everything works on floating τ. CM parameters additionally have an exact
//! form ([`CmTau`]: rational real part, rational Im²) which the lattice code
//! uses for exact shear denominators and exact circle detection.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Entry bound for the embedding-class search.
pub const SEARCH_BOUND: i64 = 12;

const FD_TOL: f64 = 1e-12;
const CIRCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModClassError {
    #[error("modclass: tau must lie in the upper half plane (got Im = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("modclass: no feasible embedding class with matrix entries bounded by {0}")]
    NoFeasibleClass(i64),
}

/// An element of SL₂(ℤ) acting by τ ↦ (aτ + b)/(cτ + d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    /// τ ↦ τ + 1
    pub const T: Sl2 = Sl2 { a: 1, b: 1, c: 0, d: 1 };
    /// τ ↦ −1/τ
    pub const S: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Sl2> {
        (a * d - b * c == 1).then_some(Sl2 { a, b, c, d })
    }

    pub fn translation(k: i64) -> Sl2 {
        Sl2 { a: 1, b: k, c: 0, d: 1 }
    }

    /// Sum of absolute entries.
    pub fn size(&self) -> i64 {
        self.a.abs() + self.b.abs() + self.c.abs() + self.d.abs()
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix product `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Representative of ±g with c > 0, or c = 0 and d > 0.
    pub fn normalized(&self) -> Sl2 {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            Sl2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            *self
        }
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// Integer matrix taking coordinates over the basis {1, τ} to coordinates
    /// over {1, gτ}, after rescaling the lattice by 1/(cτ + d).
    pub fn coordinate_change(&self) -> [[i64; 2]; 2] {
        [[self.a, -self.b], [-self.c, self.d]]
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Reflection τ ↦ −conj(τ), which maps the upper half plane to itself.
pub fn mirror(tau: Complex64) -> Complex64 {
    Complex64::new(-tau.re, tau.im)
}

/// Reduce τ into the standard fundamental domain |τ| ≥ 1, Re τ ∈ (−1/2, 1/2],
/// with Re τ ≥ 0 on the unit circle. Returns the reduced value and the matrix
/// g with τ_fd = g·τ.
pub fn reduce_to_fundamental(tau: Complex64) -> Result<(Complex64, Sl2), ModClassError> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(ModClassError::NotInUpperHalfPlane(tau.im));
    }
    let mut cur = tau;
    let mut g = Sl2::IDENTITY;
    loop {
        let k = (cur.re - 0.5 - FD_TOL).ceil() as i64;
        if k != 0 {
            let t = Sl2::translation(-k);
            cur = t.apply(cur);
            g = t.compose(&g);
        }
        if cur.norm_sqr() < 1.0 - FD_TOL {
            cur = Sl2::S.apply(cur);
            g = Sl2::S.compose(&g);
        } else {
            break;
        }
    }
    if (cur.norm_sqr() - 1.0).abs() <= FD_TOL && cur.re < -FD_TOL {
        cur = Sl2::S.apply(cur);
        g = Sl2::S.compose(&g);
    }
    Ok((cur, g))
}

type Q = Ratio<i128>;

/// A CM lattice parameter held exactly: Re τ ∈ ℚ and (Im τ)² ∈ ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CmTau {
    re: Q,
    im_sq: Q,
}

impl CmTau {
    pub fn new(re: Ratio<i128>, im_sq: Ratio<i128>) -> Self {
        assert!(im_sq > Q::zero(), "Im tau must be positive");
        CmTau { re, im_sq }
    }

    /// The root (t + √(t² − 4p))/2 of x² − t·x + p with positive imaginary part.
    pub fn from_trace_norm(t: i64, p: i64) -> Self {
        let disc = 4 * p as i128 - (t as i128) * (t as i128);
        CmTau::new(Q::new(t as i128, 2), Q::new(disc, 4))
    }

    pub fn re(&self) -> Ratio<i128> {
        self.re
    }

    pub fn im_sq(&self) -> Ratio<i128> {
        self.im_sq
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_f64(&self.re), ratio_f64(&self.im_sq).sqrt())
    }

    pub fn norm_sqr(&self) -> Q {
        self.re * self.re + self.im_sq
    }

    pub fn apply(&self, g: &Sl2) -> CmTau {
        let (a, b, c, d) = (g.a as i128, g.b as i128, g.c as i128, g.d as i128);
        let n2 = self.norm_sqr();
        let denom = n2 * (c * c) + self.re * (2 * c * d) + Q::from_integer(d * d);
        let re = (n2 * (a * c) + self.re * (a * d + b * c) + Q::from_integer(b * d)) / denom;
        let im_sq = self.im_sq / (denom * denom);
        CmTau { re, im_sq }
    }

    pub fn mirror(&self) -> CmTau {
        CmTau { re: -self.re, im_sq: self.im_sq }
    }

    /// Exact counterpart of [`reduce_to_fundamental`].
    pub fn reduce(&self) -> (CmTau, Sl2) {
        let half = Q::new(1, 2);
        let one = Q::from_integer(1);
        let mut cur = self.clone();
        let mut g = Sl2::IDENTITY;
        loop {
            let k = (cur.re - half).ceil().to_integer() as i64;
            if k != 0 {
                let t = Sl2::translation(-k);
                cur = cur.apply(&t);
                g = t.compose(&g);
            }
            if cur.norm_sqr() < one {
                cur = cur.apply(&Sl2::S);
                g = Sl2::S.compose(&g);
            } else {
                break;
            }
        }
        if cur.norm_sqr() == one && cur.re.is_negative() {
            cur = cur.apply(&Sl2::S);
            g = Sl2::S.compose(&g);
        }
        (cur, g)
    }
}

fn ratio_f64(r: &Q) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// A representative τ′ feasible for the Hopf-torus construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingClass {
    pub tau_fd: Complex64Repr,
    pub tau_prime: Complex64Repr,
    /// τ′ = transform · (mirrored ? −conj τ_fd : τ_fd)
    pub transform: Sl2,
    pub mirrored: bool,
    pub circle_flag: bool,
    pub a_star: f64,
    pub l_star: f64,
    /// Re τ′ as a reduced fraction (numerator, denominator) when known exactly.
    pub shear: Option<(i64, i64)>,
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex64Repr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex64Repr {
    fn from(z: Complex64) -> Self {
        Complex64Repr { re: z.re, im: z.im }
    }
}

impl From<Complex64Repr> for Complex64 {
    fn from(z: Complex64Repr) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl EmbeddingClass {
    pub fn tau_prime(&self) -> Complex64 {
        self.tau_prime.into()
    }

    /// Applies the recorded mirror and transform to a parameter.
    pub fn map_tau(&self, tau: Complex64) -> Complex64 {
        let src = if self.mirrored { mirror(tau) } else { tau };
        self.transform.apply(src)
    }

    /// Integer coordinate map from basis {1, τ_fd} to basis {1, τ′}
    /// (mirror first, then the SL₂ change of basis).
    pub fn coordinate_change(&self) -> [[i64; 2]; 2] {
        let m = if self.mirrored { [[1, 0], [0, -1]] } else { [[1, 0], [0, 1]] };
        mat_mul(&self.transform.coordinate_change(), &m)
    }
}

pub(crate) fn mat_mul(x: &[[i64; 2]; 2], y: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// Candidate parameter values the search can rank.
trait Parameter: Clone {
    fn act(&self, g: &Sl2) -> Self;
    fn reflect(&self) -> Self;
    /// `None` if infeasible, otherwise whether it lies on the circle boundary.
    fn feasibility(&self) -> Option<bool>;
    fn cmp_im(&self, other: &Self) -> Ordering;
    fn value(&self) -> Complex64;
}

impl Parameter for Complex64 {
    fn act(&self, g: &Sl2) -> Self {
        g.apply(*self)
    }

    fn reflect(&self) -> Self {
        mirror(*self)
    }

    fn feasibility(&self) -> Option<bool> {
        let (re, im) = (self.re, self.im);
        if !(re > FD_TOL && re <= 0.5 + FD_TOL) {
            return None;
        }
        let gap = im * im - re * (1.0 - re);
        if gap < -FD_TOL {
            return None;
        }
        Some(gap.abs() <= CIRCLE_TOL)
    }

    fn cmp_im(&self, other: &Self) -> Ordering {
        let scale = self.im.abs().max(other.im.abs());
        if (self.im - other.im).abs() <= FD_TOL * scale {
            Ordering::Equal
        } else {
            self.im.total_cmp(&other.im)
        }
    }

    fn value(&self) -> Complex64 {
        *self
    }
}

impl Parameter for CmTau {
    fn act(&self, g: &Sl2) -> Self {
        self.apply(g)
    }

    fn reflect(&self) -> Self {
        self.mirror()
    }

    fn feasibility(&self) -> Option<bool> {
        let half = Q::new(1, 2);
        if !(self.re.is_positive() && self.re <= half) {
            return None;
        }
        let bound = self.re * (Q::from_integer(1) - self.re);
        match self.im_sq.cmp(&bound) {
            Ordering::Less => None,
            Ordering::Equal => Some(true),
            Ordering::Greater => Some(false),
        }
    }

    fn cmp_im(&self, other: &Self) -> Ordering {
        self.im_sq.cmp(&other.im_sq)
    }

    fn value(&self) -> Complex64 {
        self.to_complex()
    }
}

struct Found<P> {
    tau: P,
    g: Sl2,
    mirrored: bool,
    circle: bool,
}

/// Deterministic search over ±g ∈ SL₂(ℤ) with entries in [−12, 12] and an
/// optional mirror. Preference: circle boundary, then largest Im τ′, then
/// unmirrored, then the smallest Σ|entries|, then the lexicographically
/// smallest (a, b, c, d).
fn search<P: Parameter>(tau_fd: &P) -> Option<Found<P>> {
    let bound = SEARCH_BOUND;
    let mut best: Option<Found<P>> = None;
    for mirrored in [false, true] {
        let src = if mirrored { tau_fd.reflect() } else { tau_fd.clone() };
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in 0..=bound {
                    for d in -bound..=bound {
                        if a * d - b * c != 1 || (c == 0 && d <= 0) {
                            continue;
                        }
                        let g = Sl2 { a, b, c, d };
                        let cand = src.act(&g);
                        let Some(circle) = cand.feasibility() else {
                            continue;
                        };
                        let better = match &best {
                            None => true,
                            Some(cur) => circle
                                .cmp(&cur.circle)
                                .then_with(|| cand.cmp_im(&cur.tau))
                                .then_with(|| cur.mirrored.cmp(&mirrored))
                                .then_with(|| cur.g.size().cmp(&g.size()))
                                .then_with(|| cur.g.cmp(&g))
                                .is_gt(),
                        };
                        if better {
                            best = Some(Found { tau: cand, g, mirrored, circle });
                        }
                    }
                }
            }
        }
    }
    best
}

fn class_from<P: Parameter>(tau_fd: &P, found: Found<P>, shear: Option<(i64, i64)>) -> EmbeddingClass {
    let tp = found.tau.value();
    EmbeddingClass {
        tau_fd: tau_fd.value().into(),
        tau_prime: tp.into(),
        transform: found.g,
        mirrored: found.mirrored,
        circle_flag: found.circle,
        a_star: 4.0 * PI * tp.re,
        l_star: 4.0 * PI * tp.im,
        shear,
    }
}

/// Embedding class of a floating τ in the fundamental domain. The shear
/// fraction is recovered only if Re τ′ is within 1e-9 of a fraction with
/// denominator at most 10⁴.
pub fn find_embedding_class(tau_fd: Complex64) -> Result<EmbeddingClass, ModClassError> {
    if !(tau_fd.im > 0.0) {
        return Err(ModClassError::NotInUpperHalfPlane(tau_fd.im));
    }
    let found = search(&tau_fd).ok_or(ModClassError::NoFeasibleClass(SEARCH_BOUND))?;
    let shear = rational_approx(found.tau.re, 10_000, 1e-9);
    Ok(class_from(&tau_fd, found, shear))
}

/// Embedding class of an exact CM parameter; circle detection and the shear
/// fraction are exact.
pub fn find_embedding_class_exact(tau_fd: &CmTau) -> Result<EmbeddingClass, ModClassError> {
    let found = search(tau_fd).ok_or(ModClassError::NoFeasibleClass(SEARCH_BOUND))?;
    let re = found.tau.re;
    let shear = Some((*re.numer() as i64, *re.denom() as i64));
    Ok(class_from(tau_fd, found, shear))
}

/// Best rational approximation p/q (q ≤ max_den) within `tol`, via continued fractions.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}
