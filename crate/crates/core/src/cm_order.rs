//! Arithmetic in the order ℤ[α] generated by a Frobenius root α, the fixed
//! subgroups of z ↦ αⁿz on ℂ/ℤ[α], and their group structure via Smith
//! normal form.
//!
//! Lattice points are kept as exact rationals over the basis {1, τ} with
//! τ = g·α reduced to the standard fundamental domain; floats appear only
//! when a point is converted for output.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::modclass::{CmTau, Sl2};
use crate::weierstrass::{count_points_limited, CurveError, CurveParams};

/// Largest fixed-point set [`fixed_lattice`] will enumerate.
pub const MAX_LEVEL_POINTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("cm-order: integer overflow")]
    Overflow,
    #[error("cm-order: matrix is singular")]
    SingularMatrix,
    #[error("cm-order: level has {0} points, above the cap of {MAX_LEVEL_POINTS}")]
    TooManyPoints(u64),
    #[error("cm-order: trace {a_p} violates the Hasse bound for p = {p}")]
    HasseViolation { a_p: i64, p: u64 },
    #[error("cm-order: norm identity failed at n = {n}: N(alpha^n - 1) = {norm}, recurrence gives {count}")]
    NormMismatch { n: u32, norm: i64, count: i64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The order ℤ[α] with α² = t·α − p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadOrder {
    pub t: i64,
    pub p: i64,
}

impl QuadOrder {
    pub fn discriminant(&self) -> i64 {
        self.t * self.t - 4 * self.p
    }

    /// α as a complex number, taking the root with positive imaginary part.
    pub fn alpha_complex(&self) -> Complex64 {
        let d = (-self.discriminant()) as f64;
        Complex64::new(self.t as f64 / 2.0, d.sqrt() / 2.0)
    }

    /// Matrix of multiplication by α on the basis {1, α} (columns are images).
    pub fn alpha_matrix(&self) -> [[i64; 2]; 2] {
        [[0, -self.p], [1, self.t]]
    }
}

/// x + y·α in ℤ[α].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
    pub order: QuadOrder,
}

impl QuadInt {
    pub fn new(x: i64, y: i64, order: QuadOrder) -> Self {
        QuadInt { x, y, order }
    }

    pub fn one(order: QuadOrder) -> Self {
        QuadInt::new(1, 0, order)
    }

    pub fn alpha(order: QuadOrder) -> Self {
        QuadInt::new(0, 1, order)
    }

    pub fn add(&self, o: &QuadInt) -> Result<QuadInt, CmError> {
        Ok(QuadInt::new(
            self.x.checked_add(o.x).ok_or(CmError::Overflow)?,
            self.y.checked_add(o.y).ok_or(CmError::Overflow)?,
            self.order,
        ))
    }

    pub fn sub(&self, o: &QuadInt) -> Result<QuadInt, CmError> {
        Ok(QuadInt::new(
            self.x.checked_sub(o.x).ok_or(CmError::Overflow)?,
            self.y.checked_sub(o.y).ok_or(CmError::Overflow)?,
            self.order,
        ))
    }

    /// (x₁ + y₁α)(x₂ + y₂α) = (x₁x₂ − p·y₁y₂) + (x₁y₂ + x₂y₁ + t·y₁y₂)α
    pub fn mul(&self, o: &QuadInt) -> Result<QuadInt, CmError> {
        let QuadOrder { t, p } = self.order;
        let x1x2 = i128::from(self.x) * i128::from(o.x);
        let y1y2 = i128::from(self.y) * i128::from(o.y);
        let cross = i128::from(self.x) * i128::from(o.y) + i128::from(o.x) * i128::from(self.y);
        let x = x1x2 - i128::from(p) * y1y2;
        let y = cross + i128::from(t) * y1y2;
        Ok(QuadInt::new(narrow(x)?, narrow(y)?, self.order))
    }

    pub fn pow(&self, n: u32) -> Result<QuadInt, CmError> {
        let mut acc = QuadInt::one(self.order);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// N(x + yα) = x² + t·x·y + p·y².
    pub fn norm(&self) -> Result<i64, CmError> {
        let (x, y) = (i128::from(self.x), i128::from(self.y));
        let QuadOrder { t, p } = self.order;
        narrow(x * x + i128::from(t) * x * y + i128::from(p) * y * y)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.order.alpha_complex() * self.y as f64 + self.x as f64
    }

    /// Matrix of multiplication by self on the basis {1, α}.
    pub fn mult_matrix(&self) -> [[i64; 2]; 2] {
        let QuadOrder { t, p } = self.order;
        [[self.x, -p * self.y], [self.y, self.x + t * self.y]]
    }
}

fn narrow(v: i128) -> Result<i64, CmError> {
    i64::try_from(v).map_err(|_| CmError::Overflow)
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}a (a^2 = {}a - {})", self.x, self.y, self.order.t, self.order.p)
    }
}

/// α written over the maximal order of ℚ(√D₀): α = a + b·ξ, with ξ = √(D₀/4)
/// for D₀ ≡ 0 (mod 4) and ξ = (−1 + √D₀)/2 otherwise (so ξ = i for D₀ = −4
/// and ξ = ω = e^{2πi/3} for D₀ = −3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalOrderForm {
    pub fundamental_discriminant: i64,
    pub conductor: i64,
    pub a: i64,
    pub b: i64,
}

impl MaximalOrderForm {
    pub fn xi(&self) -> Complex64 {
        let d0 = self.fundamental_discriminant;
        if d0 % 4 == 0 {
            Complex64::new(0.0, ((-d0 / 4) as f64).sqrt())
        } else {
            Complex64::new(-0.5, ((-d0) as f64).sqrt() / 2.0)
        }
    }

    pub fn xi_name(&self) -> String {
        match self.fundamental_discriminant {
            -4 => "i".into(),
            -3 => "w".into(),
            d0 if d0 % 4 == 0 => format!("sqrt({})", d0 / 4),
            d0 => format!("(-1+sqrt({d0}))/2"),
        }
    }
}

impl fmt::Display for MaximalOrderForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < 0 { '-' } else { '+' };
        write!(f, "{} {} {}*{}", self.a, sign, self.b.abs(), self.xi_name())
    }
}

/// Writes D = f²·D₀ with D₀ a fundamental discriminant.
pub fn fundamental_discriminant(d: i64) -> (i64, i64) {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "not a negative discriminant: {d}");
    let mut sq = 1i64;
    let mut rest = -d;
    let mut k = 2i64;
    while k * k <= rest {
        while rest % (k * k) == 0 {
            rest /= k * k;
            sq *= k;
        }
        k += 1;
    }
    // -rest is squarefree; it is fundamental if ≡ 1 mod 4, else use 4·(-rest)
    let d0 = -rest;
    if d0.rem_euclid(4) == 1 {
        (d0, sq)
    } else {
        (4 * d0, sq / 2)
    }
}

pub fn maximal_order_form(order: &QuadOrder) -> MaximalOrderForm {
    let (d0, f) = fundamental_discriminant(order.discriminant());
    let (a, b) = if d0 % 4 == 0 {
        // α = (t + f√D₀)/2 = t/2 + f·√(D₀/4)
        (order.t / 2, f)
    } else {
        // √D₀ = 2ξ + 1
        ((order.t + f) / 2, f)
    };
    MaximalOrderForm { fundamental_discriminant: d0, conductor: f, a, b }
}

/// Trace of Frobenius and the Weil number α of a curve over 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrobeniusData {
    pub a_p: i64,
    pub alpha: QuadInt,
    pub ordinary: bool,
}

pub fn frobenius_alpha(curve: &CurveParams) -> Result<FrobeniusData, CmError> {
    frobenius_alpha_limited(curve, crate::weierstrass::DEFAULT_ORACLE_LIMIT)
}

pub fn frobenius_alpha_limited(curve: &CurveParams, limit: u64) -> Result<FrobeniusData, CmError> {
    let p = curve.p();
    let count = count_points_limited(curve, 1, limit)?;
    let a_p = p as i64 + 1 - count as i64;
    if (a_p as i128).pow(2) > 4 * p as i128 {
        return Err(CmError::HasseViolation { a_p, p });
    }
    let order = QuadOrder { t: a_p, p: p as i64 };
    Ok(FrobeniusData {
        a_p,
        alpha: QuadInt::alpha(order),
        ordinary: a_p.rem_euclid(p as i64) != 0,
    })
}

/// #E(𝔽_{pⁿ}) for n = 1..=n_max from a_k = a₁·a_{k−1} − p·a_{k−2}, a₀ = 2,
/// cross-checked against N(αⁿ − 1).
pub fn weil_counts(a_p: i64, p: u64, n_max: u32) -> Result<Vec<u64>, CmError> {
    if (a_p as i128).pow(2) > 4 * p as i128 {
        return Err(CmError::HasseViolation { a_p, p });
    }
    let p_i = i64::try_from(p).map_err(|_| CmError::Overflow)?;
    let order = QuadOrder { t: a_p, p: p_i };
    let alpha = QuadInt::alpha(order);
    let one = QuadInt::one(order);
    let (mut prev, mut cur) = (2i64, a_p);
    let mut power = alpha;
    let mut p_pow = p_i;
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            let next = a_p
                .checked_mul(cur)
                .and_then(|x| x.checked_sub(p_i.checked_mul(prev)?))
                .ok_or(CmError::Overflow)?;
            (prev, cur) = (cur, next);
            power = power.mul(&alpha)?;
            p_pow = p_pow.checked_mul(p_i).ok_or(CmError::Overflow)?;
        }
        let count = p_pow
            .checked_add(1)
            .and_then(|x| x.checked_sub(cur))
            .ok_or(CmError::Overflow)?;
        let norm = power.sub(&one)?.norm()?;
        if norm != count {
            return Err(CmError::NormMismatch { n, norm, count });
        }
        out.push(count as u64);
    }
    Ok(out)
}

/// Smith normal form of a nonsingular 2×2 integer matrix: `u · m · v = diag(d1, d2)`
/// with u, v unimodular, d1 | d2, both positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Snf {
    pub d1: i64,
    pub d2: i64,
    pub u: [[i64; 2]; 2],
    pub v: [[i64; 2]; 2],
}

type M2 = [[i128; 2]; 2];

fn swap_rows(m: &mut M2, u: &mut M2) {
    m.swap(0, 1);
    u.swap(0, 1);
}

fn swap_cols(m: &mut M2, v: &mut M2) {
    for row in m.iter_mut().chain(v.iter_mut()) {
        row.swap(0, 1);
    }
}

/// row[dst] -= k·row[src]
fn row_op(m: &mut M2, u: &mut M2, dst: usize, src: usize, k: i128) {
    for j in 0..2 {
        m[dst][j] -= k * m[src][j];
        u[dst][j] -= k * u[src][j];
    }
}

/// col[dst] -= k·col[src]
fn col_op(m: &mut M2, v: &mut M2, dst: usize, src: usize, k: i128) {
    for i in 0..2 {
        m[i][dst] -= k * m[i][src];
        v[i][dst] -= k * v[i][src];
    }
}

pub fn snf_2x2(m: [[i64; 2]; 2]) -> Result<Snf, CmError> {
    let mut a: M2 = [
        [m[0][0] as i128, m[0][1] as i128],
        [m[1][0] as i128, m[1][1] as i128],
    ];
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] == 0 {
        return Err(CmError::SingularMatrix);
    }
    let mut u: M2 = [[1, 0], [0, 1]];
    let mut v: M2 = [[1, 0], [0, 1]];
    loop {
        // move the smallest nonzero entry to the pivot
        let (mut bi, mut bj) = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                if a[i][j] != 0 && (a[bi][bj] == 0 || a[i][j].abs() < a[bi][bj].abs()) {
                    (bi, bj) = (i, j);
                }
            }
        }
        if bi == 1 {
            swap_rows(&mut a, &mut u);
        }
        if bj == 1 {
            swap_cols(&mut a, &mut v);
        }
        let piv = a[0][0];
        let q = a[1][0].div_euclid(piv);
        row_op(&mut a, &mut u, 1, 0, q);
        let q = a[0][1].div_euclid(piv);
        col_op(&mut a, &mut v, 1, 0, q);
        if a[1][0] != 0 || a[0][1] != 0 {
            continue;
        }
        if a[1][1] % a[0][0] != 0 {
            // fold row 1 into row 0 and eliminate again
            row_op(&mut a, &mut u, 0, 1, -1);
            continue;
        }
        break;
    }
    for i in 0..2 {
        if a[i][i] < 0 {
            for j in 0..2 {
                a[i][j] = -a[i][j];
                u[i][j] = -u[i][j];
            }
        }
    }
    let cast = |x: M2| -> Result<[[i64; 2]; 2], CmError> {
        Ok([[narrow(x[0][0])?, narrow(x[0][1])?], [narrow(x[1][0])?, narrow(x[1][1])?]])
    };
    Ok(Snf {
        d1: narrow(a[0][0])?,
        d2: narrow(a[1][1])?,
        u: cast(u)?,
        v: cast(v)?,
    })
}

/// The lattice parameter τ = g·α of ℤ[α] = ℤ ⊕ αℤ, reduced to the
/// fundamental domain, with the matrix g that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Tau {
    pub order: QuadOrder,
    pub exact: CmTau,
    pub from_alpha: Sl2,
}

impl Tau {
    pub fn for_order(order: QuadOrder) -> Tau {
        let (exact, from_alpha) = CmTau::from_trace_norm(order.t, order.p).reduce();
        Tau { order, exact, from_alpha }
    }

    pub fn value(&self) -> Complex64 {
        self.exact.to_complex()
    }

    /// Coordinate change from {1, α} to {1, τ}.
    pub fn basis_change(&self) -> [[i64; 2]; 2] {
        self.from_alpha.coordinate_change()
    }

    /// Multiplication by α in {1, τ} coordinates.
    pub fn alpha_action(&self) -> [[i64; 2]; 2] {
        let b = self.basis_change();
        let b_inv = [[b[1][1], -b[0][1]], [-b[1][0], b[0][0]]];
        let a = self.order.alpha_matrix();
        crate::modclass::mat_mul(&crate::modclass::mat_mul(&b, &a), &b_inv)
    }
}

pub type Rat = Ratio<i64>;

/// A point of ℂ/Λ in coordinates over {1, τ}, each in [0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub coords: [Rat; 2],
}

impl LatticePoint {
    pub fn to_complex(&self, tau: Complex64) -> Complex64 {
        let [r, s] = self.coords;
        tau * rat_f64(&s) + rat_f64(&r)
    }

    pub fn reduced(coords: [Rat; 2]) -> LatticePoint {
        LatticePoint { coords: [frac(coords[0]), frac(coords[1])] }
    }
}

pub fn rat_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

fn frac(r: Rat) -> Rat {
    r - r.floor()
}

pub(crate) fn apply_int(m: &[[i64; 2]; 2], c: [Rat; 2]) -> [Rat; 2] {
    [
        c[0] * m[0][0] + c[1] * m[0][1],
        c[0] * m[1][0] + c[1] * m[1][1],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CayleyEdge {
    pub from: usize,
    pub to: usize,
    pub generator: usize,
}

/// The fixed subgroup of αⁿ on ℂ/Λ, i.e. (αⁿ − 1)⁻¹Λ/Λ.
#[derive(Clone, Debug)]
pub struct LatticeLevel {
    pub n: u32,
    pub beta: QuadInt,
    pub count: u64,
    pub d1: u64,
    pub d2: u64,
    pub tau: Tau,
    /// Lexicographic in the SNF labels (j, k), j < d1, k < d2; index 0 is the identity.
    pub points: Vec<LatticePoint>,
    pub labels: Vec<(u64, u64)>,
    /// Generator steps over {1, τ}, chosen as the shortest representative.
    pub generators: Vec<[Rat; 2]>,
    pub edges: Vec<CayleyEdge>,
}

impl LatticeLevel {
    pub fn index_of(&self, j: u64, k: u64) -> usize {
        (j * self.d2 + k) as usize
    }

    /// True if z ↦ αz mod Λ permutes the point set, checked exactly.
    pub fn alpha_permutes_points(&self) -> bool {
        let action = self.tau.alpha_action();
        let set: HashSet<LatticePoint> = self.points.iter().copied().collect();
        let image: HashSet<LatticePoint> = self
            .points
            .iter()
            .map(|pt| LatticePoint::reduced(apply_int(&action, pt.coords)))
            .collect();
        image.len() == self.points.len() && image == set
    }

    /// True if every point z satisfies (αⁿ − 1)·z ∈ Λ exactly.
    pub fn points_are_fixed(&self) -> bool {
        let b = self.tau.basis_change();
        let b_inv = [[b[1][1], -b[0][1]], [-b[1][0], b[0][0]]];
        let m = crate::modclass::mat_mul(
            &crate::modclass::mat_mul(&b, &self.beta.mult_matrix()),
            &b_inv,
        );
        self.points.iter().all(|pt| {
            apply_int(&m, pt.coords)
                .iter()
                .all(|c| c.is_integer())
        })
    }

    /// Predicted #E[m] for ℤ/d1 ⊕ ℤ/d2.
    pub fn predicted_torsion(&self, m: u64) -> u64 {
        m.gcd(&self.d1) * m.gcd(&self.d2)
    }
}

/// β = αⁿ − 1, the level size N(β), and the Smith form of multiplication by β,
/// without enumerating points.
pub fn level_invariants(alpha: &QuadInt, n: u32) -> Result<(QuadInt, u64, Snf), CmError> {
    let beta = alpha.pow(n)?.sub(&QuadInt::one(alpha.order))?;
    let count = beta.norm()?;
    if count == 0 {
        return Err(CmError::SingularMatrix);
    }
    let snf = snf_2x2(beta.mult_matrix())?;
    Ok((beta, count as u64, snf))
}

/// Enumerates the fixed points of z ↦ αⁿz on ℂ/ℤ[α] as a scaled lattice.
pub fn fixed_lattice(alpha: &QuadInt, n: u32, tau: &Tau) -> Result<LatticeLevel, CmError> {
    assert!(n >= 1, "extension degree must be positive");
    let (beta, count, snf) = level_invariants(alpha, n)?;
    if count > MAX_LEVEL_POINTS {
        return Err(CmError::TooManyPoints(count));
    }
    let (d1, d2) = (snf.d1 as u64, snf.d2 as u64);
    debug_assert_eq!(d1 * d2, count);
    let basis = tau.basis_change();
    // z = B·V·(j/d1, k/d2) in {1, τ} coordinates
    let bv = crate::modclass::mat_mul(&basis, &snf.v);
    let to_tau = |j: u64, k: u64| -> [Rat; 2] {
        apply_int(&bv, [Rat::new(j as i64, d1 as i64), Rat::new(k as i64, d2 as i64)])
    };
    let mut points = Vec::with_capacity(count as usize);
    let mut labels = Vec::with_capacity(count as usize);
    for j in 0..d1 {
        for k in 0..d2 {
            points.push(LatticePoint::reduced(to_tau(j, k)));
            labels.push((j, k));
        }
    }
    let tau_c = tau.value();
    let mut generators = Vec::new();
    if d1 > 1 {
        generators.push(shortest(to_tau(1, 0), tau_c));
    }
    generators.push(shortest(to_tau(0, 1), tau_c));
    let mut level = LatticeLevel {
        n,
        beta,
        count,
        d1,
        d2,
        tau: tau.clone(),
        points,
        labels,
        generators,
        edges: Vec::new(),
    };
    level.edges = cayley_edges(&level);
    Ok(level)
}

/// Representative of c mod ℤ² of least Euclidean length in ℂ.
fn shortest(c: [Rat; 2], tau: Complex64) -> [Rat; 2] {
    let base = [frac(c[0]), frac(c[1])];
    let mut best = base;
    let mut best_len = f64::INFINITY;
    for di in -2..=1 {
        for dj in -2..=1 {
            let cand = [base[0] + Rat::from_integer(di), base[1] + Rat::from_integer(dj)];
            let len = (tau * rat_f64(&cand[1]) + rat_f64(&cand[0])).norm();
            if len < best_len - 1e-12 {
                best = cand;
                best_len = len;
            }
        }
    }
    best
}

/// One outgoing edge per point per generator; generator 0 steps j when
/// d1 > 1, the last generator steps k.
pub fn cayley_edges(level: &LatticeLevel) -> Vec<CayleyEdge> {
    let (d1, d2) = (level.d1, level.d2);
    let mut edges = Vec::with_capacity(level.points.len() * level.generators.len());
    for j in 0..d1 {
        for k in 0..d2 {
            let from = level.index_of(j, k);
            let mut gen = 0;
            if d1 > 1 {
                edges.push(CayleyEdge { from, to: level.index_of((j + 1) % d1, k), generator: gen });
                gen += 1;
            }
            edges.push(CayleyEdge { from, to: level.index_of(j, (k + 1) % d2), generator: gen });
        }
    }
    edges
}

/// Tests whether the SNF output is consistent with the input matrix.
pub fn snf_is_valid(m: [[i64; 2]; 2], snf: &Snf) -> bool {
    let to128 = |x: [[i64; 2]; 2]| -> M2 {
        [[x[0][0] as i128, x[0][1] as i128], [x[1][0] as i128, x[1][1] as i128]]
    };
    let mul = |x: M2, y: M2| -> M2 {
        let mut o = [[0i128; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                o[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        o
    };
    let det = |x: M2| x[0][0] * x[1][1] - x[0][1] * x[1][0];
    let (u, v) = (to128(snf.u), to128(snf.v));
    let d = mul(mul(u, to128(m)), v);
    det(u).abs() == 1
        && det(v).abs() == 1
        && d == [[snf.d1 as i128, 0], [0, snf.d2 as i128]]
        && snf.d1 > 0
        && snf.d2 % snf.d1 == 0
}

impl Snf {
    pub fn invariants(&self) -> (i64, i64) {
        (self.d1, self.d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::validate_curve;

    fn gauss_order() -> QuadOrder {
        QuadOrder { t: -4, p: 5 }
    }

    #[test]
    fn norm_is_multiplicative() {
        let o = QuadOrder { t: 3, p: 7 };
        let u = QuadInt::new(4, -9, o);
        let v = QuadInt::new(-2, 5, o);
        assert_eq!(u.mul(&v).unwrap().norm().unwrap(), u.norm().unwrap() * v.norm().unwrap());
        assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let o = QuadOrder { t: 1, p: 3 };
        let big = QuadInt::new(i64::MAX - 1, i64::MAX / 2, o);
        assert_eq!(big.mul(&big), Err(CmError::Overflow));
        assert_eq!(big.add(&big), Err(CmError::Overflow));
    }

    #[test]
    fn frobenius_of_gallery_curves() {
        let f = frobenius_alpha(&validate_curve(3, 0, 5).unwrap()).unwrap();
        assert_eq!(f.a_p, -4);
        assert!(f.ordinary);
        let form = maximal_order_form(&f.alpha.order);
        assert_eq!((form.fundamental_discriminant, form.a, form.b), (-4, -2, 1));
        assert!((f.alpha.to_complex() - Complex64::new(-2.0, 1.0)).norm() < 1e-15);

        let f = frobenius_alpha(&validate_curve(0, 3, 7).unwrap()).unwrap();
        assert_eq!(f.a_p, -5);
        let form = maximal_order_form(&f.alpha.order);
        assert_eq!((form.fundamental_discriminant, form.a, form.b), (-3, -2, 1));
        assert_eq!(form.to_string(), "-2 + 1*w");
    }

    #[test]
    fn discriminant_of_sqrt_minus_two_curve() {
        let f = frobenius_alpha(&validate_curve(1, 3, 11).unwrap()).unwrap();
        let d = f.a_p * f.a_p - 44;
        // a_p² − 44 = −8k²
        assert_eq!(d % 8, 0);
        let k2 = -d / 8;
        let k = (k2 as f64).sqrt().round() as i64;
        assert_eq!(k * k, k2);
        assert_eq!(fundamental_discriminant(d).0, -8);
    }

    #[test]
    fn fundamental_discriminants() {
        assert_eq!(fundamental_discriminant(-4), (-4, 1));
        assert_eq!(fundamental_discriminant(-3), (-3, 1));
        assert_eq!(fundamental_discriminant(-28), (-7, 2));
        assert_eq!(fundamental_discriminant(-16), (-4, 2));
        assert_eq!(fundamental_discriminant(-8), (-8, 1));
        assert_eq!(fundamental_discriminant(-11), (-11, 1));
        assert_eq!(fundamental_discriminant(-72), (-8, 3));
    }

    #[test]
    fn weil_examples() {
        let c = weil_counts(-4, 5, 5).unwrap();
        assert_eq!(c, vec![10, 20, 130, 640, 3050]);
        assert_eq!(weil_counts(-5, 7, 4).unwrap()[3], 2379);
        assert_eq!(weil_counts(5, 5, 1), Err(CmError::HasseViolation { a_p: 5, p: 5 }));
    }

    #[test]
    fn alpha5_minus_one() {
        let a = QuadInt::alpha(gauss_order());
        let b = a.pow(5).unwrap().sub(&QuadInt::one(gauss_order())).unwrap();
        let z = b.to_complex();
        assert!((z - Complex64::new(37.0, 41.0)).norm() < 1e-9);
        assert_eq!(b.norm().unwrap(), 3050);
    }

    #[test]
    fn snf_examples() {
        let id = snf_2x2([[1, 0], [0, 1]]).unwrap();
        assert_eq!(id.invariants(), (1, 1));
        let m = [[-8, 24], [-24, -8]];
        let s = snf_2x2(m).unwrap();
        assert_eq!(s.invariants(), (8, 80));
        assert!(snf_is_valid(m, &s));
        let m = [[2, 5], [-5, 7]];
        let s = snf_2x2(m).unwrap();
        assert_eq!(s.invariants(), (1, 39));
        assert!(snf_is_valid(m, &s));
        assert_eq!(snf_2x2([[2, 4], [1, 2]]), Err(CmError::SingularMatrix));
    }

    #[test]
    fn level_one_of_gaussian_curve() {
        let o = gauss_order();
        let tau = Tau::for_order(o);
        assert!((tau.value() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let level = fixed_lattice(&QuadInt::alpha(o), 1, &tau).unwrap();
        assert_eq!(level.count, 10);
        assert_eq!((level.d1, level.d2), (1, 10));
        assert_eq!(level.points[0].coords, [Rat::from_integer(0); 2]);
        assert!(level.points_are_fixed());
        assert!(level.alpha_permutes_points());
        // every point times (−3 + i) lies in ℤ[i]
        for pt in &level.points {
            let w = pt.to_complex(tau.value()) * Complex64::new(-3.0, 1.0);
            assert!((w.re - w.re.round()).abs() < 1e-12 && (w.im - w.im.round()).abs() < 1e-12);
        }
        assert_eq!(level.edges.len(), 10);
    }

    #[test]
    fn level_two_of_gaussian_curve() {
        let o = gauss_order();
        let tau = Tau::for_order(o);
        let level = fixed_lattice(&QuadInt::alpha(o), 2, &tau).unwrap();
        assert_eq!(level.count, 20);
        assert_eq!((level.d1, level.d2), (2, 10));
        assert_eq!(level.edges.len(), 40);
        let distinct: HashSet<_> = level.points.iter().collect();
        assert_eq!(distinct.len(), 20);
        assert!(level.alpha_permutes_points());
    }

    #[test]
    fn hexagonal_level_two_is_cyclic() {
        let o = QuadOrder { t: -5, p: 7 };
        let tau = Tau::for_order(o);
        let s3 = 3f64.sqrt();
        assert!((tau.value() - Complex64::new(0.5, s3 / 2.0)).norm() < 1e-15);
        let level = fixed_lattice(&QuadInt::alpha(o), 2, &tau).unwrap();
        assert_eq!((level.d1, level.d2), (1, 39));
        // the single generator walks one 39-cycle through every point
        let mut seen = HashSet::new();
        let mut at = 0usize;
        for _ in 0..39 {
            assert!(seen.insert(at));
            at = level.edges.iter().find(|e| e.from == at).unwrap().to;
        }
        assert_eq!(at, 0);
    }

    #[test]
    fn too_many_points() {
        let o = QuadOrder { t: -5, p: 7 };
        let tau = Tau::for_order(o);
        assert!(matches!(
            fixed_lattice(&QuadInt::alpha(o), 8, &tau),
            Err(CmError::TooManyPoints(_))
        ));
    }
}
