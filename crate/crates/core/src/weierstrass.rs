//! Short Weierstrass curves y² = x³ + ax + b over 𝔽_{pⁿ}: validation, the
//! chord-tangent group law, and exhaustive point-counting and torsion
//! oracles.
//!
//! The oracles deliberately know nothing about lattices or Frobenius traces;
//! everything the analytic side predicts is checked against them.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{is_prime, FieldCtx, FieldError, FieldTable, FqElem};

/// Default cap on the field order for brute-force scans.
pub const DEFAULT_ORACLE_LIMIT: u64 = 200_000;

/// Environment variable overriding [`DEFAULT_ORACLE_LIMIT`].
pub const ORACLE_LIMIT_ENV: &str = "ECLIFT_ORACLE_LIMIT";

/// The oracle limit from the environment, or the default if unset or unparsable.
pub fn oracle_limit_from_env() -> u64 {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("weierstrass: curve y^2 = x^3 + {a}x + {b} is singular mod {p}")]
    SingularCurve { a: u64, b: u64, p: u64 },
    #[error("weierstrass: point is not on the curve")]
    PointNotOnCurve,
    #[error("weierstrass: field order {q} exceeds the oracle limit {limit}")]
    FieldTooLarge { q: u64, limit: u64 },
    #[error("weierstrass: torsion index {0} outside 1..=20")]
    BadTorsionIndex(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coefficients of a nonsingular short Weierstrass curve over 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveParams {
    a: u64,
    b: u64,
    p: u64,
}

impl CurveParams {
    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `a` as the representative in (-p/2, p/2], for display.
    pub fn a_signed(&self) -> i64 {
        centered(self.a, self.p)
    }

    pub fn b_signed(&self) -> i64 {
        centered(self.b, self.p)
    }

    /// Short identifier used in output file names, e.g. `a3_b0`.
    pub fn slug(&self) -> String {
        format!("a{}_b{}", self.a(), self.b())
    }
}

fn centered(v: u64, p: u64) -> i64 {
    if v > p / 2 {
        v as i64 - p as i64
    } else {
        v as i64
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3")?;
        match self.a_signed() {
            0 => {}
            1 => write!(f, " + x")?,
            -1 => write!(f, " - x")?,
            a if a < 0 => write!(f, " - {}x", -a)?,
            a => write!(f, " + {a}x")?,
        }
        match self.b_signed() {
            0 => {}
            b if b < 0 => write!(f, " - {}", -b)?,
            b => write!(f, " + {b}")?,
        }
        write!(f, " (mod {})", self.p)
    }
}

pub fn validate_curve(a: i64, b: i64, p: u64) -> Result<CurveParams, CurveError> {
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p).into());
    }
    if p < 5 {
        return Err(FieldError::CharTooSmall(p).into());
    }
    let pi = p as i128;
    let a = (a as i128).rem_euclid(pi);
    let b = (b as i128).rem_euclid(pi);
    let disc = (4 * a * a % pi * a + 27 * b * b) % pi;
    let (a, b) = (a as u64, b as u64);
    if disc == 0 {
        return Err(CurveError::SingularCurve { a, b, p });
    }
    Ok(CurveParams { a, b, p })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FqElem, y: FqElem },
}

impl CurvePoint {
    pub fn affine(x: FqElem, y: FqElem) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

/// A curve paired with the field its points live in.
#[derive(Clone, Debug)]
pub struct CurveOver<'a> {
    pub curve: CurveParams,
    pub ctx: &'a FieldCtx,
    a: FqElem,
    b: FqElem,
}

impl<'a> CurveOver<'a> {
    pub fn new(curve: CurveParams, ctx: &'a FieldCtx) -> Self {
        assert_eq!(curve.p, ctx.p(), "field characteristic must match the curve");
        CurveOver {
            curve,
            ctx,
            a: ctx.from_int(curve.a as i64),
            b: ctx.from_int(curve.b as i64),
        }
    }

    /// x³ + ax + b
    pub fn rhs(&self, x: &FqElem) -> FqElem {
        let c = self.ctx;
        let x3 = c.mul(&c.square(x), x);
        c.add(&c.add(&x3, &c.mul(&self.a, x)), &self.b)
    }

    pub fn is_on_curve(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                self.ctx.contains(x) && self.ctx.contains(y) && self.ctx.square(y) == self.rhs(x)
            }
        }
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), self.ctx.neg(y)),
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, CurveError> {
        if !self.is_on_curve(p) || !self.is_on_curve(q) {
            return Err(CurveError::PointNotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let c = self.ctx;
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if c.add(y1, y2).is_zero() {
                return CurvePoint::Infinity;
            }
            // tangent: (3x² + a) / 2y
            let num = c.add(&c.mul(&c.from_int(3), &c.square(x1)), &self.a);
            let den = c.mul(&c.from_int(2), y1);
            c.div(&num, &den).expect("2y is nonzero off the 2-torsion")
        } else {
            c.div(&c.sub(y2, y1), &c.sub(x2, x1)).expect("distinct x")
        };
        let x3 = c.sub(&c.sub(&c.square(&lambda), x1), x2);
        let y3 = c.sub(&c.mul(&lambda, &c.sub(x1, &x3)), y1);
        CurvePoint::affine(x3, y3)
    }

    /// m·P by double-and-add; negative m uses −P.
    pub fn scalar_mul(&self, m: i64, pt: &CurvePoint) -> Result<CurvePoint, CurveError> {
        if !self.is_on_curve(pt) {
            return Err(CurveError::PointNotOnCurve);
        }
        let base = if m < 0 { self.neg(pt) } else { pt.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut dbl = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &dbl);
            }
            dbl = self.add_unchecked(&dbl, &dbl);
            k >>= 1;
        }
        Ok(acc)
    }

    /// (x, y) ↦ (x^p, y^p).
    pub fn frobenius(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                CurvePoint::affine(self.ctx.frobenius(x), self.ctx.frobenius(y))
            }
        }
    }

    /// Every point, infinity first, then affine points by x index and y index.
    pub fn points(&self) -> Vec<CurvePoint> {
        let c = self.ctx;
        let mut out = vec![CurvePoint::Infinity];
        for x in c.elements() {
            let r = self.rhs(&x);
            for y in c.elements() {
                if c.square(&y) == r {
                    out.push(CurvePoint::affine(x.clone(), y));
                }
            }
        }
        out
    }
}

/// Group law add/scalar-mul entry points taking curve and field separately.
pub fn add_points(
    curve: &CurveParams,
    ctx: &FieldCtx,
    p: &CurvePoint,
    q: &CurvePoint,
) -> Result<CurvePoint, CurveError> {
    CurveOver::new(*curve, ctx).add(p, q)
}

pub fn scalar_mul(
    curve: &CurveParams,
    ctx: &FieldCtx,
    m: i64,
    p: &CurvePoint,
) -> Result<CurvePoint, CurveError> {
    CurveOver::new(*curve, ctx).scalar_mul(m, p)
}

fn oracle_field(curve: &CurveParams, n: u32, limit: u64) -> Result<FieldTable, CurveError> {
    let q = curve
        .p
        .checked_pow(n)
        .ok_or(CurveError::FieldTooLarge { q: u64::MAX, limit })?;
    if q > limit {
        return Err(CurveError::FieldTooLarge { q, limit });
    }
    let ctx = FieldCtx::new(curve.p, n)?;
    Ok(FieldTable::new(&ctx)?)
}

/// #E(𝔽_{pⁿ}) = 1 + Σ_x (1 + χ(x³ + ax + b)), with the default oracle limit.
pub fn count_points(curve: &CurveParams, n: u32) -> Result<u64, CurveError> {
    count_points_limited(curve, n, DEFAULT_ORACLE_LIMIT)
}

pub fn count_points_limited(curve: &CurveParams, n: u32, limit: u64) -> Result<u64, CurveError> {
    let t = oracle_field(curve, n, limit)?;
    let tc = TableCurve::new(curve, &t);
    let total = (0..t.order())
        .map(|x| {
            let r = tc.rhs(x);
            if r == 0 {
                1
            } else if t.is_square(r) {
                2
            } else {
                0
            }
        })
        .sum::<u64>();
    Ok(1 + total)
}

/// Number of points P ∈ E(𝔽_{pⁿ}) with m·P = O, by exhaustive scan.
pub fn torsion_count(curve: &CurveParams, n: u32, m: u64) -> Result<u64, CurveError> {
    if !(1..=20).contains(&m) {
        return Err(CurveError::BadTorsionIndex(m));
    }
    Ok(torsion_profile(curve, n, m, DEFAULT_ORACLE_LIMIT)?[m as usize - 1])
}

/// `#E[m]` for every m in `1..=m_max`, from one exhaustive pass over the
/// points (each point is stepped through P, 2P, …, m_max·P).
pub fn torsion_profile(
    curve: &CurveParams,
    n: u32,
    m_max: u64,
    limit: u64,
) -> Result<Vec<u64>, CurveError> {
    if !(1..=20).contains(&m_max) {
        return Err(CurveError::BadTorsionIndex(m_max));
    }
    let t = oracle_field(curve, n, limit)?;
    let tc = TableCurve::new(curve, &t);
    let mut counts = vec![1u64; m_max as usize]; // the point at infinity
    for pt in tc.affine_points() {
        let mut acc = Some(pt);
        for slot in counts.iter_mut() {
            if acc.is_none() {
                *slot += 1;
            }
            acc = tc.add(acc, Some(pt));
        }
    }
    Ok(counts)
}

type TablePoint = Option<(u32, u32)>;

/// Affine group law over a [`FieldTable`]; `None` is the point at infinity.
struct TableCurve<'t> {
    t: &'t FieldTable,
    a: u32,
    b: u32,
}

impl<'t> TableCurve<'t> {
    fn new(curve: &CurveParams, t: &'t FieldTable) -> Self {
        TableCurve {
            t,
            a: t.from_int(curve.a as i64),
            b: t.from_int(curve.b as i64),
        }
    }

    fn rhs(&self, x: u32) -> u32 {
        let t = self.t;
        let x3 = t.mul(t.mul(x, x), x);
        t.add(t.add(x3, t.mul(self.a, x)), self.b)
    }

    fn affine_points(&self) -> Vec<(u32, u32)> {
        let t = self.t;
        let mut out = Vec::new();
        for x in 0..t.order() {
            let r = self.rhs(x);
            if let Some(y) = t.sqrt(r) {
                out.push((x, y));
                if y != 0 {
                    out.push((x, t.neg(y)));
                }
            }
        }
        out
    }

    fn add(&self, p: TablePoint, q: TablePoint) -> TablePoint {
        let t = self.t;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return q,
            (_, None) => return p,
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if t.add(y1, y2) == 0 {
                return None;
            }
            let num = t.add(t.mul(t.from_int(3), t.mul(x1, x1)), self.a);
            t.mul(num, t.inv(t.add(y1, y1))?)
        } else {
            t.mul(t.sub(y2, y1), t.inv(t.sub(x2, x1))?)
        };
        let x3 = t.sub(t.sub(t.mul(lambda, lambda), x1), x2);
        let y3 = t.sub(t.mul(lambda, t.sub(x1, x3)), y1);
        Some((x3, y3))
    }
}
