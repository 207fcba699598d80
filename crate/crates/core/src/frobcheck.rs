//! Exact check that the explicit lift of Frobenius on y² = x³ + 3x over ℤ[i]
//! reduces to (x⁵, y⁵) modulo 𝔭 = (−2 + i).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fp_poly::FpPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobCheckError {
    #[error("frobcheck: {i_image}^2 is not -1 mod {p}")]
    BadResidue { i_image: u64, p: u64 },
}

/// Gaussian integer a + bi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }

    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

/// Polynomial in x with Gaussian-integer coefficients, little-endian.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussPoly {
    coeffs: Vec<GaussInt>,
}

impl GaussPoly {
    pub fn new(mut coeffs: Vec<GaussInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        GaussPoly { coeffs }
    }

    /// From real and imaginary integer parts, little-endian.
    pub fn from_parts(re: &[i128], im: &[i128]) -> Self {
        let n = re.len().max(im.len());
        let c = (0..n)
            .map(|k| {
                GaussInt::new(re.get(k).copied().unwrap_or(0), im.get(k).copied().unwrap_or(0))
            })
            .collect();
        GaussPoly::new(c)
    }

    pub fn constant(c: GaussInt) -> Self {
        GaussPoly::new(vec![c])
    }

    pub fn x() -> Self {
        GaussPoly::from_parts(&[0, 1], &[])
    }

    pub fn coeffs(&self) -> &[GaussInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &GaussPoly) -> GaussPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_default();
                let b = o.coeffs.get(k).copied().unwrap_or_default();
                a.add(b)
            })
            .collect();
        GaussPoly::new(c)
    }

    pub fn scale(&self, s: GaussInt) -> GaussPoly {
        GaussPoly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn neg(&self) -> GaussPoly {
        self.scale(GaussInt::new(-1, 0))
    }

    pub fn sub(&self, o: &GaussPoly) -> GaussPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &GaussPoly) -> GaussPoly {
        if self.is_zero() || o.is_zero() {
            return GaussPoly::default();
        }
        let mut c = vec![GaussInt::default(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(a.mul(*b));
            }
        }
        GaussPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> GaussPoly {
        (0..e).fold(GaussPoly::constant(GaussInt::new(1, 0)), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({}{:+}i)x^{k}", c.re, c.im))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Substitutes i ↦ `i_image` and reduces mod p.
pub fn reduce_mod_p(poly: &GaussPoly, i_image: u64, p: u64) -> Result<FpPoly, FrobCheckError> {
    let r = i_image % p;
    if !(r * r + 1).is_multiple_of(p) {
        return Err(FrobCheckError::BadResidue { i_image, p });
    }
    let pi = p as i128;
    let c = poly
        .coeffs
        .iter()
        .map(|g| (g.re + g.im * r as i128).rem_euclid(pi) as u64)
        .collect();
    Ok(FpPoly::new(p, c))
}

fn even(re: &[(usize, i128)]) -> GaussPoly {
    let n = re.iter().map(|&(k, _)| k).max().unwrap_or(0);
    let mut v = vec![0i128; n + 1];
    for &(k, c) in re {
        v[k] = c;
    }
    GaussPoly::from_parts(&v, &[])
}

fn i_times(p: &GaussPoly) -> GaussPoly {
    p.scale(GaussInt::new(0, 1))
}

fn int(c: i128) -> GaussInt {
    GaussInt::new(c, 0)
}

/// Numerator and denominator of φ̃₁ over ℤ[i].
pub fn phi1() -> (GaussPoly, GaussPoly) {
    let a = even(&[(8, 1), (6, -12), (4, -138), (2, -108), (0, 81)]);
    let b = even(&[(8, 1), (6, 18), (2, -162), (0, -81)]);
    let num = GaussPoly::x().mul(&a.scale(int(3)).add(&i_times(&b.scale(int(4)))));
    (num, base_denominator().pow(2))
}

/// φ̃₂ = N(x) / (D(x)·y); returns (N, D).
pub fn phi2() -> (GaussPoly, GaussPoly) {
    let a = even(&[
        (12, 1),
        (10, 78),
        (8, 999),
        (6, -1404),
        (4, -6561),
        (2, -1458),
        (0, 729),
    ]);
    let b = even(&[
        (12, 11),
        (10, -42),
        (8, 1809),
        (6, 8964),
        (4, 1053),
        (2, -7290),
        (0, -729),
    ]);
    let x = GaussPoly::x();
    let x2_plus_3 = even(&[(2, 1), (0, 3)]);
    let inner = a.scale(int(2)).add(&i_times(&b));
    let num = x.mul(&x2_plus_3).mul(&inner).neg();
    (num, base_denominator().pow(3))
}

/// 5x⁴ + 6x² + 9.
fn base_denominator() -> GaussPoly {
    even(&[(4, 5), (2, 6), (0, 9)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReduction {
    pub phi1_numerator: String,
    pub phi1_denominator: String,
    pub phi1_ok: bool,
    pub phi2_numerator: String,
    pub phi2_denominator: String,
    pub phi2_target: String,
    pub phi2_ok: bool,
    /// Reduced φ̃₁ denominator equals (x + 1)²(x + 4)².
    pub denominator_factorization_ok: bool,
}

impl PhiReduction {
    pub fn all_ok(&self) -> bool {
        self.phi1_ok && self.phi2_ok && self.denominator_factorization_ok
    }
}

/// Reduces φ̃ with i ↦ 2 mod 5 and checks φ̃₁ ≡ x⁵ and φ̃₂ ≡ y⁵, the latter
/// as N ≡ (x³ + 3x)³·D, since y⁶ = (x³ + 3x)³ on the curve.
pub fn verify_phi_reduction() -> PhiReduction {
    const P: u64 = 5;
    const I: u64 = 2;
    let red = |g: &GaussPoly| reduce_mod_p(g, I, P).expect("2 is a square root of -1 mod 5");
    let (n1, d1) = phi1();
    let (n1, d1) = (red(&n1), red(&d1));
    let x5 = FpPoly::x(P).pow(5);
    let phi1_ok = n1 == x5.mul(&d1);

    let (n2, d2) = phi2();
    let (n2, d2) = (red(&n2), red(&d2));
    let x3_3x = FpPoly::from_signed(P, &[0, 3, 0, 1]);
    let target = x3_3x.pow(3).mul(&d2);
    let phi2_ok = n2 == target;

    let factored = FpPoly::from_signed(P, &[1, 1])
        .pow(2)
        .mul(&FpPoly::from_signed(P, &[4, 1]).pow(2));
    PhiReduction {
        phi1_numerator: n1.to_string(),
        phi1_denominator: d1.to_string(),
        phi1_ok,
        phi2_numerator: n2.to_string(),
        phi2_denominator: d2.to_string(),
        phi2_target: target.to_string(),
        phi2_ok,
        denominator_factorization_ok: d1 == factored,
    }
}
