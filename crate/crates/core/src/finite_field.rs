//! Exact arithmetic in 𝔽_p and 𝔽_{pⁿ}.
//!
//! 𝔽_{pⁿ} is realized as 𝔽_p[x]/(f) where f is the lexicographically
//! smallest monic irreducible of degree n. Candidates `x^n + c_{n-1}x^{n-1} +
//! … + c_0` are scanned by the integer `Σ c_i p^i` in increasing order, so the
//! choice is reproducible across runs and platforms.
//!
//! [`FieldTable`] is a log/Zech-log accelerated view of a small field used by
//! the brute-force oracles; it is built from, and checked against, the
//! polynomial representation.

use std::fmt;

use thiserror::Error;

use crate::fp_poly::{self, FpPoly};

/// Largest field order accepted by [`FieldCtx`].
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

/// Largest field order for which [`FieldTable`] will allocate tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("finite-field: {0} is not prime")]
    NonPrime(u64),
    #[error("finite-field: characteristic {0} is too small (curve work needs p >= 5)")]
    CharTooSmall(u64),
    #[error("finite-field: order {p}^{n} exceeds the supported range")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("finite-field: extension degree must be at least 1")]
    ZeroDegree,
    #[error("finite-field: division by zero")]
    DivisionByZero,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// 𝔽_{pⁿ} together with its defining modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    n: usize,
    q: u64,
    /// Monic modulus, little-endian, length n + 1.
    modulus: Vec<u64>,
}

/// An element of a [`FieldCtx`]: n residues mod p, little-endian in the generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FieldCtx {
    /// Builds 𝔽_{pⁿ} for curve work: p must be a prime ≥ 5.
    pub fn new(p: u64, n: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if p < 5 {
            return Err(FieldError::CharTooSmall(p));
        }
        Self::build(p, n)
    }

    /// Like [`FieldCtx::new`] but also admits p = 2 and p = 3. Only the
    /// multiplicative-group demo uses this; the curve modules never do.
    pub fn with_small_characteristic(p: u64, n: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        Self::build(p, n)
    }

    fn build(p: u64, n: u32) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::FieldTooLarge { p, n })?;
        let n = n as usize;
        let modulus = (0..q)
            .map(|k| {
                let mut coeffs = digits(k, p, n);
                coeffs.push(1);
                coeffs
            })
            .find(|coeffs| fp_poly::is_irreducible(&FpPoly::new(p, coeffs.clone())))
            .expect("an irreducible polynomial of every degree exists");
        Ok(FieldCtx { p, n, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_poly(&self) -> FpPoly {
        FpPoly::new(self.p, self.modulus.clone())
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> FqElem {
        let mut e = self.zero();
        e.coeffs[0] = c.rem_euclid(self.p as i64) as u64;
        e
    }

    /// The class of x, i.e. the adjoined root of the modulus.
    pub fn generator(&self) -> FqElem {
        if self.n == 1 {
            // x ≡ -c_0 when the modulus is x + c_0
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    /// Element from little-endian coefficients (reduced mod p, padded or
    /// reduced mod the modulus as needed).
    pub fn element(&self, coeffs: &[i64]) -> FqElem {
        let poly = FpPoly::from_signed(self.p, coeffs).rem(&self.modulus_poly());
        self.elem_of_poly(&poly)
    }

    fn elem_of_poly(&self, poly: &FpPoly) -> FqElem {
        let mut e = self.zero();
        for (i, &c) in poly.coeffs().iter().enumerate() {
            e.coeffs[i] = c;
        }
        e
    }

    pub fn contains(&self, e: &FqElem) -> bool {
        e.coeffs.len() == self.n && e.coeffs.iter().all(|&c| c < self.p)
    }

    /// Base-p integer encoding, in `0..q`.
    pub fn index(&self, e: &FqElem) -> u64 {
        e.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, k: u64) -> FqElem {
        FqElem { coeffs: digits(k % self.q, self.p, self.n) }
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |k| self.from_index(k))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        FqElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem {
            coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let n = self.n;
        let p = self.p;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..n].iter().enumerate() {
                let slot = k - n + i;
                prod[slot] = (prod[slot] + (p - m) * c) % p;
            }
        }
        prod.truncate(n);
        FqElem { coeffs: prod }
    }

    pub fn square(&self, a: &FqElem) -> FqElem {
        self.mul(a, a)
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The absolute Frobenius x ↦ x^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// Euler's criterion: true iff `e = 0` or `e^((q-1)/2) = 1`.
    pub fn is_square(&self, e: &FqElem) -> bool {
        e.is_zero() || self.pow(e, (self.q - 1) / 2) == self.one()
    }

    /// A generator of the multiplicative group, the first one in index order.
    pub fn primitive_element(&self) -> FqElem {
        let order = self.q - 1;
        let factors = fp_poly::prime_factors(order);
        (1..self.q)
            .map(|k| self.from_index(k))
            .find(|g| factors.iter().all(|&r| self.pow(g, order / r) != self.one()))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} = F_{}[x]/({})", self.q, self.p, self.modulus_poly())
    }
}

fn digits(mut k: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..n {
        out.push(k % p);
        k /= p;
    }
    out
}

const NO_LOG: u32 = u32::MAX;

/// Log/antilog/Zech tables over a [`FieldCtx`]; elements are their base-p
/// indices, so index 0 is zero and index 1 is one.
#[derive(Clone, Debug)]
pub struct FieldTable {
    ctx: FieldCtx,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

impl FieldTable {
    pub fn new(ctx: &FieldCtx) -> Result<Self, FieldError> {
        let q = ctx.q();
        if q > MAX_TABLE_ORDER {
            return Err(FieldError::FieldTooLarge { p: ctx.p(), n: ctx.n() as u32 });
        }
        let order = (q - 1) as usize;
        let g = ctx.primitive_element();
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = ctx.one();
        for k in 0..order {
            let idx = ctx.index(&cur) as u32;
            exp.push(idx);
            log[idx as usize] = k as u32;
            cur = ctx.mul(&cur, &g);
        }
        let p = ctx.p() as u32;
        let zech = exp
            .iter()
            .map(|&idx| {
                // adding one only touches the constant digit
                let plus_one = if idx % p == p - 1 { idx - (p - 1) } else { idx + 1 };
                log[plus_one as usize]
            })
            .collect();
        Ok(FieldTable { ctx: ctx.clone(), exp, log, zech })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.ctx.q() as u32
    }

    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.ctx.p() as i64) as u32
    }

    pub fn to_elem(&self, idx: u32) -> FqElem {
        self.ctx.from_index(idx as u64)
    }

    pub fn from_elem(&self, e: &FqElem) -> u32 {
        self.ctx.index(e) as u32
    }

    fn group_order(&self) -> u32 {
        self.exp.len() as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64)
            % self.group_order() as u64;
        self.exp[s as usize]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let m = self.group_order();
        let (i, j) = (self.log[a as usize], self.log[b as usize]);
        let d = (j + m - i) % m;
        match self.zech[d as usize] {
            NO_LOG => 0,
            z => self.exp[((i as u64 + z as u64) % m as u64) as usize],
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        // -1 = g^((q-1)/2) in odd characteristic; in characteristic 2, -a = a
        if self.ctx.p() == 2 {
            return a;
        }
        let m = self.group_order();
        self.exp[((self.log[a as usize] + m / 2) % m) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let m = self.group_order();
        Some(self.exp[((m - self.log[a as usize]) % m) as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2)
    }

    /// One square root of `a`, if it exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }
}
