//! Reference implementations for the integration tests. Deliberately naive and
//! self-contained: nothing here calls into the library.

#![allow(dead_code)]

/// 𝔽_{pⁿ} as ℤ_p[x]/(m), elements stored as base-p digit indices.
pub struct Gf {
    pub p: u64,
    pub n: usize,
    modulus: Vec<u64>,
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let off = a.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            a[off + i] = (a[off + i] + (p - c) * lead) % p;
        }
    }
    a
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn monic(p: u64, deg: usize, idx: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg + 1);
    let mut r = idx;
    for _ in 0..deg {
        v.push(r % p);
        r /= p;
    }
    v.push(1);
    v
}

/// Irreducible by trial division against every monic polynomial of degree ≤ n/2.
fn irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for idx in 0..p.pow(d as u32) {
            let g = monic(p, d, idx);
            if is_zero(&poly_rem(f.to_vec(), &g, p)) {
                return false;
            }
        }
    }
    true
}

impl Gf {
    pub fn new(p: u64, n: usize) -> Gf {
        let modulus = (0..p.pow(n as u32))
            .map(|idx| monic(p, n, idx))
            .find(|f| irreducible(f, p))
            .expect("an irreducible exists");
        Gf { p, n, modulus }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n as u32)
    }

    pub fn elem(&self, mut idx: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    pub fn index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn constant(&self, c: i64) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = c.rem_euclid(self.p as i64) as u64;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut c = vec![0u64; 2 * self.n - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(c, &self.modulus, self.p);
        r.resize(self.n, 0);
        r
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.order() - 2)
    }

    fn rhs(&self, x: &[u64], a: i64, b: i64) -> Vec<u64> {
        let x3 = self.mul(&self.mul(x, x), x);
        let ax = self.mul(&self.constant(a), x);
        self.add(&self.add(&x3, &ax), &self.constant(b))
    }
}

/// #E(𝔽_{pⁿ}) by tabulating squares.
pub fn brute_count(a: i64, b: i64, p: u64, n: usize) -> u64 {
    let f = Gf::new(p, n);
    let q = f.order();
    let mut roots = vec![0u8; q as usize];
    for y in 0..q {
        let e = f.elem(y);
        roots[f.index(&f.mul(&e, &e)) as usize] += 1;
    }
    1 + (0..q).map(|x| roots[f.index(&f.rhs(&f.elem(x), a, b)) as usize] as u64).sum::<u64>()
}

type Pt = Option<(Vec<u64>, Vec<u64>)>;

pub struct CurveOracle {
    pub f: Gf,
    a: Vec<u64>,
    pub points: Vec<(Vec<u64>, Vec<u64>)>,
}

impl CurveOracle {
    pub fn new(a: i64, b: i64, p: u64, n: usize) -> CurveOracle {
        let f = Gf::new(p, n);
        let q = f.order();
        let mut sqrt: Vec<Vec<u64>> = vec![Vec::new(); q as usize];
        for y in 0..q {
            let e = f.elem(y);
            sqrt[f.index(&f.mul(&e, &e)) as usize].push(y);
        }
        let mut points = Vec::new();
        for x in 0..q {
            let xe = f.elem(x);
            for &y in &sqrt[f.index(&f.rhs(&xe, a, b)) as usize] {
                points.push((xe.clone(), f.elem(y)));
            }
        }
        let a = f.constant(a);
        CurveOracle { f, a, points }
    }

    pub fn count(&self) -> u64 {
        self.points.len() as u64 + 1
    }

    pub fn add(&self, p: &Pt, q: &Pt) -> Pt {
        let f = &self.f;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return q.clone(),
            (_, None) => return p.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if is_zero(&f.add(y1, y2)) {
                return None;
            }
            let num = f.add(&f.mul(&f.constant(3), &f.mul(x1, x1)), &self.a);
            f.mul(&num, &f.inv(&f.add(y1, y1)))
        } else {
            f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)))
        };
        let x3 = f.sub(&f.sub(&f.mul(&lambda, &lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Some((x3, y3))
    }

    /// #E[m] for m = 1..=m_max.
    pub fn torsion_counts(&self, m_max: usize) -> Vec<u64> {
        let mut counts = vec![1u64; m_max];
        for pt in &self.points {
            let p: Pt = Some(pt.clone());
            let mut acc = p.clone();
            for m in 1..=m_max {
                if acc.is_none() {
                    counts[m - 1] += 1;
                }
                acc = self.add(&acc, &p);
            }
        }
        counts
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Trace of Frobenius from a Legendre-symbol sum over 𝔽_p.
pub fn trace(a: i64, b: i64, p: u64) -> i64 {
    let pi = p as i64;
    let mut squares = vec![0i64; p as usize];
    for y in 0..pi {
        squares[(y * y % pi) as usize] += 1;
    }
    let count: i64 = 1 + (0..pi).map(|x| squares[((x * x * x + a * x + b).rem_euclid(pi)) as usize]).sum::<i64>();
    pi + 1 - count
}

/// N(αⁿ − 1) for α² = tα − p, tracking αⁿ = u + vα.
pub fn norm_alpha_pow_minus_one(t: i64, p: i64, n: u32) -> i64 {
    let (mut u, mut v) = (1i64, 0i64);
    for _ in 0..n {
        (u, v) = (-p * v, u + t * v);
    }
    let u = u - 1;
    u * u + t * u * v + p * v * v
}

/// Dense polynomial over 𝔽_p, little-endian, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<i64>);

impl Poly {
    pub fn new(p: i64, c: &[i64]) -> Poly {
        let mut v: Vec<i64> = c.iter().map(|x| x.rem_euclid(p)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        Poly(v)
    }

    pub fn mul(&self, o: &Poly, p: i64) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut c = vec![0i64; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        Poly::new(p, &c)
    }

    pub fn add(&self, o: &Poly, p: i64) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c: Vec<i64> = (0..n)
            .map(|k| self.0.get(k).unwrap_or(&0) + o.0.get(k).unwrap_or(&0))
            .collect();
        Poly::new(p, &c)
    }

    pub fn pow(&self, e: u32, p: i64) -> Poly {
        (0..e).fold(Poly::new(p, &[1]), |acc, _| acc.mul(self, p))
    }

    pub fn scale(&self, s: i64, p: i64) -> Poly {
        Poly::new(p, &self.0.iter().map(|c| c * s).collect::<Vec<_>>())
    }
}

/// Even polynomial from (degree, coefficient) pairs.
pub fn even(p: i64, terms: &[(usize, i64)]) -> Poly {
    let n = terms.iter().map(|t| t.0).max().unwrap();
    let mut v = vec![0i64; n + 1];
    for &(k, c) in terms {
        v[k] = c;
    }
    Poly::new(p, &v)
}

/// Trapezoid rule on a periodic integrand over [0, 2π].
pub fn periodic_integral(f: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let h = std::f64::consts::TAU / samples as f64;
    (0..samples).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// Enclosed area and length of θ = x, φ = φ₀ + a·cos(kx) on the unit sphere.
pub fn sphere_curve_area_length(phi0: f64, amp: f64, k: u32) -> (f64, f64) {
    let k = k as f64;
    let phi = |x: f64| phi0 + amp * (k * x).cos();
    let area = periodic_integral(|x| 1.0 - phi(x).cos(), 1 << 14);
    let length = periodic_integral(
        |x| {
            let d = -amp * k * (k * x).sin();
            (phi(x).sin().powi(2) + d * d).sqrt()
        },
        1 << 14,
    );
    (area, length)
}

pub fn stereographic(h: [f64; 4]) -> [f64; 3] {
    let d = 1.0 - h[3];
    [h[0] / d, h[1] / d, h[2] / d]
}
