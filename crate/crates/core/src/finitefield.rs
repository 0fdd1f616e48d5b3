//! Arithmetic in `F_p`, `F_p² = F_p(δ)` and `F_p[X]`, with root finding in
//! `F_p²` by distinct- and equal-degree factorization.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::primes::is_prime;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("{0} is not invertible")]
    NotInvertible(String),
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    (a != 0).then(|| pow_mod(a, (p - 2) as u128, p))
}

fn reduce_signed(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8, FieldError> {
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    Ok(match pow_mod(reduce_signed(a, p), ((p - 1) / 2) as u128, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Square root in `F_p` by Tonelli–Shanks, `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, ((p - 1) / 2) as u128, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, ((p - 1) / 2) as u128, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q as u128, p);
    let mut t = pow_mod(a, q as u128, p);
    let mut r = pow_mod(a, q.div_ceil(2) as u128, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// An element of the prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElement {
    value: u64,
    modulus: u64,
}

impl std::ops::Add for FpElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64;
        FpElement { value, modulus: self.modulus }
    }
}

impl std::ops::Sub for FpElement {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus as u128;
        let value = ((self.value as u128 + m - rhs.value as u128) % m) as u64;
        FpElement { value, modulus: self.modulus }
    }
}

impl std::ops::Mul for FpElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FpElement { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }
}

impl FpElement {
    pub fn new(value: i64, modulus: u64) -> Self {
        FpElement { value: reduce_signed(value, modulus), modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u128) -> Self {
        FpElement { value: pow_mod(self.value, exp, self.modulus), modulus: self.modulus }
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        inv_mod(self.value, self.modulus)
            .map(|value| FpElement { value, modulus: self.modulus })
            .ok_or_else(|| FieldError::NotInvertible(self.value.to_string()))
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An element `a + b·δ` of `F_p²`. Ordering is lexicographic on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2Element {
    pub a: u64,
    pub b: u64,
}

impl Fp2Element {
    pub const ZERO: Fp2Element = Fp2Element { a: 0, b: 0 };
    pub const ONE: Fp2Element = Fp2Element { a: 1, b: 0 };

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(self) -> bool {
        self.b == 0
    }
}

/// `"a"` when `b = 0`, otherwise `"a+b*s"` with `s` standing for `δ`.
impl fmt::Display for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*s", self.a, self.b)
        }
    }
}

/// The field `F_p(δ)` with `δ² = d`, `d` the smallest quadratic non-residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2Field {
    p: u64,
    d: u64,
}

impl Fp2Field {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        let d = (2..p).find(|&d| pow_mod(d, ((p - 1) / 2) as u128, p) == p - 1).expect("odd prime has a non-residue");
        Ok(Fp2Field { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The non-residue `d = δ²`.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn element(&self, a: i64, b: i64) -> Fp2Element {
        Fp2Element { a: reduce_signed(a, self.p), b: reduce_signed(b, self.p) }
    }

    pub fn from_fp(&self, a: u64) -> Fp2Element {
        Fp2Element { a: a % self.p, b: 0 }
    }

    pub fn delta(&self) -> Fp2Element {
        Fp2Element { a: 0, b: 1 }
    }

    pub fn add(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        Fp2Element { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }

    pub fn neg(&self, x: Fp2Element) -> Fp2Element {
        Fp2Element { a: (self.p - x.a) % self.p, b: (self.p - x.b) % self.p }
    }

    pub fn sub(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        let p = self.p;
        let ac = mul_mod(x.a, y.a, p);
        let bd = mul_mod(mul_mod(x.b, y.b, p), self.d, p);
        let ad = mul_mod(x.a, y.b, p);
        let bc = mul_mod(x.b, y.a, p);
        Fp2Element { a: (ac + bd) % p, b: (ad + bc) % p }
    }

    pub fn norm(&self, x: Fp2Element) -> u64 {
        let p = self.p;
        let aa = mul_mod(x.a, x.a, p);
        let dbb = mul_mod(mul_mod(x.b, x.b, p), self.d, p);
        (aa + p - dbb) % p
    }

    pub fn inv(&self, x: Fp2Element) -> Result<Fp2Element, FieldError> {
        let n = inv_mod(self.norm(x), self.p).ok_or_else(|| FieldError::NotInvertible(x.to_string()))?;
        let conj = Fp2Element { a: x.a, b: (self.p - x.b) % self.p };
        Ok(self.mul(conj, self.from_fp(n)))
    }

    pub fn div(&self, x: Fp2Element, y: Fp2Element) -> Result<Fp2Element, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, mut x: Fp2Element, mut exp: u128) -> Fp2Element {
        let mut acc = Fp2Element::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            exp >>= 1;
        }
        acc
    }

    /// `x ↦ x^p`, which is conjugation `a + bδ ↦ a − bδ`.
    pub fn frobenius(&self, x: Fp2Element) -> Fp2Element {
        Fp2Element { a: x.a, b: (self.p - x.b) % self.p }
    }

    /// Every element of the field, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Element> + '_ {
        (0..self.p).flat_map(move |a| (0..self.p).map(move |b| Fp2Element { a, b }))
    }

    /// Square root of an element of `F_p` inside `F_p²` (always exists).
    pub fn sqrt_of_fp(&self, a: u64) -> Fp2Element {
        let a = a % self.p;
        match sqrt_mod(a, self.p) {
            Some(r) => Fp2Element { a: r, b: 0 },
            None => {
                // a/d is a residue, so sqrt(a) = sqrt(a/d)·δ.
                let q = mul_mod(a, inv_mod(self.d, self.p).expect("d is nonzero"), self.p);
                let r = sqrt_mod(q, self.p).expect("a/d is a residue");
                Fp2Element { a: 0, b: r }
            }
        }
    }
}

/// A polynomial over `F_p`, coefficients stored lowest degree first as
/// residues in `[0, p)`. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = FpPolynomial { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        poly.trim();
        poly
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| reduce_signed(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPolynomial { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial `X`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(self.p - 1))
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in rhs.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let inv_lead = inv_mod(divisor.leading(), self.p).expect("leading coefficient invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let coef = mul_mod(rem[i], inv_lead, self.p);
            if coef == 0 {
                continue;
            }
            quot[i - dd] = coef;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + self.p - mul_mod(coef, dc, self.p)) % self.p;
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match inv_mod(self.leading(), self.p) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p)).collect();
        Self::new(self.p, c)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    pub fn eval_fp2(&self, field: &Fp2Field, x: Fp2Element) -> Fp2Element {
        self.coeffs.iter().rev().fold(Fp2Element::ZERO, |acc, &c| field.add(field.mul(acc, x), field.from_fp(c)))
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "X".to_string(),
                (1, c) => format!("{c}*X"),
                (i, 1) => format!("X^{i}"),
                (i, c) => format!("{c}*X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Split a squarefree monic `g` whose irreducible factors all have degree
/// `d` (Cantor–Zassenhaus, odd `p`).
fn equal_degree_factors<R: Rng + ?Sized>(g: &FpPolynomial, d: usize, rng: &mut R) -> Vec<FpPolynomial> {
    let n = match g.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    if n == d {
        return vec![g.monic()];
    }
    let p = g.modulus();
    let exponent = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let h = FpPolynomial::new(p, coeffs);
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut u = g.gcd(&h);
        if u.degree() == Some(0) {
            let w = h.pow_mod(exponent, g).sub(&FpPolynomial::one(p));
            u = g.gcd(&w);
        }
        if let Some(du) = u.degree() {
            if du > 0 && du < n {
                let (v, _) = g.div_rem(&u);
                let mut out = equal_degree_factors(&u, d, rng);
                out.extend(equal_degree_factors(&v.monic(), d, rng));
                return out;
            }
        }
    }
}

/// All roots of `f` in `F_p²`, using a generator seeded with
/// [`DEFAULT_SEED`].
pub fn roots_in_fp2(f: &FpPolynomial, field: &Fp2Field) -> Result<Vec<Fp2Element>, FieldError> {
    roots_in_fp2_with_rng(f, field, &mut ChaCha8Rng::seed_from_u64(DEFAULT_SEED))
}

/// All roots of `f` in `F_p²`, sorted canonically and without repetition.
///
/// Computes `g = gcd(f, X^{p²} − X)`, separates its linear part
/// `gcd(g, X^p − X)` from the product of irreducible quadratics, splits both
/// by equal-degree factorization and solves each factor.
pub fn roots_in_fp2_with_rng<R: Rng + ?Sized>(
    f: &FpPolynomial,
    field: &Fp2Field,
    rng: &mut R,
) -> Result<Vec<Fp2Element>, FieldError> {
    let p = field.p();
    if f.modulus() != p {
        return Err(FieldError::NotOddPrime(f.modulus()));
    }
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let f = f.monic();
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = FpPolynomial::x(p);
    let x_p2 = x.pow_mod((p as u128) * (p as u128), &f);
    let g = f.gcd(&x_p2.sub(&x));
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x_p = x.pow_mod(p as u128, &g);
    let linear = g.gcd(&x_p.sub(&x));
    let (quadratic, _) = g.div_rem(&linear);

    let mut roots = Vec::new();
    for factor in equal_degree_factors(&linear, 1, rng) {
        // X + c
        roots.push(field.from_fp((p - factor.coeffs()[0]) % p));
    }
    for factor in equal_degree_factors(&quadratic.monic(), 2, rng) {
        // X² + bX + c, irreducible: roots (−b ± √disc)/2 with √disc ∉ F_p.
        let (c, b) = (factor.coeffs()[0], factor.coeffs()[1]);
        let disc = (mul_mod(b, b, p) + p - mul_mod(4, c, p)) % p;
        let s = field.sqrt_of_fp(disc);
        let half = field.from_fp(inv_mod(2, p).expect("p odd"));
        let minus_b = field.from_fp((p - b) % p);
        roots.push(field.mul(field.add(minus_b, s), half));
        roots.push(field.mul(field.sub(minus_b, s), half));
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}
