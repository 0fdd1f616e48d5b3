//! Exact short-vector enumeration for positive definite quadratic forms.
//!
//! A form is given by its Gram matrix `G` (`Q(x) = xᵀGx`). The basis is first
//! LLL-reduced on the Gram matrix, then all vectors below a bound are listed by
//! Fincke–Pohst enumeration over the exact `LDLᵀ` decomposition. Every
//! comparison is done in exact rational arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::Rational;

pub type Gram = [[Rational; 4]; 4];

/// Integer change of basis, rows are new basis vectors.
type Unimodular = [[i64; 4]; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
}

fn transform(gram: &Gram, u: &[[i64; 4]; 4]) -> Gram {
    // U G Uᵀ
    let mut ug: [[Rational; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            ug[i][j] = (0..4).filter(|&k| u[i][k] != 0).map(|k| &gram[k][j] * &Rational::from(u[i][k])).sum();
        }
    }
    let mut out: Gram = Default::default();
    for i in 0..4 {
        for j in i..4 {
            let v: Rational = (0..4).filter(|&k| u[j][k] != 0).map(|k| &ug[i][k] * &Rational::from(u[j][k])).sum();
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    out
}

/// Gram–Schmidt data `(μ, B)` of a Gram matrix.
fn gram_schmidt(gram: &Gram) -> Result<([[Rational; 4]; 4], [Rational; 4]), EnumerationError> {
    let mut mu: [[Rational; 4]; 4] = Default::default();
    let mut b: [Rational; 4] = Default::default();
    for i in 0..4 {
        for j in 0..i {
            let s: Rational = (0..j).map(|k| &(&mu[j][k] * &mu[i][k]) * &b[k]).sum();
            mu[i][j] = &(&gram[i][j] - &s) / &b[j];
        }
        let s: Rational = (0..i).map(|k| &(&mu[i][k] * &mu[i][k]) * &b[k]).sum();
        b[i] = &gram[i][i] - &s;
        if !b[i].is_positive() {
            return Err(EnumerationError::NotPositiveDefinite);
        }
    }
    Ok((mu, b))
}

fn round(x: &Rational) -> i64 {
    (x + &Rational::new(1, 2)).floor().to_i64().expect("reduction coefficient fits in i64")
}

/// LLL reduction (δ = 3/4) of the form; returns the unimodular transform `U`
/// with the reduced Gram matrix `U G Uᵀ`.
pub fn lll(gram: &Gram) -> Result<([[i64; 4]; 4], Gram), EnumerationError> {
    if let Some(form) = IntForm::new(gram) {
        if let Some((u, a)) = form.lll() {
            let d = BigInt::from(form.d);
            return Ok((u, a.map(|row| row.map(|x| Rational::new(BigInt::from(x), d.clone())))));
        }
    }
    lll_exact(gram)
}

fn lll_exact(gram: &Gram) -> Result<([[i64; 4]; 4], Gram), EnumerationError> {
    let mut u = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    let delta = Rational::new(3, 4);
    let mut k = 1;
    let mut steps = 0usize;
    while k < 4 {
        steps += 1;
        assert!(steps < 100_000, "LLL failed to converge");
        let (mut mu, b) = gram_schmidt(&transform(gram, &u))?;
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q == 0 {
                continue;
            }
            for c in 0..4 {
                u[k][c] -= q * u[j][c];
            }
            let qr = Rational::from(q);
            for i in 0..j {
                mu[k][i] = &mu[k][i] - &(&qr * &mu[j][i]);
            }
            mu[k][j] = &mu[k][j] - &qr;
        }
        let rhs = &(&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &b[k - 1];
        if b[k] >= rhs {
            k += 1;
        } else {
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    let g = transform(gram, &u);
    Ok((u, g))
}

/// A vector found by [`short_vectors`], in the coordinates of the input form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: [i64; 4],
    pub value: Rational,
}

fn floor_sqrt(t: &Rational) -> BigInt {
    let f = t.floor();
    if f.is_negative() {
        BigInt::zero()
    } else {
        f.sqrt()
    }
}

struct FinckePohst<'a> {
    q: &'a [[Rational; 4]; 4],
    bound: &'a Rational,
    x: [i64; 4],
    out: Vec<ShortVector>,
    first_only: bool,
}

impl FinckePohst<'_> {
    fn search(&mut self, level: usize, remaining: &Rational) -> bool {
        let center: Rational =
            -((level + 1)..4).map(|j| &self.q[level][j] * &Rational::from(self.x[j])).sum::<Rational>();
        let t = remaining / &self.q[level][level];
        let s = floor_sqrt(&t);
        let lo = (center.floor() - &s - 1u32).to_i64().expect("enumeration range fits in i64");
        let hi = (center.ceil() + &s + 1u32).to_i64().expect("enumeration range fits in i64");
        for xi in lo..=hi {
            let diff = &Rational::from(xi) - &center;
            let used = &(&diff * &diff) * &self.q[level][level];
            if &used > remaining {
                continue;
            }
            self.x[level] = xi;
            let rest = remaining - &used;
            if level == 0 {
                if self.x.iter().any(|&c| c != 0) {
                    self.out.push(ShortVector { coords: self.x, value: self.bound - &rest });
                    if self.first_only {
                        return true;
                    }
                }
            } else if self.search(level - 1, &rest) {
                return true;
            }
        }
        self.x[level] = 0;
        false
    }
}

/// `LDLᵀ` coefficients in the packed form `Q(x) = Σ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)²`.
fn ldl(gram: &Gram) -> Result<[[Rational; 4]; 4], EnumerationError> {
    let mut q = gram.clone();
    for i in 0..4 {
        if !q[i][i].is_positive() {
            return Err(EnumerationError::NotPositiveDefinite);
        }
        for j in i + 1..4 {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..4 {
            for l in k..4 {
                let d = &q[k][i] * &q[i][l];
                q[k][l] = &q[k][l] - &d;
            }
        }
    }
    Ok(q)
}

fn enumerate(gram: &Gram, bound: &Rational, first_only: bool) -> Result<Vec<ShortVector>, EnumerationError> {
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    if let Some(out) = IntForm::new(gram).and_then(|f| f.enumerate(bound, first_only)) {
        return Ok(out);
    }
    enumerate_exact(gram, bound, first_only)
}

fn enumerate_exact(gram: &Gram, bound: &Rational, first_only: bool) -> Result<Vec<ShortVector>, EnumerationError> {
    let (u, reduced) = lll_exact(gram)?;
    let q = ldl(&reduced)?;
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    let mut fp = FinckePohst { q: &q, bound, x: [0; 4], out: Vec::new(), first_only };
    fp.search(3, bound);
    let mut out: Vec<ShortVector> =
        fp.out.into_iter().map(|v| ShortVector { coords: apply(&u, &v.coords), value: v.value }).collect();
    out.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

/// `xU`: coordinates with respect to the reduced basis mapped back.
fn apply(u: &[[i64; 4]; 4], x: &[i64; 4]) -> [i64; 4] {
    let mut coords = [0i64; 4];
    for (r, &c) in u.iter().zip(x) {
        for (o, &e) in coords.iter_mut().zip(r) {
            *o += c * e;
        }
    }
    coords
}

/// Entries and scale limit for the machine-word path.
const WORD_LIMIT: i128 = 1 << 40;

/// `A = D·G` with integer entries, for forms small enough that LLL and
/// enumeration can run in machine arithmetic.
///
/// Floating point only steers the search: every transform is applied to `A`
/// exactly, enumeration bounds carry a safety margin, and each candidate is
/// accepted on its exact integer value. Anything unexpected (overflow, a
/// non-positive pivot) returns `None` so the caller can take the exact path.
struct IntForm {
    a: [[i128; 4]; 4],
    d: i128,
}

impl IntForm {
    fn new(gram: &Gram) -> Option<Self> {
        let mut d = BigInt::from(1);
        for x in gram.iter().flatten() {
            d = num_integer::Integer::lcm(&d, x.denom());
        }
        let d = d.to_i128().filter(|d| *d <= WORD_LIMIT)?;
        let mut a = [[0i128; 4]; 4];
        for (i, row) in gram.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = (x.numer() * (BigInt::from(d) / x.denom())).to_i128()?;
                if v.abs() > WORD_LIMIT {
                    return None;
                }
                a[i][j] = v;
            }
        }
        Some(IntForm { a, d })
    }

    /// Gram–Schmidt data in floating point; `None` if a pivot is not positive.
    fn gram_schmidt(a: &[[i128; 4]; 4]) -> Option<([[f64; 4]; 4], [f64; 4])> {
        let mut mu = [[0f64; 4]; 4];
        let mut b = [0f64; 4];
        for i in 0..4 {
            for j in 0..i {
                let s: f64 = (0..j).map(|k| mu[j][k] * mu[i][k] * b[k]).sum();
                mu[i][j] = (a[i][j] as f64 - s) / b[j];
            }
            let s: f64 = (0..i).map(|k| mu[i][k] * mu[i][k] * b[k]).sum();
            b[i] = a[i][i] as f64 - s;
            if b[i].is_nan() || b[i] <= 0.0 {
                return None;
            }
        }
        Some((mu, b))
    }

    /// Exact LLL on `A` steered by floating-point Gram–Schmidt data.
    fn lll(&self) -> Option<(Unimodular, [[i128; 4]; 4])> {
        let mut a = self.a;
        let mut u = [[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        let mut k = 1;
        let mut steps = 0;
        while k < 4 {
            steps += 1;
            if steps > 10_000 {
                // Any unimodular transform is valid; stop improving it.
                break;
            }
            let (mut mu, b) = Self::gram_schmidt(&a)?;
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q == 0.0 {
                    continue;
                }
                if q.abs() > WORD_LIMIT as f64 {
                    return None;
                }
                let qi = q as i128;
                // b_k ← b_k − q·b_j on rows, then on columns.
                for c in 0..4 {
                    a[k][c] = a[k][c].checked_sub(qi.checked_mul(a[j][c])?)?;
                }
                for r in 0..4 {
                    a[r][k] = a[r][k].checked_sub(qi.checked_mul(a[r][j])?)?;
                }
                for c in 0..4 {
                    u[k][c] = u[k][c].checked_sub((q as i64).checked_mul(u[j][c])?)?;
                }
                for i in 0..j {
                    mu[k][i] -= q * mu[j][i];
                }
                mu[k][j] -= q;
            }
            if b[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
                k += 1;
            } else {
                a.swap(k, k - 1);
                for row in a.iter_mut() {
                    row.swap(k, k - 1);
                }
                u.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
        a.iter().flatten().all(|x| x.abs() <= WORD_LIMIT).then_some((u, a))
    }

    fn enumerate(&self, bound: &Rational, first_only: bool) -> Option<Vec<ShortVector>> {
        // xᵀAx is an integer, so the bound may be floored.
        let limit = (bound * &Rational::from(self.d as i64)).floor().to_i128()?;
        if limit > WORD_LIMIT * WORD_LIMIT {
            return None;
        }
        let (u, a) = self.lll()?;
        let q = Self::ldl(&a)?;
        let mut fp = FloatFinckePohst {
            a: &a,
            q: &q,
            limit,
            tol: 1e-6 * (limit as f64 + 1.0),
            x: [0; 4],
            out: Vec::new(),
            first_only,
        };
        fp.search(3, limit as f64);
        let d = BigInt::from(self.d);
        let mut out: Vec<ShortVector> = fp
            .out
            .into_iter()
            .map(|(x, v)| ShortVector { coords: apply(&u, &x), value: Rational::new(BigInt::from(v), d.clone()) })
            .collect();
        out.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| a.coords.cmp(&b.coords)));
        Some(out)
    }

    /// Packed `LDLᵀ` in floating point, as in [`ldl`].
    fn ldl(a: &[[i128; 4]; 4]) -> Option<[[f64; 4]; 4]> {
        let mut q = a.map(|row| row.map(|x| x as f64));
        for i in 0..4 {
            if q[i][i].is_nan() || q[i][i] <= 0.0 {
                return None;
            }
            for j in i + 1..4 {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..4 {
                for l in k..4 {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Some(q)
    }
}

type Candidate = ([i64; 4], i128);

struct FloatFinckePohst<'a> {
    a: &'a [[i128; 4]; 4],
    q: &'a [[f64; 4]; 4],
    limit: i128,
    tol: f64,
    x: [i64; 4],
    /// Coordinates in the reduced basis with their exact values.
    out: Vec<Candidate>,
    first_only: bool,
}

impl FloatFinckePohst<'_> {
    fn exact_value(&self) -> i128 {
        let x = self.x.map(i128::from);
        (0..4).map(|i| (0..4).map(|j| self.a[i][j] * x[i] * x[j]).sum::<i128>()).sum()
    }

    fn search(&mut self, level: usize, remaining: f64) -> bool {
        let center = -((level + 1)..4).map(|j| self.q[level][j] * self.x[j] as f64).sum::<f64>();
        let qll = self.q[level][level];
        let r = ((remaining + self.tol).max(0.0) / qll).sqrt();
        let lo = (center - r).floor() as i64 - 1;
        let hi = (center + r).ceil() as i64 + 1;
        for xi in lo..=hi {
            let diff = xi as f64 - center;
            let used = diff * diff * qll;
            if used > remaining + self.tol {
                continue;
            }
            self.x[level] = xi;
            if level == 0 {
                if self.x.iter().any(|&c| c != 0) {
                    let v = self.exact_value();
                    if v <= self.limit {
                        self.out.push((self.x, v));
                        if self.first_only {
                            return true;
                        }
                    }
                }
            } else if self.search(level - 1, remaining - used) {
                return true;
            }
        }
        self.x[level] = 0;
        false
    }
}

/// All nonzero `x ∈ Z⁴` with `xᵀGx ≤ bound`, ordered by `(value, coords)`.
pub fn short_vectors(gram: &Gram, bound: &Rational) -> Result<Vec<ShortVector>, EnumerationError> {
    enumerate(gram, bound, false)
}

/// Some nonzero `x` with `xᵀGx ≤ bound`, if one exists.
pub fn any_short_vector(gram: &Gram, bound: &Rational) -> Result<Option<ShortVector>, EnumerationError> {
    Ok(enumerate(gram, bound, true)?.into_iter().next())
}

/// The minimum nonzero value of the form.
pub fn minimum(gram: &Gram) -> Result<Rational, EnumerationError> {
    let (_, reduced) = lll(gram)?;
    let bound = (0..4).map(|i| reduced[i][i].clone()).min().expect("four diagonal entries");
    Ok(short_vectors(gram, &bound)?.into_iter().next().expect("basis vectors are below the bound").value)
}
