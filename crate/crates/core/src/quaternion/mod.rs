//! The definite quaternion algebra `B_{p,∞}`, its maximal orders, right
//! ideals and ideal classes.
//!
//! The class set is enumerated by breadth-first search over the `ℓ`-neighbour
//! (Brandt) graph starting from the maximal order itself. Unit groups of the
//! left orders of the class representatives give the stabilizer orders whose
//! reciprocals sum to the arithmetic mass.

pub mod classes;
pub mod enumerate;
pub mod ideal;
pub mod lattice;
pub mod order;

use std::fmt;

use num_bigint::BigInt;

use crate::exact::Rational;
use crate::finitefield::{legendre_symbol, FieldError};
use crate::primes::{factorize, is_prime};

pub use classes::{arithmetic_mass, ideal_classes, ideal_classes_with, IdealClassSet};
pub use enumerate::EnumerationError;
pub use ideal::{ideals_of_norm_ell, is_equivalent, ClassSignature, RightIdeal};
pub use lattice::{Lattice, LatticeError};
pub use order::{maximal_order, unit_group_order, QuatOrder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuaternionError {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("{0} is not prime")]
    NotPrimeNorm(u64),
    #[error("ideal norm {0} must differ from the ramified prime")]
    RamifiedNorm(u64),
    #[error("quaternion algebra ({a},{b}) is not definite")]
    NotDefinite { a: i64, b: i64 },
    #[error("ideals belong to different orders")]
    MismatchedOrders,
    #[error("presentation ({a},{b}) is ramified at {found:?}, expected {{{p}, inf}}")]
    WrongRamification { a: i64, b: i64, p: u64, found: Vec<String> },
    #[error("order certificate failed: {0}")]
    InvalidOrder(String),
    #[error("ideal construction failed: {0}")]
    InvalidIdeal(String),
    #[error("class enumeration closed with mass {found}, expected {expected}")]
    MassCertificate { found: Box<Rational>, expected: Box<Rational> },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The algebra `(a, b)_Q` with basis `1, i, j, k`, `i² = a`, `j² = b`,
/// `k = ij = −ji`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuatAlgebra {
    pub p: u64,
    pub a: i64,
    pub b: i64,
}

/// An element `x₀ + x₁i + x₂j + x₃k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuatElement {
    pub coords: [Rational; 4],
}

impl QuatElement {
    pub fn new(coords: [Rational; 4]) -> Self {
        QuatElement { coords }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        QuatElement { coords: c.map(Rational::from) }
    }

    /// `(c₀ + c₁i + c₂j + c₃k) / den`.
    pub fn from_fraction(c: [i64; 4], den: i64) -> Self {
        QuatElement { coords: c.map(|x| Rational::new(x, den)) }
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// Standard involution `x ↦ x̄`.
    pub fn conj(&self) -> Self {
        let [x0, x1, x2, x3] = &self.coords;
        QuatElement { coords: [x0.clone(), -x1, -x2, -x3] }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuatElement { coords: self.coords.clone().map(|x| x * r) }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut c = self.coords.clone();
        for (x, y) in c.iter_mut().zip(&rhs.coords) {
            *x = &*x + y;
        }
        QuatElement { coords: c }
    }

    pub fn trd(&self) -> Rational {
        &self.coords[0] * &Rational::from(2)
    }
}

impl fmt::Debug for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x0, x1, x2, x3] = &self.coords;
        write!(f, "({x0}) + ({x1})i + ({x2})j + ({x3})k")
    }
}

/// Hilbert symbol `(a, b)_ℓ` at a finite prime `ℓ`.
pub fn hilbert_symbol(a: i64, b: i64, ell: u64) -> i8 {
    fn split(mut x: i64, ell: i64) -> (u32, i64) {
        let mut v = 0;
        while x % ell == 0 {
            x /= ell;
            v += 1;
        }
        (v, x)
    }
    let l = ell as i64;
    let (alpha, u) = split(a, l);
    let (beta, v) = split(b, l);
    if ell == 2 {
        let eps = |x: i64| (x.rem_euclid(4) == 3) as i64;
        let omega = |x: i64| matches!(x.rem_euclid(8), 3 | 5) as i64;
        let e = eps(u) * eps(v) + alpha as i64 * omega(v) + beta as i64 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let sign = if (alpha * beta) % 2 == 1 && ell % 4 == 3 { -1 } else { 1 };
        let lu = if beta % 2 == 1 { legendre_symbol(u, ell).expect("odd prime") } else { 1 };
        let lv = if alpha % 2 == 1 { legendre_symbol(v, ell).expect("odd prime") } else { 1 };
        sign * lu * lv
    }
}

impl QuatAlgebra {
    /// The standard presentation of `B_{p,∞}`, certified by Hilbert symbols.
    pub fn for_prime(p: u64) -> Result<Self, QuaternionError> {
        if !is_prime(p) {
            return Err(QuaternionError::NotPrime(p));
        }
        let pi = p as i64;
        let (a, b) = match p {
            2 => (-1, -1),
            _ if p % 4 == 3 => (-1, -pi),
            _ if p % 8 == 5 => (-2, -pi),
            _ => {
                let q = (3..)
                    .step_by(4)
                    .find(|&q| is_prime(q) && legendre_symbol(q as i64, p) == Ok(-1))
                    .expect("a suitable auxiliary prime exists");
                (-(q as i64), -pi)
            }
        };
        let alg = QuatAlgebra { p, a, b };
        let ramified = alg.ramified_places();
        if ramified != vec![p.to_string(), "inf".to_string()] {
            return Err(QuaternionError::WrongRamification { a, b, p, found: ramified });
        }
        Ok(alg)
    }

    pub fn is_definite(&self) -> bool {
        self.a < 0 && self.b < 0
    }

    /// Places where `(a, b)` is ramified: finite primes ascending, then `"inf"`.
    pub fn ramified_places(&self) -> Vec<String> {
        let mut candidates: Vec<u64> = vec![2];
        for x in [self.a, self.b] {
            candidates.extend(factorize(x.unsigned_abs()).into_iter().map(|(l, _)| l));
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut out: Vec<String> = candidates
            .into_iter()
            .filter(|&l| hilbert_symbol(self.a, self.b, l) == -1)
            .map(|l| l.to_string())
            .collect();
        if self.is_definite() {
            out.push("inf".to_string());
        }
        out
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let a = Rational::from(self.a);
        let b = Rational::from(self.b);
        let ab = &a * &b;
        let [x0, x1, x2, x3] = &x.coords;
        let [y0, y1, y2, y3] = &y.coords;
        let z0 = &(&(x0 * y0) + &(&a * &(x1 * y1))) + &(&(&b * &(x2 * y2)) - &(&ab * &(x3 * y3)));
        let z1 = &(&(x0 * y1) + &(x1 * y0)) + &(&b * &(&(x3 * y2) - &(x2 * y3)));
        let z2 = &(&(x0 * y2) + &(x2 * y0)) + &(&a * &(&(x1 * y3) - &(x3 * y1)));
        let z3 = &(&(x0 * y3) + &(x3 * y0)) + &(&(x1 * y2) - &(x2 * y1));
        QuatElement { coords: [z0, z1, z2, z3] }
    }

    /// Integer-coordinate product, used for lattice generators.
    pub(crate) fn mul_int(&self, x: &lattice::IntVec, y: &lattice::IntVec) -> lattice::IntVec {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        let [x0, x1, x2, x3] = x;
        let [y0, y1, y2, y3] = y;
        [
            x0 * y0 + &a * x1 * y1 + &b * x2 * y2 - &a * &b * x3 * y3,
            x0 * y1 + x1 * y0 + &b * (x3 * y2 - x2 * y3),
            x0 * y2 + x2 * y0 + &a * (x1 * y3 - x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ]
    }

    /// Reduced norm `x₀² − a x₁² − b x₂² + ab x₃²`.
    pub fn nrd(&self, x: &QuatElement) -> Rational {
        self.norm_form(x, x)
    }

    /// The bilinear form with `norm_form(x, x) = nrd(x)`, i.e. `trd(x ȳ)/2`.
    pub fn norm_form(&self, x: &QuatElement, y: &QuatElement) -> Rational {
        let w = [1, -self.a, -self.b, self.a * self.b];
        (0..4).map(|t| &(&x.coords[t] * &y.coords[t]) * &Rational::from(w[t])).sum()
    }

    /// Gram matrix of the norm form on a basis.
    pub fn gram(&self, basis: &[QuatElement; 4]) -> enumerate::Gram {
        let mut g: enumerate::Gram = Default::default();
        for i in 0..4 {
            for j in i..4 {
                let v = self.norm_form(&basis[i], &basis[j]);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }
}

/// `quat_algebra(p)`: the definite algebra ramified at `{p, ∞}`.
pub fn quat_algebra(p: u64) -> Result<QuatAlgebra, QuaternionError> {
    QuatAlgebra::for_prime(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_in;
    use proptest::prelude::*;

    #[test]
    fn presentations() {
        assert_eq!(quat_algebra(2).unwrap(), QuatAlgebra { p: 2, a: -1, b: -1 });
        assert_eq!(quat_algebra(11).unwrap(), QuatAlgebra { p: 11, a: -1, b: -11 });
        assert_eq!(quat_algebra(5).unwrap(), QuatAlgebra { p: 5, a: -2, b: -5 });
        // 17 ≡ 1 mod 8; 3 is a non-residue mod 17.
        assert_eq!(quat_algebra(17).unwrap(), QuatAlgebra { p: 17, a: -3, b: -17 });
        assert_eq!(quat_algebra(12), Err(QuaternionError::NotPrime(12)));
    }

    #[test]
    fn ramification_exactly_at_p_and_infinity() {
        for p in primes_in(2, 500) {
            let alg = quat_algebra(p).unwrap();
            assert_eq!(alg.ramified_places(), vec![p.to_string(), "inf".to_string()]);
        }
        let split = QuatAlgebra { p: 0, a: -1, b: 1 };
        assert!(split.ramified_places().is_empty());
        assert_eq!(QuatAlgebra { p: 0, a: -1, b: -1 }.ramified_places(), vec!["2", "inf"]);
    }

    #[test]
    fn hilbert_symbol_reciprocity() {
        // Product formula over all places.
        for a in [-7i64, -5, -3, -2, -1, 2, 3, 5, 6, 10] {
            for b in [-11i64, -6, -3, -1, 2, 7, 15] {
                let mut places: Vec<u64> = vec![2];
                places.extend(factorize(a.unsigned_abs()).into_iter().map(|x| x.0));
                places.extend(factorize(b.unsigned_abs()).into_iter().map(|x| x.0));
                places.sort_unstable();
                places.dedup();
                let finite: i8 = places.iter().map(|&l| hilbert_symbol(a, b, l)).product();
                let inf = if a < 0 && b < 0 { -1 } else { 1 };
                assert_eq!(finite * inf, 1, "({a},{b})");
            }
        }
    }

    fn arb_element() -> impl Strategy<Value = QuatElement> {
        (prop::array::uniform4(-20i64..20), 1i64..6).prop_map(|(c, d)| QuatElement::from_fraction(c, d))
    }

    proptest! {
        #[test]
        fn multiplication_laws(x in arb_element(), y in arb_element(), z in arb_element(), pi in 0usize..4) {
            let alg = quat_algebra([2u64, 3, 5, 17][pi]).unwrap();
            prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
            prop_assert_eq!(alg.nrd(&alg.mul(&x, &y)), &alg.nrd(&x) * &alg.nrd(&y));
            // x x̄ = nrd(x)
            let xx = alg.mul(&x, &x.conj());
            prop_assert_eq!(xx, QuatElement::one().scale(&alg.nrd(&x)));
            // conj is an anti-automorphism
            prop_assert_eq!(alg.mul(&x, &y).conj(), alg.mul(&y.conj(), &x.conj()));
            prop_assert!(!alg.nrd(&x).is_negative());
            prop_assert_eq!(alg.nrd(&x).is_zero(), x.is_zero());
        }
    }
}
