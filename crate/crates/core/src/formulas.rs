//! Closed-form masses and class numbers.

use num_bigint::BigInt;
use num_traits::Pow;

use crate::exact::{zeta_one_minus_2k, Rational};
use crate::finitefield::legendre_symbol;
use crate::primes::{factorize, gcd, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("g must be at least 1")]
    ZeroGenus,
    #[error("level N must be at least {min} (got {n})")]
    LevelTooSmall { n: u64, min: u64 },
    #[error("level N = {n} is not prime to p = {p}")]
    LevelNotPrimeToP { n: u64, p: u64 },
    #[error("mass {0} with level is not an integer")]
    NonIntegralCount(Rational),
}

/// Parameters of a mass evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MassQuery {
    pub g: u32,
    pub p: u64,
    pub n: u64,
}

impl MassQuery {
    pub fn new(g: u32, p: u64, n: u64) -> Result<Self, FormulaError> {
        check_prime(p)?;
        if g == 0 {
            return Err(FormulaError::ZeroGenus);
        }
        if n == 0 {
            return Err(FormulaError::LevelTooSmall { n, min: 1 });
        }
        Ok(MassQuery { g, p, n })
    }
}

fn check_prime(p: u64) -> Result<(), FormulaError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(FormulaError::NotPrime(p))
    }
}

/// `(p − 1)/24`.
pub fn eichler_deuring_mass(p: u64) -> Result<Rational, FormulaError> {
    check_prime(p)?;
    Ok(Rational::new(p as i64 - 1, 24))
}

/// `((−1)^{g(g+1)/2} / 2^g) · Π_{k=1}^{g} ζ(1−2k) · Π_{k=1}^{g} (p^k + (−1)^k)`.
pub fn ekedahl_mass(g: u32, p: u64) -> Result<Rational, FormulaError> {
    check_prime(p)?;
    if g == 0 {
        return Err(FormulaError::ZeroGenus);
    }
    let sign = if (g as u64 * (g as u64 + 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let prefactor = Rational::new(sign, BigInt::from(2u32).pow(g));
    let zetas: Rational = (1..=g).map(zeta_one_minus_2k).product();
    let local: Rational = (1..=g)
        .map(|k| {
            let pk = BigInt::from(p).pow(k);
            let term = if k % 2 == 0 { pk + 1 } else { pk - 1 };
            Rational::from_integer(term)
        })
        .product();
    Ok(prefactor * zetas * local)
}

/// Number of right ideal classes of a maximal order in `B_{p,∞}`.
pub fn eichler_class_number(p: u64) -> Result<u64, FormulaError> {
    check_prime(p)?;
    if p < 5 {
        return Ok(1);
    }
    let l4 = legendre_symbol(-4, p).expect("odd prime") as i64;
    let l3 = legendre_symbol(-3, p).expect("odd prime") as i64;
    let h = Rational::new(p as i64 - 1, 12) + Rational::new(1 - l4, 4) + Rational::new(1 - l3, 3);
    Ok(h.to_i64().expect("class number formula yields an integer") as u64)
}

fn check_level(p: u64, n: u64) -> Result<(), FormulaError> {
    check_prime(p)?;
    if n == 0 {
        return Err(FormulaError::LevelTooSmall { n, min: 1 });
    }
    if gcd(n, p) != 1 {
        return Err(FormulaError::LevelNotPrimeToP { n, p });
    }
    Ok(())
}

/// `[G(Ẑ) : U_N] = Π_{ℓ^e ∥ N} ℓ^{3e−2}(ℓ² − 1)`, the order of the
/// determinant-one group mod `N`.
pub fn level_index(p: u64, n: u64) -> Result<BigInt, FormulaError> {
    check_level(p, n)?;
    Ok(factorize(n).into_iter().map(|(l, e)| BigInt::from(l).pow(3 * e - 2) * BigInt::from(l * l - 1)).product())
}

/// `(p − 1)/24 · [G(Ẑ) : U_N]`.
pub fn mass_with_level(p: u64, n: u64) -> Result<Rational, FormulaError> {
    Ok(eichler_deuring_mass(p)? * Rational::from_integer(level_index(p, n)?))
}

/// Number of classes with level-`N` structure, `N ≥ 3`: stabilizers are
/// trivial, so the count equals the mass.
pub fn class_count_with_level(p: u64, n: u64) -> Result<BigInt, FormulaError> {
    if n < 3 {
        check_prime(p)?;
        return Err(FormulaError::LevelTooSmall { n, min: 3 });
    }
    let mass = mass_with_level(p, n)?;
    mass.to_integer().ok_or(FormulaError::NonIntegralCount(mass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::bernoulli;
    use crate::primes::primes_in;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// `#{M ∈ M₂(Z/n) : det M = 1}` by exhaustion.
    fn sl2_count(n: u64) -> u64 {
        let mut c = 0;
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        if (a * d + n * n - b * cc % n) % n == 1 % n {
                            c += 1;
                        }
                    }
                }
            }
        }
        c
    }

    #[test]
    fn eichler_deuring_examples() {
        assert_eq!(eichler_deuring_mass(2).unwrap(), r(1, 24));
        assert_eq!(eichler_deuring_mass(11).unwrap(), r(5, 12));
        assert_eq!(eichler_deuring_mass(101).unwrap(), r(25, 6));
        assert_eq!(eichler_deuring_mass(1), Err(FormulaError::NotPrime(1)));
    }

    #[test]
    fn ekedahl_examples() {
        assert_eq!(ekedahl_mass(2, 2).unwrap(), r(1, 1152));
        assert_eq!(ekedahl_mass(2, 11).unwrap(), r(61, 288));
        assert_eq!(ekedahl_mass(0, 2), Err(FormulaError::ZeroGenus));
        // The genus-two constant from Bernoulli numbers directly:
        // (−1)³/4 · (−B₂/2)(−B₄/4) = −1/4 · (−1/12)(1/120) = 1/5760.
        let c = Rational::new(-1, 4) * (-bernoulli(2) / Rational::from(2)) * (-bernoulli(4) / Rational::from(4));
        assert_eq!(c, r(1, 5760));
    }

    #[test]
    fn ekedahl_genus_one_reduces() {
        for p in primes_in(2, 2000) {
            assert_eq!(ekedahl_mass(1, p).unwrap(), eichler_deuring_mass(p).unwrap());
        }
    }

    #[test]
    fn ekedahl_positive() {
        for g in 1..=10 {
            for p in primes_in(2, 100) {
                assert!(ekedahl_mass(g, p).unwrap().is_positive(), "g = {g}, p = {p}");
            }
        }
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(eichler_class_number(2), Ok(1));
        assert_eq!(eichler_class_number(3), Ok(1));
        assert_eq!(eichler_class_number(11), Ok(2));
        assert_eq!(eichler_class_number(37), Ok(3));
        assert_eq!(eichler_class_number(13), Ok(1));
    }

    #[test]
    fn level_index_examples() {
        assert_eq!(level_index(11, 1).unwrap(), BigInt::from(1));
        assert_eq!(level_index(11, 2).unwrap(), BigInt::from(6));
        assert_eq!(level_index(11, 12).unwrap(), BigInt::from(1152));
        assert_eq!(level_index(11, 22), Err(FormulaError::LevelNotPrimeToP { n: 22, p: 11 }));
        assert_eq!(level_index(11, 0), Err(FormulaError::LevelTooSmall { n: 0, min: 1 }));
    }

    #[test]
    fn level_index_matches_sl2_counts() {
        for n in [2u64, 3, 4, 5, 6, 7, 8, 9] {
            assert_eq!(level_index(11, n).unwrap(), BigInt::from(sl2_count(n)), "N = {n}");
        }
    }

    #[test]
    fn level_masses() {
        assert_eq!(mass_with_level(11, 1).unwrap(), r(5, 12));
        assert_eq!(mass_with_level(11, 3).unwrap(), r(10, 1));
        assert_eq!(mass_with_level(13, 4).unwrap(), r(24, 1));
        assert_eq!(class_count_with_level(11, 3).unwrap(), BigInt::from(10));
        assert_eq!(class_count_with_level(2, 3).unwrap(), BigInt::from(1));
        assert_eq!(class_count_with_level(13, 5).unwrap(), BigInt::from(60));
        assert_eq!(class_count_with_level(13, 2), Err(FormulaError::LevelTooSmall { n: 2, min: 3 }));
        assert!(MassQuery::new(0, 5, 1).is_err());
        assert!(MassQuery::new(1, 6, 1).is_err());
    }
}
