//! Cross-check of the three routes to the mass of supersingular curves.

use crate::exact::Rational;
use crate::finitefield::DEFAULT_SEED;
use crate::formulas::{eichler_class_number, ekedahl_mass, FormulaError};
use crate::par::{self, Execution};
use crate::primes::is_prime;
use crate::quaternion::{ideal_classes_with, QuaternionError};
use crate::supersingular::{geometric_mass_seeded, SupersingularError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error(transparent)]
    Supersingular(#[from] SupersingularError),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Geometric, arithmetic and analytic masses for one prime, with the
/// automorphism and unit-group multisets they are built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub p: u64,
    pub geometric_mass: Rational,
    pub arithmetic_mass: Rational,
    pub analytic_mass: Rational,
    /// `#Aut(E)` over supersingular classes, sorted ascending.
    pub aut_multiset: Vec<u32>,
    /// `#Γ_c` over ideal classes, sorted ascending.
    pub unit_multiset: Vec<u32>,
    pub supersingular_count: usize,
    pub ideal_class_count: usize,
    /// Closed-form class number.
    pub class_number: u64,
}

impl VerifyReport {
    /// Whether all three masses, both multisets and the three counts agree.
    pub fn all_match(&self) -> bool {
        self.geometric_mass == self.arithmetic_mass
            && self.arithmetic_mass == self.analytic_mass
            && self.aut_multiset == self.unit_multiset
            && self.supersingular_count as u64 == self.class_number
            && self.ideal_class_count as u64 == self.class_number
    }
}

pub fn verify(p: u64) -> Result<VerifyReport, VerifyError> {
    verify_with(p, Execution::default())
}

/// Compute the geometric and arithmetic sides concurrently and compare them
/// with the closed forms.
pub fn verify_with(p: u64, exec: Execution) -> Result<VerifyReport, VerifyError> {
    verify_seeded(p, exec, DEFAULT_SEED)
}

/// As [`verify_with`], seeding the randomized root splitting.
pub fn verify_seeded(p: u64, exec: Execution, seed: u64) -> Result<VerifyReport, VerifyError> {
    if !is_prime(p) {
        return Err(VerifyError::NotPrime(p));
    }
    let (geo, arith) = par::join(exec, || geometric_mass_seeded(p, exec, seed), || ideal_classes_with(p, exec));
    let (geo, arith) = (geo?, arith?);
    let unit_multiset = arith.unit_multiset().into_iter().map(|u| u as u32).collect();
    Ok(VerifyReport {
        p,
        aut_multiset: geo.aut_multiset(),
        unit_multiset,
        supersingular_count: geo.class_count,
        ideal_class_count: arith.class_number(),
        geometric_mass: geo.mass,
        arithmetic_mass: arith.mass,
        analytic_mass: ekedahl_mass(1, p)?,
        class_number: eichler_class_number(p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match() {
        for p in [2u64, 3, 5, 7, 11, 13, 37, 101] {
            let r = verify(p).unwrap();
            assert!(r.all_match(), "p = {p}: {r:?}");
        }
        let r = verify(11).unwrap();
        assert_eq!(r.aut_multiset, vec![4, 6]);
        assert_eq!(r.analytic_mass, Rational::new(5, 12));
    }

    #[test]
    fn rejects_composites() {
        assert!(matches!(verify(4), Err(VerifyError::NotPrime(4))));
    }
}
