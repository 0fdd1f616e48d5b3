//! Right ideal classes of the maximal order by Brandt-graph search.

use std::collections::HashMap;
use std::sync::Arc;

use crate::exact::Rational;
use crate::par::{self, Execution};
use crate::primes::{is_prime, smallest_prime_other_than};

use super::ideal::{ideals_of_norm_ell, is_equivalent, ClassSignature, RightIdeal};
use super::order::{maximal_order, unit_group_order};
use super::QuaternionError;

/// Class representatives with the unit-group orders `#Γ_c = #O_l(I)^×` of
/// their left orders and the resulting mass `Σ 1/#Γ_c`.
#[derive(Debug, Clone)]
pub struct IdealClassSet {
    pub p: u64,
    /// Norm of the Brandt-graph edges used for the search.
    pub ell: u64,
    pub representatives: Vec<RightIdeal>,
    /// BFS generation at which each class was first reached.
    pub generations: Vec<usize>,
    pub unit_orders: Vec<usize>,
    pub mass: Rational,
}

impl IdealClassSet {
    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    /// Unit-group orders, sorted ascending.
    pub fn unit_multiset(&self) -> Vec<usize> {
        let mut v = self.unit_orders.clone();
        v.sort_unstable();
        v
    }
}

/// `(p − 1)/24`, used only to certify a finished enumeration.
fn expected_mass(p: u64) -> Rational {
    Rational::new(p as i64 - 1, 24)
}

/// Width of the theta window used to bucket classes before exact tests.
const SIGNATURE_WIDTH: u64 = 4;

/// Index into `candidates` of a class equivalent to `ideal`, if any.
fn find_class(
    exec: Execution,
    reps: &[RightIdeal],
    candidates: &[usize],
    ideal: &RightIdeal,
) -> Result<Option<usize>, QuaternionError> {
    // Errors are surfaced after the search; a failing test counts as a match
    // so the search stops early.
    let outcomes = std::sync::Mutex::new(None);
    let hit = par::position(exec, candidates, |&r| match is_equivalent(&reps[r], ideal) {
        Ok(b) => b,
        Err(e) => {
            outcomes.lock().expect("error slot poisoned").get_or_insert(e);
            true
        }
    });
    if let Some(e) = outcomes.into_inner().expect("error slot poisoned") {
        return Err(e);
    }
    Ok(hit)
}

pub fn ideal_classes(p: u64) -> Result<IdealClassSet, QuaternionError> {
    ideal_classes_with(p, Execution::default())
}

/// Enumerate the right ideal classes of the maximal order of `B_{p,∞}`.
///
/// Starting from `[O]`, each class in BFS order is expanded by its `ℓ + 1`
/// neighbours; a neighbour not equivalent to any known class becomes a new
/// class (stored in reduced form). Exact equivalence tests are only run
/// against classes sharing the neighbour's [`ClassSignature`]. The search ends when no class yields a new
/// neighbour. Only afterwards is the mass compared with `(p − 1)/24`; a
/// mismatch is reported as [`QuaternionError::MassCertificate`].
pub fn ideal_classes_with(p: u64, exec: Execution) -> Result<IdealClassSet, QuaternionError> {
    if !is_prime(p) {
        return Err(QuaternionError::NotPrime(p));
    }
    let order = Arc::new(maximal_order(p)?);
    let ell = smallest_prime_other_than(p);
    let unit = RightIdeal::unit(order);
    let mut buckets: HashMap<ClassSignature, Vec<usize>> = HashMap::new();
    buckets.insert(unit.signature(SIGNATURE_WIDTH)?, vec![0]);
    let mut reps = vec![unit];
    let mut generations = vec![0usize];
    let mut head = 0;
    while head < reps.len() {
        let neighbours = ideals_of_norm_ell(&reps[head], ell)?;
        let signatures = par::map(exec, &neighbours, |n| n.signature(SIGNATURE_WIDTH));
        for (neighbour, signature) in neighbours.into_iter().zip(signatures) {
            let signature = signature?;
            let known = buckets.get(&signature).map(Vec::as_slice).unwrap_or_default();
            if find_class(exec, &reps, known, &neighbour)?.is_none() {
                buckets.entry(signature).or_default().push(reps.len());
                reps.push(neighbour.reduced()?);
                generations.push(generations[head] + 1);
            }
        }
        head += 1;
    }

    let unit_orders =
        par::map(exec, &reps, |r| unit_group_order(&r.left_order())).into_iter().collect::<Result<Vec<_>, _>>()?;
    let mass: Rational = unit_orders.iter().map(|&u| Rational::new(1, u as i64)).sum();
    let expected = expected_mass(p);
    if mass != expected {
        return Err(QuaternionError::MassCertificate { found: Box::new(mass), expected: Box::new(expected) });
    }
    Ok(IdealClassSet { p, ell, representatives: reps, generations, unit_orders, mass })
}

/// `Σ 1/#Γ_c` over the enumerated classes.
pub fn arithmetic_mass(p: u64) -> Result<Rational, QuaternionError> {
    Ok(ideal_classes(p)?.mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_sets() {
        let c2 = ideal_classes(2).unwrap();
        assert_eq!((c2.class_number(), c2.unit_orders.clone()), (1, vec![24]));
        assert_eq!(c2.mass, Rational::new(1, 24));

        let c11 = ideal_classes(11).unwrap();
        assert_eq!(c11.class_number(), 2);
        assert_eq!(c11.unit_multiset(), vec![4, 6]);
        assert_eq!(c11.mass, Rational::new(5, 12));

        let c37 = ideal_classes(37).unwrap();
        assert_eq!(c37.class_number(), 3);
        assert_eq!(c37.mass, Rational::new(3, 2));
    }

    #[test]
    fn arithmetic_mass_examples() {
        assert_eq!(arithmetic_mass(2).unwrap(), Rational::new(1, 24));
        assert_eq!(arithmetic_mass(11).unwrap(), Rational::new(5, 12));
        assert_eq!(arithmetic_mass(13).unwrap(), Rational::new(1, 2));
        assert_eq!(arithmetic_mass(15).unwrap_err(), QuaternionError::NotPrime(15));
    }

    #[test]
    fn representatives_pairwise_inequivalent() {
        for p in [37u64, 61, 71] {
            let c = ideal_classes(p).unwrap();
            for (a, x) in c.representatives.iter().enumerate() {
                for (b, y) in c.representatives.iter().enumerate() {
                    assert_eq!(is_equivalent(x, y).unwrap(), a == b, "p = {p}");
                }
            }
        }
    }

    #[test]
    fn execution_modes_agree() {
        for p in [59u64, 97] {
            let s = ideal_classes_with(p, Execution::Sequential).unwrap();
            let q = ideal_classes_with(p, Execution::Parallel).unwrap();
            assert_eq!(s.representatives, q.representatives);
            assert_eq!(s.unit_orders, q.unit_orders);
        }
    }
}
