//! Supersingular j-invariants in characteristic `p` and the geometric mass
//! `Σ 1/#Aut(E)` over their isomorphism classes.
//!
//! For `p ≥ 5` the Legendre parameters `λ` of supersingular curves are the
//! roots of the Hasse polynomial `H_p(λ) = Σ_{i=0}^{m} C(m,i)² λ^i` with
//! `m = (p−1)/2`; each root maps to `j(λ) = 2⁸(λ²−λ+1)³ / (λ²(λ−1)²)`.
//! Characteristics 2 and 3 each carry a single class, `j = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::Rational;
use crate::finitefield::{self, FieldError, Fp2Element, Fp2Field, FpElement, FpPolynomial, DEFAULT_SEED};
use crate::par::{self, Execution};
use crate::primes::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SupersingularError {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("the Legendre-form Hasse polynomial needs p >= 5 (got {0})")]
    CharacteristicTooSmall(u64),
    #[error("j = {j} is not a supersingular invariant in characteristic {p}")]
    NotSupersingular { j: Fp2Element, p: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One isomorphism class over `F̄_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SupersingularClass {
    pub j: Fp2Element,
    pub aut_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricMassReport {
    pub p: u64,
    /// The non-residue `d = δ²` used to write j-invariants, absent for `p = 2`.
    pub d: Option<u64>,
    pub classes: Vec<SupersingularClass>,
    pub mass: Rational,
    pub class_count: usize,
}

impl GeometricMassReport {
    /// Automorphism-group orders, sorted ascending.
    pub fn aut_multiset(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.classes.iter().map(|c| c.aut_order).collect();
        v.sort_unstable();
        v
    }
}

fn check_prime(p: u64) -> Result<(), SupersingularError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(SupersingularError::NotPrime(p))
    }
}

/// `H_p(λ) = Σ_{i=0}^{m} C(m,i)² λ^i mod p`, `m = (p−1)/2`.
pub fn hasse_polynomial(p: u64) -> Result<FpPolynomial, SupersingularError> {
    check_prime(p)?;
    if p < 5 {
        return Err(SupersingularError::CharacteristicTooSmall(p));
    }
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = FpElement::new(1, p);
    for i in 0..=m {
        coeffs.push((binom * binom).value());
        // C(m, i+1) = C(m, i)·(m−i)/(i+1); i + 1 <= m < p so the divisor is a unit.
        if i < m {
            let step = FpElement::new((i + 1) as i64, p).inv()?;
            binom = binom * FpElement::new((m - i) as i64, p) * step;
        }
    }
    Ok(FpPolynomial::new(p, coeffs))
}

/// `j(λ) = 256(λ²−λ+1)³ / (λ²(λ−1)²)`.
pub fn legendre_j_invariant(field: &Fp2Field, lambda: Fp2Element) -> Result<Fp2Element, FieldError> {
    let one = Fp2Element::ONE;
    let l2 = field.mul(lambda, lambda);
    let inner = field.add(field.sub(l2, lambda), one);
    let num = field.mul(field.from_fp(256), field.pow(inner, 3));
    let lm1 = field.sub(lambda, one);
    let den = field.mul(l2, field.mul(lm1, lm1));
    field.div(num, den)
}

/// The supersingular j-invariants for `p`, canonically ordered.
pub fn supersingular_j_invariants(p: u64) -> Result<Vec<Fp2Element>, SupersingularError> {
    supersingular_j_invariants_with(p, Execution::default())
}

pub fn supersingular_j_invariants_with(p: u64, exec: Execution) -> Result<Vec<Fp2Element>, SupersingularError> {
    supersingular_j_invariants_seeded(p, exec, DEFAULT_SEED)
}

/// As [`supersingular_j_invariants_with`], seeding the randomized root
/// splitting with `seed`. The result does not depend on the seed.
pub fn supersingular_j_invariants_seeded(
    p: u64,
    exec: Execution,
    seed: u64,
) -> Result<Vec<Fp2Element>, SupersingularError> {
    check_prime(p)?;
    if p < 5 {
        return Ok(vec![Fp2Element::ZERO]);
    }
    let field = Fp2Field::new(p)?;
    let hasse = hasse_polynomial(p)?;
    let lambdas = finitefield::roots_in_fp2_with_rng(&hasse, &field, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let js = par::map(exec, &lambdas, |&l| legendre_j_invariant(&field, l));
    let mut js = js.into_iter().collect::<Result<Vec<_>, _>>()?;
    js.sort_unstable();
    js.dedup();
    Ok(js)
}

/// `#Aut(E)` by the classical rule, after the closed-form checks.
///
/// Does not verify membership in the supersingular set; see [`aut_order`].
pub fn aut_order_rule(j: Fp2Element, p: u64) -> u32 {
    match p {
        2 => 24,
        3 => 12,
        _ if j.is_zero() => 6,
        _ if j == (Fp2Element { a: 1728 % p, b: 0 }) => 4,
        _ => 2,
    }
}

/// `#Aut(E)` for the supersingular curve with invariant `j`.
pub fn aut_order(j: Fp2Element, p: u64) -> Result<u32, SupersingularError> {
    if !supersingular_j_invariants(p)?.contains(&j) {
        return Err(SupersingularError::NotSupersingular { j, p });
    }
    Ok(aut_order_rule(j, p))
}

/// Enumerate the supersingular classes and sum `1/#Aut` exactly.
pub fn geometric_mass(p: u64) -> Result<GeometricMassReport, SupersingularError> {
    geometric_mass_with(p, Execution::default())
}

pub fn geometric_mass_with(p: u64, exec: Execution) -> Result<GeometricMassReport, SupersingularError> {
    geometric_mass_seeded(p, exec, DEFAULT_SEED)
}

pub fn geometric_mass_seeded(p: u64, exec: Execution, seed: u64) -> Result<GeometricMassReport, SupersingularError> {
    let js = supersingular_j_invariants_seeded(p, exec, seed)?;
    let classes: Vec<SupersingularClass> =
        js.into_iter().map(|j| SupersingularClass { j, aut_order: aut_order_rule(j, p) }).collect();
    let mass = classes.iter().map(|c| Rational::new(1, c.aut_order)).sum();
    let d = (p > 2).then(|| Fp2Field::new(p).map(|f| f.d())).transpose()?;
    Ok(GeometricMassReport { p, d, class_count: classes.len(), classes, mass })
}
