//! Right ideals of a maximal order, their `ℓ`-neighbours and the class
//! equivalence test.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exact::Rational;
use crate::primes::is_prime;

use super::enumerate::{any_short_vector, lll, short_vectors, Gram};
use super::lattice::{IntVec, Lattice};
use super::order::QuatOrder;
use super::{QuatElement, QuaternionError};

/// A full-rank lattice `I` with `I·O ⊆ I` for the reference order `O`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightIdeal {
    pub lattice: Lattice,
    pub order: Arc<QuatOrder>,
    /// Reduced norm, with `norm² = covol(I) / covol(O)`.
    pub norm: Rational,
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

fn conj_int(v: &IntVec) -> IntVec {
    [v[0].clone(), -&v[1], -&v[2], -&v[3]]
}

impl RightIdeal {
    /// The unit ideal `O`.
    pub fn unit(order: Arc<QuatOrder>) -> Self {
        RightIdeal { lattice: order.lattice.clone(), order, norm: Rational::one() }
    }

    /// Wrap a lattice, computing its norm; fails if `I·O ⊄ I`.
    pub fn from_lattice(order: Arc<QuatOrder>, lattice: Lattice) -> Result<Self, QuaternionError> {
        let ratio = &lattice.covolume() / &order.lattice.covolume();
        let norm = rational_sqrt(&ratio)
            .ok_or_else(|| QuaternionError::InvalidIdeal(format!("index ratio {ratio} is not a square")))?;
        let ideal = RightIdeal { lattice, order, norm };
        if !ideal.is_right_stable() {
            return Err(QuaternionError::InvalidIdeal("lattice is not a right module over the order".into()));
        }
        Ok(ideal)
    }

    pub fn basis(&self) -> [QuatElement; 4] {
        self.lattice.basis().map(QuatElement::new)
    }

    pub fn is_right_stable(&self) -> bool {
        let alg = &self.order.algebra;
        let ob = self.order.basis();
        self.basis().iter().all(|x| ob.iter().all(|o| self.lattice.contains(&alg.mul(x, o).coords)))
    }

    /// Gram matrix of the reduced norm on the lattice basis.
    pub fn gram(&self) -> Gram {
        self.order.algebra.gram(&self.basis())
    }

    /// The lattice `I·J̄`.
    pub fn times_conjugate(&self, other: &RightIdeal) -> Lattice {
        let alg = &self.order.algebra;
        let mut gens = Vec::with_capacity(16);
        for x in self.lattice.int_rows() {
            for y in other.lattice.int_rows() {
                gens.push(alg.mul_int(x, &conj_int(y)));
            }
        }
        Lattice::from_int_generators(gens, self.lattice.denom() * other.lattice.denom())
            .expect("product of full-rank lattices in a division algebra is full rank")
    }

    /// `O_l(I) = I·Ī / nrd(I)`.
    pub fn left_order(&self) -> QuatOrder {
        let lattice = self.times_conjugate(self).scaled(&self.norm.recip());
        QuatOrder { algebra: self.order.algebra, lattice }
    }

    /// Gram matrix of `nrd(x)/nrd(I)`, integral on `I`.
    pub fn normalized_gram(&self) -> Gram {
        let scale = self.norm.recip();
        self.gram().map(|row| row.map(|x| &x * &scale))
    }

    /// A class invariant: the minimum `m` of `nrd(x)/nrd(I)` over nonzero
    /// `x ∈ I` and the number of vectors taking each value in
    /// `m, m + 1, …, m + width`.
    ///
    /// Equivalent ideals have isometric normalized norm forms, so ideals
    /// with different signatures are never equivalent.
    pub fn signature(&self, width: u64) -> Result<ClassSignature, QuaternionError> {
        let gram = self.normalized_gram();
        let (_, reduced) = lll(&gram)?;
        let diag_min = (0..4).map(|i| reduced[i][i].clone()).min().expect("four basis vectors");
        let bound = &diag_min + &Rational::from(width as i64);
        let vs = short_vectors(&gram, &bound)?;
        let min =
            vs.first().expect("a basis vector lies below the bound").value.to_i64().expect("integral norm") as u64;
        let mut counts = vec![0usize; width as usize + 1];
        for v in &vs {
            let k = v.value.to_i64().expect("integral norm") as u64 - min;
            if k <= width {
                counts[k as usize] += 1;
            }
        }
        Ok(ClassSignature { min, counts })
    }

    /// An equivalent ideal `ᾱI / nrd(I)` with `α` of minimal norm in `I`,
    /// so that its norm is as small as the class allows.
    pub fn reduced(&self) -> Result<RightIdeal, QuaternionError> {
        let alg = self.order.algebra;
        let alpha = shortest_element(self)?;
        let basis = self.basis();
        let scale = self.norm.recip();
        let gens: Vec<_> = basis.iter().map(|b| alg.mul(&alpha.conj(), b).scale(&scale).coords).collect();
        let lattice = Lattice::from_rational_generators(&gens)?;
        let out = RightIdeal::from_lattice(self.order.clone(), lattice)?;
        debug_assert_eq!(out.norm, &alg.nrd(&alpha) / &self.norm);
        Ok(out)
    }
}

/// Short theta-series window of the normalized norm form; see
/// [`RightIdeal::signature`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSignature {
    pub min: u64,
    pub counts: Vec<usize>,
}

/// Lexicographically first among the elements of minimal reduced norm.
fn shortest_element(ideal: &RightIdeal) -> Result<QuatElement, QuaternionError> {
    let gram = ideal.gram();
    let (_, reduced) = lll(&gram)?;
    let bound = (0..4).map(|i| reduced[i][i].clone()).min().expect("four basis vectors");
    let vs = short_vectors(&gram, &bound)?;
    let min = vs.first().expect("a basis vector lies below the bound").value.clone();
    vs.into_iter()
        .filter(|v| v.value == min)
        .map(|v| QuatElement::new(ideal.lattice.combination(&v.coords)))
        .max()
        .ok_or_else(|| QuaternionError::InvalidIdeal("empty ideal".into()))
}

/// An element `α ∈ I` with `nrd(α)/nrd(I)` prime to `ell`, so `I ⊗ Z_ℓ = α O_ℓ`.
fn local_generator(ideal: &RightIdeal, ell: u64) -> Result<QuatElement, QuaternionError> {
    let alg = ideal.order.algebra;
    let gram = ideal.gram();
    let ell = BigInt::from(ell);
    let mut mult = 1i64;
    loop {
        let bound = &ideal.norm * &Rational::from(mult);
        for v in short_vectors(&gram, &bound)? {
            let x = QuatElement::new(ideal.lattice.combination(&v.coords));
            let q = &alg.nrd(&x) / &ideal.norm;
            let q = q.to_integer().expect("norms in an ideal are multiples of its norm");
            if !(q % &ell == BigInt::from(0)) {
                return Ok(x);
            }
        }
        mult *= 2;
        if mult > 1 << 20 {
            return Err(QuaternionError::InvalidIdeal("no local generator found".into()));
        }
    }
}

/// Row echelon form over `F_ℓ` of the given vectors; the nonzero rows.
fn echelon_mod(mut rows: Vec<[i64; 4]>, ell: i64) -> Vec<[i64; 4]> {
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.rem_euclid(ell);
        }
    }
    let inv = |a: i64| (1..ell).find(|&b| a * b % ell == 1).expect("unit mod prime");
    let mut rank = 0;
    for col in 0..4 {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * s % ell;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..4 {
                    rows[r][c] = (rows[r][c] - f * rows[rank][c]).rem_euclid(ell);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// The `ℓ + 1` right `O`-submodules of `O/ℓO` of `F_ℓ`-dimension 2, each
/// with the lexicographically first zero divisor `z` generating it.
///
/// Under `O/ℓO ≅ M₂(F_ℓ)` these are the right ideals `{M : im M ⊆ L}` for the
/// `ℓ + 1` lines `L`, and each is `z·(O/ℓO)` for any nonzero `z` in it.
fn zero_divisor_lines(order: &QuatOrder, ell: u64) -> Result<Vec<QuatElement>, QuaternionError> {
    let alg = order.algebra;
    let basis = order.basis();
    let l = ell as i64;
    let mut seen: Vec<Vec<[i64; 4]>> = Vec::new();
    let mut out = Vec::new();
    for n in 1..l.pow(4) {
        let c = [n / l.pow(3) % l, n / l.pow(2) % l, n / l % l, n % l];
        let z =
            (0..4).map(|t| basis[t].scale(&Rational::from(c[t]))).fold(QuatElement::default(), |acc, x| acc.add(&x));
        let nz = alg.nrd(&z).to_integer().expect("order elements are integral");
        if !(nz % BigInt::from(ell) == BigInt::from(0)) {
            continue;
        }
        let images: Vec<[i64; 4]> = basis
            .iter()
            .map(|b| {
                let coords = order.lattice.coordinates(&alg.mul(&z, b).coords).expect("order is a ring");
                coords.map(|x| (x % BigInt::from(ell)).to_i64().expect("small residue"))
            })
            .collect();
        let span = echelon_mod(images, l);
        if span.len() != 2 {
            continue;
        }
        if !seen.contains(&span) {
            seen.push(span);
            out.push(z);
        }
    }
    if out.len() as u64 != ell + 1 {
        return Err(QuaternionError::InvalidIdeal(format!(
            "found {} zero-divisor lines mod {ell}, expected {}",
            out.len(),
            ell + 1
        )));
    }
    Ok(out)
}

/// The `ℓ + 1` right ideals `J ⊆ I` with `nrd(J) = ℓ·nrd(I)`.
///
/// With `α ∈ I` generating `I` locally at `ℓ`, the neighbours are
/// `J = α z O + ℓ I` for one zero divisor `z` per line of `P¹(F_ℓ)`.
pub fn ideals_of_norm_ell(ideal: &RightIdeal, ell: u64) -> Result<Vec<RightIdeal>, QuaternionError> {
    if !is_prime(ell) {
        return Err(QuaternionError::NotPrimeNorm(ell));
    }
    let order = &ideal.order;
    if ell == order.algebra.p {
        return Err(QuaternionError::RamifiedNorm(ell));
    }
    let alg = order.algebra;
    let alpha = local_generator(ideal, ell)?;
    let obasis = order.basis();
    let ell_r = Rational::from(ell as i64);
    let scaled: Vec<_> = ideal.basis().iter().map(|b| b.scale(&ell_r).coords).collect();
    let expected = &ideal.norm * &ell_r;
    zero_divisor_lines(order, ell)?
        .into_iter()
        .map(|z| {
            let az = alg.mul(&alpha, &z);
            let mut gens: Vec<_> = obasis.iter().map(|o| alg.mul(&az, o).coords).collect();
            gens.extend(scaled.iter().cloned());
            let j = RightIdeal::from_lattice(order.clone(), Lattice::from_rational_generators(&gens)?)?;
            if j.norm != expected {
                return Err(QuaternionError::InvalidIdeal(format!(
                    "neighbour has norm {}, expected {expected}",
                    j.norm
                )));
            }
            Ok(j)
        })
        .collect()
}

/// Whether `I = qJ` for some `q ∈ B^×`.
///
/// Such `q` exist iff `I·J̄` contains an element of reduced norm
/// `nrd(I)·nrd(J)`, the smallest value the norm takes on that lattice.
pub fn is_equivalent(i: &RightIdeal, j: &RightIdeal) -> Result<bool, QuaternionError> {
    if i.order != j.order {
        return Err(QuaternionError::MismatchedOrders);
    }
    Ok(connecting_element(i, j)?.is_some())
}

/// Some `x ∈ I·J̄` with `nrd(x) = nrd(I)·nrd(J)`; then `I = (x / nrd(J))·J`.
pub fn connecting_element(i: &RightIdeal, j: &RightIdeal) -> Result<Option<QuatElement>, QuaternionError> {
    if i.order != j.order {
        return Err(QuaternionError::MismatchedOrders);
    }
    let alg = i.order.algebra;
    let lattice = i.times_conjugate(j);
    let target = &i.norm * &j.norm;
    let basis = lattice.basis().map(QuatElement::new);
    let gram = alg.gram(&basis);
    Ok(any_short_vector(&gram, &target)?.map(|v| QuatElement::new(lattice.combination(&v.coords))))
}
