//! Orders in `B_{p,∞}`: the standard maximal orders and unit-group counts.

use crate::exact::Rational;

use super::enumerate::short_vectors;
use super::lattice::Lattice;
use super::{QuatAlgebra, QuatElement, QuaternionError};

/// A lattice in the algebra that is also a subring containing `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuatOrder {
    pub algebra: QuatAlgebra,
    pub lattice: Lattice,
}

fn to_elements(basis: [[Rational; 4]; 4]) -> [QuatElement; 4] {
    basis.map(QuatElement::new)
}

impl QuatOrder {
    pub fn from_basis(algebra: QuatAlgebra, basis: &[QuatElement]) -> Result<Self, QuaternionError> {
        let gens: Vec<_> = basis.iter().map(|e| e.coords.clone()).collect();
        Ok(QuatOrder { algebra, lattice: Lattice::from_rational_generators(&gens)? })
    }

    /// Basis as a 4×4 rational matrix; rows are elements in `(1, i, j, k)`
    /// coordinates.
    pub fn basis(&self) -> [QuatElement; 4] {
        to_elements(self.lattice.basis())
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.lattice.contains(&x.coords)
    }

    /// `4|ab|·|det(basis)|`, the square root of `|det(trd(eᵢeⱼ))|`.
    pub fn reduced_discriminant(&self) -> Rational {
        let ab = (self.algebra.a * self.algebra.b).abs();
        &Rational::from(4 * ab) * &self.lattice.covolume()
    }

    /// Check the order axioms: `1 ∈ O`, closure under products, integral
    /// reduced traces and norms.
    pub fn certify(&self) -> Result<(), QuaternionError> {
        let basis = self.basis();
        if !self.contains(&QuatElement::one()) {
            return Err(QuaternionError::InvalidOrder("does not contain 1".into()));
        }
        for x in &basis {
            if !x.trd().is_integer() || !self.algebra.nrd(x).is_integer() {
                return Err(QuaternionError::InvalidOrder(format!("{x:?} is not integral")));
            }
            for y in &basis {
                if !self.contains(&self.algebra.mul(x, y)) {
                    return Err(QuaternionError::InvalidOrder(format!("not closed: {x:?} * {y:?}")));
                }
            }
        }
        Ok(())
    }

    /// Certified maximal: an order of reduced discriminant `p`.
    pub fn certify_maximal(&self) -> Result<(), QuaternionError> {
        self.certify()?;
        let disc = self.reduced_discriminant();
        if disc != Rational::from(self.algebra.p as i64) {
            return Err(QuaternionError::InvalidOrder(format!("reduced discriminant {disc}")));
        }
        Ok(())
    }

    pub fn gram(&self) -> super::enumerate::Gram {
        self.algebra.gram(&self.basis())
    }
}

/// A maximal order of `B_{p,∞}` in the standard presentation.
///
/// | `p`          | `(a, b)`   | basis                                        |
/// |--------------|------------|----------------------------------------------|
/// | 2            | (−1, −1)   | 1, i, j, (1+i+j+k)/2                          |
/// | 3 mod 4      | (−1, −p)   | 1, i, (1+j)/2, (i+k)/2                        |
/// | 5 mod 8      | (−2, −p)   | (1+j+k)/2, (i+2j+k)/4, j, k                   |
/// | 1 mod 8      | (−q, −p)   | (1+i)/2, (j−k)/2, (i−ck)/q, k, `q | c²p + 1`   |
pub fn maximal_order(p: u64) -> Result<QuatOrder, QuaternionError> {
    let alg = QuatAlgebra::for_prime(p)?;
    let e = QuatElement::from_fraction;
    let basis = match p {
        2 => vec![e([1, 0, 0, 0], 1), e([0, 1, 0, 0], 1), e([0, 0, 1, 0], 1), e([1, 1, 1, 1], 2)],
        _ if p % 4 == 3 => vec![e([1, 0, 0, 0], 1), e([0, 1, 0, 0], 1), e([1, 0, 1, 0], 2), e([0, 1, 0, 1], 2)],
        _ if p % 8 == 5 => vec![e([1, 0, 1, 1], 2), e([0, 1, 2, 1], 4), e([0, 0, 1, 0], 1), e([0, 0, 0, 1], 1)],
        _ => {
            let q = -alg.a;
            let c = (0..q)
                .find(|c| (c * c % q * (p as i64 % q) + 1) % q == 0)
                .ok_or_else(|| QuaternionError::InvalidOrder(format!("no c with {q} | c²·{p} + 1")))?;
            vec![e([1, 1, 0, 0], 2), e([0, 0, 1, -1], 2), e([0, 1, 0, -c], q), e([0, 0, 0, 1], 1)]
        }
    };
    let order = QuatOrder::from_basis(alg, &basis)?;
    order.certify_maximal()?;
    Ok(order)
}

/// `#O^×`: lattice vectors of reduced norm one.
pub fn unit_group_order(order: &QuatOrder) -> Result<usize, QuaternionError> {
    let alg = order.algebra;
    if !alg.is_definite() {
        return Err(QuaternionError::NotDefinite { a: alg.a, b: alg.b });
    }
    let one = Rational::one();
    Ok(short_vectors(&order.gram(), &one)?.into_iter().filter(|v| v.value == one).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_in;

    #[test]
    fn maximal_orders_certify() {
        for p in primes_in(2, 500) {
            let o = maximal_order(p).unwrap_or_else(|e| panic!("p = {p}: {e}"));
            assert_eq!(o.reduced_discriminant(), Rational::from(p as i64));
        }
    }

    #[test]
    fn hurwitz_order() {
        let o = maximal_order(2).unwrap();
        assert!(o.contains(&QuatElement::from_fraction([1, 1, 1, 1], 2)));
        assert_eq!(unit_group_order(&o).unwrap(), 24);
        for x in o.basis() {
            assert!(x.trd().is_integer());
            assert!(o.algebra.nrd(&x).is_integer());
        }
    }

    #[test]
    fn discriminant_via_trace_form() {
        // |det(trd(eᵢ ēⱼ))| = disc² computed directly from the Gram matrix.
        for p in [2u64, 3, 5, 11, 13, 17, 41, 73] {
            let o = maximal_order(p).unwrap();
            let g = o.gram();
            let two = Rational::from(2);
            let t: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(|x| x * &two).collect()).collect();
            assert_eq!(det(t).abs(), Rational::from((p * p) as i64), "p = {p}");
        }
    }

    fn det(mut m: Vec<Vec<Rational>>) -> Rational {
        let n = m.len();
        let mut acc = Rational::one();
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if r != c {
                m.swap(r, c);
                acc = -acc;
            }
            acc = &acc * &m[c][c];
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let d = &f * &m[c][k];
                    m[r][k] = &m[r][k] - &d;
                }
            }
        }
        acc
    }

    #[test]
    fn unit_groups() {
        assert_eq!(unit_group_order(&maximal_order(3).unwrap()).unwrap(), 12);
        assert_eq!(unit_group_order(&maximal_order(13).unwrap()).unwrap(), 2);
        for p in primes_in(2, 200) {
            let n = unit_group_order(&maximal_order(p).unwrap()).unwrap();
            assert!(n.is_multiple_of(2) && 24 % n == 0, "p = {p}: {n}");
        }
    }

    #[test]
    fn unit_count_matches_box_search() {
        // Units have every (1,i,j,k) coordinate in [-1, 1], and coordinates
        // of order elements have denominator dividing 4|a| for these p.
        for p in [2u64, 3, 5, 7, 11, 13] {
            let o = maximal_order(p).unwrap();
            let den = 4 * (-o.algebra.a);
            let mut count = 0;
            for c0 in -den..=den {
                for c1 in -den..=den {
                    for c2 in -den..=den {
                        for c3 in -den..=den {
                            let x = QuatElement::from_fraction([c0, c1, c2, c3], den);
                            if o.contains(&x) && o.algebra.nrd(&x) == Rational::one() {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(unit_group_order(&o).unwrap(), count, "p = {p}");
        }
    }

    #[test]
    fn indefinite_rejected() {
        let alg = QuatAlgebra { p: 0, a: -1, b: 1 };
        let o = QuatOrder::from_basis(
            alg,
            &[
                QuatElement::from_ints([1, 0, 0, 0]),
                QuatElement::from_ints([0, 1, 0, 0]),
                QuatElement::from_ints([0, 0, 1, 0]),
                QuatElement::from_ints([0, 0, 0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(unit_group_order(&o), Err(QuaternionError::NotDefinite { a: -1, b: 1 }));
    }
}
