//! Full-rank lattices in `Q⁴`, stored as an integer Hermite normal form
//! over a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

pub type IntVec = [BigInt; 4];
pub type RatVec = [Rational; 4];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("generators span a sublattice of rank < 4")]
    RankDeficient,
}

/// The lattice spanned by `rows / denom`.
///
/// `rows` is in Hermite normal form (upper triangular, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`), and
/// `gcd(entries, denom) = 1` with `denom > 0`, so equal lattices have equal
/// representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    rows: [IntVec; 4],
    denom: BigInt,
}

fn zero_vec() -> IntVec {
    [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]
}

fn sub_multiple(target: &mut IntVec, q: &BigInt, src: &IntVec) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Upper-triangular Hermite normal form of the row span, `None` if the rank
/// is below 4.
fn hermite_normal_form(mut rows: Vec<IntVec>) -> Option<[IntVec; 4]> {
    let n = rows.len();
    let mut pivot_row = 0;
    for col in 0..4 {
        loop {
            let best = (pivot_row..n)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()))?;
            rows.swap(pivot_row, best);
            let mut clean = true;
            for i in pivot_row + 1..n {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pivot_row][col]);
                let src = rows[pivot_row].clone();
                sub_multiple(&mut rows[i], &q, &src);
                clean &= rows[i][col].is_zero();
            }
            if clean {
                break;
            }
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let src = rows[pivot_row].clone();
        for i in 0..pivot_row {
            let q = rows[i][col].div_floor(&src[col]);
            sub_multiple(&mut rows[i], &q, &src);
        }
        pivot_row += 1;
    }
    let mut out = [zero_vec(), zero_vec(), zero_vec(), zero_vec()];
    for (o, r) in out.iter_mut().zip(rows) {
        *o = r;
    }
    Some(out)
}

impl Lattice {
    /// Lattice spanned by `gens / denom`.
    pub fn from_int_generators(gens: Vec<IntVec>, denom: BigInt) -> Result<Self, LatticeError> {
        assert!(denom.is_positive(), "lattice denominator must be positive");
        let mut rows = hermite_normal_form(gens).ok_or(LatticeError::RankDeficient)?;
        let mut g = denom.clone();
        for r in rows.iter() {
            for x in r {
                g = g.gcd(x);
            }
        }
        let mut denom = denom;
        if !g.is_one() {
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
            denom /= &g;
        }
        Ok(Lattice { rows, denom })
    }

    pub fn from_rational_generators(gens: &[RatVec]) -> Result<Self, LatticeError> {
        let denom = gens.iter().flat_map(|v| v.iter()).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints = gens
            .iter()
            .map(|v| {
                let mut out = zero_vec();
                for (o, x) in out.iter_mut().zip(v) {
                    *o = x.numer() * (&denom / x.denom());
                }
                out
            })
            .collect();
        Self::from_int_generators(ints, denom)
    }

    pub fn int_rows(&self) -> &[IntVec; 4] {
        &self.rows
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Basis vectors as rational coordinates.
    pub fn basis(&self) -> [RatVec; 4] {
        self.rows.clone().map(|r| r.map(|x| Rational::new(x, self.denom.clone())))
    }

    /// The lattice scaled by `factor` (nonzero).
    pub fn scaled(&self, factor: &Rational) -> Self {
        assert!(!factor.is_zero(), "cannot scale a lattice by zero");
        let sign = if factor.is_negative() { -BigInt::one() } else { BigInt::one() };
        let gens = self.rows.iter().map(|r| r.clone().map(|x| x * factor.numer() * &sign)).collect();
        Self::from_int_generators(gens, &self.denom * factor.denom() * sign).expect("scaling preserves rank")
    }

    /// Absolute determinant of the basis matrix.
    pub fn covolume(&self) -> Rational {
        let diag: BigInt = self.rows.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        Rational::new(diag, num_traits::pow(self.denom.clone(), 4))
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &RatVec) -> Option<IntVec> {
        // Scale to the lattice denominator and back-substitute on the
        // triangular basis.
        let mut rest: Vec<Rational> = v.iter().map(|x| x * &Rational::from_integer(self.denom.clone())).collect();
        let mut coords = zero_vec();
        for col in 0..4 {
            let c = &rest[col] / &Rational::from_integer(self.rows[col][col].clone());
            let c = c.to_integer()?;
            for (k, rk) in rest.iter_mut().enumerate().skip(col) {
                *rk = &*rk - &Rational::from_integer(&c * &self.rows[col][k]);
            }
            coords[col] = c;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// The lattice spanned by both inputs.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens: Vec<RatVec> = self.basis().to_vec();
        gens.extend(other.basis());
        Lattice::from_rational_generators(&gens).expect("sum of full-rank lattices is full rank")
    }

    /// Element with the given integer coordinates.
    pub fn combination(&self, coords: &[i64; 4]) -> RatVec {
        let mut acc = zero_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if *c == 0 {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(row) {
                *a += x * c;
            }
        }
        acc.map(|x| Rational::new(x, self.denom.clone()))
    }
}
