//! Newton-polygon slope data and the basic-ness criterion: an isocrystal is
//! basic exactly when every component of its decomposition along the centre
//! is isoclinic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::exact::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NewtonError {
    #[error("empty slope list")]
    Empty,
    #[error("slope {0} lies outside [0, 1]")]
    SlopeOutOfRange(Rational),
    #[error("polarized polygon is not symmetric: slope {slope} has multiplicity {mult}, but 1 - slope has {dual}")]
    Asymmetric { slope: Rational, mult: u32, dual: u32 },
    #[error("empty decomposition")]
    EmptyDecomposition,
    #[error("duplicate component label `{0}`")]
    DuplicateLabel(String),
    #[error("malformed component `{0}`, expected label=slopes")]
    MalformedComponent(String),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

/// A multiset of slopes in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    slopes: BTreeMap<Rational, u32>,
    polarized: bool,
}

impl NewtonPolygon {
    pub fn new(slopes: impl IntoIterator<Item = Rational>, polarized: bool) -> Result<Self, NewtonError> {
        let mut map = BTreeMap::new();
        for s in slopes {
            if s.is_negative() || s > Rational::one() {
                return Err(NewtonError::SlopeOutOfRange(s));
            }
            *map.entry(s).or_insert(0) += 1;
        }
        if map.is_empty() {
            return Err(NewtonError::Empty);
        }
        if polarized {
            for (slope, &mult) in &map {
                let dual = map.get(&(Rational::one() - slope)).copied().unwrap_or(0);
                if dual != mult {
                    return Err(NewtonError::Asymmetric { slope: slope.clone(), mult, dual });
                }
            }
        }
        Ok(NewtonPolygon { slopes: map, polarized })
    }

    /// `mult` copies of `slope`.
    pub fn isoclinic(slope: Rational, mult: u32, polarized: bool) -> Result<Self, NewtonError> {
        Self::new(std::iter::repeat_n(slope, mult as usize), polarized)
    }

    pub fn slopes(&self) -> &BTreeMap<Rational, u32> {
        &self.slopes
    }

    pub fn is_polarized(&self) -> bool {
        self.polarized
    }

    /// Total multiplicity (the height).
    pub fn height(&self) -> u32 {
        self.slopes.values().sum()
    }

    /// Whether there is a single distinct slope.
    pub fn is_isoclinic(&self) -> bool {
        self.slopes.len() == 1
    }

    /// Whether every slope is `1/2`.
    pub fn is_supersingular(&self) -> bool {
        self.slopes.keys().all(|s| *s == Rational::new(1, 2))
    }

    /// Combined slope multiset of two polygons.
    pub fn merge(&self, other: &Self) -> Self {
        let mut slopes = self.slopes.clone();
        for (s, m) in &other.slopes {
            *slopes.entry(s.clone()).or_insert(0) += m;
        }
        NewtonPolygon { slopes, polarized: self.polarized && other.polarized }
    }
}

/// Parses a comma-separated slope list such as `"1/2,1/2"` (unpolarized).
impl FromStr for NewtonPolygon {
    type Err = NewtonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let slopes =
            s.split(',').filter(|t| !t.is_empty()).map(|t| t.parse::<Rational>()).collect::<Result<Vec<_>, _>>()?;
        Self::new(slopes, false)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.slopes.iter().flat_map(|(s, &m)| std::iter::repeat_n(s.to_string(), m as usize)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `is_isoclinic(np)`.
pub fn is_isoclinic(np: &NewtonPolygon) -> bool {
    np.is_isoclinic()
}

/// `is_supersingular_polygon(np)`.
pub fn is_supersingular_polygon(np: &NewtonPolygon) -> bool {
    np.is_supersingular()
}

/// Slope data of each component of the decomposition along the primes of the
/// centre above `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterDecomposition {
    components: Vec<(String, NewtonPolygon)>,
}

impl CenterDecomposition {
    pub fn new(components: Vec<(String, NewtonPolygon)>) -> Result<Self, NewtonError> {
        if components.is_empty() {
            return Err(NewtonError::EmptyDecomposition);
        }
        for (i, (label, _)) in components.iter().enumerate() {
            if components[..i].iter().any(|(l, _)| l == label) {
                return Err(NewtonError::DuplicateLabel(label.clone()));
            }
        }
        Ok(CenterDecomposition { components })
    }

    /// Parse `label=slopes` specifications.
    pub fn parse<S: AsRef<str>>(specs: &[S]) -> Result<Self, NewtonError> {
        let components = specs
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let (label, slopes) =
                    s.split_once('=').ok_or_else(|| NewtonError::MalformedComponent(s.to_string()))?;
                if label.is_empty() {
                    return Err(NewtonError::MalformedComponent(s.to_string()));
                }
                Ok((label.to_string(), slopes.parse()?))
            })
            .collect::<Result<Vec<_>, NewtonError>>()?;
        Self::new(components)
    }

    pub fn components(&self) -> &[(String, NewtonPolygon)] {
        &self.components
    }

    pub fn is_basic(&self) -> bool {
        self.components.iter().all(|(_, np)| np.is_isoclinic())
    }
}

/// `is_basic(d)`: every component isoclinic.
pub fn is_basic(d: &CenterDecomposition) -> bool {
    d.is_basic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn np(s: &str) -> NewtonPolygon {
        s.parse().unwrap()
    }

    #[test]
    fn isoclinic_examples() {
        assert!(is_isoclinic(&np("1/2,1/2")));
        assert!(!is_isoclinic(&np("0,1")));
        assert!(is_isoclinic(&np("1/3,1/3,1/3")));
        assert_eq!("".parse::<NewtonPolygon>(), Err(NewtonError::Empty));
    }

    #[test]
    fn supersingular_examples() {
        assert!(is_supersingular_polygon(&np("1/2,1/2,1/2,1/2")));
        assert!(!is_supersingular_polygon(&np("0,1/2,1/2,1")));
        assert!(is_supersingular_polygon(&np("1/2,1/2")));
        assert!(is_supersingular_polygon(&np("2/4,1/2")));
    }

    #[test]
    fn basic_examples() {
        let d = CenterDecomposition::parse(&["p1=1/3,1/3,1/3", "p2=2/3,2/3,2/3"]).unwrap();
        assert!(is_basic(&d));
        assert!(!is_basic(&CenterDecomposition::parse(&["p1=0,1"]).unwrap()));
        for g in 1..8u32 {
            let ss = NewtonPolygon::isoclinic(Rational::new(1, 2), 2 * g, true).unwrap();
            assert!(is_basic(&CenterDecomposition::new(vec![("p".into(), ss)]).unwrap()));
        }
    }

    #[test]
    fn validation() {
        assert_eq!(
            NewtonPolygon::new([Rational::new(3, 2)], false),
            Err(NewtonError::SlopeOutOfRange(Rational::new(3, 2)))
        );
        assert!(matches!(
            NewtonPolygon::new([Rational::zero(), Rational::new(1, 2)], true),
            Err(NewtonError::Asymmetric { .. })
        ));
        assert!(NewtonPolygon::new([Rational::zero(), Rational::one()], true).is_ok());
        assert_eq!(CenterDecomposition::new(vec![]), Err(NewtonError::EmptyDecomposition));
        assert_eq!(CenterDecomposition::parse(&["a=1/2", "a=1/2"]), Err(NewtonError::DuplicateLabel("a".into())));
        assert!(matches!(CenterDecomposition::parse(&["1/2"]), Err(NewtonError::MalformedComponent(_))));
        assert!(matches!("1/x".parse::<NewtonPolygon>(), Err(NewtonError::Parse(_))));
    }

    fn arb_slope() -> impl Strategy<Value = Rational> {
        (1i64..6).prop_flat_map(|d| (0..=d).prop_map(move |n| Rational::new(n, d)))
    }

    fn arb_polygon() -> impl Strategy<Value = NewtonPolygon> {
        prop::collection::vec(arb_slope(), 1..6).prop_map(|s| NewtonPolygon::new(s, false).unwrap())
    }

    proptest! {
        #[test]
        fn implication_chain(p in arb_polygon()) {
            if p.is_supersingular() {
                prop_assert!(p.is_isoclinic());
            }
            if p.is_isoclinic() {
                let d = CenterDecomposition::new(vec![("x".into(), p.clone())]).unwrap();
                prop_assert!(d.is_basic());
            }
        }

        #[test]
        fn basic_invariant_under_permutation(ps in prop::collection::vec(arb_polygon(), 1..5), rot in 0usize..5) {
            let labelled: Vec<_> = ps.iter().enumerate().map(|(i, p)| (format!("c{i}"), p.clone())).collect();
            let mut rotated = labelled.clone();
            let len = rotated.len();
            rotated.rotate_left(rot % len);
            prop_assert_eq!(
                CenterDecomposition::new(labelled).unwrap().is_basic(),
                CenterDecomposition::new(rotated).unwrap().is_basic()
            );
        }

        #[test]
        fn merging_isoclinic_components(a in arb_slope(), b in arb_slope(), m in 1u32..4, n in 1u32..4) {
            let x = NewtonPolygon::isoclinic(a.clone(), m, false).unwrap();
            let y = NewtonPolygon::isoclinic(b.clone(), n, false).unwrap();
            let merged = CenterDecomposition::new(vec![("m".into(), x.merge(&y))]).unwrap();
            prop_assert_eq!(merged.is_basic(), a == b);
        }

        #[test]
        fn display_round_trip(p in arb_polygon()) {
            prop_assert_eq!(p.to_string().parse::<NewtonPolygon>().unwrap(), p);
        }
    }
}
