//! Irreducible factorizations of principal elements.
//!
//! An element is irreducible exactly when its divisor has degree 2: a degree-1
//! divisor is never principal, so nothing finer exists. The factorizations of
//! an element with divisor `D` are therefore the perfect matchings of the
//! points of `D` (repeated by multiplicity), taken up to reordering. These
//! are usually many, but all have length `deg(D)/2`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::divisor::{CirclePoint, Divisor};
use crate::roots::{circle_divisor, RootConfig, RootError};
use crate::trigpoly::TrigPoly;

/// Largest divisor degree accepted for exhaustive enumeration.
pub const MAX_FACTORIZATION_DEGREE: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorizationError {
    #[error("divisor degree {degree} is odd: the element does not exist")]
    OddDegree { degree: u64 },
    #[error("divisor degree {degree} exceeds the enumeration limit {MAX_FACTORIZATION_DEGREE}")]
    TooLarge { degree: u64 },
    #[error("divisor is empty: units have no irreducible factorization")]
    Unit,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// An irreducible element: a degree-2 divisor `(p) + (q)`, realized by the
/// pair generator through `p` and `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Irreducible {
    pub p: CirclePoint,
    pub q: CirclePoint,
}

impl Irreducible {
    pub fn from_pair(p: CirclePoint, q: CirclePoint) -> Self {
        Irreducible { p, q }
    }

    pub fn divisor(&self) -> Divisor {
        Divisor::new([(self.p, 1), (self.q, 1)])
    }

    pub fn witness(&self) -> TrigPoly {
        TrigPoly::pair_generator(self.p, self.q)
    }
}

/// A multiset of irreducibles, identified by the pairs of divisor entries
/// they use.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<Irreducible>,
    /// Sorted pairs `(i, j)`, `i ≤ j`, of indices into the divisor's entries.
    pub pairs: Vec<(usize, usize)>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Divisor of the product of the factors.
    pub fn divisor(&self) -> Divisor {
        self.factors.iter().fold(Divisor::empty(), |acc, f| acc.add(&f.divisor()))
    }

    pub fn product(&self) -> TrigPoly {
        let witnesses: Vec<TrigPoly> = self.factors.iter().map(Irreducible::witness).collect();
        TrigPoly::product(&witnesses)
    }
}

fn check_enumerable(d: &Divisor) -> Result<(), FactorizationError> {
    let degree = d.degree();
    if degree == 0 {
        return Err(FactorizationError::Unit);
    }
    if degree % 2 == 1 {
        return Err(FactorizationError::OddDegree { degree });
    }
    if degree > MAX_FACTORIZATION_DEGREE {
        return Err(FactorizationError::TooLarge { degree });
    }
    Ok(())
}

/// Visits every distinct multiset of index pairs that uses entry `i` exactly
/// `counts[i]` times, each as a sorted list of `(i, j)` with `i ≤ j`.
///
/// Lists are built in sorted order: the next pair always starts at the
/// smallest remaining label, and a label that starts consecutive pairs takes
/// non-decreasing partners. Each multiset has exactly one such ordering.
fn visit_label_matchings<F>(counts: &mut [u32], current: &mut Vec<(usize, usize)>, visit: &mut F)
where
    F: FnMut(&[(usize, usize)]),
{
    let Some(first) = counts.iter().position(|&c| c > 0) else {
        visit(current);
        return;
    };
    let lowest = match current.last() {
        Some(&(i, j)) if i == first => j,
        _ => first,
    };
    counts[first] -= 1;
    for partner in lowest..counts.len() {
        if counts[partner] == 0 {
            continue;
        }
        counts[partner] -= 1;
        current.push((first, partner));
        visit_label_matchings(counts, current, visit);
        current.pop();
        counts[partner] += 1;
    }
    counts[first] += 1;
}

/// Streams the pair structure of every factorization of `d` without
/// materializing the factors.
pub fn for_each_matching<F>(d: &Divisor, mut visit: F) -> Result<(), FactorizationError>
where
    F: FnMut(&[(usize, usize)]),
{
    check_enumerable(d)?;
    let mut counts: Vec<u32> = d.entries().iter().map(|e| e.multiplicity).collect();
    visit_label_matchings(&mut counts, &mut Vec::new(), &mut visit);
    Ok(())
}

/// Every irreducible factorization of the element with divisor `d`, up to
/// order and units, in lexicographic order of the pair lists.
pub fn enumerate_factorizations(d: &Divisor) -> Result<Vec<Factorization>, FactorizationError> {
    let mut raw: Vec<Vec<(usize, usize)>> = Vec::new();
    for_each_matching(d, |pairs| raw.push(pairs.to_vec()))?;
    let entries = d.entries();
    Ok(raw
        .into_iter()
        .map(|pairs| Factorization {
            factors: pairs
                .iter()
                .map(|&(i, j)| Irreducible::from_pair(entries[i].point, entries[j].point))
                .collect(),
            pairs,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfFactorialReport {
    pub half_factorial: bool,
    pub count: usize,
    /// Distinct lengths among the factorizations, ascending.
    pub lengths: Vec<usize>,
    pub expected_length: u64,
}

/// Whether all factorizations of `d` share one length.
pub fn is_half_factorial(d: &Divisor) -> Result<HalfFactorialReport, FactorizationError> {
    let mut lengths = BTreeSet::new();
    let mut count = 0;
    for_each_matching(d, |pairs| {
        count += 1;
        lengths.insert(pairs.len());
    })?;
    Ok(HalfFactorialReport {
        half_factorial: lengths.len() == 1,
        count,
        lengths: lengths.into_iter().collect(),
        expected_length: d.degree() / 2,
    })
}

/// Checks that the product of the witnesses of `f` has divisor `target`.
pub fn factorization_is_sound(
    f: &Factorization,
    target: &Divisor,
    cfg: &RootConfig,
    tol: f64,
) -> Result<bool, FactorizationError> {
    let found = circle_divisor(&f.product(), cfg)?;
    Ok(found.approx_eq(target, tol) && f.factors.iter().all(|x| x.divisor().degree() == 2))
}

/// The classic failure of unique factorization:
/// `cos²x = (1 + sin x)(1 − sin x)`.
#[derive(Debug, Clone)]
pub struct NonUfdDemo {
    pub cos_squared: TrigPoly,
    pub sine_product: TrigPoly,
    /// Largest coefficient difference between the two products.
    pub coefficient_gap: f64,
    pub cos_divisor: Divisor,
    pub one_plus_sin_divisor: Divisor,
    pub one_minus_sin_divisor: Divisor,
    pub product_divisor: Divisor,
    pub factorizations: Vec<Factorization>,
}

pub fn demo_nonufd(cfg: &RootConfig) -> Result<NonUfdDemo, FactorizationError> {
    let one = TrigPoly::constant(1.0);
    let cos = TrigPoly::cos_kx(1);
    let sin = TrigPoly::sin_kx(1);
    let one_plus_sin = one.add(&sin);
    let one_minus_sin = one.sub(&sin);
    let cos_squared = cos.multiply(&cos);
    let sine_product = one_plus_sin.multiply(&one_minus_sin);
    let n = cos_squared.degree().max(sine_product.degree());
    let coefficient_gap = (0..=n)
        .map(|k| {
            (cos_squared.cos_coeff(k) - sine_product.cos_coeff(k))
                .abs()
                .max((cos_squared.sin_coeff(k) - sine_product.sin_coeff(k)).abs())
        })
        .fold(0.0, f64::max);
    let product_divisor = circle_divisor(&cos_squared, cfg)?;
    let factorizations = enumerate_factorizations(&product_divisor)?;
    Ok(NonUfdDemo {
        cos_divisor: circle_divisor(&cos, cfg)?,
        one_plus_sin_divisor: circle_divisor(&one_plus_sin, cfg)?,
        one_minus_sin_divisor: circle_divisor(&one_minus_sin, cfg)?,
        cos_squared,
        sine_product,
        coefficient_gap,
        product_divisor,
        factorizations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pair_set(f: &Factorization) -> Vec<(usize, usize)> {
        f.pairs.clone()
    }

    #[test]
    fn cos_squared_divisor_has_two_factorizations() {
        let d = Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]);
        let all = enumerate_factorizations(&d).unwrap();
        assert_eq!(all.len(), 2);
        let shapes: Vec<_> = all.iter().map(pair_set).collect();
        assert_eq!(shapes, vec![vec![(0, 0), (1, 1)], vec![(0, 1), (0, 1)]]);
        assert!(all.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn double_point_has_one_factorization() {
        let all = enumerate_factorizations(&Divisor::from_angles([(0.0, 2)])).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 1);
    }

    #[test]
    fn four_distinct_points_have_three() {
        let d = Divisor::from_angles([(0.1, 1), (1.0, 1), (2.5, 1), (4.0, 1)]);
        let all = enumerate_factorizations(&d).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn repeated_first_label_is_not_double_counted() {
        // a a b c pairs as {aa, bc} or {ab, ac}
        let d = Divisor::from_angles([(0.1, 2), (1.0, 1), (2.5, 1)]);
        let shapes: Vec<_> = enumerate_factorizations(&d).unwrap().iter().map(pair_set).collect();
        assert_eq!(shapes, vec![vec![(0, 0), (1, 2)], vec![(0, 1), (0, 2)]]);
        assert_eq!(is_half_factorial(&d).unwrap().count, 2);
    }

    #[test]
    fn rejects_bad_degrees() {
        assert_eq!(
            enumerate_factorizations(&Divisor::from_angles([(0.0, 3)])).unwrap_err(),
            FactorizationError::OddDegree { degree: 3 }
        );
        assert_eq!(
            enumerate_factorizations(&Divisor::from_angles([(0.0, 18)])).unwrap_err(),
            FactorizationError::TooLarge { degree: 18 }
        );
        assert_eq!(enumerate_factorizations(&Divisor::empty()).unwrap_err(), FactorizationError::Unit);
    }

    #[test]
    fn half_factorial_examples() {
        let r = is_half_factorial(&Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)])).unwrap();
        assert!(r.half_factorial);
        assert_eq!(r.count, 2);
        let r = is_half_factorial(&Divisor::from_angles([(0.0, 2)])).unwrap();
        assert!(r.half_factorial);
        assert_eq!(r.count, 1);
    }

    #[test]
    fn sixteen_distinct_points_give_double_factorial_count() {
        let d = Divisor::from_angles((0..16).map(|i| (0.3 * i as f64, 1)));
        let r = is_half_factorial(&d).unwrap();
        assert_eq!(r.count, 2_027_025);
        assert_eq!(r.lengths, vec![8]);
    }

    #[test]
    fn witnesses_multiply_back() {
        let d = Divisor::from_angles([(0.0, 1), (PI, 2), (2.0, 1)]);
        let cfg = RootConfig::default();
        for f in enumerate_factorizations(&d).unwrap() {
            assert!(factorization_is_sound(&f, &d, &cfg, 1e-6).unwrap());
            assert!(f.divisor().approx_eq(&d, 1e-12));
        }
    }

    #[test]
    fn nonufd_demo() {
        let demo = demo_nonufd(&RootConfig::default()).unwrap();
        assert!(demo.coefficient_gap <= 1e-12);
        let tol = 1e-6;
        assert!(demo.cos_divisor.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 1), (3.0 * FRAC_PI_2, 1)]), tol));
        assert!(demo.one_plus_sin_divisor.approx_eq(&Divisor::from_angles([(3.0 * FRAC_PI_2, 2)]), tol));
        assert!(demo.one_minus_sin_divisor.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2)]), tol));
        assert!(demo.product_divisor.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]), tol));
        assert_eq!(demo.factorizations.len(), 2);
    }
}
