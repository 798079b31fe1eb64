//! Ideals of the real ring `C_an(S¹; ℝ)` and of its complexification.
//!
//! A nonzero ideal of the real ring is `𝔪_{p₁}^{a₁}⋯𝔪_{pₙ}^{aₙ}`, stored as
//! its divisor. It is principal exactly when `a₁ + ⋯ + aₙ` is even: even
//! divisors are generated by products of pair generators, while every
//! nonzero function has an even number of zeros counted with multiplicity.
//! The class group is therefore `ℤ/2`, read off from the divisor parity.
//!
//! Over ℂ every `𝔪_p` is generated by `z − e^{ip}`, so all ideals are
//! principal there.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor::{CirclePoint, Divisor, Z2};
use crate::roots::{circle_divisor, RootConfig, RootError};
use crate::trigpoly::{LaurentPoly, TrigPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdealError {
    #[error("every generator is the zero polynomial")]
    AllZeroGenerators,
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("divisor degree {degree} is odd: the ideal is not principal")]
    OddDegree { degree: u64 },
    #[error("divisor degree {degree} is even: the ideal is principal")]
    EvenDegree { degree: u64 },
    #[error("membership is only decided for nonzero elements")]
    ZeroElement,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A nonzero ideal of the real ring, given by its divisor. The empty divisor
/// is the unit ideal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdealR {
    divisor: Divisor,
}

impl IdealR {
    pub fn new(divisor: Divisor) -> Self {
        IdealR { divisor }
    }

    pub fn unit() -> Self {
        IdealR { divisor: Divisor::empty() }
    }

    /// The maximal ideal `𝔪_p`.
    pub fn maximal(p: CirclePoint) -> Self {
        IdealR { divisor: Divisor::new([(p, 1)]) }
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn is_unit(&self) -> bool {
        self.divisor.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.divisor.parity().is_zero()
    }

    pub fn class(&self) -> IdealClass {
        IdealClass::from(self.divisor.parity())
    }

    /// Ideal product; divisors add.
    pub fn product(&self, other: &IdealR) -> IdealR {
        IdealR { divisor: self.divisor.add(&other.divisor) }
    }

    /// A single generator of a principal ideal: the points, repeated by
    /// multiplicity and sorted by angle, are paired consecutively and the
    /// pair generators multiplied. The trigonometric degree of the result is
    /// half the divisor degree.
    pub fn real_generator(&self) -> Result<TrigPoly, IdealError> {
        let degree = self.divisor.degree();
        if degree % 2 == 1 {
            return Err(IdealError::OddDegree { degree });
        }
        let points = self.divisor.expanded_points();
        let pairs: Vec<TrigPoly> = points
            .chunks_exact(2)
            .map(|pair| TrigPoly::pair_generator(pair[0], pair[1]))
            .collect();
        Ok(TrigPoly::product(&pairs))
    }

    /// Writes an odd ideal as `𝔪_{p₁}·(g)`, with `p₁` the first point of the
    /// divisor and `g` a generator of the remaining even part.
    pub fn odd_case_decomposition(&self) -> Result<(CirclePoint, TrigPoly), IdealError> {
        let degree = self.divisor.degree();
        if degree % 2 == 0 {
            return Err(IdealError::EvenDegree { degree });
        }
        let first = self.divisor.entries()[0].point;
        let rest = IdealR { divisor: self.divisor.decrement(0) };
        let g = rest.real_generator()?;
        Ok((first, g))
    }

    /// Membership of a nonzero element: `f ∈ I` iff `div(I) ≤ div(f)`.
    pub fn contains(&self, f: &TrigPoly, cfg: &RootConfig) -> Result<bool, IdealError> {
        if f.is_zero() {
            return Err(IdealError::ZeroElement);
        }
        if self.divisor.is_empty() {
            return Ok(true);
        }
        let df = circle_divisor(f, cfg)?;
        Ok(self.divisor.leq_within(&df, cfg.cluster_radius))
    }

    /// Generator of the same ideal in the complex ring:
    /// `Π (z − e^{ip})^a` over the divisor entries.
    pub fn complex_generator(&self) -> LaurentPoly {
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for e in self.divisor.entries() {
            let root = Complex64::from_polar(1.0, e.point.theta());
            for _ in 0..e.multiplicity {
                let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * root;
                }
                poly = next;
            }
        }
        LaurentPoly::from_polynomial(&poly)
    }
}

impl fmt::Display for IdealR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ideal{}", self.divisor)
    }
}

/// A nonempty list of elements, at least one of them nonzero.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    gens: Vec<TrigPoly>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<TrigPoly>) -> Result<Self, IdealError> {
        if gens.is_empty() {
            return Err(IdealError::EmptyGeneratorSet);
        }
        if gens.iter().all(TrigPoly::is_zero) {
            return Err(IdealError::AllZeroGenerators);
        }
        Ok(GeneratorSet { gens })
    }

    pub fn generators(&self) -> &[TrigPoly] {
        &self.gens
    }

    /// Divisor of the ideal generated by the set: the common zeros of the
    /// nonzero generators, each with the minimal vanishing order among them.
    /// Zero generators impose no condition.
    pub fn divisor(&self, cfg: &RootConfig) -> Result<Divisor, IdealError> {
        let divisors: Vec<Divisor> = self
            .gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| circle_divisor(g, cfg))
            .collect::<Result<_, _>>()?;
        let (first, rest) = divisors.split_first().ok_or(IdealError::AllZeroGenerators)?;
        let entries = first.entries().iter().filter_map(|e| {
            let mut m = e.multiplicity;
            for d in rest {
                let other = d
                    .entries()
                    .iter()
                    .find(|o| o.point.approx_eq(e.point, cfg.cluster_radius))
                    .map_or(0, |o| o.multiplicity);
                m = m.min(other);
            }
            (m > 0).then_some((e.point, m))
        });
        Ok(Divisor::new(entries.collect::<Vec<_>>()))
    }

    pub fn ideal(&self, cfg: &RootConfig) -> Result<IdealR, IdealError> {
        self.divisor(cfg).map(IdealR::new)
    }
}

/// Element of the class group `ℤ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealClass {
    Principal,
    NonPrincipal,
}

impl From<Z2> for IdealClass {
    fn from(z: Z2) -> Self {
        if z.is_zero() {
            IdealClass::Principal
        } else {
            IdealClass::NonPrincipal
        }
    }
}

impl From<IdealClass> for Z2 {
    fn from(c: IdealClass) -> Self {
        match c {
            IdealClass::Principal => Z2::ZERO,
            IdealClass::NonPrincipal => Z2::ONE,
        }
    }
}

impl Mul for IdealClass {
    type Output = IdealClass;

    fn mul(self, rhs: IdealClass) -> IdealClass {
        IdealClass::from(Z2::from(self) + Z2::from(rhs))
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealClass::Principal => "Principal",
            IdealClass::NonPrincipal => "NonPrincipal",
        })
    }
}

pub fn class_mul(a: IdealClass, b: IdealClass) -> IdealClass {
    a * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> RootConfig {
        RootConfig::default()
    }

    fn poly(cos: &[f64], sin: &[f64]) -> TrigPoly {
        TrigPoly::new(cos.to_vec(), sin.to_vec()).unwrap()
    }

    fn ideal(entries: &[(f64, u32)]) -> IdealR {
        IdealR::new(Divisor::from_angles(entries.iter().copied()))
    }

    #[test]
    fn divisor_of_single_generator() {
        let g = GeneratorSet::new(vec![TrigPoly::sin_kx(1)]).unwrap();
        let d = g.divisor(&cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(0.0, 1), (PI, 1)]), 1e-9));
    }

    #[test]
    fn divisor_is_pointwise_minimum() {
        let s = TrigPoly::sin_kx(1);
        let a = s.multiply(&poly(&[1.0, -1.0], &[]));
        let b = s.multiply(&poly(&[1.0, 1.0], &[]));
        let d = GeneratorSet::new(vec![a, b]).unwrap().divisor(&cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(0.0, 1), (PI, 1)]), 1e-6), "{d}");

        let d = GeneratorSet::new(vec![poly(&[1.0, -1.0], &[]), s]).unwrap().divisor(&cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(0.0, 1)]), 1e-6), "{d}");

        let d = GeneratorSet::new(vec![TrigPoly::cos_kx(1), poly(&[1.0, 1.0], &[])])
            .unwrap()
            .divisor(&cfg())
            .unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn generator_set_validation() {
        assert_eq!(GeneratorSet::new(vec![]).unwrap_err(), IdealError::EmptyGeneratorSet);
        assert_eq!(
            GeneratorSet::new(vec![TrigPoly::zero(), TrigPoly::zero()]).unwrap_err(),
            IdealError::AllZeroGenerators
        );
        // a zero generator alongside a nonzero one is harmless
        let d = GeneratorSet::new(vec![TrigPoly::zero(), TrigPoly::sin_kx(1)])
            .unwrap()
            .divisor(&cfg())
            .unwrap();
        assert_eq!(d.degree(), 2);
    }

    #[test]
    fn principality_examples() {
        assert!(!ideal(&[(0.0, 1)]).is_principal());
        assert!(ideal(&[(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]).is_principal());
        assert!(IdealR::unit().is_principal());
    }

    #[test]
    fn real_generator_examples() {
        let g = ideal(&[(0.0, 2)]).real_generator().unwrap();
        assert!((g.cos_coeff(0) - 1.0).abs() < 1e-15 && (g.cos_coeff(1) + 1.0).abs() < 1e-15);
        assert!(g.sin_coeff(1).abs() < 1e-15);

        let g = ideal(&[(0.0, 1), (PI, 1)]).real_generator().unwrap();
        assert!(g.cos_coeff(0).abs() < 1e-15 && g.cos_coeff(1).abs() < 1e-15);
        assert!((g.sin_coeff(1) - 1.0).abs() < 1e-15);

        let i = ideal(&[(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]);
        let g = i.real_generator().unwrap();
        assert_eq!(g.degree(), 2);
        assert!(circle_divisor(&g, &cfg()).unwrap().approx_eq(i.divisor(), 1e-6));

        assert_eq!(ideal(&[(0.0, 1)]).real_generator().unwrap_err(), IdealError::OddDegree { degree: 1 });
        assert_eq!(IdealR::unit().real_generator().unwrap(), TrigPoly::constant(1.0));
    }

    #[test]
    fn class_examples() {
        use IdealClass::*;
        assert_eq!(ideal(&[(0.0, 1)]).class(), NonPrincipal);
        assert_eq!(ideal(&[(0.0, 1)]).product(&ideal(&[(2.0, 1)])).class(), Principal);
        assert_eq!(IdealR::unit().class(), Principal);
        assert_eq!(class_mul(NonPrincipal, NonPrincipal), Principal);
        assert_eq!(class_mul(Principal, NonPrincipal), NonPrincipal);
        assert_eq!(class_mul(Principal, Principal), Principal);
        assert_eq!(class_mul(NonPrincipal, Principal), NonPrincipal);
    }

    #[test]
    fn product_examples() {
        assert_eq!(ideal(&[(0.0, 1)]).product(&ideal(&[(PI, 1)])), ideal(&[(0.0, 1), (PI, 1)]));
        assert_eq!(ideal(&[(0.0, 1)]).product(&ideal(&[(0.0, 1)])), ideal(&[(0.0, 2)]));
        let i = ideal(&[(1.0, 3)]);
        assert_eq!(i.product(&IdealR::unit()), i);
    }

    #[test]
    fn membership_examples() {
        let s = TrigPoly::sin_kx(1);
        assert!(ideal(&[(0.0, 1), (PI, 1)]).contains(&s, &cfg()).unwrap());
        assert!(!ideal(&[(0.0, 2)]).contains(&s, &cfg()).unwrap());
        assert!(IdealR::unit().contains(&TrigPoly::constant(2.0), &cfg()).unwrap());
        assert_eq!(IdealR::unit().contains(&TrigPoly::zero(), &cfg()).unwrap_err(), IdealError::ZeroElement);
    }

    #[test]
    fn odd_decomposition_examples() {
        let (p, g) = ideal(&[(0.0, 1)]).odd_case_decomposition().unwrap();
        assert_eq!(p, CirclePoint::new(0.0));
        assert_eq!(g, TrigPoly::constant(1.0));

        let (p, g) = ideal(&[(0.0, 1), (PI, 2)]).odd_case_decomposition().unwrap();
        assert_eq!(p, CirclePoint::new(0.0));
        assert!(circle_divisor(&g, &cfg()).unwrap().approx_eq(&Divisor::from_angles([(PI, 2)]), 1e-6));

        let (p, g) = ideal(&[(0.0, 3)]).odd_case_decomposition().unwrap();
        assert_eq!(p, CirclePoint::new(0.0));
        assert!(circle_divisor(&g, &cfg()).unwrap().approx_eq(&Divisor::from_angles([(0.0, 2)]), 1e-6));

        assert_eq!(
            ideal(&[(0.0, 2)]).odd_case_decomposition().unwrap_err(),
            IdealError::EvenDegree { degree: 2 }
        );
    }

    #[test]
    fn complex_generator_examples() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let g = ideal(&[(0.0, 1)]).complex_generator();
        assert_eq!(g.polynomial_part(), &[c(-1.0, 0.0), c(1.0, 0.0)]);
        let g = ideal(&[(PI, 2)]).complex_generator();
        let expect = [c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        for (a, b) in g.polynomial_part().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        for k in 1..=2 {
            assert_eq!(g.coeff(-k), c(0.0, 0.0));
        }
        let g = IdealR::unit().complex_generator();
        assert_eq!(g.polynomial_part(), &[c(1.0, 0.0)]);
    }
}
