//! Seeded self-check of every algebraic claim the engine makes.
//!
//! Each check draws its instances from its own ChaCha stream derived from the
//! seed, so adding cases to one check never perturbs another and a run is
//! reproducible byte for byte.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisor::{CirclePoint, Divisor};
use crate::expr::parse_trigpoly;
use crate::factorization::{
    demo_nonufd, enumerate_factorizations, factorization_is_sound, is_half_factorial,
};
use crate::ideals::{class_mul, GeneratorSet, IdealClass, IdealError, IdealR};
use crate::oracle::{sampled_divisor, ORACLE_SAMPLES};
use crate::random;
use crate::roots::{
    circle_divisor, circle_divisor_report, polynomial_circle_divisor, reciprocal_pairs_consistent,
    RootConfig,
};
use crate::trigpoly::TrigPoly;

/// Point agreement demanded wherever a divisor is recovered numerically.
pub const POINT_TOL: f64 = 1e-6;
/// Minimum distance between distinct points of random divisors.
pub const MIN_SEPARATION: f64 = 1e-3;
/// Highest multiplicity in random divisors.
pub const MAX_MULTIPLICITY: u32 = 3;
/// Threshold below which a local minimum of `|T|` makes a random instance
/// too close to a double zero to count.
pub const DEGENERATE_FLOOR: f64 = 1e-3;
/// Grid used by the degeneracy filter.
pub const DEGENERATE_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    /// The first failing case, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    RingLaws,
    EvaluationHomomorphism,
    EvenZeroCount,
    ReciprocalPairs,
    ParityPrincipality,
    Containment,
    ClassGroup,
    IdealFromGenerators,
    ComplexPid,
    HalfFactorial,
    OracleEquivalence,
    NonUfdDemo,
    ParsePrint,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::RingLaws,
        Check::EvaluationHomomorphism,
        Check::EvenZeroCount,
        Check::ReciprocalPairs,
        Check::ParityPrincipality,
        Check::Containment,
        Check::ClassGroup,
        Check::IdealFromGenerators,
        Check::ComplexPid,
        Check::HalfFactorial,
        Check::OracleEquivalence,
        Check::NonUfdDemo,
        Check::ParsePrint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::RingLaws => "ring-laws",
            Check::EvaluationHomomorphism => "evaluation-homomorphism",
            Check::EvenZeroCount => "even-zero-count",
            Check::ReciprocalPairs => "reciprocal-pairs",
            Check::ParityPrincipality => "parity-principality",
            Check::Containment => "containment",
            Check::ClassGroup => "class-group",
            Check::IdealFromGenerators => "ideal-from-generators",
            Check::ComplexPid => "complex-pid",
            Check::HalfFactorial => "half-factorial",
            Check::OracleEquivalence => "oracle-equivalence",
            Check::NonUfdDemo => "non-ufd-demo",
            Check::ParsePrint => "parse-print",
        }
    }

    /// Random instances drawn when no case count is given.
    pub fn default_cases(self) -> usize {
        match self {
            Check::RingLaws => 200,
            Check::EvaluationHomomorphism => 200,
            Check::EvenZeroCount => 500,
            Check::ReciprocalPairs => 200,
            Check::ParityPrincipality => 200,
            Check::Containment => 100,
            Check::ClassGroup => 200,
            Check::IdealFromGenerators => 50,
            Check::ComplexPid => 50,
            Check::HalfFactorial => 40,
            Check::OracleEquivalence => 100,
            Check::NonUfdDemo => 0,
            Check::ParsePrint => 200,
        }
    }

    fn stream(self) -> u64 {
        Check::ALL.iter().position(|&c| c == self).unwrap_or(0) as u64 + 1
    }

    /// Runs this check with `cases` random instances.
    pub fn run(self, seed: u64, cases: usize, cfg: &RootConfig) -> CheckOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(self.stream());
        let mut t = Tally::new(self.name());
        match self {
            Check::RingLaws => ring_laws(&mut rng, cases, &mut t),
            Check::EvaluationHomomorphism => evaluation_homomorphism(&mut rng, cases, &mut t),
            Check::EvenZeroCount => even_zero_count(&mut rng, cases, cfg, &mut t),
            Check::ReciprocalPairs => reciprocal_pairs(&mut rng, cases, cfg, &mut t),
            Check::ParityPrincipality => parity_principality(&mut rng, cases, cfg, &mut t),
            Check::Containment => containment(&mut rng, cases, cfg, &mut t),
            Check::ClassGroup => class_group(&mut rng, cases, &mut t),
            Check::IdealFromGenerators => ideal_from_generators(&mut rng, cases, cfg, &mut t),
            Check::ComplexPid => complex_pid(&mut rng, cases, cfg, &mut t),
            Check::HalfFactorial => half_factorial(&mut rng, cases, cfg, &mut t),
            Check::OracleEquivalence => oracle_equivalence(&mut rng, cases, cfg, &mut t),
            Check::NonUfdDemo => non_ufd_demo(cfg, &mut t),
            Check::ParsePrint => parse_print(&mut rng, cases, &mut t),
        }
        t.finish()
    }
}

/// Runs every check. `cases` overrides each check's default count.
pub fn run_all(seed: u64, cases: Option<usize>, cfg: &RootConfig) -> VerifyReport {
    let checks: Vec<CheckOutcome> = Check::ALL
        .iter()
        .map(|&c| c.run(seed, cases.unwrap_or_else(|| c.default_cases()), cfg))
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { seed, checks, passed }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            passed: self.failures == 0,
            first_failure: self.first_failure,
        }
    }
}

fn random_divisor<R: Rng>(rng: &mut R, max_degree: u32) -> Divisor {
    random::divisor(rng, max_degree, MIN_SEPARATION, MAX_MULTIPLICITY)
}

fn nondegenerate_trigpoly<R: Rng>(rng: &mut R, max_degree: usize) -> TrigPoly {
    loop {
        let t = random::trigpoly(rng, max_degree);
        if !random::is_near_degenerate(&t, DEGENERATE_GRID, DEGENERATE_FLOOR) {
            return t;
        }
    }
}

/// `a + b·cos(x + φ)` with `a > |b|`, which never vanishes.
fn random_unit<R: Rng>(rng: &mut R) -> TrigPoly {
    let a = rng.gen_range(1.5..3.0);
    let b: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    TrigPoly::new(vec![a, b * phi.cos()], vec![-b * phi.sin()]).expect("finite")
}

fn coeff_gap(a: &TrigPoly, b: &TrigPoly) -> f64 {
    a.sub(b).max_abs_coeff()
}

fn ring_laws(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for _ in 0..cases {
        let (a, b, c) = (random::trigpoly(rng, 8), random::trigpoly(rng, 8), random::trigpoly(rng, 8));
        let scale = a.coeff_norm() * b.coeff_norm() * c.coeff_norm();
        let tol = 1e-12 * scale.max(1.0);
        let comm = coeff_gap(&a.multiply(&b), &b.multiply(&a));
        let assoc = coeff_gap(&a.multiply(&b).multiply(&c), &a.multiply(&b.multiply(&c)));
        let dist = coeff_gap(&a.multiply(&b.add(&c)), &a.multiply(&b).add(&a.multiply(&c)));
        let degree = a.multiply(&b).degree() == a.degree() + b.degree();
        t.record(comm <= tol && assoc <= tol && dist <= tol && degree, || {
            format!("a = {a}, b = {b}, c = {c}: gaps {comm:e} {assoc:e} {dist:e}")
        });
    }
}

fn evaluation_homomorphism(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for _ in 0..cases {
        let mut poly = || {
            let n = rng.gen_range(1..=16);
            let cos = (0..=n).map(|_| rng.gen_range(-10.0..=10.0)).collect();
            let sin = (0..n).map(|_| rng.gen_range(-10.0..=10.0)).collect();
            TrigPoly::new(cos, sin).expect("finite")
        };
        let (a, b) = (poly(), poly());
        let ab = a.multiply(&b);
        for _ in 0..5 {
            let x = rng.gen_range(0.0..std::f64::consts::TAU);
            let gap = (ab.evaluate(x) - a.evaluate(x) * b.evaluate(x)).abs();
            t.record(gap <= 1e-9, || format!("a = {a}, b = {b}, x = {x}: gap {gap:e}"));
        }
    }
}

fn even_zero_count(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let p = nondegenerate_trigpoly(rng, 8);
        match circle_divisor(&p, cfg) {
            Ok(d) => t.record(d.degree() % 2 == 0 && d.degree() <= 2 * p.degree() as u64, || {
                format!("T = {p}: divisor {d} has degree {}", d.degree())
            }),
            Err(e) => t.record(false, || format!("T = {p}: {e}")),
        }
    }
}

fn reciprocal_pairs(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let p = nondegenerate_trigpoly(rng, 8);
        match circle_divisor_report(&p, cfg) {
            Ok(r) => t.record(reciprocal_pairs_consistent(&r.lifted_roots, cfg.tol_radius, 1e-6), || {
                format!("T = {p}: an off-circle root lacks its partner 1/conj(z)")
            }),
            Err(e) => t.record(false, || format!("T = {p}: {e}")),
        }
    }
}

fn parity_principality(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let d = random_divisor(rng, 12);
        let ideal = IdealR::new(d.clone());
        let even = d.degree() % 2 == 0;
        let ok = match ideal.real_generator() {
            Ok(g) if even && ideal.is_principal() => match circle_divisor(&g, cfg) {
                Ok(found) => {
                    let ok = found.approx_eq(&d, POINT_TOL);
                    t.record(ok, || format!("{d}: generator {g} has divisor {found}"));
                    continue;
                }
                Err(e) => {
                    t.record(false, || format!("{d}: generator {g}: {e}"));
                    continue;
                }
            },
            Err(IdealError::OddDegree { .. }) => !even && !ideal.is_principal(),
            _ => false,
        };
        t.record(ok, || format!("{d}: principality disagrees with parity"));
    }
}

fn containment(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let d = random_divisor(rng, 8);
        let ideal = IdealR::new(d.clone());
        let q = random::point_avoiding(rng, &d, &[], MIN_SEPARATION);
        let r = random::point_avoiding(rng, &d, &[q], MIN_SEPARATION);
        let fill = if d.degree() % 2 == 0 { vec![(q, 2)] } else { vec![(q, 1)] };
        let multiple = d.add(&Divisor::new(fill.clone()));
        let unit = random_unit(rng);
        let inside = IdealR::new(multiple.clone()).real_generator().map(|g| g.multiply(&unit));
        // drop one occurrence of the first point and pad with r
        let short = d.decrement(0).add(&Divisor::new(fill)).add(&Divisor::new([(r, 1)]));
        let outside = IdealR::new(short).real_generator().map(|g| g.multiply(&unit));
        let (Ok(inside), Ok(outside)) = (inside, outside) else {
            t.record(false, || format!("{d}: test elements have odd divisors"));
            continue;
        };
        let verdicts = (ideal.contains(&inside, cfg), ideal.contains(&outside, cfg));
        let divisors = (circle_divisor(&inside, cfg), circle_divisor(&outside, cfg));
        match (verdicts, divisors) {
            ((Ok(a), Ok(b)), (Ok(da), Ok(db))) => {
                let dual = a == d.leq_within(&da, cfg.cluster_radius) && b == d.leq_within(&db, cfg.cluster_radius);
                t.record(a && !b && dual, || format!("{d}: contains gave {a} for {da} and {b} for {db}"));
            }
            _ => t.record(false, || format!("{d}: root finding failed")),
        }
    }
}

fn class_group(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    let single = IdealR::maximal(CirclePoint::new(0.0));
    t.record(single.class() == IdealClass::NonPrincipal, || "class of {0:1} is trivial".into());
    t.record(IdealR::unit().class() == IdealClass::Principal, || "unit ideal is not principal".into());
    for _ in 0..cases {
        let (a, b) = (IdealR::new(random_divisor(rng, 6)), IdealR::new(random_divisor(rng, 6)));
        let hom = a.product(&b).class() == class_mul(a.class(), b.class());
        let square = a.product(&a).class() == IdealClass::Principal;
        t.record(hom && square, || format!("{} and {}", a.divisor(), b.divisor()));
    }
}

/// Two generators whose divisors share exactly `d`, each times a unit.
fn generators_with_common_divisor<R: Rng>(rng: &mut R, d: &Divisor) -> Option<(Vec<TrigPoly>, [CirclePoint; 2])> {
    let q1 = random::point_avoiding(rng, d, &[], MIN_SEPARATION);
    let q2 = random::point_avoiding(rng, d, &[q1], MIN_SEPARATION);
    // an odd completion is padded by doubling the fresh point
    let extra = if d.degree() % 2 == 0 { 2 } else { 1 };
    let mut gens = Vec::new();
    for q in [q1, q2] {
        let g = IdealR::new(d.add(&Divisor::new([(q, extra)]))).real_generator().ok()?;
        gens.push(g.multiply(&random_unit(rng)));
    }
    Some((gens, [q1, q2]))
}

fn ideal_from_generators(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    let worked = ["sin(x)*(1-cos(x))", "sin(x)*(1+cos(x))"]
        .map(|s| parse_trigpoly(s).expect("fixed expression parses"));
    let expected = Divisor::from_angles([(0.0, 1), (std::f64::consts::PI, 1)]);
    match GeneratorSet::new(worked.to_vec()).and_then(|s| s.divisor(cfg)) {
        Ok(found) => t.record(found.approx_eq(&expected, POINT_TOL), || format!("worked example gave {found}")),
        Err(e) => t.record(false, || format!("worked example: {e}")),
    }
    for _ in 0..cases {
        let d = random_divisor(rng, 8);
        let Some((gens, _)) = generators_with_common_divisor(rng, &d) else {
            t.record(false, || format!("{d}: completion is odd"));
            continue;
        };
        match GeneratorSet::new(gens).and_then(|s| s.divisor(cfg)) {
            Ok(found) => t.record(found.approx_eq(&d, POINT_TOL), || format!("{d}: recovered {found}")),
            Err(e) => t.record(false, || format!("{d}: {e}")),
        }
    }
}

fn complex_pid(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let d = random_divisor(rng, 12);
        let g = IdealR::new(d.clone()).complex_generator();
        match polynomial_circle_divisor(g.polynomial_part(), cfg) {
            Ok(found) => t.record(found.approx_eq(&d, POINT_TOL), || format!("{d}: recovered {found}")),
            Err(e) => t.record(false, || format!("{d}: {e}")),
        }
    }
}

/// Every distinct perfect matching of a multiset of labels, by plain
/// recursion over positions followed by canonical sorting. Deliberately
/// naive: it is the reference for the streaming enumerator.
pub fn brute_force_matchings(labels: &[usize]) -> BTreeSet<Vec<(usize, usize)>> {
    fn go(rest: &[usize], current: &mut Vec<(usize, usize)>, out: &mut BTreeSet<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            let mut key = current.clone();
            key.sort_unstable();
            out.insert(key);
            return;
        };
        for j in 0..tail.len() {
            let partner = tail[j];
            let mut remaining = tail.to_vec();
            remaining.remove(j);
            current.push((first.min(partner), first.max(partner)));
            go(&remaining, current, out);
            current.pop();
        }
    }
    let mut out = BTreeSet::new();
    if labels.len() % 2 == 0 {
        go(labels, &mut Vec::new(), &mut out);
    }
    out
}

fn double_factorial_odd(m: u64) -> u64 {
    (1..=m).map(|k| 2 * k - 1).product()
}

fn half_factorial(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    use std::f64::consts::{FRAC_PI_2, PI};
    // fixed instances first: the non-UFD divisor, four simple points and the
    // largest enumerable degree
    let a = Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]);
    let four = Divisor::from_angles((0..4).map(|k| (k as f64 * 1.3 + 0.2, 1)));
    let sixteen = Divisor::from_angles((0..16).map(|k| (k as f64 * PI / 8.0, 1)));
    let heavy = Divisor::from_angles((0..4).map(|k| (k as f64 * 1.5 + 0.1, 4)));
    for (d, expected) in [(&a, Some(2)), (&four, Some(3)), (&sixteen, Some(double_factorial_odd(8) as usize)), (&heavy, None)] {
        match is_half_factorial(d) {
            Ok(r) => {
                let count_ok = expected.is_none_or(|e| r.count == e);
                let ok = r.half_factorial && r.lengths == vec![d.degree() as usize / 2] && count_ok;
                t.record(ok, || format!("{d}: {r:?}"));
            }
            Err(e) => t.record(false, || format!("{d}: {e}")),
        }
    }
    for _ in 0..cases {
        let degree = 2 * rng.gen_range(1..=6);
        let d = random::divisor_of_degree(rng, degree, MIN_SEPARATION, MAX_MULTIPLICITY, 0.3);
        let labels: Vec<usize> = d
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(i, e)| std::iter::repeat_n(i, e.multiplicity as usize))
            .collect();
        let reference = brute_force_matchings(&labels);
        let (report, all) = match (is_half_factorial(&d), enumerate_factorizations(&d)) {
            (Ok(r), Ok(all)) => (r, all),
            (Err(e), _) | (_, Err(e)) => {
                t.record(false, || format!("{d}: {e}"));
                continue;
            }
        };
        let listed: BTreeSet<Vec<(usize, usize)>> = all.iter().map(|f| f.pairs.clone()).collect();
        let lengths_ok = all.iter().all(|f| f.len() as u64 == d.degree() / 2);
        // soundness by root finding on a few witnesses per divisor
        let sound = all.iter().take(4).all(|f| factorization_is_sound(f, &d, cfg, POINT_TOL).unwrap_or(false));
        let ok = report.half_factorial && report.count == reference.len() && listed == reference && lengths_ok && sound;
        t.record(ok, || {
            format!("{d}: {} factorizations, brute force {}, sound {sound}", report.count, reference.len())
        });
    }
}

fn oracle_equivalence(rng: &mut ChaCha8Rng, cases: usize, cfg: &RootConfig, t: &mut Tally) {
    for _ in 0..cases {
        let (p, _) = random::pair_product(rng, 6, MIN_SEPARATION, MAX_MULTIPLICITY);
        let reference = sampled_divisor(&p, ORACLE_SAMPLES, cfg);
        match circle_divisor(&p, cfg) {
            Ok(found) => t.record(found.approx_eq(&reference, POINT_TOL), || {
                format!("T = {p}: root finder {found}, oracle {reference}")
            }),
            Err(e) => t.record(false, || format!("T = {p}: {e}")),
        }
    }
}

fn non_ufd_demo(cfg: &RootConfig, t: &mut Tally) {
    use std::f64::consts::FRAC_PI_2;
    let demo = match demo_nonufd(cfg) {
        Ok(d) => d,
        Err(e) => {
            t.record(false, || e.to_string());
            return;
        }
    };
    let up = FRAC_PI_2;
    let down = 3.0 * FRAC_PI_2;
    let tol = POINT_TOL;
    t.record(demo.coefficient_gap <= 1e-12, || format!("coefficient gap {:e}", demo.coefficient_gap));
    t.record(demo.cos_divisor.approx_eq(&Divisor::from_angles([(up, 1), (down, 1)]), tol), || {
        format!("cos x has divisor {}", demo.cos_divisor)
    });
    t.record(demo.one_plus_sin_divisor.approx_eq(&Divisor::from_angles([(down, 2)]), tol), || {
        format!("1 + sin x has divisor {}", demo.one_plus_sin_divisor)
    });
    t.record(demo.one_minus_sin_divisor.approx_eq(&Divisor::from_angles([(up, 2)]), tol), || {
        format!("1 - sin x has divisor {}", demo.one_minus_sin_divisor)
    });
    let lengths_ok = demo.factorizations.iter().all(|f| f.len() == 2);
    t.record(demo.factorizations.len() == 2 && lengths_ok, || {
        format!("{} factorizations of {}", demo.factorizations.len(), demo.product_divisor)
    });
}

fn parse_print(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for _ in 0..cases {
        let p = random::trigpoly(rng, 8);
        let text = p.to_string();
        match parse_trigpoly(&text) {
            Ok(back) => {
                let gap = coeff_gap(&back, &p);
                t.record(gap <= 1e-12 * p.max_abs_coeff().max(1.0), || format!("{text}: gap {gap:e}"));
            }
            Err(e) => t.record(false, || format!("{text}: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        assert_eq!(brute_force_matchings(&[0, 1, 2, 3]).len(), 3);
        assert_eq!(brute_force_matchings(&[0, 0, 1, 1]).len(), 2);
        assert_eq!(brute_force_matchings(&[0, 0]).len(), 1);
        assert_eq!(brute_force_matchings(&(0..8).collect::<Vec<_>>()).len(), 105);
        assert!(brute_force_matchings(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn streams_are_independent_of_case_counts() {
        let cfg = RootConfig::default();
        let a = Check::RingLaws.run(7, 3, &cfg);
        let b = Check::RingLaws.run(7, 3, &cfg);
        assert_eq!(a, b);
        assert!(a.passed);
    }
}
