//! Circle points and divisors: finite formal sums `Σ aᵢ·(pᵢ)` of points on
//! the circle with positive multiplicities.
//!
//! A divisor is the canonical datum of a nonzero ideal of the ring of
//! real-analytic circle functions: the ideal `𝔪_{p₁}^{a₁}⋯𝔪_{pₙ}^{aₙ}`
//! corresponds to `{p₁:a₁, …, pₙ:aₙ}` and the unit ideal to the empty divisor.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Default point-equality tolerance in radians.
pub const DEFAULT_POINT_TOL: f64 = 1e-8;

/// Circle distance between two angles, in `[0, π]`.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A point of the circle `ℝ/2πℤ`, stored with its angle in `[0, 2π)`.
///
/// Equality is up to [`DEFAULT_POINT_TOL`] in the circle metric; use
/// [`CirclePoint::approx_eq`] for a different tolerance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CirclePoint {
    theta: f64,
}

impl CirclePoint {
    /// Reduces `theta` modulo `2π`. Non-finite input is mapped to 0.
    pub fn new(theta: f64) -> Self {
        if !theta.is_finite() {
            return CirclePoint { theta: 0.0 };
        }
        let mut t = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative input
        if t >= TAU {
            t = 0.0;
        }
        CirclePoint { theta: t }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn dist(self, other: CirclePoint) -> f64 {
        circle_dist(self.theta, other.theta)
    }

    pub fn approx_eq(self, other: CirclePoint, tol: f64) -> bool {
        self.dist(other) <= tol
    }
}

impl PartialEq for CirclePoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(*other, DEFAULT_POINT_TOL)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.theta)
    }
}

/// The group `ℤ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Z2(bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    pub fn from_count(n: u64) -> Self {
        Z2(n % 2 == 1)
    }

    pub fn is_zero(self) -> bool {
        !self.0
    }

    pub fn value(self) -> u8 {
        self.0 as u8
    }
}

impl Add for Z2 {
    type Output = Z2;
    fn add(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

/// One entry of a divisor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: CirclePoint,
    pub multiplicity: u32,
}

/// A finite multiset of circle points in canonical form: entries sorted by
/// angle, no two entries within the point tolerance, all multiplicities
/// positive.
#[derive(Debug, Clone)]
pub struct Divisor {
    entries: Vec<DivisorEntry>,
    tol: f64,
}

impl Default for Divisor {
    fn default() -> Self {
        Self::empty()
    }
}

impl Divisor {
    pub fn empty() -> Self {
        Divisor { entries: Vec::new(), tol: DEFAULT_POINT_TOL }
    }

    pub fn new<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (CirclePoint, u32)>,
    {
        Self::with_tolerance(entries, DEFAULT_POINT_TOL)
    }

    /// Convenience constructor from raw angles.
    pub fn from_angles<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (f64, u32)>,
    {
        Self::new(entries.into_iter().map(|(t, m)| (CirclePoint::new(t), m)))
    }

    /// Builds the canonical form: zero multiplicities are dropped and points
    /// within `tol` of each other (chained, in the circle metric) are merged
    /// into one entry at their multiplicity-weighted circular mean.
    pub fn with_tolerance<I>(entries: I, tol: f64) -> Self
    where
        I: IntoIterator<Item = (CirclePoint, u32)>,
    {
        let mut raw: Vec<DivisorEntry> = entries
            .into_iter()
            .filter(|(_, m)| *m > 0)
            .map(|(point, multiplicity)| DivisorEntry { point, multiplicity })
            .collect();
        raw.sort_by(|a, b| a.point.theta.total_cmp(&b.point.theta));
        let clusters = cluster_sorted(&raw, tol);
        let mut merged: Vec<DivisorEntry> = clusters
            .into_iter()
            .map(|members| {
                let multiplicity = members.iter().map(|e| e.multiplicity).sum();
                let point = if members.len() == 1 {
                    members[0].point
                } else {
                    weighted_circular_mean(&members)
                };
                DivisorEntry { point, multiplicity }
            })
            .collect();
        merged.sort_by(|a, b| a.point.theta.total_cmp(&b.point.theta));
        Divisor { entries: merged, tol }
    }

    pub fn entries(&self) -> &[DivisorEntry] {
        &self.entries
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `Σ multiplicities`.
    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|e| u64::from(e.multiplicity)).sum()
    }

    pub fn parity(&self) -> Z2 {
        Z2::from_count(self.degree())
    }

    /// Multiset union, merging coincident points.
    pub fn add(&self, other: &Divisor) -> Divisor {
        let tol = self.tol.max(other.tol);
        Self::with_tolerance(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|e| (e.point, e.multiplicity)),
            tol,
        )
    }

    /// Multiplicity at `p`, 0 if `p` is not in the support.
    pub fn multiplicity_at(&self, p: CirclePoint) -> u32 {
        self.entries
            .iter()
            .find(|e| e.point.approx_eq(p, self.tol))
            .map_or(0, |e| e.multiplicity)
    }

    /// Pointwise comparison `self ≤ other`. Ideal containment runs the other
    /// way: `ideal(other) ⊆ ideal(self)`.
    pub fn leq(&self, other: &Divisor) -> bool {
        self.leq_within(other, self.tol.max(other.tol))
    }

    pub fn leq_within(&self, other: &Divisor, tol: f64) -> bool {
        self.entries.iter().all(|e| {
            other
                .entries
                .iter()
                .any(|o| o.point.approx_eq(e.point, tol) && e.multiplicity <= o.multiplicity)
        })
    }

    /// Same support and multiplicities with points matched within `tol`.
    pub fn approx_eq(&self, other: &Divisor, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self.leq_within(other, tol)
            && other.leq_within(self, tol)
    }

    /// Largest point displacement between two divisors with the same
    /// support size, pairing each entry with its nearest counterpart.
    pub fn max_point_distance(&self, other: &Divisor) -> Option<f64> {
        if self.entries.len() != other.entries.len() {
            return None;
        }
        let mut worst = 0.0_f64;
        for e in &self.entries {
            let d = other
                .entries
                .iter()
                .map(|o| o.point.dist(e.point))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        Some(worst)
    }

    /// Points repeated by multiplicity, in angular order.
    pub fn expanded_points(&self) -> Vec<CirclePoint> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.point, e.multiplicity as usize))
            .collect()
    }

    /// Copy with the multiplicity at entry `index` lowered by one.
    pub fn decrement(&self, index: usize) -> Divisor {
        let mut entries: Vec<(CirclePoint, u32)> =
            self.entries.iter().map(|e| (e.point, e.multiplicity)).collect();
        entries[index].1 -= 1;
        Self::with_tolerance(entries, self.tol)
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, self.tol.max(other.tol))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", e.point.theta, e.multiplicity)?;
        }
        f.write_str("}")
    }
}

// Single-linkage clusters of angle-sorted entries, including across the
// 0/2π seam.
fn cluster_sorted(sorted: &[DivisorEntry], tol: f64) -> Vec<Vec<DivisorEntry>> {
    let mut clusters: Vec<Vec<DivisorEntry>> = Vec::new();
    for e in sorted {
        match clusters.last_mut() {
            Some(last) if last.last().unwrap().point.dist(e.point) <= tol => last.push(*e),
            _ => clusters.push(vec![*e]),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0][0].point;
        let last = clusters.last().unwrap().last().unwrap().point;
        if first.dist(last) <= tol {
            let tail = clusters.pop().unwrap();
            clusters[0].splice(0..0, tail);
        }
    }
    clusters
}

fn weighted_circular_mean(members: &[DivisorEntry]) -> CirclePoint {
    let (mut s, mut c) = (0.0, 0.0);
    for e in members {
        let w = f64::from(e.multiplicity);
        s += w * e.point.theta.sin();
        c += w * e.point.theta.cos();
    }
    CirclePoint::new(s.atan2(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn point_reduction() {
        assert!((CirclePoint::new(-FRAC_PI_2).theta() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!((CirclePoint::new(TAU + 1.0).theta() - 1.0).abs() < 1e-15);
        assert!(CirclePoint::new(-1e-20).theta() < TAU);
        assert_eq!(CirclePoint::new(1e-10), CirclePoint::new(TAU - 1e-10));
        assert_ne!(CirclePoint::new(0.0), CirclePoint::new(1e-6));
    }

    #[test]
    fn add_examples() {
        let a = Divisor::from_angles([(0.0, 1)]);
        let b = Divisor::from_angles([(PI, 1)]);
        assert_eq!(a.add(&b), Divisor::from_angles([(0.0, 1), (PI, 1)]));
        let h = Divisor::from_angles([(FRAC_PI_2, 1)]);
        let hh = h.add(&h);
        assert_eq!(hh.len(), 1);
        assert_eq!(hh, Divisor::from_angles([(FRAC_PI_2, 2)]));
        assert_eq!(a.add(&Divisor::empty()), a);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(Divisor::empty().degree(), 0);
        assert_eq!(Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]).degree(), 4);
        assert_eq!(Divisor::from_angles([(0.0, 3), (PI, 1)]).degree(), 4);
    }

    #[test]
    fn leq_examples() {
        let any = Divisor::from_angles([(1.0, 2)]);
        assert!(Divisor::empty().leq(&any));
        assert!(Divisor::from_angles([(0.0, 1)]).leq(&Divisor::from_angles([(0.0, 3), (PI, 1)])));
        assert!(!Divisor::from_angles([(0.0, 2)]).leq(&Divisor::from_angles([(0.0, 1), (PI, 5)])));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Divisor::from_angles([(0.0, 1)]).parity(), Z2::ONE);
        assert_eq!(Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]).parity(), Z2::ZERO);
        assert_eq!(Divisor::empty().parity(), Z2::ZERO);
    }

    #[test]
    fn merges_across_seam() {
        let d = Divisor::from_angles([(TAU - 1e-9, 1), (1e-9, 1), (2.0, 1)]);
        assert_eq!(d.len(), 2);
        assert_eq!(d.multiplicity_at(CirclePoint::new(0.0)), 2);
        assert!(d.entries()[0].point.dist(CirclePoint::new(0.0)) < 1e-12);
    }

    #[test]
    fn zero_multiplicities_dropped() {
        let d = Divisor::from_angles([(1.0, 0), (2.0, 1)]);
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn decrement_removes_exhausted_entry() {
        let d = Divisor::from_angles([(0.0, 1), (PI, 2)]);
        let e = d.decrement(0);
        assert_eq!(e, Divisor::from_angles([(PI, 2)]));
    }
}
