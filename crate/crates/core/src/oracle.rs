//! Reference zero finder that never touches the complex lift.
//!
//! Zeros are located by dense sampling of `T` and its derivatives on the
//! circle. An `m`-fold zero of `T` is a simple zero, hence a sign change, of
//! `T^{(m−1)}`; every bracketed sign change of every derivative is bisected
//! and kept when `T` vanishes there, with multiplicity from [`zero_order`].
//! Candidates are then merged, highest order first.
//!
//! Slow and assumes distinct zeros lie more than [`MERGE_WINDOW`] apart;
//! it exists to cross-check [`crate::roots::circle_divisor`].

use std::f64::consts::TAU;

use crate::divisor::{circle_dist, CirclePoint, Divisor};
use crate::roots::{zero_order, RootConfig};
use crate::trigpoly::{harmonics, TrigPoly};

/// Default number of samples around the circle.
pub const ORACLE_SAMPLES: usize = 1 << 14;
/// Candidates closer than this, radians, are one zero.
pub const MERGE_WINDOW: f64 = 2e-4;

fn bisect(f: &TrigPoly, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f.evaluate(a);
    if fa == 0.0 {
        return a;
    }
    if f.evaluate(b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f.evaluate(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Values of every polynomial in `fs` on the grid `2πi/n`, sharing one
/// harmonic table per grid point.
fn grid_values(fs: &[TrigPoly], n: usize) -> Vec<Vec<f64>> {
    let degree = fs.iter().map(TrigPoly::degree).max().unwrap_or(0);
    let mut out = vec![Vec::with_capacity(n + 1); fs.len()];
    let mut table = Vec::with_capacity(degree + 1);
    for i in 0..n {
        harmonics(TAU * i as f64 / n as f64, degree, &mut table);
        for (f, vs) in fs.iter().zip(out.iter_mut()) {
            vs.push(f.evaluate_harmonics(&table));
        }
    }
    out
}

/// Roots of sign changes of `f`, given its values `vs` on the grid `2πi/n`.
fn sign_change_roots(f: &TrigPoly, mut vs: Vec<f64>) -> Vec<f64> {
    let n = vs.len();
    let x = |i: usize| TAU * i as f64 / n as f64;
    // 0 and 2π are one point; evaluating both can round to opposite signs
    vs.push(vs[0]);
    (0..n)
        .filter(|&i| vs[i] * vs[i + 1] <= 0.0)
        .map(|i| bisect(f, x(i), x(i + 1)))
        .collect()
}

/// Zeros of `t` on the circle with multiplicities, from `samples` grid
/// points. `t` must be nonzero.
pub fn sampled_divisor(t: &TrigPoly, samples: usize, cfg: &RootConfig) -> Divisor {
    assert!(!t.is_zero(), "the zero polynomial has no divisor");
    let max_order = 2 * t.degree();
    let mut derivs = Vec::with_capacity(max_order + 1);
    let mut d = t.clone();
    for _ in 0..=max_order {
        let next = d.derivative();
        derivs.push(d);
        d = next;
    }
    let tol = cfg.tol_residual * t.coeff_norm();
    let mut found: Vec<(f64, u32, usize)> = Vec::new();
    let values = grid_values(&derivs, samples);
    for ((k, f), vs) in derivs.iter().enumerate().zip(values) {
        if f.is_zero() {
            continue;
        }
        for r in sign_change_roots(f, vs) {
            if t.evaluate(r).abs() > tol {
                continue;
            }
            let m = zero_order(t, CirclePoint::new(r), cfg);
            if m > 0 {
                found.push((r, m, k));
            }
        }
    }
    // Highest orders first, and for an m-fold zero the root of T^{(m−1)}
    // first, since that one is simple and accurately placed. Anything inside
    // the rounding-noise neighbourhood of an accepted zero is the same zero.
    found.sort_by_key(|&(_, m, k)| (std::cmp::Reverse(m), (k + 1).abs_diff(m as usize)));
    let mut accepted: Vec<(f64, u32, f64)> = Vec::new();
    for (p, m, _) in found {
        let near = |q: f64, radius: f64| circle_dist(q, p) <= MERGE_WINDOW.max(radius);
        if accepted.iter().any(|&(q, _, radius)| near(q, radius)) {
            continue;
        }
        let radius = 2.0 * noise_radius(t, &derivs, p, m);
        accepted.push((p, m, radius));
    }
    Divisor::new(accepted.into_iter().map(|(p, m, _)| (CirclePoint::new(p), m)))
}

/// Radius within which rounding noise in `t` blurs an `m`-fold zero at `p`:
/// where `|T^{(m)}(p)| h^m / m!` drops to the noise level of `T`.
fn noise_radius(t: &TrigPoly, derivs: &[TrigPoly], p: f64, m: u32) -> f64 {
    let m = m as usize;
    let Some(dm) = derivs.get(m) else { return 0.0 };
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let lead = dm.evaluate(p).abs() / factorial;
    if lead == 0.0 {
        return 0.0;
    }
    let noise = 32.0 * (t.degree() + 1) as f64 * f64::EPSILON * t.coeff_norm();
    (noise / lead).powf(1.0 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn finds_simple_and_multiple_zeros() {
        let cfg = RootConfig::default();
        let d = sampled_divisor(&TrigPoly::cos_kx(1), 4096, &cfg);
        assert!(d.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 1), (3.0 * FRAC_PI_2, 1)]), 1e-12));

        let t = TrigPoly::new(vec![1.0], vec![-1.0]).unwrap();
        let d = sampled_divisor(&t, 4096, &cfg);
        assert!(d.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2)]), 1e-9), "{d}");

        let g = TrigPoly::pair_generator(CirclePoint::new(1.0), CirclePoint::new(1.0));
        let t = g.multiply(&TrigPoly::sin_kx(1)).multiply(&g);
        let d = sampled_divisor(&t, 4096, &cfg);
        assert!(d.approx_eq(&Divisor::from_angles([(0.0, 1), (1.0, 4), (PI, 1)]), 1e-6), "{d}");
    }
}
