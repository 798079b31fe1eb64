//! Zeros of trigonometric polynomials on the circle.
//!
//! A trigonometric polynomial `T` of degree `N` is lifted to the ordinary
//! polynomial `q(z) = z^N Σ c_k z^k` of degree `2N`; the zeros of `T` on the
//! circle are the roots of `q` on `|z| = 1`. All `2N` roots of `q` are found
//! at once with the Aberth–Ehrlich iteration, then grouped into clusters that
//! represent one (possibly multiple) root each.
//!
//! Rounded coefficients split an `m`-fold root into `m` roots spread over a
//! radius of about `(u·S/|q^{(m)}(c)/m!|)^{1/m}` (with `u` the coefficient
//! error and `S` the coefficient scale), so clusters are merged whenever they
//! sit inside that radius or inside `cluster_radius`, whichever is larger.
//! Every reported multiplicity is cross-checked against [`zero_order`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use twofloat::TwoFloat;
use thiserror::Error;

use crate::divisor::{circle_dist, CirclePoint, Divisor};
use crate::trigpoly::TrigPoly;

/// Fixed angular offset of the initial guesses (radians, irrational).
const INITIAL_OFFSET: f64 = 0.618_033_988_749_894_8;
const INITIAL_RADIUS: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Roots with `||z| − 1|` above this are off the circle.
    pub tol_radius: f64,
    /// Residual threshold relative to the coefficient scale.
    pub tol_residual: f64,
    pub max_iter: u32,
    pub cluster_radius: f64,
    pub grid_size: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol_radius: 1e-6,
            tol_residual: 1e-8,
            max_iter: 200,
            cluster_radius: 1e-5,
            grid_size: 4096,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<(), RootError> {
        let positive = [self.tol_radius, self.tol_residual, self.cluster_radius]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive || self.max_iter == 0 || self.grid_size == 0 {
            return Err(RootError::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("the zero polynomial vanishes everywhere and has no divisor")]
    ZeroPolynomial,
    #[error("root finding did not converge: {0}")]
    NonConvergence(Diagnostics),
    #[error("invalid root configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub iterations: u32,
    pub unconverged: usize,
    pub detail: String,
}

impl std::fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} after {} iterations ({} roots unconverged)",
            self.detail, self.iterations, self.unconverged
        )
    }
}

/// Full output of the circle root finder.
#[derive(Debug, Clone)]
pub struct RootReport {
    pub divisor: Divisor,
    /// All roots of the lifted polynomial, as returned by the iteration.
    pub lifted_roots: Vec<Complex64>,
    pub iterations: u32,
    /// Near-circle clusters that were excluded, and similar notes.
    pub warnings: Vec<String>,
}

/// `(q(z), q'(z))` by Horner's rule; coefficients lowest degree first.
fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `Σ |Q_j| r^j`.
fn magnitude_scale(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Taylor coefficient `q^{(m)}(z)/m!`.
fn taylor_coeff(coeffs: &[Complex64], z: Complex64, m: usize) -> Complex64 {
    let n = coeffs.len();
    if m >= n {
        return Complex64::new(0.0, 0.0);
    }
    // Σ_{j≥m} C(j, m) Q_j z^{j−m}, by Horner on the shifted sequence
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (m..n).rev() {
        acc = acc * z + coeffs[j] * binomial(j, m);
    }
    acc
}

/// `q^{(m)}(z)/m!` evaluated in double-double precision. The polish needs
/// values below the rounding level of plain Horner: inside a tight group of
/// zeros that level corresponds to a visible distance on the circle.
fn taylor_coeff_wide(coeffs: &[Complex64], z: Complex64, m: usize) -> Complex64 {
    let n = coeffs.len();
    if m >= n {
        return Complex64::new(0.0, 0.0);
    }
    let (mut re, mut im) = (TwoFloat::from(0.0), TwoFloat::from(0.0));
    for j in (m..n).rev() {
        let b = binomial(j, m);
        let next_re = re * z.re - im * z.im + TwoFloat::new_mul(coeffs[j].re, b);
        let next_im = re * z.im + im * z.re + TwoFloat::new_mul(coeffs[j].im, b);
        re = next_re;
        im = next_im;
    }
    Complex64::new(re.hi() + re.lo(), im.hi() + im.lo())
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    // exact in u128 for every degree this crate handles
    let c = (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1));
    c as f64
}

/// Roots of `Σ Q_j z^j` by the Aberth–Ehrlich iteration, with initial
/// guesses on a circle of radius 1.1 at a fixed irrational offset.
///
/// A root is frozen once its residual reaches the rounding level of the
/// evaluation. Returns the roots and the number of sweeps.
pub fn aberth_roots(coeffs: &[Complex64], max_iter: u32) -> Result<(Vec<Complex64>, u32), RootError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    if coeffs[n] == Complex64::new(0.0, 0.0) {
        return Err(RootError::NonConvergence(Diagnostics {
            detail: "leading coefficient is zero".into(),
            ..Default::default()
        }));
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(INITIAL_RADIUS, TAU * k as f64 / n as f64 + INITIAL_OFFSET))
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON * (4 * (n + 1)) as f64;
    let mut sweeps = 0;
    while sweeps < max_iter {
        sweeps += 1;
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (p, dp) = horner_with_derivative(coeffs, zk);
            let scale = magnitude_scale(coeffs, zk.norm());
            if p.norm() <= eps * scale {
                done[k] = true;
                continue;
            }
            all_done = false;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = zk - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = if dp == Complex64::new(0.0, 0.0) {
                // stationary point: nudge off it
                Complex64::from_polar(1e-8 * (1.0 + zk.norm()), k as f64)
            } else {
                let ratio = p / dp;
                let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
                if denom.norm() == 0.0 {
                    ratio
                } else {
                    ratio / denom
                }
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(RootError::NonConvergence(Diagnostics {
                    iterations: sweeps,
                    unconverged: done.iter().filter(|d| !**d).count(),
                    detail: "non-finite Aberth correction".into(),
                }));
            }
            z[k] = zk - step;
            if step.norm() <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if all_done {
            refine_wide(coeffs, &mut z);
            return Ok((z, sweeps));
        }
    }
    let unconverged = done.iter().filter(|d| !**d).count();
    if unconverged == 0 {
        refine_wide(coeffs, &mut z);
        return Ok((z, sweeps));
    }
    Err(RootError::NonConvergence(Diagnostics {
        iterations: sweeps,
        unconverged,
        detail: "iteration limit reached".into(),
    }))
}

/// Sweeps of refinement after the main iteration.
const REFINE_SWEEPS: usize = 40;

/// `q(z)` and `q'(z)` by Horner in double-double precision.
fn horner_wide(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = TwoFloat::from(0.0);
    let (mut pr, mut pi, mut dr, mut di) = (zero, zero, zero, zero);
    for c in coeffs.iter().rev() {
        let (ndr, ndi) = (dr * z.re - di * z.im + pr, dr * z.im + di * z.re + pi);
        let (npr, npi) = (pr * z.re - pi * z.im + c.re, pr * z.im + pi * z.re + c.im);
        (pr, pi, dr, di) = (npr, npi, ndr, ndi);
    }
    let round = |v: TwoFloat| v.hi() + v.lo();
    (Complex64::new(round(pr), round(pi)), Complex64::new(round(dr), round(di)))
}

/// Continues the Aberth iteration with double-double evaluation. Plain
/// evaluation stalls once residuals reach its rounding level, which inside a
/// tight group of roots leaves them visibly short of the exact roots of the
/// given coefficients. The repulsion term keeps group members apart.
fn refine_wide(coeffs: &[Complex64], z: &mut [Complex64]) {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..REFINE_SWEEPS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (p, dp) = horner_wide(coeffs, zk);
            if p == Complex64::new(0.0, 0.0) || dp == Complex64::new(0.0, 0.0) {
                done[k] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k && z[j] != zk)
                .map(|j| (zk - z[j]).inv())
                .sum();
            let ratio = p / dp;
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[k] = true;
                continue;
            }
            z[k] = zk - step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return;
        }
    }
}

#[derive(Debug, Clone)]
struct Cluster {
    members: Vec<Complex64>,
}

impl Cluster {
    fn size(&self) -> usize {
        self.members.len()
    }

    fn centroid(&self) -> Complex64 {
        self.members.iter().sum::<Complex64>() / self.members.len() as f64
    }
}

/// Groups wider than this are never read as one multiple root.
const MAX_CLUSTER_SPREAD: f64 = 1e-2;

/// Whether `q` has a numerically `m`-fold root at `c`: every Taylor
/// coefficient below order `m` is at the rounding level of the coefficients.
/// A true multiple root split by rounding passes; distinct nearby roots leave
/// some lower coefficient well above that level and fail.
fn is_numerical_multiple(coeffs: &[Complex64], c: Complex64, m: usize) -> bool {
    let n = coeffs.len() - 1;
    let unit = 8.0 * (n + 1) as f64 * f64::EPSILON;
    let r = c.norm();
    (0..m).all(|j| {
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .skip(j)
            .map(|(k, q)| binomial(k, j) * q.norm() * r.powi((k - j) as i32))
            .sum();
        taylor_coeff_wide(coeffs, c, j).norm() <= unit * scale
    })
}

fn merge_clusters(coeffs: &[Complex64], roots: &[Complex64], cluster_radius: f64) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = Vec::new();
    // Anything within cluster_radius is one cluster, transitively.
    for &r in roots {
        let hits: Vec<usize> = (0..clusters.len())
            .filter(|&i| clusters[i].members.iter().any(|&z| (z - r).norm() <= cluster_radius))
            .collect();
        let mut merged = Cluster { members: vec![r] };
        for &i in hits.iter().rev() {
            merged.members.extend(clusters.swap_remove(i).members);
        }
        clusters.push(merged);
    }
    // Then grow groups that are numerically one multiple root. A split
    // m-fold root must be taken whole: a part of it is not a multiple root.
    loop {
        let mut best: Option<(Vec<usize>, usize, f64)> = None;
        for i in 0..clusters.len() {
            let ci = clusters[i].centroid();
            let mut near: Vec<(f64, usize)> = (0..clusters.len())
                .filter(|&j| j != i)
                .map(|j| ((clusters[j].centroid() - ci).norm(), j))
                .filter(|&(d, _)| d <= MAX_CLUSTER_SPREAD)
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut group = vec![i];
            for &(d, j) in &near {
                group.push(j);
                let m: usize = group.iter().map(|&g| clusters[g].size()).sum();
                let sum: Complex64 = group.iter().flat_map(|&g| clusters[g].members.iter()).sum();
                let c = polish(coeffs, sum / m as f64, m);
                if !is_numerical_multiple(coeffs, c, m) {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((_, bm, bd)) => m > *bm || (m == *bm && d < *bd),
                };
                if better {
                    best = Some((group.clone(), m, d));
                }
            }
        }
        match best {
            Some((mut group, _, _)) => {
                group.sort_unstable();
                let mut merged = Cluster { members: Vec::new() };
                for &g in group.iter().rev() {
                    merged.members.extend(clusters.swap_remove(g).members);
                }
                clusters.push(merged);
            }
            None => return clusters,
        }
    }
}

/// Newton on `q^{(m−1)}`, which has a simple root at an `m`-fold root of `q`.
/// When rounding has split an `m`-fold root, that root of `q^{(m−1)}` stays
/// first-order close to the original point, unlike the group's centroid.
fn polish(coeffs: &[Complex64], start: Complex64, m: usize) -> Complex64 {
    let mut c = start;
    let mut f = taylor_coeff_wide(coeffs, c, m - 1);
    for _ in 0..8 {
        let df = taylor_coeff(coeffs, c, m) * m as f64;
        if df.norm() == 0.0 || f.norm() == 0.0 {
            break;
        }
        let next = c - f / df;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let fn_ = taylor_coeff_wide(coeffs, next, m - 1);
        if fn_.norm() > f.norm() {
            break;
        }
        let moved = (next - c).norm();
        c = next;
        f = fn_;
        if moved <= 4.0 * f64::EPSILON * c.norm() {
            break;
        }
    }
    c
}

/// A cluster of roots on (or near) the unit circle.
#[derive(Debug, Clone, Copy)]
struct CircleCluster {
    z: Complex64,
    multiplicity: usize,
}

struct CircleRoots {
    zeros: Vec<CircleCluster>,
    warnings: Vec<String>,
}

fn circle_clusters(coeffs: &[Complex64], roots: &[Complex64], cfg: &RootConfig) -> CircleRoots {
    let mut warnings = Vec::new();
    let mut on_circle: Vec<CircleCluster> = Vec::new();
    for cl in merge_clusters(coeffs, roots, cfg.cluster_radius) {
        let m = cl.size();
        let centroid = cl.centroid();
        let z = polish(coeffs, centroid, m);
        // Roots of a real T off the circle come in pairs z, 1/z̄, so the
        // centroid of a split multiple root sits on the circle to second
        // order even when the polished point does not.
        let off = (z.norm() - 1.0).abs().min((centroid.norm() - 1.0).abs());
        if off <= cfg.tol_radius {
            on_circle.push(CircleCluster { z, multiplicity: m });
        } else if off <= 10.0 * cfg.tol_radius {
            warnings.push(format!(
                "excluded near-circle root cluster at angle {:.12} (||z|-1| = {:.3e}, size {})",
                z.arg().rem_euclid(TAU),
                off,
                m
            ));
        }
    }
    // Reciprocal-conjugate pairs just off the circle share an angle; fold them.
    let mut merged: Vec<CircleCluster> = Vec::new();
    for c in on_circle {
        let theta = c.z.arg();
        if let Some(existing) = merged
            .iter_mut()
            .find(|e| circle_dist(e.z.arg(), theta) <= cfg.cluster_radius)
        {
            let total = existing.multiplicity + c.multiplicity;
            let mean = (existing.z * existing.multiplicity as f64 + c.z * c.multiplicity as f64)
                / total as f64;
            existing.z = polish(coeffs, mean, total);
            existing.multiplicity = total;
        } else {
            merged.push(c);
        }
    }
    CircleRoots { zeros: merged, warnings }
}

/// Zeros of `T` on the circle with multiplicities.
pub fn circle_divisor(t: &TrigPoly, cfg: &RootConfig) -> Result<Divisor, RootError> {
    circle_divisor_report(t, cfg).map(|r| r.divisor)
}

/// [`circle_divisor`] together with the raw roots and diagnostics.
pub fn circle_divisor_report(t: &TrigPoly, cfg: &RootConfig) -> Result<RootReport, RootError> {
    cfg.validate()?;
    if t.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let lifted = t.to_laurent();
    let coeffs = lifted.coeffs();
    let (roots, iterations) = aberth_roots(coeffs, cfg.max_iter)?;
    let found = circle_clusters(coeffs, &roots, cfg);
    let residual_tol = cfg.tol_residual * t.coeff_norm();
    let mut entries = Vec::with_capacity(found.zeros.len());
    for c in &found.zeros {
        let point = CirclePoint::new(c.z.arg());
        let value = t.evaluate(point.theta());
        if value.abs() > residual_tol {
            return Err(RootError::NonConvergence(Diagnostics {
                iterations,
                unconverged: 0,
                detail: format!(
                    "residual {:.3e} at angle {:.12} exceeds {:.3e}",
                    value.abs(),
                    point.theta(),
                    residual_tol
                ),
            }));
        }
        let order = zero_order(t, point, cfg);
        if order as usize != c.multiplicity {
            return Err(RootError::NonConvergence(Diagnostics {
                iterations,
                unconverged: 0,
                detail: format!(
                    "multiplicity disagreement at angle {:.12}: cluster size {} but derivative order {}",
                    point.theta(),
                    c.multiplicity,
                    order
                ),
            }));
        }
        entries.push((point, c.multiplicity as u32));
    }
    Ok(RootReport {
        divisor: Divisor::new(entries),
        lifted_roots: roots,
        iterations,
        warnings: found.warnings,
    })
}

/// Zeros on the unit circle of an ordinary complex polynomial (lowest
/// coefficient first), with multiplicities. Multiplicities are cross-checked
/// against the vanishing order of the Taylor coefficients.
pub fn polynomial_circle_divisor(poly: &[Complex64], cfg: &RootConfig) -> Result<Divisor, RootError> {
    cfg.validate()?;
    let end = poly.iter().rposition(|c| c.norm() != 0.0).ok_or(RootError::ZeroPolynomial)?;
    let coeffs = &poly[..=end];
    let (roots, iterations) = aberth_roots(coeffs, cfg.max_iter)?;
    let found = circle_clusters(coeffs, &roots, cfg);
    let mut entries = Vec::new();
    for c in &found.zeros {
        let a: Vec<f64> = (0..coeffs.len()).map(|j| taylor_coeff_wide(coeffs, c.z, j).norm()).collect();
        let scale: Vec<f64> = (0..coeffs.len()).map(|j| taylor_scale(coeffs, j)).collect();
        let noise = 32.0 * coeffs.len() as f64 * f64::EPSILON;
        let order = pellet_order(&a, &scale, coeffs.len() - 1, noise, 0.0, cfg);
        if order != c.multiplicity {
            return Err(RootError::NonConvergence(Diagnostics {
                iterations,
                unconverged: 0,
                detail: format!(
                    "multiplicity disagreement at angle {:.12}: cluster size {} but vanishing order {}",
                    c.z.arg().rem_euclid(TAU),
                    c.multiplicity,
                    order
                ),
            }));
        }
        entries.push((CirclePoint::new(c.z.arg()), c.multiplicity as u32));
    }
    Ok(Divisor::new(entries))
}

/// `Σ_k C(k, j) |Q_k|`, the size of the j-th Taylor coefficient on the circle.
fn taylor_scale(coeffs: &[Complex64], j: usize) -> f64 {
    coeffs.iter().enumerate().skip(j).map(|(k, c)| binomial(k, j) * c.norm()).sum()
}

/// Order of vanishing of `T` at `p`.
///
/// This is the number of leading derivatives `T, T', …, T^{(m−1)}` whose
/// values at `p` are below `tol_residual` times their coefficient norms,
/// capped by the number of zeros of `T` within `cluster_radius` of `p`. The
/// latter is read off the Taylor expansion `Σ a_j h^j` at `p`: when one term
/// dominates the rest on `|h| = r`, i.e. `|a_m| r^m > Σ_{j≠m} |a_j| r^j`,
/// there are exactly `m` zeros in the disc (Pellet's criterion). The cap
/// keeps a simple zero with close neighbours, whose derivative is small,
/// from being counted as multiple. Returns 0 for the zero polynomial.
pub fn zero_order(t: &TrigPoly, p: CirclePoint, cfg: &RootConfig) -> u32 {
    if t.is_zero() {
        return 0;
    }
    let x = p.theta();
    let n = t.degree();
    let max_order = 2 * n + 2;
    let mut values = Vec::with_capacity(max_order + 1);
    let mut norms = Vec::with_capacity(max_order + 1);
    let mut d = t.clone();
    for _ in 0..=max_order {
        values.push(d.evaluate(x));
        norms.push(d.coeff_norm());
        d = d.derivative();
    }
    let mut factorial = 1.0;
    let mut a = Vec::with_capacity(values.len());
    let mut scale = Vec::with_capacity(values.len());
    for (j, (v, nrm)) in values.iter().zip(&norms).enumerate() {
        if j > 0 {
            factorial *= j as f64;
        }
        a.push(v.abs() / factorial);
        scale.push(nrm / factorial);
    }
    // |a_j| ≤ n^j ‖T‖ / j!, so the omitted tail is tiny for small n·r
    let nr = n as f64 * cfg.cluster_radius;
    let tail = t.coeff_norm() * nr.powi(max_order as i32 + 1) / (factorial * (max_order + 1) as f64) * nr.exp();
    pellet_order(&a, &scale, 2 * n, 32.0 * (n + 1) as f64 * f64::EPSILON, tail, cfg) as u32
}

/// Shared core of the vanishing-order tests. `a[j]` is the size of the j-th
/// Taylor coefficient at the candidate point and `scale[j]` its natural size;
/// `tail` bounds the omitted terms on the disc of radius `cluster_radius`.
/// Values within `noise` of their size are rounding noise and count as zero.
fn pellet_order(a: &[f64], scale: &[f64], cap: usize, noise: f64, tail: f64, cfg: &RootConfig) -> usize {
    let small = a
        .iter()
        .zip(scale)
        .take_while(|(v, s)| **v <= cfg.tol_residual * **s)
        .count()
        .min(cap);
    let r = cfg.cluster_radius;
    let terms: Vec<f64> = a
        .iter()
        .zip(scale)
        .enumerate()
        .map(|(j, (v, s))| if *v <= noise * s { 0.0 } else { v * r.powi(j as i32) })
        .collect();
    let total: f64 = terms.iter().sum::<f64>() + tail;
    match terms.iter().position(|&t| t > total - t) {
        Some(m) => small.min(m),
        None => small,
    }
}

/// Sign alternations of `T` around the circle, sampled on `grid_size`
/// equispaced points with samples within `cluster_radius` of a known zero
/// excluded. The count is cyclic and therefore even.
pub fn sign_changes(t: &TrigPoly, cfg: &RootConfig) -> u32 {
    let zeros: Vec<CirclePoint> = circle_divisor(t, cfg)
        .map(|d| d.entries().iter().map(|e| e.point).collect())
        .unwrap_or_default();
    sign_changes_excluding(t, &zeros, cfg)
}

pub fn sign_changes_excluding(t: &TrigPoly, zeros: &[CirclePoint], cfg: &RootConfig) -> u32 {
    let g = cfg.grid_size.max(1);
    let signs: Vec<bool> = (0..g)
        .map(|i| TAU * i as f64 / g as f64)
        .filter(|&x| zeros.iter().all(|z| circle_dist(z.theta(), x) > cfg.cluster_radius))
        .map(|x| t.evaluate(x))
        .filter(|v| *v != 0.0)
        .map(|v| v > 0.0)
        .collect();
    if signs.len() < 2 {
        return 0;
    }
    let flips = signs.windows(2).filter(|w| w[0] != w[1]).count()
        + usize::from(signs[0] != signs[signs.len() - 1]);
    flips as u32
}

/// Checks that every root of the lift that is off the circle has a partner
/// near `1/z̄`, as required for the lift of a real-valued function.
pub fn reciprocal_pairs_consistent(roots: &[Complex64], tol_radius: f64, tol: f64) -> bool {
    roots.iter().all(|&z| {
        if (z.norm() - 1.0).abs() <= tol_radius || z.norm() == 0.0 {
            return true;
        }
        let partner = z.conj().inv();
        roots.iter().any(|&w| (w - partner).norm() <= tol * (1.0 + partner.norm()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> RootConfig {
        RootConfig::default()
    }

    #[test]
    fn aberth_finds_simple_roots() {
        // (z − 1)(z − 2)(z + 3) = z³ − 7z + 6
        let c = |r: f64| Complex64::new(r, 0.0);
        let (mut roots, _) = aberth_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)], 200).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (r, e) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((r - c(e)).norm() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn cosine_zeros() {
        let d = circle_divisor(&TrigPoly::cos_kx(1), &cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 1), (3.0 * FRAC_PI_2, 1)]), 1e-12));
    }

    #[test]
    fn cosine_squared_zeros() {
        let c = TrigPoly::cos_kx(1);
        let d = circle_divisor(&c.multiply(&c), &cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2), (3.0 * FRAC_PI_2, 2)]), 1e-9));
    }

    #[test]
    fn one_minus_sine_has_double_zero() {
        let t = TrigPoly::new(vec![1.0], vec![-1.0]).unwrap();
        let d = circle_divisor(&t, &cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(FRAC_PI_2, 2)]), 1e-9), "{d}");
    }

    #[test]
    fn positive_function_has_no_zeros() {
        let t = TrigPoly::new(vec![2.0, 1.0], vec![]).unwrap();
        assert!(circle_divisor(&t, &cfg()).unwrap().is_empty());
        assert!(circle_divisor(&TrigPoly::constant(-4.0), &cfg()).unwrap().is_empty());
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(circle_divisor(&TrigPoly::zero(), &cfg()).unwrap_err(), RootError::ZeroPolynomial);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = RootConfig { tol_radius: -1.0, ..cfg() };
        assert!(matches!(
            circle_divisor(&TrigPoly::cos_kx(1), &bad),
            Err(RootError::InvalidConfig(_))
        ));
    }

    #[test]
    fn zero_order_examples() {
        let c = TrigPoly::cos_kx(1);
        assert_eq!(zero_order(&c, CirclePoint::new(FRAC_PI_2), &cfg()), 1);
        let t = TrigPoly::new(vec![1.0, -1.0], vec![]).unwrap();
        assert_eq!(zero_order(&t, CirclePoint::new(0.0), &cfg()), 2);
        assert_eq!(zero_order(&c, CirclePoint::new(0.0), &cfg()), 0);
    }

    #[test]
    fn sign_change_examples() {
        assert_eq!(sign_changes(&TrigPoly::sin_kx(1), &cfg()), 2);
        let t = TrigPoly::new(vec![1.0, -1.0], vec![]).unwrap();
        assert_eq!(sign_changes(&t, &cfg()), 0);
        let g = TrigPoly::pair_generator(CirclePoint::new(1.0), CirclePoint::new(2.0));
        assert_eq!(sign_changes(&TrigPoly::sin_kx(1).multiply(&g), &cfg()), 4);
    }

    #[test]
    fn high_multiplicity_cluster() {
        let p = CirclePoint::new(0.7);
        let g = TrigPoly::pair_generator(p, p);
        let t = g.pow(3);
        let d = circle_divisor(&t, &cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(0.7, 6)]), 1e-6), "{d}");
    }

    #[test]
    fn near_tangent_positive_function_has_no_zeros() {
        // 1 + 1e-6 − cos x: lifted roots sit at 1 ± 1.4e-3 on the real axis
        let t = TrigPoly::new(vec![1.0 + 1e-6, -1.0], vec![]).unwrap();
        let r = circle_divisor_report(&t, &cfg()).unwrap();
        assert!(r.divisor.is_empty());
        assert!(reciprocal_pairs_consistent(&r.lifted_roots, 1e-6, 1e-9));
    }

    #[test]
    fn polynomial_circle_roots() {
        // (z + 1)² = z² + 2z + 1
        let c = |r: f64| Complex64::new(r, 0.0);
        let d = polynomial_circle_divisor(&[c(1.0), c(2.0), c(1.0)], &cfg()).unwrap();
        assert!(d.approx_eq(&Divisor::from_angles([(PI, 2)]), 1e-9), "{d}");
        // z − 2 has no circle root
        assert!(polynomial_circle_divisor(&[c(-2.0), c(1.0)], &cfg()).unwrap().is_empty());
    }
}
