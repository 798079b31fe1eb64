//! Seeded generators for random test instances.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::divisor::{CirclePoint, Divisor};
use crate::trigpoly::TrigPoly;

/// Random trigonometric polynomial of degree `1..=max_degree` with all
/// coefficients uniform in `[−1, 1]`.
pub fn trigpoly<R: Rng>(rng: &mut R, max_degree: usize) -> TrigPoly {
    let n = rng.gen_range(1..=max_degree);
    let cos = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let sin = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    TrigPoly::new(cos, sin).expect("finite coefficients")
}

/// Whether `t` comes close to touching zero without crossing it: some local
/// minimum of `|T|` on the grid is below `floor` while `T` keeps its sign
/// there. Such instances sit next to a double zero and are numerically
/// ambiguous.
pub fn is_near_degenerate(t: &TrigPoly, grid: usize, floor: f64) -> bool {
    let vs: Vec<f64> = (0..grid).map(|i| t.evaluate(TAU * i as f64 / grid as f64)).collect();
    (0..grid).any(|i| {
        let prev = vs[(i + grid - 1) % grid];
        let next = vs[(i + 1) % grid];
        let v = vs[i];
        let local_min = v.abs() <= prev.abs() && v.abs() <= next.abs();
        let crosses = prev * v <= 0.0 || v * next <= 0.0;
        local_min && v.abs() < floor && !crosses
    })
}

/// Random angle at least `min_sep` (circle metric) from every point in
/// `taken`, by rejection.
fn fresh_point<R: Rng>(rng: &mut R, taken: &[CirclePoint], min_sep: f64) -> CirclePoint {
    loop {
        let p = CirclePoint::new(rng.gen_range(0.0..TAU));
        if taken.iter().all(|q| q.dist(p) >= min_sep) {
            return p;
        }
    }
}

/// Random divisor of the given degree whose distinct points are pairwise at
/// least `min_sep` apart. Each unit of degree either starts a new point or,
/// with probability `repeat`, raises the multiplicity of an existing point
/// whose multiplicity is below `max_mult`.
pub fn divisor_of_degree<R: Rng>(
    rng: &mut R,
    degree: u32,
    min_sep: f64,
    max_mult: u32,
    repeat: f64,
) -> Divisor {
    let mut points: Vec<CirclePoint> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    for _ in 0..degree {
        let open: Vec<usize> = (0..points.len()).filter(|&i| mults[i] < max_mult).collect();
        if !open.is_empty() && rng.gen_bool(repeat) {
            let i = open[rng.gen_range(0..open.len())];
            mults[i] += 1;
        } else {
            points.push(fresh_point(rng, &points, min_sep));
            mults.push(1);
        }
    }
    Divisor::new(points.into_iter().zip(mults))
}

/// Random divisor of degree `1..=max_degree`.
pub fn divisor<R: Rng>(rng: &mut R, max_degree: u32, min_sep: f64, max_mult: u32) -> Divisor {
    let degree = rng.gen_range(1..=max_degree);
    divisor_of_degree(rng, degree, min_sep, max_mult, 0.3)
}

/// Random even divisor of degree `2..=max_degree`.
pub fn even_divisor<R: Rng>(rng: &mut R, max_degree: u32, min_sep: f64, max_mult: u32) -> Divisor {
    let degree = 2 * rng.gen_range(1..=max_degree / 2);
    divisor_of_degree(rng, degree, min_sep, max_mult, 0.3)
}

/// Point at least `min_sep` from every point of `d` and of `extra`.
pub fn point_avoiding<R: Rng>(rng: &mut R, d: &Divisor, extra: &[CirclePoint], min_sep: f64) -> CirclePoint {
    let taken: Vec<CirclePoint> = d
        .entries()
        .iter()
        .map(|e| e.point)
        .chain(extra.iter().copied())
        .collect();
    fresh_point(rng, &taken, min_sep)
}

/// Product of `1..=max_pairs` pair generators over the points of a random
/// divisor, paired in random order. Returns the product and its divisor.
pub fn pair_product<R: Rng>(rng: &mut R, max_pairs: usize, min_sep: f64, max_mult: u32) -> (TrigPoly, Divisor) {
    let pairs = rng.gen_range(1..=max_pairs);
    let d = divisor_of_degree(rng, 2 * pairs as u32, min_sep, max_mult, 0.3);
    let mut points = d.expanded_points();
    points.shuffle(rng);
    let factors: Vec<TrigPoly> = points
        .chunks_exact(2)
        .map(|pair| TrigPoly::pair_generator(pair[0], pair[1]))
        .collect();
    (TrigPoly::product(&factors), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn divisors_respect_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d = divisor(&mut rng, 12, 1e-3, 3);
            assert!((1..=12).contains(&d.degree()));
            for (i, a) in d.entries().iter().enumerate() {
                assert!(a.multiplicity <= 3);
                for b in &d.entries()[i + 1..] {
                    assert!(a.point.dist(b.point) >= 1e-3);
                }
            }
        }
    }

    #[test]
    fn degenerate_detection() {
        // 1 + 1e-5 − cos x almost touches zero at 0
        let t = TrigPoly::new(vec![1.0 + 1e-5, -1.0], vec![]).unwrap();
        assert!(is_near_degenerate(&t, 4096, 1e-3));
        assert!(!is_near_degenerate(&TrigPoly::sin_kx(1), 4096, 1e-3));
        assert!(!is_near_degenerate(&TrigPoly::new(vec![2.0, 1.0], vec![]).unwrap(), 4096, 1e-3));
    }
}
