//! Real trigonometric polynomials `a0 + Σ ak cos(kx) + bk sin(kx)` and their
//! Laurent lifts `Σ ck z^k` with `z = e^{ix}`.
//!
//! Products are formed with the product-to-sum identities, so the coefficients
//! of a product are closed-form expressions in the input coefficients.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;
use twofloat::TwoFloat;

use crate::divisor::CirclePoint;

/// Harmonics whose coefficients fall below this fraction of the largest
/// coefficient are trimmed from the top.
pub const TRIM_RELATIVE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigPolyError {
    #[error("coefficient {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
}

/// A real trigonometric polynomial in canonical form.
///
/// `cos[k]` holds `a_k` for `k = 0..=N` and `sin[k - 1]` holds `b_k` for
/// `k = 1..=N`. The top harmonic is nonzero unless the polynomial is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    /// Builds a polynomial from cosine coefficients `a0..aN` and sine
    /// coefficients `b1..bM`. The shorter list is zero-padded.
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self, TrigPolyError> {
        for (index, &value) in cos.iter().chain(sin.iter()).enumerate() {
            if !value.is_finite() {
                return Err(TrigPolyError::NonFinite { index, value });
            }
        }
        Ok(Self::from_parts(cos, sin))
    }

    // Caller guarantees finiteness.
    fn from_parts(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        if cos.is_empty() {
            cos.push(0.0);
        }
        let n = (cos.len() - 1).max(sin.len());
        cos.resize(n + 1, 0.0);
        sin.resize(n, 0.0);
        let mut p = TrigPoly { cos, sin };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            self.cos.truncate(1);
            self.cos[0] = 0.0;
            self.sin.clear();
            return;
        }
        let cutoff = TRIM_RELATIVE * scale;
        while let Some(&b) = self.sin.last() {
            let a = self.cos[self.cos.len() - 1];
            if a.abs().max(b.abs()) < cutoff {
                self.sin.pop();
                self.cos.pop();
            } else {
                break;
            }
        }
    }

    pub fn zero() -> Self {
        TrigPoly { cos: vec![0.0], sin: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_parts(vec![c], Vec::new())
    }

    /// `amp_cos * cos(kx) + amp_sin * sin(kx)`.
    pub fn harmonic(k: usize, amp_cos: f64, amp_sin: f64) -> Self {
        if k == 0 {
            return Self::constant(amp_cos);
        }
        let mut cos = vec![0.0; k + 1];
        let mut sin = vec![0.0; k];
        cos[k] = amp_cos;
        sin[k - 1] = amp_sin;
        Self::from_parts(cos, sin)
    }

    pub fn cos_kx(k: usize) -> Self {
        Self::harmonic(k, 1.0, 0.0)
    }

    pub fn sin_kx(k: usize) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self::harmonic(k, 0.0, 1.0)
    }

    pub fn degree(&self) -> usize {
        self.sin.len()
    }

    pub fn is_zero(&self) -> bool {
        self.sin.is_empty() && self.cos[0] == 0.0
    }

    /// `a_k`, zero beyond the degree.
    pub fn cos_coeff(&self, k: usize) -> f64 {
        self.cos.get(k).copied().unwrap_or(0.0)
    }

    /// `b_k`, zero for `k = 0` and beyond the degree.
    pub fn sin_coeff(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.sin.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Sum of absolute coefficient values; bounds `|T(x)|` for every `x`.
    pub fn coeff_norm(&self) -> f64 {
        self.cos.iter().chain(self.sin.iter()).map(|c| c.abs()).sum()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let (s1, c1) = x.sin_cos();
        // cos(kx), sin(kx) by the angle-addition recurrence; re-seeded every
        // few steps to keep rounding from accumulating at higher degree.
        let mut ck = 1.0;
        let mut sk = 0.0;
        let mut acc = self.cos[0];
        for k in 1..=self.degree() {
            if k % 16 == 0 {
                let (s, c) = (k as f64 * x).sin_cos();
                sk = s;
                ck = c;
            } else {
                let c = ck * c1 - sk * s1;
                let s = sk * c1 + ck * s1;
                ck = c;
                sk = s;
            }
            acc += self.cos[k] * ck + self.sin[k - 1] * sk;
        }
        acc
    }

    /// Value from a table of `(cos kx, sin kx)` for `k = 0..=degree`, as
    /// filled by [`harmonics`]. Lets many polynomials share one table.
    pub fn evaluate_harmonics(&self, table: &[(f64, f64)]) -> f64 {
        let mut acc = self.cos[0];
        for k in 1..=self.degree() {
            acc += self.cos[k] * table[k].0 + self.sin[k - 1] * table[k].1;
        }
        acc
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.degree().max(other.degree());
        let cos = (0..=n).map(|k| self.cos_coeff(k) + other.cos_coeff(k)).collect();
        let sin = (1..=n).map(|k| self.sin_coeff(k) + other.sin_coeff(k)).collect();
        Self::from_parts(cos, sin)
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> TrigPoly {
        Self::from_parts(
            self.cos.iter().map(|a| a * c).collect(),
            self.sin.iter().map(|b| b * c).collect(),
        )
    }

    /// Exact product via
    /// `cos A cos B = ½[cos(A−B) + cos(A+B)]`,
    /// `sin A sin B = ½[cos(A−B) − cos(A+B)]`,
    /// `sin A cos B = ½[sin(A+B) + sin(A−B)]`.
    pub fn multiply(&self, other: &TrigPoly) -> TrigPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.degree() + other.degree();
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n + 1];
        let mut add_cos = |k: isize, v: f64| cos[k.unsigned_abs()] += v;
        for j in 0..=self.degree() {
            let (aj, bj) = (self.cos_coeff(j), self.sin_coeff(j));
            for k in 0..=other.degree() {
                let (ak, bk) = (other.cos_coeff(k), other.sin_coeff(k));
                let (ji, ki) = (j as isize, k as isize);
                let cc = aj * ak;
                let ss = bj * bk;
                add_cos(ji - ki, 0.5 * (cc + ss));
                add_cos(ji + ki, 0.5 * (cc - ss));
            }
        }
        let mut add_sin = |k: isize, v: f64| {
            if k > 0 {
                sin[k as usize] += v;
            } else if k < 0 {
                sin[(-k) as usize] -= v;
            }
        };
        for j in 0..=self.degree() {
            let (aj, bj) = (self.cos_coeff(j), self.sin_coeff(j));
            for k in 0..=other.degree() {
                let (ak, bk) = (other.cos_coeff(k), other.sin_coeff(k));
                let (ji, ki) = (j as isize, k as isize);
                // sin(jx)·cos(kx) with coefficient bj·ak
                add_sin(ji + ki, 0.5 * bj * ak);
                add_sin(ji - ki, 0.5 * bj * ak);
                // cos(jx)·sin(kx) with coefficient aj·bk
                add_sin(ki + ji, 0.5 * aj * bk);
                add_sin(ki - ji, 0.5 * aj * bk);
            }
        }
        sin.remove(0);
        Self::from_parts(cos, sin)
    }

    pub fn pow(&self, e: u32) -> TrigPoly {
        Self::product((0..e).map(|_| self))
    }

    /// Product of many factors, accumulated in double-double precision and
    /// rounded once. A long chain of [`multiply`](Self::multiply) calls lets
    /// rounding errors of intermediate products survive cancellation, which
    /// visibly moves clustered multiple zeros.
    pub fn product<'a, I: IntoIterator<Item = &'a TrigPoly>>(factors: I) -> TrigPoly {
        let mut acc = Wide { cos: vec![TwoFloat::from(1.0)], sin: vec![TwoFloat::from(0.0)] };
        for f in factors {
            if f.is_zero() {
                return Self::zero();
            }
            acc = acc.multiply(f);
        }
        let cos = acc.cos.iter().map(|c| c.hi() + c.lo()).collect();
        let sin = acc.sin[1..].iter().map(|c| c.hi() + c.lo()).collect();
        Self::from_parts(cos, sin)
    }

    pub fn derivative(&self) -> TrigPoly {
        let n = self.degree();
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n];
        for k in 1..=n {
            let kf = k as f64;
            cos[k] = kf * self.sin[k - 1];
            sin[k - 1] = -kf * self.cos[k];
        }
        Self::from_parts(cos, sin)
    }

    /// The m-th derivative.
    pub fn nth_derivative(&self, m: usize) -> TrigPoly {
        (0..m).fold(self.clone(), |d, _| d.derivative())
    }

    /// `cos(x − (p₁+p₂)/2) − cos((p₁−p₂)/2)`, vanishing simply at `p₁ ≠ p₂`
    /// and nowhere else. For coincident points it returns
    /// `2 sin²((x−p)/2) = 1 − cos(x − p)`, with a double zero at `p`.
    pub fn pair_generator(p1: CirclePoint, p2: CirclePoint) -> TrigPoly {
        if p1 == p2 {
            let (s, c) = p1.theta().sin_cos();
            return Self::from_parts(vec![1.0, -c], vec![-s]);
        }
        let (t1, t2) = (p1.theta(), p2.theta());
        let mid = 0.5 * (t1 + t2);
        let half = 0.5 * (t1 - t2);
        let (s, c) = mid.sin_cos();
        Self::from_parts(vec![-half.cos(), c], vec![s])
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let n = self.degree();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        coeffs[n] = Complex64::new(self.cos[0], 0.0);
        for k in 1..=n {
            let (a, b) = (self.cos[k], self.sin[k - 1]);
            coeffs[n + k] = Complex64::new(0.5 * a, -0.5 * b);
            coeffs[n - k] = Complex64::new(0.5 * a, 0.5 * b);
        }
        LaurentPoly { degree: n, coeffs }
    }
}

/// Double-double coefficients; `sin[0]` is an unused zero so both vectors
/// are indexed by harmonic.
struct Wide {
    cos: Vec<TwoFloat>,
    sin: Vec<TwoFloat>,
}

impl Wide {
    fn multiply(&self, other: &TrigPoly) -> Wide {
        let n = self.cos.len() - 1;
        let m = other.degree();
        let zero = TwoFloat::from(0.0);
        let mut cos = vec![zero; n + m + 1];
        let mut sin = vec![zero; n + m + 1];
        for j in 0..=n {
            let (aj, bj) = (self.cos[j], self.sin[j]);
            for k in 0..=m {
                let (ak, bk) = (other.cos_coeff(k), other.sin_coeff(k));
                let (cc, ss) = (aj * ak, bj * bk);
                let (sc, cs) = (bj * ak, aj * bk);
                let diff = j.abs_diff(k);
                cos[diff] += (cc + ss) * 0.5;
                cos[j + k] += (cc - ss) * 0.5;
                sin[j + k] += (sc + cs) * 0.5;
                // sin((j−k)x) picks the sign of j − k
                if j > k {
                    sin[diff] += (sc - cs) * 0.5;
                } else if k > j {
                    sin[diff] += (cs - sc) * 0.5;
                }
            }
        }
        Wide { cos, sin }
    }
}

/// Shortest round-trip form, in exponent notation when plain decimals would
/// be long.
fn number(c: f64) -> String {
    if c != 0.0 && !(1e-4..1e16).contains(&c.abs()) {
        format!("{c:e}")
    } else {
        format!("{c}")
    }
}

impl fmt::Display for TrigPoly {
    /// Prints an expression that the CLI parser reads back to the same
    /// coefficients (shortest round-trip float formatting).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.cos[0] != 0.0 || self.degree() == 0 {
            terms.push(number(self.cos[0]));
        }
        for k in 1..=self.degree() {
            let arg = if k == 1 { "x".to_string() } else { format!("{k}*x") };
            if self.cos[k] != 0.0 {
                terms.push(format!("{}*cos({arg})", number(self.cos[k])));
            }
            if self.sin[k - 1] != 0.0 {
                terms.push(format!("{}*sin({arg})", number(self.sin[k - 1])));
            }
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        f.write_str(&out)
    }
}

/// `Σ_{k=−N}^{N} c_k z^k`, stored as `c_{−N}, …, c_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    /// Ordinary polynomial `Σ_{k≥0} c_k z^k` viewed as a Laurent polynomial
    /// with vanishing negative part.
    pub fn from_polynomial(poly: &[Complex64]) -> Self {
        let degree = poly.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree];
        if poly.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        } else {
            coeffs.extend_from_slice(poly);
        }
        LaurentPoly { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `c_k` for `−N ≤ k ≤ N`, zero outside.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let idx = k + self.degree as isize;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// `c_{−N}..c_N`, which is also the coefficient list (lowest first) of
    /// the ordinary polynomial `z^N · Σ c_k z^k`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficients `c_0..c_N` of the nonnegative part.
    pub fn polynomial_part(&self) -> &[Complex64] {
        &self.coeffs[self.degree..]
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc / z.powi(self.degree as i32)
    }

    pub fn evaluate_on_circle(&self, x: f64) -> Complex64 {
        self.evaluate(Complex64::from_polar(1.0, x))
    }

    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let n = self.degree as isize;
        (0..=n).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }
}

/// Fills `table` with `(cos kx, sin kx)` for `k = 0..=n`, by the same
/// recurrence as [`TrigPoly::evaluate`].
pub fn harmonics(x: f64, n: usize, table: &mut Vec<(f64, f64)>) {
    table.clear();
    table.push((1.0, 0.0));
    let (s1, c1) = x.sin_cos();
    let (mut ck, mut sk) = (1.0, 0.0);
    for k in 1..=n {
        if k % 16 == 0 {
            (sk, ck) = (k as f64 * x).sin_cos();
        } else {
            (ck, sk) = (ck * c1 - sk * s1, sk * c1 + ck * s1);
        }
        table.push((ck, sk));
    }
}
