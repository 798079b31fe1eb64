//! Ideal theory of the ring of real-analytic functions on the unit circle,
//! made computable through trigonometric polynomials.
//!
//! Nonzero ideals are divisors on the circle; an ideal is principal exactly
//! when its divisor has even degree, so the class group is `ℤ/2`. Every claim
//! is checked numerically by locating zeros of trigonometric polynomials.

pub mod divisor;
pub mod expr;
pub mod factorization;
pub mod ideals;
pub mod oracle;
pub mod random;
pub mod roots;
pub mod trigpoly;
pub mod verify;

pub use divisor::{CirclePoint, Divisor, DivisorEntry, Z2};
pub use expr::{parse_points, parse_trigpoly, ParseError};
pub use factorization::{enumerate_factorizations, is_half_factorial, Factorization, Irreducible};
pub use ideals::{class_mul, GeneratorSet, IdealClass, IdealError, IdealR};
pub use roots::{circle_divisor, sign_changes, zero_order, RootConfig, RootError};
pub use trigpoly::{LaurentPoly, TrigPoly};
