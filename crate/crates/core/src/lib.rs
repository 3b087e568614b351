//! Numerical geometry kernel for the complex hyperbolic plane and its
//! boundary 3-sphere.
//!
//! The crate works in homogeneous coordinates on C^3 equipped with a
//! Hermitian form of signature (2,1).  Two standard forms are supported
//! (a ball-model form and a Siegel-domain form, exchanged by a Cayley
//! transform) and every operation is explicit about which form it uses.
//! On top of the linear layer sit projective points, lines and maps, the
//! Heisenberg chart of the boundary, chains and R-circles, Legendrian
//! curve tests, loxodromic normal forms, and a limit-set sampler with a
//! chain / R-circle classifier.

pub mod boundary;
pub mod chains;
pub mod curves;
pub mod error;
pub mod fitting;
pub mod hermitian;
pub mod isometry;
pub mod limitset;
pub mod linalg;
pub mod projective;
pub mod sampling;
pub mod schema;
pub mod verify;

pub use error::{GeomError, Result};

use num_complex::Complex;

/// Complex scalar used throughout the kernel.
pub type C = Complex<f64>;
/// Homogeneous coordinate vector on C^3.
pub type CVec3 = nalgebra::Vector3<C>;
/// Complex 3x3 matrix (isometry lifts, form Gram matrices).
pub type CMat3 = nalgebra::Matrix3<C>;

/// Default relative tolerance for sign tests, null tests and projective
/// comparisons.  Thresholds scale with the Euclidean norms of the
/// operands, so this is dimensionless.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Components smaller than this fraction of the vector norm are treated
/// as zero when a canonical projective representative picks its phase
/// anchor.
pub const SIGNIFICANCE_THRESHOLD: f64 = 1e-8;

pub(crate) fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub(crate) fn cr(re: f64) -> C {
    Complex::new(re, 0.0)
}

/// Euclidean norm of a homogeneous vector.
pub fn vec_norm(v: &CVec3) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// Euclidean inner product sum_k v_k * conj(w_k) (no form involved).
pub fn vec_dot(v: &CVec3, w: &CVec3) -> C {
    v[0] * w[0].conj() + v[1] * w[1].conj() + v[2] * w[2].conj()
}
