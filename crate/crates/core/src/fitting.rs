//! Least-squares diagnostics used by the classifiers: best-fit chain
//! through a point cloud, horizontal-line fit in the Heisenberg chart,
//! and sampled Cartan-invariant statistics.

use crate::boundary::{BoundaryPoint, HeisenbergPoint};
use crate::chains::cartan_invariant;
use crate::error::{GeomError, Result};
use crate::hermitian::{sign_class, FormTag, SignClass};
use crate::linalg::hermitian_eigen3;
use crate::projective::ProjPoint;
use crate::{vec_norm, CMat3, CVec3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Best chain through a cloud of null vectors in the least-squares
/// sense: the polar minimizing the summed squared pairings.
#[derive(Debug, Clone)]
pub struct ChainFit {
    pub polar: ProjPoint,
    /// Smallest eigenvalue of the pairing scatter over its trace; zero
    /// for a cloud lying exactly on a chain.
    pub residual: f64,
    /// Sign class of the fitted polar.  A genuine chain has a positive
    /// polar; a null or negative fit means no chain passes nearby.
    pub polar_class: SignClass,
}

/// Fit a chain to null vectors.  Each rep is normalized, the rank-one
/// scatter of J z is accumulated, and the smallest eigenpair is taken.
pub fn fit_chain(form: FormTag, reps: &[CVec3]) -> Result<ChainFit> {
    if reps.len() < 2 {
        return Err(GeomError::InvalidInput(format!(
            "chain fit needs at least 2 points, got {}",
            reps.len()
        )));
    }
    let j = form.gram();
    let mut scatter = CMat3::zeros();
    for z in reps {
        let n = vec_norm(z);
        if n == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        let jz = j * (z / crate::cr(n));
        scatter += jz * jz.adjoint();
    }
    let (vals, vecs) = hermitian_eigen3(&scatter);
    let trace = vals[0] + vals[1] + vals[2];
    let polar_vec: CVec3 = vecs.column(0).into_owned();
    let polar = ProjPoint::new(&polar_vec)?;
    let polar_class = sign_class(form, polar.rep(), crate::DEFAULT_TOL)?;
    Ok(ChainFit {
        polar,
        residual: if trace > 0.0 { (vals[0] / trace).max(0.0) } else { 0.0 },
        polar_class,
    })
}

/// Horizontal-line fit through the chart origin.  Weights 1/(1+|zeta|^2)
/// keep far points from dominating; points at infinity are consistent
/// with every line through the origin and are skipped.
#[derive(Debug, Clone, Copy)]
pub struct HorizontalLineFit {
    /// Largest weighted |v| over the cloud.
    pub v_residual: f64,
    /// Smallest eigenvalue of the weighted planar scatter over its
    /// trace; zero for an exactly collinear cloud through the origin.
    pub collinearity: f64,
    /// Direction of the fitted line, in [0, pi).
    pub direction: f64,
}

pub fn fit_horizontal_line(points: &[HeisenbergPoint]) -> HorizontalLineFit {
    let mut v_residual = 0.0f64;
    // symmetric 2x2 scatter of weighted chart positions
    let (mut sxx, mut sxy, mut syy) = (0.0f64, 0.0f64, 0.0f64);
    for p in points {
        let HeisenbergPoint::Finite { zeta, v } = p else {
            continue;
        };
        let w = 1.0 / (1.0 + zeta.norm_sqr());
        v_residual = v_residual.max(v.abs() * w);
        let (x, y) = (zeta.re, zeta.im);
        sxx += w * x * x;
        sxy += w * x * y;
        syy += w * y * y;
    }
    let trace = sxx + syy;
    if trace <= f64::MIN_POSITIVE {
        // every finite point sits at the origin
        return HorizontalLineFit {
            v_residual,
            collinearity: 0.0,
            direction: 0.0,
        };
    }
    let half_gap = (((sxx - syy) / 2.0).powi(2) + sxy * sxy).sqrt();
    let lo = trace / 2.0 - half_gap;
    let hi = trace / 2.0 + half_gap;
    // eigenvector of the larger eigenvalue gives the line direction
    let direction = if half_gap <= f64::MIN_POSITIVE {
        0.0
    } else {
        (hi - sxx).atan2(sxy).rem_euclid(std::f64::consts::PI)
    };
    HorizontalLineFit {
        v_residual,
        collinearity: (lo / trace).max(0.0),
        direction,
    }
}

/// Absolute Cartan invariants of `count` random index triples, seeded
/// for reproducibility.  Degenerate triples are skipped, so the result
/// may be shorter than `count`.
pub fn cartan_samples(points: &[BoundaryPoint], count: usize, seed: u64) -> Vec<f64> {
    if points.len() < 3 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = rng.gen_range(0..points.len());
        let j = rng.gen_range(0..points.len());
        let k = rng.gen_range(0..points.len());
        if i == j || j == k || i == k {
            continue;
        }
        if let Ok(a) = cartan_invariant(&points[i], &points[j], &points[k], 1e-12) {
            out.push(a.abs());
        }
    }
    out
}
