//! Projective points, lines and maps on P(C^3) with canonical
//! floating-point representatives.
//!
//! A point representative has unit Euclidean norm and its first
//! significant component rotated to the positive real axis, which makes
//! serialization and dedup stable.  Comparison does not rely on the
//! canonical form: it uses the phase-invariant overlap |<a,b>|.

use crate::error::{GeomError, Result};
use crate::hermitian::boxtimes;
use crate::{cr, vec_dot, vec_norm, CMat3, CVec3, C, SIGNIFICANCE_THRESHOLD};

/// Canonicalize a homogeneous vector: unit norm, first significant
/// component real positive.  Idempotent down to the bit level: a vector
/// that already satisfies both conditions is returned unchanged.
fn canonicalize(v: &CVec3) -> Result<CVec3> {
    let n = vec_norm(v);
    if n == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let mut u = *v;
    // norm snap: if already unit to a few ulps, skip the division so a
    // second normalization is a no-op
    if (n - 1.0).abs() > 4.0 * f64::EPSILON {
        u /= cr(n);
    }
    let un = vec_norm(&u);
    let anchor = (0..3)
        .find(|&k| u[k].norm() >= SIGNIFICANCE_THRESHOLD * un)
        .expect("unit vector has a significant component");
    let a = u[anchor];
    if a.im != 0.0 || a.re <= 0.0 {
        let phase = a / cr(a.norm());
        u = u.map(|x| x * phase.conj());
        u[anchor] = cr(a.norm());
    }
    Ok(u)
}

/// Point of the complex projective plane with a canonical representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint {
    rep: CVec3,
}

impl ProjPoint {
    pub fn new(v: &CVec3) -> Result<ProjPoint> {
        Ok(ProjPoint {
            rep: canonicalize(v)?,
        })
    }

    /// Canonical unit-norm representative.
    pub fn rep(&self) -> &CVec3 {
        &self.rep
    }

    /// Phase-invariant comparison: unit representatives of the same ray
    /// have overlap |<a,b>| = 1.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        vec_dot(&self.rep, &other.rep).norm() >= 1.0 - tol
    }

    /// Convenience constructor from affine coordinates [z1 : z2 : 1].
    pub fn from_affine(z1: C, z2: C) -> ProjPoint {
        ProjPoint::new(&CVec3::new(z1, z2, cr(1.0))).expect("affine vector is nonzero")
    }
}

/// Projective line, stored by its canonicalized coefficient vector:
/// the line is { [z] : a1 z1 + a2 z2 + a3 z3 = 0 }.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjLine {
    coeffs: CVec3,
}

impl ProjLine {
    pub fn from_coeffs(v: &CVec3) -> Result<ProjLine> {
        Ok(ProjLine {
            coeffs: canonicalize(v)?,
        })
    }

    pub fn coeffs(&self) -> &CVec3 {
        &self.coeffs
    }

    /// Incidence residual |sum a_k z_k| for a unit representative.
    pub fn incidence(&self, p: &ProjPoint) -> f64 {
        let z = p.rep();
        (self.coeffs[0] * z[0] + self.coeffs[1] * z[1] + self.coeffs[2] * z[2]).norm()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.incidence(p) <= tol
    }

    pub fn approx_eq(&self, other: &ProjLine, tol: f64) -> bool {
        vec_dot(&self.coeffs, &other.coeffs).norm() >= 1.0 - tol
    }
}

/// Line through two distinct points.  The coefficient vector is the
/// form-1 cross product of the representatives, conjugated back into
/// incidence coordinates.
pub fn line_through(p: &ProjPoint, q: &ProjPoint, tol: f64) -> Result<ProjLine> {
    let x = boxtimes(crate::hermitian::FormTag::Form1, p.rep(), q.rep());
    // <x,p>_1 = 0 means conj(x1) p1 + conj(x2) p2 - conj(x3) p3 = 0
    let coeffs = CVec3::new(x[0].conj(), x[1].conj(), -x[2].conj());
    if vec_norm(&coeffs) <= tol {
        return Err(GeomError::CoincidentPoints {
            context: "line through equal points".into(),
        });
    }
    ProjLine::from_coeffs(&coeffs)
}

/// Projective transformation with determinant normalized to 1 through
/// the principal cube root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjMap {
    mat: CMat3,
}

impl ProjMap {
    pub fn new(m: &CMat3) -> Result<ProjMap> {
        let det = m.determinant();
        let scale = m.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
        if det.norm() <= 1e-12 * scale.powi(3).max(f64::MIN_POSITIVE) {
            return Err(GeomError::SingularMatrix {
                context: "projective map".into(),
            });
        }
        Ok(ProjMap {
            mat: crate::hermitian::unit_determinant_lift(m)?,
        })
    }

    pub fn identity() -> ProjMap {
        ProjMap {
            mat: CMat3::identity(),
        }
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.mat
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&(self.mat * p.rep())).expect("invertible map of nonzero vector")
    }

    pub fn apply_vec(&self, v: &CVec3) -> CVec3 {
        self.mat * v
    }

    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        ProjMap::new(&(self.mat * other.mat)).expect("product of invertibles")
    }

    pub fn inverse(&self) -> ProjMap {
        ProjMap::new(&self.mat.try_inverse().expect("determinant-1 matrix")).expect("inverse")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn pt(a: f64, b: f64, cc: f64) -> ProjPoint {
        ProjPoint::new(&CVec3::new(cr(a), cr(b), cr(cc))).unwrap()
    }

    #[test]
    fn canonical_rep_has_unit_norm_and_positive_anchor() {
        let p = ProjPoint::new(&CVec3::new(c(0.0, 2.0), c(1.0, 1.0), cr(0.5))).unwrap();
        assert!((vec_norm(p.rep()) - 1.0).abs() < 1e-14);
        assert!(p.rep()[0].im.abs() < 1e-15);
        assert!(p.rep()[0].re > 0.0);
    }

    #[test]
    fn normalization_is_bit_idempotent() {
        let raw = CVec3::new(c(0.3, -1.7), c(2.2, 0.4), c(-0.9, 0.6));
        let once = canonicalize(&raw).unwrap();
        let twice = canonicalize(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn tiny_leading_component_is_skipped_as_anchor() {
        let p = ProjPoint::new(&CVec3::new(c(1e-14, 1e-14), c(0.0, 3.0), cr(1.0))).unwrap();
        // anchor must be the second component
        assert!(p.rep()[1].im.abs() < 1e-15);
        assert!(p.rep()[1].re > 0.0);
    }

    #[test]
    fn equality_is_phase_invariant() {
        let v = CVec3::new(c(0.2, 0.9), c(-1.1, 0.3), c(0.5, -0.7));
        let a = ProjPoint::new(&v).unwrap();
        let b = ProjPoint::new(&v.map(|x| x * c(-0.6, 0.8))).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
        let d = pt(1.0, 0.0, 0.0);
        assert!(!a.approx_eq(&d, 1e-6));
    }

    #[test]
    fn line_through_standard_pairs() {
        let l = line_through(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0), 1e-12).unwrap();
        let expect = ProjLine::from_coeffs(&CVec3::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
        assert!(l.approx_eq(&expect, 1e-12), "z3 = 0 expected");

        let l2 = line_through(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 0.0), 1e-12).unwrap();
        let expect2 = ProjLine::from_coeffs(&CVec3::new(cr(0.0), cr(1.0), cr(0.0))).unwrap();
        assert!(l2.approx_eq(&expect2, 1e-12), "z2 = 0 expected");
    }

    #[test]
    fn line_through_coincident_points_fails() {
        let p = pt(1.0, 2.0, 3.0);
        assert!(matches!(
            line_through(&p, &p, 1e-12),
            Err(GeomError::CoincidentPoints { .. })
        ));
    }

    #[test]
    fn line_contains_its_defining_points() {
        let p = ProjPoint::new(&CVec3::new(c(1.0, 0.4), c(-0.2, 0.8), cr(0.7))).unwrap();
        let q = ProjPoint::new(&CVec3::new(c(-0.5, 1.2), c(0.9, 0.1), c(0.3, -0.6))).unwrap();
        let l = line_through(&p, &q, 1e-12).unwrap();
        assert!(l.contains(&p, 1e-12));
        assert!(l.contains(&q, 1e-12));
    }

    #[test]
    fn map_normalizes_determinant_and_acts() {
        let m = CMat3::from_diagonal(&CVec3::new(cr(0.5), cr(1.0), cr(2.0)));
        let g = ProjMap::new(&m).unwrap();
        assert!((g.matrix().determinant() - cr(1.0)).norm() < 1e-13);
        let fixed = pt(0.0, 0.0, 1.0);
        assert!(g.apply(&fixed).approx_eq(&fixed, 1e-12));
        let moved = pt(1.0, 0.0, 1.0);
        assert!(!g.apply(&moved).approx_eq(&moved, 1e-6));
    }

    #[test]
    fn map_rejects_singular_matrix() {
        let mut m = CMat3::identity();
        m[(2, 2)] = cr(0.0);
        assert!(matches!(
            ProjMap::new(&m),
            Err(GeomError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn composition_matches_pointwise_action() {
        let a = ProjMap::new(&CMat3::new(
            cr(1.0),
            c(0.2, 0.1),
            cr(0.0),
            cr(0.0),
            cr(1.0),
            c(-0.3, 0.4),
            cr(0.1),
            cr(0.0),
            cr(1.0),
        ))
        .unwrap();
        let b = ProjMap::new(&CMat3::from_diagonal(&CVec3::new(cr(2.0), cr(1.0), cr(0.5))))
            .unwrap();
        let p = ProjPoint::new(&CVec3::new(c(0.3, 0.9), c(1.0, -0.2), cr(0.4))).unwrap();
        let lhs = a.compose(&b).apply(&p);
        let rhs = a.apply(&b.apply(&p));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn inverse_undoes_the_action() {
        let g = ProjMap::new(&CMat3::new(
            c(1.0, 0.5),
            cr(0.2),
            cr(0.0),
            cr(0.0),
            c(0.8, -0.1),
            cr(0.3),
            cr(0.4),
            cr(0.0),
            c(1.2, 0.2),
        ))
        .unwrap();
        let p = ProjPoint::new(&CVec3::new(c(0.3, -0.8), c(0.6, 0.2), cr(1.0))).unwrap();
        assert!(g.inverse().apply(&g.apply(&p)).approx_eq(&p, 1e-11));
    }
}
