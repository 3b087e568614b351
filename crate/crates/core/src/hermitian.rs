//! Hermitian forms of signature (2,1) on C^3, their sign classes, the
//! Hermitian cross product and the Cayley transform between the two
//! standard models.
//!
//! Form 1 (ball model):   <z,w> = z1*conj(w1) + z2*conj(w2) - z3*conj(w3)
//! Form 2 (Siegel model): <z,w> = z1*conj(w3) + z2*conj(w2) + z3*conj(w1)

use crate::error::{GeomError, Result};
use crate::{c, cr, vec_norm, CMat3, CVec3, C, DEFAULT_TOL};

/// Which of the two standard signature-(2,1) forms an object lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormTag {
    /// Ball model: diag(1, 1, -1).
    Form1,
    /// Siegel model: antidiagonal(1, 1, 1).
    Form2,
}

impl FormTag {
    /// Gram matrix J of the form, so that <z,w> = w* J z.
    pub fn gram(self) -> CMat3 {
        let one = cr(1.0);
        let zero = cr(0.0);
        match self {
            FormTag::Form1 => CMat3::new(one, zero, zero, zero, one, zero, zero, zero, -one),
            FormTag::Form2 => CMat3::new(zero, zero, one, zero, one, zero, one, zero, zero),
        }
    }

    /// The other model.
    pub fn other(self) -> FormTag {
        match self {
            FormTag::Form1 => FormTag::Form2,
            FormTag::Form2 => FormTag::Form1,
        }
    }
}

/// Sign of <z,z>: negative vectors project to the complex hyperbolic
/// plane, null vectors to its boundary, positive vectors to the outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    Negative,
    Null,
    Positive,
}

/// Hermitian inner product, conjugate-linear in the second argument.
pub fn herm_inner(form: FormTag, z: &CVec3, w: &CVec3) -> C {
    match form {
        FormTag::Form1 => z[0] * w[0].conj() + z[1] * w[1].conj() - z[2] * w[2].conj(),
        FormTag::Form2 => z[0] * w[2].conj() + z[1] * w[1].conj() + z[2] * w[0].conj(),
    }
}

/// Real self-pairing <z,z> (the imaginary part is rounding noise).
pub fn self_pairing(form: FormTag, z: &CVec3) -> f64 {
    herm_inner(form, z, z).re
}

/// Classify the sign of <z,z> relative to the squared Euclidean norm:
/// |<z,z>| <= tol * |z|^2 counts as null.  The zero vector is rejected.
pub fn sign_class(form: FormTag, z: &CVec3, tol: f64) -> Result<SignClass> {
    let n2 = vec_norm(z).powi(2);
    if n2 == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let s = self_pairing(form, z);
    if s.abs() <= tol * n2 {
        Ok(SignClass::Null)
    } else if s < 0.0 {
        Ok(SignClass::Negative)
    } else {
        Ok(SignClass::Positive)
    }
}

/// Hermitian cross product: the unique (up to scale) vector orthogonal
/// to both arguments under the given form, conjugate-bilinear in both.
///
/// Form 1: formal determinant of [i j k; conj(z1) conj(z2) -conj(z3); conj(w1) conj(w2) -conj(w3)].
/// Form 2: formal determinant of [i j k; conj(z3) conj(z2) conj(z1); conj(w3) conj(w2) conj(w1)].
pub fn boxtimes(form: FormTag, z: &CVec3, w: &CVec3) -> CVec3 {
    match form {
        FormTag::Form1 => CVec3::new(
            (z[2] * w[1] - z[1] * w[2]).conj(),
            (z[0] * w[2] - z[2] * w[0]).conj(),
            (z[0] * w[1] - z[1] * w[0]).conj(),
        ),
        FormTag::Form2 => CVec3::new(
            (z[1] * w[0] - z[0] * w[1]).conj(),
            (z[0] * w[2] - z[2] * w[0]).conj(),
            (z[2] * w[1] - z[1] * w[2]).conj(),
        ),
    }
}

/// Cayley involution C with <Cz, Cw>_1 = <z, w>_2 and C*C = I.
pub fn cayley_matrix() -> CMat3 {
    let s = 1.0 / 2.0f64.sqrt();
    CMat3::new(
        cr(s),
        cr(0.0),
        cr(s),
        cr(0.0),
        cr(1.0),
        cr(0.0),
        cr(s),
        cr(0.0),
        cr(-s),
    )
}

/// Direction of a model conversion.  The Cayley matrix is an involution,
/// so both directions multiply by the same matrix; the tag records which
/// form the input is expected to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyDirection {
    SiegelToBall,
    BallToSiegel,
}

/// Apply the Cayley transform to a homogeneous vector.
pub fn cayley_apply(z: &CVec3, _direction: CayleyDirection) -> CVec3 {
    cayley_matrix() * z
}

/// Fixed probe set spanning the form pairing; unitarity is certified by
/// comparing <Mz, Mw> with <z, w> over all ordered pairs of probes.
fn probe_basis() -> [CVec3; 9] {
    let e1 = CVec3::new(cr(1.0), cr(0.0), cr(0.0));
    let e2 = CVec3::new(cr(0.0), cr(1.0), cr(0.0));
    let e3 = CVec3::new(cr(0.0), cr(0.0), cr(1.0));
    let i = c(0.0, 1.0);
    [
        e1,
        e2,
        e3,
        e1 + e2,
        e2 + e3,
        e1 + e3,
        e1 + e2.map(|x| x * i),
        e2 + e3.map(|x| x * i),
        e1 + e3.map(|x| x * i),
    ]
}

/// Largest pairing defect max |<Mz,Mw> - <z,w>| over the probe pairs.
pub fn unitarity_defect(form: FormTag, m: &CMat3) -> f64 {
    let probes = probe_basis();
    let mut worst = 0.0f64;
    for z in &probes {
        for w in &probes {
            let d = (herm_inner(form, &(m * z), &(m * w)) - herm_inner(form, z, w)).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Check that M preserves the form to within tol on the probe basis.
/// A numerically singular M is rejected.
pub fn is_form_unitary(form: FormTag, m: &CMat3, tol: f64) -> Result<bool> {
    let scale = m.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
    if m.determinant().norm() <= 1e-12 * scale.powi(3).max(f64::MIN_POSITIVE) {
        return Err(GeomError::SingularMatrix {
            context: "unitarity probe".into(),
        });
    }
    Ok(unitarity_defect(form, m) <= tol)
}

/// Rescale a matrix by the principal cube root of its determinant so the
/// result has determinant 1.  For a form-unitary M the determinant has
/// unit modulus, so the rescaled matrix is still form-unitary.
pub fn unit_determinant_lift(m: &CMat3) -> Result<CMat3> {
    let det = m.determinant();
    if det.norm() == 0.0 {
        return Err(GeomError::SingularMatrix {
            context: "determinant normalization".into(),
        });
    }
    // principal cube root: modulus^(1/3) * exp(i*arg/3), arg in (-pi, pi]
    let root = C::from_polar(det.norm().powf(1.0 / 3.0), det.arg() / 3.0);
    Ok(m / root)
}

/// Relative null test convenience used by boundary constructors.
pub fn null_residual(form: FormTag, z: &CVec3) -> f64 {
    let n2 = vec_norm(z).powi(2);
    if n2 == 0.0 {
        return f64::INFINITY;
    }
    self_pairing(form, z).abs() / n2
}

/// Default sign classification at the kernel tolerance.
pub fn sign_class_default(form: FormTag, z: &CVec3) -> Result<SignClass> {
    sign_class(form, z, DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec_dot;

    const EPS: f64 = 1e-12;

    fn e(k: usize) -> CVec3 {
        let mut v = CVec3::new(cr(0.0), cr(0.0), cr(0.0));
        v[k] = cr(1.0);
        v
    }

    #[test]
    fn inner_form1_negative_basis_vector() {
        let z = e(2);
        let got = herm_inner(FormTag::Form1, &z, &z);
        assert!((got - cr(-1.0)).norm() < EPS, "got {got}");
    }

    #[test]
    fn inner_form2_isotropic_first_basis_vector() {
        let z = e(0);
        assert!(herm_inner(FormTag::Form2, &z, &z).norm() < EPS);
    }

    #[test]
    fn inner_form2_mixed_pair() {
        let z = e(2);
        let w = CVec3::new(c(0.0, 1.0), cr(0.0), cr(1.0));
        let got = herm_inner(FormTag::Form2, &z, &w);
        assert!((got - c(0.0, -1.0)).norm() < EPS, "got {got}");
    }

    #[test]
    fn sign_classes_of_model_vectors() {
        assert_eq!(
            sign_class(FormTag::Form1, &e(2), 1e-10).unwrap(),
            SignClass::Negative
        );
        assert_eq!(
            sign_class(FormTag::Form1, &e(0), 1e-10).unwrap(),
            SignClass::Positive
        );
        let z = CVec3::new(cr(-1.0), cr(2.0f64.sqrt()), cr(1.0));
        assert_eq!(
            sign_class(FormTag::Form2, &z, 1e-10).unwrap(),
            SignClass::Null
        );
    }

    #[test]
    fn sign_class_rejects_zero_vector() {
        let z = CVec3::new(cr(0.0), cr(0.0), cr(0.0));
        assert_eq!(
            sign_class(FormTag::Form1, &z, 1e-10),
            Err(GeomError::ZeroVector)
        );
    }

    #[test]
    fn boxtimes_form1_of_first_two_basis_vectors() {
        let got = boxtimes(FormTag::Form1, &e(0), &e(1));
        assert!((got - e(2)).norm() < EPS, "got {got}");
    }

    #[test]
    fn boxtimes_vanishes_on_dependent_vectors() {
        let z = CVec3::new(c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 3.0));
        let w = z.map(|x| x * c(2.0, -1.0));
        assert!(vec_norm(&boxtimes(FormTag::Form2, &z, &w)) < EPS);
    }

    #[test]
    fn boxtimes_form2_vertical_tangent() {
        // lift of the vertical boundary curve at t = 1 against its velocity
        let z = CVec3::new(c(0.0, 1.0), cr(0.0), cr(1.0));
        let w = CVec3::new(c(0.0, 1.0), cr(0.0), cr(0.0));
        let got = boxtimes(FormTag::Form2, &z, &w);
        assert!((got - CVec3::new(cr(0.0), c(0.0, 1.0), cr(0.0))).norm() < EPS);
    }

    #[test]
    fn boxtimes_is_form_orthogonal_to_both_arguments() {
        let z = CVec3::new(c(1.0, -0.3), c(0.2, 0.7), c(-1.1, 0.4));
        let w = CVec3::new(c(0.6, 0.1), c(-0.9, 0.2), c(0.3, -0.8));
        for form in [FormTag::Form1, FormTag::Form2] {
            let x = boxtimes(form, &z, &w);
            assert!(herm_inner(form, &x, &z).norm() < EPS);
            assert!(herm_inner(form, &x, &w).norm() < EPS);
        }
    }

    #[test]
    fn boxtimes_lagrange_identity() {
        // <z x w, z x w> = <w,z><z,w> - <w,w><z,z>
        let z = CVec3::new(c(0.4, -1.3), c(1.2, 0.7), c(-0.1, 0.9));
        let w = CVec3::new(c(-0.6, 0.5), c(0.9, -0.2), c(1.3, 0.8));
        for form in [FormTag::Form1, FormTag::Form2] {
            let x = boxtimes(form, &z, &w);
            let lhs = herm_inner(form, &x, &x);
            let rhs = herm_inner(form, &w, &z) * herm_inner(form, &z, &w)
                - herm_inner(form, &w, &w) * herm_inner(form, &z, &z);
            assert!((lhs - rhs).norm() < 1e-10, "lhs {lhs} rhs {rhs}");
        }
    }

    #[test]
    fn cayley_maps_e1_to_diagonal_null_vector() {
        let got = cayley_apply(&e(0), CayleyDirection::SiegelToBall);
        let s = 1.0 / 2.0f64.sqrt();
        assert!((got - CVec3::new(cr(s), cr(0.0), cr(s))).norm() < EPS);
        // form-2 null goes to form-1 null
        assert!(self_pairing(FormTag::Form1, &got).abs() < EPS);
    }

    #[test]
    fn cayley_is_an_involution() {
        let c2 = cayley_matrix() * cayley_matrix();
        let diff = c2 - CMat3::identity();
        assert!(diff.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn cayley_intertwines_the_two_forms() {
        let z = CVec3::new(c(0.3, 1.1), c(-0.7, 0.2), c(1.4, -0.6));
        let w = CVec3::new(c(-1.2, 0.4), c(0.8, -0.9), c(0.1, 0.5));
        let lhs = herm_inner(
            FormTag::Form1,
            &cayley_apply(&z, CayleyDirection::SiegelToBall),
            &cayley_apply(&w, CayleyDirection::SiegelToBall),
        );
        let rhs = herm_inner(FormTag::Form2, &z, &w);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn unitarity_of_diagonal_form2_matrices() {
        // diagonal oracle for form 2: g1 * conj(g3) = 1 and |g2| = 1
        let good = CMat3::from_diagonal(&CVec3::new(cr(0.5), cr(1.0), cr(2.0)));
        assert!(is_form_unitary(FormTag::Form2, &good, 1e-12).unwrap());
        let bad = CMat3::from_diagonal(&CVec3::new(cr(2.0), cr(1.0), cr(2.0)));
        assert!(!is_form_unitary(FormTag::Form2, &bad, 1e-12).unwrap());
    }

    #[test]
    fn unitarity_rejects_singular_matrix() {
        let m = CMat3::zeros();
        assert!(matches!(
            is_form_unitary(FormTag::Form1, &m, 1e-12),
            Err(GeomError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn unit_determinant_lift_is_idempotent_on_unimodular_input() {
        let m = CMat3::from_diagonal(&CVec3::new(cr(0.5), cr(1.0), cr(2.0)));
        let n = unit_determinant_lift(&m).unwrap();
        assert!((n.determinant() - cr(1.0)).norm() < 1e-14);
        let n2 = unit_determinant_lift(&n).unwrap();
        assert!((n - n2).iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-14);
    }

    #[test]
    fn boxtimes_skew_symmetry() {
        let z = CVec3::new(c(1.0, 0.5), c(-0.2, 0.8), c(0.9, -0.4));
        let w = CVec3::new(c(0.3, -0.7), c(1.1, 0.6), c(-0.5, 0.2));
        for form in [FormTag::Form1, FormTag::Form2] {
            let a = boxtimes(form, &z, &w);
            let b = boxtimes(form, &w, &z);
            assert!((a + b).iter().map(|x| x.norm()).fold(0.0, f64::max) < EPS);
        }
    }

    #[test]
    fn euclidean_dot_sanity() {
        let z = CVec3::new(c(1.0, 1.0), cr(0.0), cr(0.0));
        assert!((vec_dot(&z, &z) - cr(2.0)).norm() < EPS);
    }
}
