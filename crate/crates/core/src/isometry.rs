//! Holomorphic isometries as form-unitary matrices: trichotomy
//! classification, boundary fixed points, and the diagonal normal form
//! of loxodromic maps with its exact chart multiplier.

use crate::boundary::{pair_to_standard, BoundaryPoint};
use crate::error::{GeomError, Result};
use crate::hermitian::{
    cayley_matrix, herm_inner, is_form_unitary, null_residual, self_pairing,
    unit_determinant_lift, FormTag,
};
use crate::linalg::{bilinear_cross, eigenvalues3, eigenvector3, rank3, rows3, Eigenvalue};
use crate::projective::ProjMap;
use crate::{cr, vec_dot, vec_norm, CMat3, CVec3, C};

/// Width of the unit-modulus band: eigenvalue moduli within it are
/// treated as 1, so nearly-elliptic maps are not called loxodromic.
pub const MODULUS_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryClass {
    /// Fixed eigenvalue moduli off 1: north-south boundary dynamics.
    Loxodromic,
    /// Unit moduli, diagonalizable: a fixed point inside or a fixed
    /// chain, no attraction.
    Elliptic,
    /// Unit moduli, non-diagonalizable: one boundary fixed point.
    Parabolic,
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Loxodromic => "loxodromic",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
        }
    }
}

/// Eigenvalues of the determinant-1 lift of a form-unitary matrix.
fn checked_eigenvalues(form: FormTag, m: &CMat3, tol: f64) -> Result<(CMat3, Vec<Eigenvalue>)> {
    if !is_form_unitary(form, m, tol)? {
        return Err(GeomError::NotUnitary {
            defect: crate::hermitian::unitarity_defect(form, m),
        });
    }
    let lift = unit_determinant_lift(m)?;
    let eigs = eigenvalues3(&lift);
    Ok((lift, eigs))
}

/// Trichotomy of a form-unitary matrix.  Loxodromic when some
/// eigenvalue modulus leaves the unit band; otherwise elliptic exactly
/// when every repeated eigenvalue has a full eigenspace.
pub fn classify_isometry(form: FormTag, m: &CMat3, tol: f64) -> Result<IsometryClass> {
    let (lift, eigs) = checked_eigenvalues(form, m, tol)?;
    let max_mod = eigs
        .iter()
        .map(|e| e.value.norm())
        .fold(0.0f64, f64::max);
    if max_mod > 1.0 + MODULUS_BAND {
        return Ok(IsometryClass::Loxodromic);
    }
    for e in &eigs {
        if e.multiplicity == 1 {
            continue;
        }
        let shifted = lift - CMat3::identity() * e.value;
        let geometric = 3 - rank3(&shifted, MODULUS_BAND);
        if geometric < e.multiplicity {
            return Ok(IsometryClass::Parabolic);
        }
    }
    Ok(IsometryClass::Elliptic)
}

/// Null directions of the form restricted to the plane spanned by two
/// vectors.  Zero results for a definite restriction, one for a
/// degenerate one, two representatives when the restriction is
/// indefinite (the plane then meets the cone in a circle).
fn plane_null_vectors(form: FormTag, k1: &CVec3, k2: &CVec3) -> Vec<CVec3> {
    let e1 = k1 / cr(vec_norm(k1));
    let raw2 = k2 - e1 * vec_dot(k2, &e1);
    let n2 = vec_norm(&raw2);
    if n2 <= 1e-10 {
        return Vec::new();
    }
    let e2 = raw2 / cr(n2);
    let a = self_pairing(form, &e1);
    let c = self_pairing(form, &e2);
    let b = herm_inner(form, &e1, &e2);
    let det = a * c - b.norm_sqr();
    let band = 1e-7;
    if det > band {
        return Vec::new();
    }
    if det.abs() <= band {
        // kernel of the restricted form, the more stable of two
        // equivalent expressions
        let (alpha, beta) = if a.abs() >= c.abs() {
            (b, cr(-a))
        } else {
            (cr(c), -b.conj())
        };
        let v = e1 * alpha + e2 * beta;
        return if vec_norm(&v) > 1e-10 { vec![v] } else { Vec::new() };
    }
    // indefinite restriction: two points of the null circle
    let s = (-det).sqrt();
    if a.abs() >= c.abs() && a.abs() > 1e-8 {
        [(s), (-s)]
            .iter()
            .map(|t| e1 * ((-b.conj() + cr(*t)) / cr(a)) + e2)
            .collect()
    } else if c.abs() > 1e-8 {
        [(s), (-s)]
            .iter()
            .map(|t| e1 + e2 * ((-b + cr(*t)) / cr(c)))
            .collect()
    } else {
        // both diagonal terms vanish: the basis vectors themselves are null
        vec![e1, e2]
    }
}

/// Null eigenvectors of a form-unitary matrix, reported as boundary
/// points: one per eigenvalue cluster, except that a cluster whose
/// whole eigenplane meets the cone (a pointwise fixed chain) yields two
/// representatives.
pub fn fixed_boundary_points(form: FormTag, m: &CMat3, tol: f64) -> Result<Vec<BoundaryPoint>> {
    let (lift, eigs) = checked_eigenvalues(form, m, tol)?;
    let mut out = Vec::new();
    for e in &eigs {
        let mut candidates = Vec::new();
        if let Some(v) = eigenvector3(&lift, e.value) {
            candidates.push(v);
        } else {
            // the shifted matrix has rank at most 1: its kernel is the
            // plane cut out by the largest row
            let shifted = lift - CMat3::identity() * e.value;
            let rows = rows3(&shifted);
            let r = rows
                .iter()
                .max_by(|x, y| {
                    vec_norm(x)
                        .partial_cmp(&vec_norm(y))
                        .expect("finite row norms")
                })
                .expect("three rows");
            if vec_norm(r) > 1e-10 {
                let axes = [
                    CVec3::new(cr(1.0), cr(0.0), cr(0.0)),
                    CVec3::new(cr(0.0), cr(1.0), cr(0.0)),
                    CVec3::new(cr(0.0), cr(0.0), cr(1.0)),
                ];
                let k1 = axes
                    .iter()
                    .map(|a| bilinear_cross(r, a))
                    .max_by(|x, y| {
                        vec_norm(x)
                            .partial_cmp(&vec_norm(y))
                            .expect("finite norms")
                    })
                    .expect("three axes");
                let k2 = bilinear_cross(r, &k1);
                if vec_norm(&k1) > 1e-10 && vec_norm(&k2) > 1e-10 {
                    candidates.extend(plane_null_vectors(form, &k1, &k2));
                }
            }
        }
        for v in candidates {
            if null_residual(form, &v) <= 1e-7 {
                let b = BoundaryPoint::from_vec(form, &v, 1e-6)?;
                if !out.iter().any(|p: &BoundaryPoint| p.approx_eq(&b, 1e-8)) {
                    out.push(b);
                }
            }
        }
    }
    Ok(out)
}

/// Loxodromic map brought to diagonal shape in the second model.
#[derive(Debug, Clone)]
pub struct LoxodromicData {
    /// Complex chart multiplier of one application at the attracting
    /// end: zeta scales by sqrt_multiplier, v by its squared modulus.
    pub sqrt_multiplier: C,
    /// Squared multiplier; |lambda| < 1, contraction toward origin.
    pub lambda: C,
    pub attracting: BoundaryPoint,
    pub repelling: BoundaryPoint,
    /// Second-model unitary (pre-composed with the interchange of
    /// models when the input lives in the first one) carrying
    /// attracting to the origin and repelling to infinity.
    pub conjugator: ProjMap,
    /// Conjugated matrix, diagonal up to roundoff.
    pub diagonal: CMat3,
}

/// Diagonalize a loxodromic map.  The conjugated matrix is
/// diag(a, b, 1 / conj(a)) with |b| = 1, and the chart multiplier
/// b conj(a) is read off exactly, with no root-taking ambiguity.
pub fn normalize_loxodromic(form: FormTag, m: &CMat3, tol: f64) -> Result<LoxodromicData> {
    let (lift, eigs) = checked_eigenvalues(form, m, tol)?;
    if eigs.len() < 2 {
        return Err(GeomError::NotLoxodromic {
            context: "single eigenvalue cluster".into(),
        });
    }
    let mut by_mod: Vec<&Eigenvalue> = eigs.iter().collect();
    by_mod.sort_by(|a, b| {
        a.value
            .norm()
            .partial_cmp(&b.value.norm())
            .expect("finite moduli")
    });
    let small = by_mod[0].value;
    let large = by_mod[by_mod.len() - 1].value;
    if large.norm() <= 1.0 + MODULUS_BAND {
        return Err(GeomError::NotLoxodromic {
            context: format!("largest eigenvalue modulus {:.12} inside the unit band", large.norm()),
        });
    }
    let att_vec = eigenvector3(&lift, large).ok_or(GeomError::SingularMatrix {
        context: "attracting eigenvector".into(),
    })?;
    let rep_vec = eigenvector3(&lift, small).ok_or(GeomError::SingularMatrix {
        context: "repelling eigenvector".into(),
    })?;
    let attracting = BoundaryPoint::from_vec(form, &att_vec, 1e-6)?;
    let repelling = BoundaryPoint::from_vec(form, &rep_vec, 1e-6)?;

    let base = pair_to_standard(&attracting, &repelling)?;
    let conjugator = match form {
        FormTag::Form2 => base,
        FormTag::Form1 => base.compose(&ProjMap::new(&cayley_matrix())?),
    };
    let diagonal = conjugator.matrix() * m * conjugator.inverse().matrix();
    // chart action of diag(d1, d2, d3) on zeta is multiplication by
    // d2/d3: a scale-free ratio, exact with no root-taking ambiguity
    let sqrt_multiplier = diagonal[(1, 1)] / diagonal[(2, 2)];
    let lambda = sqrt_multiplier * sqrt_multiplier;
    Ok(LoxodromicData {
        sqrt_multiplier,
        lambda,
        attracting,
        repelling,
        conjugator,
        diagonal,
    })
}

/// Forward orbit of a boundary point: start, g start, ..., g^n start.
pub fn iterate_on_boundary(
    g: &ProjMap,
    start: &BoundaryPoint,
    count: usize,
) -> Result<Vec<BoundaryPoint>> {
    let mut out = Vec::with_capacity(count + 1);
    out.push(*start);
    let mut current = *start;
    for _ in 0..count {
        let next = BoundaryPoint::new(current.form(), g.apply(current.point()), 1e-6)?;
        out.push(next);
        current = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjPoint;
    use crate::{c, cr, CVec3};

    fn diag(d1: C, d2: C, d3: C) -> CMat3 {
        CMat3::from_diagonal(&CVec3::new(d1, d2, d3))
    }

    #[test]
    fn diagonal_dilation_is_loxodromic() {
        let g = diag(cr(0.5), cr(1.0), cr(2.0));
        assert_eq!(
            classify_isometry(FormTag::Form2, &g, 1e-10).unwrap(),
            IsometryClass::Loxodromic
        );
    }

    #[test]
    fn unit_diagonal_is_elliptic() {
        let g = diag(c(0.0, 1.0), cr(1.0), c(0.0, 1.0));
        assert_eq!(
            classify_isometry(FormTag::Form2, &g, 1e-10).unwrap(),
            IsometryClass::Elliptic
        );
    }

    #[test]
    fn vertical_translation_is_parabolic() {
        let mut g = CMat3::identity();
        g[(0, 2)] = c(0.0, 1.0);
        assert_eq!(
            classify_isometry(FormTag::Form2, &g, 1e-10).unwrap(),
            IsometryClass::Parabolic
        );
    }

    #[test]
    fn identity_is_elliptic() {
        assert_eq!(
            classify_isometry(FormTag::Form2, &CMat3::identity(), 1e-10).unwrap(),
            IsometryClass::Elliptic
        );
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let mut g = CMat3::identity();
        g[(0, 0)] = cr(2.0);
        assert!(matches!(
            classify_isometry(FormTag::Form2, &g, 1e-10),
            Err(GeomError::NotUnitary { .. })
        ));
    }

    #[test]
    fn dilation_fixed_points_are_origin_and_infinity() {
        let g = diag(cr(0.5), cr(1.0), cr(2.0));
        let fixed = fixed_boundary_points(FormTag::Form2, &g, 1e-10).unwrap();
        assert_eq!(fixed.len(), 2);
        let origin = ProjPoint::new(&CVec3::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
        let inf = ProjPoint::new(&CVec3::new(cr(1.0), cr(0.0), cr(0.0))).unwrap();
        assert!(fixed.iter().any(|p| p.point().approx_eq(&origin, 1e-9)));
        assert!(fixed.iter().any(|p| p.point().approx_eq(&inf, 1e-9)));
    }

    #[test]
    fn parabolic_has_one_fixed_point() {
        let mut g = CMat3::identity();
        g[(0, 2)] = c(0.0, 1.0);
        let fixed = fixed_boundary_points(FormTag::Form2, &g, 1e-10).unwrap();
        assert_eq!(fixed.len(), 1);
        let inf = ProjPoint::new(&CVec3::new(cr(1.0), cr(0.0), cr(0.0))).unwrap();
        assert!(fixed[0].point().approx_eq(&inf, 1e-9));
    }

    #[test]
    fn normal_form_of_the_standard_dilation() {
        let g = diag(cr(0.5), cr(1.0), cr(2.0));
        let data = normalize_loxodromic(FormTag::Form2, &g, 1e-10).unwrap();
        assert!((data.sqrt_multiplier - cr(0.5)).norm() < 1e-12);
        assert!((data.lambda - cr(0.25)).norm() < 1e-12);
        let origin = ProjPoint::new(&CVec3::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
        let inf = ProjPoint::new(&CVec3::new(cr(1.0), cr(0.0), cr(0.0))).unwrap();
        assert!(data.attracting.point().approx_eq(&origin, 1e-10));
        assert!(data.repelling.point().approx_eq(&inf, 1e-10));
        // already diagonal: the conjugator acts as the identity on the
        // fixed points and the conjugated matrix stays diagonal
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(data.diagonal[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn normal_form_multiplier_of_a_real_dilation_family() {
        let s = 1.0 / 3.0;
        let g = diag(cr(s), cr(1.0), cr(1.0 / s));
        let data = normalize_loxodromic(FormTag::Form2, &g, 1e-10).unwrap();
        assert!((data.lambda - cr(1.0 / 9.0)).norm() < 1e-12, "{}", data.lambda);
    }

    #[test]
    fn multiplier_survives_conjugation() {
        // conjugate the dilation by a Heisenberg translation and check
        // the recovered multiplier and fixed point pair
        let tau = c(0.3, -0.7);
        let s_val = 1.5f64;
        let mut t = CMat3::identity();
        t[(0, 1)] = -cr(2.0f64.sqrt()) * tau.conj();
        t[(0, 2)] = c(-tau.norm_sqr(), s_val);
        t[(1, 2)] = cr(2.0f64.sqrt()) * tau;
        let g0 = diag(c(0.2, 0.1), cr(1.0), cr(1.0) / c(0.2, -0.1));
        let t_map = ProjMap::new(&t).unwrap();
        let g = t_map.matrix() * g0 * t_map.inverse().matrix();
        let d0 = normalize_loxodromic(FormTag::Form2, &g0, 1e-9).unwrap();
        let d1 = normalize_loxodromic(FormTag::Form2, &g, 1e-9).unwrap();
        assert!(
            (d0.sqrt_multiplier - d1.sqrt_multiplier).norm() < 1e-9,
            "{} vs {}",
            d0.sqrt_multiplier,
            d1.sqrt_multiplier
        );
        // fixed points are the translated originals
        let moved = BoundaryPoint::new(FormTag::Form2, t_map.apply(d0.attracting.point()), 1e-8)
            .unwrap();
        assert!(d1.attracting.approx_eq(&moved, 1e-7));
    }

    #[test]
    fn ball_model_loxodromic_normalizes_through_the_model_change() {
        // transport the dilation to the ball model and normalize there
        let cayley = cayley_matrix();
        let g2 = diag(cr(0.5), cr(1.0), cr(2.0));
        let g1 = cayley * g2 * cayley;
        let data = normalize_loxodromic(FormTag::Form1, &g1, 1e-10).unwrap();
        assert!((data.lambda - cr(0.25)).norm() < 1e-10);
        // conjugating the ball matrix lands on the same diagonal
        let d = data.conjugator.matrix() * g1 * data.conjugator.inverse().matrix();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(d[(i, j)].norm() < 1e-10, "off-diagonal {i}{j} = {}", d[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn elliptic_map_is_not_normalizable() {
        let g = diag(c(0.0, 1.0), cr(1.0), c(0.0, 1.0));
        assert!(matches!(
            normalize_loxodromic(FormTag::Form2, &g, 1e-10),
            Err(GeomError::NotLoxodromic { .. })
        ));
    }

    #[test]
    fn orbit_contracts_to_the_attracting_point() {
        let g = ProjMap::new(&diag(cr(0.5), cr(1.0), cr(2.0))).unwrap();
        let start = BoundaryPoint::from_vec(
            FormTag::Form2,
            &CVec3::new(cr(-1.0), cr(2.0f64.sqrt()), cr(1.0)),
            1e-10,
        )
        .unwrap();
        let orbit = iterate_on_boundary(&g, &start, 40).unwrap();
        let origin = BoundaryPoint::from_vec(
            FormTag::Form2,
            &CVec3::new(cr(0.0), cr(0.0), cr(1.0)),
            1e-10,
        )
        .unwrap();
        let d_last = crate::boundary::chordal_dist(&orbit[40], &origin);
        let d_first = crate::boundary::chordal_dist(&orbit[0], &origin);
        assert!(d_last < 1e-8 * d_first, "{d_last}");
    }
}
