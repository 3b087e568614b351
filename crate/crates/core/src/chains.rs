//! Chains (boundary circles of complex lines) represented by their polar
//! points, R-circle parametrizations, and the Cartan angular invariant.
//!
//! A complex line meeting the boundary corresponds to a positive point,
//! its polar; the chain is the null locus of pairing against the polar.
//! Degenerate chains are single boundary points.

use crate::boundary::{chordal_dist, heis_project, BoundaryPoint, HeisenbergPoint};
use crate::error::{GeomError, Result};
use crate::hermitian::{boxtimes, herm_inner, sign_class, FormTag, SignClass};
use crate::projective::{ProjMap, ProjPoint};
use crate::{c, cr, vec_norm, CVec3, C, DEFAULT_TOL};

/// A chain, stored losslessly by its polar point, or a degenerate chain
/// consisting of a single boundary point.  Chains are unoriented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chain {
    Polar { form: FormTag, polar: ProjPoint },
    Degenerate(BoundaryPoint),
}

impl Chain {
    pub fn form(&self) -> FormTag {
        match self {
            Chain::Polar { form, .. } => *form,
            Chain::Degenerate(b) => b.form(),
        }
    }

    /// Polar constructor validating the sign class of the polar point.
    pub fn from_polar(form: FormTag, polar: ProjPoint) -> Result<Chain> {
        match sign_class(form, polar.rep(), DEFAULT_TOL)? {
            SignClass::Positive => Ok(Chain::Polar { form, polar }),
            s => Err(GeomError::InvalidInput(format!(
                "polar point of a chain must be positive, got {s:?}"
            ))),
        }
    }

    /// Convert the chain to the other model through the polar point.
    pub fn to_form(&self, form: FormTag) -> Chain {
        match self {
            Chain::Degenerate(b) => Chain::Degenerate(b.to_form(form)),
            Chain::Polar { form: f, polar } => {
                if *f == form {
                    *self
                } else {
                    let dir = match *f {
                        FormTag::Form2 => crate::hermitian::CayleyDirection::SiegelToBall,
                        FormTag::Form1 => crate::hermitian::CayleyDirection::BallToSiegel,
                    };
                    let v = crate::hermitian::cayley_apply(polar.rep(), dir);
                    Chain::Polar {
                        form,
                        polar: ProjPoint::new(&v).expect("Cayley image"),
                    }
                }
            }
        }
    }

    /// Image under a form-unitary map of the same model.
    pub fn transformed(&self, g: &ProjMap) -> Chain {
        match self {
            Chain::Polar { form, polar } => Chain::Polar {
                form: *form,
                polar: g.apply(polar),
            },
            Chain::Degenerate(b) => Chain::Degenerate(
                BoundaryPoint::new(b.form(), g.apply(b.point()), 1e-6)
                    .expect("unitary image of a null point"),
            ),
        }
    }
}

/// Chain through two distinct boundary points: the polar is the cross
/// product of the representatives, always a positive point.
pub fn chain_through(p: &BoundaryPoint, q: &BoundaryPoint, tol: f64) -> Result<Chain> {
    if p.form() != q.form() {
        return Err(GeomError::FormMismatch);
    }
    let x = boxtimes(p.form(), p.rep(), q.rep());
    if vec_norm(&x) <= tol {
        return Err(GeomError::CoincidentPoints {
            context: "chain through equal points".into(),
        });
    }
    Chain::from_polar(p.form(), ProjPoint::new(&x)?)
}

/// Incidence test.  A boundary point in the other model is converted
/// first; both conversions pair identically by the Cayley isometry.
pub fn chain_contains(chain: &Chain, x: &BoundaryPoint, tol: f64) -> bool {
    let x = x.to_form(chain.form());
    match chain {
        Chain::Polar { form, polar } => {
            herm_inner(*form, x.rep(), polar.rep()).norm() <= tol
        }
        Chain::Degenerate(b) => b.approx_eq(&x, tol),
    }
}

/// Orthonormal real/negative basis of the polar complement under form 1.
/// The chain circle is then a e^{i theta} + b over a phase sweep.
fn chain_frame(form1_polar: &ProjPoint) -> (CVec3, CVec3) {
    let p = form1_polar.rep();
    let pp = herm_inner(FormTag::Form1, p, p).re;
    // project e3 (interior direction) onto the complement of the polar
    let e3 = CVec3::new(cr(0.0), cr(0.0), cr(1.0));
    let coeff = herm_inner(FormTag::Form1, &e3, p) / cr(pp);
    let n = e3 - p * coeff;
    let nn = herm_inner(FormTag::Form1, &n, &n).re;
    debug_assert!(nn < 0.0, "complement of a positive point contains e3's negative part");
    let b = n / cr((-nn).sqrt());
    let a_raw = boxtimes(FormTag::Form1, p, &b);
    let aa = herm_inner(FormTag::Form1, &a_raw, &a_raw).re;
    let a = a_raw / cr(aa.sqrt());
    (a, b)
}

/// Uniform phase samples of a chain, returned in the chain's model.
pub fn chain_samples(chain: &Chain, count: usize) -> Vec<BoundaryPoint> {
    match chain {
        Chain::Degenerate(b) => vec![*b; count.min(1)],
        Chain::Polar { form, .. } => {
            let ball = chain.to_form(FormTag::Form1);
            let Chain::Polar { polar, .. } = ball else {
                unreachable!()
            };
            let (a, b) = chain_frame(&polar);
            (0..count)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                    let x = a * C::from_polar(1.0, theta) + b;
                    BoundaryPoint::from_vec(FormTag::Form1, &x, 1e-8)
                        .expect("frame points are null")
                        .to_form(*form)
                })
                .collect()
        }
    }
}

/// Largest pairwise chordal distance over a phase-uniform sample of the
/// chain.  Degenerate chains have diameter 0.
pub fn chain_diameter(chain: &Chain, samples: usize) -> f64 {
    match chain {
        Chain::Degenerate(_) => 0.0,
        Chain::Polar { .. } => {
            let pts = chain_samples(chain, samples.max(2));
            let mut best = 0.0f64;
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    best = best.max(chordal_dist(&pts[i], &pts[j]));
                }
            }
            best
        }
    }
}

/// R-circle specification: infinite ones are straight Heisenberg lines
/// through a finite base point; finite ones are images of the standard
/// finite R-circle under a form-2 unitary map.
#[derive(Debug, Clone, PartialEq)]
pub enum RCircleSpec {
    Infinite { base: HeisenbergPoint, theta: f64 },
    Finite { map: ProjMap },
}

impl RCircleSpec {
    pub fn infinite(base: HeisenbergPoint, theta: f64) -> Result<RCircleSpec> {
        if base.is_infinity() {
            return Err(GeomError::InvalidInput(
                "infinite R-circle base point must be finite".into(),
            ));
        }
        Ok(RCircleSpec::Infinite { base, theta })
    }

    pub fn finite(map: ProjMap) -> RCircleSpec {
        RCircleSpec::Finite { map }
    }

    pub fn canonical() -> RCircleSpec {
        RCircleSpec::Infinite {
            base: HeisenbergPoint::finite(cr(0.0), 0.0),
            theta: 0.0,
        }
    }
}

/// Point of the standard finite R-circle at angle theta, defined for
/// cos(2 theta) >= 0; the domain endpoints are admitted as limits.
pub fn standard_finite_point(theta: f64, tol: f64) -> Result<HeisenbergPoint> {
    let c2 = (2.0 * theta).cos();
    if c2 < -tol {
        return Err(GeomError::OutOfDomain {
            context: format!("cos(2 theta) = {c2:.3e} < 0 at theta = {theta}"),
        });
    }
    let r = c2.max(0.0).sqrt();
    let zeta = c(0.0, r) * C::from_polar(1.0, theta);
    Ok(HeisenbergPoint::finite(zeta, -(2.0 * theta).sin()))
}

/// Evaluate an R-circle parametrization.
///
/// Infinite: t is the line parameter, point = base * (t e^{i theta}, 0)
/// in the Heisenberg group.  Finite: t is the angle of the standard
/// finite R-circle, and the stored map carries the point to the target
/// circle.
pub fn rcircle_point(spec: &RCircleSpec, t: f64) -> Result<HeisenbergPoint> {
    match spec {
        RCircleSpec::Infinite { base, theta } => {
            let step = HeisenbergPoint::finite(C::from_polar(1.0, *theta) * cr(t), 0.0);
            Ok(crate::boundary::heis_product(*base, step))
        }
        RCircleSpec::Finite { map } => {
            let p = standard_finite_point(t, 1e-12)?;
            let embedded = crate::boundary::heis_embed(p);
            let moved = map.apply(embedded.point());
            let b = BoundaryPoint::new(FormTag::Form2, moved, 1e-8)?;
            Ok(heis_project(&b))
        }
    }
}

/// Cartan angular invariant arg(-<p,q><q,r><r,p>) in [-pi/2, pi/2].
/// It is +-pi/2 exactly for triples on a chain and 0 exactly for triples
/// on an R-circle; swapping the first two arguments flips the sign.
pub fn cartan_invariant(
    p: &BoundaryPoint,
    q: &BoundaryPoint,
    r: &BoundaryPoint,
    tol: f64,
) -> Result<f64> {
    if p.form() != q.form() || q.form() != r.form() {
        return Err(GeomError::FormMismatch);
    }
    for (a, b) in [(p, q), (q, r), (r, p)] {
        if a.point().approx_eq(b.point(), tol) {
            return Err(GeomError::CoincidentPoints {
                context: "Cartan invariant of a degenerate triple".into(),
            });
        }
    }
    let form = p.form();
    let triple = herm_inner(form, p.rep(), q.rep())
        * herm_inner(form, q.rep(), r.rep())
        * herm_inner(form, r.rep(), p.rep());
    Ok((-triple).arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::heis_embed;

    const EPS: f64 = 1e-12;

    fn bp2(v: CVec3) -> BoundaryPoint {
        BoundaryPoint::from_vec(FormTag::Form2, &v, 1e-10).unwrap()
    }

    fn origin() -> BoundaryPoint {
        bp2(CVec3::new(cr(0.0), cr(0.0), cr(1.0)))
    }

    fn infinity() -> BoundaryPoint {
        bp2(CVec3::new(cr(1.0), cr(0.0), cr(0.0)))
    }

    #[test]
    fn vertical_chain_through_origin_and_infinity() {
        let chain = chain_through(&origin(), &infinity(), 1e-12).unwrap();
        match chain {
            Chain::Polar { polar, .. } => {
                let expect = ProjPoint::new(&CVec3::new(cr(0.0), cr(1.0), cr(0.0))).unwrap();
                assert!(polar.approx_eq(&expect, EPS));
            }
            _ => panic!("polar chain expected"),
        }
    }

    #[test]
    fn ball_chain_through_antipodal_points() {
        let a = BoundaryPoint::from_vec(FormTag::Form1, &CVec3::new(cr(1.0), cr(0.0), cr(1.0)), EPS)
            .unwrap();
        let b = BoundaryPoint::from_vec(FormTag::Form1, &CVec3::new(cr(-1.0), cr(0.0), cr(1.0)), EPS)
            .unwrap();
        let chain = chain_through(&a, &b, 1e-12).unwrap();
        match chain {
            Chain::Polar { polar, .. } => {
                let expect = ProjPoint::new(&CVec3::new(cr(0.0), cr(1.0), cr(0.0))).unwrap();
                assert!(polar.approx_eq(&expect, EPS));
            }
            _ => panic!("polar chain expected"),
        }
    }

    #[test]
    fn chain_through_coincident_points_fails() {
        let p = origin();
        assert!(matches!(
            chain_through(&p, &p, 1e-12),
            Err(GeomError::CoincidentPoints { .. })
        ));
    }

    #[test]
    fn membership_on_the_vertical_chain() {
        let chain = chain_through(&origin(), &infinity(), 1e-12).unwrap();
        let on = bp2(CVec3::new(c(0.0, 1.0), cr(0.0), cr(1.0)));
        assert!(chain_contains(&chain, &on, 1e-10));
        let off = bp2(CVec3::new(cr(-1.0), cr(2.0f64.sqrt()), cr(1.0)));
        assert!(!chain_contains(&chain, &off, 1e-10));
    }

    #[test]
    fn degenerate_chain_contains_only_its_point() {
        let b = heis_embed(HeisenbergPoint::finite(c(0.3, 0.4), 1.0));
        let chain = Chain::Degenerate(b);
        assert!(chain_contains(&chain, &b, 1e-10));
        assert!(!chain_contains(&chain, &origin(), 1e-6));
        assert_eq!(chain_diameter(&chain, 64), 0.0);
    }

    #[test]
    fn great_chain_diameter_is_two() {
        let chain = Chain::from_polar(
            FormTag::Form1,
            ProjPoint::new(&CVec3::new(cr(0.0), cr(1.0), cr(0.0))).unwrap(),
        )
        .unwrap();
        let d = chain_diameter(&chain, 256);
        assert!((d - 2.0).abs() < 1e-6, "diameter {d}");
    }

    #[test]
    fn chain_samples_lie_on_the_chain() {
        let p = heis_embed(HeisenbergPoint::finite(c(0.9, -0.1), 0.4));
        let q = heis_embed(HeisenbergPoint::finite(c(-0.3, 0.7), -1.2));
        let chain = chain_through(&p, &q, 1e-12).unwrap();
        for s in chain_samples(&chain, 32) {
            assert!(chain_contains(&chain, &s, 1e-9));
            assert_eq!(s.form(), FormTag::Form2);
        }
    }

    #[test]
    fn diameter_is_phase_rotation_invariant() {
        let p = heis_embed(HeisenbergPoint::finite(cr(1.0), 0.5));
        let q = heis_embed(HeisenbergPoint::finite(c(-0.5, 0.5), -0.5));
        let chain = chain_through(&p, &q, 1e-12).unwrap().to_form(FormTag::Form1);
        // diag(e^{i a}, e^{i b}, 1) is form-1 unitary and fixes the frame seed
        let rot = ProjMap::new(&crate::CMat3::from_diagonal(&CVec3::new(
            C::from_polar(1.0, 0.8),
            C::from_polar(1.0, -1.7),
            cr(1.0),
        )))
        .unwrap();
        let rotated = chain.transformed(&rot);
        // the two sampling frames are phase-offset copies of the same
        // circle, so the grid maxima agree only to grid resolution
        let d1 = chain_diameter(&chain, 256);
        let d2 = chain_diameter(&rotated, 256);
        assert!((d1 - d2).abs() < 5e-3, "{d1} vs {d2}");
    }

    #[test]
    fn infinite_rcircle_points() {
        let spec = RCircleSpec::canonical();
        match rcircle_point(&spec, 1.0).unwrap() {
            HeisenbergPoint::Finite { zeta, v } => {
                assert!((zeta - cr(1.0)).norm() < EPS);
                assert!(v.abs() < EPS);
            }
            _ => panic!("finite expected"),
        }
    }

    #[test]
    fn translated_rcircle_is_a_straight_line() {
        let base = HeisenbergPoint::finite(c(1.0, -2.0), 3.0);
        let spec = RCircleSpec::infinite(base, 0.7).unwrap();
        let take = |t: f64| match rcircle_point(&spec, t).unwrap() {
            HeisenbergPoint::Finite { zeta, v } => (zeta, v),
            _ => panic!("finite expected"),
        };
        let (z0, v0) = take(0.0);
        let (z1, v1) = take(1.0);
        let (z2, v2) = take(2.0);
        // both coordinates affine in t
        assert!((z2 - z1 - (z1 - z0)).norm() < EPS);
        assert!((v2 - v1 - (v1 - v0)).abs() < 1e-10);
    }

    #[test]
    fn standard_finite_rcircle_points() {
        let spec = RCircleSpec::finite(ProjMap::identity());
        match rcircle_point(&spec, 0.0).unwrap() {
            HeisenbergPoint::Finite { zeta, v } => {
                assert!((zeta - c(0.0, 1.0)).norm() < EPS);
                assert!(v.abs() < EPS);
            }
            _ => panic!("finite expected"),
        }
        match rcircle_point(&spec, std::f64::consts::FRAC_PI_4).unwrap() {
            HeisenbergPoint::Finite { zeta, v } => {
                assert!(zeta.norm() < 1e-7, "limiting point has zeta -> 0");
                assert!((v + 1.0).abs() < EPS);
            }
            _ => panic!("finite expected"),
        }
    }

    #[test]
    fn finite_rcircle_domain_is_enforced() {
        let spec = RCircleSpec::finite(ProjMap::identity());
        assert!(matches!(
            rcircle_point(&spec, std::f64::consts::FRAC_PI_2),
            Err(GeomError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn cartan_of_chain_triple_is_right_angle() {
        let p = origin();
        let q = bp2(CVec3::new(c(0.0, 1.0), cr(0.0), cr(1.0)));
        let r = infinity();
        let a = cartan_invariant(&p, &q, &r, 1e-12).unwrap();
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < EPS, "got {a}");
    }

    #[test]
    fn cartan_of_rcircle_triple_is_zero() {
        let p = origin();
        let q = bp2(CVec3::new(cr(-1.0), cr(2.0f64.sqrt()), cr(1.0)));
        let r = infinity();
        let a = cartan_invariant(&p, &q, &r, 1e-12).unwrap();
        assert!(a.abs() < EPS, "got {a}");
    }

    #[test]
    fn cartan_swap_flips_sign() {
        let p = heis_embed(HeisenbergPoint::finite(c(0.2, 0.5), 0.3));
        let q = heis_embed(HeisenbergPoint::finite(c(-0.7, 0.1), -0.9));
        let r = heis_embed(HeisenbergPoint::finite(c(0.4, -0.8), 1.4));
        let a = cartan_invariant(&p, &q, &r, 1e-12).unwrap();
        let b = cartan_invariant(&q, &p, &r, 1e-12).unwrap();
        assert!((a + b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn cartan_rejects_coincident_points() {
        let p = origin();
        let q = infinity();
        assert!(matches!(
            cartan_invariant(&p, &p, &q, 1e-10),
            Err(GeomError::CoincidentPoints { .. })
        ));
    }

    #[test]
    fn cartan_range_is_the_closed_right_angle_interval() {
        let pts = [
            heis_embed(HeisenbergPoint::finite(c(1.3, 0.2), -0.4)),
            heis_embed(HeisenbergPoint::finite(c(-0.2, 0.8), 0.9)),
            heis_embed(HeisenbergPoint::finite(c(0.5, -1.1), 0.1)),
            heis_embed(HeisenbergPoint::finite(c(-0.9, -0.3), -1.3)),
            infinity(),
        ];
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                for k in 0..pts.len() {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let a = cartan_invariant(&pts[i], &pts[j], &pts[k], 1e-12).unwrap();
                    assert!(a.abs() <= std::f64::consts::FRAC_PI_2 + 1e-12);
                }
            }
        }
    }
}
