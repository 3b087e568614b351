//! The boundary 3-sphere in its three guises: null projective points for
//! either form, the unit sphere of the ball model, and the Heisenberg
//! chart C x R plus a point at infinity.
//!
//! Chart conventions: a finite Heisenberg point (zeta, v) embeds as
//! [-|zeta|^2 + iv : sqrt(2) zeta : 1] (null for form 2) and infinity
//! embeds as [1 : 0 : 0].  The inverse divides by the last coordinate.

use crate::error::{GeomError, Result};
use crate::hermitian::{
    cayley_apply, herm_inner, null_residual, sign_class, CayleyDirection, FormTag,
};
use crate::projective::{ProjLine, ProjPoint};
use crate::{c, cr, CVec3, C, DEFAULT_TOL};

/// Point of the Heisenberg space C x R compactified by one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeisenbergPoint {
    Finite { zeta: C, v: f64 },
    Infinity,
}

impl HeisenbergPoint {
    pub fn finite(zeta: C, v: f64) -> HeisenbergPoint {
        HeisenbergPoint::Finite { zeta, v }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, HeisenbergPoint::Infinity)
    }
}

/// Heisenberg group product in the convention matching the chart above:
/// (a, s) * (b, t) = (a + b, s + t - 2 Im(conj(a) b)).  Left translation
/// by (a, s) is the boundary action of a form-2 unitary parabolic map.
pub fn heis_product(a: HeisenbergPoint, b: HeisenbergPoint) -> HeisenbergPoint {
    match (a, b) {
        (HeisenbergPoint::Finite { zeta: z1, v: v1 }, HeisenbergPoint::Finite { zeta: z2, v: v2 }) => {
            HeisenbergPoint::Finite {
                zeta: z1 + z2,
                v: v1 + v2 - 2.0 * (z1.conj() * z2).im,
            }
        }
        _ => HeisenbergPoint::Infinity,
    }
}

/// Null projective point tagged with the form it is null for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    point: ProjPoint,
    form: FormTag,
}

impl BoundaryPoint {
    /// Validating constructor: the representative must be null for the
    /// form to within tol (relative to the squared norm).
    pub fn new(form: FormTag, point: ProjPoint, tol: f64) -> Result<BoundaryPoint> {
        let r = null_residual(form, point.rep());
        if r > tol {
            let sign = sign_class(form, point.rep(), tol)?;
            return Err(GeomError::NotNull { sign, residual: r });
        }
        Ok(BoundaryPoint { point, form })
    }

    pub fn from_vec(form: FormTag, v: &CVec3, tol: f64) -> Result<BoundaryPoint> {
        BoundaryPoint::new(form, ProjPoint::new(v)?, tol)
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn rep(&self) -> &CVec3 {
        self.point.rep()
    }

    pub fn form(&self) -> FormTag {
        self.form
    }

    /// Convert between the two models through the Cayley involution.
    /// The transform is linear, so no chart degeneracy is involved.
    pub fn to_form(&self, form: FormTag) -> BoundaryPoint {
        if form == self.form {
            return *self;
        }
        let dir = match self.form {
            FormTag::Form2 => CayleyDirection::SiegelToBall,
            FormTag::Form1 => CayleyDirection::BallToSiegel,
        };
        let v = cayley_apply(self.point.rep(), dir);
        BoundaryPoint {
            point: ProjPoint::new(&v).expect("Cayley image of nonzero vector"),
            form,
        }
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        let o = other.to_form(self.form);
        self.point.approx_eq(&o.point, tol)
    }
}

/// Embed a Heisenberg point as a form-2 null projective point.
pub fn heis_embed(p: HeisenbergPoint) -> BoundaryPoint {
    let v = match p {
        HeisenbergPoint::Finite { zeta, v } => CVec3::new(
            c(-zeta.norm_sqr(), v),
            zeta * cr(2.0f64.sqrt()),
            cr(1.0),
        ),
        HeisenbergPoint::Infinity => CVec3::new(cr(1.0), cr(0.0), cr(0.0)),
    };
    BoundaryPoint {
        point: ProjPoint::new(&v).expect("chart vector is nonzero"),
        form: FormTag::Form2,
    }
}

/// Relative size of the last coordinate below which a form-2 null point
/// is treated as the point at infinity by the chart.
pub const INFINITY_THRESHOLD: f64 = 1e-12;

/// Read a boundary point back into Heisenberg coordinates.  The input is
/// converted to form 2 first; a non-null point is rejected by the
/// BoundaryPoint it arrives in, so only chart degeneracy is handled here.
pub fn heis_project(b: &BoundaryPoint) -> HeisenbergPoint {
    let p = b.to_form(FormTag::Form2);
    let z = p.rep();
    if z[2].norm() <= INFINITY_THRESHOLD {
        return HeisenbergPoint::Infinity;
    }
    let w1 = z[0] / z[2];
    let w2 = z[1] / z[2];
    HeisenbergPoint::Finite {
        zeta: w2 / cr(2.0f64.sqrt()),
        v: w1.im,
    }
}

/// Unique ball-model representative (z1, z2) with |z1|^2 + |z2|^2 = 1
/// and third coordinate 1.  Null form-1 vectors always have last
/// coordinate of modulus norm/sqrt(2), so the division is safe.
pub fn ball_rep(b: &BoundaryPoint) -> (C, C) {
    let p = b.to_form(FormTag::Form1);
    let z = p.rep();
    (z[0] / z[2], z[1] / z[2])
}

/// Chordal distance: Euclidean distance of the ball representatives on
/// the unit sphere of C^2.
pub fn chordal_dist(a: &BoundaryPoint, b: &BoundaryPoint) -> f64 {
    let (a1, a2) = ball_rep(a);
    let (b1, b2) = ball_rep(b);
    ((a1 - b1).norm_sqr() + (a2 - b2).norm_sqr()).sqrt()
}

/// The unique complex projective line tangent to the boundary at p: the
/// polar line { z : <z, p> = 0 } of the null point itself.
pub fn tangent_complex_line(b: &BoundaryPoint) -> ProjLine {
    let p = b.rep();
    let coeffs = match b.form() {
        // <z,p>_1 = z1 conj(p1) + z2 conj(p2) - z3 conj(p3)
        FormTag::Form1 => CVec3::new(p[0].conj(), p[1].conj(), -p[2].conj()),
        // <z,p>_2 = z1 conj(p3) + z2 conj(p2) + z3 conj(p1)
        FormTag::Form2 => CVec3::new(p[2].conj(), p[1].conj(), p[0].conj()),
    };
    ProjLine::from_coeffs(&coeffs).expect("nonzero coefficient vector")
}

/// Null test shorthand used by samplers.
pub fn boundary_point_default(form: FormTag, v: &CVec3) -> Result<BoundaryPoint> {
    BoundaryPoint::from_vec(form, v, DEFAULT_TOL)
}

/// Verdict helper: is the pairing of two boundary points zero, i.e. do
/// they coincide (boundary points are never orthogonal unless equal)?
pub fn pairing(a: &BoundaryPoint, b: &BoundaryPoint) -> Result<C> {
    if a.form() != b.form() {
        return Err(GeomError::FormMismatch);
    }
    Ok(herm_inner(a.form(), a.rep(), b.rep()))
}

/// Unitary normalizer of a pair: a second-model unitary map carrying
/// `to_origin` to [0:0:1] and `to_infinity` to [1:0:0].  Inputs in the
/// ball model are converted first.  The inverse map has columns
/// (infinity rep, middle unit vector, rescaled origin rep), which is
/// unitary because the Gram pairings reproduce the antidiagonal form.
pub fn pair_to_standard(
    to_origin: &BoundaryPoint,
    to_infinity: &BoundaryPoint,
) -> Result<crate::projective::ProjMap> {
    let p = to_origin.to_form(FormTag::Form2);
    let q = to_infinity.to_form(FormTag::Form2);
    let c = herm_inner(FormTag::Form2, q.rep(), p.rep());
    if c.norm() <= 1e-12 {
        return Err(GeomError::CoincidentPoints {
            context: "pair normalizer of equal boundary points".into(),
        });
    }
    let col_q = *q.rep();
    let col_p = p.rep() / c.conj();
    let m_raw = crate::hermitian::boxtimes(FormTag::Form2, &col_q, p.rep());
    let mm = herm_inner(FormTag::Form2, &m_raw, &m_raw).re;
    let col_m = m_raw / cr(mm.sqrt());
    let b = crate::CMat3::from_columns(&[col_q, col_m, col_p]);
    Ok(crate::projective::ProjMap::new(&b)?.inverse())
}
