//! Boundary curves: analytic lifts with two derivatives, tangent
//! chains, Legendrian tests, vertical projection with plane curvature,
//! and the chain / R-circle / neither classifier.

use crate::boundary::{
    chordal_dist, heis_project, pair_to_standard, BoundaryPoint, HeisenbergPoint,
};
use crate::error::{GeomError, Result};
use crate::fitting::{cartan_samples, fit_chain, fit_horizontal_line};
use crate::hermitian::{boxtimes, herm_inner, sign_class, FormTag, SignClass};
use crate::projective::ProjMap;
use crate::{c, cr, vec_norm, CVec3, C};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// A closed boundary curve on [0, 1), producing a null lift and two
/// derivatives in a fixed model.
pub trait BoundaryCurve {
    fn form(&self) -> FormTag;
    /// Lift, first, and second derivative at t.
    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3);
}

/// Null lift of a chart point with derivatives, from chart data
/// (zeta, v) and their first two parameter derivatives.
pub fn chart_lift2(
    zeta: C,
    v: f64,
    dzeta: C,
    dv: f64,
    ddzeta: C,
    ddv: f64,
) -> (CVec3, CVec3, CVec3) {
    let s2 = cr(2.0f64.sqrt());
    let w = CVec3::new(c(-zeta.norm_sqr(), v), s2 * zeta, cr(1.0));
    let dw = CVec3::new(
        c(-2.0 * (zeta.conj() * dzeta).re, dv),
        s2 * dzeta,
        cr(0.0),
    );
    let ddw = CVec3::new(
        c(
            -2.0 * dzeta.norm_sqr() - 2.0 * (zeta.conj() * ddzeta).re,
            ddv,
        ),
        s2 * ddzeta,
        cr(0.0),
    );
    (w, dw, ddw)
}

/// Exactly parametrized reference curves in the second model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinCurve {
    /// Closed lift of the real-axis R-circle through infinity,
    /// period 1, passing through infinity at t = 1/2.
    CanonicalRCircle,
    /// Closed lift of the chain over zeta = 0, through infinity.
    VerticalChain,
    /// The standard finite R-circle, one smooth loop over both arcs.
    FiniteRCircle,
}

impl BuiltinCurve {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinCurve::CanonicalRCircle => "canonical-rcircle",
            BuiltinCurve::VerticalChain => "vertical-chain",
            BuiltinCurve::FiniteRCircle => "finite-rcircle",
        }
    }

    pub fn from_name(name: &str) -> Result<BuiltinCurve> {
        match name {
            "canonical-rcircle" => Ok(BuiltinCurve::CanonicalRCircle),
            "vertical-chain" => Ok(BuiltinCurve::VerticalChain),
            "finite-rcircle" => Ok(BuiltinCurve::FiniteRCircle),
            other => Err(GeomError::InvalidInput(format!(
                "unknown builtin curve {other:?}; expected one of \
                 canonical-rcircle, vertical-chain, finite-rcircle"
            ))),
        }
    }
}

impl BoundaryCurve for BuiltinCurve {
    fn form(&self) -> FormTag {
        FormTag::Form2
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        match self {
            BuiltinCurve::CanonicalRCircle => {
                // (-sin^2, sqrt2 sin cos, cos^2) of pi t: the chart
                // point (tan(pi t), 0) rescaled to close through infinity
                let p = std::f64::consts::PI;
                let (s2, c2) = (2.0 * p * t).sin_cos();
                let sq = 2.0f64.sqrt();
                let w = CVec3::new(cr(-(1.0 - c2) / 2.0), cr(sq * s2 / 2.0), cr((1.0 + c2) / 2.0));
                let dw = CVec3::new(cr(-p * s2), cr(sq * p * c2), cr(-p * s2));
                let ddw = CVec3::new(
                    cr(-2.0 * p * p * c2),
                    cr(-2.0 * sq * p * p * s2),
                    cr(-2.0 * p * p * c2),
                );
                (w, dw, ddw)
            }
            BuiltinCurve::VerticalChain => {
                // Cayley image of the ball circle (e^{2 pi i t}, 0, 1)
                let e = C::from_polar(1.0, TAU * t);
                let sq = cr(1.0 / 2.0f64.sqrt());
                let d = c(0.0, TAU) * e;
                let dd = c(0.0, TAU) * d;
                (
                    CVec3::new(sq * (e + cr(1.0)), cr(0.0), sq * (e - cr(1.0))),
                    CVec3::new(sq * d, cr(0.0), sq * d),
                    CVec3::new(sq * dd, cr(0.0), sq * dd),
                )
            }
            BuiltinCurve::FiniteRCircle => {
                let a = TAU * t;
                let (s, co) = a.sin_cos();
                let q = (1.0 - s * s / 2.0).sqrt();
                // beta = asin(sin(a)/sqrt2); chart position i cos(a) e^{i beta}
                let eb = c(q, s / 2.0f64.sqrt());
                let db = (co / 2.0f64.sqrt()) / q;
                let ddb = -s / (2.0f64.sqrt() * q) + s * co * co / (2.0 * 2.0f64.sqrt() * q * q * q);
                let i = c(0.0, 1.0);
                let zeta = i * cr(co) * eb;
                let dz = i * eb * c(-s, co * db);
                let ddz = i * eb * c(-co - co * db * db, -2.0 * s * db + co * ddb);
                let v = -2.0f64.sqrt() * s * q;
                let dv = -2.0f64.sqrt() * co * co * co / q;
                let ddv = 2.0f64.sqrt() * s * co * co * (3.0 / q - co * co / (2.0 * q * q * q));
                let (w, dw, ddw) = chart_lift2(zeta, v, dz, dv, ddz, ddv);
                // parameter is a = 2 pi t; rescale derivatives to t
                (w, dw * cr(TAU), ddw * cr(TAU * TAU))
            }
        }
    }
}

/// Closed chart curve with trigonometric-polynomial coordinates:
/// zeta(t) = sum a_k e^{2 pi i k t}, v(t) = sum Re(c_k e^{2 pi i k t}).
/// Always avoids infinity, and lifts are exactly null.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPath {
    pub zeta_coeffs: Vec<(i64, C)>,
    pub v_coeffs: Vec<(i64, C)>,
}

impl ChartPath {
    pub fn new(zeta_coeffs: Vec<(i64, C)>, v_coeffs: Vec<(i64, C)>) -> ChartPath {
        ChartPath {
            zeta_coeffs,
            v_coeffs,
        }
    }

    /// Planar circle of radius 1 centered at `center`, at height v = 0.
    pub fn offset_circle(center: C) -> ChartPath {
        ChartPath::new(vec![(0, center), (1, cr(1.0))], Vec::new())
    }

    /// Chart values and two derivatives at t.
    pub fn chart2(&self, t: f64) -> (C, f64, C, f64, C, f64) {
        let mut z = [cr(0.0); 3];
        let mut v = [0.0f64; 3];
        for &(k, a) in &self.zeta_coeffs {
            let e = C::from_polar(1.0, TAU * k as f64 * t);
            let d = c(0.0, TAU * k as f64);
            z[0] += a * e;
            z[1] += a * d * e;
            z[2] += a * d * d * e;
        }
        for &(k, a) in &self.v_coeffs {
            let e = C::from_polar(1.0, TAU * k as f64 * t);
            let d = c(0.0, TAU * k as f64);
            v[0] += (a * e).re;
            v[1] += (a * d * e).re;
            v[2] += (a * d * d * e).re;
        }
        (z[0], v[0], z[1], v[1], z[2], v[2])
    }

    /// Heisenberg similarity image: zeta scaled by lambda, v by
    /// |lambda|^2.  Plane curvature of the projection divides by
    /// |lambda|.
    pub fn scaled(&self, lambda: C) -> ChartPath {
        ChartPath {
            zeta_coeffs: self
                .zeta_coeffs
                .iter()
                .map(|&(k, a)| (k, a * lambda))
                .collect(),
            v_coeffs: self
                .v_coeffs
                .iter()
                .map(|&(k, a)| (k, a * cr(lambda.norm_sqr())))
                .collect(),
        }
    }
}

impl BoundaryCurve for ChartPath {
    fn form(&self) -> FormTag {
        FormTag::Form2
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        let (z, v, dz, dv, ddz, ddv) = self.chart2(t);
        chart_lift2(z, v, dz, dv, ddz, ddv)
    }
}

/// Closed uniform Catmull-Rom interpolant through chart sample points.
/// Position, first, and second derivatives are the exact piecewise
/// cubic ones; the second derivative jumps at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    zeta: Vec<C>,
    v: Vec<f64>,
}

impl SampledCurve {
    pub fn new(points: &[HeisenbergPoint]) -> Result<SampledCurve> {
        let mut zeta = Vec::with_capacity(points.len());
        let mut v = Vec::with_capacity(points.len());
        for p in points {
            match p {
                HeisenbergPoint::Finite { zeta: z, v: h } => {
                    zeta.push(*z);
                    v.push(*h);
                }
                HeisenbergPoint::Infinity => {
                    return Err(GeomError::InvalidInput(
                        "sampled chart curves must avoid infinity".into(),
                    ))
                }
            }
        }
        if zeta.len() < 4 {
            return Err(GeomError::InvalidInput(format!(
                "closed interpolation needs at least 4 samples, got {}",
                zeta.len()
            )));
        }
        Ok(SampledCurve { zeta, v })
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    fn hermite(p0: C, p1: C, m0: C, m1: C, s: f64) -> (C, C, C) {
        let (s2, s3) = (s * s, s * s * s);
        let pos = p0 * cr(2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * cr(s3 - 2.0 * s2 + s)
            + p1 * cr(-2.0 * s3 + 3.0 * s2)
            + m1 * cr(s3 - s2);
        let d = p0 * cr(6.0 * s2 - 6.0 * s)
            + m0 * cr(3.0 * s2 - 4.0 * s + 1.0)
            + p1 * cr(-6.0 * s2 + 6.0 * s)
            + m1 * cr(3.0 * s2 - 2.0 * s);
        let dd = p0 * cr(12.0 * s - 6.0)
            + m0 * cr(6.0 * s - 4.0)
            + p1 * cr(-12.0 * s + 6.0)
            + m1 * cr(6.0 * s - 2.0);
        (pos, d, dd)
    }

    /// Chart values and two derivatives at t, periodized to [0, 1).
    pub fn chart2(&self, t: f64) -> (C, f64, C, f64, C, f64) {
        let n = self.zeta.len();
        let x = (t.rem_euclid(1.0)) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let s = x - i as f64;
        let idx = |k: isize| ((i as isize + k).rem_euclid(n as isize)) as usize;
        let (im1, i0, i1, i2) = (idx(-1), idx(0), idx(1), idx(2));
        let zm = (self.zeta[i1] - self.zeta[im1]) * cr(0.5);
        let zm1 = (self.zeta[i2] - self.zeta[i0]) * cr(0.5);
        let (z, dz, ddz) = Self::hermite(self.zeta[i0], self.zeta[i1], zm, zm1, s);
        let vm = cr((self.v[i1] - self.v[im1]) * 0.5);
        let vm1 = cr((self.v[i2] - self.v[i0]) * 0.5);
        let (v, dv, ddv) = Self::hermite(cr(self.v[i0]), cr(self.v[i1]), vm, vm1, s);
        // derivatives are per segment; rescale to the t parameter
        let scale = n as f64;
        (
            z,
            v.re,
            dz * cr(scale),
            dv.re * scale,
            ddz * cr(scale * scale),
            ddv.re * scale * scale,
        )
    }
}

impl BoundaryCurve for SampledCurve {
    fn form(&self) -> FormTag {
        FormTag::Form2
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        let (z, v, dz, dv, ddz, ddv) = self.chart2(t);
        chart_lift2(z, v, dz, dv, ddz, ddv)
    }
}

/// A curve pushed forward by a projective map of the same model.
pub struct TransformedCurve<'a> {
    pub inner: &'a dyn BoundaryCurve,
    pub map: ProjMap,
}

impl BoundaryCurve for TransformedCurve<'_> {
    fn form(&self) -> FormTag {
        self.inner.form()
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        let (w, dw, ddw) = self.inner.lift2(t);
        let m = self.map.matrix();
        (m * w, m * dw, m * ddw)
    }
}

/// Scale-free Legendrian defect |<w, w'>| / |w|^2.  Zero exactly on
/// curves tangent to the contact distribution.
pub fn legendrian_defect(curve: &dyn BoundaryCurve, t: f64) -> f64 {
    let (w, dw, _) = curve.lift2(t);
    let n = vec_norm(&w);
    herm_inner(curve.form(), &dw, &w).norm() / (n * n)
}

/// Chart-side contact defect v' + 2 Im(conj(zeta) zeta') of a chart
/// velocity.  Vanishes together with the invariant pairing defect.
pub fn chart_contact_defect(zeta: C, dzeta: C, dv: f64) -> f64 {
    dv + 2.0 * (zeta.conj() * dzeta).im
}

/// Osculating chain data at a parameter.
#[derive(Debug, Clone, Copy)]
pub enum TangentChain {
    /// The tangent polar is positive: a genuine chain, tangent to the
    /// curve at the point.
    Chain(crate::chains::Chain),
    /// The tangent polar is null, which happens exactly at Legendrian
    /// points; the polar then coincides with the curve point itself.
    Degenerate(BoundaryPoint),
}

/// Tangent chain at t: the polar is w x w'.  Null curves make the
/// cross product positive or null, never negative.
pub fn tangent_chain(curve: &dyn BoundaryCurve, t: f64, tol: f64) -> Result<TangentChain> {
    let (w, dw, _) = curve.lift2(t);
    let x = boxtimes(curve.form(), &w, &dw);
    let n = vec_norm(&x);
    if n <= tol * vec_norm(&w) * vec_norm(&dw).max(1.0) {
        return Err(GeomError::IrregularCurve { t });
    }
    match sign_class(curve.form(), &x, 1e-10)? {
        SignClass::Positive => Ok(TangentChain::Chain(crate::chains::Chain::from_polar(
            curve.form(),
            crate::projective::ProjPoint::new(&x)?,
        )?)),
        SignClass::Null => Ok(TangentChain::Degenerate(BoundaryPoint::from_vec(
            curve.form(),
            &x,
            1e-6,
        )?)),
        SignClass::Negative => Err(GeomError::InvalidInput(
            "negative tangent polar on a null lift".into(),
        )),
    }
}

/// Vertical projection at t: chart position zeta with two derivatives.
/// Errors where the curve passes through infinity.
pub fn vertical_projection(curve: &dyn BoundaryCurve, t: f64) -> Result<(C, C, C)> {
    let (w, dw, ddw) = curve.lift2(t);
    let w2 = if curve.form() == FormTag::Form2 {
        (w, dw, ddw)
    } else {
        let cm = crate::hermitian::cayley_matrix();
        (cm * w, cm * dw, cm * ddw)
    };
    let (w, dw, ddw) = w2;
    let z3 = w[2];
    if z3.norm() <= crate::boundary::INFINITY_THRESHOLD * vec_norm(&w) {
        return Err(GeomError::AtInfinity { t });
    }
    let s2 = 2.0f64.sqrt();
    let zeta = w[1] / (cr(s2) * z3);
    let num1 = dw[1] * z3 - w[1] * dw[2];
    let dzeta = num1 / (cr(s2) * z3 * z3);
    let num2 = (ddw[1] * z3 - w[1] * ddw[2]) * z3 - num1 * cr(2.0) * dw[2];
    let ddzeta = num2 / (cr(s2) * z3 * z3 * z3);
    Ok((zeta, dzeta, ddzeta))
}

/// Signed curvature of a plane curve from velocity and acceleration.
pub fn plane_curvature(dzeta: C, ddzeta: C) -> Result<f64> {
    let speed = dzeta.norm();
    if speed <= 1e-14 {
        return Err(GeomError::IrregularCurve { t: f64::NAN });
    }
    Ok((dzeta.conj() * ddzeta).im / (speed * speed * speed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveVerdict {
    Chain,
    RCircle,
    Neither,
}

impl CurveVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            CurveVerdict::Chain => "chain",
            CurveVerdict::RCircle => "rcircle",
            CurveVerdict::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyParams {
    pub grid: usize,
    pub tol: f64,
    pub triples: usize,
    pub seed: u64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            grid: 512,
            tol: 1e-6,
            triples: 2048,
            seed: 17,
        }
    }
}

/// Classification transcript: the verdict plus every residual that fed
/// the decision, so near-threshold cases can be audited.
#[derive(Debug, Clone)]
pub struct CurveClassification {
    pub verdict: CurveVerdict,
    /// Polar scatter residual of the best chain fit.
    pub chain_residual: f64,
    /// Sign class of the fitted polar.
    pub chain_polar_class: SignClass,
    /// Largest Legendrian defect over the grid.
    pub max_legendrian_defect: f64,
    /// Largest |Cartan invariant| over sampled triples.
    pub max_cartan: f64,
    /// Straight-line residuals after carrying an extremal pair of
    /// samples to the origin and infinity.
    pub line_v_residual: f64,
    pub line_collinearity: f64,
    /// The fitted chain when the verdict is Chain.
    pub fitted_chain: Option<crate::chains::Chain>,
}

/// Decide whether a closed boundary curve is a chain, an R-circle, or
/// neither.  Chains are recognized by an exact polar fit, R-circles by
/// vanishing Legendrian defect and Cartan invariants together with
/// straightness in a normalized chart.  Nothing is forced: a curve
/// failing both tests is reported as Neither with its residuals.
pub fn classify_curve(
    curve: &dyn BoundaryCurve,
    params: &ClassifyParams,
) -> Result<CurveClassification> {
    let n = params.grid.max(8);
    let form = curve.form();
    let mut reps = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let mut max_defect = 0.0f64;
    for k in 0..n {
        let t = k as f64 / n as f64;
        let (w, dw, _) = curve.lift2(t);
        let cross = boxtimes(form, &w, &dw);
        if vec_norm(&cross) <= 1e-12 * vec_norm(&w) * vec_norm(&dw).max(1.0) {
            return Err(GeomError::IrregularCurve { t });
        }
        max_defect = max_defect.max(legendrian_defect(curve, t));
        points.push(BoundaryPoint::from_vec(form, &w, 1e-6)?);
        reps.push(w);
    }

    let fit = fit_chain(form, &reps)?;

    let cartan_vals = cartan_samples(&points, params.triples, params.seed);
    let max_cartan = cartan_vals.iter().copied().fold(0.0f64, f64::max);

    // carry a far-apart pair to the origin and infinity, then measure
    // straightness of the remaining chart positions
    let (mut bi, mut bj, mut best) = (0usize, 1usize, -1.0f64);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = chordal_dist(&points[i], &points[j]);
            if d > best {
                (bi, bj, best) = (i, j, d);
            }
        }
    }
    let h = pair_to_standard(&points[bi], &points[bj])?;
    let chart: Vec<HeisenbergPoint> = points
        .iter()
        .map(|p| {
            let q = p.to_form(FormTag::Form2);
            let moved = BoundaryPoint::new(FormTag::Form2, h.apply(q.point()), 1e-6)
                .expect("unitary image of a null point");
            heis_project(&moved)
        })
        .collect();
    let line = fit_horizontal_line(&chart);

    let is_chain = fit.residual <= params.tol && fit.polar_class == SignClass::Positive;
    let is_rcircle = max_defect <= params.tol
        && max_cartan <= params.tol.max(1e-8)
        && line.v_residual <= params.tol
        && line.collinearity <= params.tol;
    let (verdict, fitted_chain) = if is_chain {
        let chain = crate::chains::Chain::from_polar(form, fit.polar)?;
        (CurveVerdict::Chain, Some(chain))
    } else if is_rcircle {
        (CurveVerdict::RCircle, None)
    } else {
        (CurveVerdict::Neither, None)
    };
    Ok(CurveClassification {
        verdict,
        chain_residual: fit.residual,
        chain_polar_class: fit.polar_class,
        max_legendrian_defect: max_defect,
        max_cartan,
        line_v_residual: line.v_residual,
        line_collinearity: line.collinearity,
        fitted_chain,
    })
}
