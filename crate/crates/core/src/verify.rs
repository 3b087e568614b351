//! Named self-check suites behind the command-line `verify` command.
//! Each suite draws seeded random cases, measures a worst residual,
//! and passes or fails against its tolerance.

use crate::boundary::{heis_project, BoundaryPoint, HeisenbergPoint};
use crate::chains::{chain_diameter, chain_through, Chain};
use crate::curves::{
    chart_contact_defect, chart_lift2, classify_curve, plane_curvature, tangent_chain,
    vertical_projection, BoundaryCurve, ClassifyParams, CurveVerdict, TangentChain,
    TransformedCurve,
};
use crate::error::{GeomError, Result};
use crate::hermitian::{
    boxtimes, cayley_apply, cayley_matrix, herm_inner, CayleyDirection, FormTag,
};
use crate::isometry::normalize_loxodromic;
use crate::projective::{ProjMap, ProjPoint};
use crate::sampling::{form_inverse, Sampler};
use crate::{cr, vec_dot, vec_norm, CMat3, CVec3, C};
use serde::Serialize;

pub const SUITE_NAMES: &[&str] = &[
    "cross-product",
    "cayley",
    "tangent-chain",
    "legendrian",
    "contraction",
    "curvature",
    "normal-form",
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Run one named suite, or every suite for "all".  Unknown names get an
/// error listing the valid ones.
pub fn run_suites(
    name: &str,
    samples: usize,
    tol: Option<f64>,
    seed: u64,
) -> Result<Vec<SuiteReport>> {
    let single = |n: &str| -> Result<SuiteReport> {
        Ok(match n {
            "cross-product" => cross_product_suite(samples, tol.unwrap_or(1e-9), seed),
            "cayley" => cayley_suite(samples, tol.unwrap_or(1e-12), seed),
            "tangent-chain" => tangent_chain_suite(samples, tol.unwrap_or(1e-9), seed),
            "legendrian" => legendrian_suite(samples, tol.unwrap_or(1e-10), seed),
            "contraction" => contraction_suite(samples, tol.unwrap_or(1e-3), seed),
            "curvature" => curvature_suite(samples, tol.unwrap_or(1e-6), seed),
            "normal-form" => normal_form_suite(samples, tol.unwrap_or(1e-7), seed),
            other => {
                return Err(GeomError::InvalidInput(format!(
                    "unknown suite {other:?}; expected one of {}, or all",
                    SUITE_NAMES.join(", ")
                )))
            }
        })
    };
    if name == "all" {
        SUITE_NAMES.iter().map(|n| single(n)).collect()
    } else {
        Ok(vec![single(name)?])
    }
}

fn proj_dist(a: &ProjPoint, b: &ProjPoint) -> f64 {
    (1.0 - vec_dot(a.rep(), b.rep()).norm()).max(0.0)
}

/// Orthogonality and the pairing identity for cross products.
fn cross_product_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let mut worst = 0.0f64;
    for form in [FormTag::Form1, FormTag::Form2] {
        for _ in 0..samples {
            let z = s.vector(1.0);
            let w = s.vector(1.0);
            let x = boxtimes(form, &z, &w);
            let nz = vec_norm(&z).max(1e-300);
            let nw = vec_norm(&w).max(1e-300);
            let o1 = herm_inner(form, &x, &z).norm() / (nz * nz * nw);
            let o2 = herm_inner(form, &x, &w).norm() / (nz * nw * nw);
            let lhs = herm_inner(form, &x, &x);
            let rhs = herm_inner(form, &w, &z) * herm_inner(form, &z, &w)
                - herm_inner(form, &w, &w) * herm_inner(form, &z, &z);
            let lag = (lhs - rhs).norm() / (nz * nz * nw * nw);
            worst = worst.max(o1).max(o2).max(lag);
        }
    }
    SuiteReport {
        name: "cross-product".into(),
        passed: worst <= tol,
        cases: 2 * samples,
        worst,
        tolerance: tol,
        detail: "orthogonality and pairing identity of the cross product".into(),
    }
}

/// The model interchange is an isometry of pairings and an involution.
fn cayley_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let cm = cayley_matrix();
    let mut worst = (cm * cm - CMat3::identity()).norm();
    for _ in 0..samples {
        let z = s.vector(1.0);
        let w = s.vector(1.0);
        let cz = cayley_apply(&z, CayleyDirection::SiegelToBall);
        let cw = cayley_apply(&w, CayleyDirection::SiegelToBall);
        let a = herm_inner(FormTag::Form1, &cz, &cw);
        let b = herm_inner(FormTag::Form2, &z, &w);
        let scale = (vec_norm(&z) * vec_norm(&w)).max(1e-300);
        worst = worst.max((a - b).norm() / scale);
    }
    SuiteReport {
        name: "cayley".into(),
        passed: worst <= tol,
        cases: samples + 1,
        worst,
        tolerance: tol,
        detail: "pairing intertwining and involution of the model change".into(),
    }
}

/// Tangent chains commute with unitary maps, projectively.
fn tangent_chain_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    let mut attempts = 0usize;
    while cases < samples && attempts < samples * 50 + 100 {
        let path = s.chart_path(2);
        let g = ProjMap::new(&s.unitary(FormTag::Form2)).expect("unitary is invertible");
        let moved = TransformedCurve {
            inner: &path,
            map: g,
        };
        for _ in 0..8 {
            if cases >= samples {
                break;
            }
            attempts += 1;
            let t = s.uniform(0.0, 1.0);
            let (Ok(a), Ok(b)) = (tangent_chain(&path, t, 1e-12), tangent_chain(&moved, t, 1e-12))
            else {
                continue;
            };
            let pa = match a {
                TangentChain::Chain(Chain::Polar { polar, .. }) => g.apply(&polar),
                TangentChain::Degenerate(p) => g.apply(p.point()),
                TangentChain::Chain(Chain::Degenerate(_)) => continue,
            };
            let pb = match b {
                TangentChain::Chain(Chain::Polar { polar, .. }) => polar,
                TangentChain::Degenerate(p) => *p.point(),
                TangentChain::Chain(Chain::Degenerate(_)) => continue,
            };
            worst = worst.max(proj_dist(&pa, &pb));
            cases += 1;
        }
    }
    SuiteReport {
        name: "tangent-chain".into(),
        passed: worst <= tol && cases == samples,
        cases,
        worst,
        tolerance: tol,
        detail: "unitary equivariance of the tangent chain".into(),
    }
}

/// The chart defect, the pairing defect, and the tangent-polar nullity
/// vanish together and separate together.
fn legendrian_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let separation = 1e-2;
    let mut worst = 0.0f64;
    for k in 0..samples {
        let zeta = s.complex(0.55);
        let v = s.uniform(-1.0, 1.0);
        let dz = loop {
            let d = s.complex(0.7);
            if d.norm() > 0.3 {
                break d;
            }
        };
        let base = -2.0 * (zeta.conj() * dz).im;
        let legendrian = k % 2 == 0;
        let dv = if legendrian {
            base
        } else {
            let sign = if s.uniform(-1.0, 1.0) < 0.0 { -1.0 } else { 1.0 };
            base + sign * s.uniform(3.0, 6.0)
        };
        let (w, dw, _) = chart_lift2(zeta, v, dz, dv, cr(0.0), 0.0);
        let nw = vec_norm(&w);
        let nd = vec_norm(&dw);
        let i1 = chart_contact_defect(zeta, dz, dv).abs() / (1.0 + zeta.norm_sqr());
        let i2 = herm_inner(FormTag::Form2, &dw, &w).norm() / (nw * nd);
        let x = boxtimes(FormTag::Form2, &w, &dw);
        let i3 = herm_inner(FormTag::Form2, &x, &x).norm() / (nw * nw * nd * nd);
        if legendrian {
            worst = worst.max(i1).max(i2).max(i3);
        } else if i1 < separation || i2 < separation || i3 < separation {
            worst = f64::INFINITY;
        }
    }
    SuiteReport {
        name: "legendrian".into(),
        passed: worst <= tol,
        cases: samples,
        worst,
        tolerance: tol,
        detail: "three-way agreement of the Legendrian tests".into(),
    }
}

/// Iterating a strong contraction shrinks chains monotonically.
fn contraction_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let rounds = (samples / 100).clamp(1, 20);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for _ in 0..rounds {
        // chart multiplier of modulus at most 1/4
        let factor = s.uniform(2.0, 3.0);
        let core = CMat3::from_diagonal(&CVec3::new(cr(1.0 / factor), cr(1.0), cr(factor)));
        let k = s.unitary(FormTag::Form2);
        let g = ProjMap::new(&(k * core * form_inverse(FormTag::Form2, &k)))
            .expect("unitary conjugate is invertible");
        let p = s.null_point(FormTag::Form2);
        let q = s.null_point(FormTag::Form2);
        let Ok(mut chain) = chain_through(&p, &q, 1e-9) else {
            continue;
        };
        let mut last = f64::INFINITY;
        let mut reached = false;
        for n in 0..100 {
            chain = chain.transformed(&g);
            let d = chain_diameter(&chain, 256);
            if n >= 10 && d > 1e-12 {
                // allow sampling-grid slack on the monotone decrease
                worst = worst.max(d / last - 1.0);
            }
            last = d;
            if d < tol {
                reached = true;
                break;
            }
        }
        if !reached {
            worst = f64::INFINITY;
        }
        cases += 1;
    }
    SuiteReport {
        name: "contraction".into(),
        passed: worst <= 5e-3 && cases > 0,
        cases,
        worst,
        tolerance: tol,
        detail: "chain diameters contract under strong loxodromic maps".into(),
    }
}

/// An infinite R-circle drawn in the chart, for projection tests.
struct HeisLine {
    base: (C, f64),
    theta: f64,
}

impl BoundaryCurve for HeisLine {
    fn form(&self) -> FormTag {
        FormTag::Form2
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        let dir = C::from_polar(1.0, self.theta);
        let (zb, vb) = self.base;
        let slope = -2.0 * (zb.conj() * dir).im;
        chart_lift2(zb + dir * cr(t), vb + slope * t, dir, slope, cr(0.0), 0.0)
    }
}

/// Projected curvature scales inversely with chart similarities, and
/// straight R-circles project to zero curvature.  The straight-line
/// defect is weighted into the shared tolerance at its tighter band,
/// 1e-10 when the tolerance is left at 1e-6.
fn curvature_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let mut worst = 0.0f64;
    let lambdas = [
        cr(0.5),
        cr(1.0 / 3.0),
        C::from_polar(0.5, std::f64::consts::FRAC_PI_4),
    ];
    let cases = samples.clamp(1, 2000);
    for _ in 0..cases {
        let path = s.chart_path(2);
        // keep away from inflection points so relative errors are meaningful
        let (t, base_k) = loop {
            let t = s.uniform(0.0, 1.0);
            let (_, d1, d2) = vertical_projection(&path, t).expect("chart path stays finite");
            let k = plane_curvature(d1, d2).expect("chart path is regular");
            if k.abs() > 1e-2 {
                break (t, k);
            }
        };
        for lambda in lambdas {
            let mut scale = cr(1.0);
            for _ in 1..=5 {
                scale *= lambda;
                let scaled = path.scaled(scale);
                let (_, d1, d2) =
                    vertical_projection(&scaled, t).expect("scaling keeps finiteness");
                let k = plane_curvature(d1, d2).expect("scaling keeps regularity");
                let expected = base_k / scale.norm();
                worst = worst.max((k - expected).abs() / expected.abs());
            }
        }
        let line = HeisLine {
            base: (s.complex(1.0), s.uniform(-1.0, 1.0)),
            theta: s.uniform(0.0, std::f64::consts::TAU),
        };
        let (_, d1, d2) = vertical_projection(&line, s.uniform(-1.0, 1.0)).expect("line is finite");
        let k = plane_curvature(d1, d2).expect("line is regular");
        worst = worst.max(k.abs() * (tol / 1e-10));
    }
    SuiteReport {
        name: "curvature".into(),
        passed: worst <= tol,
        cases,
        worst,
        tolerance: tol,
        detail: "inverse scaling of projected curvature under similarities".into(),
    }
}

/// Closed reparametrization of a chart line: rescaling the affine lift
/// by cos^2(pi t) closes the loop through infinity at t = 1/2.
struct ClosedLineLoop {
    line: HeisLine,
}

impl BoundaryCurve for ClosedLineLoop {
    fn form(&self) -> FormTag {
        FormTag::Form2
    }

    fn lift2(&self, t: f64) -> (CVec3, CVec3, CVec3) {
        let p = std::f64::consts::PI;
        let (sn, cs) = (p * t).sin_cos();
        let c2 = cs * cs;
        let s2 = 2.0 * sn * cs * p;
        let (w, dw, ddw) = self.line.lift2((p * t).tan());
        let dt = p / c2;
        let ddt = 2.0 * p * p * sn / (c2 * cs);
        let u = w * cr(c2);
        let du = dw * cr(dt * c2) - w * cr(s2);
        let ddu = ddw * cr(dt * dt * c2) + dw * cr(ddt * c2)
            - dw * cr(2.0 * dt * s2)
            - w * cr(2.0 * p * p * (c2 - sn * sn));
        (u, du, ddu)
    }
}

/// Loxodromic normal form: the conjugated action is diagonal on
/// probes, and the invariant axis of a real multiplier is an R-circle.
fn normal_form_suite(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let conjugates = samples.clamp(1, 200);
    let mut worst = 0.0f64;
    for _ in 0..conjugates {
        let g = s.loxodromic(FormTag::Form2);
        let Ok(data) = normalize_loxodromic(FormTag::Form2, &g, 1e-8) else {
            worst = f64::INFINITY;
            continue;
        };
        let h = &data.conjugator;
        let d = ProjMap::new(&CMat3::from_diagonal(&CVec3::new(
            data.diagonal[(0, 0)],
            data.diagonal[(1, 1)],
            data.diagonal[(2, 2)],
        )))
        .expect("diagonal of a loxodromic map is invertible");
        let gm = ProjMap::new(&g).expect("unitary input is invertible");
        for _ in 0..10 {
            let x = s.null_point(FormTag::Form2);
            // h g x must equal d h x
            let lhs = h.apply(&gm.apply(x.point()));
            let rhs = d.apply(&h.apply(x.point()));
            worst = worst.max(proj_dist(&lhs, &rhs));
        }
    }

    // a real-multiplier map leaves a chart line invariant, and the
    // pulled-back loop through infinity classifies as an R-circle
    let theta = 0.7;
    let core = CMat3::from_diagonal(&CVec3::new(cr(0.5), cr(1.0), cr(2.0)));
    let k = s.unitary(FormTag::Form2);
    let g = k * core * form_inverse(FormTag::Form2, &k);
    let data = normalize_loxodromic(FormTag::Form2, &g, 1e-8).expect("dilation conjugate");
    let gm = ProjMap::new(&g).expect("unitary conjugate is invertible");
    let loop_curve = ClosedLineLoop {
        line: HeisLine {
            base: (cr(0.0), 0.0),
            theta,
        },
    };
    let pulled = TransformedCurve {
        inner: &loop_curve,
        map: data.conjugator.inverse(),
    };
    let mut invariance = 0.0f64;
    for i in 0..32 {
        let t = i as f64 / 32.0;
        if (t - 0.5).abs() < 0.03 {
            continue;
        }
        let (w, _, _) = pulled.lift2(t);
        let p = ProjPoint::new(&w).expect("loop lift is nonzero");
        // the image must land back on the line, checked in the
        // normalized chart
        let back = data.conjugator.apply(&gm.apply(&p));
        let b = BoundaryPoint::new(FormTag::Form2, back, 1e-6).expect("image stays null");
        if let HeisenbergPoint::Finite { zeta, v } = heis_project(&b) {
            let off = (zeta * C::from_polar(1.0, -theta)).im.abs() + v.abs();
            invariance = invariance.max(off / (1.0 + zeta.norm_sqr() + v.abs()));
        }
    }
    worst = worst.max(invariance);
    let classified = classify_curve(
        &pulled,
        &ClassifyParams {
            tol: 1e-6,
            ..Default::default()
        },
    );
    if !matches!(classified, Ok(ref c) if c.verdict == CurveVerdict::RCircle) {
        worst = f64::INFINITY;
    }

    SuiteReport {
        name: "normal-form".into(),
        passed: worst <= tol,
        cases: conjugates,
        worst,
        tolerance: tol,
        detail: "diagonal action after conjugation and the invariant axis".into(),
    }
}
