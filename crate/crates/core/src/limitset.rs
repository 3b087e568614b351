//! Limit-set sampling for finitely generated subgroups, and the
//! classifier deciding whether a sampled limit set is elementary, a
//! chain, an R-circle, or none of those.

use crate::boundary::{ball_rep, chordal_dist, heis_project, pair_to_standard, BoundaryPoint, HeisenbergPoint};
use crate::error::{GeomError, Result};
use crate::fitting::{cartan_samples, fit_chain, fit_horizontal_line};
use crate::hermitian::{is_form_unitary, null_residual, FormTag, SignClass};
use crate::sampling::form_inverse;
use crate::{cr, CMat3, CVec3};
use std::collections::HashMap;

/// A finitely generated group of form-unitary matrices.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    form: FormTag,
    generators: Vec<CMat3>,
}

impl GroupPresentation {
    pub fn new(form: FormTag, generators: Vec<CMat3>) -> Result<GroupPresentation> {
        if generators.is_empty() {
            return Err(GeomError::InvalidInput(
                "a group presentation needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if !is_form_unitary(form, g, 1e-9)? {
                return Err(GeomError::NotUnitary {
                    defect: crate::hermitian::unitarity_defect(form, g),
                });
            }
        }
        Ok(GroupPresentation { form, generators })
    }

    pub fn form(&self) -> FormTag {
        self.form
    }

    pub fn generators(&self) -> &[CMat3] {
        &self.generators
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LimitSetParams {
    /// Longest reduced word applied to the base point.
    pub max_word_length: usize,
    /// Keep an orbit point once its relative pairing with itself is
    /// this close to null.
    pub null_tol: f64,
    /// Merge radius for the greedy deduplication, measured in the
    /// chordal metric.
    pub dedup_tol: f64,
}

impl Default for LimitSetParams {
    fn default() -> Self {
        LimitSetParams {
            max_word_length: 12,
            null_tol: 1e-3,
            dedup_tol: 1e-4,
        }
    }
}

/// Sampled limit set, in breadth-first word order after deduplication,
/// together with the enumeration counters that make a run auditable.
#[derive(Debug, Clone)]
pub struct LimitSample {
    pub form: FormTag,
    pub points: Vec<BoundaryPoint>,
    pub words_visited: usize,
    pub candidates_kept: usize,
    pub duplicates_merged: usize,
}

/// Interior base point whose orbit is collected, per model.
pub fn default_base(form: FormTag) -> CVec3 {
    match form {
        FormTag::Form1 => CVec3::new(cr(0.0), cr(0.0), cr(1.0)),
        FormTag::Form2 => CVec3::new(cr(-1.0), cr(0.0), cr(1.0)),
    }
}

/// Orbit points close to the boundary, radially projected onto it.
///
/// Reduced words (no letter followed by its inverse) are enumerated
/// depth-first carrying matrix products, then ordered by word length;
/// within a length the order is the lexicographic one on letters, so
/// the output order is the breadth-first order, reproducibly.
pub fn sample_limit_set(group: &GroupPresentation, params: &LimitSetParams) -> LimitSample {
    let letters: Vec<CMat3> = group
        .generators
        .iter()
        .flat_map(|g| [*g, form_inverse(group.form, g)])
        .collect();
    // letter 2k and 2k+1 are mutually inverse
    let partner = |i: usize| i ^ 1;
    let base = default_base(group.form);

    let mut words_visited = 0usize;
    let mut candidates: Vec<(usize, CVec3)> = Vec::new();
    // depth-first over reduced words, keeping products on a stack
    let mut stack: Vec<(CMat3, usize, usize)> = letters
        .iter()
        .enumerate()
        .rev()
        .map(|(i, m)| (*m, i, 1))
        .collect();
    while let Some((m, last, len)) = stack.pop() {
        words_visited += 1;
        let image = m * base;
        if null_residual(group.form, &image) <= params.null_tol {
            candidates.push((len, image));
        }
        if len < params.max_word_length {
            for i in (0..letters.len()).rev() {
                if i != partner(last) {
                    stack.push((m * letters[i], i, len + 1));
                }
            }
        }
    }
    candidates.sort_by_key(|(len, _)| *len);

    // greedy merge in order, bucketing ball coordinates on a grid so
    // only neighboring cells are compared
    let cell = params.dedup_tol.max(1e-12);
    let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    let mut kept: Vec<BoundaryPoint> = Vec::new();
    let mut coords: Vec<[f64; 4]> = Vec::new();
    let mut duplicates_merged = 0usize;
    for (_, raw) in &candidates {
        let Ok(point) = project_to_boundary(group.form, raw) else {
            continue;
        };
        let ball = point.to_form(FormTag::Form1);
        let (b1, b2) = ball_rep(&ball);
        let x = [b1.re, b1.im, b2.re, b2.im];
        let key = |x: &[f64; 4]| -> [i64; 4] {
            [
                (x[0] / cell).floor() as i64,
                (x[1] / cell).floor() as i64,
                (x[2] / cell).floor() as i64,
                (x[3] / cell).floor() as i64,
            ]
        };
        let base_key = key(&x);
        let mut duplicate = false;
        'cells: for d0 in -1..=1i64 {
            for d1 in -1..=1i64 {
                for d2 in -1..=1i64 {
                    for d3 in -1..=1i64 {
                        let k = [
                            base_key[0] + d0,
                            base_key[1] + d1,
                            base_key[2] + d2,
                            base_key[3] + d3,
                        ];
                        let Some(bucket) = grid.get(&k) else {
                            continue;
                        };
                        for &idx in bucket {
                            let y = &coords[idx];
                            let dist2 = (0..4).map(|a| (x[a] - y[a]).powi(2)).sum::<f64>();
                            if dist2 <= cell * cell {
                                duplicate = true;
                                break 'cells;
                            }
                        }
                    }
                }
            }
        }
        if duplicate {
            duplicates_merged += 1;
            continue;
        }
        grid.entry(base_key).or_default().push(coords.len());
        coords.push(x);
        kept.push(point);
    }

    LimitSample {
        form: group.form,
        points: kept,
        words_visited,
        candidates_kept: candidates.len(),
        duplicates_merged,
    }
}

/// Exact boundary point nearest to an almost-null vector along the
/// radial direction of the ball model.
fn project_to_boundary(form: FormTag, raw: &CVec3) -> Result<BoundaryPoint> {
    let ball = match form {
        FormTag::Form1 => *raw,
        FormTag::Form2 => crate::hermitian::cayley_matrix() * raw,
    };
    let u1 = ball[0] / ball[2];
    let u2 = ball[1] / ball[2];
    let n = (u1.norm_sqr() + u2.norm_sqr()).sqrt();
    if n <= 1e-8 {
        return Err(GeomError::ZeroVector);
    }
    let lifted = CVec3::new(u1 / cr(n), u2 / cr(n), cr(1.0));
    let out = match form {
        FormTag::Form1 => lifted,
        FormTag::Form2 => crate::hermitian::cayley_matrix() * lifted,
    };
    BoundaryPoint::from_vec(form, &out, 1e-10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVerdict {
    /// At most two limit points: the group is elementary.
    Elementary,
    Chain,
    RCircle,
    /// Neither test passed; no dichotomy is forced on the data.
    Unknown,
}

impl LimitVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            LimitVerdict::Elementary => "elementary",
            LimitVerdict::Chain => "chain",
            LimitVerdict::RCircle => "rcircle",
            LimitVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LimitClassifyParams {
    pub tol: f64,
    pub cartan_tol: f64,
    /// Random triples drawn for the Cartan statistic.
    pub triples: usize,
    pub seed: u64,
    /// Fraction of triples that must look R-circle-like.
    pub cartan_fraction: f64,
}

impl Default for LimitClassifyParams {
    fn default() -> Self {
        LimitClassifyParams {
            tol: 1e-6,
            cartan_tol: 1e-6,
            triples: 10_000,
            seed: 2024,
            cartan_fraction: 0.99,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitClassification {
    pub verdict: LimitVerdict,
    pub point_count: usize,
    pub chain_residual: f64,
    pub chain_polar_class: Option<SignClass>,
    /// Fraction of sampled triples with |Cartan| below the tolerance.
    pub cartan_small_fraction: f64,
    pub line_v_residual: f64,
    pub line_collinearity: f64,
    pub fitted_chain: Option<crate::chains::Chain>,
}

/// Decide what a sampled limit set is.  Small samples are elementary;
/// otherwise a chain is recognized by its polar fit and an R-circle by
/// Cartan statistics plus straightness after sending an extremal pair
/// of points to the origin and infinity.
pub fn classify_limit_sample(
    sample: &LimitSample,
    params: &LimitClassifyParams,
) -> Result<LimitClassification> {
    let points = &sample.points;
    let mut out = LimitClassification {
        verdict: LimitVerdict::Unknown,
        point_count: points.len(),
        chain_residual: f64::INFINITY,
        chain_polar_class: None,
        cartan_small_fraction: 0.0,
        line_v_residual: f64::INFINITY,
        line_collinearity: f64::INFINITY,
        fitted_chain: None,
    };
    if points.len() <= 2 {
        out.verdict = LimitVerdict::Elementary;
        return Ok(out);
    }

    let reps: Vec<CVec3> = points.iter().map(|p| *p.rep()).collect();
    let fit = fit_chain(sample.form, &reps)?;
    out.chain_residual = fit.residual;
    out.chain_polar_class = Some(fit.polar_class);
    if fit.residual <= params.tol && fit.polar_class == SignClass::Positive {
        out.verdict = LimitVerdict::Chain;
        out.fitted_chain = Some(crate::chains::Chain::from_polar(sample.form, fit.polar)?);
        return Ok(out);
    }

    let vals = cartan_samples(points, params.triples, params.seed);
    if !vals.is_empty() {
        let small = vals.iter().filter(|a| **a <= params.cartan_tol).count();
        out.cartan_small_fraction = small as f64 / vals.len() as f64;
    }

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
    out.line_v_residual = line.v_residual;
    out.line_collinearity = line.collinearity;

    if out.cartan_small_fraction >= params.cartan_fraction
        && line.v_residual <= params.tol
        && line.collinearity <= params.tol
    {
        out.verdict = LimitVerdict::RCircle;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjPoint;
    use crate::{c, C};

    fn diag(d1: C, d2: C, d3: C) -> CMat3 {
        CMat3::from_diagonal(&CVec3::new(d1, d2, d3))
    }

    #[test]
    fn group_validation_rejects_non_unitary_generators() {
        let bad = diag(cr(2.0), cr(1.0), cr(2.0));
        assert!(matches!(
            GroupPresentation::new(FormTag::Form2, vec![bad]),
            Err(GeomError::NotUnitary { .. })
        ));
        assert!(GroupPresentation::new(FormTag::Form2, Vec::new()).is_err());
    }

    #[test]
    fn identity_group_has_an_empty_sample() {
        let group = GroupPresentation::new(FormTag::Form2, vec![CMat3::identity()]).unwrap();
        let sample = sample_limit_set(
            &group,
            &LimitSetParams {
                max_word_length: 6,
                ..Default::default()
            },
        );
        assert!(sample.points.is_empty());
        let verdict = classify_limit_sample(&sample, &LimitClassifyParams::default()).unwrap();
        assert_eq!(verdict.verdict, LimitVerdict::Elementary);
    }

    #[test]
    fn cyclic_dilation_limits_to_its_two_fixed_points() {
        let group =
            GroupPresentation::new(FormTag::Form2, vec![diag(cr(0.5), cr(1.0), cr(2.0))]).unwrap();
        let sample = sample_limit_set(
            &group,
            &LimitSetParams {
                max_word_length: 30,
                ..Default::default()
            },
        );
        assert_eq!(sample.points.len(), 2, "{:?}", sample.points);
        let origin = ProjPoint::new(&CVec3::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
        let inf = ProjPoint::new(&CVec3::new(cr(1.0), cr(0.0), cr(0.0))).unwrap();
        assert!(sample
            .points
            .iter()
            .any(|p| p.point().approx_eq(&origin, 1e-4)));
        assert!(sample.points.iter().any(|p| p.point().approx_eq(&inf, 1e-4)));
        let verdict = classify_limit_sample(&sample, &LimitClassifyParams::default()).unwrap();
        assert_eq!(verdict.verdict, LimitVerdict::Elementary);
    }

    #[test]
    fn sampling_is_deterministic() {
        let group =
            GroupPresentation::new(FormTag::Form2, vec![diag(cr(0.5), cr(1.0), cr(2.0))]).unwrap();
        let params = LimitSetParams {
            max_word_length: 18,
            ..Default::default()
        };
        let a = sample_limit_set(&group, &params);
        let b = sample_limit_set(&group, &params);
        assert_eq!(a.points.len(), b.points.len());
        for (p, q) in a.points.iter().zip(&b.points) {
            assert_eq!(p.rep(), q.rep());
        }
        assert_eq!(a.words_visited, b.words_visited);
    }

    #[test]
    fn word_count_matches_the_reduced_growth() {
        // one generator: 2 reduced words per positive length
        let group =
            GroupPresentation::new(FormTag::Form2, vec![diag(cr(0.5), cr(1.0), cr(2.0))]).unwrap();
        let sample = sample_limit_set(
            &group,
            &LimitSetParams {
                max_word_length: 9,
                ..Default::default()
            },
        );
        assert_eq!(sample.words_visited, 18);
    }

    #[test]
    fn vertical_chain_block_group_limits_to_a_chain() {
        // two loxodromic maps preserving the zeta = 0 chain: a dilation
        // and a rotation of the v-axis mixing it with the unit circle
        let a = diag(cr(0.25), cr(1.0), cr(4.0));
        let ch = 17.0 / 8.0;
        let sh = 15.0 / 8.0;
        let mut b = CMat3::zeros();
        b[(0, 0)] = cr(ch);
        b[(0, 2)] = c(0.0, sh);
        b[(1, 1)] = cr(1.0);
        b[(2, 0)] = c(0.0, -sh);
        b[(2, 2)] = cr(ch);
        let group = GroupPresentation::new(FormTag::Form2, vec![a, b]).unwrap();
        let sample = sample_limit_set(
            &group,
            &LimitSetParams {
                max_word_length: 10,
                ..Default::default()
            },
        );
        assert!(sample.points.len() > 50, "only {} points", sample.points.len());
        let verdict = classify_limit_sample(&sample, &LimitClassifyParams::default()).unwrap();
        assert_eq!(verdict.verdict, LimitVerdict::Chain, "{verdict:?}");
        let chain = verdict.fitted_chain.unwrap();
        let crate::chains::Chain::Polar { polar, .. } = chain else {
            panic!()
        };
        let expect = ProjPoint::new(&CVec3::new(cr(0.0), cr(1.0), cr(0.0))).unwrap();
        assert!(polar.approx_eq(&expect, 1e-6));
    }

    #[test]
    fn conjugated_block_group_still_fits_its_chain() {
        // push the chain group off the standard position and re-test
        let a = diag(cr(0.25), cr(1.0), cr(4.0));
        let ch = 17.0 / 8.0;
        let sh = 15.0 / 8.0;
        let mut b = CMat3::zeros();
        b[(0, 0)] = cr(ch);
        b[(0, 2)] = c(0.0, sh);
        b[(1, 1)] = cr(1.0);
        b[(2, 0)] = c(0.0, -sh);
        b[(2, 2)] = cr(ch);
        let mut s = crate::sampling::Sampler::new(31);
        let k = s.unitary(FormTag::Form2);
        let ki = form_inverse(FormTag::Form2, &k);
        let group =
            GroupPresentation::new(FormTag::Form2, vec![k * a * ki, k * b * ki]).unwrap();
        let sample = sample_limit_set(
            &group,
            &LimitSetParams {
                max_word_length: 10,
                ..Default::default()
            },
        );
        let verdict = classify_limit_sample(&sample, &LimitClassifyParams::default()).unwrap();
        assert_eq!(verdict.verdict, LimitVerdict::Chain, "{verdict:?}");
    }
}
