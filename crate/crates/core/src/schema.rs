//! Wire formats: JSON shapes for matrices, groups, circles, and
//! curves, plus the chart CSV dialect.  Complex numbers travel as
//! [re, im] pairs, matrices as nine row-major pairs, Heisenberg points
//! as [re, im, v] triples with a literal `inf` row for infinity.

use crate::boundary::{ball_rep, heis_embed, heis_project, BoundaryPoint, HeisenbergPoint};
use crate::chains::{Chain, RCircleSpec};
use crate::error::{GeomError, Result};
use crate::hermitian::FormTag;
use crate::limitset::GroupPresentation;
use crate::projective::{ProjMap, ProjPoint};
use crate::{c, cr, CMat3, CVec3, C};
use serde::{Deserialize, Serialize};

pub fn form_name(form: FormTag) -> &'static str {
    match form {
        FormTag::Form1 => "form1",
        FormTag::Form2 => "form2",
    }
}

pub fn form_from_name(name: &str) -> Result<FormTag> {
    match name {
        "form1" => Ok(FormTag::Form1),
        "form2" => Ok(FormTag::Form2),
        other => Err(GeomError::InvalidInput(format!(
            "unknown form {other:?}; expected form1 or form2"
        ))),
    }
}

pub fn complex_to_pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_from_pair(p: [f64; 2]) -> C {
    c(p[0], p[1])
}

pub fn vec_to_pairs(v: &CVec3) -> Vec<[f64; 2]> {
    (0..3).map(|i| complex_to_pair(v[i])).collect()
}

pub fn vec_from_pairs(pairs: &[[f64; 2]]) -> Result<CVec3> {
    if pairs.len() != 3 {
        return Err(GeomError::InvalidInput(format!(
            "vector needs 3 complex entries, got {}",
            pairs.len()
        )));
    }
    Ok(CVec3::new(
        complex_from_pair(pairs[0]),
        complex_from_pair(pairs[1]),
        complex_from_pair(pairs[2]),
    ))
}

/// Row-major complex entries.
pub fn mat_to_pairs(m: &CMat3) -> Vec<[f64; 2]> {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| complex_to_pair(m[(i, j)])))
        .collect()
}

pub fn mat_from_pairs(pairs: &[[f64; 2]]) -> Result<CMat3> {
    if pairs.len() != 9 {
        return Err(GeomError::InvalidInput(format!(
            "matrix needs 9 complex entries, got {}",
            pairs.len()
        )));
    }
    let mut m = CMat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = complex_from_pair(pairs[3 * i + j]);
        }
    }
    Ok(m)
}

/// A form-tagged matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDto {
    pub form: String,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDto {
    pub fn pack(form: FormTag, m: &CMat3) -> MatrixDto {
        MatrixDto {
            form: form_name(form).into(),
            entries: mat_to_pairs(m),
        }
    }

    pub fn unpack(&self) -> Result<(FormTag, CMat3)> {
        Ok((form_from_name(&self.form)?, mat_from_pairs(&self.entries)?))
    }
}

/// Generating set with a shared form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDto {
    pub form: String,
    pub generators: Vec<Vec<[f64; 2]>>,
}

impl GroupDto {
    pub fn pack(group: &GroupPresentation) -> GroupDto {
        GroupDto {
            form: form_name(group.form()).into(),
            generators: group.generators().iter().map(mat_to_pairs).collect(),
        }
    }

    pub fn unpack(&self) -> Result<GroupPresentation> {
        let form = form_from_name(&self.form)?;
        let gens = self
            .generators
            .iter()
            .map(|g| mat_from_pairs(g))
            .collect::<Result<Vec<_>>>()?;
        GroupPresentation::new(form, gens)
    }
}

/// Chains and R-circles on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CircleDto {
    #[serde(rename = "chain")]
    Chain { form: String, polar: Vec<[f64; 2]> },
    #[serde(rename = "rcircle-inf")]
    RCircleInf { base: [f64; 3], theta: f64 },
    #[serde(rename = "rcircle-fin")]
    RCircleFin { matrix: Vec<[f64; 2]> },
}

impl CircleDto {
    pub fn pack_chain(chain: &Chain) -> Result<CircleDto> {
        match chain {
            Chain::Polar { form, polar } => Ok(CircleDto::Chain {
                form: form_name(*form).into(),
                polar: vec_to_pairs(polar.rep()),
            }),
            Chain::Degenerate(_) => Err(GeomError::InvalidInput(
                "degenerate chains have no polar to serialize".into(),
            )),
        }
    }

    pub fn pack_rcircle(spec: &RCircleSpec) -> Result<CircleDto> {
        match spec {
            RCircleSpec::Infinite { base, theta } => match base {
                HeisenbergPoint::Finite { zeta, v } => Ok(CircleDto::RCircleInf {
                    base: [zeta.re, zeta.im, *v],
                    theta: *theta,
                }),
                HeisenbergPoint::Infinity => Err(GeomError::InvalidInput(
                    "infinite R-circle base must be finite".into(),
                )),
            },
            RCircleSpec::Finite { map } => Ok(CircleDto::RCircleFin {
                matrix: mat_to_pairs(map.matrix()),
            }),
        }
    }

    pub fn unpack_chain(&self) -> Result<Chain> {
        match self {
            CircleDto::Chain { form, polar } => {
                let form = form_from_name(form)?;
                let v = vec_from_pairs(polar)?;
                Chain::from_polar(form, ProjPoint::new(&v)?)
            }
            _ => Err(GeomError::InvalidInput("expected a chain object".into())),
        }
    }

    pub fn unpack_rcircle(&self) -> Result<RCircleSpec> {
        match self {
            CircleDto::RCircleInf { base, theta } => RCircleSpec::infinite(
                HeisenbergPoint::finite(c(base[0], base[1]), base[2]),
                *theta,
            ),
            CircleDto::RCircleFin { matrix } => {
                let m = mat_from_pairs(matrix)?;
                if !crate::hermitian::is_form_unitary(FormTag::Form2, &m, 1e-8)? {
                    return Err(GeomError::NotUnitary {
                        defect: crate::hermitian::unitarity_defect(FormTag::Form2, &m),
                    });
                }
                Ok(RCircleSpec::finite(ProjMap::new(&m)?))
            }
            CircleDto::Chain { .. } => {
                Err(GeomError::InvalidInput("expected an R-circle object".into()))
            }
        }
    }
}

/// Curve input: explicit chart samples or a named builtin.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CurveDto {
    #[serde(rename = "heis-samples")]
    HeisSamples { points: Vec<[f64; 3]> },
    #[serde(rename = "builtin")]
    Builtin { name: String },
}

/// Charts a CSV row can live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Ball,
    Siegel,
    Heisenberg,
}

impl Chart {
    pub fn name(&self) -> &'static str {
        match self {
            Chart::Ball => "ball",
            Chart::Siegel => "siegel",
            Chart::Heisenberg => "heisenberg",
        }
    }

    pub fn from_name(name: &str) -> Result<Chart> {
        match name {
            "ball" => Ok(Chart::Ball),
            "siegel" => Ok(Chart::Siegel),
            "heisenberg" => Ok(Chart::Heisenberg),
            other => Err(GeomError::InvalidInput(format!(
                "unknown chart {other:?}; expected ball, siegel, or heisenberg"
            ))),
        }
    }

    pub fn header(&self) -> &'static str {
        match self {
            Chart::Ball => "z1_re,z1_im,z2_re,z2_im",
            Chart::Siegel => "z1_re,z1_im,z2_re,z2_im,z3_re,z3_im",
            Chart::Heisenberg => "zeta_re,zeta_im,v",
        }
    }
}

fn parse_floats(line: &str) -> Result<Vec<f64>> {
    line.split(',')
        .map(|f| {
            f.trim().parse::<f64>().map_err(|_| {
                GeomError::InvalidInput(format!("bad numeric field {:?}", f.trim()))
            })
        })
        .collect()
}

/// Parse one CSV row to a boundary point.  Heisenberg rows may be the
/// literal `inf` row.
pub fn parse_chart_row(chart: Chart, line: &str) -> Result<BoundaryPoint> {
    match chart {
        Chart::Heisenberg => {
            if line.split(',').next().map(str::trim) == Some("inf") {
                return Ok(heis_embed(HeisenbergPoint::Infinity));
            }
            let f = parse_floats(line)?;
            if f.len() != 3 {
                return Err(GeomError::InvalidInput(format!(
                    "heisenberg rows have 3 fields, got {}",
                    f.len()
                )));
            }
            Ok(heis_embed(HeisenbergPoint::finite(c(f[0], f[1]), f[2])))
        }
        Chart::Ball => {
            let f = parse_floats(line)?;
            if f.len() != 4 {
                return Err(GeomError::InvalidInput(format!(
                    "ball rows have 4 fields, got {}",
                    f.len()
                )));
            }
            let (u1, u2) = (c(f[0], f[1]), c(f[2], f[3]));
            let n = (u1.norm_sqr() + u2.norm_sqr()).sqrt();
            if (n - 1.0).abs() > 1e-6 {
                return Err(GeomError::InvalidInput(format!(
                    "ball row lies off the unit sphere by {:.3e}",
                    (n - 1.0).abs()
                )));
            }
            let v = CVec3::new(u1 / cr(n), u2 / cr(n), cr(1.0));
            BoundaryPoint::from_vec(FormTag::Form1, &v, 1e-10)
        }
        Chart::Siegel => {
            let f = parse_floats(line)?;
            if f.len() != 6 {
                return Err(GeomError::InvalidInput(format!(
                    "siegel rows have 6 fields, got {}",
                    f.len()
                )));
            }
            let v = CVec3::new(c(f[0], f[1]), c(f[2], f[3]), c(f[4], f[5]));
            BoundaryPoint::from_vec(FormTag::Form2, &v, 1e-6)
        }
    }
}

/// Format a boundary point as one CSV row of the chart.
pub fn format_chart_row(chart: Chart, point: &BoundaryPoint) -> String {
    match chart {
        Chart::Heisenberg => match heis_project(point) {
            HeisenbergPoint::Infinity => "inf,inf,inf".into(),
            HeisenbergPoint::Finite { zeta, v } => {
                format!("{},{},{}", zeta.re, zeta.im, v)
            }
        },
        Chart::Ball => {
            let (u1, u2) = ball_rep(&point.to_form(FormTag::Form1));
            format!("{},{},{},{}", u1.re, u1.im, u2.re, u2.im)
        }
        Chart::Siegel => {
            let p = point.to_form(FormTag::Form2);
            let z = p.rep();
            format!(
                "{},{},{},{},{},{}",
                z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im
            )
        }
    }
}

/// Split CSV text into data rows, skipping blank lines and a leading
/// header matching any chart's column names.
pub fn csv_data_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .filter(|(i, l)| {
            !(*i == 1
                && [Chart::Ball, Chart::Siegel, Chart::Heisenberg]
                    .iter()
                    .any(|ch| *l == ch.header()))
        })
        .collect()
}

/// Heisenberg points to a CSV document with header.
pub fn heis_to_csv(points: &[HeisenbergPoint]) -> String {
    let mut out = String::from("zeta_re,zeta_im,v\n");
    for p in points {
        match p {
            HeisenbergPoint::Infinity => out.push_str("inf,inf,inf\n"),
            HeisenbergPoint::Finite { zeta, v } => {
                out.push_str(&format!("{},{},{}\n", zeta.re, zeta.im, v))
            }
        }
    }
    out
}
