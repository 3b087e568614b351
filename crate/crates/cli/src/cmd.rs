//! The six subcommands.  Data goes to --output or stdout; JSON
//! sidecars echoing every resolved tolerance and count go next to the
//! data file (extension `meta.json`) or to stderr when the data is on
//! stdout.  All outputs are byte-identical for a fixed seed.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use chgeom::boundary::{heis_project, BoundaryPoint, HeisenbergPoint};
use chgeom::chains::{cartan_invariant, rcircle_point, RCircleSpec};
use chgeom::curves::{
    classify_curve, BoundaryCurve, BuiltinCurve, ClassifyParams, SampledCurve,
};
use chgeom::hermitian::{is_form_unitary, unitarity_defect, FormTag, SignClass};
use chgeom::limitset::{
    classify_limit_sample, sample_limit_set, LimitClassifyParams, LimitSetParams,
};
use chgeom::projective::{ProjMap, ProjPoint};
use chgeom::schema::{
    csv_data_lines, form_from_name, format_chart_row, heis_to_csv, mat_from_pairs,
    parse_chart_row, Chart, CircleDto, CurveDto, GroupDto,
};
use chgeom::verify::{run_suites, SUITE_NAMES};
use chgeom::C;

use crate::config::{Format, RunConfig};

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            Ok(text)
        }
    }
}

fn write_data(path: &Option<PathBuf>, data: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut p = data_path.to_path_buf();
    p.set_extension("meta.json");
    p
}

/// CSV to the output (or stdout), sidecar JSON next to it (or stderr).
fn write_csv_with_sidecar(
    output: &Option<PathBuf>,
    csv: &str,
    sidecar: &serde_json::Value,
) -> Result<()> {
    write_data(output, csv)?;
    match output {
        Some(p) => {
            let sc = sidecar_path(p);
            std::fs::write(&sc, pretty(sidecar))
                .with_context(|| format!("writing {}", sc.display()))
        }
        None => {
            eprintln!("{}", serde_json::to_string(sidecar).expect("serializable value"));
            Ok(())
        }
    }
}

fn sign_name(class: SignClass) -> &'static str {
    match class {
        SignClass::Negative => "negative",
        SignClass::Null => "null",
        SignClass::Positive => "positive",
    }
}

pub fn convert(from: &str, to: &str, cfg: &RunConfig) -> Result<()> {
    if matches!(cfg.format, Some(Format::Json) | Some(Format::Text)) {
        bail!("convert emits csv only");
    }
    let from = Chart::from_name(from)?;
    let to = Chart::from_name(to)?;
    let text = read_input(&cfg.input)?;
    let mut out = String::from(to.header());
    out.push('\n');
    let mut skipped = 0usize;
    for (lineno, line) in csv_data_lines(&text) {
        match parse_chart_row(from, line) {
            Ok(point) => {
                out.push_str(&format_chart_row(to, &point));
                out.push('\n');
            }
            Err(e) => {
                skipped += 1;
                eprintln!("row {lineno}: {e}");
            }
        }
    }
    write_data(&cfg.output, &out)?;
    if skipped > 0 {
        eprintln!("skipped {skipped} row(s)");
    }
    Ok(())
}

pub fn classify_curve_cmd(cfg: &RunConfig) -> Result<()> {
    let text = read_input(&cfg.input)?;
    let dto: CurveDto = serde_json::from_str(&text).context("parsing curve spec")?;
    let params = ClassifyParams {
        tol: cfg.tol.unwrap_or(1e-6),
        triples: cfg.samples.unwrap_or(2048),
        seed: cfg.seed,
        ..Default::default()
    };
    let out = match &dto {
        CurveDto::Builtin { name } => {
            classify_curve(&BuiltinCurve::from_name(name)?, &params)?
        }
        CurveDto::HeisSamples { points } => {
            let pts: Vec<HeisenbergPoint> = points
                .iter()
                .map(|&[re, im, v]| HeisenbergPoint::finite(C::new(re, im), v))
                .collect();
            classify_curve(&SampledCurve::new(&pts)?, &params)?
        }
    };
    let doc = json!({
        "verdict": out.verdict.name(),
        "chain_residual": out.chain_residual,
        "chain_polar_class": sign_name(out.chain_polar_class),
        "max_legendrian_defect": out.max_legendrian_defect,
        "max_cartan": out.max_cartan,
        "line_v_residual": out.line_v_residual,
        "line_collinearity": out.line_collinearity,
        "fitted_chain": out.fitted_chain.as_ref().and_then(|ch| CircleDto::pack_chain(ch).ok()),
        "params": {
            "grid": params.grid,
            "tol": params.tol,
            "triples": params.triples,
            "seed": params.seed,
        },
    });
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => write_data(&cfg.output, &pretty(&doc)),
        Format::Text => write_data(
            &cfg.output,
            &format!(
                "verdict {}; chain residual {:.3e}; max cartan {:.3e}; \
                 line residuals {:.3e} / {:.3e}\n",
                out.verdict.name(),
                out.chain_residual,
                out.max_cartan,
                out.line_v_residual,
                out.line_collinearity,
            ),
        ),
        Format::Csv => bail!("classify-curve emits json or text"),
    }
}

pub fn limitset(cfg: &RunConfig) -> Result<()> {
    let text = read_input(&cfg.input)?;
    let dto: GroupDto = serde_json::from_str(&text).context("parsing group file")?;
    if dto.generators.is_empty() {
        bail!("no generators");
    }
    let form = form_from_name(&dto.form)?;
    for (i, entries) in dto.generators.iter().enumerate() {
        let m = mat_from_pairs(entries)?;
        if !is_form_unitary(form, &m, 1e-9)? {
            bail!(
                "generator {i} does not preserve the form (defect {:.3e})",
                unitarity_defect(form, &m)
            );
        }
    }
    let group = dto.unpack()?;
    let sampling = LimitSetParams {
        max_word_length: cfg.max_word_length.unwrap_or(12),
        ..Default::default()
    };
    let sample = sample_limit_set(&group, &sampling);
    let classify = LimitClassifyParams {
        tol: cfg.tol.unwrap_or(1e-6),
        triples: cfg.samples.unwrap_or(10_000),
        seed: cfg.seed,
        ..Default::default()
    };
    let out = classify_limit_sample(&sample, &classify)?;
    let heis: Vec<HeisenbergPoint> = sample
        .points
        .iter()
        .map(|p| heis_project(&p.to_form(FormTag::Form2)))
        .collect();
    let sidecar = json!({
        "verdict": out.verdict.name(),
        "point_count": out.point_count,
        "chain_residual": out.chain_residual,
        "chain_polar_class": out.chain_polar_class.map(sign_name),
        "cartan_small_fraction": out.cartan_small_fraction,
        "line_v_residual": out.line_v_residual,
        "line_collinearity": out.line_collinearity,
        "fitted_chain": out.fitted_chain.as_ref().and_then(|ch| CircleDto::pack_chain(ch).ok()),
        "counts": {
            "words_visited": sample.words_visited,
            "candidates_kept": sample.candidates_kept,
            "duplicates_merged": sample.duplicates_merged,
            "points": sample.points.len(),
        },
        "params": {
            "sampling": {
                "max_word_length": sampling.max_word_length,
                "null_tol": sampling.null_tol,
                "dedup_tol": sampling.dedup_tol,
            },
            "classification": {
                "tol": classify.tol,
                "cartan_tol": classify.cartan_tol,
                "triples": classify.triples,
                "seed": classify.seed,
                "cartan_fraction": classify.cartan_fraction,
            },
        },
        "form": dto.form,
    });
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv_with_sidecar(&cfg.output, &heis_to_csv(&heis), &sidecar),
        Format::Json => {
            let points: Vec<serde_json::Value> = heis
                .iter()
                .map(|p| match p {
                    HeisenbergPoint::Finite { zeta, v } => json!([zeta.re, zeta.im, v]),
                    HeisenbergPoint::Infinity => serde_json::Value::Null,
                })
                .collect();
            let doc = json!({ "points": points, "classification": sidecar });
            write_data(&cfg.output, &pretty(&doc))
        }
        Format::Text => bail!("limitset emits csv or json"),
    }
}

pub fn verify(suite: &str, cfg: &RunConfig) -> Result<()> {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let samples = cfg.samples.unwrap_or(400);
    let mut reports = Vec::new();
    for name in names {
        let t0 = Instant::now();
        reports.extend(run_suites(name, samples, cfg.tol, cfg.seed)?);
        eprintln!("{name}: {:.2}s", t0.elapsed().as_secs_f64());
    }
    match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!(
                    "{} {:<14} cases={} worst={:.3e} tol={:.1e} {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.cases,
                    r.worst,
                    r.tolerance,
                    r.detail,
                ));
            }
            write_data(&cfg.output, &out)?;
        }
        Format::Json => {
            let doc = json!({
                "config": { "samples": samples, "tol": cfg.tol, "seed": cfg.seed },
                "suites": reports,
            });
            write_data(&cfg.output, &pretty(&doc))?;
        }
        Format::Csv => bail!("verify emits text or json"),
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        bail!("{failed} of {} suites failed", reports.len());
    }
    Ok(())
}

pub fn cartan(cfg: &RunConfig) -> Result<()> {
    let text = read_input(&cfg.input)?;
    let rows = csv_data_lines(&text);
    if rows.len() != 3 {
        bail!("need exactly 3 heisenberg rows, got {}", rows.len());
    }
    let pts: Vec<BoundaryPoint> = rows
        .iter()
        .map(|(lineno, line)| {
            parse_chart_row(Chart::Heisenberg, line)
                .with_context(|| format!("row {lineno}"))
        })
        .collect::<Result<_>>()?;
    let value = cartan_invariant(&pts[0], &pts[1], &pts[2], 1e-10)?;
    let band_tol = cfg.tol.unwrap_or(1e-6);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let band = if (value.abs() - half_pi).abs() <= band_tol {
        "chain"
    } else if value.abs() <= band_tol {
        "rcircle"
    } else {
        "neither"
    };
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => write_data(
            &cfg.output,
            &pretty(&json!({ "cartan": value, "band": band, "band_tol": band_tol })),
        ),
        Format::Text => write_data(
            &cfg.output,
            &format!("cartan {value}\nband {band} (tol {band_tol})\n"),
        ),
        Format::Csv => bail!("cartan emits json or text"),
    }
}

pub struct RcircleArgs {
    pub theta: f64,
    pub base: Option<String>,
    pub finite: bool,
    pub range: f64,
}

pub fn rcircle(args: &RcircleArgs, cfg: &RunConfig) -> Result<()> {
    let count = cfg.samples.unwrap_or(200).max(2);
    let spec = if let Some(path) = &cfg.input {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let dto: CircleDto = serde_json::from_str(&text).context("parsing circle file")?;
        dto.unpack_rcircle()?
    } else if args.finite {
        RCircleSpec::finite(ProjMap::identity())
    } else {
        let base = match &args.base {
            Some(row) => {
                let f: Vec<f64> = row
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().context("parsing --base"))
                    .collect::<Result<_>>()?;
                if f.len() != 3 {
                    bail!("--base needs zeta_re,zeta_im,v");
                }
                HeisenbergPoint::finite(C::new(f[0], f[1]), f[2])
            }
            None => HeisenbergPoint::finite(C::new(0.0, 0.0), 0.0),
        };
        RCircleSpec::infinite(base, args.theta)?
    };
    let points: Vec<HeisenbergPoint> = match &spec {
        RCircleSpec::Infinite { .. } => (0..count)
            .map(|k| {
                let t = -args.range
                    + 2.0 * args.range * k as f64 / (count - 1) as f64;
                rcircle_point(&spec, t)
            })
            .collect::<chgeom::Result<_>>()?,
        RCircleSpec::Finite { map } => (0..count)
            .map(|k| {
                let (w, _, _) = BuiltinCurve::FiniteRCircle.lift2(k as f64 / count as f64);
                let moved = map.apply(&ProjPoint::new(&w)?);
                Ok(heis_project(&BoundaryPoint::new(FormTag::Form2, moved, 1e-8)?))
            })
            .collect::<chgeom::Result<_>>()?,
    };
    let sidecar = json!({
        "spec": CircleDto::pack_rcircle(&spec)?,
        "samples": count,
        "range": if matches!(spec, RCircleSpec::Infinite { .. }) {
            Some(args.range)
        } else {
            None
        },
    });
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv_with_sidecar(&cfg.output, &heis_to_csv(&points), &sidecar),
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|p| match p {
                    HeisenbergPoint::Finite { zeta, v } => json!([zeta.re, zeta.im, v]),
                    HeisenbergPoint::Infinity => serde_json::Value::Null,
                })
                .collect();
            write_data(&cfg.output, &pretty(&json!({ "points": rows, "meta": sidecar })))
        }
        Format::Text => bail!("rcircle emits csv or json"),
    }
}
