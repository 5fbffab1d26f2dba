use std::fs;
use std::path::{Path, PathBuf};

use plqi_core::certify::{certify, Certificate};
use plqi_core::complex::ValidationReport;
use plqi_core::constructions::{
    case_one_setup, commutator_series, disc_swap_complexes, AnalyticMap, ConeParams, DiscSwap, MapSpec, SearchBudget,
};
use plqi_core::distortion::{
    bound_check, qi_constants, sample_distortion, BoundVerdict, DistortionError, DistortionReport, MapUnderTest,
    QiConfig, QiEstimate, SamplePlan,
};
use plqi_core::{Complex, Point, SimplicialMap};
use serde::Serialize;
use thiserror::Error;

use crate::args::{CertifyArgs, CommutatorArgs, ConstructKind, DistortArgs, ValidateArgs};

/// Any failure that should end with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_errors!(
    plqi_core::complex::ComplexError,
    plqi_core::pl_map::MapError,
    plqi_core::certify::CertifyError,
    plqi_core::distortion::DistortionError,
    plqi_core::constructions::ConstructionError,
    plqi_core::point_map::EvalError,
    serde_json::Error
);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Serialize)]
struct Report<'a, C: Serialize, B: Serialize> {
    command: &'static str,
    config: &'a C,
    #[serde(flatten)]
    body: B,
}

fn emit<C: Serialize, B: Serialize>(command: &'static str, config: &C, body: B, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&Report { command, config, body })? + "\n";
    if let Some(path) = out {
        write(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn validate(args: &ValidateArgs) -> Result<Verdict, CliError> {
    let complex = Complex::load(&args.complex)?;
    let ValidationReport { valid, violations } = complex.validate();

    #[derive(Serialize)]
    struct Body {
        valid: bool,
        violations: Vec<plqi_core::complex::Violation>,
    }
    emit("validate", args, Body { valid, violations }, args.out.as_deref())?;
    Ok(if valid { Verdict::Pass } else { Verdict::Fail })
}

pub fn certify_cmd(args: &CertifyArgs) -> Result<Verdict, CliError> {
    let map = SimplicialMap::load(&args.map)?;
    let certificate = certify(&map, args.convexity.into(), args.seed)?;

    #[derive(Serialize)]
    struct Body {
        certificate: Certificate,
    }
    emit("certify", args, Body { certificate }, args.out.as_deref())?;
    Ok(Verdict::Pass)
}

/// Reads a certificate, bare or wrapped in a `certify` report.
fn load_certificate(path: &Path) -> Result<Certificate, CliError> {
    let mut value: serde_json::Value = serde_json::from_str(&read(path)?)?;
    if let Some(inner) = value.get_mut("certificate") {
        value = inner.take();
    }
    Ok(serde_json::from_value(value)?)
}

enum Input {
    Simplicial(SimplicialMap),
    Analytic(AnalyticMap),
}

fn load_input(path: &Path) -> Result<Input, CliError> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?)?;
    if value.get("vertex_images").is_some() {
        Ok(Input::Simplicial(SimplicialMap::load(path)?))
    } else if value.get("map").is_some() {
        Ok(Input::Analytic(AnalyticMap::load(path)?))
    } else {
        Err(CliError::Input(format!("{} is neither a map file nor a map spec", path.display())))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum QiOutcome {
    Estimate(QiEstimate),
    NoFiniteConstant { required: f64, radius: f64, cap: f64, growth_exponent: Option<f64> },
}

pub fn distort(args: &DistortArgs) -> Result<Verdict, CliError> {
    let mut stratification = args.stratification;
    let mut k = args.bound;
    let mut note = None;
    let (kind, under_test) = match load_input(&args.input)? {
        Input::Simplicial(m) => {
            if let Some(path) = &args.check_against {
                let cert = load_certificate(path)?;
                k = Some(match cert.k_global {
                    Some(k) => k,
                    None => {
                        // Without a verified convex carrier only the per-simplex
                        // constant applies, so only within-simplex pairs are drawn.
                        stratification = 1.0;
                        note = Some("certificate has no global constant; sampled within-simplex pairs only");
                        cert.k_simplex
                    }
                });
            }
            ("simplicial", MapUnderTest::simplicial(m))
        }
        Input::Analytic(f) => {
            if args.check_against.is_some() {
                return Err(CliError::Input("--check-against needs a map file; use --bound with specs".into()));
            }
            let center = match &args.center {
                Some(c) => Point::new(c.clone()).map_err(|e| CliError::Input(e.to_string()))?,
                None => Point::origin(f.dim()),
            };
            if center.dim() != f.dim() {
                return Err(CliError::Input(format!("center has dimension {}, spec has {}", center.dim(), f.dim())));
            }
            ("analytic", MapUnderTest::on_ball(f, center, args.radius)?)
        }
    };
    if let Some(k) = k {
        if !(k.is_finite() && k >= 1.0) {
            return Err(CliError::Input(format!("bound {k} must be at least 1")));
        }
    }

    let plan = SamplePlan::new(args.seed, args.pairs, stratification)?;
    let distortion = sample_distortion(&under_test, &plan)?;
    let verdict = k.map(|k| bound_check(&distortion, k, args.tolerance));
    let qi = if args.qi {
        Some(match qi_constants(&under_test, &plan, &QiConfig::default()) {
            Ok(q) => QiOutcome::Estimate(q),
            Err(DistortionError::NoFiniteConstant { required, radius, cap, growth_exponent }) => {
                QiOutcome::NoFiniteConstant { required, radius, cap, growth_exponent }
            }
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };
    let pass = verdict.as_ref().is_none_or(|v| v.pass);

    #[derive(Serialize)]
    struct Body {
        input_kind: &'static str,
        stratification: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<&'static str>,
        distortion: DistortionReport,
        verdict: Option<BoundVerdict>,
        qi: Option<QiOutcome>,
    }
    let body = Body { input_kind: kind, stratification, note, distortion, verdict, qi };
    emit("distort", args, body, args.out.as_deref())?;
    Ok(if pass { Verdict::Pass } else { Verdict::Fail })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })
}

fn save_complex(c: &Complex, path: &Path) -> Result<(), CliError> {
    c.save(path).map_err(|e| CliError::Input(e.to_string()))
}

fn save_spec(f: &AnalyticMap, path: &Path) -> Result<(), CliError> {
    write(path, &(f.to_json() + "\n"))
}

pub fn construct(kind: &ConstructKind) -> Result<Verdict, CliError> {
    #[derive(Serialize)]
    struct Body {
        files: Vec<PathBuf>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        radii: Vec<f64>,
    }
    let mut body = Body { files: Vec::new(), radii: Vec::new() };
    match kind {
        ConstructKind::DiscSwap { n, out_dir } => {
            let (k, k2) = disc_swap_complexes(*n)?;
            create_dir(out_dir)?;
            let h = DiscSwap::new(*n)?;
            let names = ["K.json", "K_prime.json", "h_prime.map.json", "h.spec.json"];
            let paths: Vec<PathBuf> = names.iter().map(|f| out_dir.join(f)).collect();
            save_complex(&k, &paths[0])?;
            save_complex(&k2, &paths[1])?;
            let map_file = h.simplicial().to_file_data(names[0], names[1]);
            write(&paths[2], &(serde_json::to_string_pretty(&map_file)? + "\n"))?;
            save_spec(&AnalyticMap::disc_swap(*n)?, &paths[3])?;
            body.files = paths;
        }
        ConstructKind::Cone { axis, inner, outer, out } => {
            let spec = MapSpec::Cone(ConeParams { axis: axis.clone(), inner_slope: *inner, outer_slope: *outer });
            save_spec(&AnalyticMap::build(spec, axis.len())?, out)?;
            body.files.push(out.clone());
        }
        ConstructKind::Case1 { n, f, count, seed, out_dir } => {
            let f = match f {
                Some(path) => AnalyticMap::load(path)?,
                None => AnalyticMap::scale(*n, 2.0)?,
            };
            if f.dim() != *n {
                return Err(CliError::Input(format!("f has dimension {}, expected {n}", f.dim())));
            }
            let budget = SearchBudget { target: *count, seed: *seed, ..SearchBudget::default() };
            let (witness, g) = case_one_setup(&f, *n, &budget)?;
            create_dir(out_dir)?;
            let paths: Vec<PathBuf> =
                ["f.spec.json", "g.spec.json", "points.json"].iter().map(|p| out_dir.join(p)).collect();
            save_spec(&f, &paths[0])?;
            save_spec(&g, &paths[1])?;
            write(&paths[2], &(serde_json::to_string_pretty(&witness.points)? + "\n"))?;
            body.radii = witness.discs.discs().iter().map(|d| d.radius).collect();
            body.files = paths;
        }
    }
    emit("construct", kind, body, None)?;
    Ok(Verdict::Pass)
}

pub fn commutator(args: &CommutatorArgs) -> Result<Verdict, CliError> {
    let f = AnalyticMap::load(&args.f)?;
    let g = AnalyticMap::load(&args.g)?;
    if f.dim() != g.dim() {
        return Err(CliError::Input(format!("f has dimension {}, g has {}", f.dim(), g.dim())));
    }
    let points: Vec<Point> = match (&args.points, &args.ray) {
        (Some(path), None) => serde_json::from_str(&read(path)?)?,
        (None, Some(v)) => {
            let v = Point::new(v.clone()).map_err(|e| CliError::Input(e.to_string()))?;
            (1..=args.count).map(|m| v.scaled(m as f64)).collect()
        }
        _ => return Err(CliError::Input("give exactly one of --points and --ray".into())),
    };
    let gaps = commutator_series(&f, &g, &points)?;
    let strictly_increasing = gaps.windows(2).all(|w| w[0] < w[1]);

    #[derive(Serialize)]
    struct Body {
        points: Vec<Point>,
        gaps: Vec<f64>,
        strictly_increasing: bool,
    }
    emit("commutator", args, Body { points, gaps, strictly_increasing }, args.out.as_deref())?;
    Ok(Verdict::Pass)
}
