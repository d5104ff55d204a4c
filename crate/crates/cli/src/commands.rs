use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use slicekit::calculus::{pointwise_star_check, SliceRegularPoly};
use slicekit::checks::{run_suite, SUITES};
use slicekit::repf::{evaluate_via_formula, representation_vector};
use slicekit::sliceunits::{eta, SliceUnitMatrix};
use slicekit::stemtensor::{validate_stem_system, StemSystem, StemSystemFile, ValidationSettings};
use slicekit::{Error, ImaginaryUnit, NPartPath, Quaternion, SliceFunctionModel};

use crate::input::{parse_quaternion, parse_units, read_json, CliError, CliResult, CoeffsFile};
use crate::{Cli, Command, Format, ModelArgs, ModelKind};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn json(value: &impl Serialize, passed: bool) -> CliResult<Self> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
        text.push('\n');
        Ok(Self { text, code: if passed { 0 } else { 1 } })
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Monodromy { model, units, expect, tol, samples } => {
            monodromy(model, units, expect.as_deref(), *tol, *samples, cli.format)
        }
        Command::Repformula { model, units_matrix, units } => {
            json_only(cli.format)?;
            repformula(model, units_matrix.as_deref(), units.as_deref())
        }
        Command::Starprod { coeffs, right, at } => {
            json_only(cli.format)?;
            starprod(coeffs, right, at.as_deref())
        }
        Command::Stem { model, input, validate, radius, lattice, radii, angles } => {
            json_only(cli.format)?;
            stem(model, input.as_deref(), *validate, *radius, *lattice, *radii, *angles)
        }
        Command::Check { suite, tol } => check(suite, cli.seed, *tol, cli.format),
    }
}

fn json_only(format: Format) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Parse("CSV output is only available for monodromy and check".into())),
    }
}

fn build_model(args: &ModelArgs) -> CliResult<SliceFunctionModel> {
    match (args.model, &args.coeffs) {
        (ModelKind::Sqrt, None) => Ok(SliceFunctionModel::Sqrt),
        (ModelKind::Log, None) => Ok(SliceFunctionModel::Log),
        (ModelKind::Poly, Some(file)) => {
            let f: CoeffsFile = read_json(file)?;
            Ok(SliceFunctionModel::Poly { coeffs: f.coeffs })
        }
        (ModelKind::Poly, None) => Err(CliError::Parse("--model poly needs --coeffs".into())),
        (_, Some(_)) => Err(CliError::Parse("--coeffs only applies to --model poly".into())),
    }
}

fn build_path(args: &ModelArgs) -> CliResult<NPartPath> {
    match &args.path {
        Some(file) => read_json(file),
        None => Ok(NPartPath::out_and_back()),
    }
}

/// Closed-form value of the model at the end of the out-and-back loop.
fn loop_reference(model: &SliceFunctionModel, units: &[ImaginaryUnit]) -> CliResult<Option<Quaternion>> {
    let (k1, k2) = (units[0].as_quaternion(), units[1].as_quaternion());
    Ok(match model {
        SliceFunctionModel::Sqrt => Some(k2.inverse()? * k1),
        SliceFunctionModel::Log => Some((k1 - k2) * PI),
        SliceFunctionModel::Poly { .. } => None,
    })
}

#[derive(Serialize)]
struct MonodromyReport {
    value: Quaternion,
    germ_key: Option<slicekit::monodromy::GermKey>,
    parts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<Quaternion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

fn monodromy(
    args: &ModelArgs,
    units: &str,
    expect: Option<&str>,
    tol: f64,
    samples: usize,
    format: Format,
) -> CliResult<Output> {
    let model = build_model(args)?;
    let path = build_path(args)?;
    let units = parse_units(units)?;
    if units.len() != path.n() {
        return Err(CliError::Parse(format!("path has {} parts but {} units were given", path.n(), units.len())));
    }
    let start = units[0];

    if format == Format::Csv {
        let mut text = String::from("t,re,im,w,x,y,z\n");
        let rows = samples.max(1);
        for k in 0..=rows {
            let t = k as f64 / rows as f64;
            let partial = path.truncate(t)?;
            let z = path.eval(t)?;
            let v = model.evaluate_lifted(&partial, &units[..partial.n()], args.x0, start)?;
            let _ = writeln!(text, "{t},{},{},{},{},{},{}", z.re, z.im, v.w, v.x, v.y, v.z);
        }
        return Ok(Output { text, code: 0 });
    }

    let value = model.evaluate_lifted(&path, &units, args.x0, start)?;
    let germ_key = match model.germ_key(&path, &units, args.x0, start) {
        Ok(key) => Some(key),
        Err(Error::NotAtRealPoint) => None,
        Err(e) => return Err(e.into()),
    };
    let reference = match expect {
        Some(text) => Some(parse_quaternion(text)?),
        None if args.path.is_none() && args.x0 == 1.0 => loop_reference(&model, &units)?,
        None => None,
    };
    let deviation = reference.map(|r| (value - r).norm());
    let passed = expect.is_none() || deviation.is_some_and(|d| d <= tol);
    let report = MonodromyReport { value, germ_key, parts: path.n(), reference, deviation };
    Output::json(&report, passed)
}

fn repformula(args: &ModelArgs, matrix: Option<&std::path::Path>, units: Option<&str>) -> CliResult<Output> {
    let model = build_model(args)?;
    let path = build_path(args)?;
    let reference = eta(path.n(), ImaginaryUnit::I);
    let j: SliceUnitMatrix = match matrix {
        Some(file) => read_json(file)?,
        None => reference.clone(),
    };
    let g = representation_vector(&model, &path, &j, args.x0)?;
    let standard = representation_vector(&model, &path, &reference, args.x0)?;
    let value = match units {
        Some(text) => Some(evaluate_via_formula(&g, &parse_units(text)?)?),
        None => None,
    };
    let report = json!({
        "G": g,
        "value": value,
        "invariance_dev": g.max_distance(&standard),
        "parts": path.n(),
    });
    Output::json(&report, true)
}

fn starprod(left: &std::path::Path, right: &std::path::Path, at: Option<&str>) -> CliResult<Output> {
    let f = SliceRegularPoly::new(read_json::<CoeffsFile>(left)?.coeffs);
    let g = SliceRegularPoly::new(read_json::<CoeffsFile>(right)?.coeffs);
    let product = f.star(&g);
    let mut report = json!({ "coeffs": product.coeffs });
    if let Some(text) = at {
        let q = parse_quaternion(text)?;
        report["value"] = json!(product.eval(q));
        report["pointwise_dev"] = json!(pointwise_star_check(&f, &g, q));
    }
    Output::json(&report, true)
}

fn stem(
    args: &ModelArgs,
    input: Option<&std::path::Path>,
    validate: bool,
    radius: f64,
    lattice: usize,
    radii: usize,
    angles: usize,
) -> CliResult<Output> {
    let system = match input {
        Some(file) => StemSystem::from_file(&read_json::<StemSystemFile>(file)?)?,
        None => {
            let model = build_model(args)?;
            let path = build_path(args)?;
            StemSystem::from_model(&model, &[path], args.x0, lattice, radius)?
        }
    };
    if validate || input.is_some() {
        let report = validate_stem_system(&system, &ValidationSettings::default())?;
        let passed = report.passed();
        let out = json!({
            "passed": passed,
            "entries": system.entries().len(),
            "failed": report.failed_conditions(),
            "conditions": report,
        });
        return Output::json(&out, passed);
    }
    Output::json(&system.to_file(radii, angles)?, true)
}

fn check(suite: &str, seed: u64, tol: Option<f64>, format: Format) -> CliResult<Output> {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(CliError::Parse(format!(
            "unknown suite {suite:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    }
    let results = run_suite(suite, seed, tol)?;
    let passed = results.iter().all(|r| r.passed);
    if format == Format::Csv {
        let mut text = String::from("name,deviation,tolerance,passed\n");
        for r in &results {
            let _ = writeln!(text, "{},{:e},{:e},{}", r.name, r.deviation, r.tolerance, r.passed);
        }
        return Ok(Output { text, code: if passed { 0 } else { 1 } });
    }
    let report = json!({
        "suite": suite,
        "seed": seed,
        "passed": passed,
        "failed": results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect::<Vec<_>>(),
        "checks": results,
    });
    Output::json(&report, passed)
}
