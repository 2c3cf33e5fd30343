//! `steer`: evaluate steering paradoxes and inequalities, scan detection
//! regions and simulate finite-shot experiments.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use steering_core::glsi::{
    c_lhs_analytic, classical_bound, detect_violation, lsi_from_glsi_bound, report_at_optimum, sprime3_value_signed,
    uniform_phi_grid, usual_lsi_bound, usual_lsi_value, DetectionOptions, GlsiInstance, Signs,
};
use steering_core::qcore::{beta_for_alpha, make_state, optics_prep, ComplexMatrix, Family, PureState, StateFamilySpec};
use steering_core::scans::{alpha_grid, pure_state_curves, region_scan, threshold_curves, Series};
use steering_core::shotsim::{estimate_correlator, simulate_paradox, simulate_sprime3_signed};
use steering_core::steering::{parse_angle, parse_direction_list, paradox_value, paradox_value_density, MeasurementDirection};
use steering_core::Error;

use crate::output::{Document, Metadata};

const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(name = "steer", version, about = "EPR steering paradoxes and generalized linear steering inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for scans (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum total of the k-setting steering paradox for a pure state.
    Paradox(ParadoxArgs),
    /// Exact LHS bound of the inequality for a reference state and settings.
    Bound(BoundArgs),
    /// Evaluate the three-setting inequality on a state at fixed (θ, φ).
    Eval(EvalArgs),
    /// Optimize the inequality over θ (and optionally φ and Alice's orientation).
    Optimize(OptimizeArgs),
    /// Detection map or threshold curves for the Werner or asymmetric family.
    Scan(ScanArgs),
    /// Finite-shot simulation.
    Simulate(SimulateArgs),
    /// Loss parameter and wave-plate angles preparing a given Schmidt angle.
    Prep(PrepArgs),
    /// Usual LSI against the optimized inequality for pure states.
    Curves(CurvesArgs),
}

fn angle(text: &str) -> Result<f64, String> {
    parse_angle(text).map_err(|e| e.to_string())
}

/// A comma- or semicolon-separated direction list taken as one flag value.
#[derive(Clone, Serialize)]
#[serde(transparent)]
struct DirList(Vec<MeasurementDirection>);

fn directions(text: &str) -> Result<DirList, String> {
    parse_direction_list(text).map(DirList).map_err(|e| e.to_string())
}

fn signs(text: &str) -> Result<Signs, String> {
    let parts: Vec<i8> = text
        .split(',')
        .map(|s| match s.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(format!("invalid sign {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected three signs, e.g. +,-,-".to_string())
}

#[derive(Args, Serialize)]
struct StateArgs {
    /// State family: pure, werner, asymmetric or raw (raw needs --state-file).
    #[arg(long, default_value = "pure")]
    family: Family,
    /// Schmidt angle α of the target pure state.
    #[arg(long, value_parser = angle)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    visibility: f64,
    /// Phase of the target pure state.
    #[arg(long, value_parser = angle, default_value = "0")]
    state_phase: f64,
    /// JSON density matrix, or the output of `eval`.
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ParadoxArgs {
    #[arg(long, value_parser = angle, required_unless_present = "state_file")]
    alpha: Option<f64>,
    #[arg(long, value_parser = angle, default_value = "0")]
    phi: f64,
    /// Alice's settings, e.g. `z,x` or `z;1.2,0.4`.
    #[arg(long, value_parser = directions, default_value = "z,x")]
    settings: DirList,
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundArgs {
    #[arg(long, value_parser = angle)]
    theta: f64,
    #[arg(long, value_parser = angle, default_value = "0")]
    phi: f64,
    #[arg(long, value_parser = directions, default_value = "x,y,z")]
    directions: DirList,
}

#[derive(Args, Serialize)]
struct EvalArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_parser = angle)]
    theta: f64,
    /// Reference phase φ.
    #[arg(long, value_parser = angle, default_value = "0")]
    phi: f64,
    /// Orientation of Alice's observables, e.g. `+,-,-`.
    #[arg(long, value_parser = signs, default_value = "+,+,+")]
    signs: Signs,
}

#[derive(Args, Serialize)]
struct OptimizeArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Number of uniformly spaced reference phases to try (1 means φ = 0).
    #[arg(long, default_value_t = 1)]
    phi_steps: usize,
    /// Keep Alice's orientation fixed at (+,+,+).
    #[arg(long)]
    no_sign_flips: bool,
    #[arg(long, default_value_t = 200)]
    grid_points: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScanTarget {
    Region,
    Thresholds,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = 50)]
    alpha_steps: usize,
    #[arg(long, default_value_t = 50)]
    v_steps: usize,
    #[arg(long, value_enum, default_value = "region")]
    target: ScanTarget,
    /// Bisection tolerance in V for threshold curves.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SimTarget {
    Paradox,
    Sprime3,
    Correlator,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "paradox")]
    target: SimTarget,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_parser = angle)]
    theta: Option<f64>,
    #[arg(long, value_parser = angle, default_value = "0")]
    phi: f64,
    #[arg(long, value_parser = signs, default_value = "+,+,+")]
    signs: Signs,
    /// Correlator settings `alice,bob` (e.g. `x,x`), or a single Bob direction.
    #[arg(long, value_parser = directions)]
    settings: Option<DirList>,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct PrepArgs {
    #[arg(long, value_parser = angle)]
    alpha: Option<f64>,
    #[arg(long, value_parser = angle)]
    beta: Option<f64>,
}

#[derive(Args, Serialize)]
struct CurvesArgs {
    #[arg(long, default_value_t = 50)]
    alpha_steps: usize,
}

enum Failure {
    Usage(String),
    Precondition(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e)
    }
}

type Outcome = Result<Document, Failure>;

fn load_matrix(path: &PathBuf) -> Result<ComplexMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let matrix = value.pointer("/result/state").or_else(|| value.get("state")).unwrap_or(&value);
    Ok(serde_json::from_value(matrix.clone())?)
}

fn resolve_state(s: &StateArgs) -> Result<ComplexMatrix, Failure> {
    if let Some(path) = &s.state_file {
        return Ok(make_state(&StateFamilySpec::raw(load_matrix(path)?))?);
    }
    let alpha = s.alpha.ok_or_else(|| Failure::Usage("--alpha or --state-file is required".into()))?;
    let spec = match s.family {
        Family::Pure => StateFamilySpec::pure(alpha, s.state_phase),
        Family::Werner => StateFamilySpec::werner(alpha, s.visibility).with_phase(s.state_phase),
        Family::Asymmetric => StateFamilySpec::asymmetric(alpha, s.visibility),
        Family::Raw => return Err(Failure::Usage("--family raw needs --state-file".into())),
    };
    Ok(make_state(&spec)?)
}

fn check_format(command: &str, format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let name = serde_json::to_value(format).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        Err(Failure::Usage(format!("--format {name} is not supported by `{command}`")))
    }
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Paradox(a) => {
            let format = cli.format.unwrap_or(Format::Json);
            check_format("paradox", format, &[Format::Json])?;
            let report = match &a.state_file {
                Some(path) => paradox_value_density(&make_state(&StateFamilySpec::raw(load_matrix(path)?))?, &a.settings.0)?,
                None => paradox_value(&PureState::schmidt_form(a.alpha.expect("required by clap"), a.phi), &a.settings.0)?,
            };
            Ok(Document::json(Metadata::new("paradox", None, params(a)), json!(report)))
        }
        Command::Bound(a) => {
            check_format("bound", cli.format.unwrap_or(Format::Json), &[Format::Json])?;
            let inst = GlsiInstance::new(a.theta, a.phi, &a.directions.0)?;
            let bound = classical_bound(&inst)?;
            let k = inst.k();
            let xyz = a.directions.0 == [MeasurementDirection::x(), MeasurementDirection::y(), MeasurementDirection::z()];
            let result = json!({
                "k": k,
                "c_lhs": bound.c_lhs,
                "c_lhs_prime": lsi_from_glsi_bound(k, bound.c_lhs),
                "c_lhs_closed_form": if xyz { json!(c_lhs_analytic(a.theta)) } else { Value::Null },
                "bloch_vectors": inst.bloch_vectors,
                "maximizing_strategies": bound.maximizing,
            });
            Ok(Document::json(Metadata::new("bound", None, params(a)), result))
        }
        Command::Eval(a) => {
            check_format("eval", cli.format.unwrap_or(Format::Json), &[Format::Json])?;
            let rho = resolve_state(&a.state)?;
            let report = sprime3_value_signed(&rho, a.theta, a.phi, a.signs)?;
            let result = json!({
                "state": rho,
                "inequality": report,
                "usual_lsi_value": usual_lsi_value(&rho)?,
                "usual_lsi_bound": usual_lsi_bound(),
            });
            Ok(Document::json(Metadata::new("eval", None, params(a)), result))
        }
        Command::Optimize(a) => {
            check_format("optimize", cli.format.unwrap_or(Format::Json), &[Format::Json])?;
            let rho = resolve_state(&a.state)?;
            let opts = DetectionOptions { grid_points: a.grid_points, ..DetectionOptions::default() }
                .with_phi_grid(uniform_phi_grid(a.phi_steps))
                .with_sign_flips(!a.no_sign_flips);
            let detection = detect_violation(&rho, &opts)?;
            let report = report_at_optimum(&rho, &detection)?;
            let result = json!({ "detected": detection.detected(), "detection": detection, "report": report });
            Ok(Document::json(Metadata::new("optimize", None, params(a)), result))
        }
        Command::Scan(a) => scan(cli, a),
        Command::Simulate(a) => {
            check_format("simulate", cli.format.unwrap_or(Format::Json), &[Format::Json])?;
            let report = match a.target {
                SimTarget::Paradox => {
                    let alpha = a.state.alpha.ok_or_else(|| Failure::Usage("--alpha is required".into()))?;
                    simulate_paradox(alpha, a.shots, a.seed)?
                }
                SimTarget::Sprime3 => {
                    let theta = a.theta.ok_or_else(|| Failure::Usage("--theta is required".into()))?;
                    simulate_sprime3_signed(&resolve_state(&a.state)?, theta, a.phi, a.signs, a.shots, a.seed)?
                }
                SimTarget::Correlator => {
                    let rho = resolve_state(&a.state)?;
                    match a.settings.as_ref().map(|d| d.0.as_slice()) {
                        Some([b]) => estimate_correlator(&rho, None, b, a.shots, a.seed)?,
                        Some([al, b]) => estimate_correlator(&rho, Some(al), b, a.shots, a.seed)?,
                        _ => return Err(Failure::Usage("--settings needs `alice,bob` or a single Bob direction".into())),
                    }
                }
            };
            Ok(Document::json(Metadata::new("simulate", Some(a.seed), params(a)), json!(report)))
        }
        Command::Prep(a) => {
            check_format("prep", cli.format.unwrap_or(Format::Json), &[Format::Json])?;
            let beta = match (a.alpha, a.beta) {
                (Some(alpha), _) => beta_for_alpha(alpha)?,
                (None, Some(beta)) => beta,
                (None, None) => unreachable!("clap group requires one"),
            };
            let prep = optics_prep(beta)?;
            let result = json!({
                "alpha": prep.alpha,
                "beta": prep.beta,
                "beta_deg": prep.beta.to_degrees(),
                "hwp1_deg": prep.hwp1_deg,
                "hwp2_deg": prep.hwp2_deg,
                "hwp3_deg": prep.hwp3_deg,
                "state": prep.state,
            });
            Ok(Document::json(Metadata::new("prep", None, params(a)), result))
        }
        Command::Curves(a) => {
            let format = cli.format.unwrap_or(Format::Csv);
            let rows = pure_state_curves(&alpha_grid(a.alpha_steps.max(1)))?;
            let meta = Metadata::new("curves", None, params(a));
            Ok(match format {
                Format::Json => Document::json(meta, json!(rows)),
                Format::Csv => Document::csv(meta, &rows)?,
                Format::Svg => Document::svg(
                    meta,
                    steering_core::scans::line_svg(
                        "pure states: usual LSI margin and optimized violation",
                        "alpha (rad)",
                        "value",
                        &[
                            Series { name: "usual value − √3", points: rows.iter().map(|r| (r.alpha, r.usual_value - r.usual_bound)).collect() },
                            Series { name: "optimized violation", points: rows.iter().map(|r| (r.alpha, r.glsi_violation)).collect() },
                        ],
                    ),
                ),
            })
        }
    }
}

fn scan(cli: &Cli, a: &ScanArgs) -> Outcome {
    if !matches!(a.family, Family::Werner | Family::Asymmetric) {
        return Err(Failure::Usage(format!("scan needs --family werner or asymmetric, got {}", a.family)));
    }
    let format = cli.format.unwrap_or(Format::Csv);
    let meta = Metadata::new("scan", None, params(a));
    match a.target {
        ScanTarget::Region => {
            let table = region_scan(a.family, a.alpha_steps, a.v_steps)?;
            Ok(match format {
                Format::Json => Document::json(meta, json!(table)),
                Format::Csv => Document::csv(meta, &table.cells)?,
                Format::Svg => Document::svg(meta, steering_core::scans::region_svg(&table)),
            })
        }
        ScanTarget::Thresholds => {
            let rows = threshold_curves(a.family, a.alpha_steps, a.tol)?;
            Ok(match format {
                Format::Json => Document::json(meta, json!(rows)),
                Format::Csv => Document::csv(meta, &rows)?,
                Format::Svg => {
                    let curve = |f: &dyn Fn(&steering_core::scans::ThresholdRow) -> Option<f64>| {
                        rows.iter().filter_map(|r| f(r).map(|v| (r.alpha, v))).collect::<Vec<_>>()
                    };
                    Document::svg(
                        meta,
                        steering_core::scans::line_svg(
                            &format!("{} family: threshold visibility", a.family),
                            "alpha (rad)",
                            "V",
                            &[
                                Series { name: "usual LSI", points: curve(&|r| r.v_usual.value()) },
                                Series { name: "optimized", points: curve(&|r| r.v_glsi.value()) },
                            ],
                        ),
                    )
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => run(&cli),
    };
    let written = result.and_then(|doc| doc.write(cli.out.as_deref()).map_err(Failure::Precondition));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Precondition(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}
