use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ratnorm_core::bernstein::{
    h2_confluent_operator_norm, limit_check, lower_bound_extremal, ratio_with, sampled_upper, SweepMode,
};
use ratnorm_core::kernel::{i_identity, i_quadrature, i_series, phi, psi, SERIES_TAIL_TOL};
use ratnorm_core::norms::{norm, SpaceDescriptor};
use ratnorm_core::quadrature::{
    QuadratureSpec, RadialRule, DEFAULT_ANGULAR_POINTS, DEFAULT_POINTS_PER_PANEL, DEFAULT_RADIAL_PANELS,
    DEFAULT_TOLERANCE,
};

use crate::checks::{self, Profile};
use crate::dto::read_function;
use crate::error::{CliError, Result};
use crate::report::{
    emit, limit_rows, to_csv, CheckRecord, EstimateRow, Format, KernelRow, NormRow, RunReport,
};
use crate::space::parse_space;
use crate::sweep::par_sweep;

#[derive(Debug, Parser)]
#[command(name = "ratnorm", version, about = "Bernstein-type constants of rational functions in Hardy and Bergman spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a rational function given as JSON (inline or a file path).
    Norm(NormArgs),
    /// Kernel integrals I(t, r), φ_r(t) and ψ(r).
    Kernel {
        #[command(subcommand)]
        which: KernelCommand,
    },
    /// Numerical verification suites; exit code 1 if any check fails.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Bernstein ratios and constants.
    Bernstein {
        #[command(subcommand)]
        which: BernsteinCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormMethodArg {
    /// Series for p = 2, quadrature otherwise.
    Auto,
    Series,
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelMethodArg {
    Series,
    Quad,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModeArg {
    Lower,
    Sampled,
    ExactH2,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Initial angular grid (power of two, doubled until converged).
    #[arg(long, default_value_t = DEFAULT_ANGULAR_POINTS)]
    pub angular_n: usize,
    /// Initial radial panels.
    #[arg(long, default_value_t = DEFAULT_RADIAL_PANELS)]
    pub radial_panels: usize,
    /// Inner radius of the annulus for Bergman integrals.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
}

impl QuadArgs {
    fn spec(&self, tol: Option<f64>) -> Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            angular_points: self.angular_n,
            radial_rule: RadialRule::GaussLegendre {
                panels: self.radial_panels,
                points: DEFAULT_POINTS_PER_PANEL,
            },
            annulus_alpha: self.alpha,
            tolerance: tol.unwrap_or(DEFAULT_TOLERANCE),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    /// Function as JSON, or a path to a JSON file.
    #[arg(long)]
    pub f: String,
    /// hardy:<p>, hardy:inf, bergman:<p>:beta:<β> or bergman:<p>:table:<csv>.
    #[arg(long)]
    pub space: String,
    #[arg(long, value_enum, default_value_t = NormMethodArg::Auto)]
    pub method: NormMethodArg,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// I(t, r) = ∫ |1 − rζ|^(−t) dm.
    I {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value_t = KernelMethodArg::Series)]
        method: KernelMethodArg,
    },
    /// φ_r(t) = ∫ |1 + rζ|^t dm.
    Phi {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
    },
    /// ψ(r) = ∫₀^π ln(1 + r² − 2r cos s) ds.
    Psi {
        #[arg(long)]
        r: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TolArg {
    /// Override the numerical tolerances of the checks.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Kernel identity and closed forms (checks 1 and 4).
    Lemma1(TolArg),
    /// Tail-integral comparability (check 9).
    Lemma2(TolArg),
    /// ψ ≡ 0 (check 2), optionally at a single radius.
    Psi {
        #[arg(long)]
        r: Option<f64>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Monotonicity and convexity (check 3).
    Monotonicity(TolArg),
    /// Limit of the confluent H² constant (check 8).
    Limit {
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Every check, in order.
    All(TolArg),
}

#[derive(Debug, Subcommand)]
pub enum BernsteinCommand {
    /// ‖f′‖/‖f‖ for one function.
    Ratio {
        #[arg(long)]
        f: String,
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value_t = NormMethodArg::Auto)]
        method: NormMethodArg,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Ratio of 1/(1 − rz)^n, a lower bound for the best constant.
    Lower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "hardy:2")]
        space: String,
    },
    /// Exact H² constant over p(z)/(1 − rz)^n, deg p < n.
    ExactH2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        /// Gram tail tolerance relative to n.
        #[arg(long, default_value_t = ratnorm_core::bernstein::H2_TAIL_TOL)]
        tol: f64,
    },
    /// Largest ratio over random members of R_{n,r}.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "hardy:2")]
        space: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Cartesian sweep over n and r.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r_list: Vec<f64>,
        #[arg(long, default_value = "hardy:2")]
        space: String,
        #[arg(long, value_enum, default_value_t = SweepModeArg::Lower)]
        mode: SweepModeArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Tracks C/n against (1 + r)/(1 − r); exit code 1 on failure.
    Limit {
        #[arg(long)]
        r: f64,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.15)]
        tol: f64,
    },
}

/// Parses `argv` and runs; returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Result of one command before formatting.
struct Output {
    inputs: Value,
    results: Value,
    csv: Vec<u8>,
    checks: Vec<CheckRecord>,
    passed: bool,
}

impl Output {
    fn rows<T: Serialize>(inputs: Value, rows: &[T]) -> Result<Self> {
        Ok(Output {
            inputs,
            results: serde_json::to_value(rows)?,
            csv: to_csv(rows)?,
            checks: Vec::new(),
            passed: true,
        })
    }

    fn single<T: Serialize>(inputs: Value, row: T) -> Result<Self> {
        let mut out = Self::rows(inputs, std::slice::from_ref(&row))?;
        out.results = serde_json::to_value(&row)?;
        Ok(out)
    }

    fn checks(inputs: Value, checks: Vec<CheckRecord>) -> Result<Self> {
        #[derive(Serialize)]
        struct Line<'a> {
            id: &'a str,
            name: &'a str,
            passed: bool,
            wall_time_seconds: f64,
        }
        let lines: Vec<Line> = checks
            .iter()
            .map(|c| Line {
                id: &c.id,
                name: &c.name,
                passed: c.passed,
                wall_time_seconds: c.wall_time_seconds,
            })
            .collect();
        let csv = to_csv(&lines)?;
        Ok(Output {
            inputs,
            results: Value::Null,
            csv,
            passed: checks.iter().all(|c| c.passed),
            checks,
        })
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<i32> {
    let start = Instant::now();
    let output = match &cli.command {
        Command::Norm(args) => run_norm(args)?,
        Command::Kernel { which } => run_kernel(which)?,
        Command::Verify { which } => run_verify(which)?,
        Command::Bernstein { which } => run_bernstein(which)?,
    };
    let bytes = match cli.format {
        Format::Csv => output.csv,
        Format::Json => {
            let report = RunReport {
                command: argv.to_vec(),
                inputs: output.inputs,
                results: output.results,
                checks: output.checks,
                passed: output.passed,
                wall_time_seconds: start.elapsed().as_secs_f64(),
            };
            let mut text = serde_json::to_vec_pretty(&report)?;
            text.push(b'\n');
            text
        }
    };
    emit(&bytes, cli.out.as_deref())?;
    Ok(if output.passed { 0 } else { 1 })
}

fn prefer_series(method: NormMethodArg, space: &SpaceDescriptor) -> Result<bool> {
    match method {
        NormMethodArg::Auto => Ok(true),
        NormMethodArg::Quad => Ok(false),
        NormMethodArg::Series if space.p() == 2.0 => Ok(true),
        NormMethodArg::Series => Err(CliError::Usage("the series method needs p = 2".into())),
    }
}

fn run_norm(args: &NormArgs) -> Result<Output> {
    let f = read_function(&args.f)?;
    let space = parse_space(&args.space)?;
    let spec = args.quad.spec(args.tol)?;
    let result = norm(&f, &space, &spec, prefer_series(args.method, &space)?)?;
    Output::single(
        json!({ "space": space.label(), "method": args.method.to_possible_value().map(|v| v.get_name().to_owned()) }),
        NormRow::new(space.label(), &result),
    )
}

fn run_kernel(which: &KernelCommand) -> Result<Output> {
    match *which {
        KernelCommand::I { t, r, method } => {
            let eval = match method {
                KernelMethodArg::Series => i_series(t, r, SERIES_TAIL_TOL)?,
                KernelMethodArg::Quad => i_quadrature(t, r)?,
                KernelMethodArg::Identity => i_identity(t, r)?,
            };
            Output::single(json!({ "function": "I", "t": t, "r": r }), KernelRow::from_eval("I", &eval))
        }
        KernelCommand::Phi { t, r } => {
            let eval = phi(r, t)?;
            Output::single(json!({ "function": "phi", "t": t, "r": r }), KernelRow::from_eval("phi", &eval))
        }
        KernelCommand::Psi { r } => {
            let row = KernelRow {
                function: "psi",
                t: None,
                r,
                value: psi(r)?,
                method: "quadrature",
                error_estimate: None,
            };
            Output::single(json!({ "function": "psi", "r": r }), row)
        }
    }
}

fn run_verify(which: &VerifyCommand) -> Result<Output> {
    let (name, tol, checks) = match which {
        VerifyCommand::Lemma1(t) => {
            let p = Profile { tol: t.tol };
            ("lemma1", t.tol, vec![checks::lemma1_identity(&p), checks::closed_forms(&p)])
        }
        VerifyCommand::Lemma2(t) => ("lemma2", t.tol, vec![checks::lemma2(&Profile { tol: t.tol })]),
        VerifyCommand::Psi { r, tol } => {
            let p = Profile { tol: tol.tol };
            let record = match r {
                Some(r) => checks::psi_at(&p, &[*r], &[*r]),
                None => checks::psi_vanishes(&p),
            };
            ("psi", tol.tol, vec![record])
        }
        VerifyCommand::Monotonicity(t) => ("monotonicity", t.tol, vec![checks::monotonicity(&Profile { tol: t.tol })]),
        VerifyCommand::Limit { r, n_list, tol } => {
            let p = Profile { tol: tol.tol };
            let radii = r.clone().unwrap_or_else(|| vec![0.0, 0.3, 0.5]);
            let ns = n_list.clone().unwrap_or_else(|| vec![8, 16, 32, 64]);
            ("limit", tol.tol, vec![checks::limit_for(&p, &radii, &ns)])
        }
        VerifyCommand::All(t) => ("all", t.tol, checks::all(&Profile { tol: t.tol })),
    };
    Output::checks(json!({ "suite": name, "tol": tol }), checks)
}

fn run_bernstein(which: &BernsteinCommand) -> Result<Output> {
    match which {
        BernsteinCommand::Ratio {
            f,
            space,
            method,
            tol,
            quad,
        } => {
            let f = read_function(f)?;
            let space = parse_space(space)?;
            let spec = quad.spec(*tol)?;
            let est = ratio_with(&f, &space, &spec, prefer_series(*method, &space)?)?;
            Output::single(json!({ "space": space.label() }), EstimateRow::from(&est))
        }
        BernsteinCommand::Lower { n, r, space } => {
            let space = parse_space(space)?;
            let est = lower_bound_extremal(*n, *r, &space, &QuadratureSpec::default())?;
            Output::single(json!({ "n": n, "r": r, "space": space.label() }), EstimateRow::from(&est))
        }
        BernsteinCommand::ExactH2 { n, r, tol } => {
            let est = h2_confluent_operator_norm(*n, *r, *tol)?;
            Output::single(json!({ "n": n, "r": r, "tail_tol": tol }), EstimateRow::from(&est))
        }
        BernsteinCommand::Sample {
            n,
            r,
            space,
            samples,
            seed,
            quad,
        } => {
            let space = parse_space(space)?;
            let est = sampled_upper(*n, *r, &space, *samples, *seed, &quad.spec(None)?)?;
            Output::single(
                json!({ "n": n, "r": r, "space": space.label(), "samples": samples, "seed": seed }),
                EstimateRow::from(&est),
            )
        }
        BernsteinCommand::Sweep {
            n_list,
            r_list,
            space,
            mode,
            samples,
            seed,
            quad,
        } => {
            let space = parse_space(space)?;
            let sweep_mode = match mode {
                SweepModeArg::Lower => SweepMode::Lower,
                SweepModeArg::Sampled => SweepMode::Sampled {
                    samples: *samples,
                    seed: *seed,
                },
                SweepModeArg::ExactH2 => SweepMode::ExactH2,
            };
            let rows = par_sweep(n_list, r_list, &space, sweep_mode, &quad.spec(None)?)?;
            let label = space.label();
            let rows: Vec<EstimateRow> = rows.iter().map(|row| EstimateRow::from_sweep(row, &label)).collect();
            Output::rows(
                json!({ "n_list": n_list, "r_list": r_list, "space": label,
                        "mode": mode.to_possible_value().map(|v| v.get_name().to_owned()), "samples": samples, "seed": seed }),
                &rows,
            )
        }
        BernsteinCommand::Limit { r, n_list, tol } => {
            let report = limit_check(*r, n_list, *tol)?;
            let mut out = Output::rows(json!({ "r": r, "n_list": n_list, "tol": tol }), &limit_rows(&report))?;
            out.results = json!({
                "target": report.target,
                "per_n_nondecreasing": report.per_n_nondecreasing,
                "error_nonincreasing": report.error_nonincreasing,
                "final_relative_error": report.final_relative_error,
                "exceeds_target": report.exceeds_target,
                "passed": report.passed,
                "rows": out.results,
            });
            out.passed = report.passed;
            Ok(out)
        }
    }
}
