//! Command-line front end: scenario runs, parameter sweeps, and
//! machine-readable trajectory/report emission.

mod observable;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bcsmeta::{
    classify_relaxation, critical_beta, evolve_expectation, invariant_exit_time,
    noninvariance_witness, oracle_evolve, relaxation_constants, sigma_z_excursion, solve_gap,
    stability_report, ModelParams, RelaxationClass,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use observable::ObservableSpec;
use report::{
    eeb_csv_row, sweep_csv_row, trajectory_csv_row, EebVerdicts, GapReport, ScenarioOutput,
    ScenarioReport, StabilityOutput, SweepOutput, SweepRow, TrajectoryPoint, EEB_CSV_HEADER,
    SWEEP_CSV_HEADER, TRAJECTORY_CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "bcsmeta",
    version,
    about = "Metastable relaxation between symmetry-broken equilibria of the \
             strong-coupling mean-field BCS model",
    long_about = "Solves the gap equation, drives one symmetry-broken equilibrium \
                  into another with a detailed-balance dissipative semigroup \
                  (phase -phi to +phi), classifies observable trajectories, \
                  computes exit times, and audits the thermodynamic stability \
                  of the intermediate states."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the gap equation and report the relaxation constants
    GapSolve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit one observable's trajectory (closed form vs oracle) plus a full
    /// scenario report
    Evolve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        observable: ObservableArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Seed for the stability-audit operator draws
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Classify one observable's relaxation (monotone / metastable / constant)
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        observable: ObservableArg,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Exit time of one observable, with the shared invariant exit time
    ExitTime {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        observable: ObservableArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Energy-entropy balance audit of the intermediate state
    Stability {
        #[command(flatten)]
        params: ParamArgs,
        /// Audit time; defaults to the three times t*/2, t*, 2t*
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sweep a parameter grid; each parameter flag accepts a comma-separated
    /// list and the rows cover the full product
    Sweep {
        /// Field strengths, e.g. 0.1,0.25,0.4
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
        /// Inverse temperatures as multiples of beta_c(epsilon)
        #[arg(long, value_delimiter = ',', conflicts_with = "beta")]
        beta_ratio: Vec<f64>,
        /// Absolute inverse temperatures
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
        /// Condensate phases
        #[arg(long, value_delimiter = ',', default_value = "0.7853981633974483")]
        phi: Vec<f64>,
        #[command(flatten)]
        observable: ObservableArg,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Field strength (> 0)
    #[arg(long)]
    epsilon: f64,
    /// Absolute inverse temperature
    #[arg(long, conflicts_with = "beta_ratio")]
    beta: Option<f64>,
    /// Inverse temperature as a multiple of beta_c(epsilon), e.g. 2.0
    #[arg(long)]
    beta_ratio: Option<f64>,
    /// Condensate phase: relaxation runs from the phase -phi equilibrium to
    /// the phase +phi one
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    phi: f64,
}

impl ParamArgs {
    fn solve(&self) -> Result<(ModelParams, Option<f64>), String> {
        match (self.beta, self.beta_ratio) {
            (Some(beta), None) => {
                let params = ModelParams::solve(self.epsilon, beta, self.phi)
                    .map_err(|e| format!("epsilon={}, beta={beta}: {e}", self.epsilon))?;
                let ratio = critical_beta(self.epsilon).ok().map(|bc| beta / bc);
                Ok((params, ratio))
            }
            (None, Some(ratio)) => {
                let params = ModelParams::solve_with_beta_ratio(self.epsilon, ratio, self.phi)
                    .map_err(|e| format!("epsilon={}, beta_ratio={ratio}: {e}", self.epsilon))?;
                Ok((params, Some(ratio)))
            }
            (None, None) => Err("one of --beta or --beta-ratio is required".into()),
            (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
        }
    }
}

#[derive(Args)]
struct ObservableArg {
    /// x-quad | y-quad | sigma-z | custom:re,im,re,im,re,im,re,im (row-major)
    #[arg(long, default_value = "sigma-z")]
    observable: ObservableSpec,
}

#[derive(Args)]
struct GridArgs {
    /// First sample time; defaults to 1e-4/c
    #[arg(long)]
    t_min: Option<f64>,
    /// Last sample time; defaults to 20/c
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of samples (>= 2)
    #[arg(long, default_value_t = 201)]
    t_count: usize,
    /// Grid spacing
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    t_scale: Scale,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, content: &str) -> Result<(), String> {
        match &self.out {
            Some(path) => fs::write(path, content)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::GapSolve { params, output } => {
            let (solved, ratio) = params.solve()?;
            let gap = gap_report(&solved, ratio)?;
            match output.format {
                Format::Json => output.emit(&(to_json(&gap)? + "\n")),
                Format::Csv => {
                    output.emit(&format!("{}\n{}\n", GapReport::CSV_HEADER, gap.csv_row()))
                }
            }
        }
        Command::Evolve {
            params,
            observable,
            grid,
            output,
            seed,
        } => {
            let (solved, ratio) = params.solve()?;
            let (scenario, trajectory) =
                run_scenario(&solved, ratio, &observable.observable, &grid, seed)?;
            match output.format {
                Format::Json => {
                    let combined = ScenarioOutput {
                        report: scenario,
                        trajectory,
                    };
                    output.emit(&(to_json(&combined)? + "\n"))
                }
                Format::Csv => {
                    let mut table = String::from(TRAJECTORY_CSV_HEADER);
                    table.push('\n');
                    for point in &trajectory {
                        table.push_str(&trajectory_csv_row(point));
                        table.push('\n');
                    }
                    output.emit(&table)?;
                    // the report rides along on stderr so the table stays clean
                    eprintln!("{}", serde_json::to_string(&scenario).map_err(err_string)?);
                    Ok(())
                }
            }
        }
        Command::Classify {
            params,
            observable,
            output,
            seed,
        } => {
            let (solved, ratio) = params.solve()?;
            let scenario = scenario_report(&solved, ratio, &observable.observable, seed)?;
            match output.format {
                Format::Json => output.emit(&(to_json(&scenario)? + "\n")),
                Format::Csv => output.emit(&format!(
                    "observable,classification,amplitude_offdiag,amplitude_diag,exit_time\n\
                     {},{},{},{},{}\n",
                    scenario.observable,
                    scenario.classification,
                    scenario.amplitude_offdiag,
                    scenario.amplitude_diag,
                    scenario
                        .exit_time
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                )),
            }
        }
        Command::ExitTime {
            params,
            observable,
            output,
        } => {
            let (solved, ratio) = params.solve()?;
            let gap = gap_report(&solved, ratio)?;
            let (op, warned) = observable.observable.build(solved.phi());
            warn_hermitized(warned);
            let report = classify_relaxation(&solved, &op)
                .map_err(|e| format!("classification failed: {e}"))?;
            let scenario = ScenarioReport {
                gap,
                phi: solved.phi(),
                observable: observable.observable.to_string(),
                seed: 0,
                classification: class_name(report.class).into(),
                amplitude_offdiag: report.amplitude_offdiag,
                amplitude_diag: report.amplitude_diag,
                exit_time: report.exit_time,
                eeb: None,
            };
            match output.format {
                Format::Json => output.emit(&(to_json(&scenario)? + "\n")),
                Format::Csv => output.emit(&format!(
                    "observable,classification,exit_time,invariant_exit_time\n{},{},{},{}\n",
                    scenario.observable,
                    scenario.classification,
                    scenario
                        .exit_time
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                    scenario
                        .gap
                        .invariant_exit_time
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                )),
            }
        }
        Command::Stability {
            params,
            t,
            output,
            seed,
        } => {
            let (solved, ratio) = params.solve()?;
            let gap = gap_report(&solved, ratio)?;
            let times = match t {
                Some(t) => vec![t],
                None => {
                    let t_star = invariant_exit_time(&solved)
                        .map_err(|e| format!("cannot pick default audit times (use --t): {e}"))?;
                    vec![0.5 * t_star, t_star, 2.0 * t_star]
                }
            };
            let mut rows = Vec::new();
            for t in times {
                rows.push(eeb_verdicts(&solved, t, seed)?);
            }
            let combined = StabilityOutput {
                gap,
                phi: solved.phi(),
                seed,
                rows,
            };
            match output.format {
                Format::Json => output.emit(&(to_json(&combined)? + "\n")),
                Format::Csv => {
                    let mut table = String::from(EEB_CSV_HEADER);
                    table.push('\n');
                    for row in &combined.rows {
                        table.push_str(&eeb_csv_row(row));
                        table.push('\n');
                    }
                    output.emit(&table)
                }
            }
        }
        Command::Sweep {
            epsilon,
            beta_ratio,
            beta,
            phi,
            observable,
            output,
            seed,
        } => {
            if beta_ratio.is_empty() && beta.is_empty() {
                return Err("one of --beta or --beta-ratio is required".into());
            }
            let beta_specs: Vec<(Option<f64>, Option<f64>)> = if beta.is_empty() {
                beta_ratio.iter().map(|&r| (Some(r), None)).collect()
            } else {
                beta.iter().map(|&b| (None, Some(b))).collect()
            };
            let mut rows = Vec::new();
            for &eps in &epsilon {
                for &(ratio, absolute) in &beta_specs {
                    for &phase in &phi {
                        rows.push(sweep_row(
                            eps,
                            ratio,
                            absolute,
                            phase,
                            &observable.observable,
                            seed,
                        ));
                    }
                }
            }
            match output.format {
                Format::Json => output.emit(&(to_json(&SweepOutput { rows })? + "\n")),
                Format::Csv => {
                    let mut table = String::from(SWEEP_CSV_HEADER);
                    table.push('\n');
                    for row in &rows {
                        table.push_str(&sweep_csv_row(row));
                        table.push('\n');
                    }
                    output.emit(&table)
                }
            }
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(err_string)
}

fn err_string<E: std::fmt::Display>(e: E) -> String {
    format!("serialization failed: {e}")
}

fn warn_hermitized(warned: bool) {
    if warned {
        eprintln!("warning: custom observable was not Hermitian; using its Hermitian part");
    }
}

fn class_name(class: RelaxationClass) -> &'static str {
    match class {
        RelaxationClass::Monotone => "monotone",
        RelaxationClass::Metastable => "metastable",
        RelaxationClass::Constant => "constant",
    }
}

fn gap_report(params: &ModelParams, ratio: Option<f64>) -> Result<GapReport, String> {
    let constants = relaxation_constants(params)
        .map_err(|e| format!("relaxation constants unavailable: {e}"))?;
    Ok(GapReport {
        epsilon: params.epsilon(),
        beta: params.beta(),
        beta_ratio: ratio,
        beta_critical: critical_beta(params.epsilon()).ok(),
        lambda: params.lambda(),
        k: params.k(),
        superconducting: params.is_superconducting(),
        residual: params.gap().residual,
        c: constants.c,
        d: constants.d,
        invariant_exit_time: invariant_exit_time(params).ok(),
    })
}

fn scenario_report(
    params: &ModelParams,
    ratio: Option<f64>,
    spec: &ObservableSpec,
    seed: u64,
) -> Result<ScenarioReport, String> {
    let gap = gap_report(params, ratio)?;
    let (op, warned) = spec.build(params.phi());
    warn_hermitized(warned);
    let classification =
        classify_relaxation(params, &op).map_err(|e| format!("classification failed: {e}"))?;

    // stability audit at the canonical times when an exit time exists
    let eeb = match classification.exit_time {
        Some(t_star) => {
            let mut rows = Vec::new();
            for factor in [0.5, 1.0, 2.0] {
                rows.push(eeb_verdicts(params, factor * t_star, seed)?);
            }
            Some(rows)
        }
        None => None,
    };

    Ok(ScenarioReport {
        gap,
        phi: params.phi(),
        observable: spec.to_string(),
        seed,
        classification: class_name(classification.class).into(),
        amplitude_offdiag: classification.amplitude_offdiag,
        amplitude_diag: classification.amplitude_diag,
        exit_time: classification.exit_time,
        eeb,
    })
}

fn run_scenario(
    params: &ModelParams,
    ratio: Option<f64>,
    spec: &ObservableSpec,
    grid: &GridArgs,
    seed: u64,
) -> Result<(ScenarioReport, Vec<TrajectoryPoint>), String> {
    let scenario = scenario_report(params, ratio, spec, seed)?;
    let (op, _) = spec.build(params.phi());

    let constants = relaxation_constants(params)
        .map_err(|e| format!("relaxation constants unavailable: {e}"))?;
    let t_min = grid.t_min.unwrap_or(1e-4 / constants.c);
    let t_max = grid.t_max.unwrap_or(20.0 / constants.c);
    if grid.t_count < 2 {
        return Err(format!(
            "--t-count must be at least 2, got {}",
            grid.t_count
        ));
    }
    if t_min >= t_max || t_min.is_nan() || t_max.is_nan() {
        return Err(format!("--t-min ({t_min}) must be below --t-max ({t_max})"));
    }
    if grid.t_scale == Scale::Log && t_min <= 0.0 {
        return Err(format!(
            "--t-min must be positive on a log grid, got {t_min}"
        ));
    }
    if t_min < 0.0 {
        return Err(format!("--t-min must be nonnegative, got {t_min}"));
    }

    let n = grid.t_count;
    let mut trajectory = Vec::with_capacity(n);
    for i in 0..n {
        let fraction = i as f64 / (n - 1) as f64;
        let t = match grid.t_scale {
            Scale::Linear => t_min + (t_max - t_min) * fraction,
            Scale::Log => t_min * (t_max / t_min).powf(fraction),
        };
        let closed = evolve_expectation(params, &op, t)
            .map_err(|e| format!("evolution failed at t={t}: {e}"))?;
        let oracle =
            oracle_evolve(params, &op, t).map_err(|e| format!("oracle failed at t={t}: {e}"))?;
        trajectory.push(TrajectoryPoint {
            t,
            closed_form: closed.re,
            oracle: oracle.re,
            abs_diff: (closed - oracle).norm(),
        });
    }
    Ok((scenario, trajectory))
}

fn eeb_verdicts(params: &ModelParams, t: f64, seed: u64) -> Result<EebVerdicts, String> {
    let report = stability_report(params, t, seed)
        .map_err(|e| format!("stability audit failed at t={t}: {e}"))?;
    let witness = noninvariance_witness(params, t)
        .map_err(|e| format!("witness evaluation failed at t={t}: {e}"))?;
    Ok(EebVerdicts {
        t,
        quadratures_satisfied: report.quadratures.satisfied,
        quadratures_worst_margin: report.quadratures.worst_margin,
        constants_of_motion_satisfied: report.constants_of_motion.satisfied,
        constants_of_motion_worst_margin: report.constants_of_motion.worst_margin,
        creation_satisfied: report.creation.satisfied,
        creation_worst_margin: report.creation.worst_margin,
        annihilation_satisfied: report.annihilation.satisfied,
        annihilation_worst_margin: report.annihilation.worst_margin,
        population_ratio: report.population_ratio,
        boltzmann_ratio: report.boltzmann_ratio,
        witness_modulus: witness.norm(),
    })
}

fn sweep_row(
    epsilon: f64,
    ratio: Option<f64>,
    absolute: Option<f64>,
    phi: f64,
    spec: &ObservableSpec,
    seed: u64,
) -> SweepRow {
    let mut row = SweepRow {
        epsilon,
        beta_ratio: ratio,
        beta: absolute,
        phi,
        lambda: None,
        k: None,
        superconducting: None,
        residual: None,
        c: None,
        d: None,
        classification: None,
        t_star: None,
        peak_excursion: None,
        eeb_families_satisfied: None,
        annihilation_violated: None,
        error: None,
    };
    if let Err(message) = try_sweep_row(&mut row, epsilon, ratio, absolute, phi, spec, seed) {
        row.error = Some(message);
    }
    row
}

fn try_sweep_row(
    row: &mut SweepRow,
    epsilon: f64,
    ratio: Option<f64>,
    absolute: Option<f64>,
    phi: f64,
    spec: &ObservableSpec,
    seed: u64,
) -> Result<(), String> {
    let params = match (ratio, absolute) {
        (Some(r), None) => {
            ModelParams::solve_with_beta_ratio(epsilon, r, phi).map_err(|e| e.to_string())?
        }
        (None, Some(b)) => ModelParams::solve(epsilon, b, phi).map_err(|e| e.to_string())?,
        _ => return Err("exactly one of beta and beta_ratio must be set".into()),
    };
    row.beta = Some(params.beta());
    let gap = solve_gap(epsilon, params.beta()).map_err(|e| e.to_string())?;
    row.lambda = Some(gap.lambda);
    row.k = Some(gap.k);
    row.superconducting = Some(gap.superconducting);
    row.residual = Some(gap.residual);
    let constants = relaxation_constants(&params).map_err(|e| e.to_string())?;
    row.c = Some(constants.c);
    row.d = Some(constants.d);

    let (op, _) = spec.build(phi);
    let report = classify_relaxation(&params, &op).map_err(|e| e.to_string())?;
    row.classification = Some(class_name(report.class).into());
    row.t_star = report.exit_time;

    if let Some(t_star) = report.exit_time {
        row.peak_excursion = Some(sigma_z_excursion(&params, t_star));
        let audit = stability_report(&params, t_star, seed).map_err(|e| e.to_string())?;
        let satisfied = [
            audit.quadratures.satisfied,
            audit.constants_of_motion.satisfied,
            audit.creation.satisfied,
            audit.annihilation.satisfied,
        ]
        .iter()
        .filter(|s| **s)
        .count() as u8;
        row.eeb_families_satisfied = Some(satisfied);
        row.annihilation_violated = Some(!audit.annihilation.satisfied);
    }
    Ok(())
}
