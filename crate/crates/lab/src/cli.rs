//! The `prset` command line.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 for
//! I/O errors, 3 when `verify` reports a failing check.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use prset_core::harness::{aggregate, aggregate_records, prepare_scenario, prepare_trial, Curve, RunConfig, Scenario};
use prset_core::hypothesis::{littlestone_dimension, vc_dimension};
use prset_core::learners::LearnerSpec;
use prset_core::{Error as CoreError, FeedbackMode};

use crate::emit::{read_records_json, sig6, write_curve_csv, write_curve_svg, write_records_json};
use crate::parallel::{run_records, run_summaries};
use crate::scenario_file::{is_preset, resolve, ScenarioFile};
use crate::verify;
use crate::{LabError, LabResult};

pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "prset", version, about = "Online set learning experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master seed; trial i uses stream id i.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    /// Overrides the feedback mode of the scenario.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Simplified,
    Original,
}

impl From<ModeArg> for FeedbackMode {
    fn from(m: ModeArg) -> FeedbackMode {
        match m {
            ModeArg::Simplified => FeedbackMode::Simplified,
            ModeArg::Original => FeedbackMode::Original,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one learner on one scenario and write curve.csv, records.json and curve.svg.
    Run {
        /// Preset (star:N, powerset:D, lbvc:D, bandit:k,n,eps[,I|II[,i]], appendix-c:d[,block][,core]) or scenario file.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        learner: String,
        #[arg(long)]
        horizon: usize,
    },
    /// Every combination of scenarios, learners and horizons; writes summary.csv and one curve per combination.
    Sweep {
        #[arg(long, num_args = 1.., required = true)]
        scenario: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        learner: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        horizon: Vec<usize>,
    },
    /// Print the VC and Littlestone dimensions of a scenario's class on its available set.
    Dims {
        /// Preset or scenario file; a file only needs `universe_size` and `class`.
        scenario: String,
    },
    /// Run the built-in self-checks.
    Verify,
    /// Re-plot a records.json file into the output directory.
    Plot {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value = "pseudo-regret")]
        title: String,
    },
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> LabResult<i32> {
    let g = &cli.global;
    let mode = g.mode.map(FeedbackMode::from);
    match &cli.command {
        Command::Run { scenario, learner, horizon } => run(g, mode, scenario, learner, *horizon),
        Command::Sweep { scenario, learner, horizon } => sweep(g, mode, scenario, learner, horizon),
        Command::Dims { scenario } => dims(scenario, mode),
        Command::Verify => Ok(verify_cmd()),
        Command::Plot { records, title } => plot(g, records, title),
    }
}

fn parse_learner(s: &str) -> LabResult<LearnerSpec> {
    s.parse::<LearnerSpec>().map_err(|e: CoreError| LabError::config(format!("learner `{s}`: {e}")))
}

/// Everything that can fail on bad input is checked here, before any file
/// is written.
fn checked(scenario: &Scenario, spec: &LearnerSpec, horizon: usize, g: &Global) -> LabResult<Scenario> {
    let cfg = RunConfig {
        scenario: scenario.clone(),
        learner: *spec,
        horizon,
        trials: g.trials,
        master_seed: g.seed,
    };
    cfg.validate()?;
    let prepared = prepare_scenario(scenario, spec)?;
    prepare_trial(&prepared, spec, horizon, g.seed, 0)?;
    Ok(prepared)
}

fn create_dir(path: &Path) -> LabResult<()> {
    fs::create_dir_all(path).map_err(|e| LabError::io(path, e))
}

fn run(g: &Global, mode: Option<FeedbackMode>, scenario: &str, learner: &str, horizon: usize) -> LabResult<i32> {
    let spec = parse_learner(learner)?;
    let sc = checked(&resolve(scenario, mode)?, &spec, horizon, g)?;
    let records = run_records(&RunConfig {
        scenario: sc,
        learner: spec,
        horizon,
        trials: g.trials,
        master_seed: g.seed,
    })?;
    let curve = aggregate_records(&records)?;
    create_dir(&g.out)?;
    write_curve_csv(&curve, &g.out.join("curve.csv"))?;
    write_records_json(&records, &g.out.join("records.json"))?;
    write_curve_svg(&curve, &format!("{spec} on {scenario}"), &g.out.join("curve.svg"))?;
    print_final(&curve);
    Ok(0)
}

fn print_final(curve: &Curve) {
    let last = curve.horizon() - 1;
    println!(
        "T={} trials={} regret={} [{}, {}]",
        curve.horizon(),
        curve.trials,
        sig6(curve.mean[last]),
        sig6(curve.ci_low[last]),
        sig6(curve.ci_high[last])
    );
}

fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

fn sweep(
    g: &Global,
    mode: Option<FeedbackMode>,
    scenarios: &[String],
    learners: &[String],
    horizons: &[usize],
) -> LabResult<i32> {
    let specs = learners.iter().map(|l| parse_learner(l)).collect::<LabResult<Vec<_>>>()?;
    let resolved = scenarios.iter().map(|s| resolve(s, mode)).collect::<LabResult<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (name, sc) in scenarios.iter().zip(&resolved) {
        for spec in &specs {
            for &h in horizons {
                jobs.push((name, checked(sc, spec, h, g)?, spec, h));
            }
        }
    }
    create_dir(&g.out)?;
    let summary_path = g.out.join("summary.csv");
    let mut summary = csv::Writer::from_path(&summary_path).map_err(|e| LabError::Csv { path: summary_path.clone(), source: e })?;
    let csv_err = |e: csv::Error| LabError::Csv { path: summary_path.clone(), source: e };
    summary
        .write_record(["scenario", "learner", "horizon", "trials", "mean_regret", "ci_low", "ci_high"])
        .map_err(csv_err)?;
    for (name, sc, spec, h) in jobs {
        let runs = run_summaries(&sc, spec, h, g.trials, g.seed, true)?;
        let curves: Vec<Vec<f64>> = runs.into_iter().map(|r| r.curve.unwrap_or_default()).collect();
        let curve = aggregate(&curves)?;
        let stem = format!("{}__{}__T{h}", slug(name), slug(&spec.to_string()));
        write_curve_csv(&curve, &g.out.join(format!("{stem}.csv")))?;
        let last = h - 1;
        summary
            .write_record([
                name.to_string(),
                spec.to_string(),
                h.to_string(),
                g.trials.to_string(),
                sig6(curve.mean[last]),
                sig6(curve.ci_low[last]),
                sig6(curve.ci_high[last]),
            ])
            .map_err(csv_err)?;
        println!("{name} {spec} T={h} regret={}", sig6(curve.mean[last]));
    }
    summary.flush().map_err(|e| LabError::io(&summary_path, e))?;
    Ok(0)
}

fn dims(scenario: &str, mode: Option<FeedbackMode>) -> LabResult<i32> {
    let (class, domain) = if is_preset(scenario) {
        let sc = resolve(scenario, mode)?;
        (sc.view().class().clone(), sc.view().available().clone())
    } else {
        ScenarioFile::load(Path::new(scenario))?.class_and_domain()?
    };
    let (class, domain) = (&*class, &domain);
    match vc_dimension(class, domain) {
        Ok(d) => println!("VC={d}"),
        Err(CoreError::Capacity { .. }) => println!("VC=skipped (capacity)"),
        Err(e) => return Err(e.into()),
    }
    match littlestone_dimension(class, domain) {
        Ok(d) => println!("Littlestone={d}"),
        Err(CoreError::Capacity { .. }) => println!("Littlestone=skipped (capacity)"),
        Err(e) => return Err(e.into()),
    }
    Ok(0)
}

fn verify_cmd() -> i32 {
    let results = verify::run_all();
    let mut failed = 0;
    for r in &results {
        match &r.outcome {
            Ok(()) => println!("PASS {}", r.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {msg}", r.name);
            }
        }
    }
    println!("{} checks, {failed} failed", results.len());
    if failed == 0 {
        0
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn plot(g: &Global, records: &Path, title: &str) -> LabResult<i32> {
    let records = read_records_json(records)?;
    let curve = aggregate_records(&records)?;
    create_dir(&g.out)?;
    write_curve_csv(&curve, &g.out.join("curve.csv"))?;
    write_curve_svg(&curve, title, &g.out.join("curve.svg"))?;
    print_final(&curve);
    Ok(0)
}
