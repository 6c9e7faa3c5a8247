//! `linktopo` command line: builtin pair generators, Gauss-map degree
//! computation, activation-flow checks, network training, separation and
//! approximation verdicts, and the named experiments.
//!
//! Exit codes: 0 success, 1 negative verdict under `--expect`, 2 usage
//! error, 3 numeric failure (degree residual at the half-integer boundary
//! or non-finite values). Stdout carries a human-readable summary; files
//! are the machine-readable record. All randomness flows from explicit
//! seeds (default 0), never from entropy.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linktopo::activation::ActivationKind;
use linktopo::analysis::{approximation_gap, check_separation, default_threshold};
use linktopo::degree::degree_of;
use linktopo::error::Error;
use linktopo::experiment::{
    group_law_grid, run_experiment, ExperimentConfig, GROUP_LAW_TOLERANCE,
};
use linktopo::flow::{
    check_group_law, homotopy_link_preservation, unit_grid, write_trace_csv, DEFAULT_STEP,
};
use linktopo::geometry::{builtin_pair, EmbeddedPair};
use linktopo::net::{
    pair_training_data, train, write_loss_csv, FinalActivation, LabeledData, LossKind, MLPSpec,
    TrainConfig, MLP,
};
use linktopo::output::write_json_pretty;

#[derive(Parser)]
#[command(name = "linktopo", version, about = "linked pairs, Gauss-map degrees, activation flows, and width-limited networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Pair source shared by several subcommands: a builtin name or a pair
/// JSON file written by `generate`.
#[derive(Args)]
struct PairSource {
    /// Builtin pair name (hopf, hopf-reflected, unlinked, far-separated,
    /// sphere-point(2|3|4))
    #[arg(long)]
    pair: Option<String>,
    /// Pair JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Samples per side for builtin pairs
    #[arg(long, default_value_t = 512)]
    samples: usize,
}

impl PairSource {
    fn load(&self) -> Result<EmbeddedPair, Error> {
        match (&self.pair, &self.input) {
            (Some(name), None) => builtin_pair(name, self.samples),
            (None, Some(path)) => EmbeddedPair::from_json_file(path),
            _ => Err(Error::InvalidParameter(
                "give exactly one of --pair <builtin> or --input <file>".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a builtin pair and write its JSON envelope (and CSVs)
    Generate {
        /// Builtin pair name
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Output JSON path
        #[arg(long)]
        out: PathBuf,
        /// Also write side_a.csv / side_b.csv into this directory
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Compute the Gauss-map degree of a pair
    Degree {
        #[command(flatten)]
        source: PairSource,
        /// Write the DegreeReport JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 1 unless the rounded degree equals this
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<i64>,
    },
    /// Activation-flow checks and link-preservation traces
    Flow {
        #[arg(long, default_value = "relu")]
        activation: String,
        /// Check to run: group-law or fixed-point
        #[arg(long, default_value = "group-law")]
        check: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random points for the check grid
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// RK4 step size
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Optional pair for a homotopy link-preservation trace
        #[arg(long)]
        pair: Option<String>,
        /// Samples per side for the traced pair
        #[arg(long, default_value_t = 128)]
        pair_samples: usize,
        /// Write the (s, min_gap, degree) trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Number of homotopy times in [0, 1]
        #[arg(long, default_value_t = 11)]
        s_steps: usize,
        /// Write the check report JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a network: hinge separation on a pair, or mean squared error
    /// on the Urysohn sphere/origin target
    Train {
        /// Layer dims, e.g. 3,4,4,1
        #[arg(long)]
        layers: String,
        #[arg(long, default_value = "relu")]
        activation: String,
        /// same-as-hidden or none
        #[arg(long, default_value = "none")]
        final_activation: String,
        /// hinge-separation or mean-squared-error
        #[arg(long, default_value = "hinge-separation")]
        loss: String,
        #[arg(long, default_value_t = 2000)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        #[arg(long, default_value_t = 0.0)]
        momentum: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pair to classify (hinge loss)
        #[arg(long)]
        pair: Option<String>,
        /// Samples per side (hinge) or sphere samples (mse)
        #[arg(long, default_value_t = 128)]
        samples: usize,
        /// Target dimension and delta for the mse target
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Write the trained network JSON here
        #[arg(long)]
        out: PathBuf,
        /// Write the per-epoch loss CSV here
        #[arg(long)]
        loss_csv: Option<PathBuf>,
    },
    /// Separation verdict for a network's images of a pair
    Separate {
        /// Network JSON file
        #[arg(long)]
        net: PathBuf,
        #[command(flatten)]
        source: PairSource,
        /// Gap decision threshold (default: 10x image sampling resolution)
        #[arg(long)]
        threshold: Option<f64>,
        /// Exit 1 unless the verdict matches: separated or not-separated
        #[arg(long)]
        expect: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximation gap of a scalar network against the Urysohn target
    Approx {
        /// Network JSON file
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Sphere evaluation samples
        #[arg(long, default_value_t = 16000)]
        samples: usize,
        /// Exit 1 if the reported gap falls below this
        #[arg(long)]
        expect_at_least: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment from a JSON config
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_layers(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad layer dim `{s}`")))
        })
        .collect()
}

fn cmd_generate(
    pair_name: &str,
    samples: usize,
    out: &Path,
    csv_dir: Option<&Path>,
) -> Result<ExitCode, Error> {
    let pair = builtin_pair(pair_name, samples)?;
    pair.to_json_file(out)?;
    if let Some(dir) = csv_dir {
        std::fs::create_dir_all(dir)?;
        pair.side_a.write_csv(&dir.join("side_a.csv"))?;
        pair.side_b.write_csv(&dir.join("side_b.csv"))?;
    }
    println!(
        "wrote {pair_name} pair ({} + {} points, min gap {:.6}, expected degree {:?}) to {}",
        pair.side_a.len(),
        pair.side_b.len(),
        pair.min_gap,
        pair.expected_degree,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_degree(
    source: &PairSource,
    out: Option<&Path>,
    expect: Option<i64>,
) -> Result<ExitCode, Error> {
    let pair = source.load()?;
    let report = degree_of(&pair)?;
    println!(
        "degree {} (estimate {}, residual {:.3e}, method {}, {} samples)",
        report.rounded, report.estimate, report.residual, report.method, report.samples_used
    );
    if let Some(path) = out {
        write_json_pretty(path, &report)?;
    }
    if let Some(expected) = expect {
        if expected != report.rounded {
            println!("expectation failed: wanted degree {expected}");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_flow(
    activation: &str,
    check: &str,
    seed: u64,
    samples: usize,
    step: f64,
    pair: Option<&str>,
    pair_samples: usize,
    trace: Option<&Path>,
    s_steps: usize,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let kind = ActivationKind::parse(activation)?;
    let mut report = serde_json::Map::new();
    report.insert("activation".into(), kind.descriptor().into());

    match check {
        "group-law" => {
            let (xs, ts) = group_law_grid(seed, samples, 4, 20, 5.0);
            let deviation = check_group_law(&kind, &xs, &ts, step)?;
            println!(
                "group-law deviation {deviation:.3e} over {samples} points ({} within {GROUP_LAW_TOLERANCE:.0e})",
                if deviation < GROUP_LAW_TOLERANCE { "ok" } else { "VIOLATED" }
            );
            report.insert("check".into(), "group-law".into());
            report.insert("max_deviation".into(), deviation.into());
            if deviation >= GROUP_LAW_TOLERANCE {
                return Err(Error::NonFinite(format!(
                    "group-law deviation {deviation} exceeds tolerance"
                )));
            }
        }
        "fixed-point" => {
            // the relu-style flows fix exactly the coordinatewise
            // nonnegative region; report the worst drift over a grid
            let (xs, _) = group_law_grid(seed, samples, 4, 1, 1.0);
            let mut worst = 0.0f64;
            for x in &xs {
                let clamped: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
                let moved = linktopo::flow::integrate_flow(&kind, &clamped, 1.0, step)?;
                let drift = linktopo::linalg::dist(&moved, &clamped);
                worst = worst.max(drift);
            }
            println!("fixed-point drift {worst:.3e} on the nonnegative orthant");
            report.insert("check".into(), "fixed-point".into());
            report.insert("max_drift".into(), worst.into());
        }
        other => {
            return Err(Error::UnknownName { kind: "flow check", name: other.to_string() })
        }
    }

    if let Some(name) = pair {
        let pair = builtin_pair(name, pair_samples)?;
        let rows = homotopy_link_preservation(&kind, &pair, &unit_grid(s_steps))?;
        let last = rows.last().expect("nonempty grid");
        println!(
            "homotopy trace on {name}: final min gap {:.6}, final degree {:?}",
            last.min_gap, last.degree_rounded
        );
        if let Some(path) = trace {
            write_trace_csv(&rows, path)?;
            println!("trace written to {}", path.display());
        }
    }

    if let Some(path) = out {
        write_json_pretty(path, &serde_json::Value::Object(report))?;
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    layers: &str,
    activation: &str,
    final_activation: &str,
    loss: &str,
    epochs: usize,
    lr: f64,
    momentum: f64,
    seed: u64,
    pair: Option<&str>,
    samples: usize,
    dim: usize,
    delta: f64,
    out: &Path,
    loss_csv: Option<&Path>,
) -> Result<ExitCode, Error> {
    let kind = ActivationKind::parse(activation)?;
    let final_act = match final_activation {
        "same-as-hidden" => FinalActivation::SameAsHidden,
        "none" => FinalActivation::None,
        other => {
            return Err(Error::InvalidParameter(format!(
                "final activation must be same-as-hidden or none, got `{other}`"
            )))
        }
    };
    let loss_kind = match loss {
        "hinge-separation" => LossKind::HingeSeparation,
        "mean-squared-error" => LossKind::MeanSquaredError,
        other => {
            return Err(Error::InvalidParameter(format!(
                "loss must be hinge-separation or mean-squared-error, got `{other}`"
            )))
        }
    };

    let data = match loss_kind {
        LossKind::HingeSeparation => {
            let name = pair.ok_or_else(|| {
                Error::InvalidParameter("hinge training needs --pair".into())
            })?;
            pair_training_data(&builtin_pair(name, samples)?)
        }
        LossKind::MeanSquaredError => {
            let sample = linktopo::geometry::sample_ball_boundary_and_center(dim, delta, samples)?;
            let mut inputs = vec![sample.center.points[0].clone()];
            let mut targets = vec![vec![sample.center_target]];
            for p in &sample.sphere.points {
                inputs.push(p.clone());
                targets.push(vec![sample.sphere_target]);
            }
            LabeledData::new(inputs, targets)?
        }
    };

    let spec = MLPSpec::new(parse_layers(layers)?, kind, final_act, seed)?;
    let net = MLP::init(spec);
    let cfg = TrainConfig {
        learning_rate: lr,
        epochs,
        batch: usize::MAX,
        loss: loss_kind,
        momentum,
        seed,
    };
    let outcome = train(net, &data, &cfg)?;
    outcome.net.to_json_file(out)?;
    if let Some(path) = loss_csv {
        write_loss_csv(&outcome.loss_trace, path)?;
    }
    println!(
        "trained {layers} ({loss}) for {epochs} epochs: loss {} -> {}; net written to {}",
        outcome.loss_trace.first().unwrap(),
        outcome.loss_trace.last().unwrap(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_separate(
    net_path: &Path,
    source: &PairSource,
    threshold: Option<f64>,
    expect: Option<&str>,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let net = MLP::from_json_file(net_path)?;
    let pair = source.load()?;
    let img_a = net.image_of(&pair.side_a)?;
    let img_b = net.image_of(&pair.side_b)?;
    let threshold = threshold.unwrap_or_else(|| default_threshold(&img_a, &img_b));
    let report = check_separation(&img_a, &img_b, threshold)?;
    let verdict = if report.separated { "separated" } else { "not-separated" };
    println!(
        "{verdict} (min inter gap {:.6e}, method {:?}, threshold {threshold:.3e})",
        report.min_inter_gap, report.method
    );
    if let Some(path) = out {
        write_json_pretty(path, &report)?;
    }
    if let Some(expected) = expect {
        if expected != verdict {
            println!("expectation failed: wanted {expected}");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_approx(
    net_path: &Path,
    dim: usize,
    delta: f64,
    samples: usize,
    expect_at_least: Option<f64>,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let net = MLP::from_json_file(net_path)?;
    let report = approximation_gap(&net, dim, delta, samples)?;
    println!(
        "sup error lower bound {:.6} (delta {delta}; net at origin {:.6}, sphere range [{:.4}, {:.4}])",
        report.sup_error_lower_bound,
        report.net_at_origin,
        report.net_range_on_sphere.0,
        report.net_range_on_sphere.1
    );
    if let Some(path) = out {
        write_json_pretty(path, &report)?;
    }
    if let Some(bound) = expect_at_least {
        if report.sup_error_lower_bound < bound {
            println!("expectation failed: gap below {bound}");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(config: &Path) -> Result<ExitCode, Error> {
    let cfg = ExperimentConfig::from_json_file(config)?;
    let summary = run_experiment(&cfg)?;
    println!("[{}] {}", summary.experiment, summary.headline);
    println!(
        "{} runs; artifacts under {} (config hash {})",
        summary.rows.len(),
        cfg.out_dir.display(),
        summary.config_hash
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Generate { pair, samples, out, csv_dir } => {
            cmd_generate(pair, *samples, out, csv_dir.as_deref())
        }
        Command::Degree { source, out, expect } => cmd_degree(source, out.as_deref(), *expect),
        Command::Flow {
            activation,
            check,
            seed,
            samples,
            step,
            pair,
            pair_samples,
            trace,
            s_steps,
            out,
        } => cmd_flow(
            activation,
            check,
            *seed,
            *samples,
            *step,
            pair.as_deref(),
            *pair_samples,
            trace.as_deref(),
            *s_steps,
            out.as_deref(),
        ),
        Command::Train {
            layers,
            activation,
            final_activation,
            loss,
            epochs,
            lr,
            momentum,
            seed,
            pair,
            samples,
            dim,
            delta,
            out,
            loss_csv,
        } => cmd_train(
            layers,
            activation,
            final_activation,
            loss,
            *epochs,
            *lr,
            *momentum,
            *seed,
            pair.as_deref(),
            *samples,
            *dim,
            *delta,
            out,
            loss_csv.as_deref(),
        ),
        Command::Separate { net, source, threshold, expect, out } => {
            cmd_separate(net, source, *threshold, expect.as_deref(), out.as_deref())
        }
        Command::Approx { net, dim, delta, samples, expect_at_least, out } => {
            cmd_approx(net, *dim, *delta, *samples, *expect_at_least, out.as_deref())
        }
        Command::Experiment { config } => cmd_experiment(config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
