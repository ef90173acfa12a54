use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use tankpost::{
    compute_posterior, high_mass_subset_with_horizon, median_interval, mle, mvue, posterior_mean,
    posterior_predictive_curve, run_calibration, tail_probability, trial_rng, capture_sample,
    CalibrationConfig, Error, MassFunction, PriorEntry, PriorSpec, SerialSample, DEFAULT_HORIZON,
};

use crate::output::*;

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration; exit code 2.
    Usage { code: String, detail: String },
    /// Anything else; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn usage(code: &str, detail: impl Into<String>) -> Self {
        CliError::Usage {
            code: code.to_string(),
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::usage(e.code(), e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorChoice {
    /// Uniform over {0, ..., n_max}.
    Uniform,
    /// Weights read from --prior-file.
    Table,
    /// Flat over all naturals (needs k >= 2).
    Improper,
}

#[derive(Debug, Args)]
pub struct SerialArgs {
    /// Captured serial numbers, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required_unless_present = "serials_file", conflicts_with = "serials_file")]
    pub serials: Vec<i64>,
    /// File with one serial number per line.
    #[arg(long)]
    pub serials_file: Option<PathBuf>,
}

impl SerialArgs {
    fn sample(&self) -> Result<SerialSample, CliError> {
        let raw = match &self.serials_file {
            Some(path) => read_serials(path)?,
            None => self.serials.clone(),
        };
        Ok(SerialSample::new(&raw)?)
    }
}

fn read_serials(path: &Path) -> Result<Vec<i64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage("IoError", format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<i64>()
                .map_err(|e| CliError::usage("ParseError", format!("serial {l:?}: {e}")))
        })
        .collect()
}

#[derive(Debug, Args)]
pub struct PriorArgs {
    /// Prior over population sizes.
    #[arg(long, value_enum)]
    pub prior: PriorChoice,
    /// Upper bound for the uniform prior.
    #[arg(long)]
    pub n_max: Option<u64>,
    /// JSON array of {"n": int, "weight": real} for the table prior.
    #[arg(long)]
    pub prior_file: Option<PathBuf>,
}

impl PriorArgs {
    fn spec(&self) -> Result<PriorSpec, CliError> {
        match self.prior {
            PriorChoice::Uniform => {
                let n_max = self
                    .n_max
                    .ok_or_else(|| CliError::usage("UsageError", "--prior uniform needs --n-max"))?;
                Ok(PriorSpec::truncated_uniform(n_max)?)
            }
            PriorChoice::Table => {
                let path = self.prior_file.as_ref().ok_or_else(|| {
                    CliError::usage("UsageError", "--prior table needs --prior-file")
                })?;
                Ok(PriorSpec::table(read_prior_table(path)?)?)
            }
            PriorChoice::Improper => Ok(PriorSpec::improper_uniform()),
        }
    }

    fn info(&self) -> PriorInfo {
        let kind = match self.prior {
            PriorChoice::Uniform => "uniform",
            PriorChoice::Table => "table",
            PriorChoice::Improper => "improper",
        };
        PriorInfo {
            kind,
            n_max: self.n_max.filter(|_| self.prior == PriorChoice::Uniform),
        }
    }
}

pub fn read_prior_table(path: &Path) -> Result<Vec<PriorEntry>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage("IoError", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage("InvalidPrior", format!("{}: {e}", path.display())))
}

fn check_alpha(alpha: f64) -> Result<f64, CliError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(Error::InvalidAlpha(alpha).into())
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub serials: SerialArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Credible subset level: the subset holds at least 1 - alpha of the mass.
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    /// Report P(N > value); repeatable.
    #[arg(long = "query-gt")]
    pub query_gt: Vec<u64>,
    /// Evaluation horizon for summaries of an improper-prior posterior.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u64,
    /// Last size tabulated for an improper-prior posterior (default: end of
    /// the 0.999 high-mass subset).
    #[arg(long)]
    pub table_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Posterior mass at or beyond which an improper posterior's default table
/// stops.
const IMPROPER_TABLE_ALPHA: f64 = 1e-3;

pub fn cmd_estimate(args: &EstimateArgs) -> Result<Vec<u8>, CliError> {
    let sample = args.serials.sample()?;
    let prior = args.prior.spec()?;
    let alpha = check_alpha(args.alpha)?;
    let post = compute_posterior(&sample, &prior)?;
    let out = estimate(&sample, &post, args.prior.info(), alpha, args)?;
    match args.format {
        Format::Json => Ok(to_json(&out)?),
        Format::Csv => Ok(to_csv(&out.posterior)?),
    }
}

fn estimate(
    sample: &SerialSample,
    post: &MassFunction,
    prior: PriorInfo,
    alpha: f64,
    args: &EstimateArgs,
) -> Result<EstimateOutput, CliError> {
    let subset = high_mass_subset_with_horizon(post, alpha, args.horizon)?;
    let last = match post.support_max() {
        Some(last) => last,
        None => match args.table_max {
            Some(t) => t.max(post.support_min()),
            None => high_mass_subset_with_horizon(post, IMPROPER_TABLE_ALPHA, args.horizon)
                .ok()
                .and_then(|h| h.max())
                .unwrap_or(args.horizon)
                .max(subset.max().unwrap_or(0)),
        },
    };
    let posterior = (post.support_min()..=last)
        .map(|n| MassRow {
            n,
            mass: sig(post.mass(n)),
        })
        .collect();
    let ppc = posterior_predictive_curve(post, sample.k(), last)
        .into_iter()
        .enumerate()
        .map(|(i, p)| Predictive {
            serial: i as u64 + 1,
            capture_probability: sig(p),
        })
        .collect();
    let (lo, hi) = median_interval(post);
    Ok(EstimateOutput {
        sample: sample.clone(),
        prior,
        estimators: Estimators {
            mle: mle(sample),
            mvue: sig(mvue(sample)),
        },
        support_min: post.support_min(),
        posterior_truncated: !post.is_finite(),
        posterior,
        posterior_mean: posterior_mean(post).ok().map(sig),
        median: lo,
        median_interval: [lo, hi],
        credible_subset: Subset {
            alpha,
            members: subset.members,
            attained_mass: sig(subset.attained_mass),
            threshold_mass: sig(subset.threshold_mass),
        },
        queries: args
            .query_gt
            .iter()
            .map(|&gt| Query {
                gt,
                probability: sig(tail_probability(post, gt)),
            })
            .collect(),
        ppc,
    })
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub serials: SerialArgs,
    /// Only the uniform prior is swept.
    #[arg(long, value_enum, default_value_t = PriorChoice::Uniform)]
    pub prior: PriorChoice,
    /// Upper bounds of the uniform prior to compare, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_max_sweep: Vec<u64>,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn cmd_sensitivity(args: &SensitivityArgs) -> Result<Vec<u8>, CliError> {
    if args.prior != PriorChoice::Uniform {
        return Err(CliError::usage(
            "UsageError",
            "sensitivity sweeps support --prior uniform only",
        ));
    }
    let sample = args.serials.sample()?;
    let alpha = check_alpha(args.alpha)?;
    let mut sweep = Vec::with_capacity(args.n_max_sweep.len());
    for &n_max in &args.n_max_sweep {
        let post = compute_posterior(&sample, &PriorSpec::truncated_uniform(n_max)?)?;
        let subset = high_mass_subset_with_horizon(&post, alpha, DEFAULT_HORIZON)?;
        let (lo, hi) = median_interval(&post);
        sweep.push(SweepRow {
            n_max,
            median: lo,
            median_interval: [lo, hi],
            credible_min: subset.min().expect("nonempty subset"),
            credible_max: subset.max().expect("nonempty subset"),
            credible_size: subset.len(),
            attained_mass: sig(subset.attained_mass),
        });
    }
    match args.format {
        Format::Json => Ok(to_json(&SensitivityOutput {
            sample,
            alpha,
            sweep,
        })?),
        Format::Csv => {
            let rows: Vec<SweepCsvRow> = sweep.iter().map(SweepCsvRow::from).collect();
            Ok(to_csv(&rows)?)
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Population size.
    #[arg(long)]
    pub n: u64,
    /// Number of tanks to capture.
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<u8>, CliError> {
    let mut rng = trial_rng(args.seed, 0);
    let sample = capture_sample(args.n, args.k, &mut rng)?;
    match args.format {
        Format::Json => Ok(to_json(&SimulateOutput {
            n: args.n,
            k: args.k,
            seed: args.seed,
            sample,
        })?),
        Format::Csv => {
            let rows: Vec<CaptureCsvRow> = sample
                .serials()
                .iter()
                .enumerate()
                .map(|(i, &serial)| CaptureCsvRow {
                    capture: i + 1,
                    serial,
                })
                .collect();
            Ok(to_csv(&rows)?)
        }
    }
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Captures per trial.
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn cmd_calibrate(args: &CalibrateArgs) -> Result<Vec<u8>, CliError> {
    let config = CalibrationConfig {
        prior: args.prior.spec()?,
        k: args.k,
        alpha: check_alpha(args.alpha)?,
        trials: args.trials,
        seed: args.seed,
    };
    let mut report = run_calibration(&config)?;
    report.coverage = sig(report.coverage);
    report.coverage_std_error = sig(report.coverage_std_error);
    report.mean_subset_size = sig(report.mean_subset_size);
    for v in report
        .estimator_bias
        .values_mut()
        .chain(report.estimator_bias_std_error.values_mut())
    {
        *v = sig(*v);
    }
    Ok(to_json(&report)?)
}
