//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use adnf_core::{compute_ftis, hard_assign, process_stream, refine, silhouette, tune_fuzziness, AdnfConfig};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, Result};
use crate::features::{load_features, load_labels, save_features, save_labels, write_labels};
use crate::pipeline::{initialise, plot_projection, run_pipeline};
use crate::snapshot::{load_model, save_model};
use crate::synth::{generate_stream, SyntheticStreamSpec};

#[derive(Debug, Parser)]
#[command(name = "adnf", version, about = "Adaptive dynamic neuro-fuzzy stream clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// JSON file with configuration fields; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Initial cluster count.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub m0: Option<f64>,
    #[arg(long)]
    pub k_sigma: Option<f64>,
    #[arg(long)]
    pub eps_split: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub rho_merge: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub min_samples: Option<usize>,
    #[arg(long)]
    pub history_cap: Option<usize>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<AdnfConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Format { path: path.clone(), message: e.to_string() })?
            }
            None => AdnfConfig::default(),
        };
        if let Some(v) = self.clusters {
            cfg.c = v;
        }
        if let Some(v) = self.m0 {
            cfg.m0 = v;
        }
        if let Some(v) = self.k_sigma {
            cfg.k_sigma = v;
        }
        if let Some(v) = self.eps_split {
            cfg.eps_split = v;
        }
        if let Some(v) = self.lambda_min {
            cfg.lambda_min = v;
        }
        if let Some(v) = self.rho_merge {
            cfg.rho_merge = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.min_samples {
            cfg.min_samples = v;
        }
        if self.history_cap.is_some() {
            cfg.history_cap = self.history_cap;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit batch FCM and write the initial model snapshot.
    Init {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Absorb points into a model, one JSON report per point.
    Stream {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Output snapshot; defaults to overwriting --model.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Retune per-cluster fuzziness and print the adaptation report.
    Adapt {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report to this file (consumed by `refine --adaptation`).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Merge and split micro-clusters once.
    Refine {
        #[arg(long)]
        model: PathBuf,
        /// Adaptation report supplying the temporal indices; current values otherwise.
        #[arg(long)]
        adaptation: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label each row with its nearest micro-cluster.
    Assign {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the silhouette score of a labeling.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        labels: PathBuf,
    },
    /// Project features onto their top principal components.
    Pca {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        components: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic Gaussian-mixture stream.
    Gen {
        /// JSON stream spec; the blob flags are ignored when given.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        blobs: usize,
        #[arg(long, default_value_t = 10.0)]
        spacing: f64,
        #[arg(long, default_value_t = 0.2)]
        std: f64,
        #[arg(long, default_value_t = 300)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth component of each row.
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
    /// Full pipeline: init on the first batch, stream the rest, adapt, refine, assign, evaluate.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rows used for initialisation; default max(10·c, 20% of N).
        #[arg(long)]
        init_size: Option<usize>,
        /// Final model snapshot.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of the 2-D PCA projection with a trailing label column.
        #[arg(long)]
        projection: Option<PathBuf>,
        #[arg(long)]
        labels_out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn emit<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    let line = serde_json::to_string(value)?;
    writeln!(out, "{line}").map_err(|e| CliError::io("<stdout>", e))
}

fn write_projection(path: &Path, x: &adnf_core::FeatureMatrix, labels: &[usize]) -> Result<()> {
    let proj = plot_projection(x)?;
    let mut text = String::new();
    for (row, label) in proj.iter_rows().zip(labels) {
        for v in row {
            text.push_str(&v.to_string());
            text.push(',');
        }
        text.push_str(&label.to_string());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn execute<W: Write + ?Sized>(command: Command, out: &mut W) -> Result<()> {
    match command {
        Command::Init { input, out: path, seed, config } => {
            let cfg = config.resolve()?;
            let x = load_features(&input, None)?;
            let (state, summary) = initialise(&x, &cfg, seed)?;
            save_model(&state, &cfg, &path)?;
            emit(out, &json!({ "stage": "init", "summary": summary }))
        }
        Command::Stream { model, input, out: path } => {
            let (mut state, cfg) = load_model(&model)?;
            let x = load_features(&input, None)?;
            let reports = process_stream(x.iter_rows(), &mut state, &cfg)?;
            for r in &reports {
                emit(out, r)?;
            }
            save_model(&state, &cfg, path.as_ref().unwrap_or(&model))
        }
        Command::Adapt { model, out: path, report } => {
            let (mut state, cfg) = load_model(&model)?;
            let adaptation = tune_fuzziness(&mut state, &cfg)?;
            if let Some(report) = report {
                let text = serde_json::to_string_pretty(&adaptation)?;
                std::fs::write(&report, text).map_err(|e| CliError::io(&report, e))?;
            }
            save_model(&state, &cfg, path.as_ref().unwrap_or(&model))?;
            emit(out, &json!({ "stage": "adapt", "report": adaptation }))
        }
        Command::Refine { model, adaptation, out: path } => {
            let (mut state, cfg) = load_model(&model)?;
            let ftis = match adaptation {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
                    let report: adnf_core::AdaptationReport = serde_json::from_str(&text)
                        .map_err(|e| CliError::Format { path: p.clone(), message: e.to_string() })?;
                    report.ftis()
                }
                None => compute_ftis(&state, &cfg),
            };
            let report = refine(&mut state, &ftis, &cfg)?;
            save_model(&state, &cfg, path.as_ref().unwrap_or(&model))?;
            emit(out, &json!({ "stage": "refine", "clusters": state.len(), "report": report }))
        }
        Command::Assign { model, input, out: path } => {
            let (state, _) = load_model(&model)?;
            let x = load_features(&input, None)?;
            let labels = hard_assign(&x, &state)?;
            match path {
                Some(p) => save_labels(&p, &labels),
                None => write_labels(out, &labels).map_err(|e| CliError::io("<stdout>", e)),
            }
        }
        Command::Eval { input, labels } => {
            let x = load_features(&input, None)?;
            let labels = load_labels(&labels)?;
            let score = silhouette(&x, &labels)?;
            writeln!(out, "{score:.4}").map_err(|e| CliError::io("<stdout>", e))
        }
        Command::Pca { input, components, out: path } => {
            let x = load_features(&input, None)?;
            let model = adnf_core::fit_pca(&x, components)?;
            save_features(&path, &adnf_core::transform(&model, &x)?)?;
            emit(out, &json!({ "stage": "pca", "components": components, "explained_variance": model.explained_variance }))
        }
        Command::Gen { spec, blobs, spacing, std, count, dim, seed, out: path, labels_out } => {
            let spec = match spec {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
                    serde_json::from_str(&text).map_err(|e| CliError::Format { path: p.clone(), message: e.to_string() })?
                }
                None => SyntheticStreamSpec::blobs(blobs, spacing, std, count, dim, seed),
            };
            let (x, labels) = generate_stream(&spec)?;
            save_features(&path, &x)?;
            if let Some(p) = labels_out {
                save_labels(&p, &labels)?;
            }
            Ok(())
        }
        Command::Run { input, seed, init_size, out: path, projection, labels_out, config } => {
            let cfg = config.resolve()?;
            let x = load_features(&input, None)?;
            let outcome = run_pipeline(&x, &cfg, seed, init_size)?;
            let created = outcome.stream.iter().filter(|r| r.created_new).count();
            emit(out, &json!({ "stage": "init", "summary": outcome.init }))?;
            emit(
                out,
                &json!({
                    "stage": "stream",
                    "points": outcome.stream.len(),
                    "absorbed": outcome.stream.len() - created,
                    "created": created,
                }),
            )?;
            emit(out, &json!({ "stage": "adapt", "report": outcome.adaptation }))?;
            emit(out, &json!({ "stage": "refine", "report": outcome.refinement }))?;
            emit(
                out,
                &json!({
                    "stage": "eval",
                    "clusters": outcome.state.len(),
                    "silhouette": outcome.silhouette,
                }),
            )?;
            if let Some(p) = path {
                save_model(&outcome.state, &cfg, &p)?;
            }
            if let Some(p) = labels_out {
                save_labels(&p, &outcome.labels)?;
            }
            if let Some(p) = projection {
                write_projection(&p, &x, &outcome.labels)?;
            }
            Ok(())
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit code:
/// 0 on success, 1 on data errors, 2 on usage errors.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write + ?Sized,
    E: Write + ?Sized,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
