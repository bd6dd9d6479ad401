//! End-to-end pipeline: batch initialisation, streaming, adaptation,
//! refinement, hard assignment and evaluation.

use adnf_core::{
    fit_fcm, fit_pca, hard_assign, init_micro_clusters, process_stream, refine, silhouette, transform, tune_fuzziness,
    AbsorptionReport, AdaptationReport, AdnfConfig, FeatureMatrix, ModelState, RefinementReport,
};
use serde::Serialize;

use crate::error::Result;

/// Size of the batch used for FCM initialisation: `max(10·c, ⌈N/5⌉)`,
/// capped at `N`.
pub fn default_init_size(n: usize, c: usize) -> usize {
    (10 * c).max(n.div_ceil(5)).min(n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitSummary {
    pub batch: usize,
    pub clusters: usize,
    pub fcm_iterations: usize,
    pub objective: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub init: InitSummary,
    pub stream: Vec<AbsorptionReport>,
    pub adaptation: AdaptationReport,
    pub refinement: RefinementReport,
    pub state: ModelState,
    pub labels: Vec<usize>,
    /// `None` when every point lands in one cluster.
    pub silhouette: Option<f64>,
}

/// Fits FCM on the first `init_size` rows and wraps the result.
pub fn initialise(x: &FeatureMatrix, cfg: &AdnfConfig, seed: u64) -> Result<(ModelState, InitSummary)> {
    let partition = fit_fcm(x, cfg, seed)?;
    let state = init_micro_clusters(x, &partition, cfg)?;
    let summary = InitSummary {
        batch: x.n_samples(),
        clusters: state.len(),
        fcm_iterations: partition.iterations_run,
        objective: partition.objective,
        radius: state.clusters[0].radius,
    };
    Ok((state, summary))
}

pub fn run_pipeline(x: &FeatureMatrix, cfg: &AdnfConfig, seed: u64, init_size: Option<usize>) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let n = x.n_samples();
    let split = init_size.unwrap_or_else(|| default_init_size(n, cfg.c)).clamp(1, n);
    let batch = x.slice_rows(0, split)?;
    let (mut state, init) = initialise(&batch, cfg, seed)?;

    let stream = process_stream((split..n).map(|j| x.row(j)), &mut state, cfg)?;
    let adaptation = tune_fuzziness(&mut state, cfg)?;
    let refinement = refine(&mut state, &adaptation.ftis(), cfg)?;
    let labels = hard_assign(x, &state)?;
    let silhouette = match silhouette(x, &labels) {
        Ok(s) => Some(s),
        Err(adnf_core::Error::UndefinedMetric(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(PipelineOutcome { init, stream, adaptation, refinement, state, labels, silhouette })
}

/// 2-D (or lower, when the data allow less) PCA projection for plotting.
pub fn plot_projection(x: &FeatureMatrix) -> Result<FeatureMatrix> {
    let k = 2.min(x.dim()).min(x.n_samples().saturating_sub(1)).max(1);
    let model = fit_pca(x, k)?;
    Ok(transform(&model, x)?)
}
