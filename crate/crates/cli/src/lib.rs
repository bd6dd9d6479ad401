//! File formats, model snapshots, synthetic streams and the command-line
//! pipeline built on [`adnf_core`].

pub mod cli;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod snapshot;
pub mod synth;

pub use error::{CliError, Result};
pub use features::{load_features, load_labels, save_features, save_labels, Format};
pub use pipeline::{run_pipeline, PipelineOutcome};
pub use snapshot::{load_model, save_model, ModelSnapshot, FORMAT_VERSION};
pub use synth::{generate_stream, MixtureComponent, SyntheticStreamSpec};
