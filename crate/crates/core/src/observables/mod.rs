//! Headline observables: path-averaged two-photon transmission, coherent
//! transmission, effective localisation lengths and parameter sweeps.

mod cell;
mod stats;
mod sweep;
mod transmission;

pub use cell::{ResonantPathSet, ScatteringCell};
pub use stats::spearman;
pub use sweep::{
    loss_sweep, mobility_map, scaling_curves, AlphaSelector, AlphaSpec, CellRecord, MapOptions, Quantity,
    SweepAxes, SweepMetadata, SweepResult,
};
pub use transmission::{effective_lambda2, t2, t2_coherent, Observation, T2Options, UNDERFLOW};
