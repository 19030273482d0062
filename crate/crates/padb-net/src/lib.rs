//! Growth-model graphs with a hard degree cap, key predistribution schemes
//! built on them, and a Monte-Carlo harness measuring how the resulting key
//! graphs degrade under random node compromise.
//!
//! The crate is organized along the pipeline:
//!
//! * [`graph`] — undirected multigraph plus structural metrics (path
//!   lengths, diameter, components, isolation, node removal);
//! * [`sampling`] — logarithmic-time proportional sampling without
//!   replacement over integer weights;
//! * [`generators`] — the unbounded and degree-bounded growth models and
//!   degree-distribution diagnostics;
//! * [`kpd`] — key rings and key graphs for the four schemes (padb, eg,
//!   cps, ls);
//! * [`adversary`] — random compromise and the V/E/C/P resilience metrics
//!   aggregated over seeded trials;
//! * [`config`], [`presets`], [`cli`] — the experiment harness.

pub mod adversary;
pub mod cli;
pub mod config;
pub mod generators;
pub mod graph;
pub mod kpd;
pub mod presets;
pub mod sampling;
pub mod seeds;

pub use adversary::{compromise, resilience_curve, AplMode, CompromiseOutcome, ResilienceCurve};
pub use config::ExperimentConfig;
pub use generators::{degree_histogram, generate_pa, generate_padb, theoretical_alpha, GenParams};
pub use graph::{Graph, MetricReport};
pub use kpd::{assign_padb_keys, generate_cps, generate_eg, generate_ls, KeyAssignment, SchemeConfig, SchemeTag};
