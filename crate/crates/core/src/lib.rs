//! Budgeted interventions against SIR epidemic spread on contact networks.
//!
//! An SIR outbreak from a source `s` is equivalent to edge percolation: keep
//! each edge `e` independently with probability `p_e` and count the vertices
//! reachable from `s`. The crate provides
//!
//! * [`netcore`]: the [`ContactNetwork`] instance, seed merging, residual
//!   components and global minimum cuts;
//! * [`percolate`]: percolation samples, Monte Carlo and exact expected
//!   infection counts;
//! * [`saa`]: the sample-average-approximation LP pipeline with randomized
//!   and threshold rounding, for edge removal and vaccination;
//! * [`sbcc`]: the cut-sparsification solver for unit costs and uniform
//!   transmission probability, built on a Lagrangian min-cut sweep;
//! * [`chunglu`]: power-law Chung-Lu graphs and the path-count bounds that
//!   decide when the sampling approach is sound.

pub mod chunglu;
pub mod error;
pub mod netcore;
pub mod percolate;
pub mod rng;
pub mod saa;
pub mod sbcc;
pub mod stats;

pub use chunglu::{ChungLuModel, PathCensus};
pub use error::{Error, Result};
pub use netcore::{ComponentReport, ContactNetwork, Edge, Intervention, InterventionKind};
pub use percolate::{InfectionEstimate, PercolationSample};
pub use saa::{FractionalSolution, LpModel, Mode, SampleSet};
pub use sbcc::SbccSolution;
