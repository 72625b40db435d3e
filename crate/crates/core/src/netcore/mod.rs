//! Instance representation and graph primitives shared by the solvers.

mod component;
mod intervention;
pub mod io;
mod mincut;
mod network;
pub mod random;
mod regime;

pub use component::{boundary_of, component_of, report_for, ComponentReport, Reacher};
pub use intervention::{Intervention, InterventionKind, RemovalMask};
pub use io::{load_network, parse_edge_list, write_edge_list};
pub use mincut::{global_min_cut, global_min_cut_with_side, MinCut};
pub use network::{ContactNetwork, Edge, EdgeId, VertexId, META_SOURCE_LABEL};
pub use random::{gnm, with_random_costs, with_random_probabilities};
pub use regime::{in_karger_regime, karger_epsilon, karger_regime, KargerRegime};
