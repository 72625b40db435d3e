use rand::Rng;

use super::model::ChungLuModel;
use crate::netcore::{ContactNetwork, Edge};
use crate::rng::{self, Domain};

/// Draws graph `0` of the `seed` stream. See [`generate_trial`].
pub fn generate(model: &ChungLuModel, seed: u64) -> ContactNetwork {
    generate_trial(model, seed, 0)
}

/// Draws graph `trial` of the `seed` stream.
///
/// Each pair `u <= v` is present independently with probability
/// `q(u, v)`, pairs visited in lexicographic order. Self-loops are kept
/// but are inert for reachability. Edges get cost 1 and probability 1; the
/// source is vertex 0 and vertex `v` is labelled `v{v}`.
pub fn generate_trial(model: &ChungLuModel, seed: u64, trial: u64) -> ContactNetwork {
    let n = model.n;
    let mut rng = rng::stream(seed, Domain::Generation, trial);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u..n {
            let draw: f64 = rng.random();
            if draw < model.q(u, v) {
                edges.push(Edge::new(u, v, 1.0, 1.0));
            }
        }
    }
    let labels = (0..n).map(|v| format!("v{v}")).collect();
    ContactNetwork::new(labels, edges, 0).expect("generated graph is well formed")
}
