use super::InfectionEstimate;
use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, EdgeId, Intervention, Reacher};
use crate::stats::{compensated_sum, CONFIDENCE};

/// Maximum number of genuinely random edges the exhaustive oracle enumerates.
pub const EXACT_RANDOM_EDGE_CAP: usize = 22;

/// Exact expected infections by summing over every retention pattern.
///
/// Edges with `p_e` in `{0, 1}`, removed edges, self-loops and edges that
/// cannot touch the source's component are folded out before enumeration,
/// so the cap applies only to the random edges that matter.
pub fn exact_expected_infections(
    network: &ContactNetwork,
    intervention: &Intervention,
) -> Result<InfectionEstimate> {
    intervention.validate(network)?;
    let removal = intervention.removal_mask(network);
    let open: Vec<bool> = network
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            !edge.is_loop()
                && edge.prob > 0.0
                && !removal.edges[e]
                && !removal.vertices[edge.u]
                && !removal.vertices[edge.v]
        })
        .collect();

    // Everything the source could possibly reach.
    let mut reach = Reacher::new(network.n());
    reach.run(network, |e| open[e], |_| true);
    let mut possible = vec![false; network.n()];
    for &v in reach.visited() {
        possible[v] = true;
    }
    let random: Vec<EdgeId> = (0..network.m())
        .filter(|&e| open[e] && network.edge(e).prob < 1.0 && possible[network.edge(e).u])
        .collect();
    if random.len() > EXACT_RANDOM_EDGE_CAP {
        return Err(Error::TooLarge(format!(
            "{} random edges exceed the exact-enumeration cap of {EXACT_RANDOM_EDGE_CAP}",
            random.len()
        )));
    }

    let mut kept: Vec<bool> = (0..network.m())
        .map(|e| open[e] && network.edge(e).prob == 1.0)
        .collect();
    let mut terms = Vec::with_capacity(1 << random.len());
    enumerate(network, &random, 0, 1.0, &mut kept, &mut reach, &mut terms);
    Ok(InfectionEstimate {
        mean: compensated_sum(terms),
        half_width: 0.0,
        num_samples: 1u64 << random.len(),
        exact: true,
        confidence: CONFIDENCE,
        std_error: 0.0,
    })
}

fn enumerate(
    network: &ContactNetwork,
    random: &[EdgeId],
    depth: usize,
    weight: f64,
    kept: &mut Vec<bool>,
    reach: &mut Reacher,
    terms: &mut Vec<f64>,
) {
    if depth == random.len() {
        let size = reach.run(network, |e| kept[e], |_| true);
        terms.push(weight * size as f64);
        return;
    }
    let e = random[depth];
    let p = network.edge(e).prob;
    kept[e] = true;
    enumerate(network, random, depth + 1, weight * p, kept, reach, terms);
    kept[e] = false;
    enumerate(network, random, depth + 1, weight * (1.0 - p), kept, reach, terms);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::InterventionKind;
    use approx::assert_relative_eq;

    fn none() -> Intervention {
        Intervention::empty(InterventionKind::EdgeRemoval)
    }

    #[test]
    fn path_is_one_point_seven_five() {
        let g = ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 0.5), (1, 2, 1.0, 0.5)]).unwrap();
        let r = exact_expected_infections(&g, &none()).unwrap();
        assert_eq!(r.mean, 1.75);
        assert!(r.exact);
        assert_eq!(r.half_width, 0.0);
    }

    #[test]
    fn triangle_by_hand() {
        // Patterns over {sa, sb, ab}, each 1/8: sizes 1,2,2,1,3,3,3,3 -> 18/8.
        let g = ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 0.5), (0, 2, 1.0, 0.5), (1, 2, 1.0, 0.5)])
            .unwrap();
        let r = exact_expected_infections(&g, &none()).unwrap();
        assert_relative_eq!(r.mean, 2.25, epsilon = 1e-15);
    }

    #[test]
    fn disconnecting_the_source_gives_one() {
        let g = ContactNetwork::from_tuples(4, 0, [(0, 1, 1.0, 0.3), (0, 2, 1.0, 0.9), (1, 3, 1.0, 0.4)])
            .unwrap();
        let f = Intervention::edges(&g, [0, 1], "t").unwrap();
        assert_eq!(exact_expected_infections(&g, &f).unwrap().mean, 1.0);
        let v = Intervention::nodes(&g, [1, 2], "t").unwrap();
        assert_eq!(exact_expected_infections(&g, &v).unwrap().mean, 1.0);
    }

    #[test]
    fn deterministic_edges_are_folded() {
        // 30 certain edges and one random edge: well under the cap.
        let mut edges: Vec<_> = (0..30).map(|v| (v, v + 1, 1.0, 1.0)).collect();
        edges.push((30, 31, 1.0, 0.25));
        let g = ContactNetwork::from_tuples(32, 0, edges).unwrap();
        let r = exact_expected_infections(&g, &none()).unwrap();
        assert_relative_eq!(r.mean, 31.25);
        assert_eq!(r.num_samples, 2);
    }

    #[test]
    fn too_many_random_edges() {
        let g = ContactNetwork::from_tuples(25, 0, (0..24).map(|v| (v, v + 1, 1.0, 0.5))).unwrap();
        assert!(matches!(exact_expected_infections(&g, &none()), Err(Error::TooLarge(_))));
    }
}
