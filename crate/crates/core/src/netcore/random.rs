//! Random test and benchmark instances.

use rand::seq::SliceRandom;
use rand::Rng;

use super::network::{ContactNetwork, Edge};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// A uniformly random simple graph with `n` vertices and `m` edges, unit
/// costs, probability 1 and source 0. With `connected`, a random spanning
/// tree is laid down first (needs `m >= n - 1`).
pub fn gnm(n: usize, m: usize, connected: bool, seed: u64) -> Result<ContactNetwork> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one vertex".into()));
    }
    let max_m = n * (n - 1) / 2;
    if m > max_m {
        return Err(Error::InvalidParameter(format!("{m} edges do not fit in {n} vertices")));
    }
    if connected && m + 1 < n {
        return Err(Error::InvalidParameter(format!("a connected graph on {n} vertices needs {} edges", n - 1)));
    }
    let mut rng = rng::stream(seed, Domain::Generation, 0);
    let mut present = vec![false; n * n];
    let mut edges = Vec::with_capacity(m);
    let mut add = |u: usize, v: usize, edges: &mut Vec<Edge>| {
        let (a, b) = (u.min(v), u.max(v));
        if a == b || present[a * n + b] {
            return false;
        }
        present[a * n + b] = true;
        edges.push(Edge::new(a, b, 1.0, 1.0));
        true
    };
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let parent = order[rng.random_range(0..i)];
            add(order[i], parent, &mut edges);
        }
    }
    if m * 2 > max_m {
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        for (u, v) in pairs {
            if edges.len() == m {
                break;
            }
            add(u, v, &mut edges);
        }
    } else {
        while edges.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            add(u, v, &mut edges);
        }
    }
    ContactNetwork::unlabeled(n, edges, 0)
}

/// Copy of `network` with every edge probability drawn uniformly from
/// `[lo, hi]`.
pub fn with_random_probabilities(network: &ContactNetwork, lo: f64, hi: f64, seed: u64) -> Result<ContactNetwork> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::InvalidParameter(format!("bad probability range [{lo}, {hi}]")));
    }
    let mut rng = rng::stream(seed, Domain::Generation, 1);
    let edges = network
        .edges()
        .iter()
        .map(|e| Edge::new(e.u, e.v, e.cost, lo + (hi - lo) * rng.random::<f64>()))
        .collect();
    let out = ContactNetwork::new(network.labels().to_vec(), edges, network.source())?;
    out.with_vertex_costs(network.vertex_costs().to_vec())
}

/// Copy of `network` with every finite edge cost drawn uniformly from the
/// integers `lo..=hi`.
pub fn with_random_costs(network: &ContactNetwork, lo: u32, hi: u32, seed: u64) -> Result<ContactNetwork> {
    if lo > hi {
        return Err(Error::InvalidParameter(format!("bad cost range {lo}..={hi}")));
    }
    let mut rng = rng::stream(seed, Domain::Generation, 2);
    let edges = network
        .edges()
        .iter()
        .map(|e| {
            let c = if e.cost.is_finite() { rng.random_range(lo..=hi) as f64 } else { e.cost };
            Edge::new(e.u, e.v, c, e.prob)
        })
        .collect();
    let out = ContactNetwork::new(network.labels().to_vec(), edges, network.source())?;
    out.with_vertex_costs(network.vertex_costs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::global_min_cut;

    #[test]
    fn sizes_and_connectivity() {
        for seed in 0..20 {
            let g = gnm(9, 12, true, seed).unwrap();
            assert_eq!((g.n(), g.m()), (9, 12));
            assert!(global_min_cut(&g) >= 1.0);
        }
        let k = gnm(6, 15, false, 1).unwrap();
        assert_eq!(k.m(), 15);
        assert!(gnm(4, 7, false, 0).is_err());
        assert!(gnm(5, 3, true, 0).is_err());
    }

    #[test]
    fn probability_and_cost_ranges() {
        let g = gnm(8, 10, false, 3).unwrap();
        let p = with_random_probabilities(&g, 0.2, 0.4, 3).unwrap();
        assert!(p.edges().iter().all(|e| (0.2..=0.4).contains(&e.prob)));
        let c = with_random_costs(&p, 1, 3, 3).unwrap();
        assert!(c.edges().iter().all(|e| [1.0, 2.0, 3.0].contains(&e.cost)));
        assert_eq!(gnm(8, 10, false, 3).unwrap(), g);
    }
}
