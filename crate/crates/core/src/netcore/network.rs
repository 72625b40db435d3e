use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Label given to the meta-source created by [`ContactNetwork::merge_seeds`].
pub const META_SOURCE_LABEL: &str = "__source__";

/// An undirected edge with removal cost and transmission probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: f64,
    pub prob: f64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, cost: f64, prob: f64) -> Self {
        Edge { u, v, cost, prob }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A contact network: dense vertex ids `0..n`, undirected edges with cost
/// `c_e >= 0` and transmission probability `p_e` in `[0, 1]`, and a single
/// infection source.
///
/// Self-loops are stored but never traversed. Values are immutable once
/// built; the `with_*` methods return modified copies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactNetwork {
    labels: Vec<String>,
    edges: Vec<Edge>,
    source: VertexId,
    vertex_costs: Vec<f64>,
    #[serde(skip)]
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl ContactNetwork {
    pub fn new(labels: Vec<String>, edges: Vec<Edge>, source: VertexId) -> Result<Self> {
        let n = labels.len();
        if source >= n {
            return Err(Error::VertexOutOfRange { id: source, n });
        }
        let mut seen_labels = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if seen_labels.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate vertex label `{l}`")));
            }
        }
        let mut seen = HashMap::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { id: x, n });
                }
            }
            if !(0.0..=1.0).contains(&e.prob) {
                return Err(Error::ProbabilityRange { edge: id, prob: e.prob });
            }
            if e.cost.is_nan() || e.cost < 0.0 {
                return Err(Error::NegativeCost { edge: id, cost: e.cost });
            }
            if seen.insert(e.key(), id).is_some() {
                return Err(Error::DuplicateEdge {
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                });
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if !e.is_loop() {
                adjacency[e.u].push((e.v, id));
                adjacency[e.v].push((e.u, id));
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(ContactNetwork {
            labels,
            edges,
            source,
            vertex_costs: vec![1.0; n],
            adjacency,
        })
    }

    /// Network on vertices `0..n` labelled by their index.
    pub fn unlabeled(n: usize, edges: Vec<Edge>, source: VertexId) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges, source)
    }

    /// Shorthand for tests and examples: `(u, v, cost, prob)` tuples.
    pub fn from_tuples(
        n: usize,
        source: VertexId,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64, f64)>,
    ) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, c, p)| Edge::new(u, v, c, p))
            .collect();
        Self::unlabeled(n, edges, source)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Non-loop incidences of `v` as `(neighbor, edge id)`, ascending.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    /// Degree of `v` ignoring self-loops.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Maximum degree, self-loops ignored.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn self_loops(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_loop())
            .map(|(i, _)| i)
    }

    pub fn vertex_costs(&self) -> &[f64] {
        &self.vertex_costs
    }

    pub fn vertex_cost(&self, v: VertexId) -> f64 {
        self.vertex_costs[v]
    }

    /// Copy with per-vertex vaccination costs (default 1 each).
    pub fn with_vertex_costs(&self, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "{} vertex costs for {} vertices",
                costs.len(),
                self.n()
            )));
        }
        if let Some(v) = costs.iter().position(|c| c.is_nan() || *c < 0.0) {
            return Err(Error::InvalidParameter(format!("vertex {v} has negative cost")));
        }
        let mut out = self.clone();
        out.vertex_costs = costs;
        Ok(out)
    }

    pub fn with_source(&self, source: VertexId) -> Result<Self> {
        if source >= self.n() {
            return Err(Error::VertexOutOfRange { id: source, n: self.n() });
        }
        let mut out = self.clone();
        out.source = source;
        Ok(out)
    }

    /// Copy with every finite-cost edge given probability `p`. Meta-source
    /// edges (infinite cost) keep probability 1.
    pub fn with_uniform_probability(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityRange { edge: 0, prob: p });
        }
        let mut out = self.clone();
        for e in &mut out.edges {
            if e.cost.is_finite() {
                e.prob = p;
            }
        }
        Ok(out)
    }

    /// Copy with all edge costs set to `c`.
    pub fn with_uniform_cost(&self, c: f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u, e.v, c, e.prob))
            .collect();
        let mut out = Self::new(self.labels.clone(), edges, self.source)?;
        out.vertex_costs = self.vertex_costs.clone();
        Ok(out)
    }

    /// The common probability of all non-loop edges, if there is one.
    pub fn uniform_probability(&self) -> Option<f64> {
        let mut it = self.edges.iter().filter(|e| !e.is_loop()).map(|e| e.prob);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn has_unit_costs(&self) -> bool {
        self.edges.iter().filter(|e| !e.is_loop()).all(|e| e.cost == 1.0)
    }

    /// Reduces a seed set to a single source: adds a meta-vertex with a
    /// probability-1, infinite-cost edge to each seed. `self` is untouched.
    pub fn merge_seeds(&self, seeds: &[VertexId]) -> Result<Self> {
        self.merge_seeds_labeled(seeds, META_SOURCE_LABEL)
    }

    pub fn merge_seeds_labeled(&self, seeds: &[VertexId], label: &str) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::EmptySeeds);
        }
        let n = self.n();
        if let Some(&bad) = seeds.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { id: bad, n });
        }
        if self.vertex_by_label(label).is_some() {
            return Err(Error::InvalidParameter(format!(
                "meta-source label `{label}` already names a vertex"
            )));
        }
        let mut seeds = seeds.to_vec();
        seeds.sort_unstable();
        seeds.dedup();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let mut edges = self.edges.clone();
        edges.extend(seeds.iter().map(|&v| Edge::new(n, v, f64::INFINITY, 1.0)));
        let mut out = Self::new(labels, edges, n)?;
        out.vertex_costs = self.vertex_costs.clone();
        out.vertex_costs.push(f64::INFINITY);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> ContactNetwork {
        ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 0.5), (1, 2, 1.0, 0.5)]).unwrap()
    }

    #[test]
    fn rejects_invalid_edges() {
        let bad_p = ContactNetwork::from_tuples(2, 0, [(0, 1, 1.0, 1.3)]);
        assert!(matches!(bad_p, Err(Error::ProbabilityRange { .. })));
        let bad_c = ContactNetwork::from_tuples(2, 0, [(0, 1, -1.0, 0.3)]);
        assert!(matches!(bad_c, Err(Error::NegativeCost { .. })));
        let dup = ContactNetwork::from_tuples(2, 0, [(0, 1, 1.0, 0.3), (1, 0, 1.0, 0.3)]);
        assert!(matches!(dup, Err(Error::DuplicateEdge { .. })));
        let src = ContactNetwork::from_tuples(2, 5, [(0, 1, 1.0, 0.3)]);
        assert!(matches!(src, Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn self_loops_are_stored_but_not_adjacent() {
        let g = ContactNetwork::from_tuples(2, 0, [(0, 0, 1.0, 1.0), (0, 1, 1.0, 1.0)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.self_loops().collect::<Vec<_>>(), vec![0]);
        assert_eq!(g.neighbors(0), &[(1, 1)]);
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn merge_two_seeds_adds_one_vertex() {
        let g = ContactNetwork::from_tuples(
            4,
            0,
            [(0, 1, 1.0, 0.5), (1, 2, 1.0, 0.5), (2, 3, 1.0, 0.5)],
        )
        .unwrap();
        let merged = g.merge_seeds(&[1, 2]).unwrap();
        assert_eq!(merged.n(), 5);
        assert_eq!(merged.m(), 5);
        assert_eq!(merged.source(), 4);
        let new: Vec<_> = merged.edges()[3..].to_vec();
        assert!(new.iter().all(|e| e.prob == 1.0 && e.cost.is_infinite() && e.u == 4));
        assert_eq!(g.n(), 4, "original untouched");
        assert_eq!(merged.vertex_cost(4), f64::INFINITY);
    }

    #[test]
    fn merge_empty_seeds_fails() {
        assert_eq!(path3().merge_seeds(&[]), Err(Error::EmptySeeds));
    }

    #[test]
    fn uniform_probability_detection() {
        assert_eq!(path3().uniform_probability(), Some(0.5));
        let g = ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 0.5), (1, 2, 1.0, 0.4)]).unwrap();
        assert_eq!(g.uniform_probability(), None);
        assert!(g.has_unit_costs());
    }
}
