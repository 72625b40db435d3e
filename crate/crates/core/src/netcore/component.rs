use serde::Serialize;

use super::intervention::{Intervention, RemovalMask};
use super::network::{ContactNetwork, EdgeId, VertexId};
use crate::error::{Error, Result};

/// The component of the source in a residual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    /// Ascending vertex ids; always contains the source.
    pub members: Vec<VertexId>,
    /// `|members|`, the number of infected vertices.
    pub size: usize,
    /// Edges of the full graph with exactly one endpoint in `members`.
    pub boundary: Vec<EdgeId>,
}

/// Component of the source after deleting `removed`, optionally restricted
/// to the edges flagged in `edge_mask` (a percolation sample).
pub fn component_of(
    network: &ContactNetwork,
    removed: &Intervention,
    edge_mask: Option<&[bool]>,
) -> Result<ComponentReport> {
    removed.validate(network)?;
    if let Some(mask) = edge_mask {
        if mask.len() != network.m() {
            return Err(Error::SampleMismatch(format!(
                "edge mask has {} entries for {} edges",
                mask.len(),
                network.m()
            )));
        }
    }
    let removal = removed.removal_mask(network);
    let mut reach = Reacher::new(network.n());
    reach.run(network, |e| {
        edge_mask.is_none_or(|m| m[e]) && !removal.edges[e]
    }, |v| !removal.vertices[v]);
    let mut members = reach.visited().to_vec();
    members.sort_unstable();
    Ok(report_for(network, members))
}

/// Builds a report (with boundary) for a known member set.
pub fn report_for(network: &ContactNetwork, mut members: Vec<VertexId>) -> ComponentReport {
    members.sort_unstable();
    let mut inside = vec![false; network.n()];
    for &v in &members {
        inside[v] = true;
    }
    let boundary = boundary_of(network, &inside);
    ComponentReport {
        size: members.len(),
        members,
        boundary,
    }
}

/// Edge ids of `network` with exactly one endpoint flagged in `inside`.
pub fn boundary_of(network: &ContactNetwork, inside: &[bool]) -> Vec<EdgeId> {
    network
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| inside[e.u] != inside[e.v])
        .map(|(id, _)| id)
        .collect()
}

/// Reusable depth-first reachability from the source.
///
/// Scratch buffers are kept between calls so that Monte Carlo loops do not
/// allocate per sample.
#[derive(Debug, Clone)]
pub struct Reacher {
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<VertexId>,
    order: Vec<VertexId>,
}

impl Reacher {
    pub fn new(n: usize) -> Self {
        Reacher {
            mark: vec![0; n],
            stamp: 0,
            stack: Vec::with_capacity(n),
            order: Vec::with_capacity(n),
        }
    }

    /// Visits every vertex reachable from the source through edges accepted
    /// by `edge_open`, never entering a vertex rejected by `vertex_open`.
    /// Returns the number of vertices reached, the source included.
    pub fn run(
        &mut self,
        network: &ContactNetwork,
        edge_open: impl Fn(EdgeId) -> bool,
        vertex_open: impl Fn(VertexId) -> bool,
    ) -> usize {
        if self.mark.len() < network.n() {
            self.mark.resize(network.n(), 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let s = network.source();
        self.order.clear();
        self.stack.clear();
        self.mark[s] = stamp;
        self.stack.push(s);
        self.order.push(s);
        while let Some(u) = self.stack.pop() {
            for &(w, e) in network.neighbors(u) {
                if self.mark[w] != stamp && edge_open(e) && vertex_open(w) {
                    self.mark[w] = stamp;
                    self.stack.push(w);
                    self.order.push(w);
                }
            }
        }
        self.order.len()
    }

    /// Reachable count under a percolation mask and a removal mask.
    pub fn count_masked(
        &mut self,
        network: &ContactNetwork,
        kept: &[bool],
        removal: &RemovalMask,
    ) -> usize {
        self.run(
            network,
            |e| kept[e] && !removal.edges[e],
            |v| !removal.vertices[v],
        )
    }

    /// Vertices reached by the last run, in visiting order.
    pub fn visited(&self) -> &[VertexId] {
        &self.order
    }
}
