use serde::Serialize;

use super::network::{ContactNetwork, EdgeId, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterventionKind {
    /// Social distancing: the members are edge ids.
    EdgeRemoval,
    /// Vaccination: the members are vertex ids.
    NodeRemoval,
}

/// A set of removed edges or vaccinated vertices, with its total cost and a
/// tag naming the algorithm that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Intervention {
    kind: InterventionKind,
    members: Vec<usize>,
    cost: f64,
    provenance: String,
}

impl Intervention {
    pub fn empty(kind: InterventionKind) -> Self {
        Intervention {
            kind,
            members: Vec::new(),
            cost: 0.0,
            provenance: "none".into(),
        }
    }

    pub fn edges(
        network: &ContactNetwork,
        ids: impl IntoIterator<Item = EdgeId>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let members = sorted_unique(ids);
        let m = network.m();
        if let Some(&id) = members.iter().find(|&&e| e >= m) {
            return Err(Error::EdgeOutOfRange { id, m });
        }
        let cost = members.iter().map(|&e| network.edge(e).cost).fold(0.0, |a, c| a + c);
        Ok(Intervention {
            kind: InterventionKind::EdgeRemoval,
            members,
            cost,
            provenance: provenance.into(),
        })
    }

    pub fn nodes(
        network: &ContactNetwork,
        ids: impl IntoIterator<Item = VertexId>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let members = sorted_unique(ids);
        let n = network.n();
        if let Some(&id) = members.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { id, n });
        }
        if members.binary_search(&network.source()).is_ok() {
            return Err(Error::SourceRemoved(network.source()));
        }
        let cost = members.iter().map(|&v| network.vertex_cost(v)).fold(0.0, |a, c| a + c);
        Ok(Intervention {
            kind: InterventionKind::NodeRemoval,
            members,
            cost,
            provenance: provenance.into(),
        })
    }

    pub fn kind(&self) -> InterventionKind {
        self.kind
    }

    /// Member ids in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn within_budget(&self, budget: f64) -> bool {
        self.cost <= budget
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Re-checks ids and cost against `network`.
    pub fn validate(&self, network: &ContactNetwork) -> Result<()> {
        let rebuilt = match self.kind {
            InterventionKind::EdgeRemoval => Self::edges(network, self.members.iter().copied(), "")?,
            InterventionKind::NodeRemoval => Self::nodes(network, self.members.iter().copied(), "")?,
        };
        if rebuilt.cost != self.cost {
            return Err(Error::InvalidParameter(format!(
                "recorded cost {} differs from recomputed {}",
                self.cost, rebuilt.cost
            )));
        }
        Ok(())
    }

    /// Dense masks of what this intervention deletes from `network`.
    pub fn removal_mask(&self, network: &ContactNetwork) -> RemovalMask {
        let mut mask = RemovalMask {
            edges: vec![false; network.m()],
            vertices: vec![false; network.n()],
        };
        match self.kind {
            InterventionKind::EdgeRemoval => {
                for &e in &self.members {
                    mask.edges[e] = true;
                }
            }
            InterventionKind::NodeRemoval => {
                for &v in &self.members {
                    mask.vertices[v] = true;
                }
            }
        }
        mask
    }
}

/// Removed edges and vertices as dense flags. Removing a vertex deletes all
/// of its incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalMask {
    pub edges: Vec<bool>,
    pub vertices: Vec<bool>,
}

impl RemovalMask {
    pub fn none(network: &ContactNetwork) -> Self {
        RemovalMask {
            edges: vec![false; network.m()],
            vertices: vec![false; network.n()],
        }
    }
}

fn sorted_unique(ids: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = ids.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}
