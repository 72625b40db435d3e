//! Source-based budgeted cut: remove at most a budget of unit edges so the
//! source's side is as small as possible.
//!
//! For a rational multiplier `alpha`, a minimum cut of the network with unit
//! capacity per edge direction and an `alpha` arc from every `v != s` to a
//! super-sink minimizes `cut + alpha (|S| - 1)` over source sides `S`.
//! Sweeping `alpha` traces the lower convex hull of the attainable
//! `(cut, |S|)` pairs. Picking the hull vertex with the smallest side among
//! those with `cut <= B / lambda` gives a side at most `1 / (1 - lambda)`
//! times the optimum at budget `B`: with `L`, `R` the hull vertices around
//! `B / lambda`, the optimum lies above the segment `LR` at a cut of at most
//! `B`, which is a fraction below `lambda` of the way from `L` to `R`.

use serde::Serialize;

use super::flow::FlowNetwork;
use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, EdgeId, VertexId};
use crate::percolate::PercolationSample;

/// An undirected unit-capacity graph: a network restricted to an edge
/// subset, self-loops dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGraph {
    n: usize,
    source: VertexId,
    /// `(u, v, id)` with `id` the edge id in the originating network.
    edges: Vec<(VertexId, VertexId, EdgeId)>,
}

impl UnitGraph {
    pub fn new(n: usize, source: VertexId, edges: Vec<(VertexId, VertexId, EdgeId)>) -> Result<Self> {
        if source >= n {
            return Err(Error::VertexOutOfRange { id: source, n });
        }
        for &(u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { id: u.max(v), n });
            }
        }
        Ok(UnitGraph { n, source, edges: edges.into_iter().filter(|&(u, v, _)| u != v).collect() })
    }

    /// All edges of `network`, capacities ignored.
    pub fn from_network(network: &ContactNetwork) -> Self {
        Self::masked(network, |_| true)
    }

    /// The edges retained in `sample`.
    pub fn from_sample(network: &ContactNetwork, sample: &PercolationSample) -> Self {
        let mask = sample.mask();
        Self::masked(network, |e| mask[e])
    }

    fn masked(network: &ContactNetwork, keep: impl Fn(EdgeId) -> bool) -> Self {
        let edges = network
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, edge)| !edge.is_loop() && keep(e))
            .map(|(e, edge)| (edge.u, edge.v, e))
            .collect();
        UnitGraph { n: network.n(), source: network.source(), edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, EdgeId)] {
        &self.edges
    }

    /// Vertices reachable from the source avoiding edges at positions
    /// flagged in `removed` (indexed like [`edges`](Self::edges)).
    pub fn reach(&self, removed: &[bool]) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            if !removed[i] {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; self.n];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Positions of edges with exactly one endpoint in `inside`.
    fn boundary(&self, inside: &[bool]) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| inside[self.edges[i].0] != inside[self.edges[i].1])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbccSolution {
    /// Ids (in the originating network) of the edges cut.
    pub cut_edges: Vec<EdgeId>,
    /// The source side, sorted.
    pub component: Vec<VertexId>,
    pub cut_size: usize,
    pub component_size: usize,
    pub lambda: f64,
    pub budget: f64,
    /// Multiplier at which the chosen side was found.
    pub lagrange_alpha: f64,
    /// `cut_size <= budget / lambda`. Always true, kept as a status flag.
    pub within_budget: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct HullPoint {
    cut: i64,
    side: i64,
    num: i64,
    den: i64,
}

/// Lagrangian min-cut oracle on the source's component.
struct Sweep<'a> {
    graph: &'a UnitGraph,
    /// Component of the source, as graph vertex ids; index 0 is the source.
    verts: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
}

impl<'a> Sweep<'a> {
    fn new(graph: &'a UnitGraph) -> Self {
        let comp = graph.reach(&vec![false; graph.m()]);
        let mut verts: Vec<VertexId> = (0..graph.n).filter(|&v| comp[v]).collect();
        verts.sort_by_key(|&v| (v != graph.source, v));
        let mut local = vec![usize::MAX; graph.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let edges = graph
            .edges
            .iter()
            .filter(|&&(u, _, _)| comp[u])
            .map(|&(u, v, _)| (local[u], local[v]))
            .collect();
        Sweep { graph, verts, edges }
    }

    /// Minimizes `den * cut + num * (|S| - 1)`; returns the point and the
    /// minimal source side as a membership mask over graph vertices.
    fn solve(&self, num: i64, den: i64) -> (HullPoint, Vec<bool>) {
        let k = self.verts.len();
        let sink = k;
        let mut net = FlowNetwork::new(k + 1);
        for &(u, v) in &self.edges {
            net.add_pair(u, v, den, den);
        }
        for v in 1..k {
            net.add_pair(v, sink, num, 0);
        }
        net.max_flow(0, sink);
        let side = net.source_side(0);
        let mut inside = vec![false; self.graph.n];
        let mut size = 0;
        for (i, &v) in self.verts.iter().enumerate() {
            if side[i] {
                inside[v] = true;
                size += 1;
            }
        }
        let cut = self.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count() as i64;
        (HullPoint { cut, side: size, num, den }, inside)
    }

    fn value(p: &HullPoint, num: i64, den: i64) -> i128 {
        den as i128 * p.cut as i128 + num as i128 * (p.side - 1) as i128
    }

    /// Lower hull vertices of the `(cut, side)` trade-off.
    fn hull(&self) -> Vec<(HullPoint, Vec<bool>)> {
        let n = self.graph.n.max(2) as i64;
        let mut points: Vec<(HullPoint, Vec<bool>)> = Vec::new();
        let push = |pt: (HullPoint, Vec<bool>), points: &mut Vec<(HullPoint, Vec<bool>)>| {
            if !points.iter().any(|(q, _)| q.cut == pt.0.cut && q.side == pt.0.side) {
                points.push(pt);
            }
        };
        push(self.solve(0, 1), &mut points);
        let grid_top = (2.0 * (n as f64).log2()).ceil() as u32 + 4;
        for i in 0..=grid_top.min(60) {
            push(self.solve(1i64 << i, n), &mut points);
        }
        // Above the source degree the singleton side is forced.
        let deg = self.edges.iter().filter(|&&(u, v)| u == 0 || v == 0).count() as i64;
        push(self.solve(deg + 1, 1), &mut points);

        // Exact refinement between neighbouring points.
        points.sort_by_key(|(p, _)| (p.cut, -p.side));
        let mut out = vec![points.remove(0)];
        let mut pending: Vec<(HullPoint, Vec<bool>)> = points.into_iter().rev().collect();
        while let Some(right) = pending.pop() {
            let left = &out.last().unwrap().0;
            if right.0.side >= left.side {
                continue;
            }
            let num = right.0.cut - left.cut;
            let den = left.side - right.0.side;
            let (mid, mask) = self.solve(num, den);
            if Self::value(&mid, num, den) < Self::value(left, num, den) && mid.cut != left.cut && mid.cut != right.0.cut {
                pending.push(right);
                pending.push((mid, mask));
            } else {
                out.push(right);
            }
        }
        out
    }
}

/// Bicriteria MinSBCC on a unit graph: cut at most `budget / lambda` edges,
/// leaving a source side within `1 / (1 - lambda)` of the best achievable
/// with `budget` edges.
pub fn min_sbcc(graph: &UnitGraph, budget: f64, lambda: f64) -> Result<SbccSolution> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    let sweep = Sweep::new(graph);
    let hull = sweep.hull();
    let fits = |p: &HullPoint| p.cut as f64 * lambda <= budget;
    let chosen = hull
        .iter()
        .filter(|(p, _)| fits(p))
        .min_by_key(|(p, _)| (p.side, p.cut))
        .or_else(|| hull.iter().min_by_key(|(p, _)| (p.cut, p.side)))
        .expect("the hull is never empty");
    let (point, inside) = chosen;
    let within_budget = fits(point);
    assert!(
        within_budget,
        "the zero-cut point always fits a nonnegative budget"
    );
    let cut_edges: Vec<EdgeId> = graph.boundary(inside).into_iter().map(|i| graph.edges[i].2).collect();
    let component: Vec<VertexId> = (0..graph.n).filter(|&v| inside[v]).collect();
    Ok(SbccSolution {
        cut_size: cut_edges.len(),
        component_size: component.len(),
        cut_edges,
        component,
        lambda,
        budget,
        lagrange_alpha: point.num as f64 / point.den as f64,
        within_budget,
    })
}

/// Largest edge count the exhaustive MinSBCC oracle accepts.
pub const SBCC_EXACT_CAP: usize = 20;

/// Smallest source side reachable by removing at most `budget` edges, by
/// exhaustive search. Ties go to the lexicographically smallest edge list.
pub fn min_sbcc_exact(graph: &UnitGraph, budget: f64) -> Result<(Vec<EdgeId>, usize)> {
    let m = graph.m();
    if m > SBCC_EXACT_CAP {
        return Err(Error::TooLarge(format!("{m} edges exceed the exhaustive cap of {SBCC_EXACT_CAP}")));
    }
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be nonnegative, got {budget}")));
    }
    let mut best: Option<(usize, Vec<EdgeId>)> = None;
    let mut removed = vec![false; m];
    for bits in 0u32..1 << m {
        if bits.count_ones() as f64 > budget {
            continue;
        }
        for (i, r) in removed.iter_mut().enumerate() {
            *r = bits >> i & 1 == 1;
        }
        let size = graph.reach(&removed).iter().filter(|&&x| x).count();
        let mut ids: Vec<EdgeId> = (0..m).filter(|&i| removed[i]).map(|i| graph.edges[i].2).collect();
        ids.sort_unstable();
        let candidate = (size, ids);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    let (size, ids) = best.expect("the empty set is always allowed");
    Ok((ids, size))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, source: usize, edges: &[(usize, usize)]) -> UnitGraph {
        UnitGraph::new(n, source, edges.iter().enumerate().map(|(i, &(u, v))| (u, v, i)).collect()).unwrap()
    }

    fn star() -> UnitGraph {
        unit(5, 0, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    #[test]
    fn star_budget_two() {
        let g = star();
        assert_eq!(min_sbcc_exact(&g, 2.0).unwrap(), (vec![0, 1], 3));
        let s = min_sbcc(&g, 2.0, 0.5).unwrap();
        assert!(s.cut_size <= 4);
        assert!(s.component_size <= 6);
        assert!(s.component.contains(&0));
    }

    #[test]
    fn large_budget_isolates_source() {
        let s = min_sbcc(&star(), 4.0, 0.5).unwrap();
        assert_eq!(s.component, vec![0]);
        assert_eq!(s.cut_edges, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_budget_keeps_component() {
        let g = unit(5, 0, &[(0, 1), (1, 2), (3, 4)]);
        let s = min_sbcc(&g, 0.0, 0.9).unwrap();
        assert_eq!(s.cut_size, 0);
        assert_eq!(s.component, vec![0, 1, 2]);
    }

    #[test]
    fn exact_examples() {
        let path = unit(3, 0, &[(0, 1), (1, 2)]);
        assert_eq!(min_sbcc_exact(&path, 1.0).unwrap(), (vec![0], 1));
        let tri = unit(3, 0, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(min_sbcc_exact(&tri, 1.0).unwrap(), (vec![], 3));
    }

    #[test]
    fn bad_lambda() {
        assert!(min_sbcc(&star(), 1.0, 0.0).is_err());
        assert!(min_sbcc(&star(), 1.0, 1.0).is_err());
    }

    #[test]
    fn cut_is_boundary_of_component() {
        let g = unit(6, 0, &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 3), (1, 4)]);
        for b in 0..4 {
            let s = min_sbcc(&g, b as f64, 0.5).unwrap();
            let mut removed = vec![false; g.m()];
            for &e in &s.cut_edges {
                removed[e] = true;
            }
            let reach = g.reach(&removed);
            let members: Vec<usize> = (0..6).filter(|&v| reach[v]).collect();
            assert_eq!(members, s.component);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn bicriteria_contract(
                n in 2usize..9,
                raw in proptest::collection::vec((0usize..9, 0usize..9), 0..16),
                budget in 0u32..5,
                lambda_idx in 0usize..3,
            ) {
                let lambda = [0.25, 0.5, 0.75][lambda_idx];
                let mut seen = std::collections::HashSet::new();
                let edges: Vec<_> = raw.into_iter()
                    .map(|(u, v)| (u % n, v % n))
                    .filter(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
                    .collect();
                let g = unit(n, 0, &edges);
                let b = budget as f64;
                let s = min_sbcc(&g, b, lambda).unwrap();
                let (_, opt) = min_sbcc_exact(&g, b).unwrap();
                prop_assert!(s.cut_size as f64 * lambda <= b + 1e-12);
                prop_assert!(s.component_size as f64 * (1.0 - lambda) <= opt as f64 + 1e-9,
                    "size {} opt {} lambda {}", s.component_size, opt, lambda);
            }
        }
    }
}
