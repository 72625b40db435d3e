use super::network::{ContactNetwork, VertexId};

/// A global minimum cut: its weight and one side of the bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub value: f64,
    pub side: Vec<VertexId>,
}

/// Weight of the global minimum cut, with edge costs as weights.
///
/// Disconnected networks (and networks with fewer than two vertices) have a
/// minimum cut of 0.
pub fn global_min_cut(network: &ContactNetwork) -> f64 {
    global_min_cut_with_side(network).value
}

/// Stoer-Wagner minimum cut on a dense weight matrix, `O(n^3)`.
pub fn global_min_cut_with_side(network: &ContactNetwork) -> MinCut {
    let n = network.n();
    if n < 2 {
        return MinCut { value: 0.0, side: (0..n).collect() };
    }
    if let Some(side) = disconnected_side(network) {
        return MinCut { value: 0.0, side };
    }

    let mut w = vec![vec![0.0f64; n]; n];
    for e in network.edges().iter().filter(|e| !e.is_loop()) {
        w[e.u][e.v] += e.cost;
        w[e.v][e.u] += e.cost;
    }
    // groups[i]: original vertices merged into super-vertex i.
    let mut groups: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<VertexId> = (0..n).collect();
    let mut best = MinCut { value: f64::INFINITY, side: Vec::new() };

    while active.len() > 1 {
        let k = active.len();
        let mut in_a = vec![false; k];
        let mut key = vec![0.0f64; k];
        let mut prev = 0usize;
        let mut last = 0usize;
        for step in 0..k {
            // Most tightly connected vertex; ties go to the lowest position.
            let mut sel = usize::MAX;
            for i in 0..k {
                if !in_a[i] && (sel == usize::MAX || key[i] > key[sel]) {
                    sel = i;
                }
            }
            in_a[sel] = true;
            if step == k - 1 {
                if key[sel] < best.value {
                    best.value = key[sel];
                    let mut side = groups[active[sel]].clone();
                    side.sort_unstable();
                    best.side = side;
                }
                last = sel;
            } else {
                prev = sel;
                for i in 0..k {
                    if !in_a[i] {
                        key[i] += w[active[sel]][active[i]];
                    }
                }
            }
        }
        let (a, b) = (active[prev], active[last]);
        for i in 0..n {
            w[a][i] += w[b][i];
            w[i][a] = w[a][i];
        }
        let moved = std::mem::take(&mut groups[b]);
        groups[a].extend(moved);
        active.remove(last);
    }
    best
}

/// Vertices reachable from vertex 0, if that is not everything.
fn disconnected_side(network: &ContactNetwork) -> Option<Vec<VertexId>> {
    let n = network.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(w, _) in network.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        None
    } else {
        Some((0..n).filter(|&v| seen[v]).collect())
    }
}
