use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::generate_trial;
use super::model::ChungLuModel;
use crate::error::{Error, Result};
use crate::netcore::ContactNetwork;
use crate::rng::{self, Domain};
use crate::stats::IntMoments;

/// Largest vertex count accepted by the exhaustive path counter.
pub const PATH_COUNT_VERTEX_CAP: usize = 12;
/// Largest vertex count for the exact expected-count DP.
pub const EXPECTED_PATH_VERTEX_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMode {
    Exact,
    Estimated,
}

/// Path counts `l_k` for `k = 1..=k_max`.
///
/// `counts[k - 1]` is `l_k`. In estimated mode each count is a mean over
/// trials and `half_widths` carries its 99% half-width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathCensus {
    pub counts: Vec<f64>,
    pub half_widths: Vec<f64>,
    pub total: f64,
    pub total_half_width: f64,
    pub mode: CensusMode,
    pub trials: u64,
}

impl PathCensus {
    pub fn k_max(&self) -> usize {
        self.counts.len()
    }

    /// `l_k`; panics unless `1 <= k <= k_max`.
    pub fn count(&self, k: usize) -> f64 {
        self.counts[k - 1]
    }

    fn exact(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum::<u64>() as f64;
        PathCensus {
            half_widths: vec![0.0; counts.len()],
            counts: counts.into_iter().map(|c| c as f64).collect(),
            total,
            total_half_width: 0.0,
            mode: CensusMode::Exact,
            trials: 1,
        }
    }
}

/// Undirected simple-path counts of an adjacency given as bitmasks.
///
/// `f[S][v]` counts directed simple paths through exactly the vertex set `S`
/// ending at `v`; every undirected path of length >= 1 is seen twice.
pub fn path_counts_from_masks(adj: &[u32], k_max: usize) -> Vec<u64> {
    let n = adj.len();
    assert!(n <= 20, "bitmask DP limited to 20 vertices");
    let mut counts = vec![0u64; k_max];
    if n == 0 || k_max == 0 {
        return counts;
    }
    let full = 1usize << n;
    let mut f = vec![0u64; full * n];
    for v in 0..n {
        f[(1 << v) * n + v] = 1;
    }
    for set in 1..full {
        let len = set.count_ones() as usize - 1;
        if len > k_max {
            continue;
        }
        for v in 0..n {
            let ways = f[set * n + v];
            if ways == 0 {
                continue;
            }
            if len >= 1 {
                counts[len - 1] += ways;
            }
            if len == k_max {
                continue;
            }
            let mut next = adj[v] & !(set as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                f[(set | 1 << w) * n + w] += ways;
            }
        }
    }
    counts.iter_mut().for_each(|c| *c /= 2);
    counts
}

fn adjacency_masks(network: &ContactNetwork, kept: impl Fn(usize) -> bool) -> Vec<u32> {
    let mut adj = vec![0u32; network.n()];
    for (e, edge) in network.edges().iter().enumerate() {
        if !edge.is_loop() && kept(e) {
            adj[edge.u] |= 1 << edge.v;
            adj[edge.v] |= 1 << edge.u;
        }
    }
    adj
}

/// Exact `l_k` for `k = 1..=k_max`: each undirected simple path once,
/// self-loops ignored.
pub fn count_simple_paths(network: &ContactNetwork, k_max: usize) -> Result<PathCensus> {
    if network.n() > PATH_COUNT_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "{} vertices exceed the exhaustive path-count cap of {PATH_COUNT_VERTEX_CAP}",
            network.n()
        )));
    }
    let adj = adjacency_masks(network, |_| true);
    Ok(PathCensus::exact(path_counts_from_masks(&adj, k_max)))
}

/// Exact expected `l_k` over the model with every edge further kept with
/// probability `p`: the same DP with pair weights `q(u,v) p`.
pub fn expected_path_counts(model: &ChungLuModel, p: f64, k_max: usize) -> Result<Vec<f64>> {
    check_p(p)?;
    let n = model.n;
    if n > EXPECTED_PATH_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "{n} vertices exceed the expected-count cap of {EXPECTED_PATH_VERTEX_CAP}"
        )));
    }
    let mut out = vec![0.0; k_max];
    if k_max == 0 {
        return Ok(out);
    }
    let full = 1usize << n;
    let mut f = vec![0.0f64; full * n];
    for v in 0..n {
        f[(1 << v) * n + v] = 1.0;
    }
    for set in 1..full {
        let len = set.count_ones() as usize - 1;
        if len > k_max {
            continue;
        }
        for v in 0..n {
            let mass = f[set * n + v];
            if mass == 0.0 {
                continue;
            }
            if len >= 1 {
                out[len - 1] += mass;
            }
            if len == k_max {
                continue;
            }
            for w in 0..n {
                if set & (1 << w) == 0 {
                    f[(set | 1 << w) * n + w] += mass * model.q(v, w) * p;
                }
            }
        }
    }
    out.iter_mut().for_each(|c| *c /= 2.0);
    Ok(out)
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Per-trial exact path counts: trial `t` generates graph `t` of the `seed`
/// stream and keeps each of its edges with probability `p`, edge `e` using
/// draw `e` of percolation stream `t`.
pub fn path_count_trials(
    model: &ChungLuModel,
    p: f64,
    trials: u64,
    k_max: usize,
    seed: u64,
) -> Result<Vec<Vec<u64>>> {
    check_trials(model, p, trials)?;
    Ok((0..trials)
        .into_par_iter()
        .map(|t| trial_counts(model, p, t, k_max, seed))
        .collect())
}

fn check_trials(model: &ChungLuModel, p: f64, trials: u64) -> Result<()> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if model.n > PATH_COUNT_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "{} vertices exceed the exhaustive path-count cap of {PATH_COUNT_VERTEX_CAP}",
            model.n
        )));
    }
    Ok(())
}

fn trial_counts(model: &ChungLuModel, p: f64, t: u64, k_max: usize, seed: u64) -> Vec<u64> {
    let g = generate_trial(model, seed, t);
    let mut rng = rng::stream(seed, Domain::Percolation, t);
    let kept: Vec<bool> = (0..g.m()).map(|_| rng.random::<f64>() < p).collect();
    let adj = adjacency_masks(&g, |e| kept[e]);
    path_counts_from_masks(&adj, k_max)
}

/// Monte Carlo estimate of `l_k` and `Gamma = sum_k l_k` in the percolated
/// random graph, with 99% half-widths.
pub fn estimate_gamma(
    model: &ChungLuModel,
    p: f64,
    trials: u64,
    k_max: usize,
    seed: u64,
) -> Result<PathCensus> {
    check_trials(model, p, trials)?;
    let (per_k, total) = (0..trials)
        .into_par_iter()
        .fold(
            || (vec![IntMoments::default(); k_max], IntMoments::default()),
            |(mut per_k, mut total), t| {
                let counts = trial_counts(model, p, t, k_max, seed);
                for (m, &c) in per_k.iter_mut().zip(&counts) {
                    m.push(c);
                }
                total.push(counts.iter().sum());
                (per_k, total)
            },
        )
        .reduce(
            || (vec![IntMoments::default(); k_max], IntMoments::default()),
            |(a, ta), (b, tb)| (a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(), ta.merge(tb)),
        );
    let hw = |m: &IntMoments| if m.count < 2 { f64::INFINITY } else { m.half_width() };
    Ok(PathCensus {
        counts: per_k.iter().map(IntMoments::mean).collect(),
        half_widths: per_k.iter().map(hw).collect(),
        total: total.mean(),
        total_half_width: hw(&total),
        mode: CensusMode::Estimated,
        trials,
    })
}

/// One row of a percolation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub gamma: f64,
    pub half_width: f64,
    /// `gamma + half_width <= limit`.
    pub below: bool,
}

/// Empirical stand-in for the ceiling `c0`: estimates `Gamma` at each `p` in
/// `grid` and reports the largest `p` whose upper confidence limit stays
/// below `limit` (typically a polynomial in `n`). Every smaller grid point
/// must also stay below for `p` to count.
pub fn survival_sweep(
    model: &ChungLuModel,
    grid: &[f64],
    limit: f64,
    trials: u64,
    k_max: usize,
    seed: u64,
) -> Result<(Vec<SweepRow>, Option<f64>)> {
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(sorted.len());
    let mut ceiling = None;
    let mut still_below = true;
    for &p in &sorted {
        let c = estimate_gamma(model, p, trials, k_max, seed)?;
        let below = c.total + c.total_half_width <= limit;
        still_below &= below;
        if still_below {
            ceiling = Some(p);
        }
        rows.push(SweepRow { p, gamma: c.total, half_width: c.total_half_width, below });
    }
    Ok((rows, ceiling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunglu::build_model;

    fn net(n: usize, edges: &[(usize, usize)]) -> ContactNetwork {
        ContactNetwork::from_tuples(n, 0, edges.iter().map(|&(u, v)| (u, v, 1.0, 1.0))).unwrap()
    }

    /// Plain DFS over vertex sequences, keeping those whose first vertex is
    /// smaller than the last.
    fn dfs_oracle(n: usize, edges: &[(usize, usize)], k_max: usize) -> Vec<u64> {
        let mut adj = vec![vec![]; n];
        for &(u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        fn walk(adj: &[Vec<usize>], path: &mut Vec<usize>, k_max: usize, out: &mut [u64]) {
            let len = path.len() - 1;
            if len >= 1 && path[0] < path[len] {
                out[len - 1] += 1;
            }
            if len == k_max {
                return;
            }
            let last = *path.last().unwrap();
            for &w in &adj[last] {
                if !path.contains(&w) {
                    path.push(w);
                    walk(adj, path, k_max, out);
                    path.pop();
                }
            }
        }
        let mut out = vec![0; k_max];
        for s in 0..n {
            walk(&adj, &mut vec![s], k_max, &mut out);
        }
        out
    }

    #[test]
    fn triangle() {
        let c = count_simple_paths(&net(3, &[(0, 1), (1, 2), (0, 2)]), 3).unwrap();
        assert_eq!(c.counts, vec![3.0, 3.0, 0.0]);
        assert_eq!(c.total, 6.0);
        assert_eq!(c.mode, CensusMode::Exact);
    }

    #[test]
    fn path_and_edgeless() {
        let c = count_simple_paths(&net(3, &[(0, 1), (1, 2)]), 2).unwrap();
        assert_eq!(c.counts, vec![2.0, 1.0]);
        let e = count_simple_paths(&net(4, &[]), 3).unwrap();
        assert_eq!(e.counts, vec![0.0; 3]);
    }

    #[test]
    fn complete_graph_k5() {
        // l_k in K_n is n!/(n-k-1)!/2.
        let edges: Vec<_> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let c = count_simple_paths(&net(5, &edges), 4).unwrap();
        assert_eq!(c.counts, vec![10.0, 30.0, 60.0, 60.0]);
    }

    #[test]
    fn loops_ignored_and_cap_enforced() {
        let c = count_simple_paths(&net(2, &[(0, 0), (0, 1)]), 2).unwrap();
        assert_eq!(c.counts, vec![1.0, 0.0]);
        assert!(matches!(count_simple_paths(&net(13, &[]), 2), Err(Error::TooLarge(_))));
    }

    #[test]
    fn zero_p_gives_zero_gamma() {
        let m = build_model(10, 3.5, 1, 3).unwrap();
        let c = estimate_gamma(&m, 0.0, 50, 5, 1).unwrap();
        assert_eq!(c.total, 0.0);
        assert_eq!(c.total_half_width, 0.0);
    }

    #[test]
    fn full_p_single_trial_matches_generated_graph() {
        let m = build_model(12, 2.5, 1, 3).unwrap();
        let c = estimate_gamma(&m, 1.0, 1, 6, 17).unwrap();
        let direct = count_simple_paths(&generate_trial(&m, 17, 0), 6).unwrap();
        assert_eq!(c.counts, direct.counts);
        assert_eq!(c.total, direct.total);
    }

    #[test]
    fn two_seeded_runs_agree() {
        let m = build_model(10, 3.5, 1, 3).unwrap();
        let a = estimate_gamma(&m, 0.25, 2000, 9, 1).unwrap();
        let b = estimate_gamma(&m, 0.25, 2000, 9, 2).unwrap();
        let hw = (a.total_half_width.powi(2) + b.total_half_width.powi(2)).sqrt();
        assert!((a.total - b.total).abs() <= hw, "{} vs {} (hw {hw})", a.total, b.total);
    }

    #[test]
    fn estimate_tracks_exact_expectation() {
        let m = build_model(9, 2.5, 1, 3).unwrap();
        let exact = expected_path_counts(&m, 0.6, 5).unwrap();
        let est = estimate_gamma(&m, 0.6, 4000, 5, 3).unwrap();
        for k in 1..=5 {
            let tol = 4.0 / 2.576 * est.half_widths[k - 1] + 1e-12;
            assert!((est.count(k) - exact[k - 1]).abs() <= tol, "k={k}");
        }
    }

    #[test]
    fn expected_counts_k1_closed_form() {
        // E[l_1] = sum_{u<v} q(u,v) p.
        let m = build_model(8, 3.0, 1, 2).unwrap();
        let e = expected_path_counts(&m, 0.5, 1).unwrap();
        let mut want = 0.0;
        for u in 0..8 {
            for v in u + 1..8 {
                want += m.q(u, v) * 0.5;
            }
        }
        assert!((e[0] - want).abs() < 1e-12);
    }

    #[test]
    fn sweep_ceiling_is_monotone_prefix() {
        let m = build_model(10, 3.5, 1, 3).unwrap();
        let (rows, ceiling) = survival_sweep(&m, &[0.5, 0.0, 1.0], 1.0, 50, 6, 4).unwrap();
        assert_eq!(rows[0].p, 0.0);
        assert!(rows[0].below);
        assert_eq!(ceiling.map(|c| c >= 0.0), Some(true));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dp_matches_dfs(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
                let mut seen = std::collections::HashSet::new();
                let edges: Vec<_> = raw.into_iter()
                    .map(|(u, v)| (u % n, v % n))
                    .filter(|&(u, v)| seen.insert((u.min(v), u.max(v))))
                    .collect();
                let k_max = n;
                let got = count_simple_paths(&net(n, &edges), k_max).unwrap();
                let want: Vec<f64> = dfs_oracle(n, &edges, k_max).into_iter().map(|c| c as f64).collect();
                prop_assert_eq!(got.counts, want);
            }
        }
    }
}
