//! Compact form of the sample-average LP.
//!
//! For each sample `G_j` the path constraints "`sum_{e in P} x_e >= y_vj` for
//! every s-v path `P` in `G_j`" are replaced by distance labels: `y_vj` may
//! not exceed `y_uj + x_uv` across any kept edge, `y_sj = 0`, and
//! `y_vj <= 1`. The largest feasible `y` is then `min(1, dist_x(s, v))`,
//! which is exactly what the path constraints allow. The distance variable
//! and `y` coincide once `y` is capped at 1, so only `y` is materialized.
//!
//! Vertices that `s` cannot reach in `G_j` have no constraints and sit at
//! `y = 1`; they are left out. Samples whose reachable part is identical
//! share one block of variables weighted by their multiplicity.

use std::collections::HashMap;
use std::time::Duration;

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolutionStatus, Variable};
use serde::Serialize;

use super::samples::SampleSet;
use super::Mode;
use crate::error::{Error, Result};
use crate::netcore::{ContactNetwork, EdgeId, Reacher, VertexId};
use crate::stats::compensated_sum;

/// The reachable part of one or more identical samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub multiplicity: u64,
    /// Vertices reachable from the source, source first.
    pub vertices: Vec<VertexId>,
    /// Kept edges among `vertices`, as local indices plus the edge id.
    pub arcs: Vec<(usize, usize, EdgeId)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub mode: Mode,
    /// Un-normalized budget `B`.
    pub budget: f64,
    /// Optional wall-clock limit handed to the solver.
    pub time_limit: Option<Duration>,
    n: usize,
    source: VertexId,
    num_samples: u64,
    num_items: usize,
    removable: Vec<usize>,
    scaled_costs: Vec<f64>,
    var_of_item: Vec<Option<usize>>,
    scenarios: Vec<Scenario>,
    scenario_of: Vec<usize>,
}

/// Candidates for removal before the budget is applied: finite-cost
/// non-loop edges, or every vertex but the source with finite cost.
pub fn candidates(network: &ContactNetwork, mode: Mode) -> Vec<usize> {
    match mode {
        Mode::Edge => (0..network.m())
            .filter(|&e| {
                let edge = network.edge(e);
                !edge.is_loop() && edge.cost.is_finite()
            })
            .collect(),
        Mode::Node => (0..network.n())
            .filter(|&v| v != network.source() && network.vertex_cost(v).is_finite())
            .collect(),
    }
}

pub(crate) fn item_cost(network: &ContactNetwork, mode: Mode, item: usize) -> f64 {
    match mode {
        Mode::Edge => network.edge(item).cost,
        Mode::Node => network.vertex_cost(item),
    }
}

/// Builds the LP for `samples` under budget `B`.
///
/// Items costing more than `B` are hard-wired to 0 and the rest get costs
/// `c / B`, so the budget row reads `sum c~ x <= 1`.
pub fn build_lp(samples: &SampleSet, budget: f64, mode: Mode) -> Result<LpModel> {
    if budget.is_nan() || budget <= 0.0 {
        return Err(Error::InvalidParameter(format!("budget must be positive, got {budget}")));
    }
    let network = samples.network();
    let all = candidates(network, mode);
    if all.is_empty() {
        return Err(Error::NothingRemovable(match mode {
            Mode::Edge => "network has no removable edges",
            Mode::Node => "network has no removable vertices",
        }));
    }
    let num_items = match mode {
        Mode::Edge => network.m(),
        Mode::Node => network.n(),
    };
    let mut var_of_item = vec![None; num_items];
    let mut removable = Vec::new();
    let mut scaled_costs = Vec::new();
    for item in all {
        let cost = item_cost(network, mode, item);
        if cost <= budget {
            var_of_item[item] = Some(removable.len());
            removable.push(item);
            scaled_costs.push(cost / budget);
        }
    }

    let s = network.source();
    let mut reach = Reacher::new(network.n());
    let mut index: HashMap<Vec<EdgeId>, usize> = HashMap::new();
    let mut scenarios: Vec<Scenario> = Vec::new();
    let mut scenario_of = Vec::with_capacity(samples.len());
    let mut local = vec![usize::MAX; network.n()];
    for sample in samples.samples() {
        let kept = sample.mask();
        reach.run(network, |e| kept[e], |_| true);
        let mut vertices: Vec<VertexId> = reach.visited().to_vec();
        vertices.sort_unstable_by_key(|&v| (v != s, v));
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let arcs: Vec<(usize, usize, EdgeId)> = sample
            .kept_edges
            .iter()
            .filter_map(|&e| {
                let edge = network.edge(e);
                (!edge.is_loop() && local[edge.u] != usize::MAX)
                    .then(|| (local[edge.u], local[edge.v], e))
            })
            .collect();
        for &v in &vertices {
            local[v] = usize::MAX;
        }
        let key: Vec<EdgeId> = arcs.iter().map(|a| a.2).collect();
        let id = *index.entry(key).or_insert_with(|| {
            scenarios.push(Scenario { multiplicity: 0, vertices, arcs });
            scenarios.len() - 1
        });
        scenarios[id].multiplicity += 1;
        scenario_of.push(id);
    }

    Ok(LpModel {
        mode,
        budget,
        time_limit: None,
        n: network.n(),
        source: s,
        num_samples: samples.len() as u64,
        num_items,
        removable,
        scaled_costs,
        var_of_item,
        scenarios,
        scenario_of,
    })
}

impl LpModel {
    /// Items (edge or vertex ids) that carry an `x` variable.
    pub fn removable(&self) -> &[usize] {
        &self.removable
    }

    /// Costs of [`removable`](Self::removable) divided by `B`.
    pub fn scaled_costs(&self) -> &[f64] {
        &self.scaled_costs
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn num_samples(&self) -> u64 {
        self.num_samples
    }

    pub fn num_x_vars(&self) -> usize {
        self.removable.len()
    }

    pub fn num_y_vars(&self) -> usize {
        self.scenarios.iter().map(|s| s.vertices.len() - 1).sum()
    }

    /// Propagation rows plus the budget row.
    pub fn num_constraints(&self) -> usize {
        2 * self.scenarios.iter().map(|s| s.arcs.len()).sum::<usize>() + 1
    }

    /// Index of the `x` variable charged for entering local vertex `to`
    /// across `edge`.
    fn charged(&self, scenario: &Scenario, edge: EdgeId, to: usize) -> Option<usize> {
        match self.mode {
            Mode::Edge => self.var_of_item[edge],
            Mode::Node => self.var_of_item[scenario.vertices[to]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStatus {
    Optimal,
    IterationLimit,
}

/// An optimal point of the LP.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalSolution {
    pub mode: Mode,
    /// Indexed by edge id (edge mode) or vertex id (node mode); hard-wired
    /// items are 0.
    pub x: Vec<f64>,
    /// `(1/N) sum_j sum_{v != s} (1 - y_vj)`; add 1 for expected infections.
    pub objective: f64,
    pub solver_status: SolverStatus,
    pub budget: f64,
    pub n: usize,
    pub source: VertexId,
    removable: Vec<usize>,
    #[serde(skip)]
    y: Vec<Vec<f64>>,
    #[serde(skip)]
    scenario_of: Vec<usize>,
}

impl FractionalSolution {
    /// `y_vj`.
    pub fn y(&self, v: VertexId, j: usize) -> f64 {
        self.y[self.scenario_of[j]][v]
    }

    /// All `y_vj` for sample `j`, indexed by vertex.
    pub fn y_sample(&self, j: usize) -> &[f64] {
        &self.y[self.scenario_of[j]]
    }

    pub fn num_samples(&self) -> usize {
        self.scenario_of.len()
    }

    pub fn removable(&self) -> &[usize] {
        &self.removable
    }

    /// `sum_e c_e x_e` in original cost units.
    pub fn fractional_cost(&self, network: &ContactNetwork) -> f64 {
        compensated_sum(self.removable.iter().map(|&i| item_cost(network, self.mode, i) * self.x[i]))
    }
}

pub fn solve_lp(model: &LpModel) -> Result<FractionalSolution> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    if let Some(limit) = model.time_limit {
        problem.set_time_limit(limit);
    }
    let x_vars: Vec<Variable> = model.removable.iter().map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    let n_samples = model.num_samples as f64;
    let mut y_vars: Vec<Vec<Option<Variable>>> = Vec::with_capacity(model.scenarios.len());
    for sc in &model.scenarios {
        let weight = sc.multiplicity as f64 / n_samples;
        let vars = (0..sc.vertices.len())
            .map(|i| (i > 0).then(|| problem.add_var(weight, (0.0, 1.0))))
            .collect();
        y_vars.push(vars);
    }
    for (sc, ys) in model.scenarios.iter().zip(&y_vars) {
        for &(a, b, e) in &sc.arcs {
            for (from, to) in [(a, b), (b, a)] {
                // Entering the source is never binding: y_s = 0.
                let Some(y_to) = ys[to] else { continue };
                let mut row = vec![(y_to, 1.0)];
                if let Some(y_from) = ys[from] {
                    row.push((y_from, -1.0));
                }
                if let Some(x) = model.charged(sc, e, to) {
                    row.push((x_vars[x], -1.0));
                }
                problem.add_constraint(row.as_slice(), ComparisonOp::Le, 0.0);
            }
        }
    }
    if !x_vars.is_empty() {
        let row: Vec<(Variable, f64)> = x_vars.iter().copied().zip(model.scaled_costs.iter().copied()).collect();
        problem.add_constraint(row.as_slice(), ComparisonOp::Le, 1.0);
    }

    let outcome = problem.solve().map_err(|e| Error::Solver(e.to_string()))?;
    let solution = outcome
        .into_solution()
        .map_err(|_| Error::Solver("solver stopped before finding a feasible point".into()))?;
    let solver_status = match solution.status() {
        SolutionStatus::Optimal => SolverStatus::Optimal,
        SolutionStatus::Feasible => SolverStatus::IterationLimit,
    };

    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let mut x = vec![0.0; model.num_items];
    for (&item, &var) in model.removable.iter().zip(&x_vars) {
        x[item] = clamp(solution.var_value(var));
    }
    let mut y = Vec::with_capacity(model.scenarios.len());
    let mut deficits = Vec::with_capacity(model.scenarios.len());
    for (sc, ys) in model.scenarios.iter().zip(&y_vars) {
        let mut dense = vec![1.0; model.n];
        dense[model.source] = 0.0;
        let mut deficit = Vec::with_capacity(sc.vertices.len());
        for (&v, var) in sc.vertices.iter().zip(ys).skip(1) {
            let value = clamp(solution.var_value(var.expect("non-source vertex has a variable")));
            dense[v] = value;
            deficit.push(1.0 - value);
        }
        deficits.push(sc.multiplicity as f64 * compensated_sum(deficit));
        y.push(dense);
    }
    Ok(FractionalSolution {
        mode: model.mode,
        x,
        objective: compensated_sum(deficits) / n_samples,
        solver_status,
        budget: model.budget,
        n: model.n,
        source: model.source,
        removable: model.removable.clone(),
        y,
        scenario_of: model.scenario_of.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolate::PercolationSample;
    use crate::saa::draw_samples;
    use approx::assert_abs_diff_eq;

    fn fixed(network: &ContactNetwork, kept: &[&[EdgeId]]) -> SampleSet {
        let samples = kept
            .iter()
            .enumerate()
            .map(|(j, k)| PercolationSample {
                kept_edges: k.to_vec(),
                sample_index: j as u64,
                seed: 0,
                num_edges: network.m(),
            })
            .collect();
        SampleSet::from_samples(network, samples).unwrap()
    }

    fn path() -> ContactNetwork {
        ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 0.5), (1, 2, 1.0, 0.5)]).unwrap()
    }

    #[test]
    fn path_cut_at_source() {
        let g = path();
        let set = fixed(&g, &[&[0, 1]]);
        let sol = solve_lp(&build_lp(&set, 1.0, Mode::Edge).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.objective, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.x[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.y(1, 0), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.y(2, 0), 1.0, epsilon = 1e-9);
        assert_eq!(sol.y(0, 0), 0.0);
        assert_eq!(sol.solver_status, SolverStatus::Optimal);
    }

    #[test]
    fn empty_samples_cost_nothing() {
        let g = path();
        let set = fixed(&g, &[&[], &[]]);
        let model = build_lp(&set, 1.0, Mode::Edge).unwrap();
        assert_eq!(model.scenarios().len(), 1);
        let sol = solve_lp(&model).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tiny_budget_hardwires_everything() {
        // Reachable sets of size 3 and 2: objective (2 + 1) / 2.
        let g = path();
        let set = fixed(&g, &[&[0, 1], &[0]]);
        let model = build_lp(&set, 0.5, Mode::Edge).unwrap();
        assert_eq!(model.num_x_vars(), 0);
        let sol = solve_lp(&model).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = path();
        let set = fixed(&g, &[&[0]]);
        assert!(build_lp(&set, 0.0, Mode::Edge).is_err());
        let only_meta = ContactNetwork::from_tuples(2, 0, [(0, 1, f64::INFINITY, 1.0)]).unwrap();
        let set = fixed(&only_meta, &[&[0]]);
        assert!(matches!(build_lp(&set, 1.0, Mode::Edge), Err(Error::NothingRemovable(_))));
        let lone = ContactNetwork::from_tuples(1, 0, std::iter::empty()).unwrap();
        let set = fixed(&lone, &[&[]]);
        assert!(matches!(build_lp(&set, 1.0, Mode::Node), Err(Error::NothingRemovable(_))));
    }

    #[test]
    fn node_mode_vaccinates_the_hub() {
        // Star with centre 1 hanging off the source 0.
        let g = ContactNetwork::from_tuples(5, 0, [(0, 1, 1.0, 1.0), (1, 2, 1.0, 1.0), (1, 3, 1.0, 1.0), (1, 4, 1.0, 1.0)])
            .unwrap();
        let set = draw_samples(&g, 1, 0).unwrap();
        let sol = solve_lp(&build_lp(&set, 1.0, Mode::Node).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.objective, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.x[1], 1.0, epsilon = 1e-9);
        assert_eq!(sol.x[0], 0.0);
    }

    #[test]
    fn fractional_split_on_two_routes() {
        // Two disjoint s-t routes, budget for one edge: the LP may split but
        // cannot do better than leaving one vertex reachable in total.
        let g = ContactNetwork::from_tuples(3, 0, [(0, 1, 1.0, 1.0), (0, 2, 1.0, 1.0)]).unwrap();
        let set = draw_samples(&g, 1, 0).unwrap();
        let sol = solve_lp(&build_lp(&set, 1.0, Mode::Edge).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-9);
        assert!(sol.fractional_cost(&g) <= 1.0 + 1e-7);
    }
}
