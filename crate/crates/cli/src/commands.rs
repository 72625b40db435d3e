use std::path::Path;
use std::time::Instant;

use epictrl_core::chunglu::{
    count_simple_paths, estimate_gamma, expected_path_counts, lemma41_bound, lemma41_log_bound, lemma42_bound,
    n_enumeration, n_recurrence, survival_sweep, PathCensus, EXPECTED_PATH_VERTEX_CAP,
};
use epictrl_core::netcore::{
    gnm, load_network, with_random_costs, with_random_probabilities, write_edge_list,
};
use epictrl_core::percolate::{estimate_infections, estimate_many, exact_expected_infections};
use epictrl_core::rng::{self, Domain};
use epictrl_core::saa::{
    brute_force_optimum, draw_samples, sample_count, solve_saa, Mode, Rounding, SaaParams,
};
use epictrl_core::sbcc::{min_sbcc, min_sbcc_exact, solve_karger, KargerParams, UnitGraph};
use epictrl_core::{ContactNetwork, Intervention, InterventionKind};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Algo, BoundsArgs, Cli, Command, CompareArgs, CountPathsArgs, GenerateArgs, InterventionArgs, KargerArgs,
    OracleCommand, PercolateArgs, SaaArgs, Table,
};
use crate::config::{load_model, ExperimentConfig, ModelSource, Source};
use crate::error::{CliError, Result};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

const DEFAULT_SAMPLES: u64 = 10_000;

/// Runs one command and writes its output. Returns an error after writing
/// when the strict regime check fails.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = ExperimentConfig::load(cli.config.as_deref())?;
    let started = Instant::now();
    let (body, regime_failure) = match &cli.command {
        Command::Generate(a) => (Body::Text(generate_cmd(&cfg, a)?), None),
        Command::Percolate(a) => (Body::Json(percolate_cmd(&cfg, a)?), None),
        Command::SolveSaa(a) => (Body::Json(saa_cmd(&cfg, a, None)?), None),
        Command::SolveNode(a) => (Body::Json(saa_cmd(&cfg, a, Some(Mode::Node))?), None),
        Command::SolveKarger(a) => {
            let (v, failure) = karger_cmd(&cfg, a)?;
            (Body::Json(v), failure)
        }
        Command::CountPaths(a) => (Body::Text(count_paths_cmd(&cfg, a)?), None),
        Command::Bounds(a) => (Body::Text(bounds_cmd(&cfg, a)?), None),
        Command::Compare(a) => compare_cmd(&cfg, a)?,
        Command::Oracle(o) => (Body::Json(oracle_cmd(&cfg, o)?), None),
    };
    let text = match body {
        Body::Text(t) => t,
        Body::Json(mut v) => {
            if cli.timing {
                v["runtime_ms"] = json!(started.elapsed().as_millis() as u64);
            }
            let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    match regime_failure {
        Some(msg) if cli.strict_regime => Err(CliError::OutOfRegime(msg)),
        _ => Ok(()),
    }
}

enum Body {
    Text(String),
    Json(Value),
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

fn envelope(command: &str, params: impl Serialize, result: impl Serialize) -> Value {
    json!({ "schema": SCHEMA, "command": command, "params": params, "result": result })
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Human-readable members: `[u, v]` label pairs for edges, labels for nodes.
fn removed_labels(g: &ContactNetwork, f: &Intervention) -> Value {
    match f.kind() {
        InterventionKind::EdgeRemoval => f
            .members()
            .iter()
            .map(|&e| {
                let edge = g.edge(e);
                json!([g.label(edge.u), g.label(edge.v)])
            })
            .collect(),
        InterventionKind::NodeRemoval => f.members().iter().map(|&v| json!(g.label(v))).collect(),
    }
}

fn intervention_from(g: &ContactNetwork, a: &InterventionArgs) -> Result<Intervention> {
    match (a.remove_edges.is_empty(), a.vaccinate.is_empty()) {
        (_, true) => Ok(Intervention::edges(g, a.remove_edges.iter().copied(), "user")?),
        (true, false) => {
            let ids = a
                .vaccinate
                .iter()
                .map(|l| g.vertex_by_label(l).ok_or_else(|| epictrl_core::Error::UnknownVertex(l.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Intervention::nodes(g, ids, "user")?)
        }
        (false, false) => Err(CliError::Config("give --remove-edges or --vaccinate, not both".into())),
    }
}

fn generate_cmd(cfg: &ExperimentConfig, a: &GenerateArgs) -> Result<String> {
    let seed = cfg.seed(a.seed);
    let mut g = match (a.model.as_deref(), a.n, a.m) {
        (Some(path), _, _) => {
            let model = load_model(&ModelSource::Path(path.to_path_buf()))?;
            epictrl_core::chunglu::generate(&model, seed)
        }
        (None, Some(n), Some(m)) => gnm(n, m, a.connected, seed)?,
        _ => match &cfg.model {
            Some(source) => epictrl_core::chunglu::generate(&load_model(source)?, seed),
            None => return Err(CliError::Config("pass --model or --n and --m".into())),
        },
    };
    if let Some(p) = a.p.or(cfg.p) {
        g = g.with_uniform_probability(p)?;
    }
    if let Some(range) = &a.p_range {
        if range.len() != 2 {
            return Err(CliError::Config("--p-range takes `lo,hi`".into()));
        }
        g = with_random_probabilities(&g, range[0], range[1], seed)?;
    }
    if let Some(hi) = a.cost_max {
        g = with_random_costs(&g, 1, hi, seed)?;
    }
    Ok(write_edge_list(&g))
}

fn percolate_cmd(cfg: &ExperimentConfig, a: &PercolateArgs) -> Result<Value> {
    let seed = cfg.seed(a.seed);
    let samples = a.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    let (g, info) = cfg.instance(&a.instance, seed)?;
    let f = intervention_from(&g, &a.intervention)?;
    let est = estimate_infections(&g, &f, samples, rng::rebase(seed, Domain::Evaluation))?;
    let exact = if a.exact { Some(exact_expected_infections(&g, &f)?) } else { None };
    Ok(envelope(
        "percolate",
        json!({ "instance": info, "samples": samples, "seed": seed }),
        json!({ "intervention": f, "removed": removed_labels(&g, &f), "estimate": est, "exact": exact }),
    ))
}

fn saa_cmd(cfg: &ExperimentConfig, a: &SaaArgs, force: Option<Mode>) -> Result<Value> {
    let seed = cfg.seed(a.seed);
    let (g, info) = cfg.instance(&a.instance, seed)?;
    let d = SaaParams::default();
    let params = SaaParams {
        budget: a.budget.or(cfg.budget).ok_or_else(|| CliError::Config("--budget is required".into()))?,
        epsilon: a.epsilon.or(cfg.epsilon).unwrap_or(d.epsilon),
        gamma: a.gamma.or(cfg.gamma).unwrap_or(d.gamma),
        rounding: a.rounding.or(cfg.rounding).unwrap_or(d.rounding),
        mode: force.or(a.mode).or(cfg.mode).unwrap_or(Mode::Edge),
        seed,
        num_samples: a.num_samples.or(cfg.num_samples),
        eval_samples: a.eval_samples.or(cfg.eval_samples).unwrap_or(d.eval_samples),
    };
    let report = solve_saa(&g, &params)?;
    let command = if force.is_some() { "solve-node" } else { "solve-saa" };
    let removed = removed_labels(&g, &report.intervention);
    let mut result = serde_json::to_value(&report).map_err(|e| CliError::Output(e.to_string()))?;
    result["removed"] = removed;
    Ok(envelope(command, json!({ "instance": info, "saa": params }), result))
}

fn karger_params(cfg: &ExperimentConfig, a: &KargerArgs) -> Result<KargerParams> {
    let d = KargerParams::default();
    Ok(KargerParams {
        budget: a.budget.or(cfg.budget).ok_or_else(|| CliError::Config("--budget is required".into()))?,
        gamma: a.gamma.or(cfg.karger_gamma).or(cfg.gamma).unwrap_or(d.gamma),
        lambda: a.lambda.or(cfg.lambda).unwrap_or(d.lambda),
        repetitions: a.repetitions.or(cfg.repetitions),
        eval_samples: a.eval_samples.or(cfg.eval_samples).unwrap_or(d.eval_samples),
        d: a.d.or(cfg.d).unwrap_or(d.d),
        seed: cfg.seed(a.seed),
    })
}

fn karger_cmd(cfg: &ExperimentConfig, a: &KargerArgs) -> Result<(Value, Option<String>)> {
    let params = karger_params(cfg, a)?;
    let (g, info) = cfg.instance(&a.instance, params.seed)?;
    let report = solve_karger(&g, &params)?;
    let failure = (!report.in_regime).then(|| regime_message(report.epsilon_regime));
    let removed = removed_labels(&g, &report.intervention);
    let mut result = serde_json::to_value(&report).map_err(|e| CliError::Output(e.to_string()))?;
    result["removed"] = removed;
    Ok((envelope("solve-karger", json!({ "instance": info, "karger": params }), result), failure))
}

fn regime_message(eps: Option<f64>) -> String {
    match eps {
        Some(e) => format!("minimum cut too small for sparsification (epsilon = {e})"),
        None => "minimum cut is 0".into(),
    }
}

fn census_rows(c: &PathCensus) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = (1..=c.k_max())
        .map(|k| vec![k.to_string(), c.count(k).to_string(), c.half_widths[k - 1].to_string()])
        .collect();
    rows.push(vec!["total".into(), c.total.to_string(), c.total_half_width.to_string()]);
    rows
}

fn count_paths_cmd(cfg: &ExperimentConfig, a: &CountPathsArgs) -> Result<String> {
    let seed = cfg.seed(a.seed);
    let k_max = a.kmax.or(cfg.kmax).unwrap_or(6);
    match cfg.source(a.graph.as_deref(), a.model.as_deref())? {
        Source::Graph(path) => {
            if a.p.is_some() || !a.sweep.is_empty() {
                return Err(CliError::Config("--p and --sweep apply to --model only".into()));
            }
            let g = load_network(&path).map_err(|e| match e {
                epictrl_core::Error::Io(m) => CliError::Input { path: path.display().to_string(), message: m },
                other => other.into(),
            })?;
            csv_text(&["k", "count_or_mean", "half_width"], census_rows(&count_simple_paths(&g, k_max)?))
        }
        Source::Model(source) => {
            let model = load_model(&source)?;
            let trials = a.trials.or(cfg.trials).unwrap_or(1000);
            if !a.sweep.is_empty() {
                let limit = (model.n as f64).powf(a.poly_exponent);
                let (rows, ceiling) = survival_sweep(&model, &a.sweep, limit, trials, k_max, seed)?;
                eprintln!("c0_estimate={}", fmt_opt(ceiling));
                return csv_text(
                    &["p", "gamma", "half_width", "below"],
                    rows.iter().map(|r| {
                        vec![r.p.to_string(), r.gamma.to_string(), r.half_width.to_string(), r.below.to_string()]
                    }),
                );
            }
            let p = a.p.or(cfg.p).unwrap_or(1.0);
            csv_text(&["k", "count_or_mean", "half_width"], census_rows(&estimate_gamma(&model, p, trials, k_max, seed)?))
        }
    }
}

fn bounds_cmd(cfg: &ExperimentConfig, a: &BoundsArgs) -> Result<String> {
    match a.table {
        Table::Recurrence => {
            let mut rows = Vec::new();
            for &c1 in &a.c1 {
                for &w_min in &a.w_min {
                    for d in w_min..=a.d_max.max(w_min) {
                        for k in 0..=a.kmax {
                            let rec = n_recurrence(d, k, c1, w_min)?;
                            let en = n_enumeration(d, k, c1, w_min).ok();
                            let closed = lemma42_bound(d, k, c1, w_min).ok();
                            rows.push(vec![
                                d.to_string(),
                                k.to_string(),
                                c1.to_string(),
                                w_min.to_string(),
                                rec.to_string(),
                                fmt_opt(en),
                                fmt_opt(closed),
                            ]);
                        }
                    }
                }
            }
            csv_text(&["d", "k", "c1", "w_min", "recurrence", "enumeration", "closed_form_bound"], rows)
        }
        Table::PathBound => {
            let source = match (&a.model, &cfg.model) {
                (Some(p), _) => ModelSource::Path(p.clone()),
                (None, Some(s)) => s.clone(),
                (None, None) => return Err(CliError::Config("the path-bound table needs --model".into())),
            };
            let model = load_model(&source)?;
            let expected = if model.n <= EXPECTED_PATH_VERTEX_CAP {
                Some(expected_path_counts(&model, 1.0, a.kmax as usize)?)
            } else {
                None
            };
            let mut rows = Vec::new();
            for k in 1..=a.kmax {
                rows.push(vec![
                    k.to_string(),
                    lemma41_bound(&model, k)?.to_string(),
                    lemma41_log_bound(&model, k)?.to_string(),
                    fmt_opt(expected.as_ref().map(|e| e[k as usize - 1])),
                ]);
            }
            csv_text(&["k", "bound", "log_bound", "expected"], rows)
        }
    }
}

fn compare_cmd(cfg: &ExperimentConfig, a: &CompareArgs) -> Result<(Body, Option<String>)> {
    let seed = cfg.seed(a.seed);
    let (g, _) = cfg.instance(&a.instance, seed)?;
    let budget = a.budget.or(cfg.budget).ok_or_else(|| CliError::Config("--budget is required".into()))?;
    let algos = if a.algos.is_empty() {
        cfg.algos.clone().unwrap_or_else(|| vec![Algo::SaaDet, Algo::SaaRand, Algo::Karger])
    } else {
        a.algos.clone()
    };
    let eval_samples = a.eval_samples.or(cfg.eval_samples).unwrap_or(DEFAULT_SAMPLES);
    let saa = SaaParams {
        budget,
        epsilon: a.epsilon.or(cfg.epsilon).unwrap_or(SaaParams::default().epsilon),
        gamma: a.gamma.or(cfg.gamma).unwrap_or(SaaParams::default().gamma),
        rounding: Rounding::Deterministic,
        mode: Mode::Edge,
        seed,
        num_samples: a.num_samples.or(cfg.num_samples),
        eval_samples: 1,
    };
    let mut failure = None;
    let mut solved: Vec<(Algo, Intervention)> = Vec::new();
    for &algo in &algos {
        let f = match algo {
            Algo::SaaDet => solve_saa(&g, &saa)?.intervention,
            Algo::SaaRand => solve_saa(&g, &SaaParams { rounding: Rounding::Randomized, ..saa.clone() })?.intervention,
            Algo::Karger => {
                let d = KargerParams::default();
                let params = KargerParams {
                    budget,
                    gamma: a.karger_gamma.or(cfg.karger_gamma).unwrap_or(d.gamma),
                    lambda: a.lambda.or(cfg.lambda).unwrap_or(d.lambda),
                    repetitions: a.repetitions.or(cfg.repetitions),
                    eval_samples,
                    d: cfg.d.unwrap_or(d.d),
                    seed,
                };
                let r = solve_karger(&g, &params)?;
                if !r.in_regime {
                    failure = Some(regime_message(r.epsilon_regime));
                }
                r.intervention
            }
            Algo::Brute => {
                let n = match saa.num_samples {
                    Some(n) => n,
                    None => sample_count(g.n(), g.m(), saa.epsilon)?,
                };
                brute_force_optimum(&draw_samples(&g, n, seed)?, budget, Mode::Edge)?.0
            }
        };
        solved.push((algo, f));
    }
    let interventions: Vec<Intervention> = solved.iter().map(|(_, f)| f.clone()).collect();
    let estimates = estimate_many(&g, &interventions, eval_samples, rng::rebase(seed, Domain::Evaluation))?;
    let rows = solved.iter().zip(&estimates).map(|((algo, f), est)| {
        vec![
            algo.name().to_string(),
            f.cost().to_string(),
            budget.to_string(),
            f.len().to_string(),
            est.mean.to_string(),
            est.half_width.to_string(),
            est.std_error.to_string(),
            f.members().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "),
        ]
    });
    let text = csv_text(
        &["algorithm", "cost", "budget", "removed", "mean", "half_width", "std_error", "members"],
        rows,
    )?;
    Ok((Body::Text(text), failure))
}

fn oracle_cmd(cfg: &ExperimentConfig, o: &OracleCommand) -> Result<Value> {
    match o {
        OracleCommand::Exact { instance, intervention } => {
            let (g, info) = cfg.instance(instance, cfg.seed(None))?;
            let f = intervention_from(&g, intervention)?;
            let exact = exact_expected_infections(&g, &f)?;
            Ok(envelope("oracle-exact", json!({ "instance": info }), json!({ "intervention": f, "exact": exact })))
        }
        OracleCommand::Brute { instance, budget, mode, num_samples, seed } => {
            let seed = cfg.seed(*seed);
            let (g, info) = cfg.instance(instance, seed)?;
            let budget = budget.or(cfg.budget).ok_or_else(|| CliError::Config("--budget is required".into()))?;
            let mode = mode.or(cfg.mode).unwrap_or(Mode::Edge);
            let n = num_samples.or(cfg.num_samples).unwrap_or(1000);
            let samples = draw_samples(&g, n, seed)?;
            let (f, h) = brute_force_optimum(&samples, budget, mode)?;
            Ok(envelope(
                "oracle-brute",
                json!({ "instance": info, "budget": budget, "mode": mode, "num_samples": n, "seed": seed }),
                json!({ "intervention": f, "removed": removed_labels(&g, &f), "empirical_h": h }),
            ))
        }
        OracleCommand::Sbcc { instance, budget, lambda, seed } => {
            let (g, info) = cfg.instance(instance, cfg.seed(*seed))?;
            let budget = budget.or(cfg.budget).ok_or_else(|| CliError::Config("--budget is required".into()))?;
            let h = UnitGraph::from_network(&g);
            let (cut, size) = min_sbcc_exact(&h, budget)?;
            let sweeps = lambda
                .iter()
                .map(|&l| {
                    let s = min_sbcc(&h, budget, l)?;
                    let ratio_ok = s.component_size as f64 <= (size as f64 / (1.0 - l)).ceil();
                    Ok(json!({
                        "lambda": l,
                        "cut_size": s.cut_size,
                        "component_size": s.component_size,
                        "cut_within": s.cut_size as f64 <= budget / l + 1e-9,
                        "size_within": ratio_ok,
                        "lagrange_alpha": s.lagrange_alpha,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(envelope(
                "oracle-sbcc",
                json!({ "instance": info, "budget": budget }),
                json!({ "exact_cut": cut, "exact_component_size": size, "sweeps": sweeps }),
            ))
        }
    }
}

