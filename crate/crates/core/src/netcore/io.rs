//! Edge-list text format.
//!
//! ```text
//! # comment
//! @source s
//! @seeds a b          (optional: merge these into a meta-source)
//! @vertex iso         (optional: declare vertices that may have no edges)
//! s a 1.0 0.5         (u v cost prob)
//! a b 1e0 5e-1
//! ```
//!
//! Labels are mapped to dense ids in order of first appearance. With
//! `@seeds`, the seeds are merged into a new meta-source; `@source` may then
//! only name a fresh label for it.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::network::{ContactNetwork, Edge, META_SOURCE_LABEL};
use crate::error::{Error, Result};

pub fn load_network(path: impl AsRef<Path>) -> Result<ContactNetwork> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}

pub fn parse_edge_list(text: &str) -> Result<ContactNetwork> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        ids.insert(label.to_string(), labels.len());
        labels.push(label.to_string());
        labels.len() - 1
    };
    let mut edges = Vec::new();
    let mut source: Option<(usize, String)> = None;
    let mut seeds: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        if let Some(directive) = fields[0].strip_prefix('@') {
            match directive {
                "source" => {
                    if fields.len() != 2 {
                        return Err(parse_err("@source takes exactly one label".into()));
                    }
                    if source.is_some() {
                        return Err(parse_err("@source given twice".into()));
                    }
                    source = Some((line_no, fields[1].to_string()));
                }
                "seeds" => {
                    if fields.len() < 2 {
                        return Err(parse_err("@seeds needs at least one label".into()));
                    }
                    if seeds.is_some() {
                        return Err(parse_err("@seeds given twice".into()));
                    }
                    seeds = Some((line_no, fields[1..].iter().map(|s| s.to_string()).collect()));
                }
                "vertex" => {
                    for f in &fields[1..] {
                        intern(f);
                    }
                }
                other => return Err(parse_err(format!("unknown directive @{other}"))),
            }
            continue;
        }
        if fields.len() != 4 {
            return Err(parse_err(format!(
                "expected `u v cost prob`, found {} fields",
                fields.len()
            )));
        }
        let cost: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("bad cost `{}`", fields[2])))?;
        let prob: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(format!("bad probability `{}`", fields[3])))?;
        let u = intern(fields[0]);
        let v = intern(fields[1]);
        edges.push(Edge::new(u, v, cost, prob));
    }

    let lookup = |label: &str| {
        ids.get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    };

    match seeds {
        None => {
            let (_, label) = source.ok_or(Error::MissingSource)?;
            let s = lookup(&label)?;
            ContactNetwork::new(labels, edges, s)
        }
        Some((_, seed_labels)) => {
            let seed_ids = seed_labels
                .iter()
                .map(|l| lookup(l))
                .collect::<Result<Vec<_>>>()?;
            let meta_label = match &source {
                Some((line, l)) if ids.contains_key(l) => {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!(
                            "@source `{l}` names an existing vertex while @seeds is present"
                        ),
                    })
                }
                Some((_, l)) => l.clone(),
                None => META_SOURCE_LABEL.to_string(),
            };
            let base = ContactNetwork::new(labels, edges, seed_ids[0])?;
            base.merge_seeds_labeled(&seed_ids, &meta_label)
        }
    }
}

/// Serializes `network` so that [`parse_edge_list`] rebuilds it with the
/// same ids. Every vertex is declared up front so isolated vertices and id
/// order survive the round trip.
pub fn write_edge_list(network: &ContactNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@source {}", network.label(network.source()));
    for chunk in network.labels().chunks(16) {
        let _ = writeln!(out, "@vertex {}", chunk.join(" "));
    }
    for e in network.edges() {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            network.label(e.u),
            network.label(e.v),
            e.cost,
            e.prob
        );
    }
    out
}
