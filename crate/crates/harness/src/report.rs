use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use sigmax_core::{NodeId, SocialItemGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Outcome of one command. Every field is always present in JSON output
/// (`null` when it does not apply) except `timings`, which only appears when
/// requested so that default reports stay byte-stable across runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub command: String,
    pub algorithm: Option<String>,
    pub engine: Option<String>,
    pub k: Option<usize>,
    /// `[user, item]` pairs in selection order.
    pub seeds: Vec<[String; 2]>,
    pub adoption: Option<f64>,
    pub std_error: Option<f64>,
    pub runs: Option<u32>,
    pub rng_seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub config: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl ExperimentReport {
    pub fn new(command: &str, rng_seed: u64) -> Self {
        Self {
            command: command.to_owned(),
            rng_seed,
            ..Self::default()
        }
    }

    pub fn set_seeds(&mut self, graph: &SocialItemGraph, seeds: &[NodeId]) {
        self.seeds = seeds
            .iter()
            .map(|s| {
                let n = graph.node(*s);
                [n.user.clone(), n.item.clone()]
            })
            .collect();
    }

    pub fn echo(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_owned(), value.to_string());
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_owned(), value);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
        }
    }

    /// Two columns, `key,value`, one row per scalar. Seeds become
    /// `seeds.<i>.user` and `seeds.<i>.item`; maps become `<map>.<key>`.
    fn render_csv(&self) -> String {
        let mut rows: Vec<(String, String)> = Vec::new();
        let opt = |v: Option<String>| v.unwrap_or_default();
        rows.push(("command".into(), self.command.clone()));
        rows.push(("algorithm".into(), opt(self.algorithm.clone())));
        rows.push(("engine".into(), opt(self.engine.clone())));
        rows.push(("k".into(), opt(self.k.map(|k| k.to_string()))));
        for (i, [user, item]) in self.seeds.iter().enumerate() {
            rows.push((format!("seeds.{i}.user"), user.clone()));
            rows.push((format!("seeds.{i}.item"), item.clone()));
        }
        rows.push(("adoption".into(), opt(self.adoption.map(|v| v.to_string()))));
        rows.push(("std_error".into(), opt(self.std_error.map(|v| v.to_string()))));
        rows.push(("runs".into(), opt(self.runs.map(|v| v.to_string()))));
        rows.push(("rng_seed".into(), self.rng_seed.to_string()));
        rows.extend(self.metrics.iter().map(|(k, v)| (format!("metrics.{k}"), v.to_string())));
        rows.extend(self.config.iter().map(|(k, v)| (format!("config.{k}"), v.clone())));
        if let Some(t) = &self.timings {
            rows.extend(t.iter().map(|(k, v)| (format!("timings.{k}"), v.to_string())));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        for (k, v) in rows {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Human-readable timing table for `bench`.
pub fn timing_table(rows: &[(String, f64, f64)]) -> String {
    let mut out = String::from("engine\tseconds\tadoption\n");
    for (label, secs, mean) in rows {
        let _ = writeln!(out, "{label}\t{secs:.6}\t{mean}");
    }
    out
}
