//! Loaders and writers for the on-disk formats.
//!
//! | file         | layout                                                        |
//! |--------------|---------------------------------------------------------------|
//! | social graph | `u<TAB>v` per line, one directed edge                         |
//! | action log   | `user<TAB>item<TAB>timestamp` per line, integer timestamp     |
//! | seed set     | `user<TAB>item` per line                                      |
//! | model        | `{"sources":[["u","i"],...],"dest":["v","j"],"p":0.42}` per line |
//!
//! TSV files accept `#` comment lines, blank lines and surrounding
//! whitespace per field. Fields are never quoted.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use serde::{Deserialize, Serialize};
use sigmax_core::learning::{Action, ActionLog};
use sigmax_core::{build_graph, Hyperedge, NodeId, PurchaseNode, SocialGraph, SocialItemGraph};

use crate::{HarnessError, Result};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| HarnessError::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::io(path, e))
}

/// Runs `row` over every data row of a TSV stream with `fields` columns.
fn each_row(
    reader: impl Read,
    label: &Path,
    fields: usize,
    mut row: impl FnMut(&StringRecord, u64) -> Result<()>,
) -> Result<()> {
    let mut rdr = ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .quoting(false)
        .trim(Trim::All)
        .from_reader(reader);
    let mut record = StringRecord::new();
    loop {
        let more = rdr.read_record(&mut record).map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            HarnessError::parse(label, line, e.to_string())
        })?;
        if !more {
            return Ok(());
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != fields || record.iter().any(str::is_empty) {
            return Err(HarnessError::parse(
                label,
                line,
                format!("expected {fields} tab-separated fields, found {:?}", record.as_slice()),
            ));
        }
        row(&record, line)?;
    }
}

pub fn read_social_graph(reader: impl Read, label: &Path) -> Result<SocialGraph> {
    let mut graph = SocialGraph::new();
    each_row(reader, label, 2, |r, _| {
        graph.add_edge(&r[0], &r[1]);
        Ok(())
    })?;
    Ok(graph)
}

/// Social graph from `u<TAB>v` lines. Repeated edges collapse.
pub fn load_social_graph(path: &Path) -> Result<SocialGraph> {
    read_social_graph(open(path)?, path)
}

pub fn read_action_log(reader: impl Read, label: &Path) -> Result<ActionLog> {
    let mut actions = Vec::new();
    each_row(reader, label, 3, |r, line| {
        let time: i64 = r[2]
            .parse()
            .map_err(|_| HarnessError::parse(label, line, format!("timestamp {:?} is not an integer", &r[2])))?;
        actions.push(Action::new(PurchaseNode::new(&r[0], &r[1]), time));
        Ok(())
    })?;
    Ok(ActionLog::new(actions))
}

/// Action log from `user<TAB>item<TAB>timestamp` lines, stably sorted by time.
pub fn load_action_log(path: &Path) -> Result<ActionLog> {
    read_action_log(open(path)?, path)
}

pub fn write_social_graph(graph: &SocialGraph, out: &mut impl Write) -> std::io::Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    Ok(())
}

pub fn save_social_graph(graph: &SocialGraph, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    write_social_graph(graph, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| HarnessError::io(path, e))
}

pub fn write_action_log(log: &ActionLog, out: &mut impl Write) -> std::io::Result<()> {
    for a in log.records() {
        writeln!(out, "{}\t{}\t{}", a.node.user, a.node.item, a.time)?;
    }
    Ok(())
}

pub fn save_action_log(log: &ActionLog, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    write_action_log(log, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelLine {
    sources: Vec<(String, String)>,
    dest: (String, String),
    p: f64,
}

fn to_node((user, item): (String, String)) -> PurchaseNode {
    PurchaseNode::new(user, item)
}

fn to_pair(node: &PurchaseNode) -> (String, String) {
    (node.user.clone(), node.item.clone())
}

/// One JSON object per hyperedge, in graph order. Probabilities are written
/// in shortest round-trip form, so reading back gives the same bits.
pub fn write_model(graph: &SocialItemGraph, out: &mut impl Write) -> std::io::Result<()> {
    for e in graph.edges() {
        let line = ModelLine {
            sources: e.sources.iter().map(|s| to_pair(graph.node(*s))).collect(),
            dest: to_pair(graph.node(e.dest)),
            p: e.prob,
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_model(graph: &SocialItemGraph, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    write_model(graph, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| HarnessError::io(path, e))
}

/// Parses a model. The node set is the union of hyperedge endpoints. A model
/// without hyperedges is rejected unless `allow_empty`.
pub fn read_model(reader: impl BufRead, label: &Path, allow_empty: bool) -> Result<SocialItemGraph> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let n = i as u64 + 1;
        let line = line.map_err(|e| HarnessError::io(label, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ModelLine =
            serde_json::from_str(&line).map_err(|e| HarnessError::parse(label, n, e.to_string()))?;
        if !(0.0..=1.0).contains(&parsed.p) {
            return Err(HarnessError::parse(label, n, format!("probability {} is outside [0, 1]", parsed.p)));
        }
        if parsed.sources.is_empty() {
            return Err(HarnessError::parse(label, n, "hyperedge has no sources"));
        }
        let sources: Vec<PurchaseNode> = parsed.sources.into_iter().map(to_node).collect();
        let dest = to_node(parsed.dest);
        if sources.contains(&dest) {
            return Err(HarnessError::parse(label, n, format!("destination {dest} is also a source")));
        }
        nodes.extend(sources.iter().cloned());
        nodes.push(dest.clone());
        edges.push(Hyperedge::new(sources, dest, parsed.p));
    }
    if edges.is_empty() && !allow_empty {
        return Err(HarnessError::parse(label, 0, "model has no hyperedges"));
    }
    Ok(build_graph(nodes, edges)?)
}

pub fn load_model(path: &Path, allow_empty: bool) -> Result<SocialItemGraph> {
    read_model(BufReader::new(open(path)?), path, allow_empty)
}

pub fn read_seed_set(reader: impl Read, label: &Path, graph: &SocialItemGraph) -> Result<Vec<NodeId>> {
    let mut seeds = Vec::new();
    each_row(reader, label, 2, |r, line| {
        let node = PurchaseNode::new(&r[0], &r[1]);
        let id = graph
            .node_id(&node)
            .ok_or_else(|| HarnessError::parse(label, line, format!("{node} is not a node of the model")))?;
        if !seeds.contains(&id) {
            seeds.push(id);
        }
        Ok(())
    })?;
    Ok(seeds)
}

/// Seed purchase actions, `user<TAB>item` per line, resolved against `graph`.
pub fn load_seed_set(path: &Path, graph: &SocialItemGraph) -> Result<Vec<NodeId>> {
    read_seed_set(open(path)?, path, graph)
}

pub fn save_seed_set(graph: &SocialItemGraph, seeds: &[NodeId], path: &Path) -> Result<()> {
    let mut out = create(path)?;
    seeds
        .iter()
        .try_for_each(|s| {
            let n = graph.node(*s);
            writeln!(out, "{}\t{}", n.user, n.item)
        })
        .and_then(|_| out.flush())
        .map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sigmax_core::instances::nine_edge_fan;

    fn label() -> &'static Path {
        Path::new("<test>")
    }

    fn line_of(err: HarnessError) -> u64 {
        match err {
            HarnessError::Parse { line, .. } => line,
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn social_graph_lines() {
        let g = read_social_graph("a\tb\n".as_bytes(), label()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(read_social_graph("".as_bytes(), label()).unwrap().edge_count(), 0);
        let g = read_social_graph("# c\n\na\tb\na\tb\n b \t c\n".as_bytes(), label()).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains_edge("b", "c"));
        assert_eq!(line_of(read_social_graph("a b c".as_bytes(), label()).unwrap_err()), 1);
        assert_eq!(line_of(read_social_graph("a\tb\nx\ty\tz\n".as_bytes(), label()).unwrap_err()), 2);
    }

    #[test]
    fn action_log_lines() {
        let log = read_action_log("u\ti\t20\nv\tj\t-5\n".as_bytes(), label()).unwrap();
        let times: Vec<i64> = log.records().iter().map(|a| a.time).collect();
        assert_eq!(times, [-5, 20]);
        assert_eq!(log.records()[0].node, PurchaseNode::new("v", "j"));
        let err = read_action_log("u\ti\t1\nu\ti\tsoon\n".as_bytes(), label()).unwrap_err();
        assert_eq!(line_of(err), 2);
    }

    #[test]
    fn model_round_trip_is_exact() {
        let (g, _) = nine_edge_fan();
        let g = g.retain_edges(|_| true);
        let mut buf = Vec::new();
        write_model(&g, &mut buf).unwrap();
        let back = read_model(buf.as_slice(), label(), false).unwrap();
        assert_eq!(back.nodes(), g.nodes());
        assert_eq!(back.edges(), g.edges());

        let tricky = build_graph(
            [PurchaseNode::new("a", "x"), PurchaseNode::new("b", "y")],
            [Hyperedge::new(vec![PurchaseNode::new("a", "x")], PurchaseNode::new("b", "y"), 0.1 + 0.2)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_model(&tricky, &mut buf).unwrap();
        let back = read_model(buf.as_slice(), label(), false).unwrap();
        assert_eq!(back.edge(0).prob.to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn model_rejections() {
        let bad_p = r#"{"sources":[["a","x"]],"dest":["b","y"],"p":1.5}"#;
        assert_eq!(line_of(read_model(bad_p.as_bytes(), label(), false).unwrap_err()), 1);
        let no_src = "\n{\"sources\":[],\"dest\":[\"b\",\"y\"],\"p\":0.5}";
        assert_eq!(line_of(read_model(no_src.as_bytes(), label(), false).unwrap_err()), 2);
        assert!(read_model("{not json".as_bytes(), label(), false).is_err());
        assert!(read_model("".as_bytes(), label(), false).is_err());
        assert_eq!(read_model("".as_bytes(), label(), true).unwrap().edge_count(), 0);
    }

    #[test]
    fn seed_sets_resolve() {
        let (g, v) = nine_edge_fan();
        let seeds = read_seed_set("v2\titem\nv1\titem\nv2\titem\n".as_bytes(), label(), &g).unwrap();
        assert_eq!(seeds, [v[1], v[0]]);
        assert_eq!(line_of(read_seed_set("v9\titem\n".as_bytes(), label(), &g).unwrap_err()), 1);
    }
}
