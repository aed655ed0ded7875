//! Instance serialization and edge-list ingestion.
//!
//! Instances round-trip through a JSON document:
//!
//! ```json
//! {
//!   "name": "example",
//!   "nodes": [{"id": 0, "w_edge": 2.0, "w_cloud": 1.0, "transfer": 0.0, "pin": "free"}],
//!   "edges": [{"src": 0, "dst": 1, "l": [1.0, 4.0, 5.0, 0.0]}]
//! }
//! ```
//!
//! `w_cloud` also accepts the string `"inf"`, which pins the node to the
//! edge side. Schema problems are reported with a JSON pointer to the
//! offending element. Edge lists use the SNAP convention: one `u v` pair per
//! line, `#` starts a comment.

use crate::datagen::{draw_edge_cost, draw_node, draw_pins, GenConfig};
use crate::model::{EdgeCost, ModelError, NodeCost, Pin, TaskGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Serializes `g` into the instance JSON document.
pub fn instance_to_json(g: &TaskGraph) -> Value {
    let nodes: Vec<Value> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            serde_json::json!({
                "id": i,
                "w_edge": w.w_edge,
                "w_cloud": w.w_cloud,
                "transfer": w.transfer,
                "pin": match g.pin(i) { Pin::Free => "free", Pin::Edge => "edge", Pin::Cloud => "cloud" },
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            serde_json::json!({
                "src": e.src,
                "dst": e.dst,
                "l": [e.cost.ee, e.cost.ec, e.cost.ce, e.cost.cc],
            })
        })
        .collect();
    serde_json::json!({ "name": g.name(), "nodes": nodes, "edges": edges })
}

/// Writes the instance JSON to `path`.
pub fn save_instance(g: &TaskGraph, path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut file, &instance_to_json(g)).map_err(std::io::Error::from)?;
    writeln!(file)?;
    file.flush()?;
    Ok(())
}

fn get_f64(v: &Value, ptr: &str) -> Result<f64, IoError> {
    v.as_f64().ok_or_else(|| schema(ptr, "expected a number"))
}

fn get_usize(v: &Value, ptr: &str) -> Result<usize, IoError> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| schema(ptr, "expected a nonnegative integer"))
}

/// Parses the instance JSON document. Unknown top-level fields are ignored,
/// which lets callers attach metadata (reduction thresholds, provenance).
pub fn parse_instance(text: &str) -> Result<TaskGraph, IoError> {
    let v: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = v
        .as_object()
        .ok_or_else(|| schema("", "expected a JSON object"))?;

    let name = obj
        .get("name")
        .ok_or_else(|| schema("/name", "missing field"))?
        .as_str()
        .ok_or_else(|| schema("/name", "expected a string"))?
        .to_string();

    let nodes_v = obj
        .get("nodes")
        .ok_or_else(|| schema("/nodes", "missing field"))?
        .as_array()
        .ok_or_else(|| schema("/nodes", "expected an array"))?;
    let mut nodes = Vec::with_capacity(nodes_v.len());
    let mut pins = Vec::with_capacity(nodes_v.len());
    for (i, nv) in nodes_v.iter().enumerate() {
        let ptr = format!("/nodes/{i}");
        let no = nv
            .as_object()
            .ok_or_else(|| schema(&ptr, "expected an object"))?;
        let id = get_usize(
            no.get("id")
                .ok_or_else(|| schema(format!("{ptr}/id"), "missing field"))?,
            &format!("{ptr}/id"),
        )?;
        if id != i {
            return Err(schema(
                format!("{ptr}/id"),
                format!("ids must be dense and ordered; expected {i}, got {id}"),
            ));
        }
        let w_edge = get_f64(
            no.get("w_edge")
                .ok_or_else(|| schema(format!("{ptr}/w_edge"), "missing field"))?,
            &format!("{ptr}/w_edge"),
        )?;
        let w_cloud_v = no
            .get("w_cloud")
            .ok_or_else(|| schema(format!("{ptr}/w_cloud"), "missing field"))?;
        let w_cloud = match w_cloud_v {
            Value::String(s) if s == "inf" => f64::INFINITY,
            other => get_f64(other, &format!("{ptr}/w_cloud"))?,
        };
        let transfer = match no.get("transfer") {
            Some(t) => get_f64(t, &format!("{ptr}/transfer"))?,
            None => 0.0,
        };
        let pin = match no.get("pin") {
            None => Pin::Free,
            Some(Value::String(s)) => match s.as_str() {
                "free" => Pin::Free,
                "edge" => Pin::Edge,
                "cloud" => Pin::Cloud,
                other => {
                    return Err(schema(
                        format!("{ptr}/pin"),
                        format!("unknown pin '{other}'"),
                    ))
                }
            },
            Some(_) => return Err(schema(format!("{ptr}/pin"), "expected a string")),
        };
        nodes.push(NodeCost::with_transfer(w_edge, w_cloud, transfer));
        pins.push(pin);
    }

    let edges_v = obj
        .get("edges")
        .ok_or_else(|| schema("/edges", "missing field"))?
        .as_array()
        .ok_or_else(|| schema("/edges", "expected an array"))?;
    let mut raw_edges = Vec::with_capacity(edges_v.len());
    for (i, ev) in edges_v.iter().enumerate() {
        let ptr = format!("/edges/{i}");
        let eo = ev
            .as_object()
            .ok_or_else(|| schema(&ptr, "expected an object"))?;
        let src = get_usize(
            eo.get("src")
                .ok_or_else(|| schema(format!("{ptr}/src"), "missing field"))?,
            &format!("{ptr}/src"),
        )?;
        let dst = get_usize(
            eo.get("dst")
                .ok_or_else(|| schema(format!("{ptr}/dst"), "missing field"))?,
            &format!("{ptr}/dst"),
        )?;
        let l = eo
            .get("l")
            .ok_or_else(|| schema(format!("{ptr}/l"), "missing field"))?
            .as_array()
            .ok_or_else(|| schema(format!("{ptr}/l"), "expected an array"))?;
        if l.len() != 4 {
            return Err(schema(
                format!("{ptr}/l"),
                "expected exactly four components",
            ));
        }
        let mut c = [0.0; 4];
        for (k, lv) in l.iter().enumerate() {
            c[k] = get_f64(lv, &format!("{ptr}/l/{k}"))?;
        }
        raw_edges.push((src, dst, EdgeCost::new(c[0], c[1], c[2], c[3])));
    }

    Ok(TaskGraph::build(name, nodes, raw_edges, pins)?)
}

/// Loads an instance JSON file.
pub fn load_instance(path: impl AsRef<Path>) -> Result<TaskGraph, IoError> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

/// Reads a whitespace edge list: one `u v` pair per line, `#` comments and
/// blank lines skipped, extra columns ignored. Returns pairs in file order.
pub fn read_edge_list(reader: impl BufRead) -> Result<Vec<(u64, u64)>, IoError> {
    let mut pairs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64, IoError> {
            let tok = tok.ok_or(IoError::Parse {
                line: lineno + 1,
                message: "expected two node ids".into(),
            })?;
            tok.parse::<u64>().map_err(|e| IoError::Parse {
                line: lineno + 1,
                message: format!("bad node id '{tok}': {e}"),
            })
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Reads an edge-list file. See [`read_edge_list`].
pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Vec<(u64, u64)>, IoError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    read_edge_list(file)
}

/// Imports a SNAP-style edge list: keeps the first `take_nodes` distinct
/// node ids in file order, induces the subgraph on them (each source line
/// becomes one directed edge, duplicates merge by cost summation), and
/// synthesizes node and edge costs from `cfg`.
pub fn load_snap(
    path: impl AsRef<Path>,
    take_nodes: usize,
    cfg: &GenConfig,
) -> Result<TaskGraph, IoError> {
    let path = path.as_ref();
    let pairs = read_edge_list_file(path)?;

    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut order: Vec<u64> = Vec::new();
    for &(u, v) in &pairs {
        for id in [u, v] {
            if index.len() < take_nodes && !index.contains_key(&id) {
                index.insert(id, order.len());
                order.push(id);
            }
        }
        if index.len() >= take_nodes {
            // Keep scanning lines for induced edges, but stop adding nodes.
            break;
        }
    }
    // Second pass over all pairs for the induced edges (edges between kept
    // nodes can appear after the node budget filled up).
    let kept_edges: Vec<(usize, usize)> = pairs
        .iter()
        .filter_map(|&(u, v)| match (index.get(&u), index.get(&v)) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        })
        .collect();

    let n = order.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nodes: Vec<NodeCost> = (0..n).map(|_| draw_node(cfg, &mut rng)).collect();
    let pins = draw_pins(cfg, &mut rng, n);
    let raw_edges: Vec<(usize, usize, EdgeCost)> = kept_edges
        .into_iter()
        .map(|(a, b)| (a, b, draw_edge_cost(cfg, &mut rng)))
        .collect();

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snap".into());
    let name = format!("{stem}-n{n}");
    Ok(TaskGraph::build(name, nodes, raw_edges, pins)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn round_trip_two_node() {
        let g = two_node_graph();
        let json = instance_to_json(&g).to_string();
        let back = parse_instance(&json).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn round_trip_preserves_pins() {
        let g = two_node_graph_pinned();
        let json = instance_to_json(&g).to_string();
        let back = parse_instance(&json).unwrap();
        assert_eq!(g, back);
        assert_eq!(back.pin(1), Pin::Edge);
    }

    #[test]
    fn round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let g = homogeneous_two_node_graph();
        save_instance(&g, &path).unwrap();
        let back = load_instance(&path).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn missing_edges_field_reports_pointer() {
        let err = parse_instance(r#"{"name": "x", "nodes": []}"#).unwrap_err();
        match err {
            IoError::Schema { pointer, .. } => assert_eq!(pointer, "/edges"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn bad_node_field_reports_pointer() {
        let text =
            r#"{"name": "x", "nodes": [{"id": 0, "w_edge": "oops", "w_cloud": 1}], "edges": []}"#;
        match parse_instance(text).unwrap_err() {
            IoError::Schema { pointer, .. } => assert_eq!(pointer, "/nodes/0/w_edge"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn inf_w_cloud_string_pins_to_edge() {
        let text =
            r#"{"name": "x", "nodes": [{"id": 0, "w_edge": 4, "w_cloud": "inf"}], "edges": []}"#;
        let g = parse_instance(text).unwrap();
        assert_eq!(g.pin(0), Pin::Edge);
        assert!(g.node(0).w_cloud.is_finite());
    }

    #[test]
    fn edge_list_parsing() {
        let text = "# comment\n0 1\n1 2\n\n2 0 extra tokens ignored\n";
        let pairs = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn edge_list_parse_error_carries_line_number() {
        let text = "0 1\nnot numbers\n";
        match read_edge_list(text.as_bytes()).unwrap_err() {
            IoError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn snap_take_nodes_induces_subgraph() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.txt");
        std::fs::write(&path, "# comment\n0 1\n1 2\n").unwrap();
        let cfg = GenConfig {
            seed: 1,
            ..GenConfig::default()
        };

        let g3 = load_snap(&path, 3, &cfg).unwrap();
        assert_eq!(g3.node_count(), 3);
        assert_eq!(g3.edge_count(), 2);

        let g2 = load_snap(&path, 2, &cfg).unwrap();
        assert_eq!(g2.node_count(), 2);
        assert_eq!(g2.edge_count(), 1);
    }

    #[test]
    fn snap_duplicate_lines_merge() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.txt");
        std::fs::write(&path, "0 1\n0 1\n").unwrap();
        let cfg = GenConfig {
            seed: 1,
            comm_range: (2.0, 2.0),
            ratio: Some([1.0, 1.0, 1.0, 1.0]),
            ..GenConfig::default()
        };
        let g = load_snap(&path, 2, &cfg).unwrap();
        assert_eq!(g.edge_count(), 1);
        // Two draws of the constant base 2.0 merge to 4.0 per component.
        assert_eq!(g.edges()[0].cost, EdgeCost::new(4.0, 4.0, 4.0, 4.0));
    }

    #[test]
    fn snap_keeps_later_edges_between_kept_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("late.txt");
        std::fs::write(&path, "0 1\n2 3\n1 0\n").unwrap();
        let cfg = GenConfig {
            seed: 1,
            ..GenConfig::default()
        };
        let g = load_snap(&path, 2, &cfg).unwrap();
        assert_eq!(g.node_count(), 2);
        // 0->1 and the later 1->0 both survive; 2/3 fall outside the budget.
        assert_eq!(g.edge_count(), 2);
    }
}
