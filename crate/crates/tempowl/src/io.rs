// SPDX-License-Identifier: Apache-2.0

//! File formats: JSON temporal graphs, JSON knowledge graphs, CSV edge events,
//! and the JSON shapes emitted by the command-line tool.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use tempowl_core::distinguish::{ClassMatrix, Verdict};
use tempowl_core::iso::IsoWitness;
use tempowl_core::rwl::Colouring;
use tempowl_core::tgnn::{EmbeddingState, ModelConfig};
use tempowl_core::tgraph::{validate, RawSnapshot, RawTemporalGraph};
use tempowl_core::{KnowledgeGraph, TemporalGraph, TimestampedNode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotJson {
    pub colours: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

/// `{"nodes":[..],"times":[..],"snapshots":[{"colours":{..},"edges":[[u,v],..]},..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemporalGraphJson {
    pub nodes: Vec<String>,
    pub times: Vec<i64>,
    pub snapshots: Vec<SnapshotJson>,
}

impl From<&TemporalGraph> for TemporalGraphJson {
    fn from(tg: &TemporalGraph) -> Self {
        let raw = tg.to_raw();
        Self {
            nodes: raw.nodes,
            times: raw.times,
            snapshots: raw
                .snapshots
                .into_iter()
                .map(|s| SnapshotJson {
                    colours: s.colours,
                    edges: s.edges,
                })
                .collect(),
        }
    }
}

impl TemporalGraphJson {
    pub fn into_raw(self) -> RawTemporalGraph {
        RawTemporalGraph {
            nodes: self.nodes,
            times: self.times,
            snapshots: self
                .snapshots
                .into_iter()
                .map(|s| RawSnapshot {
                    colours: s.colours,
                    edges: s.edges,
                })
                .collect(),
        }
    }
}

/// Reads `path`, or standard input when `path` is `-`.
pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn parse_graph(text: &str) -> Result<RawTemporalGraph> {
    let json: TemporalGraphJson = serde_json::from_str(text).context("parsing temporal graph JSON")?;
    Ok(json.into_raw())
}

pub fn load_graph(path: &Path) -> Result<TemporalGraph> {
    let raw = parse_graph(&read_input(path)?)?;
    validate(&raw).with_context(|| format!("invalid temporal graph in {}", path.display()))
}

pub fn graph_to_json(tg: &TemporalGraph) -> String {
    serde_json::to_string(&TemporalGraphJson::from(tg)).expect("graph serialises")
}

/// `(node, time index)` as a JSON pair.
pub type NodeRef = (String, usize);

/// `{"nodes":[["a",0],..],"colours":{"a#0":..},"edges":[[r,["a",0],["b",1]],..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeGraphJson {
    pub nodes: Vec<NodeRef>,
    pub colours: BTreeMap<String, String>,
    pub edges: Vec<(i64, NodeRef, NodeRef)>,
}

impl From<&KnowledgeGraph> for KnowledgeGraphJson {
    fn from(kg: &KnowledgeGraph) -> Self {
        let pair = |tn: &TimestampedNode| (tn.node.clone(), tn.time_index);
        Self {
            nodes: kg.nodes().iter().map(pair).collect(),
            colours: kg
                .nodes()
                .iter()
                .zip(kg.colours())
                .map(|(tn, c)| (tn.to_string(), c.clone()))
                .collect(),
            edges: kg
                .edges()
                .iter()
                .map(|e| (e.relation, pair(&kg.nodes()[e.source]), pair(&kg.nodes()[e.target])))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct EventRow {
    u: String,
    v: String,
    t: i64,
}

/// Reads `u,v,t` edge events (header required).
pub fn parse_events<R: Read>(reader: R) -> Result<Vec<(String, String, i64)>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().context("reading CSV header")?.clone();
    if headers.iter().collect::<Vec<_>>() != ["u", "v", "t"] {
        bail!(
            "expected CSV header `u,v,t`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    rdr.deserialize::<EventRow>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.with_context(|| format!("CSV record {}", i + 1))?;
            Ok((row.u, row.v, row.t))
        })
        .collect()
}

pub fn load_events(path: &Path) -> Result<Vec<(String, String, i64)>> {
    parse_events(read_input(path)?.as_bytes())
}

/// Parses `node@timestamp` (resolved against the graph's times) or `node#index`.
pub fn parse_node(tg: &TemporalGraph, spec: &str) -> Result<TimestampedNode> {
    let node = if let Some((node, time)) = spec.rsplit_once('@') {
        let t: i64 = time.parse().with_context(|| format!("bad timestamp in `{spec}`"))?;
        let i = tg
            .time_index_of(t)
            .with_context(|| format!("time {t} is not a time point of the graph"))?;
        TimestampedNode::new(node, i)
    } else if let Some((node, index)) = spec.rsplit_once('#') {
        let i: usize = index.parse().with_context(|| format!("bad time index in `{spec}`"))?;
        TimestampedNode::new(node, i)
    } else {
        bail!("expected `node@time` or `node#index`, got `{spec}`");
    };
    tg.locate(&node)?;
    Ok(node)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub distinguishable: bool,
    pub first_layer: Option<usize>,
    pub mode: &'static str,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        Self {
            distinguishable: v.distinguishable,
            first_layer: v.first_layer,
            mode: v.mode.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerPartition {
    pub layer: usize,
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionsJson {
    pub encoding: &'static str,
    pub nodes: usize,
    pub stable_at: Option<usize>,
    pub layers: Vec<LayerPartition>,
}

pub fn partitions_json(encoding: &'static str, kg: &KnowledgeGraph, colouring: &Colouring) -> PartitionsJson {
    let layers = (0..colouring.computed_layers())
        .map(|layer| LayerPartition {
            layer,
            classes: colouring
                .partition_at(layer)
                .expect("computed layer")
                .into_iter()
                .map(|class| class.into_iter().map(|v| kg.nodes()[v].to_string()).collect())
                .collect(),
        })
        .collect();
    PartitionsJson {
        encoding,
        nodes: kg.node_count(),
        stable_at: colouring.stable_at(),
        layers,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub kind: &'static str,
    pub maps: Vec<BTreeMap<String, String>>,
}

impl From<&IsoWitness> for WitnessJson {
    fn from(w: &IsoWitness) -> Self {
        Self {
            kind: w.kind.name(),
            maps: w.maps.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelJson {
    pub mode: &'static str,
    pub variant: &'static str,
    pub layers: usize,
    pub width: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingLayer {
    pub layer: usize,
    pub embeddings: BTreeMap<String, Vec<i128>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingsJson {
    pub model: ModelJson,
    pub layers: Vec<EmbeddingLayer>,
}

pub fn embeddings_json(cfg: &ModelConfig, state: &EmbeddingState) -> EmbeddingsJson {
    EmbeddingsJson {
        model: ModelJson {
            mode: cfg.mode.name(),
            variant: cfg.variant.name(),
            layers: cfg.layers,
            width: cfg.width,
            seed: cfg.seed,
        },
        layers: (0..state.layer_count())
            .map(|layer| EmbeddingLayer {
                layer,
                embeddings: state
                    .iter_layer(layer)
                    .map(|(tn, h)| (tn.to_string(), h.to_vec()))
                    .collect(),
            })
            .collect(),
    }
}

/// Classification matrix as CSV: a header row of column nodes, then one row
/// per row node, each cell a class name.
pub fn write_matrix_csv<W: std::io::Write>(matrix: &ClassMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::from("node")];
    header.extend(matrix.cols.iter().map(ToString::to_string));
    w.write_record(&header)?;
    for (r, row) in matrix.rows.iter().enumerate() {
        let mut record = vec![row.to_string()];
        record.extend((0..matrix.cols.len()).map(|c| matrix.get(r, c).name().to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempowl_core::gen::fixture;
    use tempowl_core::kgraph::k_glob;

    #[test]
    fn graph_json_round_trip() {
        let tg = fixture("fig2").unwrap().first().clone();
        let text = graph_to_json(&tg);
        assert_eq!(validate(&parse_graph(&text).unwrap()).unwrap(), tg);
    }

    #[test]
    fn graph_json_shape() {
        let text = r#"{"nodes":["a","b"],"times":[3,5],
            "snapshots":[{"colours":{"a":"x","b":"y"},"edges":[["a","b"]]},
                         {"colours":{"a":"x","b":"y"}}]}"#;
        let tg = validate(&parse_graph(text).unwrap()).unwrap();
        assert_eq!(tg.edge_count(), 1);
        assert!(parse_graph(r#"{"nodes":[],"times":[],"snapshots":[],"extra":1}"#).is_err());
    }

    #[test]
    fn events_csv() {
        let csv = "u,v,t\na,b,2\nb,c,3\na,c,4\nb,c,4\n";
        let events = parse_events(csv.as_bytes()).unwrap();
        assert_eq!(events.len(), 4);
        assert_eq!(events[3], ("b".into(), "c".into(), 4));
        assert!(parse_events("x,y,z\n".as_bytes()).is_err());
        assert!(parse_events("u,v,t\na,b,notanumber\n".as_bytes()).is_err());
    }

    #[test]
    fn node_addressing() {
        let tg = fixture("fig2").unwrap().first().clone();
        assert_eq!(parse_node(&tg, "b@4").unwrap(), TimestampedNode::new("b", 3));
        assert_eq!(parse_node(&tg, "b#3").unwrap(), TimestampedNode::new("b", 3));
        assert!(parse_node(&tg, "b@9").is_err());
        assert!(parse_node(&tg, "z#0").is_err());
        assert!(parse_node(&tg, "b").is_err());
    }

    #[test]
    fn kg_json_shape() {
        let tg = fixture("fig2").unwrap().first().clone();
        let json = serde_json::to_value(KnowledgeGraphJson::from(&k_glob(&tg))).unwrap();
        assert_eq!(json["nodes"][0], serde_json::json!(["a", 0]));
        assert_eq!(json["colours"]["a#0"], "blue");
        assert_eq!(json["edges"].as_array().unwrap().len(), 14);
    }
}
