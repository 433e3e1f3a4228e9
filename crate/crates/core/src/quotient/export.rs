//! DOT, JSON and CSV renderings of a quotient graph. Output depends only on
//! the graph, so equal inputs give byte-identical files.

use std::fmt::Write;

use serde::Serialize;

use super::QuotientGraph;
use crate::error::{Error, Result};

/// Graphviz source: vertices labelled `order/label/valency`, ray edges
/// dashed, isolated vertices double-circled.
pub fn to_dot(q: &QuotientGraph) -> String {
    let mut out = String::from("graph quotient {\n");
    for v in &q.vertices {
        let shape = if v.isolated { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  v{} [label=\"{}/{}/{}\", shape={shape}, tooltip=\"{}\"];",
            v.index,
            v.order,
            v.label.name(),
            v.valency,
            v.rep
        );
    }
    for e in &q.edges {
        let (s, t) = (&q.vertices[e.source], &q.vertices[e.target]);
        let on_ray = matches!((s.ray_id, t.ray_id), (Some(a), Some(b)) if a == b);
        let style = if on_ray { "dashed" } else { "solid" };
        let _ = writeln!(out, "  v{} -- v{} [label=\"{}\", style={style}];", e.source, e.target, e.edge_order);
    }
    out.push_str("}\n");
    out
}

/// Pretty JSON of the whole graph.
pub fn to_json(q: &QuotientGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(q)? + "\n")
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: usize,
    rep: String,
    depth: usize,
    order: u128,
    label: &'a str,
    #[serde(rename = "dimV")]
    dim_v: Option<u32>,
    inferred: bool,
    valency: usize,
    isolated: bool,
    orbit_sizes: String,
    boundary: bool,
    ray_id: Option<usize>,
}

/// One row per quotient vertex.
pub fn to_csv(q: &QuotientGraph) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for v in &q.vertices {
        let sizes: Vec<String> = v.orbit_sizes.iter().map(usize::to_string).collect();
        w.serialize(CsvRow {
            index: v.index,
            rep: v.rep.to_string(),
            depth: v.depth,
            order: v.order,
            label: v.label.name(),
            dim_v: v.dim_v,
            inferred: v.inferred,
            valency: v.valency,
            isolated: v.isolated,
            orbit_sizes: sizes.join(" "),
            boundary: v.boundary,
            ray_id: v.ray_id,
        })
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}
