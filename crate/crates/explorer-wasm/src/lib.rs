//! WebAssembly bindings for the mutation explorer page in `www/`.
//!
//! Every export takes and returns JSON text in the document format, so the
//! page keeps its own undo stack as a list of documents.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;
use wasm_bindgen::prelude::*;

use cyforge_core::document::{DocumentError, QpDocument};
use cyforge_core::jacobian::jacobian_dims;
use cyforge_core::mutation::{premutate, reduce_trivial};
use cyforge_core::Error;

/// Largest truncation the page may ask for.
pub const MAX_LEN: usize = 10;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Engine(#[from] Error),
}

impl DemoError {
    pub fn code(&self) -> &'static str {
        match self {
            DemoError::Document(DocumentError::Parse { .. }) => "ParseError",
            DemoError::Document(DocumentError::Invalid { source, .. }) => source.code(),
            DemoError::Engine(e) => e.code(),
        }
    }
}

fn js_error(e: DemoError) -> JsError {
    JsError::new(&format!("{}: {e}", e.code()))
}

/// Mutates at `vertex` and returns the new document.
pub fn mutate_document(doc: &str, vertex: &str, reduce: bool) -> Result<String, DemoError> {
    let qp = QpDocument::parse(doc)?.qp()?;
    let v = qp.quiver().vertex_by_name(vertex)?;
    let mut out = premutate(&qp, v)?;
    if reduce {
        out = reduce_trivial(&out)?.0;
    }
    Ok(QpDocument::from_qp(&out).emit())
}

#[derive(Debug, Serialize)]
pub struct JacobianTable {
    pub dims: Vec<usize>,
    pub total: usize,
    pub stabilized: bool,
}

pub fn jacobian_table(doc: &str, max_len: usize) -> Result<JacobianTable, DemoError> {
    if max_len > MAX_LEN {
        return Err(Error::UnsupportedArgument(format!("max_len is capped at {MAX_LEN}")).into());
    }
    let w = QpDocument::parse(doc)?.potential()?;
    let j = jacobian_dims(&w, max_len);
    Ok(JacobianTable {
        total: j.total(),
        dims: j.dims,
        stabilized: j.stabilized,
    })
}

#[derive(Debug, Serialize)]
pub struct NodeLayout {
    pub name: String,
    pub x: f64,
    pub y: f64,
    /// Mutation is refused at vertices carrying a loop.
    pub blocked: bool,
}

#[derive(Debug, Serialize)]
pub struct EdgeLayout {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    /// Signed offset separating parallel arrows, or the loop index.
    pub bend: i32,
}

#[derive(Debug, Serialize)]
pub struct Layout {
    pub nodes: Vec<NodeLayout>,
    pub edges: Vec<EdgeLayout>,
    pub potential: Vec<String>,
}

/// Vertices evenly on a circle in document order, starting at the top.
/// Parallel arrows get alternating bends so each one is visible.
pub fn layout_document(doc: &str) -> Result<Layout, DemoError> {
    let parsed = QpDocument::parse(doc)?;
    let w = parsed.potential()?;
    let q = w.quiver();
    let n = q.vertex_count();
    let radius = if n <= 1 { 0.0 } else { 0.38 };
    let nodes = q
        .vertex_ids()
        .map(|v| {
            let angle = 2.0 * PI * v.index() as f64 / n.max(1) as f64 - PI / 2.0;
            NodeLayout {
                name: q.vertex_name(v).to_string(),
                x: 0.5 + radius * angle.cos(),
                y: 0.5 + radius * angle.sin(),
                blocked: q.arrows_out_of(v).any(|a| q.arrow(a).is_loop()),
            }
        })
        .collect();

    let mut seen: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    let edges = q
        .arrows()
        .iter()
        .map(|a| {
            let (s, t) = (a.source.index(), a.target.index());
            let slot = seen.entry((s.min(t), s.max(t))).or_insert(0);
            let k = *slot;
            *slot += 1;
            let bend = if s == t {
                k
            } else {
                // 0, 1, -1, 2, -2, … measured in the direction min → max.
                let magnitude = (k + 1) / 2;
                let signed = if k % 2 == 1 { magnitude } else { -magnitude };
                if s < t { signed } else { -signed }
            };
            EdgeLayout {
                name: a.name.clone(),
                source: s,
                target: t,
                degree: a.degree,
                bend,
            }
        })
        .collect();
    let potential = w
        .rep()
        .terms()
        .map(|(p, c)| format!("{} · {}", cyforge_core::algebra::format_rational(c), p.display(q)))
        .collect();
    Ok(Layout { nodes, edges, potential })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("layout types serialize")
}

#[wasm_bindgen]
pub fn mutate(doc: &str, vertex: &str, reduce: bool) -> Result<String, JsError> {
    mutate_document(doc, vertex, reduce).map_err(js_error)
}

#[wasm_bindgen]
pub fn jacobian(doc: &str, max_len: usize) -> Result<String, JsError> {
    jacobian_table(doc, max_len).map(|t| to_json(&t)).map_err(js_error)
}

#[wasm_bindgen]
pub fn layout(doc: &str) -> Result<String, JsError> {
    layout_document(doc).map(|l| to_json(&l)).map_err(js_error)
}
