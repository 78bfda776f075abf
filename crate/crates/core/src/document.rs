//! The JSON document format for quivers, potentials and dg structures, and
//! DOT export.
//!
//! ```json
//! {
//!   "vertices": ["1"],
//!   "arrows": [{"name": "x", "source": "1", "target": "1", "degree": 0}],
//!   "potential": [{"coef": "1/2", "path": ["x", "x", "x"]}]
//! }
//! ```
//!
//! A path lists arrow names left to right as written, so `["a", "b"]` is
//! `a·b`, which follows `b` first. Optional fields `n` and `differential`
//! (one record `{arrow, terms}` per generator with nonzero image) describe a
//! dg tensor algebra, as produced by the `ginzburg` command.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, GradedQuiver, NcPoly, Path};
use crate::completion::GinzburgAlgebra;
use crate::dg::{DgTensorAlgebra, Differential};
use crate::error::Error;
use crate::mutation::QuiverWithPotential;
use crate::potential::{canonicalize, Potential};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coef: String,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialRecord {
    pub arrow: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpDocument {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    #[serde(default)]
    pub potential: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {source}")]
    Invalid {
        field: String,
        #[source]
        source: Error,
    },
}

impl DocumentError {
    /// The underlying engine error, if this is a validation failure.
    pub fn engine_error(&self) -> Option<&Error> {
        match self {
            DocumentError::Parse { .. } => None,
            DocumentError::Invalid { source, .. } => Some(source),
        }
    }
}

fn invalid(field: impl Into<String>) -> impl FnOnce(Error) -> DocumentError {
    let field = field.into();
    move |source| DocumentError::Invalid { field, source }
}

fn read_terms(q: &GradedQuiver, terms: &[TermRecord], field: &str) -> Result<NcPoly, DocumentError> {
    let mut out = NcPoly::zero();
    for (i, t) in terms.iter().enumerate() {
        let c = parse_rational(&t.coef).ok_or_else(|| {
            invalid(format!("{field}[{i}].coef"))(Error::UnsupportedArgument(format!(
                "`{}` is not a rational number",
                t.coef
            )))
        })?;
        if t.path.is_empty() {
            return Err(invalid(format!("{field}[{i}].path"))(Error::UnsupportedArgument(
                "path is empty".into(),
            )));
        }
        let names: Vec<&str> = t.path.iter().map(String::as_str).collect();
        let p = Path::from_names(q, &names).map_err(invalid(format!("{field}[{i}].path")))?;
        out.add_term(p, c);
    }
    Ok(out)
}

fn write_terms(q: &GradedQuiver, f: &NcPoly) -> Vec<TermRecord> {
    f.terms()
        .map(|(p, c)| TermRecord {
            coef: format_rational(c),
            path: p.names(q),
        })
        .collect()
}

impl QpDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn quiver(&self) -> Result<Arc<GradedQuiver>, DocumentError> {
        let mut q = GradedQuiver::new();
        for (i, v) in self.vertices.iter().enumerate() {
            q.add_vertex(v.clone()).map_err(invalid(format!("vertices[{i}]")))?;
        }
        for (i, a) in self.arrows.iter().enumerate() {
            let s = q.vertex_by_name(&a.source).map_err(invalid(format!("arrows[{i}].source")))?;
            let t = q.vertex_by_name(&a.target).map_err(invalid(format!("arrows[{i}].target")))?;
            q.add_arrow(a.name.clone(), s, t, a.degree).map_err(invalid(format!("arrows[{i}].name")))?;
        }
        Ok(Arc::new(q))
    }

    pub fn potential_over(&self, q: &Arc<GradedQuiver>) -> Result<Potential, DocumentError> {
        let f = read_terms(q, &self.potential, "potential")?;
        let w = canonicalize(q, &f).map_err(invalid("potential"))?;
        if w.is_zero() {
            return Ok(Potential::zero(q.clone(), self.n.map_or(0, |n| 3 - n)));
        }
        Ok(w)
    }

    pub fn potential(&self) -> Result<Potential, DocumentError> {
        self.potential_over(&self.quiver()?)
    }

    /// An ungraded quiver with potential; the dg fields must be absent.
    pub fn qp(&self) -> Result<QuiverWithPotential, DocumentError> {
        if self.n.is_some() || !self.differential.is_empty() {
            return Err(invalid("differential")(Error::NotApplicable(
                "expected a quiver with potential, found a dg algebra document".into(),
            )));
        }
        QuiverWithPotential::new(self.potential()?).map_err(invalid("arrows"))
    }

    /// The dg tensor algebra described by `differential`, with `d²` checked.
    pub fn dga(&self) -> Result<DgTensorAlgebra, DocumentError> {
        let unchecked = self.dga_unchecked()?;
        DgTensorAlgebra::new(unchecked.quiver().clone(), unchecked.differential().clone())
            .map_err(invalid("differential"))
    }

    /// Like [`QpDocument::dga`] but only validates degrees and endpoints.
    pub fn dga_unchecked(&self) -> Result<DgTensorAlgebra, DocumentError> {
        let q = self.quiver()?;
        let mut d = Differential::zero();
        for (i, rec) in self.differential.iter().enumerate() {
            let a = q.arrow_by_name(&rec.arrow).map_err(invalid(format!("differential[{i}].arrow")))?;
            let image = read_terms(&q, &rec.terms, &format!("differential[{i}].terms"))?;
            d.set(a, image);
        }
        DgTensorAlgebra::new_unchecked(q, d).map_err(invalid("differential"))
    }

    pub fn from_quiver(q: &GradedQuiver) -> Self {
        QpDocument {
            vertices: q.vertex_names().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowRecord {
                    name: a.name.clone(),
                    source: q.vertex_name(a.source).to_string(),
                    target: q.vertex_name(a.target).to_string(),
                    degree: a.degree,
                })
                .collect(),
            ..QpDocument::default()
        }
    }

    pub fn from_potential(w: &Potential) -> Self {
        QpDocument {
            potential: write_terms(w.quiver(), w.rep()),
            ..QpDocument::from_quiver(w.quiver())
        }
    }

    pub fn from_qp(qp: &QuiverWithPotential) -> Self {
        QpDocument::from_potential(qp.potential())
    }

    pub fn from_dga(a: &DgTensorAlgebra) -> Self {
        let q = a.quiver();
        QpDocument {
            differential: a
                .differential()
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(&arrow, f)| DifferentialRecord {
                    arrow: q.arrow_name(arrow).to_string(),
                    terms: write_terms(q, f),
                })
                .collect(),
            ..QpDocument::from_quiver(q)
        }
    }

    /// The Ginzburg algebra over its extended quiver, with its total
    /// potential and every generator differential.
    pub fn from_ginzburg(g: &GinzburgAlgebra) -> Self {
        let total = &g.provenance().total_potential;
        QpDocument {
            potential: write_terms(g.quiver(), total.rep()),
            n: Some(g.n()),
            ..QpDocument::from_dga(g.dga())
        }
    }

    /// Parses and re-emits the content in canonical form.
    pub fn canonical(&self) -> Result<Self, DocumentError> {
        let q = self.quiver()?;
        let w = self.potential_over(&q)?;
        let mut out = QpDocument::from_potential(&w);
        if !self.differential.is_empty() {
            out.differential = QpDocument::from_dga(&self.dga()?).differential;
        }
        out.n = self.n;
        Ok(out)
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz description of a quiver. Arrow labels carry the degree when it is
/// nonzero; the potential, if any, becomes the graph label.
pub fn to_dot(q: &GradedQuiver, potential: Option<&Potential>) -> String {
    let mut out = String::from("digraph quiver {\n  rankdir=LR;\n  node [shape=circle];\n");
    for v in q.vertex_names() {
        writeln!(out, "  {};", dot_quote(v)).expect("write to string");
    }
    for a in q.arrows() {
        let label = if a.degree == 0 {
            a.name.clone()
        } else {
            format!("{} [{}]", a.name, a.degree)
        };
        writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_quote(q.vertex_name(a.source)),
            dot_quote(q.vertex_name(a.target)),
            dot_quote(&label)
        )
        .expect("write to string");
    }
    if let Some(w) = potential.filter(|w| !w.is_zero()) {
        writeln!(out, "  label={};", dot_quote(&format!("W = {}", w.rep().display(q)))).expect("write to string");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::three_loops_qp;

    const THREE_LOOPS: &str = r#"{
        "vertices": ["1"],
        "arrows": [
            {"name": "x", "source": "1", "target": "1", "degree": 0},
            {"name": "y", "source": "1", "target": "1", "degree": 0},
            {"name": "z", "source": "1", "target": "1", "degree": 0}
        ],
        "potential": [
            {"coef": "1", "path": ["x", "y", "z"]},
            {"coef": "-1", "path": ["x", "z", "y"]}
        ]
    }"#;

    #[test]
    fn three_loops_parses_to_catalog_entry() {
        let doc = QpDocument::parse(THREE_LOOPS).unwrap();
        assert_eq!(doc.qp().unwrap(), three_loops_qp());
    }

    #[test]
    fn minimal_document_has_zero_potential() {
        let doc = QpDocument::parse(r#"{"vertices":["v"],"arrows":[{"name":"t","source":"v","target":"v"}]}"#).unwrap();
        assert!(doc.qp().unwrap().potential().is_zero());
    }

    #[test]
    fn emit_parse_round_trip() {
        let doc = QpDocument::from_qp(&three_loops_qp());
        let again = QpDocument::parse(&doc.emit()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.canonical().unwrap(), doc);
    }

    #[test]
    fn rotations_canonicalize() {
        let text = THREE_LOOPS.replace(r#"["x", "y", "z"]"#, r#"["y", "z", "x"]"#);
        let doc = QpDocument::parse(&text).unwrap();
        assert_eq!(doc.canonical().unwrap(), QpDocument::from_qp(&three_loops_qp()));
    }

    #[test]
    fn syntax_errors_report_lines() {
        let err = QpDocument::parse("{\n  \"vertices\": [\"1\",\n}").unwrap_err();
        assert!(matches!(err, DocumentError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn non_composable_path_is_a_field_error() {
        let text = r#"{"vertices":["1","2"],"arrows":[{"name":"a","source":"1","target":"2"}],
            "potential":[{"coef":"1","path":["a","a"]}]}"#;
        let err = QpDocument::parse(text).unwrap().qp().unwrap_err();
        match err {
            DocumentError::Invalid { field, source } => {
                assert_eq!(field, "potential[0].path");
                assert!(matches!(source, Error::NotComposable(_)));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn dangling_arrow_and_non_cycle() {
        let text = r#"{"vertices":["1","2"],"arrows":[{"name":"a","source":"1","target":"3"}]}"#;
        let err = QpDocument::parse(text).unwrap().qp().unwrap_err();
        assert!(matches!(err, DocumentError::Invalid { ref field, .. } if field == "arrows[0].target"));
        let text = r#"{"vertices":["1","2"],"arrows":[{"name":"a","source":"1","target":"2"}],
            "potential":[{"coef":"1","path":["a"]}]}"#;
        let err = QpDocument::parse(text).unwrap().qp().unwrap_err();
        assert!(matches!(err.engine_error(), Some(Error::NonCycleTerm(_))));
    }

    #[test]
    fn ginzburg_document_round_trips_through_dga() {
        let qp = three_loops_qp();
        let g = crate::completion::ginzburg(qp.quiver(), qp.potential(), 3).unwrap();
        let doc = QpDocument::from_ginzburg(&g);
        let parsed = QpDocument::parse(&doc.emit()).unwrap();
        assert_eq!(parsed.dga().unwrap(), *g.dga());
        assert_eq!(parsed.canonical().unwrap(), doc);
    }

    #[test]
    fn dot_lists_arrows_with_degrees() {
        let qp = three_loops_qp();
        let g = crate::completion::ginzburg(qp.quiver(), qp.potential(), 3).unwrap();
        let dot = to_dot(g.quiver(), None);
        assert!(dot.contains(r#""1" -> "1" [label="x* [-1]"];"#));
        assert!(dot.contains(r#""1" -> "1" [label="x"];"#));
        assert!(dot.starts_with("digraph quiver {"));
    }
}
