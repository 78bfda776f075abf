use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a vertex inside its quiver (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Index of an arrow inside its quiver. The index order is the arrow total
/// order used for canonical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
    /// Cohomological degree.
    pub degree: i64,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A finite quiver with integer-graded arrows.
///
/// Quivers are built incrementally and then shared immutably (usually behind
/// an `Arc`). Paths refer to vertices and arrows by index, so a quiver that
/// only appends arrows keeps every existing path valid.
#[derive(Clone, Default)]
pub struct GradedQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for GradedQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for GradedQuiver {}

impl fmt::Debug for GradedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self
            .arrows
            .iter()
            .map(|a| {
                format!(
                    "{}:{}->{}[{}]",
                    a.name,
                    self.vertex_name(a.source),
                    self.vertex_name(a.target),
                    a.degree
                )
            })
            .collect();
        f.debug_struct("GradedQuiver")
            .field("vertices", &self.vertices)
            .field("arrows", &arrows)
            .finish()
    }
}

impl GradedQuiver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a quiver from vertex names and `(name, source, target, degree)`
    /// arrow records.
    pub fn from_parts<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String, i64)>,
    {
        let mut q = Self::new();
        for v in vertices {
            q.add_vertex(v)?;
        }
        for (name, s, t, deg) in arrows {
            let s = q.vertex_by_name(&s)?;
            let t = q.vertex_by_name(&t)?;
            q.add_arrow(name, s, t, deg)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.vertex_index.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let id = VertexId(self.vertices.len() as u32);
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(name);
        Ok(id)
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: VertexId,
        target: VertexId,
        degree: i64,
    ) -> Result<ArrowId> {
        let name = name.into();
        if self.arrow_index.contains_key(&name) {
            return Err(Error::DuplicateArrow(name));
        }
        for v in [source, target] {
            if v.index() >= self.vertices.len() {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
        }
        let id = ArrowId(self.arrows.len() as u32);
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow {
            name,
            source,
            target,
            degree,
        });
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.index()]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.index()].name
    }

    pub fn degree(&self, a: ArrowId) -> i64 {
        self.arrows[a.index()].degree
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn has_arrow_named(&self, name: &str) -> bool {
        self.arrow_index.contains_key(name)
    }

    /// True when every arrow has degree zero.
    pub fn is_ungraded(&self) -> bool {
        self.arrows.iter().all(|a| a.degree == 0)
    }

    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |&a| self.arrow(a).target == v)
    }

    pub fn arrows_out_of(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |&a| self.arrow(a).source == v)
    }
}
