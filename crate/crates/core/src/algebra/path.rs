use std::cmp::Ordering;
use std::fmt;

use super::quiver::{ArrowId, GradedQuiver, VertexId};
use crate::error::{Error, Result};

/// A path in a quiver, stored function-style: `[v_1, ..., v_n]` with `v_n`
/// applied first, so `source = source(v_n)` and `target = target(v_1)`.
/// The empty arrow list is the trivial path at `source == target`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    arrows: Vec<ArrowId>,
    source: VertexId,
    target: VertexId,
    degree: i64,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            arrows: Vec::new(),
            source: v,
            target: v,
            degree: 0,
        }
    }

    pub fn arrow(q: &GradedQuiver, a: ArrowId) -> Self {
        let arr = q.arrow(a);
        Path {
            arrows: vec![a],
            source: arr.source,
            target: arr.target,
            degree: arr.degree,
        }
    }

    /// Builds the path `[v_1, ..., v_n]`, or `None` if consecutive arrows do not
    /// compose. An empty list has no endpoint and yields `None`.
    pub fn from_arrows(q: &GradedQuiver, arrows: &[ArrowId]) -> Option<Self> {
        let (&last, _) = arrows.split_last()?;
        let source = q.arrow(last).source;
        let target = q.arrow(arrows[0]).target;
        let mut degree = 0;
        for w in arrows.windows(2) {
            if q.arrow(w[0]).source != q.arrow(w[1]).target {
                return None;
            }
        }
        for &a in arrows {
            degree += q.degree(a);
        }
        Some(Path {
            arrows: arrows.to_vec(),
            source,
            target,
            degree,
        })
    }

    /// Like [`Path::from_arrows`] but returns the trivial path at `base` for an
    /// empty list.
    pub fn from_arrows_or_trivial(q: &GradedQuiver, arrows: &[ArrowId], base: VertexId) -> Option<Self> {
        if arrows.is_empty() {
            Some(Path::trivial(base))
        } else {
            Path::from_arrows(q, arrows)
        }
    }

    /// Resolves arrow names into a path.
    pub fn from_names(q: &GradedQuiver, names: &[&str]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| q.arrow_by_name(n))
            .collect::<Result<Vec<_>>>()?;
        Path::from_arrows(q, &ids)
            .ok_or_else(|| Error::NotComposable(names.iter().map(|s| s.to_string()).collect()))
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_cycle(&self) -> bool {
        self.source == self.target
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.arrows.contains(&a)
    }

    /// `self ∘ other`: defined iff `source(self) = target(other)`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + other.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            arrows,
            source: other.source,
            target: self.target,
            degree: self.degree + other.degree,
        })
    }

    /// The subpath made of arrows `range` (storage positions).
    pub fn slice(&self, q: &GradedQuiver, start: usize, end: usize) -> Path {
        if start == end {
            // Vertex between positions start-1 and start.
            let v = if start == 0 {
                self.target
            } else {
                q.arrow(self.arrows[start - 1]).source
            };
            return Path::trivial(v);
        }
        Path::from_arrows(q, &self.arrows[start..end]).expect("subpath of a path composes")
    }

    /// Rotates a cycle by moving its first `k` arrows to the end. The returned
    /// flag is true when the Koszul sign of the move is negative.
    pub fn rotate(&self, q: &GradedQuiver, k: usize) -> (Path, bool) {
        debug_assert!(self.is_cycle());
        let n = self.arrows.len();
        if n == 0 || k.is_multiple_of(n) {
            return (self.clone(), false);
        }
        let k = k % n;
        let front: i64 = self.arrows[..k].iter().map(|&a| q.degree(a)).sum();
        let back = self.degree - front;
        let mut arrows = Vec::with_capacity(n);
        arrows.extend_from_slice(&self.arrows[k..]);
        arrows.extend_from_slice(&self.arrows[..k]);
        let p = Path::from_arrows(q, &arrows).expect("rotation of a cycle composes");
        (p, (front * back).rem_euclid(2) == 1)
    }

    pub fn display<'a>(&'a self, q: &'a GradedQuiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver: q }
    }

    /// Arrow names in storage order.
    pub fn names(&self, q: &GradedQuiver) -> Vec<String> {
        self.arrows.iter().map(|&a| q.arrow_name(a).to_string()).collect()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e{}", self.source.0)
        } else {
            let ids: Vec<String> = self.arrows.iter().map(|a| a.0.to_string()).collect();
            write!(f, "<{}>", ids.join(" "))
        }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    quiver: &'a GradedQuiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_trivial() {
            write!(f, "e_{}", self.quiver.vertex_name(self.path.source))
        } else {
            write!(f, "{}", self.path.names(self.quiver).join("·"))
        }
    }
}
