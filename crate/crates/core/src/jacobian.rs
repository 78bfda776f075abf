//! Length-truncated quotients `kQ / (relations)` and Jacobian algebras.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{GradedQuiver, NcPoly, Path, VertexId};
use crate::completion::GinzburgAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::potential::{cyclic_derivative, Potential};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedQuotient {
    pub max_len: usize,
    /// Dimension of the quotient in each path length `0..=max_len`.
    pub dims: Vec<usize>,
    /// Paths whose classes form a basis, per length.
    pub basis: Vec<Vec<Path>>,
    /// Conservative finite-dimensionality certificate.
    pub stabilized: bool,
    /// False when some relation mixes path lengths; `dims` are then the
    /// increments of the filtration by length, and `basis` is the set of
    /// surviving paths in the final truncation.
    pub length_homogeneous: bool,
}

impl TruncatedQuotient {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// All paths of length `0..=max_len`, sorted by the path order.
pub fn paths_up_to(q: &GradedQuiver, max_len: usize) -> Vec<Vec<Path>> {
    let mut out: Vec<Vec<Path>> = vec![q.vertex_ids().map(Path::trivial).collect()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for p in &out[len - 1] {
            for a in q.arrow_ids() {
                let arrow = Path::arrow(q, a);
                if len == 1 {
                    if arrow.source() == p.source() {
                        next.push(arrow);
                    }
                } else if let Some(ap) = arrow.compose(p) {
                    next.push(ap);
                }
            }
        }
        next.sort();
        next.dedup();
        out.push(next);
    }
    out
}

/// Paths of each length bucketed by source and by target.
struct PathIndex {
    by_source: Vec<HashMap<VertexId, Vec<Path>>>,
    by_target: Vec<HashMap<VertexId, Vec<Path>>>,
}

impl PathIndex {
    fn new(paths: &[Vec<Path>]) -> Self {
        let bucket = |f: fn(&Path) -> VertexId| {
            paths
                .iter()
                .map(|level| {
                    let mut m: HashMap<VertexId, Vec<Path>> = HashMap::new();
                    for p in level {
                        m.entry(f(p)).or_default().push(p.clone());
                    }
                    m
                })
                .collect()
        };
        PathIndex {
            by_source: bucket(Path::source),
            by_target: bucket(Path::target),
        }
    }

    fn starting_at(&self, len: usize, v: VertexId) -> &[Path] {
        self.by_source[len].get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    fn ending_at(&self, len: usize, v: VertexId) -> &[Path] {
        self.by_target[len].get(&v).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Relation `r` sandwiched as `p·r·u`.
fn sandwich(p: &Path, r: &NcPoly, u: &Path) -> Vec<(Path, crate::algebra::Rational)> {
    r.terms()
        .filter_map(|(t, c)| p.compose(t).and_then(|pt| pt.compose(u)).map(|x| (x, c.clone())))
        .collect()
}

/// Every `(p, u)` with `len(p) + len(u) = budget`, `source(p) = target(r)`
/// and `target(u) = source(r)`.
fn multipliers<'a>(
    index: &'a PathIndex,
    r_source: VertexId,
    r_target: VertexId,
    budget: usize,
) -> impl Iterator<Item = (&'a Path, &'a Path)> + 'a {
    (0..=budget).flat_map(move |i| {
        let lefts = index.starting_at(i, r_target);
        let rights = index.ending_at(budget - i, r_source);
        lefts.iter().flat_map(move |p| rights.iter().map(move |u| (p, u)))
    })
}

/// `kQ / (relations)` truncated at `max_len`, by exact linear algebra on the
/// spanning sets `{p·r·u}` of the ideal.
pub fn truncated_quotient(q: &GradedQuiver, relations: &[NcPoly], max_len: usize) -> TruncatedQuotient {
    let relations: Vec<&NcPoly> = relations.iter().filter(|r| !r.is_zero()).collect();
    let homogeneous = relations.iter().all(|r| r.min_len() == r.max_len());
    let paths = paths_up_to(q, max_len);
    let index = PathIndex::new(&paths);
    let (dims, basis) = if homogeneous {
        homogeneous_slices(&paths, &index, &relations, max_len)
    } else {
        filtered_slices(&paths, &index, &relations, max_len)
    };
    let min_rel = relations.iter().map(|r| r.min_len()).min();
    let max_rel = relations.iter().map(|r| r.max_len()).max().unwrap_or(0);
    let window = max_rel.max(2);
    let stabilized = min_rel.is_none_or(|m| m > 0)
        && dims.len() >= window
        && dims[dims.len() - window..].iter().all(|&d| d == 0);
    TruncatedQuotient {
        max_len,
        dims,
        basis,
        stabilized,
        length_homogeneous: homogeneous,
    }
}

fn homogeneous_slices(
    paths: &[Vec<Path>],
    index: &PathIndex,
    relations: &[&NcPoly],
    max_len: usize,
) -> (Vec<usize>, Vec<Vec<Path>>) {
    let slices: Vec<(usize, Vec<Path>)> = (0..=max_len)
        .into_par_iter()
        .map(|len| {
            let columns: HashMap<&Path, usize> = paths[len].iter().enumerate().map(|(i, p)| (p, i)).collect();
            let mut ech = Echelon::new();
            for r in relations {
                let m = r.max_len();
                if m > len {
                    continue;
                }
                let (first, _) = r.terms().next().expect("nonzero relation");
                for (p, u) in multipliers(index, first.source(), first.target(), len - m) {
                    let row: SparseVec = sandwich(p, r, u).into_iter().map(|(x, c)| (columns[&x], c)).collect();
                    ech.insert(row);
                }
            }
            let basis: Vec<Path> = paths[len]
                .iter()
                .enumerate()
                .filter(|(i, _)| !ech.is_pivot(*i))
                .map(|(_, p)| p.clone())
                .collect();
            (basis.len(), basis)
        })
        .collect();
    slices.into_iter().unzip()
}

fn filtered_slices(
    paths: &[Vec<Path>],
    index: &PathIndex,
    relations: &[&NcPoly],
    max_len: usize,
) -> (Vec<usize>, Vec<Vec<Path>>) {
    // Longest paths get the smallest column indices so that pivots sit on the
    // top-length part of each relation.
    let mut columns: HashMap<&Path, usize> = HashMap::new();
    let mut order: Vec<&Path> = Vec::new();
    for len in (0..=max_len).rev() {
        for p in &paths[len] {
            columns.insert(p, order.len());
            order.push(p);
        }
    }
    let mut ech = Echelon::new();
    let mut dims = Vec::new();
    let mut cumulative_prev = 0usize;
    let mut path_count = 0usize;
    for len in 0..=max_len {
        path_count += paths[len].len();
        for r in relations {
            let m = r.max_len();
            if m > len {
                continue;
            }
            let (first, _) = r.terms().next().expect("nonzero relation");
            for (p, u) in multipliers(index, first.source(), first.target(), len - m) {
                let row: SparseVec = sandwich(p, r, u).into_iter().map(|(x, c)| (columns[&x], c)).collect();
                ech.insert(row);
            }
        }
        let cumulative = path_count - ech.rank();
        dims.push(cumulative - cumulative_prev);
        cumulative_prev = cumulative;
    }
    let basis = (0..=max_len)
        .map(|len| paths[len].iter().filter(|p| !ech.is_pivot(columns[p])).cloned().collect())
        .collect();
    (dims, basis)
}

/// Jacobian algebra `kQ / (∂_a W)` of an ungraded quiver with potential.
pub fn jacobian_dims(w: &Potential, max_len: usize) -> TruncatedQuotient {
    let q = w.quiver();
    let relations: Vec<NcPoly> = q.arrow_ids().map(|a| cyclic_derivative(w, a)).collect();
    truncated_quotient(q, &relations, max_len)
}

/// `H⁰` of a 3-dimensional Ginzburg algebra over an ungraded quiver: the
/// quotient of `kQ` by the differentials of the dual arrows.
pub fn jacobian_quotient(g: &GinzburgAlgebra, max_len: usize) -> Result<TruncatedQuotient> {
    let ext = g.extended();
    let base = ext.base();
    if g.n() != 3 || !base.is_ungraded() || !g.provenance().input.has_zero_differential() {
        return Err(Error::NotApplicable(
            "jacobian_quotient needs a 3-dimensional Ginzburg algebra over an ungraded quiver".into(),
        ));
    }
    let relations: Vec<NcPoly> = ext.originals().map(|a| g.d_of(ext.dual(a))).collect();
    Ok(truncated_quotient(base, &relations, max_len))
}
