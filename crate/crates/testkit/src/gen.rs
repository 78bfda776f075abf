use std::sync::Arc;

use cyforge_core::algebra::{ratio, ArrowId, GradedQuiver, NcPoly, Path, Rational, VertexId};
use cyforge_core::mutation::QuiverWithPotential;
use cyforge_core::potential::{canonicalize, Potential};
use rand::seq::SliceRandom;
use rand::Rng;

/// A term as generated: coefficient and arrow indices in written order.
pub type RawTerm = (Rational, Vec<usize>);

pub fn coefficient(rng: &mut impl Rng) -> Rational {
    let mut p = rng.gen_range(-5i64..=4);
    if p >= 0 {
        p += 1;
    }
    ratio(p, rng.gen_range(1..=4))
}

/// Vertices `1..=v` and arrows `a0, a1, …` with uniformly random ends.
/// `degrees` gives the range arrow degrees are drawn from.
pub fn quiver(rng: &mut impl Rng, vertices: usize, arrows: usize, degrees: (i64, i64)) -> Arc<GradedQuiver> {
    let mut q = GradedQuiver::new();
    let vs: Vec<VertexId> = (1..=vertices).map(|k| q.add_vertex(k.to_string()).unwrap()).collect();
    for k in 0..arrows {
        let s = *vs.choose(rng).unwrap();
        let t = *vs.choose(rng).unwrap();
        let d = rng.gen_range(degrees.0..=degrees.1);
        q.add_arrow(format!("a{k}"), s, t, d).unwrap();
    }
    Arc::new(q)
}

/// An ungraded quiver with `1..=max_vertices` vertices and `0..=max_arrows`
/// arrows, biased towards having cycles by adding a few back edges.
pub fn ungraded_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Arc<GradedQuiver> {
    let v = rng.gen_range(1..=max_vertices);
    let a = rng.gen_range(1..=max_arrows);
    quiver(rng, v, a, (0, 0))
}

/// Tries to draw a cycle of length `len` by a random walk, closing it with an
/// arrow back to the start. Returned in written order.
pub fn cycle(rng: &mut impl Rng, q: &GradedQuiver, len: usize) -> Option<Vec<usize>> {
    if q.arrow_count() == 0 || len == 0 {
        return None;
    }
    for _ in 0..20 {
        let start = VertexId(rng.gen_range(0..q.vertex_count()) as u32);
        let mut at = start;
        let mut walk = Vec::new();
        for step in 0..len {
            let last = step + 1 == len;
            let options: Vec<ArrowId> = q
                .arrows_out_of(at)
                .filter(|&a| !last || q.arrow(a).target == start)
                .collect();
            let Some(&a) = options.choose(rng) else { break };
            walk.push(a.index());
            at = q.arrow(a).target;
        }
        if walk.len() == len && at == start {
            // The walk lists arrows in the order they are traversed.
            walk.reverse();
            return Some(walk);
        }
    }
    None
}

/// Up to `max_terms` random cycles with lengths in `lens`. With
/// `homogeneous`, only cycles of the first cycle's degree are kept.
pub fn potential_terms(
    rng: &mut impl Rng,
    q: &GradedQuiver,
    lens: (usize, usize),
    max_terms: usize,
    homogeneous: bool,
) -> Vec<RawTerm> {
    let mut out: Vec<RawTerm> = Vec::new();
    let mut degree = None;
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(lens.0..=lens.1);
        let Some(word) = cycle(rng, q, len) else { continue };
        let d: i64 = word.iter().map(|&a| q.degree(ArrowId(a as u32))).sum();
        if homogeneous && *degree.get_or_insert(d) != d {
            continue;
        }
        out.push((coefficient(rng), word));
    }
    out
}

pub fn path(q: &GradedQuiver, word: &[usize]) -> Path {
    let ids: Vec<ArrowId> = word.iter().map(|&a| ArrowId(a as u32)).collect();
    Path::from_arrows(q, &ids).expect("generated words compose")
}

pub fn poly(q: &GradedQuiver, terms: &[RawTerm]) -> NcPoly {
    let mut f = NcPoly::zero();
    for (c, w) in terms {
        f.add_term(path(q, w), c.clone());
    }
    f
}

/// A random ungraded quiver with potential, together with the raw terms the
/// potential was built from.
#[derive(Clone, Debug)]
pub struct RandomQp {
    pub qp: QuiverWithPotential,
    pub terms: Vec<RawTerm>,
}

pub fn qp(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize, lens: (usize, usize)) -> RandomQp {
    let q = ungraded_quiver(rng, max_vertices, max_arrows);
    let terms = potential_terms(rng, &q, lens, 4, false);
    let qp = QuiverWithPotential::from_poly(q.clone(), &poly(&q, &terms)).expect("cycles over an ungraded quiver");
    RandomQp { qp, terms }
}

/// A homogeneous potential over a random graded quiver.
pub fn graded_potential(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize, max_len: usize) -> Potential {
    let v = rng.gen_range(1..=max_vertices);
    let a = rng.gen_range(1..=max_arrows);
    let q = quiver(rng, v, a, (-2, 2));
    let terms = potential_terms(rng, &q, (1, max_len), 4, true);
    canonicalize(&q, &poly(&q, &terms)).expect("homogeneous cycles")
}

/// A random combination of arbitrary paths (not necessarily cycles).
pub fn any_poly(rng: &mut impl Rng, q: &GradedQuiver, max_len: usize, max_terms: usize) -> NcPoly {
    let mut f = NcPoly::zero();
    for _ in 0..rng.gen_range(0..=max_terms) {
        let start = VertexId(rng.gen_range(0..q.vertex_count()) as u32);
        let mut p = Path::trivial(start);
        for _ in 0..rng.gen_range(0..=max_len) {
            let options: Vec<ArrowId> = q.arrows_out_of(p.target()).collect();
            let Some(&a) = options.choose(rng) else { break };
            p = Path::arrow(q, a).compose(&p).expect("arrow leaves the target");
        }
        f.add_term(p, coefficient(rng));
    }
    f
}

/// Like [`any_poly`] but keeping only terms of the first term's degree.
pub fn homogeneous_poly(rng: &mut impl Rng, q: &GradedQuiver, max_len: usize, max_terms: usize) -> NcPoly {
    let f = any_poly(rng, q, max_len, max_terms);
    let Some(d) = f.terms().next().map(|(p, _)| p.degree()) else { return f };
    f.filter(|p| p.degree() == d)
}
