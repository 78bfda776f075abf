//! Pre-mutation of quivers with potential, cancellation of trivial 2-cycles,
//! and deletion of vertices.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{rat, ArrowId, GradedQuiver, NcPoly, Path, VertexId};
use crate::error::{Error, Result};
use crate::potential::{canonicalize, Potential};

/// An ungraded quiver with a degree-0 potential in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    quiver: Arc<GradedQuiver>,
    potential: Potential,
}

impl QuiverWithPotential {
    pub fn new(potential: Potential) -> Result<Self> {
        let quiver = potential.quiver().clone();
        if let Some(a) = quiver.arrows().iter().find(|a| a.degree != 0) {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: a.degree,
            });
        }
        Ok(QuiverWithPotential { quiver, potential })
    }

    /// Canonicalizes `w` over `quiver`.
    pub fn from_poly(quiver: Arc<GradedQuiver>, w: &NcPoly) -> Result<Self> {
        Self::new(canonicalize(&quiver, w)?)
    }

    pub fn without_potential(quiver: Arc<GradedQuiver>) -> Result<Self> {
        Self::new(Potential::zero(quiver, 0))
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }
}

fn unique_name(q: &GradedQuiver, base: String) -> String {
    if !q.has_arrow_named(&base) {
        return base;
    }
    (2..)
        .map(|k| format!("{base}#{k}"))
        .find(|n| !q.has_arrow_named(n))
        .expect("some suffix is free")
}

/// Name of the composite arrow standing for `α∘β`.
pub fn composite_name(alpha: &str, beta: &str) -> String {
    format!("[{alpha}{beta}]")
}

/// Name of a reversed arrow.
pub fn reversed_name(name: &str) -> String {
    format!("{name}*")
}

/// Pre-mutation at `i`: a composite `[αβ]: l → j` for each pair `β: l → i`,
/// `α: i → j`; every arrow at `i` reversed; `W′ = [W] + Σ [αβ]·β*·α*`.
pub fn premutate(qp: &QuiverWithPotential, i: VertexId) -> Result<QuiverWithPotential> {
    let old = &*qp.quiver;
    if i.index() >= old.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", i.0)));
    }
    if old.arrows().iter().any(|a| a.source == i && a.target == i) {
        return Err(Error::LoopAtVertex(old.vertex_name(i).to_string()));
    }
    let incoming: Vec<ArrowId> = old.arrows_into(i).collect();
    let outgoing: Vec<ArrowId> = old.arrows_out_of(i).collect();

    let mut q = GradedQuiver::new();
    for name in old.vertex_names() {
        q.add_vertex(name.clone())?;
    }
    // Arrows keep their index; incident ones are reversed in place.
    for a in old.arrow_ids() {
        let arrow = old.arrow(a);
        if arrow.source == i || arrow.target == i {
            let name = unique_name(&q, reversed_name(&arrow.name));
            q.add_arrow(name, arrow.target, arrow.source, 0)?;
        } else {
            q.add_arrow(arrow.name.clone(), arrow.source, arrow.target, 0)?;
        }
    }
    let mut composite: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
    for &beta in &incoming {
        for &alpha in &outgoing {
            let name = unique_name(&q, composite_name(old.arrow_name(alpha), old.arrow_name(beta)));
            let id = q.add_arrow(name, old.arrow(beta).source, old.arrow(alpha).target, 0)?;
            composite.insert((alpha, beta), id);
        }
    }
    let q = Arc::new(q);

    let mut w = NcPoly::zero();
    for (p, c) in qp.potential.rep().terms() {
        let mut arrows = p.arrows().to_vec();
        if p.len() > 1 && p.source() == i {
            arrows.rotate_left(1);
        }
        let mut rewritten = Vec::with_capacity(arrows.len());
        let mut k = 0;
        while k < arrows.len() {
            if k + 1 < arrows.len() {
                if let Some(&id) = composite.get(&(arrows[k], arrows[k + 1])) {
                    if old.arrow(arrows[k]).source == i {
                        rewritten.push(id);
                        k += 2;
                        continue;
                    }
                }
            }
            rewritten.push(arrows[k]);
            k += 1;
        }
        let path = Path::from_arrows_or_trivial(&q, &rewritten, p.source())
            .expect("rewritten cycle composes in the mutated quiver");
        w.add_term(path, c.clone());
    }
    for (&(alpha, beta), &id) in &composite {
        let cycle = Path::from_arrows(&q, &[id, beta, alpha]).expect("[αβ]·β*·α* is a cycle");
        w.add_term(cycle, rat(1));
    }
    QuiverWithPotential::from_poly(q, &w)
}

/// Keeps the listed vertices and arrows and the terms of `w` that only use
/// kept arrows, renumbering everything.
fn restrict(
    qp: &QuiverWithPotential,
    keep_vertex: impl Fn(VertexId) -> bool,
    keep_arrow: impl Fn(ArrowId) -> bool,
    w: &NcPoly,
) -> Result<QuiverWithPotential> {
    let old = &*qp.quiver;
    let mut q = GradedQuiver::new();
    let mut vmap = BTreeMap::new();
    for v in old.vertex_ids().filter(|&v| keep_vertex(v)) {
        vmap.insert(v, q.add_vertex(old.vertex_name(v))?);
    }
    let mut amap = BTreeMap::new();
    for a in old.arrow_ids().filter(|&a| keep_arrow(a)) {
        let arrow = old.arrow(a);
        let id = q.add_arrow(arrow.name.clone(), vmap[&arrow.source], vmap[&arrow.target], 0)?;
        amap.insert(a, id);
    }
    let q = Arc::new(q);
    let mut out = NcPoly::zero();
    for (p, c) in w.terms() {
        if !p.arrows().iter().all(|a| amap.contains_key(a)) || !vmap.contains_key(&p.source()) {
            continue;
        }
        let arrows: Vec<ArrowId> = p.arrows().iter().map(|a| amap[a]).collect();
        let path = Path::from_arrows_or_trivial(&q, &arrows, vmap[&p.source()]).expect("restriction keeps paths");
        out.add_term(path, c.clone());
    }
    QuiverWithPotential::from_poly(q, &out)
}

/// Looks for a term `c·pq` (a 2-cycle of distinct arrows) where one arrow
/// (`free`) occurs nowhere else and every other term containing the partner
/// contains it exactly once and not `free`. Returns `(term, free, partner)`.
fn find_trivial_pair(w: &NcPoly) -> Option<(Path, ArrowId, ArrowId)> {
    let mut occurrences: HashMap<ArrowId, usize> = HashMap::new();
    for (p, _) in w.terms() {
        for &a in p.arrows() {
            *occurrences.entry(a).or_default() += 1;
        }
    }
    for (p, c) in w.terms() {
        if p.len() != 2 || c.is_zero() {
            continue;
        }
        let (x, y) = (p.arrows()[0], p.arrows()[1]);
        if x == y {
            continue;
        }
        for (free, partner) in [(x, y), (y, x)] {
            if occurrences[&free] != 1 {
                continue;
            }
            let partner_ok = w
                .terms()
                .filter(|(t, _)| *t != p && t.contains(partner))
                .all(|(t, _)| t.arrows().iter().filter(|&&a| a == partner).count() == 1 && !t.contains(free));
            if partner_ok {
                return Some((p.clone(), free, partner));
            }
        }
    }
    None
}

/// Repeatedly splits off trivial 2-cycles. For a term `c·ab` where `a` occurs
/// in no other term and `b` occurs exactly once in every other term that
/// contains it (and those terms avoid `a`), the substitution
/// `a ↦ a − (1/c)·Σ ∂_b(other terms)` turns `W` into `c·ab + rest`; the term
/// and both arrows are removed and the terms through `b` are dropped.
pub fn reduce_trivial(qp: &QuiverWithPotential) -> Result<(QuiverWithPotential, Vec<(String, String)>)> {
    let mut current = qp.clone();
    let mut removed = Vec::new();
    while let Some((term, free, partner)) = find_trivial_pair(current.potential.rep()) {
        let q = current.quiver.clone();
        removed.push((
            q.arrow_name(term.arrows()[0]).to_string(),
            q.arrow_name(term.arrows()[1]).to_string(),
        ));
        let rest = current.potential.rep().filter(|p| !p.contains(partner));
        current = restrict(&current, |_| true, |a| a != free && a != partner, &rest)?;
    }
    Ok((current, removed))
}

/// Removes `i`, its arrows, and every term of `W` passing through `i`.
pub fn delete_vertex(qp: &QuiverWithPotential, i: VertexId) -> Result<QuiverWithPotential> {
    let q = &*qp.quiver;
    if i.index() >= q.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", i.0)));
    }
    let keep_arrow = |a: ArrowId| {
        let arrow = q.arrow(a);
        arrow.source != i && arrow.target != i
    };
    restrict(qp, |v| v != i, keep_arrow, qp.potential.rep())
}

/// One recorded mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationStep {
    pub vertex: String,
    pub reduce: bool,
    pub removed: Vec<(String, String)>,
    pub result: QuiverWithPotential,
}

/// A starting QP and the mutations applied to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationHistory {
    initial: QuiverWithPotential,
    steps: Vec<MutationStep>,
}

fn mutate_by_name(qp: &QuiverWithPotential, vertex: &str, reduce: bool) -> Result<MutationStep> {
    let v = qp.quiver.vertex_by_name(vertex)?;
    let mutated = premutate(qp, v)?;
    let (result, removed) = if reduce {
        reduce_trivial(&mutated)?
    } else {
        (mutated, Vec::new())
    };
    Ok(MutationStep {
        vertex: vertex.to_string(),
        reduce,
        removed,
        result,
    })
}

impl MutationHistory {
    pub fn new(initial: QuiverWithPotential) -> Self {
        MutationHistory {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn initial(&self) -> &QuiverWithPotential {
        &self.initial
    }

    pub fn steps(&self) -> &[MutationStep] {
        &self.steps
    }

    pub fn current(&self) -> &QuiverWithPotential {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.initial)
    }

    /// Mutates the current QP at the named vertex, optionally reducing.
    pub fn apply(&mut self, vertex: &str, reduce: bool) -> Result<&QuiverWithPotential> {
        let step = mutate_by_name(self.current(), vertex, reduce)?;
        self.steps.push(step);
        Ok(self.current())
    }

    /// Drops the last step; returns false when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        self.steps.pop().is_some()
    }

    /// Recomputes every step from the initial QP.
    pub fn replay(&self) -> Result<QuiverWithPotential> {
        let mut qp = self.initial.clone();
        for step in &self.steps {
            qp = mutate_by_name(&qp, &step.vertex, step.reduce)?.result;
        }
        Ok(qp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{a3_qp, linear_a, three_cycle_qp, three_loops_qp};

    fn arrow_summary(qp: &QuiverWithPotential) -> Vec<(String, String, String)> {
        let q = qp.quiver();
        let mut out: Vec<_> = q
            .arrows()
            .iter()
            .map(|a| (a.name.clone(), q.vertex_name(a.source).to_string(), q.vertex_name(a.target).to_string()))
            .collect();
        out.sort();
        out
    }

    fn triple(name: &str, s: &str, t: &str) -> (String, String, String) {
        (name.into(), s.into(), t.into())
    }

    #[test]
    fn premutation_of_a3_at_middle_vertex() {
        let qp = a3_qp();
        let two = qp.quiver().vertex_by_name("2").unwrap();
        let m = premutate(&qp, two).unwrap();
        assert_eq!(
            arrow_summary(&m),
            vec![triple("[ab]", "3", "1"), triple("a*", "1", "2"), triple("b*", "2", "3")]
        );
        let q = m.quiver();
        let expected = canonicalize(q, &NcPoly::from_path(Path::from_names(q, &["[ab]", "b*", "a*"]).unwrap())).unwrap();
        assert_eq!(m.potential(), &expected);
    }

    #[test]
    fn double_premutation_reduces_to_a3() {
        let qp = a3_qp();
        let two = qp.quiver().vertex_by_name("2").unwrap();
        let once = premutate(&qp, two).unwrap();
        let twice = premutate(&once, two).unwrap();
        assert_eq!(twice.quiver().arrow_count(), 4);
        let (reduced, removed) = reduce_trivial(&twice).unwrap();
        assert_eq!(removed.len(), 1);
        assert_eq!(arrow_summary(&reduced), vec![triple("a**", "2", "1"), triple("b**", "3", "2")]);
        assert!(reduced.potential().is_zero());
    }

    #[test]
    fn loops_block_mutation() {
        let qp = three_loops_qp();
        let v = qp.quiver().vertex_by_name("1").unwrap();
        assert_eq!(premutate(&qp, v).unwrap_err(), Error::LoopAtVertex("1".into()));
    }

    #[test]
    fn deleting_a_vertex_of_the_three_cycle() {
        let qp = three_cycle_qp();
        let three = qp.quiver().vertex_by_name("3").unwrap();
        let d = delete_vertex(&qp, three).unwrap();
        assert_eq!(d.quiver().as_ref(), linear_a(2).as_ref());
        assert!(d.potential().is_zero());
    }

    #[test]
    fn history_undo_and_replay() {
        let mut h = MutationHistory::new(a3_qp());
        h.apply("2", false).unwrap();
        h.apply("1", true).unwrap();
        assert_eq!(h.replay().unwrap(), *h.current());
        assert!(h.undo());
        assert!(h.undo());
        assert!(!h.undo());
        assert_eq!(h.current(), &a3_qp());
        assert!(matches!(h.apply("9", false), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn composite_names_collide_with_suffix() {
        let mut q = GradedQuiver::new();
        let v: Vec<_> = ["1", "2", "3"].iter().map(|n| q.add_vertex(*n).unwrap()).collect();
        q.add_arrow("a", v[1], v[0], 0).unwrap();
        q.add_arrow("b", v[2], v[1], 0).unwrap();
        q.add_arrow("[ab]", v[2], v[0], 0).unwrap();
        let qp = QuiverWithPotential::without_potential(Arc::new(q)).unwrap();
        let m = premutate(&qp, v[1]).unwrap();
        assert!(m.quiver().has_arrow_named("[ab]#2"));
    }
}
