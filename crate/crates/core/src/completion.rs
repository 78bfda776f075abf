//! Extended quivers, Ginzburg dg algebras, deformed Calabi-Yau completions of
//! tensor dg algebras, the two-term presentation of the inverse dualizing
//! complex, and quivers with potential from algebras of global dimension ≤ 2.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{rat, sign, supercommutator, ArrowId, GradedQuiver, NcPoly, Path, Rational, VertexId};
use crate::dg::{DgTensorAlgebra, Differential};
use crate::error::{Error, Result};
use crate::potential::{canonicalize, cyclic_derivative, Potential};

/// What an arrow of an extended quiver stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowRole {
    Original(ArrowId),
    Dual(ArrowId),
    Loop(VertexId),
}

/// `Q ⊕ Q^∨[n−2] ⊕ R[n−1]`: the original arrows (same indices), then one dual
/// `a*: t → s` of degree `−|a| − (n−2)` per arrow `a: s → t`, then one loop
/// `c_x` of degree `1 − n` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedQuiver {
    base: Arc<GradedQuiver>,
    quiver: Arc<GradedQuiver>,
    n: i64,
    roles: Vec<ArrowRole>,
}

pub fn dual_name(name: &str) -> String {
    format!("{name}*")
}

pub fn loop_name(vertex: &str) -> String {
    format!("c_{vertex}")
}

pub fn extended_quiver(base: &Arc<GradedQuiver>, n: i64) -> Result<ExtendedQuiver> {
    let mut q = (**base).clone();
    let mut roles: Vec<ArrowRole> = base.arrow_ids().map(ArrowRole::Original).collect();
    let collide = |e: Error| match e {
        Error::DuplicateArrow(name) => Error::NameCollision(name),
        other => other,
    };
    for a in base.arrow_ids() {
        let arrow = base.arrow(a);
        q.add_arrow(dual_name(&arrow.name), arrow.target, arrow.source, -arrow.degree - (n - 2))
            .map_err(collide)?;
        roles.push(ArrowRole::Dual(a));
    }
    for v in base.vertex_ids() {
        q.add_arrow(loop_name(base.vertex_name(v)), v, v, 1 - n).map_err(collide)?;
        roles.push(ArrowRole::Loop(v));
    }
    Ok(ExtendedQuiver {
        base: base.clone(),
        quiver: Arc::new(q),
        n,
        roles,
    })
}

impl ExtendedQuiver {
    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn base(&self) -> &Arc<GradedQuiver> {
        &self.base
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn role(&self, a: ArrowId) -> ArrowRole {
        self.roles[a.index()]
    }

    pub fn dual(&self, a: ArrowId) -> ArrowId {
        ArrowId((self.base.arrow_count() + a.index()) as u32)
    }

    pub fn loop_at(&self, v: VertexId) -> ArrowId {
        ArrowId((2 * self.base.arrow_count() + v.index()) as u32)
    }

    pub fn originals(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.base.arrow_ids()
    }

    /// `Σ_a ε_a [a, a*]` cut down to vertex `x`, with `ε_a = (−1)^{|a|(n+1)}`.
    fn casimir_at(&self, x: VertexId) -> NcPoly {
        let q = &*self.quiver;
        let mut out = NcPoly::zero();
        for a in self.originals() {
            let arrow = q.arrow(a);
            if arrow.source != x && arrow.target != x {
                continue;
            }
            let da = self.dual(a);
            let bracket = supercommutator(
                &NcPoly::from_path(Path::arrow(q, a)),
                arrow.degree,
                &NcPoly::from_path(Path::arrow(q, da)),
                q.degree(da),
            )
            .filter(|p| p.source() == x);
            let eps = sign(arrow.degree * (self.n + 1));
            out += bracket.scale(&eps);
        }
        out
    }
}

/// Where a Ginzburg algebra came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// The dg algebra that was completed (zero differential for `ginzburg`).
    pub input: DgTensorAlgebra,
    /// The potential or deformation supplied by the caller, over the input quiver.
    pub potential: Potential,
    /// `W_A + W′` over the extended quiver; `W_A` vanishes for zero differentials.
    pub total_potential: Potential,
    pub n: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GinzburgAlgebra {
    extended: ExtendedQuiver,
    dga: DgTensorAlgebra,
    provenance: Provenance,
}

impl GinzburgAlgebra {
    pub fn extended(&self) -> &ExtendedQuiver {
        &self.extended
    }

    pub fn dga(&self) -> &DgTensorAlgebra {
        &self.dga
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        self.extended.quiver()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn n(&self) -> i64 {
        self.extended.n
    }

    pub fn d_of(&self, a: ArrowId) -> NcPoly {
        self.dga.d_of(a)
    }
}

fn check_potential_degree(w: &Potential, n: i64) -> Result<()> {
    if !w.is_zero() && w.degree() != 3 - n {
        return Err(Error::DegreeMismatch {
            expected: 3 - n,
            found: w.degree(),
        });
    }
    Ok(())
}

fn finish(extended: ExtendedQuiver, d: Differential, provenance: Provenance) -> Result<GinzburgAlgebra> {
    let dga = DgTensorAlgebra::new(extended.quiver.clone(), d)?;
    Ok(GinzburgAlgebra {
        extended,
        dga,
        provenance,
    })
}

/// `Γ_n(Q, W)`: `d(a) = 0`, `d(a*) = ∂_a W`,
/// `d(c_x) = (−1)^n e_x (Σ_a (−1)^{|a|(n+1)} [a, a*]) e_x`.
///
/// `W` must have cohomological degree `3 − n` (any degree when zero). For
/// ungraded quivers with `n ≠ 3` this means `W = 0`.
pub fn ginzburg(q: &Arc<GradedQuiver>, w: &Potential, n: i64) -> Result<GinzburgAlgebra> {
    if **w.quiver() != **q {
        return Err(Error::QuiverMismatch);
    }
    check_potential_degree(w, n)?;
    let extended = extended_quiver(q, n)?;
    let mut d = Differential::zero();
    for a in extended.originals() {
        d.set(extended.dual(a), cyclic_derivative(w, a));
    }
    for x in q.vertex_ids() {
        d.set(extended.loop_at(x), extended.casimir_at(x).scale(&sign(n)));
    }
    let total_potential = w.transport(extended.quiver())?;
    let provenance = Provenance {
        input: DgTensorAlgebra::with_zero_differential(q.clone()),
        potential: w.clone(),
        total_potential,
        n,
    };
    finish(extended, d, provenance)
}

/// `W_A = Σ_a (−1)^{|a|} a*·d(a)` over the extended quiver.
pub fn completion_potential(a: &DgTensorAlgebra, extended: &ExtendedQuiver) -> Result<Potential> {
    let q = extended.quiver();
    let mut f = NcPoly::zero();
    for arrow in extended.originals() {
        let star = NcPoly::from_path(Path::arrow(q, extended.dual(arrow)));
        let term = &star * &a.d_of(arrow);
        f += term.scale(&sign(q.degree(arrow)));
    }
    canonicalize(q, &f)
}

/// Deformed `n`-Calabi-Yau completion of `A = (T(Q), d)` with deformation `W′`
/// over `Q`:
/// `d(a) = ±∂_{a*}(W)`, `d(a*) = ∂_a(W)`,
/// `d(c_x) = (−1)^n e_x (Σ_a (−1)^{|a|(n+1)} [a, a*]) e_x`, where
/// `W = (−1)^{n+1} W_A + W′` and `W_A = Σ_a (−1)^{|a|} a* d(a)`.
///
/// The factor `(−1)^{n+1}` on `W_A` is what makes `d² = 0` hold for even `n`
/// under the end-rotation cyclic derivative; it is `+1` for `n = 3`. The sign
/// on `d(a)` is the one for which `d` restricts to the differential of `A`.
/// Both facts are checked: the restriction explicitly, `d² = 0` exactly.
pub fn cy_completion(a: &DgTensorAlgebra, n: i64, deformation: &Potential) -> Result<GinzburgAlgebra> {
    let report = a.check_d_squared();
    if let Some((g, residual)) = report.failure {
        return Err(Error::D2Failure {
            generator: a.quiver().arrow_name(g).to_string(),
            residual: residual.display(a.quiver()).to_string(),
        });
    }
    if **deformation.quiver() != **a.quiver() {
        return Err(Error::QuiverMismatch);
    }
    check_potential_degree(deformation, n)?;
    let extended = extended_quiver(a.quiver(), n)?;
    let q = extended.quiver().clone();
    let w_a = completion_potential(a, &extended)?;
    let scaled = canonicalize(&q, &w_a.rep().scale(&sign(n + 1)))?;
    let total = scaled.plus(&deformation.transport(&q)?)?;

    let mut d = Differential::zero();
    for arrow in extended.originals() {
        let deg = q.degree(arrow);
        // ∂_{a*} picks up (−1)^{|a|}·(−1)^{|a*|(|a|+1)} from W_A, times (−1)^{n+1}.
        let restriction_sign = sign(deg + n * deg + 1);
        let image = cyclic_derivative(&total, extended.dual(arrow)).scale(&restriction_sign);
        let expected = a.d_of(arrow);
        if image != expected {
            return Err(Error::D2Failure {
                generator: q.arrow_name(arrow).to_string(),
                residual: (&image - &expected).display(&q).to_string(),
            });
        }
        d.set(arrow, image);
        d.set(extended.dual(arrow), cyclic_derivative(&total, arrow));
    }
    for x in a.quiver().vertex_ids() {
        d.set(extended.loop_at(x), extended.casimir_at(x).scale(&sign(n)));
    }
    let provenance = Provenance {
        input: a.clone(),
        potential: deformation.clone(),
        total_potential: total,
        n,
    };
    finish(extended, d, provenance)
}

/// Output of [`qp_from_gldim2`].
#[derive(Clone, Debug)]
pub struct GlDim2Qp {
    pub quiver: Arc<GradedQuiver>,
    pub potential: Potential,
    /// The arrow added for each relation, in input order.
    pub relation_arrows: Vec<ArrowId>,
}

/// Adds an arrow `rho_<name>: j → i` for each relation `r: i → j` and sets
/// `W = Σ_r r·ρ_r` (plus the optional deformation).
pub fn qp_from_gldim2(
    base: &Arc<GradedQuiver>,
    relations: &[(String, NcPoly)],
    deformation: Option<&Potential>,
) -> Result<GlDim2Qp> {
    if !base.is_ungraded() {
        return Err(Error::NotApplicable("qp_from_gldim2 expects an ungraded quiver".into()));
    }
    let mut q = (**base).clone();
    let mut ends = Vec::new();
    for (name, r) in relations {
        let bad = |reason: &str| Error::BadRelation {
            name: name.clone(),
            reason: reason.to_string(),
        };
        let mut terms = r.terms();
        let (first, _) = terms.next().ok_or_else(|| bad("relation is zero"))?;
        let (s, t) = (first.source(), first.target());
        for (p, _) in r.terms() {
            if p.len() < 2 {
                return Err(bad("relation has a term of length < 2"));
            }
            if p.source() != s || p.target() != t {
                return Err(bad("relation terms are not parallel"));
            }
        }
        ends.push((s, t));
    }
    let mut relation_arrows = Vec::new();
    for ((name, _), &(s, t)) in relations.iter().zip(&ends) {
        let id = q
            .add_arrow(format!("rho_{name}"), t, s, 0)
            .map_err(|e| match e {
                Error::DuplicateArrow(n) => Error::NameCollision(n),
                other => other,
            })?;
        relation_arrows.push(id);
    }
    let q = Arc::new(q);
    let mut w = NcPoly::zero();
    for ((_, r), &rho) in relations.iter().zip(&relation_arrows) {
        w += r * &NcPoly::from_path(Path::arrow(&q, rho));
    }
    if let Some(def) = deformation {
        if **def.quiver() != **base {
            return Err(Error::QuiverMismatch);
        }
        w += def.rep().clone();
    }
    let potential = canonicalize(&q, &w)?;
    Ok(GlDim2Qp {
        quiver: q,
        potential,
        relation_arrows,
    })
}

/// An element of `A ⊗ Q^∨ ⊗ A`: `Σ c·(left ⊗ a* ⊗ right)`.
pub type BimoduleElement = BTreeMap<(Path, ArrowId, Path), Rational>;

/// Two-term presentation `A ⊗ R^∨ ⊗ A → A ⊗ Q^∨ ⊗ A` of the inverse
/// dualizing complex of a tensor dg algebra.
#[derive(Clone, Debug)]
pub struct TwoTermBimoduleComplex {
    /// Quiver carrying the original arrows and unshifted duals `a*` of degree `−|a|`.
    pub extended: ExtendedQuiver,
    /// Image of the vertex generator at each vertex.
    pub connecting: Vec<(VertexId, BimoduleElement)>,
    /// Internal differential on the dual generators.
    pub dual_differential: Vec<(ArrowId, NcPoly)>,
}

impl TwoTermBimoduleComplex {
    /// Multiplies `left·a*·right` out inside the tensor algebra.
    pub fn collapse(&self, element: &BimoduleElement) -> NcPoly {
        let q = self.extended.quiver();
        let mut out = NcPoly::zero();
        for ((l, a, r), c) in element {
            let star = Path::arrow(q, *a);
            if let Some(p) = l.compose(&star).and_then(|p| p.compose(r)) {
                out.add_term(p, c.clone());
            }
        }
        out
    }
}

/// Builds the presentation: the vertex generator at `x` maps to
/// `Σ_{a: ·→x} (−1)^{|a|} a ⊗ a* ⊗ e_x − Σ_{a: x→·} e_x ⊗ a* ⊗ a`, and
/// `d(a*) = ∂_a(Σ_b (−1)^{|b|} b* d(b))`.
pub fn inverse_dualizing_presentation(a: &DgTensorAlgebra) -> Result<TwoTermBimoduleComplex> {
    let report = a.check_d_squared();
    if let Some((g, residual)) = report.failure {
        return Err(Error::D2Failure {
            generator: a.quiver().arrow_name(g).to_string(),
            residual: residual.display(a.quiver()).to_string(),
        });
    }
    let extended = extended_quiver(a.quiver(), 2)?;
    let q = extended.quiver().clone();
    let base = a.quiver();
    let mut connecting = Vec::new();
    for x in base.vertex_ids() {
        let mut el = BimoduleElement::new();
        for arrow in base.arrow_ids() {
            let info = base.arrow(arrow);
            let star = extended.dual(arrow);
            if info.target == x {
                let key = (Path::arrow(&q, arrow), star, Path::trivial(x));
                add_bimodule_term(&mut el, key, sign(info.degree));
            }
            if info.source == x {
                let key = (Path::trivial(x), star, Path::arrow(&q, arrow));
                add_bimodule_term(&mut el, key, rat(-1));
            }
        }
        connecting.push((x, el));
    }
    let w_a = completion_potential(a, &extended)?;
    let dual_differential = extended
        .originals()
        .map(|arrow| (extended.dual(arrow), cyclic_derivative(&w_a, arrow)))
        .collect();
    Ok(TwoTermBimoduleComplex {
        extended,
        connecting,
        dual_differential,
    })
}

fn add_bimodule_term(el: &mut BimoduleElement, key: (Path, ArrowId, Path), c: Rational) {
    let entry = el.entry(key.clone()).or_insert_with(|| rat(0));
    *entry += c;
    if *entry == rat(0) {
        el.remove(&key);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{linear_a, monomial, three_cycle_qp, three_loops, three_loops_qp};

    #[test]
    fn ginzburg_three_loops_differentials() {
        let qp = three_loops_qp();
        let g = ginzburg(qp.quiver(), qp.potential(), 3).unwrap();
        let q = g.quiver().clone();
        assert_eq!(q.arrow_count(), 7);
        let x_star = q.arrow_by_name("x*").unwrap();
        let expected = crate::catalog::polynomial(&q, &[(1, &["y", "z"]), (-1, &["z", "y"])]).unwrap();
        assert_eq!(g.d_of(x_star), expected);
        assert_eq!(q.degree(x_star), -1);
        assert_eq!(q.degree(q.arrow_by_name("c_1").unwrap()), -2);
        assert!(g.dga().check_d_squared().passed());
    }

    #[test]
    fn loop_differential_is_signed_casimir() {
        let q = linear_a(2);
        let g = ginzburg(&q, &Potential::zero(q.clone(), 0), 3).unwrap();
        let eq = g.quiver().clone();
        let c1 = g.d_of(eq.arrow_by_name("c_1").unwrap());
        // a: 2 → 1, so at vertex 1 only a·a* survives; (−1)^3 flips it.
        assert_eq!(c1, monomial(&eq, &["a", "a*"], rat(-1)).unwrap());
        let c2 = g.d_of(eq.arrow_by_name("c_2").unwrap());
        assert_eq!(c2, monomial(&eq, &["a*", "a"], rat(1)).unwrap());
    }

    #[test]
    fn potential_of_wrong_degree_is_rejected() {
        let qp = three_loops_qp();
        let err = ginzburg(qp.quiver(), qp.potential(), 4).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { expected: -1, found: 0 });
    }

    #[test]
    fn existing_star_name_collides() {
        let mut q = GradedQuiver::new();
        let v = q.add_vertex("1").unwrap();
        q.add_arrow("x", v, v, 0).unwrap();
        q.add_arrow("x*", v, v, 0).unwrap();
        let q = Arc::new(q);
        let err = ginzburg(&q, &Potential::zero(q.clone(), 0), 3).unwrap_err();
        assert_eq!(err, Error::NameCollision("x*".into()));
    }

    #[test]
    fn completion_of_zero_differential_matches_ginzburg() {
        let qp = three_loops_qp();
        let a = DgTensorAlgebra::with_zero_differential(qp.quiver().clone());
        let g = cy_completion(&a, 3, qp.potential()).unwrap();
        let h = ginzburg(qp.quiver(), qp.potential(), 3).unwrap();
        assert_eq!(g.dga(), h.dga());
    }

    #[test]
    fn completion_of_graded_dg_algebra_squares_to_zero() {
        // x, y of degree 1 with d(y) = x·x on one vertex.
        let mut q = GradedQuiver::new();
        let v = q.add_vertex("1").unwrap();
        let x = q.add_arrow("x", v, v, 1).unwrap();
        let y = q.add_arrow("y", v, v, 1).unwrap();
        let q = Arc::new(q);
        let d = Differential::zero().with(y, monomial(&q, &["x", "x"], rat(1)).unwrap());
        let a = DgTensorAlgebra::new(q.clone(), d).unwrap();
        for n in 1..=5 {
            let g = cy_completion(&a, n, &Potential::zero(q.clone(), 3 - n)).unwrap();
            assert!(g.dga().check_d_squared().passed(), "n = {n}");
            assert_eq!(g.d_of(y), a.d_of(y));
            assert!(g.d_of(x).is_zero());
        }
    }

    #[test]
    fn gldim2_three_cycle() {
        let qp = three_cycle_qp();
        let q = qp.quiver();
        assert_eq!(q.arrow_count(), 3);
        let rho = q.arrow_by_name("rho_r").unwrap();
        assert_eq!(q.vertex_name(q.arrow(rho).source), "1");
        assert_eq!(q.vertex_name(q.arrow(rho).target), "3");
        assert_eq!(qp.potential().rep().len(), 1);
    }

    #[test]
    fn gldim2_rejects_short_relations() {
        let q = three_loops();
        let r = monomial(&q, &["x"], rat(1)).unwrap();
        let err = qp_from_gldim2(&q, &[("r".into(), r)], None).unwrap_err();
        assert!(matches!(err, Error::BadRelation { .. }));
    }

    #[test]
    fn inverse_dualizing_collapse_is_commutator() {
        let q = linear_a(2);
        let a = DgTensorAlgebra::with_zero_differential(q.clone());
        let pres = inverse_dualizing_presentation(&a).unwrap();
        let eq = pres.extended.quiver().clone();
        let (_, el) = &pres.connecting[0];
        assert_eq!(pres.collapse(el), monomial(&eq, &["a", "a*"], rat(1)).unwrap());
    }
}
