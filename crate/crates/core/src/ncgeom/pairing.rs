//! The bimodule resolution `P` of a 3-dimensional Ginzburg algebra `𝔇` and
//! its degree-3 pairing.
//!
//! `P` is free on generators `𝕀_x` (degree 0), `D(w)` for every arrow or dual
//! arrow `w` (degree `|w| − 1`) and `Dc_x` (degree −3), with differential
//!
//! * `d 𝕀_x = 0`
//! * `d D(w) = w·𝕀_{s(w)} − 𝕀_{t(w)}·w − D(dw)`
//! * `d Dc_x = c_x·𝕀_x − 𝕀_x·c_x − D(d c_x)`
//!
//! where `D(v_1…v_k) = Σ_i (−1)^{|v_1…v_{i−1}|} v_1…v_{i−1}·D(v_i)·v_{i+1}…v_k`
//! and `d(u g v) = du g v + (−1)^{|u|} u (dg) v + (−1)^{|u|+|g|} u g dv`.
//!
//! The pairing is `⟨Dc_x, 𝕀_x⟩ = ⟨𝕀_x, Dc_x⟩ = e_x ⊗ e_x`,
//! `⟨Dη, Dξ⟩ = (−1)^{|η|−1} {{η, ξ}}` and zero otherwise, extended to
//! `⟨a p b, q⟩ = Σ (−1)^{|a|(|x|+|b|) + |b|(|y|+|q|+3)} x b ⊗ a y` (for
//! `⟨p, q⟩ = Σ x ⊗ y`) in the first argument and
//! `⟨p, a q b⟩ = (−1)^{|a|(|p|+3)} a⟨p, q⟩b` in the second.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{odd, rat, sign, GradedQuiver, NcPoly, Path, Rational, VertexId};
use crate::completion::{ginzburg, ArrowRole, GinzburgAlgebra};
use crate::error::{Error, Result};
use crate::potential::Potential;

use super::double_deriv::{double_sn_bracket, SnArg};
use super::tensor::{add_map_entry, BiTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PGenerator {
    /// `𝕀_x`
    Unit(VertexId),
    /// `D(w)` for an arrow or dual arrow `w` of the Ginzburg quiver.
    Omega(crate::algebra::ArrowId),
    /// `Dc_x`
    Dc(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Dc,
    Omega,
    Unit,
}

impl PGenerator {
    fn kind(self) -> Kind {
        match self {
            PGenerator::Unit(_) => Kind::Unit,
            PGenerator::Omega(_) => Kind::Omega,
            PGenerator::Dc(_) => Kind::Dc,
        }
    }
}

/// Which of the six compatibility cases an ordered generator pair belongs to:
/// 1 (Dc,Dc), 2 (Dc,D), 3 (Dc,𝕀), 4 (D,D), 5 (D,𝕀), 6 (𝕀,𝕀).
pub fn case_of(p: PGenerator, q: PGenerator) -> usize {
    let (a, b) = if p.kind() <= q.kind() { (p.kind(), q.kind()) } else { (q.kind(), p.kind()) };
    match (a, b) {
        (Kind::Dc, Kind::Dc) => 1,
        (Kind::Dc, Kind::Omega) => 2,
        (Kind::Dc, Kind::Unit) => 3,
        (Kind::Omega, Kind::Omega) => 4,
        (Kind::Omega, Kind::Unit) => 5,
        (Kind::Unit, Kind::Unit) => 6,
        _ => unreachable!("pair sorted by kind"),
    }
}

/// `Σ c·(u ⊗ g ⊗ v)` in `P`.
pub type PElement = BTreeMap<(Path, PGenerator, Path), Rational>;

/// Deliberate damage to `d Dc_x`, used to confirm that the checks can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Corruption {
    #[default]
    None,
    /// `d Dc_x = c_x·𝕀_x − D(d c_x)`
    DropRightUnitTerm,
    /// `d Dc_x = −D(d c_x)`
    DropUnitCommutator,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    algebra: GinzburgAlgebra,
    generators: Vec<PGenerator>,
    corruption: Corruption,
}

impl Resolution {
    pub fn new(algebra: GinzburgAlgebra) -> Result<Self> {
        let ext = algebra.extended();
        if algebra.n() != 3 || !ext.base().is_ungraded() || !algebra.provenance().input.has_zero_differential() {
            return Err(Error::NotApplicable(
                "the pairing is defined for 3-dimensional Ginzburg algebras of ungraded quivers".into(),
            ));
        }
        let q = ext.quiver();
        let mut generators: Vec<PGenerator> = ext.base().vertex_ids().map(PGenerator::Unit).collect();
        generators.extend(
            q.arrow_ids()
                .filter(|&a| !matches!(ext.role(a), ArrowRole::Loop(_)))
                .map(PGenerator::Omega),
        );
        generators.extend(ext.base().vertex_ids().map(PGenerator::Dc));
        Ok(Resolution {
            algebra,
            generators,
            corruption: Corruption::None,
        })
    }

    pub fn for_potential(q: &Arc<GradedQuiver>, z: &Potential) -> Result<Self> {
        Resolution::new(ginzburg(q, z, 3)?)
    }

    pub fn with_corruption(mut self, corruption: Corruption) -> Self {
        self.corruption = corruption;
        self
    }

    /// Removes a generator from the family, as if the input had lost it.
    pub fn without_generator(mut self, g: PGenerator) -> Self {
        self.generators.retain(|&h| h != g);
        self
    }

    pub fn algebra(&self) -> &GinzburgAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[PGenerator] {
        &self.generators
    }

    fn quiver(&self) -> &GradedQuiver {
        self.algebra.quiver()
    }

    pub fn degree(&self, g: PGenerator) -> i64 {
        match g {
            PGenerator::Unit(_) => 0,
            PGenerator::Omega(w) => self.quiver().degree(w) - 1,
            PGenerator::Dc(_) => -3,
        }
    }

    /// Vertices on the left and right of the generator.
    pub fn ends(&self, g: PGenerator) -> (VertexId, VertexId) {
        match g {
            PGenerator::Unit(x) | PGenerator::Dc(x) => (x, x),
            PGenerator::Omega(w) => {
                let arrow = self.quiver().arrow(w);
                (arrow.target, arrow.source)
            }
        }
    }

    pub fn generator_name(&self, g: PGenerator) -> String {
        let q = self.quiver();
        match g {
            PGenerator::Unit(x) => format!("I_{}", q.vertex_name(x)),
            PGenerator::Omega(w) => format!("D({})", q.arrow_name(w)),
            PGenerator::Dc(x) => format!("Dc_{}", q.vertex_name(x)),
        }
    }

    /// `e ⊗ g ⊗ e`
    pub fn element(&self, g: PGenerator) -> PElement {
        let (l, r) = self.ends(g);
        let mut el = PElement::new();
        el.insert((Path::trivial(l), g, Path::trivial(r)), rat(1));
        el
    }

    fn element_degree(&self, key: &(Path, PGenerator, Path)) -> i64 {
        key.0.degree() + self.degree(key.1) + key.2.degree()
    }

    /// The universal derivation `D` on polynomials of `𝔇`.
    pub fn universal(&self, f: &NcPoly) -> PElement {
        let q = self.quiver();
        let ext = self.algebra.extended();
        let mut out = PElement::new();
        for (p, c) in f.terms() {
            let arrows = p.arrows();
            let mut prefix_deg = 0;
            for (i, &w) in arrows.iter().enumerate() {
                let g = match ext.role(w) {
                    ArrowRole::Loop(x) => PGenerator::Dc(x),
                    _ => PGenerator::Omega(w),
                };
                let key = (p.slice(q, 0, i), g, p.slice(q, i + 1, arrows.len()));
                add_map_entry(&mut out, key, if odd(prefix_deg) { -c.clone() } else { c.clone() });
                prefix_deg += q.degree(w);
            }
        }
        out
    }

    /// Differential of a generator.
    pub fn d_generator(&self, g: PGenerator) -> PElement {
        let q = self.quiver();
        let mut out = PElement::new();
        let unit_term = |out: &mut PElement, left: Path, x: VertexId, right: Path, c: i64| {
            add_map_entry(out, (left, PGenerator::Unit(x), right), rat(c));
        };
        match g {
            PGenerator::Unit(_) => {}
            PGenerator::Omega(w) => {
                let arrow = q.arrow(w);
                let wp = Path::arrow(q, w);
                unit_term(&mut out, wp.clone(), arrow.source, Path::trivial(arrow.source), 1);
                unit_term(&mut out, Path::trivial(arrow.target), arrow.target, wp, -1);
                subtract(&mut out, &self.universal(&self.algebra.d_of(w)));
            }
            PGenerator::Dc(x) => {
                let c = self.algebra.extended().loop_at(x);
                let cp = Path::arrow(q, c);
                if self.corruption != Corruption::DropUnitCommutator {
                    unit_term(&mut out, cp.clone(), x, Path::trivial(x), 1);
                }
                if self.corruption == Corruption::None {
                    unit_term(&mut out, Path::trivial(x), x, cp, -1);
                }
                subtract(&mut out, &self.universal(&self.algebra.d_of(c)));
            }
        }
        out
    }

    /// Differential of an arbitrary element.
    pub fn d(&self, el: &PElement) -> PElement {
        let dga = self.algebra.dga();
        let mut out = PElement::new();
        for ((u, g, v), c) in el {
            for (du, k) in dga.leibniz_extend(&NcPoly::from_path(u.clone())).terms() {
                add_map_entry(&mut out, (du.clone(), *g, v.clone()), c * k);
            }
            let s = if odd(u.degree()) { -c.clone() } else { c.clone() };
            for ((u2, g2, v2), k) in self.d_generator(*g) {
                if let (Some(uu), Some(vv)) = (u.compose(&u2), v2.compose(v)) {
                    add_map_entry(&mut out, (uu, g2, vv), &s * k);
                }
            }
            let s = if odd(u.degree() + self.degree(*g)) { -c.clone() } else { c.clone() };
            for (dv, k) in dga.leibniz_extend(&NcPoly::from_path(v.clone())).terms() {
                add_map_entry(&mut out, (u.clone(), *g, dv.clone()), &s * k);
            }
        }
        out
    }

    /// Pairing of two generators.
    pub fn pair_generators(&self, p: PGenerator, q: PGenerator) -> BiTensor {
        match (p, q) {
            (PGenerator::Dc(x), PGenerator::Unit(y)) | (PGenerator::Unit(x), PGenerator::Dc(y)) if x == y => {
                BiTensor::single(Path::trivial(x), Path::trivial(x), rat(1))
            }
            (PGenerator::Omega(eta), PGenerator::Omega(xi)) => {
                let ext = self.algebra.extended();
                let as_arg = |w| match ext.role(w) {
                    ArrowRole::Original(a) => SnArg::Element(a),
                    ArrowRole::Dual(a) => SnArg::Coordinate(a),
                    ArrowRole::Loop(_) => unreachable!("loops carry Dc generators"),
                };
                let bracket = double_sn_bracket(ext.base(), as_arg(eta), as_arg(xi))
                    .expect("generator brackets are defined on ungraded quivers");
                bracket.scale(&sign(self.quiver().degree(eta) - 1))
            }
            _ => BiTensor::zero(),
        }
    }

    /// Pairing of arbitrary elements.
    pub fn pair(&self, x: &PElement, y: &PElement) -> BiTensor {
        let mut out = BiTensor::zero();
        for (kx, cx) in x {
            let (u, g, v) = kx;
            let deg_x = self.element_degree(kx);
            for (ky, cy) in y {
                let (u2, h, v2) = ky;
                let base = self.pair_generators(*g, *h);
                if base.is_zero() {
                    continue;
                }
                let outer_sign = odd(u2.degree() * (deg_x + 3));
                for ((bx, by), k) in base.terms() {
                    let e = u.degree() * (bx.degree() + v.degree()) + v.degree() * (by.degree() + self.degree(*h) + 3);
                    let (Some(xv), Some(uy)) = (bx.compose(v), u.compose(by)) else {
                        continue;
                    };
                    let (Some(left), Some(right)) = (u2.compose(&xv), uy.compose(v2)) else {
                        continue;
                    };
                    let mut coef = cx * cy * k;
                    if odd(e) != outer_sign {
                        coef = -coef;
                    }
                    out.add_term(left, right, coef);
                }
            }
        }
        out
    }

    /// `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy` on `𝔇 ⊗ 𝔇`.
    pub fn d_bitensor(&self, t: &BiTensor) -> BiTensor {
        let dga = self.algebra.dga();
        let mut out = BiTensor::zero();
        for ((x, y), c) in t.terms() {
            for (dx, k) in dga.leibniz_extend(&NcPoly::from_path(x.clone())).terms() {
                out.add_term(dx.clone(), y.clone(), c * k);
            }
            let s = if odd(x.degree()) { -c.clone() } else { c.clone() };
            for (dy, k) in dga.leibniz_extend(&NcPoly::from_path(y.clone())).terms() {
                out.add_term(x.clone(), dy.clone(), &s * k);
            }
        }
        out
    }

    /// `d⟨p, q⟩ − ⟨dp, q⟩ − (−1)^{|p|+3}⟨p, dq⟩` for generators.
    pub fn compat_residual(&self, p: PGenerator, q: PGenerator) -> BiTensor {
        let (ep, eq) = (self.element(p), self.element(q));
        let lhs = self.d_bitensor(&self.pair(&ep, &eq));
        let first = self.pair(&self.d(&ep), &eq);
        let second = self.pair(&ep, &self.d(&eq));
        let mut r = &lhs - &first;
        r.add_scaled(&second, &-sign(self.degree(p) + 3));
        r
    }

    pub fn check_compat(&self) -> CompatReport {
        let mut cases: Vec<CaseReport> = (1..=6)
            .map(|case| CaseReport {
                case,
                pairs_checked: 0,
                failures: Vec::new(),
            })
            .collect();
        for &p in &self.generators {
            for &q in &self.generators {
                let report = &mut cases[case_of(p, q) - 1];
                report.pairs_checked += 1;
                let r = self.compat_residual(p, q);
                if !r.is_zero() {
                    report.failures.push((p, q, r));
                }
            }
        }
        let d_squared_failures = self
            .generators
            .iter()
            .filter_map(|&g| {
                let dd = self.d(&self.d_generator(g));
                (!dd.is_empty()).then_some((g, dd))
            })
            .collect();
        CompatReport {
            cases,
            d_squared_failures,
        }
    }

    /// Pairs `(p, q)` where `⟨p, q⟩ ≠ (−1)^{(3+|p|)(3+|q|)} σ⟨q, p⟩`.
    pub fn symmetry_failures(&self) -> Vec<(PGenerator, PGenerator)> {
        let mut out = Vec::new();
        for &p in &self.generators {
            for &q in &self.generators {
                let pq = self.pair_generators(p, q);
                let qp = self.pair_generators(q, p).sigma();
                let s = sign((3 + self.degree(p)) * (3 + self.degree(q)));
                if pq != qp.scale(&s) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// The generator-level pairing must be a signed permutation: each
    /// generator pairs with exactly one partner, to `±e_x ⊗ e_y`, in
    /// complementary degree, and the partner relation is an involution.
    pub fn check_nondegenerate(&self) -> NondegeneracyReport {
        let mut partner: BTreeMap<PGenerator, PGenerator> = BTreeMap::new();
        let mut problems = Vec::new();
        for &p in &self.generators {
            let hits: Vec<(PGenerator, BiTensor)> = self
                .generators
                .iter()
                .map(|&q| (q, self.pair_generators(p, q)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            if hits.len() != 1 {
                problems.push(format!("{} pairs with {} generators", self.generator_name(p), hits.len()));
                continue;
            }
            let (q, value) = &hits[0];
            let unit_block = value.len() == 1
                && value.terms().all(|((x, y), c)| {
                    x.is_trivial() && y.is_trivial() && (*c == rat(1) || *c == rat(-1))
                });
            if !unit_block {
                problems.push(format!("block {}/{} is not ±e⊗e", self.generator_name(p), self.generator_name(*q)));
            }
            if self.degree(p) + self.degree(*q) != -3 {
                problems.push(format!("degrees of {}/{} do not add to -3", self.generator_name(p), self.generator_name(*q)));
            }
            partner.insert(p, *q);
        }
        for (p, q) in &partner {
            if partner.get(q) != Some(p) {
                problems.push(format!("pairing of {} is not symmetric", self.generator_name(*p)));
            }
        }
        NondegeneracyReport {
            generators: self.generators.len(),
            problems,
        }
    }
}

fn subtract(out: &mut PElement, el: &PElement) {
    for (k, c) in el {
        add_map_entry(out, k.clone(), -c.clone());
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: usize,
    pub pairs_checked: usize,
    pub failures: Vec<(PGenerator, PGenerator, BiTensor)>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CompatReport {
    pub cases: Vec<CaseReport>,
    /// Generators with `d² ≠ 0` in `P`.
    pub d_squared_failures: Vec<(PGenerator, PElement)>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed) && self.d_squared_failures.is_empty()
    }

    pub fn case(&self, n: usize) -> &CaseReport {
        &self.cases[n - 1]
    }
}

impl fmt::Display for CompatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "case {}: {} ({} pairs, {} nonzero residuals)", c.case, status, c.pairs_checked, c.failures.len())?;
        }
        let status = if self.d_squared_failures.is_empty() { "pass" } else { "FAIL" };
        write!(f, "d^2 on P: {status}")
    }
}

#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub generators: usize,
    pub problems: Vec<String>,
}

impl NondegeneracyReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Builds `P` for `Γ_3(Q, z)` and checks the six compatibility cases.
pub fn check_pairing_compat(q: &Arc<GradedQuiver>, z: &Potential) -> Result<CompatReport> {
    Ok(Resolution::for_potential(q, z)?.check_compat())
}

/// Builds `P` for `Γ_3(Q, z)` and checks that the pairing is perfect.
pub fn check_nondegenerate(q: &Arc<GradedQuiver>, z: &Potential) -> Result<NondegeneracyReport> {
    Ok(Resolution::for_potential(q, z)?.check_nondegenerate())
}

impl Resolution {
    /// Residual of a generator pair as text, for reports.
    pub fn describe_residual(&self, r: &BiTensor) -> String {
        r.display(self.quiver())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{three_cycle_qp, three_loops_qp};
    use crate::mutation::QuiverWithPotential;

    fn resolution(qp: &QuiverWithPotential) -> Resolution {
        Resolution::for_potential(qp.quiver(), qp.potential()).unwrap()
    }

    #[test]
    fn three_loops_passes_all_cases() {
        let r = resolution(&three_loops_qp());
        let report = r.check_compat();
        for c in &report.cases {
            for (p, q, res) in &c.failures {
                eprintln!("case {} {} {}: {}", c.case, r.generator_name(*p), r.generator_name(*q), r.describe_residual(res));
            }
        }
        for (g, _) in &report.d_squared_failures {
            eprintln!("d^2 {}", r.generator_name(*g));
        }
        assert!(report.passed(), "{report}");
        assert!(r.symmetry_failures().is_empty());
        assert!(r.check_nondegenerate().passed());
    }

    #[test]
    fn three_cycle_passes_all_cases() {
        let r = resolution(&three_cycle_qp());
        assert!(r.check_compat().passed());
        assert!(r.check_nondegenerate().passed());
    }
}
