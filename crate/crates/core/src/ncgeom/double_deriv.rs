use std::collections::BTreeMap;

use crate::algebra::{odd, rat, ArrowId, GradedQuiver, NcPoly, Path};
use crate::completion::{ArrowRole, ExtendedQuiver};
use crate::error::{Error, Result};

use super::tensor::{BiTensor, TriTensor};

/// A double derivation `δ: A → A ⊗ A` given on arrows, extended by
/// `δ(fg) = δ(f)·g + (−1)^{|δ||f|} f·δ(g)` for the outer bimodule structure.
/// Idempotents are sent to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DoubleDeriv {
    pub degree: i64,
    values: BTreeMap<ArrowId, BiTensor>,
}

impl DoubleDeriv {
    pub fn new(degree: i64) -> Self {
        DoubleDeriv {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, a: ArrowId, value: BiTensor) -> Self {
        self.set(a, value);
        self
    }

    pub fn set(&mut self, a: ArrowId, value: BiTensor) {
        if value.is_zero() {
            self.values.remove(&a);
        } else {
            self.values.insert(a, value);
        }
    }

    pub fn value(&self, a: ArrowId) -> BiTensor {
        self.values.get(&a).cloned().unwrap_or_default()
    }

    /// The coordinate double derivation `∂/∂a`: `a ↦ e_{t(a)} ⊗ e_{s(a)}`,
    /// other arrows to zero.
    pub fn coordinate(q: &GradedQuiver, a: ArrowId) -> Self {
        let arrow = q.arrow(a);
        let value = BiTensor::single(Path::trivial(arrow.target), Path::trivial(arrow.source), rat(1));
        DoubleDeriv::new(-arrow.degree).with(a, value)
    }

    pub fn apply(&self, q: &GradedQuiver, f: &NcPoly) -> BiTensor {
        let mut out = BiTensor::zero();
        for (p, c) in f.terms() {
            let arrows = p.arrows();
            let mut prefix_deg = 0;
            for (i, &a) in arrows.iter().enumerate() {
                if let Some(value) = self.values.get(&a) {
                    let prefix = NcPoly::from_path(p.slice(q, 0, i));
                    let suffix = NcPoly::from_path(p.slice(q, i + 1, arrows.len()));
                    let s = if odd(self.degree * prefix_deg) { -c.clone() } else { c.clone() };
                    out.add_scaled(&BiTensor::outer(&prefix, value, &suffix), &s);
                }
                prefix_deg += q.degree(a);
            }
        }
        out
    }

    /// Inner bimodule action `(u·δ·v)(f) = δ(f)′ v ⊗ u δ(f)″`, for degree-0 data.
    pub fn inner_action(&self, q: &GradedQuiver, left: &NcPoly, right: &NcPoly) -> Result<DoubleDeriv> {
        let graded = self.degree != 0
            || !q.is_ungraded()
            || left.terms().chain(right.terms()).any(|(p, _)| p.degree() != 0);
        if graded {
            return Err(Error::UnsupportedArgument("inner action is implemented for degree-0 data".into()));
        }
        let mut out = DoubleDeriv::new(0);
        for (&a, value) in &self.values {
            let mut image = BiTensor::zero();
            for ((x, y), c) in value.terms() {
                let xv = &NcPoly::from_path(x.clone()) * right;
                let uy = left * &NcPoly::from_path(y.clone());
                for (p, s) in xv.terms() {
                    for (r, t) in uy.terms() {
                        image.add_term(p.clone(), r.clone(), c * s * t);
                    }
                }
            }
            out.set(a, image);
        }
        Ok(out)
    }

    pub fn plus(&self, other: &DoubleDeriv) -> DoubleDeriv {
        let mut out = self.clone();
        for (&a, v) in &other.values {
            let sum = &out.value(a) + v;
            out.set(a, sum);
        }
        out
    }

    pub fn minus(&self, other: &DoubleDeriv) -> DoubleDeriv {
        let mut out = self.clone();
        for (&a, v) in &other.values {
            let diff = &out.value(a) - v;
            out.set(a, diff);
        }
        out
    }
}

/// The double derivation `E(f) = Σ_i f e_i ⊗ e_i − e_i ⊗ e_i f`, given on
/// arrows as `E(a) = a ⊗ e_{s(a)} − e_{t(a)} ⊗ a`.
pub fn canonical_e(q: &GradedQuiver) -> DoubleDeriv {
    let mut e = DoubleDeriv::new(0);
    for a in q.arrow_ids() {
        let arrow = q.arrow(a);
        let mut v = BiTensor::single(Path::arrow(q, a), Path::trivial(arrow.source), rat(1));
        v.add_term(Path::trivial(arrow.target), Path::arrow(q, a), rat(-1));
        e.set(a, v);
    }
    e
}

/// `E(f)` evaluated straight from its defining formula.
pub fn canonical_e_direct(f: &NcPoly) -> BiTensor {
    let mut out = BiTensor::zero();
    for (p, c) in f.terms() {
        out.add_term(p.clone(), Path::trivial(p.source()), c.clone());
        out.add_term(Path::trivial(p.target()), p.clone(), -c.clone());
    }
    out
}

/// `Σ_a [∂/∂a, a] = Σ_a (∂/∂a·a − a·∂/∂a)` for the inner bimodule action.
pub fn casimir_commutator(q: &GradedQuiver) -> Result<DoubleDeriv> {
    let mut total = DoubleDeriv::new(0);
    for a in q.arrow_ids() {
        let d = DoubleDeriv::coordinate(q, a);
        let arrow = NcPoly::from_path(Path::arrow(q, a));
        let right = d.inner_action(q, &NcPoly::unit(q), &arrow)?;
        let left = d.inner_action(q, &arrow, &NcPoly::unit(q))?;
        total = total.plus(&right.minus(&left));
    }
    Ok(total)
}

/// `{{δ, Δ}}_l` on each arrow: `σ_23((δ ⊗ 1)Δ − (1 ⊗ Δ)δ)` (degree-0 data).
pub fn bracket_left(q: &GradedQuiver, delta: &DoubleDeriv, big: &DoubleDeriv) -> BTreeMap<ArrowId, TriTensor> {
    q.arrow_ids()
        .map(|t| {
            let mut first = TriTensor::zero();
            for ((x, y), c) in big.apply(q, &NcPoly::from_path(Path::arrow(q, t))).terms() {
                for ((x1, x2), c2) in delta.apply(q, &NcPoly::from_path(x.clone())).terms() {
                    first.add_term(x1.clone(), x2.clone(), y.clone(), c * c2);
                }
            }
            let mut second = TriTensor::zero();
            for ((x, y), c) in delta.apply(q, &NcPoly::from_path(Path::arrow(q, t))).terms() {
                for ((y1, y2), c2) in big.apply(q, &NcPoly::from_path(y.clone())).terms() {
                    second.add_term(x.clone(), y1.clone(), y2.clone(), c * c2);
                }
            }
            (t, first.minus(&second).sigma23())
        })
        .collect()
}

/// `{{δ, Δ}}_r` on each arrow: `σ_12((1 ⊗ δ)Δ − (Δ ⊗ 1)δ)` (degree-0 data).
pub fn bracket_right(q: &GradedQuiver, delta: &DoubleDeriv, big: &DoubleDeriv) -> BTreeMap<ArrowId, TriTensor> {
    q.arrow_ids()
        .map(|t| {
            let mut first = TriTensor::zero();
            for ((x, y), c) in big.apply(q, &NcPoly::from_path(Path::arrow(q, t))).terms() {
                for ((y1, y2), c2) in delta.apply(q, &NcPoly::from_path(y.clone())).terms() {
                    first.add_term(x.clone(), y1.clone(), y2.clone(), c * c2);
                }
            }
            let mut second = TriTensor::zero();
            for ((x, y), c) in delta.apply(q, &NcPoly::from_path(Path::arrow(q, t))).terms() {
                for ((x1, x2), c2) in big.apply(q, &NcPoly::from_path(x.clone())).terms() {
                    second.add_term(x1.clone(), x2.clone(), y.clone(), c * c2);
                }
            }
            (t, first.minus(&second).sigma12())
        })
        .collect()
}

/// A generator of the tensor algebra of arrows and coordinate double
/// derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnArg {
    /// An arrow `a` of the path algebra.
    Element(ArrowId),
    /// The coordinate double derivation `∂/∂a`.
    Coordinate(ArrowId),
}

impl SnArg {
    /// Reads a generator of the Ginzburg algebra under the dictionary
    /// `a ↔ a`, `a* ↔ ∂/∂a`. Anything else is rejected.
    pub fn from_poly(ext: &ExtendedQuiver, f: &NcPoly) -> Result<SnArg> {
        let unsupported = || Error::UnsupportedArgument("expected a single arrow or dual arrow".into());
        let mut terms = f.terms();
        let (p, c) = terms.next().ok_or_else(unsupported)?;
        if terms.next().is_some() || p.len() != 1 || *c != rat(1) {
            return Err(unsupported());
        }
        match ext.role(p.arrows()[0]) {
            ArrowRole::Original(a) => Ok(SnArg::Element(a)),
            ArrowRole::Dual(a) => Ok(SnArg::Coordinate(a)),
            ArrowRole::Loop(_) => Err(unsupported()),
        }
    }
}

/// Double Schouten-Nijenhuis bracket on generators of a path algebra over an
/// ungraded quiver: `{{a, b}} = 0`, `{{∂_a, b}} = ∂_a(b)`,
/// `{{b, ∂_a}} = −σ{{∂_a, b}}`, and `{{∂_a, ∂_b}}` read off the
/// `σ_23`/`σ_12` formulas, which vanish for coordinate derivations.
pub fn double_sn_bracket(q: &GradedQuiver, xi: SnArg, eta: SnArg) -> Result<BiTensor> {
    if !q.is_ungraded() {
        return Err(Error::UnsupportedArgument("bracket is implemented for ungraded quivers".into()));
    }
    match (xi, eta) {
        (SnArg::Element(_), SnArg::Element(_)) => Ok(BiTensor::zero()),
        (SnArg::Coordinate(a), SnArg::Element(b)) => {
            Ok(DoubleDeriv::coordinate(q, a).apply(q, &NcPoly::from_path(Path::arrow(q, b))))
        }
        (SnArg::Element(b), SnArg::Coordinate(a)) => {
            let v = DoubleDeriv::coordinate(q, a).apply(q, &NcPoly::from_path(Path::arrow(q, b)));
            Ok(v.sigma().scale(&rat(-1)))
        }
        (SnArg::Coordinate(a), SnArg::Coordinate(b)) => {
            let (da, db) = (DoubleDeriv::coordinate(q, a), DoubleDeriv::coordinate(q, b));
            let left = bracket_left(q, &da, &db);
            let right = bracket_right(q, &da, &db);
            if left.values().chain(right.values()).all(TriTensor::is_zero) {
                Ok(BiTensor::zero())
            } else {
                Err(Error::UnsupportedArgument(
                    "bracket of double derivations does not reduce to a bitensor".into(),
                ))
            }
        }
    }
}
