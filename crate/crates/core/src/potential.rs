//! Potentials (cyclic classes of cycle-supported polynomials), cyclic
//! derivatives, Connes' map `B` and the necklace identity.

use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{koszul_odd, odd, supercommutator, ArrowId, GradedQuiver, NcPoly, Path, Rational};
use crate::error::{Error, Result};

/// A cyclic class stored as its canonical signed representative: every term is
/// the lexicographically minimal rotation of its cycle, with the Koszul sign
/// of the rotation absorbed into the coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Potential {
    quiver: Arc<GradedQuiver>,
    rep: NcPoly,
    degree: i64,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({})", self.rep.display(&self.quiver))
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.display(&self.quiver))
    }
}

/// Canonical rotation of a cycle. Returns `None` when the cycle is periodic
/// with a sign-reversing period, in which case it is zero in the cyclic
/// quotient; otherwise the representative and whether the sign flips.
pub fn canonical_rotation(q: &GradedQuiver, cycle: &Path) -> Option<(Path, bool)> {
    let n = cycle.len();
    if n <= 1 {
        return Some((cycle.clone(), false));
    }
    let arrows = cycle.arrows();
    let degs: Vec<i64> = arrows.iter().map(|&a| q.degree(a)).collect();
    let total: i64 = degs.iter().sum();
    let mut best: Option<(usize, bool)> = None;
    let mut front = 0i64;
    for k in 0..n {
        if k > 0 {
            front += degs[k - 1];
        }
        let neg = koszul_odd(front, total - front);
        match best {
            None => best = Some((k, neg)),
            Some((b, bneg)) => {
                let ord = rotated_cmp(arrows, k, b);
                if ord == std::cmp::Ordering::Less {
                    best = Some((k, neg));
                } else if ord == std::cmp::Ordering::Equal && bneg != neg {
                    return None;
                }
            }
        }
    }
    let (k, neg) = best.expect("nonempty cycle");
    let (rotated, _) = cycle.rotate(q, k);
    Some((rotated, neg))
}

fn rotated_cmp(arrows: &[ArrowId], k: usize, b: usize) -> std::cmp::Ordering {
    let n = arrows.len();
    (0..n)
        .map(|i| arrows[(k + i) % n].cmp(&arrows[(b + i) % n]))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Rewrites a cycle-supported polynomial into canonical form.
pub fn canonicalize(quiver: &Arc<GradedQuiver>, f: &NcPoly) -> Result<Potential> {
    let rep = canonical_rep(quiver, f)?;
    let degree = rep.homogeneous_degree()?.unwrap_or(0);
    Ok(Potential {
        quiver: quiver.clone(),
        rep,
        degree,
    })
}

pub(crate) fn canonical_rep(q: &GradedQuiver, f: &NcPoly) -> Result<NcPoly> {
    let mut rep = NcPoly::zero();
    for (p, c) in f.terms() {
        if !p.is_cycle() {
            return Err(Error::NonCycleTerm(p.display(q).to_string()));
        }
        if let Some((r, neg)) = canonical_rotation(q, p) {
            rep.add_term(r, if neg { -c.clone() } else { c.clone() });
        }
    }
    Ok(rep)
}

impl Potential {
    pub fn zero(quiver: Arc<GradedQuiver>, degree: i64) -> Self {
        Potential {
            quiver,
            rep: NcPoly::zero(),
            degree,
        }
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn rep(&self) -> &NcPoly {
        &self.rep
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Sum of two potentials over the same quiver.
    pub fn plus(&self, other: &Potential) -> Result<Potential> {
        if *self.quiver != *other.quiver {
            return Err(Error::QuiverMismatch);
        }
        if self.is_zero() {
            return Ok(Potential { degree: other.degree, ..other.clone() });
        }
        if !other.is_zero() && self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let rep = &self.rep + &other.rep;
        Ok(Potential {
            quiver: self.quiver.clone(),
            rep,
            degree: self.degree,
        })
    }

    /// Moves the potential to a quiver that extends this one (same arrows at
    /// the same indices, possibly more appended).
    pub fn transport(&self, target: &Arc<GradedQuiver>) -> Result<Potential> {
        if !extends(target, &self.quiver) {
            return Err(Error::QuiverMismatch);
        }
        Ok(Potential {
            quiver: target.clone(),
            rep: self.rep.clone(),
            degree: self.degree,
        })
    }

    /// Arrows that occur in some term.
    pub fn arrows_used(&self) -> Vec<ArrowId> {
        let mut used: Vec<ArrowId> = self.rep.terms().flat_map(|(p, _)| p.arrows().to_vec()).collect();
        used.sort();
        used.dedup();
        used
    }
}

/// True when `big` starts with exactly the vertices and arrows of `small`.
pub fn extends(big: &GradedQuiver, small: &GradedQuiver) -> bool {
    big.vertex_count() >= small.vertex_count()
        && big.arrow_count() >= small.arrow_count()
        && small.vertex_names() == &big.vertex_names()[..small.vertex_count()]
        && small.arrows() == &big.arrows()[..small.arrow_count()]
}

/// Cyclic derivative: for each occurrence `β_j = a` in a term `β_1…β_s`, the
/// rotation `β_{j+1}…β_s β_1…β_{j−1}`, signed by the Koszul sign of moving
/// `β_1…β_j` past `β_{j+1}…β_s`.
pub fn cyclic_derivative(w: &Potential, a: ArrowId) -> NcPoly {
    cyclic_derivative_of(&w.quiver, &w.rep, a)
}

pub(crate) fn cyclic_derivative_of(q: &GradedQuiver, rep: &NcPoly, a: ArrowId) -> NcPoly {
    let mut out = NcPoly::zero();
    let arrow = q.arrow(a);
    for (p, c) in rep.terms() {
        let arrows = p.arrows();
        let total = p.degree();
        let mut head = 0i64;
        for (j, &b) in arrows.iter().enumerate() {
            head += q.degree(b);
            if b != a {
                continue;
            }
            let mut rest = Vec::with_capacity(arrows.len() - 1);
            rest.extend_from_slice(&arrows[j + 1..]);
            rest.extend_from_slice(&arrows[..j]);
            let path = Path::from_arrows_or_trivial(q, &rest, arrow.target).expect("rotation of a cycle composes");
            let coef = if koszul_odd(head, total - head) { -c.clone() } else { c.clone() };
            out.add_term(path, coef);
        }
    }
    out
}

/// Elements `Σ c·(v ⊗ u)` with `v` an arrow and `vu` a cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HochschildOneChain {
    terms: BTreeMap<(ArrowId, Path), Rational>,
}

impl HochschildOneChain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `c·(v ⊗ u)`. Panics if `vu` is not a cycle.
    pub fn add_term(&mut self, v: ArrowId, u: Path, c: Rational, q: &GradedQuiver) {
        let arrow = q.arrow(v);
        assert!(
            arrow.source == u.target() && arrow.target == u.source(),
            "v ⊗ u must close up into a cycle"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.entry((v, u)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(ArrowId, Path), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn display(&self, q: &GradedQuiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|((v, u), c)| {
                format!("{}·({}⊗{})", crate::algebra::format_rational(c), q.arrow_name(*v), u.display(q))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Splits each cycle `v_1…v_n` into `Σ_i ± v_i ⊗ v_{i+1}…v_n v_1…v_{i−1}`; the
/// sign is the Koszul sign of moving `v_1…v_{i−1}` to the back.
pub fn split_cycles(q: &GradedQuiver, f: &NcPoly) -> HochschildOneChain {
    let mut out = HochschildOneChain::zero();
    for (p, c) in f.terms() {
        let arrows = p.arrows();
        let total = p.degree();
        let mut front = 0i64;
        for (i, &v) in arrows.iter().enumerate() {
            let mut rest = Vec::with_capacity(arrows.len() - 1);
            rest.extend_from_slice(&arrows[i + 1..]);
            rest.extend_from_slice(&arrows[..i]);
            let u = Path::from_arrows_or_trivial(q, &rest, q.arrow(v).source).expect("rotation composes");
            let coef = if koszul_odd(front, total - front) { -c.clone() } else { c.clone() };
            out.add_term(v, u, coef, q);
            front += q.degree(v);
        }
    }
    out
}

/// Connes' map on the canonical representative of `w`.
pub fn connes_b(w: &Potential) -> HochschildOneChain {
    split_cycles(&w.quiver, &w.rep)
}

/// `Σ_a (−1)^{|a|(|W|+1)} [a, ∂_a W]`. For degree-0 arrows this is the plain
/// sum `Σ_a [a, ∂_a W]`; the extra sign makes the graded sum vanish with the
/// end-rotation convention of [`cyclic_derivative`].
pub fn necklace_sum(w: &Potential) -> NcPoly {
    let q = &*w.quiver;
    let mut out = NcPoly::zero();
    for a in q.arrow_ids() {
        let da = cyclic_derivative(w, a);
        if da.is_zero() {
            continue;
        }
        let deg_a = q.degree(a);
        let term = supercommutator(&NcPoly::from_path(Path::arrow(q, a)), deg_a, &da, w.degree - deg_a);
        if odd(deg_a * (w.degree + 1)) {
            out -= &term;
        } else {
            out += term;
        }
    }
    out
}

pub fn necklace_check(w: &Potential) -> bool {
    necklace_sum(w).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    pub(crate) fn three_loops() -> Arc<GradedQuiver> {
        let mut q = GradedQuiver::new();
        let v = q.add_vertex("1").unwrap();
        for n in ["x", "y", "z"] {
            q.add_arrow(n, v, v, 0).unwrap();
        }
        Arc::new(q)
    }

    fn word(q: &GradedQuiver, names: &[&str]) -> NcPoly {
        NcPoly::from_path(Path::from_names(q, names).unwrap())
    }

    #[test]
    fn canonical_rotation_examples() {
        let q = three_loops();
        let w = canonicalize(&q, &word(&q, &["y", "z", "x"])).unwrap();
        assert_eq!(w.rep(), &word(&q, &["x", "y", "z"]));
        let w = canonicalize(&q, &(word(&q, &["x", "y", "z"]) + word(&q, &["z", "x", "y"]))).unwrap();
        assert_eq!(w.rep(), &word(&q, &["x", "y", "z"]).scale(&rat(2)));
    }

    #[test]
    fn non_cycle_is_rejected() {
        let mut q = GradedQuiver::new();
        let a = q.add_vertex("1").unwrap();
        let b = q.add_vertex("2").unwrap();
        q.add_arrow("a", a, b, 0).unwrap();
        let q = Arc::new(q);
        assert!(matches!(canonicalize(&q, &word(&q, &["a"])), Err(Error::NonCycleTerm(_))));
    }

    #[test]
    fn odd_square_vanishes_cyclically() {
        let mut q = GradedQuiver::new();
        let v = q.add_vertex("1").unwrap();
        q.add_arrow("t", v, v, 1).unwrap();
        let q = Arc::new(q);
        let w = canonicalize(&q, &word(&q, &["t", "t"])).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn cyclic_derivative_examples() {
        let q = three_loops();
        let x = q.arrow_by_name("x").unwrap();
        let y = q.arrow_by_name("y").unwrap();
        let w = canonicalize(&q, &(word(&q, &["x", "y", "z"]) - word(&q, &["x", "z", "y"]))).unwrap();
        assert_eq!(cyclic_derivative(&w, x), word(&q, &["y", "z"]) - word(&q, &["z", "y"]));
        let cube = canonicalize(&q, &word(&q, &["x", "x", "x"])).unwrap();
        assert_eq!(cyclic_derivative(&cube, x), word(&q, &["x", "x"]).scale(&rat(3)));
        assert!(cyclic_derivative(&cube, y).is_zero());
    }

    #[test]
    fn connes_b_splits_each_rotation() {
        let q = three_loops();
        let w = canonicalize(&q, &word(&q, &["x", "y", "z"])).unwrap();
        let b = connes_b(&w);
        let mut expected = HochschildOneChain::zero();
        for (v, u) in [("x", ["y", "z"]), ("y", ["z", "x"]), ("z", ["x", "y"])] {
            expected.add_term(q.arrow_by_name(v).unwrap(), Path::from_names(&q, &u).unwrap(), rat(1), &q);
        }
        assert_eq!(b, expected);
        let e = canonicalize(&q, &NcPoly::unit(&q)).unwrap();
        assert!(connes_b(&e).is_zero());
    }

    #[test]
    fn necklace_examples() {
        let q = three_loops();
        let w = canonicalize(&q, &(word(&q, &["x", "y", "z"]) - word(&q, &["x", "z", "y"]))).unwrap();
        assert!(necklace_check(&w));
        let cube = canonicalize(&q, &word(&q, &["x", "x", "x"])).unwrap();
        assert!(necklace_check(&cube));
    }
}
