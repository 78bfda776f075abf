//! Small standard quivers with potential used throughout the tests, the CLI
//! fixtures and the browser demo.

use std::sync::Arc;

use crate::algebra::{rat, GradedQuiver, NcPoly, Path, Rational};
use crate::completion::qp_from_gldim2;
use crate::error::Result;
use crate::mutation::QuiverWithPotential;
use crate::potential::canonicalize;

/// `c·w_1⋯w_k` for arrow names `w_1, …, w_k` (storage order: `w_k` first).
pub fn monomial(q: &GradedQuiver, names: &[&str], c: Rational) -> Result<NcPoly> {
    Ok(NcPoly::term(Path::from_names(q, names)?, c))
}

/// `Σ c·word`.
pub fn polynomial(q: &GradedQuiver, terms: &[(i64, &[&str])]) -> Result<NcPoly> {
    let mut out = NcPoly::zero();
    for (c, names) in terms {
        out += monomial(q, names, rat(*c))?;
    }
    Ok(out)
}

/// One vertex `1` with loops `x, y, z`.
pub fn three_loops() -> Arc<GradedQuiver> {
    let mut q = GradedQuiver::new();
    let v = q.add_vertex("1").expect("fresh vertex");
    for name in ["x", "y", "z"] {
        q.add_arrow(name, v, v, 0).expect("fresh arrow");
    }
    Arc::new(q)
}

/// `(three loops, xyz − xzy)`.
pub fn three_loops_qp() -> QuiverWithPotential {
    let q = three_loops();
    let w = polynomial(&q, &[(1, &["x", "y", "z"]), (-1, &["x", "z", "y"])]).expect("arrows exist");
    QuiverWithPotential::from_poly(q, &w).expect("cycles")
}

/// Linearly oriented `A_n`: vertices `1..n`, arrows named `a, b, c, …` with
/// the `k`-th arrow going `k+1 → k`.
pub fn linear_a(n: usize) -> Arc<GradedQuiver> {
    let mut q = GradedQuiver::new();
    let vs: Vec<_> = (1..=n).map(|k| q.add_vertex(k.to_string()).expect("fresh vertex")).collect();
    for k in 1..n {
        let name = ((b'a' + (k - 1) as u8 % 26) as char).to_string();
        q.add_arrow(name, vs[k], vs[k - 1], 0).expect("fresh arrow");
    }
    Arc::new(q)
}

/// `A_3` with no potential: `a: 2 → 1`, `b: 3 → 2`.
pub fn a3_qp() -> QuiverWithPotential {
    QuiverWithPotential::without_potential(linear_a(3)).expect("ungraded")
}

/// `A_3` modulo the relation `ab`, turned into the 3-cycle
/// `a, b, rho_r: 1 → 3` with `W = ab·rho_r`.
pub fn three_cycle_qp() -> QuiverWithPotential {
    let q = linear_a(3);
    let r = monomial(&q, &["a", "b"], rat(1)).expect("arrows exist");
    let out = qp_from_gldim2(&q, &[("r".to_string(), r)], None).expect("valid relation");
    QuiverWithPotential::new(out.potential).expect("ungraded")
}

/// Canonicalizes `terms` over `q` into a quiver with potential.
pub fn qp(q: Arc<GradedQuiver>, terms: &[(i64, &[&str])]) -> Result<QuiverWithPotential> {
    let w = polynomial(&q, terms)?;
    QuiverWithPotential::new(canonicalize(&q, &w)?)
}
