//! Paths and noncommutative polynomials over a graded quiver, with exact
//! rational coefficients.

mod path;
mod poly;
mod quiver;
mod rational;

pub use path::{Path, PathDisplay};
pub use poly::{NcPoly, PolyDisplay};
pub use quiver::{Arrow, ArrowId, GradedQuiver, VertexId};
pub use rational::{format_rational, koszul_odd, koszul_sign, odd, parse_rational, rat, ratio, sign, Rational};

/// Supercommutator `[f, g] = fg − (−1)^{|f||g|} gf` for homogeneous `f`, `g`
/// of the given degrees.
pub fn supercommutator(f: &NcPoly, f_deg: i64, g: &NcPoly, g_deg: i64) -> NcPoly {
    let fg = f * g;
    let gf = g * f;
    if koszul_odd(f_deg, g_deg) {
        fg + gf
    } else {
        fg - gf
    }
}
