//! The small complex of a path algebra `T(Q)` with zero differential:
//! `α: (Q ⊗ A) ⊗_{R^e} R → A ⊗_{R^e} R` and the cyclic map `β` back, sliced
//! by path length.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{koszul_odd, ArrowId, GradedQuiver, NcPoly, Path};
use crate::error::{Error, Result};
use crate::jacobian::paths_up_to;
use crate::linalg::{rank, SparseVec};
use crate::potential::{split_cycles, HochschildOneChain};

/// A combination of cycles, without cyclic identification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclicChain0 {
    poly: NcPoly,
}

impl CyclicChain0 {
    pub fn new(q: &GradedQuiver, poly: NcPoly) -> Result<Self> {
        if let Some((p, _)) = poly.terms().find(|(p, _)| !p.is_cycle()) {
            return Err(Error::NonCycleTerm(p.display(q).to_string()));
        }
        Ok(CyclicChain0 { poly })
    }

    pub fn poly(&self) -> &NcPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// `v ⊗ u ↦ vu − (−1)^{|v||u|} uv`.
pub fn alpha(q: &GradedQuiver, chain: &HochschildOneChain) -> CyclicChain0 {
    let mut out = NcPoly::zero();
    for ((v, u), c) in chain.terms() {
        let (vu, uv) = both_products(q, *v, u);
        out.add_term(vu, c.clone());
        let sign_odd = koszul_odd(q.degree(*v), u.degree());
        out.add_term(uv, if sign_odd { c.clone() } else { -c.clone() });
    }
    CyclicChain0 { poly: out }
}

fn both_products(q: &GradedQuiver, v: ArrowId, u: &Path) -> (Path, Path) {
    let vp = Path::arrow(q, v);
    let vu = vp.compose(u).expect("v ⊗ u closes up");
    let uv = u.compose(&vp).expect("v ⊗ u closes up");
    (vu, uv)
}

/// Signed one-rotation splitting of every cycle; zero on trivial paths.
pub fn beta(q: &GradedQuiver, chain: &CyclicChain0) -> HochschildOneChain {
    split_cycles(q, &chain.poly)
}

/// The length-`len` part of the small complex.
#[derive(Clone, Debug)]
pub struct SmallComplexSlice {
    pub len: usize,
    /// Cycles of length `len`.
    pub degree0: Vec<Path>,
    /// Pairs `(v, u)` with `vu` a cycle of length `len`.
    pub degree1: Vec<(ArrowId, Path)>,
    /// Row `i` is `α(degree1[i])` in the `degree0` basis.
    pub alpha: Vec<SparseVec>,
    /// Row `i` is `β(degree0[i])` in the `degree1` basis.
    pub beta: Vec<SparseVec>,
}

pub fn small_complex_slice(q: &GradedQuiver, len: usize) -> SmallComplexSlice {
    let cycles: Vec<Path> = paths_up_to(q, len)
        .pop()
        .expect("level present")
        .into_iter()
        .filter(Path::is_cycle)
        .collect();
    slice_from_cycles(q, len, cycles)
}

fn slice_from_cycles(q: &GradedQuiver, len: usize, degree0: Vec<Path>) -> SmallComplexSlice {
    let degree1: Vec<(ArrowId, Path)> = if len == 0 {
        Vec::new()
    } else {
        degree0.iter().map(|p| (p.arrows()[0], p.slice(q, 1, p.len()))).collect()
    };
    let idx0: HashMap<&Path, usize> = degree0.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let idx1: HashMap<(ArrowId, &Path), usize> = degree1.iter().enumerate().map(|(i, (v, u))| ((*v, u), i)).collect();

    let alpha_rows = degree1
        .iter()
        .map(|(v, u)| {
            let mut chain = HochschildOneChain::zero();
            chain.add_term(*v, u.clone(), crate::algebra::rat(1), q);
            alpha(q, &chain).poly.into_terms().map(|(p, c)| (idx0[&p], c)).collect()
        })
        .collect();
    let beta_rows = degree0
        .iter()
        .map(|p| {
            let chain = beta(q, &CyclicChain0 { poly: NcPoly::from_path(p.clone()) });
            chain.terms().map(|((v, u), c)| (idx1[&(*v, u)], c.clone())).collect()
        })
        .collect();
    SmallComplexSlice {
        len,
        degree0,
        degree1,
        alpha: alpha_rows,
        beta: beta_rows,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyDims {
    pub len: usize,
    pub degree0: usize,
    pub degree1: usize,
}

struct Ranks {
    len: usize,
    n0: usize,
    n1: usize,
    rank_alpha: usize,
    rank_beta: usize,
}

fn ranks(q: &GradedQuiver, max_len: usize, with_beta: bool) -> Vec<Ranks> {
    let levels = paths_up_to(q, max_len);
    levels
        .into_par_iter()
        .enumerate()
        .map(|(len, level)| {
            let cycles: Vec<Path> = level.into_iter().filter(Path::is_cycle).collect();
            let slice = slice_from_cycles(q, len, cycles);
            let rank_alpha = rank(slice.alpha.iter().cloned());
            let rank_beta = if with_beta { rank(slice.beta.iter().cloned()) } else { 0 };
            Ranks {
                len,
                n0: slice.degree0.len(),
                n1: slice.degree1.len(),
                rank_alpha,
                rank_beta,
            }
        })
        .collect()
}

/// `HH₀ = coker α` and `HH₁ = ker α` per path length.
pub fn hh_dims(q: &GradedQuiver, max_len: usize) -> Vec<HomologyDims> {
    ranks(q, max_len, false)
        .into_iter()
        .map(|r| HomologyDims {
            len: r.len,
            degree0: r.n0 - r.rank_alpha,
            degree1: r.n1 - r.rank_alpha,
        })
        .collect()
}

/// `HC₀ = coker α` and `HC₁ = ker α / im β` per path length.
pub fn hc_dims(q: &GradedQuiver, max_len: usize) -> Vec<HomologyDims> {
    ranks(q, max_len, true)
        .into_iter()
        .map(|r| HomologyDims {
            len: r.len,
            degree0: r.n0 - r.rank_alpha,
            degree1: r.n1 - r.rank_alpha - r.rank_beta,
        })
        .collect()
}
