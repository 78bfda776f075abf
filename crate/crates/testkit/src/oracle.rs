//! Dense brute-force references.
//!
//! Words are arrow indices in written order: `[w1, …, wn]` means
//! `w1·…·wn`, which traverses `wn` first. A path is `(source, target, word)`
//! so that idempotents (`word = []`) stay distinguishable.

use std::collections::HashMap;

use cyforge_core::algebra::{ArrowId, GradedQuiver};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gen::RawTerm;

pub type Q = BigRational;

/// The combinatorial data the oracles read from a quiver.
#[derive(Clone, Debug)]
pub struct Shape {
    pub vertices: usize,
    /// `(source, target, degree)` per arrow.
    pub arrows: Vec<(usize, usize, i64)>,
}

impl Shape {
    pub fn of(q: &GradedQuiver) -> Shape {
        Shape {
            vertices: q.vertex_count(),
            arrows: (0..q.arrow_count())
                .map(|a| {
                    let arrow = q.arrow(ArrowId(a as u32));
                    (arrow.source.index(), arrow.target.index(), arrow.degree)
                })
                .collect(),
        }
    }

    fn degree(&self, word: &[usize]) -> i64 {
        word.iter().map(|&a| self.arrows[a].2).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OPath {
    pub source: usize,
    pub target: usize,
    pub word: Vec<usize>,
}

impl OPath {
    fn trivial(v: usize) -> OPath {
        OPath {
            source: v,
            target: v,
            word: Vec::new(),
        }
    }

    /// `self · other` (other first), if composable.
    fn then_after(&self, other: &OPath) -> Option<OPath> {
        if self.source != other.target {
            return None;
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Some(OPath {
            source: other.source,
            target: self.target,
            word,
        })
    }

    fn is_cycle(&self) -> bool {
        self.source == self.target
    }
}

/// All paths of exactly `len` arrows.
pub fn paths_of_length(shape: &Shape, len: usize) -> Vec<OPath> {
    let mut level: Vec<OPath> = (0..shape.vertices).map(OPath::trivial).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &level {
            for (a, &(s, t, _)) in shape.arrows.iter().enumerate() {
                if s == p.target {
                    let mut word = vec![a];
                    word.extend_from_slice(&p.word);
                    next.push(OPath {
                        source: p.source,
                        target: t,
                        word,
                    });
                }
            }
        }
        level = next;
    }
    level
}

/// Rank by plain Gaussian elimination on dense rows.
pub fn dense_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else { return 0 };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for c in col..width {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..width {
                    if !rows[rank][c].is_zero() {
                        let delta = &f * &rows[rank][c];
                        rows[r][c] -= delta;
                    }
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A relation: a combination of parallel paths.
pub type Relation = Vec<(Q, OPath)>;

fn path_of_word(shape: &Shape, word: &[usize]) -> OPath {
    OPath {
        source: shape.arrows[*word.last().expect("nonempty")].0,
        target: shape.arrows[word[0]].1,
        word: word.to_vec(),
    }
}

/// `∂_a` of an ungraded cycle combination: for each occurrence of `a` at
/// position `i` in `w1…wn`, the word `w_{i+1}…w_n w_1…w_{i−1}`.
pub fn cyclic_derivative(shape: &Shape, terms: &[RawTerm], a: usize) -> Relation {
    let mut acc: HashMap<OPath, Q> = HashMap::new();
    for (c, w) in terms {
        for i in 0..w.len() {
            if w[i] != a {
                continue;
            }
            let rest: Vec<usize> = w[i + 1..].iter().chain(&w[..i]).copied().collect();
            let p = if rest.is_empty() {
                OPath::trivial(shape.arrows[a].0)
            } else {
                path_of_word(shape, &rest)
            };
            *acc.entry(p).or_insert_with(Q::zero) += c;
        }
    }
    let mut out: Relation = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect();
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

/// Per-length dimensions of `kQ / (relations)` by the length filtration:
/// entry `L` is `dim F_L − dim F_{L−1}` with `F_L` the span of paths of
/// length `≤ L` modulo `{p·r·u : |p| + |u| + maxlen(r) ≤ L}`.
pub fn quotient_dims(shape: &Shape, relations: &[Relation], max_len: usize) -> Vec<usize> {
    let by_len: Vec<Vec<OPath>> = (0..=max_len).map(|l| paths_of_length(shape, l)).collect();
    let mut dims = Vec::new();
    let mut prev = 0usize;
    for cap in 0..=max_len {
        let columns: HashMap<&OPath, usize> = by_len[..=cap].iter().flatten().enumerate().map(|(i, p)| (p, i)).collect();
        let mut rows = Vec::new();
        for r in relations.iter().filter(|r| !r.is_empty()) {
            let m = r.iter().map(|(_, p)| p.word.len()).max().unwrap();
            if m > cap {
                continue;
            }
            let (src, tgt) = (r[0].1.source, r[0].1.target);
            for i in 0..=cap - m {
                for j in 0..=cap - m - i {
                    for left in by_len[i].iter().filter(|p| p.source == tgt) {
                        for right in by_len[j].iter().filter(|p| p.target == src) {
                            let mut row = vec![Q::zero(); columns.len()];
                            for (c, p) in r {
                                let full = left.then_after(p).and_then(|lp| lp.then_after(right)).expect("composable");
                                row[columns[&full]] += c;
                            }
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let cumulative = columns.len() - dense_rank(rows);
        dims.push(cumulative - prev);
        prev = cumulative;
    }
    dims
}

/// Jacobian dimensions of an ungraded QP from its raw terms, optionally
/// killing the idempotents of the listed vertices.
pub fn jacobian_dims(shape: &Shape, terms: &[RawTerm], kill: &[usize], max_len: usize) -> Vec<usize> {
    let mut relations: Vec<Relation> = (0..shape.arrows.len()).map(|a| cyclic_derivative(shape, terms, a)).collect();
    for &v in kill {
        relations.push(vec![(Q::one(), OPath::trivial(v))]);
    }
    quotient_dims(shape, &relations, max_len)
}

/// Number of commutative monomials of degree `len` in `k` variables.
pub fn commutative_monomials(k: usize, len: usize) -> usize {
    let (n, r) = (len + k - 1, k - 1);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Homology of the small complex at one length, computed densely.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallHomology {
    pub hh0: usize,
    pub hh1: usize,
    pub hc1: usize,
    /// Whether `α∘β` vanished as a matrix product.
    pub alpha_beta_zero: bool,
}

fn koszul(p: i64, q: i64) -> Q {
    if (p * q).rem_euclid(2) == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Degree 0: cycles of length `len`. Degree 1: pairs `(v, u)` with `v` an
/// arrow and `vu` a cycle. `α(v ⊗ u) = vu − (−1)^{|v||u|} uv` and
/// `β(v_1…v_n) = Σ_i (−1)^{|v_1…v_{i−1}||v_i…v_n|} v_i ⊗ v_{i+1}…v_n v_1…v_{i−1}`.
///
/// Both maps only permute letters, so the matrices are block diagonal over
/// the multiset of arrows in a cycle; ranks are computed block by block.
pub fn small_homology(shape: &Shape, len: usize) -> SmallHomology {
    let cycles: Vec<OPath> = paths_of_length(shape, len).into_iter().filter(OPath::is_cycle).collect();
    if len == 0 {
        return SmallHomology {
            hh0: cycles.len(),
            hh1: 0,
            hc1: 0,
            alpha_beta_zero: true,
        };
    }
    let mut blocks: HashMap<Vec<usize>, Vec<&OPath>> = HashMap::new();
    for c in &cycles {
        let mut key = c.word.clone();
        key.sort_unstable();
        blocks.entry(key).or_default().push(c);
    }
    let mut total = SmallHomology {
        hh0: 0,
        hh1: 0,
        hc1: 0,
        alpha_beta_zero: true,
    };
    for block in blocks.values() {
        let h = block_homology(shape, block);
        total.hh0 += h.hh0;
        total.hh1 += h.hh1;
        total.hc1 += h.hc1;
        total.alpha_beta_zero &= h.alpha_beta_zero;
    }
    total
}

fn block_homology(shape: &Shape, cycles: &[&OPath]) -> SmallHomology {
    let n0 = cycles.len();
    let idx0: HashMap<&[usize], usize> = cycles.iter().enumerate().map(|(i, p)| (p.word.as_slice(), i)).collect();
    // (v, u) ↔ the cycle v·u: the first letter and the rest.
    let pairs: Vec<(usize, Vec<usize>)> = cycles.iter().map(|p| (p.word[0], p.word[1..].to_vec())).collect();
    let idx1: HashMap<(usize, &[usize]), usize> =
        pairs.iter().enumerate().map(|(i, (v, u))| ((*v, u.as_slice()), i)).collect();
    let n1 = pairs.len();

    let alpha: Vec<Vec<Q>> = pairs
        .iter()
        .map(|(v, u)| {
            let mut row = vec![Q::zero(); n0];
            let mut vu = vec![*v];
            vu.extend_from_slice(u);
            let mut uv = u.clone();
            uv.push(*v);
            row[idx0[vu.as_slice()]] += Q::one();
            row[idx0[uv.as_slice()]] -= koszul(shape.arrows[*v].2, shape.degree(u));
            row
        })
        .collect();
    let beta: Vec<Vec<Q>> = cycles
        .iter()
        .map(|p| {
            let w = &p.word;
            let mut row = vec![Q::zero(); n1];
            for i in 0..w.len() {
                let sign = koszul(shape.degree(&w[..i]), shape.degree(&w[i..]));
                let rest: Vec<usize> = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                row[idx1[&(w[i], rest.as_slice())]] += sign;
            }
            row
        })
        .collect();
    let alpha_beta_zero = beta.iter().all(|b| {
        (0..n0).all(|col| {
            let mut s = Q::zero();
            for (k, coeff) in b.iter().enumerate() {
                if !coeff.is_zero() {
                    s += coeff * &alpha[k][col];
                }
            }
            s.is_zero()
        })
    });
    let rank_alpha = dense_rank(alpha);
    let rank_beta = dense_rank(beta);
    SmallHomology {
        hh0: n0 - rank_alpha,
        hh1: n1 - rank_alpha,
        hc1: n1 - rank_alpha - rank_beta,
        alpha_beta_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn dense_rank_examples() {
        assert_eq!(dense_rank(vec![vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(dense_rank(vec![vec![q(0), q(1)], vec![q(1), q(0)], vec![q(1), q(1)]]), 2);
        assert_eq!(dense_rank(vec![]), 0);
    }

    #[test]
    fn monomial_counts() {
        let counts: Vec<usize> = (0..5).map(|l| commutative_monomials(3, l)).collect();
        assert_eq!(counts, vec![1, 3, 6, 10, 15]);
    }

    #[test]
    fn one_loop_small_homology() {
        let shape = Shape {
            vertices: 1,
            arrows: vec![(0, 0, 0)],
        };
        for len in 1..5 {
            let h = small_homology(&shape, len);
            assert_eq!((h.hh0, h.hh1, h.hc1), (1, 1, 0));
            assert!(h.alpha_beta_zero);
        }
    }
}
