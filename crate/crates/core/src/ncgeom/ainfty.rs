use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{format_rational, odd, ArrowId, GradedQuiver, NcPoly, Path, Rational};
use crate::completion::GinzburgAlgebra;
use crate::error::{Error, Result};

use super::tensor::add_map_entry;

/// The operations `b_n` on the dual generators, read off the word-length
/// components of the generator differentials: the length-`n` part of `dw`
/// contributes, for every word `w_1…w_n`, the coefficient of `w` in
/// `b_n(w_1^∨ ⊗ … ⊗ w_n^∨)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AinftyTable {
    /// output generator → arity → input word → coefficient
    entries: BTreeMap<ArrowId, BTreeMap<usize, BTreeMap<Vec<ArrowId>, Rational>>>,
}

/// `Σ_{i<j} |w_i||w_j|`, the Koszul sign of reversing the dualized word.
fn koszul_word_sign(q: &GradedQuiver, word: &[ArrowId]) -> bool {
    let mut total = 0i64;
    let mut acc = 0i64;
    for &w in word {
        let d = q.degree(w);
        total += acc * d;
        acc += d;
    }
    odd(total)
}

/// Splits every generator differential by word length. Fails if some
/// differential has a constant term, i.e. the potential has a linear part.
pub fn ext_ainfty(g: &GinzburgAlgebra) -> Result<AinftyTable> {
    let q = g.quiver();
    let mut entries = BTreeMap::new();
    for w in q.arrow_ids() {
        let dw = g.d_of(w);
        if let Some((p, _)) = dw.terms().find(|(p, _)| p.is_trivial()) {
            return Err(Error::LinearTermPresent(format!(
                "d({}) has a constant term at {}",
                q.arrow_name(w),
                p.display(q)
            )));
        }
        let mut by_arity: BTreeMap<usize, BTreeMap<Vec<ArrowId>, Rational>> = BTreeMap::new();
        for (p, c) in dw.terms() {
            let c = if koszul_word_sign(q, p.arrows()) { -c.clone() } else { c.clone() };
            add_map_entry(by_arity.entry(p.len()).or_default(), p.arrows().to_vec(), c);
        }
        by_arity.retain(|_, m| !m.is_empty());
        if !by_arity.is_empty() {
            entries.insert(w, by_arity);
        }
    }
    Ok(AinftyTable { entries })
}

impl AinftyTable {
    /// Entries of `b_arity` landing on `w`.
    pub fn entry(&self, w: ArrowId, arity: usize) -> Option<&BTreeMap<Vec<ArrowId>, Rational>> {
        self.entries.get(&w).and_then(|m| m.get(&arity))
    }

    /// The arities with at least one nonzero entry.
    pub fn arities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.entries.values().flat_map(|m| m.keys().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn generators(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.entries.keys().copied()
    }

    /// `Σ_n b_n^*(w)`: undoes the Koszul signs and sums the word-length parts.
    pub fn reassemble(&self, q: &GradedQuiver, w: ArrowId) -> NcPoly {
        let mut out = NcPoly::zero();
        for words in self.entries.get(&w).into_iter().flat_map(|m| m.values()) {
            for (word, c) in words {
                let path = Path::from_arrows(q, word).expect("table words come from paths");
                let c = if koszul_word_sign(q, word) { -c.clone() } else { c.clone() };
                out.add_term(path, c);
            }
        }
        out
    }

    /// Reassembles and compares with the differential of every generator;
    /// returns the generators that do not match.
    pub fn round_trip_failures(&self, g: &GinzburgAlgebra) -> Vec<ArrowId> {
        let q = g.quiver();
        q.arrow_ids()
            .filter(|&w| self.reassemble(q, w) != g.d_of(w))
            .collect()
    }

    pub fn display(&self, q: &GradedQuiver) -> String {
        let mut lines = Vec::new();
        for (&w, by_arity) in &self.entries {
            for (arity, words) in by_arity {
                let terms: Vec<String> = words
                    .iter()
                    .map(|(word, c)| {
                        let names: Vec<&str> = word.iter().map(|&a| q.arrow_name(a)).collect();
                        format!("{}·({})", format_rational(c), names.join(" ⊗ "))
                    })
                    .collect();
                lines.push(format!("b_{arity} -> {}: {}", q.arrow_name(w), terms.join(" + ")));
            }
        }
        lines.join("\n")
    }
}

impl fmt::Display for AinftyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A-infinity table with arities {:?}", self.arities())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::catalog::{three_loops, three_loops_qp};
    use crate::completion::ginzburg;
    use crate::potential::canonicalize;

    #[test]
    fn arity_two_entry_at_x_star() {
        let qp = three_loops_qp();
        let g = ginzburg(qp.quiver(), qp.potential(), 3).unwrap();
        let table = ext_ainfty(&g).unwrap();
        let q = g.quiver();
        let id = |n: &str| q.arrow_by_name(n).unwrap();
        let entry = table.entry(id("x*"), 2).unwrap();
        let expected: BTreeMap<Vec<ArrowId>, Rational> =
            [(vec![id("y"), id("z")], rat(1)), (vec![id("z"), id("y")], rat(-1))].into_iter().collect();
        assert_eq!(entry, &expected);
        assert_eq!(table.arities(), vec![2]);
        assert!(table.round_trip_failures(&g).is_empty());
    }

    #[test]
    fn quadratic_part_gives_arity_one() {
        let q = three_loops();
        let w = crate::catalog::polynomial(&q, &[(1, &["x", "y"]), (1, &["x", "y", "z"])]).unwrap();
        let w = canonicalize(&q, &w).unwrap();
        let g = ginzburg(&q, &w, 3).unwrap();
        let table = ext_ainfty(&g).unwrap();
        assert_eq!(table.arities(), vec![1, 2]);
        assert!(table.round_trip_failures(&g).is_empty());
    }

    #[test]
    fn linear_potential_is_rejected() {
        let q = three_loops();
        let w = crate::catalog::polynomial(&q, &[(1, &["x"])]).unwrap();
        let w = canonicalize(&q, &w).unwrap();
        let g = ginzburg(&q, &w, 3).unwrap();
        assert!(matches!(ext_ainfty(&g), Err(Error::LinearTermPresent(_))));
    }
}
