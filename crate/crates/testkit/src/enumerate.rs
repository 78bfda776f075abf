use std::sync::Arc;

use cyforge_core::algebra::{GradedQuiver, VertexId};

/// Every ungraded quiver with `1..=max_vertices` vertices and at most
/// `max_arrows` arrows, as multisets of ordered vertex pairs (not up to
/// isomorphism).
pub fn all_quivers(max_vertices: usize, max_arrows: usize) -> Vec<Arc<GradedQuiver>> {
    let mut out = Vec::new();
    for v in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
        let mut chosen = Vec::new();
        multisets(&pairs, 0, max_arrows, &mut chosen, &mut |arrows| {
            let mut q = GradedQuiver::new();
            for k in 1..=v {
                q.add_vertex(k.to_string()).unwrap();
            }
            for (k, &(s, t)) in arrows.iter().enumerate() {
                q.add_arrow(format!("a{k}"), VertexId(s as u32), VertexId(t as u32), 0).unwrap();
            }
            out.push(Arc::new(q));
        });
    }
    out
}

fn multisets<T: Copy>(items: &[T], from: usize, budget: usize, chosen: &mut Vec<T>, emit: &mut impl FnMut(&[T])) {
    emit(chosen);
    if budget == 0 {
        return;
    }
    for i in from..items.len() {
        chosen.push(items[i]);
        multisets(items, i, budget - 1, chosen, emit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_multiset_formula() {
        // one vertex: 1 pair, multisets of size ≤ 2 → 3
        // two vertices: 4 pairs, sizes ≤ 2 → 1 + 4 + 10
        assert_eq!(all_quivers(2, 2).len(), 3 + 15);
    }
}
