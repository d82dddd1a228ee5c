//! Random instances on the complete graph, spanning trees and exhaustive oracles.

mod enumerate;
mod sample;
pub(crate) mod tree;

pub use enumerate::{
    decode_pruefer, enumerate_spanning_trees, exact_constrained_mst, random_spanning_tree,
    SpanningTrees, MAX_ENUMERATION_N,
};
pub use sample::{edge_draw, sample_instance, uniform_open, Instance, COST_STREAM, WEIGHT_STREAM};
pub use tree::{mst, Edge, SpanningTree};

/// Position of edge `{u, v}` in the row-major upper triangle of an `n x n` matrix.
#[inline]
pub fn edge_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(b < n && a != b);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Number of edges of `K_n`.
#[inline]
pub fn edge_count(n: usize) -> usize {
    n * (n - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_is_row_major_upper_triangle() {
        let n = 6;
        let mut expected = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(edge_index(n, u, v), expected);
                assert_eq!(edge_index(n, v, u), expected);
                expected += 1;
            }
        }
        assert_eq!(expected, edge_count(n));
    }
}
