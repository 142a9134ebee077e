//! Fixtures shared by the benchmarks.

use walkmin_core::reduction::{
    build_enum_instance, build_membership_instance, ReductionInstance, SatInstance,
};
use walkmin_core::{Edge, Graph, RegExp};

/// The enumeration gadget graph of a seeded random formula.
pub fn gadget(k: usize, l: usize, seed: u64) -> ReductionInstance {
    build_enum_instance(&SatInstance::seeded(k, l, seed).expect("k >= 3"))
}

/// The membership-variant graph of the same formula, witness included.
pub fn membership_gadget(k: usize, l: usize, seed: u64) -> ReductionInstance {
    build_membership_instance(&SatInstance::seeded(k, l, seed).expect("k >= 3"))
}

/// An `n × n` grid with `r` edges going right and `d` edges going down,
/// plus a `b` edge back from each row end to its start. Plenty of cycles
/// and many same-length walks between opposite corners.
pub fn grid(n: usize) -> Graph {
    let name = |i: usize, j: usize| format!("g{i}_{j}");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if j + 1 < n {
                edges.push(Edge::new(name(i, j), "r", name(i, j + 1)));
            }
            if i + 1 < n {
                edges.push(Edge::new(name(i, j), "d", name(i + 1, j)));
            }
        }
        edges.push(Edge::new(name(i, n - 1), "b", name(i, 0)));
    }
    let vertices = (0..n).flat_map(|i| (0..n).map(move |j| name(i, j)));
    Graph::new(vertices, ["r", "d", "b"], edges).expect("grid is well formed")
}

pub fn grid_corners(n: usize) -> (String, String) {
    ("g0_0".into(), format!("g{}_{}", n - 1, n - 1))
}

/// `(x1 + x2 + ... + xn)*` over single-character labels, cycling through
/// `labels`, for automaton construction benchmarks.
pub fn long_union_star(n: usize, labels: &[&str]) -> RegExp {
    let body = (0..n)
        .map(|i| RegExp::atom(labels[i % labels.len()]))
        .reduce(RegExp::union)
        .unwrap_or(RegExp::Epsilon);
    RegExp::star(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(grid(3).vertex_count(), 9);
        assert_eq!(grid(3).edge_count(), 6 + 6 + 3);
        assert_eq!(long_union_star(5, &["a", "b"]).atom_count(), 5);
        assert!(membership_gadget(3, 1, 0).witness.is_some());
        assert_eq!(gadget(3, 2, 0).l(), 2);
    }
}
