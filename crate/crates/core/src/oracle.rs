//! Slow, independent reference computations.
//!
//! Nothing here shares code with the routines it is used to check: tree
//! isomorphism is decided by trying every vertex bijection, and stratum
//! counts come from set systems of compatible splits rather than from
//! building trees.

use std::collections::BTreeMap;

use crate::trees::{Edge, StableTree, VertexId};

/// Tries every bijection between the vertex sets, accepting one that maps
/// edges onto edges and every tail onto the tail with the same label.
pub fn brute_force_isomorphic(a: &StableTree, b: &StableTree) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.tail_labels() != b.tail_labels()
    {
        return false;
    }
    let av: Vec<VertexId> = a.vertices().collect();
    let bv: Vec<VertexId> = b.vertices().collect();
    let mut image: Vec<VertexId> = bv.clone();
    let mut found = false;
    permute(&mut image, 0, &mut |perm| {
        let map: BTreeMap<VertexId, VertexId> = av.iter().copied().zip(perm.iter().copied()).collect();
        let edges_ok = a.edges().all(|e| {
            let (x, y) = e.endpoints();
            b.has_edge(Edge::new(map[&x], map[&y]))
        });
        let tails_ok = a.tails().all(|(l, v)| b.tail_vertex(l) == Some(map[&v]));
        if edges_ok && tails_ok {
            found = true;
        }
        found
    });
    found
}

/// Heap-free recursive permutation walk; stops once `visit` returns true.
fn permute(xs: &mut Vec<VertexId>, k: usize, visit: &mut dyn FnMut(&[VertexId]) -> bool) -> bool {
    if k == xs.len() {
        return visit(xs);
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        if permute(xs, k + 1, visit) {
            xs.swap(k, i);
            return true;
        }
        xs.swap(k, i);
    }
    false
}

/// Number of unordered splits `S | S^c` of `{1..n}` with both parts of size
/// at least 2, by direct subset enumeration.
pub fn bipartition_count(n: u32) -> u64 {
    let mut count = 0u64;
    for mask in 0u64..(1u64 << n) {
        let k = mask.count_ones();
        if k >= 2 && k + 2 <= n {
            count += 1;
        }
    }
    count / 2
}

/// Trivalent stable trees on `n` labeled tails, via the recursion
/// `T(n) = T(n-1) * (2n - 5)`: the n-th tail can be grafted onto any of the
/// `2n - 5` edges and tails of a tree on `n - 1` tails.
pub fn trivalent_count(n: u32) -> u64 {
    assert!(n >= 3);
    (4..=n).fold(1u64, |acc, k| acc * (2 * k as u64 - 5))
}

/// Double factorial `m!!`.
pub fn double_factorial(m: u64) -> u64 {
    (1..=m).rev().step_by(2).product::<u64>().max(1)
}

/// Counts stable trees on `{1..n}` by number of edges.
///
/// A stable tree is the same thing as a set of pairwise compatible splits of
/// its tail set, one split per edge. This enumerates such sets directly.
pub fn split_system_profile(n: u32) -> Vec<u64> {
    assert!((3..=20).contains(&n));
    let full: u32 = (1u32 << n) - 1;
    // Normalize each split to the side without tail 1 (bit 0).
    let splits: Vec<u32> = (1..full)
        .filter(|&m| m & 1 == 0)
        .filter(|&m| {
            let k = m.count_ones();
            k >= 2 && k + 2 <= n
        })
        .collect();
    let compatible = |a: u32, b: u32| {
        let (ac, bc) = (full & !a, full & !b);
        a & b == 0 || a & bc == 0 || ac & b == 0 || ac & bc == 0
    };
    let mut profile = vec![0u64; n as usize - 2];
    fn extend(
        start: usize,
        chosen: &mut Vec<u32>,
        splits: &[u32],
        compatible: &dyn Fn(u32, u32) -> bool,
        profile: &mut Vec<u64>,
    ) {
        profile[chosen.len()] += 1;
        for i in start..splits.len() {
            let s = splits[i];
            if chosen.iter().all(|&c| compatible(c, s)) {
                chosen.push(s);
                extend(i + 1, chosen, splits, compatible, profile);
                chosen.pop();
            }
        }
    }
    extend(0, &mut Vec::new(), &splits, &compatible, &mut profile);
    profile
}

/// Euler's totient by counting residues coprime to `q`.
pub fn totient(q: u32) -> u32 {
    (0..q).filter(|&a| gcd(a, q) == 1).count() as u32
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
