//! Boundary strata of the moduli space of stable genus-zero curves with `n`
//! marked points, one per isomorphism class of stable tree on tails `{1..n}`.
//!
//! The codimension of a stratum is the edge count of its tree. The closure
//! order is generated by single-edge contractions: a cover `(lower, upper)`
//! means `upper` is `lower` with one edge contracted, so the corolla (the open
//! stratum) sits at the top.
//!
//! Separately, [`operadic_less`] implements the order generated by gluing:
//! `pi < tau` when `pi` is a gluing of some stable tree onto `tau`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trees::{
    component_with_tail, contract_edge, cut_edge, glue, CanonicalCode, Flag, StableTree, TailLabel, TreeError,
};

/// Largest `n` accepted without an explicit override. Counts grow
/// super-exponentially: 39 208 strata for `n = 8`, 660 032 for `n = 9`.
pub const DEFAULT_MAX_N: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("n = {n} is outside the supported range 3..={max}")]
    OutOfRange { n: u32, max: u32 },
    #[error("tail {0} of the target is grafted more than once")]
    DuplicateGraftTail(TailLabel),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn check_range(n: u32, max_n: u32) -> Result<(), StrataError> {
    if n < 3 || n > max_n {
        Err(StrataError::OutOfRange { n, max: max_n })
    } else {
        Ok(())
    }
}

/// Every way of moving a part of the flags at `v` onto a new vertex so that
/// both sides keep at least two flags; each unordered split appears once.
fn vertex_splits(tree: &StableTree, v: u32) -> impl Iterator<Item = StableTree> + '_ {
    let flags = tree.flags_at(v);
    let d = flags.len();
    // flags[0] always stays, which picks one side of each unordered split
    let masks = if d >= 4 { 1u64..(1u64 << (d - 1)) } else { 0..0 };
    masks.filter_map(move |mask| {
        let k = mask.count_ones() as usize;
        if k < 2 || k + 2 > d {
            return None;
        }
        let moved: Vec<Flag> = (0..d - 1).filter(|i| mask >> i & 1 == 1).map(|i| flags[i + 1]).collect();
        Some(tree.split_vertex(v, &moved).expect("split keeps both sides stable"))
    })
}

/// One representative (in canonical form) per isomorphism class of stable
/// tree with tails `{1..n}`, sorted by canonical code.
pub fn enumerate_trees(n: u32) -> Result<Vec<StableTree>, StrataError> {
    enumerate_trees_bounded(n, DEFAULT_MAX_N)
}

pub fn enumerate_trees_bounded(n: u32, max_n: u32) -> Result<Vec<StableTree>, StrataError> {
    check_range(n, max_n)?;
    let mut all: BTreeMap<CanonicalCode, StableTree> = BTreeMap::new();
    let corolla = StableTree::corolla(1..=n)?;
    let mut layer = vec![corolla.clone()];
    all.insert(corolla.canonical_code(), corolla);
    while !layer.is_empty() {
        let mut next: BTreeMap<CanonicalCode, StableTree> = BTreeMap::new();
        for tree in &layer {
            for v in tree.vertices() {
                for split in vertex_splits(tree, v) {
                    next.entry(split.canonical_code()).or_insert_with(|| split.canonical_form());
                }
            }
        }
        layer = next.values().cloned().collect();
        all.extend(next);
    }
    Ok(all.into_values().collect())
}

/// The stratification poset of `M_{0,n}` bar.
#[derive(Debug, Clone)]
pub struct StratumPoset {
    n: u32,
    trees: Vec<StableTree>,
    codes: Vec<CanonicalCode>,
    index: HashMap<CanonicalCode, usize>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

/// Serialized form: `{"n": n, "nodes": [code...], "covers": [[i,j]...]}`,
/// with indices into the sorted node list and `i` the lower node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: u32,
    pub nodes: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

/// Stratum counts by codimension `0..=n-3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimProfile(pub Vec<usize>);

impl CodimProfile {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn at(&self, codim: usize) -> usize {
        self.0.get(codim).copied().unwrap_or(0)
    }
}

impl std::fmt::Display for CodimProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "codim: [{}] total: {}", parts.join(", "), self.total())
    }
}

pub fn build_poset(n: u32) -> Result<StratumPoset, StrataError> {
    build_poset_bounded(n, DEFAULT_MAX_N)
}

pub fn build_poset_bounded(n: u32, max_n: u32) -> Result<StratumPoset, StrataError> {
    let trees = enumerate_trees_bounded(n, max_n)?;
    let codes: Vec<CanonicalCode> = trees.iter().map(StableTree::canonical_code).collect();
    let index: HashMap<CanonicalCode, usize> = codes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut covers = BTreeSet::new();
    for (i, tree) in trees.iter().enumerate() {
        for e in tree.edges() {
            let (upper, _) = contract_edge(tree, e)?;
            covers.insert((i, index[&upper.canonical_code()]));
        }
    }
    let covers: Vec<(usize, usize)> = covers.into_iter().collect();
    let mut up = vec![Vec::new(); trees.len()];
    let mut down = vec![Vec::new(); trees.len()];
    for &(lo, hi) in &covers {
        up[lo].push(hi);
        down[hi].push(lo);
    }
    Ok(StratumPoset {
        n,
        trees,
        codes,
        index,
        covers,
        up,
        down,
    })
}

impl StratumPoset {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn nodes(&self) -> &[StableTree] {
        &self.trees
    }

    pub fn node(&self, i: usize) -> &StableTree {
        &self.trees[i]
    }

    pub fn code(&self, i: usize) -> &CanonicalCode {
        &self.codes[i]
    }

    pub fn index_of_code(&self, code: &CanonicalCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn index_of(&self, tree: &StableTree) -> Option<usize> {
        self.index_of_code(&tree.canonical_code())
    }

    /// Cover pairs `(lower, upper)` in increasing order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn codim(&self, i: usize) -> usize {
        self.trees[i].edge_count()
    }

    /// Index of the corolla.
    pub fn maximum(&self) -> usize {
        self.trees.iter().position(StableTree::is_corolla).expect("the corolla is always enumerated")
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    /// `i <= j` in the transitive closure of the covers.
    pub fn is_below(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            for &m in &self.up[k] {
                if m == j {
                    return true;
                }
                if !seen[m] && self.codim(m) > self.codim(j) {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        false
    }

    /// Shortest and longest chain length (in covers) from each node up to the
    /// top, as `(min, max)` pairs indexed by node.
    pub fn chain_lengths_to_top(&self) -> Vec<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.codim(i));
        let mut out = vec![(0usize, 0usize); self.len()];
        for i in order {
            if self.up[i].is_empty() {
                continue;
            }
            let lens = self.up[i].iter().map(|&j| out[j]);
            let lo = lens.clone().map(|(a, _)| a).min().unwrap() + 1;
            let hi = lens.map(|(_, b)| b).max().unwrap() + 1;
            out[i] = (lo, hi);
        }
        out
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            nodes: self.codes.iter().map(CanonicalCode::to_hex).collect(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    /// Graphviz digraph: one node per stratum, sorted by code and labeled by
    /// the nested-parenthesis description of its tree, one arc per cover from
    /// the lower stratum to the upper one.
    pub fn export_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph strata_{} {{", self.n).unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        for (i, t) in self.trees.iter().enumerate() {
            writeln!(out, "  s{i} [label=\"{}\" codim={}];", t.describe(), t.edge_count()).unwrap();
        }
        for &(lo, hi) in &self.covers {
            writeln!(out, "  s{lo} -> s{hi};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn codim_profile(poset: &StratumPoset) -> CodimProfile {
    let mut counts = vec![0usize; poset.n() as usize - 2];
    for t in poset.nodes() {
        counts[t.edge_count()] += 1;
    }
    CodimProfile(counts)
}

/// True iff `pi` is isomorphic to a gluing `(sigma, t1) * (tau, t2)` for some
/// stable `sigma` and tails `t1`, `t2`.
///
/// Cutting an edge of `pi` leaves two halves. The half playing `tau` must
/// carry every tail of `tau` except one, `t2`, which takes the place of the
/// cut edge.
pub fn operadic_less(pi: &StableTree, tau: &StableTree) -> bool {
    let tau_labels = tau.tail_labels();
    let tau_code = tau.canonical_code();
    for e in pi.edges() {
        let halves = cut_edge(pi, e).expect("edge of pi");
        for half in &halves {
            let half_labels: BTreeSet<TailLabel> =
                pi.tails().filter(|(_, v)| half.contains(v)).map(|(l, _)| l).collect();
            if half_labels.len() + 1 != tau_labels.len() || !half_labels.is_subset(&tau_labels) {
                continue;
            }
            let extra = *tau_labels.difference(&half_labels).next().expect("one label left over");
            let candidate = component_with_tail(pi, half, e, extra).expect("halves of a stable tree are stable");
            if candidate.canonical_code() == tau_code {
                return true;
            }
        }
    }
    false
}

/// Grafts each input tree onto `target`: for `(t, tree, s)` the tail `t` of
/// the target is glued to the tail `s` of `tree`. Labels must already be
/// disjoint.
pub fn operadic_compose(
    target: &StableTree,
    inputs: &[(TailLabel, StableTree, TailLabel)],
) -> Result<StableTree, StrataError> {
    let mut seen = BTreeSet::new();
    for (t, _, _) in inputs {
        if !seen.insert(*t) {
            return Err(StrataError::DuplicateGraftTail(*t));
        }
    }
    let mut acc = target.clone();
    for (t, tree, s) in inputs {
        acc = glue(&acc, *t, tree, *s)?;
    }
    Ok(acc)
}
