//! Stable labeled trees: the dual graphs of stable genus-zero curves.
//!
//! A [`StableTree`] has opaque vertex identifiers, undirected edges and
//! positively labeled tails (marked points). Free ends of tails are not
//! vertices; a tail is just a `(label, vertex)` pair. Every vertex must carry
//! at least three flags (incident edges plus tails).
//!
//! Trees are immutable values. Every operation here (gluing, contraction,
//! relabeling) validates its output and returns a fresh tree.

mod canonical;
mod json;
mod morphism;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use canonical::{are_isomorphic, CanonicalCode, CodeParseError};
pub use json::{TreeJson, TreeJsonError};
pub use morphism::{compose_morphisms, glue_morphisms, MorphismError, TreeMorphism};

pub type VertexId = u32;
pub type TailLabel = u32;

/// Minimum number of flags (edges plus tails) at a stable vertex.
pub const MIN_VALENCE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no vertices")]
    Empty,
    #[error("vertex {0} is listed more than once")]
    DuplicateVertex(VertexId),
    #[error("reference to unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} is listed more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("tail labels must be positive integers")]
    ZeroTailLabel,
    #[error("tail label {0} is used more than once")]
    DuplicateTailLabel(TailLabel),
    #[error("edge {0}-{1} closes a cycle")]
    Cyclic(VertexId, VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} is unstable: valence {valence} < 3")]
    Unstable { vertex: VertexId, valence: usize },
    #[error("no tail labelled {0}")]
    MissingTail(TailLabel),
    #[error("tail label {0} occurs on both sides of the gluing")]
    TailLabelClash(TailLabel),
    #[error("no edge {0}")]
    NoSuchEdge(Edge),
    #[error("relabeling sends tails {0} and {1} to the same label")]
    NonInjectiveRelabeling(TailLabel, TailLabel),
    #[error("flag {0:?} is not attached to vertex {1}")]
    FlagNotAtVertex(Flag, VertexId),
}

/// A half-edge at a vertex: either a tail or one end of an edge, named by
/// the vertex across it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Tail(TailLabel),
    Edge(VertexId),
}

/// An undirected edge, stored with its smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Edge {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite to `v`. `v` must be an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        debug_assert!(self.contains(v));
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Unchecked tree data, as read from input. Turned into a [`StableTree`] by
/// [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTree {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub tails: Vec<(TailLabel, VertexId)>,
}

impl RawTree {
    pub fn new() -> RawTree {
        RawTree::default()
    }

    pub fn vertex(mut self, v: VertexId) -> Self {
        self.vertices.push(v);
        self
    }

    pub fn edge(mut self, a: VertexId, b: VertexId) -> Self {
        self.edges.push((a, b));
        self
    }

    pub fn tail(mut self, label: TailLabel, v: VertexId) -> Self {
        self.tails.push((label, v));
        self
    }

    pub fn tails_at(mut self, v: VertexId, labels: impl IntoIterator<Item = TailLabel>) -> Self {
        self.tails.extend(labels.into_iter().map(|l| (l, v)));
        self
    }
}

/// A connected, acyclic, stable graph with labeled tails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableTree {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
    tails: BTreeMap<TailLabel, VertexId>,
}

/// Checks connectivity, acyclicity, stability and label uniqueness.
pub fn validate(raw: &RawTree) -> Result<StableTree, TreeError> {
    if raw.vertices.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut vertices = BTreeSet::new();
    for &v in &raw.vertices {
        if !vertices.insert(v) {
            return Err(TreeError::DuplicateVertex(v));
        }
    }
    let mut edges = BTreeSet::new();
    for &(a, b) in &raw.edges {
        for v in [a, b] {
            if !vertices.contains(&v) {
                return Err(TreeError::UnknownVertex(v));
            }
        }
        if a == b {
            return Err(TreeError::SelfLoop(a));
        }
        if !edges.insert(Edge::new(a, b)) {
            return Err(TreeError::DuplicateEdge(a, b));
        }
    }
    let mut tails = BTreeMap::new();
    for &(label, v) in &raw.tails {
        if label == 0 {
            return Err(TreeError::ZeroTailLabel);
        }
        if !vertices.contains(&v) {
            return Err(TreeError::UnknownVertex(v));
        }
        if tails.insert(label, v).is_some() {
            return Err(TreeError::DuplicateTailLabel(label));
        }
    }
    StableTree::from_parts(vertices, edges, tails)
}

struct UnionFind {
    parent: BTreeMap<VertexId, VertexId>,
}

impl UnionFind {
    fn new(vertices: &BTreeSet<VertexId>) -> Self {
        UnionFind {
            parent: vertices.iter().map(|&v| (v, v)).collect(),
        }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        let mut root = v;
        while self.parent[&root] != root {
            root = self.parent[&root];
        }
        let mut cur = v;
        while cur != root {
            let next = self.parent[&cur];
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined. The smaller root wins.
    fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(drop, keep);
        true
    }
}

impl StableTree {
    /// Validation on already-deduplicated parts; shared by [`validate`] and
    /// the constructive operations.
    fn from_parts(
        vertices: BTreeSet<VertexId>,
        edges: BTreeSet<Edge>,
        tails: BTreeMap<TailLabel, VertexId>,
    ) -> Result<StableTree, TreeError> {
        if vertices.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut uf = UnionFind::new(&vertices);
        for e in &edges {
            let (a, b) = e.endpoints();
            if !uf.union(a, b) {
                return Err(TreeError::Cyclic(a, b));
            }
        }
        if edges.len() + 1 != vertices.len() {
            return Err(TreeError::Disconnected);
        }
        let mut valence: BTreeMap<VertexId, usize> = vertices.iter().map(|&v| (v, 0)).collect();
        for e in &edges {
            let (a, b) = e.endpoints();
            *valence.get_mut(&a).unwrap() += 1;
            *valence.get_mut(&b).unwrap() += 1;
        }
        for v in tails.values() {
            *valence.get_mut(v).unwrap() += 1;
        }
        if let Some((&vertex, &valence)) = valence.iter().find(|(_, &k)| k < MIN_VALENCE) {
            return Err(TreeError::Unstable { vertex, valence });
        }
        Ok(StableTree {
            vertices,
            edges,
            tails,
        })
    }

    /// The single-vertex tree (vertex id 0) carrying the given tails.
    pub fn corolla(labels: impl IntoIterator<Item = TailLabel>) -> Result<StableTree, TreeError> {
        validate(&RawTree::new().vertex(0).tails_at(0, labels))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// `(label, vertex)` pairs in increasing label order.
    pub fn tails(&self) -> impl Iterator<Item = (TailLabel, VertexId)> + '_ {
        self.tails.iter().map(|(&l, &v)| (l, v))
    }

    pub fn tail_labels(&self) -> BTreeSet<TailLabel> {
        self.tails.keys().copied().collect()
    }

    pub fn tail_vertex(&self, label: TailLabel) -> Option<VertexId> {
        self.tails.get(&label).copied()
    }

    pub fn tails_at(&self, v: VertexId) -> Vec<TailLabel> {
        self.tails
            .iter()
            .filter(|(_, &w)| w == v)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tail_count(&self) -> usize {
        self.tails.len()
    }

    pub fn is_corolla(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.vertices.iter().next_back().expect("trees are nonempty")
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .iter()
            .filter(|e| e.contains(v))
            .map(|e| e.other(v))
            .collect()
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
            + self.tails.values().filter(|&&w| w == v).count()
    }

    pub(crate) fn adjacency(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            let (a, b) = e.endpoints();
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
        adj
    }

    pub fn to_raw(&self) -> RawTree {
        RawTree {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|e| e.endpoints()).collect(),
            tails: self.tails().collect(),
        }
    }

    /// Same tree with every vertex id replaced through `rename`, which must be
    /// injective on the vertex set.
    pub fn rename_vertices(&self, rename: impl Fn(VertexId) -> VertexId) -> Result<StableTree, TreeError> {
        let raw = self.to_raw();
        validate(&RawTree {
            vertices: raw.vertices.iter().map(|&v| rename(v)).collect(),
            edges: raw.edges.iter().map(|&(a, b)| (rename(a), rename(b))).collect(),
            tails: raw.tails.iter().map(|&(l, v)| (l, rename(v))).collect(),
        })
    }

    /// Applies `relabel` to every tail label; shape and vertex ids are kept.
    pub fn relabel_tails(&self, relabel: impl Fn(TailLabel) -> TailLabel) -> Result<StableTree, TreeError> {
        let mut tails = BTreeMap::new();
        let mut preimage = BTreeMap::new();
        for (&label, &v) in &self.tails {
            let new = relabel(label);
            if new == 0 {
                return Err(TreeError::ZeroTailLabel);
            }
            if let Some(prev) = preimage.insert(new, label) {
                return Err(TreeError::NonInjectiveRelabeling(prev, label));
            }
            tails.insert(new, v);
        }
        StableTree::from_parts(self.vertices.clone(), self.edges.clone(), tails)
    }

    pub fn flags_at(&self, v: VertexId) -> Vec<Flag> {
        let mut flags: Vec<Flag> = self.tails_at(v).into_iter().map(Flag::Tail).collect();
        flags.extend(self.neighbors(v).into_iter().map(Flag::Edge));
        flags
    }

    /// Inverse of contraction: moves the flags `moved` from `v` onto a fresh
    /// vertex (id one above the current maximum) joined to `v` by a new edge.
    /// Both sides must keep at least two of the original flags.
    pub fn split_vertex(&self, v: VertexId, moved: &[Flag]) -> Result<StableTree, TreeError> {
        if !self.has_vertex(v) {
            return Err(TreeError::UnknownVertex(v));
        }
        let fresh = self.max_vertex() + 1;
        let mut edges = self.edges.clone();
        let mut tails = self.tails.clone();
        for &flag in moved {
            match flag {
                Flag::Tail(l) if self.tail_vertex(l) == Some(v) => {
                    tails.insert(l, fresh);
                }
                Flag::Edge(w) if edges.remove(&Edge::new(v, w)) => {
                    edges.insert(Edge::new(fresh, w));
                }
                _ => return Err(TreeError::FlagNotAtVertex(flag, v)),
            }
        }
        edges.insert(Edge::new(v, fresh));
        let mut vertices = self.vertices.clone();
        vertices.insert(fresh);
        StableTree::from_parts(vertices, edges, tails)
    }

    /// Replaces tail `old` by a tail labelled `new` on the same vertex.
    pub fn rename_tail(&self, old: TailLabel, new: TailLabel) -> Result<StableTree, TreeError> {
        if !self.tails.contains_key(&old) {
            return Err(TreeError::MissingTail(old));
        }
        self.relabel_tails(|l| if l == old { new } else { l })
    }
}

/// Where the right-hand tree's vertices ended up inside a gluing.
#[derive(Debug, Clone)]
pub(crate) struct GlueLayout {
    pub right: BTreeMap<VertexId, VertexId>,
    pub new_edge: Edge,
}

/// `(t1, tail1) * (t2, tail2)`: joins the two trees by turning the tails
/// `tail1` and `tail2` into a single new edge.
///
/// Vertices of `t1` keep their ids; those of `t2` are renumbered in increasing
/// order starting just above the largest id of `t1`.
pub fn glue(
    t1: &StableTree,
    tail1: TailLabel,
    t2: &StableTree,
    tail2: TailLabel,
) -> Result<StableTree, TreeError> {
    glue_with_layout(t1, tail1, t2, tail2).map(|(t, _)| t)
}

pub(crate) fn glue_with_layout(
    t1: &StableTree,
    tail1: TailLabel,
    t2: &StableTree,
    tail2: TailLabel,
) -> Result<(StableTree, GlueLayout), TreeError> {
    let a = t1.tail_vertex(tail1).ok_or(TreeError::MissingTail(tail1))?;
    let b = t2.tail_vertex(tail2).ok_or(TreeError::MissingTail(tail2))?;
    let offset = t1.max_vertex() + 1;
    let right: BTreeMap<VertexId, VertexId> = t2
        .vertices()
        .enumerate()
        .map(|(i, v)| (v, offset + i as VertexId))
        .collect();

    let mut vertices = t1.vertices.clone();
    vertices.extend(right.values().copied());
    let mut edges = t1.edges.clone();
    for e in t2.edges() {
        let (x, y) = e.endpoints();
        edges.insert(Edge::new(right[&x], right[&y]));
    }
    let new_edge = Edge::new(a, right[&b]);
    edges.insert(new_edge);

    let mut tails = t1.tails.clone();
    tails.remove(&tail1);
    for (label, v) in t2.tails() {
        if label == tail2 {
            continue;
        }
        if tails.insert(label, right[&v]).is_some() {
            return Err(TreeError::TailLabelClash(label));
        }
    }
    let tree = StableTree::from_parts(vertices, edges, tails)?;
    Ok((tree, GlueLayout { right, new_edge }))
}

/// Contracts one edge. The merged vertex keeps the smaller endpoint id.
pub fn contract_edge(tree: &StableTree, edge: Edge) -> Result<(StableTree, TreeMorphism), TreeError> {
    contract_edges(tree, &[edge])
}

/// Contracts a set of edges at once; each contracted component is merged into
/// its smallest vertex id.
pub fn contract_edges(tree: &StableTree, contracted: &[Edge]) -> Result<(StableTree, TreeMorphism), TreeError> {
    let mut uf = UnionFind::new(&tree.vertices);
    for &e in contracted {
        if !tree.has_edge(e) {
            return Err(TreeError::NoSuchEdge(e));
        }
        let (a, b) = e.endpoints();
        uf.union(a, b);
    }
    let vertex_map: BTreeMap<VertexId, VertexId> =
        tree.vertices().map(|v| (v, uf.find(v))).collect();

    let vertices: BTreeSet<VertexId> = vertex_map.values().copied().collect();
    let mut edges = BTreeSet::new();
    let mut edge_section = BTreeMap::new();
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        let (fa, fb) = (vertex_map[&a], vertex_map[&b]);
        if fa != fb {
            let image = Edge::new(fa, fb);
            edges.insert(image);
            edge_section.insert(image, e);
        }
    }
    let tails: BTreeMap<TailLabel, VertexId> =
        tree.tails().map(|(l, v)| (l, vertex_map[&v])).collect();
    let tail_section = tails.keys().map(|&l| (l, l)).collect();
    let target = StableTree::from_parts(vertices, edges, tails)?;
    let morphism = TreeMorphism::new(tree.clone(), target.clone(), vertex_map, edge_section, tail_section)
        .expect("contraction data satisfies the morphism axioms");
    Ok((target, morphism))
}

/// Contracts every edge, leaving the corolla on the same tails.
pub fn contract_all(tree: &StableTree) -> StableTree {
    let edges: Vec<Edge> = tree.edges().collect();
    contract_edges(tree, &edges)
        .expect("edges come from the tree")
        .0
}

/// Vertex sets of the two components left after removing `edge`; the side
/// holding the smaller endpoint comes first.
pub(crate) fn cut_edge(tree: &StableTree, edge: Edge) -> Option<[BTreeSet<VertexId>; 2]> {
    if !tree.has_edge(edge) {
        return None;
    }
    let adj = tree.adjacency();
    let (a, b) = edge.endpoints();
    let side = |start: VertexId, blocked: VertexId| {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if w != blocked && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    };
    Some([side(a, b), side(b, a)])
}

/// The subtree induced on `part` (one side of a cut at `edge`), with a new tail
/// `label` at the endpoint of `edge` lying in `part`.
pub(crate) fn component_with_tail(
    tree: &StableTree,
    part: &BTreeSet<VertexId>,
    edge: Edge,
    label: TailLabel,
) -> Result<StableTree, TreeError> {
    let (a, b) = edge.endpoints();
    let attach = if part.contains(&a) { a } else { b };
    let edges = tree
        .edges()
        .filter(|e| {
            let (x, y) = e.endpoints();
            part.contains(&x) && part.contains(&y)
        })
        .collect();
    let mut tails: BTreeMap<TailLabel, VertexId> = tree
        .tails()
        .filter(|(_, v)| part.contains(v))
        .collect();
    if tails.insert(label, attach).is_some() {
        return Err(TreeError::DuplicateTailLabel(label));
    }
    StableTree::from_parts(part.clone(), edges, tails)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex(left: [TailLabel; 2], right: [TailLabel; 2]) -> StableTree {
        validate(&RawTree::new().vertex(0).vertex(1).edge(0, 1).tails_at(0, left).tails_at(1, right)).unwrap()
    }

    #[test]
    fn corolla_on_three_tails_is_valid() {
        let t = StableTree::corolla([1, 2, 3]).unwrap();
        assert!(t.is_corolla());
        assert_eq!(t.edge_count(), 0);
    }

    #[test]
    fn corolla_on_two_tails_is_unstable() {
        assert_eq!(
            StableTree::corolla([1, 2]),
            Err(TreeError::Unstable { vertex: 0, valence: 2 })
        );
    }

    #[test]
    fn two_vertex_tree_is_valid() {
        let t = two_vertex([1, 2], [3, 4]);
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.tail_count(), 4);
        assert_eq!(t.valence(0), 3);
    }

    #[test]
    fn validation_errors_name_the_violation() {
        let cyclic = RawTree::new()
            .vertex(0)
            .vertex(1)
            .vertex(2)
            .edge(0, 1)
            .edge(1, 2)
            .edge(2, 0)
            .tails_at(0, [1])
            .tails_at(1, [2])
            .tails_at(2, [3]);
        assert!(matches!(validate(&cyclic), Err(TreeError::Cyclic(..))));

        let disconnected = RawTree::new().vertex(0).vertex(1).tails_at(0, [1, 2, 3]).tails_at(1, [4, 5, 6]);
        assert_eq!(validate(&disconnected), Err(TreeError::Disconnected));

        let dup = RawTree::new().vertex(0).tails_at(0, [1, 2, 2]);
        assert_eq!(validate(&dup), Err(TreeError::DuplicateTailLabel(2)));

        let lonely_leaf = RawTree::new().vertex(0).vertex(1).edge(0, 1).tails_at(0, [1, 2]).tails_at(1, [3]);
        assert_eq!(
            validate(&lonely_leaf),
            Err(TreeError::Unstable { vertex: 1, valence: 2 })
        );

        assert_eq!(validate(&RawTree::new()), Err(TreeError::Empty));
        assert_eq!(
            validate(&RawTree::new().vertex(0).vertex(0)),
            Err(TreeError::DuplicateVertex(0))
        );
        assert_eq!(
            validate(&RawTree::new().vertex(0).tails_at(7, [1, 2, 3])),
            Err(TreeError::UnknownVertex(7))
        );
        assert_eq!(
            validate(&RawTree::new().vertex(0).edge(0, 0).tails_at(0, [1, 2, 3])),
            Err(TreeError::SelfLoop(0))
        );
        assert_eq!(
            validate(&RawTree::new().vertex(0).tails_at(0, [0, 1, 2])),
            Err(TreeError::ZeroTailLabel)
        );
    }

    #[test]
    fn glue_two_corollas_gives_one_edge_tree() {
        let left = StableTree::corolla([1, 2, 100]).unwrap();
        let right = StableTree::corolla([200, 3, 4]).unwrap();
        let glued = glue(&left, 100, &right, 200).unwrap();
        assert!(are_isomorphic(&glued, &two_vertex([1, 2], [3, 4])));
        assert_eq!(glued.edge_count(), 1);
        assert_eq!(glued.tail_labels(), BTreeSet::from([1, 2, 3, 4]));
    }

    #[test]
    fn glue_is_symmetric() {
        let left = StableTree::corolla([1, 2, 100]).unwrap();
        let right = two_vertex([200, 5], [6, 7]);
        let ab = glue(&left, 100, &right, 200).unwrap();
        let ba = glue(&right, 200, &left, 100).unwrap();
        assert!(are_isomorphic(&ab, &ba));
    }

    #[test]
    fn glue_onto_one_edge_tree_gives_caterpillar() {
        let left = StableTree::corolla([1, 2, 100]).unwrap();
        let right = two_vertex([200, 5], [6, 7]);
        let glued = glue(&left, 100, &right, 200).unwrap();
        let caterpillar = validate(
            &RawTree::new()
                .vertex(0)
                .vertex(1)
                .vertex(2)
                .edge(0, 1)
                .edge(1, 2)
                .tails_at(0, [1, 2])
                .tails_at(1, [5])
                .tails_at(2, [6, 7]),
        )
        .unwrap();
        assert_eq!(glued.canonical_code(), caterpillar.canonical_code());
        assert_eq!(glued.edge_count(), 2);
    }

    #[test]
    fn glue_errors() {
        let left = StableTree::corolla([1, 2, 3]).unwrap();
        let right = StableTree::corolla([3, 4, 5]).unwrap();
        assert_eq!(glue(&left, 9, &right, 5), Err(TreeError::MissingTail(9)));
        assert_eq!(glue(&left, 1, &right, 5), Err(TreeError::TailLabelClash(3)));
        // The glued tails themselves may share a label.
        assert!(glue(&left, 3, &right, 3).is_ok());
    }

    #[test]
    fn contracting_the_only_edge_gives_corolla() {
        let t = two_vertex([1, 2], [3, 4]);
        let (c, f) = contract_edge(&t, Edge::new(0, 1)).unwrap();
        assert_eq!(c, StableTree::corolla([1, 2, 3, 4]).unwrap());
        assert_eq!(f.contracted_edges(), vec![Edge::new(0, 1)]);
        assert_eq!(
            contract_edge(&t, Edge::new(0, 5)).unwrap_err(),
            TreeError::NoSuchEdge(Edge::new(0, 5))
        );
    }

    #[test]
    fn contracting_a_caterpillar_edge_leaves_a_two_three_split() {
        let cat = validate(
            &RawTree::new()
                .vertex(0)
                .vertex(1)
                .vertex(2)
                .edge(0, 1)
                .edge(1, 2)
                .tails_at(0, [1, 2])
                .tails_at(1, [3])
                .tails_at(2, [4, 5]),
        )
        .unwrap();
        for e in cat.edges() {
            let (c, _) = contract_edge(&cat, e).unwrap();
            assert_eq!(c.edge_count(), 1);
            let mut sizes: Vec<usize> = c.vertices().map(|v| c.tails_at(v).len()).collect();
            sizes.sort();
            assert_eq!(sizes, vec![2, 3]);
        }
        assert_eq!(contract_all(&cat), StableTree::corolla(1..=5).unwrap());
    }

    #[test]
    fn relabel_tails_checks_injectivity() {
        let t = two_vertex([1, 2], [3, 4]);
        assert_eq!(t.relabel_tails(|l| l).unwrap(), t);
        let swapped = t.relabel_tails(|l| match l {
            2 => 3,
            3 => 2,
            l => l,
        });
        assert!(!are_isomorphic(&swapped.unwrap(), &t));
        assert_eq!(
            t.relabel_tails(|l| if l == 4 { 3 } else { l }),
            Err(TreeError::NonInjectiveRelabeling(3, 4))
        );
        let c = StableTree::corolla([1, 2, 3]).unwrap();
        let swapped = c.relabel_tails(|l| [0, 2, 1, 3][l as usize]).unwrap();
        assert_eq!(swapped.canonical_code(), c.canonical_code());
    }

    #[test]
    fn split_vertex_undoes_contraction() {
        let c = StableTree::corolla([1, 2, 3, 4]).unwrap();
        let t = c.split_vertex(0, &[Flag::Tail(3), Flag::Tail(4)]).unwrap();
        assert_eq!(t, two_vertex([1, 2], [3, 4]));
        assert_eq!(contract_all(&t), c);
        assert!(matches!(
            c.split_vertex(0, &[Flag::Tail(4)]),
            Err(TreeError::Unstable { .. })
        ));
        assert_eq!(
            t.split_vertex(0, &[Flag::Tail(3)]),
            Err(TreeError::FlagNotAtVertex(Flag::Tail(3), 0))
        );
        let moved_edge = t
            .split_vertex(1, &[])
            .unwrap_err();
        assert!(matches!(moved_edge, TreeError::Unstable { .. }));
    }

    #[test]
    fn cut_and_component() {
        let t = two_vertex([1, 2], [3, 4]);
        let [left, right] = cut_edge(&t, Edge::new(0, 1)).unwrap();
        assert_eq!(left, BTreeSet::from([0]));
        let c = component_with_tail(&t, &right, Edge::new(0, 1), 9).unwrap();
        assert_eq!(c.tail_labels(), BTreeSet::from([3, 4, 9]));
    }
}
