//! Morphisms of stable trees.
//!
//! A morphism `f: source -> target` maps vertices covariantly and surjectively,
//! and maps target edges and tails back into the source injectively. Source
//! edges missed by the edge section are contracted: both endpoints land on the
//! same target vertex. Source tails missed by the tail section are forgotten.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{glue_with_layout, Edge, StableTree, TailLabel, TreeError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("target of the first morphism is not the source of the second")]
    SourceTargetMismatch,
    #[error("tail {0} is contracted by the morphism")]
    TailContracted(TailLabel),
    #[error("no tail labelled {0} in the source")]
    MissingTail(TailLabel),
    #[error("morphism data is inconsistent: {0}")]
    Invalid(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMorphism {
    source: StableTree,
    target: StableTree,
    vertex_map: BTreeMap<VertexId, VertexId>,
    edge_section: BTreeMap<Edge, Edge>,
    tail_section: BTreeMap<TailLabel, TailLabel>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, MorphismError> {
    Err(MorphismError::Invalid(msg.into()))
}

impl TreeMorphism {
    /// Builds a morphism after checking every axiom.
    pub fn new(
        source: StableTree,
        target: StableTree,
        vertex_map: BTreeMap<VertexId, VertexId>,
        edge_section: BTreeMap<Edge, Edge>,
        tail_section: BTreeMap<TailLabel, TailLabel>,
    ) -> Result<TreeMorphism, MorphismError> {
        if !source.vertices().eq(vertex_map.keys().copied()) {
            return invalid("vertex map is not defined on exactly the source vertices");
        }
        let image: BTreeSet<VertexId> = vertex_map.values().copied().collect();
        if !target.vertices().eq(image.iter().copied()) {
            return invalid("vertex map is not surjective onto the target vertices");
        }

        if !target.edges().eq(edge_section.keys().copied()) {
            return invalid("edge section is not defined on exactly the target edges");
        }
        let mut hit = BTreeSet::new();
        for (&te, &se) in &edge_section {
            if !source.has_edge(se) {
                return invalid(format!("edge section sends {te} outside the source"));
            }
            if !hit.insert(se) {
                return invalid(format!("edge section is not injective at {se}"));
            }
            let (x, y) = se.endpoints();
            if Edge::new(vertex_map[&x], vertex_map[&y]) != te {
                return invalid(format!("edge {se} does not lie over {te}"));
            }
        }
        for se in source.edges().filter(|e| !hit.contains(e)) {
            let (x, y) = se.endpoints();
            if vertex_map[&x] != vertex_map[&y] {
                return invalid(format!("edge {se} is dropped but not contracted"));
            }
        }

        if !target.tails().map(|(l, _)| l).eq(tail_section.keys().copied()) {
            return invalid("tail section is not defined on exactly the target tails");
        }
        let mut hit = BTreeSet::new();
        for (&tl, &sl) in &tail_section {
            let Some(sv) = source.tail_vertex(sl) else {
                return invalid(format!("tail section sends {tl} to missing source tail {sl}"));
            };
            if !hit.insert(sl) {
                return invalid(format!("tail section is not injective at {sl}"));
            }
            if Some(vertex_map[&sv]) != target.tail_vertex(tl) {
                return invalid(format!("tail {sl} is not attached over tail {tl}"));
            }
        }

        Ok(TreeMorphism {
            source,
            target,
            vertex_map,
            edge_section,
            tail_section,
        })
    }

    pub fn identity(tree: &StableTree) -> TreeMorphism {
        TreeMorphism {
            source: tree.clone(),
            target: tree.clone(),
            vertex_map: tree.vertices().map(|v| (v, v)).collect(),
            edge_section: tree.edges().map(|e| (e, e)).collect(),
            tail_section: tree.tails().map(|(l, _)| (l, l)).collect(),
        }
    }

    pub fn source(&self) -> &StableTree {
        &self.source
    }

    pub fn target(&self) -> &StableTree {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn edge_section(&self) -> &BTreeMap<Edge, Edge> {
        &self.edge_section
    }

    pub fn tail_section(&self) -> &BTreeMap<TailLabel, TailLabel> {
        &self.tail_section
    }

    pub fn map_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.get(&v).copied()
    }

    /// Source edges outside the image of the edge section.
    pub fn contracted_edges(&self) -> Vec<Edge> {
        let kept: BTreeSet<Edge> = self.edge_section.values().copied().collect();
        self.source.edges().filter(|e| !kept.contains(e)).collect()
    }

    /// Source tails outside the image of the tail section.
    pub fn contracted_tails(&self) -> Vec<TailLabel> {
        let kept: BTreeSet<TailLabel> = self.tail_section.values().copied().collect();
        self.source.tails().map(|(l, _)| l).filter(|l| !kept.contains(l)).collect()
    }

    /// The target tail whose section is `source_tail`, if it is not contracted.
    pub fn target_tail_of(&self, source_tail: TailLabel) -> Option<TailLabel> {
        self.tail_section
            .iter()
            .find(|(_, &s)| s == source_tail)
            .map(|(&t, _)| t)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TreeMorphism) -> Result<TreeMorphism, MorphismError> {
        compose_morphisms(self, next)
    }
}

/// Composite `f` then `g`: vertex maps compose forwards, sections backwards.
pub fn compose_morphisms(f: &TreeMorphism, g: &TreeMorphism) -> Result<TreeMorphism, MorphismError> {
    if f.target != g.source {
        return Err(MorphismError::SourceTargetMismatch);
    }
    let vertex_map = f.vertex_map.iter().map(|(&v, w)| (v, g.vertex_map[w])).collect();
    let edge_section = g.edge_section.iter().map(|(&e, m)| (e, f.edge_section[m])).collect();
    let tail_section = g.tail_section.iter().map(|(&l, m)| (l, f.tail_section[m])).collect();
    TreeMorphism::new(f.source.clone(), g.target.clone(), vertex_map, edge_section, tail_section)
}

/// `f1 * f2`: the morphism between gluings induced by `f1` and `f2`, gluing the
/// sources at `tail1`, `tail2` and the targets at the corresponding tails.
pub fn glue_morphisms(
    f1: &TreeMorphism,
    tail1: TailLabel,
    f2: &TreeMorphism,
    tail2: TailLabel,
) -> Result<TreeMorphism, MorphismError> {
    let mut target_tails = [0; 2];
    for (slot, (f, t)) in target_tails.iter_mut().zip([(f1, tail1), (f2, tail2)]) {
        if f.source.tail_vertex(t).is_none() {
            return Err(MorphismError::MissingTail(t));
        }
        *slot = f.target_tail_of(t).ok_or(MorphismError::TailContracted(t))?;
    }
    let [s1, s2] = target_tails;
    let (source, src_layout) = glue_with_layout(&f1.source, tail1, &f2.source, tail2)?;
    let (target, tgt_layout) = glue_with_layout(&f1.target, s1, &f2.target, s2)?;

    let mut vertex_map = f1.vertex_map.clone();
    for (v, w) in &f2.vertex_map {
        vertex_map.insert(src_layout.right[v], tgt_layout.right[w]);
    }

    let mut edge_section = f1.edge_section.clone();
    let lift_src = |e: &Edge| {
        let (a, b) = e.endpoints();
        Edge::new(src_layout.right[&a], src_layout.right[&b])
    };
    let lift_tgt = |e: &Edge| {
        let (a, b) = e.endpoints();
        Edge::new(tgt_layout.right[&a], tgt_layout.right[&b])
    };
    for (te, se) in &f2.edge_section {
        edge_section.insert(lift_tgt(te), lift_src(se));
    }
    edge_section.insert(tgt_layout.new_edge, src_layout.new_edge);

    let tail_section = f1
        .tail_section
        .iter()
        .filter(|(&t, _)| t != s1)
        .chain(f2.tail_section.iter().filter(|(&t, _)| t != s2))
        .map(|(&t, &s)| (t, s))
        .collect();

    TreeMorphism::new(source, target, vertex_map, edge_section, tail_section)
}
