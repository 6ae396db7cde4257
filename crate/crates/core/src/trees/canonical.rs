//! Canonical encoding of stable trees up to tail-preserving isomorphism.
//!
//! An isomorphism that fixes every tail label must fix the vertex carrying
//! the smallest label, so rooting there is canonical. Below the root each
//! vertex is encoded as its sorted tail labels followed by the sorted codes of
//! its children. The token stream is self-delimiting, so equal codes decode to
//! the same rooted shape.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{RawTree, StableTree, TailLabel, VertexId};

const OPEN: u8 = 0x01;
const CLOSE: u8 = 0x02;
const TAIL: u8 = 0x03;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid canonical code hex: {0}")]
pub struct CodeParseError(String);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Result<CanonicalCode, CodeParseError> {
        if !hex.len().is_multiple_of(2) || !hex.bytes().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()) {
            return Err(CodeParseError(hex.to_string()));
        }
        (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<Result<Vec<u8>, _>>()
            .map(CanonicalCode)
            .map_err(|_| CodeParseError(hex.to_string()))
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for CanonicalCode {
    type Err = CodeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CanonicalCode::from_hex(s)
    }
}

struct Rooted {
    adj: BTreeMap<VertexId, Vec<VertexId>>,
    local_tails: BTreeMap<VertexId, Vec<TailLabel>>,
}

impl Rooted {
    fn new(tree: &StableTree) -> Self {
        let mut local_tails: BTreeMap<VertexId, Vec<TailLabel>> = BTreeMap::new();
        // tails() iterates in label order, so each list is already sorted
        for (l, v) in tree.tails() {
            local_tails.entry(v).or_default().push(l);
        }
        Rooted {
            adj: tree.adjacency(),
            local_tails,
        }
    }

    fn tails(&self, v: VertexId) -> &[TailLabel] {
        self.local_tails.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    fn children(&self, v: VertexId, parent: Option<VertexId>) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[&v].iter().copied().filter(move |&w| Some(w) != parent)
    }

    fn encode(&self, v: VertexId, parent: Option<VertexId>) -> Vec<u8> {
        let mut out = vec![OPEN];
        for &l in self.tails(v) {
            out.push(TAIL);
            out.extend_from_slice(&l.to_be_bytes());
        }
        let mut kids: Vec<Vec<u8>> = self.children(v, parent).map(|w| self.encode(w, Some(v))).collect();
        kids.sort();
        for k in kids {
            out.extend(k);
        }
        out.push(CLOSE);
        out
    }

    /// Smallest tail label in the subtree below `v`.
    fn min_label(&self, v: VertexId, parent: Option<VertexId>) -> TailLabel {
        self.children(v, parent)
            .map(|w| self.min_label(w, Some(v)))
            .chain(self.tails(v).iter().copied())
            .min()
            .expect("stable subtrees carry tails")
    }

    fn describe(&self, v: VertexId, parent: Option<VertexId>, out: &mut String) {
        out.push('(');
        let mut first = true;
        for &l in self.tails(v) {
            if !first {
                out.push(' ');
            }
            out.push_str(&l.to_string());
            first = false;
        }
        let mut kids: Vec<(TailLabel, VertexId)> =
            self.children(v, parent).map(|w| (self.min_label(w, Some(v)), w)).collect();
        kids.sort();
        for (_, w) in kids {
            if !first {
                out.push(' ');
            }
            self.describe(w, Some(v), out);
            first = false;
        }
        out.push(')');
    }

    fn number(&self, v: VertexId, parent: Option<VertexId>, ids: &mut BTreeMap<VertexId, VertexId>) {
        ids.insert(v, ids.len() as VertexId);
        let mut kids: Vec<(Vec<u8>, VertexId)> =
            self.children(v, parent).map(|w| (self.encode(w, Some(v)), w)).collect();
        kids.sort();
        for (_, w) in kids {
            self.number(w, Some(v), ids);
        }
    }
}

impl StableTree {
    /// The vertex carrying the smallest tail label.
    pub fn root_vertex(&self) -> VertexId {
        self.tails().next().expect("stable trees have tails").1
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode(Rooted::new(self).encode(self.root_vertex(), None))
    }

    /// Nested-parenthesis description, e.g. `(1 2 (3 4))` for the tree with
    /// tails 1, 2 on one vertex and 3, 4 on the other. Children are listed by
    /// their smallest tail label.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        Rooted::new(self).describe(self.root_vertex(), None, &mut s);
        s
    }

    /// Representative with vertices renumbered `0..k` in canonical preorder.
    /// Isomorphic trees have identical canonical forms.
    pub fn canonical_form(&self) -> StableTree {
        let rooted = Rooted::new(self);
        let mut ids = BTreeMap::new();
        rooted.number(self.root_vertex(), None, &mut ids);
        let raw = RawTree {
            vertices: ids.values().copied().collect(),
            edges: self.edges().map(|e| { let (a, b) = e.endpoints(); (ids[&a], ids[&b]) }).collect(),
            tails: self.tails().map(|(l, v)| (l, ids[&v])).collect(),
        };
        super::validate(&raw).expect("renumbering preserves validity")
    }
}

/// True iff some graph isomorphism maps `a` onto `b` fixing every tail label.
pub fn are_isomorphic(a: &StableTree, b: &StableTree) -> bool {
    a.vertex_count() == b.vertex_count() && a.canonical_code() == b.canonical_code()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::validate;

    fn one_edge(left: [TailLabel; 2], right: [TailLabel; 2]) -> StableTree {
        validate(&RawTree::new().vertex(0).vertex(1).edge(0, 1).tails_at(0, left).tails_at(1, right)).unwrap()
    }

    #[test]
    fn vertex_ids_do_not_matter() {
        let a = StableTree::corolla([1, 2, 3]).unwrap();
        let b = validate(&RawTree::new().vertex(42).tails_at(42, [3, 1, 2])).unwrap();
        assert_eq!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn different_splits_have_different_codes() {
        assert_ne!(one_edge([1, 2], [3, 4]).canonical_code(), one_edge([1, 3], [2, 4]).canonical_code());
        assert_eq!(one_edge([1, 2], [3, 4]).canonical_code(), one_edge([4, 3], [2, 1]).canonical_code());
    }

    #[test]
    fn corollas_on_different_tails_differ() {
        let a = StableTree::corolla([1, 2, 3]).unwrap();
        let b = StableTree::corolla([1, 2, 4]).unwrap();
        assert!(!are_isomorphic(&a, &b));
        assert!(are_isomorphic(&a, &a));
    }

    #[test]
    fn caterpillar_and_snowflake_differ() {
        // (1 2 (3 (4 (5 6)))) vs (1 2 ((3 4) (5 6)))
        let caterpillar = validate(
            &RawTree::new()
                .vertex(0).vertex(1).vertex(2).vertex(3)
                .edge(0, 1).edge(1, 2).edge(2, 3)
                .tails_at(0, [1, 2]).tails_at(1, [3]).tails_at(2, [4]).tails_at(3, [5, 6]),
        )
        .unwrap();
        let snowflake = validate(
            &RawTree::new()
                .vertex(0).vertex(1).vertex(2).vertex(3)
                .edge(0, 1).edge(0, 2).edge(0, 3)
                .tails_at(1, [1, 2]).tails_at(2, [3, 4]).tails_at(3, [5, 6]),
        )
        .unwrap();
        assert_ne!(caterpillar.canonical_code(), snowflake.canonical_code());
        assert_eq!(caterpillar.describe(), "(1 2 (3 (4 (5 6))))");
        assert_eq!(snowflake.describe(), "(1 2 ((3 4) (5 6)))");
    }

    #[test]
    fn hex_round_trip() {
        let code = one_edge([1, 2], [3, 4]).canonical_code();
        let hex = code.to_hex();
        assert!(hex.chars().all(|c| c.is_ascii_digit() || ('a'..='f').contains(&c)));
        assert_eq!(hex.parse::<CanonicalCode>().unwrap(), code);
        assert!(CanonicalCode::from_hex("0G").is_err());
        assert!(CanonicalCode::from_hex("ABCD").is_err());
        assert!(CanonicalCode::from_hex("abc").is_err());
    }

    #[test]
    fn canonical_form_is_shared_by_isomorphic_trees() {
        let a = one_edge([1, 2], [3, 4]);
        let b = a.rename_vertices(|v| 10 - v).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.canonical_form().root_vertex(), 0);
    }
}
