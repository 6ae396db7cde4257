//! JSON form of a stable tree:
//! `{"vertices": [id...], "edges": [[id,id]...], "tails": {"label": id, ...}}`.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{validate, RawTree, StableTree, TailLabel, TreeError, VertexId};

#[derive(Debug, Error)]
pub enum TreeJsonError {
    #[error("malformed tree JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("field `tails`: key {0:?} is not a positive integer label")]
    BadTailLabel(String),
    #[error("invalid tree: {0}")]
    Invalid(#[from] TreeError),
}

/// Tail entries in document order. Duplicate keys are kept so that
/// validation can report them instead of silently keeping the last one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TailEntries(pub Vec<(String, VertexId)>);

impl<'de> Deserialize<'de> for TailEntries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = TailEntries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from tail label to vertex id")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<TailEntries, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, VertexId>()? {
                    out.push((k, v));
                }
                Ok(TailEntries(out))
            }
        }

        d.deserialize_map(EntriesVisitor)
    }
}

impl Serialize for TailEntries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    pub tails: TailEntries,
}

impl TreeJson {
    pub fn to_raw(&self) -> Result<RawTree, TreeJsonError> {
        let tails = self
            .tails
            .0
            .iter()
            .map(|(k, v)| match k.parse::<TailLabel>() {
                Ok(l) if l > 0 && l.to_string() == *k => Ok((l, *v)),
                _ => Err(TreeJsonError::BadTailLabel(k.clone())),
            })
            .collect::<Result<_, _>>()?;
        Ok(RawTree {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|&[a, b]| (a, b)).collect(),
            tails,
        })
    }
}

impl From<&StableTree> for TreeJson {
    fn from(t: &StableTree) -> TreeJson {
        TreeJson {
            vertices: t.vertices().collect(),
            edges: t.edges().map(|e| { let (a, b) = e.endpoints(); [a, b] }).collect(),
            // numeric label order, not string order
            tails: TailEntries(t.tails().map(|(l, v)| (l.to_string(), v)).collect()),
        }
    }
}

impl StableTree {
    pub fn from_json_str(s: &str) -> Result<StableTree, TreeJsonError> {
        let doc: TreeJson = serde_json::from_str(s)?;
        Ok(validate(&doc.to_raw()?)?)
    }

    /// Compact JSON with vertices, edges and tails in increasing order.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&TreeJson::from(self)).expect("tree JSON serializes")
    }
}
