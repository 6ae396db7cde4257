//! Coherent families: finite truncations of the projective limit of `mGT_q`.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_modulus, closure_bounded, compose, u_qp, MgtElement, MgtError, DEFAULT_MAX_MODULUS};

/// Cache of `mGT_q` for the levels seen so far.
#[derive(Debug, Clone)]
pub struct Tower {
    max_q: u32,
    groups: BTreeMap<u32, BTreeSet<MgtElement>>,
}

impl Default for Tower {
    fn default() -> Self {
        Tower::new(DEFAULT_MAX_MODULUS)
    }
}

impl Tower {
    pub fn new(max_q: u32) -> Tower {
        Tower {
            max_q,
            groups: BTreeMap::new(),
        }
    }

    pub fn group(&mut self, q: u32) -> Result<&BTreeSet<MgtElement>, MgtError> {
        if !self.groups.contains_key(&q) {
            let g = closure_bounded(q, self.max_q)?;
            self.groups.insert(q, g);
        }
        Ok(&self.groups[&q])
    }

    pub fn contains(&mut self, e: &MgtElement) -> Result<bool, MgtError> {
        Ok(self.group(e.modulus())?.contains(e))
    }
}

/// One element of `mGT_q` for each level `q` of a finite level set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoherentFamily {
    elements: BTreeMap<u32, MgtElement>,
}

impl CoherentFamily {
    /// Keys must be levels `>= 2` matching each element's modulus. Coherence
    /// is not checked here; see [`validate_family`].
    pub fn new(elements: BTreeMap<u32, MgtElement>) -> Result<CoherentFamily, MgtError> {
        for (&q, e) in &elements {
            check_modulus(q, u32::MAX)?;
            if e.modulus() != q {
                return Err(MgtError::ModulusMismatch(q, e.modulus()));
            }
        }
        Ok(CoherentFamily { elements })
    }

    pub fn from_elements(elements: impl IntoIterator<Item = MgtElement>) -> Result<CoherentFamily, MgtError> {
        let mut map = BTreeMap::new();
        for e in elements {
            let q = e.modulus();
            if map.insert(q, e).is_some() {
                return Err(MgtError::InvalidFamily(format!("level {q} given twice")));
            }
        }
        CoherentFamily::new(map)
    }

    pub fn identity(levels: &[u32]) -> Result<CoherentFamily, MgtError> {
        CoherentFamily::from_elements(levels.iter().map(|&q| MgtElement::identity(q)))
    }

    pub fn theta(levels: &[u32]) -> Result<CoherentFamily, MgtError> {
        CoherentFamily::from_elements(levels.iter().map(|&q| MgtElement::theta(q)))
    }

    pub fn levels(&self) -> Vec<u32> {
        self.elements.keys().copied().collect()
    }

    pub fn get(&self, q: u32) -> Option<&MgtElement> {
        self.elements.get(&q)
    }

    pub fn elements(&self) -> impl Iterator<Item = (u32, &MgtElement)> {
        self.elements.iter().map(|(&q, e)| (q, e))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn with(&self, e: MgtElement) -> CoherentFamily {
        let mut elements = self.elements.clone();
        elements.insert(e.modulus(), e);
        CoherentFamily { elements }
    }
}

impl Serialize for CoherentFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Tables<'a>(&'a BTreeMap<u32, MgtElement>);
        impl Serialize for Tables<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (q, e) in self.0 {
                    m.serialize_entry(&q.to_string(), e.table())?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("levels", &self.levels())?;
        m.serialize_entry("elements", &Tables(&self.elements))?;
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    levels: Vec<u32>,
    elements: BTreeMap<String, Vec<u32>>,
}

impl<'de> Deserialize<'de> for CoherentFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FamilyJson::deserialize(d)?;
        let mut elements = BTreeMap::new();
        for (key, table) in j.elements {
            let q: u32 = key.parse().map_err(|_| D::Error::custom(format!("bad level key {key:?}")))?;
            if table.len() != q as usize {
                return Err(D::Error::custom(format!("level {q} needs a table of length {q}")));
            }
            let e = MgtElement::from_table(table).map_err(D::Error::custom)?;
            elements.insert(q, e);
        }
        let declared: BTreeSet<u32> = j.levels.iter().copied().collect();
        if declared.len() != j.levels.len() || declared.iter().ne(elements.keys()) {
            return Err(D::Error::custom("levels do not match element keys"));
        }
        CoherentFamily::new(elements).map_err(D::Error::custom)
    }
}

/// Why a family is not coherent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyFailure {
    NotInGroup { q: u32 },
    Incoherent { q: u32, p: u32 },
    Error(MgtError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub failure: Option<FamilyFailure>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Every element lies in `mGT_q` at its level, and `u_{q,p}(f_q) = f_p`
/// whenever `p | q` are both levels.
pub fn validate_family(tower: &mut Tower, f: &CoherentFamily) -> FamilyReport {
    let failure = (|| {
        for (q, e) in f.elements() {
            match tower.contains(e) {
                Ok(true) => {}
                Ok(false) => return Some(FamilyFailure::NotInGroup { q }),
                Err(err) => return Some(FamilyFailure::Error(err)),
            }
        }
        for (q, e) in f.elements() {
            for (p, ep) in f.elements() {
                if p < q && q % p == 0 && u_qp(e, p).as_ref() != Ok(ep) {
                    return Some(FamilyFailure::Incoherent { q, p });
                }
            }
        }
        None
    })();
    FamilyReport { failure }
}

fn ensure_valid(tower: &mut Tower, f: &CoherentFamily) -> Result<(), MgtError> {
    match validate_family(tower, f).failure {
        None => Ok(()),
        Some(FamilyFailure::Error(e)) => Err(e),
        Some(other) => Err(MgtError::InvalidFamily(format!("{other:?}"))),
    }
}

/// Levelwise `f` then `g`.
pub fn family_compose(tower: &mut Tower, f: &CoherentFamily, g: &CoherentFamily) -> Result<CoherentFamily, MgtError> {
    if f.levels() != g.levels() {
        return Err(MgtError::LevelMismatch);
    }
    ensure_valid(tower, f)?;
    ensure_valid(tower, g)?;
    let elements = f
        .elements()
        .map(|(q, e)| compose(e, &g.elements[&q]).map(|c| (q, c)))
        .collect::<Result<_, _>>()?;
    Ok(CoherentFamily { elements })
}

pub fn family_inverse(tower: &mut Tower, f: &CoherentFamily) -> Result<CoherentFamily, MgtError> {
    ensure_valid(tower, f)?;
    Ok(CoherentFamily {
        elements: f.elements().map(|(q, e)| (q, e.inverse())).collect(),
    })
}

/// Every coherent extension of `f` to the extra level `q_new`, in element
/// order. Empty when the existing levels admit no common lift.
pub fn extend_family(tower: &mut Tower, f: &CoherentFamily, q_new: u32) -> Result<Vec<CoherentFamily>, MgtError> {
    ensure_valid(tower, f)?;
    if f.get(q_new).is_some() {
        return Ok(vec![f.clone()]);
    }
    let candidates: Vec<MgtElement> = tower.group(q_new)?.iter().cloned().collect();
    let mut out = Vec::new();
    for e in candidates {
        let coherent = f.elements().all(|(q, eq)| {
            if q_new.is_multiple_of(q) {
                u_qp(&e, q).as_ref() == Ok(eq)
            } else if q % q_new == 0 {
                u_qp(eq, q_new).as_ref() == Ok(&e)
            } else {
                true
            }
        });
        if coherent {
            out.push(f.with(e));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgt::AffineMap;

    fn affine(q: u32, a: u32, b: u32) -> MgtElement {
        AffineMap::new(q, a, b).unwrap().to_element()
    }

    #[test]
    fn example_family_is_coherent() {
        let mut tower = Tower::default();
        let good = CoherentFamily::from_elements([affine(6, 5, 3), affine(3, 2, 0)]).unwrap();
        assert!(validate_family(&mut tower, &good).passed());
        let bad = CoherentFamily::from_elements([affine(6, 5, 3), affine(3, 1, 0)]).unwrap();
        assert_eq!(
            validate_family(&mut tower, &bad).failure,
            Some(FamilyFailure::Incoherent { q: 6, p: 3 })
        );
    }

    #[test]
    fn non_group_elements_are_rejected() {
        let mut tower = Tower::default();
        let rogue = MgtElement::from_table(vec![1, 0, 2, 3]).unwrap();
        let f = CoherentFamily::from_elements([rogue]).unwrap();
        assert_eq!(validate_family(&mut tower, &f).failure, Some(FamilyFailure::NotInGroup { q: 4 }));
        assert!(family_inverse(&mut tower, &f).is_err());
    }

    #[test]
    fn compose_and_invert() {
        let mut tower = Tower::default();
        let f = CoherentFamily::from_elements([affine(6, 5, 3), affine(3, 2, 0)]).unwrap();
        let theta = CoherentFamily::theta(&[3, 6]).unwrap();
        let c = family_compose(&mut tower, &f, &theta).unwrap();
        assert!(validate_family(&mut tower, &c).passed());
        let inv = family_inverse(&mut tower, &f).unwrap();
        assert_eq!(family_compose(&mut tower, &f, &inv).unwrap(), CoherentFamily::identity(&[3, 6]).unwrap());
        let other = CoherentFamily::identity(&[3]).unwrap();
        assert_eq!(family_compose(&mut tower, &f, &other), Err(MgtError::LevelMismatch));
    }

    #[test]
    fn extensions_count_the_kernel() {
        let mut tower = Tower::default();
        let f = CoherentFamily::from_elements([affine(3, 2, 1)]).unwrap();
        let ext = extend_family(&mut tower, &f, 6).unwrap();
        // |mGT_6| / |mGT_3| = 12 / 6
        assert_eq!(ext.len(), 2);
        for g in &ext {
            assert!(validate_family(&mut tower, g).passed());
        }
        let down = extend_family(&mut tower, &CoherentFamily::from_elements([affine(6, 5, 3)]).unwrap(), 3).unwrap();
        assert_eq!(down.len(), 1);
        assert_eq!(down[0].get(3), Some(&affine(3, 2, 0)));
    }

    #[test]
    fn json_round_trip() {
        let f = CoherentFamily::from_elements([affine(6, 5, 3), affine(3, 2, 0)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"levels":[3,6],"elements":{"3":[0,2,1],"6":[3,2,1,0,5,4]}}"#);
        assert_eq!(serde_json::from_str::<CoherentFamily>(&s).unwrap(), f);
        assert!(serde_json::from_str::<CoherentFamily>(r#"{"levels":[3],"elements":{"6":[0,1,2,3,4,5]}}"#).is_err());
        assert!(serde_json::from_str::<CoherentFamily>(r#"{"levels":[3],"elements":{"3":[0,1]}}"#).is_err());
    }
}
