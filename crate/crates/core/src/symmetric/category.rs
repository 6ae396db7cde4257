//! The category of finite sets `n = {1..n}` with injections, and the checks
//! that make it a poset in groupoids.
//!
//! Morphisms are stored as image vectors: `map[i - 1]` is the image of `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{FinPermutation, SymmetricError};

/// Hom-sets are enumerated only up to this target size (8! = 40320 maps).
pub const MAX_HOM_DEGREE: u32 = 8;

type Map = Vec<u32>;

/// The object `{1..n}`, `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NcfObject(u32);

impl NcfObject {
    pub fn new(n: u32) -> Result<NcfObject, SymmetricError> {
        if n == 0 {
            return Err(SymmetricError::OutOfRange {
                what: "object size",
                value: 0,
                min: 1,
                max: u32::MAX,
            });
        }
        Ok(NcfObject(n))
    }

    pub fn size(self) -> u32 {
        self.0
    }
}

/// An injection `{1..m} -> {1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NcfMorphism {
    source: u32,
    target: u32,
    map: Map,
}

impl NcfMorphism {
    pub fn new(source: NcfObject, target: NcfObject, map: Vec<u32>) -> Result<NcfMorphism, SymmetricError> {
        if map.len() != source.0 as usize || !hom_membership(source, target, &map) {
            return Err(SymmetricError::NotInjective(map, target.0));
        }
        Ok(NcfMorphism {
            source: source.0,
            target: target.0,
            map,
        })
    }

    /// The standard embedding `{1..m} -> {1..n}`.
    pub fn embedding(source: NcfObject, target: NcfObject) -> Result<NcfMorphism, SymmetricError> {
        NcfMorphism::new(source, target, (1..=source.0).collect())
    }

    /// `pre`, then the standard embedding, then `post`.
    pub fn from_factors(
        source: NcfObject,
        target: NcfObject,
        pre: &FinPermutation,
        post: &FinPermutation,
    ) -> Result<NcfMorphism, SymmetricError> {
        for (p, obj) in [(pre, source), (post, target)] {
            if !p.in_symmetric_group(obj.0) {
                return Err(SymmetricError::NotInSymmetricGroup {
                    degree: p.minimal_degree(),
                    n: obj.0,
                });
            }
        }
        NcfMorphism::new(source, target, (1..=source.0).map(|i| post.apply(pre.apply(i))).collect())
    }

    pub fn source(&self) -> NcfObject {
        NcfObject(self.source)
    }

    pub fn target(&self) -> NcfObject {
        NcfObject(self.target)
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.map[i as usize - 1]
    }

    /// Writes `self` as `pre`, standard embedding, `post`. Here `pre` is the
    /// identity and `post` sends `i` to `self(i)` for `i <= m` and the rest of
    /// `{1..n}` in increasing order onto the complement of the image.
    pub fn factor(&self) -> (FinPermutation, FinPermutation) {
        let used: BTreeSet<u32> = self.map.iter().copied().collect();
        let free = (1..=self.target).filter(|x| !used.contains(x));
        let images: Vec<u32> = self.map.iter().copied().chain(free).collect();
        let post = FinPermutation::from_images(&images).expect("injection extends to a permutation");
        (FinPermutation::identity(), post)
    }

    /// For `m = n` the morphism is a permutation.
    pub fn as_permutation(&self) -> Option<FinPermutation> {
        (self.source == self.target).then(|| FinPermutation::from_images(&self.map).expect("bijection"))
    }
}

/// Whether `f: {1..m} -> {1..n}` belongs to the hom-set, i.e. is injective.
pub fn hom_membership(m: NcfObject, n: NcfObject, f: &[u32]) -> bool {
    if f.len() != m.0 as usize {
        return false;
    }
    let mut seen = BTreeSet::new();
    f.iter().all(|&x| (1..=n.0).contains(&x) && seen.insert(x))
}

/// All injections `{1..m} -> {1..n}` in lexicographic order of image vectors.
pub fn hom_set(m: NcfObject, n: NcfObject) -> Result<Vec<NcfMorphism>, SymmetricError> {
    if n.0 > MAX_HOM_DEGREE {
        return Err(SymmetricError::OutOfRange {
            what: "hom-set target size",
            value: n.0,
            min: 1,
            max: MAX_HOM_DEGREE,
        });
    }
    Ok(injections(m.0, n.0)
        .into_iter()
        .map(|map| NcfMorphism {
            source: m.0,
            target: n.0,
            map,
        })
        .collect())
}

fn injections(m: u32, n: u32) -> Vec<Map> {
    fn go(m: u32, n: u32, cur: &mut Map, used: &mut Vec<bool>, out: &mut Vec<Map>) {
        if cur.len() == m as usize {
            out.push(cur.clone());
            return;
        }
        for x in 1..=n {
            if !used[x as usize] {
                used[x as usize] = true;
                cur.push(x);
                go(m, n, cur, used, out);
                cur.pop();
                used[x as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    if m <= n {
        go(m, n, &mut Vec::new(), &mut vec![false; n as usize + 1], &mut out);
    }
    out
}

fn then(f: &[u32], g: &[u32]) -> Map {
    f.iter().map(|&x| g[x as usize - 1]).collect()
}

/// A small category whose objects are sets `{1..n}` and whose morphisms are
/// explicit maps between them. Used to check poset-in-groupoid axioms, and
/// deliberately editable so that broken variants can be tested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteCategory {
    objects: BTreeSet<u32>,
    homs: BTreeMap<(u32, u32), BTreeSet<Map>>,
}

impl ConcreteCategory {
    /// The full subcategory of injections on the given objects.
    pub fn ncf(objects: &[NcfObject]) -> Result<ConcreteCategory, SymmetricError> {
        let objects: BTreeSet<u32> = objects.iter().map(|o| o.0).collect();
        let mut homs = BTreeMap::new();
        for &m in &objects {
            for &n in &objects {
                let set: BTreeSet<Map> = hom_set(NcfObject(m), NcfObject(n))?.into_iter().map(|f| f.map).collect();
                homs.insert((m, n), set);
            }
        }
        Ok(ConcreteCategory { objects, homs })
    }

    pub fn objects(&self) -> impl Iterator<Item = u32> + '_ {
        self.objects.iter().copied()
    }

    pub fn hom(&self, m: u32, n: u32) -> impl Iterator<Item = &[u32]> + '_ {
        self.homs.get(&(m, n)).into_iter().flatten().map(Vec::as_slice)
    }

    pub fn hom_len(&self, m: u32, n: u32) -> usize {
        self.homs.get(&(m, n)).map_or(0, BTreeSet::len)
    }

    fn contains(&self, m: u32, n: u32, f: &[u32]) -> bool {
        self.homs.get(&(m, n)).is_some_and(|s| s.contains(f))
    }

    /// Adds an arbitrary map `{1..m} -> {1..n}`; both objects must exist.
    pub fn insert_morphism(&mut self, m: u32, n: u32, f: Vec<u32>) -> bool {
        if !self.objects.contains(&m) || !self.objects.contains(&n) || f.len() != m as usize {
            return false;
        }
        if !f.iter().all(|x| (1..=n).contains(x)) {
            return false;
        }
        self.homs.entry((m, n)).or_default().insert(f)
    }

    pub fn remove_morphism(&mut self, m: u32, n: u32, f: &[u32]) -> bool {
        self.homs.get_mut(&(m, n)).is_some_and(|s| s.remove(f))
    }

    fn is_invertible(&self, m: u32, n: u32, f: &[u32]) -> bool {
        let id_m: Map = (1..=m).collect();
        let id_n: Map = (1..=n).collect();
        self.hom(n, m).any(|g| then(f, g) == id_m && then(g, f) == id_n)
    }

    fn automorphisms(&self, x: u32) -> Vec<&[u32]> {
        self.hom(x, x).filter(|f| self.is_invertible(x, x, f)).collect()
    }

    fn isomorphic(&self, x: u32, y: u32) -> bool {
        self.hom(x, y).any(|f| self.is_invertible(x, y, f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PigViolation {
    MissingIdentity { object: u32 },
    NotClosed { first: Map, second: Map, composite: Map, source: u32, target: u32 },
    NotInvertible { source: u32, target: u32, map: Map },
    /// The orbit of `seed` under automorphisms misses `outside`.
    MultipleOrbits { source: u32, target: u32, seed: Map, outside: Map },
}

impl fmt::Display for PigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PigViolation::MissingIdentity { object } => write!(f, "no identity on object {object}"),
            PigViolation::NotClosed { first, second, composite, source, target } => write!(
                f,
                "{first:?} then {second:?} = {composite:?} is missing from Hom({source},{target})"
            ),
            PigViolation::NotInvertible { source, target, map } => {
                write!(f, "{map:?} in Hom({source},{target}) between isomorphic objects has no inverse")
            }
            PigViolation::MultipleOrbits { source, target, seed, outside } => write!(
                f,
                "Hom({source},{target}) is not a single orbit: {outside:?} is not in the orbit of {seed:?}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PigReport {
    pub violations: Vec<PigViolation>,
    /// Number of nonempty hom-sets between non-isomorphic objects checked for
    /// transitivity.
    pub orbit_checks: usize,
}

impl PigReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn witness(&self) -> Option<&PigViolation> {
        self.violations.first()
    }
}

/// Checks that `cat` is a category, that isomorphism classes are groupoids,
/// and that every nonempty hom-set between non-isomorphic objects is one
/// orbit under pre- and post-composition with automorphisms.
pub fn verify_poset_in_groupoids(cat: &ConcreteCategory) -> PigReport {
    let mut report = PigReport::default();
    let objects: Vec<u32> = cat.objects().collect();

    for &x in &objects {
        let id: Map = (1..=x).collect();
        if !cat.contains(x, x, &id) {
            report.violations.push(PigViolation::MissingIdentity { object: x });
        }
    }

    for &x in &objects {
        for &y in &objects {
            for f in cat.hom(x, y) {
                for &z in &objects {
                    for g in cat.hom(y, z) {
                        let fg = then(f, g);
                        if !cat.contains(x, z, &fg) {
                            report.violations.push(PigViolation::NotClosed {
                                first: f.to_vec(),
                                second: g.to_vec(),
                                composite: fg,
                                source: x,
                                target: z,
                            });
                        }
                    }
                }
            }
        }
    }

    for &x in &objects {
        for &y in &objects {
            if cat.hom_len(x, y) == 0 {
                continue;
            }
            if cat.isomorphic(x, y) {
                for f in cat.hom(x, y) {
                    if !cat.is_invertible(x, y, f) {
                        report.violations.push(PigViolation::NotInvertible {
                            source: x,
                            target: y,
                            map: f.to_vec(),
                        });
                    }
                }
                continue;
            }
            report.orbit_checks += 1;
            let seed = cat.hom(x, y).next().expect("nonempty");
            let mut orbit = BTreeSet::new();
            for a in cat.automorphisms(x) {
                let af = then(a, seed);
                for b in cat.automorphisms(y) {
                    orbit.insert(then(&af, b));
                }
            }
            if let Some(outside) = cat.hom(x, y).find(|f| !orbit.contains(*f)) {
                report.violations.push(PigViolation::MultipleOrbits {
                    source: x,
                    target: y,
                    seed: seed.to_vec(),
                    outside: outside.to_vec(),
                });
            }
        }
    }
    report
}

/// A thin category: at most one arrow per ordered pair, and arrows both ways
/// only on the diagonal. Identity arrows are included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinCategory {
    objects: BTreeSet<u32>,
    arrows: BTreeSet<(u32, u32)>,
}

impl ThinCategory {
    pub fn objects(&self) -> impl Iterator<Item = u32> + '_ {
        self.objects.iter().copied()
    }

    pub fn has_arrow(&self, x: u32, y: u32) -> bool {
        self.arrows.contains(&(x, y))
    }

    pub fn arrows(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.arrows.iter().copied()
    }

    /// Reflexive, transitive and antisymmetric.
    pub fn satisfies_thin_axioms(&self) -> bool {
        let refl = self.objects.iter().all(|&x| self.has_arrow(x, x));
        let anti = self.arrows.iter().all(|&(x, y)| x == y || !self.has_arrow(y, x));
        let trans = self.arrows.iter().all(|&(x, y)| {
            self.arrows
                .iter()
                .filter(|&&(y2, _)| y2 == y)
                .all(|&(_, z)| self.has_arrow(x, z))
        });
        refl && anti && trans
    }

    /// Hasse diagram: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(u32, u32)> {
        self.arrows
            .iter()
            .filter(|&&(x, y)| x != y)
            .filter(|&&(x, y)| {
                !self
                    .objects
                    .iter()
                    .any(|&z| z != x && z != y && self.has_arrow(x, z) && self.has_arrow(z, y))
            })
            .copied()
            .collect()
    }

    /// Realizes each arrow `m -> n` by the standard embedding. Only possible
    /// when every arrow goes from a smaller set to a larger one.
    pub fn to_category(&self) -> Option<ConcreteCategory> {
        let mut homs: BTreeMap<(u32, u32), BTreeSet<Map>> = BTreeMap::new();
        for &(m, n) in &self.arrows {
            if m > n {
                return None;
            }
            homs.entry((m, n)).or_default().insert((1..=m).collect());
        }
        Some(ConcreteCategory {
            objects: self.objects.clone(),
            homs,
        })
    }
}

/// The functor to thin categories that keeps objects and identifies all
/// morphisms in each nonempty hom-set.
pub fn thin_collapse(cat: &ConcreteCategory) -> Result<ThinCategory, SymmetricError> {
    let report = verify_poset_in_groupoids(cat);
    if let Some(w) = report.witness() {
        return Err(SymmetricError::NotPosetInGroupoids(w.to_string()));
    }
    let objects: BTreeSet<u32> = cat.objects().collect();
    let mut arrows = BTreeSet::new();
    for &x in &objects {
        for &y in &objects {
            if cat.hom_len(x, y) > 0 {
                if x != y && cat.hom_len(y, x) > 0 {
                    return Err(SymmetricError::NotThin(x.min(y), x.max(y)));
                }
                arrows.insert((x, y));
            }
        }
    }
    Ok(ThinCategory { objects, arrows })
}
