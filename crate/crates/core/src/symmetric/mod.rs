//! Cofinite maps of the positive integers and the group `S_inf` of bijective
//! ones, acting on stable trees by renumbering tails.
//!
//! Composition is written left to right throughout: `compose_cf(f, g)` is
//! "first `f`, then `g`", i.e. `x -> g(f(x))`.

mod category;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::strata::StratumPoset;
use crate::trees::{glue, StableTree, TailLabel, TreeError};

pub use category::{
    hom_membership, hom_set, thin_collapse, verify_poset_in_groupoids, ConcreteCategory, NcfMorphism, NcfObject,
    PigReport, PigViolation, ThinCategory, MAX_HOM_DEGREE,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetricError {
    #[error("cf-maps act on positive integers; 0 is not allowed")]
    ZeroPoint,
    #[error("point {0} is assigned twice")]
    DuplicatePoint(u32),
    #[error("map is not bijective")]
    NotBijective,
    #[error("cannot parse permutation {0:?}: {1}")]
    Parse(String, String),
    #[error("map {0:?} is not an injection into 1..={1}")]
    NotInjective(Vec<u32>, u32),
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange { what: &'static str, value: u32, min: u32, max: u32 },
    #[error("not a poset in groupoids: {0}")]
    NotPosetInGroupoids(String),
    #[error("objects {0} and {1} are distinct but isomorphic")]
    NotThin(u32, u32),
    #[error("permutation moves the grafting tail {0}")]
    GraftTailMoved(TailLabel),
    #[error("permutation of degree {degree} does not act on tails 1..={n}")]
    NotInSymmetricGroup { degree: u32, n: u32 },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A map `N -> N` that is the identity outside a finite set, stored by its
/// non-fixed points only.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CfMap {
    support: BTreeMap<u32, u32>,
}

impl CfMap {
    pub fn identity() -> CfMap {
        CfMap::default()
    }

    /// Builds the map from explicit `x -> f(x)` pairs; fixed points are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<CfMap, SymmetricError> {
        let mut seen = BTreeSet::new();
        let mut support = BTreeMap::new();
        for (x, y) in pairs {
            if x == 0 || y == 0 {
                return Err(SymmetricError::ZeroPoint);
            }
            if !seen.insert(x) {
                return Err(SymmetricError::DuplicatePoint(x));
            }
            if x != y {
                support.insert(x, y);
            }
        }
        Ok(CfMap { support })
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.support.get(&x).copied().unwrap_or(x)
    }

    /// Non-fixed points with their images.
    pub fn support(&self) -> &BTreeMap<u32, u32> {
        &self.support
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    /// A cf-map is a bijection iff it permutes its own support.
    pub fn is_bijective(&self) -> bool {
        let image: BTreeSet<u32> = self.support.values().copied().collect();
        image.len() == self.support.len() && image.iter().eq(self.support.keys())
    }
}

/// `f` then `g`.
pub fn compose_cf(f: &CfMap, g: &CfMap) -> CfMap {
    let points: BTreeSet<u32> = f.support.keys().chain(g.support.keys()).copied().collect();
    let support = points
        .into_iter()
        .map(|x| (x, g.apply(f.apply(x))))
        .filter(|(x, y)| x != y)
        .collect();
    CfMap { support }
}

/// A bijective cf-map: an element of `S_inf`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinPermutation(CfMap);

impl TryFrom<CfMap> for FinPermutation {
    type Error = SymmetricError;

    fn try_from(f: CfMap) -> Result<Self, Self::Error> {
        if f.is_bijective() {
            Ok(FinPermutation(f))
        } else {
            Err(SymmetricError::NotBijective)
        }
    }
}

impl FinPermutation {
    pub fn identity() -> FinPermutation {
        FinPermutation::default()
    }

    pub fn transposition(a: u32, b: u32) -> Result<FinPermutation, SymmetricError> {
        if a == b {
            return CfMap::from_pairs([(a, a)]).map(FinPermutation);
        }
        CfMap::from_pairs([(a, b), (b, a)]).map(FinPermutation)
    }

    /// The cycle `(c0 c1 ... ck)`: `c0 -> c1 -> ... -> ck -> c0`.
    pub fn cycle(points: &[u32]) -> Result<FinPermutation, SymmetricError> {
        let pairs = points.iter().enumerate().map(|(i, &x)| (x, points[(i + 1) % points.len()]));
        CfMap::from_pairs(pairs)?.try_into()
    }

    /// The permutation of `{1..n}` sending `i` to `images[i-1]`.
    pub fn from_images(images: &[u32]) -> Result<FinPermutation, SymmetricError> {
        CfMap::from_pairs((1..).zip(images.iter().copied()))?.try_into()
    }

    pub fn as_cf_map(&self) -> &CfMap {
        &self.0
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0.apply(x)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &FinPermutation) -> FinPermutation {
        FinPermutation(compose_cf(&self.0, &other.0))
    }

    pub fn inverse(&self) -> FinPermutation {
        FinPermutation(CfMap {
            support: self.0.support.iter().map(|(&x, &y)| (y, x)).collect(),
        })
    }

    /// Smallest `n` with the support inside `{1..n}`, so that `self` lies in
    /// `S_n`; 0 for the identity.
    pub fn minimal_degree(&self) -> u32 {
        self.0.support.keys().next_back().copied().unwrap_or(0)
    }

    pub fn in_symmetric_group(&self, n: u32) -> bool {
        self.minimal_degree() <= n
    }

    /// Disjoint cycles of length at least 2, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.0.support.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

/// Inverts a cf-map, failing if it is not a bijection.
pub fn invert(f: &CfMap) -> Result<FinPermutation, SymmetricError> {
    FinPermutation::try_from(f.clone()).map(|p| p.inverse())
}

pub fn minimal_degree(p: &FinPermutation) -> u32 {
    p.minimal_degree()
}

impl fmt::Display for FinPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for FinPermutation {
    type Err = SymmetricError;

    /// Disjoint cycle notation such as `(1 2)(3 7 5)`; `()` is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| SymmetricError::Parse(s.to_string(), msg.to_string());
        let mut rest = s.trim();
        let mut pairs = Vec::new();
        let mut seen = BTreeSet::new();
        if rest.is_empty() {
            return Err(err("empty input"));
        }
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = body_start.find(')').ok_or_else(|| err("unclosed '('"))?;
            let body = &body_start[..close];
            let points = body
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| err(&format!("bad point {t:?}"))))
                .collect::<Result<Vec<u32>, _>>()?;
            for (i, &x) in points.iter().enumerate() {
                if x == 0 {
                    return Err(err("0 is not a positive integer"));
                }
                if !seen.insert(x) {
                    return Err(err(&format!("point {x} appears twice")));
                }
                pairs.push((x, points[(i + 1) % points.len()]));
            }
            rest = body_start[close + 1..].trim_start();
        }
        CfMap::from_pairs(pairs)?.try_into()
    }
}

/// Renumbers the tails of `tree` by `p`: tail `i` becomes tail `p(i)`.
pub fn act_on_tree(p: &FinPermutation, tree: &StableTree) -> StableTree {
    tree.relabel_tails(|l| p.apply(l)).expect("permutations relabel injectively")
}

/// The node permutation of `poset` induced by `p`, which must lie in `S_n`:
/// node `i` goes to the index of `p` applied to its tree.
pub fn act_on_poset(p: &FinPermutation, poset: &StratumPoset) -> Result<Vec<usize>, SymmetricError> {
    let n = poset.n();
    if !p.in_symmetric_group(n) {
        return Err(SymmetricError::NotInSymmetricGroup {
            degree: p.minimal_degree(),
            n,
        });
    }
    Ok(poset
        .nodes()
        .iter()
        .map(|t| poset.index_of(&act_on_tree(p, t)).expect("relabeling stays on tails 1..n"))
        .collect())
}

/// Checks that relabeling commutes with gluing: `p` applied to
/// `(t1, tail1) * (t2, tail2)` agrees up to isomorphism with the gluing of the
/// relabeled factors. `p` must fix both grafting tails.
pub fn equivariance_check(
    p: &FinPermutation,
    t1: &StableTree,
    tail1: TailLabel,
    t2: &StableTree,
    tail2: TailLabel,
) -> Result<bool, SymmetricError> {
    for t in [tail1, tail2] {
        if p.apply(t) != t {
            return Err(SymmetricError::GraftTailMoved(t));
        }
    }
    let before = act_on_tree(p, &glue(t1, tail1, t2, tail2)?);
    let after = glue(&act_on_tree(p, t1), tail1, &act_on_tree(p, t2), tail2)?;
    Ok(before.canonical_code() == after.canonical_code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::build_poset;
    use crate::trees::{validate, RawTree};

    fn perm(s: &str) -> FinPermutation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        let f = CfMap::from_pairs([(1, 2), (2, 1)]).unwrap();
        let g = CfMap::from_pairs([(2, 3), (3, 2)]).unwrap();
        let fg = compose_cf(&f, &g);
        assert_eq!((fg.apply(1), fg.apply(2), fg.apply(3)), (3, 1, 2));
        assert_eq!(compose_cf(&f, &CfMap::identity()), f);
    }

    #[test]
    fn non_bijective_cf_maps() {
        let f = CfMap::from_pairs([(1, 2)]).unwrap();
        assert!(!f.is_bijective());
        assert_eq!(invert(&f), Err(SymmetricError::NotBijective));
        assert_eq!(CfMap::from_pairs([(0, 1)]), Err(SymmetricError::ZeroPoint));
        assert_eq!(CfMap::from_pairs([(1, 2), (1, 3)]), Err(SymmetricError::DuplicatePoint(1)));
        // fixed points are normalized away
        assert_eq!(CfMap::from_pairs([(4, 4)]).unwrap(), CfMap::identity());
    }

    #[test]
    fn inverses() {
        assert_eq!(FinPermutation::identity().inverse(), FinPermutation::identity());
        assert_eq!(perm("(1 2)").inverse(), perm("(1 2)"));
        assert_eq!(perm("(1 2 3)").inverse(), perm("(1 3 2)"));
        let p = perm("(1 5 2)(3 4)");
        assert!(p.then(&p.inverse()).as_cf_map().is_identity());
        assert_eq!(invert(p.as_cf_map()).unwrap(), p.inverse());
    }

    #[test]
    fn minimal_degrees() {
        assert_eq!(minimal_degree(&FinPermutation::identity()), 0);
        assert_eq!(minimal_degree(&perm("(1 2)")), 2);
        assert_eq!(minimal_degree(&perm("(3 7)")), 7);
        assert!(perm("(3 7)").in_symmetric_group(7));
        assert!(!perm("(3 7)").in_symmetric_group(6));
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(perm("()").to_string(), "()");
        assert_eq!(perm("(3 7 5)(1 2)").to_string(), "(1 2)(3 7 5)");
        assert_eq!(perm(" (5 3 7) (2 1) ").to_string(), "(1 2)(3 7 5)");
        assert_eq!(perm("(4)"), FinPermutation::identity());
        for bad in ["", "1 2", "(1 2", "(1 x)", "(1 2)(2 3)", "(0 1)"] {
            assert!(bad.parse::<FinPermutation>().is_err(), "{bad:?}");
        }
        assert_eq!(FinPermutation::from_images(&[2, 3, 1]).unwrap(), perm("(1 2 3)"));
        assert_eq!(FinPermutation::cycle(&[1, 2, 3]).unwrap(), perm("(1 2 3)"));
        assert_eq!(FinPermutation::transposition(4, 4).unwrap(), FinPermutation::identity());
    }

    fn one_edge(left: [u32; 2], right: [u32; 2]) -> StableTree {
        validate(&RawTree::new().vertex(0).vertex(1).edge(0, 1).tails_at(0, left).tails_at(1, right)).unwrap()
    }

    #[test]
    fn action_on_trees() {
        let t = one_edge([1, 2], [3, 4]);
        assert_eq!(act_on_tree(&FinPermutation::identity(), &t), t);
        assert_eq!(
            act_on_tree(&perm("(2 3)"), &t).canonical_code(),
            one_edge([1, 3], [2, 4]).canonical_code()
        );
        let mut orbit = BTreeSet::new();
        for images in [[1, 2, 3, 4], [1, 3, 2, 4], [1, 4, 3, 2], [2, 1, 3, 4], [4, 3, 2, 1], [2, 3, 4, 1]] {
            let p = FinPermutation::from_images(&images).unwrap();
            orbit.insert(act_on_tree(&p, &t).canonical_code());
        }
        assert_eq!(orbit.len(), 3);
    }

    #[test]
    fn action_on_poset_is_an_automorphism() {
        let poset = build_poset(5).unwrap();
        let p = perm("(1 4)(2 5 3)");
        let map = act_on_poset(&p, &poset).unwrap();
        let image: BTreeSet<usize> = map.iter().copied().collect();
        assert_eq!(image.len(), poset.len());
        let covers: BTreeSet<(usize, usize)> = poset.covers().iter().copied().collect();
        for &(lo, hi) in poset.covers() {
            assert!(covers.contains(&(map[lo], map[hi])));
        }
        assert!(matches!(
            act_on_poset(&perm("(1 6)"), &poset),
            Err(SymmetricError::NotInSymmetricGroup { degree: 6, n: 5 })
        ));
    }

    #[test]
    fn equivariance_examples() {
        let a = StableTree::corolla([1, 2, 10]).unwrap();
        let b = StableTree::corolla([20, 3, 4]).unwrap();
        assert!(equivariance_check(&FinPermutation::identity(), &a, 10, &b, 20).unwrap());
        assert!(equivariance_check(&perm("(1 2)"), &a, 10, &b, 20).unwrap());
        assert!(equivariance_check(&perm("(1 3)(2 4)"), &a, 10, &b, 20).unwrap());
        assert_eq!(
            equivariance_check(&perm("(1 10)"), &a, 10, &b, 20),
            Err(SymmetricError::GraftTailMoved(10))
        );
    }
}
