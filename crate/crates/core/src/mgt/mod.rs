//! The tower of residue rings `Z/qZ` and the permutation groups `mGT_q`.
//!
//! `mGT_q` is the group of permutations of `Z/qZ` generated by the unit
//! multiplications `x -> d x` and the involution `theta_q: x -> 1 - x`. For
//! `p | q` reduction mod `p` induces homomorphisms `u_{q,p}: mGT_q -> mGT_p`;
//! coherent families across a finite set of levels are truncations of the
//! projective limit `mGT`.
//!
//! The carrier of level `q` is `{0, .., q-1}`. Composition is left to right:
//! `compose(e1, e2)` applies `e1` first.
//!
//! Every element the generators produce is affine, `x -> a x + b` with `a` a
//! unit, and [`affine_group`] builds that set directly as an independent
//! oracle for [`closure`]. Reading `a mod q` as the formal label of the root
//! of unity `exp(2 pi i a / q)` (see [`Residue::root_of_unity`]) turns the
//! unit multiplications into the cyclotomic Galois action; no complex
//! arithmetic is involved.

mod family;
mod relations;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use family::{
    extend_family, family_compose, family_inverse, validate_family, CoherentFamily, FamilyFailure, FamilyReport,
    Tower,
};
pub use relations::{check_t_relations, check_u_relations, projection_stats, ProjectionStats, RelationReport};

/// Largest modulus accepted by default.
pub const DEFAULT_MAX_MODULUS: u32 = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MgtError {
    #[error("modulus {q} is outside the supported range {min}..={max}")]
    OutOfRange { q: u32, min: u32, max: u32 },
    #[error("{p} does not divide {q}")]
    NotADivisor { p: u32, q: u32 },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{d} is not a unit mod {q}")]
    NotAUnit { d: u32, q: u32 },
    #[error("residue {value} is not below its modulus {q}")]
    ResidueOutOfRange { value: u32, q: u32 },
    #[error("table is not a permutation of 0..{0}")]
    NotAPermutation(u32),
    #[error("element does not descend mod {p}: {a} and {b} agree mod {p} but their images do not")]
    DoesNotDescend { p: u32, a: u32, b: u32 },
    #[error("families live on different level sets")]
    LevelMismatch,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn check_modulus(q: u32, max_q: u32) -> Result<(), MgtError> {
    if (2..=max_q).contains(&q) {
        Ok(())
    } else {
        Err(MgtError::OutOfRange { q, min: 2, max: max_q })
    }
}

/// Units of `Z/qZ` in increasing order.
pub fn units(q: u32) -> Vec<u32> {
    (0..q).filter(|&d| gcd(d, q) == 1).collect()
}

/// An element `value mod q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    value: u32,
    q: u32,
}

impl Residue {
    pub fn new(value: u32, q: u32) -> Result<Residue, MgtError> {
        if q == 0 {
            return Err(MgtError::OutOfRange { q, min: 1, max: u32::MAX });
        }
        if value >= q {
            return Err(MgtError::ResidueOutOfRange { value, q });
        }
        Ok(Residue { value, q })
    }

    /// `a mod q` for any integer `a`.
    pub fn reduce(a: i64, q: u32) -> Residue {
        assert!(q > 0);
        Residue {
            value: a.rem_euclid(q as i64) as u32,
            q,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.q
    }

    /// `(a', q')` in lowest terms, naming the root of unity `exp(2 pi i a / q)`.
    pub fn root_of_unity(self) -> (u32, u32) {
        let g = gcd(self.value, self.q);
        (self.value / g, self.q / g)
    }
}

impl Add for Residue {
    type Output = Residue;

    /// Panics if the moduli differ.
    fn add(self, other: Residue) -> Residue {
        assert_eq!(self.q, other.q, "residues of different moduli");
        Residue::reduce(self.value as i64 + other.value as i64, self.q)
    }
}

impl Mul for Residue {
    type Output = Residue;

    /// Panics if the moduli differ.
    fn mul(self, other: Residue) -> Residue {
        assert_eq!(self.q, other.q, "residues of different moduli");
        Residue::reduce(self.value as i64 * other.value as i64, self.q)
    }
}

/// `t_{q,p}`: reduction of a residue mod `q` to a residue mod `p`, for `p | q`.
pub fn t_qp(a: Residue, p: u32) -> Result<Residue, MgtError> {
    if p == 0 || !a.q.is_multiple_of(p) {
        return Err(MgtError::NotADivisor { p, q: a.q });
    }
    Ok(Residue {
        value: a.value % p,
        q: p,
    })
}

/// A permutation of `Z/qZ` stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementJson", into = "ElementJson")]
pub struct MgtElement {
    q: u32,
    table: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    q: u32,
    table: Vec<u32>,
}

impl TryFrom<ElementJson> for MgtElement {
    type Error = MgtError;

    fn try_from(j: ElementJson) -> Result<Self, Self::Error> {
        if j.table.len() != j.q as usize {
            return Err(MgtError::NotAPermutation(j.q));
        }
        MgtElement::from_table(j.table)
    }
}

impl From<MgtElement> for ElementJson {
    fn from(e: MgtElement) -> Self {
        ElementJson { q: e.q, table: e.table }
    }
}

impl MgtElement {
    /// The permutation `x -> table[x]` of `Z/qZ` with `q = table.len()`.
    pub fn from_table(table: Vec<u32>) -> Result<MgtElement, MgtError> {
        let q = table.len() as u32;
        if q == 0 {
            return Err(MgtError::NotAPermutation(0));
        }
        let mut seen = vec![false; q as usize];
        for &x in &table {
            if x >= q || std::mem::replace(&mut seen[x as usize], true) {
                return Err(MgtError::NotAPermutation(q));
            }
        }
        Ok(MgtElement { q, table })
    }

    pub fn identity(q: u32) -> MgtElement {
        MgtElement {
            q,
            table: (0..q).collect(),
        }
    }

    /// `x -> d x`.
    pub fn multiplication(q: u32, d: u32) -> Result<MgtElement, MgtError> {
        AffineMap::new(q, d, 0).map(|m| m.to_element())
    }

    /// `theta_q: x -> 1 - x`.
    pub fn theta(q: u32) -> MgtElement {
        AffineMap { q, a: q - 1, b: 1 % q }.to_element()
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> MgtElement {
        let mut table = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y as usize] = x as u32;
        }
        MgtElement { q: self.q, table }
    }

    /// `self` then `other`, assuming equal moduli.
    fn then_unchecked(&self, other: &MgtElement) -> MgtElement {
        MgtElement {
            q: self.q,
            table: self.table.iter().map(|&x| other.table[x as usize]).collect(),
        }
    }

    /// Compact JSON array of the table, e.g. `[0,2,1]`.
    pub fn table_json(&self) -> String {
        serde_json::to_string(&self.table).expect("integer arrays serialize")
    }
}

impl fmt::Display for MgtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_json())
    }
}

/// `x -> a x + b` on `Z/qZ` with `a` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineMap {
    q: u32,
    a: u32,
    b: u32,
}

impl AffineMap {
    pub fn new(q: u32, a: u32, b: u32) -> Result<AffineMap, MgtError> {
        if q == 0 {
            return Err(MgtError::OutOfRange { q, min: 1, max: u32::MAX });
        }
        let (a, b) = (a % q, b % q);
        if gcd(a, q) != 1 {
            return Err(MgtError::NotAUnit { d: a, q });
        }
        Ok(AffineMap { q, a, b })
    }

    pub fn coefficients(self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn apply(self, x: u32) -> u32 {
        ((self.a as u64 * x as u64 + self.b as u64) % self.q as u64) as u32
    }

    pub fn to_element(self) -> MgtElement {
        MgtElement {
            q: self.q,
            table: (0..self.q).map(|x| self.apply(x)).collect(),
        }
    }
}

/// Unit multiplications in increasing order of `d`, followed by `theta_q`.
pub fn generators(q: u32) -> Result<Vec<MgtElement>, MgtError> {
    check_modulus(q, u32::MAX)?;
    let mut gens: Vec<MgtElement> = units(q)
        .into_iter()
        .map(|d| AffineMap { q, a: d, b: 0 }.to_element())
        .collect();
    gens.push(MgtElement::theta(q));
    Ok(gens)
}

/// `mGT_q`, as the breadth-first closure of [`generators`] under composition.
pub fn closure(q: u32) -> Result<BTreeSet<MgtElement>, MgtError> {
    closure_bounded(q, DEFAULT_MAX_MODULUS)
}

pub fn closure_bounded(q: u32, max_q: u32) -> Result<BTreeSet<MgtElement>, MgtError> {
    check_modulus(q, max_q)?;
    let gens = generators(q)?;
    let start = MgtElement::identity(q);
    let mut seen: HashSet<MgtElement> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let next = e.then_unchecked(g);
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All maps `x -> a x + b` with `a` a unit: `q * phi(q)` elements.
pub fn affine_group(q: u32) -> Result<BTreeSet<MgtElement>, MgtError> {
    affine_group_bounded(q, DEFAULT_MAX_MODULUS)
}

pub fn affine_group_bounded(q: u32, max_q: u32) -> Result<BTreeSet<MgtElement>, MgtError> {
    check_modulus(q, max_q)?;
    Ok(units(q)
        .into_iter()
        .flat_map(|a| (0..q).map(move |b| AffineMap { q, a, b }.to_element()))
        .collect())
}

/// `Some(d)` iff `e` is multiplication by the unit `d`.
pub fn is_multiplication(e: &MgtElement) -> Option<u32> {
    let q = e.q;
    let d = if q == 1 { 0 } else { e.apply(1) };
    let is_mult = (0..q).all(|x| e.apply(x) as u64 == (d as u64 * x as u64) % q as u64);
    (is_mult && gcd(d, q) == 1).then_some(d)
}

/// `e1` then `e2`.
pub fn compose(e1: &MgtElement, e2: &MgtElement) -> Result<MgtElement, MgtError> {
    if e1.q != e2.q {
        return Err(MgtError::ModulusMismatch(e1.q, e2.q));
    }
    Ok(e1.then_unchecked(e2))
}

/// `u_{q,p}`: the permutation of `Z/pZ` induced by `e` through reduction mod
/// `p`. Fails if `e` does not respect congruence mod `p`.
pub fn u_qp(e: &MgtElement, p: u32) -> Result<MgtElement, MgtError> {
    let q = e.q;
    if p == 0 || !q.is_multiple_of(p) {
        return Err(MgtError::NotADivisor { p, q });
    }
    let mut table: Vec<Option<u32>> = vec![None; p as usize];
    for x in 0..q {
        let image = e.apply(x) % p;
        match table[(x % p) as usize] {
            None => table[(x % p) as usize] = Some(image),
            Some(prev) if prev == image => {}
            Some(_) => {
                return Err(MgtError::DoesNotDescend { p, a: x % p, b: x });
            }
        }
    }
    MgtElement::from_table(table.into_iter().map(|x| x.expect("reduction is onto")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(table: &[u32]) -> MgtElement {
        MgtElement::from_table(table.to_vec()).unwrap()
    }

    #[test]
    fn residues_and_reduction() {
        let five = Residue::new(5, 6).unwrap();
        assert_eq!(t_qp(five, 3).unwrap(), Residue::new(2, 3).unwrap());
        assert_eq!(t_qp(five, 6).unwrap(), five);
        assert_eq!(t_qp(five, 4), Err(MgtError::NotADivisor { p: 4, q: 6 }));
        assert_eq!(t_qp(five, 0), Err(MgtError::NotADivisor { p: 0, q: 6 }));
        assert!(Residue::new(6, 6).is_err());
        assert_eq!(Residue::reduce(-1, 5).value(), 4);
        assert_eq!(Residue::new(4, 6).unwrap().root_of_unity(), (2, 3));
        // t is a ring homomorphism
        for a in 0..12 {
            for b in 0..12 {
                let (x, y) = (Residue::new(a, 12).unwrap(), Residue::new(b, 12).unwrap());
                assert_eq!(t_qp(x + y, 4).unwrap(), t_qp(x, 4).unwrap() + t_qp(y, 4).unwrap());
                assert_eq!(t_qp(x * y, 4).unwrap(), t_qp(x, 4).unwrap() * t_qp(y, 4).unwrap());
            }
        }
        assert_eq!(t_qp(Residue::new(1, 12).unwrap(), 4).unwrap().value(), 1);
    }

    #[test]
    fn generator_tables() {
        assert_eq!(MgtElement::theta(5).table(), &[1, 0, 4, 3, 2]);
        assert_eq!(MgtElement::multiplication(4, 3).unwrap().table(), &[0, 3, 2, 1]);
        assert_eq!(units(4), vec![1, 3]);
        for q in 2..=30 {
            assert_eq!(generators(q).unwrap().len(), units(q).len() + 1);
        }
        assert!(generators(1).is_err());
        assert!(MgtElement::multiplication(4, 2).is_err());
    }

    #[test]
    fn small_closures() {
        assert_eq!(closure(3).unwrap().len(), 6);
        assert_eq!(closure(4).unwrap().len(), 8);
        assert_eq!(closure(5).unwrap().len(), 20);
        assert_eq!(closure(2).unwrap().len(), 2);
        assert!(closure(201).is_err());
        assert!(closure_bounded(201, 300).is_ok());
    }

    #[test]
    fn affine_group_sizes() {
        assert_eq!(affine_group(2).unwrap().len(), 2);
        assert_eq!(affine_group(3).unwrap().len(), 6);
        assert_eq!(affine_group(4).unwrap().len(), 8);
        for q in 2..=20 {
            assert_eq!(closure(q).unwrap(), affine_group(q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn multiplication_detection() {
        assert_eq!(is_multiplication(&MgtElement::multiplication(4, 3).unwrap()), Some(3));
        assert_eq!(is_multiplication(&MgtElement::identity(7)), Some(1));
        for q in 2..=30 {
            assert_eq!(is_multiplication(&MgtElement::theta(q)), None);
        }
        assert_eq!(is_multiplication(&el(&[1, 2, 0])), None);
    }

    #[test]
    fn composition_is_noncommutative() {
        let theta = MgtElement::theta(5);
        let two = MgtElement::multiplication(5, 2).unwrap();
        let theta_then_two = compose(&theta, &two).unwrap();
        let two_then_theta = compose(&two, &theta).unwrap();
        assert_eq!(theta_then_two.apply(0), 2);
        assert_eq!(two_then_theta.apply(0), 1);
        assert_ne!(theta_then_two, two_then_theta);
        assert_eq!(
            compose(&theta, &MgtElement::theta(4)),
            Err(MgtError::ModulusMismatch(5, 4))
        );
        for e in closure(12).unwrap() {
            assert!(compose(&e, &e.inverse()).unwrap().is_identity());
        }
    }

    #[test]
    fn projections() {
        let five = MgtElement::multiplication(6, 5).unwrap();
        assert_eq!(u_qp(&five, 3).unwrap(), MgtElement::multiplication(3, 2).unwrap());
        assert_eq!(u_qp(&MgtElement::theta(6), 3).unwrap(), MgtElement::theta(3));
        assert_eq!(u_qp(&five, 4), Err(MgtError::NotADivisor { p: 4, q: 6 }));
        let swap01 = el(&[1, 0, 2, 3, 4, 5]);
        assert!(matches!(u_qp(&swap01, 3), Err(MgtError::DoesNotDescend { p: 3, .. })));
    }

    #[test]
    fn element_json() {
        let e = MgtElement::theta(3);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"q":3,"table":[1,0,2]}"#);
        assert_eq!(serde_json::from_str::<MgtElement>(&s).unwrap(), e);
        assert!(serde_json::from_str::<MgtElement>(r#"{"q":3,"table":[1,1,2]}"#).is_err());
        assert!(serde_json::from_str::<MgtElement>(r#"{"q":4,"table":[1,0,2]}"#).is_err());
    }
}
