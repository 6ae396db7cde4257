//! Seeded generators for randomized checks.

use std::collections::BTreeMap;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use crate::mgt::{u_qp, CoherentFamily, MgtElement, MgtError, Tower};
use crate::symmetric::FinPermutation;
use crate::trees::{StableTree, TailLabel};

/// A random stable tree on `labels` (at least 3), built from the corolla by up
/// to `splits` random vertex splits.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, labels: &[TailLabel], splits: usize) -> StableTree {
    let mut tree = StableTree::corolla(labels.iter().copied()).expect("at least three distinct labels");
    for _ in 0..splits {
        let splittable: Vec<_> = tree.vertices().filter(|&v| tree.valence(v) >= 4).collect();
        let Some(&v) = splittable.choose(rng) else {
            break;
        };
        let mut flags = tree.flags_at(v);
        flags.shuffle(rng);
        let k = rng.gen_range(2..=flags.len() - 2);
        tree = tree.split_vertex(v, &flags[..k]).expect("both sides keep two flags");
    }
    tree
}

/// A random stable tree on `{1..n}` with a random number of splits.
pub fn random_tree_on<R: Rng + ?Sized>(rng: &mut R, n: u32) -> StableTree {
    let labels: Vec<TailLabel> = (1..=n).collect();
    let splits = rng.gen_range(0..=n as usize - 3);
    random_tree(rng, &labels, splits)
}

/// The same tree with vertex ids scrambled into a random injective renaming.
pub fn shuffle_vertex_ids<R: Rng + ?Sized>(rng: &mut R, tree: &StableTree) -> StableTree {
    let old: Vec<_> = tree.vertices().collect();
    let mut fresh: Vec<u32> = (0..old.len() as u32 * 3 + 3).collect();
    fresh.shuffle(rng);
    let map: BTreeMap<_, _> = old.into_iter().zip(fresh).collect();
    tree.rename_vertices(|v| map[&v]).expect("renaming is injective")
}

/// A uniformly random permutation of `{1..degree}`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, degree: u32) -> FinPermutation {
    let mut images: Vec<u32> = (1..=degree).collect();
    images.shuffle(rng);
    FinPermutation::from_images(&images).expect("a shuffle is a bijection")
}

/// A uniformly random element of `mGT_q`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, tower: &mut Tower, q: u32) -> Result<MgtElement, MgtError> {
    Ok(tower.group(q)?.iter().choose(rng).expect("groups are nonempty").clone())
}

/// A coherent family on a random nonempty set of divisors `>= 2` of `top`,
/// obtained by projecting one random element of `mGT_top`.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, tower: &mut Tower, top: u32) -> Result<CoherentFamily, MgtError> {
    let g = random_element(rng, tower, top)?;
    let divisors: Vec<u32> = (2..=top).filter(|d| top.is_multiple_of(*d)).collect();
    let mut levels: Vec<u32> = divisors.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if levels.is_empty() {
        levels.push(*divisors.choose(rng).expect("top >= 2"));
    }
    CoherentFamily::from_elements(levels.into_iter().map(|p| u_qp(&g, p)).collect::<Result<Vec<_>, _>>()?)
}
