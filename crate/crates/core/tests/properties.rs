use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use genus0::mgt::{
    affine_group, compose, extend_family, projection_stats, t_qp, u_qp, validate_family, AffineMap, CoherentFamily,
    MgtElement, Residue, Tower,
};
use genus0::oracle::brute_force_isomorphic;
use genus0::random::{random_family, random_permutation, random_tree, random_tree_on, shuffle_vertex_ids};
use genus0::strata::{build_poset, StratumPoset};
use genus0::symmetric::{act_on_poset, act_on_tree, compose_cf, invert, FinPermutation};
use genus0::trees::{are_isomorphic, contract_edge, contract_edges, glue, StableTree};

fn tree(n: u32, seed: u64) -> StableTree {
    random_tree_on(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn arb_tree() -> impl Strategy<Value = StableTree> {
    (3u32..=8, any::<u64>()).prop_map(|(n, seed)| tree(n, seed))
}

fn arb_perm(max_degree: u32) -> impl Strategy<Value = FinPermutation> {
    (1..=max_degree, any::<u64>())
        .prop_map(|(d, seed)| random_permutation(&mut ChaCha8Rng::seed_from_u64(seed), d))
}

fn arb_affine() -> impl Strategy<Value = (u32, AffineMap, AffineMap)> {
    (2u32..=60, any::<u32>(), any::<u32>(), any::<u32>(), any::<u32>()).prop_filter_map(
        "unit leading coefficients",
        |(q, a1, b1, a2, b2)| Some((q, AffineMap::new(q, a1, b1).ok()?, AffineMap::new(q, a2, b2).ok()?)),
    )
}

fn poset5() -> &'static StratumPoset {
    static P: OnceLock<StratumPoset> = OnceLock::new();
    P.get_or_init(|| build_poset(5).unwrap())
}

proptest! {
    #[test]
    fn canonical_code_decides_isomorphism(n in 4u32..=7, s1 in any::<u64>(), s2 in any::<u64>(), twist in 0u8..3) {
        let a = tree(n, s1);
        let mut rng = ChaCha8Rng::seed_from_u64(s2);
        let b = match twist {
            0 => shuffle_vertex_ids(&mut rng, &a),
            1 => act_on_tree(&random_permutation(&mut rng, n), &a),
            _ => tree(n, s2),
        };
        prop_assert_eq!(are_isomorphic(&a, &b), brute_force_isomorphic(&a, &b));
    }

    #[test]
    fn canonical_form_is_an_isomorphic_fixed_point(t in arb_tree()) {
        let c = t.canonical_form();
        prop_assert!(brute_force_isomorphic(&t, &c));
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(c.canonical_code(), t.canonical_code());
    }

    #[test]
    fn json_round_trips(t in arb_tree()) {
        prop_assert_eq!(StableTree::from_json_str(&t.to_json_string()).unwrap(), t);
    }

    #[test]
    fn gluing_counts_and_symmetry(a in 3u32..=5, b in 3u32..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left: Vec<u32> = (1..=a).collect();
        let right: Vec<u32> = (11..=10 + b).collect();
        let t1 = random_tree(&mut rng, &left, 3);
        let t2 = random_tree(&mut rng, &right, 3);
        let g = glue(&t1, 1, &t2, 11).unwrap();
        prop_assert_eq!(g.edge_count(), t1.edge_count() + t2.edge_count() + 1);
        prop_assert_eq!(g.vertex_count(), t1.vertex_count() + t2.vertex_count());
        prop_assert_eq!(g.tail_count(), (a + b - 2) as usize);
        prop_assert!(are_isomorphic(&g, &glue(&t2, 11, &t1, 1).unwrap()));
    }

    #[test]
    fn contractions_compose(n in 6u32..=8, seed in any::<u64>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let labels: Vec<u32> = (1..=n).collect();
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), &labels, n as usize - 3);
        let mut edges: Vec<_> = t.edges().collect();
        let e1 = edges.remove(i.index(edges.len()));
        let e2 = edges[j.index(edges.len())];
        let (mid, f) = contract_edge(&t, e1).unwrap();
        let image = mid.edges().find(|&e| f.edge_section().get(&e) == Some(&e2)).unwrap();
        let (top, g) = contract_edge(&mid, image).unwrap();
        let (direct, h) = contract_edges(&t, &[e1, e2]).unwrap();
        prop_assert_eq!(top.canonical_code(), direct.canonical_code());
        let fg = genus0::trees::compose_morphisms(&f, &g).unwrap();
        prop_assert_eq!(fg.contracted_edges(), h.contracted_edges());
    }

    #[test]
    fn cofinite_group_laws(f in arb_perm(12), g in arb_perm(12), h in arb_perm(12)) {
        let (f, g, h) = (f.as_cf_map(), g.as_cf_map(), h.as_cf_map());
        prop_assert_eq!(compose_cf(&compose_cf(f, g), h), compose_cf(f, &compose_cf(g, h)));
        let inv = invert(f).unwrap();
        prop_assert!(compose_cf(f, inv.as_cf_map()).is_identity());
        prop_assert!(compose_cf(inv.as_cf_map(), f).is_identity());
    }

    #[test]
    fn cycle_notation_round_trips(p in arb_perm(12)) {
        prop_assert_eq!(p.to_string().parse::<FinPermutation>().unwrap(), p.clone());
        prop_assert!(p.in_symmetric_group(p.minimal_degree()));
    }

    #[test]
    fn relabeling_is_an_action(n in 3u32..=8, seed in any::<u64>(), p in arb_perm(8), q in arb_perm(8)) {
        let t = tree(n, seed);
        let lhs = act_on_tree(&p.then(&q), &t);
        let rhs = act_on_tree(&q, &act_on_tree(&p, &t));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_group_permutes_the_poset(seed in any::<u64>()) {
        let poset = poset5();
        let p = random_permutation(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let image = act_on_poset(&p, poset).unwrap();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..poset.len()).collect::<Vec<_>>());
        for &(lo, hi) in poset.covers() {
            prop_assert!(poset.upper_covers(image[lo]).contains(&image[hi]));
            prop_assert_eq!(poset.codim(image[lo]), poset.codim(lo));
        }
    }

    #[test]
    fn residue_reduction_is_a_ring_map(s in 1u32..=60, a in any::<u32>(), b in any::<u32>(), k in any::<prop::sample::Index>()) {
        let divisors: Vec<u32> = (1..=s).filter(|d| s % d == 0).collect();
        let p = divisors[k.index(divisors.len())];
        let (x, y) = (Residue::new(a % s, s).unwrap(), Residue::new(b % s, s).unwrap());
        prop_assert_eq!(t_qp(x + y, p).unwrap(), t_qp(x, p).unwrap() + t_qp(y, p).unwrap());
        prop_assert_eq!(t_qp(x * y, p).unwrap(), t_qp(x, p).unwrap() * t_qp(y, p).unwrap());
    }

    #[test]
    fn mgt_group_laws((q, f, g) in arb_affine()) {
        let (e1, e2) = (f.to_element(), g.to_element());
        let group = affine_group(q).unwrap();
        let c = compose(&e1, &e2).unwrap();
        prop_assert!(group.contains(&c));
        prop_assert!(compose(&e1, &e1.inverse()).unwrap().is_identity());
        let theta = MgtElement::theta(q);
        prop_assert_eq!(
            compose(&compose(&e1, &e2).unwrap(), &theta).unwrap(),
            compose(&e1, &compose(&e2, &theta).unwrap()).unwrap()
        );
    }

    #[test]
    fn reduction_is_a_homomorphism((q, f, g) in arb_affine(), k in any::<prop::sample::Index>()) {
        let divisors: Vec<u32> = (2..=q).filter(|d| q % d == 0).collect();
        let p = divisors[k.index(divisors.len())];
        let (e1, e2) = (f.to_element(), g.to_element());
        let lhs = u_qp(&compose(&e1, &e2).unwrap(), p).unwrap();
        let rhs = compose(&u_qp(&e1, p).unwrap(), &u_qp(&e2, p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projected_families_are_coherent(seed in any::<u64>(), big in any::<bool>()) {
        let mut tower = Tower::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_family(&mut rng, &mut tower, if big { 36 } else { 24 }).unwrap();
        prop_assert!(validate_family(&mut tower, &f).passed());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<CoherentFamily>(&json).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chain_extensions_count_the_kernel(seed in any::<u64>(), k in 0usize..4) {
        let chains: [&[u32]; 4] = [&[2, 4, 12, 24], &[3, 6, 12, 36], &[2, 6, 18, 36], &[3, 9, 18, 36]];
        let chain = chains[k];
        let mut tower = Tower::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = CoherentFamily::default();
        let mut prev: Option<u32> = None;
        for &q in chain {
            let ext = extend_family(&mut tower, &f, q).unwrap();
            let expected = match prev {
                None => tower.group(q).unwrap().len(),
                Some(p) => projection_stats(q, p, 200).unwrap().kernel,
            };
            prop_assert_eq!(ext.len(), expected);
            use rand::seq::SliceRandom;
            f = ext.choose(&mut rng).unwrap().clone();
            prev = Some(q);
        }
        prop_assert!(validate_family(&mut tower, &f).passed());
    }
}
