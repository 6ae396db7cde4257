//! Invariant suites run by `genus0 verify`.
//!
//! Every randomized check draws from a ChaCha8 stream seeded with the suite
//! seed, so a report is a pure function of `(suite, seed)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mgt::{
    self, affine_group, check_t_relations, check_u_relations, closure, compose, family_compose, family_inverse,
    is_multiplication, u_qp, validate_family, MgtElement, Tower, DEFAULT_MAX_MODULUS,
};
use crate::oracle;
use crate::random::{random_family, random_permutation, random_tree, random_tree_on, shuffle_vertex_ids};
use crate::strata::{build_poset, codim_profile};
use crate::symmetric::{
    act_on_poset, act_on_tree, compose_cf, equivariance_check, thin_collapse, verify_poset_in_groupoids, CfMap,
    ConcreteCategory, FinPermutation, NcfObject,
};
use crate::trees::{are_isomorphic, contract_all, contract_edge, glue, StableTree};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Trees,
    Strata,
    Symmetric,
    Mgt,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trees" => Ok(Suite::Trees),
            "strata" => Ok(Suite::Strata),
            "symmetric" => Ok(Suite::Symmetric),
            "mgt" => Ok(Suite::Mgt),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Summary on success, counterexample on failure.
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: Vec<(&'static str, Vec<Check>)>,
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.sections.iter().flat_map(|(_, c)| c)
    }

    pub fn passed(&self) -> bool {
        self.checks().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, checks) in &self.sections {
            writeln!(f, "== {name} ==")?;
            for c in checks {
                writeln!(f, "{c}")?;
            }
        }
        let total = self.checks().count();
        let failed = self.checks().filter(|c| !c.passed).count();
        if failed == 0 {
            write!(f, "all {total} checks passed")
        } else {
            write!(f, "{failed} of {total} checks failed")
        }
    }
}

fn check(name: &str, body: impl FnOnce() -> Result<String, String>) -> Check {
    let (passed, detail) = match body() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run(suite: Suite, seed: u64) -> Report {
    let sections = match suite {
        Suite::Trees => vec![("trees", trees_suite(seed))],
        Suite::Strata => vec![("strata", strata_suite())],
        Suite::Symmetric => vec![("symmetric", symmetric_suite(seed))],
        Suite::Mgt => vec![("mgt", mgt_suite(seed))],
        Suite::All => vec![
            ("trees", trees_suite(seed)),
            ("strata", strata_suite()),
            ("symmetric", symmetric_suite(seed)),
            ("mgt", mgt_suite(seed)),
        ],
    };
    Report { sections }
}

pub fn trees_suite(seed: u64) -> Vec<Check> {
    let mut r = rng(seed);
    let sample: Vec<StableTree> = (0..200)
        .map(|_| {
            let n = r.gen_range(3..=8);
            random_tree_on(&mut r, n)
        })
        .collect();
    let mut out = Vec::new();

    out.push(check("json round trip on 200 random trees", || {
        for t in &sample {
            let back = StableTree::from_json_str(&t.to_json_string()).map_err(|e| e.to_string())?;
            if &back != t {
                return Err(t.to_json_string());
            }
        }
        Ok("200 trees".into())
    }));

    out.push(check("canonical code ignores vertex ids", || {
        for t in &sample {
            let s = shuffle_vertex_ids(&mut r, t);
            if s.canonical_code() != t.canonical_code() {
                return Err(format!("{} vs {}", t.to_json_string(), s.to_json_string()));
            }
        }
        Ok("200 trees".into())
    }));

    out.push(check("canonical code agrees with brute force on 300 pairs", || {
        let mut iso = 0;
        for _ in 0..300 {
            let n = r.gen_range(4..=7);
            let a = random_tree_on(&mut r, n);
            let b = match r.gen_range(0..3) {
                0 => shuffle_vertex_ids(&mut r, &a),
                1 => {
                    let p = random_permutation(&mut r, n);
                    shuffle_vertex_ids(&mut r, &act_on_tree(&p, &a))
                }
                _ => random_tree_on(&mut r, n),
            };
            let fast = are_isomorphic(&a, &b);
            if fast != oracle::brute_force_isomorphic(&a, &b) {
                return Err(format!("{} vs {}", a.to_json_string(), b.to_json_string()));
            }
            iso += fast as usize;
        }
        Ok(format!("300 pairs, {iso} isomorphic"))
    }));

    out.push(check("every single contraction removes one edge and stays stable", || {
        let mut count = 0;
        for t in &sample {
            for e in t.edges() {
                let (c, f) = contract_edge(t, e).map_err(|err| err.to_string())?;
                if c.edge_count() + 1 != t.edge_count() || f.contracted_edges().len() != 1 {
                    return Err(format!("{} at {e}", t.to_json_string()));
                }
                count += 1;
            }
            if !contract_all(t).is_corolla() {
                return Err(format!("{} does not contract to a corolla", t.to_json_string()));
            }
        }
        Ok(format!("{count} contractions"))
    }));

    out.push(check("gluing adds one edge and consumes two tails", || {
        for _ in 0..200 {
            let (a, b) = (r.gen_range(3..=5), r.gen_range(3..=5));
            let left: Vec<u32> = (1..=a).collect();
            let right: Vec<u32> = (101..=100 + b).collect();
            let t1 = random_tree(&mut r, &left, a as usize);
            let t2 = random_tree(&mut r, &right, b as usize);
            let (x, y) = (*left.choose(&mut r).unwrap(), *right.choose(&mut r).unwrap());
            let g = glue(&t1, x, &t2, y).map_err(|e| e.to_string())?;
            if g.edge_count() != t1.edge_count() + t2.edge_count() + 1 || g.tail_count() != (a + b - 2) as usize {
                return Err(format!("{} * {}", t1.to_json_string(), t2.to_json_string()));
            }
        }
        Ok("200 gluings".into())
    }));

    out
}

pub fn strata_suite() -> Vec<Check> {
    let posets: Vec<_> = (4..=7).map(|n| build_poset(n).expect("n <= 7 is in range")).collect();
    let mut out = Vec::new();

    out.push(check("profile matches the split-system oracle for n in 4..=7", || {
        for p in &posets {
            let ours: Vec<u64> = codim_profile(p).0.iter().map(|&c| c as u64).collect();
            let theirs = oracle::split_system_profile(p.n());
            if ours != theirs {
                return Err(format!("n = {}: {ours:?} vs {theirs:?}", p.n()));
            }
        }
        Ok("4, 26, 236, 2752 strata".into())
    }));

    out.push(check("codim-1 and point counts for n in 4..=7", || {
        for p in &posets {
            let n = p.n();
            let prof = codim_profile(p);
            let (one, top) = (prof.at(1) as u64, prof.at(n as usize - 3) as u64);
            if one != oracle::bipartition_count(n) || one != (1 << (n - 1)) - n as u64 - 1 {
                return Err(format!("n = {n}: {one} one-edge strata"));
            }
            if top != oracle::trivalent_count(n) || top != oracle::double_factorial(2 * n as u64 - 5) {
                return Err(format!("n = {n}: {top} trivalent strata"));
            }
        }
        Ok("2^(n-1)-n-1 and (2n-5)!!".into())
    }));

    out.push(check("unique maximum and maximal chains of length n-3", || {
        for p in &posets {
            let n = p.n() as usize;
            if p.maximal_elements() != vec![p.maximum()] || !p.node(p.maximum()).is_corolla() {
                return Err(format!("n = {n}: maximum is not the unique corolla"));
            }
            for (i, (lo, hi)) in p.chain_lengths_to_top().into_iter().enumerate() {
                if p.minimal_elements().contains(&i) && (lo, hi) != (n - 3, n - 3) {
                    return Err(format!("n = {n}: node {i} has chains of length {lo}..{hi}"));
                }
            }
        }
        Ok("n = 4..=7".into())
    }));

    out.push(check("covers are single edge contractions", || {
        let p = &posets[2];
        for &(lo, hi) in p.covers() {
            let lower = p.node(lo);
            let ok = lower.edges().any(|e| {
                contract_edge(lower, e).is_ok_and(|(c, _)| c.canonical_code() == *p.code(hi))
            });
            if !ok || p.codim(lo) != p.codim(hi) + 1 {
                return Err(format!("cover {lo} -> {hi}"));
            }
        }
        Ok(format!("{} covers at n = 6", p.covers().len()))
    }));

    out.push(check("n = 4 has 3 zero-dimensional strata", || {
        let points = codim_profile(&posets[0]).at(1);
        if points == 3 {
            Ok("3 = (2*4-5)!!".into())
        } else {
            Err(format!("found {points}"))
        }
    }));

    out
}

pub fn symmetric_suite(seed: u64) -> Vec<Check> {
    let mut r = rng(seed);
    let mut out = Vec::new();

    out.push(check("cofinite permutations form a group on 1000 random triples", || {
        for _ in 0..1000 {
            let [f, g, h] = [0; 3].map(|_| {
                let degree = r.gen_range(1..=12);
                random_permutation(&mut r, degree)
            });
            let (f, g, h) = (f.as_cf_map(), g.as_cf_map(), h.as_cf_map());
            if compose_cf(&compose_cf(f, g), h) != compose_cf(f, &compose_cf(g, h)) {
                return Err(format!("associativity fails on {f:?}, {g:?}, {h:?}"));
            }
            if compose_cf(f, &CfMap::identity()) != *f || compose_cf(&CfMap::identity(), f) != *f {
                return Err(format!("identity fails on {f:?}"));
            }
            let inv = crate::symmetric::invert(f).map_err(|e| e.to_string())?;
            if !compose_cf(f, inv.as_cf_map()).is_identity() || !compose_cf(inv.as_cf_map(), f).is_identity() {
                return Err(format!("inverse fails on {f:?}"));
            }
        }
        Ok("associativity, identity, inverses".into())
    }));

    out.push(check("relabeling is an action on 300 random trees", || {
        for _ in 0..300 {
            let n = r.gen_range(3..=8);
            let t = random_tree_on(&mut r, n);
            let (p, q) = (random_permutation(&mut r, n), random_permutation(&mut r, n));
            let lhs = act_on_tree(&p.then(&q), &t);
            let rhs = act_on_tree(&q, &act_on_tree(&p, &t));
            if lhs.canonical_code() != rhs.canonical_code() {
                return Err(format!("{p} then {q} on {}", t.to_json_string()));
            }
            if act_on_tree(&FinPermutation::identity(), &t) != t {
                return Err(format!("identity moves {}", t.to_json_string()));
            }
        }
        Ok("(pq).t = q.(p.t) and 1.t = t".into())
    }));

    out.push(check("relabeling commutes with gluing on 300 instances", || {
        for _ in 0..300 {
            let a = r.gen_range(3..=6);
            let b = r.gen_range(3..=9 - a);
            let left: Vec<u32> = (1..=a).collect();
            let right: Vec<u32> = (a + 1..=a + b).collect();
            let t1 = random_tree(&mut r, &left, a as usize);
            let t2 = random_tree(&mut r, &right, b as usize);
            let (x, y) = (a, a + b);
            let free: Vec<u32> = (1..a + b).filter(|&l| l != x).collect();
            let mut images = free.clone();
            images.shuffle(&mut r);
            let p: FinPermutation = CfMap::from_pairs(free.into_iter().zip(images))
                .and_then(FinPermutation::try_from)
                .map_err(|e| e.to_string())?;
            if !equivariance_check(&p, &t1, x, &t2, y).map_err(|e| e.to_string())? {
                return Err(format!("{p} on {} * {}", t1.to_json_string(), t2.to_json_string()));
            }
        }
        Ok("300 gluings with at most 7 tails".into())
    }));

    out.push(check("S_5 acts on the n = 5 poset by automorphisms", || {
        let poset = build_poset(5).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let p = random_permutation(&mut r, 5);
            let image = act_on_poset(&p, &poset).map_err(|e| e.to_string())?;
            for &(lo, hi) in poset.covers() {
                if !poset.upper_covers(image[lo]).contains(&image[hi]) {
                    return Err(format!("{p} breaks cover {lo} -> {hi}"));
                }
            }
        }
        Ok("50 permutations".into())
    }));

    out.push(check("injections on 1..=5 form a poset in groupoids", || {
        let objects: Vec<NcfObject> = (1..=5).map(|n| NcfObject::new(n).unwrap()).collect();
        let cat = ConcreteCategory::ncf(&objects).map_err(|e| e.to_string())?;
        let report = verify_poset_in_groupoids(&cat);
        match report.witness() {
            None => Ok(format!("{} single-orbit hom-sets", report.orbit_checks)),
            Some(v) => Err(v.to_string()),
        }
    }));

    out.push(check("thin collapse is the chain 1 < 2 < 3 < 4 < 5", || {
        let objects: Vec<NcfObject> = (1..=5).map(|n| NcfObject::new(n).unwrap()).collect();
        let cat = ConcreteCategory::ncf(&objects).map_err(|e| e.to_string())?;
        let thin = thin_collapse(&cat).map_err(|e| e.to_string())?;
        let chain: Vec<(u32, u32)> = (1..5).map(|i| (i, i + 1)).collect();
        if thin.satisfies_thin_axioms() && thin.covers() == chain {
            Ok("covers (1,2) (2,3) (3,4) (4,5)".into())
        } else {
            Err(format!("covers {:?}", thin.covers()))
        }
    }));

    out
}

pub fn mgt_suite(seed: u64) -> Vec<Check> {
    let mut r = rng(seed);
    let mut out = Vec::new();

    out.push(check("closure == affine for q in 2..60", || {
        for q in 2..=60 {
            let (c, a) = (closure(q).map_err(|e| e.to_string())?, affine_group(q).map_err(|e| e.to_string())?);
            if c != a {
                return Err(format!("q = {q}: {} vs {} elements", c.len(), a.len()));
            }
            if c.len() != (q * oracle::totient(q)) as usize {
                return Err(format!("q = {q}: order {} is not q*phi(q)", c.len()));
            }
        }
        Ok("|mGT_q| = q*phi(q)".into())
    }));

    out.push(check("theta is never a multiplication for q in 2..60", || {
        for q in 2..=60 {
            let theta = MgtElement::theta(q);
            if theta.apply(0) != 1 % q || is_multiplication(&theta).is_some() {
                return Err(format!("q = {q}"));
            }
        }
        Ok("theta(0) = 1".into())
    }));

    out.push(check("mGT_q is nonabelian for q in 3..60", || {
        for q in 3..=60 {
            let theta = MgtElement::theta(q);
            let d = MgtElement::multiplication(q, q - 1).map_err(|e| e.to_string())?;
            // At a = 0: d(1 - a) = d while 1 - d a = 1.
            if compose(&theta, &d).unwrap() == compose(&d, &theta).unwrap() {
                return Err(format!("theta and x -> {}x commute at q = {q}", q - 1));
            }
        }
        Ok("witness theta, x -> -x".into())
    }));

    out.push(check("t relations for chains with top s <= 36", || {
        let rep = check_t_relations(1..=36).map_err(|e| e.to_string())?;
        rep.failure.map_or(Ok(format!("{} chains", rep.chains_checked)), Err)
    }));

    out.push(check("u relations for chains with top s <= 36", || {
        let rep = check_u_relations(2..=36, DEFAULT_MAX_MODULUS).map_err(|e| e.to_string())?;
        rep.failure.map_or(Ok(format!("{} chains", rep.chains_checked)), Err)
    }));

    out.push(check("u descends on mGT_q for p | q <= 60", || {
        let mut pairs = 0;
        for q in 2..=60 {
            let g = closure(q).map_err(|e| e.to_string())?;
            for p in (2..=q).filter(|p| q % p == 0) {
                let target = closure(p).map_err(|e| e.to_string())?;
                for e in &g {
                    let img = u_qp(e, p).map_err(|err| format!("{e} mod {p}: {err}"))?;
                    if !target.contains(&img) {
                        return Err(format!("{e} mod {p} leaves mGT_{p}"));
                    }
                }
                pairs += 1;
            }
        }
        Ok(format!("{pairs} divisor pairs"))
    }));

    out.push(check("u is a homomorphism for q <= 24", || {
        for q in 2..=24 {
            let g: Vec<_> = closure(q).map_err(|e| e.to_string())?.into_iter().collect();
            for p in (2..q).filter(|p| q % p == 0) {
                let images: Vec<_> = g.iter().map(|e| u_qp(e, p).unwrap()).collect();
                for (i, a) in g.iter().enumerate() {
                    for (j, b) in g.iter().enumerate() {
                        let lhs = u_qp(&compose(a, b).unwrap(), p).unwrap();
                        if lhs != compose(&images[i], &images[j]).unwrap() {
                            return Err(format!("{a} and {b} mod {p}"));
                        }
                    }
                }
            }
        }
        Ok("exhaustive".into())
    }));

    out.push(check("200 random families over divisors of 24 and 36", || {
        let mut tower = Tower::default();
        for _ in 0..200 {
            let top = *[24, 36].choose(&mut r).unwrap();
            let f = random_family(&mut r, &mut tower, top).map_err(|e| e.to_string())?;
            let g = random_family_on(&mut r, &mut tower, &f).map_err(|e| e.to_string())?;
            let fg = family_compose(&mut tower, &f, &g).map_err(|e| e.to_string())?;
            let inv = family_inverse(&mut tower, &f).map_err(|e| e.to_string())?;
            for h in [&f, &g, &fg, &inv] {
                if let Some(fail) = validate_family(&mut tower, h).failure {
                    return Err(format!("{fail:?} in {}", serde_json::to_string(h).unwrap()));
                }
            }
        }
        Ok("valid, closed under composition and inversion".into())
    }));

    out
}

/// A second random family on the same levels as `f`.
fn random_family_on(
    r: &mut ChaCha8Rng,
    tower: &mut Tower,
    f: &mgt::CoherentFamily,
) -> Result<mgt::CoherentFamily, mgt::MgtError> {
    let levels = f.levels();
    let top = levels.iter().fold(1, |acc, &q| acc / mgt::gcd(acc, q) * q);
    let g = crate::random::random_element(r, tower, top)?;
    mgt::CoherentFamily::from_elements(levels.iter().map(|&p| u_qp(&g, p)).collect::<Result<Vec<_>, _>>()?)
}
