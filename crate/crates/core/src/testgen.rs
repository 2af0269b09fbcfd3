//! Random instances shared by the unit tests.

use proptest::prelude::*;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sets::{SelfmapGraph, Target};
use crate::topo::{ContinuousMap, FiniteSpace, OpenCover};

/// Tame graphs with at most 8 components: a core of up to 3 points, up to
/// 2 rays and up to 2 anti-rays.
pub(crate) fn arb_graph() -> impl Strategy<Value = SelfmapGraph> {
    (0usize..4, 0usize..3, 0usize..3)
        .prop_filter("at most 8 components", |(c, r, a)| c + r + a <= 8 && c + r + a > 0)
        .prop_flat_map(|(c, r, a)| {
            let targets = c + 2 * r + 2 * a;
            let a = if c + r == 0 { 0 } else { a };
            (Just((c, r, a)), proptest::collection::vec(0..targets.max(1), c), proptest::collection::vec(0..(c + r).max(1), a))
        })
        .prop_map(|((c, r, _a), succ, exits)| {
            let tgt = |k: usize| -> Target {
                if k < c {
                    Target::Core(format!("c{k}"))
                } else if k < c + 2 * r {
                    let k = k - c;
                    Target::Ray(format!("r{}", k / 2), (k % 2) as u64)
                } else {
                    let k = k - c - 2 * r;
                    Target::Anti(format!("a{}", k / 2), (k % 2) as u64)
                }
            };
            let mut b = SelfmapGraph::builder();
            for (i, &s) in succ.iter().enumerate() {
                b = b.core(&format!("c{i}"), tgt(s));
            }
            for i in 0..r {
                b = b.ray(&format!("r{i}"));
            }
            for (i, &e) in exits.iter().enumerate() {
                let t = if e < c { Target::Core(format!("c{e}")) } else { Target::Ray(format!("r{}", e - c), 0) };
                b = b.antiray(&format!("a{i}"), t);
            }
            b.build().unwrap()
        })
}


/// Random preorder on `1..=max_n` points, a random continuous selfmap and a
/// random open cover.
pub(crate) fn arb_space_flow(max_n: usize) -> impl Strategy<Value = (FiniteSpace, ContinuousMap, OpenCover)> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_space_flow(n, seed))
}

pub(crate) fn random_space(n: usize, rng: &mut impl Rng) -> FiniteSpace {
    let k = rng.gen_range(0..=n * n / 2);
    let pairs: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    FiniteSpace::anonymous(n, &pairs).unwrap()
}

pub(crate) fn random_map(space: &FiniteSpace, rng: &mut impl Rng) -> ContinuousMap {
    let n = space.len();
    fn fill(space: &FiniteSpace, img: &mut Vec<usize>, rng: &mut impl Rng) -> bool {
        let x = img.len();
        if x == space.len() {
            return true;
        }
        let mut cand: Vec<usize> = (0..space.len()).collect();
        cand.shuffle(rng);
        for y in cand {
            let ok = (0..x).all(|z| (!space.leq(z, x) || space.leq(img[z], y)) && (!space.leq(x, z) || space.leq(y, img[z])));
            if ok {
                img.push(y);
                if fill(space, img, rng) {
                    return true;
                }
                img.pop();
            }
        }
        false
    }
    let mut img = Vec::with_capacity(n);
    assert!(fill(space, &mut img, rng));
    ContinuousMap::new(space, img).unwrap()
}

pub(crate) fn random_cover(space: &FiniteSpace, max_members: usize, rng: &mut impl Rng) -> OpenCover {
    let n = space.len();
    let k = rng.gen_range(1..=max_members);
    let mut members: Vec<u64> = (0..k).map(|_| space.up_closure(rng.gen::<u64>() & space.whole())).collect();
    let mut union = members.iter().fold(0, |a, m| a | m);
    for x in 0..n {
        if union >> x & 1 == 0 {
            members.push(space.minimal_open(x));
            union |= space.minimal_open(x);
        }
    }
    if rng.gen_bool(0.2) {
        members.push(0);
    }
    OpenCover::new(space, members).unwrap()
}

pub(crate) fn random_space_flow(n: usize, seed: u64) -> (FiniteSpace, ContinuousMap, OpenCover) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(n, &mut rng);
    let map = random_map(&space, &mut rng);
    let cover = random_cover(&space, 4, &mut rng);
    (space, map, cover)
}
