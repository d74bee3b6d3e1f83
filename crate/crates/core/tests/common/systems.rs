use std::collections::{BTreeMap, BTreeSet};

use lambda_systems::lambda_core::{Atom, BasedFamily, Largeness, Node, SystemSkeleton};
use lambda_systems::whitehead::WhiteheadSystem;
use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::Rng;

use super::atom;

/// Height at most 2 with truncation `m`. Siblings' carriers grow by `m`
/// atoms each, drawn from a pool of `2m + 2`, so carriers and slices overlap
/// often, also across different parents.
pub fn random_system(rng: &mut impl Rng, m: usize) -> (SystemSkeleton, BasedFamily) {
    let pool: Vec<Atom> = (0..2 * m + 2).map(|i| atom(&format!("a{i}"))).collect();
    let mut carriers: BTreeMap<Node, BTreeSet<Atom>> = BTreeMap::new();
    let mut grow = |rng: &mut dyn rand::RngCore, parent: &Node, count: u32| {
        let mut acc = BTreeSet::new();
        for i in 0..count as usize {
            while acc.len() < (m * (i + 1)).min(pool.len()) {
                acc.insert(pool[rng.gen_range(0..pool.len())].clone());
            }
            let mut child = parent.clone();
            child.push(i as u32);
            carriers.insert(child, acc.clone());
        }
    };
    let mut nodes = BTreeSet::from([vec![]]);
    let mut level = BTreeMap::from([(vec![], 2)]);
    let mut index_sets = BTreeMap::new();
    let top = rng.gen_range(1..=3u32);
    index_sets.insert(vec![], (0..top).collect());
    grow(rng, &vec![], top);
    for i in 0..top {
        let child = vec![i];
        nodes.insert(child.clone());
        if rng.gen_bool(0.5) {
            level.insert(child, 0);
        } else {
            level.insert(child.clone(), 1);
            let count = rng.gen_range(1..=2u32);
            index_sets.insert(child.clone(), (0..count).collect());
            grow(rng, &child, count);
            for j in 0..count {
                nodes.insert(vec![i, j]);
                level.insert(vec![i, j], 0);
            }
        }
    }
    let sys = SystemSkeleton { nodes, level, index_sets, carriers, largeness: Largeness::Nonempty };
    let phi = sys
        .finals()
        .into_iter()
        .map(|z| {
            let slices = (1..=z.len())
                .map(|k| {
                    let carrier: Vec<Atom> = sys.carrier(&z[..k]).iter().cloned().collect();
                    sample(rng, carrier.len(), m).into_iter().map(|i| carrier[i].clone()).collect()
                })
                .collect();
            (z, slices)
        })
        .collect();
    (sys, BasedFamily { phi, truncation: m })
}

/// Random primes and coefficients on [`random_system`], default `J`, and
/// with probability `pin` every `a` of one final pinned to a small value.
pub fn random_whitehead(rng: &mut impl Rng, m: usize, r: usize, pin: f64) -> WhiteheadSystem {
    let (sys, fam) = random_system(rng, m);
    let j = WhiteheadSystem::default_j(m, r);
    let count = m.min(j - r - 1);
    let finals = fam.finals();
    let primes = [2u64, 3, 5, 7];
    let mut pins = BTreeMap::new();
    if rng.gen_bool(pin) {
        let z = finals[rng.gen_range(0..finals.len())].clone();
        pins.insert(z, (0..j).map(|i| (i, BigInt::from(rng.gen_range(-1..=1)))).collect());
    }
    WhiteheadSystem {
        skeleton: sys,
        q: finals.iter().map(|z| (z.clone(), (0..count).map(|_| primes[rng.gen_range(0..4)]).collect())).collect(),
        d: finals
            .iter()
            .map(|z| {
                (z.clone(), (0..count).map(|_| (0..r).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect()).collect())
            })
            .collect(),
        family: fam,
        r,
        j,
        pins,
    }
}
