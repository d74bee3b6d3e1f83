#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lambda_systems::lambda_core::{Atom, BasedFamily, Largeness, Node, SystemSkeleton};
use lambda_systems::whitehead::WhiteheadSystem;
use num_bigint::BigInt;

pub fn atom(s: &str) -> Atom {
    Atom::parse(s).unwrap()
}

/// Height-one system whose final `i` carries `phi^1 = slices[i]`; carriers
/// accumulate so that they increase along the root's index set.
pub fn flat_system(slices: &[Vec<&str>]) -> (SystemSkeleton, BasedFamily) {
    let root: Node = vec![];
    let mut nodes = BTreeSet::from([root.clone()]);
    let mut level = BTreeMap::from([(root.clone(), 1)]);
    let mut carriers = BTreeMap::new();
    let mut phi = BTreeMap::new();
    let mut acc = BTreeSet::new();
    for (i, s) in slices.iter().enumerate() {
        let node = vec![i as u32];
        nodes.insert(node.clone());
        level.insert(node.clone(), 0);
        let atoms: Vec<Atom> = s.iter().map(|x| atom(x)).collect();
        acc.extend(atoms.iter().cloned());
        carriers.insert(node.clone(), acc.clone());
        phi.insert(node, vec![atoms]);
    }
    let index_sets = BTreeMap::from([(root, (0..slices.len() as u32).collect())]);
    let truncation = slices.first().map_or(0, Vec::len);
    let sys = SystemSkeleton { nodes, level, index_sets, carriers, largeness: Largeness::Nonempty };
    (sys, BasedFamily { phi, truncation })
}

pub fn whitehead(sys: SystemSkeleton, fam: BasedFamily, r: usize, q: u64) -> WhiteheadSystem {
    let j = WhiteheadSystem::default_j(fam.truncation, r);
    let count = fam.truncation.min(j - r - 1);
    let finals = fam.finals();
    WhiteheadSystem {
        skeleton: sys,
        q: finals.iter().map(|z| (z.clone(), vec![q; count])).collect(),
        d: finals.iter().map(|z| (z.clone(), vec![vec![BigInt::from(1); r]; count])).collect(),
        family: fam,
        r,
        j,
        pins: BTreeMap::new(),
    }
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub mod ladders;
pub mod oracles;
pub mod systems;
