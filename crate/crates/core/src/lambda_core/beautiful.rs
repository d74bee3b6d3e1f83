//! Structural properties (i)–(iii) of families based on a skeleton.
//!
//! (i)   carriers meet only between siblings;
//! (ii)  `s^k_ζ ∩ s^i_ν ≠ ∅` forces `k = i`, `ℓ(ζ) = ℓ(ν)` and agreement
//!       of `ζ`, `ν` off coordinate `k - 1`;
//! (iii) the enumeration `φ^k_ζ(0), φ^k_ζ(1), ...` is a tree order: if
//!       `φ^k_ζ(n + 1) ∈ s^k_ν` then `φ^k_ζ(n) ∈ s^k_ν`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::atom::Atom;
use super::family::BasedFamily;
use super::node::{node_key, parent, Node};
use super::skeleton::SystemSkeleton;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck<W> {
    pub holds: bool,
    pub witnesses: Vec<W>,
}

impl<W> PropertyCheck<W> {
    fn from(witnesses: Vec<W>) -> Self {
        PropertyCheck { holds: witnesses.is_empty(), witnesses }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarrierOverlap {
    #[serde(serialize_with = "ser_node")]
    pub first: Node,
    #[serde(serialize_with = "ser_node")]
    pub second: Node,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceOverlap {
    #[serde(serialize_with = "ser_node")]
    pub zeta: Node,
    pub k: usize,
    #[serde(serialize_with = "ser_node")]
    pub nu: Node,
    pub i: usize,
    pub atom: Atom,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeBreak {
    #[serde(serialize_with = "ser_node")]
    pub zeta: Node,
    pub k: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_node")]
    pub nu: Node,
    /// `φ^k_ζ(n + 1)`, which lies in `s^k_ν`
    pub present: Atom,
    /// `φ^k_ζ(n)`, which does not
    pub missing: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeautifulReport {
    pub property_i: PropertyCheck<CarrierOverlap>,
    pub property_ii: PropertyCheck<SliceOverlap>,
    pub property_iii: PropertyCheck<TreeBreak>,
    /// Slices `(ζ, k)` for which no enumeration at all has the tree
    /// property: the traces `s^k_ζ ∩ s^k_ν` are not nested.
    #[serde(serialize_with = "ser_slices")]
    pub not_reorderable: Vec<(Node, usize)>,
}

impl BeautifulReport {
    pub fn holds(&self) -> bool {
        self.property_i.holds && self.property_ii.holds && self.property_iii.holds
    }
}

fn ser_node<S: serde::Serializer>(n: &Node, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&node_key(n))
}

fn ser_slices<S: serde::Serializer>(v: &[(Node, usize)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(n, k)| (node_key(n), *k)))
}

pub fn check_beautiful(sys: &SystemSkeleton, fam: &BasedFamily) -> BeautifulReport {
    BeautifulReport {
        property_i: PropertyCheck::from(carrier_overlaps(sys)),
        property_ii: PropertyCheck::from(slice_overlaps(fam)),
        property_iii: PropertyCheck::from(tree_breaks(fam)),
        not_reorderable: not_reorderable(fam),
    }
}

fn siblings(a: &[u32], b: &[u32]) -> bool {
    match (parent(a), parent(b)) {
        (Some(pa), Some(pb)) => pa == pb,
        _ => false,
    }
}

fn carrier_overlaps(sys: &SystemSkeleton) -> Vec<CarrierOverlap> {
    let mut holders: BTreeMap<&Atom, Vec<&Node>> = BTreeMap::new();
    for (node, atoms) in &sys.carriers {
        for a in atoms {
            holders.entry(a).or_default().push(node);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (atom, nodes) in holders {
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                if !siblings(a, b) && seen.insert(((*a).clone(), (*b).clone())) {
                    out.push(CarrierOverlap { first: (*a).clone(), second: (*b).clone(), atom: atom.clone() });
                }
            }
        }
    }
    out
}

fn slice_overlaps(fam: &BasedFamily) -> Vec<SliceOverlap> {
    let mut holders: BTreeMap<&Atom, BTreeSet<(&Node, usize)>> = BTreeMap::new();
    for (zeta, slices) in &fam.phi {
        for (i, slice) in slices.iter().enumerate() {
            for a in slice {
                holders.entry(a).or_default().insert((zeta, i + 1));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (atom, places) in holders {
        let places: Vec<_> = places.into_iter().collect();
        for (x, &(zeta, k)) in places.iter().enumerate() {
            for &(nu, i) in &places[x + 1..] {
                let reason = if k != i {
                    "different levels"
                } else if zeta.len() != nu.len() {
                    "different lengths"
                } else if zeta.iter().zip(nu.iter()).enumerate().any(|(j, (a, b))| j != k - 1 && a != b) {
                    "disagree off coordinate k-1"
                } else {
                    continue;
                };
                if seen.insert((zeta.clone(), k, nu.clone(), i)) {
                    out.push(SliceOverlap { zeta: zeta.clone(), k, nu: nu.clone(), i, atom: atom.clone(), reason });
                }
            }
        }
    }
    out
}

/// For each level `k`: atom -> finals `ν` with the atom in `s^k_ν`.
fn level_holders(fam: &BasedFamily) -> BTreeMap<usize, BTreeMap<&Atom, BTreeSet<&Node>>> {
    let mut map: BTreeMap<usize, BTreeMap<&Atom, BTreeSet<&Node>>> = BTreeMap::new();
    for (zeta, slices) in &fam.phi {
        for (i, slice) in slices.iter().enumerate() {
            for a in slice {
                map.entry(i + 1).or_default().entry(a).or_default().insert(zeta);
            }
        }
    }
    map
}

fn tree_breaks(fam: &BasedFamily) -> Vec<TreeBreak> {
    let holders = level_holders(fam);
    let mut out = Vec::new();
    for (zeta, slices) in &fam.phi {
        for (i, slice) in slices.iter().enumerate() {
            let k = i + 1;
            let level = &holders[&k];
            for (n, pair) in slice.windows(2).enumerate() {
                let with_next = &level[&pair[1]];
                let with_this = &level[&pair[0]];
                for nu in with_next.difference(with_this) {
                    out.push(TreeBreak {
                        zeta: zeta.clone(),
                        k,
                        n,
                        nu: (*nu).clone(),
                        present: pair[1].clone(),
                        missing: pair[0].clone(),
                    });
                }
            }
        }
    }
    out
}

fn not_reorderable(fam: &BasedFamily) -> Vec<(Node, usize)> {
    let mut out = Vec::new();
    for (zeta, slices) in &fam.phi {
        for k in 1..=slices.len() {
            let own = fam.slice(zeta, k);
            let traces: BTreeSet<BTreeSet<Atom>> = fam
                .phi
                .keys()
                .map(|nu| own.intersection(&fam.slice(nu, k)).cloned().collect::<BTreeSet<Atom>>())
                .collect();
            let traces: Vec<_> = traces.into_iter().collect();
            let nested = traces
                .iter()
                .enumerate()
                .all(|(i, a)| traces[i + 1..].iter().all(|b| a.is_subset(b) || b.is_subset(a)));
            if !nested {
                out.push((zeta.clone(), k));
            }
        }
    }
    out
}
