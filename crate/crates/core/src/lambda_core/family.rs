use std::collections::{BTreeMap, BTreeSet};

use super::atom::Atom;
use super::node::{is_prefix, node_key, Node};
use super::skeleton::{Clause, SystemSkeleton, Violation};
use super::LambdaError;

/// Sets `s_ζ` indexed by final nodes, given through truncated enumerations:
/// `phi[ζ][k - 1][m] = φ^k_ζ(m)` for `1 <= k <= ℓ(ζ)` and `m < truncation`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasedFamily {
    pub phi: BTreeMap<Node, Vec<Vec<Atom>>>,
    pub truncation: usize,
}

impl BasedFamily {
    pub fn finals(&self) -> Vec<Node> {
        self.phi.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    /// `φ^k_ζ` as a slice; `k` is 1-based.
    pub fn enumeration(&self, zeta: &[u32], k: usize) -> &[Atom] {
        self.phi.get(zeta).and_then(|slices| slices.get(k.wrapping_sub(1))).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `s^k_ζ = rge(φ^k_ζ)`.
    pub fn slice(&self, zeta: &[u32], k: usize) -> BTreeSet<Atom> {
        self.enumeration(zeta, k).iter().cloned().collect()
    }

    /// `s_ζ`, the union of all slices.
    pub fn set(&self, zeta: &[u32]) -> BTreeSet<Atom> {
        self.phi.get(zeta).into_iter().flatten().flatten().cloned().collect()
    }

    /// `⋃ S`, sorted.
    pub fn union(&self) -> BTreeSet<Atom> {
        self.phi.values().flatten().flatten().cloned().collect()
    }

    /// The sets `s_ζ` in lexicographic order of `ζ`.
    pub fn sets(&self) -> Vec<BTreeSet<Atom>> {
        self.phi.keys().map(|z| self.set(z)).collect()
    }

    pub fn validate(&self, sys: &SystemSkeleton) -> Vec<Violation> {
        let mut out = Vec::new();
        for (zeta, slices) in &self.phi {
            if !sys.nodes.contains(zeta) || !sys.is_final(zeta) {
                out.push(Violation::new(Clause::NotFinal, zeta, ""));
                continue;
            }
            if slices.len() != zeta.len() {
                out.push(Violation::new(
                    Clause::WrongSliceCount,
                    zeta,
                    format!("{} enumerations for a node of length {}", slices.len(), zeta.len()),
                ));
            }
            for (i, slice) in slices.iter().enumerate() {
                let k = i + 1;
                if slice.len() != self.truncation {
                    out.push(Violation::new(
                        Clause::WrongSliceLength,
                        zeta,
                        format!("φ^{k} has {} values, truncation is {}", slice.len(), self.truncation),
                    ));
                }
                let distinct: BTreeSet<&Atom> = slice.iter().collect();
                if distinct.len() != slice.len() {
                    out.push(Violation::new(Clause::NotInjective, zeta, format!("φ^{k} repeats a value")));
                }
                if k <= zeta.len() {
                    let base = &zeta[..k];
                    let carrier = sys.carrier(base);
                    if let Some((m, x)) = slice.iter().enumerate().find(|(_, x)| !carrier.contains(*x)) {
                        out.push(Violation::new(
                            Clause::NotBased,
                            zeta,
                            format!("φ^{k}({m}) = {x} not in B({})", node_key(base)),
                        ));
                    }
                }
            }
        }
        out
    }

    /// The family restricted to final nodes of `sys`.
    pub fn restrict(&self, sys: &SystemSkeleton) -> BasedFamily {
        BasedFamily {
            phi: self.phi.iter().filter(|(z, _)| sys.nodes.contains(*z)).map(|(z, v)| (z.clone(), v.clone())).collect(),
            truncation: self.truncation,
        }
    }
}

/// `Λ^η` with the family `φ'^k_ζ = φ^{k + ℓ(η)}_ζ` on the finals below `η`.
pub fn derived_system(
    sys: &SystemSkeleton,
    fam: &BasedFamily,
    eta: &[u32],
) -> Result<(SystemSkeleton, BasedFamily), LambdaError> {
    if !sys.nodes.contains(eta) {
        return Err(LambdaError::UnknownNode(node_key(eta)));
    }
    if sys.is_final(eta) {
        return Err(LambdaError::FinalNode(node_key(eta)));
    }
    let strip = |n: &Node| n[eta.len()..].to_vec();
    let below = |n: &&Node| is_prefix(eta, n);
    let carriers: BTreeMap<Node, BTreeSet<Atom>> = sys
        .carriers
        .iter()
        .filter(|(k, _)| below(k) && k.len() > eta.len())
        .map(|(k, v)| (strip(k), v.clone()))
        .collect();
    let derived = SystemSkeleton {
        nodes: sys.nodes.iter().filter(below).map(strip).collect(),
        level: sys.level.iter().filter(|(k, _)| below(k)).map(|(k, v)| (strip(k), *v)).collect(),
        index_sets: sys.index_sets.iter().filter(|(k, _)| below(k)).map(|(k, v)| (strip(k), v.clone())).collect(),
        carriers,
        largeness: sys.largeness,
    };
    let family = BasedFamily {
        phi: fam
            .phi
            .iter()
            .filter(|(z, _)| below(z))
            .map(|(z, slices)| (strip(z), slices.iter().skip(eta.len()).cloned().collect()))
            .collect(),
        truncation: fam.truncation,
    };
    Ok((derived, family))
}
