use std::collections::{BTreeMap, BTreeSet};

use super::atom::Atom;
use super::family::BasedFamily;
use super::node::parent;
use super::skeleton::SystemSkeleton;

/// A transformed skeleton and family, with the renaming `new atom -> old atom`
/// used to carry integer assignments across: `f(new) := f'(renaming[new])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub skeleton: SystemSkeleton,
    pub family: BasedFamily,
    pub renaming: BTreeMap<Atom, Atom>,
}

impl Transformed {
    /// Whether distinct new atoms used by the family always come from
    /// distinct old atoms, i.e. the transform is a relabeling on `⋃ S`.
    pub fn is_injective_on_family(&self) -> bool {
        let used = self.family.union();
        let images: BTreeSet<&Atom> = used.iter().map(|a| &self.renaming[a]).collect();
        images.len() == used.len()
    }
}

/// Replaces `B(τ⌢α)` by `B(τ⌢α) × {τ}` and `φ^k_ζ(m)` by
/// `(φ^k_ζ(m), ζ↾(k-1))`. The tree and levels are unchanged.
pub fn transform_disjoint(sys: &SystemSkeleton, fam: &BasedFamily) -> Transformed {
    let mut renaming = BTreeMap::new();
    let mut carriers = BTreeMap::new();
    for (node, atoms) in &sys.carriers {
        let tagged: BTreeSet<Atom> = match parent(node) {
            Some(tau) => atoms
                .iter()
                .map(|x| {
                    let new = Atom::tagged(x.clone(), tau.to_vec());
                    renaming.insert(new.clone(), x.clone());
                    new
                })
                .collect(),
            None => BTreeSet::new(),
        };
        carriers.insert(node.clone(), tagged);
    }
    let phi = fam
        .phi
        .iter()
        .map(|(zeta, slices)| {
            let slices = slices
                .iter()
                .enumerate()
                .map(|(i, slice)| {
                    slice
                        .iter()
                        .map(|x| {
                            let new = Atom::tagged(x.clone(), zeta[..i.min(zeta.len())].to_vec());
                            renaming.insert(new.clone(), x.clone());
                            new
                        })
                        .collect()
                })
                .collect();
            (zeta.clone(), slices)
        })
        .collect();
    Transformed {
        skeleton: SystemSkeleton { carriers, ..sys.clone() },
        family: BasedFamily { phi, truncation: fam.truncation },
        renaming,
    }
}

/// Replaces `φ^k_ζ(m)` by the sequence `⟨φ^k_ζ(0), ..., φ^k_ζ(m)⟩`, and each
/// carrier `B(τ)` by the sequences so produced whose entries all lie in `B(τ)`
/// (the finite part of `^{<ω}B(τ)` that the family uses).
pub fn transform_tree(sys: &SystemSkeleton, fam: &BasedFamily) -> Transformed {
    let mut renaming = BTreeMap::new();
    let phi: BTreeMap<_, Vec<Vec<Atom>>> = fam
        .phi
        .iter()
        .map(|(zeta, slices)| {
            let slices = slices
                .iter()
                .map(|slice| {
                    (0..slice.len())
                        .map(|m| {
                            let new = Atom::Seq(slice[..=m].to_vec());
                            renaming.insert(new.clone(), slice[m].clone());
                            new
                        })
                        .collect()
                })
                .collect();
            (zeta.clone(), slices)
        })
        .collect();
    let used: Vec<(&Atom, &Atom)> = renaming.iter().collect();
    let carriers = sys
        .carriers
        .iter()
        .map(|(node, atoms)| {
            let kept = used
                .iter()
                .filter(|(new, _)| match new {
                    Atom::Seq(items) => items.iter().all(|x| atoms.contains(x)),
                    _ => false,
                })
                .map(|(new, _)| (*new).clone())
                .collect();
            (node.clone(), kept)
        })
        .collect();
    Transformed {
        skeleton: SystemSkeleton { carriers, ..sys.clone() },
        family: BasedFamily { phi, truncation: fam.truncation },
        renaming,
    }
}
