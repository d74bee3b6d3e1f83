use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

/// A system of distinct representatives: `assignment[i] ∈ fam[i]`, all distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal<T> {
    pub assignment: Vec<T>,
}

impl<T: Ord> Transversal<T> {
    pub fn verify(&self, fam: &[BTreeSet<T>]) -> bool {
        let distinct: BTreeSet<&T> = self.assignment.iter().collect();
        self.assignment.len() == fam.len()
            && distinct.len() == fam.len()
            && self.assignment.iter().zip(fam).all(|(t, s)| s.contains(t))
    }
}

/// Indices whose sets have fewer elements in their union than there are indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallCertificate<T> {
    pub violator: Vec<usize>,
    pub neighborhood: Vec<T>,
}

impl<T: Ord + Clone> HallCertificate<T> {
    pub fn verify(&self, fam: &[BTreeSet<T>]) -> bool {
        let indices: BTreeSet<usize> = self.violator.iter().copied().collect();
        if indices.len() != self.violator.len() || indices.iter().any(|&i| i >= fam.len()) {
            return false;
        }
        let union: BTreeSet<&T> = indices.iter().flat_map(|&i| fam[i].iter()).collect();
        let claimed: BTreeSet<&T> = self.neighborhood.iter().collect();
        union == claimed && union.len() < indices.len()
    }

    pub fn size(&self) -> usize {
        self.violator.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum TransversalResult<T> {
    Transversal(Transversal<T>),
    Violator(HallCertificate<T>),
}

impl<T: Ord + Clone> TransversalResult<T> {
    pub fn verify(&self, fam: &[BTreeSet<T>]) -> bool {
        match self {
            TransversalResult::Transversal(t) => t.verify(fam),
            TransversalResult::Violator(c) => c.verify(fam),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, TransversalResult::Transversal(_))
    }
}

/// The family with atoms replaced by dense ids in sorted order.
pub(crate) struct Indexed<'a, T> {
    pub atoms: Vec<&'a T>,
    pub sets: Vec<Vec<usize>>,
}

impl<'a, T: Ord> Indexed<'a, T> {
    pub fn new(fam: &'a [BTreeSet<T>]) -> Self {
        let ids: BTreeMap<&T, usize> =
            fam.iter().flatten().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, a)| (a, i)).collect();
        let sets = fam.iter().map(|s| s.iter().map(|a| ids[a]).collect()).collect();
        Indexed { atoms: ids.into_keys().collect(), sets }
    }
}

/// Breadth-first augmenting paths with indices and atoms scanned in
/// ascending order. On failure the indices reached from the unmatched index
/// form a Hall violator whose union is exactly the atoms reached.
pub fn find_transversal<T: Ord + Clone>(fam: &[BTreeSet<T>]) -> TransversalResult<T> {
    let ix = Indexed::new(fam);
    let n_atoms = ix.atoms.len();
    let mut match_atom: Vec<Option<usize>> = vec![None; n_atoms];
    let mut match_index: Vec<Option<usize>> = vec![None; fam.len()];

    for root in 0..fam.len() {
        let mut via: Vec<Option<usize>> = vec![None; n_atoms];
        let mut reached = vec![root];
        let mut queue = VecDeque::from([root]);
        let mut free_atom = None;
        'search: while let Some(i) = queue.pop_front() {
            for &a in &ix.sets[i] {
                if via[a].is_some() {
                    continue;
                }
                via[a] = Some(i);
                match match_atom[a] {
                    None => {
                        free_atom = Some(a);
                        break 'search;
                    }
                    Some(j) => {
                        reached.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let Some(mut a) = free_atom else {
            reached.sort_unstable();
            let neighborhood = (0..n_atoms).filter(|&a| via[a].is_some()).map(|a| ix.atoms[a].clone()).collect();
            return TransversalResult::Violator(HallCertificate { violator: reached, neighborhood });
        };
        loop {
            let i = via[a].expect("atom on the path");
            let previous = match_index[i];
            match_index[i] = Some(a);
            match_atom[a] = Some(i);
            match previous {
                Some(p) if i != root => a = p,
                _ => break,
            }
        }
    }
    let assignment = match_index.into_iter().map(|a| ix.atoms[a.expect("all matched")].clone()).collect();
    TransversalResult::Transversal(Transversal { assignment })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[char]]) -> Vec<BTreeSet<char>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn spec_examples() {
        let twins = fam(&[&['a'], &['a']]);
        match find_transversal(&twins) {
            TransversalResult::Violator(c) => {
                assert_eq!(c.violator, vec![0, 1]);
                assert_eq!(c.neighborhood, vec!['a']);
                assert!(c.verify(&twins));
            }
            other => panic!("{other:?}"),
        }
        let chain = fam(&[&['a', 'b'], &['b', 'c']]);
        match find_transversal(&chain) {
            TransversalResult::Transversal(t) => {
                assert_eq!(t.assignment, vec!['a', 'b']);
                assert!(t.verify(&chain));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_augmenting_path() {
        let f = fam(&[&['a', 'b'], &['a'], &['b', 'c']]);
        let r = find_transversal(&f);
        assert!(r.is_free());
        assert!(r.verify(&f));
    }

    #[test]
    fn empty_set_is_a_violator() {
        let f = fam(&[&['a'], &[]]);
        match find_transversal(&f) {
            TransversalResult::Violator(c) => assert_eq!(c.violator, vec![1]),
            other => panic!("{other:?}"),
        }
        assert!(find_transversal::<char>(&[]).is_free());
    }
}
