use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::matching::{find_transversal, HallCertificate, Indexed, TransversalResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum KFreeResult<T> {
    /// Every subfamily of size `< k` has a transversal.
    Pass { k: usize },
    /// A smallest Hall violator; its size is `< k`.
    Violator { k: usize, certificate: HallCertificate<T> },
}

impl<T> KFreeResult<T> {
    pub fn passes(&self) -> bool {
        matches!(self, KFreeResult::Pass { .. })
    }
}

/// Decides whether every subfamily with fewer than `k` members has a
/// transversal. Values of `k` above `|fam| + 1` are treated as `|fam| + 1`.
///
/// A transversal of the whole family settles every `k` at once. Otherwise
/// the matching certificate bounds the answer, and a smallest violator is
/// found among connected subfamilies (a minimum violator never splits into
/// parts with disjoint unions), pruned as soon as the union is too large to
/// be beaten.
pub fn k_free_check<T: Ord + Clone>(fam: &[BTreeSet<T>], k: usize) -> KFreeResult<T> {
    let k = k.min(fam.len() + 1);
    let seed = match find_transversal(fam) {
        TransversalResult::Transversal(_) => return KFreeResult::Pass { k },
        TransversalResult::Violator(c) => c,
    };
    let limit = (k.saturating_sub(1)).min(seed.size());
    if limit == 0 {
        return KFreeResult::Pass { k };
    }
    match smallest_violator(fam, limit) {
        Some(certificate) if certificate.size() < k => KFreeResult::Violator { k, certificate },
        _ => KFreeResult::Pass { k },
    }
}

/// The violator of minimum size, ties broken by the sorted index list, among
/// subfamilies of size at most `limit`.
pub fn smallest_violator<T: Ord + Clone>(fam: &[BTreeSet<T>], limit: usize) -> Option<HallCertificate<T>> {
    let ix = Indexed::new(fam);
    let n = fam.len();
    let adjacent: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && ix.sets[i].iter().any(|a| ix.sets[j].contains(a))).collect()).collect();
    let mut search = Search {
        sets: &ix.sets,
        adjacent: &adjacent,
        counts: vec![0; ix.atoms.len()],
        union: 0,
        chosen: Vec::new(),
        limit,
        best: None,
    };
    for v in 0..n {
        let ext: Vec<usize> = (v + 1..n).filter(|&u| adjacent[v][u]).collect();
        search.push(v);
        search.extend(v, ext);
        search.pop(v);
    }
    search.best.map(|violator| {
        let neighborhood: BTreeSet<&T> = violator.iter().flat_map(|&i| fam[i].iter()).collect();
        HallCertificate { violator, neighborhood: neighborhood.into_iter().cloned().collect() }
    })
}

struct Search<'a> {
    sets: &'a [Vec<usize>],
    adjacent: &'a [Vec<bool>],
    counts: Vec<u32>,
    union: usize,
    chosen: Vec<usize>,
    limit: usize,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn push(&mut self, i: usize) {
        self.chosen.push(i);
        for &a in &self.sets[i] {
            if self.counts[a] == 0 {
                self.union += 1;
            }
            self.counts[a] += 1;
        }
    }

    fn pop(&mut self, i: usize) {
        self.chosen.pop();
        for &a in &self.sets[i] {
            self.counts[a] -= 1;
            if self.counts[a] == 0 {
                self.union -= 1;
            }
        }
    }

    fn record(&mut self) {
        if self.union >= self.chosen.len() {
            return;
        }
        let mut candidate = self.chosen.clone();
        candidate.sort_unstable();
        let better = match &self.best {
            None => true,
            Some(b) => (candidate.len(), &candidate) < (b.len(), b),
        };
        if better {
            self.limit = candidate.len();
            self.best = Some(candidate);
        }
    }

    /// Enumerates each connected set containing `root` as its least element
    /// exactly once (extension-set scheme).
    fn extend(&mut self, root: usize, mut ext: Vec<usize>) {
        self.record();
        if self.chosen.len() >= self.limit || self.union >= self.limit {
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for u in root + 1..self.sets.len() {
                if self.adjacent[w][u]
                    && !self.chosen.contains(&u)
                    && u != w
                    && !next.contains(&u)
                    && !self.chosen.iter().any(|&c| self.adjacent[c][u])
                {
                    next.push(u);
                }
            }
            self.push(w);
            self.extend(root, next);
            self.pop(w);
        }
    }
}
