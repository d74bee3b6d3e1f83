use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::WhiteheadError;
use crate::abelian::{IntMatrix, Presentation};
use crate::int::is_prime;
use crate::lambda_core::{node_key, Atom, BasedFamily, Node, SystemSkeleton};

/// Skeleton, family, primes `q_{ζ,m}` and coefficients `d^ℓ_{ζ,m}`, with the
/// truncation: `J` generators `z_{ζ,j}` per final and
/// `M' = min(M, J - r - 1)` relations per final.
///
/// `pins` fixes selected `a_{ζ,j}` to given values when solving for a
/// witness; without pins every truncated system is solvable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadSystem {
    pub skeleton: SystemSkeleton,
    pub family: BasedFamily,
    pub r: usize,
    pub j: usize,
    pub q: BTreeMap<Node, Vec<u64>>,
    pub d: BTreeMap<Node, Vec<Vec<BigInt>>>,
    pub pins: BTreeMap<Node, BTreeMap<usize, BigInt>>,
}

/// Column layout shared by `G`'s relation rows and the witness equations.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub atoms: Vec<Atom>,
    pub atom_index: BTreeMap<Atom, usize>,
    pub finals: Vec<Node>,
    pub j: usize,
}

impl Layout {
    pub fn z(&self, zeta_pos: usize, j: usize) -> usize {
        self.atoms.len() + zeta_pos * self.j + j
    }

    pub fn width(&self) -> usize {
        self.atoms.len() + self.finals.len() * self.j
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        for zeta in &self.finals {
            for j in 0..self.j {
                names.push(z_name(zeta, j));
            }
        }
        names
    }
}

pub fn z_name(zeta: &[u32], j: usize) -> String {
    format!("z[{},{j}]", node_key(zeta))
}

impl WhiteheadSystem {
    pub fn default_j(truncation: usize, r: usize) -> usize {
        truncation + r + 2
    }

    /// `M' = min(M, J - r - 1)`.
    pub fn relation_count(&self) -> usize {
        self.family.truncation.min(self.j.saturating_sub(self.r + 1))
    }

    pub fn finals(&self) -> Vec<Node> {
        self.family.finals()
    }

    pub fn validate(&self) -> Result<(), WhiteheadError> {
        let mut problems: Vec<String> = self
            .skeleton
            .validate()
            .violations
            .iter()
            .chain(self.family.validate(&self.skeleton).iter())
            .map(|v| format!("{} at {:?}: {}", v.clause, node_key(&v.node), v.detail))
            .collect();
        if !problems.is_empty() {
            return Err(WhiteheadError::InvalidSystem(problems));
        }
        if self.j < self.r + 2 {
            return Err(WhiteheadError::TruncationTooSmall { j: self.j, r: self.r });
        }
        let count = self.relation_count();
        for zeta in self.family.phi.keys() {
            let key = node_key(zeta);
            match self.q.get(zeta) {
                None => problems.push(format!("no primes for {key:?}")),
                Some(qs) if qs.len() < count => {
                    problems.push(format!("{key:?} has {} primes, needs {count}", qs.len()))
                }
                Some(qs) => {
                    if let Some(q) = qs.iter().find(|&&q| !is_prime(q)) {
                        problems.push(format!("{q} given for {key:?} is not prime"));
                    }
                }
            }
            if self.r > 0 {
                match self.d.get(zeta) {
                    None => problems.push(format!("no coefficients d for {key:?}")),
                    Some(rows) if rows.len() < count => {
                        problems.push(format!("{key:?} has {} coefficient rows, needs {count}", rows.len()))
                    }
                    Some(_) => {}
                }
            }
            if let Some(rows) = self.d.get(zeta) {
                if rows.iter().any(|row| row.len() != self.r) {
                    problems.push(format!("coefficient rows for {key:?} must have r = {} entries", self.r));
                }
            }
        }
        let finals: BTreeSet<&Node> = self.family.phi.keys().collect();
        for zeta in self.q.keys().chain(self.d.keys()).chain(self.pins.keys()) {
            if !finals.contains(zeta) {
                problems.push(format!("data given for {:?}, which indexes no set", node_key(zeta)));
            }
        }
        for (zeta, pins) in &self.pins {
            if let Some(j) = pins.keys().find(|&&j| j >= self.j) {
                problems.push(format!("pin a[{:?}, {j}] beyond J = {}", node_key(zeta), self.j));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(WhiteheadError::InvalidSystem(problems))
        }
    }

    /// Whether `rge(φ^i_ζ) ∩ rge(φ^k_ζ) = ∅` for all `ζ` and `i != k`.
    pub fn levels_disjoint(&self) -> bool {
        self.family.phi.values().all(|slices| {
            let total: usize = slices.iter().map(|s| s.iter().collect::<BTreeSet<_>>().len()).sum();
            let union: BTreeSet<&Atom> = slices.iter().flatten().collect();
            union.len() == total
        })
    }

    pub(crate) fn layout(&self) -> Layout {
        self.layout_where(|_| true)
    }

    /// Layout over the finals accepted by `keep` and the atoms of their sets.
    pub(crate) fn layout_where(&self, keep: impl Fn(&Node) -> bool) -> Layout {
        let finals: Vec<Node> = self.finals().into_iter().filter(|z| keep(z)).collect();
        let atoms: Vec<Atom> =
            finals.iter().flat_map(|z| self.family.set(z)).collect::<BTreeSet<_>>().into_iter().collect();
        let atom_index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Layout { atoms, atom_index, finals, j: self.j }
    }

    /// The relations `w_{ζ,m}` of the layout's finals, without validation.
    pub(crate) fn presentation(&self, layout: &Layout) -> Presentation {
        let count = self.relation_count();
        let rows = (0..layout.finals.len())
            .flat_map(|p| (0..count).map(move |m| (p, m)))
            .map(|(p, m)| self.relation_row(layout, p, m))
            .collect();
        let relations = IntMatrix::from_rows(layout.width(), rows).expect("rows have layout width");
        Presentation::new(layout.names(), relations).expect("relation width matches generators")
    }

    fn d_coef(&self, zeta: &[u32], m: usize, l: usize) -> BigInt {
        self.d.get(zeta).and_then(|rows| rows.get(m)).map(|row| row[l].clone()).unwrap_or_default()
    }

    /// `w_{ζ,m}` as a row over the layout's columns.
    pub(crate) fn relation_row(&self, layout: &Layout, zeta_pos: usize, m: usize) -> Vec<BigInt> {
        let zeta = &layout.finals[zeta_pos];
        let mut row = vec![BigInt::zero(); layout.width()];
        row[layout.z(zeta_pos, m + self.r + 1)] += BigInt::from(self.q[zeta][m]);
        row[layout.z(zeta_pos, m + self.r)] -= BigInt::one();
        for l in 0..self.r {
            row[layout.z(zeta_pos, l)] -= self.d_coef(zeta, m, l);
        }
        for k in 1..=zeta.len() {
            if let Some(x) = self.family.enumeration(zeta, k).get(m) {
                row[layout.atom_index[x]] -= BigInt::one();
            }
        }
        row
    }

    /// Row labels `(ζ, m)` in the order used by [`build_g`].
    pub fn equations(&self) -> Vec<(Node, usize)> {
        let count = self.relation_count();
        self.finals().into_iter().flat_map(|z| (0..count).map(move |m| (z.clone(), m))).collect()
    }

    /// Keeps only finals whose first coordinate is in `allowed`, pruning the
    /// tree accordingly. This is index bookkeeping only.
    pub fn variant(&self, allowed: &BTreeSet<u32>) -> WhiteheadSystem {
        let keep = |n: &Node| n.first().is_none_or(|x| allowed.contains(x));
        let mut skeleton = self.skeleton.clone();
        skeleton.nodes.retain(keep);
        skeleton.level.retain(|k, _| keep(k));
        skeleton.carriers.retain(|k, _| keep(k));
        skeleton.index_sets.retain(|k, _| keep(k));
        if let Some(e) = skeleton.index_sets.get_mut(&Vec::new()) {
            e.retain(|x| allowed.contains(x));
        }
        let mut out = self.clone();
        out.family.phi.retain(|k, _| keep(k));
        out.q.retain(|k, _| keep(k));
        out.d.retain(|k, _| keep(k));
        out.pins.retain(|k, _| keep(k));
        out.skeleton = skeleton;
        out
    }
}

/// `G = F/K`: free on `⋃ S` and the `z_{ζ,j}`, modulo the `w_{ζ,m}`, `m < M'`.
pub fn build_g(ws: &WhiteheadSystem) -> Result<Presentation, WhiteheadError> {
    ws.validate()?;
    Ok(ws.presentation(&ws.layout()))
}
