use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::system::WhiteheadSystem;
use super::WhiteheadError;
use crate::abelian::{solve_z, BasisCheck, IntMatrix, Presentation, Solution};
use crate::freeness::ReshufflingOrder;
use crate::int::Int;
use crate::lambda_core::{Atom, Node};

fn first_coordinate(zeta: &[u32]) -> i64 {
    zeta.first().map(|&x| i64::from(x)).unwrap_or(-1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZCoset {
    #[serde(serialize_with = "super::ser_node")]
    pub zeta: Node,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomCoset {
    #[serde(serialize_with = "super::ser_node")]
    pub zeta: Node,
    pub k: usize,
    pub m: usize,
    pub atom: Atom,
}

/// Candidate basis of `G_β / G_{α+1}` in the truncated quotient.
#[derive(Clone, Debug)]
pub struct BasisCandidate {
    pub alpha: i64,
    pub beta: i64,
    /// Generators: atoms of `s_ζ` and `z_{ζ,j}` for `ζ(0) < β`; relations:
    /// those `w_{ζ,m}`, plus `x = 0` for every generator indexed by some
    /// `ζ(0) <= α`.
    pub quotient: Presentation,
    pub z: Vec<ZCoset>,
    pub atoms: Vec<AtomCoset>,
    /// Generator indices of the candidate in `quotient`.
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expression {
    pub generator: String,
    /// Coefficients on the candidate elements, in candidate order.
    pub coefficients: Vec<(String, Int)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub size: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub coordinate_factors: Vec<Int>,
    pub generates: bool,
    pub independent: bool,
    pub is_basis: bool,
    pub not_generated: Vec<String>,
}

impl BasisReport {
    fn new(q: &Presentation, size: usize, check: BasisCheck) -> Self {
        BasisReport {
            size,
            free_rank: check.free_rank,
            generates: check.generates(),
            independent: check.independent(),
            is_basis: check.is_basis(),
            not_generated: check.not_generated.iter().map(|&g| q.generators()[g].clone()).collect(),
            torsion: check.torsion.into_iter().map(Int).collect(),
            coordinate_factors: check.coordinate_factors.into_iter().map(Int).collect(),
        }
    }
}

/// Selects the generator cosets for `α < ζ(0) < β`, walking `ζ` in the
/// order `<_I`. With `fresh(k, m)` meaning `φ^k_ζ(m)` avoids every `s^k_ν`,
/// `ν <_I ζ`:
/// - `z_{ζ,j}` is kept when `j < r`, when `j - r >= M'`, or when some
///   `fresh(k, j - r)` holds;
/// - for `m < M'` the fresh `φ^k_ζ(m)` are kept except the one with least
///   `k` (the relation `w_{ζ,m}` expresses it); for `m >= M'` all fresh
///   values are kept.
pub fn enumerate_basis(
    ws: &WhiteheadSystem,
    order: Option<&ReshufflingOrder>,
    alpha: i64,
    beta: i64,
) -> Result<BasisCandidate, WhiteheadError> {
    ws.validate()?;
    let order = order.ok_or_else(|| WhiteheadError::BadOrder("no reshuffling order given".into()))?;
    let index: Vec<Node> = ws.finals().into_iter().filter(|z| first_coordinate(z) < beta).collect();
    let split = ReshufflingOrder { alpha, fresh: 0, ..order.clone() };
    split.verify(&ws.family, &index).map_err(WhiteheadError::BadOrder)?;

    let layout = ws.layout_where(|z| first_coordinate(z) < beta);
    let mut kill: BTreeSet<usize> = BTreeSet::new();
    for (p, zeta) in layout.finals.iter().enumerate() {
        if first_coordinate(zeta) <= alpha {
            kill.extend(ws.family.set(zeta).iter().map(|x| layout.atom_index[x]));
            kill.extend((0..ws.j).map(|j| layout.z(p, j)));
        }
    }
    let quotient = ws.presentation(&layout).kill(&kill.into_iter().collect::<Vec<_>>());

    let count = ws.relation_count();
    let height = |z: &Node| z.len();
    let mut before: Vec<Vec<BTreeSet<&Atom>>> = Vec::new();
    let mut z = Vec::new();
    let mut atoms = Vec::new();
    let mut indices = Vec::new();
    for zeta in &order.order {
        let n = height(zeta);
        before.resize_with(before.len().max(n + 1), Vec::new);
        if first_coordinate(zeta) > alpha {
            let p = layout.finals.iter().position(|f| f == zeta).expect("order covers the layout");
            let fresh = |k: usize, m: usize| {
                ws.family.enumeration(zeta, k).get(m).filter(|x| !before[k].iter().any(|s| s.contains(x)))
            };
            for j in 0..ws.j {
                let keep = j < ws.r || j - ws.r >= count || (1..=n).any(|k| fresh(k, j - ws.r).is_some());
                if keep {
                    z.push(ZCoset { zeta: zeta.clone(), j });
                    indices.push(layout.z(p, j));
                }
            }
            for m in 0..ws.family.truncation {
                let mut fresh_ks = (1..=n).filter_map(|k| fresh(k, m).map(|x| (k, x)));
                if m < count {
                    fresh_ks.next();
                }
                for (k, x) in fresh_ks {
                    atoms.push(AtomCoset { zeta: zeta.clone(), k, m, atom: x.clone() });
                    indices.push(layout.atom_index[x]);
                }
            }
        }
        for k in 1..=n {
            before[k].push(ws.family.enumeration(zeta, k).iter().collect());
        }
    }
    Ok(BasisCandidate { alpha, beta, quotient, z, atoms, indices })
}

impl BasisCandidate {
    pub fn names(&self) -> Vec<String> {
        self.indices.iter().map(|&i| self.quotient.generators()[i].clone()).collect()
    }

    /// Writes a generator of the quotient as an integer combination of the
    /// candidate, modulo the quotient's relations. `None` when no such
    /// combination exists.
    pub fn express(&self, generator: usize) -> Result<Option<Expression>, WhiteheadError> {
        let n = self.quotient.generators().len();
        let rel = self.quotient.relations();
        let width = self.indices.len() + rel.rows();
        let mut a = IntMatrix::zeros(n, width);
        for (c, &g) in self.indices.iter().enumerate() {
            a[(g, c)] = BigInt::one();
        }
        for i in 0..rel.rows() {
            for g in 0..n {
                a[(g, self.indices.len() + i)] = rel[(i, g)].clone();
            }
        }
        let mut e = vec![BigInt::zero(); n];
        e[generator] = BigInt::one();
        let names = self.names();
        Ok(match solve_z(&a, &e)? {
            Solution::Infeasible(_) => None,
            Solution::Integral(x) => Some(Expression {
                generator: self.quotient.generators()[generator].clone(),
                coefficients: names
                    .into_iter()
                    .zip(x)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(g, c)| (g, Int(c)))
                    .collect(),
            }),
        })
    }

    /// Expressions for the generators left out of the candidate that are not
    /// killed in the quotient.
    pub fn dropped(&self) -> Result<Vec<Expression>, WhiteheadError> {
        let rel = self.quotient.relations();
        let killed = |g: usize| {
            (0..rel.rows()).any(|i| rel[(i, g)].is_one() && (0..rel.cols()).all(|c| c == g || rel[(i, c)].is_zero()))
        };
        let mut out = Vec::new();
        for g in 0..self.quotient.generators().len() {
            if !self.indices.contains(&g) && !killed(g) {
                if let Some(e) = self.express(g)? {
                    out.push(e);
                }
            }
        }
        Ok(out)
    }
}

pub fn verify_basis(candidate: &BasisCandidate) -> BasisReport {
    let check = candidate.quotient.check_basis(&candidate.indices);
    BasisReport::new(&candidate.quotient, candidate.indices.len(), check)
}
