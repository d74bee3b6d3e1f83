//! Groups on `z_0, z_1, ...` with relations
//! `q_m z_{m+r+1} = z_{m+r} + sum_{l<r} d^l_m z_l`, truncated to `J`
//! generators, and explicit divisibility evidence for `z_r` modulo
//! `L = <z_0, ..., z_{r-1}>`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{dot, IntMatrix};
use super::normal_form::RowLattice;
use super::presentation::Presentation;
use super::AbelianError;
use crate::int::{is_prime, Int};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonfreeSpec {
    pub r: usize,
    pub q: Vec<u64>,
    /// `d[m][l]` for `l < r`; may be omitted when `r = 0`.
    #[serde(default)]
    pub d: Vec<Vec<Int>>,
    #[serde(rename = "J")]
    pub j: usize,
}

impl NonfreeSpec {
    /// Number of relations kept by the truncation: `J - r - 1`.
    pub fn relation_count(&self) -> usize {
        self.j.saturating_sub(self.r + 1)
    }

    pub fn validate(&self) -> Result<(), AbelianError> {
        if self.j < self.r + 2 {
            return Err(AbelianError::TruncationTooSmall { j: self.j, r: self.r });
        }
        let count = self.relation_count();
        if self.q.len() < count {
            return Err(AbelianError::Spec(format!("{} primes given, truncation needs {count}", self.q.len())));
        }
        if let Some(q) = self.q.iter().find(|&&q| !is_prime(q)) {
            return Err(AbelianError::Spec(format!("{q} is not prime")));
        }
        if self.r > 0 && self.d.len() < count {
            return Err(AbelianError::Spec(format!(
                "{} coefficient rows given, truncation needs {count}",
                self.d.len()
            )));
        }
        if let Some((m, row)) = self.d.iter().enumerate().find(|(_, row)| row.len() != self.r) {
            return Err(AbelianError::Spec(format!(
                "coefficient row {m} has {} entries, expected r = {}",
                row.len(),
                self.r
            )));
        }
        Ok(())
    }

    fn d(&self, m: usize, l: usize) -> BigInt {
        self.d.get(m).map(|row| row[l].0.clone()).unwrap_or_default()
    }

    /// Relation `w_m` as a vector over `z_0..z_{J-1}`.
    fn relation(&self, m: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::zero(); self.j];
        row[m + self.r + 1] += BigInt::from(self.q[m]);
        row[m + self.r] -= BigInt::one();
        for l in 0..self.r {
            row[l] -= self.d(m, l);
        }
        row
    }
}

pub fn build_h(spec: &NonfreeSpec) -> Result<Presentation, AbelianError> {
    spec.validate()?;
    let gens = (0..spec.j).map(|j| format!("z{j}")).collect();
    let rows = (0..spec.relation_count()).map(|m| spec.relation(m)).collect();
    Presentation::new(gens, IntMatrix::from_rows(spec.j, rows)?)
}

/// One substitution chain: `z_r = product * z_{m+r+1} + sum_i multipliers[i] * w_i + sum_l l_coefficients[l] * z_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityStep {
    pub m: usize,
    /// `q_0 * ... * q_m`
    pub product: Int,
    /// Index of the generator `z_{m+r+1}` that `z_r + L` is a multiple of.
    pub witness: usize,
    pub multipliers: Vec<Int>,
    pub l_coefficients: Vec<Int>,
}

impl DivisibilityStep {
    pub fn verify(&self, spec: &NonfreeSpec) -> bool {
        if self.multipliers.len() != self.m + 1
            || self.l_coefficients.len() != spec.r
            || self.witness != self.m + spec.r + 1
        {
            return false;
        }
        if self.m >= spec.relation_count() {
            return false;
        }
        let product: BigInt = spec.q[..=self.m].iter().map(|&q| BigInt::from(q)).product();
        if product != self.product.0 {
            return false;
        }
        let mut residual = vec![BigInt::zero(); spec.j];
        residual[spec.r] += BigInt::one();
        residual[self.witness] -= &self.product.0;
        for (i, mult) in self.multipliers.iter().enumerate() {
            for (x, w) in residual.iter_mut().zip(spec.relation(i)) {
                *x -= &mult.0 * w;
            }
        }
        for (l, c) in self.l_coefficients.iter().enumerate() {
            residual[l] -= &c.0;
        }
        residual.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityEvidence {
    pub m_max: usize,
    pub steps: Vec<DivisibilityStep>,
    /// `z_r` does not lie in `L` plus the relation span of the truncation.
    pub target_nonzero: bool,
}

impl DivisibilityEvidence {
    pub fn verify(&self, spec: &NonfreeSpec) -> bool {
        self.steps.len() == self.m_max + 1
            && self.steps.iter().enumerate().all(|(m, s)| s.m == m && s.verify(spec))
            && self.target_nonzero == target_nonzero(spec)
    }
}

pub fn divisibility_evidence(spec: &NonfreeSpec, m_max: usize) -> Result<DivisibilityEvidence, AbelianError> {
    spec.validate()?;
    if m_max >= spec.relation_count() {
        return Err(AbelianError::Spec(format!(
            "evidence up to m = {m_max} needs {} relations, truncation keeps {}",
            m_max + 1,
            spec.relation_count()
        )));
    }
    let r = spec.r;
    let mut steps = Vec::with_capacity(m_max + 1);
    let mut prefix = BigInt::one(); // q_0 * ... * q_{m-1}
    let mut multipliers = Vec::new();
    let mut l_coefficients = vec![BigInt::zero(); r];
    for m in 0..=m_max {
        multipliers.push(Int(-prefix.clone()));
        for (l, c) in l_coefficients.iter_mut().enumerate() {
            *c -= &prefix * spec.d(m, l);
        }
        prefix *= BigInt::from(spec.q[m]);
        steps.push(DivisibilityStep {
            m,
            product: Int(prefix.clone()),
            witness: m + r + 1,
            multipliers: multipliers.clone(),
            l_coefficients: l_coefficients.iter().cloned().map(Int).collect(),
        });
    }
    Ok(DivisibilityEvidence { m_max, steps, target_nonzero: target_nonzero(spec) })
}

fn target_nonzero(spec: &NonfreeSpec) -> bool {
    let Ok(h) = build_h(spec) else { return false };
    let killed = h.kill(&(0..spec.r).collect::<Vec<_>>());
    let lattice = RowLattice::new(killed.relations());
    let mut e = vec![BigInt::zero(); spec.j];
    e[spec.r] = BigInt::one();
    !lattice.contains(&e)
}

/// Coefficients of `x` after reduction modulo the relations; used by tests
/// that probe purity of `L` by brute force.
pub fn in_subgroup_mod_relations(h: &Presentation, x: &[BigInt], subgroup: &[usize]) -> bool {
    let killed = h.kill(subgroup);
    RowLattice::new(killed.relations()).contains(x)
}

pub fn evaluate_relation(spec: &NonfreeSpec, m: usize, values: &[BigInt]) -> BigInt {
    dot(&spec.relation(m), values)
}
