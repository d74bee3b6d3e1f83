use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ladder::{y_name, z_name, LadderInstance, Plan, Subcase};
use super::lemmas::{lemma3_table, lemma4_table, mu_weights, t_p, within, BlockTable, Lemma4Table};
use super::UnifError;
use crate::abelian::{dot, IntMatrix, LinearSystem, Presentation, RowLattice, Solution};
use crate::int::{modulo, pow, rational_to_string, Int};

/// Truncated `A` and `A'` with the section `ψ` and a splitting `ρ`.
///
/// `A` is free on the base and level generators modulo the relations (†).
/// `A'` has a primed copy of each generator plus `e` (last column) and the
/// relations (††), i.e. the rows `[R | -a]`. `π` drops `e`;
/// `ψ(g)` is the primed canonical representative of `g`;
/// `ρ(x) = x' + k_x e`.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub a: Presentation,
    pub a_prime: Presentation,
    /// Per level (sorted by `alpha`): its relation rows.
    pub stages: Vec<Stage>,
    /// Canonical `g_{α,n}` per relation row.
    pub psi: Vec<Vec<BigInt>>,
    /// The `a_ℓ` term of each relation row of `A'`.
    pub a_terms: Vec<BigInt>,
    /// `k`, with `R k = -a`.
    pub rho: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub level: usize,
    pub alpha: u64,
    pub rows: std::ops::Range<usize>,
    /// Column of `y[α,0]`.
    pub y0: usize,
    /// Columns of `z[α,1..=r]`.
    pub z: Vec<usize>,
}

impl ChainState {
    pub fn width(&self) -> usize {
        self.a.generators().len()
    }

    /// `ψ(g) - ρ(g)` as the integer multiple of `e`: `-k·g`.
    pub fn residue(&self, g: &[BigInt]) -> BigInt {
        -dot(&self.rho, g)
    }

    /// `ρ` maps every relation of `A` into the relations of `A'`.
    pub fn splitting_holds(&self) -> bool {
        let lattice = RowLattice::new(self.a_prime.relations());
        (0..self.a.relations().rows()).all(|i| {
            let row = self.a.relations().row(i);
            let mut image = row.to_vec();
            image.push(dot(row, &self.rho));
            lattice.contains(&image)
        })
    }

    /// `ker π = Z e` with `e` of infinite order: `rank R = rank [R | -a] = rows`.
    pub fn kernel_is_ze(&self) -> bool {
        let rows = self.a.relations().rows();
        self.a.relations().rank() == rows && self.a_prime.relations().rank() == rows
    }

    /// `π(ψ(g)) = g` in `A` for every recorded `g`.
    pub fn section_holds(&self, originals: &[Vec<BigInt>]) -> bool {
        let lattice = RowLattice::new(self.a.relations());
        originals.iter().zip(&self.psi).all(|(g, canon)| {
            let diff: Vec<BigInt> = g.iter().zip(canon).map(|(x, y)| x - y).collect();
            lattice.contains(&diff)
        })
    }
}

/// A value `φ_α(m)` of the family handed to `H`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WValue {
    /// `⟨⟨μ_k(m)⟩, p_m, g_m⟩`.
    Prime { mu: Vec<Int>, p: u64, g: BTreeMap<String, Int> },
    /// `⟨⟨μ_k(n)⟩, g_n : n < t_{m+1}⟩`, listed by `n`.
    Block { mu: Vec<Vec<Int>>, g: Vec<BTreeMap<String, Int>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HEntry {
    pub w: WValue,
    #[serde(with = "crate::int::decimal")]
    pub residue: BigInt,
    #[serde(with = "crate::int::decimal")]
    pub modulus: BigInt,
    pub value: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub alpha: u64,
    /// `m_0 = y'_0 - ρ(y_0)`, then `m_k = z'_k - ρ(z_k)`.
    pub m: Vec<Int>,
    /// Per index, whether the lemma's bound on every `|m_k|` holds there.
    pub hypothesis: Vec<bool>,
    /// Least index from which the hypothesis holds up to the truncation.
    pub n0: usize,
    /// Index into the report's `h` of each `φ_α(n)`.
    pub w: Vec<usize>,
    pub h: Vec<u8>,
    pub c: Vec<u8>,
    pub mismatches_after_n0: Vec<usize>,
    pub mismatches_before_n0: Vec<usize>,
    pub derivation_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub subcase: Subcase,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<usize>,
    pub generators: usize,
    pub relations: usize,
    pub kernel_is_ze: bool,
    pub splitting_holds: bool,
    pub section_holds: bool,
    /// `k_x` with `ρ(x) = x' + k_x e`, nonzero entries only.
    pub rho: BTreeMap<String, Int>,
    pub h: Vec<HEntry>,
    pub levels: Vec<LevelReport>,
    /// No mismatch at or after any `n0`, and every check above passed.
    pub recovered: bool,
}

struct Layout {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Layout {
    fn new(inst: &LadderInstance, plan: &Plan) -> Self {
        let mut names = inst.base.clone();
        for (pos, &li) in plan.order.iter().enumerate() {
            let a = inst.levels[li].alpha;
            names.extend((0..=plan.relations[pos]).map(|n| y_name(a, n)));
            names.extend((1..=inst.r).map(|k| z_name(a, k)));
        }
        let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Layout { names, index }
    }

    fn vector(&self, g: &BTreeMap<String, Int>) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.names.len()];
        for (x, c) in g {
            v[self.index[x]] += &c.0;
        }
        v
    }

    fn sparse(&self, v: &[BigInt]) -> BTreeMap<String, Int> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.names[i].clone(), Int(c.clone())))
            .collect()
    }
}

fn permute(v: &[BigInt], order: &[usize]) -> Vec<BigInt> {
    order.iter().map(|&i| v[i].clone()).collect()
}

fn unpermute(v: &[BigInt], order: &[usize]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); v.len()];
    for (pos, &i) in order.iter().enumerate() {
        out[i] = v[pos].clone();
    }
    out
}

fn stage_columns(layout: &Layout, inst: &LadderInstance, plan: &Plan, pos: usize) -> Vec<usize> {
    let a = inst.levels[plan.order[pos]].alpha;
    let mut cols: Vec<usize> = (0..=plan.relations[pos]).rev().map(|n| layout.index[&y_name(a, n)]).collect();
    cols.extend((1..=inst.r).map(|k| layout.index[&z_name(a, k)]));
    cols
}

/// Lemma tables, each built once per key.
#[derive(Default)]
struct Tables {
    prime: BTreeMap<(u64, Vec<BigInt>), Lemma4Table>,
    block: BTreeMap<(usize, Vec<Vec<BigInt>>), BlockTable>,
}

impl Tables {
    fn prime(&mut self, p: u64, r: usize, mu: Vec<BigInt>) -> Result<&Lemma4Table, UnifError> {
        let key = (p, mu);
        if !self.prime.contains_key(&key) {
            let table = lemma4_table(p, r, &key.1)?;
            self.prime.insert(key.clone(), table);
        }
        Ok(&self.prime[&key])
    }

    fn block(&mut self, p: u64, r: usize, mu: &[Vec<BigInt>], i: usize, t: &[usize]) -> Result<&BlockTable, UnifError> {
        let key = (i, mu.iter().map(|m| m[..t[i]].to_vec()).collect::<Vec<_>>());
        if !self.block.contains_key(&key) {
            let table = lemma3_table(p, r, &key.1, i, t)?;
            self.block.insert(key.clone(), table);
        }
        Ok(&self.block[&key])
    }
}

fn level_mu(level: &super::ladder::Level) -> Vec<Vec<BigInt>> {
    level.mu.iter().map(|row| row.iter().map(|v| v.0.clone()).collect()).collect()
}

/// Builds `A`, `A'`, `ψ` and the canonical splitting.
pub fn build_chain(inst: &LadderInstance) -> Result<(ChainState, Vec<Vec<BigInt>>), UnifError> {
    let plan = inst.validate()?;
    let layout = Layout::new(inst, &plan);
    let width = layout.names.len();
    let r = inst.r;
    let mut tables = Tables::default();

    // ψ canonicalizes modulo earlier relations, later levels' columns first
    // and each level's columns from y_top down, so representatives never
    // depend on the stage that computes them.
    let mut canon_order: Vec<usize> = Vec::with_capacity(width);
    for pos in (0..plan.order.len()).rev() {
        canon_order.extend(stage_columns(&layout, inst, &plan, pos));
    }
    canon_order.extend(0..inst.base.len());

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut originals = Vec::new();
    let mut psi = Vec::new();
    let mut a_terms = Vec::new();
    let mut stages = Vec::new();
    for (pos, &li) in plan.order.iter().enumerate() {
        let level = &inst.levels[li];
        let a = level.alpha;
        let mu = level_mu(level);
        let earlier = if rows.is_empty() {
            None
        } else {
            let permuted: Vec<Vec<BigInt>> = rows.iter().map(|row| permute(row, &canon_order)).collect();
            Some(RowLattice::new(&IntMatrix::from_rows(width, permuted)?))
        };
        let start = rows.len();
        let y = |n: usize| layout.index[&y_name(a, n)];
        let z: Vec<usize> = (1..=r).map(|k| layout.index[&z_name(a, k)]).collect();
        for n in 0..plan.relations[pos] {
            let original = layout.vector(&level.g[n]);
            let g = match &earlier {
                Some(lattice) => unpermute(&lattice.reduce(&permute(&original, &canon_order)), &canon_order),
                None => original.clone(),
            };
            let mut row = g.clone();
            let (p, prev) = match inst.subcase {
                Subcase::DistinctPrimes => (level.primes[n], y(0)),
                Subcase::FixedPrime => (inst.p.expect("validated"), y(n)),
            };
            row[y(n + 1)] += p;
            row[prev] -= 1;
            for (k, &col) in z.iter().enumerate() {
                row[col] -= &mu[k][n];
            }
            let a_term = match inst.subcase {
                Subcase::DistinctPrimes => {
                    let mu_n: Vec<BigInt> = mu.iter().map(|m| m[n].clone()).collect();
                    tables.prime(p, r, mu_n)?.a[usize::from(level.c[n])].clone()
                }
                Subcase::FixedPrime => {
                    let i = plan.t.iter().position(|&t| t > n).expect("n below t_I");
                    let table = tables.block(p, r, &mu, i, &plan.t)?;
                    BigInt::from(table.digit(usize::from(level.c[i - 1]), n))
                }
            };
            rows.push(row);
            originals.push(original);
            psi.push(g);
            a_terms.push(a_term);
        }
        stages.push(Stage { level: li, alpha: a, rows: start..rows.len(), y0: y(0), z });
    }

    let rel = IntMatrix::from_rows(width, rows)?;
    let mut prime_rows = rel.to_rows();
    for (row, a) in prime_rows.iter_mut().zip(&a_terms) {
        row.push(-a);
    }
    let prime_names: Vec<String> = layout.names.iter().map(|n| format!("{n}'")).chain(["e".to_string()]).collect();
    let a_prime = Presentation::new(prime_names, IntMatrix::from_rows(width + 1, prime_rows)?)?;

    // solve R k = -a with every y[α,0] and z[α,k] column first, so the
    // canonical solution keeps those coordinates small
    let mut solve_order: Vec<usize> =
        stages.iter().flat_map(|s| std::iter::once(s.y0).chain(s.z.iter().copied())).collect();
    let rest: Vec<usize> = (0..width).filter(|c| !solve_order.contains(c)).collect();
    solve_order.extend(rest);
    let permuted = rel.select_columns(&solve_order);
    let rhs: Vec<BigInt> = a_terms.iter().map(|a| -a).collect();
    let rho = match LinearSystem::new(&permuted).solve_canonical(&rhs)? {
        Solution::Integral(k) => unpermute(&k, &solve_order),
        Solution::Infeasible(cert) => {
            return Err(UnifError::Splitting(cert.y.iter().map(rational_to_string).collect()));
        }
    };
    let a = Presentation::new(layout.names.clone(), rel)?;
    Ok((ChainState { a, a_prime, stages, psi, a_terms, rho }, originals))
}

fn first_n0(hypothesis: &[bool]) -> usize {
    hypothesis.iter().rposition(|h| !h).map_or(0, |i| i + 1)
}

pub fn simulate(inst: &LadderInstance) -> Result<SimulationReport, UnifError> {
    let plan = inst.validate()?;
    let (chain, originals) = build_chain(inst)?;
    let layout = Layout::new(inst, &plan);
    let r = inst.r;
    let mut tables = Tables::default();
    let mut h: BTreeMap<WValue, HEntry> = BTreeMap::new();
    let mut per_level = Vec::new();

    for (pos, stage) in chain.stages.iter().enumerate() {
        let level = &inst.levels[stage.level];
        let mu = level_mu(level);
        let k_y = |n: usize| &chain.rho[layout.index[&y_name(level.alpha, n)]];
        let mut m = vec![-&chain.rho[stage.y0]];
        m.extend(stage.z.iter().map(|&c| -&chain.rho[c]));
        let residues: Vec<BigInt> = stage.rows.clone().map(|row| chain.residue(&chain.psi[row])).collect();
        let a_terms = &chain.a_terms[stage.rows.clone()];
        let canon = |n: usize| layout.sparse(&chain.psi[stage.rows.start + n]);

        let mut hypothesis = Vec::new();
        let mut keys = Vec::new();
        let mut derivation = true;
        for idx in 0..level.c.len() {
            let (key, entry) = match inst.subcase {
                Subcase::DistinctPrimes => {
                    let p = level.primes[idx];
                    let mu_n: Vec<BigInt> = mu.iter().map(|row| row[idx].clone()).collect();
                    // applying ρ to (†) and subtracting from (††)
                    let lhs = -BigInt::from(p) * k_y(idx + 1);
                    let rhs = &m[0] + mu_n.iter().zip(&m[1..]).map(|(u, v)| u * v).sum::<BigInt>() - &residues[idx]
                        + &a_terms[idx];
                    derivation &= lhs == rhs;
                    hypothesis.push(within(&m, &BigInt::from(t_p(p, r)?)));
                    let table = tables.prime(p, r, mu_n.clone())?;
                    let modulus = BigInt::from(p);
                    let residue = modulo(&residues[idx], &modulus);
                    let value = table.f.eval(&residue);
                    let w = WValue::Prime { mu: mu_n.into_iter().map(Int).collect(), p, g: canon(idx) };
                    (w.clone(), HEntry { w, residue, modulus, value })
                }
                Subcase::FixedPrime => {
                    let p = inst.p.expect("validated");
                    let i = idx + 1;
                    let t_i = plan.t[i];
                    let weights = mu_weights(p, &mu, t_i);
                    let weighted = |v: &[BigInt]| -> BigInt { (0..t_i).map(|n| pow(p, n) * &v[n]).sum() };
                    let lhs = -pow(p, t_i) * k_y(t_i);
                    let rhs = &m[0] + weights.iter().zip(&m[1..]).map(|(u, v)| u * v).sum::<BigInt>()
                        - weighted(&residues)
                        + weighted(a_terms);
                    derivation &= lhs == rhs;
                    hypothesis.push(within(&m, &pow(p, plan.t[i - 1])));
                    let table = tables.block(p, r, &mu, i, &plan.t)?;
                    let modulus = table.modulus();
                    let residue = modulo(&weighted(&residues), &modulus);
                    let value = table.f.eval(&residue);
                    let w = WValue::Block {
                        mu: (0..t_i).map(|n| mu.iter().map(|row| Int(row[n].clone())).collect()).collect(),
                        g: (0..t_i).map(canon).collect(),
                    };
                    (w.clone(), HEntry { w, residue, modulus, value })
                }
            };
            if let Some(prev) = h.get(&key) {
                if prev != &entry {
                    return Err(UnifError::Inconsistent(format!(
                        "two residues for one value at level {}",
                        level.alpha
                    )));
                }
            }
            h.insert(key.clone(), entry);
            keys.push(key);
        }
        let n0 = first_n0(&hypothesis);
        per_level.push((pos, level.alpha, m, hypothesis, n0, keys, derivation));
    }

    let ids: BTreeMap<&WValue, usize> = h.keys().enumerate().map(|(i, w)| (w, i)).collect();
    let mut levels = Vec::new();
    for (pos, alpha, m, hypothesis, n0, keys, derivation_identity) in per_level {
        let level = &inst.levels[chain.stages[pos].level];
        let values: Vec<u8> = keys.iter().map(|k| h[k].value).collect();
        let mismatched = |range: std::ops::Range<usize>| range.filter(|&n| values[n] != level.c[n]).collect::<Vec<_>>();
        levels.push(LevelReport {
            alpha,
            m: m.into_iter().map(Int).collect(),
            hypothesis,
            n0,
            w: keys.iter().map(|k| ids[k]).collect(),
            mismatches_after_n0: mismatched(n0..values.len()),
            mismatches_before_n0: mismatched(0..n0),
            h: values,
            c: level.c.clone(),
            derivation_identity,
        });
    }
    let kernel_is_ze = chain.kernel_is_ze();
    let splitting_holds = chain.splitting_holds();
    let section_holds = chain.section_holds(&originals);
    let recovered = kernel_is_ze
        && splitting_holds
        && section_holds
        && levels.iter().all(|l| l.derivation_identity && l.mismatches_after_n0.is_empty());
    Ok(SimulationReport {
        subcase: inst.subcase,
        r,
        p: inst.p,
        t: if inst.subcase == Subcase::FixedPrime { plan.t.clone() } else { Vec::new() },
        generators: chain.width(),
        relations: chain.a.relations().rows(),
        kernel_is_ze,
        splitting_holds,
        section_holds,
        rho: layout.sparse(&chain.rho),
        h: h.into_values().collect(),
        levels,
        recovered,
    })
}

/// `φ'_α(n) = ⟨φ_α(n), η_α(n)⟩`, with `φ_α(n)` given by its index in the
/// report's `h`. `H'(⟨w, η⟩) = H(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecodedLevel {
    pub alpha: u64,
    pub values: Vec<(usize, u64)>,
    /// `H'` on each recoded value.
    pub h: Vec<u8>,
}

pub fn recode(inst: &LadderInstance, report: &SimulationReport) -> Vec<RecodedLevel> {
    report
        .levels
        .iter()
        .map(|lr| {
            let level = inst.levels.iter().find(|l| l.alpha == lr.alpha).expect("report matches instance");
            let values: Vec<(usize, u64)> = lr.w.iter().copied().zip(level.ladder.iter().copied()).collect();
            let h = values.iter().map(|(w, _)| report.h[*w].value).collect();
            RecodedLevel { alpha: lr.alpha, values, h }
        })
        .collect()
}

impl RecodedLevel {
    /// Injective, strictly increasing in the ladder coordinate, and bounded
    /// by `alpha`.
    pub fn is_ladder(&self) -> bool {
        self.values.windows(2).all(|w| w[0].1 < w[1].1) && self.values.last().is_none_or(|v| v.1 < self.alpha)
    }
}
