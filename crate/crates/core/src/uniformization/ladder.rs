use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::lemmas::t_sequence;
use super::UnifError;
use crate::int::{is_prime, Int};

pub const SCHEMA: &str = "lambda-systems/ladder/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcase {
    /// `p_{α,n} y_{α,n+1} = y_{α,0} + Σ μ_{α,k}(n) z_{α,k} - g_{α,n}`, distinct primes.
    DistinctPrimes,
    /// `p y_{α,n+1} = y_{α,n} + Σ μ_{α,k}(n) z_{α,k} - g_{α,n}`, one prime.
    FixedPrime,
}

/// One limit level `α` with its ladder, coloring and relation data.
///
/// `g[n]` is a formal combination of base generators and generators of
/// levels with smaller `alpha`, named `y[β,n]` and `z[β,k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    pub alpha: u64,
    pub ladder: Vec<u64>,
    pub c: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    /// `mu[k - 1][n] = μ_{α,k}(n)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<Vec<Int>>,
    pub g: Vec<BTreeMap<String, Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub subcase: Subcase,
    #[serde(default)]
    pub r: usize,
    /// The prime of the fixed-prime subcase.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Generators of the free group the levels are built over.
    #[serde(default)]
    pub base: Vec<String>,
    pub levels: Vec<Level>,
}

pub fn y_name(alpha: u64, n: usize) -> String {
    format!("y[{alpha},{n}]")
}

pub fn z_name(alpha: u64, k: usize) -> String {
    format!("z[{alpha},{k}]")
}

/// Derived sizes of a validated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    /// Levels sorted by `alpha`.
    pub order: Vec<usize>,
    /// `t_0 .. t_I` for the fixed-prime subcase, `I` the longest coloring.
    pub t: Vec<usize>,
    /// Relations per level, in `order`.
    pub relations: Vec<usize>,
}

impl LadderInstance {
    pub fn from_json(json: &str) -> Result<Self, UnifError> {
        let inst: LadderInstance = serde_json::from_str(json).map_err(|e| UnifError::Instance(e.to_string()))?;
        if let Some(schema) = &inst.schema {
            if schema != SCHEMA {
                return Err(UnifError::Instance(format!("unsupported schema {schema:?}")));
            }
        }
        Ok(inst)
    }

    /// Relations of a level: `M = |c|` with distinct primes, `t_{|c|}` with a
    /// fixed prime.
    pub fn relation_count(&self, level: &Level, t: &[usize]) -> usize {
        match self.subcase {
            Subcase::DistinctPrimes => level.c.len(),
            Subcase::FixedPrime => t[level.c.len()],
        }
    }

    pub fn validate(&self) -> Result<Plan, UnifError> {
        let bad = |msg: String| Err(UnifError::Instance(msg));
        let mut names = BTreeSet::new();
        for b in &self.base {
            if b.is_empty() || b == "e" || b.contains(['[', ']', ',']) {
                return bad(format!("base generator name {b:?} is reserved or malformed"));
            }
            if !names.insert(b.clone()) {
                return bad(format!("base generator {b:?} listed twice"));
            }
        }
        let t = match (self.subcase, self.p) {
            (Subcase::DistinctPrimes, None) => vec![0],
            (Subcase::DistinctPrimes, Some(_)) => return bad("p is only used with a fixed prime".into()),
            (Subcase::FixedPrime, None) => return bad("the fixed-prime subcase needs p".into()),
            (Subcase::FixedPrime, Some(p)) => {
                if !is_prime(p) {
                    return bad(format!("p = {p} is not prime"));
                }
                let longest = self.levels.iter().map(|l| l.c.len()).max().unwrap_or(0);
                t_sequence(p, self.r, longest)?
            }
        };
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by_key(|&i| self.levels[i].alpha);
        if let Some(w) = order.windows(2).find(|w| self.levels[w[0]].alpha == self.levels[w[1]].alpha) {
            return bad(format!("level alpha = {} appears twice", self.levels[w[0]].alpha));
        }
        let mut relations = Vec::with_capacity(order.len());
        for &li in &order {
            let level = &self.levels[li];
            let a = level.alpha;
            let m = level.c.len();
            if level.ladder.len() != m {
                return bad(format!("level {a}: ladder has {} rungs for {m} colors", level.ladder.len()));
            }
            if level.ladder.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("level {a}: ladder is not strictly increasing"));
            }
            if level.ladder.last().is_some_and(|&top| top >= a) {
                return bad(format!("level {a}: ladder reaches {} >= alpha", level.ladder[m - 1]));
            }
            if level.c.iter().any(|&v| v > 1) {
                return bad(format!("level {a}: colors must be 0 or 1"));
            }
            let count = self.relation_count(level, &t);
            match self.subcase {
                Subcase::DistinctPrimes => {
                    if level.primes.len() != count {
                        return bad(format!("level {a}: {} primes for {count} relations", level.primes.len()));
                    }
                    if let Some(q) = level.primes.iter().find(|&&q| !is_prime(q)) {
                        return bad(format!("level {a}: {q} is not prime"));
                    }
                    if level.primes.iter().collect::<BTreeSet<_>>().len() != count {
                        return bad(format!("level {a}: primes are not distinct"));
                    }
                }
                Subcase::FixedPrime => {
                    if !level.primes.is_empty() {
                        return bad(format!("level {a}: per-relation primes given with a fixed prime"));
                    }
                }
            }
            if level.mu.len() != self.r || level.mu.iter().any(|m| m.len() != count) {
                return bad(format!("level {a}: need r = {} coefficient rows of length {count}", self.r));
            }
            if level.g.len() != count {
                return bad(format!("level {a}: {} elements g for {count} relations", level.g.len()));
            }
            for g in &level.g {
                if let Some(x) = g.keys().find(|x| !names.contains(*x)) {
                    return bad(format!("level {a}: {x:?} is neither a base generator nor from an earlier level"));
                }
            }
            names.extend((0..=count).map(|n| y_name(a, n)));
            names.extend((1..=self.r).map(|k| z_name(a, k)));
            relations.push(count);
        }
        Ok(Plan { order, t, relations })
    }
}
