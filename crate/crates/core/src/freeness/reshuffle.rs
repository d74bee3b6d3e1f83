use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::lambda_core::{node_key, BasedFamily, Node};

/// An ordering `<_I` of finals in which each `s_ζ` keeps at least `fresh`
/// elements outside the union of its predecessors, and every `τ` with
/// `τ(0) <= alpha` precedes every `ζ` with `ζ(0) > alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReshufflingOrder {
    #[serde(with = "node_keys")]
    pub order: Vec<Node>,
    pub alpha: i64,
    pub fresh: usize,
}

mod node_keys {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::lambda_core::{node_key, parse_node_key, Node};

    pub fn serialize<S: Serializer>(v: &[Node], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| node_key(n)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Node>, D::Error> {
        let keys = Vec::<String>::deserialize(d)?;
        keys.iter().map(|k| parse_node_key(k).map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ReshuffleOutcome {
    Found {
        order: ReshufflingOrder,
    },
    /// No order exists; the search was exhaustive.
    None,
    /// The node budget ran out before the search finished.
    Unknown {
        explored: u64,
    },
}

fn first_coordinate(zeta: &[u32]) -> i64 {
    zeta.first().map(|&x| i64::from(x)).unwrap_or(-1)
}

fn is_low(zeta: &[u32], alpha: i64) -> bool {
    first_coordinate(zeta) <= alpha
}

impl ReshufflingOrder {
    /// Checks the order against the family on the index set `index`.
    pub fn verify(&self, fam: &BasedFamily, index: &[Node]) -> Result<(), String> {
        let given: BTreeSet<&Node> = self.order.iter().collect();
        let wanted: BTreeSet<&Node> = index.iter().collect();
        if given != wanted || given.len() != self.order.len() {
            return Err("order is not a permutation of the index set".into());
        }
        let mut seen_high = false;
        let mut before: BTreeSet<_> = BTreeSet::new();
        for zeta in &self.order {
            if is_low(zeta, self.alpha) {
                if seen_high {
                    return Err(format!("{} has first coordinate <= alpha but follows a later one", node_key(zeta)));
                }
            } else {
                seen_high = true;
            }
            let s = fam.set(zeta);
            let fresh = s.difference(&before).count();
            if fresh < self.fresh {
                return Err(format!("{} keeps {fresh} fresh elements, {} required", node_key(zeta), self.fresh));
            }
            before.extend(s);
        }
        Ok(())
    }
}

/// Exact search by peeling from the back.
///
/// If `x` may come last among the remaining finals (fresh against all the
/// others and on the correct side of the split), then any valid order of the
/// remaining set restricts to a valid order without `x`, since removing
/// predecessors only adds fresh elements. So taking any such `x` loses
/// nothing, and a dead end means no order exists. Among candidates the
/// lexicographically largest is taken last.
pub fn find_reshuffling(fam: &BasedFamily, index: &[Node], alpha: i64, fresh: usize) -> ReshuffleOutcome {
    let mut remaining: Vec<Node> = index.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let sets: Vec<BTreeSet<_>> = remaining.iter().map(|z| fam.set(z)).collect();
    let mut alive: Vec<usize> = (0..remaining.len()).collect();
    let mut reversed = Vec::with_capacity(remaining.len());
    while !alive.is_empty() {
        let any_high = alive.iter().any(|&i| !is_low(&remaining[i], alpha));
        let pick = alive.iter().rev().copied().find(|&i| {
            if any_high && is_low(&remaining[i], alpha) {
                return false;
            }
            let others: BTreeSet<_> = alive.iter().filter(|&&j| j != i).flat_map(|&j| sets[j].iter()).collect();
            sets[i].iter().filter(|x| !others.contains(x)).count() >= fresh
        });
        let Some(i) = pick else { return ReshuffleOutcome::None };
        alive.retain(|&j| j != i);
        reversed.push(i);
    }
    let order = reversed.into_iter().rev().map(|i| std::mem::take(&mut remaining[i])).collect();
    ReshuffleOutcome::Found { order: ReshufflingOrder { order, alpha, fresh } }
}

/// Forward depth-first search, lexicographic candidate order, at most
/// `budget` search nodes.
pub fn find_reshuffling_backtracking(
    fam: &BasedFamily,
    index: &[Node],
    alpha: i64,
    fresh: usize,
    budget: u64,
) -> ReshuffleOutcome {
    let nodes: Vec<Node> = index.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let sets: Vec<BTreeSet<_>> = nodes.iter().map(|z| fam.set(z)).collect();
    let mut dfs = Forward {
        nodes: &nodes,
        sets: &sets,
        alpha,
        fresh,
        budget,
        explored: 0,
        used: vec![false; nodes.len()],
        order: Vec::new(),
    };
    match dfs.run(&BTreeSet::new()) {
        Some(true) => {
            let order = dfs.order.iter().map(|&i| nodes[i].clone()).collect();
            ReshuffleOutcome::Found { order: ReshufflingOrder { order, alpha, fresh } }
        }
        Some(false) => ReshuffleOutcome::None,
        None => ReshuffleOutcome::Unknown { explored: dfs.explored },
    }
}

struct Forward<'a, T> {
    nodes: &'a [Node],
    sets: &'a [BTreeSet<T>],
    alpha: i64,
    fresh: usize,
    budget: u64,
    explored: u64,
    used: Vec<bool>,
    order: Vec<usize>,
}

impl<T: Ord + Clone> Forward<'_, T> {
    /// `Some(found)`, or `None` when the budget is exhausted.
    fn run(&mut self, covered: &BTreeSet<T>) -> Option<bool> {
        if self.order.len() == self.nodes.len() {
            return Some(true);
        }
        let lows_left = (0..self.nodes.len()).any(|i| !self.used[i] && is_low(&self.nodes[i], self.alpha));
        for i in 0..self.nodes.len() {
            if self.used[i] || (lows_left && !is_low(&self.nodes[i], self.alpha)) {
                continue;
            }
            if self.sets[i].iter().filter(|x| !covered.contains(*x)).count() < self.fresh {
                continue;
            }
            self.explored += 1;
            if self.explored > self.budget {
                return None;
            }
            self.used[i] = true;
            self.order.push(i);
            let mut next = covered.clone();
            next.extend(self.sets[i].iter().cloned());
            if self.run(&next)? {
                return Some(true);
            }
            self.order.pop();
            self.used[i] = false;
        }
        Some(false)
    }
}
