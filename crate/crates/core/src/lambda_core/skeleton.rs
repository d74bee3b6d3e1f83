use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use super::atom::Atom;
use super::node::{is_prefix, node_key, parent, Node};
use super::LambdaError;

static EMPTY_CARRIER: BTreeSet<Atom> = BTreeSet::new();

/// The finite stand-in for stationarity of `E(η)` in a set of size `λ_η`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Largeness {
    #[default]
    #[serde(rename = "nonempty")]
    Nonempty,
    /// `2 |E(η)| >= level(η)`
    #[serde(rename = "half-level")]
    HalfLevel,
}

impl Largeness {
    pub fn name(self) -> &'static str {
        match self {
            Largeness::Nonempty => "nonempty",
            Largeness::HalfLevel => "half-level",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, LambdaError> {
        match name {
            "nonempty" => Ok(Largeness::Nonempty),
            "half-level" => Ok(Largeness::HalfLevel),
            other => Err(LambdaError::UnknownLargeness(other.to_string())),
        }
    }

    pub fn holds(self, level: u32, index_set: &BTreeSet<u32>) -> bool {
        match self {
            Largeness::Nonempty => !index_set.is_empty(),
            Largeness::HalfLevel => !index_set.is_empty() && 2 * index_set.len() as u64 >= u64::from(level),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemSkeleton {
    pub nodes: BTreeSet<Node>,
    pub level: BTreeMap<Node, u32>,
    pub index_sets: BTreeMap<Node, BTreeSet<u32>>,
    pub carriers: BTreeMap<Node, BTreeSet<Atom>>,
    pub largeness: Largeness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    MissingRoot,
    MissingParent,
    UnknownNode,
    MissingLevel,
    RootNotMaximal,
    LevelNotDecreasing,
    NoFinalReachable,
    FinalHasChildren,
    MissingIndexSet,
    EmptyIndexSet,
    ChildNotIndexed,
    IndexWithoutChild,
    NotLarge,
    RootCarrierNonempty,
    CarrierNotMonotone,
    NotFinal,
    WrongSliceCount,
    WrongSliceLength,
    NotInjective,
    NotBased,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::MissingRoot => "tree has no root",
            Clause::MissingParent => "parent node missing",
            Clause::UnknownNode => "map entry for a node outside the tree",
            Clause::MissingLevel => "level missing",
            Clause::RootNotMaximal => "root level must be maximal",
            Clause::LevelNotDecreasing => "level must strictly decrease",
            Clause::NoFinalReachable => "no final node reachable",
            Clause::FinalHasChildren => "final node has children",
            Clause::MissingIndexSet => "index set missing",
            Clause::EmptyIndexSet => "index set empty",
            Clause::ChildNotIndexed => "child index not in E",
            Clause::IndexWithoutChild => "index in E without child node",
            Clause::NotLarge => "index set not large",
            Clause::RootCarrierNonempty => "B(root) must be empty",
            Clause::CarrierNotMonotone => "carrier chain not monotone",
            Clause::NotFinal => "family indexed by a non-final node",
            Clause::WrongSliceCount => "wrong number of enumerations",
            Clause::WrongSliceLength => "enumeration length differs from truncation",
            Clause::NotInjective => "enumeration not injective",
            Clause::NotBased => "enumeration value outside B",
        })
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Violation", 4)?;
        st.serialize_field("clause", &self.clause)?;
        st.serialize_field("message", &self.clause.to_string())?;
        st.serialize_field("node", &node_key(&self.node))?;
        st.serialize_field("detail", &self.detail)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub node: Node,
    pub detail: String,
}

impl Violation {
    pub fn new(clause: Clause, node: &[u32], detail: impl Into<String>) -> Self {
        Violation { clause, node: node.to_vec(), detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub largeness: Largeness,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

impl SystemSkeleton {
    pub fn level_of(&self, node: &[u32]) -> Option<u32> {
        self.level.get(node).copied()
    }

    pub fn is_final(&self, node: &[u32]) -> bool {
        self.level_of(node) == Some(0)
    }

    /// Final nodes in lexicographic order.
    pub fn finals(&self) -> Vec<Node> {
        self.nodes.iter().filter(|n| self.is_final(n)).cloned().collect()
    }

    pub fn carrier(&self, node: &[u32]) -> &BTreeSet<Atom> {
        self.carriers.get(node).unwrap_or(&EMPTY_CARRIER)
    }

    /// `B̄_ζ`: the union of the carriers along the branch up to `ζ`.
    pub fn branch_carrier(&self, node: &[u32]) -> BTreeSet<Atom> {
        (0..=node.len()).flat_map(|m| self.carrier(&node[..m]).iter().cloned()).collect()
    }

    pub fn children(&self, node: &[u32]) -> BTreeSet<u32> {
        let mut start = node.to_vec();
        start.push(0);
        self.nodes
            .range(start..)
            .take_while(|n| is_prefix(node, n))
            .filter(|n| n.len() == node.len() + 1)
            .map(|n| n[node.len()])
            .collect()
    }

    fn child_map(&self) -> BTreeMap<Node, BTreeSet<u32>> {
        let mut map: BTreeMap<Node, BTreeSet<u32>> = BTreeMap::new();
        for n in &self.nodes {
            if let Some((last, rest)) = n.split_last() {
                map.entry(rest.to_vec()).or_default().insert(*last);
            }
        }
        map
    }

    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let root: Node = Vec::new();
        let children = self.child_map();
        let no_children = BTreeSet::new();

        if !self.nodes.contains(&root) {
            out.push(Violation::new(Clause::MissingRoot, &root, "the empty sequence is not a node"));
        }
        let keys = self.level.keys().chain(self.index_sets.keys()).chain(self.carriers.keys());
        let unknown: BTreeSet<&Node> = keys.filter(|k| !self.nodes.contains(*k)).collect();
        for k in unknown {
            out.push(Violation::new(Clause::UnknownNode, k, "level, E or B given for a node outside the tree"));
        }
        let root_level = self.level_of(&root);

        for node in &self.nodes {
            if let Some(p) = parent(node) {
                if !self.nodes.contains(p) {
                    out.push(Violation::new(Clause::MissingParent, node, format!("parent {:?} absent", node_key(p))));
                }
            }
            let Some(level) = self.level_of(node) else {
                out.push(Violation::new(Clause::MissingLevel, node, ""));
                continue;
            };
            if let Some(rl) = root_level {
                if level > rl {
                    out.push(Violation::new(
                        Clause::RootNotMaximal,
                        node,
                        format!("level {level} exceeds root level {rl}"),
                    ));
                }
            }
            if let Some(pl) = parent(node).and_then(|p| self.level_of(p)) {
                if level >= pl {
                    out.push(Violation::new(
                        Clause::LevelNotDecreasing,
                        node,
                        format!("level {level}, parent level {pl}"),
                    ));
                }
            }
            let kids = children.get(node).unwrap_or(&no_children);
            if level == 0 {
                if !kids.is_empty() {
                    out.push(Violation::new(Clause::FinalHasChildren, node, format!("{} children", kids.len())));
                }
                continue;
            }
            if kids.is_empty() {
                out.push(Violation::new(Clause::NoFinalReachable, node, format!("level {level} with no children")));
            }
            let Some(e) = self.index_sets.get(node) else {
                out.push(Violation::new(Clause::MissingIndexSet, node, ""));
                continue;
            };
            if e.is_empty() {
                out.push(Violation::new(Clause::EmptyIndexSet, node, ""));
            }
            for beta in kids.difference(e) {
                out.push(Violation::new(Clause::ChildNotIndexed, node, format!("child index {beta}")));
            }
            for beta in e.difference(kids) {
                out.push(Violation::new(Clause::IndexWithoutChild, node, format!("index {beta}")));
            }
            if !e.is_empty() && !self.largeness.holds(level, e) {
                out.push(Violation::new(
                    Clause::NotLarge,
                    node,
                    format!("|E| = {} at level {level} under {}", e.len(), self.largeness.name()),
                ));
            }
            let present: Vec<u32> = e.iter().copied().filter(|b| kids.contains(b)).collect();
            for pair in present.windows(2) {
                let mut lo = node.clone();
                lo.push(pair[0]);
                let mut hi = node.clone();
                hi.push(pair[1]);
                if let Some(x) = self.carrier(&lo).difference(self.carrier(&hi)).next() {
                    out.push(Violation::new(
                        Clause::CarrierNotMonotone,
                        &hi,
                        format!("{x} in B({}) but not in B({})", node_key(&lo), node_key(&hi)),
                    ));
                }
            }
        }
        if !self.carrier(&root).is_empty() {
            out.push(Violation::new(
                Clause::RootCarrierNonempty,
                &root,
                format!("{} atoms", self.carrier(&root).len()),
            ));
        }
        ValidationReport { largeness: self.largeness, violations: out }
    }

    /// `Some(n)` iff every final node has length `n`.
    pub fn height(&self) -> Option<usize> {
        let lengths: BTreeSet<usize> = self.finals().iter().map(Vec::len).collect();
        if lengths.len() == 1 {
            lengths.into_iter().next()
        } else {
            None
        }
    }

    /// `Sⁿ` without revalidation: nodes below some final node of length `n`.
    pub fn restrict_unchecked(&self, n: usize) -> SystemSkeleton {
        let keep: BTreeSet<Node> = self
            .finals()
            .into_iter()
            .filter(|f| f.len() == n)
            .flat_map(|f| (0..=f.len()).map(move |m| f[..m].to_vec()))
            .collect();
        let index_sets = self
            .index_sets
            .iter()
            .filter(|(k, _)| keep.contains(*k))
            .map(|(k, e)| {
                let kept: BTreeSet<u32> = e
                    .iter()
                    .copied()
                    .filter(|b| {
                        let mut c = k.clone();
                        c.push(*b);
                        keep.contains(&c)
                    })
                    .collect();
                (k.clone(), kept)
            })
            .collect();
        SystemSkeleton {
            level: self.level.iter().filter(|(k, _)| keep.contains(*k)).map(|(k, v)| (k.clone(), *v)).collect(),
            carriers: self
                .carriers
                .iter()
                .filter(|(k, _)| keep.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            index_sets,
            nodes: keep,
            largeness: self.largeness,
        }
    }

    /// `Sⁿ`, or `None` when it fails validation.
    pub fn restrict_to_height(&self, n: usize) -> Option<SystemSkeleton> {
        let s = self.restrict_unchecked(n);
        s.validate().is_valid().then_some(s)
    }

    /// Every `n` whose `Sⁿ` validates. May be empty.
    pub fn select_heights(&self) -> Vec<usize> {
        let lengths: BTreeSet<usize> = self.finals().iter().map(Vec::len).collect();
        lengths.into_iter().filter(|&n| self.restrict_to_height(n).is_some()).collect()
    }
}
