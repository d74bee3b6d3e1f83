use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::atom::Atom;
use super::family::BasedFamily;
use super::node::{node_key, parse_node_key, Node};
use super::skeleton::{Largeness, SystemSkeleton};
use super::LambdaError;

pub const SCHEMA: &str = "lambda-systems/lambda/1";

/// JSON form of a skeleton with its family.
///
/// ```json
/// {"nodes": ["", "0"], "level": {"": 1, "0": 0}, "E": {"": [0]},
///  "B": {"0": ["a", "b"]}, "phi": {"0": [["a", "b"]]}, "truncation": 2,
///  "largeness": "nonempty"}
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub nodes: Vec<String>,
    pub level: BTreeMap<String, u32>,
    #[serde(rename = "E", default)]
    pub e: BTreeMap<String, Vec<u32>>,
    #[serde(rename = "B", default)]
    pub b: BTreeMap<String, Vec<Atom>>,
    #[serde(default)]
    pub phi: BTreeMap<String, Vec<Vec<Atom>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub largeness: Largeness,
}

fn keyed<V, W>(
    map: BTreeMap<String, V>,
    mut f: impl FnMut(&str, V) -> Result<W, LambdaError>,
) -> Result<BTreeMap<Node, W>, LambdaError> {
    map.into_iter().map(|(k, v)| Ok((parse_node_key(&k)?, f(&k, v)?))).collect()
}

fn distinct<T: Ord>(key: &str, what: &str, items: Vec<T>) -> Result<BTreeSet<T>, LambdaError> {
    let n = items.len();
    let set: BTreeSet<T> = items.into_iter().collect();
    if set.len() != n {
        return Err(LambdaError::Doc(format!("{what} for node {key:?} lists an element twice")));
    }
    Ok(set)
}

impl LambdaDoc {
    pub fn from_json(json: &str) -> Result<(SystemSkeleton, BasedFamily), LambdaError> {
        let doc: LambdaDoc = serde_json::from_str(json).map_err(|e| LambdaError::Doc(e.to_string()))?;
        doc.into_parts()
    }

    pub fn into_parts(self) -> Result<(SystemSkeleton, BasedFamily), LambdaError> {
        if let Some(schema) = &self.schema {
            if schema != SCHEMA {
                return Err(LambdaError::Doc(format!("unsupported schema {schema:?}")));
            }
        }
        let node_list = self.nodes.iter().map(|k| parse_node_key(k)).collect::<Result<Vec<_>, _>>()?;
        let nodes: BTreeSet<Node> = node_list.iter().cloned().collect();
        if nodes.len() != node_list.len() {
            return Err(LambdaError::Doc("a node is listed twice".into()));
        }
        let level = keyed(self.level, |_, v| Ok(v))?;
        let index_sets = keyed(self.e, |k, v| distinct(k, "E", v))?;
        let carriers = keyed(self.b, |k, v| distinct(k, "B", v))?;
        let phi = keyed(self.phi, |_, v| Ok(v))?;
        let truncation = match self.truncation {
            Some(m) => m,
            None => {
                let lengths: BTreeSet<usize> = phi.values().flatten().map(Vec::len).collect();
                match lengths.len() {
                    0 => 0,
                    1 => lengths.into_iter().next().unwrap_or(0),
                    _ => {
                        return Err(LambdaError::Doc("enumerations differ in length and no truncation is given".into()))
                    }
                }
            }
        };
        let sys = SystemSkeleton { nodes, level, index_sets, carriers, largeness: self.largeness };
        Ok((sys, BasedFamily { phi, truncation }))
    }

    pub fn from_parts(sys: &SystemSkeleton, fam: &BasedFamily) -> LambdaDoc {
        let key_map = |m: &BTreeMap<Node, BTreeSet<Atom>>| {
            m.iter().map(|(k, v)| (node_key(k), v.iter().cloned().collect())).collect()
        };
        LambdaDoc {
            schema: Some(SCHEMA.to_string()),
            nodes: sys.nodes.iter().map(|n| node_key(n)).collect(),
            level: sys.level.iter().map(|(k, v)| (node_key(k), *v)).collect(),
            e: sys.index_sets.iter().map(|(k, v)| (node_key(k), v.iter().copied().collect())).collect(),
            b: key_map(&sys.carriers),
            phi: fam.phi.iter().map(|(k, v)| (node_key(k), v.clone())).collect(),
            truncation: Some(fam.truncation),
            largeness: sys.largeness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"nodes": ["", "0"], "level": {"": 1, "0": 0}, "E": {"": [0]},
        "B": {"0": ["a", "b"]}, "phi": {"0": [["a", "b"]]}}"#;

    #[test]
    fn parse_and_round_trip() {
        let (sys, fam) = LambdaDoc::from_json(MINIMAL).unwrap();
        assert!(sys.validate().is_valid());
        assert!(fam.validate(&sys).is_empty());
        assert_eq!(fam.truncation, 2);
        let json = serde_json::to_string(&LambdaDoc::from_parts(&sys, &fam)).unwrap();
        let (sys2, fam2) = LambdaDoc::from_json(&json).unwrap();
        assert_eq!((sys, fam), (sys2, fam2));
    }

    #[test]
    fn strict_parsing() {
        assert!(LambdaDoc::from_json(r#"{"nodes": [], "level": {}, "extra": 1}"#).is_err());
        assert!(LambdaDoc::from_json(r#"{"nodes": ["", ""], "level": {}}"#).is_err());
        assert!(LambdaDoc::from_json(r#"{"nodes": ["01"], "level": {}}"#).is_err());
        assert!(LambdaDoc::from_json(r#"{"nodes": [""], "level": {}, "largeness": "huge"}"#).is_err());
        assert!(LambdaDoc::from_json(r#"{"nodes": [""], "level": {}, "schema": "v0"}"#).is_err());
        assert!(LambdaDoc::from_json(r#"{"nodes": [""], "level": {}, "B": {"": ["a", "a"]}}"#).is_err());
    }
}
