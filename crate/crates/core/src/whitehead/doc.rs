use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::system::WhiteheadSystem;
use super::witness::{Coloring, Witness};
use super::WhiteheadError;
use crate::freeness::ReshufflingOrder;
use crate::int::Int;
use crate::lambda_core::{node_key, parse_node_key, Atom, LambdaDoc, Node};

pub const SCHEMA: &str = "lambda-systems/whitehead/1";

/// Primes for one final: a constant or one per relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Primes {
    Constant(u64),
    List(Vec<u64>),
}

/// JSON form of a [`WhiteheadSystem`], optionally with an order for
/// basis enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhiteheadDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub lambda: LambdaDoc,
    #[serde(default)]
    pub r: usize,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub q: BTreeMap<String, Primes>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub d: BTreeMap<String, Vec<Vec<Int>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pin: BTreeMap<String, BTreeMap<usize, Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ReshufflingOrder>,
}

fn keyed<V, W>(map: BTreeMap<String, V>, mut f: impl FnMut(V) -> W) -> Result<BTreeMap<Node, W>, WhiteheadError> {
    map.into_iter()
        .map(|(k, v)| {
            let node = parse_node_key(&k).map_err(|e| WhiteheadError::MissingData(e.to_string()))?;
            Ok((node, f(v)))
        })
        .collect()
}

impl WhiteheadDoc {
    pub fn from_json(json: &str) -> Result<(WhiteheadSystem, Option<ReshufflingOrder>), WhiteheadError> {
        let doc: WhiteheadDoc = serde_json::from_str(json).map_err(|e| WhiteheadError::Doc(e.to_string()))?;
        doc.into_parts()
    }

    pub fn into_parts(self) -> Result<(WhiteheadSystem, Option<ReshufflingOrder>), WhiteheadError> {
        if let Some(schema) = &self.schema {
            if schema != SCHEMA {
                return Err(WhiteheadError::Doc(format!("unsupported schema {schema:?}")));
            }
        }
        let (skeleton, family) = self.lambda.into_parts().map_err(|e| WhiteheadError::Doc(e.to_string()))?;
        let j = self.j.unwrap_or_else(|| WhiteheadSystem::default_j(family.truncation, self.r));
        let relations = family.truncation.min(j.saturating_sub(self.r + 1));
        let q = keyed(self.q, |p| match p {
            Primes::Constant(p) => vec![p; relations],
            Primes::List(v) => v,
        })?;
        let d = keyed(self.d, |rows| rows.into_iter().map(|row| row.into_iter().map(|v| v.0).collect()).collect())?;
        let pins = keyed(self.pin, |p| p.into_iter().map(|(j, v)| (j, v.0)).collect())?;
        let ws = WhiteheadSystem { skeleton, family, r: self.r, j, q, d, pins };
        Ok((ws, self.order))
    }

    pub fn from_parts(ws: &WhiteheadSystem, order: Option<&ReshufflingOrder>) -> WhiteheadDoc {
        WhiteheadDoc {
            schema: Some(SCHEMA.to_string()),
            lambda: LambdaDoc::from_parts(&ws.skeleton, &ws.family),
            r: ws.r,
            j: Some(ws.j),
            q: ws.q.iter().map(|(k, v)| (node_key(k), Primes::List(v.clone()))).collect(),
            d: ws
                .d
                .iter()
                .map(|(k, rows)| (node_key(k), rows.iter().map(|r| r.iter().cloned().map(Int).collect()).collect()))
                .collect(),
            pin: ws
                .pins
                .iter()
                .map(|(k, p)| (node_key(k), p.iter().map(|(j, v)| (*j, Int(v.clone()))).collect()))
                .collect(),
            order: order.cloned(),
        }
    }
}

/// `{"<node key>": [c(0), c(1), ...]}`
pub fn coloring_from_json(json: &str) -> Result<Coloring, WhiteheadError> {
    let raw: BTreeMap<String, Vec<Int>> = serde_json::from_str(json).map_err(|e| WhiteheadError::Doc(e.to_string()))?;
    keyed(raw, |v| v.into_iter().map(|x| x.0).collect())
}

pub fn coloring_to_json(c: &Coloring) -> serde_json::Value {
    let raw: BTreeMap<String, Vec<Int>> =
        c.iter().map(|(k, v)| (node_key(k), v.iter().cloned().map(Int).collect())).collect();
    serde_json::to_value(raw).expect("maps of integers serialize")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub f: BTreeMap<Atom, Int>,
    pub a: BTreeMap<String, Vec<Int>>,
}

impl WitnessDoc {
    pub fn from_witness(w: &Witness) -> WitnessDoc {
        WitnessDoc {
            f: w.f.iter().map(|(x, v)| (x.clone(), Int(v.clone()))).collect(),
            a: w.a.iter().map(|(k, v)| (node_key(k), v.iter().cloned().map(Int).collect())).collect(),
        }
    }

    pub fn into_witness(self) -> Result<Witness, WhiteheadError> {
        Ok(Witness {
            f: self.f.into_iter().map(|(x, v)| (x, v.0)).collect(),
            a: keyed(self.a, |v| v.into_iter().map(|x| x.0).collect())?,
        })
    }
}
