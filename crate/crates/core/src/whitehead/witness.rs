use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::system::{build_g, WhiteheadSystem};
use super::WhiteheadError;
use crate::abelian::{dot, InfeasibilityCertificate, IntMatrix, LinearSystem, Solution};
use crate::lambda_core::{node_key, Atom, Node};

/// Right-hand sides `c_ζ(m)`.
pub type Coloring = BTreeMap<Node, Vec<BigInt>>;

/// `f` on `⋃ S` and `a_{ζ,j}` for `j < J`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub f: BTreeMap<Atom, BigInt>,
    pub a: BTreeMap<Node, Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationFailure {
    #[serde(serialize_with = "crate::whitehead::ser_node")]
    pub zeta: Node,
    pub m: usize,
    /// `q a_{m+r+1} - a_{m+r} - Σ d a_ℓ - Σ f(φ^k(m))`
    pub value: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub holds: bool,
    pub first_failure: Option<EquationFailure>,
    /// A pinned `a_{ζ,j}` the witness does not respect.
    pub pin_failure: Option<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Feasible(Witness),
    /// `y` is indexed by [`WhiteheadSystem::equations`].
    Infeasible(InfeasibilityCertificate),
}

fn check_coloring(ws: &WhiteheadSystem, c: &Coloring) -> Result<(), WhiteheadError> {
    let count = ws.relation_count();
    for zeta in ws.family.phi.keys() {
        match c.get(zeta) {
            Some(v) if v.len() >= count => {}
            Some(v) => {
                return Err(WhiteheadError::MissingData(format!(
                    "c for {:?} has {} values, needs {count}",
                    node_key(zeta),
                    v.len()
                )))
            }
            None => return Err(WhiteheadError::MissingData(format!("no c values for {:?}", node_key(zeta)))),
        }
    }
    if let Some(zeta) = c.keys().find(|z| !ws.family.phi.contains_key(*z)) {
        return Err(WhiteheadError::MissingData(format!("c given for {:?}, which indexes no set", node_key(zeta))));
    }
    Ok(())
}

pub fn verify_witness(ws: &WhiteheadSystem, c: &Coloring, w: &Witness) -> Result<WitnessCheck, WhiteheadError> {
    ws.validate()?;
    check_coloring(ws, c)?;
    let r = ws.r;
    let mut first_failure = None;
    for (zeta, m) in ws.equations() {
        let key = node_key(&zeta);
        let a = w.a.get(&zeta).ok_or_else(|| WhiteheadError::MissingData(format!("no a values for {key:?}")))?;
        if a.len() < ws.j {
            return Err(WhiteheadError::MissingData(format!(
                "a for {key:?} has {} values, needs J = {}",
                a.len(),
                ws.j
            )));
        }
        let mut value = BigInt::from(ws.q[&zeta][m]) * &a[m + r + 1] - &a[m + r];
        for (l, a_l) in a.iter().enumerate().take(r) {
            value -= &ws.d[&zeta][m][l] * a_l;
        }
        for k in 1..=zeta.len() {
            let x = &ws.family.enumeration(&zeta, k)[m];
            let fx = w.f.get(x).ok_or_else(|| WhiteheadError::MissingData(format!("no f value for atom {x}")))?;
            value -= fx;
        }
        if first_failure.is_none() && value != c[&zeta][m] {
            let expected = c[&zeta][m].to_string();
            first_failure = Some(EquationFailure { zeta, m, value: value.to_string(), expected });
        }
    }
    let pin_failure = ws.pins.iter().find_map(|(zeta, pins)| {
        pins.iter().find(|(&j, v)| w.a.get(zeta).and_then(|a| a.get(j)) != Some(*v)).map(|(&j, _)| (node_key(zeta), j))
    });
    Ok(WitnessCheck { holds: first_failure.is_none() && pin_failure.is_none(), first_failure, pin_failure })
}

struct Reduced {
    layout: super::system::Layout,
    pinned: Vec<Option<BigInt>>,
    free: Vec<usize>,
    a: IntMatrix,
    b: Vec<BigInt>,
}

/// The affine system over `f(x)` and the unpinned `a_{ζ,j}`: one row per
/// `(ζ, m)`, shared atoms sharing a column, pinned values moved to the right.
fn reduced(ws: &WhiteheadSystem, c: &Coloring) -> Result<Reduced, WhiteheadError> {
    let g = build_g(ws)?;
    check_coloring(ws, c)?;
    let layout = ws.layout();
    let mut pinned = vec![None; layout.width()];
    for (p, zeta) in layout.finals.iter().enumerate() {
        for (&j, v) in ws.pins.get(zeta).into_iter().flatten() {
            pinned[layout.z(p, j)] = Some(v.clone());
        }
    }
    let free: Vec<usize> = (0..layout.width()).filter(|&i| pinned[i].is_none()).collect();
    let rel = g.relations();
    let mut b = Vec::new();
    for (row, (zeta, m)) in ws.equations().iter().enumerate() {
        let mut rhs = c[zeta][*m].clone();
        for (col, pin) in pinned.iter().enumerate() {
            if let Some(v) = pin {
                rhs -= &rel[(row, col)] * v;
            }
        }
        b.push(rhs);
    }
    let a = rel.select_columns(&free);
    Ok(Reduced { layout, pinned, free, a, b })
}

/// Solves the witness system over `Z`. The answer is the canonical solution
/// of its coset modulo the kernel.
pub fn solve_witness(ws: &WhiteheadSystem, c: &Coloring) -> Result<WitnessOutcome, WhiteheadError> {
    let Reduced { layout, pinned, free, a, b } = reduced(ws, c)?;
    let solution = LinearSystem::new(&a).solve_canonical(&b)?;
    let x = match solution {
        Solution::Infeasible(cert) => return Ok(WitnessOutcome::Infeasible(cert)),
        Solution::Integral(x) => x,
    };
    let mut full: Vec<BigInt> = pinned.into_iter().map(Option::unwrap_or_default).collect();
    for (value, &col) in x.into_iter().zip(&free) {
        full[col] = value;
    }
    let f = layout.atoms.iter().cloned().zip(full.iter().cloned()).collect();
    let a = layout
        .finals
        .iter()
        .enumerate()
        .map(|(p, zeta)| (zeta.clone(), (0..ws.j).map(|j| full[layout.z(p, j)].clone()).collect()))
        .collect();
    Ok(WitnessOutcome::Feasible(Witness { f, a }))
}

/// Checks a certificate returned by [`solve_witness`] against the system.
pub fn verify_infeasibility(
    ws: &WhiteheadSystem,
    c: &Coloring,
    cert: &InfeasibilityCertificate,
) -> Result<bool, WhiteheadError> {
    let red = reduced(ws, c)?;
    Ok(cert.verify(&red.a, &red.b))
}

/// Evaluates `θ` (`θ = f` on `⋃ S`, `θ(z_{ζ,j}) = a_{ζ,j}`) on every relation
/// row of `G` and compares with `c`.
pub fn theta_extends(ws: &WhiteheadSystem, c: &Coloring, w: &Witness) -> Result<bool, WhiteheadError> {
    let g = build_g(ws)?;
    check_coloring(ws, c)?;
    let layout = ws.layout();
    let mut theta = Vec::with_capacity(layout.width());
    for x in &layout.atoms {
        theta.push(w.f.get(x).cloned().ok_or_else(|| WhiteheadError::MissingData(format!("no f value for atom {x}")))?);
    }
    for zeta in &layout.finals {
        let a =
            w.a.get(zeta)
                .ok_or_else(|| WhiteheadError::MissingData(format!("no a values for {:?}", node_key(zeta))))?;
        for j in 0..ws.j {
            theta.push(a.get(j).cloned().unwrap_or_else(BigInt::zero));
        }
    }
    let rel: &IntMatrix = g.relations();
    Ok(ws.equations().iter().enumerate().all(|(i, (zeta, m))| dot(rel.row(i), &theta) == c[zeta][*m]))
}

/// Carries a witness for a transformed system back from the original one:
/// `f(new) = f'(renaming[new])`, `a` unchanged.
pub fn transport_witness(w: &Witness, renaming: &BTreeMap<Atom, Atom>) -> Witness {
    let f = renaming.iter().filter_map(|(new, old)| w.f.get(old).map(|v| (new.clone(), v.clone()))).collect();
    Witness { f, a: w.a.clone() }
}
