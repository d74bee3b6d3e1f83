use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::residue::{IntervalSet, ResidueTable};
use super::UnifError;
use crate::int::{is_prime, modulo, pow};

/// Largest interval family [`lemma3_table`] will build.
pub const MAX_TABLE_INTERVALS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub b: BigInt,
    /// Whether `|Y|^2 < |Y'|`. A valid `b` may exist without it.
    pub hypothesis_holds: bool,
}

/// Least `b` of `Y'` (taken in the given order) with `Y ∩ (b + Y) = ∅` in
/// `Z/nZ`, found as an element of `Y'` outside `Y - Y`.
pub fn shift_disjoint_in(
    y: &BTreeSet<BigInt>,
    y_prime: impl IntoIterator<Item = BigInt>,
    y_prime_len: &BigInt,
    modulus: &BigInt,
) -> Result<Shift, UnifError> {
    let y: BTreeSet<BigInt> = y.iter().map(|v| modulo(v, modulus)).collect();
    let diffs: BTreeSet<BigInt> = y.iter().flat_map(|a| y.iter().map(move |c| modulo(&(a - c), modulus))).collect();
    let hypothesis_holds = BigInt::from(y.len()).pow(2) < *y_prime_len;
    let b = y_prime.into_iter().map(|v| modulo(&v, modulus)).find(|v| !diffs.contains(v));
    match b {
        Some(b) => {
            debug_assert!(y.iter().all(|v| !y.contains(&modulo(&(v + &b), modulus))));
            Ok(Shift { b, hypothesis_holds })
        }
        None => Err(UnifError::NoShift { y: y.len(), y_prime: y_prime_len.to_string() }),
    }
}

pub fn shift_disjoint(y: &BTreeSet<BigInt>, y_prime: &BTreeSet<BigInt>, modulus: &BigInt) -> Result<Shift, UnifError> {
    let residues: BTreeSet<BigInt> = y_prime.iter().map(|v| modulo(v, modulus)).collect();
    let len = BigInt::from(residues.len());
    shift_disjoint_in(y, residues, &len, modulus)
}

/// `F_p`, `a_0 = 0` and `a_1`: `F_p(m + a_ℓ) = ℓ` whenever `(2|m|+1)^2 < p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Table {
    pub p: u64,
    #[serde(with = "pair")]
    pub a: [BigInt; 2],
    pub f: ResidueTable,
}

mod pair {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::int::parse_decimal;

    pub fn serialize<S: Serializer>(v: &[BigInt; 2], s: S) -> Result<S::Ok, S::Error> {
        [v[0].to_string(), v[1].to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[BigInt; 2], D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let parse =
            |v: &str| parse_decimal(v).ok_or_else(|| serde::de::Error::custom(format!("invalid integer {v:?}")));
        Ok([parse(&a)?, parse(&b)?])
    }
}

fn check_p(p: u64) -> Result<(), UnifError> {
    if !is_prime(p) {
        return Err(UnifError::Parameter(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Residues `0, 1, ..., n-1`, lazily.
fn residues(n: u64) -> impl Iterator<Item = BigInt> {
    (0..n).map(BigInt::from)
}

pub fn lemma2_table(p: u64) -> Result<Lemma2Table, UnifError> {
    check_p(p)?;
    let pb = BigInt::from(p);
    let mut y = BTreeSet::new();
    let mut m: u64 = 0;
    while (2 * m + 1).checked_pow(2).is_some_and(|v| v < p) {
        y.insert(modulo(&BigInt::from(m), &pb));
        y.insert(modulo(&-BigInt::from(m), &pb));
        m += 1;
    }
    let shift = shift_disjoint_in(&y, residues(p), &pb, &pb)?;
    let ones = IntervalSet::from_points(pb.clone(), y.iter().map(|v| v + &shift.b));
    Ok(Lemma2Table { p, a: [BigInt::zero(), shift.b], f: ResidueTable { ones } })
}

/// `t_0 = 0`, `t_i = t_{i-1} + d_i` with `d_i` least such that
/// `(2 p^{t_{i-1}} + 1)^{2r+2} p^{2 t_{i-1}} < p^{d_i}`.
pub fn t_sequence(p: u64, r: usize, i_max: usize) -> Result<Vec<usize>, UnifError> {
    check_p(p)?;
    let mut t = vec![0usize];
    for _ in 0..i_max {
        let prev = *t.last().expect("t_0 present");
        let big_p = pow(p, prev);
        let bound = num_traits::pow(BigInt::from(2) * &big_p + 1u32, 2 * r + 2) * &big_p * &big_p;
        let mut d = 1;
        let mut power = BigInt::from(p);
        while power <= bound {
            power *= p;
            d += 1;
        }
        t.push(prev + d);
    }
    Ok(t)
}

/// `F_{i,μ}` and the digits `a^ℓ_{n,μ}`, `t_{i-1} <= n < t_i`, keyed by
/// `(p, r, i, μ↾t_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTable {
    pub p: u64,
    pub r: usize,
    pub i: usize,
    pub t_prev: usize,
    pub t: usize,
    /// `μ_k↾t_i` for `k = 1..r`.
    #[serde(with = "nested_decimal")]
    pub mu: Vec<Vec<BigInt>>,
    #[serde(with = "crate::int::decimal")]
    pub b: BigInt,
    /// `digits[ℓ][n - t_{i-1}] = a^ℓ_n`.
    pub digits: [Vec<u64>; 2],
    pub f: ResidueTable,
}

mod nested_decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::int::parse_decimal;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.iter()
                    .map(|v| parse_decimal(v).ok_or_else(|| serde::de::Error::custom(format!("invalid integer {v:?}"))))
                    .collect()
            })
            .collect()
    }
}

impl BlockTable {
    pub fn modulus(&self) -> BigInt {
        pow(self.p, self.t)
    }

    /// `Σ_{n = t_{i-1}}^{t_i - 1} p^n a^ℓ_n`.
    pub fn block_value(&self, l: usize) -> BigInt {
        self.digits[l].iter().enumerate().map(|(n, &a)| pow(self.p, self.t_prev + n) * a).sum()
    }

    /// `a^ℓ_n` for `n` inside the block.
    pub fn digit(&self, l: usize, n: usize) -> u64 {
        self.digits[l][n - self.t_prev]
    }
}

fn digits_of(b: &BigInt, p: u64, from: usize, to: usize) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v = b / pow(p, from);
    (from..to)
        .map(|_| {
            let d = modulo(&v, &pb).to_u64().expect("digit below p");
            v /= &pb;
            d
        })
        .collect()
}

fn check_block(p: u64, i: usize, t: &[usize]) -> Result<(), UnifError> {
    check_p(p)?;
    if i == 0 || i >= t.len() {
        return Err(UnifError::Parameter(format!("block index i = {i} needs 1 <= i <= {}", t.len().saturating_sub(1))));
    }
    Ok(())
}

/// The `r = 0` table, built by enumerating
/// `Y = {m_0 + Σ_{j<t_{i-1}} p^j a_j : |m_0| <= p^{t_{i-1}}}` and taking the
/// least `b` among the multiples of `p^{t_{i-1}}` modulo `p^{t_i}`.
pub fn lemma_sub2_table(p: u64, i: usize, t: &[usize]) -> Result<BlockTable, UnifError> {
    check_block(p, i, t)?;
    let (t_prev, t_i) = (t[i - 1], t[i]);
    let big_p = pow(p, t_prev);
    let n = pow(p, t_i);
    let width = big_p.to_u64().ok_or_else(|| UnifError::Parameter("p^t_{i-1} too large to enumerate".into()))?;
    let mut y = BTreeSet::new();
    let mut m0 = -big_p.clone();
    while m0 <= big_p {
        for low in 0..width {
            // low runs over Σ_{j<t_{i-1}} p^j a_j, a_j in 0..p
            y.insert(modulo(&(&m0 + low), &n));
        }
        m0 += 1;
    }
    let count = pow(p, t_i - t_prev);
    let steps = count.to_u64().ok_or_else(|| UnifError::Parameter("p^{d_i} too large to enumerate".into()))?;
    let shift = shift_disjoint_in(&y, (0..steps).map(|x| &big_p * x), &count, &n)?;
    let ones = IntervalSet::from_points(n, y.iter().map(|v| v + &shift.b));
    Ok(BlockTable {
        p,
        r: 0,
        i,
        t_prev,
        t: t_i,
        mu: Vec::new(),
        digits: [vec![0; t_i - t_prev], digits_of(&shift.b, p, t_prev, t_i)],
        b: shift.b,
        f: ResidueTable { ones },
    })
}

/// `M_k = Σ_{j<t_i} p^j μ_k(j)`.
pub fn mu_weights(p: u64, mu: &[Vec<BigInt>], t_i: usize) -> Vec<BigInt> {
    mu.iter().map(|m| m.iter().take(t_i).enumerate().map(|(j, v)| pow(p, j) * v).sum()).collect()
}

/// Every point `Σ_k w_k m_k` with `|m_k| <= bound`.
fn lattice_points(weights: &[BigInt], bound: &BigInt) -> Result<Vec<BigInt>, UnifError> {
    let side = (bound * 2u32 + 1u32).to_usize().unwrap_or(usize::MAX);
    let total = side.checked_pow(weights.len() as u32).unwrap_or(usize::MAX);
    if total > MAX_TABLE_INTERVALS {
        return Err(UnifError::Parameter(format!("table would need {side}^{} intervals", weights.len())));
    }
    let mut points = vec![BigInt::zero()];
    for w in weights {
        let mut next = Vec::with_capacity(points.len() * side);
        for base in &points {
            let mut m = -bound.clone();
            while &m <= bound {
                next.push(base + w * &m);
                m += 1;
            }
        }
        points = next;
    }
    Ok(points)
}

/// The general table, built from interval arithmetic modulo `p^{t_i}`.
///
/// With `P = p^{t_{i-1}}`, the values `m_0 + Σ_{j<t_{i-1}} p^j a_j` are
/// exactly the integers in `[-P, 2P - 1]`, so
/// `Y = ⋃ [c - P, c + 2P - 1]` and `Y - Y = ⋃ [c - 3P + 1, c + 3P - 1]`
/// over `c = Σ M_k m_k` with `|m_k| <= P`, respectively `<= 2P`.
pub fn lemma3_table(p: u64, r: usize, mu: &[Vec<BigInt>], i: usize, t: &[usize]) -> Result<BlockTable, UnifError> {
    check_block(p, i, t)?;
    if mu.len() != r {
        return Err(UnifError::Parameter(format!("expected r = {r} coefficient sequences, got {}", mu.len())));
    }
    let (t_prev, t_i) = (t[i - 1], t[i]);
    if let Some(k) = mu.iter().position(|m| m.len() < t_i) {
        return Err(UnifError::Parameter(format!("μ_{} has fewer than t_i = {t_i} values", k + 1)));
    }
    let mu: Vec<Vec<BigInt>> = mu.iter().map(|m| m[..t_i].to_vec()).collect();
    let big_p = pow(p, t_prev);
    let n = pow(p, t_i);
    let weights = mu_weights(p, &mu, t_i);

    let diff_centers = lattice_points(&weights, &(&big_p * 2u32))?;
    let reach = &big_p * 3u32 - 1u32;
    let diffs = IntervalSet::from_ranges(n.clone(), diff_centers.iter().map(|c| (c - &reach, c + &reach)));
    let b = diffs
        .least_uncovered_multiple(&big_p)
        .ok_or_else(|| UnifError::NoShift { y: 0, y_prime: pow(p, t_i - t_prev).to_string() })?;

    let centers = lattice_points(&weights, &big_p)?;
    let y = IntervalSet::from_ranges(n, centers.iter().map(|c| (c - &big_p, c + &big_p * 2u32 - 1u32)));
    let ones = y.shifted(&b);
    debug_assert!(y.is_disjoint(&ones));
    Ok(BlockTable {
        p,
        r,
        i,
        t_prev,
        t: t_i,
        mu,
        digits: [vec![0; t_i - t_prev], digits_of(&b, p, t_prev, t_i)],
        b,
        f: ResidueTable { ones },
    })
}

/// `F_{p,μ}`, `a^ℓ_{p,μ}` and `t_p`, the largest `t` with
/// `(2t + 1)^{2r+2} < p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma4Table {
    pub p: u64,
    pub r: usize,
    #[serde(with = "decimal_list")]
    pub mu: Vec<BigInt>,
    pub t_p: u64,
    #[serde(with = "pair")]
    pub a: [BigInt; 2],
    pub f: ResidueTable,
}

mod decimal_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::int::parse_decimal;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|v| parse_decimal(v).ok_or_else(|| serde::de::Error::custom(format!("invalid integer {v:?}"))))
            .collect()
    }
}

pub fn t_p(p: u64, r: usize) -> Result<u64, UnifError> {
    check_p(p)?;
    let holds = |t: u64| num_traits::pow(BigInt::from(2 * t + 1), 2 * r + 2) < BigInt::from(p);
    let mut t = 0;
    while holds(t + 1) {
        t += 1;
    }
    Ok(t)
}

pub fn lemma4_table(p: u64, r: usize, mu: &[BigInt]) -> Result<Lemma4Table, UnifError> {
    if mu.len() != r {
        return Err(UnifError::Parameter(format!("expected r = {r} coefficients, got {}", mu.len())));
    }
    let tp = t_p(p, r)?;
    let pb = BigInt::from(p);
    let bound = BigInt::from(tp);
    let mut weights = vec![BigInt::one()];
    weights.extend(mu.iter().cloned());
    let y: BTreeSet<BigInt> = lattice_points(&weights, &bound)?.iter().map(|v| modulo(v, &pb)).collect();
    let shift = shift_disjoint_in(&y, residues(p), &pb, &pb)?;
    let ones = IntervalSet::from_points(pb, y.iter().map(|v| v + &shift.b));
    Ok(Lemma4Table { p, r, mu: mu.to_vec(), t_p: tp, a: [BigInt::zero(), shift.b], f: ResidueTable { ones } })
}

/// Whether every `|m_k| <= bound`.
pub(crate) fn within(m: &[BigInt], bound: &BigInt) -> bool {
    m.iter().all(|v| v.abs() <= *bound)
}
