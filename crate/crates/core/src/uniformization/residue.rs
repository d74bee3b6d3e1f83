use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::UnifError;
use crate::int::modulo;

/// A set of residues modulo `N`, kept as sorted, disjoint, non-adjacent
/// closed intervals inside `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    modulus: BigInt,
    intervals: Vec<(BigInt, BigInt)>,
}

impl IntervalSet {
    pub fn empty(modulus: BigInt) -> Self {
        assert!(modulus.is_positive(), "modulus must be positive");
        IntervalSet { modulus, intervals: Vec::new() }
    }

    /// The residues of the integer ranges `[lo, hi]`.
    pub fn from_ranges(modulus: BigInt, ranges: impl IntoIterator<Item = (BigInt, BigInt)>) -> Self {
        let mut raw = Vec::new();
        for (lo, hi) in ranges {
            if hi < lo {
                continue;
            }
            let len = &hi - &lo + 1u32;
            if len >= modulus {
                return IntervalSet { intervals: vec![(BigInt::zero(), &modulus - 1u32)], modulus };
            }
            let start = modulo(&lo, &modulus);
            let end = &start + len - 1u32;
            if end < modulus {
                raw.push((start, end));
            } else {
                raw.push((start, &modulus - 1u32));
                raw.push((BigInt::zero(), end - &modulus));
            }
        }
        Self::normalized(modulus, raw)
    }

    pub fn from_points(modulus: BigInt, points: impl IntoIterator<Item = BigInt>) -> Self {
        Self::from_ranges(modulus, points.into_iter().map(|x| (x.clone(), x)))
    }

    fn normalized(modulus: BigInt, mut raw: Vec<(BigInt, BigInt)>) -> Self {
        raw.sort();
        let mut intervals: Vec<(BigInt, BigInt)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= &last.1 + 1u32 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => intervals.push((lo, hi)),
            }
        }
        IntervalSet { modulus, intervals }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn intervals(&self) -> &[(BigInt, BigInt)] {
        &self.intervals
    }

    /// The interval containing the residue of `x`.
    fn locate(&self, x: &BigInt) -> Option<&(BigInt, BigInt)> {
        let x = modulo(x, &self.modulus);
        let i = self.intervals.partition_point(|(lo, _)| lo <= &x);
        i.checked_sub(1).map(|i| &self.intervals[i]).filter(|(_, hi)| &x <= hi)
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.locate(x).is_some()
    }

    pub fn len(&self) -> BigInt {
        self.intervals.iter().map(|(lo, hi)| hi - lo + 1u32).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `b + X`.
    pub fn shifted(&self, b: &BigInt) -> Self {
        Self::from_ranges(self.modulus.clone(), self.intervals.iter().map(|(lo, hi)| (lo + b, hi + b)))
    }

    /// Least multiple of `step` in `[0, N)` outside the set.
    pub fn least_uncovered_multiple(&self, step: &BigInt) -> Option<BigInt> {
        let mut x = BigInt::zero();
        while x < self.modulus {
            match self.locate(&x) {
                None => return Some(x),
                Some((_, hi)) => x = (hi + 1u32).div_ceil(step) * step,
            }
        }
        None
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (&self.intervals[i], &other.intervals[j]);
            if a.1 < b.0 {
                i += 1;
            } else if b.1 < a.0 {
                j += 1;
            } else {
                return false;
            }
        }
        true
    }
}

/// A function `Z/NZ -> {0, 1}` given by the residues sent to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTable {
    pub ones: IntervalSet,
}

impl ResidueTable {
    pub fn modulus(&self) -> &BigInt {
        self.ones.modulus()
    }

    pub fn eval(&self, x: &BigInt) -> u8 {
        u8::from(self.ones.contains(x))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    #[serde(with = "crate::int::decimal")]
    modulus: BigInt,
    ones: Vec<[String; 2]>,
}

impl Serialize for ResidueTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableDoc {
            modulus: self.modulus().clone(),
            ones: self.ones.intervals().iter().map(|(lo, hi)| [lo.to_string(), hi.to_string()]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ResidueTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = TableDoc::deserialize(d)?;
        ResidueTable::from_doc(doc.modulus, &doc.ones).map_err(serde::de::Error::custom)
    }
}

impl ResidueTable {
    fn from_doc(modulus: BigInt, ones: &[[String; 2]]) -> Result<Self, UnifError> {
        if !modulus.is_positive() {
            return Err(UnifError::Table("modulus must be positive".into()));
        }
        let mut ranges = Vec::with_capacity(ones.len());
        for [lo, hi] in ones {
            let parse = |v: &str| {
                crate::int::parse_decimal(v).ok_or_else(|| UnifError::Table(format!("invalid residue {v:?}")))
            };
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo.is_negative() || hi >= modulus || hi < lo {
                return Err(UnifError::Table(format!("interval [{lo}, {hi}] outside [0, {modulus})")));
            }
            ranges.push((lo, hi));
        }
        Ok(ResidueTable { ones: IntervalSet::from_ranges(modulus, ranges) })
    }
}
