//! Brute-force references, deliberately naive.

use std::collections::BTreeSet;

use lambda_systems::abelian::{IntMatrix, SmithDecomposition};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn random_family(rng: &mut impl Rng, max_sets: usize, max_atoms: u32) -> Vec<BTreeSet<u32>> {
    let atoms = rng.gen_range(1..=max_atoms);
    (0..rng.gen_range(0..=max_sets)).map(|_| (0..atoms).filter(|_| rng.gen_bool(0.35)).collect()).collect()
}

/// Tries every injective assignment.
pub fn has_transversal<T: Ord>(fam: &[BTreeSet<T>]) -> bool {
    fn go<'a, T: Ord>(fam: &'a [BTreeSet<T>], used: &mut Vec<&'a T>, i: usize) -> bool {
        if i == fam.len() {
            return true;
        }
        for x in &fam[i] {
            if !used.contains(&x) {
                used.push(x);
                let found = go(fam, used, i + 1);
                used.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }
    go(fam, &mut Vec::new(), 0)
}

/// Size of the least subfamily whose union is smaller than itself.
pub fn smallest_violator_size<T: Ord>(fam: &[BTreeSet<T>]) -> Option<usize> {
    let n = fam.len();
    (1u32..1 << n)
        .filter(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let union: BTreeSet<&T> = members.iter().flat_map(|&i| fam[i].iter()).collect();
            union.len() < members.len()
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every permutation of `sets` (with first coordinates `firsts`) meeting the
/// freshness threshold and the split at `alpha`.
pub fn valid_orders<T: Ord>(sets: &[BTreeSet<T>], firsts: &[i64], alpha: i64, fresh: usize) -> Vec<Vec<usize>> {
    permutations(sets.len())
        .into_iter()
        .filter(|p| {
            let mut seen: BTreeSet<&T> = BTreeSet::new();
            for (pos, &i) in p.iter().enumerate() {
                if sets[i].iter().filter(|x| !seen.contains(x)).count() < fresh {
                    return false;
                }
                if firsts[i] > alpha && p[pos + 1..].iter().any(|&j| firsts[j] <= alpha) {
                    return false;
                }
                seen.extend(sets[i].iter());
            }
            true
        })
        .collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let rows = (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect();
    IntMatrix::from_rows(cols, rows).unwrap()
}

/// Checks the decomposition entry by entry with schoolbook products and
/// cofactor determinants.
pub fn smith_holds(a: &IntMatrix, s: &SmithDecomposition) -> bool {
    let ua = IntMatrix::from_rows(a.cols(), naive_mul(&s.u, a)).unwrap();
    let product = naive_mul(&ua, &s.v);
    let (r, c) = (s.d.rows(), s.d.cols());
    let diagonal_only = (0..r).all(|i| (0..c).all(|j| i == j || s.d[(i, j)].is_zero()));
    let diag: Vec<BigInt> = (0..r.min(c)).map(|i| s.d[(i, i)].clone()).collect();
    let chain = diag.iter().all(|d| !d.is_negative())
        && diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) });
    product == s.d.to_rows()
        && diagonal_only
        && chain
        && cofactor_det(&s.u.to_rows()).abs() == 1.into()
        && cofactor_det(&s.v.to_rows()).abs() == 1.into()
}

fn naive_mul(a: &IntMatrix, b: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| (0..b.cols()).map(|j| (0..a.cols()).map(|k| &a[(i, k)] * &b[(k, j)]).sum()).collect())
        .collect()
}

pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Whether `A x = b` has a solution with every `|x_i| <= bound`.
pub fn box_solution(a: &IntMatrix, b: &[BigInt], bound: i64) -> Option<Vec<BigInt>> {
    let n = a.cols();
    let side = (2 * bound + 1) as u64;
    (0..side.pow(n as u32)).find_map(|mut code| {
        let x: Vec<BigInt> = (0..n)
            .map(|_| {
                let v = (code % side) as i64 - bound;
                code /= side;
                BigInt::from(v)
            })
            .collect();
        let ok = (0..a.rows()).all(|i| (0..n).map(|j| &a[(i, j)] * &x[j]).sum::<BigInt>() == b[i]);
        ok.then_some(x)
    })
}
