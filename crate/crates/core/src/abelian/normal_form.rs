//! Hermite and Smith normal forms over the integers.
//!
//! Pivot choice is deterministic: the entry of least absolute value, ties
//! broken by (row, column). Euclidean steps use floor division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::AbelianError;

/// Row-style Hermite normal form `h = u * a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of the leading entry of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `d = u * a * v` with `d` diagonal, nonnegative and `d[i] | d[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal of `d`, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Checks every defining property against the input matrix.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), AbelianError> {
        self.verify_shape_and_product(a)?;
        if !self.u.is_unimodular() {
            return Err(AbelianError::Certificate("left transform is not unimodular".into()));
        }
        if !self.v.is_unimodular() {
            return Err(AbelianError::Certificate("right transform is not unimodular".into()));
        }
        Ok(())
    }

    /// The cheap part of [`verify`](Self::verify): recomposition, diagonal
    /// shape and the divisibility chain.
    pub fn verify_shape_and_product(&self, a: &IntMatrix) -> Result<(), AbelianError> {
        let recomposed = self.u.mul(a)?.mul(&self.v)?;
        if recomposed != self.d {
            return Err(AbelianError::Certificate("u * a * v does not equal d".into()));
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return Err(AbelianError::Certificate(format!("off-diagonal entry at ({i},{j})")));
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return Err(AbelianError::Certificate("negative diagonal entry".into()));
        }
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !divides {
                return Err(AbelianError::Certificate(format!(
                    "divisibility chain broken: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

pub fn hnf(a: &IntMatrix) -> HermiteDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut prow = 0;

    for col in 0..n {
        if prow == m {
            break;
        }
        loop {
            let best = (prow..m)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()).then(x.cmp(&y)));
            let Some(best) = best else { break };
            h.swap_rows(best, prow);
            u.swap_rows(best, prow);
            let mut done = true;
            for i in prow + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(prow, col)]);
                let neg = -q;
                h.add_row_multiple(i, prow, &neg);
                u.add_row_multiple(i, prow, &neg);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(prow, col)].is_zero() {
            continue;
        }
        if h[(prow, col)].is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        for i in 0..prow {
            let q = h[(i, col)].div_floor(&h[(prow, col)]);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(i, prow, &neg);
                u.add_row_multiple(i, prow, &neg);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    HermiteDecomposition { h, u, pivots }
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                // a remainder survived: move the smallest entry of row/column t to the pivot
                let (pi, pj) = min_abs_in_cross(&d, t);
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn min_abs_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut val = d[(t, t)].abs();
    let consider = |i: usize, j: usize, best: &mut (usize, usize), val: &mut BigInt| {
        let x = d[(i, j)].abs();
        if !x.is_zero() && (val.is_zero() || x < *val) {
            *best = (i, j);
            *val = x;
        }
    };
    for i in t + 1..d.rows() {
        consider(i, t, &mut best, &mut val);
    }
    for j in t + 1..d.cols() {
        consider(t, j, &mut best, &mut val);
    }
    best
}

/// The integer row span of a matrix, held in Hermite form for membership
/// tests and canonical coset representatives.
#[derive(Clone, Debug)]
pub struct RowLattice {
    /// Nonzero rows of the Hermite form.
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    dim: usize,
}

impl RowLattice {
    pub fn new(generators: &IntMatrix) -> Self {
        let HermiteDecomposition { h, pivots, .. } = hnf(generators);
        let basis = (0..pivots.len()).map(|i| h.row(i).to_vec()).collect();
        RowLattice { basis, pivots, dim: generators.cols() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Canonical representative of `v + lattice`: each pivot coordinate lands
    /// in `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let q = out[c].div_floor(&row[c]);
            if q.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &q * r;
                }
            }
        }
        out
    }

    /// Expresses `v` as an integer combination of the Hermite basis, if possible.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        let mut next_pivot = 0;
        for col in 0..self.dim {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot] == col {
                let row = &self.basis[next_pivot];
                let (q, r) = rest[col].div_rem(&row[col]);
                if !r.is_zero() {
                    return None;
                }
                if !q.is_zero() {
                    for (o, x) in rest.iter_mut().zip(row) {
                        if !x.is_zero() {
                            *o -= &q * x;
                        }
                    }
                }
                coeffs.push(q);
                next_pivot += 1;
            } else if !rest[col].is_zero() {
                return None;
            }
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }
}
