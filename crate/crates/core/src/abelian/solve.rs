//! Integer solutions of `A x = b` with duality certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{snf, RowLattice, SmithDecomposition};
use super::AbelianError;
use crate::int::is_integral;

/// A rational row vector `y` with `y A` integral and `y b` not integral.
/// Its existence rules out any integer solution of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub y: Vec<BigRational>,
}

impl InfeasibilityCertificate {
    pub fn verify(&self, a: &IntMatrix, b: &[BigInt]) -> bool {
        if self.y.len() != a.rows() || b.len() != a.rows() {
            return false;
        }
        let ya_integral = (0..a.cols()).all(|j| {
            let s: BigRational = self
                .y
                .iter()
                .enumerate()
                .filter(|(i, _)| !a[(*i, j)].is_zero())
                .map(|(i, yi)| yi * BigRational::from_integer(a[(i, j)].clone()))
                .sum();
            is_integral(&s)
        });
        let yb: BigRational = self.y.iter().zip(b).map(|(yi, bi)| yi * BigRational::from_integer(bi.clone())).sum();
        ya_integral && !is_integral(&yb)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Integral(Vec<BigInt>),
    Infeasible(InfeasibilityCertificate),
}

impl Solution {
    pub fn verify(&self, a: &IntMatrix, b: &[BigInt]) -> bool {
        match self {
            Solution::Integral(x) => a.mul_vec(x).map(|ax| ax == b).unwrap_or(false),
            Solution::Infeasible(c) => c.verify(a, b),
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Integral(_))
    }

    pub fn integral(&self) -> Option<&[BigInt]> {
        match self {
            Solution::Integral(x) => Some(x),
            Solution::Infeasible(_) => None,
        }
    }
}

/// A Smith decomposition kept around for repeated right-hand sides.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    a: IntMatrix,
    smith: SmithDecomposition,
    rank: usize,
}

impl LinearSystem {
    pub fn new(a: &IntMatrix) -> Self {
        let smith = snf(a);
        let rank = smith.rank();
        LinearSystem { a: a.clone(), smith, rank }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Solution, AbelianError> {
        if b.len() != self.a.rows() {
            return Err(AbelianError::Dimension(format!(
                "right-hand side has {} entries for {} rows",
                b.len(),
                self.a.rows()
            )));
        }
        let c = self.smith.u.mul_vec(b)?;
        let mut y = vec![BigInt::zero(); self.a.cols()];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let d = &self.smith.d[(i, i)];
                let (q, r) = ci.div_rem(d);
                if !r.is_zero() {
                    return Ok(Solution::Infeasible(self.certificate_row(i, BigRational::new(1.into(), d.clone()))));
                }
                y[i] = q;
            } else if !ci.is_zero() {
                // zero row of D facing a nonzero entry: y = U_i / (2 c_i) gives y b = 1/2
                let scale = BigRational::new(1.into(), BigInt::from(2) * ci);
                return Ok(Solution::Infeasible(self.certificate_row(i, scale)));
            }
        }
        let x = self.smith.v.mul_vec(&y)?;
        debug_assert_eq!(self.a.mul_vec(&x)?, b);
        Ok(Solution::Integral(x))
    }

    fn certificate_row(&self, i: usize, scale: BigRational) -> InfeasibilityCertificate {
        let y = self.smith.u.row(i).iter().map(|u| &scale * BigRational::from_integer(u.clone())).collect();
        InfeasibilityCertificate { y }
    }

    /// Integer basis of `{x : A x = 0}` as rows.
    pub fn kernel_basis(&self) -> IntMatrix {
        let n = self.a.cols();
        let cols: Vec<usize> = (self.rank..n).collect();
        self.smith.v.select_columns(&cols).transpose()
    }

    /// Solves and reduces the solution to the canonical representative of
    /// its coset modulo the kernel lattice (Hermite reduction), so the answer
    /// does not depend on which particular solution was found first.
    pub fn solve_canonical(&self, b: &[BigInt]) -> Result<Solution, AbelianError> {
        match self.solve(b)? {
            Solution::Integral(x) => {
                let lattice = RowLattice::new(&self.kernel_basis());
                Ok(Solution::Integral(lattice.reduce(&x)))
            }
            inf => Ok(inf),
        }
    }
}

pub fn solve_z(a: &IntMatrix, b: &[BigInt]) -> Result<Solution, AbelianError> {
    LinearSystem::new(a).solve(b)
}

pub fn max_abs(x: &[BigInt]) -> BigInt {
    x.iter().map(|v| v.abs()).max().unwrap_or_default()
}
