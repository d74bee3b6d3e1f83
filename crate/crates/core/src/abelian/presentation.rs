use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::normal_form::{snf, RowLattice, SmithDecomposition};
use super::AbelianError;
use crate::int::Int;

/// A finitely generated abelian group: named generators modulo the row span
/// of an integer relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: IntMatrix,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: IntMatrix) -> Result<Self, AbelianError> {
        if relations.cols() != generators.len() {
            return Err(AbelianError::Dimension(format!(
                "relation width {} differs from {} generators",
                relations.cols(),
                generators.len()
            )));
        }
        Ok(Presentation { generators, relations })
    }

    pub fn free(generators: Vec<String>) -> Self {
        let n = generators.len();
        Presentation { generators, relations: IntMatrix::zeros(0, n) }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn smith(&self) -> SmithDecomposition {
        snf(&self.relations)
    }

    /// Nonzero diagonal entries of the Smith form of the relation matrix.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.smith().invariant_factors()
    }

    /// Invariant factors greater than one: the torsion part.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }

    /// A finitely generated abelian group is free iff it is torsion-free.
    pub fn is_free(&self) -> bool {
        self.torsion().is_empty()
    }

    pub fn rank(&self) -> usize {
        self.generators.len() - self.relations.rank()
    }

    /// Adjoins `x = 0` for each listed generator.
    pub fn kill(&self, generators: &[usize]) -> Presentation {
        let n = self.generators.len();
        let mut units = IntMatrix::zeros(generators.len(), n);
        for (i, &g) in generators.iter().enumerate() {
            units[(i, g)] = BigInt::one();
        }
        let relations = self.relations.vstack(&units).expect("same width");
        Presentation { generators: self.generators.clone(), relations }
    }

    /// Whether the cosets of the listed generators form a basis of the group.
    pub fn check_basis(&self, candidate: &[usize]) -> BasisCheck {
        let n = self.generators.len();
        let smith = self.smith();
        let rank = smith.rank();
        let torsion: Vec<BigInt> = smith.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
        let free_rank = n - rank;

        // coordinates of each candidate in the free part Z^(n - rank)
        let free_cols: Vec<usize> = (rank..n).collect();
        let coords = smith.v.select_rows(candidate).select_columns(&free_cols);
        let coord_smith = snf(&coords);
        let coordinate_factors = coord_smith.diagonal();
        let unimodular_coordinates = candidate.len() == free_rank && coordinate_factors.iter().all(One::is_one);

        let mut span = self.relations.clone();
        let mut units = IntMatrix::zeros(candidate.len(), n);
        for (i, &g) in candidate.iter().enumerate() {
            units[(i, g)] = BigInt::one();
        }
        span = span.vstack(&units).expect("same width");
        let lattice = RowLattice::new(&span);
        let not_generated: Vec<usize> = (0..n)
            .filter(|g| !candidate.contains(g))
            .filter(|&g| {
                let mut e = vec![BigInt::zero(); n];
                e[g] = BigInt::one();
                !lattice.contains(&e)
            })
            .collect();

        BasisCheck { free_rank, torsion, coordinate_factors, unimodular_coordinates, not_generated }
    }

    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            gens: self.generators.clone(),
            rels: self.relations.to_rows().into_iter().map(|r| r.into_iter().map(Int).collect()).collect(),
        }
    }

    pub fn from_doc(doc: PresentationDoc) -> Result<Self, AbelianError> {
        let n = doc.gens.len();
        let rows = doc.rels.into_iter().map(|r| r.into_iter().map(|v| v.0).collect()).collect();
        Presentation::new(doc.gens, IntMatrix::from_rows(n, rows)?)
    }
}

/// Outcome of [`Presentation::check_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCheck {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// Smith diagonal of the candidates' coordinates in the free part.
    pub coordinate_factors: Vec<BigInt>,
    pub unimodular_coordinates: bool,
    /// Generators whose coset is not in the span of the candidates.
    pub not_generated: Vec<usize>,
}

impl BasisCheck {
    pub fn generates(&self) -> bool {
        self.not_generated.is_empty()
    }

    pub fn independent(&self) -> bool {
        self.torsion.is_empty() && self.unimodular_coordinates
    }

    pub fn is_basis(&self) -> bool {
        self.generates() && self.independent()
    }
}

/// JSON form `{"gens": [...], "rels": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub gens: Vec<String>,
    pub rels: Vec<Vec<Int>>,
}
