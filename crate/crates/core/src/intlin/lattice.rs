//! Sublattice queries: membership, minimal dilation into a lattice,
//! subgroup index, and unimodular equivalence of integer column families.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::{solve_rational, Int, IntMatrix};
use super::smith::{hermite_rows, integer_solve, smith_decompose};
use crate::error::{Error, Result};

/// Index of the subgroup generated by a family of vectors inside `ℤ^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupIndex {
    /// Full-rank subgroup; the index is the product of the invariant factors.
    Finite { index: Int, invariant_factors: Vec<Int> },
    /// The generators span a proper subspace; the index is infinite.
    Infinite,
}

impl SubgroupIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, SubgroupIndex::Finite { .. })
    }
}

/// Coordinates of `v` in a lattice basis, or `None` when `v` is not a
/// ℤ-combination of the basis.
///
/// `basis` holds the basis vectors as columns and must have independent
/// columns; dependent columns are rejected as misuse.
pub fn lattice_membership(basis: &IntMatrix, v: &[Int]) -> Result<Option<Vec<Int>>> {
    if basis.rank() != basis.cols() {
        return Err(Error::DimensionMismatch("lattice basis columns must be independent".into()));
    }
    integer_solve(basis, v)
}

/// Smallest integer `λ ≥ 1` with `λ·v` in the lattice spanned by `basis`
/// (columns, independent).  Errors when `v` lies outside the rational span.
pub fn minimal_dilation(basis: &IntMatrix, v: &[Int]) -> Result<Int> {
    if basis.rank() != basis.cols() {
        return Err(Error::DimensionMismatch("lattice basis columns must be independent".into()));
    }
    let Some(coords) = solve_rational(basis, v)? else {
        return Err(Error::OutsideSpan);
    };
    let lambda = coords
        .iter()
        .fold(Int::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    Ok(lambda.abs())
}

/// Index of `⟨generators⟩ ⊆ ℤ^ambient_rank`; generators are the columns of
/// `gens` and may be dependent or redundant.
pub fn subgroup_index(gens: &IntMatrix, ambient_rank: usize) -> Result<SubgroupIndex> {
    if gens.rows() != ambient_rank {
        return Err(Error::DimensionMismatch("generator length does not match ambient rank".into()));
    }
    if ambient_rank == 0 {
        return Ok(SubgroupIndex::Finite { index: Int::one(), invariant_factors: vec![] });
    }
    let sd = smith_decompose(gens);
    if sd.rank < ambient_rank {
        return Ok(SubgroupIndex::Infinite);
    }
    let factors = sd.invariant_factors();
    let index = factors.iter().product();
    Ok(SubgroupIndex::Finite { index, invariant_factors: factors })
}

/// Canonical form of the lattice generated by the columns of `gens`:
/// the nonzero rows of the Hermite form of the transpose.
pub fn lattice_canonical(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_rows(&gens.transpose());
    let nonzero: Vec<usize> =
        (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    h.select_rows(&nonzero)
}

/// Whether two column families generate the same sublattice of `ℤ^n`.
pub fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && lattice_canonical(a) == lattice_canonical(b)
}

/// Finds the unimodular matrix `U` with `U·a = b` (columns correspond),
/// if one exists.  Both matrices must have full row rank; the map is then
/// unique, so failure of the returned candidate is a proof of inequivalence.
pub fn unimodular_map_between(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch("column families must have matching shapes".into()));
    }
    let r = a.rows();
    if r == 0 {
        return Ok(Some(IntMatrix::identity(0)));
    }
    if a.rank() != r || b.rank() != r {
        return Err(Error::DimensionMismatch("column families must have full row rank".into()));
    }
    let idx = super::matrix::independent_cols(a);
    let base = a.select_cols(&idx);
    let image = b.select_cols(&idx);
    // Solve U·base = image row by row: baseᵀ · (row of U)ᵀ = (row of image)ᵀ.
    let base_t = base.transpose();
    let mut u_rows: Vec<Vec<Int>> = Vec::with_capacity(r);
    for i in 0..r {
        let rhs = image.row(i).to_vec();
        let Some(sol) = solve_rational(&base_t, &rhs)? else {
            return Ok(None);
        };
        if sol.iter().any(|x| !x.denom().is_one()) {
            return Ok(None);
        }
        u_rows.push(sol.iter().map(|x| x.numer().clone()).collect());
    }
    let u = IntMatrix::from_rows(u_rows)?;
    if u.det()?.abs() != BigInt::one() {
        return Ok(None);
    }
    if u.mul(a)? != *b {
        return Ok(None);
    }
    Ok(Some(u))
}
