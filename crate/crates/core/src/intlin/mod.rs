//! Exact integer and rational linear algebra.
//!
//! Everything downstream — support functions, Picard groups, chart atlases —
//! reduces to the primitives collected here: fraction-free elimination,
//! Smith/Hermite normal forms, lattice membership and indices, rational
//! feasibility, and dual descriptions of cones.  No floating point is used
//! anywhere.

pub mod cone;
pub mod feasibility;
pub mod lattice;
pub mod matrix;
pub mod smith;

pub use cone::{dd_from_inequalities, nonneg_combination, DualDescription, RationalCone};
pub use feasibility::{feasible_point, strict_cone_feasibility, LinCon};
pub use lattice::{
    lattice_canonical, lattice_membership, lattices_equal, minimal_dilation, subgroup_index,
    unimodular_map_between, SubgroupIndex,
};
pub use matrix::{
    dot, independent_cols, is_zero_vec, primitive, rational_to_primitive, solve_rational, Int,
    IntMatrix, Rat,
};
pub use smith::{
    cokernel, hermite_rows, integer_kernel, integer_solve, smith_decompose, Cokernel,
    SmithDecomposition,
};
