//! Rational polyhedral cones with exact dual descriptions.
//!
//! The double description method converts between the generator view
//! `cone(r_1, …, r_k) + span(lineality)` and the facet view
//! `{x : A·x ≥ 0, B·x = 0}`.  Both are kept on [`RationalCone`] so that
//! membership, faces, and intersections are pure integer sign checks.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::feasibility::{feasible_point, strict_cone_feasibility, LinCon};
use super::matrix::{dot, is_zero_vec, primitive, Int, IntMatrix, Rat};
use crate::error::{Error, Result};

/// Minimal generator description of a solution cone `{x : A·x ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDescription {
    /// Extreme rays modulo the lineality space, primitive and sorted.
    pub rays: Vec<Vec<Int>>,
    /// Basis of the lineality space `{x : A·x = 0}`.
    pub lineality: Vec<Vec<Int>>,
}

/// Generators of `{x : ineqs·x ≥ 0}` by incremental double description.
pub fn dd_from_inequalities(ineqs: &IntMatrix) -> DualDescription {
    let dim = ineqs.cols();
    let mut lineality: Vec<Vec<Int>> = IntMatrix::identity(dim).row_vecs();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    let mut processed: Vec<Vec<Int>> = Vec::new();

    for k in 0..ineqs.rows() {
        let a = ineqs.row(k).to_vec();
        if let Some(p) = lineality.iter().position(|b| !dot(&a, b).is_zero()) {
            // The hyperplane cuts the lineality space: pivot one basis vector
            // out of it.  Projections keep every generator on `a ≥ 0`.
            let mut b = lineality.remove(p);
            if dot(&a, &b).is_negative() {
                for e in &mut b {
                    *e = -e.clone();
                }
            }
            let ab = dot(&a, &b);
            for c in &mut lineality {
                let ac = dot(&a, c);
                *c = primitive(&combine_along(&ab, c, &ac, &b));
            }
            for r in &mut rays {
                let ar = dot(&a, r);
                *r = primitive(&combine_along(&ab, r, &ar, &b));
            }
            rays.push(primitive(&b));
            dedupe_rays(&mut rays);
        } else {
            // Lineality is untouched: split rays by sign and patch the cut
            // with combinations of adjacent positive/negative pairs.
            let zero_sets = zero_sets(&rays, &processed);
            let signs: Vec<Int> = rays.iter().map(|r| dot(&a, r)).collect();
            let mut next: Vec<Vec<Int>> = Vec::new();
            for (r, s) in rays.iter().zip(&signs) {
                if !s.is_negative() {
                    next.push(r.clone());
                }
            }
            for (i, si) in signs.iter().enumerate() {
                if !si.is_positive() {
                    continue;
                }
                for (j, sj) in signs.iter().enumerate() {
                    if !sj.is_negative() {
                        continue;
                    }
                    if !adjacent(i, j, &zero_sets) {
                        continue;
                    }
                    let combo = combine_along(si, &rays[j], sj, &rays[i]);
                    if !is_zero_vec(&combo) {
                        next.push(primitive(&combo));
                    }
                }
            }
            rays = next;
            dedupe_rays(&mut rays);
        }
        processed.push(a);
    }

    rays.sort();
    lineality.sort();
    DualDescription { rays, lineality }
}

/// `f·v - g·w`, the positive combination used by both pivot cases.
fn combine_along(f: &Int, v: &[Int], g: &Int, w: &[Int]) -> Vec<Int> {
    v.iter().zip(w).map(|(x, y)| f * x - g * y).collect()
}

fn zero_sets(rays: &[Vec<Int>], processed: &[Vec<Int>]) -> Vec<BTreeSet<usize>> {
    rays.iter()
        .map(|r| {
            processed
                .iter()
                .enumerate()
                .filter_map(|(i, a)| dot(a, r).is_zero().then_some(i))
                .collect()
        })
        .collect()
}

/// Combinatorial adjacency: no third extreme ray is tight on everything the
/// pair is jointly tight on.
fn adjacent(i: usize, j: usize, zero_sets: &[BTreeSet<usize>]) -> bool {
    let common: BTreeSet<usize> = zero_sets[i].intersection(&zero_sets[j]).copied().collect();
    zero_sets
        .iter()
        .enumerate()
        .all(|(k, z)| k == i || k == j || !common.is_subset(z))
}

fn dedupe_rays(rays: &mut Vec<Vec<Int>>) {
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    rays.retain(|r| seen.insert(r.clone()));
}

/// A cone `cone(generators)` in `ℤ^ambient` carrying its facet description.
#[derive(Clone, Debug)]
pub struct RationalCone {
    ambient: usize,
    generators: Vec<Vec<Int>>,
    /// Rows `n` with `n·x ≥ 0` on the cone.
    facet_normals: Vec<Vec<Int>>,
    /// Rows `e` with `e·x = 0` on the cone; they cut out its linear span.
    span_equalities: Vec<Vec<Int>>,
}

impl RationalCone {
    /// Builds the cone spanned by the given vectors and computes its facet
    /// description by dualizing twice.
    pub fn from_generators(ambient: usize, generators: Vec<Vec<Int>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch("generator length differs from ambient rank".into()));
        }
        let gen_matrix = IntMatrix::from_shape(
            generators.len(),
            ambient,
            generators.iter().flatten().cloned().collect(),
        )?;
        // Dual cone {u : g·u ≥ 0 ∀g}; its rays support the original cone and
        // its lineality is the orthogonal complement of the span.
        let dual = dd_from_inequalities(&gen_matrix);
        Ok(RationalCone {
            ambient,
            generators,
            facet_normals: dual.rays,
            span_equalities: dual.lineality,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    pub fn facet_normals(&self) -> &[Vec<Int>] {
        &self.facet_normals
    }

    pub fn span_equalities(&self) -> &[Vec<Int>] {
        &self.span_equalities
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        self.ambient - IntMatrix::from_shape(
            self.span_equalities.len(),
            self.ambient,
            self.span_equalities.iter().flatten().cloned().collect(),
        )
        .expect("stored equality rows have ambient length")
        .rank()
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient
            && self.facet_normals.iter().all(|n| !dot(n, v).is_negative())
            && self.span_equalities.iter().all(|e| dot(e, v).is_zero())
    }

    /// Whether the cone contains no line, i.e. some functional is strictly
    /// positive on every nonzero generator.
    pub fn is_pointed(&self) -> Result<bool> {
        if self.generators.is_empty() {
            return Ok(true);
        }
        let rows = IntMatrix::from_shape(
            self.generators.len(),
            self.ambient,
            self.generators.iter().flatten().cloned().collect(),
        )?;
        let strict: BTreeSet<usize> = (0..rows.rows()).collect();
        let eq = IntMatrix::zero(0, self.ambient);
        Ok(strict_cone_feasibility(&eq, &rows, &strict)?.is_some())
    }

    /// Geometric intersection, regenerated from the combined facet systems.
    pub fn intersect(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("cones live in different lattices".into()));
        }
        let mut rows: Vec<Vec<Int>> = Vec::new();
        for n in self.facet_normals.iter().chain(&other.facet_normals) {
            rows.push(n.clone());
        }
        for e in self.span_equalities.iter().chain(&other.span_equalities) {
            rows.push(e.clone());
            rows.push(e.iter().map(|x| -x.clone()).collect());
        }
        let system = IntMatrix::from_shape(rows.len(), self.ambient, rows.into_iter().flatten().collect())?;
        let dd = dd_from_inequalities(&system);
        let mut gens = dd.rays;
        for l in dd.lineality {
            gens.push(l.iter().map(|x| -x.clone()).collect());
            gens.push(l);
        }
        gens.sort();
        RationalCone::from_generators(self.ambient, gens)
    }

    /// Set-equality of the underlying point sets.
    pub fn equals(&self, other: &RationalCone) -> bool {
        self.ambient == other.ambient
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Indices of generators on which the functional vanishes; when the
    /// functional is nonnegative on the cone this selects a face.
    pub fn tight_generators(&self, functional: &[Int]) -> BTreeSet<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter_map(|(i, g)| dot(functional, g).is_zero().then_some(i))
            .collect()
    }
}

/// Nonnegative coefficients expressing `target` over `gens`, if any.
pub fn nonneg_combination(gens: &[Vec<Int>], target: &[Int]) -> Option<Vec<Rat>> {
    let dim = target.len();
    let k = gens.len();
    let eqs: Vec<LinCon> = (0..dim)
        .map(|c| {
            let coeffs: Vec<Int> = gens.iter().map(|g| g[c].clone()).collect();
            LinCon::with_constant(&coeffs, Rat::from_integer(-target[c].clone()))
        })
        .collect();
    let nonneg: Vec<LinCon> = (0..k)
        .map(|i| {
            let mut coeffs = vec![Int::from(0); k];
            coeffs[i] = Int::from(1);
            LinCon::homogeneous(&coeffs)
        })
        .collect();
    feasible_point(&eqs, &nonneg, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vec<Int> {
        x.iter().map(|&a| Int::from(a)).collect()
    }

    #[test]
    fn quadrant_round_trip() {
        let dd = dd_from_inequalities(&IntMatrix::from_i64(&[&[1, 0], &[0, 1]]));
        assert_eq!(dd.rays, vec![v(&[0, 1]), v(&[1, 0])]);
        assert!(dd.lineality.is_empty());
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let dd = dd_from_inequalities(&IntMatrix::from_i64(&[&[1, 0]]));
        assert_eq!(dd.rays, vec![v(&[1, 0])]);
        assert_eq!(dd.lineality.len(), 1);
        assert!(dd.lineality[0][0].is_zero());
    }

    #[test]
    fn opposite_halfplanes_leave_a_line() {
        let dd = dd_from_inequalities(&IntMatrix::from_i64(&[&[1, 0], &[-1, 0]]));
        assert!(dd.rays.is_empty());
        assert_eq!(dd.lineality, vec![v(&[0, 1])]);
    }

    #[test]
    fn no_constraints_give_full_space() {
        let dd = dd_from_inequalities(&IntMatrix::zero(0, 3));
        assert!(dd.rays.is_empty());
        assert_eq!(dd.lineality.len(), 3);
    }

    #[test]
    fn facets_of_a_plane_quadrant() {
        let cone = RationalCone::from_generators(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(cone.dim(), 2);
        assert!(cone.contains(&v(&[3, 5])));
        assert!(!cone.contains(&v(&[-1, 0])));
        assert!(cone.is_pointed().unwrap());
    }

    #[test]
    fn skew_cone_membership() {
        let cone = RationalCone::from_generators(2, vec![v(&[1, 0]), v(&[1, 2])]).unwrap();
        assert!(cone.contains(&v(&[1, 1])));
        assert!(!cone.contains(&v(&[0, 1])));
        // Boundary points are members.
        assert!(cone.contains(&v(&[2, 4])));
    }

    #[test]
    fn zero_cone() {
        let cone = RationalCone::from_generators(2, vec![]).unwrap();
        assert_eq!(cone.dim(), 0);
        assert!(cone.contains(&v(&[0, 0])));
        assert!(!cone.contains(&v(&[1, 0])));
        assert!(cone.is_pointed().unwrap());
    }

    #[test]
    fn line_is_not_pointed() {
        let cone = RationalCone::from_generators(2, vec![v(&[1, 0]), v(&[-1, 0])]).unwrap();
        assert!(!cone.is_pointed().unwrap());
        assert_eq!(cone.dim(), 1);
        assert!(cone.contains(&v(&[-7, 0])));
    }

    #[test]
    fn non_simplicial_cone_round_trip() {
        // Cone over a square: four extreme rays, four facets.
        let gens = vec![v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1])];
        let cone = RationalCone::from_generators(3, gens.clone()).unwrap();
        assert_eq!(cone.facet_normals().len(), 4);
        let system = IntMatrix::from_rows(cone.facet_normals().to_vec()).unwrap();
        let dd = dd_from_inequalities(&system);
        let mut expected = gens;
        expected.sort();
        assert_eq!(dd.rays, expected);
        assert!(dd.lineality.is_empty());
    }

    #[test]
    fn intersection_of_wedges() {
        let quadrant = RationalCone::from_generators(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let wedge = RationalCone::from_generators(2, vec![v(&[1, 1]), v(&[-1, 1])]).unwrap();
        let meet = quadrant.intersect(&wedge).unwrap();
        assert_eq!(meet.generators(), &[v(&[0, 1]), v(&[1, 1])]);
    }

    #[test]
    fn face_selection_by_functional() {
        let cone = RationalCone::from_generators(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let tight = cone.tight_generators(&v(&[0, 1]));
        assert_eq!(tight, [0usize].into_iter().collect());
    }

    #[test]
    fn nonneg_combination_examples() {
        let gens = vec![v(&[1, 0]), v(&[1, 2])];
        assert!(nonneg_combination(&gens, &v(&[2, 2])).is_some());
        assert!(nonneg_combination(&gens, &v(&[0, -1])).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The facet view and the feasibility view of membership agree.
        #[test]
        fn membership_matches_nonneg_combination(
            gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..4),
            point in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let gens: Vec<Vec<Int>> = gens
                .iter()
                .map(|g| v(g))
                .filter(|g| !is_zero_vec(g))
                .collect();
            let cone = RationalCone::from_generators(3, gens.clone()).unwrap();
            let p = v(&point);
            prop_assert_eq!(cone.contains(&p), nonneg_combination(&gens, &p).is_some());
        }

        /// Every generator lies in the cone it generates, and dualizing the
        /// facet system recovers a cone containing the generators.
        #[test]
        fn generators_satisfy_their_facets(
            gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 1..5),
        ) {
            let gens: Vec<Vec<Int>> = gens.iter().map(|g| v(g)).collect();
            let cone = RationalCone::from_generators(2, gens.clone()).unwrap();
            for g in &gens {
                prop_assert!(cone.contains(g));
            }
        }

        /// Intersection is contained in both factors and contains common rays.
        #[test]
        fn intersection_containment(
            a in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 2), 1..4),
            b in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 2), 1..4),
        ) {
            let ca = RationalCone::from_generators(2, a.iter().map(|g| v(g)).collect()).unwrap();
            let cb = RationalCone::from_generators(2, b.iter().map(|g| v(g)).collect()).unwrap();
            let meet = ca.intersect(&cb).unwrap();
            for g in meet.generators() {
                prop_assert!(ca.contains(g));
                prop_assert!(cb.contains(g));
            }
        }
    }
}
