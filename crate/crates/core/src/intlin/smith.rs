//! Smith and Hermite normal forms with transformation tracking, and the
//! integer kernel / solve / cokernel routines derived from them.

use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};
use crate::error::{Error, Result};

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular and `S`
/// diagonal with a divisibility chain `d_1 | d_2 | …` of positive entries.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, …, d_rank`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.s.entry(i, i).clone()).collect()
    }

    /// Invariant factors greater than one (the torsion of the cokernel).
    pub fn torsion(&self) -> Vec<Int> {
        self.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }
}

/// Computes the Smith normal form of `a`.
pub fn smith_decompose(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&s, t) else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Alternate row and column reduction until the pivot's row and
        // column are clear; swaps keep strictly shrinking the pivot, so
        // this terminates.
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                while !s.entry(i, t).is_zero() {
                    let q = s.entry(i, t) / s.entry(t, t);
                    if !q.is_zero() {
                        row_sub(&mut s, i, t, &q);
                        row_sub(&mut u, i, t, &q);
                    }
                    if !s.entry(i, t).is_zero() {
                        s.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                while !s.entry(t, j).is_zero() {
                    let q = s.entry(t, j) / s.entry(t, t);
                    if !q.is_zero() {
                        col_sub(&mut s, j, t, &q);
                        col_sub(&mut v, j, t, &q);
                    }
                    if !s.entry(t, j).is_zero() {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility fix-up: fold a violating row into the pivot row
            // and re-reduce.  The pivot strictly shrinks each round.
            if let Some(i) = divisibility_violation(&s, t) {
                row_add(&mut s, t, i);
                row_add(&mut u, t, i);
                continue;
            }
            break;
        }

        if s.entry(t, t).is_negative() {
            row_negate(&mut s, t);
            row_negate(&mut u, t);
        }
        t += 1;
    }

    SmithDecomposition { u, s, v, rank: t }
}

fn smallest_nonzero(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let e = s.entry(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s.entry(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn divisibility_violation(s: &IntMatrix, t: usize) -> Option<usize> {
    let d = s.entry(t, t).clone();
    for i in t + 1..s.rows() {
        for j in t + 1..s.cols() {
            if !(s.entry(i, j) % &d).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn row_sub(m: &mut IntMatrix, i: usize, t: usize, q: &Int) {
    for c in 0..m.cols() {
        let delta = q * m.entry(t, c);
        *m.entry_mut(i, c) -= delta;
    }
}

fn row_add(m: &mut IntMatrix, dst: usize, src: usize) {
    for c in 0..m.cols() {
        let delta = m.entry(src, c).clone();
        *m.entry_mut(dst, c) += delta;
    }
}

fn col_sub(m: &mut IntMatrix, j: usize, t: usize, q: &Int) {
    for r in 0..m.rows() {
        let delta = q * m.entry(r, t);
        *m.entry_mut(r, j) -= delta;
    }
}

fn row_negate(m: &mut IntMatrix, i: usize) {
    for c in 0..m.cols() {
        let v = -m.entry(i, c).clone();
        *m.entry_mut(i, c) = v;
    }
}

fn floor_div(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}

/// Canonical row Hermite normal form `U * A = H` with `U` unimodular.
///
/// `H` is in row echelon form: each pivot is positive, entries above a
/// pivot are reduced into `[0, pivot)`, and zero rows sit at the bottom.
/// Two integer row lattices are equal iff their forms agree.
pub fn hermite_rows(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pr = 0usize;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        if (pr..rows).all(|i| h.entry(i, c).is_zero()) {
            continue;
        }
        loop {
            let mut min_row = None;
            for i in pr..rows {
                if h.entry(i, c).is_zero() {
                    continue;
                }
                match min_row {
                    Some(m) if h.entry(m, c).abs() <= h.entry(i, c).abs() => {}
                    _ => min_row = Some(i),
                }
            }
            let m = min_row.expect("column has a nonzero entry");
            h.swap_rows(pr, m);
            u.swap_rows(pr, m);
            let mut reduced_all = true;
            for i in pr + 1..rows {
                if h.entry(i, c).is_zero() {
                    continue;
                }
                let q = h.entry(i, c) / h.entry(pr, c);
                if !q.is_zero() {
                    row_sub(&mut h, i, pr, &q);
                    row_sub(&mut u, i, pr, &q);
                }
                if !h.entry(i, c).is_zero() {
                    reduced_all = false;
                }
            }
            if reduced_all {
                break;
            }
        }
        if h.entry(pr, c).is_negative() {
            row_negate(&mut h, pr);
            row_negate(&mut u, pr);
        }
        for i in 0..pr {
            let q = floor_div(h.entry(i, c), h.entry(pr, c));
            if !q.is_zero() {
                row_sub(&mut h, i, pr, &q);
                row_sub(&mut u, i, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Basis of the integer kernel `{x ∈ ℤ^cols : A x = 0}`, returned as the
/// columns of the result.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let sd = smith_decompose(a);
    let idx: Vec<usize> = (sd.rank..a.cols()).collect();
    sd.v.select_cols(&idx)
}

/// Solves `A x = b` over the integers.  Returns `None` when no integer
/// solution exists.
pub fn integer_solve(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch("right-hand side length does not match row count".into()));
    }
    let sd = smith_decompose(a);
    let ub = sd.u.mul_vec(b)?;
    let mut y = vec![Int::zero(); a.cols()];
    for (i, item) in ub.iter().enumerate() {
        if i < sd.rank {
            let d = sd.s.entry(i, i);
            if !(item % d).is_zero() {
                return Ok(None);
            }
            y[i] = item / d;
        } else if !item.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(sd.v.mul_vec(&y)?))
}

/// Cokernel `ℤ^rows / colspan(A)` presented as `ℤ^free_rank ⊕ ⊕ᵢ ℤ/dᵢ`.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub free_rank: usize,
    /// Torsion invariant factors `d_i > 1`, in divisibility order.
    pub torsion: Vec<Int>,
    /// Rows `0..free_rank` give the free coordinates of a class; row
    /// `free_rank + i` gives the `ℤ/torsion[i]` coordinate (read mod `dᵢ`).
    pub projection: IntMatrix,
}

impl Cokernel {
    /// Free coordinates of the class of `v`.
    pub fn free_class(&self, v: &[Int]) -> Result<Vec<Int>> {
        let all = self.projection.mul_vec(v)?;
        Ok(all[..self.free_rank].to_vec())
    }
}

/// Computes the cokernel of `a` as a quotient of `ℤ^rows`.
pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let sd = smith_decompose(a);
    let rows = a.rows();
    let mut proj_rows: Vec<usize> = (sd.rank..rows).collect();
    let mut torsion = Vec::new();
    for i in 0..sd.rank {
        let d = sd.s.entry(i, i);
        if !d.is_one() {
            torsion.push(d.clone());
            proj_rows.push(i);
        }
    }
    // Free rows first, then torsion rows, matching the documented layout.
    let free_rank = rows - sd.rank;
    let projection = sd.u.select_rows(&proj_rows);
    Cokernel { free_rank, torsion, projection }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn i(n: i64) -> Int {
        Int::from(n)
    }

    fn assert_smith_invariants(a: &IntMatrix, sd: &SmithDecomposition) {
        let uav = sd.u.mul(a).unwrap().mul(&sd.v).unwrap();
        assert_eq!(uav, sd.s, "U*A*V must equal S");
        assert_eq!(sd.u.det().unwrap().abs(), i(1), "U must be unimodular");
        assert_eq!(sd.v.det().unwrap().abs(), i(1), "V must be unimodular");
        let d = sd.invariant_factors();
        for k in 1..d.len() {
            assert!((&d[k] % &d[k - 1]).is_zero(), "divisibility chain violated");
        }
        for (k, dk) in d.iter().enumerate() {
            assert!(dk > &i(0));
            assert_eq!(sd.s.entry(k, k), dk);
        }
        for r in 0..sd.s.rows() {
            for c in 0..sd.s.cols() {
                if r != c {
                    assert!(sd.s.entry(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn smith_of_projective_plane_ray_matrix() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let sd = smith_decompose(&a);
        assert_smith_invariants(&a, &sd);
        assert_eq!(sd.rank, 2);
        assert!(sd.torsion().is_empty());
    }

    #[test]
    fn smith_of_zero_matrix() {
        let a = IntMatrix::zero(2, 2);
        let sd = smith_decompose(&a);
        assert_smith_invariants(&a, &sd);
        assert_eq!(sd.rank, 0);
    }

    #[test]
    fn smith_of_scalar_two() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let sd = smith_decompose(&a);
        assert_smith_invariants(&a, &sd);
        assert_eq!(sd.s, IntMatrix::from_i64(&[&[2]]));
        assert_eq!(sd.torsion(), vec![i(2)]);
    }

    #[test]
    fn smith_divisibility_chain_nontrivial() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let sd = smith_decompose(&a);
        assert_smith_invariants(&a, &sd);
        assert_eq!(sd.invariant_factors(), vec![i(1), i(6)]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u) = hermite_rows(&a);
        assert_eq!(u.mul(&a).unwrap(), h);
        assert_eq!(u.det().unwrap().abs(), i(1));
        // Same row lattice, different generators, same canonical form.
        let b = IntMatrix::from_i64(&[&[10, 4, 16], &[2, 4, 4], &[-4, 10, 16]]);
        let (hb, _) = hermite_rows(&b);
        assert_eq!(h, hb);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        for j in 0..k.cols() {
            assert!(crate::intlin::matrix::is_zero_vec(&a.mul_vec(&k.col(j)).unwrap()));
        }
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn integer_solve_detects_divisibility() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert!(integer_solve(&a, &[i(1), i(0)]).unwrap().is_none());
        let x = integer_solve(&a, &[i(4), i(-2)]).unwrap().unwrap();
        assert_eq!(x, vec![i(2), i(-1)]);
        // Inconsistent over the rationals as well.
        let b = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(integer_solve(&b, &[i(0), i(1)]).unwrap().is_none());
    }

    #[test]
    fn cokernel_of_projective_plane_divisors() {
        // Rays (1,0), (0,1), (-1,-1) as functionals on the character lattice.
        let a = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let ck = cokernel(&a);
        assert_eq!(ck.free_rank, 1);
        assert!(ck.torsion.is_empty());
        let classes: Vec<Vec<Int>> = (0..3)
            .map(|k| {
                let mut e = vec![i(0); 3];
                e[k] = i(1);
                ck.free_class(&e).unwrap()
            })
            .collect();
        assert_eq!(classes[0], classes[1]);
        assert_eq!(classes[1], classes[2]);
        assert_eq!(classes[0][0].abs(), i(1));
    }

    #[test]
    fn cokernel_of_identity_is_trivial() {
        let ck = cokernel(&IntMatrix::identity(2));
        assert_eq!(ck.free_rank, 0);
        assert!(ck.torsion.is_empty());
    }

    #[test]
    fn cokernel_with_torsion() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let ck = cokernel(&a);
        assert_eq!(ck.free_rank, 0);
        assert_eq!(ck.torsion, vec![i(2)]);
        assert_eq!(ck.projection.rows(), 1);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |vals| {
                IntMatrix::from_shape(r, c, vals.into_iter().map(Int::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn smith_invariants_hold(a in small_matrix()) {
            let sd = smith_decompose(&a);
            assert_smith_invariants(&a, &sd);
        }

        #[test]
        fn kernel_columns_annihilate(a in small_matrix()) {
            let k = integer_kernel(&a);
            for j in 0..k.cols() {
                prop_assert!(crate::intlin::matrix::is_zero_vec(&a.mul_vec(&k.col(j)).unwrap()));
            }
            prop_assert_eq!(k.cols(), a.cols() - a.rank());
        }

        #[test]
        fn solve_roundtrip(a in small_matrix(), xs in proptest::collection::vec(-5i64..=5, 4)) {
            let x: Vec<Int> = xs.into_iter().take(a.cols()).map(Int::from).collect();
            if x.len() == a.cols() {
                let b = a.mul_vec(&x).unwrap();
                let sol = integer_solve(&a, &b).unwrap().expect("constructed system is solvable");
                prop_assert_eq!(a.mul_vec(&sol).unwrap(), b);
            }
        }

        #[test]
        fn cokernel_projection_kills_image(a in small_matrix()) {
            let ck = cokernel(&a);
            for j in 0..a.cols() {
                let free = ck.free_class(&a.col(j)).unwrap();
                prop_assert!(crate::intlin::matrix::is_zero_vec(&free));
                let all = ck.projection.mul_vec(&a.col(j)).unwrap();
                for (t, d) in ck.torsion.iter().enumerate() {
                    prop_assert!((&all[ck.free_rank + t] % d).is_zero());
                }
            }
        }
    }
}
