//! Rational polyhedral fans: validation, builtin families, star subdivision,
//! and the simplicial-completeness enumeration.
//!
//! A fan is stored as an ordered list of primitive rays plus a face-closed
//! set of cones, each cone a set of ray indices.  Faces are recovered
//! exactly as the tight sets of facet normals, so every structural axiom is
//! checked with integer arithmetic.  The library targets desk-scale ambient
//! ranks (2–4); nothing breaks above that, but the polyhedral steps are not
//! tuned for it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{
    is_zero_vec, nonneg_combination, primitive, smith_decompose, Int, IntMatrix, RationalCone,
};

/// A validated fan: primitive rays and a face-closed cone set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    lattice_rank: usize,
    rays: Vec<Vec<Int>>,
    cones: BTreeSet<BTreeSet<usize>>,
    max_cones: Vec<BTreeSet<usize>>,
}

/// Recomputed structural flags and counts for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub lattice_rank: usize,
    pub ray_count: usize,
    pub cone_count: usize,
    pub max_cone_count: usize,
    pub support_spans: bool,
    pub simplicial: bool,
    pub smooth: bool,
    /// `None` means "unknown" (high-dimensional fan without facet pairing).
    pub complete: Option<bool>,
    pub assumption_violations: Vec<String>,
}

/// Result of the simplicial-completeness enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCompleteness {
    pub complete: bool,
    /// Independent ray subsets that are not cones of the fan, in
    /// lexicographic order.
    pub missing: Vec<BTreeSet<usize>>,
}

impl Fan {
    /// Validates raw fan data and completes the face closure.  Every violated
    /// axiom is reported, not just the first.
    pub fn validate(
        lattice_rank: usize,
        rays: Vec<Vec<Int>>,
        cones: Vec<BTreeSet<usize>>,
    ) -> Result<Fan> {
        let mut violations: Vec<String> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != lattice_rank {
                violations.push(format!(
                    "ray {i} has {} coordinates, expected lattice rank {lattice_rank}",
                    r.len()
                ));
            } else if is_zero_vec(r) {
                violations.push(format!("ray {i} is zero"));
            } else if &primitive(r) != r {
                violations.push(format!("ray {i} {} is not primitive", fmt_vec(r)));
            }
        }
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                if rays[i] == rays[j] {
                    violations.push(format!("rays {i} and {j} coincide"));
                }
            }
        }
        let mut seeds: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for c in &cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                violations.push(format!("cone {} references missing ray {bad}", fmt_cone(c)));
            } else {
                seeds.insert(c.clone());
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidFan(violations));
        }

        // Geometric checks and face closure per seed cone.
        let mut all_cones: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        all_cones.insert(BTreeSet::new());
        let mut geometry: BTreeMap<BTreeSet<usize>, RationalCone> = BTreeMap::new();
        for c in &seeds {
            let geo = cone_geometry(lattice_rank, &rays, c)?;
            if !geo.is_pointed()? {
                violations.push(format!("cone {} is not strongly convex", fmt_cone(c)));
                continue;
            }
            let idx: Vec<usize> = c.iter().copied().collect();
            for (pos, &i) in idx.iter().enumerate() {
                let others: Vec<Vec<Int>> = idx
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != pos)
                    .map(|(_, &j)| rays[j].clone())
                    .collect();
                if nonneg_combination(&others, &rays[i]).is_some() {
                    violations.push(format!("cone {}: ray {i} is not extreme", fmt_cone(c)));
                }
            }
            for face in face_closure(&geo, &idx, c) {
                all_cones.insert(face);
            }
            geometry.insert(c.clone(), geo);
        }
        if !violations.is_empty() {
            return Err(Error::InvalidFan(violations));
        }

        let max_cones = inclusion_maximal(&all_cones);
        for (a, ga) in geometry.iter().filter(|(c, _)| max_cones.contains(c)) {
            for (b, gb) in geometry.iter().filter(|(c, _)| max_cones.contains(c)) {
                if a >= b {
                    continue;
                }
                let common: BTreeSet<usize> = a.intersection(b).copied().collect();
                let meet = ga.intersect(gb)?;
                let common_geo = cone_geometry(lattice_rank, &rays, &common)?;
                if !meet.equals(&common_geo) || !all_cones.contains(&common) {
                    violations.push(format!(
                        "cones {} and {} do not intersect in a common face",
                        fmt_cone(a),
                        fmt_cone(b)
                    ));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidFan(violations));
        }

        Ok(Fan { lattice_rank, rays, cones: all_cones, max_cones })
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[Int] {
        &self.rays[i]
    }

    /// All cones, including every face and the zero cone.
    pub fn cones(&self) -> &BTreeSet<BTreeSet<usize>> {
        &self.cones
    }

    /// Inclusion-maximal cones, ascending in set order.
    pub fn max_cones(&self) -> &[BTreeSet<usize>] {
        &self.max_cones
    }

    pub fn contains_cone(&self, cone: &BTreeSet<usize>) -> bool {
        self.cones.contains(cone)
    }

    /// Ray matrix with one row per ray.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_shape(
            self.rays.len(),
            self.lattice_rank,
            self.rays.iter().flatten().cloned().collect(),
        )
        .expect("rays have lattice_rank coordinates")
    }

    pub fn cone_geometry(&self, cone: &BTreeSet<usize>) -> Result<RationalCone> {
        if !self.contains_cone(cone) {
            return Err(Error::ConeNotInFan(cone.iter().copied().collect()));
        }
        cone_geometry(self.lattice_rank, &self.rays, cone)
    }

    pub fn cone_dim(&self, cone: &BTreeSet<usize>) -> usize {
        let idx: Vec<usize> = cone.iter().copied().collect();
        self.ray_matrix().select_rows(&idx).rank()
    }

    pub fn support_spans(&self) -> bool {
        self.ray_matrix().rank() == self.lattice_rank
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_dim(c) == c.len())
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let idx: Vec<usize> = c.iter().copied().collect();
            let m = self.ray_matrix().select_rows(&idx);
            let sd = smith_decompose(&m);
            sd.rank == c.len() && sd.invariant_factors().iter().all(|f| f.is_one())
        })
    }

    /// Exact completeness for ranks ≤ 2; facet-pairing certificate above.
    pub fn completeness(&self) -> Option<bool> {
        match self.lattice_rank {
            0 => Some(true),
            1 => {
                let has = |x: i64| self.rays.iter().any(|r| r[0] == Int::from(x));
                Some(has(1) && has(-1))
            }
            2 => Some(self.complete_surface()),
            _ => self.facet_pairing(),
        }
    }

    fn complete_surface(&self) -> bool {
        let n = self.rays.len();
        if n < 3 {
            return false;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| angular_cmp(&self.rays[a], &self.rays[b]));
        let mut expected: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for k in 0..n {
            let i = order[k];
            let j = order[(k + 1) % n];
            if !cross2(&self.rays[i], &self.rays[j]).is_positive() {
                return false;
            }
            expected.insert([i, j].into_iter().collect());
        }
        let maximal: BTreeSet<BTreeSet<usize>> = self.max_cones.iter().cloned().collect();
        maximal == expected
    }

    /// In rank ≥ 3: certainly incomplete when no cone is full-dimensional;
    /// certainly complete when every facet of every maximal cone lies in
    /// exactly two maximal cones; otherwise unknown.
    fn facet_pairing(&self) -> Option<bool> {
        if self.max_cones.iter().all(|c| self.cone_dim(c) < self.lattice_rank) {
            return Some(false);
        }
        if self.max_cones.iter().any(|c| self.cone_dim(c) != self.lattice_rank) {
            return None;
        }
        let mut facets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for c in &self.cones {
            if self.cone_dim(c) + 1 == self.lattice_rank {
                for m in &self.max_cones {
                    if c.is_subset(m) {
                        facets.insert(c.clone());
                        break;
                    }
                }
            }
        }
        let paired = facets.iter().all(|f| {
            self.max_cones.iter().filter(|m| f.is_subset(m)).count() == 2
        });
        if paired {
            Some(true)
        } else {
            None
        }
    }

    pub fn report(&self) -> FanReport {
        let support_spans = self.support_spans();
        let mut assumption_violations = Vec::new();
        if !support_spans {
            assumption_violations.push("support does not span the ambient lattice".to_string());
        }
        FanReport {
            lattice_rank: self.lattice_rank,
            ray_count: self.rays.len(),
            cone_count: self.cones.len(),
            max_cone_count: self.max_cones.len(),
            support_spans,
            simplicial: self.is_simplicial(),
            smooth: self.is_smooth(),
            complete: self.completeness(),
            assumption_violations,
        }
    }

    /// All ray-index subsets with linearly independent rays, in lexicographic
    /// order; the empty set is always first.
    pub fn independent_subsets(&self) -> Vec<BTreeSet<usize>> {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        self.independent_rec(0, &mut current, &mut out);
        out
    }

    fn independent_rec(&self, start: usize, current: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        out.push(current.iter().copied().collect());
        if current.len() == self.lattice_rank {
            return;
        }
        for i in start..self.rays.len() {
            current.push(i);
            let m = self.ray_matrix().select_rows(current);
            if m.rank() == current.len() {
                self.independent_rec(i + 1, current, out);
            }
            current.pop();
        }
    }

    /// Whether every independent ray subset spans a cone of the fan.
    pub fn is_simplicially_complete(&self) -> Result<SimplicialCompleteness> {
        if !self.is_simplicial() {
            return Err(Error::AssumptionViolated(vec![
                "simplicial completeness is only defined for simplicial fans".to_string(),
            ]));
        }
        let missing: Vec<BTreeSet<usize>> = self
            .independent_subsets()
            .into_iter()
            .filter(|s| !self.cones.contains(s))
            .collect();
        Ok(SimplicialCompleteness { complete: missing.is_empty(), missing })
    }

    /// Blow-up of a surface fan at a smooth 2-cone: the cone is replaced by
    /// its two halves along the sum of its primitive generators.
    pub fn star_subdivision(&self, cone: &BTreeSet<usize>) -> Result<Fan> {
        if self.lattice_rank != 2 {
            return Err(Error::SubdivisionUnsupported(
                "star subdivision is implemented for 2-dimensional fans".to_string(),
            ));
        }
        if !self.contains_cone(cone) {
            return Err(Error::ConeNotInFan(cone.iter().copied().collect()));
        }
        let idx: Vec<usize> = cone.iter().copied().collect();
        if idx.len() != 2 {
            return Err(Error::SubdivisionUnsupported(format!(
                "cone {} is not 2-dimensional",
                fmt_cone(cone)
            )));
        }
        let det = cross2(&self.rays[idx[0]], &self.rays[idx[1]]);
        if !det.abs().is_one() {
            return Err(Error::SubdivisionUnsupported(format!(
                "cone {} is not smooth",
                fmt_cone(cone)
            )));
        }
        let new_ray: Vec<Int> = self.rays[idx[0]]
            .iter()
            .zip(&self.rays[idx[1]])
            .map(|(a, b)| a + b)
            .collect();
        let mut rays = self.rays.clone();
        let new_index = rays.len();
        rays.push(new_ray);
        let mut cones: Vec<BTreeSet<usize>> = Vec::new();
        for c in &self.max_cones {
            if c == cone {
                cones.push([idx[0], new_index].into_iter().collect());
                cones.push([idx[1], new_index].into_iter().collect());
            } else {
                cones.push(c.clone());
            }
        }
        Fan::validate(self.lattice_rank, rays, cones)
    }

    /// Applies a unimodular change of basis to every ray.
    pub fn apply_unimodular(&self, u: &IntMatrix) -> Result<Fan> {
        if u.rows() != self.lattice_rank || u.cols() != self.lattice_rank {
            return Err(Error::DimensionMismatch("basis change has wrong shape".into()));
        }
        if !u.det()?.abs().is_one() {
            return Err(Error::Input("basis change matrix is not unimodular".into()));
        }
        let rays = self.rays.iter().map(|r| u.mul_vec(r)).collect::<Result<Vec<_>>>()?;
        Fan::validate(self.lattice_rank, rays, self.max_cones.to_vec())
    }
}

fn cone_geometry(rank: usize, rays: &[Vec<Int>], cone: &BTreeSet<usize>) -> Result<RationalCone> {
    let gens: Vec<Vec<Int>> = cone.iter().map(|&i| rays[i].clone()).collect();
    RationalCone::from_generators(rank, gens)
}

/// Faces of a cone as tight sets of facet normals, closed under
/// intersection; global ray indices throughout.
fn face_closure(
    geo: &RationalCone,
    idx: &[usize],
    cone: &BTreeSet<usize>,
) -> BTreeSet<BTreeSet<usize>> {
    let tights: Vec<BTreeSet<usize>> = geo
        .facet_normals()
        .iter()
        .map(|n| geo.tight_generators(n).into_iter().map(|g| idx[g]).collect())
        .collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    faces.insert(cone.clone());
    loop {
        let mut fresh: Vec<BTreeSet<usize>> = Vec::new();
        for f in &faces {
            for t in &tights {
                let meet: BTreeSet<usize> = f.intersection(t).copied().collect();
                if !faces.contains(&meet) {
                    fresh.push(meet);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        faces.extend(fresh);
    }
    faces.insert(BTreeSet::new());
    faces
}

fn inclusion_maximal(cones: &BTreeSet<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    cones
        .iter()
        .filter(|c| !cones.iter().any(|d| *c != d && c.is_subset(d)))
        .cloned()
        .collect()
}

fn cross2(a: &[Int], b: &[Int]) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Counterclockwise angular order starting at the positive x-axis; exact.
fn angular_cmp(a: &[Int], b: &[Int]) -> Ordering {
    let half = |v: &[Int]| -> u8 {
        let upper = v[1].is_positive() || (v[1].is_zero() && v[0].is_positive());
        u8::from(!upper)
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross2(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

fn fmt_vec(v: &[Int]) -> String {
    let inner: Vec<String> = v.iter().map(Int::to_string).collect();
    format!("({})", inner.join(","))
}

fn fmt_cone(c: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = c.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// On-disk fan format; `cones` lists maximal cones, faces are recovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn from_json(text: &str) -> Result<FanFile> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("fan file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fan files serialize")
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let rays = self.rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let cones = self.cones.iter().map(|c| c.iter().copied().collect()).collect();
        Fan::validate(self.lattice_rank, rays, cones)
    }

    pub fn from_fan(fan: &Fan, name: Option<String>) -> Result<FanFile> {
        let rays = fan
            .rays()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::Input("ray coordinate exceeds i64".into())))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FanFile {
            name,
            lattice_rank: fan.lattice_rank(),
            rays,
            cones: fan.max_cones().iter().map(|c| c.iter().copied().collect()).collect(),
        })
    }
}

/// Builds a named fan.  Accepted specs: `p<n>` (projective space),
/// `hirzebruch:<r>` or `h<r>`, `wps:<q0,q1,...>` (weighted projective),
/// `product:<a>x<b>` (product of two other builtins), `displaced-cube`.
pub fn builtin_fan(spec: &str) -> Result<Fan> {
    let spec = spec.trim().to_ascii_lowercase();
    if spec == "displaced-cube" {
        return displaced_cube();
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let (a, b) = rest
            .split_once('x')
            .ok_or_else(|| Error::UnknownBuiltin(format!("product wants <a>x<b>, got {rest}")))?;
        return product_fan(&builtin_fan(a)?, &builtin_fan(b)?);
    }
    if let Some(rest) = spec.strip_prefix("wps:") {
        let weights = parse_numbers(rest)?;
        return weighted_projective(&weights);
    }
    if let Some(rest) = spec.strip_prefix("hirzebruch:").or_else(|| spec.strip_prefix("h")) {
        if let Ok(r) = rest.parse::<i64>() {
            if r >= 0 {
                return hirzebruch(r);
            }
        }
        return Err(Error::UnknownBuiltin(format!("bad Hirzebruch parameter {rest}")));
    }
    if let Some(rest) = spec.strip_prefix("p:").or_else(|| spec.strip_prefix("p")) {
        if let Ok(n) = rest.parse::<usize>() {
            if n >= 1 {
                return projective_space(n);
            }
        }
        return Err(Error::UnknownBuiltin(format!("bad projective dimension {rest}")));
    }
    Err(Error::UnknownBuiltin(spec))
}

fn projective_space(n: usize) -> Result<Fan> {
    let weights = vec![Int::from(1); n + 1];
    weighted_projective(&weights)
}

/// Standard fan of P(q_0,…,q_n): rays are the images of the unit vectors in
/// ℤ^{n+1}/ℤq, listed e-block first and the dependent ray last; maximal
/// cones are all n-element ray subsets.
fn weighted_projective(weights: &[Int]) -> Result<Fan> {
    let n = weights.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::InvalidWeights("need at least two weights".into()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let g = weights.iter().fold(Int::zero(), |a, w| num_integer::gcd(a, w.clone()));
    if !g.is_one() {
        return Err(Error::InvalidWeights("weights must have gcd 1".into()));
    }
    // Quotient projection π : ℤ^{n+1} → ℤ^n with π(q) = 0.
    let projection: IntMatrix = if weights[0].is_one() {
        // π(a) = (a_i − q_i a_0): sends e_0 ↦ −(q_1,…,q_n) and e_i ↦ e_i.
        let mut p = IntMatrix::zero(n, n + 1);
        for i in 0..n {
            *p.entry_mut(i, 0) = -weights[i + 1].clone();
            *p.entry_mut(i, i + 1) = Int::from(1);
        }
        p
    } else {
        // General case: U·q = ±e_1 for unimodular U; drop the first row.
        let col = IntMatrix::from_cols(vec![weights.to_vec()])?;
        let sd = smith_decompose(&col);
        let rows: Vec<usize> = (1..=n).collect();
        sd.u.select_rows(&rows)
    };
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for i in 1..=n {
        rays.push(primitive(&projection.col(i)));
    }
    rays.push(primitive(&projection.col(0)));
    let all: BTreeSet<usize> = (0..=n).collect();
    let cones: Vec<BTreeSet<usize>> = all
        .iter()
        .map(|&skip| all.iter().copied().filter(|&i| i != skip).collect())
        .collect();
    Fan::validate(n, rays, cones)
}

fn hirzebruch(r: i64) -> Result<Fan> {
    let rays = vec![
        vec![Int::from(1), Int::from(0)],
        vec![Int::from(0), Int::from(1)],
        vec![Int::from(-1), Int::from(r)],
        vec![Int::from(0), Int::from(-1)],
    ];
    let cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    Fan::validate(2, rays, cones)
}

/// Complete non-simplicial 3-D fan: the six face cones of the cube with the
/// vertex (1,1,1) displaced to (1,2,3).
fn displaced_cube() -> Result<Fan> {
    let rays: Vec<Vec<Int>> = [
        [1, 2, 3],
        [1, 1, -1],
        [1, -1, 1],
        [1, -1, -1],
        [-1, 1, 1],
        [-1, 1, -1],
        [-1, -1, 1],
        [-1, -1, -1],
    ]
    .iter()
    .map(|r| r.iter().map(|&x| Int::from(x)).collect())
    .collect();
    let cones = [
        [0usize, 1, 2, 3], // x = +1 side
        [4, 5, 6, 7],
        [0, 1, 4, 5], // y = +1 side
        [2, 3, 6, 7],
        [0, 2, 4, 6], // z = +1 side
        [1, 3, 5, 7],
    ]
    .iter()
    .map(|c| c.iter().copied().collect())
    .collect();
    Fan::validate(3, rays, cones)
}

fn product_fan(a: &Fan, b: &Fan) -> Result<Fan> {
    let rank = a.lattice_rank() + b.lattice_rank();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for r in a.rays() {
        let mut v = r.clone();
        v.extend(vec![Int::zero(); b.lattice_rank()]);
        rays.push(v);
    }
    for s in b.rays() {
        let mut v = vec![Int::zero(); a.lattice_rank()];
        v.extend(s.iter().cloned());
        rays.push(v);
    }
    let offset = a.rays().len();
    let mut cones: Vec<BTreeSet<usize>> = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c: BTreeSet<usize> = ca.clone();
            c.extend(cb.iter().map(|&i| i + offset));
            cones.push(c);
        }
    }
    Fan::validate(rank, rays, cones)
}

fn parse_numbers(text: &str) -> Result<Vec<Int>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map(Int::from)
                .map_err(|_| Error::InvalidWeights(format!("bad weight {t}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vec<Int> {
        x.iter().map(|&a| Int::from(a)).collect()
    }

    fn cone(idx: &[usize]) -> BTreeSet<usize> {
        idx.iter().copied().collect()
    }

    fn fan2(rays: &[[i64; 2]], cones: &[&[usize]]) -> Result<Fan> {
        Fan::validate(
            2,
            rays.iter().map(|r| v(r)).collect(),
            cones.iter().map(|c| c.iter().copied().collect()).collect(),
        )
    }

    #[test]
    fn p2_face_closure_has_seven_cones() {
        let fan = builtin_fan("p2").unwrap();
        assert_eq!(fan.rays(), &[v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])]);
        assert_eq!(fan.cones().len(), 7);
        assert_eq!(fan.max_cones().len(), 3);
        let report = fan.report();
        assert!(report.support_spans && report.simplicial && report.smooth);
        assert_eq!(report.complete, Some(true));
        assert!(report.assumption_violations.is_empty());
    }

    #[test]
    fn non_primitive_ray_is_rejected() {
        let err = fan2(&[[2, 0], [0, 1]], &[&[0, 1]]).unwrap_err();
        match err {
            Error::InvalidFan(list) => {
                assert!(list.iter().any(|m| m.contains("not primitive")), "{list:?}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn line_cone_is_rejected() {
        let err = fan2(&[[1, 0], [-1, 0]], &[&[0, 1]]).unwrap_err();
        match err {
            Error::InvalidFan(list) => {
                assert!(list.iter().any(|m| m.contains("strongly convex")), "{list:?}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn interior_ray_is_not_extreme() {
        let err = fan2(&[[1, 0], [0, 1], [1, 1]], &[&[0, 1, 2]]).unwrap_err();
        match err {
            Error::InvalidFan(list) => {
                assert!(list.iter().any(|m| m.contains("not extreme")), "{list:?}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        // The ray (1,1) pierces the interior of the quadrant cone.
        let err = fan2(&[[1, 0], [0, 1], [1, 1]], &[&[0, 1], &[2]]).unwrap_err();
        match err {
            Error::InvalidFan(list) => {
                assert!(list.iter().any(|m| m.contains("common face")), "{list:?}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let fan = builtin_fan("p2").unwrap();
        let again = Fan::validate(
            2,
            fan.rays().to_vec(),
            fan.cones().iter().cloned().collect(),
        )
        .unwrap();
        assert_eq!(fan, again);
    }

    #[test]
    fn hirzebruch_fans() {
        let h0 = builtin_fan("hirzebruch:0").unwrap();
        assert_eq!(h0.rays(), &[v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(h0.max_cones().len(), 4);
        assert_eq!(h0.report().complete, Some(true));
        assert!(h0.is_smooth());

        let h2 = builtin_fan("h2").unwrap();
        assert_eq!(h2.rays()[2], v(&[-1, 2]));
        assert!(h2.is_smooth());
    }

    #[test]
    fn weighted_projective_fan() {
        let fan = builtin_fan("wps:1,1,2").unwrap();
        assert_eq!(fan.rays(), &[v(&[1, 0]), v(&[0, 1]), v(&[-1, -2])]);
        assert_eq!(fan.max_cones().len(), 3);
        assert_eq!(fan.report().complete, Some(true));
        assert!(fan.is_simplicial());
        assert!(!fan.is_smooth());
    }

    #[test]
    fn weighted_projective_rejects_bad_weights() {
        assert!(matches!(builtin_fan("wps:2,4"), Err(Error::InvalidWeights(_))));
        assert!(matches!(builtin_fan("wps:0,1"), Err(Error::InvalidWeights(_))));
    }

    #[test]
    fn general_weight_fan_satisfies_the_weight_relation() {
        let fan = builtin_fan("wps:2,3,5").unwrap();
        // Rays are listed (e-block, dependent); weights follow them as
        // (q_1, q_2, q_0).  The defining relation Σ q_i n_i = 0 must hold.
        let w = [Int::from(3), Int::from(5), Int::from(2)];
        for c in 0..2 {
            let s: Int = fan.rays().iter().zip(&w).map(|(r, q)| &r[c] * q).sum();
            assert!(s.is_zero());
        }
        assert_eq!(fan.report().complete, Some(true));
    }

    #[test]
    fn displaced_cube_is_complete_and_not_simplicial() {
        let fan = builtin_fan("displaced-cube").unwrap();
        assert_eq!(fan.rays().len(), 8);
        assert_eq!(fan.max_cones().len(), 6);
        assert!(!fan.is_simplicial());
        assert!(!fan.is_smooth());
        assert_eq!(fan.completeness(), Some(true));
    }

    #[test]
    fn product_of_lines() {
        let fan = builtin_fan("product:p1xp1").unwrap();
        assert_eq!(fan.rays().len(), 4);
        assert_eq!(fan.max_cones().len(), 4);
        assert_eq!(fan.report().complete, Some(true));
        assert!(fan.is_smooth());
    }

    #[test]
    fn projective_line_and_space() {
        let p1 = builtin_fan("p1").unwrap();
        assert_eq!(p1.rays(), &[v(&[1]), v(&[-1])]);
        assert_eq!(p1.completeness(), Some(true));

        let p3 = builtin_fan("p3").unwrap();
        assert_eq!(p3.rays().len(), 4);
        assert_eq!(p3.max_cones().len(), 4);
        assert!(p3.is_smooth());
        assert_eq!(p3.completeness(), Some(true));
    }

    #[test]
    fn unknown_builtins_error() {
        assert!(matches!(builtin_fan("q7"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(builtin_fan("hirzebruch:-1"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn blowup_of_p2() {
        let fan = builtin_fan("p2").unwrap();
        let up = fan.star_subdivision(&cone(&[0, 1])).unwrap();
        assert_eq!(up.rays().len(), 4);
        assert_eq!(up.rays()[3], v(&[1, 1]));
        assert_eq!(up.max_cones().len(), 4);
        assert_eq!(up.report().complete, Some(true));
        assert!(up.is_smooth());
    }

    #[test]
    fn blowup_of_h1() {
        let fan = builtin_fan("hirzebruch:1").unwrap();
        let up = fan.star_subdivision(&cone(&[0, 1])).unwrap();
        assert_eq!(up.rays().len(), 5);
        assert_eq!(up.max_cones().len(), 5);
    }

    #[test]
    fn blowup_rejects_singular_and_missing_cones() {
        let wps = builtin_fan("wps:1,1,2").unwrap();
        assert!(matches!(
            wps.star_subdivision(&cone(&[0, 2])),
            Err(Error::SubdivisionUnsupported(_))
        ));
        let p2 = builtin_fan("p2").unwrap();
        assert!(matches!(p2.star_subdivision(&cone(&[0, 1, 2])), Err(Error::ConeNotInFan(_))));
        let p3 = builtin_fan("p3").unwrap();
        assert!(matches!(
            p3.star_subdivision(&cone(&[0, 1])),
            Err(Error::SubdivisionUnsupported(_))
        ));
    }

    #[test]
    fn independent_subsets_counts() {
        assert_eq!(builtin_fan("p2").unwrap().independent_subsets().len(), 7);
        assert_eq!(builtin_fan("hirzebruch:0").unwrap().independent_subsets().len(), 9);
        let single = Fan::validate(2, vec![v(&[1, 0])], vec![cone(&[0])]).unwrap();
        assert_eq!(single.independent_subsets().len(), 2);
    }

    #[test]
    fn h0_excludes_antiparallel_pairs() {
        let subs = builtin_fan("hirzebruch:0").unwrap().independent_subsets();
        assert!(!subs.contains(&cone(&[0, 2])));
        assert!(!subs.contains(&cone(&[1, 3])));
        assert!(subs.contains(&cone(&[0, 1])));
    }

    #[test]
    fn simplicial_completeness_verdicts() {
        let p2 = builtin_fan("p2").unwrap().is_simplicially_complete().unwrap();
        assert!(p2.complete);
        assert!(p2.missing.is_empty());

        for r in 1..=3 {
            let h = builtin_fan(&format!("hirzebruch:{r}")).unwrap();
            let sc = h.is_simplicially_complete().unwrap();
            assert!(!sc.complete);
            assert_eq!(sc.missing, vec![cone(&[0, 2])], "H_{r}");
        }

        let h0 = builtin_fan("hirzebruch:0").unwrap().is_simplicially_complete().unwrap();
        assert!(h0.complete);

        assert!(builtin_fan("displaced-cube").unwrap().is_simplicially_complete().is_err());
    }

    #[test]
    fn incomplete_fans_are_detected() {
        let partial = fan2(&[[1, 0], [0, 1], [-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        assert_eq!(partial.completeness(), Some(false));
        let single = fan2(&[[1, 0], [0, 1]], &[&[0, 1]]).unwrap();
        assert_eq!(single.completeness(), Some(false));
    }

    #[test]
    fn fan_file_round_trip() {
        let fan = builtin_fan("hirzebruch:1").unwrap();
        let file = FanFile::from_fan(&fan, Some("h1".into())).unwrap();
        let back = file.to_fan().unwrap();
        assert_eq!(fan, back);
        let text = file.to_json();
        let reparsed = FanFile::from_json(&text).unwrap();
        assert_eq!(file, reparsed);
    }

    #[test]
    fn malformed_fan_file_names_the_field() {
        let err = FanFile::from_json(r#"{"lattice_rank": 2, "cones": []}"#).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("rays"), "{msg}");
    }

    #[test]
    fn angular_sort_is_counterclockwise() {
        let mut rays = vec![v(&[0, -1]), v(&[-1, 2]), v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])];
        rays.sort_by(|a, b| angular_cmp(a, b));
        assert_eq!(rays, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 2]), v(&[-1, -1]), v(&[0, -1])]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Simplicial completeness is a lattice-independent notion: any
        /// unimodular change of basis preserves the verdict and the missing
        /// sets (ray indices are unchanged).
        #[test]
        fn completeness_is_basis_independent(
            shear_a in -3i64..=3,
            shear_b in -3i64..=3,
            swap in any::<bool>(),
            which in 0usize..4,
        ) {
            let mut u = IntMatrix::from_i64(&[&[1, shear_a], &[0, 1]]);
            let lower = IntMatrix::from_i64(&[&[1, 0], &[shear_b, 1]]);
            u = u.mul(&lower).unwrap();
            if swap {
                u = u.mul(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
            }
            let name = ["p2", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2"][which];
            let fan = builtin_fan(name).unwrap();
            let moved = fan.apply_unimodular(&u).unwrap();
            let a = fan.is_simplicially_complete().unwrap();
            let b = moved.is_simplicially_complete().unwrap();
            prop_assert_eq!(a.complete, b.complete);
            prop_assert_eq!(a.missing, b.missing);
        }

        /// Star subdivision preserves validity, completeness, smoothness.
        #[test]
        fn blowups_stay_smooth_and_complete(which in 0usize..3, pick in 0usize..4) {
            let name = ["p2", "hirzebruch:0", "hirzebruch:1"][which];
            let fan = builtin_fan(name).unwrap();
            let target = fan.max_cones()[pick % fan.max_cones().len()].clone();
            let up = fan.star_subdivision(&target).unwrap();
            prop_assert!(up.is_smooth());
            prop_assert_eq!(up.report().complete, Some(true));
            prop_assert_eq!(up.rays().len(), fan.rays().len() + 1);
        }
    }
}
