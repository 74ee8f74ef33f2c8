//! The support-function lattice SF(Δ) and its exact sequence
//! `0 → M → SF(Δ) → Pic(Δ) → 0`.
//!
//! A support function is linear on every cone and integral on the lattice
//! points of the support.  It is encoded by one functional `m_σ ∈ M` per
//! maximal cone, glued along shared rays; evaluating on the rays embeds
//! SF(Δ) into ℤ^{Δ(1)}, and all structure — the Picard group, the ray
//! functions `K_ρ` with their dilations `λ_ρ`, the per-cone functions
//! `h_σ`, the weight cone — is computed inside that embedding.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::intlin::{
    cokernel, hermite_rows, integer_kernel, integer_solve, lattice_membership, minimal_dilation,
    strict_cone_feasibility, Cokernel, Int, IntMatrix, Rat, RationalCone,
};

/// SF(Δ) with its ray-value basis and per-maximal-cone realizations.
#[derive(Clone, Debug)]
pub struct SFLattice {
    fan: Fan,
    /// Canonical basis of the ray-value image of SF(Δ); one row per basis
    /// element, one column per ray.
    basis: IntMatrix,
    /// `basis` transposed: basis vectors as columns, for lattice queries.
    basis_cols: IntMatrix,
    /// For each basis element, the functional `m_σ` on each maximal cone
    /// (rows follow `fan.max_cones()`).
    realizations: Vec<IntMatrix>,
}

impl SFLattice {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Rank of SF(Δ).
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn realizations(&self) -> &[IntMatrix] {
        &self.realizations
    }

    /// Ray values of the element with the given basis coordinates.
    pub fn value_vector(&self, coords: &[Int]) -> Result<Vec<Int>> {
        self.basis_cols.mul_vec(coords)
    }

    /// Basis coordinates of a ray-value vector, if it lies in SF(Δ).
    pub fn membership(&self, values: &[Int]) -> Result<Option<Vec<Int>>> {
        lattice_membership(&self.basis_cols, values)
    }
}

/// Computes SF(Δ) for a validated fan.
///
/// Solution tuples `(m_σ)_σ ∈ M^k` of the gluing system are mapped to ray
/// values; the image lattice is put into canonical form with preimages
/// tracked, so each basis element carries explicit functionals.
pub fn support_function_lattice(fan: &Fan) -> Result<SFLattice> {
    let n = fan.lattice_rank();
    let k = fan.max_cones().len();
    let nrays = fan.rays().len();

    let mut glue_rows: Vec<Vec<Int>> = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let shared: Vec<usize> =
                fan.max_cones()[i].intersection(&fan.max_cones()[j]).copied().collect();
            for rho in shared {
                let mut row = vec![Int::zero(); k * n];
                for c in 0..n {
                    row[i * n + c] = fan.ray(rho)[c].clone();
                    row[j * n + c] = -fan.ray(rho)[c].clone();
                }
                glue_rows.push(row);
            }
        }
    }
    let glue = IntMatrix::from_shape(glue_rows.len(), k * n, glue_rows.into_iter().flatten().collect())?;
    let kernel = integer_kernel(&glue);

    // Evaluation on rays: each ray reads the functional of one maximal cone
    // containing it (any choice agrees after gluing).
    let mut eval = IntMatrix::zero(nrays, k * n);
    for rho in 0..nrays {
        let home = fan
            .max_cones()
            .iter()
            .position(|c| c.contains(&rho))
            .ok_or_else(|| Error::Internal("ray not contained in any maximal cone".into()))?;
        for c in 0..n {
            *eval.entry_mut(rho, c + home * n) = fan.ray(rho)[c].clone();
        }
    }

    let images = eval.mul(&kernel)?.transpose();
    let (h, u) = hermite_rows(&images);
    let rank = (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let basis = h.select_rows(&(0..rank).collect::<Vec<_>>());

    let mut realizations = Vec::with_capacity(rank);
    for t in 0..rank {
        let mut stacked = vec![Int::zero(); k * n];
        for s in 0..kernel.cols() {
            let w = u.entry(t, s);
            if w.is_zero() {
                continue;
            }
            for (x, kv) in stacked.iter_mut().zip(kernel.col(s)) {
                *x += w * kv;
            }
        }
        let functionals = IntMatrix::from_shape(k, n, stacked)?;
        for (c, cone) in fan.max_cones().iter().enumerate() {
            for &rho in cone {
                let val: Int =
                    functionals.row(c).iter().zip(fan.ray(rho)).map(|(a, b)| a * b).sum();
                if &val != basis.entry(t, rho) {
                    return Err(Error::Internal(
                        "support-function realization disagrees with its ray values".into(),
                    ));
                }
            }
        }
        realizations.push(functionals);
    }

    let basis_cols = basis.transpose();
    Ok(SFLattice { fan: fan.clone(), basis, basis_cols, realizations })
}

/// The exact sequence data: Div as a matrix into SF coordinates and the
/// cokernel presentation of Pic(Δ).
#[derive(Clone, Debug)]
pub struct PicData {
    /// Columns are the SF-basis coordinates of `Div(e_i)`, `i < rank M`.
    pub div_matrix: IntMatrix,
    cok: Cokernel,
}

impl PicData {
    pub fn free_rank(&self) -> usize {
        self.cok.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.cok.torsion
    }

    pub fn torsion_free(&self) -> bool {
        self.cok.torsion.is_empty()
    }

    /// Projection SF(Δ) → Pic(Δ); rows `0..free_rank` are the free part,
    /// the remaining rows are read modulo the torsion invariants.
    pub fn projection(&self) -> &IntMatrix {
        &self.cok.projection
    }

    /// Free coordinates of the class of an SF element.
    pub fn free_class(&self, sf_coords: &[Int]) -> Result<Vec<Int>> {
        self.cok.free_class(sf_coords)
    }

    /// Whether the full class (free and torsion parts) vanishes.
    pub fn class_is_zero(&self, sf_coords: &[Int]) -> Result<bool> {
        let all = self.cok.projection.mul_vec(sf_coords)?;
        for (i, x) in all.iter().enumerate() {
            let ok = if i < self.cok.free_rank {
                x.is_zero()
            } else {
                (x % &self.cok.torsion[i - self.cok.free_rank]).is_zero()
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Replaces the free projection rows with another valid basis for the
    /// same quotient; `replacement` must be `U·P` for unimodular `U`.
    pub fn with_projection(&self, replacement: IntMatrix) -> Result<PicData> {
        if !self.torsion_free() {
            return Err(Error::AssumptionViolated(vec![
                "cannot re-basis a Picard group with torsion".to_string(),
            ]));
        }
        if replacement.rows() != self.free_rank()
            || replacement.cols() != self.cok.projection.cols()
        {
            return Err(Error::DimensionMismatch("projection replacement has wrong shape".into()));
        }
        if crate::intlin::unimodular_map_between(&self.cok.projection, &replacement)?.is_none() {
            return Err(Error::Input("supplied rows are not a basis of the Picard group".into()));
        }
        let cok = Cokernel {
            free_rank: self.cok.free_rank,
            torsion: vec![],
            projection: replacement,
        };
        Ok(PicData { div_matrix: self.div_matrix.clone(), cok })
    }
}

/// Builds the Div matrix and the Picard cokernel from SF(Δ).
pub fn picard(sf: &SFLattice) -> Result<PicData> {
    let n = sf.fan().lattice_rank();
    let rays = sf.fan().ray_matrix();
    let mut cols: Vec<Vec<Int>> = Vec::with_capacity(n);
    for i in 0..n {
        let target = rays.col(i);
        let coords = integer_solve(&sf.basis_cols, &target)?.ok_or_else(|| {
            Error::Internal("globally linear function escaped the support-function lattice".into())
        })?;
        cols.push(coords);
    }
    let div_matrix = if sf.rank() == 0 {
        IntMatrix::zero(0, n)
    } else {
        IntMatrix::from_cols(cols)?
    };
    let cok = cokernel(&div_matrix);
    Ok(PicData { div_matrix, cok })
}

/// The primitive support function concentrated on one ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFunction {
    pub ray: usize,
    /// Minimal positive value λ_ρ the lattice permits at the ray.
    pub dilation: Int,
    /// Coordinates of K_ρ in the SF basis.
    pub coords: Vec<Int>,
    /// Ray values: λ_ρ at `ray`, zero elsewhere.
    pub value_vector: Vec<Int>,
}

/// Computes K_ρ.  The fan must be simplicial so that every indicator
/// direction lies in the rational span of SF(Δ).
pub fn ray_function(sf: &SFLattice, rho: usize) -> Result<RayFunction> {
    if !sf.fan().is_simplicial() {
        return Err(Error::AssumptionViolated(vec![
            "ray functions are defined for simplicial fans".to_string(),
        ]));
    }
    let nrays = sf.fan().rays().len();
    let mut e = vec![Int::zero(); nrays];
    e[rho] = Int::one();
    let dilation = match minimal_dilation(&sf.basis_cols, &e) {
        Ok(d) => d,
        Err(Error::OutsideSpan) => {
            return Err(Error::Internal(
                "ray indicator escapes the span of SF for a simplicial fan".into(),
            ))
        }
        Err(e) => return Err(e),
    };
    let value_vector: Vec<Int> = e.iter().map(|x| x * &dilation).collect();
    let coords = sf
        .membership(&value_vector)?
        .ok_or_else(|| Error::Internal("minimal dilation produced a non-member".into()))?;
    Ok(RayFunction { ray: rho, dilation, coords, value_vector })
}

pub fn ray_functions(sf: &SFLattice) -> Result<Vec<RayFunction>> {
    (0..sf.fan().rays().len()).map(|rho| ray_function(sf, rho)).collect()
}

/// A support function vanishing exactly on a cone's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSupportFunction {
    pub cone: BTreeSet<usize>,
    pub coords: Vec<Int>,
    pub value_vector: Vec<Int>,
}

/// Finds `h_σ ∈ SF(Δ)` with `h_σ(n_ρ) = 0` exactly for `ρ ∈ σ(1)` and
/// `h_σ(n_ρ) > 0` otherwise.
///
/// Simplicial fans use the closed form `h_σ = Σ_{ρ ∉ σ(1)} K_ρ`; otherwise
/// an exact feasibility solve is scaled to integrality.
pub fn cone_support_function(sf: &SFLattice, cone: &BTreeSet<usize>) -> Result<ConeSupportFunction> {
    if !sf.fan().contains_cone(cone) {
        return Err(Error::ConeNotInFan(cone.iter().copied().collect()));
    }
    if sf.fan().is_simplicial() {
        let rank = sf.rank();
        let mut coords = vec![Int::zero(); rank];
        let mut value_vector = vec![Int::zero(); sf.fan().rays().len()];
        for (rho, slot) in value_vector.iter_mut().enumerate() {
            if cone.contains(&rho) {
                continue;
            }
            let k = ray_function(sf, rho)?;
            for (c, kc) in coords.iter_mut().zip(&k.coords) {
                *c += kc;
            }
            *slot = k.dilation;
        }
        return Ok(ConeSupportFunction { cone: cone.clone(), coords, value_vector });
    }

    let Some(point) = cone_function_feasible(sf, cone)? else {
        return Err(Error::NoSupportFunction(cone.iter().copied().collect()));
    };
    // Clear denominators; zeros and signs are preserved.
    let scale: Int = point
        .iter()
        .map(|q| q.denom().clone())
        .fold(Int::one(), num_integer::lcm);
    let coords: Vec<Int> = point.iter().map(|q| (q * &scale).to_integer()).collect();
    let value_vector = sf.value_vector(&coords)?;
    for (rho, v) in value_vector.iter().enumerate() {
        let ok = if cone.contains(&rho) { v.is_zero() } else { v.is_positive() };
        if !ok {
            return Err(Error::Internal("scaled support function violates its sign pattern".into()));
        }
    }
    Ok(ConeSupportFunction { cone: cone.clone(), coords, value_vector })
}

/// Rational point in SF coordinates vanishing on the cone's rays and
/// positive on the rest, if one exists.
fn cone_function_feasible(sf: &SFLattice, cone: &BTreeSet<usize>) -> Result<Option<Vec<Rat>>> {
    let values = &sf.basis_cols; // row per ray, column per SF coordinate
    let zero_rows: Vec<usize> = cone.iter().copied().collect();
    let pos_rows: Vec<usize> =
        (0..sf.fan().rays().len()).filter(|r| !cone.contains(r)).collect();
    let equalities = values.select_rows(&zero_rows);
    let nonneg = values.select_rows(&pos_rows);
    let strict: BTreeSet<usize> = (0..pos_rows.len()).collect();
    strict_cone_feasibility(&equalities, &nonneg, &strict)
}

/// Per-cone existence of the functions `h_σ`.
#[derive(Clone, Debug)]
pub struct EnoughCartier {
    /// One entry per cone of the fan, in cone order.
    pub per_cone: Vec<(BTreeSet<usize>, bool)>,
    pub all: bool,
}

impl EnoughCartier {
    pub fn flag_for(&self, cone: &BTreeSet<usize>) -> Option<bool> {
        self.per_cone.iter().find(|(c, _)| c == cone).map(|&(_, f)| f)
    }
}

/// Tests every cone for an `h_σ`; simplicial fans always pass.
pub fn enough_cartier(sf: &SFLattice) -> Result<EnoughCartier> {
    let simplicial = sf.fan().is_simplicial();
    let mut per_cone = Vec::new();
    let mut all = true;
    for cone in sf.fan().cones() {
        let flag = if simplicial {
            true
        } else {
            cone_function_feasible(sf, cone)?.is_some()
        };
        all &= flag;
        per_cone.push((cone.clone(), flag));
    }
    Ok(EnoughCartier { per_cone, all })
}

/// The cone in Pic_ℝ spanned by the variable degrees.
#[derive(Clone, Debug)]
pub struct WeightCone {
    pub cone: RationalCone,
    pub full_dimensional: bool,
    pub pointed: bool,
}

/// Builds the weight cone ω = cone(deg K_ρ) ⊆ Pic(Δ)_ℝ.
pub fn weight_cone(sf: &SFLattice, pic: &PicData, rayfns: &[RayFunction]) -> Result<WeightCone> {
    let mut violated = Vec::new();
    if !sf.fan().support_spans() {
        violated.push("support does not span the ambient lattice".to_string());
    }
    if !sf.fan().is_simplicial() {
        violated.push("fan is not simplicial".to_string());
    }
    if !pic.torsion_free() {
        violated.push("Picard group has torsion".to_string());
    }
    if !violated.is_empty() {
        return Err(Error::AssumptionViolated(violated));
    }
    let gens = rayfns
        .iter()
        .map(|k| pic.free_class(&k.coords))
        .collect::<Result<Vec<_>>>()?;
    let cone = RationalCone::from_generators(pic.free_rank(), gens)?;
    let full_dimensional = cone.dim() == pic.free_rank();
    let pointed = cone.is_pointed()?;
    Ok(WeightCone { cone, full_dimensional, pointed })
}

/// Irreducible elements of the monoid `{v ∈ Φ(SF) : v ≥ 0}` inside the box
/// `0 ≤ v_ρ ≤ bound`, by brute-force scan.  Any decomposition of a box
/// element stays inside the box, so box-irreducibility is monoid
/// irreducibility.
pub fn monoid_irreducibles_box(sf: &SFLattice, bound: u64) -> Result<Vec<Vec<Int>>> {
    let nrays = sf.fan().rays().len();
    if nrays == 0 || bound == 0 {
        return Ok(vec![]);
    }
    let mut members: Vec<Vec<Int>> = Vec::new();
    let mut current = vec![0u64; nrays];
    loop {
        let v: Vec<Int> = current.iter().map(|&x| Int::from(x)).collect();
        if current.iter().any(|&x| x > 0) && sf.membership(&v)?.is_some() {
            members.push(v);
        }
        // Odometer over the box.
        let mut pos = 0;
        loop {
            if pos == nrays {
                members.sort();
                let irreducible = members
                    .iter()
                    .filter(|v| {
                        !members.iter().any(|a| {
                            *a != **v
                                && a.iter().zip(*v).all(|(x, y)| x <= y)
                        })
                    })
                    .cloned()
                    .collect();
                return Ok(irreducible);
            }
            if current[pos] < bound {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
            pos += 1;
        }
    }
}
