//! Comparison of the two Proj constructions attached to a fan.
//!
//! The toric space carries one chart per cone of Δ; the multihomogeneous
//! Proj of the graded model carries one chart per independent ray subset.
//! The first atlas embeds into the second, and the embedding is an
//! isomorphism exactly when no independent subset is missing from Δ.
//! Missing subsets come with witness ideals — explicit prime ideals of
//! the model that every toric chart function vanishes on.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxring::{chart, chart_of_cone, cox_model, Chart, CoxModel, ModelKind, Monomial};
use crate::error::{Error, Result};
use crate::fan::{builtin_fan, Fan, FanReport};
use crate::intlin::IntMatrix;
use crate::suppfun::{enough_cartier, picard, support_function_lattice};

/// Status of the hypotheses the isomorphism criterion needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssumptionStatus {
    pub support_spans: bool,
    pub simplicial: bool,
    pub pic_torsion_free: bool,
    pub enough_cartier: bool,
}

impl AssumptionStatus {
    pub fn all_hold(&self) -> bool {
        self.support_spans && self.simplicial && self.pic_torsion_free && self.enough_cartier
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.support_spans {
            out.push("support does not span the ambient lattice".to_string());
        }
        if !self.simplicial {
            out.push("fan is not simplicial".to_string());
        }
        if !self.pic_torsion_free {
            out.push("Picard group has torsion".to_string());
        }
        if !self.enough_cartier {
            out.push("some cone admits no support function vanishing exactly on it".to_string());
        }
        out
    }
}

/// Outcome of the comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Isomorphism,
    NotIsomorphism,
    /// The criterion is only established under the assumptions; on fans
    /// violating them no verdict is claimed.
    AssumptionViolated(Vec<String>),
}

/// Everything the comparison produced.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub fan_report: FanReport,
    pub assumptions: AssumptionStatus,
    pub pic_rank: usize,
    /// Free rows of the Picard projection in use, when a model was built.
    pub pic_basis: Option<IntMatrix>,
    pub verdict: Verdict,
    pub tproj_atlas: Vec<Chart>,
    pub projmh_atlas: Vec<Chart>,
    pub missing_cones: Vec<BTreeSet<usize>>,
    pub witnesses: Vec<WitnessIdeal>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    /// `None` when the assumptions failed and no verdict is claimed.
    pub fn is_isomorphism(&self) -> Option<bool> {
        match &self.verdict {
            Verdict::Isomorphism => Some(true),
            Verdict::NotIsomorphism => Some(false),
            Verdict::AssumptionViolated(_) => None,
        }
    }
}

/// A point of the multihomogeneous Proj outside the toric image: the prime
/// ideal generated by the variables of a missing cone, certified.
#[derive(Clone, Debug)]
pub struct WitnessIdeal {
    /// The missing independent ray set σ.
    pub cone: BTreeSet<usize>,
    /// Ray indices ρ of the ideal generators x_ρ — exactly σ itself.
    pub generators: BTreeSet<usize>,
    /// The chart of the complementary monomial, which contains the point.
    pub extra_chart: Chart,
    /// For every cone τ of Δ, a generator dividing τ's chart monomial.
    pub certificate: Vec<CoveringWitness>,
}

/// One step of the covering certificate: the toric chart of `cone` has a
/// monomial divisible by `x_generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringWitness {
    pub cone: BTreeSet<usize>,
    pub generator: usize,
}

/// The toric atlas: one chart per cone of Δ, in cone order.
pub fn tproj_atlas(model: &CoxModel) -> Result<Vec<Chart>> {
    model.fan().cones().iter().map(|sigma| chart_of_cone(model, sigma)).collect()
}

/// The multihomogeneous atlas: one chart per independent ray subset,
/// in subset order.
pub fn projmh_atlas(model: &CoxModel) -> Result<Vec<Chart>> {
    let subsets = model.fan().independent_subsets();
    let mut charts = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let support: BTreeSet<usize> =
            (0..model.nvars()).filter(|rho| !s.contains(rho)).collect();
        let c = chart(model, &Monomial::from_support(model.nvars(), &support))?;
        if c.complement() != s {
            return Err(Error::Internal("atlas chart key differs from its subset".into()));
        }
        charts.push(c);
    }
    Ok(charts)
}

/// Builds the witness ideal for a missing independent subset.
pub fn witness_ideal(model: &CoxModel, sigma: &BTreeSet<usize>) -> Result<WitnessIdeal> {
    if model.fan().contains_cone(sigma) {
        return Err(Error::ConeInFan(sigma.iter().copied().collect()));
    }
    let idx: Vec<usize> = sigma.iter().copied().collect();
    let sub = model.fan().ray_matrix().select_rows(&idx);
    if sub.rank() != sigma.len() {
        return Err(Error::Input(
            "witness cones must have linearly independent rays".to_string(),
        ));
    }

    let support: BTreeSet<usize> =
        (0..model.nvars()).filter(|rho| !sigma.contains(rho)).collect();
    let extra_chart = chart(model, &Monomial::from_support(model.nvars(), &support))?;
    if extra_chart.support().intersection(sigma).next().is_some() {
        return Err(Error::Internal("extra chart monomial meets the ideal generators".into()));
    }

    let mut certificate = Vec::new();
    for tau in model.fan().cones() {
        // τ's chart monomial is ∏_{ρ∉τ(1)} x_ρ; a generator divides it
        // exactly when some ray of σ avoids τ.
        let Some(&generator) = sigma.iter().find(|rho| !tau.contains(rho)) else {
            return Err(Error::Internal(
                "a fan cone absorbed the witness generators; the cone is not missing".into(),
            ));
        };
        certificate.push(CoveringWitness { cone: tau.clone(), generator });
    }

    Ok(WitnessIdeal { cone: sigma.clone(), generators: sigma.clone(), extra_chart, certificate })
}

/// Compares the two atlases of a built model.
pub fn compare(model: &CoxModel) -> Result<ComparisonReport> {
    let tp = tproj_atlas(model)?;
    let pm = projmh_atlas(model)?;

    let tp_keys: BTreeSet<BTreeSet<usize>> = tp.iter().map(|c| c.complement().clone()).collect();
    let pm_keys: BTreeSet<BTreeSet<usize>> = pm.iter().map(|c| c.complement().clone()).collect();
    if !tp_keys.is_subset(&pm_keys) {
        return Err(Error::Internal("toric atlas escapes the multihomogeneous atlas".into()));
    }

    let missing_cones: Vec<BTreeSet<usize>> = pm
        .iter()
        .map(|c| c.complement().clone())
        .filter(|s| !model.fan().contains_cone(s))
        .collect();
    let iso = missing_cones.is_empty();
    if iso != (tp_keys == pm_keys) {
        return Err(Error::Internal("atlas equality disagrees with the missing-cone scan".into()));
    }

    let witnesses =
        missing_cones.iter().map(|s| witness_ideal(model, s)).collect::<Result<Vec<_>>>()?;

    let mut notes = model.warnings().to_vec();
    if model.model_kind() == ModelKind::PaperModel {
        notes.push(
            "chart covering of the multihomogeneous Proj by monomial charts is assumed, \
             not verified, on a non-smooth fan"
                .to_string(),
        );
    }
    if model.pic().free_rank() == 0 {
        notes.push("Picard rank is 0: every monomial is relevant".to_string());
    }

    Ok(ComparisonReport {
        fan_report: model.fan().report(),
        assumptions: AssumptionStatus {
            support_spans: true,
            simplicial: true,
            pic_torsion_free: true,
            enough_cartier: true,
        },
        pic_rank: model.pic().free_rank(),
        pic_basis: Some(model.pic().projection().clone()),
        verdict: if iso { Verdict::Isomorphism } else { Verdict::NotIsomorphism },
        tproj_atlas: tp,
        projmh_atlas: pm,
        missing_cones,
        witnesses,
        notes,
    })
}

/// Compares a raw fan, downgrading to an assumption-violated verdict when
/// the criterion's hypotheses fail instead of erroring.
pub fn compare_fan(fan: &Fan) -> Result<ComparisonReport> {
    let sf = support_function_lattice(fan)?;
    let pic = picard(&sf)?;
    let ec = enough_cartier(&sf)?;
    let assumptions = AssumptionStatus {
        support_spans: fan.support_spans(),
        simplicial: fan.is_simplicial(),
        pic_torsion_free: pic.torsion_free(),
        enough_cartier: ec.all,
    };
    if !(assumptions.support_spans && assumptions.simplicial && assumptions.pic_torsion_free) {
        return Ok(ComparisonReport {
            fan_report: fan.report(),
            assumptions,
            pic_rank: pic.free_rank(),
            pic_basis: None,
            verdict: Verdict::AssumptionViolated(assumptions.violations()),
            tproj_atlas: vec![],
            projmh_atlas: vec![],
            missing_cones: vec![],
            witnesses: vec![],
            notes: vec![],
        });
    }
    let model = cox_model(fan)?;
    let mut report = compare(&model)?;
    report.assumptions = assumptions;
    Ok(report)
}

/// Verdict record for a complete smooth surface, with the fast-path
/// reasoning cross-checked against the full comparison.
#[derive(Clone, Debug)]
pub struct SurfaceClassification {
    pub rays: usize,
    pub pic_rank: usize,
    pub is_isomorphism: bool,
    pub reasons: Vec<String>,
    pub report: ComparisonReport,
}

/// Classifies a complete smooth surface fan.
pub fn classify_surface(fan: &Fan) -> Result<SurfaceClassification> {
    let mut violated = Vec::new();
    if fan.lattice_rank() != 2 {
        violated.push("not a surface fan".to_string());
    } else {
        if fan.completeness() != Some(true) {
            violated.push("fan is not complete".to_string());
        }
        if !fan.is_smooth() {
            violated.push("fan is not smooth".to_string());
        }
    }
    if !violated.is_empty() {
        return Err(Error::AssumptionViolated(violated));
    }

    let report = compare_fan(fan)?;
    let Some(verdict) = report.is_isomorphism() else {
        return Err(Error::Internal(
            "complete smooth surface flagged an assumption violation".into(),
        ));
    };

    let rays = fan.rays().len();
    let mut reasons = Vec::new();
    if report.pic_rank != rays - 2 {
        return Err(Error::Internal("surface Picard rank is not ray count minus two".into()));
    }
    let expected = match rays {
        3 => {
            reasons.push("3 rays: the projective plane up to a unimodular change".to_string());
            Some(true)
        }
        4 => {
            let antipodal = (0..rays).all(|i| {
                let neg: Vec<_> = fan.ray(i).iter().map(|x| -x.clone()).collect();
                fan.rays().contains(&neg)
            });
            if antipodal {
                reasons.push(
                    "4 rays in opposite pairs: a product of projective lines".to_string(),
                );
            } else {
                reasons.push(
                    "4 rays with a non-opposite pair: a twisted ruled surface; the \
                     independent opposite pair is missing from the fan"
                        .to_string(),
                );
            }
            Some(antipodal)
        }
        _ => {
            reasons.push(format!(
                "{rays} rays give Picard rank {} ≥ 3: never an isomorphism",
                rays - 2
            ));
            Some(false)
        }
    };
    if let Some(exp) = expected {
        if exp != verdict {
            return Err(Error::Internal(
                "fast-path surface classification disagrees with the atlas comparison".into(),
            ));
        }
    }

    Ok(SurfaceClassification {
        rays,
        pic_rank: report.pic_rank,
        is_isomorphism: verdict,
        reasons,
        report,
    })
}

/// Deterministic random complete smooth surface fan: a seeded sequence of
/// corner star subdivisions applied to a random small base fan.
pub fn random_complete_smooth_surface(seed: u64, max_rays: usize) -> Result<Fan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = ["p2", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3"]
        [rng.gen_range(0..5)];
    let mut fan = builtin_fan(base)?;
    let target = rng.gen_range(fan.rays().len()..=max_rays.max(fan.rays().len()));
    while fan.rays().len() < target {
        let two_cones: Vec<BTreeSet<usize>> =
            fan.max_cones().iter().filter(|c| c.len() == 2).cloned().collect();
        let pick = rng.gen_range(0..two_cones.len());
        fan = fan.star_subdivision(&two_cones[pick])?;
    }
    Ok(fan)
}
