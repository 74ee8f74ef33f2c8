//! The Pic(Δ)-graded polynomial model of the support-function algebra.
//!
//! One variable `x_ρ` per ray, standing for the ray function `K_ρ`; its
//! degree is the class `deg K_ρ ∈ Pic(Δ)`.  On this model the module
//! provides the relevance test for monomials, the charts of both Proj
//! constructions (keyed by complement ray sets), the degree-zero monoid
//! scan of a cone chart, and the line-bundle locus of a twist.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::intlin::{
    lattice_canonical, lattice_membership, subgroup_index, unimodular_map_between, Int, IntMatrix,
    SubgroupIndex,
};
use crate::suppfun::{
    monoid_irreducibles_box, picard, ray_functions, support_function_lattice, PicData, RayFunction,
    SFLattice,
};

/// Whether the polynomial model is known to present the full algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Smooth fan: the ray functions generate the value monoid.
    Exact,
    /// Simplicial non-smooth fan: the ray functions need not generate;
    /// a warning lists any extra irreducibles found by a bounded scan.
    PaperModel,
}

/// The graded polynomial model: variables, degrees, and provenance data.
#[derive(Clone, Debug)]
pub struct CoxModel {
    fan: Fan,
    sf: SFLattice,
    pic: PicData,
    rayfns: Vec<RayFunction>,
    /// Column `ρ` is `deg x_ρ` in the free coordinates of Pic(Δ).
    degrees: IntMatrix,
    model_kind: ModelKind,
    krull_dim: usize,
    warnings: Vec<String>,
}

impl CoxModel {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn sf(&self) -> &SFLattice {
        &self.sf
    }

    pub fn pic(&self) -> &PicData {
        &self.pic
    }

    pub fn ray_fns(&self) -> &[RayFunction] {
        &self.rayfns
    }

    pub fn nvars(&self) -> usize {
        self.fan.rays().len()
    }

    pub fn degrees(&self) -> &IntMatrix {
        &self.degrees
    }

    pub fn degree(&self, rho: usize) -> Vec<Int> {
        self.degrees.col(rho)
    }

    pub fn model_kind(&self) -> ModelKind {
        self.model_kind
    }

    pub fn krull_dim(&self) -> usize {
        self.krull_dim
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Degree of a monomial: the ℤ-combination of variable degrees.
    pub fn monomial_degree(&self, m: &Monomial) -> Result<Vec<Int>> {
        if m.exponents.len() != self.nvars() {
            return Err(Error::DimensionMismatch("monomial has wrong variable count".into()));
        }
        let mut deg = vec![Int::zero(); self.pic.free_rank()];
        for (rho, &e) in m.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = Int::from(e);
            for (d, c) in deg.iter_mut().zip(self.degrees.col(rho)) {
                *d += &factor * c;
            }
        }
        Ok(deg)
    }

    /// Same model with the Picard coordinates rewritten in another basis;
    /// `rows` must span the same projection lattice (checked).
    pub fn with_pic_basis(&self, rows: IntMatrix) -> Result<CoxModel> {
        let pic = self.pic.with_projection(rows)?;
        let mut out = self.clone();
        out.degrees = recompute_degrees(&pic, &out.rayfns)?;
        out.pic = pic;
        Ok(out)
    }

    /// Changes the Picard basis so that the variable degrees become exactly
    /// `reference` (one column per ray), when a unimodular change does it.
    pub fn with_degree_basis(&self, reference: &IntMatrix) -> Result<CoxModel> {
        let u = unimodular_map_between(&self.degrees, reference)?.ok_or_else(|| {
            Error::Input("no unimodular change of basis produces the requested degrees".into())
        })?;
        self.with_pic_basis(u.mul(self.pic.projection())?)
    }
}

fn recompute_degrees(pic: &PicData, rayfns: &[RayFunction]) -> Result<IntMatrix> {
    let cols = rayfns.iter().map(|k| pic.free_class(&k.coords)).collect::<Result<Vec<_>>>()?;
    if pic.free_rank() == 0 {
        return Ok(IntMatrix::zero(0, rayfns.len()));
    }
    IntMatrix::from_cols(cols)
}

/// Builds the graded polynomial model for a simplicial fan with spanning
/// support and torsion-free Picard group; violations abort construction.
pub fn cox_model(fan: &Fan) -> Result<CoxModel> {
    let sf = support_function_lattice(fan)?;
    let pic = picard(&sf)?;
    let mut violated = Vec::new();
    if !fan.is_simplicial() {
        violated.push("fan is not simplicial".to_string());
    }
    if !fan.support_spans() {
        violated.push("support does not span the ambient lattice".to_string());
    }
    if !pic.torsion_free() {
        violated.push("Picard group has torsion".to_string());
    }
    if !violated.is_empty() {
        return Err(Error::AssumptionViolated(violated));
    }

    let rayfns = ray_functions(&sf)?;
    let degrees = recompute_degrees(&pic, &rayfns)?;
    let krull_dim = fan.rays().len();
    if sf.rank() != krull_dim {
        return Err(Error::Internal(
            "support-function rank differs from the ray count on a simplicial spanning fan".into(),
        ));
    }

    let mut warnings = Vec::new();
    let model_kind = if fan.is_smooth() {
        ModelKind::Exact
    } else {
        let scan_bound = 3u64;
        let extras: Vec<String> = monoid_irreducibles_box(&sf, scan_bound)?
            .into_iter()
            .filter(|v| !rayfns.iter().any(|k| k.value_vector == *v))
            .map(|v| fmt_values(&v))
            .collect();
        let detail = if extras.is_empty() {
            format!("no extra irreducibles found within bound {scan_bound}, completeness unverified")
        } else {
            format!(
                "extra irreducible value vectors within bound {scan_bound}: {}",
                extras.join(", ")
            )
        };
        warnings.push(format!(
            "non-smooth fan: the ray functions need not generate the value monoid ({detail})"
        ));
        ModelKind::PaperModel
    };

    Ok(CoxModel { fan: fan.clone(), sf, pic, rayfns, degrees, model_kind, krull_dim, warnings })
}

fn fmt_values(v: &[Int]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

/// A monomial in the variables `x_ρ`, as an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u64>,
}

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Monomial {
        Monomial { exponents }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial { exponents: vec![0; nvars] }
    }

    /// The square-free monomial with the given support.
    pub fn from_support(nvars: usize, support: &BTreeSet<usize>) -> Monomial {
        let mut exponents = vec![0; nvars];
        for &rho in support {
            exponents[rho] = 1;
        }
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.exponents.iter().enumerate().filter_map(|(i, &e)| (e > 0).then_some(i)).collect()
    }

    pub fn is_square_free(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    pub fn square_free_part(&self) -> Monomial {
        Monomial { exponents: self.exponents.iter().map(|&e| u64::from(e > 0)).collect() }
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        if self.exponents.len() != other.exponents.len() {
            return Err(Error::DimensionMismatch("monomials in different variable sets".into()));
        }
        let exponents =
            self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Ok(Monomial { exponents })
    }
}

/// Outcome of the relevance test for a monomial.
#[derive(Clone, Debug)]
pub struct Relevance {
    /// The degree criterion: the support degrees generate a finite-index
    /// subgroup of Pic(Δ).
    pub relevant: bool,
    pub index: SubgroupIndex,
    /// The geometric criterion: the complement rays are linearly independent.
    pub independent_complement: bool,
}

/// Tests relevance of a monomial both ways and checks that the two criteria
/// agree (they must, on any model that passed construction).
pub fn is_relevant(model: &CoxModel, m: &Monomial) -> Result<Relevance> {
    if m.exponents().len() != model.nvars() {
        return Err(Error::DimensionMismatch("monomial has wrong variable count".into()));
    }
    let support: Vec<usize> = m.support().into_iter().collect();
    let gens = model.degrees.select_cols(&support);
    let index = subgroup_index(&gens, model.pic.free_rank())?;
    let relevant = index.is_finite();

    let complement: Vec<usize> =
        (0..model.nvars()).filter(|rho| !support.contains(rho)).collect();
    let sub = model.fan.ray_matrix().select_rows(&complement);
    let independent_complement = sub.rank() == complement.len();

    if relevant != independent_complement {
        return Err(Error::Internal(format!(
            "relevance criteria disagree on support {:?}",
            m.support()
        )));
    }
    Ok(Relevance { relevant, index, independent_complement })
}

/// An affine chart of either Proj construction, keyed by the complement
/// ray set `S`; the chart belongs to the cone spanned by `S`.
#[derive(Clone, Debug)]
pub struct Chart {
    support: BTreeSet<usize>,
    complement: BTreeSet<usize>,
    /// Canonical basis rows of `D_f = ⟨deg x_ρ : ρ ∈ supp⟩ ⊆ Pic(Δ)`.
    degree_lattice: IntMatrix,
    index: SubgroupIndex,
}

impl Chart {
    /// Ray set `J` of the chart monomial `∏_{ρ∈J} x_ρ`.
    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    /// The chart key: rays of the cone this chart belongs to.
    pub fn complement(&self) -> &BTreeSet<usize> {
        &self.complement
    }

    pub fn monomial(&self, nvars: usize) -> Monomial {
        Monomial::from_support(nvars, &self.support)
    }

    /// Canonical basis rows of the degree subgroup `D_f`.
    pub fn degree_lattice(&self) -> &IntMatrix {
        &self.degree_lattice
    }

    pub fn index(&self) -> &SubgroupIndex {
        &self.index
    }

    /// Whether a twist lies in `D_f`.
    pub fn contains_twist(&self, d: &[Int]) -> Result<bool> {
        Ok(lattice_membership(&self.degree_lattice.transpose(), d)?.is_some())
    }
}

/// Chart of a relevant monomial.  Only the support matters: exponent
/// multiplicities and dilation scalings key to the same chart.
pub fn chart(model: &CoxModel, m: &Monomial) -> Result<Chart> {
    let rel = is_relevant(model, m)?;
    if !rel.relevant {
        return Err(Error::NotRelevant(format!(
            "monomial with support {:?} has an infinite-index degree subgroup",
            m.support()
        )));
    }
    let support = m.support();
    let support_idx: Vec<usize> = support.iter().copied().collect();
    let complement: BTreeSet<usize> =
        (0..model.nvars()).filter(|rho| !support.contains(rho)).collect();
    let degree_lattice = lattice_canonical(&model.degrees.select_cols(&support_idx));
    Ok(Chart { support, complement, degree_lattice, index: rel.index })
}

/// Chart of the monomial `∏_{ρ∉σ(1)} x_ρ` of a cone `σ ∈ Δ`; its key is
/// `σ(1)` itself.
pub fn chart_of_cone(model: &CoxModel, cone: &BTreeSet<usize>) -> Result<Chart> {
    if !model.fan.contains_cone(cone) {
        return Err(Error::ConeNotInFan(cone.iter().copied().collect()));
    }
    let support: BTreeSet<usize> = (0..model.nvars()).filter(|rho| !cone.contains(rho)).collect();
    let c = chart(model, &Monomial::from_support(model.nvars(), &support))?;
    if c.complement() != cone {
        return Err(Error::Internal("cone chart key differs from the cone".into()));
    }
    Ok(c)
}

/// One disagreement between the dual-cone and variable-monoid descriptions
/// of a chart's degree-zero part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeZeroCounterexample {
    pub point: Vec<Int>,
    pub in_dual_cone: bool,
    pub representable: bool,
}

/// Box-scan comparison of a cone chart's degree-zero monoid with the dual
/// cone of lattice points.
#[derive(Clone, Debug)]
pub struct DegreeZeroReport {
    pub cone: BTreeSet<usize>,
    pub box_bound: u64,
    pub points_checked: usize,
    pub points_in_cone: usize,
    pub counterexamples: Vec<DegreeZeroCounterexample>,
}

/// Scans all `m ∈ M` with coordinates in `[−bound, bound]` and compares
/// `m ∈ σ^∨` against representability through the variables: all values
/// `⟨m, n_ρ⟩` divisible by `λ_ρ` and nonnegative on `σ(1)`.
///
/// Counterexamples are recorded, not asserted — non-smooth fans may
/// produce them, which is precisely what the report documents.
pub fn chart_degree_zero_monoid(
    model: &CoxModel,
    chart: &Chart,
    box_bound: u64,
) -> Result<DegreeZeroReport> {
    let cone = chart.complement().clone();
    if !model.fan.contains_cone(&cone) {
        return Err(Error::ConeNotInFan(cone.iter().copied().collect()));
    }
    let n = model.fan.lattice_rank();
    let bound = Int::from(box_bound);
    let mut report = DegreeZeroReport {
        cone: cone.clone(),
        box_bound,
        points_checked: 0,
        points_in_cone: 0,
        counterexamples: Vec::new(),
    };
    let mut point = vec![-bound.clone(); n];
    loop {
        report.points_checked += 1;
        let values: Vec<Int> = (0..model.nvars())
            .map(|rho| model.fan.ray(rho).iter().zip(&point).map(|(a, b)| a * b).sum())
            .collect();
        let in_dual_cone = cone.iter().all(|&rho| !values[rho].is_negative());
        let integral = (0..model.nvars())
            .all(|rho| (&values[rho] % &model.rayfns[rho].dilation).is_zero());
        let representable = integral && in_dual_cone;
        if in_dual_cone {
            report.points_in_cone += 1;
        }
        if in_dual_cone != representable {
            report.counterexamples.push(DegreeZeroCounterexample {
                point: point.clone(),
                in_dual_cone,
                representable,
            });
        }
        // Odometer over the box.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(report);
            }
            if point[pos] < bound {
                point[pos] += 1;
                break;
            }
            point[pos] = -bound.clone();
            pos += 1;
        }
    }
}

/// Line-bundle locus of a twist over a chart family.
#[derive(Clone, Debug)]
pub struct TwistLocus {
    /// One flag per input chart, in input order: `d ∈ D_f`.
    pub per_chart: Vec<bool>,
    /// Conjunction over the charts whose key is a cone of the fan.
    pub tproj_all: bool,
    /// Conjunction over all input charts.
    pub projmh_all: bool,
}

/// Tests `d ∈ D_f` on every chart and aggregates over the toric sub-atlas
/// (chart keys that are cones of the fan) and over the whole family.
pub fn twist_line_bundle_locus(
    model: &CoxModel,
    d: &[Int],
    charts: &[Chart],
) -> Result<TwistLocus> {
    if d.len() != model.pic.free_rank() {
        return Err(Error::DimensionMismatch("twist has wrong Picard rank".into()));
    }
    let mut per_chart = Vec::with_capacity(charts.len());
    let mut tproj_all = true;
    let mut projmh_all = true;
    for c in charts {
        let flag = c.contains_twist(d)?;
        per_chart.push(flag);
        projmh_all &= flag;
        if model.fan.contains_cone(c.complement()) {
            tproj_all &= flag;
        }
    }
    Ok(TwistLocus { per_chart, tproj_all, projmh_all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::builtin_fan;
    use num_traits::One;
    use proptest::prelude::*;

    fn i(n: i64) -> Int {
        Int::from(n)
    }

    fn v(x: &[i64]) -> Vec<Int> {
        x.iter().map(|&a| Int::from(a)).collect()
    }

    fn cone(idx: &[usize]) -> BTreeSet<usize> {
        idx.iter().copied().collect()
    }

    fn model_of(spec: &str) -> CoxModel {
        cox_model(&builtin_fan(spec).unwrap()).unwrap()
    }

    /// H₂ model with the Picard basis fixed so the degrees read
    /// (1,0), (−2,1), (1,0), (0,1).
    fn pinned_h2() -> CoxModel {
        let reference =
            IntMatrix::from_cols(vec![v(&[1, 0]), v(&[-2, 1]), v(&[1, 0]), v(&[0, 1])]).unwrap();
        model_of("hirzebruch:2").with_degree_basis(&reference).unwrap()
    }

    fn charts_of_independent_subsets(model: &CoxModel) -> Vec<Chart> {
        model
            .fan()
            .independent_subsets()
            .into_iter()
            .map(|s| {
                let support: BTreeSet<usize> =
                    (0..model.nvars()).filter(|rho| !s.contains(rho)).collect();
                chart(model, &Monomial::from_support(model.nvars(), &support)).unwrap()
            })
            .collect()
    }

    #[test]
    fn p2_model_is_exact_with_unit_degrees() {
        let model = model_of("p2");
        assert_eq!(model.nvars(), 3);
        assert_eq!(model.model_kind(), ModelKind::Exact);
        assert!(model.warnings().is_empty());
        assert_eq!(model.krull_dim(), 3);
        let degs: Vec<Vec<Int>> = (0..3).map(|r| model.degree(r)).collect();
        assert_eq!(degs[0], degs[1]);
        assert_eq!(degs[1], degs[2]);
        assert_eq!(degs[0][0].abs(), i(1));
    }

    #[test]
    fn weighted_plane_model_carries_the_warning() {
        let model = model_of("wps:1,1,2");
        assert_eq!(model.model_kind(), ModelKind::PaperModel);
        assert_eq!(model.warnings().len(), 1);
        assert!(model.warnings()[0].contains("(1,0,1)"), "{}", model.warnings()[0]);
    }

    #[test]
    fn non_simplicial_fan_is_rejected() {
        let err = cox_model(&builtin_fan("displaced-cube").unwrap()).unwrap_err();
        assert!(err.is_assumption_violation());
    }

    #[test]
    fn non_spanning_fan_is_rejected() {
        let fan =
            crate::fan::Fan::validate(2, vec![v(&[1, 0])], vec![cone(&[0])]).unwrap();
        let err = cox_model(&fan).unwrap_err();
        assert!(err.is_assumption_violation());
    }

    #[test]
    fn pinned_h2_degrees_are_the_reference() {
        let model = pinned_h2();
        assert_eq!(model.degree(0), v(&[1, 0]));
        assert_eq!(model.degree(1), v(&[-2, 1]));
        assert_eq!(model.degree(2), v(&[1, 0]));
        assert_eq!(model.degree(3), v(&[0, 1]));
        // The twist of a ray function is its degree in the new basis too.
        let m = Monomial::from_support(4, &cone(&[1]));
        assert_eq!(model.monomial_degree(&m).unwrap(), v(&[-2, 1]));
    }

    #[test]
    fn bad_pic_basis_is_rejected() {
        let model = model_of("p2");
        let doubled = {
            let p = model.pic().projection().clone();
            let mut rows = p.row_vecs();
            for r in &mut rows {
                for x in r.iter_mut() {
                    *x *= i(2);
                }
            }
            IntMatrix::from_rows(rows).unwrap()
        };
        assert!(model.with_pic_basis(doubled).is_err());
    }

    #[test]
    fn relevance_on_p2() {
        let model = model_of("p2");
        let x0 = Monomial::from_support(3, &cone(&[0]));
        let rel = is_relevant(&model, &x0).unwrap();
        assert!(rel.relevant && rel.independent_complement);
        assert_eq!(
            rel.index,
            SubgroupIndex::Finite { index: i(1), invariant_factors: vec![i(1)] }
        );

        let one = Monomial::one(3);
        let rel = is_relevant(&model, &one).unwrap();
        assert!(!rel.relevant);
        assert_eq!(rel.index, SubgroupIndex::Infinite);
    }

    #[test]
    fn h2_mixed_monomial_has_index_two() {
        let model = pinned_h2();
        let m = Monomial::from_support(4, &cone(&[1, 3]));
        let rel = is_relevant(&model, &m).unwrap();
        assert!(rel.relevant);
        match &rel.index {
            SubgroupIndex::Finite { index, .. } => assert_eq!(index, &i(2)),
            SubgroupIndex::Infinite => panic!("index should be finite"),
        }
    }

    #[test]
    fn relevance_criteria_agree_exhaustively() {
        for spec in ["p2", "hirzebruch:0", "hirzebruch:2", "wps:1,1,2"] {
            let model = model_of(spec);
            let nvars = model.nvars();
            for mask in 0u32..(1 << nvars) {
                let support: BTreeSet<usize> =
                    (0..nvars).filter(|rho| mask & (1 << rho) != 0).collect();
                let m = Monomial::from_support(nvars, &support);
                // The constructor errors if the two criteria ever disagree.
                is_relevant(&model, &m).unwrap();
            }
        }
    }

    #[test]
    fn chart_round_trips_through_its_monomial() {
        for spec in ["p2", "hirzebruch:1"] {
            let model = model_of(spec);
            for sigma in model.fan().cones().clone() {
                let c = chart_of_cone(&model, &sigma).unwrap();
                assert_eq!(c.complement(), &sigma);
                let again = chart(&model, &c.monomial(model.nvars())).unwrap();
                assert_eq!(again.complement(), &sigma);
            }
        }
    }

    #[test]
    fn quadrant_chart_of_p2_is_the_last_variable() {
        let model = model_of("p2");
        let c = chart_of_cone(&model, &cone(&[0, 1])).unwrap();
        assert_eq!(c.support(), &cone(&[2]));
    }

    #[test]
    fn h1_extra_chart_is_not_a_fan_cone() {
        let model = model_of("hirzebruch:1");
        let m = Monomial::from_support(4, &cone(&[1, 3]));
        let c = chart(&model, &m).unwrap();
        assert_eq!(c.complement(), &cone(&[0, 2]));
        assert!(!model.fan().contains_cone(&cone(&[0, 2])));
    }

    #[test]
    fn irrelevant_monomial_has_no_chart() {
        let model = model_of("p2");
        assert!(matches!(chart(&model, &Monomial::one(3)), Err(Error::NotRelevant(_))));
    }

    #[test]
    fn cone_charts_have_full_degree_group() {
        for spec in ["p2", "hirzebruch:2", "wps:1,1,2"] {
            let model = model_of(spec);
            for sigma in model.fan().cones().clone() {
                let c = chart_of_cone(&model, &sigma).unwrap();
                match c.index() {
                    SubgroupIndex::Finite { index, .. } => assert!(index.is_one(), "{spec}"),
                    SubgroupIndex::Infinite => panic!("cone chart with infinite index"),
                }
            }
        }
    }

    #[test]
    fn chart_of_products_intersects_complements() {
        let model = pinned_h2();
        let nvars = model.nvars();
        let subsets: Vec<BTreeSet<usize>> = (0u32..(1 << nvars))
            .map(|mask| (0..nvars).filter(|rho| mask & (1 << rho) != 0).collect())
            .collect();
        for f_supp in &subsets {
            let f = Monomial::from_support(nvars, f_supp);
            if !is_relevant(&model, &f).unwrap().relevant {
                continue;
            }
            for g_supp in &subsets {
                let g = Monomial::from_support(nvars, g_supp);
                if !is_relevant(&model, &g).unwrap().relevant {
                    continue;
                }
                let fg = f.mul(&g).unwrap().square_free_part();
                let cf = chart(&model, &f).unwrap();
                let cg = chart(&model, &g).unwrap();
                let cfg = chart(&model, &fg).unwrap();
                let meet: BTreeSet<usize> =
                    cf.complement().intersection(cg.complement()).copied().collect();
                assert_eq!(cfg.complement(), &meet);
            }
        }
    }

    #[test]
    fn quadrant_degree_zero_monoid_on_p2() {
        let model = model_of("p2");
        let c = chart_of_cone(&model, &cone(&[0, 1])).unwrap();
        let report = chart_degree_zero_monoid(&model, &c, 5).unwrap();
        assert_eq!(report.points_checked, 121);
        assert_eq!(report.points_in_cone, 36);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn zero_cone_degree_zero_monoid_on_p2() {
        let model = model_of("p2");
        let c = chart_of_cone(&model, &BTreeSet::new()).unwrap();
        let report = chart_degree_zero_monoid(&model, &c, 5).unwrap();
        assert_eq!(report.points_checked, 121);
        assert_eq!(report.points_in_cone, 121);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn weighted_plane_divisibility_counterexamples() {
        let model = model_of("wps:1,1,2");
        let sigma = cone(&[0, 2]);
        let c = chart_of_cone(&model, &sigma).unwrap();
        let report = chart_degree_zero_monoid(&model, &c, 5).unwrap();
        assert!(!report.counterexamples.is_empty());
        for ce in &report.counterexamples {
            assert!(ce.in_dual_cone && !ce.representable);
        }
        assert!(report.counterexamples.iter().any(|ce| ce.point == v(&[1, -1])));
    }

    #[test]
    fn any_twist_is_a_line_bundle_on_p2() {
        let model = model_of("p2");
        let charts = charts_of_independent_subsets(&model);
        assert_eq!(charts.len(), 7);
        for t in [-3i64, 1, 5] {
            let locus = twist_line_bundle_locus(&model, &v(&[t]), &charts).unwrap();
            assert!(locus.per_chart.iter().all(|&f| f));
            assert!(locus.tproj_all && locus.projmh_all);
        }
    }

    #[test]
    fn h2_twist_separates_the_extra_chart() {
        let model = pinned_h2();
        let charts = charts_of_independent_subsets(&model);
        assert_eq!(charts.len(), 10);
        let locus = twist_line_bundle_locus(&model, &v(&[1, 0]), &charts).unwrap();
        assert!(locus.tproj_all);
        assert!(!locus.projmh_all);
        for (c, flag) in charts.iter().zip(&locus.per_chart) {
            let expect = c.complement() != &cone(&[0, 2]);
            assert_eq!(*flag, expect, "chart {:?}", c.complement());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Monomial degree is additive.
        #[test]
        fn degree_is_additive(
            ea in proptest::collection::vec(0u64..4, 4),
            eb in proptest::collection::vec(0u64..4, 4),
        ) {
            let model = model_of("hirzebruch:2");
            let a = Monomial::new(ea);
            let b = Monomial::new(eb);
            let sum: Vec<Int> = model
                .monomial_degree(&a)
                .unwrap()
                .iter()
                .zip(model.monomial_degree(&b).unwrap())
                .map(|(x, y)| x + y)
                .collect();
            prop_assert_eq!(model.monomial_degree(&a.mul(&b).unwrap()).unwrap(), sum);
        }

        /// Twist membership is invariant under scaling a chart's monomial
        /// exponents: charts depend only on the support.
        #[test]
        fn charts_ignore_multiplicities(
            exps in proptest::collection::vec(0u64..4, 4),
        ) {
            let model = model_of("hirzebruch:2");
            let m = Monomial::new(exps);
            let sq = m.square_free_part();
            let rel_m = is_relevant(&model, &m).unwrap();
            let rel_sq = is_relevant(&model, &sq).unwrap();
            prop_assert_eq!(rel_m.relevant, rel_sq.relevant);
            if rel_m.relevant {
                let cm = chart(&model, &m).unwrap();
                let csq = chart(&model, &sq).unwrap();
                prop_assert_eq!(cm.complement(), csq.complement());
                prop_assert_eq!(cm.degree_lattice(), csq.degree_lattice());
            }
        }
    }
}
