//! Inverse-image modules: functions from a complex into a finite metric space,
//! pulled back along families of subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::ext::{format_rational, Ext};
use crate::interleave::{
    distance_bruteforce, distance_family, exists_interleaving, pushforward_certificate, verify_certificate, DistanceResult,
    InterleavingCertificate, SearchGuard,
};
use crate::metrics::{asym_hausdorff, offset, weak_offset, LawvereMetric, MetricFile, SublinearProjection, SuperlinearFamily};
use crate::pmod::{apply_functor, Functor, PersistenceModule};
use crate::proset::{arcs, Grid, Proset, SUBSET_GUARD};
use crate::translations::{enumerate_translations, Translation, DEFAULT_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    metric: LawvereMetric,
}

impl FiniteMetricSpace {
    pub fn new<S: Into<String>>(labels: Vec<S>, metric: LawvereMetric) -> Result<FiniteMetricSpace> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != metric.len() {
            return Err(Error::Shape(format!("{} labels for a metric on {} points", labels.len(), metric.len())));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteMetricSpace { labels, metric })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn metric(&self) -> &LawvereMetric {
        &self.metric
    }

    pub fn d(&self, a: usize, b: usize) -> Ext {
        self.metric.get(a, b)
    }
}

/// A family of subsets of a finite metric space, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    space: Arc<FiniteMetricSpace>,
    members: Vec<BTreeSet<usize>>,
    proset: Arc<Proset>,
}

impl SubsetFamily {
    pub fn new<S: Into<String>>(
        space: Arc<FiniteMetricSpace>,
        labels: Vec<S>,
        members: Vec<BTreeSet<usize>>,
    ) -> Result<SubsetFamily> {
        if labels.len() != members.len() {
            return Err(Error::Shape(format!("{} labels for {} members", labels.len(), members.len())));
        }
        for m in &members {
            if let Some(&x) = m.iter().find(|&&x| x >= space.len()) {
                return Err(Error::IndexOutOfRange { index: x, size: space.len() });
            }
        }
        let mut seen = BTreeSet::new();
        for m in &members {
            if !seen.insert(m) {
                return Err(Error::Invalid(format!("member {m:?} listed twice")));
            }
        }
        let proset = Arc::new(Proset::from_predicate(labels, |a, b| members[a].is_subset(&members[b]))?);
        Ok(SubsetFamily { space, members, proset })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn members(&self) -> &[BTreeSet<usize>] {
        &self.members
    }

    pub fn proset(&self) -> &Arc<Proset> {
        &self.proset
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_index(&self, set: &BTreeSet<usize>) -> Option<usize> {
        self.members.iter().position(|m| m == set)
    }

    /// `ℓ_H` between members, as a Lawvere metric on the family.
    pub fn hausdorff_metric(&self) -> LawvereMetric {
        let d = self.space.metric();
        let table = self.members.iter().map(|a| self.members.iter().map(|b| asym_hausdorff(d, a, b)).collect()).collect();
        LawvereMetric::new(table).expect("asymmetric Hausdorff distance is a Lawvere metric")
    }

    /// The induced sublinear projection `ω_Γ = sup_A ℓ_H(A, ΓA)`.
    pub fn omega(&self) -> SublinearProjection {
        SublinearProjection::Lawvere(self.hausdorff_metric())
    }

    /// Every finite `ℓ_H` value between nested members, with `0`, ascending.
    pub fn levels(&self) -> Vec<Rational64> {
        let d = self.space.metric();
        let mut out = vec![Rational64::from_integer(0)];
        for a in &self.members {
            for b in &self.members {
                if a.is_subset(b) {
                    if let Ext::Fin(v) = asym_hausdorff(d, a, b) {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// A function from the vertices of a complex to points of a metric space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    pub complex: Arc<SimplicialComplex>,
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub values: BTreeMap<String, String>,
}

impl VertexFunction {
    pub fn new(complex: Arc<SimplicialComplex>, values: Vec<usize>, space: &FiniteMetricSpace) -> Result<VertexFunction> {
        if values.len() != complex.vertex_count() {
            return Err(Error::Shape(format!("{} values for {} vertices", values.len(), complex.vertex_count())));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= space.len()) {
            return Err(Error::IndexOutOfRange { index: v, size: space.len() });
        }
        Ok(VertexFunction { complex, values })
    }

    pub fn from_file(complex: Arc<SimplicialComplex>, space: &FiniteMetricSpace, file: &FunctionFile) -> Result<VertexFunction> {
        let mut values = Vec::with_capacity(complex.vertex_count());
        for v in complex.vertices() {
            let label = file.values.get(v).ok_or_else(|| Error::Parse(format!("no value for vertex {v}")))?;
            let m = space.index_of(label).ok_or_else(|| Error::OffGrid(format!("value {label} of vertex {v}")))?;
            values.push(m);
        }
        if let Some(extra) = file.values.keys().find(|k| !complex.vertices().contains(k)) {
            return Err(Error::Parse(format!("value for unknown vertex {extra}")));
        }
        VertexFunction::new(complex, values, space)
    }

    pub fn to_file(&self, space: &FiniteMetricSpace) -> FunctionFile {
        FunctionFile {
            values: self
                .complex
                .vertices()
                .iter()
                .zip(&self.values)
                .map(|(v, &m)| (v.clone(), space.labels()[m].clone()))
                .collect(),
        }
    }
}

/// `F(A)` is the full subcomplex on vertices `v` with `f(v) ∈ A`.
pub fn inv_image_module(f: &VertexFunction, family: &SubsetFamily) -> Result<PersistenceModule> {
    let objects = family.members().iter().map(|a| f.complex.induced(|v| a.contains(&f.values[v]))).collect();
    PersistenceModule::finsimp(family.proset().clone(), f.complex.clone(), objects)
}

/// `max(sup_x d(f x, g x), sup_x d(g x, f x))`.
pub fn dinfty(f: &VertexFunction, g: &VertexFunction, space: &FiniteMetricSpace) -> Result<Ext> {
    if f.complex != g.complex {
        return Err(Error::Shape("functions live on different complexes".into()));
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| space.d(a, b).max(space.d(b, a)))
        .max()
        .unwrap_or(Ext::ZERO))
}

/// `A ↦ Aᵉ`, when every offset is again a member.
pub fn offset_translation(family: &SubsetFamily, eps: Rational64) -> Option<Translation> {
    let d = family.space().metric();
    let table: Option<Vec<usize>> = family.members().iter().map(|a| family.member_index(&offset(d, a, eps))).collect();
    Translation::new(family.proset().clone(), table?).ok()
}

/// A translation `Γ` with `Âᵉ ⊆ Γ(A)` for every member and `ω_Γ ≤ η`: the
/// offset map when the family is closed under `ε`-offsets, otherwise the map
/// sending `A` to the smallest member containing `Âᵉ`.
pub fn enough_translations(family: &SubsetFamily, eps: Rational64, eta: Ext) -> Option<Translation> {
    let gamma = offset_translation(family, eps).or_else(|| {
        let d = family.space().metric();
        let table: Option<Vec<usize>> = family
            .members()
            .iter()
            .map(|a| {
                let w = weak_offset(d, a, eps);
                let over: Vec<usize> = (0..family.len()).filter(|&b| w.is_subset(&family.members()[b])).collect();
                over.iter().copied().find(|&b| over.iter().all(|&c| family.members()[b].is_subset(&family.members()[c])))
            })
            .collect();
        Translation::new(family.proset().clone(), table?).ok()
    })?;
    (family.omega().evaluate(&gamma) <= eta).then_some(gamma)
}

/// The offset family `Ω_ε: A ↦ Aᵉ` over [`SubsetFamily::levels`], when the
/// family is closed under all those offsets.
pub fn offset_family(family: &SubsetFamily) -> Option<SuperlinearFamily> {
    let eps = family.levels();
    let at: Option<Vec<Translation>> = eps.iter().map(|&e| offset_translation(family, e)).collect();
    SuperlinearFamily::new(family.proset().clone(), eps, at?).ok()
}

/// `d(F, G)` for modules over a subset family, through the offset family
/// when available and by enumerating translations otherwise.
pub fn family_distance(
    f: &PersistenceModule,
    g: &PersistenceModule,
    family: &SubsetFamily,
    guard: &SearchGuard,
) -> Result<DistanceResult> {
    match offset_family(family) {
        Some(omega) => distance_family(f, g, &omega, guard),
        None => {
            let all = enumerate_translations(family.proset(), DEFAULT_CAP)?;
            distance_bruteforce(f, g, &family.omega(), &all, guard)
        }
    }
}

fn line_labels(values: &[Rational64]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn check_increasing(values: &[Rational64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Invalid("empty grid".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("grid values must be strictly increasing".into()));
    }
    Ok(())
}

/// Sublevel sets `Iᵗ = {s ≤ t}` of the thresholds, with the line metric.
pub fn sublevelset_family(thresholds: &[Rational64]) -> Result<SubsetFamily> {
    check_increasing(thresholds)?;
    let space = Arc::new(FiniteMetricSpace::new(line_labels(thresholds), LawvereMetric::line(thresholds))?);
    let members = (0..thresholds.len()).map(|t| (0..=t).collect()).collect();
    SubsetFamily::new(space, line_labels(thresholds), members)
}

/// Lower quadrants `Qᵃ = {m ≤ a}` of a grid, with the sup-norm metric.
pub fn quadrant_family(grid: &Grid) -> Result<SubsetFamily> {
    let labels = grid.proset.labels().to_vec();
    let space = Arc::new(FiniteMetricSpace::new(labels.clone(), LawvereMetric::sup_norm(grid))?);
    let p = grid.proset.clone();
    let members = (0..grid.len()).map(|a| (0..grid.len()).filter(|&m| p.leq(m, a)).collect()).collect();
    SubsetFamily::new(space, labels, members)
}

/// Closed intervals `[a, b]` of a line grid, with the line metric.
pub fn interval_family(values: &[Rational64]) -> Result<SubsetFamily> {
    check_increasing(values)?;
    let space = Arc::new(FiniteMetricSpace::new(line_labels(values), LawvereMetric::line(values))?);
    let n = values.len();
    let (mut labels, mut members) = (Vec::new(), Vec::new());
    for a in 0..n {
        for b in a..n {
            labels.push(format!("[{},{}]", format_rational(&values[a]), format_rational(&values[b])));
            members.push((a..=b).collect());
        }
    }
    SubsetFamily::new(space, labels, members)
}

/// Closed arcs of `m` equispaced circle points, as point sets, with the
/// geodesic step metric.
pub fn arc_family(m: usize) -> Result<SubsetFamily> {
    if m < 3 {
        return Err(Error::Invalid(format!("circle resolution {m} < 3")));
    }
    let space = Arc::new(FiniteMetricSpace::new((0..m).map(|i| i.to_string()).collect(), LawvereMetric::circle(m))?);
    let (mut labels, mut members) = (Vec::new(), Vec::new());
    for a in arcs(m) {
        let set: BTreeSet<usize> = a.points(m).into_iter().collect();
        if members.contains(&set) {
            continue;
        }
        labels.push(if set.len() == m {
            "S1".to_string()
        } else {
            let crate::proset::Arc1::Span { start, len } = a else { unreachable!() };
            format!("[{},{}]", start, start + len)
        });
        members.push(set);
    }
    SubsetFamily::new(space, labels, members)
}

/// Every subset of a space of at most twelve points.
pub fn full_family(space: Arc<FiniteMetricSpace>) -> Result<SubsetFamily> {
    let n = space.len();
    if n > SUBSET_GUARD {
        return Err(Error::SizeGuard(format!("full family on {n} > {SUBSET_GUARD} points")));
    }
    let members: Vec<BTreeSet<usize>> = (0..1usize << n).map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect()).collect();
    let labels: Vec<String> = members
        .iter()
        .map(|s| {
            let items: Vec<&str> = s.iter().map(|&i| space.labels()[i].as_str()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    SubsetFamily::new(space, labels, members)
}

/// Serialized family: a generator name plus its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase")]
pub enum FamilySpec {
    Sublevelset {
        #[serde(with = "crate::metrics::rational_vec")]
        thresholds: Vec<Rational64>,
    },
    Quadrant {
        axes: Vec<AxisSpec>,
    },
    Interval {
        #[serde(with = "crate::metrics::rational_vec")]
        grid: Vec<Rational64>,
    },
    Arc {
        m: usize,
    },
    Full {
        points: Vec<String>,
        metric: MetricFile,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AxisSpec(#[serde(with = "crate::metrics::rational_vec")] pub Vec<Rational64>);

impl FamilySpec {
    pub fn build(&self) -> Result<SubsetFamily> {
        match self {
            FamilySpec::Sublevelset { thresholds } => sublevelset_family(thresholds),
            FamilySpec::Quadrant { axes } => quadrant_family(&Grid::new(axes.iter().map(|a| a.0.clone()).collect())?),
            FamilySpec::Interval { grid } => interval_family(grid),
            FamilySpec::Arc { m } => arc_family(*m),
            FamilySpec::Full { points, metric } => {
                full_family(Arc::new(FiniteMetricSpace::new(points.clone(), LawvereMetric::from_file(metric)?)?))
            }
        }
    }
}

/// Everything the stability chain `d(HF, HG) ≤ d(F, G) ≤ d∞(f, g)` produced.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub dinfty: Ext,
    pub d_modules: DistanceResult,
    pub d_functor: DistanceResult,
    /// A `(Γ, Γ)`-interleaving of `F, G` with `Γ` from [`enough_translations`] at `ε = d∞`.
    pub offset_certificate: Option<InterleavingCertificate>,
    /// Whether that certificate pushed through `H` verifies for `HF, HG`.
    pub pushed_certificate_valid: Option<bool>,
    pub violations: Vec<String>,
}

/// Applies the functors left to right.
pub fn apply_chain(functors: &[Functor], f: &PersistenceModule) -> Result<PersistenceModule> {
    functors.iter().try_fold(f.clone(), |m, h| apply_functor(*h, &m))
}

fn push_chain(
    functors: &[Functor],
    f: &PersistenceModule,
    g: &PersistenceModule,
    cert: &InterleavingCertificate,
) -> Result<InterleavingCertificate> {
    let (mut f, mut g, mut c) = (f.clone(), g.clone(), cert.clone());
    for h in functors {
        c = pushforward_certificate(*h, &f, &g, &c)?;
        f = apply_functor(*h, &f)?;
        g = apply_functor(*h, &g)?;
    }
    Ok(c)
}

/// Builds `F = Inv f`, `G = Inv g` and `HF, HG`, computes their distances and
/// checks `d(HF, HG) ≤ d(F, G) ≤ d∞(f, g)`.
pub fn stability_suite(
    f: &VertexFunction,
    g: &VertexFunction,
    family: &SubsetFamily,
    functors: &[Functor],
    guard: &SearchGuard,
) -> Result<StabilityReport> {
    let space = family.space();
    let dinf = dinfty(f, g, space)?;
    let (ff, gg) = (inv_image_module(f, family)?, inv_image_module(g, family)?);
    let (hf, hg) = (apply_chain(functors, &ff)?, apply_chain(functors, &gg)?);
    let d_modules = family_distance(&ff, &gg, family, guard)?;
    let d_functor = family_distance(&hf, &hg, family, guard)?;
    let mut violations = Vec::new();
    let (mut offset_certificate, mut pushed_certificate_valid) = (None, None);
    if let Ext::Fin(e) = dinf {
        match enough_translations(family, e, dinf) {
            Some(gamma) => match exists_interleaving(&ff, &gg, &gamma, &gamma, guard)? {
                Some(c) => {
                    let pushed = push_chain(functors, &ff, &gg, &c)?;
                    pushed_certificate_valid = Some(verify_certificate(&hf, &hg, &pushed)?);
                    if pushed_certificate_valid == Some(false) {
                        violations.push("pushed-forward certificate does not verify".into());
                    }
                    offset_certificate = Some(c);
                }
                None => violations.push(format!("F, G are not interleaved by the translation at ε = {dinf}")),
            },
            None => violations.push(format!("no translation with ω ≤ {dinf} dominates the {dinf}-offsets")),
        }
    }
    if d_modules.value.lower() > dinf {
        violations.push(format!("d(F,G) = {} > d∞(f,g) = {dinf}", d_modules.value));
    }
    if d_functor.value.lower() > d_modules.value.upper() {
        violations.push(format!("d(HF,HG) = {} > d(F,G) = {}", d_functor.value, d_modules.value));
    }
    Ok(StabilityReport { dinfty: dinf, d_modules, d_functor, offset_certificate, pushed_certificate_valid, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interleave::Distance;
    use crate::metrics::{adjoint_check, check_superlinear};

    fn r(v: i64) -> Rational64 {
        Rational64::from_integer(v)
    }

    fn rs(v: &[i64]) -> Vec<Rational64> {
        v.iter().map(|&x| r(x)).collect()
    }

    fn path(n: usize) -> Arc<SimplicialComplex> {
        let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<Vec<usize>> = (1..n).map(|i| vec![i - 1, i]).collect();
        Arc::new(SimplicialComplex::new(verts, &edges).unwrap())
    }

    #[test]
    fn sublevelset_is_a_chain() {
        let fam = sublevelset_family(&rs(&[0, 1, 2])).unwrap();
        assert_eq!(fam.len(), 3);
        assert!(fam.proset().is_total() && fam.proset().is_antisymmetric());
        let gamma = offset_translation(&fam, r(1)).unwrap();
        assert_eq!(gamma.table(), &[1, 2, 2]);
    }

    #[test]
    fn module_at_threshold_one() {
        let k = path(3);
        let fam = sublevelset_family(&rs(&[0, 1, 2])).unwrap();
        let f = VertexFunction::new(k.clone(), vec![0, 1, 2], fam.space()).unwrap();
        let m = inv_image_module(&f, &fam).unwrap();
        let expected = k.subcomplex(&[vec![0, 1]]).unwrap();
        assert_eq!(*m.object(1), crate::pmod::Object::Complex(expected));
    }

    #[test]
    fn full_family_sizes_and_offsets() {
        let space = Arc::new(FiniteMetricSpace::new(vec!["a", "b"], LawvereMetric::line(&rs(&[0, 1]))).unwrap());
        let fam = full_family(space).unwrap();
        assert_eq!(fam.len(), 4);
        let omega = offset_family(&fam).unwrap();
        assert!(check_superlinear(&omega));
        let all = enumerate_translations(fam.proset(), DEFAULT_CAP).unwrap();
        assert!(adjoint_check(&fam.omega(), &omega, &all));
    }

    #[test]
    fn generator_offsets() {
        let g = Grid::integer(&[3, 3]).unwrap();
        let q = quadrant_family(&g).unwrap();
        let gamma = offset_translation(&q, r(1)).unwrap();
        // Q^(0,1) ↦ Q^(1,2)
        assert_eq!(gamma.apply(g.index(&[0, 1])), g.index(&[1, 2]));
        let iv = interval_family(&rs(&[0, 1, 2, 3])).unwrap();
        let gamma = offset_translation(&iv, r(1)).unwrap();
        let src = iv.proset().index_of("[1,2]").unwrap();
        assert_eq!(iv.proset().label(gamma.apply(src)), "[0,3]");
        let arc = arc_family(5).unwrap();
        assert_eq!(arc.len(), 5 * 4 + 1);
        assert!(offset_family(&arc).is_some());
        assert!(offset_family(&q).is_some() && offset_family(&iv).is_some());
    }

    #[test]
    fn dinfty_examples() {
        let fam = sublevelset_family(&rs(&[0, 1, 2, 3])).unwrap();
        let k = path(3);
        let f = VertexFunction::new(k.clone(), vec![0, 1, 2], fam.space()).unwrap();
        let g = VertexFunction::new(k, vec![1, 2, 3], fam.space()).unwrap();
        assert_eq!(dinfty(&f, &f, fam.space()).unwrap(), Ext::ZERO);
        assert_eq!(dinfty(&f, &g, fam.space()).unwrap(), Ext::int(1));
    }

    #[test]
    fn stability_on_path() {
        let fam = sublevelset_family(&rs(&[0, 1, 2, 3])).unwrap();
        let k = path(3);
        let f = VertexFunction::new(k.clone(), vec![0, 1, 2], fam.space()).unwrap();
        let g = VertexFunction::new(k, vec![1, 2, 3], fam.space()).unwrap();
        let h = [Functor::Homology { degree: 0, p: 2 }];
        let rep = stability_suite(&f, &g, &fam, &h, &SearchGuard::default()).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.dinfty, Ext::int(1));
        assert!(rep.d_functor.value.upper() <= Ext::int(1));
        assert_eq!(rep.pushed_certificate_valid, Some(true));
        let same = stability_suite(&f, &f, &fam, &h, &SearchGuard::default()).unwrap();
        assert_eq!(same.d_modules.value, Distance::Exact(Ext::ZERO));
        assert_eq!(same.d_functor.value, Distance::Exact(Ext::ZERO));
    }

    #[test]
    fn generic_rule_without_offsets() {
        // members {0}, {0,1,2}: the 1-offset {0,1} is missing, so Γ({0}) = {0,1,2}
        let space = Arc::new(FiniteMetricSpace::new(vec!["0", "1", "2"], LawvereMetric::line(&rs(&[0, 1, 2]))).unwrap());
        let fam = SubsetFamily::new(space, vec!["a", "b"], vec![BTreeSet::from([0]), BTreeSet::from([0, 1, 2])]).unwrap();
        assert!(offset_translation(&fam, r(1)).is_none());
        assert!(enough_translations(&fam, r(1), Ext::int(1)).is_none());
        let gamma = enough_translations(&fam, r(1), Ext::int(2)).unwrap();
        assert_eq!(gamma.table(), &[1, 1]);
    }

    #[test]
    fn family_spec_round_trip() {
        let spec: FamilySpec = serde_json::from_str(r#"{"generator":"interval","grid":[0,1,"3/2"]}"#).unwrap();
        let fam = spec.build().unwrap();
        assert_eq!(fam.len(), 6);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FamilySpec>(&text).unwrap(), spec);
    }
}
