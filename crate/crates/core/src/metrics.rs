//! Lawvere metrics, sublinear projections, superlinear families and the
//! Galois connection between them, plus Hausdorff distances and offsets on
//! subsets of a finite metric space.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{format_rational, rational_serde, Ext};
use crate::proset::{Grid, Proset};
use crate::translations::Translation;

/// A table `d: n × n → [0, ∞]` with `d(x, x) = 0` and the triangle inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawvereMetric {
    d: Vec<Vec<Ext>>,
}

impl LawvereMetric {
    pub fn new(d: Vec<Vec<Ext>>) -> Result<LawvereMetric> {
        let m = LawvereMetric { d };
        m.validate()?;
        Ok(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Ext) -> Result<LawvereMetric> {
        LawvereMetric::new((0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect())
    }

    /// Shortest-path closure of an arbitrary nonnegative table; always a Lawvere metric.
    pub fn closure(mut d: Vec<Vec<Ext>>) -> LawvereMetric {
        let n = d.len();
        for (x, row) in d.iter_mut().enumerate() {
            row[x] = Ext::ZERO;
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let via = d[x][k] + d[k][y];
                    if via < d[x][y] {
                        d[x][y] = via;
                    }
                }
            }
        }
        LawvereMetric { d }
    }

    /// `|v_i − v_j|` on a list of points of the line.
    pub fn line(values: &[Rational64]) -> LawvereMetric {
        LawvereMetric { d: values.iter().map(|a| values.iter().map(|b| Ext::Fin((a - b).abs())).collect()).collect() }
    }

    /// Sup-norm distance between grid points.
    pub fn sup_norm(grid: &Grid) -> LawvereMetric {
        let pts: Vec<Vec<Rational64>> = (0..grid.len()).map(|x| grid.point(x)).collect();
        let d = pts
            .iter()
            .map(|a| {
                pts.iter()
                    .map(|b| Ext::Fin(a.iter().zip(b).map(|(u, v)| (u - v).abs()).max().unwrap_or_default()))
                    .collect()
            })
            .collect();
        LawvereMetric { d }
    }

    /// Geodesic step distance on `m` equispaced points of a circle.
    pub fn circle(m: usize) -> LawvereMetric {
        let d = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let k = i.abs_diff(j);
                        Ext::int(k.min(m - k) as i64)
                    })
                    .collect()
            })
            .collect();
        LawvereMetric { d }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.d.len();
        if let Some(i) = self.d.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!("row {i} has {} entries, expected {n}", self.d[i].len())));
        }
        for x in 0..n {
            if !self.d[x][x].is_zero() {
                return Err(Error::InvalidMetric(format!("d({x},{x}) = {} ≠ 0", self.d[x][x])));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.d[x][z] > self.d[x][y] + self.d[y][z] {
                        return Err(Error::InvalidMetric(format!(
                            "d({x},{z}) = {} > d({x},{y}) + d({y},{z}) = {}",
                            self.d[x][z],
                            self.d[x][y] + self.d[y][z]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Ext {
        self.d[x][y]
    }

    pub fn table(&self) -> &[Vec<Ext>] {
        &self.d
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.d[x][y] == self.d[y][x]))
    }

    pub fn to_file(&self) -> MetricFile {
        MetricFile { n: self.len(), d: self.d.clone() }
    }

    pub fn from_file(file: &MetricFile) -> Result<LawvereMetric> {
        if file.d.len() != file.n {
            return Err(Error::InvalidMetric(format!("n = {} but {} rows", file.n, file.d.len())));
        }
        LawvereMetric::new(file.d.clone())
    }
}

/// JSON form `{"n": k, "d": [[...]]}` with `"inf"` for `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricFile {
    pub n: usize,
    pub d: Vec<Vec<Ext>>,
}

/// A map from translations to `[0, ∞]`, given by a closed formula or a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SublinearProjection {
    /// `ω_Γ = sup_x d(x, Γx)`.
    Lawvere(LawvereMetric),
    /// `ω_Γ = sup_{x,k} (Γ(x) − x)_k / a_k` on a grid.
    Weighted { grid: Grid, a: Vec<Rational64> },
    /// Explicit values per translation table; missing tables evaluate to `∞`.
    Tabulated(HashMap<Vec<usize>, Ext>),
}

impl SublinearProjection {
    pub fn weighted(grid: Grid, a: Vec<Rational64>) -> Result<SublinearProjection> {
        if a.len() != grid.dim() {
            return Err(Error::Shape(format!("weight vector has {} entries, grid has {} axes", a.len(), grid.dim())));
        }
        if a.iter().any(|w| *w <= Rational64::zero()) {
            return Err(Error::Invalid("weights must be strictly positive".into()));
        }
        Ok(SublinearProjection::Weighted { grid, a })
    }

    pub fn tabulate(translations: &[Translation], f: impl Fn(&Translation) -> Ext) -> SublinearProjection {
        SublinearProjection::Tabulated(translations.iter().map(|t| (t.table().to_vec(), f(t))).collect())
    }

    pub fn evaluate(&self, gamma: &Translation) -> Ext {
        match self {
            SublinearProjection::Lawvere(d) => omega_from_lawvere(d, gamma),
            SublinearProjection::Weighted { grid, a } => {
                let mut best = Rational64::zero();
                for x in 0..grid.len() {
                    let (p, q) = (grid.point(x), grid.point(gamma.apply(x)));
                    for k in 0..grid.dim() {
                        best = best.max((q[k] - p[k]) / a[k]);
                    }
                }
                Ext::Fin(best)
            }
            SublinearProjection::Tabulated(t) => t.get(gamma.table()).copied().unwrap_or(Ext::Inf),
        }
    }
}

/// `sup_x d(x, Γx)`.
pub fn omega_from_lawvere(d: &LawvereMetric, gamma: &Translation) -> Ext {
    (0..gamma.table().len()).map(|x| d.get(x, gamma.apply(x))).max().unwrap_or(Ext::ZERO)
}

/// `ω_I = 0` and `ω_{ΓK} ≤ ω_Γ + ω_K` over all pairs from `translations`.
pub fn check_sublinear(omega: &SublinearProjection, translations: &[Translation]) -> bool {
    let values: Vec<Ext> = translations.iter().map(|t| omega.evaluate(t)).collect();
    let index: HashMap<&[usize], usize> = translations.iter().enumerate().map(|(i, t)| (t.table(), i)).collect();
    for (i, g) in translations.iter().enumerate() {
        if g.is_identity() && !values[i].is_zero() {
            return false;
        }
        for (j, k) in translations.iter().enumerate() {
            let gk = g.compose(k).expect("same proset");
            let v = match index.get(gk.table()) {
                Some(&c) => values[c],
                None => omega.evaluate(&gk),
            };
            if v > values[i] + values[j] {
                return false;
            }
        }
    }
    true
}

/// `Γ ≤ Γ' ⇒ ω_Γ ≤ ω_{Γ'}` over all pairs.
pub fn check_monotone(omega: &SublinearProjection, translations: &[Translation]) -> bool {
    let values: Vec<Ext> = translations.iter().map(|t| omega.evaluate(t)).collect();
    translations.iter().enumerate().all(|(i, a)| {
        translations.iter().enumerate().all(|(j, b)| !a.leq_unchecked(b) || values[i] <= values[j])
    })
}

/// `inf { ω_{Γ'} | Γ' ≥ Γ }` over an exhaustive list.
pub fn monotone_hull(omega: &SublinearProjection, gamma: &Translation, all: &[Translation]) -> Ext {
    all.iter().filter(|t| gamma.leq_unchecked(t)).map(|t| omega.evaluate(t)).min().unwrap_or(Ext::Inf)
}

/// The monotone hull as a table over `all`.
pub fn monotone_hull_table(omega: &SublinearProjection, all: &[Translation]) -> SublinearProjection {
    let values: Vec<Ext> = all.iter().map(|t| omega.evaluate(t)).collect();
    SublinearProjection::Tabulated(
        all.iter()
            .map(|g| {
                let v = all.iter().zip(&values).filter(|(t, _)| g.leq_unchecked(t)).map(|(_, v)| *v).min();
                (g.table().to_vec(), v.unwrap_or(Ext::Inf))
            })
            .collect(),
    )
}

/// A family `ε ↦ Ω_ε` tabulated on a finite grid of ε values starting at 0.
/// Between grid points the family is extended by `Ω_ε = Ω_{⌊ε⌋}` (the largest
/// grid value not above ε).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperlinearFamily {
    proset: Arc<Proset>,
    eps: Vec<Rational64>,
    at: Vec<Translation>,
}

impl SuperlinearFamily {
    pub fn new(proset: Arc<Proset>, eps: Vec<Rational64>, at: Vec<Translation>) -> Result<SuperlinearFamily> {
        if eps.is_empty() || !eps[0].is_zero() {
            return Err(Error::Invalid("ε grid must start at 0".into()));
        }
        if eps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("ε grid must be strictly increasing".into()));
        }
        if eps.len() != at.len() {
            return Err(Error::Shape(format!("{} ε values but {} translations", eps.len(), at.len())));
        }
        if at.iter().any(|t| t.proset().as_ref() != proset.as_ref()) {
            return Err(Error::ProsetMismatch);
        }
        Ok(SuperlinearFamily { proset, eps, at })
    }

    pub fn from_tables(proset: Arc<Proset>, eps: Vec<Rational64>, tables: Vec<Vec<usize>>) -> Result<SuperlinearFamily> {
        let at = tables.into_iter().map(|t| Translation::new(proset.clone(), t)).collect::<Result<Vec<_>>>()?;
        SuperlinearFamily::new(proset, eps, at)
    }

    pub fn proset(&self) -> &Arc<Proset> {
        &self.proset
    }

    pub fn eps(&self) -> &[Rational64] {
        &self.eps
    }

    pub fn members(&self) -> &[Translation] {
        &self.at
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    /// `Ω_ε` for `ε` exactly on the grid.
    pub fn at(&self, eps: Rational64) -> Option<&Translation> {
        self.eps.iter().position(|e| *e == eps).map(|i| &self.at[i])
    }

    /// `Ω_ε` for any finite `ε ≥ 0`, by the floor extension. `None` for `∞`.
    pub fn at_floor(&self, eps: Ext) -> Option<&Translation> {
        let e = eps.finite()?;
        let i = self.eps.iter().rposition(|g| *g <= e)?;
        Some(&self.at[i])
    }

    /// Monotonicity in ε.
    pub fn is_monotone(&self) -> bool {
        self.at.windows(2).all(|w| w[0].leq_unchecked(&w[1]))
    }

    /// Superlinearity on the whole half-line under the floor extension:
    /// `Ω_{⌊ε₁+ε₂⌋} ≥ Ω_{ε₁} Ω_{ε₂}` for all grid pairs.
    pub fn is_superlinear_everywhere(&self) -> bool {
        if !self.is_monotone() {
            return false;
        }
        for (i, a) in self.eps.iter().enumerate() {
            for (j, b) in self.eps.iter().enumerate() {
                let sum = self.at_floor(Ext::Fin(a + b)).expect("sum ≥ 0 is on the half-line");
                let comp = self.at[i].compose(&self.at[j]).expect("same proset");
                if !comp.leq_unchecked(sum) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile { eps: self.eps.clone(), tables: self.at.iter().map(|t| t.table().to_vec()).collect() }
    }

    pub fn from_file(proset: Arc<Proset>, file: &FamilyFile) -> Result<SuperlinearFamily> {
        SuperlinearFamily::from_tables(proset, file.eps.clone(), file.tables.clone())
    }
}

/// JSON form `{"eps": [...], "tables": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    #[serde(with = "rational_vec")]
    pub eps: Vec<Rational64>,
    pub tables: Vec<Vec<usize>>,
}

pub mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct R(#[serde(with = "rational_serde")] Rational64);

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| R(*r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational64>, D::Error> {
        Ok(Vec::<R>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

/// Monotonicity plus `Ω_{ε₁+ε₂} ≥ Ω_{ε₁} Ω_{ε₂}` whenever `ε₁ + ε₂` is on the grid.
pub fn check_superlinear(family: &SuperlinearFamily) -> bool {
    if !family.is_monotone() {
        return false;
    }
    for (i, a) in family.eps.iter().enumerate() {
        for (j, b) in family.eps.iter().enumerate() {
            if let Some(sum) = family.at(a + b) {
                let comp = family.at[i].compose(&family.at[j]).expect("same proset");
                if !comp.leq_unchecked(sum) {
                    return false;
                }
            }
        }
    }
    true
}

/// `ω_Γ ≤ ε ⇔ Γ ≤ Ω_ε` for every listed `Γ` and every grid `ε`.
pub fn adjoint_check(omega: &SublinearProjection, family: &SuperlinearFamily, translations: &[Translation]) -> bool {
    translations.iter().all(|g| {
        let w = omega.evaluate(g);
        family.eps.iter().zip(&family.at).all(|(e, big)| (w <= Ext::Fin(*e)) == g.leq_unchecked(big))
    })
}

/// `inf { ε on the grid | Γ ≤ Ω_ε }`, or `∞`.
pub fn omega_from_family(family: &SuperlinearFamily, gamma: &Translation) -> Ext {
    family
        .eps
        .iter()
        .zip(&family.at)
        .find(|(_, big)| gamma.leq_unchecked(big))
        .map(|(e, _)| Ext::Fin(*e))
        .unwrap_or(Ext::Inf)
}

/// `Ω_ε = sup { Γ | ω_Γ ≤ ε }` for each grid ε.
///
/// The supremum is computed pointwise as a least upper bound in the proset
/// (the first such element by index when several are equivalent). It must
/// be a listed translation whose monotone-hull value is at most ε.
pub fn family_from_omega(
    omega: &SublinearProjection,
    eps_grid: &[Rational64],
    translations: &[Translation],
) -> Result<SuperlinearFamily> {
    let first = translations.first().ok_or_else(|| Error::Invalid("empty translation list".into()))?;
    let p = first.proset().clone();
    let values: Vec<Ext> = translations.iter().map(|t| omega.evaluate(t)).collect();
    let index: HashMap<&[usize], usize> = translations.iter().enumerate().map(|(i, t)| (t.table(), i)).collect();
    let mut at = Vec::with_capacity(eps_grid.len());
    for e in eps_grid {
        let bound = Ext::Fin(*e);
        let cands: Vec<&Translation> =
            translations.iter().zip(&values).filter(|(_, v)| **v <= bound).map(|(t, _)| t).collect();
        let not_realized = || Error::SupremumNotRealized { eps: format_rational(e) };
        let mut table = Vec::with_capacity(p.len());
        for x in 0..p.len() {
            let images: BTreeSet<usize> = cands.iter().map(|t| t.apply(x)).collect();
            table.push(least_upper_bound(&p, &images).ok_or_else(not_realized)?);
        }
        let &i = index.get(table.as_slice()).ok_or_else(not_realized)?;
        let top = &translations[i];
        // the supremum must itself qualify, up to the monotone hull
        if monotone_hull(omega, top, translations) > bound {
            return Err(not_realized());
        }
        at.push(top.clone());
    }
    SuperlinearFamily::new(p, eps_grid.to_vec(), at)
}

fn least_upper_bound(p: &Proset, set: &BTreeSet<usize>) -> Option<usize> {
    let uppers: Vec<usize> = (0..p.len()).filter(|&u| set.iter().all(|&s| p.leq(s, u))).collect();
    uppers.iter().copied().find(|&u| uppers.iter().all(|&v| p.leq(u, v)))
}

/// `ℓ_H(A, B) = sup_{b ∈ B} inf_{a ∈ A} d(a, b)`, with `sup ∅ = 0` and `inf ∅ = ∞`.
pub fn asym_hausdorff(d: &LawvereMetric, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Ext {
    b.iter()
        .map(|&y| a.iter().map(|&x| d.get(x, y)).min().unwrap_or(Ext::Inf))
        .max()
        .unwrap_or(Ext::ZERO)
}

/// `max(ℓ_H(A, B), ℓ_H(B, A))`.
pub fn hausdorff(d: &LawvereMetric, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Ext {
    asym_hausdorff(d, a, b).max(asym_hausdorff(d, b, a))
}

/// `Aᵉ = { m | inf_{a ∈ A} d(a, m) ≤ ε }`.
pub fn offset(d: &LawvereMetric, a: &BTreeSet<usize>, eps: Rational64) -> BTreeSet<usize> {
    let e = Ext::Fin(eps);
    (0..d.len()).filter(|&m| a.iter().any(|&x| d.get(x, m) <= e)).collect()
}

/// The weak ε-offset. In a finite space the infimum is attained, so this is [`offset`].
pub fn weak_offset(d: &LawvereMetric, a: &BTreeSet<usize>, eps: Rational64) -> BTreeSet<usize> {
    offset(d, a, eps)
}

/// The clamped shift family `Ω_ε(x) = ⌊x + εa⌋` on a grid, where each axis
/// value is snapped down to the grid and clamped to the axis maximum.
pub fn shift_family(grid: &Grid, a: &[Rational64], eps: Vec<Rational64>) -> Result<SuperlinearFamily> {
    if a.len() != grid.dim() {
        return Err(Error::Shape(format!("direction has {} entries, grid has {} axes", a.len(), grid.dim())));
    }
    if a.iter().any(|w| *w < Rational64::zero()) {
        return Err(Error::Invalid("direction must be nonnegative".into()));
    }
    let at = eps.iter().map(|e| shift_translation(grid, a, *e)).collect();
    SuperlinearFamily::new(grid.proset.clone(), eps, at)
}

/// `x ↦ ⌊x + εa⌋` on a grid.
pub fn shift_translation(grid: &Grid, a: &[Rational64], eps: Rational64) -> Translation {
    let table = (0..grid.len())
        .map(|x| {
            let p = grid.point(x);
            let c: Vec<usize> = (0..grid.dim()).map(|k| grid.floor_on_axis(k, p[k] + eps * a[k])).collect();
            grid.index(&c)
        })
        .collect();
    Translation::new_unchecked(grid.proset.clone(), table)
}

/// The standard family `x ↦ ⌊x + ε𝟙⌋`, with ε ranging over every
/// coordinate difference that can occur on the grid.
pub fn standard_family(grid: &Grid) -> SuperlinearFamily {
    let ones = vec![Rational64::from_integer(1); grid.dim()];
    shift_family(grid, &ones, grid_differences(grid)).expect("standard family is well-formed")
}

/// All nonnegative differences of values on a common axis, sorted, starting at 0.
pub fn grid_differences(grid: &Grid) -> Vec<Rational64> {
    let mut set = BTreeSet::from([Rational64::zero()]);
    for axis in &grid.axes {
        for a in axis {
            for b in axis {
                if b > a {
                    set.insert(b - a);
                }
            }
        }
    }
    set.into_iter().collect()
}
