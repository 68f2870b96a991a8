//! Finite preordered sets and monotone maps.
//!
//! Elements are addressed by index; labels are opaque strings carried along
//! for files and reports. The order is a dense bit table, closed under
//! reflexivity and transitivity at construction.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::format_rational;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(WORD).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / WORD] >> (i % WORD) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / WORD] |= 1 << (i % WORD);
    }

    fn or_assign(&mut self, other: &BitRow) -> bool {
        let mut changed = false;
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            let next = *a | *b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }
}

/// A finite preordered set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proset {
    labels: Vec<String>,
    leq: Vec<BitRow>,
}

impl fmt::Debug for Proset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Proset")
            .field("elements", &self.labels)
            .field("covers", &self.arrows())
            .finish()
    }
}

impl Proset {
    /// Builds the preorder generated by `relations`: its reflexive-transitive closure.
    pub fn new<S: Into<String>>(elements: Vec<S>, relations: &[(usize, usize)]) -> Result<Proset> {
        let labels: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut leq: Vec<BitRow> = (0..n).map(|_| BitRow::new(n)).collect();
        for (i, row) in leq.iter_mut().enumerate() {
            row.set(i);
        }
        for &(x, y) in relations {
            for idx in [x, y] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, size: n });
                }
            }
            leq[x].set(y);
        }
        close_transitively(&mut leq);
        Ok(Proset { labels, leq })
    }

    /// Builds a proset from a complete order predicate, skipping the closure.
    /// The predicate must already be reflexive and transitive.
    pub fn from_predicate<S, F>(elements: Vec<S>, le: F) -> Result<Proset>
    where
        S: Into<String>,
        F: Fn(usize, usize) -> bool,
    {
        let p = Proset::new(elements, &[])?;
        let n = p.len();
        let mut leq: Vec<BitRow> = (0..n).map(|_| BitRow::new(n)).collect();
        for (x, row) in leq.iter_mut().enumerate() {
            for y in 0..n {
                if x == y || le(x, y) {
                    row.set(y);
                }
            }
        }
        let out = Proset { labels: p.labels, leq };
        debug_assert!(n > 256 || out.is_transitive());
        Ok(out)
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

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x].get(y)
    }

    /// `x ≤ y` and not `y ≤ x`.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && !self.leq(y, x)
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|x| self.leq(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).filter(|&y| self.leq(x, y)).all(|y| (0..n).filter(|&z| self.leq(y, z)).all(|z| self.leq(x, z)))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| x == y || !self.equiv(x, y)))
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// Number of ordered pairs `(x, y)` with `x ≤ y`, reflexive pairs included.
    pub fn relation_count(&self) -> usize {
        let n = self.len();
        (0..n).map(|x| (0..n).filter(|&y| self.leq(x, y)).count()).sum()
    }

    /// Elements `y` with `x ≤ y`.
    pub fn up(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&y| self.leq(x, y))
    }

    /// The generating arrows on which module morphisms are stored: every pair
    /// of distinct equivalent elements, plus the covering relations of the
    /// strict part (`x < y` with nothing strictly in between).
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                if self.leq(y, x) {
                    out.push((x, y));
                    continue;
                }
                let covered = !(0..n).any(|z| self.lt(x, z) && self.lt(z, y));
                if covered {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Every pair `(x, y)` with `x ≤ y`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|x| (0..n).filter(move |&y| self.leq(x, y)).map(move |y| (x, y))).collect()
    }

    /// Collapses each class `x ≡ y` to a point. Returns the poset together with
    /// the projection, as a table from elements to classes.
    pub fn quotient(&self) -> (Proset, Vec<usize>) {
        let n = self.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in x..n {
                if self.equiv(x, y) {
                    class_of[y] = c;
                }
            }
        }
        let labels: Vec<String> = reps
            .iter()
            .map(|&r| {
                let members: Vec<&str> =
                    (0..n).filter(|&y| class_of[y] == class_of[r]).map(|y| self.label(y)).collect();
                if members.len() == 1 {
                    members[0].to_string()
                } else {
                    format!("[{}]", members.join("~"))
                }
            })
            .collect();
        let q = Proset::from_predicate(labels, |a, b| self.leq(reps[a], reps[b])).expect("class labels are distinct");
        (q, class_of)
    }

    pub fn to_file(&self) -> ProsetFile {
        ProsetFile { elements: self.labels.clone(), relations: self.arrows().into_iter().map(|(x, y)| [x, y]).collect() }
    }

    pub fn from_file(file: &ProsetFile) -> Result<Proset> {
        let rel: Vec<(usize, usize)> = file.relations.iter().map(|r| (r[0], r[1])).collect();
        Proset::new(file.elements.clone(), &rel)
    }
}

fn close_transitively(leq: &mut [BitRow]) {
    // repeated squaring: R ← R ∪ R·R until stable
    let n = leq.len();
    loop {
        let snapshot: Vec<BitRow> = leq.to_vec();
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if y != x && snapshot[x].get(y) {
                    changed |= leq[x].or_assign(&snapshot[y]);
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// JSON form of a proset: a generating relation, closed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProsetFile {
    pub elements: Vec<String>,
    pub relations: Vec<[usize; 2]>,
}

/// A monotone map between finite prosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub source: Arc<Proset>,
    pub target: Arc<Proset>,
    pub table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<Proset>, target: Arc<Proset>, table: Vec<usize>) -> Result<MonotoneMap> {
        if table.len() != source.len() {
            return Err(Error::Shape(format!("table has {} entries, source has {}", table.len(), source.len())));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= target.len()) {
            return Err(Error::IndexOutOfRange { index: bad, size: target.len() });
        }
        for (x, y) in source.relations() {
            if !target.leq(table[x], table[y]) {
                return Err(Error::NotMonotone(format!(
                    "{} ≤ {} but images {} ≰ {}",
                    source.label(x),
                    source.label(y),
                    target.label(table[x]),
                    target.label(table[y])
                )));
            }
        }
        Ok(MonotoneMap { source, target, table })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<usize> = self.table.iter().copied().collect();
        hit.len() == self.target.len()
    }
}

/// The quotient poset of `p` and the projection onto it.
pub fn quotient_poset(p: &Arc<Proset>) -> (Arc<Proset>, MonotoneMap) {
    let (q, table) = p.quotient();
    let q = Arc::new(q);
    let proj = MonotoneMap::new(p.clone(), q.clone(), table).expect("projection is monotone");
    (q, proj)
}

/// A finite product grid with the componentwise order.
///
/// Elements are enumerated in row-major order (the last axis varies fastest),
/// and labelled by their comma-separated coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub axes: Vec<Vec<Rational64>>,
    pub proset: Arc<Proset>,
    coords: Vec<Vec<usize>>,
}

impl Grid {
    pub fn new(axes: Vec<Vec<Rational64>>) -> Result<Grid> {
        if axes.is_empty() {
            return Err(Error::Invalid("grid needs at least one axis".into()));
        }
        for (k, axis) in axes.iter().enumerate() {
            if axis.is_empty() {
                return Err(Error::Invalid(format!("axis {k} is empty")));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("axis {k} is not strictly increasing")));
            }
        }
        let mut coords: Vec<Vec<usize>> = vec![vec![]];
        for axis in &axes {
            coords = coords
                .into_iter()
                .flat_map(|c| {
                    (0..axis.len()).map(move |i| {
                        let mut c = c.clone();
                        c.push(i);
                        c
                    })
                })
                .collect();
        }
        let labels: Vec<String> = coords
            .iter()
            .map(|c| c.iter().enumerate().map(|(k, &i)| format_rational(&axes[k][i])).collect::<Vec<_>>().join(","))
            .collect();
        let proset =
            Proset::from_predicate(labels, |x, y| coords[x].iter().zip(&coords[y]).all(|(a, b)| a <= b))?;
        Ok(Grid { axes, proset: Arc::new(proset), coords })
    }

    /// Integer grid `0..sizes[k]` on each axis.
    pub fn integer(sizes: &[usize]) -> Result<Grid> {
        Grid::new(sizes.iter().map(|&s| (0..s as i64).map(Rational64::from_integer).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Per-axis indices of element `x`.
    pub fn coords(&self, x: usize) -> &[usize] {
        &self.coords[x]
    }

    /// Coordinate values of element `x`.
    pub fn point(&self, x: usize) -> Vec<Rational64> {
        self.coords[x].iter().enumerate().map(|(k, &i)| self.axes[k][i]).collect()
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().enumerate().fold(0, |acc, (k, &i)| acc * self.axes[k].len() + i)
    }

    /// Element whose coordinates equal `point` exactly.
    pub fn locate(&self, point: &[Rational64]) -> Option<usize> {
        if point.len() != self.dim() {
            return None;
        }
        let mut c = Vec::with_capacity(point.len());
        for (k, v) in point.iter().enumerate() {
            c.push(self.axes[k].iter().position(|a| a == v)?);
        }
        Some(self.index(&c))
    }

    /// Largest axis-`k` index whose value is `≤ v`; values below the axis clamp to index 0.
    pub fn floor_on_axis(&self, k: usize, v: Rational64) -> usize {
        self.axes[k].iter().rposition(|a| *a <= v).unwrap_or(0)
    }

    /// Recognizes a proset whose labels are grid coordinates and whose order
    /// is the componentwise one.
    pub fn recognize(p: &Proset) -> Option<Grid> {
        let pts: Vec<Vec<Rational64>> = p
            .labels()
            .iter()
            .map(|l| l.split(',').map(crate::ext::parse_rational).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let dim = pts.first()?.len();
        if pts.iter().any(|q| q.len() != dim) {
            return None;
        }
        let axes: Vec<Vec<Rational64>> = (0..dim)
            .map(|k| pts.iter().map(|q| q[k]).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let g = Grid::new(axes).ok()?;
        if g.len() != p.len() {
            return None;
        }
        let perm: Vec<usize> = pts.iter().map(|q| g.locate(q)).collect::<Option<Vec<_>>>()?;
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.leq(x, y) != g.proset.leq(perm[x], perm[y]) {
                    return None;
                }
            }
        }
        if perm.iter().enumerate().all(|(i, &j)| i == j) {
            Some(g)
        } else {
            None
        }
    }
}

/// Product grid with componentwise order.
pub fn grid_proset(axes: &[Vec<Rational64>]) -> Result<Proset> {
    Ok((*Grid::new(axes.to_vec())?.proset).clone())
}

/// Closed intervals `[a, b]` with endpoints on `grid`, ordered by containment:
/// `(a₁, b₁) ≤ (a₂, b₂)` iff `a₁ ≥ a₂` and `b₁ ≤ b₂`.
pub fn interval_proset(grid: &[Rational64]) -> Result<Proset> {
    Ok(interval_pairs(grid)?.1)
}

pub(crate) fn interval_pairs(grid: &[Rational64]) -> Result<(Vec<(usize, usize)>, Proset)> {
    if grid.is_empty() {
        return Err(Error::Invalid("interval grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("interval grid is not strictly increasing".into()));
    }
    let n = grid.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let labels: Vec<String> =
        pairs.iter().map(|&(a, b)| format!("[{},{}]", format_rational(&grid[a]), format_rational(&grid[b]))).collect();
    let p = Proset::from_predicate(labels, |x, y| pairs[x].0 >= pairs[y].0 && pairs[x].1 <= pairs[y].1)?;
    Ok((pairs, p))
}

/// A closed arc of the discretized circle: `len + 1` consecutive points from
/// `start`, or the whole circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arc1 {
    Span { start: usize, len: usize },
    Full,
}

impl Arc1 {
    pub fn contains_arc(&self, other: &Arc1, m: usize) -> bool {
        match (self, other) {
            (Arc1::Full, _) => true,
            (Arc1::Span { .. }, Arc1::Full) => false,
            (Arc1::Span { start: j, len: l }, Arc1::Span { start: i, len: k }) => (i + m - j) % m + k <= *l,
        }
    }

    pub fn points(&self, m: usize) -> Vec<usize> {
        match *self {
            Arc1::Full => (0..m).collect(),
            Arc1::Span { start, len } => {
                let mut v: Vec<usize> = (0..=len).map(|k| (start + k) % m).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

pub(crate) fn arcs(m: usize) -> Vec<Arc1> {
    let mut out: Vec<Arc1> = (0..m).flat_map(|len| (0..m).map(move |start| Arc1::Span { start, len })).collect();
    out.push(Arc1::Full);
    out
}

/// Arcs on `m` equispaced circle points plus the full circle, ordered by
/// containment of the arcs as subsets of the circle.
pub fn arc_proset(m: usize) -> Result<Proset> {
    if m < 3 {
        return Err(Error::Invalid(format!("circle resolution {m} < 3")));
    }
    let all = arcs(m);
    let labels: Vec<String> = all
        .iter()
        .map(|a| match a {
            Arc1::Full => "S1".to_string(),
            Arc1::Span { start, len } => format!("[{},{}]", start, start + len),
        })
        .collect();
    Proset::from_predicate(labels, |x, y| all[y].contains_arc(&all[x], m))
}

pub const SUBSET_GUARD: usize = 12;

/// The power set of `{0, …, n−1}` ordered by inclusion. Element `i` is the
/// subset whose bitmask is `i`.
pub fn subset_proset(n: usize) -> Result<Proset> {
    if n > SUBSET_GUARD {
        return Err(Error::SizeGuard(format!("subset poset on {n} > {SUBSET_GUARD} points")));
    }
    let labels: Vec<String> = (0..1usize << n)
        .map(|mask| {
            let items: Vec<String> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b.to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    Proset::from_predicate(labels, |x, y| x & !y == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational64 {
        Rational64::from_integer(v)
    }

    #[test]
    fn closure_adds_reflexivity_and_transitivity() {
        let p = Proset::new(vec!["a", "b"], &[(0, 1)]).unwrap();
        assert!(p.leq(0, 0) && p.leq(1, 1) && p.leq(0, 1) && !p.leq(1, 0));
        let chain = Proset::new(vec!["0", "1", "2"], &[(0, 1), (1, 2)]).unwrap();
        assert!(chain.leq(0, 2));
        assert!(chain.is_total());
    }

    #[test]
    fn cycles_give_equivalent_elements() {
        let p = Proset::new(vec!["a", "b"], &[(0, 1), (1, 0)]).unwrap();
        assert!(p.equiv(0, 1));
        assert!(!p.is_antisymmetric());
        let (q, proj) = quotient_poset(&Arc::new(p));
        assert_eq!(q.len(), 1);
        assert!(proj.is_surjective());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(Proset::new(vec!["a", "a"], &[]).unwrap_err(), Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn quotient_of_poset_is_bijective() {
        let p = Arc::new(Proset::new(vec!["0", "1", "2"], &[(0, 1), (1, 2)]).unwrap());
        let (q, proj) = quotient_poset(&p);
        assert_eq!(q.len(), 3);
        assert_eq!(proj.table, vec![0, 1, 2]);
    }

    #[test]
    fn two_cycles_with_cross_relation_collapse_to_chain() {
        // a≡b, c≡d, b≤c
        let p = Arc::new(Proset::new(vec!["a", "b", "c", "d"], &[(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap());
        // brute-force equivalence classes
        let mut classes: Vec<Vec<usize>> = vec![];
        for x in 0..4 {
            if let Some(c) = classes.iter_mut().find(|c| p.equiv(c[0], x)) {
                c.push(x);
            } else {
                classes.push(vec![x]);
            }
        }
        assert_eq!(classes, vec![vec![0, 1], vec![2, 3]]);
        let (q, proj) = quotient_poset(&p);
        assert_eq!(q.len(), 2);
        assert!(q.is_total() && q.is_antisymmetric());
        assert_eq!(proj.table, vec![0, 0, 1, 1]);
    }

    #[test]
    fn grid_generators() {
        let g1 = grid_proset(&[vec![r(0), r(1), r(2)]]).unwrap();
        assert_eq!(g1.len(), 3);
        assert!(g1.is_total());
        let g2 = grid_proset(&[vec![r(0), r(1)], vec![r(0), r(1)]]).unwrap();
        assert_eq!(g2.len(), 4);
        // brute force: pairs (a,b),(c,d) with a≤c, b≤d
        let mut count = 0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if a <= c && b <= d {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 9);
        assert_eq!(g2.relation_count(), count);
        let g3 = grid_proset(&[vec![r(0)], vec![r(0)], vec![r(0)]]).unwrap();
        assert_eq!(g3.len(), 1);
    }

    #[test]
    fn grid_recognition_round_trips() {
        let g = Grid::integer(&[3, 2]).unwrap();
        let back = Grid::recognize(&g.proset).unwrap();
        assert_eq!(back.axes, g.axes);
        let chain = Proset::new(vec!["x", "y"], &[(0, 1)]).unwrap();
        assert!(Grid::recognize(&chain).is_none());
    }

    #[test]
    fn interval_generator() {
        let p = interval_proset(&[r(0), r(1)]).unwrap();
        assert_eq!(p.labels(), &["[0,0]", "[0,1]", "[1,1]"]);
        let i00 = p.index_of("[0,0]").unwrap();
        let i01 = p.index_of("[0,1]").unwrap();
        let i11 = p.index_of("[1,1]").unwrap();
        assert!(p.leq(i00, i01) && p.leq(i11, i01) && !p.leq(i00, i11));
        assert_eq!(interval_proset(&[r(0)]).unwrap().len(), 1);
        let p3 = interval_proset(&[r(0), r(1), r(2)]).unwrap();
        assert_eq!(p3.len(), 6);
        assert!(p3.leq(p3.index_of("[1,1]").unwrap(), p3.index_of("[0,2]").unwrap()));
    }

    #[test]
    fn arc_generator() {
        let p = arc_proset(3).unwrap();
        assert_eq!(p.len(), 10);
        let full = p.index_of("S1").unwrap();
        assert!((0..p.len()).all(|x| p.leq(x, full)));
        assert!(p.is_antisymmetric());
        let p4 = arc_proset(4).unwrap();
        assert!(p4.leq(p4.index_of("[0,1]").unwrap(), p4.index_of("[0,2]").unwrap()));
        assert!(arc_proset(2).is_err());
    }

    #[test]
    fn subset_generator_and_guard() {
        assert_eq!(subset_proset(1).unwrap().len(), 2);
        let d = subset_proset(2).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.leq(0, 3) && !d.leq(1, 2));
        assert!(subset_proset(12).is_ok());
        assert!(matches!(subset_proset(13), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn generated_prosets_are_preorders() {
        let all = vec![
            grid_proset(&[vec![r(0), r(1), r(2)], vec![r(0), r(2)]]).unwrap(),
            interval_proset(&[r(0), r(1), r(2), r(3)]).unwrap(),
            arc_proset(5).unwrap(),
            subset_proset(4).unwrap(),
        ];
        for p in all {
            assert!(p.is_reflexive() && p.is_transitive());
        }
    }

    #[test]
    fn file_round_trip() {
        let p = arc_proset(4).unwrap();
        let back = Proset::from_file(&p.to_file()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn monotone_map_rejects_order_reversal() {
        let c = Arc::new(Proset::new(vec!["0", "1"], &[(0, 1)]).unwrap());
        assert!(MonotoneMap::new(c.clone(), c.clone(), vec![1, 0]).is_err());
        assert!(MonotoneMap::new(c.clone(), c, vec![1, 1]).is_ok());
    }
}
