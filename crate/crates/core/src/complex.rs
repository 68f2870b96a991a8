//! Finite simplicial complexes, subcomplexes, simplicial homology over `F_p`
//! and connected components.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A finite abstract simplicial complex. Simplices are sorted vertex lists,
/// stored by dimension and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SimplicialComplex {
    /// The downward closure of `maximal` (vertex index lists).
    pub fn new<S: Into<String>>(vertices: Vec<S>, maximal: &[Vec<usize>]) -> Result<SimplicialComplex> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let n = vertices.len();
        let mut all: BTreeSet<(usize, Vec<usize>)> = (0..n).map(|v| (0, vec![v])).collect();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: bad, size: n });
            }
            if s.len() > 20 {
                return Err(Error::SizeGuard(format!("simplex with {} vertices", s.len())));
            }
            let k = s.len();
            for mask in 1u32..(1u32 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                all.insert((face.len() - 1, face));
            }
        }
        let simplices: Vec<Vec<usize>> = all.into_iter().map(|(_, s)| s).collect();
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(SimplicialComplex { vertices, simplices, index })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn full(&self) -> Subcomplex {
        Subcomplex((0..self.len()).collect())
    }

    pub fn empty_sub(&self) -> Subcomplex {
        Subcomplex(BTreeSet::new())
    }

    /// The full subcomplex spanned by the vertices where `keep` holds.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> Subcomplex {
        Subcomplex((0..self.len()).filter(|&i| self.simplices[i].iter().all(|&v| keep(v))).collect())
    }

    /// Subcomplex generated by simplices given as vertex lists.
    pub fn subcomplex(&self, simplices: &[Vec<usize>]) -> Result<Subcomplex> {
        let mut out = BTreeSet::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            self.simplex_index(&s).ok_or_else(|| Error::Invalid(format!("{s:?} is not a simplex")))?;
            for mask in 1u32..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len()).filter(|j| mask >> j & 1 == 1).map(|j| s[j]).collect();
                out.insert(self.index[&face]);
            }
        }
        Ok(Subcomplex(out))
    }

    pub fn is_subcomplex(&self, s: &Subcomplex) -> bool {
        s.0.iter().all(|&i| {
            let simplex = &self.simplices[i];
            simplex.len() == 1
                || (0..simplex.len()).all(|drop| {
                    let face: Vec<usize> =
                        simplex.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, &v)| v).collect();
                    s.0.contains(&self.index[&face])
                })
        })
    }

    fn simplices_of_dim(&self, s: &Subcomplex, k: usize) -> Vec<usize> {
        s.0.iter().copied().filter(|&i| self.dim_of(i) == k).collect()
    }

    /// `∂_k` restricted to `s`: rows are the `(k−1)`-simplices of `s`, columns its `k`-simplices.
    fn boundary(&self, s: &Subcomplex, k: usize, p: u64) -> (Matrix, Vec<usize>, Vec<usize>) {
        let cols = self.simplices_of_dim(s, k);
        if k == 0 {
            return (Matrix::zeros(0, cols.len(), p), vec![], cols);
        }
        let rows = self.simplices_of_dim(s, k - 1);
        let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut m = Matrix::zeros(rows.len(), cols.len(), p);
        for (c, &i) in cols.iter().enumerate() {
            let simplex = &self.simplices[i];
            for drop in 0..simplex.len() {
                let face: Vec<usize> =
                    simplex.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, &v)| v).collect();
                let r = row_pos[&self.index[&face]];
                let sign = if drop % 2 == 0 { 1 } else { p - 1 };
                m.set(r, c, sign);
            }
        }
        (m, rows, cols)
    }

    /// Chosen basis of `H_k(s; F_p)`.
    pub fn homology_basis(&self, s: &Subcomplex, k: usize, p: u64) -> HomologyBasis {
        let (dk, _, chains) = self.boundary(s, k, p);
        let (dk1, _, _) = self.boundary(s, k + 1, p);
        let cycles = dk.nullspace();
        let boundaries: Vec<Vec<u64>> = (0..dk1.cols()).map(|j| dk1.column(j)).collect();
        let mut span: Vec<Vec<u64>> = boundaries.clone();
        let mut rank = Matrix::from_columns(&span, chains.len(), p).rank();
        let mut reps = Vec::new();
        for z in cycles {
            span.push(z.clone());
            let r = Matrix::from_columns(&span, chains.len(), p).rank();
            if r > rank {
                rank = r;
                reps.push(z);
            } else {
                span.pop();
            }
        }
        HomologyBasis { degree: k, p, chains, boundaries, reps }
    }

    /// Connected components of `s` as sorted vertex lists, ordered by least vertex.
    pub fn components(&self, s: &Subcomplex) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count());
        let mut present = vec![false; self.vertex_count()];
        for &i in &s.0 {
            let simplex = &self.simplices[i];
            if simplex.len() == 1 {
                present[simplex[0]] = true;
            } else if simplex.len() == 2 {
                uf.union(simplex[0], simplex[1]);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in (0..self.vertex_count()).filter(|&v| present[v]) {
            let root = uf.find(v);
            let g = *slot.entry(root).or_insert_with(|| {
                groups.push(vec![]);
                groups.len() - 1
            });
            groups[g].push(v);
        }
        groups
    }

    pub fn to_file(&self) -> ComplexFile {
        let maximal: Vec<Vec<String>> = self
            .simplices
            .iter()
            .filter(|s| {
                !self.simplices.iter().any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .map(|s| s.iter().map(|&v| self.vertices[v].clone()).collect())
            .collect();
        ComplexFile { vertices: self.vertices.clone(), maximal_simplices: maximal }
    }

    pub fn from_file(file: &ComplexFile) -> Result<SimplicialComplex> {
        let lookup: HashMap<&str, usize> = file.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let maximal = file
            .maximal_simplices
            .iter()
            .map(|s| {
                s.iter()
                    .map(|v| lookup.get(v.as_str()).copied().ok_or_else(|| Error::Invalid(format!("unknown vertex {v:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::new(file.vertices.clone(), &maximal)
    }
}

/// A subcomplex, as a set of simplex indices of its ambient complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcomplex(pub BTreeSet<usize>);

impl Subcomplex {
    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex(self.0.intersection(&other.0).copied().collect())
    }

    pub fn to_vertex_lists(&self, k: &SimplicialComplex) -> Vec<Vec<usize>> {
        self.0.iter().map(|&i| k.simplices()[i].clone()).collect()
    }
}

/// A basis of `H_k` of a subcomplex, given by cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: usize,
    p: u64,
    /// Global indices of the `k`-simplices, i.e. the chain coordinates.
    chains: Vec<usize>,
    boundaries: Vec<Vec<u64>>,
    reps: Vec<Vec<u64>>,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates, in this basis, of the class of a cycle given on global simplex indices.
    fn coordinates(&self, cycle: &HashMap<usize, u64>) -> Vec<u64> {
        let pos: HashMap<usize, usize> = self.chains.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut b = vec![0u64; self.chains.len()];
        for (i, &c) in cycle {
            b[pos[i]] = c;
        }
        let mut cols = self.boundaries.clone();
        cols.extend(self.reps.iter().cloned());
        let system = Matrix::from_columns(&cols, self.chains.len(), self.p);
        let x = system.solve(&b).expect("cycle lies in the larger subcomplex");
        x[self.boundaries.len()..].to_vec()
    }

    fn rep_chain(&self, j: usize) -> HashMap<usize, u64> {
        self.chains.iter().zip(&self.reps[j]).filter(|(_, &c)| c != 0).map(|(&i, &c)| (i, c)).collect()
    }
}

/// Matrix of the map `H_k(small) → H_k(large)` induced by the inclusion
/// `small ⊆ large`, in the chosen bases.
pub fn homology_induced(
    k: &SimplicialComplex,
    small: &Subcomplex,
    large: &Subcomplex,
    degree: usize,
    p: u64,
) -> Result<Matrix> {
    if !small.is_subset(large) {
        return Err(Error::Invalid("homology_induced needs an inclusion of subcomplexes".into()));
    }
    let hs = k.homology_basis(small, degree, p);
    let hl = k.homology_basis(large, degree, p);
    Ok(induced_between(&hs, &hl))
}

pub(crate) fn induced_between(hs: &HomologyBasis, hl: &HomologyBasis) -> Matrix {
    let cols: Vec<Vec<u64>> = (0..hs.dim()).map(|j| hl.coordinates(&hs.rep_chain(j))).collect();
    Matrix::from_columns(&cols, hl.dim(), hs.p)
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// JSON form of a complex, with simplices named by vertex label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

pub type SharedComplex = Arc<SimplicialComplex>;

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::new(vec!["a", "b", "c"], &[vec![0, 1, 2]]).unwrap()
    }

    fn hollow(k: &SimplicialComplex) -> Subcomplex {
        k.subcomplex(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![0], vec![1], vec![2]]).unwrap()
    }

    #[test]
    fn closure_and_counts() {
        let k = triangle();
        assert_eq!(k.len(), 7);
        assert!(k.is_subcomplex(&k.full()));
        assert!(!k.is_subcomplex(&Subcomplex([k.simplex_index(&[0, 1]).unwrap()].into_iter().collect())));
    }

    #[test]
    fn betti_numbers_of_triangles() {
        let k = triangle();
        let h = hollow(&k);
        for p in [2, 3] {
            assert_eq!(k.homology_basis(&h, 0, p).dim(), 1);
            assert_eq!(k.homology_basis(&h, 1, p).dim(), 1);
            assert_eq!(k.homology_basis(&k.full(), 1, p).dim(), 0);
            assert_eq!(k.homology_basis(&k.full(), 0, p).dim(), 1);
        }
        assert_eq!(k.homology_basis(&k.empty_sub(), 0, 2).dim(), 0);
    }

    #[test]
    fn filling_kills_the_loop() {
        let k = triangle();
        let m = homology_induced(&k, &hollow(&k), &k.full(), 1, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));
        let id = homology_induced(&k, &hollow(&k), &hollow(&k), 1, 2).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn induced_maps_compose() {
        // path a–b–c then closing edge then filling
        let k = triangle();
        let s0 = k.subcomplex(&[vec![0], vec![2]]).unwrap();
        let s1 = k.subcomplex(&[vec![0, 1], vec![1, 2]]).unwrap();
        let s2 = hollow(&k);
        for deg in 0..2 {
            let a = homology_induced(&k, &s0, &s1, deg, 3).unwrap();
            let b = homology_induced(&k, &s1, &s2, deg, 3).unwrap();
            let direct = homology_induced(&k, &s0, &s2, deg, 3).unwrap();
            assert_eq!(b.mul(&a), direct);
        }
    }

    #[test]
    fn components_merge() {
        let k = SimplicialComplex::new(vec!["a", "b", "c"], &[vec![0, 1], vec![1, 2]]).unwrap();
        let two = k.subcomplex(&[vec![0], vec![2]]).unwrap();
        assert_eq!(k.components(&two), vec![vec![0], vec![2]]);
        assert_eq!(k.components(&k.full()), vec![vec![0, 1, 2]]);
        assert!(k.components(&k.empty_sub()).is_empty());
    }

    #[test]
    fn induced_subcomplex_of_path() {
        let k = SimplicialComplex::new(vec!["v0", "v1", "v2"], &[vec![0, 1], vec![1, 2]]).unwrap();
        let f = [0, 1, 2];
        let s = k.induced(|v| f[v] <= 1);
        assert_eq!(s.to_vertex_lists(&k), vec![vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn file_round_trip() {
        let k = triangle();
        let back = SimplicialComplex::from_file(&k.to_file()).unwrap();
        assert_eq!(back, k);
    }
}
