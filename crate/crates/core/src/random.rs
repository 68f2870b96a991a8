//! Seeded generators for prosets, metrics, modules, complexes and functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::ext::Ext;
use crate::invimage::{FiniteMetricSpace, VertexFunction};
use crate::linalg::Matrix;
use crate::metrics::LawvereMetric;
use crate::pmod::PersistenceModule;
use crate::proset::Proset;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Every reflexive, transitive relation on `{0, …, n−1}`, in order of the
/// bitmask of off-diagonal pairs. There are 1, 1, 4, 29, 355 for `n ≤ 4`.
pub fn all_preorders(n: usize) -> Vec<Proset> {
    assert!(n <= 5, "too many relations to enumerate");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let rel = |x: usize, y: usize| x == y || pairs.iter().position(|&p| p == (x, y)).is_some_and(|i| mask >> i & 1 == 1);
        let transitive = (0..n).all(|x| (0..n).all(|y| !rel(x, y) || (0..n).all(|z| !rel(y, z) || rel(x, z))));
        if transitive {
            out.push(Proset::from_predicate(labels(n), rel).expect("labels are distinct"));
        }
    }
    out
}

/// A random poset: each pair `i < j` of a shuffled order is related with
/// probability `density`, then closed transitively.
pub fn random_poset(rng: &mut Rng64, n: usize, density: f64) -> Proset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((perm[i], perm[j]));
            }
        }
    }
    Proset::new(labels(n), &rel).expect("labels are distinct")
}

/// A random preorder: random generating pairs in both directions.
pub fn random_preorder(rng: &mut Rng64, n: usize, density: f64) -> Proset {
    let mut rel = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.gen_bool(density) {
                rel.push((x, y));
            }
        }
    }
    Proset::new(labels(n), &rel).expect("labels are distinct")
}

/// A random Lawvere metric: entries in `0..=max` or `∞`, closed under the
/// triangle inequality.
pub fn random_lawvere(rng: &mut Rng64, n: usize, max: i64, p_inf: f64) -> LawvereMetric {
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y {
                        Ext::ZERO
                    } else if rng.gen_bool(p_inf) {
                        Ext::Inf
                    } else {
                        Ext::int(rng.gen_range(0..=max))
                    }
                })
                .collect()
        })
        .collect();
    LawvereMetric::closure(d)
}

/// Whether `set` is convex: `x ≤ y ≤ z` with `x, z ∈ set` forces `y ∈ set`.
fn is_convex(p: &Proset, set: &[bool]) -> bool {
    let n = p.len();
    (0..n).all(|y| {
        set[y] || !(0..n).any(|x| set[x] && p.leq(x, y) && (0..n).any(|z| set[z] && p.leq(y, z)))
    })
}

fn random_convex(rng: &mut Rng64, p: &Proset) -> Vec<bool> {
    loop {
        let set: Vec<bool> = (0..p.len()).map(|_| rng.gen_bool(0.5)).collect();
        if set.iter().any(|&b| b) && is_convex(p, &set) {
            return set;
        }
    }
}

fn random_matrix(rng: &mut Rng64, rows: usize, cols: usize, p: u64) -> Matrix {
    let mut m = Matrix::zeros(rows, cols, p);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_range(0..p));
        }
    }
    m
}

fn random_invertible(rng: &mut Rng64, n: usize, p: u64) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n, p);
        if m.rank() == n {
            return m;
        }
    }
}

/// Direct sum of indicator modules of random convex sets, at most `max_dim`
/// deep anywhere, followed by a random change of basis at every element.
pub fn random_indicator_sum(rng: &mut Rng64, proset: &Arc<Proset>, p: u64, max_dim: usize) -> PersistenceModule {
    let n = proset.len();
    let mut sets: Vec<Vec<bool>> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_dim + 1) {
        let s = random_convex(rng, proset);
        let fits = (0..n).all(|x| !s[x] || sets.iter().filter(|t| t[x]).count() < max_dim);
        if fits {
            sets.push(s);
        }
    }
    let members: Vec<Vec<usize>> = (0..n).map(|x| (0..sets.len()).filter(|&k| sets[k][x]).collect()).collect();
    let dims: Vec<usize> = members.iter().map(Vec::len).collect();
    let basis: Vec<Matrix> = dims.iter().map(|&d| random_invertible(rng, d, p)).collect();
    let maps = proset
        .arrows()
        .into_iter()
        .map(|(x, y)| {
            let mut m = Matrix::zeros(dims[y], dims[x], p);
            for (j, k) in members[x].iter().enumerate() {
                if let Some(i) = members[y].iter().position(|l| l == k) {
                    m.set(i, j, 1);
                }
            }
            let conj = basis[y].mul(&m).mul(&basis[x].inverse().expect("invertible"));
            ((x, y), conj)
        })
        .collect();
    PersistenceModule::finvect(proset.clone(), p, dims, maps).expect("indicator sums are well-formed")
}

/// Random matrices on the generating arrows, kept only if functorial; up to
/// `tries` attempts.
pub fn random_functorial(rng: &mut Rng64, proset: &Arc<Proset>, p: u64, max_dim: usize, tries: usize) -> Option<PersistenceModule> {
    for _ in 0..tries {
        let dims: Vec<usize> = (0..proset.len()).map(|_| rng.gen_range(0..=max_dim)).collect();
        let maps: BTreeMap<(usize, usize), Matrix> =
            proset.arrows().into_iter().map(|(x, y)| ((x, y), random_matrix(rng, dims[y], dims[x], p))).collect();
        let m = PersistenceModule::finvect(proset.clone(), p, dims, maps).expect("shapes match");
        if m.is_valid() {
            return Some(m);
        }
    }
    None
}

/// A random FinVect(p) module with every dimension at most `max_dim`: half
/// the time unconstrained matrices filtered for functoriality, otherwise (or
/// when that fails) a twisted indicator sum.
pub fn random_finvect(rng: &mut Rng64, proset: &Arc<Proset>, p: u64, max_dim: usize) -> PersistenceModule {
    if rng.gen_bool(0.5) {
        if let Some(m) = random_functorial(rng, proset, p, max_dim, 64) {
            return m;
        }
    }
    random_indicator_sum(rng, proset, p, max_dim)
}

/// A random complex on `n` vertices: edges with probability `p_edge`, and
/// each triangle whose edges are present with probability `p_tri`.
pub fn random_complex(rng: &mut Rng64, n: usize, p_edge: f64, p_tri: f64) -> SimplicialComplex {
    let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edge = vec![vec![false; n]; n];
    let mut maximal: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_edge) {
                edge[a][b] = true;
                maximal.push(vec![a, b]);
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if edge[a][b] && edge[a][c] && edge[b][c] && rng.gen_bool(p_tri) {
                    maximal.push(vec![a, b, c]);
                }
            }
        }
    }
    SimplicialComplex::new(verts, &maximal).expect("faces of a random complex are valid")
}

/// Uniformly random values in the space.
pub fn random_function(rng: &mut Rng64, complex: &Arc<SimplicialComplex>, space: &FiniteMetricSpace) -> VertexFunction {
    let values = (0..complex.vertex_count()).map(|_| rng.gen_range(0..space.len())).collect();
    VertexFunction::new(complex.clone(), values, space).expect("values are in range")
}

/// `f` with each value replaced, with probability `p_move`, by a point at
/// distance at most `radius` in both directions.
pub fn perturb_function(rng: &mut Rng64, f: &VertexFunction, space: &FiniteMetricSpace, radius: Ext, p_move: f64) -> VertexFunction {
    let values = f
        .values
        .iter()
        .map(|&v| {
            if !rng.gen_bool(p_move) {
                return v;
            }
            let near: Vec<usize> = (0..space.len()).filter(|&w| space.d(v, w) <= radius && space.d(w, v) <= radius).collect();
            *near.choose(rng).expect("a point is near itself")
        })
        .collect();
    VertexFunction::new(f.complex.clone(), values, space).expect("values are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn generated_modules_are_functorial() {
        let mut r = rng(7);
        for _ in 0..50 {
            let p = Arc::new(random_poset(&mut r, 5, 0.4));
            let m = random_finvect(&mut r, &p, 2, 2);
            assert!(m.is_valid());
            assert!(m.objects().iter().all(|o| o.size() <= 2));
        }
        for _ in 0..20 {
            let p = Arc::new(random_preorder(&mut r, 4, 0.3));
            assert!(random_indicator_sum(&mut r, &p, 3, 2).is_valid());
        }
    }

    #[test]
    fn generated_metrics_are_lawvere() {
        let mut r = rng(1);
        for _ in 0..20 {
            assert!(random_lawvere(&mut r, 4, 3, 0.2).validate().is_ok());
        }
    }

    #[test]
    fn seeding_is_deterministic() {
        let (mut a, mut b) = (rng(42), rng(42));
        let p = Arc::new(random_poset(&mut a, 4, 0.5));
        let q = Arc::new(random_poset(&mut b, 4, 0.5));
        assert_eq!(p, q);
        assert_eq!(random_finvect(&mut a, &p, 2, 2), random_finvect(&mut b, &q, 2, 2));
    }
}
