//! Barcodes of FinVect modules over a chain, and the bottleneck distance.

use std::fmt;

use num_rational::Rational64;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::pmod::{PersistenceModule, Target};

/// A half-open bar `[birth, death)`; `death = ∞` when it survives to the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub birth: Rational64,
    pub death: Ext,
}

impl Bar {
    pub fn new(birth: Rational64, death: Ext) -> Bar {
        Bar { birth, death }
    }

    pub fn length(&self) -> Ext {
        match self.death {
            Ext::Fin(d) => Ext::Fin(d - self.birth),
            Ext::Inf => Ext::Inf,
        }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", Ext::Fin(self.birth), self.death)
    }
}

/// Chain order of the proset, smallest first. Fails unless the order is total
/// and antisymmetric.
pub fn chain_order(f: &PersistenceModule) -> Result<Vec<usize>> {
    let p = f.proset();
    if !p.is_total() || !p.is_antisymmetric() {
        return Err(Error::NotTotal);
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| (0..p.len()).filter(|&y| p.leq(y, x)).count());
    Ok(order)
}

/// Bars of a FinVect module over a chain, read off the rank function. Element
/// `x` sits at `values[x]`; a bar alive exactly on positions `s..=t` of the
/// chain is `[values(s), values(t + 1))`, or `[values(s), ∞)` at the top.
pub fn barcode_1d(f: &PersistenceModule, values: &[Rational64]) -> Result<Vec<Bar>> {
    if !matches!(f.target(), Target::FinVect(_)) {
        return Err(Error::Shape("barcodes need a FinVect module".into()));
    }
    let order = chain_order(f)?;
    let n = order.len();
    if values.len() != n {
        return Err(Error::Shape(format!("{} values for {n} elements", values.len())));
    }
    if order.windows(2).any(|w| values[w[0]] >= values[w[1]]) {
        return Err(Error::Invalid("values must increase along the chain".into()));
    }
    let mut rank = vec![vec![0i64; n]; n];
    for s in 0..n {
        for t in s..n {
            rank[s][t] = f.hom(order[s], order[t]).matrix().expect("FinVect").rank() as i64;
        }
    }
    let r = |s: isize, t: usize| -> i64 {
        if s < 0 || t >= n {
            0
        } else {
            rank[s as usize][t]
        }
    };
    let mut bars = Vec::new();
    for s in 0..n {
        for t in s..n {
            let m = r(s as isize, t) - r(s as isize - 1, t) - r(s as isize, t + 1) + r(s as isize - 1, t + 1);
            debug_assert!(m >= 0);
            let death = if t + 1 < n { Ext::Fin(values[order[t + 1]]) } else { Ext::Inf };
            for _ in 0..m {
                bars.push(Bar::new(values[order[s]], death));
            }
        }
    }
    bars.sort();
    Ok(bars)
}

fn diff(a: Ext, b: Ext) -> Ext {
    match (a, b) {
        (Ext::Inf, Ext::Inf) => Ext::ZERO,
        (Ext::Fin(x), Ext::Fin(y)) => Ext::Fin((x - y).abs()),
        _ => Ext::Inf,
    }
}

fn match_cost(a: &Bar, b: &Bar) -> Ext {
    diff(Ext::Fin(a.birth), Ext::Fin(b.birth)).max(diff(a.death, b.death))
}

fn delete_cost(a: &Bar) -> Ext {
    match a.length() {
        Ext::Fin(l) => Ext::Fin(l / 2),
        Ext::Inf => Ext::Inf,
    }
}

/// Kuhn's augmenting-path test for a perfect matching.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len()).all(|u| augment(u, adj, &mut vec![false; right], &mut owner))
}

fn bottleneck_with(a: &[Bar], b: &[Bar], round: impl Fn(Ext) -> Ext) -> Ext {
    let (na, nb) = (a.len(), b.len());
    let mc: Vec<Vec<Ext>> = a.iter().map(|x| b.iter().map(|y| round(match_cost(x, y))).collect()).collect();
    let da: Vec<Ext> = a.iter().map(|x| round(delete_cost(x))).collect();
    let db: Vec<Ext> = b.iter().map(|y| round(delete_cost(y))).collect();
    let mut cands: Vec<Ext> = mc.iter().flatten().chain(&da).chain(&db).copied().filter(Ext::is_finite).collect();
    cands.push(Ext::ZERO);
    cands.sort();
    cands.dedup();
    // left: bars of a, then diagonal copies of b; right: bars of b, then diagonal copies of a
    let feasible = |delta: Ext| {
        let mut adj = vec![Vec::new(); na + nb];
        for i in 0..na {
            for j in 0..nb {
                if mc[i][j] <= delta {
                    adj[i].push(j);
                }
            }
            if da[i] <= delta {
                adj[i].push(nb + i);
            }
        }
        for j in 0..nb {
            if db[j] <= delta {
                adj[na + j].push(j);
            }
            adj[na + j].extend(nb..nb + na);
        }
        perfect_matching(&adj, na + nb)
    };
    cands.into_iter().find(|&d| feasible(d)).unwrap_or(Ext::Inf)
}

/// Bottleneck distance between two barcodes of half-open bars.
pub fn bottleneck(a: &[Bar], b: &[Bar]) -> Ext {
    bottleneck_with(a, b, |c| c)
}

/// Bottleneck distance where every matching and deletion cost is first rounded
/// up to a multiple of `step`. This is the distance seen by shifts restricted
/// to multiples of `step`.
pub fn bottleneck_on_grid(a: &[Bar], b: &[Bar], step: Rational64) -> Ext {
    bottleneck_with(a, b, |c| match c {
        Ext::Fin(v) => Ext::Fin((v / step).ceil() * step),
        Ext::Inf => Ext::Inf,
    })
}
