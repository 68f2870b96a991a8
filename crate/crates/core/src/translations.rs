//! Translations: inflationary monotone self-maps of a proset.
//!
//! Translations form an ordered monoid under composition and the pointwise
//! order. They act on persistence modules by precomposition.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmod::{Morphism, NaturalTransformation, PersistenceModule};
use crate::proset::Proset;

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Translation {
    proset: Arc<Proset>,
    table: Vec<usize>,
}

impl fmt::Debug for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Translation{:?}", self.table)
    }
}

/// Whether `table` is monotone and inflationary on `p`.
pub fn is_translation(p: &Proset, table: &[usize]) -> bool {
    check_translation(p, table).is_ok()
}

fn check_translation(p: &Proset, table: &[usize]) -> Result<()> {
    if table.len() != p.len() {
        return Err(Error::Shape(format!("table has {} entries, proset has {}", table.len(), p.len())));
    }
    if let Some(&bad) = table.iter().find(|&&j| j >= p.len()) {
        return Err(Error::IndexOutOfRange { index: bad, size: p.len() });
    }
    for (x, &tx) in table.iter().enumerate() {
        if !p.leq(x, tx) {
            return Err(Error::NotATranslation(format!("{} ≰ Γ({0}) = {}", p.label(x), p.label(tx))));
        }
    }
    for (x, y) in p.relations() {
        if !p.leq(table[x], table[y]) {
            return Err(Error::NotATranslation(format!("not monotone at {} ≤ {}", p.label(x), p.label(y))));
        }
    }
    Ok(())
}

impl Translation {
    pub fn new(proset: Arc<Proset>, table: Vec<usize>) -> Result<Translation> {
        check_translation(&proset, &table)?;
        Ok(Translation { proset, table })
    }

    pub(crate) fn new_unchecked(proset: Arc<Proset>, table: Vec<usize>) -> Translation {
        debug_assert!(is_translation(&proset, &table));
        Translation { proset, table }
    }

    pub fn identity(proset: Arc<Proset>) -> Translation {
        let table = (0..proset.len()).collect();
        Translation { proset, table }
    }

    pub fn proset(&self) -> &Arc<Proset> {
        &self.proset
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    fn same_proset(&self, other: &Translation) -> Result<()> {
        if Arc::ptr_eq(&self.proset, &other.proset) || self.proset == other.proset {
            Ok(())
        } else {
            Err(Error::ProsetMismatch)
        }
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Translation) -> Result<Translation> {
        self.same_proset(inner)?;
        let table = inner.table.iter().map(|&y| self.table[y]).collect();
        Ok(Translation { proset: self.proset.clone(), table })
    }

    /// Pointwise order: `self(x) ≤ other(x)` for every `x`.
    pub fn leq(&self, other: &Translation) -> Result<bool> {
        self.same_proset(other)?;
        Ok(self.table.iter().zip(&other.table).all(|(&a, &b)| self.proset.leq(a, b)))
    }

    pub(crate) fn leq_unchecked(&self, other: &Translation) -> bool {
        self.table.iter().zip(&other.table).all(|(&a, &b)| self.proset.leq(a, b))
    }
}

/// Convenience wrapper for [`Translation::compose`].
pub fn compose(outer: &Translation, inner: &Translation) -> Result<Translation> {
    outer.compose(inner)
}

/// Convenience wrapper for [`Translation::leq`].
pub fn trans_leq(a: &Translation, b: &Translation) -> Result<bool> {
    a.leq(b)
}

/// Every translation of `p`, in lexicographic order of tables.
///
/// Fails with [`Error::CapExceeded`] once more than `cap` translations are found.
pub fn enumerate_translations(p: &Arc<Proset>, cap: usize) -> Result<Vec<Translation>> {
    let n = p.len();
    let ups: Vec<Vec<usize>> = (0..n).map(|x| p.up(x).collect()).collect();
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    enumerate_rec(p, &ups, 0, &mut table, &mut out, cap)?;
    Ok(out.into_iter().map(|t| Translation { proset: p.clone(), table: t }).collect())
}

fn enumerate_rec(
    p: &Proset,
    ups: &[Vec<usize>],
    x: usize,
    table: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if x == table.len() {
        if out.len() == cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(table.clone());
        return Ok(());
    }
    'candidates: for &v in &ups[x] {
        for y in 0..x {
            if p.leq(y, x) && !p.leq(table[y], v) {
                continue 'candidates;
            }
            if p.leq(x, y) && !p.leq(v, table[y]) {
                continue 'candidates;
            }
        }
        table[x] = v;
        enumerate_rec(p, ups, x + 1, table, out, cap)?;
    }
    Ok(())
}

/// The module `FΓ` together with the shift map `F ⇒ FΓ`.
pub fn precompose(f: &PersistenceModule, gamma: &Translation) -> Result<(PersistenceModule, NaturalTransformation)> {
    if f.proset().as_ref() != gamma.proset().as_ref() {
        return Err(Error::ProsetMismatch);
    }
    let shifted = f.precompose(gamma)?;
    let components: Vec<Morphism> = (0..f.proset().len()).map(|x| f.hom(x, gamma.apply(x))).collect();
    let eta = NaturalTransformation::new(f.clone(), shifted.clone(), components)?;
    Ok((shifted, eta))
}

/// JSON form of a translation; `proset` is a path to a proset file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationFile {
    pub proset: String,
    pub table: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<Proset> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Arc::new(Proset::new(labels, &rel).unwrap())
    }

    #[test]
    fn recognizes_translations() {
        let c = chain(3);
        assert!(is_translation(&c, &[0, 1, 2]));
        assert!(is_translation(&c, &[1, 2, 2]));
        assert!(!is_translation(&c, &[2, 1, 2]));
        assert!(!is_translation(&c, &[0, 0, 2]));
    }

    #[test]
    fn composition_and_identity() {
        let c = chain(3);
        let g = Translation::new(c.clone(), vec![1, 2, 2]).unwrap();
        let id = Translation::identity(c.clone());
        assert_eq!(g.compose(&id).unwrap(), g);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&g).unwrap().table(), &[2, 2, 2]);
        assert!(is_translation(&c, g.compose(&g).unwrap().table()));
    }

    #[test]
    fn proset_mismatch_is_reported() {
        let a = Translation::identity(chain(3));
        let b = Translation::identity(chain(2));
        assert_eq!(a.compose(&b).unwrap_err(), Error::ProsetMismatch);
        assert_eq!(a.leq(&b).unwrap_err(), Error::ProsetMismatch);
    }

    #[test]
    fn pointwise_order() {
        let c = chain(3);
        let a = Translation::new(c.clone(), vec![1, 1, 2]).unwrap();
        let b = Translation::new(c.clone(), vec![2, 2, 2]).unwrap();
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
        assert!(Translation::identity(c).leq(&a).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_translations(&chain(3), DEFAULT_CAP).unwrap().len(), 5);
        assert_eq!(enumerate_translations(&chain(1), DEFAULT_CAP).unwrap().len(), 1);
        assert!(matches!(enumerate_translations(&chain(3), 4), Err(Error::CapExceeded { cap: 4 })));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate_translations(&chain(3), DEFAULT_CAP).unwrap();
        let tables: Vec<Vec<usize>> = all.iter().map(|t| t.table().to_vec()).collect();
        let mut sorted = tables.clone();
        sorted.sort();
        assert_eq!(tables, sorted);
        assert_eq!(tables[0], vec![0, 1, 2]);
    }
}
