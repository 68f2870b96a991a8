//! Vector persistence over grids: directional distances, line restrictions,
//! and the up-set of vector interleaving parameters.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ext::{format_rational, Ext};
use crate::interleave::{distance_family, exists_interleaving, DistanceResult, SearchGuard};
use crate::metrics::{shift_family, shift_translation, standard_family, SublinearProjection};
use crate::pmod::PersistenceModule;
use crate::proset::Grid;
use crate::translations::Translation;

/// Componentwise `sup_x (Γx − x)`.
pub fn omega_vec(grid: &Grid, gamma: &Translation) -> Vec<Rational64> {
    let mut out = vec![Rational64::zero(); grid.dim()];
    for x in 0..grid.len() {
        let (p, q) = (grid.point(x), grid.point(gamma.apply(x)));
        for k in 0..grid.dim() {
            out[k] = out[k].max(q[k] - p[k]);
        }
    }
    out
}

/// `sup_{x,k} (Γx − x)_k / a_k` for strictly positive `a`.
pub fn omega_weighted(grid: &Grid, gamma: &Translation, a: &[Rational64]) -> Result<Ext> {
    Ok(SublinearProjection::weighted(grid.clone(), a.to_vec())?.evaluate(gamma))
}

/// `Ω_e(x) = x + e`, snapped down and clamped per axis.
pub fn vector_translation(grid: &Grid, e: &[Rational64]) -> Translation {
    shift_translation(grid, e, Rational64::from_integer(1))
}

/// Every `ε ≥ 0` at which `εa_k` equals a coordinate difference on some axis with `a_k > 0`.
pub fn direction_levels(grid: &Grid, a: &[Rational64]) -> Vec<Rational64> {
    let mut set = BTreeSet::from([Rational64::zero()]);
    for (axis, &w) in grid.axes.iter().zip(a) {
        if w > Rational64::zero() {
            for u in axis {
                for v in axis {
                    if v > u {
                        set.insert((v - u) / w);
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// `d_a(F, G)`: the family distance for `Ω_ε(x) = x + εa` over `eps`
/// (defaults to [`direction_levels`]).
pub fn d_a(
    f: &PersistenceModule,
    g: &PersistenceModule,
    grid: &Grid,
    a: &[Rational64],
    eps: Option<Vec<Rational64>>,
    guard: &SearchGuard,
) -> Result<DistanceResult> {
    let eps = eps.unwrap_or_else(|| direction_levels(grid, a));
    distance_family(f, g, &shift_family(grid, a, eps)?, guard)
}

fn line_points(grid: &Grid, a: &[Rational64], b: &[Rational64], t_grid: &[Rational64]) -> Result<Vec<usize>> {
    if a.len() != grid.dim() || b.len() != grid.dim() {
        return Err(Error::Shape(format!("line vectors must have {} entries", grid.dim())));
    }
    if a.iter().any(|w| *w < Rational64::zero()) {
        return Err(Error::Invalid("direction must be nonnegative".into()));
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("line parameters must be strictly increasing".into()));
    }
    t_grid
        .iter()
        .map(|&t| {
            let p: Vec<Rational64> = b.iter().zip(a).map(|(bk, ak)| bk + t * ak).collect();
            grid.locate(&p).ok_or_else(|| {
                let s: Vec<String> = p.iter().map(format_rational).collect();
                Error::OffGrid(format!("line point ({})", s.join(",")))
            })
        })
        .collect()
}

/// `FL` for the line `L: t ↦ b + ta`, as a module over the chain `t_grid`.
pub fn line_restrict(
    f: &PersistenceModule,
    grid: &Grid,
    a: &[Rational64],
    b: &[Rational64],
    t_grid: &[Rational64],
) -> Result<PersistenceModule> {
    if f.proset().as_ref() != grid.proset.as_ref() {
        return Err(Error::ProsetMismatch);
    }
    let pts = line_points(grid, a, b, t_grid)?;
    let line = Grid::new(vec![t_grid.to_vec()])?;
    let objects = pts.iter().map(|&x| f.object(x).clone()).collect();
    let arrows = (1..pts.len()).map(|i| ((i - 1, i), f.hom(pts[i - 1], pts[i]))).collect();
    PersistenceModule::new(line.proset.clone(), f.target().clone(), objects, arrows)
}

/// Whether shifting along the line commutes with the clamped grid shifts:
/// the last line point is at the maximum of every axis the line moves along,
/// and axis values along the line are exactly the line's own.
pub fn is_clamp_compatible(grid: &Grid, a: &[Rational64], b: &[Rational64], t_grid: &[Rational64]) -> bool {
    let Ok(pts) = line_points(grid, a, b, t_grid) else { return false };
    let last = grid.coords(*pts.last().unwrap());
    (0..grid.dim()).all(|k| {
        if a[k].is_zero() {
            return true;
        }
        if last[k] + 1 != grid.axes[k].len() {
            return false;
        }
        // every axis value from the line's start upwards is hit by the line
        let start = grid.coords(pts[0])[k];
        grid.axes[k][start..].iter().all(|v| t_grid.iter().any(|t| b[k] + t * a[k] == *v))
    })
}

/// `∂_{a,b}(F, G) = d(FL, GL)` under the standard family on `t_grid`.
pub fn delta_ab(
    f: &PersistenceModule,
    g: &PersistenceModule,
    grid: &Grid,
    a: &[Rational64],
    b: &[Rational64],
    t_grid: &[Rational64],
    guard: &SearchGuard,
) -> Result<DistanceResult> {
    let (fl, gl) = (line_restrict(f, grid, a, b, t_grid)?, line_restrict(g, grid, a, b, t_grid)?);
    let line = Grid::new(vec![t_grid.to_vec()])?;
    distance_family(&fl, &gl, &standard_family(&line), guard)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::In => "in",
            Membership::Out => "out",
            Membership::Unknown => "unknown",
        })
    }
}

/// `𝔇(F, G)` sampled on a finite set of nonnegative vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpSet {
    pub points: Vec<Vec<Rational64>>,
    pub status: Vec<Membership>,
}

fn vec_leq(a: &[Rational64], b: &[Rational64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl UpSet {
    pub fn status_of(&self, e: &[Rational64]) -> Option<Membership> {
        self.points.iter().position(|p| p == e).map(|i| self.status[i])
    }

    pub fn members(&self) -> impl Iterator<Item = &Vec<Rational64>> {
        self.points.iter().zip(&self.status).filter(|(_, s)| **s == Membership::In).map(|(p, _)| p)
    }

    /// No known member lies below a known non-member.
    pub fn is_up_set(&self) -> bool {
        (0..self.points.len()).all(|i| {
            self.status[i] != Membership::In
                || (0..self.points.len())
                    .all(|j| !(self.status[j] == Membership::Out && vec_leq(&self.points[i], &self.points[j])))
        })
    }

    /// Whether `self` contains every grid point at or above some point of `other`.
    pub fn contains_up_closure_of(&self, other: &UpSet) -> bool {
        other.members().all(|e| {
            self.points
                .iter()
                .zip(&self.status)
                .all(|(p, s)| !vec_leq(e, p) || *s != Membership::Out)
        })
    }

    /// Whether every grid point above `e₁ + e₂`, for `e₁ ∈ a`, `e₂ ∈ b`, is known not to be out.
    pub fn contains_minkowski_sum(&self, a: &UpSet, b: &UpSet) -> bool {
        a.members().all(|e1| {
            b.members().all(|e2| {
                let s: Vec<Rational64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                self.points.iter().zip(&self.status).all(|(p, st)| !vec_leq(&s, p) || *st != Membership::Out)
            })
        })
    }

    pub fn to_csv(&self) -> String {
        let n = self.points.first().map_or(0, Vec::len);
        let mut s = String::new();
        let head: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
        let _ = writeln!(s, "{},status", head.join(","));
        for (p, st) in self.points.iter().zip(&self.status) {
            let coords: Vec<String> = p.iter().map(format_rational).collect();
            let _ = writeln!(s, "{},{st}", coords.join(","));
        }
        s
    }
}

/// The product of the per-axis coordinate differences, in row-major order.
pub fn vector_levels(grid: &Grid) -> Vec<Vec<Rational64>> {
    let per_axis: Vec<Vec<Rational64>> = grid
        .axes
        .iter()
        .map(|axis| {
            let mut d: Vec<Rational64> = axis.iter().flat_map(|u| axis.iter().filter(move |v| *v >= u).map(move |v| v - u)).collect();
            d.sort();
            d.dedup();
            d
        })
        .collect();
    let mut out: Vec<Vec<Rational64>> = vec![vec![]];
    for axis in &per_axis {
        out = out.into_iter().flat_map(|p| axis.iter().map(move |v| [p.clone(), vec![*v]].concat())).collect();
    }
    out
}

/// Decides `e ∈ 𝔇(F, G)` by searching for an `Ω_e`-interleaving at each point.
pub fn d_set(
    f: &PersistenceModule,
    g: &PersistenceModule,
    grid: &Grid,
    points: &[Vec<Rational64>],
    guard: &SearchGuard,
) -> Result<UpSet> {
    let mut status = Vec::with_capacity(points.len());
    for e in points {
        if e.len() != grid.dim() || e.iter().any(|v| *v < Rational64::zero()) {
            return Err(Error::Invalid("vector levels must be nonnegative with one entry per axis".into()));
        }
        let big = vector_translation(grid, e);
        status.push(match exists_interleaving(f, g, &big, &big, guard) {
            Ok(Some(_)) => Membership::In,
            Ok(None) => Membership::Out,
            Err(Error::GuardExceeded(_)) => Membership::Unknown,
            Err(e) => return Err(e),
        });
    }
    Ok(UpSet { points: points.to_vec(), status })
}

/// `𝔇(F, G)` in ω-form: `e` is in when some `(Γ, K)`-interleaving has
/// `ω_Γ, ω_K ≤ e`, over the given translations.
pub fn d_set_omega(
    f: &PersistenceModule,
    g: &PersistenceModule,
    grid: &Grid,
    points: &[Vec<Rational64>],
    translations: &[Translation],
    guard: &SearchGuard,
) -> Result<UpSet> {
    let omegas: Vec<Vec<Rational64>> = translations.iter().map(|t| omega_vec(grid, t)).collect();
    let mut status = Vec::with_capacity(points.len());
    for e in points {
        let ok: Vec<usize> = (0..translations.len()).filter(|&i| vec_leq(&omegas[i], e)).collect();
        let mut st = Membership::Out;
        'search: for &i in &ok {
            for &j in &ok {
                match exists_interleaving(f, g, &translations[i], &translations[j], guard) {
                    Ok(Some(_)) => {
                        st = Membership::In;
                        break 'search;
                    }
                    Ok(None) => {}
                    Err(Error::GuardExceeded(_)) => st = Membership::Unknown,
                    Err(e) => return Err(e),
                }
            }
        }
        status.push(st);
    }
    Ok(UpSet { points: points.to_vec(), status })
}

/// The grid underlying a module's proset.
pub fn recognize_grid(f: &PersistenceModule) -> Result<Grid> {
    Grid::recognize(f.proset()).ok_or_else(|| Error::Invalid("module is not over a grid".into()))
}
