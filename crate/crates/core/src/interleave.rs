//! Interleavings: certificates, exact existence search per target category,
//! the certificate calculus, and interleaving distances.

use std::fmt;

use crate::complex::UnionFind;
use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::linalg::Matrix;
use crate::metrics::{SublinearProjection, SuperlinearFamily};
use crate::pmod::{Functor, Morphism, NaturalTransformation, Object, PersistenceModule, Target};
use crate::translations::Translation;

/// A `(Γ, K)`-interleaving: `φ_x: F(x) → G(Γx)` and `ψ_x: G(x) → F(Kx)`.
/// Thin targets use [`Morphism::Unique`] components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingCertificate {
    pub gamma: Translation,
    pub kappa: Translation,
    pub phi: Vec<Morphism>,
    pub psi: Vec<Morphism>,
}

impl InterleavingCertificate {
    pub fn identity(f: &PersistenceModule) -> InterleavingCertificate {
        let id = Translation::identity(f.proset().clone());
        let comps: Vec<Morphism> = f.objects().iter().map(|o| f.target().identity(o)).collect();
        InterleavingCertificate { gamma: id.clone(), kappa: id, phi: comps.clone(), psi: comps }
    }

    /// `φ` as a natural transformation `F ⇒ GΓ`.
    pub fn phi_transformation(&self, f: &PersistenceModule, g: &PersistenceModule) -> Result<NaturalTransformation> {
        NaturalTransformation::new(f.clone(), g.precompose(&self.gamma)?, self.phi.clone())
    }

    /// `ψ` as a natural transformation `G ⇒ FK`.
    pub fn psi_transformation(&self, f: &PersistenceModule, g: &PersistenceModule) -> Result<NaturalTransformation> {
        NaturalTransformation::new(g.clone(), f.precompose(&self.kappa)?, self.psi.clone())
    }
}

/// Limits on exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchGuard {
    /// Largest number of candidate `φ` (or `ψ`) enumerated per linear component.
    pub max_candidates: u64,
    /// Largest number of backtracking nodes for FinSet targets.
    pub max_nodes: u64,
}

impl Default for SearchGuard {
    fn default() -> Self {
        SearchGuard { max_candidates: 1 << 16, max_nodes: 1 << 20 }
    }
}

fn check_pair(f: &PersistenceModule, g: &PersistenceModule, gamma: &Translation, kappa: &Translation) -> Result<()> {
    if f.proset().as_ref() != g.proset().as_ref()
        || gamma.proset().as_ref() != f.proset().as_ref()
        || kappa.proset().as_ref() != f.proset().as_ref()
    {
        return Err(Error::ProsetMismatch);
    }
    if f.target() != g.target() {
        return Err(Error::Shape(format!("targets differ: {} vs {}", f.target().tag(), g.target().tag())));
    }
    Ok(())
}

/// Whether `cert` is a `(Γ, K)`-interleaving of `F` and `G`: both families of
/// naturality squares and both triangle identities commute.
pub fn verify_certificate(f: &PersistenceModule, g: &PersistenceModule, cert: &InterleavingCertificate) -> Result<bool> {
    let (gamma, kappa) = (&cert.gamma, &cert.kappa);
    check_pair(f, g, gamma, kappa)?;
    let n = f.len();
    if cert.phi.len() != n || cert.psi.len() != n {
        return Err(Error::Shape(format!("certificate has {}/{} components for {n} elements", cert.phi.len(), cert.psi.len())));
    }
    let cat = f.target();
    if cat.is_thin() {
        if cert.phi.iter().chain(&cert.psi).any(|m| *m != Morphism::Unique) {
            return Err(Error::Shape("thin certificates have Unique components".into()));
        }
        return Ok((0..n).all(|x| {
            cat.has_morphism(f.object(x), g.object(gamma.apply(x))) && cat.has_morphism(g.object(x), f.object(kappa.apply(x)))
        }));
    }
    for x in 0..n {
        cat.check_morphism(&cert.phi[x], f.object(x), g.object(gamma.apply(x)))?;
        cat.check_morphism(&cert.psi[x], g.object(x), f.object(kappa.apply(x)))?;
    }
    for &(x, y) in f.arrows().keys() {
        let l = cat.compose(&g.hom(gamma.apply(x), gamma.apply(y)), &cert.phi[x]);
        let r = cat.compose(&cert.phi[y], &f.hom(x, y));
        if l != r {
            return Ok(false);
        }
        let l = cat.compose(&f.hom(kappa.apply(x), kappa.apply(y)), &cert.psi[x]);
        let r = cat.compose(&cert.psi[y], &g.hom(x, y));
        if l != r {
            return Ok(false);
        }
    }
    for x in 0..n {
        let gx = gamma.apply(x);
        if cat.compose(&cert.psi[gx], &cert.phi[x]) != f.hom(x, kappa.apply(gx)) {
            return Ok(false);
        }
        let kx = kappa.apply(x);
        if cat.compose(&cert.phi[kx], &cert.psi[x]) != g.hom(x, gamma.apply(kx)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a `(Γ, K)`-interleaving of `F` and `G`.
///
/// `Ok(None)` is a proof that none exists. Thin and FinSimp targets reduce to
/// pointwise order checks; FinSet targets are searched by backtracking;
/// FinVect targets enumerate one transformation in its solution space and
/// solve linearly for the other. Exceeding `guard` gives
/// [`Error::GuardExceeded`].
pub fn exists_interleaving(
    f: &PersistenceModule,
    g: &PersistenceModule,
    gamma: &Translation,
    kappa: &Translation,
    guard: &SearchGuard,
) -> Result<Option<InterleavingCertificate>> {
    check_pair(f, g, gamma, kappa)?;
    let n = f.len();
    let found = match f.target() {
        Target::Thin(_) | Target::FinSimp(_) => {
            let cat = f.target();
            let ok = (0..n).all(|x| {
                cat.has_morphism(f.object(x), g.object(gamma.apply(x)))
                    && cat.has_morphism(g.object(x), f.object(kappa.apply(x)))
            });
            ok.then(|| (vec![Morphism::Unique; n], vec![Morphism::Unique; n]))
        }
        Target::FinSet => finset::search(f, g, gamma, kappa, guard)?,
        Target::FinVect(p) | Target::FinVectOp(p) => {
            let op = matches!(f.target(), Target::FinVectOp(_));
            linear::search(f, g, gamma, kappa, *p, op, guard)?
        }
    };
    Ok(found.map(|(phi, psi)| {
        let cert = InterleavingCertificate { gamma: gamma.clone(), kappa: kappa.clone(), phi, psi };
        debug_assert!(verify_certificate(f, g, &cert).unwrap_or(false), "search produced an invalid certificate");
        cert
    }))
}

/// One side of an interleaving: a transformation `src ⇒ dst ∘ shift`.
#[derive(Clone, Copy)]
struct Side<'a> {
    src: &'a PersistenceModule,
    dst: &'a PersistenceModule,
    shift: &'a Translation,
}

mod linear {
    use super::*;

    /// A block of unknowns: one component, stored as a `rows × cols` matrix.
    #[derive(Clone, Copy, Debug)]
    struct Block {
        rows: usize,
        cols: usize,
        offset: usize,
    }

    struct System {
        p: u64,
        nvars: usize,
        rows: Vec<Vec<u64>>,
        rhs: Vec<u64>,
    }

    /// One summand `L · X · R` of a matrix equation.
    struct Term<'a> {
        left: &'a Matrix,
        block: Block,
        right: &'a Matrix,
        negate: bool,
    }

    impl System {
        fn new(p: u64, nvars: usize) -> System {
            System { p, nvars, rows: vec![], rhs: vec![] }
        }

        /// Adds the entrywise equations `Σ terms = constant` (constant zero if absent).
        fn add(&mut self, terms: &[Term], out_rows: usize, out_cols: usize, constant: Option<&Matrix>) {
            let p = self.p;
            for a in 0..out_rows {
                for b in 0..out_cols {
                    let mut row = vec![0u64; self.nvars];
                    for t in terms {
                        for i in 0..t.block.rows {
                            let l = t.left.get(a, i);
                            if l == 0 {
                                continue;
                            }
                            for j in 0..t.block.cols {
                                let r = t.right.get(j, b);
                                if r == 0 {
                                    continue;
                                }
                                let mut c = l * r % p;
                                if t.negate {
                                    c = (p - c) % p;
                                }
                                let v = &mut row[t.block.offset + i * t.block.cols + j];
                                *v = (*v + c) % p;
                            }
                        }
                    }
                    let c = constant.map_or(0, |m| m.get(a, b));
                    if c != 0 || row.iter().any(|&v| v != 0) {
                        self.rows.push(row);
                        self.rhs.push(c);
                    }
                }
            }
        }

        fn matrix(&self) -> Matrix {
            let rows: Vec<Vec<i64>> = self.rows.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
            Matrix::from_rows(&rows, self.nvars, self.p).expect("rows have nvars entries")
        }

        fn solve(&self) -> Option<Vec<u64>> {
            self.matrix().solve(&self.rhs)
        }
    }

    fn dim(o: &Object) -> usize {
        o.size()
    }

    /// Stored shape of a morphism `a → b`.
    fn shape(op: bool, a: usize, b: usize) -> (usize, usize) {
        if op {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn mat(m: &Morphism) -> &Matrix {
        m.matrix().expect("FinVect morphisms are matrices")
    }

    fn block_matrix(v: &[u64], b: Block, p: u64) -> Matrix {
        let mut m = Matrix::zeros(b.rows, b.cols, p);
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(i, j, v[b.offset + i * b.cols + j]);
            }
        }
        m
    }

    /// Blocks for the components `x ∈ members` of one side.
    fn blocks(side: Side, members: &[usize], op: bool) -> (Vec<Option<Block>>, usize) {
        let n = side.src.len();
        let mut out = vec![None; n];
        let mut offset = 0;
        for &x in members {
            let (rows, cols) = shape(op, dim(side.src.object(x)), dim(side.dst.object(side.shift.apply(x))));
            out[x] = Some(Block { rows, cols, offset });
            offset += rows * cols;
        }
        (out, offset)
    }

    /// Categorical `A ∘ X ∘ B` as stored-matrix factors `(L, R)` around `X`.
    fn around<'a>(op: bool, after: &'a Matrix, before: &'a Matrix) -> (&'a Matrix, &'a Matrix) {
        if op {
            (before, after)
        } else {
            (after, before)
        }
    }

    /// Homogeneous naturality equations for one side.
    fn naturality(sys: &mut System, side: Side, blocks: &[Option<Block>], op: bool, p: u64) {
        let s = side.shift;
        for &(x, y) in side.src.arrows().keys() {
            let (Some(bx), Some(by)) = (blocks[x], blocks[y]) else { continue };
            // dst(sx → sy) ∘ X_x = X_y ∘ src(x → y)
            let dst_map = side.dst.hom(s.apply(x), s.apply(y));
            let src_map = side.src.hom(x, y);
            let id_src_x = Matrix::identity(dim(side.src.object(x)), p);
            let id_dst_sy = Matrix::identity(dim(side.dst.object(s.apply(y))), p);
            let (l1, r1) = around(op, mat(&dst_map), &id_src_x);
            let (l2, r2) = around(op, &id_dst_sy, mat(&src_map));
            let (rows, cols) = shape(op, dim(side.src.object(x)), dim(side.dst.object(s.apply(y))));
            sys.add(
                &[
                    Term { left: l1, block: bx, right: r1, negate: false },
                    Term { left: l2, block: by, right: r2, negate: true },
                ],
                rows,
                cols,
                None,
            );
        }
    }

    /// Enumerates the first side within one connected component and solves
    /// for the second; returns stored component matrices for both sides.
    #[allow(clippy::too_many_arguments)]
    fn solve_component(
        first: Side,
        second: Side,
        first_members: &[usize],
        second_members: &[usize],
        p: u64,
        op: bool,
        guard: &SearchGuard,
        basis: Vec<Vec<u64>>,
    ) -> Result<Option<(Vec<(usize, Matrix)>, Vec<(usize, Matrix)>)>> {
        let (fb, fvars) = blocks(first, first_members, op);
        let (sb, svars) = blocks(second, second_members, op);
        let mut base = System::new(p, svars);
        naturality(&mut base, second, &sb, op, p);
        let k = basis.len();
        let total = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if total > guard.max_candidates as u128 {
            return Err(Error::GuardExceeded(format!("{p}^{k} candidate transformations")));
        }
        let mut coeffs = vec![0u64; k];
        loop {
            let mut v = vec![0u64; fvars];
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = (*vi + c * bi) % p;
                    }
                }
            }
            let fm: Vec<Option<Matrix>> = fb.iter().map(|b| b.map(|b| block_matrix(&v, b, p))).collect();
            let mut sys = System { p, nvars: svars, rows: base.rows.clone(), rhs: base.rhs.clone() };
            for &x in first_members {
                // Y_{s₁x} ∘ X_x = first.src(x → s₂s₁x)
                let sx = first.shift.apply(x);
                let target = second.shift.apply(sx);
                let konst = first.src.hom(x, target);
                let id = Matrix::identity(dim(first.src.object(target)), p);
                let xm = fm[x].as_ref().unwrap();
                let (l, r) = around(op, &id, xm);
                let (rows, cols) = shape(op, dim(first.src.object(x)), dim(first.src.object(target)));
                let block = sb[sx].expect("linked block is in the component");
                sys.add(&[Term { left: l, block, right: r, negate: false }], rows, cols, Some(mat(&konst)));
            }
            for &x in second_members {
                // X_{s₂x} ∘ Y_x = second.src(x → s₁s₂x)
                let sx = second.shift.apply(x);
                let target = first.shift.apply(sx);
                let konst = second.src.hom(x, target);
                let id = Matrix::identity(dim(second.src.object(x)), p);
                let xm = fm[sx].as_ref().expect("linked block is in the component");
                let (l, r) = around(op, xm, &id);
                let (rows, cols) = shape(op, dim(second.src.object(x)), dim(second.src.object(target)));
                sys.add(&[Term { left: l, block: sb[x].unwrap(), right: r, negate: false }], rows, cols, Some(mat(&konst)));
            }
            if let Some(sol) = sys.solve() {
                let firsts = first_members.iter().map(|&x| (x, fm[x].clone().unwrap())).collect();
                let seconds = second_members.iter().map(|&x| (x, block_matrix(&sol, sb[x].unwrap(), p))).collect();
                return Ok(Some((firsts, seconds)));
            }
            // next coefficient vector, last coordinate fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    fn nullspace_of_side(side: Side, members: &[usize], p: u64, op: bool) -> Vec<Vec<u64>> {
        let (b, nvars) = blocks(side, members, op);
        let mut sys = System::new(p, nvars);
        naturality(&mut sys, side, &b, op, p);
        sys.matrix().nullspace()
    }

    pub(super) fn search(
        f: &PersistenceModule,
        g: &PersistenceModule,
        gamma: &Translation,
        kappa: &Translation,
        p: u64,
        op: bool,
        guard: &SearchGuard,
    ) -> Result<Option<(Vec<Morphism>, Vec<Morphism>)>> {
        let n = f.len();
        let phi_side = Side { src: f, dst: g, shift: gamma };
        let psi_side = Side { src: g, dst: f, shift: kappa };
        // blocks 0..n are φ, n..2n are ψ
        let mut uf = UnionFind::new(2 * n);
        for &(x, y) in f.arrows().keys() {
            uf.union(x, y);
            uf.union(n + x, n + y);
        }
        for x in 0..n {
            uf.union(x, n + gamma.apply(x));
            uf.union(n + x, kappa.apply(x));
        }
        let mut comps: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
        for b in 0..2 * n {
            let root = uf.find(b);
            let idx = match comps.iter().position(|c| c.0 == root) {
                Some(i) => i,
                None => {
                    comps.push((root, vec![], vec![]));
                    comps.len() - 1
                }
            };
            if b < n {
                comps[idx].1.push(b);
            } else {
                comps[idx].2.push(b - n);
            }
        }
        let mut phi: Vec<Option<Matrix>> = vec![None; n];
        let mut psi: Vec<Option<Matrix>> = vec![None; n];
        for (_, phis, psis) in &comps {
            let phi_basis = nullspace_of_side(phi_side, phis, p, op);
            let psi_basis = nullspace_of_side(psi_side, psis, p, op);
            let solved = if phi_basis.len() <= psi_basis.len() {
                solve_component(phi_side, psi_side, phis, psis, p, op, guard, phi_basis)?
            } else {
                solve_component(psi_side, phi_side, psis, phis, p, op, guard, psi_basis)?
                    .map(|(a, b)| (b, a))
            };
            let Some((a, b)) = solved else { return Ok(None) };
            for (x, m) in a {
                phi[x] = Some(m);
            }
            for (x, m) in b {
                psi[x] = Some(m);
            }
        }
        let wrap = |v: Vec<Option<Matrix>>| v.into_iter().map(|m| Morphism::Linear(m.unwrap())).collect();
        Ok(Some((wrap(phi), wrap(psi))))
    }
}

mod finset {
    use super::*;

    fn table(m: &Morphism) -> &[usize] {
        match m {
            Morphism::Function(t) => t,
            _ => unreachable!("FinSet morphisms are functions"),
        }
    }

    #[derive(Clone, Copy)]
    enum Constraint {
        /// naturality on side `s` for arrow `x → y` at element `i` of `src(x)`
        Nat { s: usize, x: usize, y: usize, i: usize },
        /// triangle on side `s` at element `i` of `src_s(x)`
        Tri { s: usize, x: usize, i: usize },
    }

    struct Problem<'a> {
        sides: [Side<'a>; 2],
        offsets: [Vec<usize>; 2],
        domain: Vec<usize>,
        constraints: Vec<Constraint>,
        watch: Vec<Vec<usize>>,
    }

    impl Problem<'_> {
        fn var(&self, s: usize, x: usize, i: usize) -> usize {
            self.offsets[s][x] + i
        }

        /// `None` while some involved variable is unassigned.
        fn holds(&self, c: Constraint, a: &[Option<usize>]) -> Option<bool> {
            match c {
                Constraint::Nat { s, x, y, i } => {
                    let side = self.sides[s];
                    let sh = side.shift;
                    let vx = a[self.var(s, x, i)]?;
                    let fi = table(&side.src.hom(x, y))[i];
                    let vy = a[self.var(s, y, fi)]?;
                    Some(table(&side.dst.hom(sh.apply(x), sh.apply(y)))[vx] == vy)
                }
                Constraint::Tri { s, x, i } => {
                    let (me, other) = (self.sides[s], self.sides[1 - s]);
                    let sx = me.shift.apply(x);
                    let j = a[self.var(s, x, i)]?;
                    let k = a[self.var(1 - s, sx, j)]?;
                    Some(table(&me.src.hom(x, other.shift.apply(sx)))[i] == k)
                }
            }
        }
    }

    pub(super) fn search(
        f: &PersistenceModule,
        g: &PersistenceModule,
        gamma: &Translation,
        kappa: &Translation,
        guard: &SearchGuard,
    ) -> Result<Option<(Vec<Morphism>, Vec<Morphism>)>> {
        let n = f.len();
        let sides = [Side { src: f, dst: g, shift: gamma }, Side { src: g, dst: f, shift: kappa }];
        let mut offsets = [vec![0; n], vec![0; n]];
        let mut domain = Vec::new();
        for s in 0..2 {
            for x in 0..n {
                offsets[s][x] = domain.len();
                let size = sides[s].dst.object(sides[s].shift.apply(x)).size();
                for _ in 0..sides[s].src.object(x).size() {
                    domain.push(size);
                }
            }
        }
        let nvars = domain.len();
        if domain.contains(&0) {
            return Ok(None);
        }
        let mut prob = Problem { sides, offsets, domain, constraints: vec![], watch: vec![vec![]; nvars] };
        for s in 0..2 {
            let side = prob.sides[s];
            for &(x, y) in side.src.arrows().keys() {
                let fmap = side.src.hom(x, y);
                for i in 0..side.src.object(x).size() {
                    let c = prob.constraints.len();
                    prob.constraints.push(Constraint::Nat { s, x, y, i });
                    let a = prob.var(s, x, i);
                    let b = prob.var(s, y, table(&fmap)[i]);
                    prob.watch[a].push(c);
                    prob.watch[b].push(c);
                }
            }
            for x in 0..n {
                let sx = side.shift.apply(x);
                for i in 0..side.src.object(x).size() {
                    let c = prob.constraints.len();
                    prob.constraints.push(Constraint::Tri { s, x, i });
                    let own = prob.var(s, x, i);
                    prob.watch[own].push(c);
                    for j in 0..prob.sides[1 - s].src.object(sx).size() {
                        let v = prob.var(1 - s, sx, j);
                        prob.watch[v].push(c);
                    }
                }
            }
        }
        let mut assign: Vec<Option<usize>> = vec![None; nvars];
        let mut nodes = 0u64;
        if !backtrack(&prob, 0, &mut assign, &mut nodes, guard.max_nodes)? {
            return Ok(None);
        }
        let out = |s: usize| -> Vec<Morphism> {
            (0..n)
                .map(|x| {
                    let size = prob.sides[s].src.object(x).size();
                    Morphism::Function((0..size).map(|i| assign[prob.var(s, x, i)].unwrap()).collect())
                })
                .collect()
        };
        Ok(Some((out(0), out(1))))
    }

    fn backtrack(
        prob: &Problem,
        v: usize,
        assign: &mut Vec<Option<usize>>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<bool> {
        if v == assign.len() {
            return Ok(true);
        }
        for val in 0..prob.domain[v] {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::GuardExceeded(format!("more than {max_nodes} search nodes")));
            }
            assign[v] = Some(val);
            if prob.watch[v].iter().all(|&c| prob.holds(prob.constraints[c], assign) != Some(false))
                && backtrack(prob, v + 1, assign, nodes, max_nodes)?
            {
                return Ok(true);
            }
        }
        assign[v] = None;
        Ok(false)
    }
}

/// `F, H` from a `(Γ₁, K₁)`-interleaving of `F, G` and a `(Γ₂, K₂)`-interleaving
/// of `G, H`: the result is a `(Γ₂Γ₁, K₁K₂)`-interleaving with
/// `φ₃ = (φ₂Γ₁)φ₁` and `ψ₃ = (ψ₁K₂)ψ₂`.
pub fn compose_certificates(
    f: &PersistenceModule,
    g: &PersistenceModule,
    h: &PersistenceModule,
    c1: &InterleavingCertificate,
    c2: &InterleavingCertificate,
) -> Result<InterleavingCertificate> {
    let chain = |e: Error| Error::ChainMismatch(e.to_string());
    check_pair(f, g, &c1.gamma, &c1.kappa).map_err(chain)?;
    check_pair(g, h, &c2.gamma, &c2.kappa).map_err(chain)?;
    let n = f.len();
    if [&c1.phi, &c1.psi, &c2.phi, &c2.psi].iter().any(|v| v.len() != n) {
        return Err(Error::ChainMismatch("component counts differ from the proset size".into()));
    }
    let cat = f.target();
    if !cat.is_thin() {
        for x in 0..n {
            cat.check_morphism(&c1.phi[x], f.object(x), g.object(c1.gamma.apply(x))).map_err(chain)?;
            cat.check_morphism(&c1.psi[x], g.object(x), f.object(c1.kappa.apply(x))).map_err(chain)?;
            cat.check_morphism(&c2.phi[x], g.object(x), h.object(c2.gamma.apply(x))).map_err(chain)?;
            cat.check_morphism(&c2.psi[x], h.object(x), g.object(c2.kappa.apply(x))).map_err(chain)?;
        }
    }
    let phi = (0..n).map(|x| cat.compose(&c2.phi[c1.gamma.apply(x)], &c1.phi[x])).collect();
    let psi = (0..n).map(|x| cat.compose(&c1.psi[c2.kappa.apply(x)], &c2.psi[x])).collect();
    Ok(InterleavingCertificate {
        gamma: c2.gamma.compose(&c1.gamma)?,
        kappa: c1.kappa.compose(&c2.kappa)?,
        phi,
        psi,
    })
}

/// Re-targets a `(Γ₁, K₁)`-interleaving at larger translations `Γ₂ ≥ Γ₁`,
/// `K₂ ≥ K₁` by post-composing with the shift maps: `φ₂ = (Gξ)φ₁`.
pub fn weaken_certificate(
    f: &PersistenceModule,
    g: &PersistenceModule,
    cert: &InterleavingCertificate,
    gamma2: &Translation,
    kappa2: &Translation,
) -> Result<InterleavingCertificate> {
    check_pair(f, g, gamma2, kappa2)?;
    if !cert.gamma.leq(gamma2)? || !cert.kappa.leq(kappa2)? {
        return Err(Error::OrderViolation("new translations must dominate the old ones".into()));
    }
    let cat = f.target();
    let n = f.len();
    let phi = (0..n)
        .map(|x| cat.compose(&g.hom(cert.gamma.apply(x), gamma2.apply(x)), &cert.phi[x]))
        .collect();
    let psi = (0..n)
        .map(|x| cat.compose(&f.hom(cert.kappa.apply(x), kappa2.apply(x)), &cert.psi[x]))
        .collect();
    Ok(InterleavingCertificate { gamma: gamma2.clone(), kappa: kappa2.clone(), phi, psi })
}

/// The same interleaving pushed through a functor: components `Hφ`, `Hψ`.
pub fn pushforward_certificate(
    h: Functor,
    f: &PersistenceModule,
    g: &PersistenceModule,
    cert: &InterleavingCertificate,
) -> Result<InterleavingCertificate> {
    let t = f.target();
    h.map_target(t)?;
    let n = f.len();
    let phi = (0..n)
        .map(|x| h.map_morphism(t, f.object(x), g.object(cert.gamma.apply(x)), &cert.phi[x]))
        .collect::<Result<Vec<_>>>()?;
    let psi = (0..n)
        .map(|x| h.map_morphism(t, g.object(x), f.object(cert.kappa.apply(x)), &cert.psi[x]))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterleavingCertificate { gamma: cert.gamma.clone(), kappa: cert.kappa.clone(), phi, psi })
}

/// An interleaving distance, exact or bracketed when a search guard was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(Ext),
    Bounds { lower: Ext, upper: Ext },
}

impl Distance {
    pub fn exact(&self) -> Option<Ext> {
        match self {
            Distance::Exact(v) => Some(*v),
            Distance::Bounds { .. } => None,
        }
    }

    pub fn lower(&self) -> Ext {
        match self {
            Distance::Exact(v) => *v,
            Distance::Bounds { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> Ext {
        match self {
            Distance::Exact(v) => *v,
            Distance::Bounds { upper, .. } => *upper,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(v) => write!(f, "{v}"),
            Distance::Bounds { lower, upper } => write!(f, "[{lower}, {upper}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: Distance,
    /// A witness at the upper end, when one was found.
    pub certificate: Option<InterleavingCertificate>,
}

/// Scans candidate levels in increasing order. `try_level` returns
/// `Ok(Some(cert))`, `Ok(None)` (refuted) or a guard error.
fn scan_levels<I>(levels: I, mut try_level: impl FnMut(usize) -> Result<Option<InterleavingCertificate>>) -> Result<DistanceResult>
where
    I: IntoIterator<Item = (usize, Ext)>,
{
    let mut lower: Option<Ext> = None;
    for (i, eps) in levels {
        match try_level(i) {
            Ok(Some(cert)) => {
                let value = match lower {
                    None => Distance::Exact(eps),
                    Some(lo) => Distance::Bounds { lower: lo, upper: eps },
                };
                return Ok(DistanceResult { value, certificate: Some(cert) });
            }
            Ok(None) => {}
            Err(Error::GuardExceeded(_)) => {
                lower.get_or_insert(eps);
            }
            Err(e) => return Err(e),
        }
    }
    let value = match lower {
        None => Distance::Exact(Ext::Inf),
        Some(lo) => Distance::Bounds { lower: lo, upper: Ext::Inf },
    };
    Ok(DistanceResult { value, certificate: None })
}

/// `dᵠ(F, G)`: the least `max(ω_Γ, ω_K)` over pairs admitting an interleaving,
/// or `∞`. Only maximal translations at each level are tried, which loses
/// nothing since interleavings can always be weakened upwards.
pub fn distance_bruteforce(
    f: &PersistenceModule,
    g: &PersistenceModule,
    omega: &SublinearProjection,
    translations: &[Translation],
    guard: &SearchGuard,
) -> Result<DistanceResult> {
    let values: Vec<Ext> = translations.iter().map(|t| omega.evaluate(t)).collect();
    let mut levels: Vec<Ext> = values.iter().copied().filter(Ext::is_finite).collect();
    levels.sort();
    levels.dedup();
    let maximal_at = |eps: Ext| -> Vec<usize> {
        let cands: Vec<usize> = (0..translations.len()).filter(|&i| values[i] <= eps).collect();
        cands
            .iter()
            .copied()
            .filter(|&i| {
                let t = &translations[i];
                cands.iter().all(|&j| {
                    let u = &translations[j];
                    let above = t.leq_unchecked(u);
                    let below = u.leq_unchecked(t);
                    !(above && !below) && !(above && below && j < i)
                })
            })
            .collect()
    };
    scan_levels(levels.iter().copied().enumerate(), |li| {
        let top = maximal_at(levels[li]);
        let mut guard_hit = None;
        for &a in &top {
            for &b in &top {
                match exists_interleaving(f, g, &translations[a], &translations[b], guard) {
                    Ok(Some(c)) => return Ok(Some(c)),
                    Ok(None) => {}
                    Err(e @ Error::GuardExceeded(_)) => guard_hit = Some(e),
                    Err(e) => return Err(e),
                }
            }
        }
        match guard_hit {
            Some(e) => Err(e),
            None => Ok(None),
        }
    })
}

/// `dᴼ(F, G)`: the least grid `ε` such that `F, G` are `(Ω_ε, Ω_ε)`-interleaved, or `∞`.
pub fn distance_family(
    f: &PersistenceModule,
    g: &PersistenceModule,
    family: &SuperlinearFamily,
    guard: &SearchGuard,
) -> Result<DistanceResult> {
    let levels = family.eps().iter().map(|e| Ext::Fin(*e)).enumerate();
    let result = scan_levels(levels, |i| {
        let big = &family.members()[i];
        exists_interleaving(f, g, big, big, guard)
    })?;
    if cfg!(debug_assertions) {
        if let (Some(cert), Distance::Exact(Ext::Fin(e))) = (&result.certificate, result.value) {
            let start = family.eps().iter().position(|x| *x == e).unwrap();
            for big in &family.members()[start..] {
                let w = weaken_certificate(f, g, cert, big, big)?;
                assert!(verify_certificate(f, g, &w)?, "family distance is not monotone in ε");
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use num_rational::Rational64;

    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::metrics::{shift_translation, standard_family, LawvereMetric};
    use crate::proset::{Grid, Proset};
    use crate::translations::{enumerate_translations, DEFAULT_CAP};

    fn r(v: i64) -> Rational64 {
        Rational64::from_integer(v)
    }

    fn line(n: usize) -> Grid {
        Grid::integer(&[n]).unwrap()
    }

    fn one(v: i64) -> Matrix {
        Matrix::from_rows(&[vec![v]], 1, 2).unwrap()
    }

    /// Interval module supported on the half-open index range `[b, d)` over F₂.
    fn bar(grid: &Grid, b: usize, d: usize) -> PersistenceModule {
        let n = grid.len();
        let dims: Vec<usize> = (0..n).map(|i| usize::from(b <= i && i < d)).collect();
        let maps = (1..n)
            .map(|i| {
                let m = if dims[i - 1] == 1 && dims[i] == 1 { one(1) } else { Matrix::zeros(dims[i], dims[i - 1], 2) };
                ((i - 1, i), m)
            })
            .collect();
        PersistenceModule::finvect(grid.proset.clone(), 2, dims, maps).unwrap()
    }

    fn shift(grid: &Grid, e: i64) -> Translation {
        shift_translation(grid, &[r(1)], r(e))
    }

    #[test]
    fn identity_certificate_verifies() {
        let g = line(4);
        let f = bar(&g, 0, 2);
        assert!(verify_certificate(&f, &f, &InterleavingCertificate::identity(&f)).unwrap());
    }

    #[test]
    fn isomorphism_pair_verifies() {
        let g = line(2);
        let p = g.proset.clone();
        let swap = Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2, 2).unwrap();
        let f = PersistenceModule::finvect(p.clone(), 2, vec![2, 2], BTreeMap::from([((0, 1), Matrix::identity(2, 2))])).unwrap();
        let h = PersistenceModule::finvect(p.clone(), 2, vec![2, 2], BTreeMap::from([((0, 1), Matrix::identity(2, 2))])).unwrap();
        let id = Translation::identity(p);
        let cert = InterleavingCertificate {
            gamma: id.clone(),
            kappa: id,
            phi: vec![Morphism::Linear(swap.clone()); 2],
            psi: vec![Morphism::Linear(swap.inverse().unwrap()); 2],
        };
        assert!(verify_certificate(&f, &h, &cert).unwrap());
    }

    #[test]
    fn zero_psi_breaks_the_triangle() {
        let g = line(3);
        let f = bar(&g, 0, 3);
        let mut cert = InterleavingCertificate::identity(&f);
        cert.psi = vec![Morphism::Linear(Matrix::zeros(1, 1, 2)); 3];
        assert!(!verify_certificate(&f, &f, &cert).unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let g = line(3);
        let f = bar(&g, 0, 3);
        let mut cert = InterleavingCertificate::identity(&f);
        cert.phi.pop();
        assert!(matches!(verify_certificate(&f, &f, &cert), Err(Error::Shape(_))));
    }

    /// Every assignment of 0/1 to the 1×1 components, checked directly.
    fn brute_force_exists(f: &PersistenceModule, g: &PersistenceModule, gm: &Translation, k: &Translation) -> bool {
        let n = f.len();
        let slots: Vec<(bool, usize)> = (0..n).map(|x| (true, x)).chain((0..n).map(|x| (false, x))).collect();
        let shape = |(is_phi, x): (bool, usize)| {
            if is_phi {
                (g.object(gm.apply(x)).size(), f.object(x).size())
            } else {
                (f.object(k.apply(x)).size(), g.object(x).size())
            }
        };
        let free: Vec<usize> = (0..slots.len()).filter(|&i| shape(slots[i]) == (1, 1)).collect();
        for bits in 0..1u32 << free.len() {
            let mut comps: Vec<Morphism> = slots
                .iter()
                .map(|&s| {
                    let (rr, cc) = shape(s);
                    Morphism::Linear(Matrix::zeros(rr, cc, 2))
                })
                .collect();
            for (j, &i) in free.iter().enumerate() {
                comps[i] = Morphism::Linear(one(i64::from(bits >> j & 1)));
            }
            let psi = comps.split_off(n);
            let cert = InterleavingCertificate { gamma: gm.clone(), kappa: k.clone(), phi: comps, psi };
            if verify_certificate(f, g, &cert).unwrap() {
                return true;
            }
        }
        false
    }

    #[test]
    fn interval_modules_shift_one() {
        let g = line(4);
        let (a, b) = (bar(&g, 0, 2), bar(&g, 1, 3));
        let guard = SearchGuard::default();
        for e in 0..3 {
            let s = shift(&g, e);
            let found = exists_interleaving(&a, &b, &s, &s, &guard).unwrap();
            assert_eq!(found.is_some(), brute_force_exists(&a, &b, &s, &s), "shift {e}");
            if let Some(c) = &found {
                assert!(verify_certificate(&a, &b, c).unwrap());
            }
        }
        assert!(exists_interleaving(&a, &b, &shift(&g, 1), &shift(&g, 1), &guard).unwrap().is_some());
        assert!(exists_interleaving(&a, &b, &shift(&g, 0), &shift(&g, 0), &guard).unwrap().is_none());
    }

    #[test]
    fn search_matches_brute_force_on_all_bar_pairs() {
        let g = line(4);
        let all = enumerate_translations(&g.proset, DEFAULT_CAP).unwrap();
        let guard = SearchGuard::default();
        let bars: Vec<PersistenceModule> =
            (0..4).flat_map(|b| (b + 1..=4).map(move |d| (b, d))).map(|(b, d)| bar(&g, b, d)).collect();
        for a in &bars {
            for c in &bars {
                for gm in all.iter().step_by(3) {
                    for k in all.iter().step_by(4) {
                        let found = exists_interleaving(a, c, gm, k, &guard).unwrap().is_some();
                        assert_eq!(found, brute_force_exists(a, c, gm, k));
                    }
                }
            }
        }
    }

    #[test]
    fn identity_pair_gives_identity_like_certificate() {
        let g = line(3);
        let f = bar(&g, 0, 2);
        let id = Translation::identity(g.proset.clone());
        let c = exists_interleaving(&f, &f, &id, &id, &SearchGuard::default()).unwrap().unwrap();
        assert!(verify_certificate(&f, &f, &c).unwrap());
    }

    #[test]
    fn thin_sublevelset_modules_interleave_at_sup_distance() {
        // path v0–v1–v2, f = (0,1,2), g = (1,2,2): sublevel sets on thresholds 0..3
        let k = Arc::new(SimplicialComplex::new(vec!["v0", "v1", "v2"], &[vec![0, 1], vec![1, 2]]).unwrap());
        let grid = line(4);
        let filt = |vals: [i64; 3]| {
            let objs = (0..4).map(|t| k.induced(|v| vals[v] <= t as i64)).collect();
            PersistenceModule::finsimp(grid.proset.clone(), k.clone(), objs).unwrap()
        };
        let (ff, gg) = (filt([0, 1, 2]), filt([1, 2, 2]));
        let s1 = shift(&grid, 1);
        let guard = SearchGuard::default();
        let c = exists_interleaving(&ff, &gg, &s1, &s1, &guard).unwrap().unwrap();
        assert!(verify_certificate(&ff, &gg, &c).unwrap());
        let s0 = shift(&grid, 0);
        assert!(exists_interleaving(&ff, &gg, &s0, &s0, &guard).unwrap().is_none());
        for h in [Functor::Homology { degree: 0, p: 2 }, Functor::Pi0] {
            let (hf, hg) = (crate::pmod::apply_functor(h, &ff).unwrap(), crate::pmod::apply_functor(h, &gg).unwrap());
            let pc = pushforward_certificate(h, &ff, &gg, &c).unwrap();
            assert!(verify_certificate(&hf, &hg, &pc).unwrap(), "{h}");
        }
    }

    #[test]
    fn finset_search_finds_merge_interleaving() {
        let grid = line(3);
        let p = grid.proset.clone();
        // two points merging at 1 vs. one point throughout
        let f = PersistenceModule::finset(p.clone(), vec![2, 1, 1], BTreeMap::from([((0, 1), vec![0, 0]), ((1, 2), vec![0])]))
            .unwrap();
        let g = PersistenceModule::constant(p.clone(), Target::FinSet, Object::Set(1)).unwrap();
        let guard = SearchGuard::default();
        let id = Translation::identity(p);
        assert!(exists_interleaving(&f, &g, &id, &id, &guard).unwrap().is_none());
        let s = shift(&grid, 1);
        let c = exists_interleaving(&f, &g, &s, &s, &guard).unwrap().unwrap();
        assert!(verify_certificate(&f, &g, &c).unwrap());
    }

    #[test]
    fn composition_of_shift_certificates() {
        let g = line(5);
        let (a, b, c) = (bar(&g, 0, 2), bar(&g, 1, 3), bar(&g, 2, 4));
        let s1 = shift(&g, 1);
        let guard = SearchGuard::default();
        let c1 = exists_interleaving(&a, &b, &s1, &s1, &guard).unwrap().unwrap();
        let c2 = exists_interleaving(&b, &c, &s1, &s1, &guard).unwrap().unwrap();
        let c3 = compose_certificates(&a, &b, &c, &c1, &c2).unwrap();
        assert_eq!(c3.gamma, shift(&g, 2));
        assert!(verify_certificate(&a, &c, &c3).unwrap());
        let idc = InterleavingCertificate::identity(&b);
        let same = compose_certificates(&a, &b, &b, &c1, &idc).unwrap();
        assert_eq!(same, c1);
        let other = line(4);
        let wrong = InterleavingCertificate::identity(&bar(&other, 0, 1));
        assert!(matches!(compose_certificates(&a, &b, &c, &c1, &wrong), Err(Error::ChainMismatch(_))));
    }

    #[test]
    fn weakening() {
        let g = line(5);
        let (a, b) = (bar(&g, 0, 2), bar(&g, 1, 3));
        let guard = SearchGuard::default();
        let s1 = shift(&g, 1);
        let c = exists_interleaving(&a, &b, &s1, &s1, &guard).unwrap().unwrap();
        assert_eq!(weaken_certificate(&a, &b, &c, &s1, &s1).unwrap(), c);
        let s2 = shift(&g, 2);
        let w = weaken_certificate(&a, &b, &c, &s2, &s2).unwrap();
        assert!(verify_certificate(&a, &b, &w).unwrap());
        let id = Translation::identity(g.proset.clone());
        assert!(matches!(weaken_certificate(&a, &b, &c, &id, &id), Err(Error::OrderViolation(_))));
    }

    #[test]
    fn distances_on_interval_modules() {
        let g = line(4);
        let all = enumerate_translations(&g.proset, DEFAULT_CAP).unwrap();
        let omega = SublinearProjection::Lawvere(LawvereMetric::sup_norm(&g));
        let guard = SearchGuard::default();
        let (a, b) = (bar(&g, 0, 2), bar(&g, 1, 3));
        let d = distance_bruteforce(&a, &b, &omega, &all, &guard).unwrap();
        assert_eq!(d.value, Distance::Exact(Ext::int(1)));
        assert!(verify_certificate(&a, &b, d.certificate.as_ref().unwrap()).unwrap());
        assert_eq!(distance_bruteforce(&a, &a, &omega, &all, &guard).unwrap().value, Distance::Exact(Ext::ZERO));
        let fam = standard_family(&g);
        assert_eq!(distance_family(&a, &b, &fam, &guard).unwrap().value, Distance::Exact(Ext::int(1)));
        // an infinite bar against a finite one never interleaves
        let inf = bar(&g, 0, 4);
        assert_eq!(distance_family(&a, &inf, &fam, &guard).unwrap().value, Distance::Exact(Ext::Inf));
    }

    #[test]
    fn pruned_distance_matches_all_pairs() {
        let g = line(4);
        let all = enumerate_translations(&g.proset, DEFAULT_CAP).unwrap();
        let omega = SublinearProjection::Lawvere(LawvereMetric::sup_norm(&g));
        let guard = SearchGuard::default();
        let bars: Vec<PersistenceModule> =
            (0..4).flat_map(|b| (b + 1..=4).map(move |d| (b, d))).map(|(b, d)| bar(&g, b, d)).collect();
        for a in &bars {
            for c in &bars {
                let mut best = Ext::Inf;
                for gm in &all {
                    for k in &all {
                        if exists_interleaving(a, c, gm, k, &guard).unwrap().is_some() {
                            best = best.min(omega.evaluate(gm).max(omega.evaluate(k)));
                        }
                    }
                }
                assert_eq!(distance_bruteforce(a, c, &omega, &all, &guard).unwrap().value, Distance::Exact(best));
            }
        }
    }

    #[test]
    fn guard_turns_into_bounds() {
        let g = line(3);
        let p = g.proset.clone();
        let f = PersistenceModule::constant(p.clone(), Target::FinVect(2), Object::Space(3)).unwrap();
        let tiny = SearchGuard { max_candidates: 2, max_nodes: 2 };
        let fam = standard_family(&g);
        let d = distance_family(&f, &f, &fam, &tiny).unwrap();
        assert!(matches!(d.value, Distance::Bounds { .. }));
        let s = Translation::identity(p);
        assert!(matches!(exists_interleaving(&f, &f, &s, &s, &tiny), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn op_target_search() {
        let g = line(4);
        let (a, b) = (bar(&g, 0, 2), bar(&g, 1, 3));
        let d = Functor::Dualize { p: 2 };
        let (da, db) = (crate::pmod::apply_functor(d, &a).unwrap(), crate::pmod::apply_functor(d, &b).unwrap());
        let guard = SearchGuard::default();
        for e in 0..3 {
            let s = shift(&g, e);
            let plain = exists_interleaving(&a, &b, &s, &s, &guard).unwrap();
            let dual = exists_interleaving(&da, &db, &s, &s, &guard).unwrap();
            assert_eq!(plain.is_some(), dual.is_some());
            if let Some(c) = dual {
                assert!(verify_certificate(&da, &db, &c).unwrap());
            }
        }
    }

    #[test]
    fn two_dimensional_proset_with_cycle() {
        // a 2-cycle collapses the order; modules must be isomorphisms around it
        let p = Arc::new(Proset::new(vec!["a", "b", "c"], &[(0, 1), (1, 0), (1, 2)]).unwrap());
        let f = PersistenceModule::finvect(
            p.clone(),
            2,
            vec![1, 1, 1],
            BTreeMap::from([((0, 1), one(1)), ((0, 2), one(1)), ((1, 0), one(1)), ((1, 2), one(1))]),
        )
        .unwrap();
        assert!(f.is_valid());
        let id = Translation::identity(p.clone());
        let c = exists_interleaving(&f, &f, &id, &id, &SearchGuard::default()).unwrap().unwrap();
        assert!(verify_certificate(&f, &f, &c).unwrap());
    }
}
