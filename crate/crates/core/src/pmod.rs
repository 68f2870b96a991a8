//! Generalized persistence modules: functors from a finite proset into one of
//! a few concrete target categories, natural transformations between them,
//! and the post-composition functors used to transport modules and
//! interleavings.
//!
//! Morphisms are stored on generating arrows only (see [`Proset::arrows`]);
//! the morphism for an arbitrary relation `x ≤ y` is the composite along a
//! canonical breadth-first path. [`PersistenceModule::validate`] checks that
//! every other path gives the same composite.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::complex::{induced_between, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::linalg::{check_prime, Matrix};
use crate::proset::Proset;
use crate::translations::Translation;

/// The target category of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// A proset viewed as a thin category.
    Thin(Arc<Proset>),
    /// Finite sets `{0, …, n−1}` and functions.
    FinSet,
    /// Finite-dimensional `F_p`-vector spaces.
    FinVect(u64),
    /// The opposite of `FinVect(p)`. A morphism `A → B` is stored as the
    /// matrix of a linear map `B → A`.
    FinVectOp(u64),
    /// Subcomplexes of a fixed complex, with inclusions.
    FinSimp(Arc<SimplicialComplex>),
}

impl Target {
    pub fn tag(&self) -> &'static str {
        match self {
            Target::Thin(_) => "thin",
            Target::FinSet => "finset",
            Target::FinVect(_) => "finvect",
            Target::FinVectOp(_) => "finvectop",
            Target::FinSimp(_) => "finsimp",
        }
    }

    pub fn is_thin(&self) -> bool {
        matches!(self, Target::Thin(_) | Target::FinSimp(_))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Target::FinVect(p) | Target::FinVectOp(p) => Some(*p),
            _ => None,
        }
    }

    /// Whether a morphism `a → b` exists at all (only restrictive for thin targets).
    pub fn has_morphism(&self, a: &Object, b: &Object) -> bool {
        match (self, a, b) {
            (Target::Thin(q), Object::Elem(x), Object::Elem(y)) => q.leq(*x, *y),
            (Target::FinSimp(_), Object::Complex(s), Object::Complex(t)) => s.is_subset(t),
            (Target::FinSet, Object::Set(n), Object::Set(_)) => *n == 0 || true,
            (Target::FinSet, _, _) => false,
            (Target::FinVect(_) | Target::FinVectOp(_), Object::Space(_), Object::Space(_)) => true,
            _ => false,
        }
    }

    pub fn identity(&self, a: &Object) -> Morphism {
        match (self, a) {
            (Target::FinSet, Object::Set(n)) => Morphism::Function((0..*n).collect()),
            (Target::FinVect(p) | Target::FinVectOp(p), Object::Space(d)) => Morphism::Linear(Matrix::identity(*d, *p)),
            _ => Morphism::Unique,
        }
    }

    /// The composite `g ∘ f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Morphism {
        match (self, g, f) {
            (_, Morphism::Unique, Morphism::Unique) => Morphism::Unique,
            (Target::FinSet, Morphism::Function(g), Morphism::Function(f)) => {
                Morphism::Function(f.iter().map(|&i| g[i]).collect())
            }
            (Target::FinVect(_), Morphism::Linear(g), Morphism::Linear(f)) => Morphism::Linear(g.mul(f)),
            (Target::FinVectOp(_), Morphism::Linear(g), Morphism::Linear(f)) => Morphism::Linear(f.mul(g)),
            _ => panic!("composing morphisms of different kinds in {}", self.tag()),
        }
    }

    /// Checks that `m` is a morphism `a → b`.
    pub fn check_morphism(&self, m: &Morphism, a: &Object, b: &Object) -> Result<()> {
        let ok = match (self, m, a, b) {
            (Target::Thin(_) | Target::FinSimp(_), Morphism::Unique, _, _) => self.has_morphism(a, b),
            (Target::FinSet, Morphism::Function(t), Object::Set(n), Object::Set(k)) => {
                t.len() == *n && t.iter().all(|&v| v < *k)
            }
            (Target::FinVect(p), Morphism::Linear(mat), Object::Space(da), Object::Space(db)) => {
                mat.prime() == *p && mat.rows() == *db && mat.cols() == *da
            }
            (Target::FinVectOp(p), Morphism::Linear(mat), Object::Space(da), Object::Space(db)) => {
                mat.prime() == *p && mat.rows() == *da && mat.cols() == *db
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!("{m:?} is not a {} morphism {a:?} → {b:?}", self.tag())))
        }
    }

    pub fn check_object(&self, a: &Object) -> Result<()> {
        let ok = match (self, a) {
            (Target::Thin(q), Object::Elem(x)) => *x < q.len(),
            (Target::FinSet, Object::Set(_)) => true,
            (Target::FinVect(_) | Target::FinVectOp(_), Object::Space(_)) => true,
            (Target::FinSimp(k), Object::Complex(s)) => s.0.iter().all(|&i| i < k.len()) && k.is_subcomplex(s),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!("{a:?} is not an object of {}", self.tag())))
        }
    }
}

/// An object of a target category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Object {
    Elem(usize),
    Set(usize),
    Space(usize),
    Complex(Subcomplex),
}

impl Object {
    /// Cardinality (FinSet) or dimension (FinVect); zero otherwise.
    pub fn size(&self) -> usize {
        match self {
            Object::Set(n) | Object::Space(n) => *n,
            _ => 0,
        }
    }
}

/// A morphism of a target category.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Morphism {
    /// The only morphism of a thin category.
    Unique,
    Function(Vec<usize>),
    Linear(Matrix),
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morphism::Unique => write!(f, "Unique"),
            Morphism::Function(t) => write!(f, "Function{t:?}"),
            Morphism::Linear(m) => write!(f, "{m:?}"),
        }
    }
}

impl Morphism {
    pub fn matrix(&self) -> Option<&Matrix> {
        match self {
            Morphism::Linear(m) => Some(m),
            _ => None,
        }
    }
}

/// The first functoriality failure found by [`PersistenceModule::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PersistenceModule {
    proset: Arc<Proset>,
    target: Target,
    objects: Vec<Object>,
    arrows: BTreeMap<(usize, usize), Morphism>,
    homs: Vec<Option<Morphism>>,
}

impl fmt::Debug for PersistenceModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PersistenceModule")
            .field("target", &self.target.tag())
            .field("objects", &self.objects)
            .field("arrows", &self.arrows)
            .finish()
    }
}

impl PersistenceModule {
    /// Builds a module from objects and morphisms on the generating arrows of
    /// `proset`. Shapes are checked; functoriality is not (see [`Self::validate`]).
    pub fn new(
        proset: Arc<Proset>,
        target: Target,
        objects: Vec<Object>,
        mut arrows: BTreeMap<(usize, usize), Morphism>,
    ) -> Result<PersistenceModule> {
        if objects.len() != proset.len() {
            return Err(Error::Shape(format!("{} objects for {} elements", objects.len(), proset.len())));
        }
        for o in &objects {
            target.check_object(o)?;
        }
        let generating = proset.arrows();
        if target.is_thin() {
            arrows = generating.iter().map(|&a| (a, Morphism::Unique)).collect();
        } else {
            for a in &generating {
                if !arrows.contains_key(a) {
                    return Err(Error::Shape(format!(
                        "missing morphism on arrow {} → {}",
                        proset.label(a.0),
                        proset.label(a.1)
                    )));
                }
            }
            if let Some(extra) = arrows.keys().find(|k| !generating.contains(k)) {
                return Err(Error::Shape(format!(
                    "morphism given on {} → {}, which is not a generating arrow",
                    proset.label(extra.0),
                    proset.label(extra.1)
                )));
            }
        }
        for (&(x, y), m) in &arrows {
            if target.is_thin() {
                // thin objects may violate monotonicity; validate() reports it
                continue;
            }
            target.check_morphism(m, &objects[x], &objects[y])?;
        }
        let mut module = PersistenceModule { proset, target, objects, arrows, homs: vec![] };
        module.homs = module.canonical_homs();
        Ok(module)
    }

    /// Like [`Self::new`], but rejects non-functorial data.
    pub fn new_validated(
        proset: Arc<Proset>,
        target: Target,
        objects: Vec<Object>,
        arrows: BTreeMap<(usize, usize), Morphism>,
    ) -> Result<PersistenceModule> {
        let m = PersistenceModule::new(proset, target, objects, arrows)?;
        m.validate().map_err(|v| Error::NotFunctorial(v.message))?;
        Ok(m)
    }

    pub fn thin(proset: Arc<Proset>, q: Arc<Proset>, objects: Vec<usize>) -> Result<PersistenceModule> {
        let objects = objects.into_iter().map(Object::Elem).collect();
        PersistenceModule::new(proset, Target::Thin(q), objects, BTreeMap::new())
    }

    pub fn finsimp(
        proset: Arc<Proset>,
        complex: Arc<SimplicialComplex>,
        objects: Vec<Subcomplex>,
    ) -> Result<PersistenceModule> {
        let objects = objects.into_iter().map(Object::Complex).collect();
        PersistenceModule::new(proset, Target::FinSimp(complex), objects, BTreeMap::new())
    }

    pub fn finvect(
        proset: Arc<Proset>,
        p: u64,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<PersistenceModule> {
        check_prime(p)?;
        let objects = dims.into_iter().map(Object::Space).collect();
        let arrows = maps.into_iter().map(|(k, m)| (k, Morphism::Linear(m))).collect();
        PersistenceModule::new(proset, Target::FinVect(p), objects, arrows)
    }

    pub fn finset(
        proset: Arc<Proset>,
        sizes: Vec<usize>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<PersistenceModule> {
        let objects = sizes.into_iter().map(Object::Set).collect();
        let arrows = maps.into_iter().map(|(k, m)| (k, Morphism::Function(m))).collect();
        PersistenceModule::new(proset, Target::FinSet, objects, arrows)
    }

    /// The module with every object `obj` and every map the identity.
    pub fn constant(proset: Arc<Proset>, target: Target, obj: Object) -> Result<PersistenceModule> {
        let id = target.identity(&obj);
        let arrows = proset.arrows().into_iter().map(|a| (a, id.clone())).collect();
        let objects = vec![obj; proset.len()];
        PersistenceModule::new(proset, target, objects, arrows)
    }

    pub fn proset(&self) -> &Arc<Proset> {
        &self.proset
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object(&self, x: usize) -> &Object {
        &self.objects[x]
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), Morphism> {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.proset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proset.is_empty()
    }

    /// Sum of object sizes (FinSet cardinalities or FinVect dimensions).
    pub fn total_size(&self) -> usize {
        self.objects.iter().map(Object::size).sum()
    }

    /// The morphism `F(x) → F(y)` for `x ≤ y`, composed along the canonical path.
    pub fn hom(&self, x: usize, y: usize) -> Morphism {
        assert!(self.proset.leq(x, y), "hom({x}, {y}) requested for a non-relation");
        if self.target.is_thin() {
            return Morphism::Unique;
        }
        self.homs[x * self.len() + y].clone().expect("canonical path exists for every relation")
    }

    fn canonical_homs(&self) -> Vec<Option<Morphism>> {
        let n = self.len();
        if self.target.is_thin() {
            return vec![];
        }
        let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
        for &(x, y) in self.arrows.keys() {
            adj[x].push(y);
        }
        let mut homs = vec![None; n * n];
        for src in 0..n {
            homs[src * n + src] = Some(self.target.identity(&self.objects[src]));
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if homs[src * n + v].is_some() {
                        continue;
                    }
                    let prev = homs[src * n + u].as_ref().unwrap();
                    homs[src * n + v] = Some(self.target.compose(&self.arrows[&(u, v)], prev));
                    queue.push_back(v);
                }
            }
        }
        homs
    }

    /// Checks functoriality: every pair of paths between two elements gives the
    /// same composite, and thin objects respect the order.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let p = &self.proset;
        let n = self.len();
        if self.target.is_thin() {
            for &(x, y) in self.arrows.keys() {
                if !self.target.has_morphism(&self.objects[x], &self.objects[y]) {
                    return Err(Violation {
                        message: format!("{} ≤ {} but F({0}) ≰ F({1})", p.label(x), p.label(y)),
                    });
                }
            }
            return Ok(());
        }
        for (&(y, z), arrow) in &self.arrows {
            for x in (0..n).filter(|&x| p.leq(x, y)) {
                let via = self.target.compose(arrow, self.homs[x * n + y].as_ref().unwrap());
                let direct = self.homs[x * n + z].as_ref().unwrap();
                if &via != direct {
                    return Err(Violation {
                        message: format!(
                            "paths {} ⇝ {} → {} and {0} ⇝ {2} give different morphisms",
                            p.label(x),
                            p.label(y),
                            p.label(z)
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `FΓ`: objects `F(Γx)` and maps `F(Γx → Γy)`.
    pub fn precompose(&self, gamma: &Translation) -> Result<PersistenceModule> {
        if gamma.proset().as_ref() != self.proset.as_ref() {
            return Err(Error::ProsetMismatch);
        }
        let n = self.len();
        let objects: Vec<Object> = (0..n).map(|x| self.objects[gamma.apply(x)].clone()).collect();
        let arrows = self.arrows.keys().map(|&(x, y)| ((x, y), self.hom(gamma.apply(x), gamma.apply(y)))).collect();
        let homs = if self.target.is_thin() {
            vec![]
        } else {
            (0..n * n)
                .map(|i| {
                    let (x, y) = (i / n, i % n);
                    self.proset.leq(x, y).then(|| self.hom(gamma.apply(x), gamma.apply(y)))
                })
                .collect()
        };
        Ok(PersistenceModule { proset: self.proset.clone(), target: self.target.clone(), objects, arrows, homs })
    }

    /// Replaces the objects and arrows while keeping the proset; used by functors.
    fn rebuild(&self, target: Target, objects: Vec<Object>, arrows: BTreeMap<(usize, usize), Morphism>) -> Result<Self> {
        PersistenceModule::new(self.proset.clone(), target, objects, arrows)
    }
}

/// A natural transformation between two modules on the same proset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub source: PersistenceModule,
    pub target: PersistenceModule,
    pub components: Vec<Morphism>,
}

impl NaturalTransformation {
    /// Checks component shapes; naturality is checked by [`Self::is_natural`].
    pub fn new(
        source: PersistenceModule,
        target: PersistenceModule,
        components: Vec<Morphism>,
    ) -> Result<NaturalTransformation> {
        if source.proset().as_ref() != target.proset().as_ref() {
            return Err(Error::ProsetMismatch);
        }
        if source.target() != target.target() {
            return Err(Error::Shape("source and target live in different categories".into()));
        }
        if components.len() != source.len() {
            return Err(Error::Shape(format!("{} components for {} elements", components.len(), source.len())));
        }
        let cat = source.target().clone();
        for (x, c) in components.iter().enumerate() {
            if cat.is_thin() {
                if *c != Morphism::Unique {
                    return Err(Error::Shape("thin components must be Unique".into()));
                }
                continue;
            }
            cat.check_morphism(c, source.object(x), target.object(x))?;
        }
        Ok(NaturalTransformation { source, target, components })
    }

    pub fn identity(f: &PersistenceModule) -> NaturalTransformation {
        let comps = f.objects().iter().map(|o| f.target().identity(o)).collect();
        NaturalTransformation { source: f.clone(), target: f.clone(), components: comps }
    }

    /// Whether every naturality square over a generating arrow commutes (and,
    /// for thin targets, whether every component exists).
    pub fn is_natural(&self) -> bool {
        let cat = self.source.target();
        if cat.is_thin() {
            return (0..self.source.len()).all(|x| cat.has_morphism(self.source.object(x), self.target.object(x)));
        }
        self.source.arrows().keys().all(|&(x, y)| {
            let left = cat.compose(&self.target.hom(x, y), &self.components[x]);
            let right = cat.compose(&self.components[y], &self.source.hom(x, y));
            left == right
        })
    }

    /// Vertical composite `other ∘ self`.
    pub fn then(&self, other: &NaturalTransformation) -> Result<NaturalTransformation> {
        if self.target != other.source {
            return Err(Error::Shape("transformations are not composable".into()));
        }
        let cat = self.source.target();
        let comps = self.components.iter().zip(&other.components).map(|(f, g)| cat.compose(g, f)).collect();
        Ok(NaturalTransformation { source: self.source.clone(), target: other.target.clone(), components: comps })
    }

    /// Whiskering `φΓ`: components `φ_{Γx}` from `FΓ` to `GΓ`.
    pub fn whisker(&self, gamma: &Translation) -> Result<NaturalTransformation> {
        let comps = (0..self.source.len()).map(|x| self.components[gamma.apply(x)].clone()).collect();
        Ok(NaturalTransformation {
            source: self.source.precompose(gamma)?,
            target: self.target.precompose(gamma)?,
            components: comps,
        })
    }
}

/// Whether a (necessarily unique) natural transformation `F ⇒ G` exists
/// between modules with the same thin target.
pub fn nat_exists_thin(f: &PersistenceModule, g: &PersistenceModule) -> Result<bool> {
    if f.target() != g.target() || !f.target().is_thin() {
        return Err(Error::Shape("nat_exists_thin needs two modules with the same thin target".into()));
    }
    if f.proset().as_ref() != g.proset().as_ref() {
        return Err(Error::ProsetMismatch);
    }
    Ok((0..f.len()).all(|x| f.target().has_morphism(f.object(x), g.object(x))))
}

/// Post-composition functors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    /// `H_k(−; F_p)`: FinSimp → FinVect(p).
    Homology { degree: usize, p: u64 },
    /// Connected components: FinSimp → FinSet.
    Pi0,
    /// Free vector space on a set: FinSet → FinVect(p).
    Linearize { p: u64 },
    /// Dual space: FinVect(p) ↔ FinVectOp(p).
    Dualize { p: u64 },
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Homology { degree, p } => write!(f, "homology:{degree}:{p}"),
            Functor::Pi0 => write!(f, "pi0"),
            Functor::Linearize { p } => write!(f, "linearize:{p}"),
            Functor::Dualize { p } => write!(f, "dualize:{p}"),
        }
    }
}

impl std::str::FromStr for Functor {
    type Err = Error;

    /// `homology:<k>:<p>`, `pi0`, `linearize:<p>`, `dualize:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> {
            parts.get(i).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Parse(format!("bad functor tag {s:?}")))
        };
        let f = match parts[0] {
            "homology" => Functor::Homology { degree: num(1)? as usize, p: num(2)? },
            "pi0" => Functor::Pi0,
            "linearize" => Functor::Linearize { p: num(1)? },
            "dualize" => Functor::Dualize { p: num(1)? },
            _ => return Err(Error::Parse(format!("unknown functor {s:?}"))),
        };
        if let Some(p) = f.prime() {
            check_prime(p)?;
        }
        Ok(f)
    }
}

impl Functor {
    fn prime(&self) -> Option<u64> {
        match self {
            Functor::Homology { p, .. } | Functor::Linearize { p } | Functor::Dualize { p } => Some(*p),
            Functor::Pi0 => None,
        }
    }

    /// The image category, or an error when the functor does not apply.
    pub fn map_target(&self, t: &Target) -> Result<Target> {
        let out = match (self, t) {
            (Functor::Homology { p, .. }, Target::FinSimp(_)) => Some(Target::FinVect(*p)),
            (Functor::Pi0, Target::FinSimp(_)) => Some(Target::FinSet),
            (Functor::Linearize { p }, Target::FinSet) => Some(Target::FinVect(*p)),
            (Functor::Dualize { p }, Target::FinVect(q)) if p == q => Some(Target::FinVectOp(*p)),
            (Functor::Dualize { p }, Target::FinVectOp(q)) if p == q => Some(Target::FinVect(*p)),
            _ => None,
        };
        out.ok_or_else(|| Error::InapplicableFunctor { functor: self.to_string(), target: t.tag().to_string() })
    }

    pub fn map_object(&self, t: &Target, a: &Object) -> Result<Object> {
        self.map_target(t)?;
        Ok(match (self, t, a) {
            (Functor::Homology { degree, p }, Target::FinSimp(k), Object::Complex(s)) => {
                Object::Space(k.homology_basis(s, *degree, *p).dim())
            }
            (Functor::Pi0, Target::FinSimp(k), Object::Complex(s)) => Object::Set(k.components(s).len()),
            (Functor::Linearize { .. }, _, Object::Set(n)) => Object::Space(*n),
            (Functor::Dualize { .. }, _, Object::Space(d)) => Object::Space(*d),
            _ => return Err(Error::Shape(format!("{a:?} is not an object of {}", t.tag()))),
        })
    }

    /// `H(m)` for a morphism `m: a → b` of `t`.
    pub fn map_morphism(&self, t: &Target, a: &Object, b: &Object, m: &Morphism) -> Result<Morphism> {
        self.map_target(t)?;
        Ok(match (self, t, a, b, m) {
            (Functor::Homology { degree, p }, Target::FinSimp(k), Object::Complex(s), Object::Complex(u), _) => {
                if !s.is_subset(u) {
                    return Err(Error::Shape("inclusion expected".into()));
                }
                let hs = k.homology_basis(s, *degree, *p);
                let hu = k.homology_basis(u, *degree, *p);
                Morphism::Linear(induced_between(&hs, &hu))
            }
            (Functor::Pi0, Target::FinSimp(k), Object::Complex(s), Object::Complex(u), _) => {
                if !s.is_subset(u) {
                    return Err(Error::Shape("inclusion expected".into()));
                }
                let small = k.components(s);
                let large = k.components(u);
                let table = small
                    .iter()
                    .map(|c| large.iter().position(|d| d.contains(&c[0])).expect("component lands somewhere"))
                    .collect();
                Morphism::Function(table)
            }
            (Functor::Linearize { p }, Target::FinSet, Object::Set(n), Object::Set(k), Morphism::Function(f)) => {
                let mut mat = Matrix::zeros(*k, *n, *p);
                for (i, &j) in f.iter().enumerate() {
                    mat.set(j, i, 1);
                }
                Morphism::Linear(mat)
            }
            (Functor::Dualize { .. }, _, _, _, Morphism::Linear(mat)) => Morphism::Linear(mat.transpose()),
            _ => return Err(Error::Shape(format!("{m:?} is not a morphism of {}", t.tag()))),
        })
    }
}

/// `HF`: transports objects and generating morphisms through `H`.
pub fn apply_functor(h: Functor, f: &PersistenceModule) -> Result<PersistenceModule> {
    let t = f.target();
    let target = h.map_target(t)?;
    let objects: Vec<Object> = f.objects().iter().map(|o| h.map_object(t, o)).collect::<Result<_>>()?;
    let arrows = match (h, t) {
        // one basis per object instead of one per arrow end
        (Functor::Homology { degree, p }, Target::FinSimp(k)) => {
            let bases: Vec<_> = f
                .objects()
                .iter()
                .map(|o| match o {
                    Object::Complex(s) => k.homology_basis(s, degree, p),
                    _ => unreachable!("FinSimp objects are complexes"),
                })
                .collect();
            f.arrows().keys().map(|&(x, y)| ((x, y), Morphism::Linear(induced_between(&bases[x], &bases[y])))).collect()
        }
        _ => f
            .arrows()
            .iter()
            .map(|(&(x, y), m)| Ok(((x, y), h.map_morphism(t, f.object(x), f.object(y), m)?)))
            .collect::<Result<BTreeMap<_, _>>>()?,
    };
    f.rebuild(target, objects, arrows)
}

/// `Hφ` for a natural transformation `φ`.
pub fn apply_functor_nat(h: Functor, phi: &NaturalTransformation) -> Result<NaturalTransformation> {
    let t = phi.source.target();
    let comps = phi
        .components
        .iter()
        .enumerate()
        .map(|(x, c)| h.map_morphism(t, phi.source.object(x), phi.target.object(x), c))
        .collect::<Result<Vec<_>>>()?;
    NaturalTransformation::new(apply_functor(h, &phi.source)?, apply_functor(h, &phi.target)?, comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<Proset> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Arc::new(Proset::new(labels, &rel).unwrap())
    }

    fn square() -> Arc<Proset> {
        Arc::new(crate::proset::grid_proset(&[vec![0.into(), 1.into()], vec![0.into(), 1.into()]]).unwrap())
    }

    fn m(rows: &[Vec<i64>], cols: usize) -> Matrix {
        Matrix::from_rows(rows, cols, 2).unwrap()
    }

    #[test]
    fn chain_modules_are_always_valid() {
        let p = chain(3);
        let maps = BTreeMap::from([((0, 1), m(&[vec![1, 1]], 2)), ((1, 2), m(&[vec![0], vec![1]], 1))]);
        let f = PersistenceModule::finvect(p, 2, vec![2, 1, 2], maps).unwrap();
        assert!(f.is_valid());
        assert_eq!(f.hom(0, 2), Morphism::Linear(m(&[vec![0, 0], vec![1, 1]], 2)));
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let p = square();
        // elements: 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1)
        let maps = BTreeMap::from([
            ((0, 1), m(&[vec![1]], 1)),
            ((0, 2), m(&[vec![1]], 1)),
            ((1, 3), m(&[vec![1]], 1)),
            ((2, 3), m(&[vec![0]], 1)),
        ]);
        let f = PersistenceModule::finvect(p.clone(), 2, vec![1; 4], maps.clone()).unwrap();
        let v = f.validate().unwrap_err();
        assert!(v.message.contains("different"), "{v}");
        assert!(PersistenceModule::new_validated(
            p,
            Target::FinVect(2),
            vec![Object::Space(1); 4],
            maps.into_iter().map(|(k, v)| (k, Morphism::Linear(v))).collect()
        )
        .is_err());
    }

    #[test]
    fn constant_module_is_valid() {
        let f = PersistenceModule::constant(square(), Target::FinVect(3), Object::Space(2)).unwrap();
        assert!(f.is_valid());
        let g = PersistenceModule::constant(square(), Target::FinSet, Object::Set(3)).unwrap();
        assert!(g.is_valid());
    }

    #[test]
    fn missing_or_extra_arrows_are_shape_errors() {
        let p = chain(3);
        let maps = BTreeMap::from([((0, 1), m(&[vec![1]], 1))]);
        assert!(matches!(PersistenceModule::finvect(p.clone(), 2, vec![1; 3], maps), Err(Error::Shape(_))));
        let maps = BTreeMap::from([
            ((0, 1), m(&[vec![1]], 1)),
            ((1, 2), m(&[vec![1]], 1)),
            ((0, 2), m(&[vec![1]], 1)),
        ]);
        assert!(matches!(PersistenceModule::finvect(p, 2, vec![1; 3], maps), Err(Error::Shape(_))));
    }

    #[test]
    fn identity_and_zero_are_natural() {
        let p = chain(3);
        let maps = BTreeMap::from([((0, 1), m(&[vec![1]], 1)), ((1, 2), m(&[vec![1]], 1))]);
        let f = PersistenceModule::finvect(p, 2, vec![1; 3], maps).unwrap();
        assert!(NaturalTransformation::identity(&f).is_natural());
        let zero = NaturalTransformation::new(f.clone(), f.clone(), vec![Morphism::Linear(m(&[vec![0]], 1)); 3]).unwrap();
        assert!(zero.is_natural());
    }

    #[test]
    fn naturality_matches_exhaustive_square_check() {
        // F = [0,2) and G = [1,3) on the 3-chain; components are 1x1 matrices over F2
        let p = chain(3);
        let f = PersistenceModule::finvect(
            p.clone(),
            2,
            vec![1, 1, 0],
            BTreeMap::from([((0, 1), m(&[vec![1]], 1)), ((1, 2), Matrix::zeros(0, 1, 2))]),
        )
        .unwrap();
        let g = PersistenceModule::finvect(
            p,
            2,
            vec![0, 1, 1],
            BTreeMap::from([((0, 1), Matrix::zeros(1, 0, 2)), ((1, 2), m(&[vec![1]], 1))]),
        )
        .unwrap();
        // only component 1 is free: φ₁ ∈ {0, 1}
        for v in 0..2 {
            let comps = vec![
                Morphism::Linear(Matrix::zeros(0, 1, 2)),
                Morphism::Linear(m(&[vec![v]], 1)),
                Morphism::Linear(Matrix::zeros(1, 0, 2)),
            ];
            let phi = NaturalTransformation::new(f.clone(), g.clone(), comps).unwrap();
            // square 0→1: G(0→1)φ₀ = 0 vs φ₁F(0→1) = v ; square 1→2: G(1→2)φ₁ = v vs φ₂F(1→2) = 0
            let expected = v == 0;
            assert_eq!(phi.is_natural(), expected);
        }
    }

    #[test]
    fn thin_transformations() {
        let p = chain(3);
        let q = chain(4);
        let f = PersistenceModule::thin(p.clone(), q.clone(), vec![0, 1, 2]).unwrap();
        let g = PersistenceModule::thin(p.clone(), q.clone(), vec![1, 1, 3]).unwrap();
        assert!(nat_exists_thin(&f, &f).unwrap());
        assert!(nat_exists_thin(&f, &g).unwrap());
        assert!(!nat_exists_thin(&g, &f).unwrap());
        let antichain = Arc::new(Proset::new(vec!["a", "b"], &[]).unwrap());
        let h = PersistenceModule::thin(p.clone(), antichain.clone(), vec![0, 0, 0]).unwrap();
        let k = PersistenceModule::thin(p, antichain, vec![0, 1, 0]).unwrap();
        assert!(!nat_exists_thin(&h, &k).unwrap());
    }

    #[test]
    fn sublevelset_filtrations_have_reverse_transformation() {
        // f ≤ g pointwise ⇒ g's sublevel sets are inside f's
        let k = Arc::new(SimplicialComplex::new(vec!["a", "b", "c"], &[vec![0, 1], vec![1, 2]]).unwrap());
        let p = chain(3);
        let fvals = [0, 1, 1];
        let gvals = [1, 1, 2];
        let filt = |vals: [i64; 3]| {
            let objs = (0..3).map(|t| k.induced(|v| vals[v] <= t as i64)).collect();
            PersistenceModule::finsimp(p.clone(), k.clone(), objs).unwrap()
        };
        let (ff, gg) = (filt(fvals), filt(gvals));
        for t in 0..3 {
            if let (Object::Complex(a), Object::Complex(b)) = (gg.object(t), ff.object(t)) {
                assert!(a.is_subset(b));
            }
        }
        assert!(nat_exists_thin(&gg, &ff).unwrap());
        assert!(!nat_exists_thin(&ff, &gg).unwrap());
    }

    #[test]
    fn homology_of_constant_hollow_triangle() {
        let k = Arc::new(SimplicialComplex::new(vec!["a", "b", "c"], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let f = PersistenceModule::constant(chain(3), Target::FinSimp(k.clone()), Object::Complex(k.full())).unwrap();
        let h = apply_functor(Functor::Homology { degree: 1, p: 2 }, &f).unwrap();
        assert!(h.is_valid());
        assert!(h.objects().iter().all(|o| *o == Object::Space(1)));
        assert!(h.arrows().values().all(|m| m.matrix().unwrap().is_identity()));
    }

    #[test]
    fn pi0_tracks_a_merge() {
        let k = Arc::new(SimplicialComplex::new(vec!["a", "b", "c"], &[vec![0, 1], vec![1, 2]]).unwrap());
        let two = k.subcomplex(&[vec![0], vec![2]]).unwrap();
        let f = PersistenceModule::finsimp(chain(2), k.clone(), vec![two, k.full()]).unwrap();
        let c = apply_functor(Functor::Pi0, &f).unwrap();
        assert_eq!(c.objects(), &[Object::Set(2), Object::Set(1)]);
        assert_eq!(c.arrows()[&(0, 1)], Morphism::Function(vec![0, 0]));
        assert!(c.is_valid());
    }

    #[test]
    fn double_dual_returns_the_module() {
        let p = chain(3);
        let maps = BTreeMap::from([((0, 1), m(&[vec![1, 1]], 2)), ((1, 2), m(&[vec![1]], 1))]);
        let f = PersistenceModule::finvect(p, 2, vec![2, 1, 1], maps).unwrap();
        let d = apply_functor(Functor::Dualize { p: 2 }, &f).unwrap();
        assert_eq!(d.target(), &Target::FinVectOp(2));
        assert!(d.is_valid());
        let dd = apply_functor(Functor::Dualize { p: 2 }, &d).unwrap();
        assert_eq!(dd, f);
    }

    #[test]
    fn inapplicable_functor() {
        let f = PersistenceModule::constant(chain(2), Target::FinSet, Object::Set(1)).unwrap();
        assert!(matches!(apply_functor(Functor::Pi0, &f), Err(Error::InapplicableFunctor { .. })));
        assert!(matches!(apply_functor(Functor::Dualize { p: 3 }, &f), Err(Error::InapplicableFunctor { .. })));
    }

    #[test]
    fn functor_parsing() {
        assert_eq!("homology:1:2".parse::<Functor>().unwrap(), Functor::Homology { degree: 1, p: 2 });
        assert_eq!("pi0".parse::<Functor>().unwrap(), Functor::Pi0);
        assert!("dualize:4".parse::<Functor>().is_err());
        assert!("nope".parse::<Functor>().is_err());
    }

    #[test]
    fn preorder_cycles_need_identity_round_trips() {
        let p = Arc::new(Proset::new(vec!["a", "b"], &[(0, 1), (1, 0)]).unwrap());
        let swap = m(&[vec![0, 1], vec![1, 0]], 2);
        let good = PersistenceModule::finvect(
            p.clone(),
            2,
            vec![2, 2],
            BTreeMap::from([((0, 1), swap.clone()), ((1, 0), swap.clone())]),
        )
        .unwrap();
        assert!(good.is_valid());
        let bad = PersistenceModule::finvect(
            p,
            2,
            vec![2, 2],
            BTreeMap::from([((0, 1), swap), ((1, 0), Matrix::identity(2, 2))]),
        )
        .unwrap();
        assert!(!bad.is_valid());
    }
}
