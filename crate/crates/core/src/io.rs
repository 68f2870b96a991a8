//! JSON file formats for prosets, modules and certificates.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{ComplexFile, SimplicialComplex};
use crate::error::{Error, Result};
use crate::interleave::InterleavingCertificate;
use crate::invimage::AxisSpec;
use crate::linalg::Matrix;
use crate::pmod::{Morphism, Object, PersistenceModule, Target};
use crate::proset::{arc_proset, interval_proset, subset_proset, Grid, Proset, ProsetFile};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A proset given by a generator or explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProsetSpec {
    Grid { grid: Vec<AxisSpec> },
    Interval { interval: AxisSpec },
    Arc { arc: usize },
    Subset { subset: usize },
    Explicit(ProsetFile),
}

impl ProsetSpec {
    pub fn build(&self) -> Result<Proset> {
        match self {
            ProsetSpec::Grid { grid } => Ok((*Grid::new(grid.iter().map(|a| a.0.clone()).collect())?.proset).clone()),
            ProsetSpec::Interval { interval } => interval_proset(&interval.0),
            ProsetSpec::Arc { arc } => arc_proset(*arc),
            ProsetSpec::Subset { subset } => subset_proset(*subset),
            ProsetSpec::Explicit(f) => Proset::from_file(f),
        }
    }
}

/// A path to a file, or the contents inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

impl<T: DeserializeOwned + Clone> Ref<T> {
    pub fn resolve(&self, base: &Path) -> Result<T> {
        match self {
            Ref::Path(p) => read_json(&base.join(p)),
            Ref::Inline(t) => Ok(t.clone()),
        }
    }
}

pub fn load_proset(r: &Ref<ProsetSpec>, base: &Path) -> Result<Arc<Proset>> {
    Ok(Arc::new(r.resolve(base)?.build()?))
}

pub fn load_complex(r: &Ref<ComplexFile>, base: &Path) -> Result<Arc<SimplicialComplex>> {
    Ok(Arc::new(SimplicialComplex::from_file(&r.resolve(base)?)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum TargetSpec {
    Thin { proset: Ref<ProsetSpec> },
    Finset,
    Finvect { p: u64 },
    Finvectop { p: u64 },
    Finsimp { complex: Ref<ComplexFile> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub proset: Ref<ProsetSpec>,
    pub target: TargetSpec,
    pub objects: Vec<Value>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, Value>,
}

fn parse_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse(format!("{what}: expected a nonnegative integer, got {v}")))
}

fn parse_object(t: &Target, v: &Value) -> Result<Object> {
    match t {
        Target::Thin(q) => {
            let label = v.as_str().ok_or_else(|| Error::Parse(format!("thin object: expected a label, got {v}")))?;
            q.index_of(label).map(Object::Elem).ok_or_else(|| Error::Parse(format!("unknown element {label}")))
        }
        Target::FinSet => Ok(Object::Set(parse_usize(v, "set size")?)),
        Target::FinVect(_) | Target::FinVectOp(_) => Ok(Object::Space(parse_usize(v, "dimension")?)),
        Target::FinSimp(k) => {
            let lists: Vec<Vec<String>> =
                serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("subcomplex: {e}")))?;
            let simplices = lists
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|l| k.vertices().iter().position(|x| x == l).ok_or_else(|| Error::Parse(format!("unknown vertex {l}"))))
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Object::Complex(k.subcomplex(&simplices)?))
        }
    }
}

fn object_json(t: &Target, o: &Object) -> Value {
    match (t, o) {
        (Target::Thin(q), Object::Elem(e)) => json!(q.label(*e)),
        (Target::FinSimp(k), Object::Complex(s)) => {
            let lists: Vec<Vec<&str>> =
                s.to_vertex_lists(k).iter().map(|l| l.iter().map(|&v| k.vertices()[v].as_str()).collect()).collect();
            json!(lists)
        }
        (_, o) => json!(o.size()),
    }
}

/// Reads a morphism `a → b`; matrices take their shape from the objects.
pub fn parse_morphism(t: &Target, a: &Object, b: &Object, v: &Value) -> Result<Morphism> {
    match t {
        Target::Thin(_) | Target::FinSimp(_) => Ok(Morphism::Unique),
        Target::FinSet => {
            let table: Vec<usize> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("function: {e}")))?;
            Ok(Morphism::Function(table))
        }
        Target::FinVect(p) | Target::FinVectOp(p) => {
            let rows: Vec<Vec<i64>> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
            let cols = if matches!(t, Target::FinVect(_)) { a.size() } else { b.size() };
            let m = Matrix::from_rows(&rows, cols, *p)?;
            Ok(Morphism::Linear(m))
        }
    }
}

pub fn morphism_json(m: &Morphism) -> Value {
    match m {
        Morphism::Unique => Value::Null,
        Morphism::Function(t) => json!(t),
        Morphism::Linear(m) => json!(m.to_rows()),
    }
}

fn build_target(spec: &TargetSpec, base: &Path) -> Result<Target> {
    Ok(match spec {
        TargetSpec::Thin { proset } => Target::Thin(load_proset(proset, base)?),
        TargetSpec::Finset => Target::FinSet,
        TargetSpec::Finvect { p } => Target::FinVect(*p),
        TargetSpec::Finvectop { p } => Target::FinVectOp(*p),
        TargetSpec::Finsimp { complex } => Target::FinSimp(load_complex(complex, base)?),
    })
}

fn parse_arrow(key: &str, p: &Proset) -> Result<(usize, usize)> {
    let (a, b) = key.split_once("->").ok_or_else(|| Error::Parse(format!("arrow key {key} is not of the form i->j")))?;
    let find = |s: &str| {
        let s = s.trim();
        p.index_of(s).ok_or_else(|| Error::Parse(format!("unknown element {s} in arrow {key}")))
    };
    Ok((find(a)?, find(b)?))
}

/// Builds and validates a module; relative paths are resolved against `base`.
pub fn module_from_file(file: &ModuleFile, base: &Path) -> Result<PersistenceModule> {
    let proset = load_proset(&file.proset, base)?;
    let target = build_target(&file.target, base)?;
    if file.objects.len() != proset.len() {
        return Err(Error::Shape(format!("{} objects for {} elements", file.objects.len(), proset.len())));
    }
    let objects = file.objects.iter().map(|v| parse_object(&target, v)).collect::<Result<Vec<_>>>()?;
    let mut arrows = BTreeMap::new();
    for (key, v) in &file.morphisms {
        let (x, y) = parse_arrow(key, &proset)?;
        arrows.insert((x, y), parse_morphism(&target, &objects[x], &objects[y], v)?);
    }
    PersistenceModule::new_validated(proset, target, objects, arrows)
}

pub fn load_module(path: &Path) -> Result<PersistenceModule> {
    let file: ModuleFile = read_json(path)?;
    module_from_file(&file, &base_dir(path))
}

pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

fn target_spec(t: &Target) -> TargetSpec {
    match t {
        Target::Thin(q) => TargetSpec::Thin { proset: Ref::Inline(ProsetSpec::Explicit(q.to_file())) },
        Target::FinSet => TargetSpec::Finset,
        Target::FinVect(p) => TargetSpec::Finvect { p: *p },
        Target::FinVectOp(p) => TargetSpec::Finvectop { p: *p },
        Target::FinSimp(k) => TargetSpec::Finsimp { complex: Ref::Inline(k.to_file()) },
    }
}

/// Serializes a module with the given proset reference (inline when `None`).
pub fn module_to_file(f: &PersistenceModule, proset: Option<Ref<ProsetSpec>>) -> ModuleFile {
    let p = f.proset();
    let t = f.target();
    let morphisms = if t.is_thin() {
        BTreeMap::new()
    } else {
        f.arrows().iter().map(|(&(x, y), m)| (format!("{}->{}", p.label(x), p.label(y)), morphism_json(m))).collect()
    };
    ModuleFile {
        proset: proset.unwrap_or_else(|| Ref::Inline(ProsetSpec::Explicit(p.to_file()))),
        target: target_spec(t),
        objects: f.objects().iter().map(|o| object_json(t, o)).collect(),
        morphisms,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub gamma: Vec<usize>,
    pub kappa: Vec<usize>,
    pub phi: Vec<Value>,
    pub psi: Vec<Value>,
}

pub fn certificate_to_file(c: &InterleavingCertificate) -> CertificateFile {
    CertificateFile {
        gamma: c.gamma.table().to_vec(),
        kappa: c.kappa.table().to_vec(),
        phi: c.phi.iter().map(morphism_json).collect(),
        psi: c.psi.iter().map(morphism_json).collect(),
    }
}

pub fn certificate_from_file(
    f: &PersistenceModule,
    g: &PersistenceModule,
    file: &CertificateFile,
) -> Result<InterleavingCertificate> {
    use crate::translations::Translation;
    let gamma = Translation::new(f.proset().clone(), file.gamma.clone())?;
    let kappa = Translation::new(f.proset().clone(), file.kappa.clone())?;
    let n = f.len();
    if file.phi.len() != n || file.psi.len() != n {
        return Err(Error::Shape(format!("certificate components for {n} elements expected")));
    }
    let t = f.target();
    let phi = (0..n)
        .map(|x| parse_morphism(t, f.object(x), g.object(gamma.apply(x)), &file.phi[x]))
        .collect::<Result<Vec<_>>>()?;
    let psi = (0..n)
        .map(|x| parse_morphism(t, g.object(x), f.object(kappa.apply(x)), &file.psi[x]))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterleavingCertificate { gamma, kappa, phi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_finvect, random_poset, rng};

    #[test]
    fn module_round_trip() {
        let mut r = rng(3);
        for _ in 0..20 {
            let p = Arc::new(random_poset(&mut r, 4, 0.5));
            let m = random_finvect(&mut r, &p, 2, 2);
            let file = module_to_file(&m, None);
            let text = serde_json::to_string(&file).unwrap();
            let back: ModuleFile = serde_json::from_str(&text).unwrap();
            assert_eq!(module_from_file(&back, Path::new(".")).unwrap(), m);
        }
    }

    #[test]
    fn grid_module_with_labels() {
        let text = r#"{"proset": {"grid": [[0,1,2]]}, "target": {"tag": "finvect", "p": 2},
                       "objects": [1, 1, 0], "morphisms": {"0->1": [[1]], "1->2": []}}"#;
        let file: ModuleFile = serde_json::from_str(text).unwrap();
        let m = module_from_file(&file, Path::new(".")).unwrap();
        assert_eq!(m.objects(), &[Object::Space(1), Object::Space(1), Object::Space(0)]);
    }

    #[test]
    fn nonfunctorial_file_is_rejected() {
        let text = r#"{"proset": {"elements": ["a","b","c","d"], "relations": [[0,1],[0,2],[1,3],[2,3]]},
                       "target": {"tag": "finvect", "p": 2}, "objects": [1,1,1,1],
                       "morphisms": {"a->b": [[1]], "a->c": [[1]], "b->d": [[1]], "c->d": [[0]]}}"#;
        let file: ModuleFile = serde_json::from_str(text).unwrap();
        assert!(matches!(module_from_file(&file, Path::new(".")), Err(Error::NotFunctorial(_))));
    }

    #[test]
    fn finsimp_module_with_complex_path() {
        let dir = tempfile::tempdir().unwrap();
        let k = SimplicialComplex::new(vec!["u", "v"], &[vec![0, 1]]).unwrap();
        write_json(&dir.path().join("k.json"), &k.to_file()).unwrap();
        let text = r#"{"proset": {"grid": [[0,1]]}, "target": {"tag": "finsimp", "complex": "k.json"},
                       "objects": [[["u"]], [["u","v"]]]}"#;
        let path = dir.path().join("m.json");
        fs::write(&path, text).unwrap();
        let m = load_module(&path).unwrap();
        assert_eq!(m.object(1), &Object::Complex(k.full()));
    }
}
