//! `genpers`: exact interleaving distances from the command line.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genpers::barcode::{barcode_1d, bottleneck, bottleneck_on_grid, Bar};
use genpers::complex::{ComplexFile, SimplicialComplex};
use genpers::interleave::{distance_bruteforce, distance_family, verify_certificate, DistanceResult, SearchGuard};
use genpers::invimage::{inv_image_module, stability_suite, FamilySpec, FunctionFile, VertexFunction};
use genpers::io::{certificate_from_file, certificate_to_file, load_module, module_to_file, read_json, write_json, CertificateFile};
use genpers::mergetree::{merge_tree, MergeTree};
use genpers::metrics::{standard_family, FamilyFile, LawvereMetric, MetricFile, SublinearProjection, SuperlinearFamily};
use genpers::pmod::{apply_functor, Functor, PersistenceModule};
use genpers::proset::Grid;
use genpers::random::{perturb_function, random_complex, random_finvect, random_function, random_poset, rng};
use genpers::translations::{enumerate_translations, DEFAULT_CAP};
use genpers::vecpers::{d_a, d_set, vector_levels, Membership};
use genpers::{Error, Ext};
use num_rational::Rational64;
use report::{ext_json, RunReport, Status, EXIT_BOUNDS, EXIT_INPUT};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "genpers", version, about = "Exact interleaving distances for persistence modules over finite prosets")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of candidate transformations enumerated per search component.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    guard_size: u64,
    /// Directory for certificates, CSV/DOT artifacts and the report.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timing in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interleaving distance between two modules.
    Distance(DistanceArgs),
    /// Check d(HF,HG) ≤ d(F,G) ≤ d∞(f,g) for inverse-image modules.
    Stability(StabilityArgs),
    /// The up-set of vector interleaving parameters on a 2-D or higher grid.
    Dset(DsetArgs),
    /// Barcode of a module over a 1-D grid, optionally the bottleneck distance to another.
    Barcode(BarcodeArgs),
    /// Merge tree of a FinSet module over a chain, or of the components of sublevel sets.
    Mergetree(MergetreeArgs),
    /// Re-verify an exported certificate.
    Check(CheckArgs),
    /// Generate random inputs.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct DistanceArgs {
    #[arg(long, num_args = 2, value_names = ["F", "G"], required = true)]
    modules: Vec<PathBuf>,
    /// `standard` or a family file `{"eps": [...], "tables": [...]}`.
    #[arg(long, conflicts_with_all = ["metric", "direction"])]
    family: Option<String>,
    /// Lawvere metric file; computes the distance by enumerating translations.
    #[arg(long, conflicts_with = "direction")]
    metric: Option<PathBuf>,
    /// Direction vector `a` for d_a, comma separated.
    #[arg(long)]
    direction: Option<String>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    /// Family file naming a generator, e.g. `{"generator": "sublevelset", "thresholds": [0,1,2]}`.
    #[arg(long)]
    family: PathBuf,
    /// Functor tags applied left to right, comma separated.
    #[arg(long, default_value = "homology:0:2")]
    functor: String,
    #[arg(long, required_unless_present = "random")]
    complex: Option<PathBuf>,
    #[arg(long, requires = "complex")]
    f: Option<PathBuf>,
    #[arg(long, requires = "complex")]
    g: Option<PathBuf>,
    /// Run this many seeded random instances instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 5)]
    vertices: usize,
}

#[derive(Args, Debug)]
struct DsetArgs {
    #[arg(long, num_args = 2, value_names = ["F", "G"], required_unless_present = "complex", conflicts_with = "complex")]
    modules: Vec<PathBuf>,
    /// Compare the quadrant filtrations of two grid-valued functions instead.
    #[arg(long, requires_all = ["f", "g", "family"])]
    complex: Option<PathBuf>,
    #[arg(long)]
    f: Option<PathBuf>,
    #[arg(long)]
    g: Option<PathBuf>,
    /// A quadrant family file.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Functor tags applied to both filtrations, comma separated.
    #[arg(long)]
    functor: Option<String>,
    /// JSON list of vectors to test; defaults to all products of axis differences.
    #[arg(long)]
    levels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BarcodeArgs {
    #[arg(long)]
    module: PathBuf,
    #[arg(long)]
    against: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MergetreeArgs {
    #[arg(long, conflicts_with_all = ["complex", "function", "family"])]
    module: Option<PathBuf>,
    #[arg(long, requires_all = ["function", "family"])]
    complex: Option<PathBuf>,
    #[arg(long)]
    function: Option<PathBuf>,
    #[arg(long)]
    family: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, num_args = 2, value_names = ["F", "G"], required = true)]
    modules: Vec<PathBuf>,
    #[arg(long)]
    certificate: PathBuf,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// A random FinVect module over a random poset.
    Module {
        #[arg(long, default_value_t = 4)]
        elements: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// A random simplicial complex.
    Complex {
        #[arg(long, default_value_t = 5)]
        vertices: usize,
    },
    /// A random function from a complex into a family's space.
    Function {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
}

struct Ctx {
    guard: SearchGuard,
    out_dir: Option<PathBuf>,
    format: Format,
    seed: u64,
    /// Text printed instead of the JSON report for csv/dot output.
    artifact: Option<String>,
}

impl Ctx {
    fn write(&self, name: &str, contents: &str) -> Result<Option<String>, Error> {
        let Some(dir) = &self.out_dir else { return Ok(None) };
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(Some(path.display().to_string()))
    }

    fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<Option<String>, Error> {
        let Some(dir) = &self.out_dir else { return Ok(None) };
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        write_json(&path, value)?;
        Ok(Some(path.display().to_string()))
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut ctx = Ctx {
        guard: SearchGuard { max_candidates: cli.guard_size, max_nodes: cli.guard_size.saturating_mul(16) },
        out_dir: cli.out_dir.clone(),
        format: cli.format,
        seed: cli.seed,
        artifact: None,
    };
    let mut report = RunReport::new(argv[1..].to_vec());
    let result = match &cli.command {
        Command::Distance(a) => cmd_distance(&mut ctx, &mut report, a),
        Command::Stability(a) => cmd_stability(&mut ctx, &mut report, a),
        Command::Dset(a) => cmd_dset(&mut ctx, &mut report, a),
        Command::Barcode(a) => cmd_barcode(&mut ctx, &mut report, a),
        Command::Mergetree(a) => cmd_mergetree(&mut ctx, &mut report, a),
        Command::Check(a) => cmd_check(&mut ctx, &mut report, a),
        Command::Gen(a) => cmd_gen(&mut ctx, &mut report, a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::from(if matches!(e, Error::GuardExceeded(_)) { EXIT_BOUNDS } else { EXIT_INPUT });
    }
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    let text = report.to_json();
    if let Err(e) = ctx.write("report.json", &text) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    match ctx.artifact.take() {
        Some(a) if ctx.format != Format::Json => print!("{a}"),
        _ => print!("{text}"),
    }
    if let Some(v) = report.outputs.get("violations") {
        eprintln!("violations: {v}");
    }
    ExitCode::from(report.status.exit_code())
}

fn load_inputs(report: &mut RunReport, paths: &[PathBuf]) -> Result<Vec<PersistenceModule>, Error> {
    paths
        .iter()
        .map(|p| {
            report.input(p)?;
            load_module(p)
        })
        .collect()
}

fn rational(s: &str) -> Result<Rational64, Error> {
    genpers::ext::parse_rational(s.trim()).ok_or_else(|| Error::Parse(format!("not a rational: {s}")))
}

fn parse_vector(s: &str) -> Result<Vec<Rational64>, Error> {
    s.split(',').map(rational).collect()
}

fn put_result(ctx: &Ctx, report: &mut RunReport, key: &str, r: &DistanceResult) -> Result<(), Error> {
    report.distance(key, &r.value);
    if let Some(c) = &r.certificate {
        if let Some(path) = ctx.write_json(&format!("{key}_certificate.json"), &certificate_to_file(c))? {
            report.put(&format!("{key}_certificate"), json!(path));
        }
    }
    Ok(())
}

fn cmd_distance(ctx: &mut Ctx, report: &mut RunReport, a: &DistanceArgs) -> Result<(), Error> {
    let mods = load_inputs(report, &a.modules)?;
    let (f, g) = (&mods[0], &mods[1]);
    if f.proset().as_ref() != g.proset().as_ref() {
        return Err(Error::ProsetMismatch);
    }
    let result = if let Some(path) = &a.metric {
        report.input(path)?;
        let d = LawvereMetric::from_file(&read_json::<MetricFile>(path)?)?;
        let all = enumerate_translations(f.proset(), DEFAULT_CAP)?;
        report.put("method", json!("lawvere"));
        distance_bruteforce(f, g, &SublinearProjection::Lawvere(d), &all, &ctx.guard)?
    } else if let Some(dir) = &a.direction {
        let grid = Grid::recognize(f.proset()).ok_or_else(|| Error::Invalid("directional distances need a grid".into()))?;
        report.put("method", json!(format!("direction {dir}")));
        d_a(f, g, &grid, &parse_vector(dir)?, None, &ctx.guard)?
    } else {
        let family = match a.family.as_deref() {
            None | Some("standard") => {
                let grid = Grid::recognize(f.proset())
                    .ok_or_else(|| Error::Invalid("the standard family needs a grid; pass --family FILE".into()))?;
                report.put("method", json!("standard family"));
                standard_family(&grid)
            }
            Some(path) => {
                let path = Path::new(path);
                report.input(path)?;
                report.put("method", json!("family file"));
                SuperlinearFamily::from_file(f.proset().clone(), &read_json::<FamilyFile>(path)?)?
            }
        };
        distance_family(f, g, &family, &ctx.guard)?
    };
    put_result(ctx, report, "distance", &result)
}

fn load_function(report: &mut RunReport, path: &Path, k: &Arc<SimplicialComplex>, fam: &genpers::invimage::SubsetFamily) -> Result<VertexFunction, Error> {
    report.input(path)?;
    VertexFunction::from_file(k.clone(), fam.space(), &read_json::<FunctionFile>(path)?)
}

fn parse_functors(s: &str) -> Result<Vec<Functor>, Error> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

fn cmd_stability(ctx: &mut Ctx, report: &mut RunReport, a: &StabilityArgs) -> Result<(), Error> {
    report.input(&a.family)?;
    let family = read_json::<FamilySpec>(&a.family)?.build()?;
    let functors = parse_functors(&a.functor)?;
    if let Some(n) = a.random {
        let mut r = rng(ctx.seed);
        let mut bounds_only = 0;
        let mut instances = Vec::new();
        for i in 0..n {
            let k = Arc::new(random_complex(&mut r, a.vertices, 0.5, 0.4));
            let f = random_function(&mut r, &k, family.space());
            let g = perturb_function(&mut r, &f, family.space(), Ext::int(1), 0.5);
            let rep = stability_suite(&f, &g, &family, &functors, &ctx.guard)?;
            if rep.d_functor.value.exact().is_none() || rep.d_modules.value.exact().is_none() {
                bounds_only += 1;
            }
            for v in &rep.violations {
                report.violation(format!("instance {i}: {v}"));
            }
            instances.push(json!({
                "dinfty": ext_json(rep.dinfty),
                "d_modules": report::distance_json(&rep.d_modules.value),
                "d_functor": report::distance_json(&rep.d_functor.value),
            }));
        }
        report.put("instances", json!(n));
        report.put("bounds_only", json!(bounds_only));
        report.put("results", Value::Array(instances));
        if bounds_only > 0 {
            report.status = report.status.and(Status::BoundsOnly);
        }
        return Ok(());
    }
    let path = a.complex.as_ref().expect("clap requires a complex");
    report.input(path)?;
    let k = Arc::new(SimplicialComplex::from_file(&read_json::<ComplexFile>(path)?)?);
    let (Some(fp), Some(gp)) = (&a.f, &a.g) else {
        return Err(Error::Invalid("--f and --g are required with --complex".into()));
    };
    let f = load_function(report, fp, &k, &family)?;
    let g = load_function(report, gp, &k, &family)?;
    let rep = stability_suite(&f, &g, &family, &functors, &ctx.guard)?;
    report.put("dinfty", ext_json(rep.dinfty));
    put_result(ctx, report, "d_modules", &rep.d_modules)?;
    put_result(ctx, report, "d_functor", &rep.d_functor)?;
    if let Some(c) = &rep.offset_certificate {
        let path = ctx.write_json("offset_certificate.json", &certificate_to_file(c))?;
        report.put("offset_certificate", path.map_or(json!(true), |p| json!(p)));
    }
    if let Some(v) = rep.pushed_certificate_valid {
        report.put("pushed_certificate_valid", json!(v));
    }
    for v in rep.violations {
        report.violation(v);
    }
    Ok(())
}

/// Quadrant filtrations of `f` and `g`, and their componentwise sup-norm distance.
fn quadrant_pair(report: &mut RunReport, a: &DsetArgs) -> Result<(Vec<PersistenceModule>, Vec<Rational64>), Error> {
    let (Some(kp), Some(fp), Some(gp), Some(famp)) = (&a.complex, &a.f, &a.g, &a.family) else {
        return Err(Error::Invalid("pass --modules, or --complex with --f, --g and --family".into()));
    };
    report.input(kp)?;
    report.input(famp)?;
    let k = Arc::new(SimplicialComplex::from_file(&read_json::<ComplexFile>(kp)?)?);
    let family = read_json::<FamilySpec>(famp)?.build()?;
    let f = load_function(report, fp, &k, &family)?;
    let g = load_function(report, gp, &k, &family)?;
    let coords = |v: usize| -> Result<Vec<Rational64>, Error> { parse_vector(&family.space().labels()[v]) };
    let mut e: Vec<Rational64> = Vec::new();
    for (&x, &y) in f.values.iter().zip(&g.values) {
        let (p, q) = (coords(x)?, coords(y)?);
        if e.is_empty() {
            e = vec![Rational64::from_integer(0); p.len()];
        }
        for ((ek, pk), qk) in e.iter_mut().zip(&p).zip(&q) {
            *ek = (*ek).max(if pk > qk { pk - qk } else { qk - pk });
        }
    }
    let functors = match &a.functor {
        Some(s) => parse_functors(s)?,
        None => Vec::new(),
    };
    let mods = [f, g]
        .iter()
        .map(|h| genpers::invimage::apply_chain(&functors, &inv_image_module(h, &family)?))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((mods, e))
}

fn cmd_dset(ctx: &mut Ctx, report: &mut RunReport, a: &DsetArgs) -> Result<(), Error> {
    let (mods, norm) = if a.complex.is_some() {
        let (mods, e) = quadrant_pair(report, a)?;
        (mods, Some(e))
    } else {
        (load_inputs(report, &a.modules)?, None)
    };
    let grid = Grid::recognize(mods[0].proset()).ok_or_else(|| Error::Invalid("d_set needs a grid".into()))?;
    let mut points = match &a.levels {
        Some(p) => {
            report.input(p)?;
            let raw: Vec<Vec<Value>> = read_json(p)?;
            raw.iter()
                .map(|v| {
                    v.iter()
                        .map(|x| match x {
                            Value::Number(n) => rational(&n.to_string()),
                            Value::String(s) => rational(s),
                            other => Err(Error::Parse(format!("bad level entry {other}"))),
                        })
                        .collect()
                })
                .collect::<Result<Vec<Vec<Rational64>>, Error>>()?
        }
        None => vector_levels(&grid),
    };
    if let Some(e) = &norm {
        if !points.contains(e) {
            points.push(e.clone());
        }
    }
    let up = d_set(&mods[0], &mods[1], &grid, &points, &ctx.guard)?;
    if let Some(e) = &norm {
        let st = up.status_of(e).expect("e was added to the points");
        report.put("norm_vector", json!(e.iter().map(|r| Ext::Fin(*r).to_string()).collect::<Vec<_>>()));
        report.put("norm_vector_status", json!(st.to_string()));
        if st == Membership::Out {
            report.violation("the componentwise-norm vector is not in the set".into());
        }
    }
    let csv = up.to_csv();
    let count = |m: Membership| up.status.iter().filter(|s| **s == m).count();
    report.put("in", json!(count(Membership::In)));
    report.put("out", json!(count(Membership::Out)));
    report.put("unknown", json!(count(Membership::Unknown)));
    report.put("is_up_set", json!(up.is_up_set()));
    if !up.is_up_set() {
        report.violation("membership is not upward closed".into());
    }
    if count(Membership::Unknown) > 0 {
        report.status = report.status.and(Status::BoundsOnly);
    }
    if let Some(path) = ctx.write("dset.csv", &csv)? {
        report.put("csv", json!(path));
    }
    report.put("rows", json!(csv.lines().skip(1).collect::<Vec<_>>()));
    ctx.artifact = Some(csv);
    Ok(())
}

fn grid_values(f: &PersistenceModule) -> Result<(Grid, Vec<Rational64>), Error> {
    let grid = Grid::recognize(f.proset())
        .filter(|g| g.dim() == 1)
        .ok_or_else(|| Error::Invalid("barcodes need a module over a 1-D grid".into()))?;
    let values = (0..grid.len()).map(|x| grid.point(x)[0]).collect();
    Ok((grid, values))
}

fn bars_json(bars: &[Bar]) -> Value {
    json!(bars.iter().map(|b| b.to_string()).collect::<Vec<_>>())
}

fn cmd_barcode(ctx: &mut Ctx, report: &mut RunReport, a: &BarcodeArgs) -> Result<(), Error> {
    report.input(&a.module)?;
    let f = load_module(&a.module)?;
    let (grid, values) = grid_values(&f)?;
    let bars = barcode_1d(&f, &values)?;
    report.put("bars", bars_json(&bars));
    let mut csv = String::from("birth,death\n");
    for b in &bars {
        csv.push_str(&format!("{},{}\n", Ext::Fin(b.birth), b.death));
    }
    if let Some(path) = &a.against {
        report.input(path)?;
        let g = load_module(path)?;
        let other = barcode_1d(&g, &grid_values(&g)?.1)?;
        report.put("against_bars", bars_json(&other));
        report.put("bottleneck", ext_json(bottleneck(&bars, &other)));
        let axis = &grid.axes[0];
        let gaps: Vec<Rational64> = axis.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(&step) = gaps.first().filter(|s| gaps.iter().all(|g| g == *s)) {
            report.put("bottleneck_on_grid", ext_json(bottleneck_on_grid(&bars, &other, step)));
        }
    }
    if let Some(p) = ctx.write("barcode.csv", &csv)? {
        report.put("csv", json!(p));
    }
    ctx.artifact = Some(csv);
    Ok(())
}

fn tree_outputs(ctx: &mut Ctx, report: &mut RunReport, t: &MergeTree) -> Result<(), Error> {
    report.put("leaves", json!(t.leaves()));
    report.put("merges", json!(t.merges()));
    report.put("edges", json!(t.edges()));
    let dot = t.to_dot();
    if let Some(p) = ctx.write("mergetree.dot", &dot)? {
        report.put("dot", json!(p));
    }
    ctx.artifact = Some(dot);
    Ok(())
}

fn cmd_mergetree(ctx: &mut Ctx, report: &mut RunReport, a: &MergetreeArgs) -> Result<(), Error> {
    let module = if let Some(path) = &a.module {
        report.input(path)?;
        load_module(path)?
    } else {
        let (Some(kp), Some(fp), Some(famp)) = (&a.complex, &a.function, &a.family) else {
            return Err(Error::Invalid("pass --module, or --complex with --function and --family".into()));
        };
        report.input(kp)?;
        report.input(famp)?;
        let k = Arc::new(SimplicialComplex::from_file(&read_json::<ComplexFile>(kp)?)?);
        let family = read_json::<FamilySpec>(famp)?.build()?;
        let f = load_function(report, fp, &k, &family)?;
        apply_functor(Functor::Pi0, &inv_image_module(&f, &family)?)?
    };
    let tree = merge_tree(&module)?;
    tree_outputs(ctx, report, &tree)
}

fn cmd_check(_ctx: &mut Ctx, report: &mut RunReport, a: &CheckArgs) -> Result<(), Error> {
    let mods = load_inputs(report, &a.modules)?;
    report.input(&a.certificate)?;
    let file: CertificateFile = read_json(&a.certificate)?;
    let cert = certificate_from_file(&mods[0], &mods[1], &file)?;
    let ok = verify_certificate(&mods[0], &mods[1], &cert)?;
    report.put("valid", json!(ok));
    if !ok {
        report.violation("certificate does not verify".into());
    }
    Ok(())
}

fn cmd_gen(ctx: &mut Ctx, report: &mut RunReport, a: &GenArgs) -> Result<(), Error> {
    let mut r = rng(ctx.seed);
    let (name, value) = match &a.kind {
        GenKind::Module { elements, max_dim, p } => {
            let proset = Arc::new(random_poset(&mut r, *elements, 0.5));
            let m = random_finvect(&mut r, &proset, *p, *max_dim);
            ("module.json", serde_json::to_value(module_to_file(&m, None)).expect("serializable"))
        }
        GenKind::Complex { vertices } => {
            let k = random_complex(&mut r, *vertices, 0.5, 0.4);
            ("complex.json", serde_json::to_value(k.to_file()).expect("serializable"))
        }
        GenKind::Function { complex, family } => {
            report.input(complex)?;
            report.input(family)?;
            let k = Arc::new(SimplicialComplex::from_file(&read_json::<ComplexFile>(complex)?)?);
            let fam = read_json::<FamilySpec>(family)?.build()?;
            let f = random_function(&mut r, &k, fam.space());
            ("function.json", serde_json::to_value(f.to_file(fam.space())).expect("serializable"))
        }
    };
    if let Some(p) = ctx.write_json(name, &value)? {
        report.put("written", json!(p));
    }
    report.put("generated", value);
    Ok(())
}
