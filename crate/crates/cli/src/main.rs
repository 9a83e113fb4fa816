//! `etcon`: JSON pipelines over the etcon library.
//!
//! Every verb reads one document (stdin unless `--input` is given) and
//! writes one document (stdout unless `--output`). Exit status is 0 iff all
//! requested certifications pass. Failures print an error object on stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use etcon::constructions::{
    build_cross_stack, build_truncatable_stacked, cuts_from_edge_tangency, et_realization,
    generate, midpoint_cuts, truncate_all, ConstructionError, CutSystem, GeneratorKind, StackBase,
};
use etcon::et::{d_construction, et, EtError};
use etcon::formulas::{consistency_suite, eval_family, table, Family, FormulaError};
use etcon::geometry::{GeometryError, VHPolytope};
use etcon::io::{
    load_chain_point, load_cut_system, load_lattice, load_plan, load_polytope, save_chain_point,
    save_cut_system, save_et, save_polytope, to_json, IoError,
};
use etcon::poset::{are_isomorphic, fatness, GradedPoset, PosetError};
use etcon::rational::{format_rat, parse_rat};
use etcon::subdivision::{pi, pi_inverse, SubdivisionError};

#[derive(Parser)]
#[command(name = "etcon", version, about = "E_t-construction pipelines with exact rational geometry")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
struct Io {
    /// Input document (default: stdin).
    #[arg(long, short = 'i', global = true)]
    input: Option<PathBuf>,
    /// Output document (default: stdout).
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Emit a polytope.
    Generate(GenerateArgs),
    /// E_t of the input lattice or polytope.
    Et {
        #[arg(short = 't', long = "t")]
        t: usize,
        #[command(flatten)]
        io: Io,
    },
    /// D_k = opposite(E_k) of the input.
    Dk {
        #[arg(short = 'k')]
        k: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Simultaneous vertex truncation D_1 of the input polytope.
    Truncate(TruncateArgs),
    /// conv(P ∪ P°) for a t-face tangent input polytope.
    Realize {
        #[arg(long = "t")]
        t: usize,
        #[arg(long)]
        r2: String,
        #[command(flatten)]
        io: Io,
    },
    /// Certify properties of the input lattice or polytope.
    Check(CheckArgs),
    /// Print the f-vector and selected flag numbers.
    Flags {
        /// Emit JSON instead of the one-line form.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Decide isomorphism of two lattices or polytopes.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Map a chain point through pi or its inverse.
    Subdivide(SubdivideArgs),
    /// Reproduction table of the closed-form families.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Simplex,
    Cube,
    Cross,
    Hypersimplex,
    M,
    HalfcubeN,
    Prism,
    Stacked,
    CrossStack,
}

#[derive(Args)]
struct GenerateArgs {
    shape: Shape,
    #[arg(short = 'd', default_value_t = 4)]
    d: usize,
    /// Hypersimplex level.
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Number of blocks for cross-stack.
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Base of a stacked polytope.
    #[arg(long, value_enum, default_value = "simplex")]
    base: BaseArg,
    /// Stacking plan: a JSON file or comma-separated facet indices.
    #[arg(long)]
    plan: Option<String>,
    /// For stacked and cross-stack: also write the certified cut system here.
    #[arg(long)]
    cuts_out: Option<PathBuf>,
    #[command(flatten)]
    io: Io,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Simplex,
    Cross,
}

impl From<BaseArg> for StackBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Simplex => StackBase::Simplex,
            BaseArg::Cross => StackBase::Cross,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    /// Cut every edge at its midpoint.
    Midpoint,
    /// Rebuild a stacked polytope step by step (needs --base, -d, --plan).
    Inductive,
    /// Cut at the tangency points of the edges (needs --r2).
    EdgeTangent,
}

#[derive(Args)]
struct TruncateArgs {
    /// Cut system document.
    #[arg(long, conflicts_with = "strategy")]
    cuts: Option<PathBuf>,
    #[arg(long, value_enum)]
    strategy: Option<Strategy>,
    #[arg(long, value_enum, default_value = "simplex")]
    base: BaseArg,
    #[arg(short = 'd', default_value_t = 4)]
    d: usize,
    #[arg(long)]
    plan: Option<String>,
    #[arg(long)]
    r2: Option<String>,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    eulerian: bool,
    #[arg(long)]
    lattice: bool,
    #[arg(long, value_name = "K")]
    simplicial: Option<usize>,
    #[arg(long, value_name = "H")]
    simple: Option<usize>,
    /// 2-simplicial and 2-simple (dimension 4).
    #[arg(long = "2s2s")]
    two_s_two_s: bool,
    #[command(flatten)]
    io: Io,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// From E_t(L) to L.
    Pi,
    /// From L to E_t(L).
    PiInverse,
}

#[derive(Args)]
struct SubdivideArgs {
    /// The lattice (or polytope) L.
    #[arg(long)]
    lattice: PathBuf,
    #[arg(short = 't', long = "t")]
    t: usize,
    #[arg(long, value_enum, default_value = "pi-inverse")]
    direction: Direction,
    #[command(flatten)]
    io: Io,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    /// Also run the consistency suite; a failed check gives a nonzero exit.
    #[arg(long)]
    check: bool,
    /// Include checks that build polytopes (slower).
    #[arg(long, requires = "check")]
    builds: bool,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

/// Result of a verb: the document to emit and whether certifications held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

/// A lattice document or a polytope document, told apart by their keys.
enum Input {
    Lattice(GradedPoset),
    Polytope(Box<VHPolytope>),
}

impl Input {
    fn poset(&self) -> &GradedPoset {
        match self {
            Input::Lattice(poset) => poset,
            Input::Polytope(p) => &p.lattice.poset,
        }
    }

    fn polytope(self) -> Result<VHPolytope> {
        match self {
            Input::Polytope(p) => Ok(*p),
            Input::Lattice(_) => Err(anyhow!(IoError::Parse {
                path: "$".into(),
                field: "vertices".into(),
                reason: "expected a polytope document, found a lattice".into(),
            })),
        }
    }
}

fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: "$".into(),
        field: String::new(),
        reason: e.to_string(),
    })?;
    if v.get("elements").is_some() {
        Ok(Input::Lattice(load_lattice(text)?.poset))
    } else if v.get("vertices").is_some() {
        Ok(Input::Polytope(Box::new(load_polytope(text)?)))
    } else {
        Err(IoError::Parse {
            path: "$".into(),
            field: String::new(),
            reason: "neither a lattice (\"elements\") nor a polytope (\"vertices\") document".into(),
        }
        .into())
    }
}

fn load_input(path: &Option<PathBuf>) -> Result<Input> {
    parse_input(&read_input(path)?)
}

fn plan_arg(plan: &Option<String>) -> Result<Vec<usize>> {
    let Some(s) = plan else {
        return Ok(Vec::new());
    };
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    if trimmed.starts_with('[') {
        return Ok(load_plan(trimmed)?);
    }
    if let Ok(text) = fs::read_to_string(trimmed) {
        return Ok(load_plan(&text)?);
    }
    trimmed
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!(ConstructionError::BadParams(format!("bad plan entry {x:?}"))))
        })
        .collect()
}

fn rat_arg(s: &str, field: &str) -> Result<etcon::Rat> {
    parse_rat(s).map_err(|e| {
        IoError::Parse {
            path: format!("--{field}"),
            field: field.into(),
            reason: e.to_string(),
        }
        .into()
    })
}

fn run_generate(a: GenerateArgs) -> Result<Outcome> {
    let d = a.d;
    let mut cuts = None;
    let p = match a.shape {
        Shape::Simplex => generate(GeneratorKind::Simplex { d })?,
        Shape::Cube => generate(GeneratorKind::Cube { d })?,
        Shape::Cross => generate(GeneratorKind::Cross { d })?,
        Shape::Hypersimplex => generate(GeneratorKind::Hypersimplex {
            d,
            k: a.k.ok_or_else(|| ConstructionError::BadParams("hypersimplex needs -k".into()))?,
        })?,
        Shape::M => generate(GeneratorKind::M { d })?,
        Shape::HalfcubeN => generate(GeneratorKind::HalfcubeN { d })?,
        Shape::Prism => generate(GeneratorKind::PrismOverSimplex { d })?,
        Shape::Stacked => {
            let fam = build_truncatable_stacked(a.base.into(), d, &plan_arg(&a.plan)?)?;
            cuts = Some(fam.cuts);
            fam.polytope
        }
        Shape::CrossStack => {
            let n = a.n.ok_or_else(|| ConstructionError::BadParams("cross-stack needs -n".into()))?;
            let cs = build_cross_stack(n)?;
            cuts = cs.cuts;
            cs.polytope
        }
    };
    if let Some(path) = &a.cuts_out {
        let cuts = cuts.ok_or_else(|| {
            ConstructionError::CutSearchFailed("no certified cut system for this polytope".into())
        })?;
        write_output(&Some(path.clone()), &save_cut_system(&cuts))?;
    }
    Ok(Outcome::ok(save_polytope(&p)))
}

fn run_truncate(a: TruncateArgs) -> Result<Outcome> {
    if let Some(Strategy::Inductive) = a.strategy {
        let fam = build_truncatable_stacked(a.base.into(), a.d, &plan_arg(&a.plan)?)?;
        return Ok(Outcome::ok(save_polytope(&fam.truncation()?)));
    }
    let p = load_input(&a.io.input)?.polytope()?;
    let cuts: CutSystem = match (&a.cuts, a.strategy) {
        (Some(path), _) => load_cut_system(&read_input(&Some(path.clone()))?)?,
        (None, Some(Strategy::EdgeTangent)) => {
            let r2 = a
                .r2
                .as_deref()
                .ok_or_else(|| ConstructionError::BadParams("edge-tangent needs --r2".into()))?;
            cuts_from_edge_tangency(&p, &rat_arg(r2, "r2")?)?
        }
        (None, _) => midpoint_cuts(&p)?,
    };
    Ok(Outcome::ok(save_polytope(&truncate_all(&p, &cuts)?)))
}

fn run_check(a: CheckArgs) -> Result<Outcome> {
    let input = load_input(&a.io.input)?;
    let p = input.poset();
    let mut checks = Vec::new();
    let mut push = |property: &str, passed: bool| checks.push(json!({"property": property, "passed": passed}));
    if let Input::Polytope(_) = input {
        // reaching this point means validate accepted the document
        push("geometric-certificate", true);
    }
    let none = !a.eulerian && !a.lattice && a.simplicial.is_none() && a.simple.is_none() && !a.two_s_two_s;
    if a.eulerian || none {
        push("eulerian", p.is_eulerian());
    }
    if a.lattice {
        push("lattice", p.is_lattice());
    }
    if let Some(k) = a.simplicial {
        push(&format!("{k}-simplicial"), p.is_eulerian() && p.is_k_simplicial(k));
    }
    if let Some(h) = a.simple {
        push(&format!("{h}-simple"), p.is_eulerian() && p.is_h_simple(h));
    }
    if a.two_s_two_s {
        let ok = p.length() == 5 && p.is_eulerian() && p.is_k_simplicial(2) && p.is_h_simple(2);
        push("2-simplicial-2-simple", ok);
    }
    let ok = checks.iter().all(|c| c["passed"] == json!(true));
    Ok(Outcome {
        text: to_json(&json!({"checks": checks, "passed": ok})),
        ok,
    })
}

fn run_flags(json_out: bool, io: &Io) -> Result<Outcome> {
    let input = load_input(&io.input)?;
    let fv = input.poset().flag_vector();
    if !json_out {
        return Ok(Outcome::ok(fv.to_string()));
    }
    let mut doc = json!({"f": fv.proper()});
    if let Some(v) = fv.fij(0, 3).filter(|_| input.poset().length() == 5) {
        doc["f03"] = json!(v);
        doc["fatness"] = json!(format_rat(&fatness(&fv)?));
    }
    Ok(Outcome::ok(to_json(&doc)))
}

fn run_iso(first: &Path, second: &Path) -> Result<Outcome> {
    let a = load_input(&Some(first.to_path_buf()))?;
    let b = load_input(&Some(second.to_path_buf()))?;
    let iso = are_isomorphic(a.poset(), b.poset());
    let ok = iso.is_some();
    let doc = json!({
        "isomorphic": ok,
        "map": iso.map(|m| m.map),
    });
    Ok(Outcome { text: to_json(&doc), ok })
}

fn run_subdivide(a: SubdivideArgs) -> Result<Outcome> {
    let l = load_input(&Some(a.lattice.clone()))?;
    let l = l.poset();
    let e = et(l, a.t)?;
    let point = load_chain_point(&read_input(&a.io.input)?)?;
    let out = match a.direction {
        Direction::Pi => pi(l, &e, &point)?,
        Direction::PiInverse => pi_inverse(l, &e, &point)?,
    };
    Ok(Outcome::ok(save_chain_point(&out)))
}

fn catalog_rows() -> Result<Vec<Value>> {
    let mut rows = Vec::new();
    let entries: [(&str, GeneratorKind, usize); 3] = [
        ("E_1(simplex)", GeneratorKind::Simplex { d: 4 }, 1),
        ("E_2(cube)", GeneratorKind::Cube { d: 4 }, 2),
        ("E_2(prism over simplex)", GeneratorKind::PrismOverSimplex { d: 4 }, 2),
    ];
    for (name, kind, t) in entries {
        let p = generate(kind)?;
        let fv = et(&p.lattice.poset, t)?.poset.flag_vector();
        rows.push(json!({
            "family": name,
            "parameter": "d=4",
            "tuple": fv.to_string(),
            "source": "E_t catalog, computed",
        }));
    }
    Ok(rows)
}

fn run_tables(a: &TablesArgs) -> Result<Outcome> {
    let mut rows = catalog_rows()?;
    let plan: [(Family, &[i64], &str); 6] = [
        (Family::D1P, &[0, 1, 2, 3], "vertex truncation of stacked polytopes"),
        (Family::D1C, &[1, 2, 3, 42, 577], "vertex truncation of cross-polytope stacks"),
        (Family::C4n, &[1, 2, 3], "cross-polytope stacks"),
        (Family::Q { d: 4 }, &[1, 2, 3], "hyperbolic gluing, arithmetic only"),
        (Family::EQ { d: 4 }, &[1, 2, 3], "E_1 of hyperbolic gluing, arithmetic only"),
        (Family::EQ { d: 5 }, &[1, 2], "E_2 of hyperbolic gluing, arithmetic only"),
    ];
    for (fam, ns, source) in plan {
        rows.push(json!({
            "family": fam.name(),
            "parameter": "symbolic",
            "tuple": table(fam).to_string(),
            "source": source,
        }));
        for &n in ns {
            let v = eval_family(fam, n)?;
            rows.push(json!({
                "family": fam.name(),
                "parameter": format!("n={n}"),
                "tuple": v.to_string(),
                "source": source,
            }));
        }
    }
    let cell = eval_family(Family::D1C, 1)?.to_flag_vector();
    rows.push(json!({
        "family": "fatness",
        "parameter": "24-cell",
        "tuple": format_rat(&fatness(&cell)?),
        "source": "(f1+f2)/(f0+f3)",
    }));

    let report = a.check.then(|| consistency_suite(a.builds));
    let ok = report.as_ref().is_none_or(|r| r.all_passed());
    let text = match a.format {
        Format::Json => to_json(&json!({"rows": rows, "consistency": report})),
        Format::Tsv => {
            let mut s = String::from("family\tparameter\ttuple\tsource\n");
            for r in &rows {
                let cell = |k: &str| r[k].as_str().unwrap_or_default().to_string();
                s += &format!("{}\t{}\t{}\t{}\n", cell("family"), cell("parameter"), cell("tuple"), cell("source"));
            }
            if let Some(rep) = &report {
                for c in &rep.checks {
                    s += &format!("# {}\t{}\t{}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
                }
                for n in &rep.notes {
                    s += &format!("# note\t{n}\n");
                }
            }
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn dispatch(cli: Cli) -> Result<(Outcome, Option<PathBuf>)> {
    Ok(match cli.verb {
        Verb::Generate(a) => {
            let out = a.io.output.clone();
            (run_generate(a)?, out)
        }
        Verb::Et { t, io } => {
            let input = load_input(&io.input)?;
            (Outcome::ok(save_et(&et(input.poset(), t)?)), io.output)
        }
        Verb::Dk { k, io } => {
            let input = load_input(&io.input)?;
            (Outcome::ok(save_et(&d_construction(input.poset(), k)?)), io.output)
        }
        Verb::Truncate(a) => {
            let out = a.io.output.clone();
            (run_truncate(a)?, out)
        }
        Verb::Realize { t, r2, io } => {
            let p = load_input(&io.input)?.polytope()?;
            let q = et_realization(&p, t, &rat_arg(&r2, "r2")?)?;
            (Outcome::ok(save_polytope(&q)), io.output)
        }
        Verb::Check(a) => {
            let out = a.io.output.clone();
            (run_check(a)?, out)
        }
        Verb::Flags { json, io } => (run_flags(json, &io)?, io.output),
        Verb::Iso { first, second, output } => (run_iso(&first, &second)?, output),
        Verb::Subdivide(a) => {
            let out = a.io.output.clone();
            (run_subdivide(a)?, out)
        }
        Verb::Tables(a) => (run_tables(&a)?, a.output.clone()),
    })
}

/// Variant name of the innermost known library error, e.g. `NotGraded`.
fn error_kind(e: &anyhow::Error) -> String {
    fn variant(debug: String) -> String {
        debug
            .split(|c: char| !c.is_alphanumeric() && c != '_')
            .next()
            .unwrap_or_default()
            .to_string()
    }
    if let Some(x) = e.downcast_ref::<IoError>() {
        return match x {
            IoError::Poset(p) => variant(format!("{p:?}")),
            IoError::Geometry(g) => variant(format!("{g:?}")),
            IoError::Parse { .. } => "ParseError".into(),
        };
    }
    if let Some(x) = e.downcast_ref::<ConstructionError>() {
        return match x {
            ConstructionError::Geometry(g) => variant(format!("{g:?}")),
            ConstructionError::Et(EtError::Poset(p)) => variant(format!("{p:?}")),
            other => variant(format!("{other:?}")),
        };
    }
    if let Some(x) = e.downcast_ref::<EtError>() {
        return match x {
            EtError::Poset(p) => variant(format!("{p:?}")),
            other => variant(format!("{other:?}")),
        };
    }
    if let Some(x) = e.downcast_ref::<PosetError>() {
        return variant(format!("{x:?}"));
    }
    if let Some(x) = e.downcast_ref::<GeometryError>() {
        return variant(format!("{x:?}"));
    }
    if let Some(x) = e.downcast_ref::<SubdivisionError>() {
        return variant(format!("{x:?}"));
    }
    if let Some(x) = e.downcast_ref::<FormulaError>() {
        return variant(format!("{x:?}"));
    }
    "Error".into()
}

fn error_doc(e: &anyhow::Error) -> Value {
    let mut doc = json!({"error": {"kind": error_kind(e), "message": format!("{e:#}")}});
    if let Some(IoError::Parse { path, field, .. }) = e.downcast_ref::<IoError>() {
        doc["error"]["path"] = json!(path);
        doc["error"]["field"] = json!(field);
    }
    doc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(cli).and_then(|(out, path)| {
        write_output(&path, &out.text)?;
        if !out.ok {
            bail!("certification failed");
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.to_string() == "certification failed" => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", to_json(&error_doc(&e)));
            ExitCode::from(2)
        }
    }
}
