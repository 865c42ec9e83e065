//! Command-line front end for shiftlab.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shiftlab::canon::{canonize, CanonOptions, Constant, CoordinateEquality, PartitionOracle, RelationOracle, SumKernel};
use shiftlab::chroma::{self, chi_csp, chi_exact_with, chi_greedy, validate, Coloring, GreedyOrder};
use shiftlab::embed::{self, verify_map_with, PipelineOptions, VertexMap};
use shiftlab::families;
use shiftlab::kernel_analysis::{classify, decompose_ordered, extend_star};
use shiftlab::tuplespace::{GroundSet, IndexSet, Kernel, Label};
use shiftlab::{Graph, Parallelism, Side};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Timeout(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] shiftlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use shiftlab::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Timeout(_) => 4,
            CliError::Io(_) => 1,
            CliError::Core(E::InvalidParameter(_) | E::KTooSmall { .. } | E::GroundTooSmall { .. }) => 2,
            CliError::Core(E::VerificationFailed(_)) => 3,
            CliError::Core(E::Timeout { .. }) => 4,
            CliError::Core(_) => 1,
        }
    }
}

type Res<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Shift graphs, kernel graphs, colorings and embeddings")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). SHIFTLAB_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a graph family.
    Gen(GenArgs),
    /// Orbit, block and chain-extension reports for a kernel.
    Analyze(AnalyzeArgs),
    /// Chromatic number of a graph file.
    Chi(ChiArgs),
    /// Build one of the explicit colorings and validate it.
    Color(ColorArgs),
    /// Run an embedding construction.
    Embed(EmbedArgs),
    /// Canonize an equivalence relation on increasing tuples.
    Canon(CanonArgs),
    /// Check a coloring or a vertex map.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    Sh,
    Sym,
    Lsh,
    Rsh,
    Cyc,
    Glued,
    Kernel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dimacs,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub r: Option<usize>,
    /// Ground set size.
    #[arg(long)]
    pub n: usize,
    /// Block lengths for `glued`, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    pub nbar: Vec<usize>,
    /// Kernel pairs for `kernel`, e.g. `0:1,1:2`.
    #[arg(long, allow_hyphen_values = true)]
    pub kernel: Option<String>,
    /// Index set size for `kernel`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Use all injective tuples instead of increasing ones (`kernel`).
    #[arg(long)]
    pub injective: bool,
    /// Keep arc directions (`kernel`).
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub kernel: String,
    /// Index set `{0..m-1}`; defaults to the labels the kernel uses.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChiArgs {
    /// Graph file (native JSON, or DIMACS when it ends in `.col` or with `--dimacs`).
    pub input: PathBuf,
    #[arg(long, conflicts_with_all = ["greedy", "csp"])]
    pub exact: bool,
    #[arg(long, conflicts_with = "csp")]
    pub greedy: bool,
    /// The independent k-colorability search.
    #[arg(long)]
    pub csp: bool,
    /// Seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long)]
    pub dimacs: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColoringName {
    /// Pair coloring of the symmetric shift graph on binary strings.
    Eh,
    /// Recursive coloring of the symmetric `r`-shift graph.
    Recursive,
    /// Rotation-position coloring of the cyclic graph.
    Cycle,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long, value_enum)]
    pub construction: ColoringName,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Bounded,
    Intertwined,
    NoOrder,
    Ordered,
    Pipeline,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[arg(long, value_delimiter = ',')]
    pub nbar: Vec<usize>,
    /// Ground size for `bounded`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub kernel: Option<String>,
    /// Index set `{0..m-1}`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Source arity; defaults to the least admissible value.
    #[arg(long)]
    pub k: Option<usize>,
    /// Size of the source window `{0..window-1}`.
    #[arg(long, default_value_t = 8)]
    pub window: usize,
    /// For `pipeline`: project `Sh_k(window)` onto these coordinates.
    #[arg(long, value_delimiter = ',')]
    pub planted: Option<Vec<usize>>,
    /// For `pipeline`: a vertex map file whose source is an increasing shift graph.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Check the result and exit 3 if it fails its claims.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleName {
    Coord,
    Sum,
    Constant,
    Partition,
}

#[derive(Args, Debug)]
pub struct CanonArgs {
    #[arg(long, value_enum)]
    pub oracle: OracleName,
    #[arg(long)]
    pub arity: Option<usize>,
    #[arg(long)]
    pub ground: Option<usize>,
    /// Coordinates compared by `coord`.
    #[arg(long, value_delimiter = ',')]
    pub coords: Vec<usize>,
    /// Partition file for `partition`.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Size of the witness set; defaults to the ground size.
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long, default_value_t = 200_000)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, requires = "coloring")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["graph", "coloring"])]
    pub map: Option<PathBuf>,
    /// Arcs must map to arcs.
    #[arg(long)]
    pub directed: bool,
    /// Also require an injective map.
    #[arg(long)]
    pub injective: bool,
    #[arg(long)]
    pub dimacs: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `a:b,c:d`; labels are integers or `p/q`.
pub fn parse_kernel(s: &str) -> Res<Kernel> {
    let label = |t: &str| -> Res<Label> {
        let t = t.trim();
        let bad = || CliError::Usage(format!("bad label `{t}`"));
        match t.split_once('/') {
            Some((p, q)) => {
                let (p, q): (i64, i64) = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
                Label::from_json(&json!([p, q])).map_err(|_| bad())
            }
            None => Ok(Label::int(t.parse().map_err(|_| bad())?)),
        }
    };
    let pairs = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| CliError::Usage(format!("bad pair `{p}`, expected i:j")))?;
            Ok((label(a)?, label(b)?))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Kernel::new(pairs)?)
}

fn need<T>(v: Option<T>, name: &str) -> Res<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required here")))
}

fn index_for(f: &Kernel, m: Option<usize>) -> IndexSet {
    match m {
        Some(m) => IndexSet::range(m),
        None => f.support(),
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Res<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Core(shiftlab::Error::Parse(format!("{}: {e}", path.display()))))
}

fn load_graph(path: &Path, dimacs: bool) -> Res<Graph> {
    if dimacs || path.extension().is_some_and(|e| e == "col") {
        Ok(Graph::from_dimacs(&read(path)?)?)
    } else {
        Ok(Graph::from_json(&read_json(path)?)?)
    }
}

/// Key-sorted, newline-terminated JSON.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(a: &GenArgs) -> Res<Graph> {
    let r = || need(a.r, "r");
    Ok(match a.family {
        FamilyName::Sh => families::shift_graph(r()?, a.n, false)?,
        FamilyName::Sym => families::shift_graph(r()?, a.n, true)?,
        FamilyName::Lsh => families::directed_shift(r()?, a.n, Side::Left)?,
        FamilyName::Rsh => families::directed_shift(r()?, a.n, Side::Right)?,
        FamilyName::Cyc => families::cyclic_sym(r()?, a.n)?,
        FamilyName::Glued => families::bounded_glued(&a.nbar, a.n)?,
        FamilyName::Kernel => {
            let f = parse_kernel(need(a.kernel.as_deref(), "kernel")?)?;
            let j = IndexSet::range(need(a.m, "m")?);
            families::graph_from_kernel(&GroundSet::range(a.n), &j, &f, !a.injective, a.directed)?
        }
    })
}

fn analyze(a: &AnalyzeArgs) -> Res<Value> {
    let f = parse_kernel(&a.kernel)?;
    let j = index_for(&f, a.m);
    if let Err(l) = f.is_within(&j) {
        return Err(shiftlab::Error::IndexMismatch(l).into());
    }
    let report = classify(&f, &j);
    let orbits = json!({
        "classes": report.classes.iter().map(|(l, c)| json!([l.to_json(), c])).collect::<Vec<_>>(),
        "generators": report.generators.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
        "lengths": report.lengths.iter().map(|(l, n)| json!([l.to_json(), n])).collect::<Vec<_>>(),
        "fixed_points": report.fixed_points().iter().map(|l| l.to_json()).collect::<Vec<_>>(),
    });
    let blocks = match decompose_ordered(&f, &j) {
        Ok(d) => json!(d
            .blocks
            .iter()
            .map(|b| json!({"labels": b.labels, "kind": b.kind, "kernel": b.kernel.to_json()}))
            .collect::<Vec<_>>()),
        Err(e) => json!({"error": e.to_string()}),
    };
    let extension = match extend_star(&f, &j) {
        Ok(x) => json!({
            "index": x.index,
            "kernel": x.kernel.to_json(),
            "beta0": x.beta0.to_json(),
            "n_beta0": x.n_beta0,
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(json!({"kernel": f.to_json(), "index": j, "orbits": orbits, "blocks": blocks, "extension": extension}))
}

fn chi(a: &ChiArgs, par: Parallelism) -> Res<Value> {
    let g = load_graph(&a.input, a.dimacs)?;
    let budget = a.timeout.map(Duration::from_secs_f64);
    let checked = |c: &Coloring| -> Res<()> {
        let bad = validate(&g, c)?;
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Verification(format!("witness violates {} edges", bad.len())))
        }
    };
    if a.greedy {
        let c = chi_greedy(&g, GreedyOrder::Dsatur);
        checked(&c)?;
        return Ok(json!({"method": "greedy", "palette": c.palette, "witness": c.to_json()}));
    }
    if a.csp {
        return match chi_csp(&g, budget) {
            Ok((chi, c)) => {
                checked(&c)?;
                Ok(json!({"method": "csp", "chi": chi, "witness": c.to_json()}))
            }
            Err(shiftlab::Error::Timeout { lower, upper }) => {
                emit_timeout("csp", lower, upper);
                Err(CliError::Timeout(format!("timed out with {lower} <= chi <= {upper}")))
            }
            Err(e) => Err(e.into()),
        };
    }
    match chi_exact_with(&g, budget, par) {
        Ok(r) => {
            checked(&r.witness)?;
            Ok(json!({
                "method": "exact",
                "chi": r.chi,
                "witness": r.witness.to_json(),
                "certificate": r.certificate,
                "stats": r.stats,
            }))
        }
        Err(shiftlab::Error::Timeout { lower, upper }) => {
            emit_timeout("exact", lower, upper);
            Err(CliError::Timeout(format!("timed out with {lower} <= chi <= {upper}")))
        }
        Err(e) => Err(e.into()),
    }
}

fn emit_timeout(method: &str, lower: usize, upper: usize) {
    print!("{}", render(&json!({"method": method, "timeout": true, "lower": lower, "upper": upper})));
}

fn color(a: &ColorArgs) -> Res<Value> {
    let (g, c) = match a.construction {
        ColoringName::Eh => chroma::eh_pair_coloring(&GroundSet::binary_strings(need(a.m, "m")?))?,
        ColoringName::Recursive => chroma::recursive_shift_coloring(need(a.r, "r")?, need(a.m, "m")?)?,
        ColoringName::Cycle => {
            let r = need(a.r, "r")?;
            let g = families::cyclic_sym(r, a.n.unwrap_or(r))?;
            let c = chroma::cycle_coloring(&g)?;
            (g, c)
        }
    };
    let bad = validate(&g, &c)?;
    if !bad.is_empty() {
        return Err(CliError::Verification(format!("coloring violates {} edges, first {:?}", bad.len(), bad[0])));
    }
    Ok(json!({"graph": g.to_json(), "coloring": c.to_json(), "violations": 0}))
}

fn embed(a: &EmbedArgs, par: Parallelism, seed: u64) -> Res<Value> {
    let kernel = || parse_kernel(need(a.kernel.as_deref(), "kernel")?);
    let mut extra = serde_json::Map::new();
    // (directed check, injectivity claimed)
    let (map, directed, injective) = match a.construction {
        Construction::Bounded => (embed::embed_bounded(&a.nbar, need(a.n, "n")?)?, false, true),
        Construction::Intertwined => {
            let f = kernel()?;
            let j = index_for(&f, a.m);
            let k = match a.k {
                Some(k) => k,
                None => embed::intertwined_threshold(&f)?,
            };
            (embed::embed_intertwined_with(&f, &j, k, a.window, par)?, true, false)
        }
        Construction::NoOrder => {
            let f = kernel()?;
            (embed::embed_no_order_with(&f, &index_for(&f, a.m), a.window, par)?, false, true)
        }
        Construction::Ordered => {
            let f = kernel()?;
            let m = need(a.m, "m")?;
            let k = match a.k {
                Some(k) => k,
                None => embed::ordered_threshold(&f, m)?,
            };
            (embed::embed_ordered_with(&f, m, k, a.window, par)?, true, false)
        }
        Construction::Pipeline => {
            let t = match (&a.input, &a.planted) {
                (Some(p), None) => VertexMap::from_json(&read_json(p)?)?,
                (None, Some(s0)) => embed::planted_projection(need(a.k, "k")?, a.window, s0)?,
                _ => return Err(CliError::Usage("pipeline needs exactly one of --input and --planted".into())),
            };
            let opts = PipelineOptions { canon: CanonOptions { seed, par, ..CanonOptions::default() }, out_window: None };
            let out = embed::pipeline_hom_to_subgraphs(&t, &opts)?;
            extra.insert("form".into(), out.form.to_json());
            extra.insert("n".into(), json!(out.n));
            extra.insert("out_window".into(), json!(out.out_window));
            (out.map, false, true)
        }
    };
    extra.insert("map".into(), map.to_json());
    if a.verify {
        let report = verify_map_with(&map, directed, par);
        extra.insert("report".into(), serde_json::to_value(&report).expect("report serializes"));
        if !report.is_homomorphism || (injective && !report.is_injective) {
            return Err(CliError::Verification(format!("{:?}", report.counterexamples)));
        }
    }
    Ok(Value::Object(extra))
}

fn canon(a: &CanonArgs, par: Parallelism, seed: u64) -> Res<Value> {
    let arity = || need(a.arity, "arity");
    let ground = || need(a.ground, "ground");
    let oracle: Box<dyn RelationOracle> = match a.oracle {
        OracleName::Coord => {
            let arity = arity()?;
            if a.coords.iter().any(|&c| c >= arity) {
                return Err(CliError::Usage(format!("coordinates must be below {arity}")));
            }
            Box::new(CoordinateEquality { arity, ground: ground()?, coords: a.coords.clone() })
        }
        OracleName::Sum => Box::new(SumKernel { arity: arity()?, ground: ground()? }),
        OracleName::Constant => Box::new(Constant { arity: arity()?, ground: ground()? }),
        OracleName::Partition => {
            Box::new(PartitionOracle::from_json(&read_json(need(a.partition.as_deref(), "partition")?)?)?)
        }
    };
    let target = a.target.unwrap_or(oracle.ground());
    let opts = CanonOptions { node_budget: a.budget, seed, par };
    let form = canonize(oracle.as_ref(), target, &opts)?;
    Ok(json!({
        "arity": oracle.arity(),
        "ground": oracle.ground(),
        "target": target,
        "found": form.is_some(),
        "form": form.map(|f| f.to_json()),
    }))
}

fn verify(a: &VerifyArgs, par: Parallelism) -> Res<Value> {
    if let Some(p) = &a.map {
        let m = VertexMap::from_json(&read_json(p)?)?;
        let report = verify_map_with(&m, a.directed, par);
        let v = serde_json::to_value(&report).expect("report serializes");
        if !report.is_homomorphism || (a.injective && !report.is_injective) {
            print!("{}", render(&v));
            return Err(CliError::Verification("map fails its checks".into()));
        }
        return Ok(v);
    }
    let (Some(gp), Some(cp)) = (&a.graph, &a.coloring) else {
        return Err(CliError::Usage("give --map, or --graph with --coloring".into()));
    };
    let g = load_graph(gp, a.dimacs)?;
    let c = Coloring::from_json(&read_json(cp)?)?;
    let bad = validate(&g, &c)?;
    let v = json!({"valid": bad.is_empty(), "violations": bad});
    if !bad.is_empty() {
        print!("{}", render(&v));
        return Err(CliError::Verification(format!("{} violated edges", bad.len())));
    }
    Ok(v)
}

fn threads(flag: Option<usize>) -> Res<Option<usize>> {
    match std::env::var("SHIFTLAB_THREADS") {
        Ok(s) if !s.trim().is_empty() => {
            s.trim().parse().map(Some).map_err(|_| CliError::Usage(format!("SHIFTLAB_THREADS={s} is not a number")))
        }
        _ => Ok(flag),
    }
}

pub fn execute(cli: &Cli) -> Res<()> {
    if let Some(n) = threads(cli.threads)? {
        if n == 0 {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let par = Parallelism::default();
    match &cli.command {
        Command::Gen(a) => {
            let g = gen(a)?;
            match a.format {
                Format::Json => emit(&a.out, &render(&g.to_json())),
                Format::Dimacs => emit(&a.out, &g.to_dimacs()),
            }
        }
        Command::Analyze(a) => emit(&a.out, &render(&analyze(a)?)),
        Command::Chi(a) => emit(&a.out, &render(&chi(a, par)?)),
        Command::Color(a) => emit(&a.out, &render(&color(a)?)),
        Command::Embed(a) => emit(&a.out, &render(&embed(a, par, cli.seed)?)),
        Command::Canon(a) => emit(&a.out, &render(&canon(a, par, cli.seed)?)),
        Command::Verify(a) => emit(&a.out, &render(&verify(a, par)?)),
    }
}

/// Parses `args` and runs the job; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
