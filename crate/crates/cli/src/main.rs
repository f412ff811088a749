//! Command-line front end: connectivity invariants, Menger certificates,
//! catalog sweeps and graph export, all reported as JSON.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use isoperimetric::groups::{generating_sets, SWEEP_ORDER_LIMIT};
use isoperimetric::iso::{self, ProfileSummary};
use isoperimetric::set::parse_indices;
use isoperimetric::verify::{self, Selection, VerifyConfig};
use isoperimetric::{
    cayley_graph, make_group, menger, Catalog, Digraph, ElementSet, Error, FiniteGroup, GroupSpec, Sign,
};

#[derive(Parser)]
#[command(name = "isoperimetric", version, about = "Isoperimetric connectivity of Cayley graphs and reflexive digraphs")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivities, atoms and fragments of Cay(G, S).
    Iso {
        #[command(subcommand)]
        op: IsoOp,
    },
    /// Local connectivity, disjoint paths and matchings.
    Menger {
        #[command(subcommand)]
        op: MengerOp,
    },
    /// Sweep the group catalog checking structural statements.
    Verify(VerifyArgs),
    /// List catalog groups and their generating sets containing the identity.
    Catalog(CatalogArgs),
    /// Write Cay(G, S) in the digraph JSON format.
    Export(ExportArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Group spec, e.g. cyclic:7 or product:cyclic:2,dihedral:3.
    #[arg(long)]
    group: String,
    /// Connection set as comma-separated element indices.
    #[arg(long)]
    set: String,
}

#[derive(Args)]
struct IsoArgs {
    #[command(flatten)]
    target: SetArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum, default_value_t = SignArg::Fwd)]
    sign: SignArg,
}

#[derive(Subcommand)]
enum IsoOp {
    /// κ_k with atom summary.
    Kappa(IsoArgs),
    /// The k-atoms.
    Atoms(IsoArgs),
    /// The k-fragments, listing at most --limit of them.
    Fragments {
        #[command(flatten)]
        iso: IsoArgs,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Cauchy and Vosper classification of S in Cay(⟨S⟩, S).
    Classify(SetArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Fwd,
    Rev,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Fwd => Sign::Forward,
            SignArg::Rev => Sign::Reverse,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// A digraph JSON file, or a Cayley graph written `<group-spec>@<elements>`.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand)]
enum MengerOp {
    /// Local connectivity from x to y with a minimum k-part.
    Connect {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// k openly disjoint paths from x to y.
    Paths {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        k: usize,
    },
    /// A size-k matching from X to its complement (k defaults to min(κ₁, |X|, |V∖X|)).
    Match {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Checker id or `all`.
    #[arg(long, default_value = "all")]
    theorem: String,
    #[arg(long, default_value_t = 12)]
    max_order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the reports here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock time per checker (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
    /// Catalog manifest to sweep instead of the built-in one.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, default_value_t = 8)]
    max_order: usize,
    /// List every generating set rather than only counting them.
    #[arg(long)]
    sets: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    target: SetArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        usage(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Iso { op } => iso_command(op),
        Command::Menger { op } => menger_command(op),
        Command::Verify(args) => verify_command(args),
        Command::Catalog(args) => catalog_command(args),
        Command::Export(args) => export_command(args),
    }
}

/// Writes to standard output; a closed pipe downstream is not an error.
fn print(text: &str) -> CliResult<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(e.to_string())),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(value: &T) -> CliResult<u8> {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    print(&text)?;
    Ok(0)
}

fn parse_group(spec: &str) -> CliResult<FiniteGroup> {
    let spec: GroupSpec = spec.parse()?;
    Ok(make_group(&spec)?)
}

fn parse_set(universe: usize, text: &str) -> CliResult<ElementSet> {
    Ok(ElementSet::from_indices(universe, &parse_indices(text)?)?)
}

fn group_and_set(args: &SetArgs) -> CliResult<(FiniteGroup, ElementSet)> {
    let g = parse_group(&args.group)?;
    let s = parse_set(g.order(), &args.set)?;
    Ok((g, s))
}

fn iso_command(op: IsoOp) -> CliResult<u8> {
    let profile = |args: &IsoArgs| -> CliResult<iso::IsoProfile> {
        let (g, s) = group_and_set(&args.target)?;
        let graph = cayley_graph(&g, &s)?;
        Ok(iso::profile(&graph, args.k as usize, args.sign.into())?)
    };
    match op {
        IsoOp::Kappa(args) | IsoOp::Atoms(args) => emit(&ProfileSummary::from(&profile(&args)?)),
        IsoOp::Fragments { iso: args, limit } => {
            let p = profile(&args)?;
            let mut out = serde_json::to_value(ProfileSummary::from(&p)).map_err(|e| usage(e.to_string()))?;
            out["fragments"] = json!(p.fragments.take(limit));
            emit(&out)
        }
        IsoOp::Classify(args) => {
            let (g, s) = group_and_set(&args)?;
            emit(&iso::classify(&g, &s)?)
        }
    }
}

fn load_graph(text: &str) -> CliResult<Digraph> {
    if let Some((spec, elems)) = text.rsplit_once('@') {
        let g = parse_group(spec)?;
        let s = parse_set(g.order(), elems)?;
        return Ok(cayley_graph(&g, &s)?);
    }
    let json = fs::read_to_string(text).map_err(|e| usage(format!("cannot read {text}: {e}")))?;
    Ok(Digraph::from_json(&json)?)
}

fn menger_command(op: MengerOp) -> CliResult<u8> {
    match op {
        MengerOp::Connect { graph, x, y } => {
            let g = load_graph(&graph.graph)?;
            let connectivity = menger::local_connectivity(&g, x, y)?;
            let part = menger::min_k_part(&g, x, y)?;
            emit(&json!({ "x": x, "y": y, "connectivity": connectivity, "part": part }))
        }
        MengerOp::Paths { graph, x, y, k } => {
            let g = load_graph(&graph.graph)?;
            let family = menger::disjoint_paths(&g, x, y, k)?;
            emit(&family)
        }
        MengerOp::Match { graph, set, k } => {
            let g = load_graph(&graph.graph)?;
            let x = parse_set(g.vertex_count(), &set)?;
            let matcher = menger::StrongIsoMatcher::new(&g)?;
            let k = k.unwrap_or_else(|| matcher.promised(&x));
            let matching = matcher.matching(&x, k)?;
            emit(&json!({ "kappa1": matcher.kappa1(), "k": k, "pairs": matching.pairs }))
        }
    }
}

fn load_catalog(path: Option<&PathBuf>) -> CliResult<Catalog> {
    match path {
        Some(p) => {
            let json = fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Ok(Catalog::from_manifest(&json)?)
        }
        None => Ok(Catalog::builtin()?),
    }
}

fn check_max_order(max_order: usize) -> CliResult<()> {
    if max_order > SWEEP_ORDER_LIMIT {
        return Err(usage(format!("--max-order is capped at {SWEEP_ORDER_LIMIT}")));
    }
    Ok(())
}

fn verify_command(args: VerifyArgs) -> CliResult<u8> {
    check_max_order(args.max_order)?;
    let selection: Selection = args.theorem.parse()?;
    let catalog = load_catalog(args.catalog.as_ref())?;
    let cfg = VerifyConfig {
        max_order: args.max_order,
        seed: args.seed,
        timings: args.timings,
        ..VerifyConfig::default()
    };
    let reports = verify::run(selection, &catalog, &cfg)?;
    let text = serde_json::to_string_pretty(&reports).map_err(|e| usage(e.to_string()))?;
    match &args.report {
        Some(path) => {
            let mut file = fs::File::create(path).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            writeln!(file, "{text}").map_err(|e| usage(e.to_string()))?;
            for r in &reports {
                eprintln!(
                    "{:<18} {} tested={} passing={} skipped={}",
                    r.theorem_id,
                    if r.passed() { "ok" } else { "FAILED" },
                    r.instances_tested,
                    r.instances_passing,
                    r.instances_skipped
                );
            }
        }
        None => print(&text)?,
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
}

fn catalog_command(args: CatalogArgs) -> CliResult<u8> {
    check_max_order(args.max_order)?;
    let catalog = Catalog::builtin()?.up_to(args.max_order);
    let mut listing = Vec::new();
    for entry in catalog.iter() {
        let sets = generating_sets(&entry.group)?;
        let mut item = json!({
            "name": entry.name,
            "spec": entry.spec.to_string(),
            "order": entry.group.order(),
            "abelian": entry.group.is_abelian(),
            "generating_sets": sets.len(),
        });
        if args.sets {
            item["sets"] = json!(sets);
        }
        listing.push(item);
    }
    emit(&Value::Array(listing))
}

fn export_command(args: ExportArgs) -> CliResult<u8> {
    let (g, s) = group_and_set(&args.target)?;
    let file = cayley_graph(&g, &s)?.to_file();
    let text = serde_json::to_string_pretty(&file).map_err(|e| usage(e.to_string()))?;
    match &args.output {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => print(&text)?,
    }
    Ok(0)
}
