use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walkmin_core::engine::{enumerate_trail_matches, Query};
use walkmin_core::graph::to_dot;
use walkmin_core::reduction::{
    build_enum_instance, build_membership_instance, build_sms_instance, parse_dimacs, SatInstance,
};
use walkmin_core::semantics::{match_set, mm_membership, mm_set, shortest_set, sms_membership, sms_set};
use walkmin_core::verify::{check_all, CheckOptions};
use walkmin_core::{parse, Edge, Error, Graph, GraphDocument, Membership, Walk};

#[derive(Parser)]
#[command(
    name = "walkmin",
    version,
    about = "Minimal-walk regular path queries and 3-SAT gadget graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the walks selected by a query.
    Enum(EnumArgs),
    /// Decide whether a walk is minimal, printing a dominating match if not.
    Member(MemberArgs),
    /// Compile a 3-CNF formula into a gadget graph.
    Reduce(ReduceArgs),
    /// Run the construction checks on a formula.
    Verify(VerifyArgs),
    /// Render a graph file as Graphviz DOT.
    ExportDot(ExportArgs),
}

#[derive(Args)]
struct Limits {
    /// Ignore the size caps.
    #[arg(long)]
    force: bool,
    /// Largest |V|·|Q| handled without --force.
    #[arg(long, env = "WALKMIN_CAP", default_value_t = 20_000)]
    cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Match,
    Trail,
    Shortest,
    Mm,
    Sms,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Minimality {
    Mm,
    Sms,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    regex: String,
    #[arg(long)]
    source: String,
    #[arg(long)]
    target: String,
    #[arg(long, value_enum)]
    semantics: Semantics,
    /// Length bound, required for (and only for) `match`.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct MemberArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    regex: String,
    /// JSON walk, or text like `s -a-> s -b-> t`.
    #[arg(long)]
    walk: PathBuf,
    #[arg(long, value_enum, default_value = "mm")]
    semantics: Minimality,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct Formula {
    /// DIMACS file.
    #[arg(long, conflicts_with = "random")]
    cnf: Option<PathBuf>,
    /// Draw a random formula with K variables and L clauses, as `K,L`.
    #[arg(long, value_name = "K,L", requires = "seed")]
    random: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    formula: Formula,
    #[arg(long, value_enum, default_value = "enum")]
    variant: VariantArg,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Enum,
    Membership,
    Sms,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    formula: Formula,
    /// Comma-separated check names (all checks when omitted).
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Keep measured run times in the report. Without it the times are
    /// zeroed so identical inputs give identical bytes.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow k or l above 4.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Draw the edges of this walk in bold.
    #[arg(long)]
    walk: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InstanceTooLarge(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enum(a) => run_enum(a),
        Command::Member(a) => run_member(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Verify(a) => run_verify(a),
        Command::ExportDot(a) => run_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("walkmin: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth an error
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<(Graph, GraphDocument), Failure> {
    let doc = GraphDocument::from_json(&read(path)?)?;
    Ok((doc.to_graph()?, doc))
}

fn load_walk(path: &Path) -> Result<Walk, Failure> {
    let text = read(path)?;
    if let Ok(w) = serde_json::from_str::<Walk>(&text) {
        return Ok(w);
    }
    parse_walk_text(&text).ok_or_else(|| Failure::usage(format!("{}: not a walk", path.display())))
}

/// `v0 -a-> v1 -b-> v2`, whitespace separated.
fn parse_walk_text(text: &str) -> Option<Walk> {
    let mut tokens = text.split_whitespace();
    let mut w = Walk::new(tokens.next()?);
    while let Some(arrow) = tokens.next() {
        let label = arrow.strip_prefix('-')?.strip_suffix("->")?;
        if label.is_empty() {
            return None;
        }
        w.push(label, tokens.next()?);
    }
    Some(w)
}

fn check_cap(q: &Query, limits: &Limits) -> Result<(), Failure> {
    if !limits.force && q.product_size() > limits.cap {
        return Err(Failure {
            code: 3,
            message: format!(
                "product has {} states, above the cap of {} (use --force or WALKMIN_CAP)",
                q.product_size(),
                limits.cap
            ),
        });
    }
    Ok(())
}

fn run_enum(a: EnumArgs) -> Outcome {
    let (g, doc) = load_graph(&a.graph)?;
    let r = parse(&a.regex)?;
    g.require_vertex(&a.source)?;
    g.require_vertex(&a.target)?;
    match (a.semantics, a.max_len) {
        (Semantics::Match, None) => {
            return Err(Failure::usage("--max-len is required with --semantics match"))
        }
        (Semantics::Match, Some(_)) | (_, None) => {}
        (_, Some(_)) => return Err(Failure::usage("--max-len only applies to --semantics match")),
    }
    check_cap(&Query::new(&g, &r), &a.limits)?;

    let (s, t) = (a.source.as_str(), a.target.as_str());
    let walks: Vec<Walk> = match a.semantics {
        Semantics::Match => match_set(&g, &r, s, t, a.max_len.unwrap_or(0))?
            .into_iter()
            .collect(),
        Semantics::Trail => enumerate_trail_matches(&g, &r, s, t)?,
        Semantics::Shortest => shortest_set(&g, &r, s, t)?.into_iter().collect(),
        Semantics::Mm => mm_set(&g, &r, s, t)?.into_iter().collect(),
        Semantics::Sms => sms_set(&g, &r, s, t)?.into_iter().collect(),
    };

    let text = match a.format {
        Format::Text => walks.iter().map(|w| format!("{w}\n")).collect(),
        // one walk per line, so long outputs can be consumed as they come
        Format::Json => walks
            .iter()
            .map(|w| serde_json::to_string(w).expect("walks serialize") + "\n")
            .collect(),
        Format::Dot => {
            let used: BTreeSet<Edge> = walks.iter().flat_map(|w| w.edges()).collect();
            to_dot(&g, doc.colors.as_ref(), Some(&used))
        }
    };
    write_out(a.out.as_deref(), &text)?;
    Ok(0)
}

fn run_member(a: MemberArgs) -> Outcome {
    let (g, _) = load_graph(&a.graph)?;
    let r = parse(&a.regex)?;
    let w = load_walk(&a.walk)?;
    if !g.validate_walk(&w) {
        return Err(Failure::usage(format!("walk {w} is not in the graph")));
    }
    check_cap(&Query::new(&g, &r), &a.limits)?;
    let verdict = match a.semantics {
        Minimality::Mm => mm_membership(&g, &r, &w)?,
        Minimality::Sms => sms_membership(&g, &r, &w)?,
    };
    match verdict {
        Membership::Member => {
            println!("member");
            Ok(0)
        }
        Membership::NotAMatch => {
            println!("non-member");
            println!("not a match of the expression");
            Ok(1)
        }
        Membership::Dominated(d) => {
            println!("non-member");
            println!("certificate: {d}");
            Ok(1)
        }
    }
}

fn load_formula(f: &Formula) -> Result<SatInstance, Failure> {
    match (&f.cnf, &f.random) {
        (Some(path), None) => Ok(parse_dimacs(&read(path)?)?),
        (None, Some(sizes)) => {
            let (k, l) = sizes
                .split_once(',')
                .and_then(|(k, l)| Some((k.trim().parse().ok()?, l.trim().parse().ok()?)))
                .ok_or_else(|| Failure::usage(format!("--random expects K,L, got {sizes:?}")))?;
            Ok(SatInstance::seeded(k, l, f.seed.unwrap_or(0))?)
        }
        _ => Err(Failure::usage("give a formula with --cnf or --random")),
    }
}

fn run_reduce(a: ReduceArgs) -> Outcome {
    let i = load_formula(&a.formula)?;
    let ri = match a.variant {
        VariantArg::Enum => build_enum_instance(&i),
        VariantArg::Membership => build_membership_instance(&i),
        VariantArg::Sms => build_sms_instance(&i),
    };
    let io = |e: std::io::Error| Failure::usage(format!("{}: {e}", a.out.display()));
    fs::create_dir_all(&a.out).map_err(io)?;
    let doc = GraphDocument::from_graph(&ri.graph, Some(&ri.colors));
    fs::write(a.out.join("graph.json"), doc.to_json() + "\n").map_err(io)?;
    fs::write(a.out.join("manifest.json"), ri.manifest().to_json() + "\n").map_err(io)?;
    fs::write(a.out.join("formula.cnf"), i.to_dimacs()).map_err(io)?;
    if let Some(w) = &ri.witness {
        let json = serde_json::to_string_pretty(w).expect("walks serialize");
        fs::write(a.out.join("witness.json"), json + "\n").map_err(io)?;
    }
    println!(
        "k={} l={} |V|={} |E|={}",
        ri.k(),
        ri.l(),
        ri.graph.vertex_count(),
        ri.graph.edge_count()
    );
    Ok(0)
}

fn run_verify(a: VerifyArgs) -> Outcome {
    let i = load_formula(&a.formula)?;
    let opts = CheckOptions {
        force: a.force,
        only: a.checks,
        seed: a.formula.seed,
    };
    let mut report = check_all(&i, &opts)?;
    if !a.timings {
        report.checks.iter_mut().for_each(|c| c.elapsed_ms = 0.0);
    }
    let text = match a.format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Text => report.to_text(),
    };
    write_out(a.out.as_deref(), &text)?;
    Ok(if report.verdict { 0 } else { 1 })
}

fn run_export(a: ExportArgs) -> Outcome {
    let (g, doc) = load_graph(&a.graph)?;
    let highlight = match &a.walk {
        Some(p) => {
            let w = load_walk(p)?;
            if !g.validate_walk(&w) {
                return Err(Failure::usage(format!("walk {w} is not in the graph")));
            }
            Some(w.edges().into_iter().collect::<BTreeSet<Edge>>())
        }
        None => None,
    };
    write_out(
        a.out.as_deref(),
        &to_dot(&g, doc.colors.as_ref(), highlight.as_ref()),
    )?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_walks() {
        let w = parse_walk_text("s -a-> s -b-> t\n").unwrap();
        assert_eq!(w, Walk::new("s").then("a", "s").then("b", "t"));
        assert_eq!(parse_walk_text("s").unwrap(), Walk::new("s"));
        assert!(parse_walk_text("s -a->").is_none());
        assert!(parse_walk_text("s a t").is_none());
        assert!(parse_walk_text("").is_none());
    }
}
