//! `parking`: command-line front end for parking functions on digraphs.
//!
//! Exit status is 0 for success or a true answer, 1 for a false answer or a
//! failed identity, and 2 for usage or input errors.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use digraph_parking::bijections::{
    psi, psi_inverse, psi_nm, psi_nm_inverse, tau, tau_inverse, MarkedSourceTreePF,
};
use digraph_parking::enumerate::{
    count_distributions, count_pf, family_sum, open_question_scan, verify_identity, Family, Identity,
    SweepOptions, SINGLE_CAP,
};
use digraph_parking::{
    hall_witness, is_deterministic, is_parking_distribution, is_parking_function, is_prime, parking_schedule,
    simulate_deterministic, Digraph, MappingFn, Orientation, ParkingDistribution, PreferenceSequence, RootedTree,
};

mod output;

use output::{Emitter, Format};

#[derive(Parser, Debug)]
#[command(name = "parking", version, about = "Parking functions on directed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Table format for count, sum, verify and scan.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report zero timings so identical inputs give identical output.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "PARKING_WORKERS")]
    workers: Option<usize>,

    /// Largest n accepted by family sweeps.
    #[arg(long, global = true, default_value_t = digraph_parking::enumerate::FAMILY_CAP)]
    max_n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a sequence (or distribution) parks, with a certificate.
    Check(CheckArgs),
    /// Run the deterministic process on a digraph with out-degree at most one.
    Simulate(SimulateArgs),
    /// Count parking functions of length m on one digraph.
    Count(CountArgs),
    /// Sum counts over a whole family of digraphs.
    Sum(SumArgs),
    /// Check a named identity over a range of sizes.
    Verify(VerifyArgs),
    /// Run one of the bijections.
    #[command(subcommand)]
    Bijection(BijectionCommand),
    /// Compare sink and source orientations of every tree shape.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
#[group(skip)]
struct GraphSelector {
    /// Edge-list file: `n` on the first line, then `u v` per line.
    #[arg(long, required_unless_present_any = ["tree", "mapping"], conflicts_with_all = ["tree", "mapping"])]
    graph: Option<PathBuf>,

    /// Tree file: `root; p(1) p(2) ... p(n)` with 0 at the root.
    #[arg(long, conflicts_with = "mapping")]
    tree: Option<PathBuf>,

    /// Mapping file: `f(1) f(2) ... f(n)`.
    #[arg(long)]
    mapping: Option<PathBuf>,

    /// Edge orientation for --tree.
    #[arg(long, value_enum, default_value_t = OrientationArg::Sink, requires = "tree")]
    orientation: OrientationArg,

    /// Use the inverse mapping digraph (edges f(i) -> i) for --mapping.
    #[arg(long, requires = "mapping")]
    inverse: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientationArg {
    Sink,
    Source,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Sink => Orientation::Sink,
            OrientationArg::Source => Orientation::Source,
        }
    }
}

#[derive(Args, Debug)]
#[group(id = "prefs", required = true, multiple = false)]
struct SequenceInput {
    /// Comma-separated preferences, e.g. `1,1,3,2,1`.
    #[arg(long, group = "prefs", allow_hyphen_values = true)]
    seq: Option<String>,

    /// File holding the preferences.
    #[arg(long, group = "prefs")]
    seq_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    graph: GraphSelector,

    /// Comma-separated preferences.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["seq_file", "dist"])]
    seq: Option<String>,

    /// File holding the preferences.
    #[arg(long, conflicts_with = "dist")]
    seq_file: Option<PathBuf>,

    /// Distribution as `vertex:count` pairs, e.g. `1:2,3:1`.
    #[arg(long)]
    dist: Option<String>,

    /// Also decide primeness (exit status follows primeness).
    #[arg(long, conflicts_with = "dist")]
    prime: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphSelector,
    #[command(flatten)]
    seq: SequenceInput,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    graph: GraphSelector,

    /// Number of drivers, or a range such as `0..3`.
    #[arg(long, short)]
    m: String,

    /// Count parking distributions (unordered) instead.
    #[arg(long)]
    distributions: bool,
}

#[derive(Args, Debug)]
struct SumArgs {
    /// sink-trees, source-trees, mappings or inverse-mappings.
    #[arg(long, value_parser = parse_family)]
    family: Family,

    /// Number of vertices, or a range such as `1..4`.
    #[arg(long, short)]
    n: String,

    /// Number of drivers or a range; defaults to every m from 0 to n.
    #[arg(long, short)]
    m: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity name, e.g. tilde-nm, sink-nm, psi-roundtrip.
    #[arg(long, value_parser = parse_identity)]
    identity: Identity,

    /// Number of vertices, or a range such as `1..4`.
    #[arg(long, short)]
    n: String,

    /// Number of drivers or a range; defaults to every m from 0 to n.
    #[arg(long, short)]
    m: Option<String>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Number of vertices, or a range such as `3..5`.
    #[arg(long, short)]
    n: String,

    /// Number of drivers or a range; defaults to every m from 0 to n.
    #[arg(long, short)]
    m: Option<String>,
}

#[derive(Subcommand, Debug)]
enum BijectionCommand {
    /// Sink-tree parking function to source-tree parking function.
    Tau {
        /// Sink tree file.
        #[arg(long)]
        tree: PathBuf,
        #[command(flatten)]
        seq: SequenceInput,
    },
    /// Source-tree parking function back to the sink tree.
    TauInv {
        /// Source tree file.
        #[arg(long)]
        tree: PathBuf,
        #[command(flatten)]
        seq: SequenceInput,
    },
    /// Marked source-tree parking function to inverse-mapping parking function.
    Psi {
        /// Source tree file.
        #[arg(long)]
        tree: PathBuf,
        #[command(flatten)]
        seq: SequenceInput,
        /// The marked vertex.
        #[arg(long)]
        mark: usize,
    },
    /// Inverse-mapping parking function back to a marked source tree.
    PsiInv {
        /// Mapping file; the digraph used is its inverse mapping digraph.
        #[arg(long)]
        mapping: PathBuf,
        #[command(flatten)]
        seq: SequenceInput,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: digraph_parking::Error| e.to_string())
}

fn parse_identity(s: &str) -> std::result::Result<Identity, String> {
    s.parse().map_err(|e: digraph_parking::Error| e.to_string())
}

/// `k`, `a..b` or `a..=b`, all inclusive.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        None => (s, s),
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
    };
    let lo: usize = lo.trim().parse().with_context(|| format!("bad range `{s}`"))?;
    let hi: usize = hi.trim().parse().with_context(|| format!("bad range `{s}`"))?;
    if lo > hi {
        bail!("empty range `{s}`");
    }
    Ok(lo..=hi)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_tree(path: &Path, orientation: Orientation) -> Result<RootedTree> {
    RootedTree::parse(&read(path)?, orientation).with_context(|| format!("in {}", path.display()))
}

fn load_mapping(path: &Path) -> Result<MappingFn> {
    MappingFn::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

impl GraphSelector {
    fn load(&self) -> Result<(Digraph, Value)> {
        if let Some(p) = &self.graph {
            let d: Digraph = read(p)?.parse().with_context(|| format!("in {}", p.display()))?;
            Ok((d, json!({"kind": "digraph"})))
        } else if let Some(p) = &self.tree {
            let t = load_tree(p, self.orientation.into())?;
            let info = json!({"kind": "tree", "orientation": t.orientation(), "root": t.root()});
            Ok((t.as_digraph(), info))
        } else if let Some(p) = &self.mapping {
            let f = load_mapping(p)?;
            if self.inverse {
                Ok((f.inverse_mapping_digraph(), json!({"kind": "inverse-mapping"})))
            } else {
                Ok((f.mapping_digraph(), json!({"kind": "mapping"})))
            }
        } else {
            bail!("one of --graph, --tree or --mapping is required")
        }
    }
}

fn sequence(literal: Option<&str>, file: Option<&Path>) -> Result<PreferenceSequence> {
    let text = match (literal, file) {
        (Some(s), _) => s.to_string(),
        (None, Some(p)) => read(p)?,
        (None, None) => bail!("a sequence is required (--seq or --seq-file)"),
    };
    text.trim().parse().with_context(|| format!("bad sequence `{}`", text.trim()))
}

impl SequenceInput {
    fn load(&self) -> Result<PreferenceSequence> {
        sequence(self.seq.as_deref(), self.seq_file.as_deref())
    }
}

fn edges_json(d: &Digraph) -> Value {
    Value::from(d.edges().map(|(u, v)| json!([u, v])).collect::<Vec<_>>())
}

impl Cli {
    fn options(&self) -> SweepOptions {
        let mut o = match self.workers {
            Some(w) => SweepOptions::with_workers(w),
            None => SweepOptions::default(),
        };
        o.cap = self.max_n;
        o
    }

    fn emitter(&self) -> Emitter {
        Emitter { pretty: self.pretty, format: self.format, deterministic: self.deterministic }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let out = cli.emitter();
    match &cli.command {
        Command::Check(a) => check(&out, a),
        Command::Simulate(a) => {
            let (d, info) = a.graph.load()?;
            let s = a.seq.load()?;
            if !is_deterministic(&d) {
                bail!("the digraph has a vertex with more than one out-edge");
            }
            let run = simulate_deterministic(&d, &s)?;
            let parks = run.is_some();
            let body = match run {
                Some(r) => json!({
                    "graph": info, "sequence": s.to_string(), "parks": true,
                    "assignment": r.outcome.assignment, "walks": r.outcome.walks,
                    "highlighted": r.highlighted.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
                }),
                None => json!({"graph": info, "sequence": s.to_string(), "parks": false}),
            };
            out.value(&body)?;
            Ok(u8::from(!parks))
        }
        Command::Count(a) => {
            let (d, _) = a.graph.load()?;
            let n = d.vertex_count();
            if n > SINGLE_CAP {
                bail!("n = {n} exceeds the single-digraph cap {SINGLE_CAP}");
            }
            let mut rows = Vec::new();
            for m in parse_range(&a.m)? {
                let started = std::time::Instant::now();
                let value = if a.distributions { count_distributions(&d, m)? } else { count_pf(&d, m)? };
                let family = if a.distributions { "distributions" } else { "digraph" };
                rows.push(output::CountRow::new(family, n, m, &value, 1, started.elapsed().as_millis() as u64));
            }
            out.count_rows(&rows)?;
            Ok(0)
        }
        Command::Sum(a) => {
            let options = cli.options();
            let ms = a.m.as_deref().map(parse_range).transpose()?;
            let mut rows = Vec::new();
            for n in parse_range(&a.n)? {
                for m in (0..=n).filter(|m| ms.as_ref().is_none_or(|r| r.contains(m))) {
                    let r = family_sum(a.family, n, m, &options)?;
                    rows.push(output::CountRow::new(a.family.name(), n, m, &r.value, r.instances, r.millis));
                }
            }
            out.count_rows(&rows)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let ms = a.m.as_deref().map(parse_range).transpose()?;
            let report = verify_identity(a.identity, parse_range(&a.n)?, ms, &cli.options())?;
            out.identity(&report)?;
            Ok(u8::from(!report.pass))
        }
        Command::Scan(a) => {
            let ms = a.m.as_deref().map(parse_range).transpose()?;
            let rows = open_question_scan(parse_range(&a.n)?, ms, &cli.options())?;
            out.scan(&rows)?;
            Ok(0)
        }
        Command::Bijection(b) => bijection(&out, b),
    }
}

fn check(out: &Emitter, a: &CheckArgs) -> Result<u8> {
    let (d, info) = a.graph.load()?;
    if let Some(text) = &a.dist {
        let f: ParkingDistribution = text.parse().with_context(|| format!("bad distribution `{text}`"))?;
        let ok = is_parking_distribution(&d, &f)?;
        out.value(&json!({"graph": info, "distribution": &f, "parking_distribution": ok}))?;
        return Ok(u8::from(!ok));
    }
    let s = sequence(a.seq.as_deref(), a.seq_file.as_deref())?;
    let ok = is_parking_function(&d, &s)?;
    let schedule = if ok { parking_schedule(&d, &s)? } else { None };
    let violator = if ok { None } else { hall_witness(&d, &s)? };
    let mut body = json!({
        "graph": info,
        "sequence": s.to_string(),
        "parking_function": ok,
        "schedule": schedule.map(|o| json!({"assignment": o.assignment, "walks": o.walks})),
        "violator": violator.map(|w| json!({"b": w.b, "reach": w.reach, "demand": w.demand})),
    });
    let mut answer = ok;
    if a.prime {
        let p = is_prime(&d, &s)?;
        body["prime"] = Value::Bool(p);
        answer = p;
    }
    out.value(&body)?;
    Ok(u8::from(!answer))
}

fn bijection(out: &Emitter, b: &BijectionCommand) -> Result<u8> {
    let body = match b {
        BijectionCommand::Tau { tree, seq } => {
            let t = load_tree(tree, Orientation::Sink)?;
            let r = tau(&t, &seq.load()?)?;
            json!({
                "permutation": r.permutation, "sequence": r.seq.to_string(),
                "tree": r.tree.to_line(), "orientation": r.tree.orientation(),
                "edges": edges_json(&r.tree.as_digraph()),
                "paths": r.paths.iter().map(|p| p.vertices.clone()).collect::<Vec<_>>(),
            })
        }
        BijectionCommand::TauInv { tree, seq } => {
            let t = load_tree(tree, Orientation::Source)?;
            let r = tau_inverse(&t, &seq.load()?)?;
            json!({
                "permutation": r.permutation, "sequence": r.seq.to_string(),
                "tree": r.tree.to_line(), "orientation": r.tree.orientation(),
                "edges": edges_json(&r.tree.as_digraph()),
                "paths": r.paths.iter().map(|p| p.vertices.clone()).collect::<Vec<_>>(),
            })
        }
        BijectionCommand::Psi { tree, seq, mark } => {
            let t = load_tree(tree, Orientation::Source)?;
            let s = seq.load()?;
            let x = MarkedSourceTreePF { tree: t, seq: s.clone(), mark: *mark };
            if s.len() == x.tree.vertex_count() {
                let r = psi(&x)?;
                json!({
                    "mapping": r.mapping.to_line(), "edges": edges_json(&r.mapping.inverse_mapping_digraph()),
                    "sequence": s.to_string(), "a": r.a, "b": r.b,
                })
            } else {
                let f = psi_nm(&x)?;
                json!({
                    "mapping": f.to_line(), "edges": edges_json(&f.inverse_mapping_digraph()),
                    "sequence": s.to_string(),
                })
            }
        }
        BijectionCommand::PsiInv { mapping, seq } => {
            let f = load_mapping(mapping)?;
            let s = seq.load()?;
            let x = if s.len() == f.vertex_count() { psi_inverse(&f, &s)? } else { psi_nm_inverse(&f, &s)? };
            json!({
                "tree": x.tree.to_line(), "orientation": x.tree.orientation(),
                "edges": edges_json(&x.tree.as_digraph()), "sequence": s.to_string(), "mark": x.mark,
            })
        }
    };
    out.value(&body)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
