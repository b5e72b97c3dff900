//! `hyperop`: enumerate, compose, verify, compute homology, render, cache.

mod cache;
mod render;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use hyperop_core::cattop::{
    build_comma, build_hat, complexity_subcategory, hat_grothendieck, homology, nerve, poset_category, FinCategory,
    HomologyResult,
};
use hyperop_core::circled::enumerate_configs;
use hyperop_core::kgraph::{k_enumerate, KElt, LabelConvention};
use hyperop_core::operad_h::{complexity, compose_with, HOperation, ReduceRules};
use hyperop_core::trees::{enumerate_trees, PlanarTree};
use hyperop_core::verify::{self, CheckReport, LEMMA_TREES};

use cache::{cached, Cache};

const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(String),
    #[error("not-loop-free: {0}")]
    NotLoopFree(String),
    #[error("core: {0}")]
    Core(hyperop_core::Error),
    #[error("check-failed: {0}")]
    Failed(String),
}

impl From<hyperop_core::Error> for CliError {
    fn from(e: hyperop_core::Error) -> Self {
        match e {
            hyperop_core::Error::NotLoopFree(m) => CliError::NotLoopFree(m),
            hyperop_core::Error::Parse(p) => CliError::Usage(p.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Cache(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Convention {
    Adopted,
    Literal,
}

impl From<Convention> for LabelConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Adopted => LabelConvention::Adopted,
            Convention::Literal => LabelConvention::Literal,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hyperop", version, about = "Circled planar trees, complete graphs and nerve homology")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Cache directory; must exist.
    #[arg(long, env = "HYPEROP_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Label convention for complete-graph filtrations.
    #[arg(long, value_enum, default_value = "adopted", global = true)]
    convention: Convention,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List trees, configurations or complete-graph elements.
    #[command(subcommand)]
    Enumerate(Enumerate),
    /// Compose an operation with arguments.
    Compose {
        #[arg(long)]
        op: String,
        /// One per white circle, in label order.
        #[arg(long = "arg")]
        args: Vec<String>,
        /// Disable reduction rule R3.
        #[arg(long)]
        no_r3: bool,
    },
    /// Run property suites.
    Verify(VerifyArgs),
    /// Integral homology of a nerve.
    #[command(subcommand)]
    Homology(Homology),
    /// Draw a configuration as SVG.
    Render {
        #[arg(long)]
        op: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_labels: bool,
        /// Fail if two circle outlines cross.
        #[arg(long)]
        check: bool,
    },
    /// Inspect the cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum Enumerate {
    Trees {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        max_leaves: usize,
    },
    Configs {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        k: usize,
    },
    Kgraph {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Axioms,
    Inequality,
    Lemma,
    RemarkLinear,
    Kposet,
    Hat,
    Grothendieck,
    Cowedge,
    ProofStructure,
    Confluence,
    R3,
    Codec,
    Figure,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Trees for the per-tree suites; defaults to the built-in corpus.
    #[arg(long = "tree")]
    trees: Vec<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Largest linear tree for `remark-linear`.
    #[arg(long, default_value_t = 3)]
    vertices: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Sampled instances for `cowedge`.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
enum Homology {
    Kposet {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    Comma(TreeK),
    /// Full subcategory of operations with complexity below `--cell`.
    Sub {
        #[command(flatten)]
        at: TreeK,
        #[arg(long)]
        cell: String,
    },
    Hat(TreeK),
    Grothendieck(TreeK),
}

#[derive(Args, Debug)]
struct TreeK {
    #[arg(long)]
    tree: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    max_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    List,
    Verify,
    Clear,
}

fn parse_tree(s: &str) -> Result<PlanarTree, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("tree {s:?}: {e}")))
}

fn parse_op(s: &str) -> Result<HOperation, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("operation {s:?}: {e}")))
}

struct Out {
    format: Format,
}

impl Out {
    fn record(&self, text: &str, record: Value) {
        match self.format {
            Format::Text => emit(text),
            Format::Jsonl => {
                let mut r = json!({ "schema": SCHEMA });
                if let (Value::Object(base), Value::Object(extra)) = (&mut r, record) {
                    base.extend(extra);
                }
                emit(&r.to_string());
            }
        }
    }
}

/// Writes one line to stdout; a closed pipe ends the process quietly.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: io: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = Out { format: cli.format };
    let conv: LabelConvention = cli.convention.into();
    let cache = cli.cache_dir.as_deref().map(Cache::open).transpose()?;
    match &cli.command {
        Command::Enumerate(e) => enumerate(e, conv, cache.as_ref(), &out),
        Command::Compose { op, args, no_r3 } => {
            let o = parse_op(op)?;
            let args: Vec<HOperation> = args.iter().map(|a| parse_op(a)).collect::<Result<_, _>>()?;
            let rules = ReduceRules {
                r3: !no_r3,
                ..ReduceRules::default()
            };
            let c = compose_with(&o, &args, rules)?;
            let op = HOperation::new(c.clone());
            let (inputs, output, cx) = match &op {
                Ok(h) => (
                    h.inputs().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    h.output().to_string(),
                    complexity(h).to_string(),
                ),
                Err(_) => (Vec::new(), String::new(), String::new()),
            };
            out.record(
                &c.to_string(),
                json!({ "kind": "operation", "config": c.to_string(), "valid": op.is_ok(),
                        "inputs": inputs, "output": output, "complexity": cx }),
            );
            Ok(())
        }
        Command::Verify(v) => verify_cmd(v, &out),
        Command::Homology(h) => homology_cmd(h, conv, cache.as_ref(), &out),
        Command::Render {
            op,
            out: path,
            no_labels,
            check,
        } => {
            let o = parse_op(op)?;
            let style = render::Style {
                labels: !no_labels,
                ..render::Style::default()
            };
            let drawing = render::Drawing::new(o.config(), style);
            if *check && !drawing.crossings().is_empty() {
                return Err(CliError::Failed(format!("{} crossing circle pairs", drawing.crossings().len())));
            }
            let svg = drawing.to_svg();
            match path {
                Some(p) => std::fs::write(p, svg).map_err(|e| CliError::Io(e.to_string())),
                None => {
                    emit(svg.trim_end());
                    Ok(())
                }
            }
        }
        Command::Cache { action } => {
            let cache = cache.ok_or_else(|| CliError::Cache("no cache directory given".into()))?;
            cache_cmd(&cache, *action, &out)
        }
    }
}

fn enumerate(e: &Enumerate, conv: LabelConvention, cache: Option<&Cache>, out: &Out) -> Result<(), CliError> {
    let (kind, lines) = match e {
        Enumerate::Trees {
            max_vertices,
            max_leaves,
        } => ("tree", enumerate_trees(*max_vertices, *max_leaves).iter().map(|t| t.to_string()).collect()),
        Enumerate::Configs { tree, k } => {
            let t = parse_tree(tree)?;
            let key = format!("configs|T={t}|k={k}|conv={}", conv.name());
            let lines = cached(cache, &key, || {
                Ok(enumerate_configs(&t, *k, None).iter().map(|c| c.to_string()).collect())
            })?;
            ("config", lines)
        }
        Enumerate::Kgraph { m, k } => (
            "kgraph",
            k_enumerate(*m, *k, conv).iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        ),
    };
    for l in lines {
        out.record(&l, json!({ "kind": kind, "value": l }));
    }
    Ok(())
}

fn tree_list(v: &VerifyArgs, default: &[&str]) -> Result<Vec<PlanarTree>, CliError> {
    if v.trees.is_empty() {
        default.iter().map(|s| parse_tree(s)).collect()
    } else {
        v.trees.iter().map(|s| parse_tree(s)).collect()
    }
}

fn verify_cmd(v: &VerifyArgs, out: &Out) -> Result<(), CliError> {
    const SMALL: [&str; 3] = ["|", "(|)", "(| |)"];
    let suites = if v.suite == Suite::All {
        vec![
            Suite::Figure,
            Suite::Axioms,
            Suite::Inequality,
            Suite::Lemma,
            Suite::RemarkLinear,
            Suite::Kposet,
            Suite::Hat,
            Suite::Grothendieck,
            Suite::ProofStructure,
            Suite::Cowedge,
            Suite::Confluence,
            Suite::R3,
            Suite::Codec,
        ]
    } else {
        vec![v.suite]
    };
    let mut failed = Vec::new();
    for s in suites {
        let report = match s {
            Suite::Figure => verify::kgraph_figure(),
            Suite::Axioms => verify::operad_axioms(v.seed),
            Suite::Inequality => verify::complexity_inequality(v.seed),
            Suite::Lemma => verify::lemma_acyclicity(&tree_list(v, &LEMMA_TREES)?, v.k, v.max_dim),
            Suite::RemarkLinear => verify::remark_linear(v.vertices),
            Suite::Kposet => verify::kposet_homology(),
            Suite::Hat => verify::hat_homology(&tree_list(v, &SMALL)?),
            Suite::Grothendieck => verify::grothendieck_check(&tree_list(v, &SMALL)?),
            Suite::ProofStructure => verify::proof_structure(&tree_list(v, &LEMMA_TREES)?),
            Suite::Cowedge => verify::cowedge_squares(v.seed, v.samples),
            Suite::Confluence => verify::reduction_confluence(v.seed),
            Suite::R3 => verify::r3_negative(),
            Suite::Codec => verify::codec_roundtrips(v.seed),
            Suite::All => unreachable!("expanded above"),
        };
        emit_report(&report, out);
        if !report.passed() {
            failed.push(report.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed.join(", ")))
    }
}

fn emit_report(r: &CheckReport, out: &Out) {
    let mut text = r.to_string();
    for f in &r.failures {
        text.push_str(&format!("\n  counterexample: {f}"));
    }
    for n in &r.notes {
        text.push_str(&format!("\n  note: {n}"));
    }
    out.record(
        &text,
        json!({ "kind": "check", "name": r.name, "passed": r.passed(), "cases": r.cases,
                "failures": r.failure_count, "counterexamples": r.failures, "notes": r.notes }),
    );
}

fn nerve_homology<O, A>(c: &FinCategory<O, A>, max_dim: Option<usize>) -> Result<HomologyResult, CliError>
where
    O: Clone + Eq + std::hash::Hash + std::fmt::Debug,
    A: Clone + Eq + std::hash::Hash + std::fmt::Debug,
{
    Ok(homology(&nerve(c, max_dim.map(|d| d + 1))?)?)
}

/// Lines of a homology listing: a summary, then one line per degree.
fn homology_lines<O, A>(c: &FinCategory<O, A>, max_dim: Option<usize>) -> Result<Vec<String>, CliError>
where
    O: Clone + Eq + std::hash::Hash + std::fmt::Debug,
    A: Clone + Eq + std::hash::Hash + std::fmt::Debug,
{
    let mut lines = vec![format!("objects={} arrows={} components={}", c.object_count(), c.arrow_count(), c.components())];
    if c.is_empty() {
        return Ok(lines);
    }
    let h = nerve_homology(c, max_dim)?;
    for (n, d) in h.degrees.iter().enumerate() {
        let torsion: Vec<String> = d.torsion.iter().map(|t| t.to_string()).collect();
        lines.push(format!("H{n} {} betti={} torsion=[{}]", d, d.betti, torsion.join(",")));
    }
    if !h.complete {
        lines.push(format!("truncated through degree {}", h.valid_through()));
    }
    Ok(lines)
}

/// A deferred computation of output lines.
type Listing = Box<dyn FnOnce() -> Result<Vec<String>, CliError>>;

fn homology_cmd(h: &Homology, conv: LabelConvention, cache: Option<&Cache>, out: &Out) -> Result<(), CliError> {
    let (target, key, compute): (String, String, Listing) = match h {
        Homology::Kposet { m, k, max_dim } => {
            let (m, k, d) = (*m, *k, *max_dim);
            (
                format!("kposet m={m} k={k}"),
                format!("homology|kposet|m={m}|k={k}|dim={d:?}|conv={}", conv.name()),
                Box::new(move || homology_lines(&poset_category(k_enumerate(m, k, conv))?, d)),
            )
        }
        Homology::Comma(a) => {
            let t = parse_tree(&a.tree)?;
            let (k, d) = (a.k, a.max_dim);
            (
                format!("comma T={t} k={k}"),
                format!("homology|comma|T={t}|k={k}|dim={d:?}"),
                Box::new(move || homology_lines(&build_comma(&t, k)?, d)),
            )
        }
        Homology::Sub { at, cell } => {
            let t = parse_tree(&at.tree)?;
            let cell: KElt = cell.parse().map_err(|e| CliError::Usage(format!("cell {cell:?}: {e}")))?;
            if cell.arity() != at.k {
                return Err(CliError::Usage(format!("cell has arity {}, expected {}", cell.arity(), at.k)));
            }
            let (k, d) = (at.k, at.max_dim);
            (
                format!("sub T={t} k={k} cell {cell}"),
                format!("homology|sub|T={t}|k={k}|cell={cell}|dim={d:?}"),
                Box::new(move || homology_lines(&complexity_subcategory(&build_comma(&t, k)?, &cell), d)),
            )
        }
        Homology::Hat(a) => {
            let t = parse_tree(&a.tree)?;
            let (k, d) = (a.k, a.max_dim);
            (
                format!("hat T={t} k={k}"),
                format!("homology|hat|T={t}|k={k}|dim={d:?}"),
                Box::new(move || homology_lines(&build_hat(&build_comma(&t, k)?, k)?, d)),
            )
        }
        Homology::Grothendieck(a) => {
            let t = parse_tree(&a.tree)?;
            let (k, d) = (a.k, a.max_dim);
            (
                format!("grothendieck T={t} k={k}"),
                format!("homology|grothendieck|T={t}|k={k}|dim={d:?}"),
                Box::new(move || homology_lines(&hat_grothendieck(&build_comma(&t, k)?, k)?.1, d)),
            )
        }
    };
    for l in cached(cache, &key, compute)? {
        out.record(&l, json!({ "kind": "homology", "target": target, "line": l }));
    }
    Ok(())
}

fn cache_cmd(cache: &Cache, action: CacheAction, out: &Out) -> Result<(), CliError> {
    match action {
        CacheAction::List => {
            for (p, e) in cache.entries()? {
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let key = e.as_ref().map(|e| e.key.clone()).unwrap_or_default();
                out.record(&format!("{name} {key}"), json!({ "kind": "cache-entry", "file": name, "key": key }));
            }
            Ok(())
        }
        CacheAction::Verify => {
            let mut bad = 0;
            for (p, e) in cache.entries()? {
                let ok = e.as_ref().is_some_and(|e| e.is_intact());
                if !ok {
                    bad += 1;
                }
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                out.record(
                    &format!("{name} {}", if ok { "ok" } else { "corrupt" }),
                    json!({ "kind": "cache-check", "file": name, "intact": ok }),
                );
            }
            if bad > 0 {
                Err(CliError::Failed(format!("{bad} corrupt cache entries")))
            } else {
                Ok(())
            }
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            out.record(&format!("removed {n}"), json!({ "kind": "cache-clear", "removed": n }));
            Ok(())
        }
    }
}
