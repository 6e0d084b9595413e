//! File-driven front end: validate poc-set files, export their dual graphs,
//! run simulation scenarios, and apply structural moves. Exit codes: 0 on
//! success, 1 for semantic failures, 2 for I/O and parse trouble, 3 when a
//! poc-set exceeds the enumeration size guard.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pocmem::formats::{
    load_pocset, resolve_elem, save_pocset, save_retraction, to_pretty, FormatError, GraphFile,
    PocSetFile,
};
use pocmem::sim::{self, BudgetSpec, ModeSpec, Scenario};
use pocmem::{
    degenerate, expand, DeformError, Elem, Expansion, MedianError, MedianGraph, Nesting,
    PairRelation, SimError, DEFAULT_MAX_TAGS,
};

#[derive(Parser)]
#[command(
    name = "pocmem",
    version,
    about = "Poc-set files, their dual median graphs, and observers that update over them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a poc-set file against the axioms and print the pair relations.
    Validate { file: PathBuf },
    /// Export the dual median graph of a poc-set file.
    Dual {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a scenario file and emit its JSON-lines trace.
    Simulate {
        scenario: PathBuf,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Dissipative budget override: a hop count, "unlimited", or
        /// charge:DECAY,THRESHOLD.
        #[arg(long)]
        budget: Option<String>,
        /// Override the corner probability below which structure collapses.
        #[arg(long)]
        threshold: Option<f64>,
        /// Write the trace to this file instead of stdout.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Impose a < b on a poc-set file, collapsing the corner between them.
    Degenerate {
        file: PathBuf,
        /// Element name, complements written like "x*".
        a: String,
        /// Element name; the imposed relation empties the corner (a, b).
        b: String,
        #[arg(long, default_value = "degenerated.json")]
        out: PathBuf,
        #[arg(long, default_value = "retraction.json")]
        retraction: PathBuf,
    },
    /// Grow a poc-set file by a fresh tag or by dropping a covering relation.
    Expand {
        file: PathBuf,
        /// Append an unrelated tag with this name.
        #[arg(long, value_name = "NAME", conflicts_with = "relax")]
        add_tag: Option<String>,
        /// Drop the covering relation A < B.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        relax: Option<Vec<String>>,
        #[arg(long, default_value = "expanded.json")]
        out: PathBuf,
        #[arg(long, default_value = "retraction.json")]
        retraction: PathBuf,
    },
    /// Write a ready-to-run example scenario.
    ScenarioGen {
        #[arg(value_enum)]
        which: Example,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Example {
    Compass,
    Grid,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn median_code(e: &MedianError) -> u8 {
    match e {
        MedianError::TooManyTags { .. } => 3,
        _ => 1,
    }
}

fn deform_code(e: &DeformError) -> u8 {
    match e {
        DeformError::Graph(g) => median_code(g),
        _ => 1,
    }
}

fn format_code(e: &FormatError) -> u8 {
    match e {
        FormatError::Io { .. } | FormatError::Json { .. } => 2,
        FormatError::Graph(g) => median_code(g),
        FormatError::Retraction(d) => deform_code(d),
        _ => 1,
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        fail(format_code(&e), e.to_string())
    }
}

impl From<MedianError> for Failure {
    fn from(e: MedianError) -> Failure {
        fail(median_code(&e), e.to_string())
    }
}

impl From<DeformError> for Failure {
    fn from(e: DeformError) -> Failure {
        fail(deform_code(&e), e.to_string())
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Failure {
        let code = match &e {
            SimError::Format(f) => format_code(f),
            SimError::Graph(g) => median_code(g),
            SimError::Deform(d) => deform_code(d),
            _ => 1,
        };
        fail(code, e.to_string())
    }
}

fn max_tags() -> Result<usize, Failure> {
    match std::env::var("POCMEM_MAX_TAGS") {
        Ok(s) => s.trim().parse().map_err(|_| {
            fail(1, format!("POCMEM_MAX_TAGS must be a tag count, got {s:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_TAGS),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Dual { file, format } => cmd_dual(&file, format),
        Command::Simulate {
            scenario,
            seed,
            budget,
            threshold,
            trace,
        } => cmd_simulate(&scenario, seed, budget.as_deref(), threshold, trace.as_deref()),
        Command::Degenerate {
            file,
            a,
            b,
            out,
            retraction,
        } => cmd_degenerate(&file, &a, &b, &out, &retraction),
        Command::Expand {
            file,
            add_tag,
            relax,
            out,
            retraction,
        } => cmd_expand(&file, add_tag, relax, &out, &retraction),
        Command::ScenarioGen { which, out } => cmd_scenario_gen(which, out.as_deref()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn cmd_validate(file: &Path) -> Result<(), Failure> {
    let pf: PocSetFile = read_json(file)?;
    // Closing surfaces any axiom the declared relations would break, with
    // the offending elements named; a closed order then validates clean.
    let p = pf.build().map_err(|e| fail(1, e.to_string()))?;
    let report = p.validate();
    if !report.is_ok() {
        for v in &report.violations {
            println!("violation: {v}");
        }
        return Err(fail(1, format!("{} axiom violations", report.violations.len())));
    }
    println!("ok: {} tags, {} proper elements", p.tag_count(), 2 * p.tag_count());
    let tags = p.tags();
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            let a = Elem::positive(i);
            let b = Elem::positive(j);
            let rel = p
                .classify_pair(a, b)
                .expect("distinct tags always classify");
            let desc = match rel {
                PairRelation::Nested(Nesting::ALeB) => {
                    format!("{} <= {}", p.elem_name(a), p.elem_name(b))
                }
                PairRelation::Nested(Nesting::ALeBStar) => {
                    format!("{} <= {}", p.elem_name(a), p.elem_name(b.star()))
                }
                PairRelation::Nested(Nesting::AStarLeB) => {
                    format!("{} <= {}", p.elem_name(a.star()), p.elem_name(b))
                }
                PairRelation::Nested(Nesting::AStarLeBStar) => {
                    format!("{} <= {}", p.elem_name(b), p.elem_name(a))
                }
                PairRelation::Transverse => {
                    format!("{} transverse {}", p.elem_name(a), p.elem_name(b))
                }
            };
            println!("  {desc}");
        }
    }
    Ok(())
}

fn dot(g: &MedianGraph) -> String {
    let p = g.pocset();
    let mut out = String::from("graph dual {\n  node [shape=box];\n");
    for (i, s) in g.selections().enumerate() {
        let label: Vec<String> = s
            .elems(p.tag_count())
            .into_iter()
            .map(|e| p.elem_name(e))
            .collect();
        out.push_str(&format!("  v{i} [label=\"{}\"];\n", label.join(" ")));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  v{u} -- v{v};\n"));
    }
    out.push_str("}\n");
    out
}

fn cmd_dual(file: &Path, format: Format) -> Result<(), Failure> {
    let p = load_pocset(file)?;
    let g = MedianGraph::build_with_limit(&p, max_tags()?)?;
    match format {
        Format::Json => println!("{}", to_pretty(&GraphFile::of(&g)).trim_end()),
        Format::Dot => print!("{}", dot(&g)),
    }
    Ok(())
}

fn cmd_simulate(
    scenario_path: &Path,
    seed: Option<u64>,
    budget: Option<&str>,
    threshold: Option<f64>,
    trace: Option<&Path>,
) -> Result<(), Failure> {
    let mut scenario = sim::load_scenario(scenario_path)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if let Some(budget) = budget {
        scenario.mode = ModeSpec::Dissipative {
            budget: parse_budget(budget)?,
        };
    }
    if let Some(threshold) = threshold {
        scenario.threshold = Some(threshold);
    }
    let base = scenario_path.parent().unwrap_or_else(|| Path::new("."));
    let out = sim::run(&scenario, base, max_tags()?)?;
    let text = out.lines.join("\n") + "\n";
    match trace {
        Some(path) => fs::write(path, &text)
            .map_err(|e| fail(2, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if !out.audit.ok {
        let detail = out.audit.violation.unwrap_or_default();
        return Err(fail(1, format!("move log failed its audit: {detail}")));
    }
    Ok(())
}

fn parse_budget(s: &str) -> Result<BudgetSpec, Failure> {
    let bad = || {
        fail(
            1,
            format!("budget must be a hop count, \"unlimited\", or charge:DECAY,THRESHOLD, got {s:?}"),
        )
    };
    if s == "unlimited" {
        return Ok(BudgetSpec::Unlimited);
    }
    if let Some(rest) = s.strip_prefix("charge:") {
        let (decay, threshold) = rest.split_once(',').ok_or_else(bad)?;
        return Ok(BudgetSpec::Charge {
            decay: decay.trim().parse().map_err(|_| bad())?,
            threshold: threshold.trim().parse().map_err(|_| bad())?,
        });
    }
    Ok(BudgetSpec::Hops {
        hops: s.parse().map_err(|_| bad())?,
    })
}

fn cmd_degenerate(
    file: &Path,
    a: &str,
    b: &str,
    out: &Path,
    retraction: &Path,
) -> Result<(), Failure> {
    let p = load_pocset(file)?;
    let ea = resolve_elem(&p, a)?;
    let eb = resolve_elem(&p, b)?;
    let (q, r) = degenerate(&p, ea, eb)?;
    if r.is_identity() {
        eprintln!("note: the corner ({a}, {b}) is already empty; output unchanged");
    }
    save_pocset(out, &q)?;
    save_retraction(retraction, &r)?;
    println!("wrote {} and {}", out.display(), retraction.display());
    Ok(())
}

fn cmd_expand(
    file: &Path,
    add_tag: Option<String>,
    relax: Option<Vec<String>>,
    out: &Path,
    retraction: &Path,
) -> Result<(), Failure> {
    let p = load_pocset(file)?;
    let how = match (add_tag, relax) {
        (Some(name), None) => Expansion::AddTag(name),
        (None, Some(pair)) if pair.len() == 2 => {
            Expansion::RelaxRelation(resolve_elem(&p, &pair[0])?, resolve_elem(&p, &pair[1])?)
        }
        _ => return Err(fail(1, "pass exactly one of --add-tag NAME or --relax A B")),
    };
    let (q, r) = expand(&p, &how)?;
    save_pocset(out, &q)?;
    save_retraction(retraction, &r)?;
    println!("wrote {} and {}", out.display(), retraction.display());
    Ok(())
}

fn cmd_scenario_gen(which: Example, out: Option<&Path>) -> Result<(), Failure> {
    let s = match which {
        Example::Compass => Scenario::compass_example(),
        Example::Grid => Scenario::grid_example(),
    };
    match out {
        Some(path) => {
            sim::save_scenario(path, &s)?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", to_pretty(&s).trim_end()),
    }
    Ok(())
}
