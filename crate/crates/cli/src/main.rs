//! `situ`: load, validate, compose and simulate situated transition systems.
//!
//! Exit codes: 0 success, 1 domain failure (violations, mismatches, law
//! failures), 2 input error (unreadable or malformed files, bad arguments).

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use situ::accounts::{ledger_of_run, Ledger};
use situ::files::{self, load_system, load_system_file, AnySystem, SystemFile};
use situ::laws::{self, SuiteReport};
use situ::limits::Limits;
use situ::situated::{run, s_compose, s_equiv, s_identity, s_tensor, SituatedSystem};
use situ::syntax::{print_cell, print_exchange};
use situ::theory::Theory;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "situ", version, about = "Situated transition systems")]
struct Cli {
    /// Override the theory of loaded systems: "Z" or a signature-file path.
    #[arg(long, global = true)]
    theory: Option<String>,
    /// Seed for the randomized law suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum apex size for isomorphism searches.
    #[arg(long, global = true)]
    size_cap: Option<usize>,
    /// Budget for the bounded equality searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check signature or system files for violations.
    Validate {
        /// Signature or system files (distinguished by content).
        files: Vec<PathBuf>,
    },
    /// Compose two systems along their shared interface.
    Compose {
        sys1: PathBuf,
        sys2: PathBuf,
        /// Also report whether the composite is equivalent to the identity
        /// system on its source interface.
        #[arg(long)]
        check_identity: bool,
        /// Write the composite system to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor two systems side by side.
    Tensor {
        sys1: PathBuf,
        sys2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a path (or step interactively) and print its material history.
    Simulate {
        sys: PathBuf,
        /// Comma-separated edge ids.
        #[arg(long, value_delimiter = ',', conflicts_with = "interactive")]
        path: Option<Vec<String>>,
        /// Prompt for each step on stdin.
        #[arg(long)]
        interactive: bool,
        /// Start vertex (least vertex when omitted).
        #[arg(long)]
        start: Option<String>,
    },
    /// Print the material history of a path as a cell term.
    History {
        sys: PathBuf,
        #[arg(long, value_delimiter = ',')]
        path: Vec<String>,
        #[arg(long)]
        start: Option<String>,
    },
    /// Print the double-entry ledger of a path (integer systems only).
    Ledger {
        sys: PathBuf,
        #[arg(long, value_delimiter = ',')]
        path: Vec<String>,
        #[arg(long)]
        start: Option<String>,
    },
    /// Run the law suites.
    #[command(name = "check-laws")]
    CheckLaws {
        /// yanking, span, situated, compact, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Samples per randomized law.
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Export a system as a DOT graph (trivial edges suppressed).
    ExportDot {
        sys: PathBuf,
        /// Which graph to export.
        #[arg(long, value_enum, default_value_t = Part::Apex)]
        part: Part,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the bundled example files.
    Examples {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Stock capacity of the Baker/Eater examples.
        #[arg(long, default_value_t = 3)]
        capacity: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    Apex,
    Src,
    Tgt,
}

/// Failure with the exit code it maps to.
enum Failure {
    /// Domain failure: exit 1.
    Domain(String),
    /// Input error: exit 2.
    Input(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(cap) = cli.size_cap {
        limits = limits.with_iso_size_cap(cap);
    }
    if let Some(b) = cli.budget {
        limits = limits
            .with_rewrite_budget(b)
            .with_cell_search_budget(b);
    }
    match dispatch(&cli, &limits) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli, limits: &Limits) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Validate { files } => cmd_validate(files, cli.theory.as_deref(), cli.format, limits),
        Cmd::Compose {
            sys1,
            sys2,
            check_identity,
            out,
        } => cmd_combine(
            sys1,
            sys2,
            *check_identity,
            out.as_deref(),
            false,
            cli.theory.as_deref(),
            cli.format,
            limits,
        ),
        Cmd::Tensor { sys1, sys2, out } => cmd_combine(
            sys1,
            sys2,
            false,
            out.as_deref(),
            true,
            cli.theory.as_deref(),
            cli.format,
            limits,
        ),
        Cmd::Simulate {
            sys,
            path,
            interactive,
            start,
        } => cmd_simulate(
            sys,
            path.as_deref(),
            *interactive,
            start.as_deref(),
            cli.theory.as_deref(),
            cli.format,
        ),
        Cmd::History { sys, path, start } => {
            cmd_history(sys, path, start.as_deref(), cli.theory.as_deref(), cli.format)
        }
        Cmd::Ledger { sys, path, start } => {
            cmd_ledger(sys, path, start.as_deref(), cli.theory.as_deref(), cli.format)
        }
        Cmd::CheckLaws { suite, samples } => {
            cmd_check_laws(suite, cli.seed, *samples, cli.format, limits)
        }
        Cmd::ExportDot { sys, part, out } => {
            cmd_export_dot(sys, *part, out.as_deref(), cli.theory.as_deref(), cli.format)
        }
        Cmd::Examples { dir, capacity } => cmd_examples(dir, *capacity, cli.format),
    }
}

fn load(path: &Path, theory: Option<&str>) -> Result<AnySystem, Failure> {
    match theory {
        None => load_system(path).map_err(input_err),
        Some(th) => {
            let text = std::fs::read_to_string(path).map_err(input_err)?;
            let mut file: SystemFile = serde_json::from_str(&text).map_err(input_err)?;
            file.theory = th.to_string();
            // A signature path names a file relative to the working
            // directory when given on the command line.
            load_system_file(&file, Path::new(".")).map_err(input_err)
        }
    }
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(
    paths: &[PathBuf],
    theory: Option<&str>,
    format: Format,
    limits: &Limits,
) -> Result<(), Failure> {
    if paths.is_empty() {
        return Err(Failure::Input("no files given".into()));
    }
    let mut reports = Vec::new();
    let mut violations = 0usize;
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(input_err)?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(input_err)?;
        let found: Vec<String> = if value.get("span").is_some() {
            let mut file: SystemFile = serde_json::from_value(value).map_err(input_err)?;
            let base = match theory {
                Some(th) => {
                    file.theory = th.to_string();
                    Path::new(".")
                }
                None => path.parent().unwrap_or(Path::new(".")),
            };
            let sys = load_system_file(&file, base).map_err(input_err)?;
            sys.validate(limits).iter().map(|v| v.to_string()).collect()
        } else if value.get("objects").is_some() {
            // Signature validity is established by construction.
            let file: files::SignatureFile = serde_json::from_value(value).map_err(input_err)?;
            match files::signature_from_file(&file) {
                Ok(_) => Vec::new(),
                Err(e) => vec![e.to_string()],
            }
        } else {
            return Err(Failure::Input(format!(
                "{}: neither a system nor a signature file",
                path.display()
            )));
        };
        violations += found.len();
        reports.push((path.clone(), found));
    }
    match format {
        Format::Text => {
            for (path, found) in &reports {
                if found.is_empty() {
                    println!("{}: ok", path.display());
                } else {
                    for v in found {
                        println!("{}: {v}", path.display());
                    }
                }
            }
        }
        Format::Json => {
            let items: Vec<_> = reports
                .iter()
                .map(|(p, found)| json!({"file": p.display().to_string(), "violations": found}))
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
        }
    }
    if violations > 0 {
        Err(Failure::Domain(format!("{violations} violation(s)")))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// compose / tensor
// ---------------------------------------------------------------------------

fn cmd_combine(
    p1: &Path,
    p2: &Path,
    check_identity: bool,
    out: Option<&Path>,
    tensor: bool,
    theory: Option<&str>,
    format: Format,
    limits: &Limits,
) -> Result<(), Failure> {
    let theory_ref = match theory {
        Some(th) => th.to_string(),
        None => {
            let text = std::fs::read_to_string(p1).map_err(input_err)?;
            serde_json::from_str::<SystemFile>(&text)
                .map_err(input_err)?
                .theory
        }
    };
    let (a, b) = (load(p1, theory)?, load(p2, theory)?);
    match (a, b) {
        (AnySystem::Z(r), AnySystem::Z(s)) => {
            let c = if tensor { s_tensor(&r, &s)? } else { s_compose(&r, &s)? };
            report_combined(&theory_ref, &c, check_identity, out, format, limits)
        }
        (AnySystem::Free(r), AnySystem::Free(s)) => {
            let c = if tensor { s_tensor(&r, &s)? } else { s_compose(&r, &s)? };
            report_combined(&theory_ref, &c, check_identity, out, format, limits)
        }
        _ => Err(Failure::Domain(
            "systems are over different theory kinds".into(),
        )),
    }
}

fn report_combined<T: Theory>(
    theory_ref: &str,
    c: &SituatedSystem<T>,
    check_identity: bool,
    out: Option<&Path>,
    format: Format,
    limits: &Limits,
) -> Result<(), Failure> {
    let vertices = c.span.apex.vertices.len();
    let edges = c.span.apex.nontrivial_edges().count();
    let identity = if check_identity {
        if c.src_boundary != c.tgt_boundary {
            Some(false)
        } else {
            let id = s_identity(&c.theory, &c.src_boundary);
            Some(s_equiv(c, &id, limits)?.is_some())
        }
    } else {
        None
    };
    if let Some(path) = out {
        files::save_json(path, &files::system_to_file(theory_ref, c)).map_err(input_err)?;
    }
    match format {
        Format::Text => {
            println!("apex: {vertices} vertices, {edges} nontrivial edges");
            if let Some(ok) = identity {
                println!("iso to identity: {ok}");
            }
        }
        Format::Json => {
            let mut obj = json!({"vertices": vertices, "nontrivial_edges": edges});
            if let Some(ok) = identity {
                obj["iso_to_identity"] = json!(ok);
            }
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    if identity == Some(false) {
        return Err(Failure::Domain("composite is not the identity".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate / history / ledger
// ---------------------------------------------------------------------------

fn default_start(sys: &AnySystem) -> String {
    sys.span()
        .apex
        .vertices
        .iter()
        .next()
        .expect("graphs are nonempty")
        .clone()
}

fn history_term(sys: &AnySystem, path: &[String], start: &str) -> Result<String, Failure> {
    match sys {
        AnySystem::Z(s) => Ok(print_cell(&s.theory, &run(s, path, Some(start))?)),
        AnySystem::Free(s) => Ok(print_cell(&s.theory, &run(s, path, Some(start))?)),
    }
}

fn cmd_history(
    path: &Path,
    edges: &[String],
    start: Option<&str>,
    theory: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let sys = load(path, theory)?;
    let start = start.map(str::to_string).unwrap_or_else(|| default_start(&sys));
    let term = history_term(&sys, edges, &start)?;
    match format {
        Format::Text => println!("{term}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({"history": term})).unwrap()
        ),
    }
    Ok(())
}

fn ledger_json(l: &Ledger) -> serde_json::Value {
    json!({
        "opening": l.opening,
        "closing": l.closing,
        "rows": l.rows.iter().map(|r| json!({
            "transition": r.transition,
            "opening": r.opening,
            "closing": r.closing,
            "left_postings": r.left_postings,
            "right_postings": r.right_postings,
        })).collect::<Vec<_>>(),
    })
}

fn print_ledger(l: &Ledger) {
    println!("{:<24} {:>8} {:>8}  {:<16} {:<16}", "transition", "opening", "closing", "left", "right");
    for r in &l.rows {
        println!(
            "{:<24} {:>8} {:>8}  {:<16} {:<16}",
            r.transition,
            r.opening,
            r.closing,
            format!("{:?}", r.left_postings),
            format!("{:?}", r.right_postings),
        );
    }
    println!("net: opening {} closing {} delta {}", l.opening, l.closing, l.delta());
}

fn cmd_ledger(
    path: &Path,
    edges: &[String],
    start: Option<&str>,
    theory: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let sys = load(path, theory)?;
    let start = start.map(str::to_string).unwrap_or_else(|| default_start(&sys));
    let AnySystem::Z(z) = &sys else {
        return Err(Failure::Input(
            "ledgers require a system over the integer theory".into(),
        ));
    };
    let ledger = ledger_of_run(z, edges, Some(&start))?;
    match format {
        Format::Text => print_ledger(&ledger),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&ledger_json(&ledger)).unwrap()
        ),
    }
    Ok(())
}

fn cmd_simulate(
    path: &Path,
    edges: Option<&[String]>,
    interactive: bool,
    start: Option<&str>,
    theory: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let sys = load(path, theory)?;
    let start = start.map(str::to_string).unwrap_or_else(|| default_start(&sys));
    let walked: Vec<String> = if interactive {
        interact(&sys, &start).map_err(input_err)?
    } else {
        edges.unwrap_or_default().to_vec()
    };
    let term = history_term(&sys, &walked, &start)?;
    let ledger = match &sys {
        AnySystem::Z(z) => Some(ledger_of_run(z, &walked, Some(&start))?),
        AnySystem::Free(_) => None,
    };
    match format {
        Format::Text => {
            println!("history: {term}");
            if let Some(l) = &ledger {
                print_ledger(l);
            }
        }
        Format::Json => {
            let mut obj = json!({"path": walked, "history": term});
            if let Some(l) = &ledger {
                obj["ledger"] = ledger_json(l);
            }
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    Ok(())
}

/// Line-oriented stepper: list the enabled transitions, read a choice,
/// print the step's boundary (and ledger row over Z), repeat until `q`.
fn interact(sys: &AnySystem, start: &str) -> std::io::Result<Vec<String>> {
    let apex = &sys.span().apex;
    if !apex.vertices.contains(start) {
        return Err(std::io::Error::other(format!("unknown vertex `{start}`")));
    }
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut at = start.to_string();
    let mut walked = Vec::new();
    loop {
        let enabled: Vec<(&String, &String)> = apex
            .edges
            .iter()
            .filter(|(e, (src, _))| *src == at && !apex.is_trivial(e))
            .map(|(e, (_, tgt))| (e, tgt))
            .collect();
        println!("at {at}; enabled:");
        for (i, (e, tgt)) in enabled.iter().enumerate() {
            println!("  [{i}] {e} -> {tgt}");
        }
        print!("step (index or id, q to quit)> ");
        std::io::stdout().flush()?;
        let Some(line) = lines.next() else { break };
        let line = line?;
        let choice = line.trim();
        if choice == "q" || choice.is_empty() {
            break;
        }
        let found = choice
            .parse::<usize>()
            .ok()
            .and_then(|i| enabled.get(i).copied())
            .or_else(|| enabled.iter().find(|(e, _)| *e == choice).copied());
        let Some((e, tgt)) = found else {
            println!("no such transition; choose again");
            continue;
        };
        match sys {
            AnySystem::Z(z) => {
                let f = situ::cornering::eval_flow(&z.theory, &z.elabels[e])
                    .map_err(std::io::Error::other)?;
                println!(
                    "{e}: {} -> {} (left {:?}, right {:?})",
                    f.top,
                    f.bottom,
                    f.left_postings(),
                    f.right_postings()
                );
            }
            AnySystem::Free(fsys) => {
                let b = situ::cornering::boundary(&fsys.theory, &fsys.elabels[e])
                    .map_err(std::io::Error::other)?;
                println!(
                    "{e}: {} -> {} (left {}, right {})",
                    b.top,
                    b.bottom,
                    print_exchange(&fsys.theory, &b.left),
                    print_exchange(&fsys.theory, &b.right)
                );
            }
        }
        walked.push(e.clone());
        at = tgt.clone();
    }
    Ok(walked)
}

// ---------------------------------------------------------------------------
// check-laws
// ---------------------------------------------------------------------------

fn cmd_check_laws(
    suite: &str,
    seed: u64,
    samples: usize,
    format: Format,
    limits: &Limits,
) -> Result<(), Failure> {
    let reports: Vec<SuiteReport> = if suite == "all" {
        laws::all_suites(seed, samples, limits)
    } else {
        vec![laws::run_suite(suite, seed, samples, limits)
            .ok_or_else(|| Failure::Input(format!("unknown suite `{suite}`")))?]
    };
    let failed: usize = reports
        .iter()
        .flat_map(|r| &r.laws)
        .map(|l| l.fail)
        .sum();
    match format {
        Format::Text => {
            for r in &reports {
                println!("suite {}: {}", r.suite, if r.ok() { "ok" } else { "FAILED" });
                for l in &r.laws {
                    println!(
                        "  {}: pass {} fail {} unknown {}",
                        l.law, l.pass, l.fail, l.unknown
                    );
                }
            }
        }
        Format::Json => {
            let items: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite,
                        "ok": r.ok(),
                        "laws": r.laws.iter().map(|l| json!({
                            "law": l.law,
                            "pass": l.pass,
                            "fail": l.fail,
                            "unknown": l.unknown,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
        }
    }
    if failed > 0 {
        Err(Failure::Domain(format!("{failed} law failure(s)")))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// export-dot
// ---------------------------------------------------------------------------

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn system_dot(sys: &AnySystem, part: Part) -> String {
    fn boundary_dot<T: Theory>(
        th: &T,
        b: &situ::situated::SituatedBoundary<T>,
    ) -> String {
        graph_dot(&b.graph, |v| v.to_string(), |e| {
            print_exchange(th, &b.label(e))
        })
    }
    fn apex_dot<T: Theory>(th: &T, s: &SituatedSystem<T>) -> String {
        graph_dot(
            &s.span.apex,
            |v| th.print_obj(&s.vlabels[v]),
            |e| print_cell(th, &s.elabels[e]),
        )
    }
    match (sys, part) {
        (AnySystem::Z(s), Part::Apex) => apex_dot(&s.theory, s),
        (AnySystem::Z(s), Part::Src) => boundary_dot(&s.theory, &s.src_boundary),
        (AnySystem::Z(s), Part::Tgt) => boundary_dot(&s.theory, &s.tgt_boundary),
        (AnySystem::Free(s), Part::Apex) => apex_dot(&s.theory, s),
        (AnySystem::Free(s), Part::Src) => boundary_dot(&s.theory, &s.src_boundary),
        (AnySystem::Free(s), Part::Tgt) => boundary_dot(&s.theory, &s.tgt_boundary),
    }
}

/// Deterministic DOT text; trivial edges are suppressed.
fn graph_dot(
    g: &situ::rgraph::RGraph,
    vlabel: impl Fn(&str) -> String,
    elabel: impl Fn(&str) -> String,
) -> String {
    let mut out = String::from("digraph {\n");
    for v in &g.vertices {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\"];\n",
            dot_escape(v),
            dot_escape(&vlabel(v))
        ));
    }
    for e in g.nontrivial_edges() {
        let (src, tgt) = &g.edges[e];
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            dot_escape(src),
            dot_escape(tgt),
            dot_escape(&elabel(e))
        ));
    }
    out.push_str("}\n");
    out
}

fn cmd_export_dot(
    path: &Path,
    part: Part,
    out: Option<&Path>,
    theory: Option<&str>,
    _format: Format,
) -> Result<(), Failure> {
    let sys = load(path, theory)?;
    let dot = system_dot(&sys, part);
    match out {
        Some(p) => std::fs::write(p, dot).map_err(input_err)?,
        None => print!("{dot}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// examples
// ---------------------------------------------------------------------------

fn cmd_examples(dir: &Path, capacity: usize, format: Format) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(input_err)?;
    let written = files::write_examples(dir, capacity).map_err(input_err)?;
    match format {
        Format::Text => {
            for p in &written {
                println!("{}", p.display());
            }
        }
        Format::Json => {
            let items: Vec<_> = written.iter().map(|p| p.display().to_string()).collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
        }
    }
    Ok(())
}
