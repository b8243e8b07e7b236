use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use divgraph_core::bundled::{bundled, BUNDLED};
use divgraph_core::config::{parse_config, Output, RunConfig};
use divgraph_core::run::{run, RunReport};
use serde_json::Value as Json;

/// Exit status for configuration, input, and I/O errors.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "divgraph", version, about = "Divisibility graphs of integral domains over finite windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the window graph; `--dot` prints Graphviz.
    Graph(Common),
    /// Path-based verdicts for atomic, ACCP, BFD, FFD, HFD.
    Classify(Common),
    /// Weak components and the atom subgroup.
    Components(Common),
    /// Atomic, almost atomic, and quasi atomic verdicts.
    Atomicity(Common),
    /// The Alexandrov space of the window order.
    Topology(Common),
    /// Cross-check against the factorization oracle.
    Check(Common),
    /// Every output listed in the config.
    Run(Common),
    /// Names of the bundled configs.
    List,
}

#[derive(Args)]
struct Common {
    /// Config file, or the name of a bundled config.
    #[arg(long)]
    config: String,
    /// Directory for JSON and DOT artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print DOT on stdout.
    #[arg(long)]
    dot: bool,
    /// Print JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Exit with status 1 when any verdict fails.
    #[arg(long)]
    assert: bool,
    /// Override the length and search bounds.
    #[arg(long)]
    bound: Option<usize>,
}

fn load(spec: &str) -> anyhow::Result<RunConfig> {
    let path = PathBuf::from(spec);
    let text = if path.exists() {
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
    } else if let Some(text) = bundled(spec) {
        text.to_string()
    } else {
        bail!("no config file or bundled config named `{spec}`");
    };
    parse_config(&text).with_context(|| format!("in config `{spec}`"))
}

fn status(v: &Json) -> String {
    let s = v["status"].as_str().unwrap_or("?");
    match v.get("witness").and_then(|w| w.get("element")) {
        Some(Json::String(e)) => format!("{s} (witness {e})"),
        _ => s.to_string(),
    }
}

fn summary(name: &str, doc: &Json) -> Vec<String> {
    match name {
        "graph" => vec![format!(
            "graph: {} vertices, {} edges, acyclic {}",
            doc["vertices"].as_array().map_or(0, Vec::len),
            doc["edges"].as_array().map_or(0, Vec::len),
            doc["acyclic"],
        )],
        "classify" => ["atomic", "accp", "bfd", "ffd", "hfd"]
            .iter()
            .map(|p| format!("{p}: {}", status(&doc["verdicts"][*p])))
            .collect(),
        "components" => {
            let mut out = vec![format!("integral components: {}", doc["integral"]["count"])];
            match doc["fractional"].get("count") {
                Some(c) => out.push(format!("fractional components: {c}")),
                None => out.push(format!("fractional components: unsupported ({})", doc["fractional"]["unsupported"])),
            }
            if let Some(b) = doc.get("atom_subgroup") {
                out.push(format!("atom subgroup basis: {}", b["basis"]));
            }
            out
        }
        "atomicity" => vec![
            format!("atomic: {}", status(&doc["atomic"])),
            format!("almost atomic: {}", status(&doc["almost_atomic"])),
            format!("quasi atomic: {}", status(&doc["quasi_atomic"])),
        ],
        "topology" => vec![format!("topology: T0 {}, round trip {}", doc["t0"], doc["round_trip"])],
        "oracle-check" => vec![format!(
            "oracle check: {} vertices, {} pairs, {} undecided, {} disagreements",
            doc["vertices"],
            doc["pairs"],
            doc["undecided"].as_array().map_or(0, Vec::len),
            doc["disagreements"].as_array().map_or(0, Vec::len),
        )],
        _ => Vec::new(),
    }
}

fn print(report: &RunReport, c: &Common) -> anyhow::Result<()> {
    if c.dot {
        if let Some(dot) = &report.dot {
            print!("{dot}");
        }
    }
    if c.json {
        let doc = if report.documents.len() == 1 {
            report.documents.values().next().cloned().unwrap_or(Json::Null)
        } else {
            serde_json::to_value(&report.documents)?
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    if !c.dot && !c.json {
        for name in Output::ALL.map(Output::name) {
            let Some(doc) = report.documents.get(name) else { continue };
            for line in summary(name, doc) {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn execute(only: Option<Output>, c: &Common) -> anyhow::Result<u8> {
    let mut config = load(&c.config)?;
    if let Some(o) = only {
        config.outputs = vec![o];
    }
    if c.dot && !config.outputs.contains(&Output::Graph) {
        config.outputs.insert(0, Output::Graph);
    }
    if let Some(b) = c.bound {
        config.length_bound = b;
        config.search_bound = b;
    }
    let report = run(&config, c.assert)?;
    if let Some(dir) = c.out.as_ref().or(config.out_dir.as_ref()) {
        report.write_artifacts(dir)?;
    }
    print(&report, c)?;
    Ok(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (only, common) = match &cli.command {
        Command::List => {
            for (name, _) in BUNDLED {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Graph(c) => (Some(Output::Graph), c),
        Command::Classify(c) => (Some(Output::Classify), c),
        Command::Components(c) => (Some(Output::Components), c),
        Command::Atomicity(c) => (Some(Output::Atomicity), c),
        Command::Topology(c) => (Some(Output::Topology), c),
        Command::Check(c) => (Some(Output::OracleCheck), c),
        Command::Run(c) => (None, c),
    };
    match execute(only, common) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
