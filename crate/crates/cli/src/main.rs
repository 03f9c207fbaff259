//! `acyclic`: verify, color, scan and generate plane graphs from the shell.
//!
//! Exit status: 0 success, 1 domain failure, 2 usage or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "acyclic", version, about = "Acyclic edge-coloring of plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a coloring file against an embedding.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// Palette size; defaults to the largest color in the file.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Color an embedding with the reduction driver.
    Color {
        #[arg(long)]
        graph: PathBuf,
        /// Palette size; defaults to five times the maximum degree.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Exact acyclic chromatic index by exhaustive search.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        /// Largest palette tried; defaults to the maximum degree plus 3.
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Find a reducible configuration.
    Scan {
        #[arg(long)]
        graph: PathBuf,
        /// Big-vertex threshold; defaults to 8680.
        #[arg(long)]
        big: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run the discharging rules and report unhappy elements.
    Discharge {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        big: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Recolor a bunch stage by stage. Without files, uses a built-in
    /// twelve-thread example.
    RethreadDemo {
        #[arg(long, requires_all = ["coloring", "parents", "k", "big"])]
        graph: Option<PathBuf>,
        /// Coloring of the graph without the bunch's horizontal edges.
        #[arg(long, requires = "graph")]
        coloring: Option<PathBuf>,
        /// The two parents, `v,w`.
        #[arg(long, requires = "graph", value_parser = parse_pair)]
        parents: Option<(usize, usize)>,
        #[arg(long, requires = "graph")]
        k: Option<usize>,
        #[arg(long)]
        big: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Exact arithmetic behind the constants.
    Constants {
        #[arg(long)]
        json: bool,
    },
    /// Write an embedding.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    TruncDodec,
    Borodin,
    Bunch,
    Random,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `v,w`")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { graph, coloring, k, json } => commands::verify(&graph, &coloring, k, json),
        Command::Color { graph, k, json } => commands::color(&graph, k, json),
        Command::Oracle { graph, max_k, json } => commands::oracle(&graph, max_k, json),
        Command::Scan { graph, big, json } => commands::scan(&graph, big, json),
        Command::Discharge { graph, big, json } => commands::discharge(&graph, big, json),
        Command::RethreadDemo {
            graph,
            coloring,
            parents,
            k,
            big,
            json,
        } => {
            let files = graph.map(|g| commands::BunchInput {
                graph: g,
                coloring: coloring.expect("clap enforces"),
                parents: parents.expect("clap enforces"),
                k: k.expect("clap enforces"),
            });
            commands::rethread_demo(files, big, json)
        }
        Command::Constants { json } => commands::constants(json),
        Command::Generate { kind, t, n, seed } => commands::generate(kind, t, n, seed),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.status())
        }
    }
}
