use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use folkman_pipeline::commands::{self, ArrowKind, IngestRequest};
use folkman_pipeline::io::open_input;
use folkman_pipeline::stages::{run_stage, StageRequest};
use folkman_pipeline::{CliResult, Failure};

#[derive(Parser)]
#[command(
    name = "folkman",
    version,
    about = "Arrowing checks and proof stages for F_e(3,3;4) >= 20"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact invariants of graph6 records (arguments or a stream).
    Props {
        /// graph6 records; read the stream when none are given.
        graphs: Vec<String>,
        /// Stream to read instead of standard input.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Arrowing verdict for K_p + G, one line per record.
    Arrow {
        /// edge33, vertex33 or vertex233.
        #[arg(long, default_value = "edge33")]
        kind: ArrowKind,
        #[arg(long, default_value_t = 0)]
        p: usize,
        /// Print a coloring for graphs that do not arrow.
        #[arg(long)]
        witness: bool,
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Run a named stage and write its outputs and manifest.
    Stage {
        /// algorithm1, s5-branch, s4-mid, s4-plusk3, s4-final, lmax15,
        /// l15-closure or fv233-upper.
        name: String,
        /// Input file by role, ROLE=PATH (PATH may be - for stdin).
        #[arg(long = "input", value_parser = parse_role)]
        inputs: Vec<(String, PathBuf)>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        /// Only search for graphs with minimum degree at least 8.
        #[arg(long)]
        degree_prune: bool,
        /// Skip the final arrowing filter.
        #[arg(long)]
        no_arrow: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Expected-count file; a mismatch exits with status 3.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Histograms of |E|, min/max degree, alpha and |Aut|.
    Stats {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, requires = "table")]
        expect: Option<PathBuf>,
        /// Table name inside the expectation file.
        #[arg(long, requires = "expect")]
        table: Option<String>,
    },
    /// Validate, canonicalize, deduplicate and filter a graph6 file.
    Ingest {
        input: PathBuf,
        /// Output file (a .manifest.json sidecar is written next to it).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Filter such as omega<4,alpha<4.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        expect_count: Option<u64>,
        #[arg(long, requires = "dataset")]
        expect: Option<PathBuf>,
        /// Dataset name inside the expectation file.
        #[arg(long, requires = "expect")]
        dataset: Option<String>,
    },
    /// One canonical representative per isomorphism class, sorted.
    Dedup {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_role(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((role, path)) if !role.is_empty() && !path.is_empty() => {
            Ok((role.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected ROLE=PATH, got `{s}`")),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Props { graphs, input } => {
            commands::cmd_props(&graphs, input.as_deref(), &mut out)
        }
        Command::Arrow {
            kind,
            p,
            witness,
            input,
        } => commands::cmd_arrow(kind, p, witness, open_input(&input)?, &mut out),
        Command::Stage {
            name,
            inputs,
            n,
            p,
            s,
            degree_prune,
            no_arrow,
            out_dir,
            expect,
        } => {
            let req = StageRequest {
                stage: name,
                inputs,
                n,
                p,
                s,
                degree_prune,
                no_arrow,
            };
            run_stage(&req, &out_dir, expect.as_deref()).and_then(|m| {
                writeln!(out, "{}", m.to_json().trim_end())?;
                Ok(())
            })
        }
        Command::Stats {
            input,
            json,
            expect,
            table,
        } => {
            let expect = expect.as_deref().zip(table.as_deref());
            commands::cmd_stats(&input, json, expect, &mut out)
        }
        Command::Ingest {
            input,
            out: out_path,
            filter,
            expect_count,
            expect,
            dataset,
        } => {
            let req = IngestRequest {
                input,
                out: out_path,
                filter,
                expect_count,
                dataset: expect.zip(dataset),
            };
            commands::cmd_ingest(&req, &mut out, &mut io::stderr()).map(|m| {
                eprintln!(
                    "kept {} of {} distinct ({} records)",
                    m.kept, m.distinct, m.records
                );
            })
        }
        Command::Dedup {
            input,
            out: out_path,
        } => commands::cmd_dedup(&input, out_path.as_deref(), &mut out).map(|_| ()),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
