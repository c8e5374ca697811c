use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use topohelly::commands::{self, Report};
use topohelly::config::Caps;
use topohelly::corpus::CorpusConfig;
use topohelly::generators::{generate, GeneratorSpec};
use topohelly::io::{family_to_json, read_family};
use topohelly::linalg::Characteristic;
use topohelly::{Error, Result, Status};

/// Exact homology, nerves, spectral sequences and fractional Helly checks
/// for families of subcomplexes. Every command prints a JSON report with a
/// `status` field; exit codes are 0 (ok), 1 (verdict failure), 2 (usage or
/// parse error), 3 (resource cap).
#[derive(Parser, Debug)]
#[command(name = "topohelly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout (a directory for `corpus`).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Largest family enumerated over all subfamilies.
    #[arg(long, global = true)]
    max_n: Option<usize>,

    /// Largest vertex count for induced-subcomplex enumeration.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,

    /// Largest complex handed to the homology engine.
    #[arg(long, global = true)]
    max_cells: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args, Debug)]
struct Input {
    /// Family document (JSON).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers and torsion of the ambient complex, each member, and the union.
    Homology {
        #[command(flatten)]
        input: Input,
        /// Also report Betti numbers over Q (0) or F_p.
        #[arg(long)]
        field: Option<u64>,
    },
    /// Nerve faces with their witness intersections.
    Nerve {
        #[command(flatten)]
        input: Input,
    },
    /// Leray number of the nerve (or of a member-less simplicial complex).
    Leray {
        #[command(flatten)]
        input: Input,
    },
    /// (k-|G|)-acyclicity of the family.
    Acyclic {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Fractional Helly statistics against the bound floor(β(α) n).
    Fh {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// The (p,q)-condition and the exact transversal number.
    Pq {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Spectral pages of the Mayer-Vietoris double complex.
    Spectral {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<usize>,
        /// Coefficient field: 0 for Q or a prime.
        #[arg(long, default_value_t = 0)]
        field: u64,
    },
    /// Union against nerve in degrees up to k under the connectivity hypothesis.
    Nervethm {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Generate and check a whole corpus; defaults to the shipped configuration.
    Corpus {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Added to every group's base seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate one family from a generator spec (JSON).
    Generate {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Homology { .. } => "homology",
            Command::Nerve { .. } => "nerve",
            Command::Leray { .. } => "leray",
            Command::Acyclic { .. } => "acyclic",
            Command::Fh { .. } => "fh",
            Command::Pq { .. } => "pq",
            Command::Spectral { .. } => "spectral",
            Command::Nervethm { .. } => "nervethm",
            Command::Corpus { .. } => "corpus",
            Command::Generate { .. } => "generate",
        }
    }
}

fn caps(cli: &Cli) -> Result<Caps> {
    let mut caps = Caps::default();
    if let Some(n) = cli.max_n {
        caps.max_members = n;
    }
    if let Some(v) = cli.max_vertices {
        caps.max_vertices = v;
    }
    if let Some(c) = cli.max_cells {
        caps.max_cells = c;
    }
    caps.validate()?;
    Ok(caps)
}

fn run(cli: &Cli) -> Result<Report> {
    let caps = caps(cli)?;
    let load = |i: &Input| read_family(&i.input, &caps);
    match &cli.command {
        Command::Homology { input, field } => {
            let field = field.map(Characteristic::new).transpose()?;
            commands::cmd_homology(&load(input)?, field, &caps)
        }
        Command::Nerve { input } => commands::cmd_nerve(&load(input)?, &caps),
        Command::Leray { input } => commands::cmd_leray(&load(input)?, &caps),
        Command::Acyclic { input, k } => commands::cmd_acyclic(&load(input)?, *k, &caps),
        Command::Fh { input, k } => commands::cmd_fh(&load(input)?, *k, &caps),
        Command::Pq { input, p, q } => commands::cmd_pq(&load(input)?, *p, *q, &caps),
        Command::Spectral { input, k, field } => {
            commands::cmd_spectral(&load(input)?, *k, Characteristic::new(*field)?, &caps)
        }
        Command::Nervethm { input, k } => commands::cmd_nervethm(&load(input)?, *k, &caps),
        Command::Corpus { input, seed } => {
            let mut cfg = match input {
                Some(p) => CorpusConfig::read(p)?,
                None => CorpusConfig::shipped(),
            };
            if cli.max_n.is_some() || cli.max_vertices.is_some() || cli.max_cells.is_some() {
                cfg.caps = caps;
            }
            let report = commands::cmd_corpus(&cfg, *seed, cli.output.as_deref())?;
            match &cli.output {
                // the manifest is on disk; keep stdout short
                Some(dir) => Ok(Report {
                    report: json!({
                        "manifest": dir.join("manifest.json"),
                        "summary": report.report["summary"],
                    }),
                    ..report
                }),
                None => Ok(report),
            }
        }
        Command::Generate { input, seed } => {
            let mut spec: GeneratorSpec = serde_json::from_str(&fs::read_to_string(input)?)?;
            if let Some(s) = seed {
                spec.seed = *s;
            }
            let family = generate(&spec, &caps)?;
            let doc: serde_json::Value = serde_json::from_str(&family_to_json(&family))?;
            Ok(Report {
                command: "generate".into(),
                status: Status::Ok,
                error: None,
                report: json!({ "spec": spec, "family": doc }),
            })
        }
    }
}

fn emit(report: &Report, output: Option<&Path>, corpus: bool) -> std::io::Result<()> {
    match output {
        Some(path) if !corpus => fs::write(path, report.to_json() + "\n"),
        _ => {
            println!("{}", report.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TOPOHELLY_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::UsageError.exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let Format::Json = cli.format;
    let name = cli.command.name();
    let report = run(&cli).unwrap_or_else(|e: Error| {
        log::error!("{name}: {e}");
        Report::from_error(name, &e)
    });
    if let Err(e) = emit(&report, cli.output.as_deref(), name == "corpus") {
        eprintln!("cannot write the report: {e}");
        return ExitCode::from(Status::UsageError.exit_code() as u8);
    }
    ExitCode::from(report.exit_code() as u8)
}
