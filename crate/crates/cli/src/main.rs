use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orbicat_cli::commands::{CatKind, Command, CommandError, ConnectedMode};
use orbicat_cli::{run_command, Workspace};

/// Finite models of group actions and orbifold groupoids: equivariant
/// invariants, Morita equivalence, Hilsum-Skandalis bibundles and
/// Lusternik-Schnirelmann category.
#[derive(Parser)]
#[command(name = "orbicat", version, about)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Append a timing section (reports stop being byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Verb,
}

#[derive(Args)]
struct FileArg {
    /// Workspace file.
    file: PathBuf,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and validate a workspace file.
    Validate {
        #[command(flatten)]
        file: FileArg,
    },
    /// Orbits, isotropy and the orbit space of an action.
    Orbits {
        #[command(flatten)]
        file: FileArg,
        action: String,
        /// Report only the orbit and isotropy of this point.
        #[arg(long)]
        point: Option<usize>,
    },
    /// Fixed point sets, for one generated subgroup or all subgroups.
    Fixed {
        #[command(flatten)]
        file: FileArg,
        action: String,
        /// Comma-separated generators of the subgroup.
        #[arg(long, value_delimiter = ',')]
        subgroup: Option<Vec<usize>>,
    },
    /// Connectedness verdicts.
    Connected {
        mode: ModeArg,
        #[command(flatten)]
        file: FileArg,
        action: String,
    },
    /// Morita machinery: span checking, factorization and search.
    #[command(subcommand)]
    Morita(MoritaVerb),
    /// The Hilsum-Skandalis bibundle calculus.
    #[command(subcommand)]
    Hs(HsVerb),
    /// Lusternik-Schnirelmann category computations.
    Cat {
        kind: CatArg,
        #[command(flatten)]
        file: FileArg,
        action: String,
        /// Budget for enumerating invariant opens.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Whole-workspace structured report.
    Report {
        #[command(flatten)]
        file: FileArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Gspace,
    Quotient,
    Paths,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatArg {
    #[value(name = "catG")]
    CatG,
    #[value(name = "catGrd")]
    CatGrd,
    #[value(name = "catOrb")]
    CatOrb,
}

#[derive(Subcommand)]
enum MoritaVerb {
    /// Certify both legs of a span as essential equivalences.
    Check {
        #[command(flatten)]
        file: FileArg,
        span: String,
    },
    /// Pronk-Scull factorization of an essential equivalence.
    Factor {
        #[command(flatten)]
        file: FileArg,
        map: String,
    },
    /// Bounded search for a Morita span between two actions.
    Search {
        #[command(flatten)]
        file: FileArg,
        a: String,
        b: String,
        /// Size budget for intermediate groupoids.
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Subcommand)]
enum HsVerb {
    /// The bibundle of an equivariant map.
    FromMap {
        #[command(flatten)]
        file: FileArg,
        map: String,
    },
    /// The inverse bibundle of an essential equivalence.
    Invert {
        #[command(flatten)]
        file: FileArg,
        map: String,
    },
    /// Composition of bibundles (names may refer to maps).
    Compose {
        #[command(flatten)]
        file: FileArg,
        inner: String,
        outer: String,
    },
    /// Global section search on the right anchor.
    Section {
        #[command(flatten)]
        file: FileArg,
        name: String,
    },
    /// Natural conjugacy search for the two homomorphisms of a span.
    Conjugacy {
        #[command(flatten)]
        file: FileArg,
        span: String,
    },
    /// Strictification of a span to a G-map.
    Strictify {
        #[command(flatten)]
        file: FileArg,
        span: String,
    },
    /// Bibundle isomorphism search.
    Iso {
        #[command(flatten)]
        file: FileArg,
        a: String,
        b: String,
    },
}

fn default_budget() -> usize {
    std::env::var("ORBICAT_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64)
}

fn opens_budget() -> usize {
    std::env::var("ORBICAT_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(orbicat::category::DEFAULT_OPENS_BUDGET)
}

fn load(file: &PathBuf) -> Result<Workspace, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {}", file.display(), e))?;
    Workspace::parse(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (file, command) = match &cli.command {
        Verb::Validate { file } => (&file.file, Command::Validate),
        Verb::Orbits {
            file,
            action,
            point,
        } => (
            &file.file,
            Command::Orbits {
                action: action.clone(),
                point: *point,
            },
        ),
        Verb::Fixed {
            file,
            action,
            subgroup,
        } => (
            &file.file,
            Command::Fixed {
                action: action.clone(),
                subgroup: subgroup.clone(),
            },
        ),
        Verb::Connected { mode, file, action } => (
            &file.file,
            Command::Connected {
                mode: match mode {
                    ModeArg::Gspace => ConnectedMode::GSpace,
                    ModeArg::Quotient => ConnectedMode::Quotient,
                    ModeArg::Paths => ConnectedMode::Paths,
                },
                action: action.clone(),
            },
        ),
        Verb::Morita(MoritaVerb::Check { file, span }) => {
            (&file.file, Command::MoritaCheck { span: span.clone() })
        }
        Verb::Morita(MoritaVerb::Factor { file, map }) => {
            (&file.file, Command::MoritaFactor { map: map.clone() })
        }
        Verb::Morita(MoritaVerb::Search { file, a, b, budget }) => (
            &file.file,
            Command::MoritaSearch {
                a: a.clone(),
                b: b.clone(),
                budget: budget.unwrap_or_else(default_budget),
            },
        ),
        Verb::Hs(HsVerb::FromMap { file, map }) => {
            (&file.file, Command::HsFromMap { map: map.clone() })
        }
        Verb::Hs(HsVerb::Invert { file, map }) => {
            (&file.file, Command::HsInvert { map: map.clone() })
        }
        Verb::Hs(HsVerb::Compose { file, inner, outer }) => (
            &file.file,
            Command::HsCompose {
                inner: inner.clone(),
                outer: outer.clone(),
            },
        ),
        Verb::Hs(HsVerb::Section { file, name }) => {
            (&file.file, Command::HsSection { name: name.clone() })
        }
        Verb::Hs(HsVerb::Conjugacy { file, span }) => {
            (&file.file, Command::HsConjugacy { span: span.clone() })
        }
        Verb::Hs(HsVerb::Strictify { file, span }) => {
            (&file.file, Command::HsStrictify { span: span.clone() })
        }
        Verb::Hs(HsVerb::Iso { file, a, b }) => (
            &file.file,
            Command::HsIso {
                a: a.clone(),
                b: b.clone(),
            },
        ),
        Verb::Cat {
            kind,
            file,
            action,
            budget,
        } => (
            &file.file,
            Command::Cat {
                kind: match kind {
                    CatArg::CatG => CatKind::CatG,
                    CatArg::CatGrd => CatKind::CatGrd,
                    CatArg::CatOrb => CatKind::CatOrb,
                },
                action: action.clone(),
                budget: budget.unwrap_or_else(opens_budget),
            },
        ),
        Verb::Report { file } => (&file.file, Command::Report),
    };
    let ws = match load(file) {
        Ok(ws) => ws,
        Err(msg) => {
            eprintln!("error: {}", msg);
            return ExitCode::from(1);
        }
    };
    match run_command(&ws, &command) {
        Ok(mut report) => {
            if cli.timing {
                report.set_timing(format!("{:?}", started.elapsed()));
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json()).expect("reports serialize")
                );
            } else {
                print!("{}", report.text());
            }
            ExitCode::SUCCESS
        }
        Err(CommandError::Internal(msg)) => {
            eprintln!("internal error: {}", msg);
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(1)
        }
    }
}
