use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use semigroups::cli::{
    self, cmd_check, cmd_construct, cmd_dominion, cmd_eggbox, cmd_reproduce, CheckFlags,
    ConstructKind, RunReport,
};
use semigroups::pseudo;

/// Finite semigroup toolbox: dominions, zigzag certificates, Green's
/// structure, pseudovariety checks, and enlargement constructions.
#[derive(Parser)]
#[command(name = "sgtool", version)]
struct Cli {
    /// Emit the full JSON run report instead of the human summary
    #[arg(long, global = true)]
    json: bool,
    /// Seed for corpus generation in property suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run pseudovariety and structure predicates on a semigroup
    Check {
        /// Semigroup file or catalog name (@b2, @y, @c3, @rees49, @trivial)
        input: String,
        /// every regular D-class is a subsemigroup
        #[arg(long)]
        ds: bool,
        /// (exf)^(w+1) = exf with e = t^w, f = z^w
        #[arg(long)]
        v1: bool,
        /// exf(ef)^w = exf
        #[arg(long)]
        v2: bool,
        /// (ef)^w exf = exf
        #[arg(long)]
        v3: bool,
        /// x^3 = x^2, xyx = x^2y^2 = y^2x^2
        #[arg(long)]
        vy: bool,
        /// completely regular
        #[arg(long)]
        cr: bool,
        /// completely simple
        #[arg(long)]
        cs: bool,
        /// completely 0-simple
        #[arg(long)]
        c0s: bool,
        /// Check a pseudoidentity given in textual syntax, e.g.
        /// "(exf)^w+1 = exf" or "xyx = xxyy" (repeatable)
        #[arg(long = "identity")]
        identities: Vec<String>,
        /// Assignment budget for identity checks
        #[arg(long, default_value_t = pseudo::DEFAULT_BUDGET)]
        cap: u128,
    },
    /// Compute Dom(U, S) and optionally a zigzag certificate
    Dominion {
        input: String,
        /// Comma-separated 0-based element indices, or `all`
        #[arg(long)]
        subset: String,
        /// Element to extract a certificate for
        #[arg(long)]
        witness: Option<usize>,
        /// Restrict certificate factors to these elements
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Run one of the semigroup constructions and write its artifacts
    Construct {
        kind: Kind,
        /// Input file or catalog name (@b2rees, @rees49, @fig2, @q3a3)
        input: String,
        /// Output directory for artifact files
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the built-in verification suite and print a pass/fail table
    Reproduce {
        /// Skip the heavyweight 4-state enlargement pipeline
        #[arg(long)]
        quick: bool,
    },
    /// Emit the eggbox picture of a semigroup as Graphviz DOT
    Eggbox {
        input: String,
        /// Restrict to one D-class (canonical numbering)
        #[arg(long)]
        dclass: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rees,
    Cs0,
    Enlarge,
    CycleModify,
}

impl From<Kind> for ConstructKind {
    fn from(k: Kind) -> ConstructKind {
        match k {
            Kind::Rees => ConstructKind::Rees,
            Kind::Cs0 => ConstructKind::Cs0,
            Kind::Enlarge => ConstructKind::Enlarge,
            Kind::CycleModify => ConstructKind::CycleModify,
        }
    }
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("serializable")
        );
    } else {
        println!("# {}", report.command);
        println!("inputs sha256: {}", report.inputs_digest);
        println!(
            "{}",
            serde_json::to_string_pretty(&report.results).expect("serializable")
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            ref input,
            ds,
            v1,
            v2,
            v3,
            vy,
            cr,
            cs,
            c0s,
            ref identities,
            cap,
        } => {
            let flags = CheckFlags {
                ds,
                v1,
                v2,
                v3,
                vy,
                cr,
                cs,
                c0s,
                identities: identities.clone(),
            };
            cmd_check(input, flags, cap).map(|(r, c)| {
                emit(&r, cli.json);
                c
            })
        }
        Command::Dominion {
            ref input,
            ref subset,
            witness,
            ref restrict,
        } => cmd_dominion(input, subset, witness, restrict.as_deref()).map(|(r, c)| {
            emit(&r, cli.json);
            c
        }),
        Command::Construct {
            kind,
            ref input,
            ref out,
        } => cmd_construct(kind.into(), input, out).map(|(r, c)| {
            emit(&r, cli.json);
            c
        }),
        Command::Reproduce { quick } => cmd_reproduce(quick, cli.seed).map(|(r, c)| {
            if cli.json {
                emit(&r, true);
            } else {
                print!("{}", cli::render_reproduce_table(&r));
            }
            c
        }),
        Command::Eggbox { ref input, dclass } => cmd_eggbox(input, dclass).map(|(dot, c)| {
            print!("{dot}");
            c
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for(&err) as u8)
        }
    }
}
