use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Failure;

#[derive(Parser)]
#[command(name = "sigmalab", version, about = "Lattices of topologies and vector topologies over finite fields")]
struct Cli {
    /// Worker threads for data-parallel steps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// A finite field `p,k` and a dimension.
#[derive(Args, Clone, Copy)]
pub struct SpaceArgs {
    /// Field as `p,k` for GF(p^k).
    #[arg(long, value_parser = parse_field)]
    pub field: (u32, u32),
    #[arg(long)]
    pub dim: usize,
}

fn parse_field(s: &str) -> Result<(u32, u32), String> {
    let (p, k) = s.split_once(',').ok_or("expected p,k")?;
    let p = p.trim().parse().map_err(|_| format!("bad characteristic {p:?}"))?;
    let k = k.trim().parse().map_err(|_| format!("bad degree {k:?}"))?;
    Ok((p, k))
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Census,
    Image,
}

#[derive(Subcommand)]
enum Command {
    /// Count topologies on n points.
    CountTop {
        #[arg(long)]
        n: usize,
        /// Permit n = 7.
        #[arg(long)]
        allow_large: bool,
    },
    /// Write every topology on n points as JSON lines.
    EnumTop {
        #[arg(long)]
        n: usize,
        /// Output file, `-` for stdout.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        allow_large: bool,
    },
    /// Realized atom types per class pair against the allowed cells.
    TypeTable {
        #[arg(long)]
        n: usize,
    },
    /// Automorphisms of Σ(n), compared with the maps C^ε∘θ_*.
    AutSigma {
        #[arg(long)]
        n: usize,
    },
    /// Recover (θ, flag) from a lattice table over Σ(n).
    Hartmanis {
        #[arg(long)]
        table: PathBuf,
    },
    /// Vector topologies of a space.
    VtCensus {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "image")]
        mode: Mode,
        /// Report counts without listing the topologies.
        #[arg(long)]
        counts_only: bool,
    },
    /// Properties of the 𝔖/𝔗 correspondence.
    GaloisVerify {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Bijection census and the group (X ⋊ ΓL) × ℤ/2 acting on Σ(X).
    TheoremB {
        #[command(flatten)]
        space: SpaceArgs,
        /// Seed for sampled products on large groups.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded round trips of C^ε∘(φ+y₀)_* on Σ(F₂²).
    #[command(name = "theorem-a-e2e")]
    TheoremAE2e {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Coordinatize a subspace-lattice table.
    Ftpg {
        #[arg(long)]
        table: PathBuf,
    },
    /// From a lattice automorphism of τ(X) to a semilinear map.
    TheoremC {
        #[arg(long)]
        table: PathBuf,
        /// Do not insist that Φ fixes the discrete topology up front.
        #[arg(long)]
        skip_hausdorff_check: bool,
    },
    /// Hasse diagram of a JSON-lines file of topologies.
    ExportDot {
        #[arg(long)]
        input: PathBuf,
        /// Output file, stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write table files for `hartmanis`, `ftpg` and `theorem-c`.
    GenTable {
        #[command(subcommand)]
        kind: GenTable,
    },
}

#[derive(Subcommand)]
pub enum GenTable {
    /// Table of C^flag∘θ_* over Σ(n).
    Sigma {
        /// Images θ(0), θ(1), ...
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<usize>,
        #[arg(long)]
        complement: bool,
    },
    /// Subspace table of x ↦ M·ψ(x).
    Subspace {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Table of φ_* on the vector topologies.
    Tau {
        #[command(flatten)]
        map: MapArgs,
    },
}

#[derive(Args, Clone)]
pub struct MapArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Matrix rows separated by `;`, entries by `,` (identity when absent).
    #[arg(long)]
    pub matrix: Option<String>,
    /// ψ = x ↦ x^(p^e).
    #[arg(long, default_value_t = 0)]
    pub frobenius: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = match cli.command {
        Command::CountTop { n, allow_large } => commands::count_top(n, allow_large),
        Command::EnumTop { n, out, allow_large } => commands::enum_top(n, &out, allow_large),
        Command::TypeTable { n } => commands::type_table(n),
        Command::AutSigma { n } => commands::aut_sigma(n),
        Command::Hartmanis { table } => commands::hartmanis(&table),
        Command::VtCensus { space, mode, counts_only } => commands::vt_census(space, mode, counts_only),
        Command::GaloisVerify { space } => commands::galois_verify(space),
        Command::TheoremB { space, seed } => commands::theorem_b(space, seed),
        Command::TheoremAE2e { seed, trials } => commands::theorem_a(seed, trials),
        Command::Ftpg { table } => commands::ftpg(&table),
        Command::TheoremC { table, skip_hausdorff_check } => commands::theorem_c(&table, !skip_hausdorff_check),
        Command::ExportDot { input, out } => commands::export_dot(&input, out.as_deref()),
        Command::GenTable { kind } => commands::gen_table(kind),
    };
    let code = match outcome {
        Ok(Some(report)) => {
            report::emit(&report.to_json());
            if report.pass {
                0
            } else {
                1
            }
        }
        Ok(None) => 0,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
