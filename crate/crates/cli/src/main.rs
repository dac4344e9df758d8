mod commands;
mod config;
mod error;
mod numbers;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Ctx;
use error::CliResult;
use numbers::{parse_count, parse_stage, parse_table, Rows};

#[derive(Parser)]
#[command(name = "rq", version, about = "Rank-one subshift words, Möbius sieving and correlation-sum experiments")]
struct Cli {
    /// Worker threads for internal parallelism (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct CacheArgs {
    /// Möbius cache file (overrides RQ_CACHE_DIR and the config).
    #[arg(long)]
    pub cache_path: Option<PathBuf>,
    /// Sieve segment length.
    #[arg(long, value_parser = parse_count, default_value_t = rq_core::mobius::DEFAULT_SEGMENT)]
    pub segment: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize v_n and report its parameters.
    BuildWord {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_stage)]
        stage: Option<usize>,
        /// Write the word bit-packed, first symbol in the low bit.
        #[arg(long)]
        emit_bits: Option<PathBuf>,
        /// Declared bound for the boundedness check.
        #[arg(long, value_parser = parse_count)]
        bound: Option<u64>,
    },
    /// Create or reuse the Möbius cache.
    MobiusCache {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Mertens sums M(N) and |M(N)|/N.
    Mertens {
        #[arg(long = "N", visible_alias = "n", value_delimiter = ',', value_parser = parse_count, required = true)]
        n: Vec<u64>,
        /// Also report |M(N)| / N^(1/2 + ε).
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Σ_{n≤N} μ(n+1)^{e_1} μ(n+2)^{e_2} ··· μ(n+k)^{e_k}
    Chowla {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u8>,
        #[arg(long = "N", visible_alias = "n", value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Short-interval progression double sum.
    KlrEval {
        #[arg(long)]
        q: u64,
        #[arg(long = "L", visible_alias = "l", value_parser = parse_count)]
        l: u64,
        #[arg(long = "N", visible_alias = "n", value_parser = parse_count)]
        n: u64,
        #[arg(long, value_parser = parse_count, conflicts_with = "search")]
        z: Option<u64>,
        /// `exhaustive` or `stride:K`.
        #[arg(long)]
        search: Option<rq_core::klr::OffsetSearch>,
        /// Decimal, scientific or `a/b`; parsed exactly.
        #[arg(long)]
        epsilon: Option<rq_core::klr::Epsilon>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Residue-class approximation of building blocks.
    AcccCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        k_set: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        n_targets: Vec<u64>,
    },
    /// Odometer-factor clauses for fixed stages.
    OdometerCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_stage)]
        l: usize,
        #[arg(long, value_parser = parse_stage)]
        m: usize,
        #[arg(long, value_parser = parse_stage)]
        n: usize,
        #[arg(long, value_parser = parse_count)]
        k: u64,
    },
    /// Emit 𝒦_m parameters as a params JSON.
    KatokGen {
        #[arg(long, value_parser = parse_count)]
        m: u64,
        /// Cutting parameters; a single value is repeated.
        #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
        r_schedule: Vec<u64>,
        /// Rows `t_{n,1..m}` separated by `;`; a single row is repeated.
        #[arg(long, value_parser = parse_table)]
        t_table: Rows,
        #[arg(long, value_parser = parse_stage)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth and change-point conditions per stage.
    CondCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_stage)]
        horizon: Option<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        m_candidates: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        epsilon: Vec<f64>,
        #[arg(long, value_parser = parse_stage)]
        tail_window: Option<usize>,
        /// JSON report file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Correlation sums of μ along the canonical point.
    SarnakSum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        offsets: Vec<i64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        checkpoints: Vec<u64>,
        #[arg(long, value_parser = parse_count)]
        sieve_limit: Option<u64>,
        /// CSV file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| error::schema(format!("--threads: {e}")))?;
    }
    let ctx = Ctx { json: cli.json };
    match cli.command {
        Command::BuildWord { config, stage, emit_bits, bound } => {
            commands::words::build_word(&ctx, &config, stage, emit_bits.as_deref(), bound)
        }
        Command::MobiusCache { limit, cache } => commands::arith::mobius_cache(&ctx, limit, &cache),
        Command::Mertens { n, epsilon, cache } => commands::arith::mertens(&ctx, &n, epsilon, &cache),
        Command::Chowla { exponents, n, cache } => commands::arith::chowla(&ctx, &exponents, n, &cache),
        Command::KlrEval { q, l, n, z, search, epsilon, cache } => {
            commands::arith::klr_eval(q, l, n, z, search, epsilon, &cache)
        }
        Command::AcccCheck { config, epsilon, k_set, n_targets } => {
            commands::accc::accc_check(&ctx, &config, epsilon, k_set, n_targets)
        }
        Command::OdometerCheck { config, l, m, n, k } => commands::accc::odometer_check(&ctx, &config, l, m, n, k),
        Command::KatokGen { m, r_schedule, t_table, depth, out } => {
            commands::katok::katok_gen(m, r_schedule, t_table.0, depth, out.as_deref())
        }
        Command::CondCheck { config, horizon, m_candidates, epsilon, tail_window, out, csv } => {
            commands::katok::cond_check(&ctx, &config, horizon, m_candidates, epsilon, tail_window, out.as_deref(), csv.as_deref())
        }
        Command::SarnakSum { config, offsets, checkpoints, sieve_limit, out, cache } => {
            commands::sarnak::sarnak_sum(&ctx, &config, offsets, checkpoints, sieve_limit, out.as_deref(), &cache)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rq: {e}");
            e.exit_code()
        }
    }
}
