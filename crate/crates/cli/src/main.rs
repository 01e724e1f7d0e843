use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use partreg_cli::config::JobConfig;
use partreg_cli::{jobs, CliError, Format, Output};

#[derive(Parser)]
#[command(name = "partreg", version, about = "Verify semigroup instances, compute fp sets, and run bounded Ramsey searches")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Both, global = true)]
    format: Format,
    /// Overrides the job file's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the instance's axioms and catalog on a finite pool.
    Verify { config: PathBuf },
    /// Compute fp^Σ(ā), optionally minus a subsemigroup.
    Fp {
        config: PathBuf,
        /// Report only the number of members.
        #[arg(long)]
        count_only: bool,
    },
    /// Search for a monochromatic structure under a coloring.
    Search { config: PathBuf },
    /// Compute a Ramsey-type threshold with certificates.
    Bound { config: PathBuf },
    /// Analyse a finite semigroup table, or a generated family with --family.
    Algebra {
        #[arg(required_unless_present = "family")]
        table: Option<PathBuf>,
        #[arg(long, conflicts_with = "table")]
        family: Option<PathBuf>,
    },
}

impl Cli {
    fn job(&self, path: &Path) -> Result<JobConfig, CliError> {
        let mut cfg = JobConfig::load(path)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.max_nodes {
            cfg.limits.max_nodes = n;
        }
        if let Some(t) = self.timeout_ms {
            cfg.limits.timeout_ms = t;
        }
        if let Some(p) = self.parallelism {
            cfg.limits.parallelism = p;
        }
        cfg.limits.to_limits()?;
        Ok(cfg)
    }

    fn run(&self, out: &mut Output) -> Result<u8, CliError> {
        let dir = |p: &Path| p.parent().map(Path::to_path_buf).unwrap_or_default();
        match &self.command {
            Command::Verify { config } => jobs::verify(&self.job(config)?, &dir(config), out),
            Command::Fp { config, count_only } => jobs::fp(&self.job(config)?, &dir(config), *count_only, out),
            Command::Search { config } => jobs::search(&self.job(config)?, &dir(config), out),
            Command::Bound { config } => jobs::bound(&self.job(config)?, out),
            Command::Algebra { family: Some(config), .. } => jobs::algebra_family(&self.job(config)?, out),
            Command::Algebra { table: Some(table), .. } => jobs::algebra_table(table, out),
            Command::Algebra { .. } => unreachable!("clap requires a table or --family"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr();
    let mut out = Output::new(cli.format, &mut stdout, &mut stderr);
    let code = cli.run(&mut out).unwrap_or_else(|e| {
        let _ = out.note(&format!("error: {e}"));
        e.exit_code()
    });
    ExitCode::from(code)
}
