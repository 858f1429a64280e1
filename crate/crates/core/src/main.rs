//! `tcft`: runs the identity suites and dumps bases, kernels and operators.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or the
//! engine errors, and 2 for configuration and usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use cutoff_tcft::graph::parse_chain;
use cutoff_tcft::verify::{self, catalog, CutoffSpec, Report, RunConfig};
use cutoff_tcft::Error;

#[derive(Parser)]
#[command(name = "tcft", version, about = "Cutoff heat-kernel TCFT verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected check groups and print the report.
    Suite(Common),
    /// List the eigenform basis of the cutoff space.
    Basis(Common),
    /// Print the cutoff heat kernel term by term.
    Kernel(Common),
    /// Integrate a catalog chain, or a chain file, to an operator.
    Contract {
        /// Catalog name or path to a chain file.
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Functoriality, identity, braiding, monoidality and cross terms.
    ComposeCheck(Common),
    /// Boundary identity on cubes.
    ChainmapCheck(Common),
    /// Eigenvalue-split sums and the overlapping-sum demonstration.
    AdditivityCheck(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override its fields.
    #[arg(long, env = "TCFT_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    /// Maximum eigenvalue (`2`) or an explicit set (`0,2`).
    #[arg(long)]
    cutoff: Option<String>,
    /// `DROP` or `DROP,COMPARE`.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated check groups; empty selects none.
    #[arg(long)]
    catalog: Option<String>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(d) = self.dim {
            c.dim = d;
        }
        if let Some(text) = &self.cutoff {
            c.cutoff = CutoffSpec::parse(text)?;
        }
        if let Some(text) = &self.tol {
            let bad = || Error::Config(format!("invalid tolerance `{text}`"));
            let parts: Vec<f64> = text
                .split(',')
                .map(|w| w.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            match parts[..] {
                [drop] => c.tolerances.drop = drop,
                [drop, compare] => {
                    c.tolerances.drop = drop;
                    c.tolerances.compare = compare;
                }
                _ => return Err(bad()),
            }
        }
        if let Some(j) = self.jobs {
            c.jobs = j;
        }
        if let Some(out) = &self.out {
            c.out = Some(out.clone());
        }
        if let Some(text) = &self.catalog {
            c.catalog = Some(
                text.split(',')
                    .map(str::trim)
                    .filter(|g| !g.is_empty())
                    .map(String::from)
                    .collect(),
            );
        }
        c.validate()?;
        Ok(c)
    }
}

/// Errors the user fixes by changing the invocation.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::Parse { .. }
            | Error::Io { .. }
            | Error::UnknownTarget(_)
            | Error::InvalidManifold(_)
            | Error::UnrealizedEigenvalue { .. }
    )
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn suite(common: &Common, groups: Option<&[&str]>) -> Result<bool, Error> {
    let config = common.config()?;
    let started = Instant::now();
    let report: Report = match groups {
        Some(gs) => verify::run_groups(&config, gs.iter().copied().filter(|g| config.selects(g)))?,
        None => verify::run_suite(&config)?,
    };
    for r in &report.records {
        eprintln!("{:>10.3} ms  {}", r.runtime.as_secs_f64() * 1e3, r.id);
    }
    eprintln!("total {:.3} s", started.elapsed().as_secs_f64());
    emit(config.out.as_deref(), &report.render())?;
    Ok(report.passed())
}

fn dump(common: &Common, make: impl FnOnce(&RunConfig) -> Result<String, Error>) -> Result<bool, Error> {
    let config = common.config()?;
    emit(config.out.as_deref(), &make(&config)?)?;
    Ok(true)
}

fn contract(config: &RunConfig, target: &str) -> Result<String, Error> {
    if catalog::NAMED_CHAINS.contains(&target) {
        return verify::dump_operator(config, target);
    }
    let path = Path::new(target);
    if !path.exists() {
        return Err(Error::UnknownTarget(target.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: target.to_string(),
        message: e.to_string(),
    })?;
    verify::dump_chain(config, target, &parse_chain(target, &text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Suite(c) => suite(c, None),
        Command::ComposeCheck(c) => suite(
            c,
            Some(&["functoriality", "identity", "braiding", "monoidality", "cross"]),
        ),
        Command::ChainmapCheck(c) => suite(c, Some(&["chain-map"])),
        Command::AdditivityCheck(c) => suite(c, Some(&["additivity", "non-functoriality"])),
        Command::Basis(c) => dump(c, |cfg| verify::dump_basis(cfg.dim, &cfg.cutoff_set()?)),
        Command::Kernel(c) => dump(c, |cfg| verify::dump_kernel(cfg.dim, &cfg.cutoff_set()?)),
        Command::Contract { target, common } => dump(common, |cfg| contract(cfg, target)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tcft: {e}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
