//! Verification suite: configuration, catalog, checks, reports and dumps.

pub mod catalog;
mod checks;
mod config;
mod report;

use std::fmt::Write as _;

pub use checks::Context;
pub use config::{CutoffSpec, RunConfig, ToleranceSpec, GROUPS};
pub use report::{CheckRecord, Kind, Report};

use crate::engine::integrate_chain;
use crate::error::{Error, Result};
use crate::graph::AffineCubicalChain;
use crate::kernel::cutoff_kernel;
use crate::spectral::{Basis, EigenvalueSet};

type Group = fn(&Context) -> Result<Vec<CheckRecord>>;

fn group(name: &str) -> Group {
    match name {
        "kernel" => checks::kernel,
        "propagator" => checks::propagator_closed,
        "semigroup" => checks::semigroup,
        "functoriality" => checks::functoriality,
        "identity" => checks::identity,
        "braiding" => checks::braiding,
        "chain-map" => checks::chain_map,
        "monoidality" => checks::monoidality,
        "cross" => checks::cross,
        "additivity" => checks::additivity,
        "non-functoriality" => checks::non_functoriality,
        "contraction" => checks::contraction,
        other => unreachable!("unlisted group {other}"),
    }
}

fn context(config: &RunConfig) -> Result<Context> {
    config.validate()?;
    Context::new(
        config.dim,
        config.cutoff_set()?,
        config.tolerances.drop,
        config.tolerances.compare,
    )
}

/// Runs `f` on a pool of `jobs` workers; results do not depend on `jobs`.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

/// Runs the selected groups in their fixed order. A group that errors
/// out is recorded and the rest still run.
pub fn run_suite(config: &RunConfig) -> Result<Report> {
    run_groups(config, GROUPS.iter().copied().filter(|g| config.selects(g)))
}

/// Runs the named groups, in the order given.
pub fn run_groups<'a>(config: &RunConfig, groups: impl IntoIterator<Item = &'a str>) -> Result<Report> {
    let ctx = context(config)?;
    let groups: Vec<&str> = groups.into_iter().collect();
    if let Some(g) = groups.iter().find(|g| !GROUPS.contains(g)) {
        return Err(Error::Config(format!("unknown check group `{g}`")));
    }
    let mut report = Report {
        header: format!(
            "dim={} cutoff={} drop={:e} compare={:e} groups={}",
            ctx.dim,
            ctx.cutoff,
            ctx.drop,
            ctx.compare,
            groups.join(",")
        ),
        ..Report::default()
    };
    with_jobs(config.jobs, || {
        for g in groups {
            match group(g)(&ctx) {
                Ok(records) => report.records.extend(records),
                Err(e) => report.errors.push(format!("{g}: {e}")),
            }
        }
    })?;
    Ok(report)
}

/// One row per basis form: index, label, eigenvalue, degree.
pub fn dump_basis(dim: usize, cutoff: &EigenvalueSet) -> Result<String> {
    let basis = Basis::shared(dim, cutoff)?;
    let mut s = format!("basis dim={dim} cutoff={cutoff} len={}\n", basis.len());
    for (i, b) in basis.forms().iter().enumerate() {
        let _ = writeln!(s, "{i} {b} lambda={} degree={}", b.eigenvalue(), b.degree());
    }
    Ok(s)
}

/// The cutoff kernel in the time variable `t0`, one term per line.
pub fn dump_kernel(dim: usize, cutoff: &EigenvalueSet) -> Result<String> {
    let k = cutoff_kernel(dim, cutoff, 0)?;
    Ok(format!(
        "kernel dim={dim} cutoff={cutoff} terms={}\n{}",
        k.len(),
        k.as_metform()
    ))
}

/// Operator of a named catalog chain.
pub fn dump_operator(config: &RunConfig, target: &str) -> Result<String> {
    dump_chain(config, target, &catalog::named_chain(target)?)
}

/// Operator of an arbitrary chain, headed by `name`.
pub fn dump_chain(config: &RunConfig, name: &str, chain: &AffineCubicalChain) -> Result<String> {
    config.validate()?;
    let cutoff = config.cutoff_set()?;
    let op = with_jobs(config.jobs, || integrate_chain(chain, config.dim, &cutoff))??;
    Ok(format!("target {name}\n{}", op.dump()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max: u32, groups: &[&str]) -> RunConfig {
        RunConfig {
            cutoff: CutoffSpec::up_to(max),
            catalog: Some(groups.iter().map(|g| g.to_string()).collect()),
            ..RunConfig::default()
        }
    }

    #[test]
    fn empty_catalog_gives_an_empty_passing_report() {
        let r = run_suite(&config(2, &[])).unwrap();
        assert!(r.records.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn basis_dump_lists_every_form() {
        let s = dump_basis(2, &EigenvalueSet::up_to(2, 1).unwrap()).unwrap();
        assert_eq!(s.lines().count(), 21);
    }

    #[test]
    fn harmonic_kernel_dump_is_rate_free() {
        let s = dump_kernel(2, &EigenvalueSet::up_to(2, 0).unwrap()).unwrap();
        assert!(s.starts_with("kernel dim=2 cutoff={0} terms=4\n"));
        assert!(!s.contains("exp("));
    }

    #[test]
    fn identity_dump_is_diagonal() {
        let s = dump_operator(&config(1, &[]), "identity").unwrap();
        let entries: Vec<&str> = s.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(entries.len(), 20);
        assert!(entries.iter().all(|l| l.ends_with(": 1.0")));
    }

    #[test]
    fn kernel_group_passes_on_small_cutoff() {
        let r = run_suite(&config(1, &["kernel", "propagator"])).unwrap();
        assert!(r.passed(), "{}", r.render());
    }
}
