//! Acceptance criteria at desk scale (`T²`, `Λ ≤ 2`). Runs without the
//! libtest harness so that the `PASS` or `FAIL` line of every criterion,
//! with its observed residual and pinned bound, is always printed.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::OnceLock;

use cutoff_tcft::engine::integrate_chain;
use cutoff_tcft::spectral::{Basis, EigenvalueSet};
use cutoff_tcft::verify::{catalog, run_suite, CheckRecord, Kind, Report, RunConfig};

use common::Grid;

/// Coefficient-exact identities.
const EXACT: f64 = 1e-12;
/// Numerical comparisons against an oracle.
const COMPARE: f64 = 1e-9;
/// Grid quadrature against the contraction engine, relative.
const QUADRATURE: f64 = 1e-6;

/// The default suite (`d = 2`, `Λ = 2`), run once and shared.
fn report() -> &'static Report {
    static REPORT: OnceLock<Report> = OnceLock::new();
    REPORT.get_or_init(|| run_suite(&RunConfig::default()).expect("default config is valid"))
}

fn records(prefix: &str) -> Vec<&'static CheckRecord> {
    report().records.iter().filter(|r| r.id.starts_with(prefix)).collect()
}

fn worst(rs: &[&CheckRecord]) -> f64 {
    rs.iter().map(|r| r.residual).fold(0.0, f64::max)
}

struct Verdict {
    what: String,
    ok: bool,
    residual: f64,
    bound: f64,
}

fn verdict(what: impl Into<String>, ok: bool, residual: f64, bound: f64) -> Verdict {
    Verdict {
        what: what.into(),
        ok,
        residual,
        bound,
    }
}

/// The cutoffs each kernel identity is required at.
fn required_cutoffs() -> [&'static str; 4] {
    ["{0}", "{1}", "{0,1}", "{0,1,2}"]
}

fn covers_cutoffs(rs: &[&CheckRecord], stem: &str) -> bool {
    required_cutoffs()
        .iter()
        .all(|a| rs.iter().any(|r| r.id == format!("{stem}{a}")))
}

fn criterion_01_heat_kernel_identities() -> Verdict {
    let stems = [
        "kernel-closed",
        "kernel-coclosed",
        "kernel-laplacian-balance",
        "l-kernel-exactness",
    ];
    let rs: Vec<_> = stems.iter().flat_map(|s| records(s)).collect();
    let covered = stems.iter().all(|s| covers_cutoffs(&records(s), s));
    let r = worst(&rs);
    verdict(
        "kernel closed, coclosed, heat equation, L exactness",
        covered && r < EXACT,
        r,
        EXACT,
    )
}

fn criterion_02_propagator_closed() -> Verdict {
    let rs = records("propagator-closed");
    let r = worst(&rs);
    verdict(
        "propagator is closed",
        covers_cutoffs(&rs, "propagator-closed") && r < EXACT,
        r,
        EXACT,
    )
}

fn criterion_03_semigroup() -> Verdict {
    let rs = records("semigroup");
    let ids: BTreeSet<&str> = rs.iter().map(|r| r.id.as_str()).collect();
    let both = ids.contains("semigroup[s=0.1,t=0.2]") && ids.contains("semigroup[s=0.5,t=0.5]");
    let r = worst(&rs);
    verdict(
        "kernel convolution matches matrix exponential",
        both && r < COMPARE,
        r,
        COMPARE,
    )
}

fn criterion_04_functoriality() -> Verdict {
    let rs = records("functoriality");
    let trivalent = rs.iter().any(|r| r.id.contains("merge") || r.id.contains("split"));
    let r = worst(&rs);
    let ok = rs.len() >= 5 && trivalent && r < COMPARE;
    verdict(format!("gluing is composition on {} cases", rs.len()), ok, r, COMPARE)
}

fn criterion_05_identity_and_braiding() -> Verdict {
    let rs: Vec<_> = records("identity").into_iter().chain(records("braiding")).collect();
    let ids: BTreeSet<&str> = rs.iter().map(|r| r.id.as_str()).collect();
    let all = ["identity[1]", "identity[2]", "braiding[1,1]", "braiding[2,1]"]
        .iter()
        .all(|i| ids.contains(i));
    let r = worst(&rs);
    verdict("identity and braiding are exact", all && r == 0.0, r, 0.0)
}

fn criterion_06_chain_map() -> Verdict {
    let rs = records("chain-map");
    let cubes: BTreeSet<bool> = rs.iter().map(|r| r.id.contains("square")).collect();
    let r = worst(&rs);
    verdict(
        "boundary identity on 1- and 2-cubes",
        cubes.len() == 2 && r < COMPARE,
        r,
        COMPARE,
    )
}

fn criterion_07_cross_terms_vanish() -> Verdict {
    let rs = records("cross-vanishing");
    let r = worst(&rs);
    let has_pair = rs.iter().any(|r| r.id.starts_with("cross-vanishing[1|2]"))
        && rs.iter().any(|r| r.id.starts_with("cross-vanishing[2|1]"));
    verdict(
        format!("{} mixed composites vanish", rs.len()),
        has_pair && r < EXACT,
        r,
        EXACT,
    )
}

fn criterion_08_additivity() -> Verdict {
    let singles = records("additivity{1}+{2}");
    let halves = records("additivity{0,1}+{2}");
    let rs: Vec<_> = singles.iter().chain(&halves).copied().collect();
    let r = worst(&rs);
    let ok = !singles.is_empty() && !halves.is_empty() && r < EXACT;
    verdict("split cutoffs sum to the joint cutoff", ok, r, EXACT)
}

fn criterion_09_non_functoriality() -> Verdict {
    let rs = records("non-functoriality");
    let r = worst(&rs);
    let ok = !rs.is_empty()
        && rs
            .iter()
            .all(|c| c.kind == Kind::ExpectedFailureDemonstration && c.passed && c.residual < EXACT);
    verdict("overlapping sum composes to twice the composite", ok, r, EXACT)
}

/// The merge star at fixed lengths against grid quadrature: each input is
/// heat-flowed along its edge, the two are wedged at the internal vertex
/// and the product flows along the outgoing edge.
fn criterion_10_star_contraction_against_quadrature() -> Verdict {
    let cutoff = EigenvalueSet::new(2, [0, 1]).unwrap();
    let lengths = [0.3, 0.4, 0.5];
    let op = integrate_chain(&catalog::point(catalog::star_merge(), &lengths), 2, &cutoff).unwrap();
    let space = Basis::new(2, &cutoff).unwrap();
    let grid = Grid::new(2, 32);
    let flowed = |t: f64| -> Vec<_> {
        space
            .forms()
            .iter()
            .map(|b| grid.heat(&space, &grid.sample(&cutoff_tcft::spectral::SpectralForm::basis(*b)), t))
            .collect()
    };
    let (left, right) = (flowed(lengths[0]), flowed(lengths[1]));
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            let out = grid.heat(&space, &grid.wedge(a, b), lengths[2]);
            for (k, expect) in grid.coordinates(&space, &out).into_iter().enumerate() {
                let got = op.get(&[i as u32, j as u32], &[k as u32]);
                diff = diff.max((got - expect).abs());
                scale = scale.max(expect.abs());
            }
        }
    }
    let r = diff / scale;
    verdict(
        "merge star matches 32x32 grid quadrature",
        scale > 0.0 && r < QUADRATURE,
        r,
        QUADRATURE,
    )
}

fn suite_bytes(jobs: usize, out: &Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_tcft"))
        .args(["suite", "--jobs", &jobs.to_string(), "--out"])
        .arg(out)
        .env_remove("TCFT_CONFIG")
        .stderr(Stdio::null())
        .status()
        .expect("tcft runs");
    assert!(status.success(), "suite exited with {status}");
    std::fs::read(out).expect("report written")
}

fn criterion_11_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = [1, 1, 1, 4]
        .iter()
        .enumerate()
        .map(|(i, &jobs)| suite_bytes(jobs, &dir.path().join(format!("report{i}.txt"))))
        .collect();
    let differing = runs.iter().filter(|r| **r != runs[0]).count();
    verdict(
        "report bytes agree over three runs and --jobs 1 vs 4",
        differing == 0,
        differing as f64,
        0.0,
    )
}

fn main() {
    let criteria: [fn() -> Verdict; 11] = [
        criterion_01_heat_kernel_identities,
        criterion_02_propagator_closed,
        criterion_03_semigroup,
        criterion_04_functoriality,
        criterion_05_identity_and_braiding,
        criterion_06_chain_map,
        criterion_07_cross_terms_vanish,
        criterion_08_additivity,
        criterion_09_non_functoriality,
        criterion_10_star_contraction_against_quadrature,
        criterion_11_determinism,
    ];
    let mut failed = 0;
    for (n, criterion) in criteria.iter().enumerate() {
        let v = criterion();
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2}: {} (residual {:.3e}, bound {:.1e})",
            n + 1,
            v.what,
            v.residual,
            v.bound
        );
        failed += usize::from(!v.ok);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
