use std::fmt::{self, Write as _};
use std::time::Duration;

/// How a check's residual is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Passes when the residual is within tolerance.
    Identity,
    /// A deliberately broken law: passes when the residual of the
    /// predicted failure pattern is within tolerance while the law itself
    /// is visibly violated.
    ExpectedFailureDemonstration,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Identity => "identity",
            Kind::ExpectedFailureDemonstration => "expected-failure-demonstration",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, in formula form.
    pub anchor: String,
    pub kind: Kind,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    /// Wall time; kept out of the serialized report so that it stays
    /// byte-stable.
    pub runtime: Duration,
}

impl CheckRecord {
    pub fn identity(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> CheckRecord {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            kind: Kind::Identity,
            passed: residual.is_finite() && residual <= tolerance,
            residual,
            tolerance,
            runtime: Duration::ZERO,
        }
    }

    /// Passes when the predicted pattern holds (`residual ≤ tolerance`)
    /// and the law it breaks is off by more than `tolerance`.
    pub fn demonstration(
        id: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        violation: f64,
        tolerance: f64,
    ) -> CheckRecord {
        CheckRecord {
            kind: Kind::ExpectedFailureDemonstration,
            passed: residual.is_finite() && residual <= tolerance && violation > tolerance,
            ..CheckRecord::identity(id, anchor, residual, tolerance)
        }
    }

    pub fn failed(id: impl Into<String>, anchor: impl Into<String>, tolerance: f64) -> CheckRecord {
        CheckRecord::identity(id, anchor, f64::INFINITY, tolerance)
    }
}

/// Ordered check records plus the configuration line they ran under.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub header: String,
    pub records: Vec<CheckRecord>,
    /// Errors that stopped a group early, in group order.
    pub errors: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    /// Byte-stable text: one line per check, then a summary block.
    pub fn render(&self) -> String {
        let mut s = String::from("tcft-report 1\n");
        let _ = writeln!(s, "config {}", self.header);
        for r in &self.records {
            let _ = writeln!(
                s,
                "check {} kind={} status={} residual={:.6e} tol={:.1e} anchor=\"{}\"",
                r.id,
                r.kind,
                if r.passed { "pass" } else { "fail" },
                r.residual,
                r.tolerance,
                r.anchor
            );
        }
        for e in &self.errors {
            let _ = writeln!(s, "error {e}");
        }
        let failed = self.failures().count();
        s.push_str("[summary]\n");
        let _ = writeln!(s, "checks = {}", self.records.len());
        let _ = writeln!(s, "passed = {}", self.records.len() - failed);
        let _ = writeln!(s, "failed = {failed}");
        let _ = writeln!(s, "errors = {}", self.errors.len());
        let _ = writeln!(s, "status = \"{}\"", if self.passed() { "pass" } else { "fail" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let r = Report::default();
        assert!(r.passed());
        assert!(r.render().contains("checks = 0\n"));
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!CheckRecord::identity("x", "a = b", f64::NAN, 1.0).passed);
    }

    #[test]
    fn demonstration_needs_a_visible_violation() {
        assert!(CheckRecord::demonstration("x", "", 0.0, 1.0, 1e-12).passed);
        assert!(!CheckRecord::demonstration("x", "", 0.0, 0.0, 1e-12).passed);
    }

    #[test]
    fn render_omits_runtime() {
        let mut a = CheckRecord::identity("x", "a = b", 0.5, 1.0);
        let mut r = Report {
            header: "h".into(),
            records: vec![a.clone()],
            errors: vec![],
        };
        let before = r.render();
        a.runtime = Duration::from_millis(40);
        r.records[0] = a;
        assert_eq!(r.render(), before);
        assert!(before.contains("residual=5.000000e-1"));
    }
}
