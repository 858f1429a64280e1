use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::spectral::{EigenvalueSet, Tolerances};

/// Check groups in suite order.
pub const GROUPS: &[&str] = &[
    "kernel",
    "propagator",
    "semigroup",
    "functoriality",
    "identity",
    "braiding",
    "chain-map",
    "monoidality",
    "cross",
    "additivity",
    "non-functoriality",
    "contraction",
];

/// `max = Λ` for `[0, Λ]`, or an explicit `set`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    pub max: Option<u32>,
    pub set: Option<Vec<u32>>,
}

impl CutoffSpec {
    pub fn up_to(max: u32) -> CutoffSpec {
        CutoffSpec {
            max: Some(max),
            set: None,
        }
    }

    pub fn resolve(&self, dim: usize) -> Result<EigenvalueSet> {
        match (self.max, &self.set) {
            (Some(m), None) => EigenvalueSet::up_to(dim, m),
            (None, Some(s)) => EigenvalueSet::new(dim, s.iter().copied()),
            _ => Err(Error::Config("cutoff needs exactly one of `max` or `set`".into())),
        }
    }

    /// `2` for a maximum, `0,1,2` for a set.
    pub fn parse(text: &str) -> Result<CutoffSpec> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let numbers = inner
            .split(',')
            .map(|w| w.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Config(format!("invalid cutoff `{text}`")))?;
        Ok(if inner.len() != text.trim().len() || text.contains(',') {
            CutoffSpec {
                max: None,
                set: Some(numbers),
            }
        } else {
            CutoffSpec::up_to(numbers[0])
        })
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub drop: f64,
    pub compare: f64,
}

/// Suite configuration, read from TOML; every field has a default.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub cutoff: CutoffSpec,
    pub tolerances: ToleranceSpec,
    /// Check groups to run; `None` runs all of them.
    pub catalog: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        let t = Tolerances::default();
        RunConfig {
            dim: 2,
            cutoff: CutoffSpec::up_to(2),
            tolerances: ToleranceSpec {
                drop: t.drop,
                compare: t.compare,
            },
            catalog: None,
            out: None,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn from_toml(path: &str, text: &str) -> Result<RunConfig> {
        let config: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            Error::Parse {
                path: path.to_string(),
                line,
                message: e.message().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        RunConfig::from_toml(&path.display().to_string(), &text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Config(format!("dimension {} is below 2", self.dim)));
        }
        self.cutoff.resolve(self.dim)?;
        let t = &self.tolerances;
        if !(t.drop > 0.0 && t.compare > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if t.compare < t.drop {
            return Err(Error::Config("compare tolerance is below drop tolerance".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        for g in self.catalog.iter().flatten() {
            if !GROUPS.contains(&g.as_str()) {
                return Err(Error::Config(format!("unknown check group `{g}`")));
            }
        }
        Ok(())
    }

    pub fn cutoff_set(&self) -> Result<EigenvalueSet> {
        self.cutoff.resolve(self.dim)
    }

    pub fn selects(&self, group: &str) -> bool {
        self.catalog.as_ref().is_none_or(|c| c.iter().any(|g| g == group))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let c = RunConfig::from_toml("c.toml", "dim = 2\n[cutoff]\nmax = 1\n").unwrap();
        assert_eq!(c.cutoff_set().unwrap().len(), 2);
        assert_eq!(c.tolerances.drop, 1e-12);
        assert!(c.selects("kernel"));
    }

    #[test]
    fn explicit_set_and_empty_catalog() {
        let text = "catalog = []\n[cutoff]\nset = [0, 2]\n";
        let c = RunConfig::from_toml("c.toml", text).unwrap();
        assert_eq!(c.cutoff_set().unwrap().to_string(), "{0,2}");
        assert!(!c.selects("kernel"));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for text in [
            "dim = 1\n",
            "[tolerances]\ndrop = 1e-6\ncompare = 1e-9\n",
            "[cutoff]\nmax = 1\nset = [0]\n",
            "[cutoff]\nset = [3]\n",
            "catalog = [\"nope\"]\n",
            "jobs = 0\n",
        ] {
            assert!(RunConfig::from_toml("c.toml", text).is_err(), "{text}");
        }
    }

    #[test]
    fn toml_errors_carry_a_line() {
        match RunConfig::from_toml("c.toml", "dim = 2\nbogus = 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cutoff_flags() {
        assert_eq!(CutoffSpec::parse("2").unwrap(), CutoffSpec::up_to(2));
        assert_eq!(CutoffSpec::parse("1,2").unwrap().set, Some(vec![1, 2]));
        assert!(CutoffSpec::parse("x").is_err());
    }
}
