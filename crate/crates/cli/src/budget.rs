use anyhow::{bail, Context, Result};
use fairdiv_core::enumerate::DEFAULT_DEGENERACY_BUDGET;
use fairdiv_core::oracle::DEFAULT_ORACLE_BUDGET;

/// Search limits, overridable through `FAIRDIV_BUDGET`.
///
/// The variable is either a bare number (the oracle's support budget) or a
/// comma-separated list of `oracle=N` and `degeneracy=K` entries, where `K`
/// bounds `D * n(n-1)/2` for the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub oracle: u64,
    pub degeneracy: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            oracle: DEFAULT_ORACLE_BUDGET,
            degeneracy: DEFAULT_DEGENERACY_BUDGET,
        }
    }
}

impl Budgets {
    pub fn from_env() -> Result<Self> {
        match std::env::var("FAIRDIV_BUDGET") {
            Ok(text) => Self::parse(&text).context("invalid FAIRDIV_BUDGET"),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut budgets = Self::default();
        let text = text.trim();
        if let Ok(n) = text.parse() {
            budgets.oracle = n;
            return Ok(budgets);
        }
        for entry in text.split(',') {
            let Some((key, value)) = entry.split_once('=') else {
                bail!("expected key=value, got {entry:?}");
            };
            let value: u64 = value
                .trim()
                .parse()
                .with_context(|| format!("bad number in {entry:?}"))?;
            match key.trim() {
                "oracle" => budgets.oracle = value,
                "degeneracy" => budgets.degeneracy = value,
                other => bail!("unknown budget {other:?}"),
            }
        }
        Ok(budgets)
    }
}
