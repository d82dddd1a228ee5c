use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::{c1_const, SeriesConfig};

/// How the budget of each cell is derived from its `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum C0Rule {
    /// The same `c0` for every `n`.
    Absolute { value: f64 },
    /// `c0 = alpha * n`.
    Alpha { alpha: f64 },
    /// Midpoint of `[c1 sqrt(500 ln n), c1 n / sqrt(8000 ln n)]`.
    Case1Midpoint,
    /// `c0 = factor * c1 sqrt(500 ln n)`.
    Case1LowerMultiple { factor: f64 },
}

impl C0Rule {
    pub fn budget(&self, n: usize, series: &SeriesConfig) -> Result<f64> {
        let nf = n as f64;
        let ln = nf.ln();
        Ok(match *self {
            C0Rule::Absolute { value } => value,
            C0Rule::Alpha { alpha } => alpha * nf,
            C0Rule::Case1Midpoint => {
                let c1 = c1_const(series)?.value;
                0.5 * (c1 * (500.0 * ln).sqrt() + c1 * nf / (8000.0 * ln).sqrt())
            }
            C0Rule::Case1LowerMultiple { factor } => factor * c1_const(series)?.value * (500.0 * ln).sqrt(),
        })
    }
}

fn default_gamma() -> f64 {
    1.0
}

/// A Monte Carlo sweep: one cell per entry of `n_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub c0_rule: C0Rule,
    pub replicates: usize,
    pub master_seed: u64,
    /// Multiplier tolerance; `1e-9 n` when absent.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub tighten_budget: bool,
    /// Evaluate `phi` at this fixed multiplier instead of maximising it.
    #[serde(default)]
    pub fixed_lambda: Option<f64>,
    /// Record wall-clock time per trial; off keeps the CSV reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_values.is_empty() {
            return bad("n_values is empty".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 3) {
            return bad(format!("every n must be >= 3, got {n}"));
        }
        if self.replicates < 1 {
            return bad("replicates must be >= 1".into());
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad(format!("gamma must lie in (0, 1], got {}", self.gamma));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tol must be > 0, got {t}"));
            }
        }
        if let Some(l) = self.fixed_lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return bad(format!("fixed_lambda must be >= 0, got {l}"));
            }
            if self.tighten_budget {
                return bad("tighten_budget has no meaning with fixed_lambda".into());
            }
        }
        match self.c0_rule {
            C0Rule::Absolute { value: x }
            | C0Rule::Alpha { alpha: x }
            | C0Rule::Case1LowerMultiple { factor: x } => {
                let ok = if self.fixed_lambda.is_some() { x >= 0.0 } else { x > 0.0 };
                if !(ok && x.is_finite()) {
                    return bad(format!("c0 rule parameter out of range: {x}"));
                }
            }
            C0Rule::Case1Midpoint => {}
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_fields() {
        let ok = r#"{"n_values":[10,20],"c0_rule":{"kind":"alpha","alpha":0.3},"replicates":2,"master_seed":7}"#;
        let cfg = SweepConfig::from_json(ok).unwrap();
        assert_eq!(cfg.gamma, 1.0);
        assert!(!cfg.tighten_budget);
        let extra = r#"{"n_values":[10],"c0_rule":{"kind":"case1_midpoint"},"replicates":2,"master_seed":7,"bogus":1}"#;
        assert!(SweepConfig::from_json(extra).is_err());
        let small = r#"{"n_values":[2],"c0_rule":{"kind":"case1_midpoint"},"replicates":2,"master_seed":7}"#;
        assert!(SweepConfig::from_json(small).is_err());
        let zero = r#"{"n_values":[5],"c0_rule":{"kind":"case1_midpoint"},"replicates":0,"master_seed":7}"#;
        assert!(SweepConfig::from_json(zero).is_err());
    }

    #[test]
    fn budgets() {
        let s = SeriesConfig::default();
        assert_eq!(C0Rule::Absolute { value: 3.0 }.budget(10, &s).unwrap(), 3.0);
        assert_eq!(C0Rule::Alpha { alpha: 0.25 }.budget(40, &s).unwrap(), 10.0);
        let n = 1_000_000;
        let m = C0Rule::Case1Midpoint.budget(n, &s).unwrap();
        let lo = C0Rule::Case1LowerMultiple { factor: 1.0 }.budget(n, &s).unwrap();
        assert!(m > lo);
    }
}
