use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exploration limits shared by the symbolic MLTS, the process-term builder
/// and the fixpoint engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_set_size: usize,
    pub max_depth: usize,
    pub max_reachable: usize,
    /// Cap on choice functions enumerated for a single join transition.
    pub max_choices: usize,
    /// Replication unfolding bound.
    pub unfold: usize,
    /// Absolute tolerance for real-valued comparisons.
    pub eps: f64,
    pub max_iterations: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_set_size: 6,
            max_depth: 8,
            max_reachable: 20_000,
            max_choices: 4096,
            unfold: 3,
            eps: 1e-9,
            max_iterations: 10_000,
        }
    }
}

impl Bounds {
    /// Applies `key=value` overrides separated by commas or newlines.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split([',', '\n']) {
            let item = item.trim();
            if item.is_empty() || item.starts_with('#') {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("bounds `{item}`"), "expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |m: &str| Error::parse(format!("bounds `{item}`"), m.to_string());
            let as_count = || -> Result<usize> {
                let n: usize = value.parse().map_err(|_| bad("expected a positive integer"))?;
                if n == 0 {
                    return Err(bad("bounds must be positive"));
                }
                Ok(n)
            };
            match key {
                "max_set_size" => self.max_set_size = as_count()?,
                "max_depth" => self.max_depth = as_count()?,
                "max_reachable" => self.max_reachable = as_count()?,
                "max_choices" => self.max_choices = as_count()?,
                "K" | "k" | "unfold" => self.unfold = as_count()?,
                "max_iterations" => self.max_iterations = as_count()?,
                "eps" | "epsilon" => {
                    let e: f64 = value.parse().map_err(|_| bad("expected a number"))?;
                    if e.is_nan() || e <= 0.0 {
                        return Err(bad("eps must be positive"));
                    }
                    self.eps = e;
                }
                _ => return Err(bad("unknown bound")),
            }
        }
        Ok(self)
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("max_set_size".into(), self.max_set_size.to_string());
        m.insert("max_depth".into(), self.max_depth.to_string());
        m.insert("max_reachable".into(), self.max_reachable.to_string());
        m.insert("max_choices".into(), self.max_choices.to_string());
        m.insert("K".into(), self.unfold.to_string());
        m.insert("eps".into(), format!("{:e}", self.eps));
        m.insert("max_iterations".into(), self.max_iterations.to_string());
        m
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_map().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let b = Bounds::default()
            .apply_overrides("max_set_size=4, K=2,eps=1e-6")
            .unwrap();
        assert_eq!(b.max_set_size, 4);
        assert_eq!(b.unfold, 2);
        assert_eq!(b.eps, 1e-6);
    }

    #[test]
    fn zero_rejected() {
        assert!(Bounds::default().apply_overrides("max_depth=0").is_err());
        assert!(Bounds::default().apply_overrides("nonsense=3").is_err());
    }
}
