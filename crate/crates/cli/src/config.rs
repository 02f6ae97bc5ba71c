use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use paradiff::spaces::{NormKind, NormSpec};
use paradiff::symbols::SymbolSpec;
use serde::{Deserialize, Serialize};

/// Everything that determines a run. Flags override a `--config` file, the
/// result is validated, and the validated value is copied into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: String,
    pub dim: usize,
    pub n_points: Option<usize>,
    pub j_max: Option<u32>,
    pub symbol: SymbolSpec,
    /// Families covered by `verify`; all when absent.
    pub verify_symbols: Option<Vec<String>>,
    pub kind: NormKind,
    pub s: f64,
    #[serde(with = "paradiff::io::exponent")]
    pub p: f64,
    #[serde(with = "paradiff::io::exponent")]
    pub q: f64,
    pub t: f64,
    pub input: Option<String>,
    pub seed: u64,
    pub suite: String,
    pub oracle: bool,
    pub twisted_c: f64,
    /// θ-family indices `N`.
    pub family: Vec<u32>,
    #[serde(with = "exponent_list")]
    pub q_list: Vec<f64>,
    #[serde(with = "exponent_list")]
    pub t_list: Vec<f64>,
    pub probe: String,
    pub k: Vec<u32>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            dim: 1,
            n_points: None,
            j_max: None,
            symbol: SymbolSpec::new("identity"),
            verify_symbols: None,
            kind: NormKind::TriebelLizorkin,
            s: 0.0,
            p: 2.0,
            q: 2.0,
            t: 1.0,
            input: None,
            seed: 0,
            suite: "all".into(),
            oracle: false,
            twisted_c: 2.0,
            family: vec![2, 3],
            q_list: vec![1.0, 2.0, f64::INFINITY],
            t_list: vec![1.0, 2.0, f64::INFINITY],
            probe: "marschall".into(),
            k: vec![3, 4, 5, 6, 7],
            samples: None,
            out: None,
        }
    }
}

mod exponent_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct E(#[serde(with = "paradiff::io::exponent")] f64);

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| E(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<E>::deserialize(d)?.into_iter().map(|e| e.0).collect())
    }
}

pub fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl RunConfig {
    /// Grid size and partition depth, with per-command defaults.
    pub fn grid(&self, default: (usize, u32)) -> (usize, u32) {
        (self.n_points.unwrap_or(default.0), self.j_max.unwrap_or(default.1))
    }

    pub fn norm_spec(&self) -> Result<NormSpec> {
        Ok(NormSpec::new(self.kind, self.s, self.p, self.q)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            bail!("--dim must be 1 or 2, got {}", self.dim);
        }
        if !(self.t > 0.0 && self.t <= 1.0) {
            bail!("--t must lie in (0, 1], got {}", self.t);
        }
        if !(self.twisted_c >= 1.0) {
            bail!("--twisted-C must be at least 1, got {}", self.twisted_c);
        }
        if self.command == "norm" {
            self.norm_spec()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_with_infinity() {
        let c = RunConfig { q: f64::INFINITY, ..Default::default() };
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""q":"inf""#));
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"dim": 2, "symbol": {"name": "ching", "d": 1.0}}"#).unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(c.symbol.name, "ching");
        assert_eq!(c.q_list.len(), 3);
    }
}
