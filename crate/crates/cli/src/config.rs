//! Optional TOML defaults, overridden by command-line flags.
//!
//! ```toml
//! out_dir = "results"
//!
//! [grid]
//! delta = 18.0
//! kappa = 4
//! kappa_rule = "log2"
//! phi = true
//! allow_coarse = false
//!
//! [ga]
//! population = 50
//! generations = 200
//! crossover_rate = 0.9
//! mutation_rate = 0.1
//! seed = 0
//!
//! [budget]
//! max_nodes = 10000000
//! time_limit = 60.0
//!
//! [gen]
//! p_min = 1.0
//! p_max = 50.0
//! release = "moderate"
//! cv = "high"
//! ```

use std::path::{Path, PathBuf};

use bucketsched::bucket::{DeltaRule, KappaRule};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::fsutil::read_text;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub ga: GaSection,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub gen: GenSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub delta: Option<f64>,
    pub kappa: Option<usize>,
    pub delta_rule: Option<DeltaRule>,
    pub kappa_rule: Option<KappaRule>,
    pub phi: Option<bool>,
    pub allow_coarse: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSection {
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub tournament: Option<usize>,
    pub seed: Option<u64>,
    pub seed_spt: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSection {
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub release: Option<String>,
    pub cv: Option<String>,
}

pub const OUT_DIR_ENV: &str = "BUCKETSCHED_OUT_DIR";

impl Config {
    pub fn load(path: Option<&Path>) -> CliResult<Config> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = read_text(p)?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
            }
        }
    }

    /// Flag, then config file, then environment.
    pub fn out_dir(&self, flag: Option<&Path>) -> Option<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| self.out_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_sections() {
        let cfg: Config = toml::from_str(
            r#"
            out_dir = "res"
            [grid]
            delta = 18.0
            kappa = 4
            kappa_rule = "ratio"
            phi = false
            [ga]
            generations = 10
            [budget]
            max_nodes = 5
            [gen]
            release = "dense"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.grid.delta, Some(18.0));
        assert_eq!(cfg.grid.kappa_rule, Some(KappaRule::Ratio));
        assert_eq!(cfg.grid.phi, Some(false));
        assert_eq!(cfg.ga.generations, Some(10));
        assert_eq!(cfg.budget.max_nodes, Some(5));
        assert_eq!(cfg.gen.release.as_deref(), Some("dense"));
        assert_eq!(cfg.out_dir(None), Some(PathBuf::from("res")));
        assert_eq!(cfg.out_dir(Some(Path::new("x"))), Some(PathBuf::from("x")));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Config>("[grid]\nwidth = 3").is_err());
    }
}
