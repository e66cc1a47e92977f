//! Experiment description read from an INI file.
//!
//! ```ini
//! [experiment]
//! dataset = facebook
//! graph = facebook_combined.txt
//! weights = uniform:0.1
//! budgets = 5, 10
//! methods = nads, cds, sd
//! starts = sd, random:10
//! time_budget_per_b = 2
//! eval_budget = 5000
//! output_dir = out
//! rng_seed = 7
//!
//! [gip]
//! gamma = 0.1
//!
//! [search]
//! d_max = 4
//! phase3 = true
//! ```
//!
//! Every key is optional except `graph`, `budgets` and `methods`. A relative
//! graph path resolves against `$NADS_DATA_DIR` when set, otherwise against
//! the directory holding the config file, as does `output_dir`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use ini::Ini;
use nads_core::graph::DATA_DIR_ENV;
use nads_core::heuristics::Heuristic;
use nads_core::{CandidateOrder, GipParams, SearchConfig, WeightScheme};

use crate::error::{CliError, Result};

/// Anything that can fill a row of the summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Nads,
    Cds,
    Heuristic(Heuristic),
}

impl Method {
    pub fn is_search(self) -> bool {
        matches!(self, Method::Nads | Method::Cds)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Nads => "nads",
            Method::Cds => "cds",
            Method::Heuristic(h) => h.name(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nads" => Ok(Method::Nads),
            "cds" => Ok(Method::Cds),
            other => other
                .parse::<Heuristic>()
                .map(Method::Heuristic)
                .map_err(|_| CliError::config(format!("unknown method {other:?}"))),
        }
    }
}

/// Where a search run starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartSpec {
    Heuristic(Heuristic),
    /// `count` pseudo-random starts; start `i` uses seed `rng_seed + i`.
    PseudoRandom { count: usize },
}

impl FromStr for StartSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(count) = s.strip_prefix("random:") {
            let count: usize = count
                .parse()
                .map_err(|_| CliError::config(format!("bad start count in {s:?}")))?;
            if count == 0 {
                return Err(CliError::config("random start count must be positive"));
            }
            return Ok(StartSpec::PseudoRandom { count });
        }
        s.parse::<Heuristic>()
            .map(StartSpec::Heuristic)
            .map_err(|_| CliError::config(format!("unknown start {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub graph_path: PathBuf,
    pub weights: WeightScheme,
    pub params: GipParams,
    pub budgets: Vec<usize>,
    pub methods: Vec<Method>,
    pub starts: Vec<StartSpec>,
    /// Wall-clock seconds per unit of budget for each search run.
    pub time_budget_per_b: Option<f64>,
    pub eval_budget: Option<u64>,
    pub search: SearchConfig,
    pub output_dir: PathBuf,
    pub rng_seed: u64,
}

const EXPERIMENT_KEYS: &[&str] = &[
    "dataset",
    "graph",
    "weights",
    "budgets",
    "methods",
    "starts",
    "time_budget_per_b",
    "eval_budget",
    "output_dir",
    "rng_seed",
];
const GIP_KEYS: &[&str] = &[
    "theta_l",
    "theta_h",
    "gamma",
    "epsilon",
    "l0",
    "h0",
    "include_t0",
    "max_steps",
];
const SEARCH_KEYS: &[&str] = &["zeta0", "delta", "d_max", "phase3", "ordering"];

fn parse_value<T: FromStr>(section: &str, key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::config(format!("[{section}] {key}: cannot parse {raw:?}")))
}

fn parse_list<T, F>(raw: &str, f: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Result<T>,
{
    raw.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

pub fn parse_ordering(raw: &str) -> Result<CandidateOrder> {
    match raw.trim() {
        "lexicographic" | "lex" => Ok(CandidateOrder::Lexicographic),
        "degree" => Ok(CandidateOrder::DegreeDescending),
        other => Err(CliError::config(format!("unknown ordering {other:?}"))),
    }
}

fn resolve(path: &str, base: &Path) -> PathBuf {
    let p = PathBuf::from(path.trim());
    if p.is_absolute() || std::env::var_os(DATA_DIR_ENV).is_some() {
        p
    } else {
        base.join(p)
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses INI text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        for (name, props) in ini.iter() {
            let allowed = match name {
                Some("experiment") => EXPERIMENT_KEYS,
                Some("gip") => GIP_KEYS,
                Some("search") => SEARCH_KEYS,
                Some(other) => return Err(CliError::config(format!("unknown section [{other}]"))),
                None if props.is_empty() => continue,
                None => return Err(CliError::config("keys must sit inside a section")),
            };
            if let Some((k, _)) = props.iter().find(|(k, _)| !allowed.contains(k)) {
                return Err(CliError::config(format!("unknown key {k:?} in [{}]", name.unwrap())));
            }
        }
        let get = |section: &str, key: &str| ini.section(Some(section)).and_then(|s| s.get(key));

        let graph = get("experiment", "graph").ok_or_else(|| CliError::config("missing [experiment] graph"))?;
        let graph_path = resolve(graph, base);
        let dataset = match get("experiment", "dataset") {
            Some(d) => d.trim().to_string(),
            None => graph_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into()),
        };
        let weights = match get("experiment", "weights") {
            Some(w) => w.parse::<WeightScheme>()?,
            None => WeightScheme::default(),
        };
        let budgets = parse_list(
            get("experiment", "budgets").ok_or_else(|| CliError::config("missing [experiment] budgets"))?,
            |s| parse_value("experiment", "budgets", s),
        )?;
        let methods = parse_list(
            get("experiment", "methods").ok_or_else(|| CliError::config("missing [experiment] methods"))?,
            str::parse::<Method>,
        )?;
        let starts = match get("experiment", "starts") {
            Some(s) => parse_list(s, str::parse::<StartSpec>)?,
            None => vec![StartSpec::Heuristic(Heuristic::SingleDiscount)],
        };
        let opt = |section: &str, key: &str| get(section, key).map(str::trim).filter(|s| !s.is_empty());
        let time_budget_per_b = opt("experiment", "time_budget_per_b")
            .map(|s| parse_value("experiment", "time_budget_per_b", s))
            .transpose()?;
        let eval_budget = opt("experiment", "eval_budget")
            .map(|s| parse_value("experiment", "eval_budget", s))
            .transpose()?;
        let output_dir = base.join(opt("experiment", "output_dir").unwrap_or("out"));
        let rng_seed = opt("experiment", "rng_seed")
            .map(|s| parse_value("experiment", "rng_seed", s))
            .transpose()?
            .unwrap_or(0);

        let mut params = GipParams::default();
        for &key in GIP_KEYS {
            let Some(raw) = opt("gip", key) else { continue };
            match key {
                "theta_l" => params.theta_l = parse_value("gip", key, raw)?,
                "theta_h" => params.theta_h = parse_value("gip", key, raw)?,
                "gamma" => params.gamma = parse_value("gip", key, raw)?,
                "epsilon" => params.epsilon = parse_value("gip", key, raw)?,
                "l0" => params.l0 = parse_value("gip", key, raw)?,
                "h0" => params.h0 = parse_value("gip", key, raw)?,
                "include_t0" => params.include_t0 = parse_value("gip", key, raw)?,
                "max_steps" => params.max_steps = parse_value("gip", key, raw)?,
                _ => unreachable!(),
            }
        }

        let mut search = SearchConfig::default();
        for &key in SEARCH_KEYS {
            let Some(raw) = opt("search", key) else { continue };
            match key {
                "zeta0" => search.zeta0 = parse_value("search", key, raw)?,
                "delta" => search.delta = parse_value("search", key, raw)?,
                "d_max" => search.d_max = parse_value("search", key, raw)?,
                "phase3" => search.phase3_enabled = parse_value("search", key, raw)?,
                "ordering" => search.ordering = parse_ordering(raw)?,
                _ => unreachable!(),
            }
        }
        search.rng_seed = rng_seed;

        let cfg = ExperimentConfig {
            dataset,
            graph_path,
            weights,
            params,
            budgets,
            methods,
            starts,
            time_budget_per_b,
            eval_budget,
            search,
            output_dir,
            rng_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(CliError::config("at least one method is required"));
        }
        if self.budgets.is_empty() {
            return Err(CliError::config("at least one budget is required"));
        }
        if self.methods.iter().any(|m| m.is_search()) && self.starts.is_empty() {
            return Err(CliError::config("search methods need at least one start"));
        }
        if let Some(m) = self.time_budget_per_b {
            if !(m.is_finite() && m > 0.0) {
                return Err(CliError::config("time_budget_per_b must be positive"));
            }
        }
        if self.dataset.contains([',', '\n']) {
            return Err(CliError::config("dataset name may not contain commas"));
        }
        self.params.validate()?;
        self.search.validate()?;
        Ok(())
    }

    /// Search configuration for one run at budget `b`.
    pub fn search_for(&self, budget: usize) -> SearchConfig {
        SearchConfig {
            time_budget: self
                .time_budget_per_b
                .map(|m| Duration::from_secs_f64(m * budget as f64)),
            eval_budget: self.eval_budget,
            ..self.search.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[experiment]\ngraph = g.txt\nbudgets = 2\nmethods = sg, nads\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::parse(MINIMAL, Path::new("/data")).unwrap();
        assert_eq!(cfg.dataset, "g");
        assert_eq!(cfg.budgets, vec![2]);
        assert_eq!(cfg.methods[1], Method::Nads);
        assert_eq!(cfg.starts, vec![StartSpec::Heuristic(Heuristic::SingleDiscount)]);
        assert_eq!(cfg.params, GipParams::default());
        assert!(cfg.time_budget_per_b.is_none());
    }

    #[test]
    fn sections_override_defaults() {
        let text = format!(
            "{MINIMAL}starts = cc, random:3\ntime_budget_per_b = 2\n[gip]\ngamma = 0\ninclude_t0 = true\n[search]\nd_max = 4\nphase3 = true\nordering = degree\n"
        );
        let cfg = ExperimentConfig::parse(&text, Path::new(".")).unwrap();
        assert_eq!(cfg.params.gamma, 0.0);
        assert!(cfg.params.include_t0);
        assert_eq!(cfg.search.d_max, 4);
        assert!(cfg.search.phase3_enabled);
        assert_eq!(cfg.search.ordering, CandidateOrder::DegreeDescending);
        assert_eq!(cfg.starts[1], StartSpec::PseudoRandom { count: 3 });
        assert_eq!(cfg.search_for(5).time_budget, Some(Duration::from_secs(10)));
    }

    #[test]
    fn rejects_bad_configs() {
        let empty = "[experiment]\ngraph = g.txt\nbudgets = 2\nmethods =\n";
        assert!(ExperimentConfig::parse(empty, Path::new(".")).is_err());
        let typo = format!("{MINIMAL}[search]\nzeta = 0.1\n");
        assert!(ExperimentConfig::parse(&typo, Path::new(".")).is_err());
        let unknown = "[experiment]\ngraph = g.txt\nbudgets = 2\nmethods = magic\n";
        assert!(ExperimentConfig::parse(unknown, Path::new(".")).is_err());
        let odd = format!("{MINIMAL}[search]\nd_max = 3\n");
        assert!(ExperimentConfig::parse(&odd, Path::new(".")).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for name in ["nads", "cds", "sd", "sg", "kc", "cc", "ci"] {
            assert_eq!(name.parse::<Method>().unwrap().name(), name);
        }
    }
}
