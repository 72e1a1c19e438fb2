// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` experiment configuration with command-line overrides.
//!
//! Every problem found is collected, so one run reports all of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    Nested,
    StaircaseGabidulin,
    StaircaseProduct,
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nested" => Ok(SchemeKind::Nested),
            "staircase-gabidulin" => Ok(SchemeKind::StaircaseGabidulin),
            "staircase-product" => Ok(SchemeKind::StaircaseProduct),
            _ => Err(format!("unknown scheme `{s}` (nested | staircase-gabidulin | staircase-product)")),
        }
    }
}

impl SchemeKind {
    pub fn is_staircase(self) -> bool {
        self != SchemeKind::Nested
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub p: u32,
    pub s: u32,
    pub m: usize,
    pub scheme: SchemeKind,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub t0: usize,
    #[serde(rename = "D")]
    pub d_set: Vec<usize>,
    pub l: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
    /// Storage model: contacted columns are selected and errors are
    /// crisscross patterns on the stored F_q matrix.
    pub crisscross: bool,
    pub trials: u64,
    pub seed: u64,
    pub threads: usize,
    /// Enumeration budget for exhaustive mutual information and B sweeps.
    pub budget: u128,
}

pub const KEYS: &[&str] = &[
    "p", "s", "m", "scheme", "n", "k1", "k2", "t0", "D", "l", "N", "t", "rho", "mu", "crisscross", "trials",
    "seed", "threads", "budget",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub Vec<String>);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Raw key/value pairs with the place each one came from.
#[derive(Clone, Debug, Default)]
pub struct RawConfig {
    values: BTreeMap<String, (String, String)>,
    errors: Vec<String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Self {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("line {}", i + 1);
            match line.split_once('=') {
                Some((k, v)) => {
                    let k = k.trim();
                    if raw.values.contains_key(k) {
                        raw.errors.push(format!("{origin}: duplicate key `{k}`"));
                    }
                    raw.insert(k, v.trim(), origin);
                }
                None => raw.errors.push(format!("{origin}: expected `key = value`, got `{line}`")),
            }
        }
        raw
    }

    fn insert(&mut self, key: &str, value: &str, origin: String) {
        if !KEYS.contains(&key) {
            self.errors.push(format!("{origin}: unknown key `{key}`"));
            return;
        }
        self.values.insert(key.to_string(), (value.to_string(), origin));
    }

    /// Applies one `key=value` override; later overrides win.
    pub fn set(&mut self, assignment: &str) {
        match assignment.split_once('=') {
            Some((k, v)) => self.insert(k.trim(), v.trim(), format!("--set {assignment}")),
            None => self.errors.push(format!("--set {assignment}: expected key=value")),
        }
    }

    fn get<T: FromStr>(&self, key: &str, errors: &mut Vec<String>) -> Option<T> {
        let (v, origin) = self.values.get(key)?;
        match v.parse() {
            Ok(x) => Some(x),
            Err(_) => {
                errors.push(format!("{origin}: bad value `{v}` for `{key}`"));
                None
            }
        }
    }

    fn get_list(&self, key: &str, errors: &mut Vec<String>) -> Option<Vec<usize>> {
        let (v, origin) = self.values.get(key)?;
        let v = v.trim_matches(|c| c == '{' || c == '}' || c == '[' || c == ']');
        let parsed: Result<Vec<usize>, _> = v.split(',').map(|x| x.trim().parse()).collect();
        match parsed {
            Ok(list) if !list.is_empty() => Some(list),
            _ => {
                errors.push(format!("{origin}: bad list `{v}` for `{key}`"));
                None
            }
        }
    }

    fn get_scheme(&self, errors: &mut Vec<String>) -> Option<SchemeKind> {
        let (v, origin) = self.values.get("scheme")?;
        match v.parse() {
            Ok(s) => Some(s),
            Err(e) => {
                errors.push(format!("{origin}: {e}"));
                None
            }
        }
    }

    /// Typed configuration with defaults filled in. Cross-module checks are
    /// done later by [`crate::setup::Setup::build`].
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut errors = self.errors.clone();
        let scheme = self.get_scheme(&mut errors).unwrap_or(SchemeKind::StaircaseGabidulin);
        let p = self.get("p", &mut errors).unwrap_or(2);
        let s = self.get("s", &mut errors).unwrap_or(1);
        let l = self.get("l", &mut errors).unwrap_or(1);
        let n_given: Option<usize> = self.get("n", &mut errors);
        let m_given: Option<usize> = self.get("m", &mut errors);
        let (n, m) = match (scheme, n_given, m_given) {
            (SchemeKind::StaircaseProduct, n, Some(m)) => (n.unwrap_or(l * m), m),
            (SchemeKind::StaircaseProduct, _, None) => {
                errors.push("missing key `m` (required for staircase-product)".into());
                (0, 0)
            }
            (_, Some(n), m) => (n, m.unwrap_or(n)),
            (_, None, _) => {
                errors.push("missing key `n`".into());
                (0, m_given.unwrap_or(0))
            }
        };
        let k1 = self.get("k1", &mut errors).unwrap_or_else(|| {
            errors.push("missing key `k1`".into());
            0
        });
        let k2 = self.get("k2", &mut errors).unwrap_or_else(|| {
            errors.push("missing key `k2`".into());
            0
        });
        let t0 = self.get("t0", &mut errors).unwrap_or(0);
        let d_set = self.get_list("D", &mut errors).unwrap_or_else(|| vec![n]);
        let default_rho = match scheme {
            SchemeKind::Nested => 0,
            _ => n.saturating_sub(d_set.iter().copied().min().unwrap_or(n)),
        };
        let threads = self
            .get("threads", &mut errors)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |x| x.get()));
        let crisscross = match self.values.get("crisscross") {
            None => false,
            Some((v, origin)) => match v.as_str() {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" => false,
                _ => {
                    errors.push(format!("{origin}: bad value `{v}` for `crisscross`"));
                    false
                }
            },
        };
        let config = ExperimentConfig {
            p,
            s,
            m,
            scheme,
            n,
            k1,
            k2,
            t0,
            d_set,
            l,
            big_n: self.get("N", &mut errors).unwrap_or(n),
            t: self.get("t", &mut errors).unwrap_or(t0),
            rho: self.get("rho", &mut errors).unwrap_or(default_rho),
            mu: self.get("mu", &mut errors).unwrap_or(k2),
            crisscross,
            trials: self.get("trials", &mut errors).unwrap_or(100),
            seed: self.get("seed", &mut errors).unwrap_or(0),
            threads,
            budget: self.get("budget", &mut errors).unwrap_or(1 << 20),
        };
        errors.extend(config.structural_errors());
        if errors.is_empty() {
            Ok(config)
        } else {
            Err(ConfigError(errors))
        }
    }
}

impl ExperimentConfig {
    pub fn from_text(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::parse(text);
        for o in overrides {
            raw.set(o);
        }
        raw.resolve()
    }

    /// Checks that need no field arithmetic.
    fn structural_errors(&self) -> Vec<String> {
        let mut e = Vec::new();
        if self.m == 0 || self.m > 128 {
            e.push(format!("m = {} outside 1..=128", self.m));
        }
        if self.k2 >= self.k1 {
            e.push(format!("need k2 < k1 for a nonempty secret, got k1 = {}, k2 = {}", self.k1, self.k2));
        }
        if self.k1 > self.n {
            e.push(format!("k1 = {} exceeds n = {}", self.k1, self.n));
        }
        match self.scheme {
            SchemeKind::StaircaseProduct => {
                if self.l == 0 {
                    e.push("l must be positive".into());
                } else if self.n != self.l * self.m {
                    e.push(format!("staircase-product needs n = l·m, got n = {}, l·m = {}", self.n, self.l * self.m));
                }
                if self.t > 0 && !self.crisscross {
                    e.push("staircase-product with t > 0 needs crisscross = true (column-selection channel)".into());
                }
            }
            _ if self.n > self.m => e.push(format!("Gabidulin codes need n ≤ m, got n = {}, m = {}", self.n, self.m)),
            _ => {}
        }
        if let Some(&d) = self.d_set.iter().find(|&&d| d == 0 || d > self.n) {
            e.push(format!("D entry {d} outside 1..={}", self.n));
        }
        if self.rho > self.n {
            e.push(format!("rho = {} exceeds n = {}", self.rho, self.n));
        } else if self.scheme == SchemeKind::Nested && !self.crisscross && self.big_n + self.rho < self.n {
            e.push(format!("N = {} cannot carry rank n − rho = {}", self.big_n, self.n - self.rho));
        }
        if self.mu > self.n {
            e.push(format!("mu = {} exceeds n = {}", self.mu, self.n));
        }
        if self.trials == 0 {
            e.push("trials must be positive".into());
        }
        if self.threads == 0 {
            e.push("threads must be positive".into());
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "# tiny staircase\nq_ignored_line_check = 1\n";

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::from_text(
            "n = 4\nk1 = 2\nk2 = 1\nD = 3,4  # levels\n",
            &["seed=9".into(), "t0=0".into()],
        )
        .unwrap();
        assert_eq!(cfg.m, 4);
        assert_eq!(cfg.d_set, vec![3, 4]);
        assert_eq!(cfg.rho, 1);
        assert_eq!(cfg.mu, 1);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.scheme, SchemeKind::StaircaseGabidulin);
    }

    #[test]
    fn every_problem_is_listed() {
        let text = format!("{TINY}n = x\nk1 = 2\nscheme = fancy\nbroken line\nD = 3,,4\n");
        let err = ExperimentConfig::from_text(&text, &["trials=0".into()]).unwrap_err();
        let all = err.0.join("\n");
        for needle in ["unknown key `q_ignored_line_check`", "bad value `x`", "unknown scheme", "expected `key = value`", "bad list", "missing key `k2`", "trials must be positive"] {
            assert!(all.contains(needle), "missing `{needle}` in:\n{all}");
        }
    }

    #[test]
    fn product_needs_m() {
        let err = ExperimentConfig::from_text("scheme = staircase-product\nk1 = 2\nk2 = 1\nl = 2\n", &[]).unwrap_err();
        assert!(err.0.iter().any(|e| e.contains("missing key `m`")));
        let ok = ExperimentConfig::from_text("scheme = staircase-product\nm = 4\nk1 = 2\nk2 = 1\nl = 2\nD = 6,8\n", &[]).unwrap();
        assert_eq!(ok.n, 8);
    }
}
