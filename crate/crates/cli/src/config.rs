//! Flat `key = value` sweep configuration.
//!
//! A config file is a sequence of lines, each `key = value`, with `#`
//! starting a comment and blank lines ignored.  Values may be scalars,
//! comma-separated lists (`p = 0.1,0.2,0.3`), or inclusive ranges written
//! `start:stop:step` (`n = 4:12:2`).  The rate list additionally accepts the
//! keywords `beta_th` and `beta_0`, which resolve per grid point to the
//! corresponding closed-form threshold.
//!
//! Recognised keys:
//!
//! | key         | type            | meaning                                  |
//! |-------------|-----------------|------------------------------------------|
//! | `n`         | integer list    | address lengths                          |
//! | `N`         | integer list    | draws per strand (alias: `draws`)        |
//! | `p`         | float list      | erasure probabilities, each in (0, 1)    |
//! | `beta`      | rate list       | payload rates (floats or keywords)       |
//! | `eps1`      | float           | decoding-failure budget, in (0, 1)       |
//! | `eps2`      | float           | expected-order budget, > 0               |
//! | `trials`    | integer         | Monte Carlo trials per grid point        |
//! | `base_seed` | integer         | root seed for the whole sweep            |
//!
//! Unknown or duplicate keys are errors: a config that parses is exactly the
//! sweep it describes.

use std::fmt;

use thiserror::Error;

/// Largest address length the simulation modes accept.  Full algorithm runs
/// materialise all `2^n` strands, so sweeps are capped at desk scale; the
/// closed-form table modes accept longer addresses.
pub const MAX_SIMULATE_N: u32 = 12;

/// Largest address length the closed-form table modes accept.
pub const MAX_TABLE_N: u32 = 64;

/// A payload-rate entry: either a literal value or a keyword resolved per
/// grid point from the closed-form thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSpec {
    /// A literal rate.
    Value(f64),
    /// `beta_th`: the decoding-failure rate threshold for the point.
    Threshold,
    /// `beta_0`: the stronger pruning-regime rate threshold for the point.
    Pruning,
}

impl fmt::Display for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSpec::Value(v) => write!(f, "{v}"),
            BetaSpec::Threshold => write!(f, "beta_th"),
            BetaSpec::Pruning => write!(f, "beta_0"),
        }
    }
}

/// A parsed sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Address lengths to sweep.
    pub n: Vec<u32>,
    /// Draw counts to sweep.
    pub draws: Vec<u32>,
    /// Erasure probabilities to sweep.
    pub p: Vec<f64>,
    /// Payload rates to sweep.
    pub beta: Vec<BetaSpec>,
    /// Decoding-failure budget.
    pub eps1: f64,
    /// Expected-order budget.
    pub eps2: f64,
    /// Monte Carlo trials per grid point.
    pub trials: u64,
    /// Root seed; overridable by `--seed` and `STRAND_ID_SEED`.
    pub base_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: Vec::new(),
            draws: Vec::new(),
            p: Vec::new(),
            beta: vec![BetaSpec::Threshold],
            eps1: 0.01,
            eps2: 0.01,
            trials: 100,
            base_seed: 1,
        }
    }
}

/// Error produced while parsing or validating a configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// A line was not of the form `key = value`.
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Malformed {
        /// 1-based line number.
        line: usize,
        /// The offending text.
        text: String,
    },
    /// A key is not one of the recognised names.
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey {
        /// 1-based line number.
        line: usize,
        /// The offending key.
        key: String,
    },
    /// A key appeared twice.
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey {
        /// 1-based line number.
        line: usize,
        /// The repeated key.
        key: String,
    },
    /// A value failed to parse as its expected type.
    #[error("line {line}: bad value for {key:?}: {reason}")]
    BadValue {
        /// 1-based line number.
        line: usize,
        /// The key whose value is bad.
        key: String,
        /// What went wrong.
        reason: String,
    },
    /// The parsed configuration violates a semantic constraint.
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Parses a configuration from file text.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed { line, text: stripped.to_string() })?;
        let key = key.trim();
        let value = value.trim();
        let canonical = match key {
            "n" => "n",
            "N" | "draws" => "draws",
            "p" => "p",
            "beta" => "beta",
            "eps1" => "eps1",
            "eps2" => "eps2",
            "trials" => "trials",
            "base_seed" => "base_seed",
            _ => {
                return Err(ConfigError::UnknownKey { line, key: key.to_string() });
            }
        };
        if seen.iter().any(|s| s == canonical) {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
        seen.push(canonical.to_string());
        match canonical {
            "n" => cfg.n = parse_int_list(line, key, value)?,
            "draws" => cfg.draws = parse_int_list(line, key, value)?,
            "p" => cfg.p = parse_float_list(line, key, value)?,
            "beta" => cfg.beta = parse_beta_list(line, key, value)?,
            "eps1" => cfg.eps1 = parse_scalar_float(line, key, value)?,
            "eps2" => cfg.eps2 = parse_scalar_float(line, key, value)?,
            "trials" => cfg.trials = parse_scalar_int(line, key, value)?,
            "base_seed" => cfg.base_seed = parse_scalar_int(line, key, value)?,
            _ => unreachable!(),
        }
    }
    Ok(cfg)
}

/// Validates a configuration for the simulation mode (full algorithm runs).
pub fn validate_for_simulate(cfg: &SweepConfig) -> Result<(), ConfigError> {
    validate_common(cfg, MAX_SIMULATE_N)?;
    if cfg.trials == 0 {
        return Err(ConfigError::Invalid("trials must be at least 1".into()));
    }
    Ok(())
}

/// Validates a configuration for the closed-form table mode.
pub fn validate_for_thresholds(cfg: &SweepConfig) -> Result<(), ConfigError> {
    validate_common(cfg, MAX_TABLE_N)
}

fn validate_common(cfg: &SweepConfig, max_n: u32) -> Result<(), ConfigError> {
    if cfg.n.is_empty() {
        return Err(ConfigError::Invalid("key `n` is required".into()));
    }
    if cfg.draws.is_empty() {
        return Err(ConfigError::Invalid("key `N` is required".into()));
    }
    if cfg.p.is_empty() {
        return Err(ConfigError::Invalid("key `p` is required".into()));
    }
    if cfg.beta.is_empty() {
        return Err(ConfigError::Invalid("key `beta` must not be empty".into()));
    }
    for &n in &cfg.n {
        if n == 0 || n > max_n {
            return Err(ConfigError::Invalid(format!(
                "address length n = {n} out of range 1..={max_n}"
            )));
        }
    }
    for &d in &cfg.draws {
        if d == 0 {
            return Err(ConfigError::Invalid("draw count N must be at least 1".into()));
        }
    }
    for &p in &cfg.p {
        if !(p > 0.0 && p < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "erasure probability p = {p} must lie strictly in (0, 1)"
            )));
        }
    }
    for &b in &cfg.beta {
        if let BetaSpec::Value(v) = b {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("rate beta = {v} must be positive")));
            }
        }
    }
    if !(cfg.eps1 > 0.0 && cfg.eps1 < 1.0) {
        return Err(ConfigError::Invalid(format!(
            "eps1 = {} must lie strictly in (0, 1)",
            cfg.eps1
        )));
    }
    if !(cfg.eps2 > 0.0 && cfg.eps2.is_finite()) {
        return Err(ConfigError::Invalid(format!("eps2 = {} must be positive", cfg.eps2)));
    }
    Ok(())
}

fn parse_int_list(line: usize, key: &str, value: &str) -> Result<Vec<u32>, ConfigError> {
    let mut out = Vec::new();
    for part in split_list(value) {
        if let Some((start, stop, step)) = split_range(part) {
            let (start, stop, step) = (
                parse_u32(line, key, start)?,
                parse_u32(line, key, stop)?,
                parse_u32(line, key, step)?,
            );
            if step == 0 {
                return Err(bad(line, key, "range step must be positive"));
            }
            let mut v = start;
            while v <= stop {
                out.push(v);
                v = match v.checked_add(step) {
                    Some(next) => next,
                    None => break,
                };
            }
        } else {
            out.push(parse_u32(line, key, part)?);
        }
    }
    if out.is_empty() {
        return Err(bad(line, key, "empty list"));
    }
    Ok(out)
}

fn parse_float_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    let mut out = Vec::new();
    for part in split_list(value) {
        if let Some((start, stop, step)) = split_range(part) {
            let (start, stop, step) = (
                parse_f64(line, key, start)?,
                parse_f64(line, key, stop)?,
                parse_f64(line, key, step)?,
            );
            if step <= 0.0 || step.is_nan() {
                return Err(bad(line, key, "range step must be positive"));
            }
            // Work in integer multiples of the step so accumulated rounding
            // cannot drop the final endpoint of ranges like 0.1:0.5:0.1.
            let count = ((stop - start) / step + 1e-9).floor() as u64;
            for k in 0..=count {
                out.push(start + step * k as f64);
            }
        } else {
            out.push(parse_f64(line, key, part)?);
        }
    }
    if out.is_empty() {
        return Err(bad(line, key, "empty list"));
    }
    Ok(out)
}

fn parse_beta_list(line: usize, key: &str, value: &str) -> Result<Vec<BetaSpec>, ConfigError> {
    let mut out = Vec::new();
    for part in split_list(value) {
        match part {
            "beta_th" | "th" => out.push(BetaSpec::Threshold),
            "beta_0" | "b0" => out.push(BetaSpec::Pruning),
            other => {
                if let Some((start, stop, step)) = split_range(other) {
                    let (start, stop, step) = (
                        parse_f64(line, key, start)?,
                        parse_f64(line, key, stop)?,
                        parse_f64(line, key, step)?,
                    );
                    if step <= 0.0 || step.is_nan() {
                        return Err(bad(line, key, "range step must be positive"));
                    }
                    let count = ((stop - start) / step + 1e-9).floor() as u64;
                    for k in 0..=count {
                        out.push(BetaSpec::Value(start + step * k as f64));
                    }
                } else {
                    out.push(BetaSpec::Value(parse_f64(line, key, other)?));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(bad(line, key, "empty list"));
    }
    Ok(out)
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn split_range(part: &str) -> Option<(&str, &str, &str)> {
    let mut pieces = part.split(':');
    let start = pieces.next()?;
    let stop = pieces.next()?;
    let step = pieces.next()?;
    if pieces.next().is_some() {
        return None;
    }
    Some((start.trim(), stop.trim(), step.trim()))
}

fn parse_u32(line: usize, key: &str, text: &str) -> Result<u32, ConfigError> {
    text.parse::<u32>().map_err(|e| bad(line, key, &format!("{text:?}: {e}")))
}

fn parse_f64(line: usize, key: &str, text: &str) -> Result<f64, ConfigError> {
    let v = text.parse::<f64>().map_err(|e| bad(line, key, &format!("{text:?}: {e}")))?;
    if !v.is_finite() {
        return Err(bad(line, key, &format!("{text:?}: must be finite")));
    }
    Ok(v)
}

fn parse_scalar_int(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    value.parse::<u64>().map_err(|e| bad(line, key, &format!("{value:?}: {e}")))
}

fn parse_scalar_float(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    parse_f64(line, key, value)
}

fn bad(line: usize, key: &str, reason: &str) -> ConfigError {
    ConfigError::BadValue { line, key: key.to_string(), reason: reason.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_ranges_and_keywords() {
        let cfg = parse_config(
            "# sweep\n\
             n = 4:8:2\n\
             N = 2,3\n\
             p = 0.1:0.3:0.1, 0.5\n\
             beta = 1.5, beta_th, beta_0\n\
             eps1 = 0.05\n\
             eps2 = 0.02\n\
             trials = 250\n\
             base_seed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.n, vec![4, 6, 8]);
        assert_eq!(cfg.draws, vec![2, 3]);
        assert_eq!(cfg.p.len(), 4);
        assert!((cfg.p[2] - 0.3).abs() < 1e-12);
        assert_eq!(cfg.p[3], 0.5);
        assert_eq!(cfg.beta, vec![BetaSpec::Value(1.5), BetaSpec::Threshold, BetaSpec::Pruning]);
        assert_eq!(cfg.eps1, 0.05);
        assert_eq!(cfg.eps2, 0.02);
        assert_eq!(cfg.trials, 250);
        assert_eq!(cfg.base_seed, 7);
    }

    #[test]
    fn float_ranges_keep_their_endpoint() {
        let cfg = parse_config("n=4\nN=2\np=0.05:0.95:0.05\nbeta=2\n").unwrap();
        assert_eq!(cfg.p.len(), 19);
        assert!((cfg.p[18] - 0.95).abs() < 1e-12);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(matches!(
            parse_config("bogus = 3\n"),
            Err(ConfigError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("n = 3\nn = 4\n"),
            Err(ConfigError::DuplicateKey { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_malformed_lines_and_bad_values() {
        assert!(matches!(parse_config("n 4\n"), Err(ConfigError::Malformed { line: 1, .. })));
        assert!(matches!(parse_config("p = zero\n"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(parse_config("n = 4:8:0\n"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn validation_enforces_ranges() {
        let mut cfg = parse_config("n=6\nN=2\np=0.3\nbeta=2\n").unwrap();
        assert!(validate_for_simulate(&cfg).is_ok());
        cfg.p = vec![1.0];
        assert!(validate_for_simulate(&cfg).is_err());
        cfg.p = vec![0.3];
        cfg.n = vec![13];
        assert!(validate_for_simulate(&cfg).is_err());
        assert!(validate_for_thresholds(&cfg).is_ok());
        cfg.n = vec![6];
        cfg.trials = 0;
        assert!(validate_for_simulate(&cfg).is_err());
    }

    #[test]
    fn comments_and_aliases_are_accepted() {
        let cfg = parse_config("draws = 5 # five draws\nn=2\np=0.2\n").unwrap();
        assert_eq!(cfg.draws, vec![5]);
        assert_eq!(cfg.beta, vec![BetaSpec::Threshold]);
    }
}
