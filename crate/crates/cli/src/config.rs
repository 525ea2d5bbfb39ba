//! `key=value` experiment configs.
//!
//! One entry per line; blank lines and lines starting with `#` are skipped.
//! The Cantor set is either `cantor=b=3;D=0,2` (split at the first `=`) or a
//! pair of lines `b=3` and `D=0,2`. Frequencies keep the tag their syntax
//! gives them: `1/2` and `3` are exact, `0.25` and `sqrt2m1` are real.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cantor_core::{CantorSet, DigitSpec, Error, Frequency, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentConfig {
    pub cantor: Option<DigitSpec>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub alpha: Option<Frequency>,
    pub beta: Option<Frequency>,
    /// Command-specific parameters, validated when the command reads them.
    pub params: BTreeMap<String, String>,
}

fn invalid(message: String) -> Error {
    Error::InvalidArgument(message)
}

/// A count such as `4096`, `2^16` or `3^12`.
pub fn parse_count(key: &str, value: &str) -> Result<u64> {
    let value = value.trim();
    let parsed = match value.split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.trim().parse().map_err(|e| invalid(format!("{key}: {e}")))?;
            let exp: u32 = exp.trim().parse().map_err(|e| invalid(format!("{key}: {e}")))?;
            base.checked_pow(exp).ok_or_else(|| invalid(format!("{key}: {value} overflows 64 bits")))?
        }
        None => value.parse().map_err(|e| invalid(format!("{key}: {value:?}: {e}")))?,
    };
    Ok(parsed)
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| invalid(format!("{key}: {s:?}: {e}"))))
        .collect()
}

impl ExperimentConfig {
    /// Sets one entry, checking typed keys immediately.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "cantor" => self.cantor = Some(value.parse()?),
            "seed" => self.seed = Some(value.parse().map_err(|e| invalid(format!("seed: {e}")))?),
            "output" => self.output = Some(PathBuf::from(value)),
            "alpha" => self.alpha = Some(value.parse()?),
            "beta" => self.beta = Some(value.parse()?),
            "b" | "D" => {
                return Err(invalid(format!("{key} must be given in a config file or inside --cantor")))
            }
            _ if key.is_empty() => return Err(invalid("empty key".into())),
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Overrides entries of `self` with those present in `other`.
    pub fn overlay(&mut self, other: ExperimentConfig) {
        if other.cantor.is_some() {
            self.cantor = other.cantor;
        }
        if other.seed.is_some() {
            self.seed = other.seed;
        }
        if other.output.is_some() {
            self.output = other.output;
        }
        if other.alpha.is_some() {
            self.alpha = other.alpha;
        }
        if other.beta.is_some() {
            self.beta = other.beta;
        }
        self.params.extend(other.params);
    }

    pub fn digit_spec(&self) -> Result<&DigitSpec> {
        self.cantor.as_ref().ok_or_else(|| invalid("missing Cantor set (use --cantor \"b=3;D=0,2\")".into()))
    }

    pub fn cantor_set(&self) -> Result<CantorSet> {
        self.digit_spec()?.to_cantor_set()
    }

    pub fn alpha(&self) -> Result<Frequency> {
        self.alpha.clone().ok_or_else(|| invalid("missing alpha".into()))
    }

    /// `beta`, zero when absent.
    pub fn beta(&self) -> Frequency {
        self.beta.clone().unwrap_or_else(Frequency::zero)
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| invalid("this experiment is stochastic and needs --seed".into()))
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn count(&self, key: &str) -> Result<Option<u64>> {
        self.text(key).map(|v| parse_count(key, v)).transpose()
    }

    pub fn count_or(&self, key: &str, default: u64) -> Result<u64> {
        Ok(self.count(key)?.unwrap_or(default))
    }

    pub fn required_count(&self, key: &str) -> Result<u64> {
        self.count(key)?.ok_or_else(|| invalid(format!("missing {key}")))
    }

    pub fn float_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.text(key) {
            Some(v) => v.trim().parse().map_err(|e| invalid(format!("{key}: {v:?}: {e}"))),
            None => Ok(default),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.text(key).map(|v| parse_list(key, v)).transpose()
    }

    /// Fails on parameters the command does not read, so typos surface.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(invalid(format!(
                "unknown parameter {k:?}; expected one of {}",
                if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
            ))),
            None => Ok(()),
        }
    }
}

/// Byte offset of `part` inside `line`, as a 1-based column.
fn column_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut base: Option<(usize, usize, String)> = None;
    let mut digits: Option<(usize, usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |column: usize, message: String| Error::Parse { line: line_no, column, message };
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(column_of(raw, trimmed), "expected key=value".into()))?;
        let key_col = column_of(raw, trimmed);
        let value_col = column_of(raw, value) + (value.len() - value.trim_start().len());
        let key = key.trim();
        if key.is_empty() {
            return Err(err(key_col, "empty key".into()));
        }
        if let Some(first) = seen.insert(key.to_string(), line_no) {
            return Err(err(key_col, format!("{key} already set on line {first}")));
        }
        match key {
            "b" => base = Some((line_no, value_col, value.trim().to_string())),
            "D" => digits = Some((line_no, value_col, value.trim().to_string())),
            _ => config.set(key, value).map_err(|e| err(value_col, e.to_string()))?,
        }
    }
    match (base, digits) {
        (None, None) => {}
        (Some((line, column, b)), Some((_, _, d))) => {
            if config.cantor.is_some() {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "b= and D= conflict with cantor=".into(),
                });
            }
            let spec: DigitSpec = format!("b={b};D={d}").parse().map_err(|e: Error| Error::Parse {
                line,
                column,
                message: e.to_string(),
            })?;
            config.cantor = Some(spec);
        }
        (Some((line, _, _)), None) => {
            return Err(Error::Parse { line, column: 1, message: "b= given without D=".into() })
        }
        (None, Some((line, _, _))) => {
            return Err(Error::Parse { line, column: 1, message: "D= given without b=".into() })
        }
    }
    Ok(config)
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_config(s)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.cantor {
            writeln!(f, "cantor={c}")?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "seed={s}")?;
        }
        if let Some(o) = &self.output {
            writeln!(f, "output={}", o.display())?;
        }
        if let Some(a) = &self.alpha {
            writeln!(f, "alpha={a}")?;
        }
        if let Some(b) = &self.beta {
            writeln!(f, "beta={b}")?;
        }
        for (k, v) in &self.params {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_tags_follow_syntax() {
        let c = parse_config("alpha=1/2\nbeta = 0.4142135623730951\n").unwrap();
        assert_eq!(c.alpha, Some(Frequency::rational(1, 2)));
        assert!(matches!(c.beta, Some(Frequency::Real(_))));
        let c = parse_config("alpha=sqrt2m1\nbeta=2/4").unwrap();
        assert!(!c.alpha.unwrap().is_rational());
        assert_eq!(c.beta, Some(Frequency::rational(1, 2)));
    }

    #[test]
    fn cantor_forms() {
        let joined = parse_config("cantor=b=3;D=0,2").unwrap();
        let split = parse_config("# middle thirds\nb=3\n\nD=0,2\n").unwrap();
        assert_eq!(joined, split);
        assert_eq!(joined.cantor_set().unwrap(), CantorSet::new(3, [0, 2]).unwrap());

        let signed = parse_config("b=9\nD=-2,-1,0,1,2").unwrap();
        let spec = signed.digit_spec().unwrap();
        assert!(spec.is_signed());
        assert_eq!(spec.residues(), vec![0, 1, 2, 7, 8]);
        assert!(signed.cantor_set().is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let at = |text: &str| match parse_config(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(at("seed=1\nalpha=1/0"), (2, 7));
        assert_eq!(at("seed=1\n  count 5"), (2, 3));
        assert_eq!(at("seed=1\nseed=2"), (2, 1));
        assert_eq!(at("b=3\nD=0"), (1, 3));
        assert_eq!(at("D=0,1"), (1, 1));
        assert_eq!(at("seed = x"), (1, 8));
        assert_eq!(at("=4"), (1, 1));
    }

    #[test]
    fn counts_and_lists() {
        let c = parse_config("N=2^16\ns=0.25, 0.5\ncount=12").unwrap();
        assert_eq!(c.required_count("N").unwrap(), 65536);
        assert_eq!(c.count_or("count", 1).unwrap(), 12);
        assert_eq!(c.count_or("missing", 7).unwrap(), 7);
        assert_eq!(c.list::<f64>("s").unwrap().unwrap(), vec![0.25, 0.5]);
        assert!(c.check_keys(&["N", "s"]).is_err());
        assert!(c.check_keys(&["N", "s", "count"]).is_ok());
        assert!(parse_count("N", "2^64").is_err());
    }

    #[test]
    fn seeds_are_required_when_asked() {
        assert!(ExperimentConfig::default().seed().is_err());
        assert_eq!(parse_config("seed=7").unwrap().seed().unwrap(), 7);
    }
}
