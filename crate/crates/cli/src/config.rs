//! Flat key=value configuration files and the grid mini-language.
//!
//! Flags win over file values, file values win over built-in defaults. The
//! effective configuration is echoed into every CSV header as `# key=value`
//! comments so each artifact records how it was produced.

use crate::{CliError, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// A scalar or a uniform grid `min:max:count` (count points, both ends
/// included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Scalar(f64),
    Linear { min: f64, max: f64, count: usize },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            GridSpec::Scalar(x) => vec![x],
            GridSpec::Linear { min, max, count } => {
                let step = (max - min) / (count - 1) as f64;
                (0..count).map(|i| min + i as f64 * step).collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Scalar(_) => 1,
            GridSpec::Linear { count, .. } => count,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Validates monotonicity and non-emptiness, naming the offending key
    /// in the error.
    pub fn validate(&self, key: &str) -> Result<()> {
        match *self {
            GridSpec::Scalar(x) if x.is_finite() => Ok(()),
            GridSpec::Scalar(x) => {
                Err(CliError::Config(format!("{key}: value {x} is not finite")))
            }
            GridSpec::Linear { min, max, count } => {
                if count < 2 {
                    Err(CliError::Config(format!(
                        "{key}: grid needs at least 2 points, got {count}"
                    )))
                } else if !(min.is_finite() && max.is_finite()) || max <= min {
                    Err(CliError::Config(format!(
                        "{key}: grid {min}:{max} is not strictly increasing"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => x
                .trim()
                .parse::<f64>()
                .map(GridSpec::Scalar)
                .map_err(|_| format!("cannot parse '{s}' as a number")),
            [min, max, count] => {
                let min = min.trim().parse::<f64>().map_err(|_| format!("bad grid min in '{s}'"))?;
                let max = max.trim().parse::<f64>().map_err(|_| format!("bad grid max in '{s}'"))?;
                let count = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad grid count in '{s}'"))?;
                Ok(GridSpec::Linear { min, max, count })
            }
            _ => Err(format!("expected 'value' or 'min:max:count', got '{s}'")),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GridSpec::Scalar(x) => write!(f, "{x}"),
            GridSpec::Linear { min, max, count } => write!(f, "{min}:{max}:{count}"),
        }
    }
}

/// Parsed key=value configuration file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

/// Keys any command accepts from a configuration file.
const KNOWN_KEYS: &[&str] = &[
    "gamma", "beta", "L", "dh", "h0", "D", "workers", "out", "delta_f",
    "all_minima", "method", "samples", "wmax", "seed",
];

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{origin}:{}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "{origin}:{}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("{key}: {e}"))),
        }
    }
}

/// Resolves one option with flag > file > default precedence.
pub fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(file.get::<T>(key)?.unwrap_or(default))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        assert_eq!("1.5".parse::<GridSpec>().unwrap(), GridSpec::Scalar(1.5));
        assert_eq!(
            "0:2:401".parse::<GridSpec>().unwrap(),
            GridSpec::Linear { min: 0.0, max: 2.0, count: 401 }
        );
        assert!("a:b:c".parse::<GridSpec>().is_err());
        assert!("1:2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn grid_values_inclusive() {
        let g = GridSpec::Linear { min: 0.5, max: 2.0, count: 301 };
        let v = g.values();
        assert_eq!(v.len(), 301);
        assert_eq!(v[0], 0.5);
        assert!((v[300] - 2.0).abs() < 1e-15);
        assert!((v[1] - 0.505).abs() < 1e-12);
    }

    #[test]
    fn grid_validation_messages_name_the_key() {
        let bad = GridSpec::Linear { min: 2.0, max: 1.0, count: 10 };
        let err = bad.validate("h0").unwrap_err();
        assert!(err.to_string().contains("h0"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn config_file_round_trip() {
        let text = "# comment\n gamma = 0.25 \nL=100\nh0 = 0:2:5\n";
        let f = ConfigFile::parse(text, "test").unwrap();
        assert_eq!(f.get::<f64>("gamma").unwrap(), Some(0.25));
        assert_eq!(f.get::<usize>("L").unwrap(), Some(100));
        assert_eq!(
            f.get::<GridSpec>("h0").unwrap(),
            Some(GridSpec::Linear { min: 0.0, max: 2.0, count: 5 })
        );
        assert_eq!(f.get::<f64>("beta").unwrap(), None);
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let err = ConfigFile::parse("bogus = 1\n", "test").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }
}
