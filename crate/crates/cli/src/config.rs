//! `key = value` config files and the curve-equation parser.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "a",
    "b",
    "p",
    "n",
    "curve",
    "k",
    "ns",
    "nt",
    "rotation",
    "twist",
    "tau",
    "out",
    "oracle_limit",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config: invalid value '{v}' for {key}"))),
        }
    }
}

/// First of `flag`, then the config value.
pub fn pick<T: FromStr>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn curve_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(?:y\^2=)?x\^3(?:([+-])(\d*)x)?(?:([+-])(\d+))?$").expect("valid regex")
    })
}

/// Parses `y^2 = x^3 + Ax + B` (the `y^2 =` part optional, spaces ignored).
pub fn parse_curve(s: &str) -> Result<(i64, i64), CliError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse curve '{s}'; expected x^3 + Ax + B"));
    let caps = curve_regex().captures(&compact).ok_or_else(bad)?;
    let signed = |sign: Option<regex::Match>, digits: &str| -> Result<i64, CliError> {
        let mag: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad())? };
        Ok(if sign.map(|m| m.as_str()) == Some("-") { -mag } else { mag })
    };
    let a = match caps.get(2) {
        Some(d) => signed(caps.get(1), d.as_str())?,
        None => 0,
    };
    let b = match caps.get(4) {
        Some(d) => signed(caps.get(3), d.as_str())?,
        None => 0,
    };
    Ok((a, b))
}

/// Parses `re,im`.
pub fn parse_pair(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("expected two comma-separated numbers, got '{s}'"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

/// Parses `w,x,y,z`.
pub fn parse_quad(s: &str) -> Result<[f64; 4], CliError> {
    let bad = || CliError::Usage(format!("expected four comma-separated numbers, got '{s}'"));
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_forms() {
        assert_eq!(parse_curve("y^2 = x^3 + 3x").unwrap(), (3, 0));
        assert_eq!(parse_curve("x^3+3").unwrap(), (0, 3));
        assert_eq!(parse_curve("x^3 - x + 1").unwrap(), (-1, 1));
        assert_eq!(parse_curve("x^3+5x-7").unwrap(), (5, -7));
        assert_eq!(parse_curve("x^3").unwrap(), (0, 0));
        for bad in ["x^2+1", "y^2=x^3+3x^2", "x^3+x+", "x^3 + ax + b", ""] {
            assert!(parse_curve(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_lines() {
        let c = Config::parse("# comment\na = 3\nb=0 # trailing\n\nnt = 64\noracle-limit = 10\n").unwrap();
        assert_eq!(c.get::<i64>("a").unwrap(), Some(3));
        assert_eq!(c.get::<usize>("nt").unwrap(), Some(64));
        assert_eq!(c.get::<u64>("oracle_limit").unwrap(), Some(10));
        assert_eq!(c.get::<u64>("p").unwrap(), None);
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("a 3").is_err());
        assert!(Config::parse("a = x").unwrap().get::<i64>("a").is_err());
    }

    #[test]
    fn flag_beats_config() {
        let c = Config::parse("k = 5").unwrap();
        assert_eq!(pick(Some(7u32), &c, "k").unwrap(), Some(7));
        assert_eq!(pick(None::<u32>, &c, "k").unwrap(), Some(5));
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("0.5, 0.866").unwrap(), (0.5, 0.866));
        assert!(parse_pair("1").is_err());
        assert_eq!(parse_quad("1,0,0,0").unwrap(), [1.0, 0.0, 0.0, 0.0]);
        assert!(parse_quad("1,0,0").is_err());
    }
}
