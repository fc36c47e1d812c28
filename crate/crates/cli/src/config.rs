//! Run configuration: a TOML file merged with command-line overrides.
//!
//! Every value is first reduced to the string a flag of the same name would
//! carry, so file and flag share one parser. Flags win.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use spiral_dirac_core::spectrum::{Branch, Method, Spin};

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "mode", "m", "beta", "omega", "r0", "kz", "n", "l", "s", "branches", "methods", "out", "format",
    "workers",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Static,
    Rotating,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Static => "static",
            Mode::Rotating => "rotating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

impl Format {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "csv" => Some(Format::Csv),
            "json-lines" | "jsonl" => Some(Format::JsonLines),
            _ => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        })
    }
}

/// Key/value pairs in flag-string form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let table: toml::Table =
            text.parse().map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
        let mut values = BTreeMap::new();
        for (key, value) in table {
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::field(&key, "unknown field"));
            }
            let text = flag_string(&key, &value)?;
            values.insert(key, text);
        }
        Ok(Self { values })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key));
        self.values.insert(key.to_string(), value.into());
    }

    /// Applies `overrides` on top of `self`.
    pub fn merged(mut self, overrides: &RawConfig) -> Self {
        for (k, v) in &overrides.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn flag_string(key: &str, value: &toml::Value) -> Result<String, CliError> {
    let scalar = |v: &toml::Value| match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(x) => Ok(x.to_string()),
        _ => Err(CliError::field(key, "expected a number, string or list")),
    };
    match value {
        toml::Value::Array(items) => {
            Ok(items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(","))
        }
        v => scalar(v),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub m: f64,
    pub beta: Vec<f64>,
    /// Empty in the static frame.
    pub omega: Vec<f64>,
    pub r0: Option<f64>,
    pub k_z: f64,
    pub n: Vec<u32>,
    pub l: Vec<i32>,
    pub s: Vec<Spin>,
    pub branches: Vec<Branch>,
    pub methods: Vec<Method>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_raw(mode: Mode, raw: &RawConfig) -> Result<Self, CliError> {
        if let Some(declared) = raw.get("mode") {
            if declared != mode.name() {
                return Err(CliError::field(
                    "mode",
                    format!("`{declared}` does not match the {} subcommand", mode.name()),
                ));
            }
        }
        let require = |key: &str| {
            raw.get(key).ok_or_else(|| CliError::field(key, "required but not given"))
        };
        let (r0, omega) = match mode {
            Mode::Static => {
                if raw.get("omega").is_some() {
                    return Err(CliError::field("omega", "not allowed in static mode"));
                }
                (Some(parse_real("r0", require("r0")?)?), Vec::new())
            }
            Mode::Rotating => {
                if raw.get("r0").is_some() {
                    return Err(CliError::field(
                        "r0",
                        "not allowed in rotating mode (the wall is the light-cone radius)",
                    ));
                }
                (None, parse_sweep("omega", require("omega")?)?)
            }
        };
        let k_z = parse_real("kz", raw.get("kz").unwrap_or("0"))?;
        if mode == Mode::Rotating && k_z != 0.0 {
            return Err(CliError::field("kz", "not supported in rotating mode"));
        }
        let workers = match raw.get("workers") {
            None => None,
            Some(w) => match w.trim().parse::<usize>() {
                Ok(0) | Err(_) => return Err(CliError::field("workers", "expected a positive integer")),
                Ok(w) => Some(w),
            },
        };
        let format = match raw.get("format") {
            None => Format::Csv,
            Some(f) => Format::parse(f.trim())
                .ok_or_else(|| CliError::field("format", format!("unknown format `{f}`")))?,
        };
        Ok(Self {
            mode,
            m: parse_real("m", require("m")?)?,
            beta: parse_sweep("beta", raw.get("beta").unwrap_or("0"))?,
            omega,
            r0,
            k_z,
            n: parse_list("n", raw.get("n").unwrap_or("0"), |x| {
                u32::try_from(x).map_err(|_| "must be >= 0".to_string())
            })?,
            l: parse_list("l", raw.get("l").unwrap_or("0"), |x| {
                i32::try_from(x).map_err(|_| "out of range".to_string())
            })?,
            s: parse_signs("s", raw.get("s").unwrap_or("+1"), Spin::from_sign)?,
            branches: parse_signs("branches", raw.get("branches").unwrap_or("+1"), Branch::from_sign)?,
            methods: parse_methods(raw.get("methods").unwrap_or("exact"))?,
            out: raw.get("out").map(PathBuf::from),
            format,
            workers,
        })
    }
}

fn parse_real(key: &str, text: &str) -> Result<f64, CliError> {
    let value: f64 =
        text.trim().parse().map_err(|_| CliError::field(key, format!("`{text}` is not a number")))?;
    if !value.is_finite() {
        return Err(CliError::field(key, "must be finite"));
    }
    Ok(value)
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_sweep(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, count] => {
            let start = parse_real(key, start)?;
            let stop = parse_real(key, stop)?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::field(key, format!("`{count}` is not a point count")))?;
            match count {
                0 => return Err(CliError::field(key, "sweep needs at least one point")),
                1 => vec![start],
                _ => (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            stop
                        } else {
                            start + (stop - start) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect(),
            }
        }
        [_] => text.split(',').map(|v| parse_real(key, v)).collect::<Result<_, _>>()?,
        _ => return Err(CliError::field(key, format!("`{text}` is not a list or start:stop:count"))),
    };
    Ok(values)
}

/// Comma-separated integers and inclusive ranges `a..b`.
fn parse_list<T>(
    key: &str,
    text: &str,
    convert: impl Fn(i64) -> Result<T, String>,
) -> Result<Vec<T>, CliError> {
    let int = |s: &str| {
        s.trim().parse::<i64>().map_err(|_| CliError::field(key, format!("`{s}` is not an integer")))
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        let (lo, hi) = match item.split_once("..") {
            Some((a, b)) => (int(a)?, int(b.trim_start_matches('='))?),
            None => {
                let v = int(item)?;
                (v, v)
            }
        };
        if hi < lo {
            return Err(CliError::field(key, format!("empty range `{item}`")));
        }
        for v in lo..=hi {
            out.push(convert(v).map_err(|e| CliError::field(key, e))?);
        }
    }
    Ok(out)
}

fn parse_signs<T>(
    key: &str,
    text: &str,
    convert: impl Fn(i32) -> spiral_dirac_core::error::Result<T>,
) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|item| {
            let v: i32 = item
                .trim()
                .parse()
                .map_err(|_| CliError::field(key, format!("`{item}` is not +1 or -1")))?;
            convert(v).map_err(|_| CliError::field(key, format!("`{item}` is not +1 or -1")))
        })
        .collect()
}

fn parse_methods(text: &str) -> Result<Vec<Method>, CliError> {
    text.split(',')
        .map(|name| {
            Method::from_name(name.trim())
                .ok_or_else(|| CliError::field("methods", format!("unknown method `{name}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawConfig {
        RawConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("n", "0..2,5", |x| Ok::<_, String>(x)).unwrap(), vec![0, 1, 2, 5]);
        assert_eq!(parse_list("l", "-2..-1", |x| Ok::<_, String>(x)).unwrap(), vec![-2, -1]);
        assert!(parse_list("n", "3..1", |x| Ok::<_, String>(x)).is_err());
        assert_eq!(parse_sweep("beta", "0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_sweep("beta", "0.1, 2").unwrap(), vec![0.1, 2.0]);
    }

    #[test]
    fn toml_values_become_flag_strings() {
        let r = raw("m = 1\nbeta = [0.0, 0.25]\nn = \"0..3\"\ns = [1, -1]\nmethods = [\"exact\"]");
        assert_eq!(r.get("m"), Some("1"));
        assert_eq!(r.get("beta"), Some("0,0.25"));
        assert_eq!(r.get("s"), Some("1,-1"));
        let cfg = RunConfig::from_raw(Mode::Static, &r.merged(&raw("r0 = 2"))).unwrap();
        assert_eq!(cfg.n, vec![0, 1, 2, 3]);
        assert_eq!(cfg.s, vec![Spin::Up, Spin::Down]);
        assert_eq!(cfg.r0, Some(2.0));
    }

    #[test]
    fn flags_win() {
        let mut flags = RawConfig::default();
        flags.set("m", "3");
        let cfg = RunConfig::from_raw(Mode::Static, &raw("m = 1\nr0 = 1").merged(&flags)).unwrap();
        assert_eq!(cfg.m, 3.0);
    }

    #[test]
    fn rejections_name_the_field() {
        let err = RawConfig::from_toml_str("mass = 1").unwrap_err().to_string();
        assert!(err.contains("`mass`"), "{err}");
        let err = RunConfig::from_raw(Mode::Rotating, &raw("m = 1\nomega = 0.1\nr0 = 1")).unwrap_err();
        assert!(err.to_string().contains("`r0`"));
        let err = RunConfig::from_raw(Mode::Static, &raw("m = 1\nomega = 0.1\nr0 = 1")).unwrap_err();
        assert!(err.to_string().contains("`omega`"));
        let err = RunConfig::from_raw(Mode::Static, &raw("m = 1\nr0 = 1\nmethods = \"magic\""))
            .unwrap_err();
        assert!(err.to_string().contains("`methods`"));
        let err = RunConfig::from_raw(Mode::Static, &raw("r0 = 1")).unwrap_err();
        assert!(err.to_string().contains("`m`"));
        let err = RunConfig::from_raw(Mode::Rotating, &raw("mode = \"static\"\nm = 1\nomega = 0.1"))
            .unwrap_err();
        assert!(err.to_string().contains("`mode`"));
        assert_eq!(err.exit_code(), 1);
    }
}
