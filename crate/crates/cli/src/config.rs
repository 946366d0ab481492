//! Option resolution: flags, then a key=value config file, then the
//! `DIVSUM_DIGITS` environment variable (digits only), then built-in defaults.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const DIGITS_ENV: &str = "DIVSUM_DIGITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Digits {
    Fixed(u32),
    Auto,
}

impl FromStr for Digits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Digits::Auto);
        }
        s.parse::<u32>()
            .map(Digits::Fixed)
            .map_err(|_| format!("digits must be a positive integer or \"auto\", got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("format must be json or csv, got {other:?}")),
        }
    }
}

/// Parsed config file. Keys use the long flag names without dashes.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, v.trim().to_owned());
        }
        Ok(ConfigFile { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `flag` if given, else the parsed file entry for `key`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
        }
    }

    /// Digits from flag, file, then environment.
    pub fn digits(&self, flag: Option<Digits>) -> Result<Option<Digits>, CliError> {
        if let Some(d) = self.pick(flag, "digits")? {
            return Ok(Some(d));
        }
        match std::env::var(DIGITS_ENV) {
            Ok(v) if !v.trim().is_empty() => v
                .parse::<Digits>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("{DIGITS_ENV}: {e}"))),
            _ => Ok(None),
        }
    }
}

/// Parse "1,3,5", "0..20", "0..=20" or "7".
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.trim_start_matches('=');
            let lo: u64 = lo.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let hi: u64 = hi.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
            if hi < lo {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| format!("not an integer: {part:?}"))?);
        }
    }
    if out.is_empty() {
        return Err(format!("empty list {s:?}"));
    }
    Ok(out)
}

/// Split "a+bi", "a-bi", "bi" or "a" into decimal (re, im) strings.
pub fn split_complex(s: &str) -> Result<(String, String), String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        check_decimal(&t)?;
        return Ok((t, "0".into()));
    };
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(i) => (body[..i].to_owned(), body[i..].to_owned()),
        None => ("0".to_owned(), body.to_owned()),
    };
    let im = match im.as_str() {
        "" | "+" => "1".to_owned(),
        "-" => "-1".to_owned(),
        _ => im.trim_start_matches('+').to_owned(),
    };
    check_decimal(&re)?;
    check_decimal(&im)?;
    Ok((re, im))
}

fn check_decimal(s: &str) -> Result<(), String> {
    s.parse::<f64>().map(|_| ()).map_err(|_| format!("not a number: {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_list("0..=2,7").unwrap(), vec![0, 1, 2, 7]);
        assert_eq!(parse_list("5").unwrap(), vec![5]);
        assert!(parse_list("3..1").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn complex_numbers() {
        let s = |x: &str| split_complex(x).unwrap();
        assert_eq!(s("0.5+2i"), ("0.5".into(), "2".into()));
        assert_eq!(s("-1+0.3i"), ("-1".into(), "0.3".into()));
        assert_eq!(s("0.5-1i"), ("0.5".into(), "-1".into()));
        assert_eq!(s("3"), ("3".into(), "0".into()));
        assert_eq!(s("2i"), ("0".into(), "2".into()));
        assert_eq!(s("1e-3-i"), ("1e-3".into(), "-1".into()));
        assert!(split_complex("abc").is_err());
    }

    #[test]
    fn config_file() {
        let c = ConfigFile::parse("# comment\na = 3\ntrunc=60 # inline\n\ndigits=auto\n").unwrap();
        assert_eq!(c.pick::<u32>(None, "a").unwrap(), Some(3));
        assert_eq!(c.pick::<u32>(Some(5), "a").unwrap(), Some(5));
        assert_eq!(c.pick::<u64>(None, "trunc").unwrap(), Some(60));
        assert_eq!(c.digits(None).unwrap(), Some(Digits::Auto));
        assert!(ConfigFile::parse("novalue").is_err());
        assert!(c.pick::<u32>(None, "digits").is_err());
    }
}
