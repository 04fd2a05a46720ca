//! Run configuration: defaults, then a `key=value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use adlv_core::criterion::Setting;
use adlv_core::iwahori::{AffineElement, IwahoriWeyl, KottwitzClass};
use adlv_core::notation;
use adlv_core::weyl::{DiagramAutomorphism, DEFAULT_W0_CAP};

use crate::CliError;

pub const DEFAULT_CAP: usize = DEFAULT_W0_CAP as usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::usage(format!("unknown format `{other}` (json, csv, svg)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        })
    }
}

/// Which basic class `b` to test against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KappaSpec {
    /// `κ(b) = κ(x)` for every `x`.
    MatchX,
    /// `κ(b) = κ(t^λ)` for this coweight `λ`.
    Coweight(Vec<i64>),
}

impl FromStr for KappaSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "match-x" => Ok(KappaSpec::MatchX),
            other => Ok(KappaSpec::Coweight(notation::parse_int_vector(other)?)),
        }
    }
}

impl fmt::Display for KappaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaSpec::MatchX => f.write_str("match-x"),
            KappaSpec::Coweight(v) => f.write_str(&notation::format_ints(v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub system: String,
    pub sigma: String,
    pub length_bound: usize,
    pub kappa_b: KappaSpec,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: "A2".into(),
            sigma: "id".into(),
            length_bound: 4,
            kappa_b: KappaSpec::MatchX,
            format: None,
            out: None,
            jobs: 1,
            cap: DEFAULT_CAP,
        }
    }
}

/// Values given on the command line; unset fields fall through.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub system: Option<String>,
    pub sigma: Option<String>,
    pub length_bound: Option<usize>,
    pub kappa_b: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub cap: Option<usize>,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }
        cfg.apply(flags)?;
        Ok(cfg)
    }

    /// Applies `key=value` lines. Blank lines and `#` comments are skipped;
    /// keys may use `-` or `_`.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key=value", n + 1)))?;
            let value = value.trim().to_string();
            let bad =
                |what: &str| CliError::usage(format!("config line {}: {what} must be a nonnegative integer", n + 1));
            match key.trim().replace('_', "-").as_str() {
                "system" => o.system = Some(value),
                "sigma" => o.sigma = Some(value),
                "length-bound" => o.length_bound = Some(value.parse().map_err(|_| bad("length-bound"))?),
                "kappa-b" => o.kappa_b = Some(value),
                "format" => o.format = Some(value),
                "out" => o.out = Some(PathBuf::from(value)),
                "jobs" => o.jobs = Some(value.parse().map_err(|_| bad("jobs"))?),
                "cap" => o.cap = Some(value.parse().map_err(|_| bad("cap"))?),
                other => return Err(CliError::usage(format!("config line {}: unknown key `{other}`", n + 1))),
            }
        }
        self.apply(&o)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(v) = &o.system {
            self.system = v.clone();
        }
        if let Some(v) = &o.sigma {
            self.sigma = v.clone();
        }
        if let Some(v) = o.length_bound {
            self.length_bound = v;
        }
        if let Some(v) = &o.kappa_b {
            self.kappa_b = v.parse()?;
        }
        if let Some(v) = &o.format {
            self.format = Some(v.parse()?);
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = o.jobs {
            if v == 0 {
                return Err(CliError::usage("jobs must be at least 1"));
            }
            self.jobs = v;
        }
        if let Some(v) = o.cap {
            self.cap = v;
        }
        Ok(())
    }

    /// The requested format, or `default` when unset; errors if the command
    /// does not support it.
    pub fn format_for(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::usage(format!("format {f} is not available for this command")))
        }
    }

    pub fn setting(&self) -> Result<Setting, CliError> {
        let sys = self.system.parse()?;
        let group = IwahoriWeyl::new(sys);
        let sigma = DiagramAutomorphism::parse(group.sys(), &self.sigma)?;
        Ok(Setting::with_cap(group, sigma, self.cap as u128)?)
    }

    /// The fixed class of `b`, if one was configured.
    pub fn fixed_kappa(&self, st: &Setting) -> Result<Option<KottwitzClass>, CliError> {
        match &self.kappa_b {
            KappaSpec::MatchX => Ok(None),
            KappaSpec::Coweight(lambda) => {
                if lambda.len() != st.group().rank() {
                    return Err(CliError::usage(format!(
                        "kappa-b has {} coordinates, expected {}",
                        lambda.len(),
                        st.group().rank()
                    )));
                }
                Ok(Some(st.group().kottwitz_of_coweight(lambda, st.sigma())))
            }
        }
    }

    /// The class of `b` used for `x`.
    pub fn kappa_for(&self, st: &Setting, fixed: &Option<KottwitzClass>, x: &AffineElement) -> KottwitzClass {
        fixed.clone().unwrap_or_else(|| st.kottwitz(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let flags = Overrides {
            length_bound: Some(7),
            ..Default::default()
        };
        let mut cfg = RunConfig::default();
        cfg.apply_file("system = B2\n# comment\nlength_bound=3\nkappa-b = 1,0\n")
            .unwrap();
        cfg.apply(&flags).unwrap();
        assert_eq!(cfg.system, "B2");
        assert_eq!(cfg.length_bound, 7);
        assert_eq!(cfg.kappa_b, KappaSpec::Coweight(vec![1, 0]));
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.apply_file("system").unwrap_err().code, 2);
        assert_eq!(cfg.apply_file("colour=red").unwrap_err().code, 2);
        assert_eq!(cfg.apply_file("jobs=-1").unwrap_err().code, 2);
        assert_eq!(cfg.apply_file("format=png").unwrap_err().code, 2);
    }

    #[test]
    fn kappa_spec_round_trip() {
        assert_eq!("match-x".parse::<KappaSpec>().unwrap(), KappaSpec::MatchX);
        let k: KappaSpec = "[0, 1]".parse().unwrap();
        assert_eq!(k.to_string(), "[0,1]");
    }
}
