use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use cleanflex::{Catalog, GridProfile, PeriodicFunction, SupportCurve};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// List flexes with their classification.
    Flexes,
    /// Clean-flex census with its checks.
    Census,
    /// Supporting-member tally for the order-3 space.
    Bose,
    /// Vertices of a convex curve given by its support function.
    Curve,
    /// Sextactic points of a convex curve.
    Sextactic,
    /// Census over a seeded random corpus.
    Corpus,
}

/// Flags shared by every command. All are optional here so that a JSON
/// config can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Fourier coefficients `a0,a1,b1,a2,b2,...` (half-integer frequencies
    /// with --antiperiodic).
    #[arg(long, allow_hyphen_values = true)]
    pub fourier: Option<String>,
    /// Support-function coefficients of a curve, same layout as --fourier.
    #[arg(long, allow_hyphen_values = true)]
    pub support: Option<String>,
    /// Catalog entry: sharp, ellipse, expcos, plateau.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameter as `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Read --fourier as an antiperiodic series and use the order-2n space.
    #[arg(long)]
    pub antiperiodic: bool,
    #[arg(long)]
    pub n: Option<usize>,
    /// Base grid size.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corpus size.
    #[arg(long)]
    pub count: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub fourier: Option<String>,
    pub support: Option<String>,
    pub catalog: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub antiperiodic: bool,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Fourier(Vec<f64>),
    Support(Vec<f64>),
    Catalog { name: String, params: BTreeMap<String, f64> },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// `None` only in corpus mode.
    pub source: Option<Source>,
    pub antiperiodic: bool,
    pub n: usize,
    pub grid: GridProfile,
    pub seed: u64,
    pub count: usize,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_COUNT: usize = 100;

impl RunConfig {
    /// Merges flags over the file (if any) and validates the result.
    pub fn resolve(command: Option<Command>, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let command = command
            .or(file.command)
            .ok_or_else(|| CliError::Parse("no command given".into()))?;

        let mut params = file.params;
        for p in &flags.params {
            let (k, v) = parse_param(p)?;
            params.insert(k, v);
        }

        // a source given on the command line replaces the file's source
        let cli_source = flags.fourier.is_some() || flags.support.is_some() || flags.catalog.is_some();
        let (fourier, support, catalog) = if cli_source {
            (flags.fourier, flags.support, flags.catalog)
        } else {
            (file.fourier, file.support, file.catalog)
        };
        let given = [fourier.is_some(), support.is_some(), catalog.is_some()]
            .iter()
            .filter(|x| **x)
            .count();
        if given > 1 {
            return Err(CliError::Parse("give only one of --fourier, --support, --catalog".into()));
        }
        let source = if let Some(s) = fourier {
            Some(Source::Fourier(parse_coeffs(&s)?))
        } else if let Some(s) = support {
            Some(Source::Support(parse_coeffs(&s)?))
        } else {
            catalog.map(|name| Source::Catalog { name, params })
        };

        let mut grid = GridProfile::default();
        if let Some(s) = flags.samples.or(file.samples) {
            grid.base_samples = s;
        }
        grid.validate()?;

        let cfg = Self {
            command,
            source,
            antiperiodic: flags.antiperiodic || file.antiperiodic,
            n: flags.n.or(file.n).unwrap_or(1),
            grid,
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            count: flags.count.or(file.count).unwrap_or(DEFAULT_COUNT),
            out: flags.out.or(file.out),
            svg: flags.svg.or(file.svg),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("--n must be at least 1".into()));
        }
        let curve_cmd = matches!(self.command, Command::Curve | Command::Sextactic);
        match (&self.source, self.command) {
            (None, Command::Corpus) => {}
            (Some(_), Command::Corpus) => {
                return Err(CliError::Parse("corpus mode generates its own functions".into()))
            }
            (None, _) => return Err(CliError::Parse("no function given".into())),
            (Some(Source::Support(_)), _) if !curve_cmd => {
                return Err(CliError::Parse("--support applies to curve and sextactic".into()))
            }
            (Some(Source::Fourier(_)), _) if curve_cmd => {
                return Err(CliError::Parse("curves are given by --support or --catalog".into()))
            }
            _ => {}
        }
        if self.antiperiodic && !matches!(self.command, Command::Flexes | Command::Census | Command::Corpus) {
            return Err(CliError::Parse("--antiperiodic applies to flexes, census and corpus".into()));
        }
        if self.command == Command::Bose && self.n != 1 {
            return Err(CliError::Parse("bose works in the order-3 space; use --n 1".into()));
        }
        if self.command == Command::Corpus && self.svg.is_some() {
            return Err(CliError::Parse("corpus mode writes no plot".into()));
        }
        if self.command == Command::Corpus && self.count == 0 {
            return Err(CliError::Parse("--count must be positive".into()));
        }
        Ok(())
    }

    pub fn function(&self) -> Result<PeriodicFunction, CliError> {
        match &self.source {
            Some(Source::Fourier(c)) | Some(Source::Support(c)) => Ok(if self.antiperiodic {
                PeriodicFunction::antiperiodic(c.clone())?
            } else {
                PeriodicFunction::fourier(c.clone())?
            }),
            Some(Source::Catalog { name, params }) => {
                if self.antiperiodic {
                    return Err(CliError::Parse("catalog entries are periodic".into()));
                }
                catalog_function(name, params, self.n)
            }
            None => Err(CliError::Parse("no function given".into())),
        }
    }

    pub fn curve(&self) -> Result<SupportCurve, CliError> {
        Ok(SupportCurve::new(self.function()?)?)
    }
}

fn catalog_function(name: &str, params: &BTreeMap<String, f64>, n: usize) -> Result<PeriodicFunction, CliError> {
    let allowed: &[&str] = match name {
        "sharp" => &[],
        "ellipse" => &["a", "b"],
        "expcos" => &["a"],
        "plateau" => &["lambda"],
        _ => return Err(CliError::Parse(format!("unknown catalog entry '{name}'"))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::Parse(format!("catalog entry '{name}' has no parameter '{k}'")));
    }
    let get = |k: &str| {
        params
            .get(k)
            .copied()
            .ok_or_else(|| CliError::Parse(format!("catalog entry '{name}' needs --param {k}=<value>")))
    };
    Ok(match name {
        "sharp" => PeriodicFunction::catalog(Catalog::Sharp { n })?,
        "ellipse" => PeriodicFunction::catalog(Catalog::EllipseSupport {
            a: get("a")?,
            b: get("b")?,
        })?,
        "expcos" => PeriodicFunction::catalog(Catalog::ExpCos { a: get("a")? })?,
        _ => PeriodicFunction::plateau(get("lambda")?)?,
    })
}

pub fn parse_coeffs(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse(format!("bad coefficient '{x}'")))
        })
        .collect()
}

fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Parse(format!("parameter '{s}' is not name=value")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("parameter '{s}' has a non-numeric value")))?;
    Ok((k.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn coefficients_parse() {
        assert_eq!(parse_coeffs("0, 0,0,-1.5,2e-3").unwrap(), vec![0.0, 0.0, 0.0, -1.5, 0.002]);
        assert!(parse_coeffs("1,,2").is_err());
        assert!(parse_coeffs("1,nan").is_err());
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("a = 2").unwrap(), ("a".into(), 2.0));
        assert!(parse_param("a").is_err());
        assert!(parse_param("a=x").is_err());
    }

    #[test]
    fn flags_override_the_file() {
        let dir = std::env::temp_dir().join(format!("cleanflex-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"command":"census","fourier":"0,0,0,0,1","n":2,"seed":7}"#).unwrap();
        let f = Flags {
            n: Some(1),
            config: Some(path),
            ..flags()
        };
        let cfg = RunConfig::resolve(None, f).unwrap();
        assert_eq!(cfg.command, Command::Census);
        assert_eq!(cfg.n, 1);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.source, Some(Source::Fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0])));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn sources_are_exclusive() {
        let f = Flags {
            fourier: Some("1".into()),
            catalog: Some("sharp".into()),
            ..flags()
        };
        assert!(RunConfig::resolve(Some(Command::Census), f).is_err());
    }

    #[test]
    fn catalog_needs_its_parameters() {
        let f = Flags {
            catalog: Some("ellipse".into()),
            params: vec!["a=2".into()],
            ..flags()
        };
        let cfg = RunConfig::resolve(Some(Command::Curve), f).unwrap();
        assert!(cfg.curve().is_err());
        let f = Flags {
            catalog: Some("expcos".into()),
            params: vec!["b=2".into()],
            ..flags()
        };
        assert!(RunConfig::resolve(Some(Command::Census), f).unwrap().function().is_err());
    }

    #[test]
    fn curves_reject_plain_fourier() {
        let f = Flags {
            fourier: Some("1,0,0".into()),
            ..flags()
        };
        assert!(RunConfig::resolve(Some(Command::Curve), f).is_err());
    }
}
