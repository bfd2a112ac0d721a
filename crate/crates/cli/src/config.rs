use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use harmdist::descriptor::{mapping_from_value, parse_mapping, Mapping};
use harmdist::norms::SupConfig;
use harmdist::verifier::{BoundKind, BoundParams, SampleCounts};
use harmdist::{catalog, Error};
use serde::Deserialize;
use serde_json::Value;

/// Default pair seed when none is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config keys, descriptors or parameters.
    Config(String),
    Library(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 4,
            CliError::Library(Error::Parameter { .. } | Error::Descriptor { .. }) => 4,
            CliError::Library(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Keys accepted in a `--config` file; anything else is rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub map: Option<Value>,
    pub bound: Option<String>,
    pub epsilon: Option<f64>,
    pub t: Option<f64>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub r_max: Option<f64>,
    pub grid: Option<(usize, usize)>,
    pub seed: Option<u64>,
    pub pairs: Option<usize>,
    pub out: Option<PathBuf>,
    pub allow_unmet: Option<bool>,
    pub search: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Catalog name, `harmonic-mobius(h, alpha)`, or a JSON descriptor file
    #[arg(long)]
    pub map: Option<String>,
    /// JSON run configuration; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Outer radius for suprema and pair sampling
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    /// Sup grid as `radii,angles`
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Uniform pairs; boundary-biased and near-diagonal get a tenth each
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Directory for report files
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `radii,angles`, got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("grid entries must be positive integers, got {x:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

pub struct Settings {
    pub mapping: Mapping,
    pub map_id: String,
    pub params: BoundParams,
    pub sup: SupConfig,
    pub seed: u64,
    pub counts: SampleCounts,
    pub out: Option<PathBuf>,
    pub bound: Option<BoundKind>,
    pub allow_unmet: bool,
    pub search: usize,
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn resolve_map(map: &Value) -> Result<(Mapping, String), CliError> {
    match map {
        Value::String(s) => {
            let path = Path::new(s);
            if s.trim_start().starts_with('{') {
                let m = parse_mapping(s)?;
                let id = m.id.clone().unwrap_or_else(|| "inline".to_string());
                Ok((m, id))
            } else if path.is_file() {
                let text = std::fs::read_to_string(path)?;
                let m = parse_mapping(&text)?;
                let id = m.id.clone().unwrap_or_else(|| {
                    path.file_stem()
                        .map(|x| x.to_string_lossy().into_owned())
                        .unwrap_or_else(|| s.clone())
                });
                Ok((m, id))
            } else {
                let m = catalog::resolve(s)?;
                Ok((m, s.clone()))
            }
        }
        Value::Object(_) => {
            let m = mapping_from_value(map)?;
            let id = m.id.clone().unwrap_or_else(|| "inline".to_string());
            Ok((m, id))
        }
        _ => Err(CliError::Config(
            "map must be a name, a path or a descriptor object".into(),
        )),
    }
}

impl Settings {
    pub fn resolve(
        flags: &Flags,
        bound: Option<&str>,
        allow_unmet: bool,
        search: Option<usize>,
    ) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => load_config(p)?,
            None => RunConfig::default(),
        };
        let map = match &flags.map {
            Some(s) => Value::String(s.clone()),
            None => file.map.clone().ok_or_else(|| {
                CliError::Config("no map given (use --map or a config `map` key)".into())
            })?,
        };
        let (mapping, map_id) = resolve_map(&map)?;
        let d = BoundParams::default();
        let params = BoundParams {
            p: flags.p.or(file.p).unwrap_or(d.p),
            t: flags.t.or(file.t).unwrap_or(d.t),
            alpha: flags.alpha.or(file.alpha).unwrap_or(d.alpha),
            beta: flags.beta.or(file.beta).unwrap_or(d.beta),
            c: flags.c.or(file.c).unwrap_or(d.c),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or(d.epsilon),
        };
        let sd = SupConfig::default();
        let sup = SupConfig {
            r_max: flags.r_max.or(file.r_max).unwrap_or(sd.r_max),
            grid: flags.grid.or(file.grid).unwrap_or(sd.grid),
            ..sd
        };
        sup.validate()?;
        let counts = match flags.pairs.or(file.pairs) {
            None => SampleCounts::default(),
            Some(0) => return Err(CliError::Config("--pairs must be at least 1".into())),
            Some(n) => SampleCounts {
                uniform: n,
                boundary: (n / 10).max(1),
                near_diagonal: (n / 10).max(1),
            },
        };
        let bound = match bound.map(str::to_string).or(file.bound.clone()) {
            Some(b) => Some(b.parse::<BoundKind>()?),
            None => None,
        };
        Ok(Settings {
            mapping,
            map_id,
            params,
            sup,
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            counts,
            out: flags.out.clone().or(file.out),
            bound,
            allow_unmet: allow_unmet || file.allow_unmet.unwrap_or(false),
            search: search.or(file.search).unwrap_or(0),
        })
    }
}
