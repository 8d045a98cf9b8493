//! Run configuration: CLI flags layered over an optional `key=value` file
//! layered over built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use harmonic_chain::scaling::{geometric_n_values, Preset, DEFAULT_FIT_MIN_N};
use harmonic_chain::{ChainSpec, ThermoState, UnitKind, UnitSystem};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 12;
const DEFAULT_N: usize = 8;
const DEFAULT_PRESET_N: usize = 1_000_000;

/// Keys accepted in a config file; each mirrors the long flag of the same name.
pub const KNOWN_KEYS: [&str; 17] = [
    "n", "mass", "kappa", "xi", "units", "temp", "out", "format", "precision", "n-min", "n-max",
    "n-factor", "temps", "fit-min-n", "cutoff", "input", "preset",
];

#[derive(Debug, Parser)]
#[command(name = "hchain", version, about = "Quantum harmonic chain calculator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,

    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Args, Default)]
pub struct SharedArgs {
    /// Number of particles
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n: Option<String>,
    /// Particle mass
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mass: Option<String>,
    /// Oscillator strength κ (spring constant κ²)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa: Option<String>,
    /// Equilibrium interparticle distance
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi: Option<String>,
    /// Unit system: reduced or si
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub units: Option<String>,
    /// Temperature
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub temp: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub out: Option<String>,
    /// Output format: csv or json
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub format: Option<String>,
    /// key=value configuration file
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub config: Option<PathBuf>,
    /// Significant digits in text output
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub precision: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Wavenumbers, frequencies, parities and amplitudes of all normal modes
    Modes,
    /// Phonon excitation levels up to an energy cutoff
    Spectrum {
        #[arg(long)]
        cutoff: Option<String>,
    },
    /// Per-mode Gibbs statistics
    Thermo,
    /// Thermal statistics of the chain length
    Length,
    /// Scan over N and T with log-log fits of the relative dispersion
    Sweep {
        #[arg(long = "n-min")]
        n_min: Option<String>,
        #[arg(long = "n-max")]
        n_max: Option<String>,
        #[arg(long = "n-factor")]
        n_factor: Option<String>,
        /// Comma-separated temperatures
        #[arg(long)]
        temps: Option<String>,
        #[arg(long = "fit-min-n")]
        fit_min_n: Option<String>,
    },
    /// Material preset in SI units
    Preset {
        /// Preset name
        name: Option<String>,
    },
    /// Refit a stored sweep table
    Fit {
        #[arg(long)]
        input: Option<String>,
        #[arg(long = "fit-min-n")]
        fit_min_n: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modes,
    Spectrum,
    Thermo,
    Length,
    Sweep,
    Preset,
    Fit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Spectrum => "spectrum",
            Command::Thermo => "thermo",
            Command::Length => "length",
            Command::Sweep => "sweep",
            Command::Preset => "preset",
            Command::Fit => "fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub mass: f64,
    pub kappa: f64,
    pub xi: f64,
    pub units: UnitKind,
    pub temp: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub precision: usize,
    pub n_values: Vec<usize>,
    pub temps: Vec<f64>,
    pub fit_min_n: usize,
    pub cutoff: Option<f64>,
    pub preset: String,
    pub input: Option<PathBuf>,
    /// Arguments after the program name, recorded in output metadata.
    pub command_line: Vec<String>,
}

impl RunConfig {
    pub fn unit_system(&self) -> UnitSystem<f64> {
        UnitSystem::new(self.units)
    }

    pub fn spec(&self) -> Result<ChainSpec<f64>, CliError> {
        Ok(ChainSpec::new(self.n, self.mass, self.kappa, self.xi, self.unit_system())?)
    }

    /// Thermal state; `temp = 0` selects the ground state.
    pub fn thermo_state(&self) -> Result<ThermoState<f64>, CliError> {
        Ok(ThermoState::new_or_ground(self.temp, self.unit_system())?)
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Validation(format!("unknown config key `{key}`")));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Validation(format!("cannot read config file {}: {e}", path.display()))
    })?;
    parse_config_text(&text)
}

fn flag_settings(cli: &Cli) -> (Command, BTreeMap<String, String>) {
    let mut map = BTreeMap::new();
    let mut put = |key: &str, value: &Option<String>| {
        if let Some(v) = value {
            map.insert(key.to_string(), v.clone());
        }
    };
    let s = &cli.shared;
    put("n", &s.n);
    put("mass", &s.mass);
    put("kappa", &s.kappa);
    put("xi", &s.xi);
    put("units", &s.units);
    put("temp", &s.temp);
    put("out", &s.out);
    put("format", &s.format);
    put("precision", &s.precision);
    let command = match &cli.command {
        CommandArgs::Modes => Command::Modes,
        CommandArgs::Spectrum { cutoff } => {
            put("cutoff", cutoff);
            Command::Spectrum
        }
        CommandArgs::Thermo => Command::Thermo,
        CommandArgs::Length => Command::Length,
        CommandArgs::Sweep {
            n_min,
            n_max,
            n_factor,
            temps,
            fit_min_n,
        } => {
            put("n-min", n_min);
            put("n-max", n_max);
            put("n-factor", n_factor);
            put("temps", temps);
            put("fit-min-n", fit_min_n);
            Command::Sweep
        }
        CommandArgs::Preset { name } => {
            put("preset", name);
            Command::Preset
        }
        CommandArgs::Fit { input, fit_min_n } => {
            put("input", input);
            put("fit-min-n", fit_min_n);
            Command::Fit
        }
    };
    (command, map)
}

fn unit_suffix(key: &str) -> Option<&'static str> {
    match key {
        "mass" => Some("kg"),
        "kappa" => Some("kg^0.5/s"),
        "xi" => Some("m"),
        "temp" | "temps" => Some("K"),
        "cutoff" => Some("J"),
        _ => None,
    }
}

/// Parses a physical quantity; SI mode accepts the unit suffix of `key`.
pub fn parse_quantity(key: &str, raw: &str, units: UnitKind) -> Result<f64, CliError> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<f64>() {
        return Ok(v);
    }
    let suffix = unit_suffix(key);
    match (units, suffix) {
        (UnitKind::Si, Some(sfx)) if raw.ends_with(sfx) => {
            let number = raw[..raw.len() - sfx.len()].trim();
            number.parse::<f64>().map_err(|_| {
                CliError::Validation(format!("`{key}`: cannot parse `{raw}` as a number"))
            })
        }
        (UnitKind::Reduced, _) if raw.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '.' || c == '-') => {
            Err(CliError::Validation(format!(
                "`{key}`: unit suffixes are only accepted with --units si (got `{raw}`)"
            )))
        }
        (UnitKind::Si, Some(sfx)) => Err(CliError::Validation(format!(
            "`{key}`: cannot parse `{raw}` (expected a number, optionally suffixed with `{sfx}`)"
        ))),
        _ => Err(CliError::Validation(format!("`{key}`: cannot parse `{raw}` as a number"))),
    }
}

fn parse_count(key: &str, raw: &str) -> Result<usize, CliError> {
    raw.trim()
        .parse::<usize>()
        .map_err(|_| CliError::Validation(format!("`{key}`: expected a non-negative integer, got `{raw}`")))
}

/// Builds a validated [`RunConfig`] from command-line arguments (including
/// the program name) with precedence flag > config file > default.
pub fn parse_config(args: &[String]) -> Result<RunConfig, CliError> {
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    let (command, flags) = flag_settings(&cli);
    let mut settings = match &cli.shared.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    settings.extend(flags);
    resolve(command, &settings, args.iter().skip(1).cloned().collect())
}

/// Applies defaults to merged settings and validates every value.
pub fn resolve(
    command: Command,
    settings: &BTreeMap<String, String>,
    command_line: Vec<String>,
) -> Result<RunConfig, CliError> {
    let get = |k: &str| settings.get(k).map(String::as_str);

    let units = match get("units") {
        None | Some("reduced") => UnitKind::Reduced,
        Some("si") => UnitKind::Si,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "`units`: expected `reduced` or `si`, got `{other}`"
            )))
        }
    };
    let preset_name = get("preset").unwrap_or("sodium-like").to_string();
    let (units, defaults) = if command == Command::Preset {
        let preset = Preset::<f64>::by_name(&preset_name)?;
        (UnitKind::Si, preset)
    } else {
        (units, Preset::<f64>::by_name("sodium-like")?)
    };
    // SI defaults come from the sodium-like material; reduced defaults are 1.
    let (d_mass, d_kappa, d_xi, d_temp) = match units {
        UnitKind::Si => (defaults.mass, defaults.stiffness(), defaults.spacing, defaults.temperature),
        UnitKind::Reduced => (1.0, 1.0, 1.0, 1.0),
    };
    let quantity = |k: &str, default: f64| -> Result<f64, CliError> {
        match get(k) {
            Some(raw) => parse_quantity(k, raw, units),
            None => Ok(default),
        }
    };

    let d_n = if command == Command::Preset { DEFAULT_PRESET_N } else { DEFAULT_N };
    let n = match get("n") {
        Some(raw) => parse_count("n", raw)?,
        None => d_n,
    };
    let mass = quantity("mass", d_mass)?;
    let kappa = quantity("kappa", d_kappa)?;
    let xi = quantity("xi", d_xi)?;
    let temp = quantity("temp", d_temp)?;

    let format = match get("format") {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "`format`: expected `csv` or `json`, got `{other}`"
            )))
        }
    };
    let precision = match get("precision") {
        Some(raw) => parse_count("precision", raw)?,
        None => DEFAULT_PRECISION,
    };
    if !(1..=17).contains(&precision) {
        return Err(CliError::Validation(
            "`precision`: must satisfy 1 <= precision <= 17".into(),
        ));
    }

    let n_min = get("n-min").map(|r| parse_count("n-min", r)).transpose()?.unwrap_or(256);
    let n_max = get("n-max").map(|r| parse_count("n-max", r)).transpose()?.unwrap_or(65_536);
    let n_factor = get("n-factor").map(|r| parse_count("n-factor", r)).transpose()?.unwrap_or(2);
    let fit_min_n = get("fit-min-n")
        .map(|r| parse_count("fit-min-n", r))
        .transpose()?
        .unwrap_or(DEFAULT_FIT_MIN_N);
    let temps = match get("temps") {
        Some(raw) => raw
            .split(',')
            .map(|t| parse_quantity("temps", t, units))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![temp],
    };
    let cutoff = get("cutoff").map(|r| parse_quantity("cutoff", r, units)).transpose()?;

    let config = RunConfig {
        command,
        n,
        mass,
        kappa,
        xi,
        units,
        temp,
        out: get("out").map(PathBuf::from),
        format,
        precision,
        n_values: if command == Command::Sweep {
            geometric_n_values(n_min, n_max, n_factor)?
        } else {
            Vec::new()
        },
        temps,
        fit_min_n,
        cutoff,
        preset: preset_name,
        input: get("input").map(PathBuf::from),
        command_line,
    };

    // physical invariants, checked up front with the library's own rules
    config.spec()?;
    if temp < 0.0 || !temp.is_finite() {
        return Err(CliError::Validation(
            "invalid parameter `temp`: must satisfy a finite temperature >= 0".into(),
        ));
    }
    if command == Command::Sweep {
        for &t in &config.temps {
            ThermoState::new(t, config.unit_system())?;
        }
    }
    if command == Command::Fit && config.input.is_none() {
        return Err(CliError::Validation("`fit` requires --input <sweep output>".into()));
    }
    Ok(config)
}
