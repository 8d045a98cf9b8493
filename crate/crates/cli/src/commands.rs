//! One function per subcommand, each turning a [`RunConfig`] into a [`Report`].

use std::path::Path;

use harmonic_chain::observables::length_variance_dimensionless;
use harmonic_chain::scaling::{Preset, SweepColumn, SweepPlan};
use harmonic_chain::thermo::mode_thermo_table;
use harmonic_chain::chain::ELECTRON_VOLT_SI as ELECTRON_VOLT;
use harmonic_chain::{
    build_mode_table, enumerate_phonon_energies, fit_loglog, length_statistics, run_sweep,
};
use serde_json::{json, Map, Value};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;
use crate::format::round_sig;
use crate::output::{Cell, CsvTable, Report, Table};

pub const FIT_COLUMNS: [&str; 5] = ["T", "slope", "intercept", "residual", "points"];

pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        Command::Modes => modes(config),
        Command::Spectrum => spectrum(config),
        Command::Thermo => thermo(config),
        Command::Length => length(config),
        Command::Sweep => sweep(config),
        Command::Preset => preset(config),
        Command::Fit => fit(config),
    }
}

fn metadata(config: &RunConfig) -> Map<String, Value> {
    let p = config.precision;
    let mut m = Map::new();
    m.insert("command".into(), json!(config.command.name()));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command_line".into(), json!(config.command_line.join(" ")));
    m.insert("units".into(), json!(config.units.as_str()));
    m.insert(
        "spec".into(),
        json!({
            "n": config.n,
            "mass": round_sig(config.mass, p),
            "kappa": round_sig(config.kappa, p),
            "xi": round_sig(config.xi, p),
        }),
    );
    m.insert("temperature".into(), json!(round_sig(config.temp, p)));
    m.insert("precision".into(), json!(p));
    let mut notes = Vec::new();
    if config.temp == 0.0 && !matches!(config.command, Command::Sweep | Command::Fit) {
        notes.push("T = 0 evaluates the ground state: zero-point fluctuations only".to_string());
    }
    m.insert("notes".into(), json!(notes));
    m
}

fn modes(config: &RunConfig) -> Result<Report, CliError> {
    let spec = config.spec()?;
    let table = build_mode_table(&spec);
    let n = spec.n();
    let mut out = Table::new(
        ["m", "k_m", "omega_m", "parity"]
            .into_iter()
            .map(String::from)
            .chain((1..=n).map(|i| format!("Y_{i}"))),
    );
    for m in 0..n {
        let mut row: Vec<Cell> = vec![
            m.into(),
            table.wavenumbers()[m].into(),
            table.frequencies()[m].into(),
            table.parities()[m].as_str().into(),
        ];
        row.extend(table.mode(m).iter().map(|&y| Cell::from(y)));
        out.push(row);
    }
    Ok(Report { metadata: metadata(config), table: out, fits: None })
}

fn spectrum(config: &RunConfig) -> Result<Report, CliError> {
    let spec = config.spec()?;
    let hbar = spec.units().hbar();
    let cutoff = config.cutoff.unwrap_or(2.0 * hbar * spec.band_edge());
    let levels = enumerate_phonon_energies(&spec, cutoff)?;
    let mut out = Table::new(
        ["level", "energy"]
            .into_iter()
            .map(String::from)
            .chain((1..spec.n()).map(|m| format!("nu_{m}"))),
    );
    for (i, level) in levels.iter().enumerate() {
        let mut row: Vec<Cell> = vec![i.into(), level.energy.into()];
        row.extend(level.occupations.iter().map(|&nu| Cell::from(nu)));
        out.push(row);
    }
    let mut metadata = metadata(config);
    metadata.insert("cutoff".into(), json!(round_sig(cutoff, config.precision)));
    Ok(Report { metadata, table: out, fits: None })
}

fn thermo(config: &RunConfig) -> Result<Report, CliError> {
    let spec = config.spec()?;
    let state = config.thermo_state()?;
    let stats = mode_thermo_table(&spec, &state)?;
    let mut out = Table::new(["m", "omega_m", "beta_hbar_omega", "Z", "nu_mean", "u2_mean"]);
    for (i, s) in stats.iter().enumerate() {
        out.push(vec![
            (i + 1).into(),
            s.frequency.into(),
            state.reduced_energy(s.frequency).into(),
            s.partition.into(),
            s.occupation.into(),
            s.u_squared.into(),
        ]);
    }
    Ok(Report { metadata: metadata(config), table: out, fits: None })
}

pub const LENGTH_COLUMNS: [&str; 11] = [
    "N",
    "T",
    "gamma",
    "mean_length",
    "variance_exact",
    "variance_dimensionless",
    "variance_classical",
    "rel_dispersion",
    "asymptotic",
    "ratio",
    "riemann_bound",
];

fn length(config: &RunConfig) -> Result<Report, CliError> {
    let spec = config.spec()?;
    let state = config.thermo_state()?;
    let stats = length_statistics(&spec, &state)?;
    let dimensionless = length_variance_dimensionless(&spec, &state)?;
    let classical =
        (spec.n() - 1) as f64 * state.thermal_energy() / (spec.stiffness() * spec.stiffness());
    let mut out = Table::new(LENGTH_COLUMNS);
    out.push(vec![
        spec.n().into(),
        config.temp.into(),
        stats.gamma.into(),
        stats.mean.into(),
        stats.variance.into(),
        dimensionless.into(),
        classical.into(),
        stats.relative_dispersion.into(),
        stats.asymptotic.unwrap_or(f64::NAN).into(),
        stats.asymptotic_ratio().unwrap_or(f64::NAN).into(),
        stats.bound.unwrap_or(f64::NAN).into(),
    ]);
    Ok(Report { metadata: metadata(config), table: out, fits: None })
}

fn fit_table(fits: impl IntoIterator<Item = (f64, Option<harmonic_chain::LogLogFit<f64>>)>) -> Table {
    let mut table = Table::new(FIT_COLUMNS);
    for (t, fit) in fits {
        let row = match fit {
            Some(f) => vec![t.into(), f.slope.into(), f.intercept.into(), f.residual.into(), f.points.into()],
            None => vec![t.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), 0usize.into()],
        };
        table.push(row);
    }
    table
}

fn sweep(config: &RunConfig) -> Result<Report, CliError> {
    let plan = SweepPlan::new(config.n_values.clone(), config.temps.clone(), config.spec()?)?
        .with_fit_min_n(config.fit_min_n);
    let result = run_sweep(&plan)?;
    let mut out = Table::new(result.columns.iter().map(|c| c.name()));
    for row in &result.rows {
        out.push(
            result
                .columns
                .iter()
                .map(|&c| match c {
                    SweepColumn::N => Cell::from(row.n),
                    other => Cell::from(row.value(other)),
                })
                .collect(),
        );
    }
    let fits = fit_table(result.fits.iter().map(|f| (f.temperature, f.fit)));
    let p = config.precision;
    let mut metadata = metadata(config);
    metadata.insert("n_values".into(), json!(config.n_values));
    metadata.insert(
        "temperatures".into(),
        json!(config.temps.iter().map(|&t| round_sig(t, p)).collect::<Vec<_>>()),
    );
    metadata.insert("fit_min_n".into(), json!(config.fit_min_n));
    Ok(Report { metadata, table: out, fits: Some(fits) })
}

fn preset(config: &RunConfig) -> Result<Report, CliError> {
    let preset = Preset::<f64>::by_name(&config.preset)?;
    let spec = config.spec()?;
    let state = config.thermo_state()?;
    let hbar = spec.units().hbar();
    let hbar_omega = hbar * spec.band_edge();
    let stats = length_statistics(&spec, &state)?;
    let mut out = Table::new([
        "preset",
        "N",
        "mass",
        "kappa",
        "xi",
        "omega_max",
        "hbar_omega_max_J",
        "hbar_omega_max_eV",
        "T",
        "kT_J",
        "kT_eV",
        "gamma",
        "mean_length",
        "rel_dispersion",
        "asymptotic",
    ]);
    out.push(vec![
        preset.name.into(),
        spec.n().into(),
        spec.mass().into(),
        spec.stiffness().into(),
        spec.spacing().into(),
        spec.band_edge().into(),
        hbar_omega.into(),
        (hbar_omega / ELECTRON_VOLT).into(),
        state.temperature().into(),
        state.thermal_energy().into(),
        (state.thermal_energy() / ELECTRON_VOLT).into(),
        stats.gamma.into(),
        stats.mean.into(),
        stats.relative_dispersion.into(),
        stats.asymptotic.unwrap_or(f64::NAN).into(),
    ]);
    Ok(Report { metadata: metadata(config), table: out, fits: None })
}

/// `(N, T, rel_dispersion)` triples from a stored sweep in either format.
pub fn read_sweep_points(path: &Path) -> Result<Vec<(usize, f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let bad = |what: &str| CliError::Validation(format!("{}: {what}", path.display()));
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
        let rows = doc["rows"].as_array().ok_or_else(|| bad("missing `rows` array"))?;
        rows.iter()
            .map(|r| {
                let n = r["N"].as_u64().ok_or_else(|| bad("row without integer `N`"))?;
                let t = r["T"].as_f64().ok_or_else(|| bad("row without numeric `T`"))?;
                let d = r["rel_dispersion"]
                    .as_f64()
                    .ok_or_else(|| bad("row without numeric `rel_dispersion`"))?;
                Ok((n as usize, t, d))
            })
            .collect()
    } else {
        let table = CsvTable::parse(&text).ok_or_else(|| bad("empty file"))?;
        let col = |name: &str| table.column(name).ok_or_else(|| bad(&format!("missing column `{name}`")));
        let (ci, ct, cd) = (col("N")?, col("T")?, col("rel_dispersion")?);
        table
            .rows
            .iter()
            .map(|r| {
                let field = |i: usize| r.get(i).map(String::as_str).unwrap_or("");
                let n = field(ci).parse().map_err(|_| bad("unparsable `N`"))?;
                let t = field(ct).parse().map_err(|_| bad("unparsable `T`"))?;
                let d = field(cd).parse().map_err(|_| bad("unparsable `rel_dispersion`"))?;
                Ok((n, t, d))
            })
            .collect()
    }
}

fn fit(config: &RunConfig) -> Result<Report, CliError> {
    let path = config.input.as_deref().expect("validated by config");
    let points = read_sweep_points(path)?;
    let mut temps: Vec<f64> = Vec::new();
    for &(_, t, _) in &points {
        if !temps.contains(&t) {
            temps.push(t);
        }
    }
    let fits = temps
        .iter()
        .map(|&t| {
            let pts: Vec<(f64, f64)> = points
                .iter()
                .filter(|p| p.1 == t && p.0 >= config.fit_min_n)
                .map(|p| (p.0 as f64, p.2))
                .collect();
            let fit = if pts.len() >= 3 { Some(fit_loglog(&pts)?) } else { None };
            Ok((t, fit))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut metadata = metadata(config);
    metadata.insert("input".into(), json!(path.display().to_string()));
    metadata.insert("fit_min_n".into(), json!(config.fit_min_n));
    Ok(Report { metadata, table: fit_table(fits), fits: None })
}

/// Serializes `report` according to the configured format.
pub fn render(report: &Report, config: &RunConfig) -> String {
    match config.format {
        Format::Json => report.to_json(config.precision),
        Format::Csv => {
            let mut text = report.to_csv(config.precision);
            if let Some(fits) = report.fits_csv(config.precision) {
                text.push('\n');
                text.push_str(&fits);
            }
            text
        }
    }
}

/// Writes `report` to `--out` (CSV fits go to a `.fit.csv` sidecar).
pub fn write_report(report: &Report, config: &RunConfig, path: &Path) -> Result<(), CliError> {
    let write = |p: &Path, text: &str| {
        std::fs::write(p, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display())))
    };
    match config.format {
        Format::Json => write(path, &report.to_json(config.precision)),
        Format::Csv => {
            write(path, &report.to_csv(config.precision))?;
            if let Some(fits) = report.fits_csv(config.precision) {
                write(&fit_sidecar(path), &fits)?;
            }
            Ok(())
        }
    }
}

pub fn fit_sidecar(path: &Path) -> std::path::PathBuf {
    path.with_extension("fit.csv")
}
