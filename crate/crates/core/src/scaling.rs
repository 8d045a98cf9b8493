//! Sweeps over chain size and temperature, log-log fits of the relative
//! length dispersion, and the SI material preset.

use rayon::prelude::*;

use crate::chain::{ChainSpec, UnitSystem};
use crate::error::{Error, Result};
use crate::observables::{asymptotic_dispersion, gamma, length_variance_exact, mean_length};
use crate::scalar::{compensated_sum, Scalar};
use crate::thermo::ThermoState;

/// Smallest N used in fits unless configured otherwise.
pub const DEFAULT_FIT_MIN_N: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepColumn {
    N,
    Temperature,
    Gamma,
    MeanLength,
    VarianceExact,
    RelDispersion,
    Asymptotic,
    Ratio,
}

impl SweepColumn {
    pub const ALL: [SweepColumn; 8] = [
        SweepColumn::N,
        SweepColumn::Temperature,
        SweepColumn::Gamma,
        SweepColumn::MeanLength,
        SweepColumn::VarianceExact,
        SweepColumn::RelDispersion,
        SweepColumn::Asymptotic,
        SweepColumn::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepColumn::N => "N",
            SweepColumn::Temperature => "T",
            SweepColumn::Gamma => "gamma",
            SweepColumn::MeanLength => "mean_length",
            SweepColumn::VarianceExact => "variance_exact",
            SweepColumn::RelDispersion => "rel_dispersion",
            SweepColumn::Asymptotic => "asymptotic",
            SweepColumn::Ratio => "ratio",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Grid of particle counts and temperatures evaluated with the material
/// parameters of `base_spec` (its own `n` is ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan<T> {
    pub n_values: Vec<usize>,
    pub temperatures: Vec<T>,
    pub base_spec: ChainSpec<T>,
    pub columns: Vec<SweepColumn>,
    pub fit_min_n: usize,
}

impl<T: Scalar> SweepPlan<T> {
    pub fn new(n_values: Vec<usize>, temperatures: Vec<T>, base_spec: ChainSpec<T>) -> Result<Self> {
        let plan = Self {
            n_values,
            temperatures,
            base_spec,
            columns: SweepColumn::ALL.to_vec(),
            fit_min_n: DEFAULT_FIT_MIN_N,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_fit_min_n(mut self, fit_min_n: usize) -> Self {
        self.fit_min_n = fit_min_n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values[0] < 2 {
            return Err(Error::InvalidParameter {
                name: "n_values",
                constraint: "a non-empty list with every N >= 2",
            });
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "n_values",
                constraint: "strictly ascending",
            });
        }
        if self.temperatures.is_empty()
            || self
                .temperatures
                .iter()
                .any(|&t| !(t > T::zero() && t.is_finite()))
        {
            return Err(Error::InvalidParameter {
                name: "temps",
                constraint: "a non-empty list of finite temperatures > 0",
            });
        }
        Ok(())
    }
}

/// `n_min, n_min·factor, …` up to and including `n_max`.
pub fn geometric_n_values(n_min: usize, n_max: usize, factor: usize) -> Result<Vec<usize>> {
    if n_min < 2 {
        return Err(Error::InvalidParameter {
            name: "n-min",
            constraint: "n-min >= 2",
        });
    }
    if n_max < n_min {
        return Err(Error::InvalidParameter {
            name: "n-max",
            constraint: "n-max >= n-min",
        });
    }
    if factor < 2 {
        return Err(Error::InvalidParameter {
            name: "n-factor",
            constraint: "n-factor >= 2",
        });
    }
    let mut values = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        values.push(n);
        n = match n.checked_mul(factor) {
            Some(next) => next,
            None => break,
        };
    }
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub n: usize,
    pub temperature: T,
    pub gamma: T,
    pub mean_length: T,
    pub variance_exact: T,
    pub rel_dispersion: T,
    pub asymptotic: T,
    /// `asymptotic / rel_dispersion`.
    pub ratio: T,
}

impl<T: Scalar> SweepRow<T> {
    pub fn value(&self, column: SweepColumn) -> T {
        match column {
            SweepColumn::N => T::from_usize_lossy(self.n),
            SweepColumn::Temperature => self.temperature,
            SweepColumn::Gamma => self.gamma,
            SweepColumn::MeanLength => self.mean_length,
            SweepColumn::VarianceExact => self.variance_exact,
            SweepColumn::RelDispersion => self.rel_dispersion,
            SweepColumn::Asymptotic => self.asymptotic,
            SweepColumn::Ratio => self.ratio,
        }
    }
}

/// Ordinary least squares of `ln value` on `ln N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Euclidean norm of the residuals in log space.
    pub residual: T,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureFit<T> {
    pub temperature: T,
    /// Absent when fewer than three rows reach `fit_min_n`.
    pub fit: Option<LogLogFit<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub rows: Vec<SweepRow<T>>,
    pub fits: Vec<TemperatureFit<T>>,
    pub columns: Vec<SweepColumn>,
    pub fit_min_n: usize,
}

pub fn sweep_row<T: Scalar>(spec: &ChainSpec<T>, state: &ThermoState<T>) -> Result<SweepRow<T>> {
    let mean = mean_length(spec);
    let variance = length_variance_exact(spec, state)?;
    let rel = variance.sqrt() / mean;
    let asymptotic = asymptotic_dispersion(spec, state).unwrap_or_else(T::nan);
    Ok(SweepRow {
        n: spec.n(),
        temperature: state.temperature(),
        gamma: gamma(spec, state),
        mean_length: mean,
        variance_exact: variance,
        rel_dispersion: rel,
        asymptotic,
        ratio: asymptotic / rel,
    })
}

/// Evaluates every `(N, T)` pair, N outer and T inner, and fits the
/// dispersion against N separately for each temperature.
pub fn run_sweep<T: Scalar>(plan: &SweepPlan<T>) -> Result<SweepResult<T>> {
    plan.validate()?;
    let units = plan.base_spec.units();
    let cells: Vec<(usize, T)> = plan
        .n_values
        .iter()
        .flat_map(|&n| plan.temperatures.iter().map(move |&t| (n, t)))
        .collect();
    // collect() on an indexed parallel iterator keeps plan order
    let rows = cells
        .par_iter()
        .map(|&(n, t)| {
            let spec = plan.base_spec.with_n(n)?;
            let state = ThermoState::new(t, units)?;
            sweep_row(&spec, &state)
        })
        .collect::<Result<Vec<_>>>()?;
    let fits = fit_rows(&rows, &plan.temperatures, plan.fit_min_n)?;
    Ok(SweepResult {
        rows,
        fits,
        columns: plan.columns.clone(),
        fit_min_n: plan.fit_min_n,
    })
}

/// Per-temperature fits over rows with `N >= fit_min_n`.
pub fn fit_rows<T: Scalar>(
    rows: &[SweepRow<T>],
    temperatures: &[T],
    fit_min_n: usize,
) -> Result<Vec<TemperatureFit<T>>> {
    temperatures
        .iter()
        .map(|&t| {
            let points: Vec<(T, T)> = rows
                .iter()
                .filter(|r| r.temperature == t && r.n >= fit_min_n)
                .map(|r| (T::from_usize_lossy(r.n), r.rel_dispersion))
                .collect();
            let fit = if points.len() >= 3 {
                Some(fit_loglog(&points)?)
            } else {
                None
            };
            Ok(TemperatureFit {
                temperature: t,
                fit,
            })
        })
        .collect()
}

/// Least-squares line through `(ln N, ln value)`.
pub fn fit_loglog<T: Scalar>(points: &[(T, T)]) -> Result<LogLogFit<T>> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(index) = points
        .iter()
        .position(|&(n, v)| !(n > T::zero() && v > T::zero()))
    {
        return Err(Error::NonPositiveValue { index });
    }
    let logs: Vec<(T, T)> = points.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let count = T::from_usize_lossy(logs.len());
    let x_mean = compensated_sum(logs.iter().map(|p| p.0)) / count;
    let y_mean = compensated_sum(logs.iter().map(|p| p.1)) / count;
    let sxx = compensated_sum(logs.iter().map(|p| (p.0 - x_mean) * (p.0 - x_mean)));
    let sxy = compensated_sum(logs.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)));
    if sxx == T::zero() {
        return Err(Error::InvalidParameter {
            name: "points",
            constraint: "at least two distinct N values",
        });
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residual = compensated_sum(logs.iter().map(|&(x, y)| {
        let r = y - (intercept + slope * x);
        r * r
    }))
    .sqrt();
    Ok(LogLogFit {
        slope,
        intercept,
        residual,
        points: points.len(),
    })
}

/// Material parameters and temperature of a named SI preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset<T> {
    pub name: &'static str,
    pub spacing: T,
    pub omega_max: T,
    pub mass: T,
    pub temperature: T,
}

pub const PRESET_NAMES: [&str; 1] = ["sodium-like"];

impl<T: Scalar> Preset<T> {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            // ξ = 5 Å, band edge 5 THz, sodium atomic mass, room temperature
            "sodium-like" => Ok(Self {
                name: "sodium-like",
                spacing: T::lit(5e-10),
                omega_max: T::lit(2.0) * T::PI() * T::lit(5e12),
                mass: T::lit(3.82e-26),
                temperature: T::lit(300.0),
            }),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    /// κ = ω_max·√μ/2.
    pub fn stiffness(&self) -> T {
        self.omega_max * self.mass.sqrt() / T::lit(2.0)
    }

    pub fn units(&self) -> UnitSystem<T> {
        UnitSystem::si()
    }

    pub fn spec(&self, n: usize) -> Result<ChainSpec<T>> {
        ChainSpec::new(n, self.mass, self.stiffness(), self.spacing, self.units())
    }

    pub fn thermo_state(&self) -> ThermoState<T> {
        ThermoState::new(self.temperature, self.units()).expect("preset temperature is positive")
    }

    /// ħω_max in joules.
    pub fn max_phonon_energy(&self) -> T {
        self.units().hbar() * self.omega_max
    }

    /// k_B·T in joules.
    pub fn thermal_energy(&self) -> T {
        self.thermo_state().thermal_energy()
    }

    /// γ = ħω_max/k_BT.
    pub fn gamma(&self) -> T {
        self.max_phonon_energy() / self.thermal_energy()
    }
}

/// Chain of `n` particles and thermal state for a named preset.
pub fn si_preset<T: Scalar>(name: &str, n: usize) -> Result<(ChainSpec<T>, ThermoState<T>)> {
    let preset = Preset::by_name(name)?;
    Ok((preset.spec(n)?, preset.thermo_state()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ELECTRON_VOLT_SI;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [4.0, 16.0, 64.0, 256.0]
            .iter()
            .map(|&n| (n, 7.0 * f64::powf(n, -0.5)))
            .collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn flat_data() {
        let fit = fit_loglog(&[(2.0, 3.0), (5.0, 3.0), (9.0, 3.0)]).unwrap();
        assert_eq!(fit.slope, 0.0);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_loglog(&[(2.0, 1.0), (3.0, 1.0)]), Err(Error::TooFewPoints(2))));
        assert!(matches!(
            fit_loglog(&[(2.0, 1.0), (3.0, 0.0), (4.0, 1.0)]),
            Err(Error::NonPositiveValue { index: 1 })
        ));
        assert!(fit_loglog(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]).is_err());
    }

    #[test]
    fn geometric_values() {
        assert_eq!(geometric_n_values(256, 2048, 2).unwrap(), vec![256, 512, 1024, 2048]);
        assert_eq!(geometric_n_values(3, 30, 3).unwrap(), vec![3, 9, 27]);
        assert!(geometric_n_values(1, 30, 2).is_err());
        assert!(geometric_n_values(8, 4, 2).is_err());
        assert!(geometric_n_values(8, 40, 1).is_err());
    }

    #[test]
    fn single_cell_has_no_fit() {
        let plan = SweepPlan::new(vec![300], vec![1.0], ChainSpec::reduced(2).unwrap()).unwrap();
        let result = run_sweep(&plan).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert_eq!(result.fits.len(), 1);
        assert!(result.fits[0].fit.is_none());
    }

    #[test]
    fn plan_validation() {
        let base = ChainSpec::<f64>::reduced(2).unwrap();
        assert!(SweepPlan::new(vec![4, 4], vec![1.0], base).is_err());
        assert!(SweepPlan::new(vec![1, 4], vec![1.0], base).is_err());
        assert!(SweepPlan::new(vec![4], vec![0.0], base).is_err());
        assert!(SweepPlan::new(vec![], vec![1.0], base).is_err());
    }

    #[test]
    fn row_order_is_n_outer() {
        let plan = SweepPlan::new(vec![4, 8, 16], vec![3.0, 1.0], ChainSpec::reduced(2).unwrap()).unwrap();
        let r = run_sweep(&plan).unwrap();
        let order: Vec<(usize, f64)> = r.rows.iter().map(|r| (r.n, r.temperature)).collect();
        assert_eq!(order, vec![(4, 3.0), (4, 1.0), (8, 3.0), (8, 1.0), (16, 3.0), (16, 1.0)]);
    }

    #[test]
    fn preset_values() {
        let p = Preset::<f64>::by_name("sodium-like").unwrap();
        let e = p.max_phonon_energy();
        assert!((e - 3.31e-21).abs() < 0.01e-21, "{e}");
        assert!((e / ELECTRON_VOLT_SI - 2.07e-2).abs() < 0.01e-2);
        assert!((p.thermal_energy() - 4.14e-21).abs() < 0.01e-21);
        assert!((p.gamma() - 0.80).abs() < 0.01);
        assert!((p.stiffness() / p.mass.sqrt() - 1.5708e13).abs() < 1e9);
        assert!(matches!(Preset::<f64>::by_name("copper"), Err(Error::UnknownPreset(_))));
        let (spec, state) = si_preset::<f64>("sodium-like", 10).unwrap();
        assert_eq!(spec.n(), 10);
        assert_eq!(state.temperature(), 300.0);
    }
}
