//! The length observable `L = x_N - x_1`: its normal-mode expansion, thermal
//! mean and variance, the large-N dispersion estimate and the Riemann-sum
//! upper bound behind it.
//!
//! Only odd modes `m = 2j - 1`, `j = 1..=⌊N/2⌋`, contribute to `L`. Even modes
//! (including the zero mode) are symmetric under chain inversion and drop out.

use crate::chain::{ChainSpec, ModeTable};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{compensated_sum, Scalar};
use crate::thermo::{mean_u_squared, ThermoState};

const BOUND_REL_TOL: f64 = 1e-8;
const BOUND_MAX_SEGMENTS: usize = 20_000;

/// `L = constant + Σ_j coefficients[j-1]·u_{2j-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthExpansion<T> {
    pub constant: T,
    pub coefficients: Vec<T>,
}

impl<T: Scalar> LengthExpansion<T> {
    /// Number of contributing (odd) modes, `⌊N/2⌋`.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Mode index `m = 2j - 1` of the `j`-th coefficient (1-based `j`).
    pub fn mode_of(j: usize) -> usize {
        2 * j - 1
    }

    /// Value of `L` for the given normal coordinates `u_0..u_{N-1}`.
    pub fn evaluate(&self, normal: &[T]) -> Result<T> {
        let needed = 2 * self.coefficients.len();
        if normal.len() < needed {
            return Err(Error::DimensionMismatch {
                expected: needed,
                actual: normal.len(),
            });
        }
        let fluct = compensated_sum(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, &c)| c * normal[2 * i + 1]),
        );
        Ok(self.constant + fluct)
    }

    /// `Σ_j c_j²·var_j` for independent modes with the given variances.
    pub fn variance(&self, odd_mode_variances: &[T]) -> Result<T> {
        if odd_mode_variances.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                actual: odd_mode_variances.len(),
            });
        }
        Ok(compensated_sum(
            self.coefficients
                .iter()
                .zip(odd_mode_variances)
                .map(|(&c, &v)| c * c * v),
        ))
    }
}

fn odd_angle<T: Scalar>(n: usize, j: usize) -> T {
    T::PI() * T::from_usize_lossy(2 * j - 1) / (T::lit(2.0) * T::from_usize_lossy(n))
}

/// `c_j = -√(8/N)·(-1)^j·cos((2j-1)π/2N)`.
pub fn length_coefficient<T: Scalar>(n: usize, j: usize) -> T {
    let sign = if j.is_multiple_of(2) { -T::one() } else { T::one() };
    sign * (T::lit(8.0) / T::from_usize_lossy(n)).sqrt() * odd_angle::<T>(n, j).cos()
}

/// `x_j = sin((2j-1)π/2N)`, so that `ω_{2j-1} = (2κ/√μ)·x_j`.
pub fn odd_mode_x<T: Scalar>(n: usize, j: usize) -> T {
    odd_angle::<T>(n, j).sin()
}

pub fn length_expansion_closed_form<T: Scalar>(spec: &ChainSpec<T>) -> LengthExpansion<T> {
    let n = spec.n();
    LengthExpansion {
        constant: mean_length(spec),
        coefficients: (1..=n / 2).map(|j| length_coefficient(n, j)).collect(),
    }
}

/// Largest `|Y^m_N - Y^m_1|` over even modes; zero up to rounding.
pub fn even_mode_defect<T: Scalar>(table: &ModeTable<T>) -> T {
    let n = table.n();
    (0..n)
        .step_by(2)
        .map(|m| (table.amplitude(m, n) - table.amplitude(m, 1)).abs())
        .fold(T::zero(), T::max)
}

/// Closed-form expansion, verified against the amplitude differences
/// `Y^m_N - Y^m_1` of the mode table.
pub fn length_expansion<T: Scalar>(
    table: &ModeTable<T>,
    spec: &ChainSpec<T>,
) -> Result<LengthExpansion<T>> {
    let n = spec.n();
    if table.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: table.n(),
        });
    }
    let tol = T::consistency_tol();
    let even = even_mode_defect(table);
    if even > tol {
        return Err(Error::Inconsistent {
            what: "even-mode length coefficient does not vanish",
            deviation: even.to_f64().unwrap_or(f64::NAN),
        });
    }
    let expansion = length_expansion_closed_form(spec);
    for (i, &c) in expansion.coefficients.iter().enumerate() {
        let m = 2 * i + 1;
        let diff = table.amplitude(m, n) - table.amplitude(m, 1);
        if (diff - c).abs() > tol {
            return Err(Error::Inconsistent {
                what: "closed-form length coefficient disagrees with mode table",
                deviation: (diff - c).abs().to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(expansion)
}

/// `⟨L⟩ = (N-1)·ξ`, independent of temperature.
pub fn mean_length<T: Scalar>(spec: &ChainSpec<T>) -> T {
    T::from_usize_lossy(spec.n() - 1) * spec.spacing()
}

/// `γ = 2ħκ/(k_BT√μ)`; infinite at `T = 0`.
pub fn gamma<T: Scalar>(spec: &ChainSpec<T>, state: &ThermoState<T>) -> T {
    if state.is_ground() {
        return T::infinity();
    }
    T::lit(2.0) * spec.units().hbar() * spec.stiffness()
        / (state.thermal_energy() * spec.mass().sqrt())
}

/// `(1 + e^{-a})/(1 - e^{-a}) = coth(a/2)` for `a > 0`.
fn coth_half<T: Scalar>(a: T) -> T {
    if a > T::lit(700.0) {
        return T::one();
    }
    let e = (-a).exp();
    (T::one() + e) / -(-a).exp_m1()
}

/// Exact thermal variance of `L`, `Σ_j c_j²·⟨u²_{2j-1}⟩_T`, summed in
/// ascending `j` with compensation. `T = 0` yields the zero-point variance.
pub fn length_variance_exact<T: Scalar>(spec: &ChainSpec<T>, state: &ThermoState<T>) -> Result<T> {
    let n = spec.n();
    let mut acc = crate::scalar::CompensatedSum::new();
    for j in 1..=n / 2 {
        let c = length_coefficient::<T>(n, j);
        let u2 = mean_u_squared(spec.mode_frequency(2 * j - 1), spec.mass(), state)?;
        acc.add(c * c * u2);
    }
    Ok(acc.value())
}

/// The same variance written in dimensionless form,
/// `(2/N)(ħ/κ√μ)·Σ_j ((1-x_j²)/x_j)·(1+e^{-γx_j})/(1-e^{-γx_j})`.
pub fn length_variance_dimensionless<T: Scalar>(
    spec: &ChainSpec<T>,
    state: &ThermoState<T>,
) -> Result<T> {
    let n = spec.n();
    let g = gamma(spec, state);
    let sum = compensated_sum((1..=n / 2).map(|j| {
        let x = odd_mode_x::<T>(n, j);
        (T::one() - x) * (T::one() + x) / x * coth_half(g * x)
    }));
    let scale = T::lit(2.0) / T::from_usize_lossy(n) * spec.units().hbar()
        / (spec.stiffness() * spec.mass().sqrt());
    Ok(scale * sum)
}

/// Large-N estimate of the relative dispersion, `√(12k_BT)/(πκξ√N)`.
/// Undefined at `T = 0`.
pub fn asymptotic_dispersion<T: Scalar>(spec: &ChainSpec<T>, state: &ThermoState<T>) -> Option<T> {
    if state.is_ground() {
        return None;
    }
    let n = T::from_usize_lossy(spec.n());
    Some(
        (T::lit(12.0) * state.thermal_energy()).sqrt()
            / (T::PI() * spec.stiffness() * spec.spacing() * n.sqrt()),
    )
}

/// Corner-rectangle-plus-integral upper bound on the variance sum,
/// `(2/π)(ħ/κ√μ)·[2x₁f(x₁) + ∫_{x₁}^1 f(x) dx]` with
/// `f(x) = (√(1-x²)/x)·coth(γx/2)`.
pub fn riemann_bound<T: Scalar>(spec: &ChainSpec<T>, state: &ThermoState<T>) -> Result<T> {
    if spec.n() < 4 {
        return Err(Error::InvalidParameter {
            name: "n",
            constraint: "n >= 4 for the Riemann bound",
        });
    }
    if state.is_ground() {
        return Err(Error::InvalidParameter {
            name: "temp",
            constraint: "temperature > 0 for the Riemann bound",
        });
    }
    let g = gamma(spec, state);
    let theta1 = T::FRAC_PI_2() / T::from_usize_lossy(spec.n());
    let x1 = theta1.sin();
    let f = |x: T| (T::one() - x * x).sqrt() / x * coth_half(g * x);

    // x = sin θ, θ = e^s: ∫ f dx = ∫ cos²θ/sinθ·coth(γ sinθ/2)·θ ds
    let integrand = |s: T| {
        let theta = s.exp();
        let (sin, cos) = theta.sin_cos();
        cos * cos / sin * coth_half(g * sin) * theta
    };
    let q = integrate(
        integrand,
        theta1.ln(),
        T::FRAC_PI_2().ln(),
        T::lit(BOUND_REL_TOL),
        T::zero(),
        BOUND_MAX_SEGMENTS,
    )?;
    let scale = T::lit(2.0) / T::PI() * spec.units().hbar() / (spec.stiffness() * spec.mass().sqrt());
    Ok(scale * (T::lit(2.0) * x1 * f(x1) + q.value))
}

/// Thermal statistics of the chain length.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthStatistics<T> {
    pub mean: T,
    pub variance: T,
    pub relative_dispersion: T,
    pub gamma: T,
    /// `x_j` for `j = 1..=⌊N/2⌋`.
    pub x_values: Vec<T>,
    /// Large-N estimate; absent at `T = 0`.
    pub asymptotic: Option<T>,
    /// Riemann-sum bound on the variance; absent at `T = 0` or `N < 4`.
    pub bound: Option<T>,
}

impl<T: Scalar> LengthStatistics<T> {
    /// Asymptotic estimate divided by the exact relative dispersion.
    pub fn asymptotic_ratio(&self) -> Option<T> {
        self.asymptotic.map(|a| a / self.relative_dispersion)
    }
}

pub fn length_statistics<T: Scalar>(
    spec: &ChainSpec<T>,
    state: &ThermoState<T>,
) -> Result<LengthStatistics<T>> {
    let mean = mean_length(spec);
    let variance = length_variance_exact(spec, state)?;
    let bound = if spec.n() >= 4 && !state.is_ground() {
        Some(riemann_bound(spec, state)?)
    } else {
        None
    };
    let n = spec.n();
    Ok(LengthStatistics {
        mean,
        variance,
        relative_dispersion: variance.sqrt() / mean,
        gamma: gamma(spec, state),
        x_values: (1..=n / 2).map(|j| odd_mode_x(n, j)).collect(),
        asymptotic: asymptotic_dispersion(spec, state),
        bound,
    })
}
