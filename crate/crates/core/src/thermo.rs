//! Gibbs-state statistics of single phonon species and enumeration of the
//! phonon excitation spectrum.
//!
//! Every function here takes a strictly positive frequency: the zero mode is
//! free translation of the whole chain and carries no thermal weight.

use crate::chain::{ChainSpec, UnitSystem};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Above this value of βħω the Boltzmann factor is treated as exactly zero.
const FROZEN_LIMIT: f64 = 700.0;
/// Below this value of βħω the fluctuation uses its high-temperature series.
const CLASSICAL_LIMIT: f64 = 1e-4;
/// Upper bound on the number of enumerated phonon states.
pub const MAX_PHONON_STATES: usize = 1_000_000;

/// Temperature together with the unit system it is expressed in.
///
/// `T = 0` is a distinguished ground-state marker with `β = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState<T> {
    temperature: T,
    units: UnitSystem<T>,
}

impl<T: Scalar> ThermoState<T> {
    pub fn new(temperature: T, units: UnitSystem<T>) -> Result<Self> {
        if temperature > T::zero() && temperature.is_finite() {
            Ok(Self { temperature, units })
        } else {
            Err(Error::InvalidParameter {
                name: "temp",
                constraint: "a finite temperature > 0",
            })
        }
    }

    /// Accepts `T = 0` as the ground-state marker.
    pub fn new_or_ground(temperature: T, units: UnitSystem<T>) -> Result<Self> {
        if temperature == T::zero() {
            Ok(Self::ground(units))
        } else {
            Self::new(temperature, units)
        }
    }

    pub fn ground(units: UnitSystem<T>) -> Self {
        Self {
            temperature: T::zero(),
            units,
        }
    }

    pub fn temperature(&self) -> T {
        self.temperature
    }

    pub fn units(&self) -> UnitSystem<T> {
        self.units
    }

    pub fn is_ground(&self) -> bool {
        self.temperature == T::zero()
    }

    /// k_B·T.
    pub fn thermal_energy(&self) -> T {
        self.units.k_boltzmann() * self.temperature
    }

    /// β = 1/k_BT, infinite at the ground-state marker.
    pub fn beta(&self) -> T {
        if self.is_ground() {
            T::infinity()
        } else {
            self.thermal_energy().recip()
        }
    }

    /// βħω, infinite at the ground-state marker.
    pub fn reduced_energy(&self, omega: T) -> T {
        if self.is_ground() {
            T::infinity()
        } else {
            self.units.hbar() * omega / self.thermal_energy()
        }
    }
}

fn check_frequency<T: Scalar>(omega: T) -> Result<()> {
    if omega > T::zero() && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "omega",
            constraint: "omega > 0 (the zero mode has no Gibbs weight)",
        })
    }
}

/// `Z = 1/(1 - e^{-βħω})`.
pub fn partition_function<T: Scalar>(omega: T, state: &ThermoState<T>) -> Result<T> {
    check_frequency(omega)?;
    let a = state.reduced_energy(omega);
    if a > T::lit(FROZEN_LIMIT) {
        return Ok(T::one());
    }
    Ok((-(-a).exp_m1()).recip())
}

/// Bose–Einstein occupation `⟨ν⟩ = 1/(e^{βħω} - 1)`.
pub fn mean_occupation<T: Scalar>(omega: T, state: &ThermoState<T>) -> Result<T> {
    check_frequency(omega)?;
    let a = state.reduced_energy(omega);
    if a > T::lit(FROZEN_LIMIT) {
        return Ok(T::zero());
    }
    Ok(a.exp_m1().recip())
}

/// Thermal variance of a normal coordinate, `(ħ/2μω)·(2⟨ν⟩ + 1)`.
pub fn mean_u_squared<T: Scalar>(omega: T, mass: T, state: &ThermoState<T>) -> Result<T> {
    check_frequency(omega)?;
    let zero_point = state.units().hbar() / (T::lit(2.0) * mass * omega);
    let a = state.reduced_energy(omega);
    if a > T::lit(FROZEN_LIMIT) {
        return Ok(zero_point);
    }
    if a < T::lit(CLASSICAL_LIMIT) {
        // coth(a/2) = 2/a + a/6 - a³/360 + …
        return Ok(zero_point * (T::lit(2.0) / a + a / T::lit(6.0)));
    }
    let occupation = a.exp_m1().recip();
    Ok(zero_point * (T::lit(2.0) * occupation + T::one()))
}

/// Gibbs statistics of one phonon species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeThermo<T> {
    pub frequency: T,
    pub partition: T,
    pub occupation: T,
    pub u_squared: T,
}

impl<T: Scalar> ModeThermo<T> {
    pub fn compute(omega: T, mass: T, state: &ThermoState<T>) -> Result<Self> {
        Ok(Self {
            frequency: omega,
            partition: partition_function(omega, state)?,
            occupation: mean_occupation(omega, state)?,
            u_squared: mean_u_squared(omega, mass, state)?,
        })
    }
}

/// Statistics of every phonon species `m = 1..N` of a chain.
pub fn mode_thermo_table<T: Scalar>(
    spec: &ChainSpec<T>,
    state: &ThermoState<T>,
) -> Result<Vec<ModeThermo<T>>> {
    (1..spec.n())
        .map(|m| ModeThermo::compute(spec.mode_frequency(m), spec.mass(), state))
        .collect()
}

/// One eigenstate of the phonon gas: occupations `ν_1..ν_{N-1}` and energy
/// `E = Σ ν_m ħω_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononState<T> {
    pub occupations: Vec<u32>,
    pub energy: T,
}

/// `Σ ν_m·quantum_m` accumulated in ascending `m`.
fn state_energy<T: Scalar>(occupations: &[u32], quanta: &[T]) -> T {
    occupations
        .iter()
        .zip(quanta)
        .fold(T::zero(), |acc, (&nu, &q)| acc + T::from_u32(nu).expect("u32") * q)
}

/// All phonon states with `E <= energy_cutoff`, sorted by energy and then
/// lexicographically by occupation tuple.
pub fn enumerate_phonon_energies<T: Scalar>(
    spec: &ChainSpec<T>,
    energy_cutoff: T,
) -> Result<Vec<PhononState<T>>> {
    if !energy_cutoff.is_finite() || energy_cutoff < T::zero() {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            constraint: "a finite energy cutoff >= 0",
        });
    }
    let hbar = spec.units().hbar();
    let quanta: Vec<T> = (1..spec.n()).map(|m| hbar * spec.mode_frequency(m)).collect();

    let mut states = Vec::new();
    let mut occupations = vec![0u32; quanta.len()];
    enumerate_into(&quanta, energy_cutoff, 0, T::zero(), &mut occupations, &mut states)?;

    states.sort_by(|a: &PhononState<T>, b| {
        a.energy
            .partial_cmp(&b.energy)
            .expect("finite energies")
            .then_with(|| a.occupations.cmp(&b.occupations))
    });
    Ok(states)
}

fn enumerate_into<T: Scalar>(
    quanta: &[T],
    cutoff: T,
    mode: usize,
    partial: T,
    occupations: &mut Vec<u32>,
    out: &mut Vec<PhononState<T>>,
) -> Result<()> {
    if mode == quanta.len() {
        if out.len() >= MAX_PHONON_STATES {
            return Err(Error::EnumerationTooLarge {
                limit: MAX_PHONON_STATES,
            });
        }
        out.push(PhononState {
            occupations: occupations.clone(),
            energy: state_energy(occupations, quanta),
        });
        return Ok(());
    }
    let mut nu = 0u32;
    loop {
        let energy = partial + T::from_u32(nu).expect("u32") * quanta[mode];
        if energy > cutoff {
            break;
        }
        occupations[mode] = nu;
        enumerate_into(quanta, cutoff, mode + 1, energy, occupations, out)?;
        nu += 1;
    }
    occupations[mode] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reduced_at(temperature: f64) -> ThermoState<f64> {
        ThermoState::new(temperature, UnitSystem::reduced()).unwrap()
    }

    #[test]
    fn thermo_state_validation() {
        let u = UnitSystem::<f64>::reduced();
        assert!(ThermoState::new(0.0, u).is_err());
        assert!(ThermoState::new(-1.0, u).is_err());
        assert!(ThermoState::new(f64::NAN, u).is_err());
        assert!(ThermoState::new_or_ground(0.0, u).unwrap().is_ground());
        assert!(ThermoState::new_or_ground(-2.0, u).is_err());
        assert_eq!(ThermoState::ground(u).beta(), f64::INFINITY);
        assert_eq!(reduced_at(4.0).beta(), 0.25);
    }

    #[test]
    fn partition_function_examples() {
        // βħω = ln 2 with ħ = ω = 1 needs T = 1/ln 2
        let s = reduced_at(1.0 / std::f64::consts::LN_2);
        assert_relative_eq!(partition_function(1.0, &s).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(partition_function(1.0, &reduced_at(1e-3)).unwrap(), 1.0);
        // Σ_{ν<=1000} e^{-ν}
        let z = partition_function(1.0, &reduced_at(1.0)).unwrap();
        assert_relative_eq!(z, 1.5819767068693265, epsilon = 1e-14);
        assert!((z - 1.581977).abs() < 1e-6);
    }

    #[test]
    fn occupation_examples() {
        let s = reduced_at(1.0 / std::f64::consts::LN_2);
        assert_relative_eq!(mean_occupation(1.0, &s).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(mean_occupation(1.0, &reduced_at(1e-3)).unwrap(), 0.0);
        assert!((mean_occupation(1.0, &reduced_at(1.0)).unwrap() - 0.581977).abs() < 1e-6);
    }

    #[test]
    fn u_squared_examples() {
        let ground = ThermoState::<f64>::ground(UnitSystem::reduced());
        assert_eq!(mean_u_squared(1.0, 1.0, &ground).unwrap(), 0.5);
        let s = reduced_at(1.0 / std::f64::consts::LN_2);
        assert_relative_eq!(mean_u_squared(1.0, 1.0, &s).unwrap(), 1.5, epsilon = 1e-14);
        let hot = mean_u_squared(1.0, 1.0, &reduced_at(1000.0)).unwrap();
        assert!((hot - 1000.0).abs() / 1000.0 < 1e-6);
    }

    #[test]
    fn zero_and_negative_frequencies_rejected() {
        let s = reduced_at(1.0);
        assert!(partition_function(0.0, &s).is_err());
        assert!(mean_occupation(-1.0, &s).is_err());
        assert!(mean_u_squared(0.0, 1.0, &s).is_err());
        assert!(mean_u_squared(f64::NAN, 1.0, &s).is_err());
    }

    #[test]
    fn branches_are_continuous() {
        // either side of the series switch and of the frozen cut
        for a in [1e-4, 700.0] {
            let lo = mean_u_squared(1.0, 1.0, &reduced_at(1.0 / (a * (1.0 - 1e-12)))).unwrap();
            let hi = mean_u_squared(1.0, 1.0, &reduced_at(1.0 / (a * (1.0 + 1e-12)))).unwrap();
            assert!((lo - hi).abs() / lo < 1e-10, "a={a}");
        }
    }

    #[test]
    fn coth_form_agrees() {
        for a in [1e-3, 0.1, 1.0, 5.0, 40.0] {
            let u = mean_u_squared(1.0, 1.0, &reduced_at(1.0 / a)).unwrap();
            let coth = 1.0 / (a / 2.0).tanh();
            assert_relative_eq!(u, 0.5 * coth, max_relative = 1e-13);
        }
    }

    #[test]
    fn phonon_enumeration_examples() {
        let spec = ChainSpec::<f64>::reduced(3).unwrap();
        let energies: Vec<f64> = enumerate_phonon_energies(&spec, 2.8)
            .unwrap()
            .iter()
            .map(|s| s.energy)
            .collect();
        let s3 = 3f64.sqrt();
        let want = [0.0, 1.0, s3, 2.0, 1.0 + s3];
        assert_eq!(energies.len(), want.len());
        for (g, w) in energies.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }

        let vacuum = enumerate_phonon_energies(&ChainSpec::<f64>::reduced(6).unwrap(), 0.0).unwrap();
        assert_eq!(vacuum.len(), 1);
        assert_eq!(vacuum[0].occupations, vec![0; 5]);
        assert_eq!(vacuum[0].energy, 0.0);

        let two = enumerate_phonon_energies(&ChainSpec::<f64>::reduced(2).unwrap(), 3.0).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert_eq!(two.len(), 3);
        for (k, st) in two.iter().enumerate() {
            assert_eq!(st.occupations, vec![k as u32]);
            assert!((st.energy - k as f64 * s2).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_errors() {
        let spec = ChainSpec::<f64>::reduced(8).unwrap();
        assert!(enumerate_phonon_energies(&spec, -1.0).is_err());
        assert!(matches!(
            enumerate_phonon_energies(&spec, 40.0),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
