//! Closed-form results checked against independent brute-force routes:
//! Jacobi diagonalization, truncated Boltzmann sums, exhaustive enumeration,
//! finite differences and direct quadrature.

use harmonic_chain::chain::{build_dynamical_matrix, build_mode_table};
use harmonic_chain::observables::{
    length_variance_exact, riemann_bound, length_statistics,
};
use harmonic_chain::{
    enumerate_phonon_energies, mean_occupation, mean_u_squared, partition_function,
    symmetric_eigen, ChainSpec, ThermoState, UnitSystem,
};

fn reduced(n: usize) -> ChainSpec<f64> {
    ChainSpec::reduced(n).unwrap()
}

fn at(t: f64) -> ThermoState<f64> {
    ThermoState::new(t, UnitSystem::reduced()).unwrap()
}

#[test]
fn jacobi_spectrum_matches_closed_form() {
    for n in 2..=64 {
        let spec = ChainSpec::<f64>::new(n, 2.5, 0.7, 1.0, UnitSystem::reduced()).unwrap();
        let table = build_mode_table(&spec);
        let eig = symmetric_eigen(&build_dynamical_matrix(&spec).to_dense(), 1e-12).unwrap();
        for (m, &lambda) in eig.eigenvalues.iter().enumerate() {
            let analytic = spec.reduced_eigenvalue(table.frequencies()[m]);
            if m == 0 {
                assert_eq!(analytic, 0.0);
                assert!(lambda.abs() < 1e-12, "n={n} zero mode {lambda}");
            } else {
                assert!((analytic - lambda).abs() / analytic < 1e-9, "n={n} m={m}");
            }
        }
        assert!(eig.reconstruct().max_abs_diff(&build_dynamical_matrix(&spec).to_dense()) < 1e-11);
    }
}

#[test]
fn frozen_small_spectra() {
    let eig = symmetric_eigen(&build_dynamical_matrix(&reduced(3)).to_dense(), 1e-12).unwrap();
    for (got, want) in eig.eigenvalues.iter().zip([0.0, 1.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let eig = symmetric_eigen(&build_dynamical_matrix(&reduced(5)).to_dense(), 1e-12).unwrap();
    let frozen = [0.0, 0.381966011250105, 1.381966011250105, 2.618033988749895, 3.618033988749895];
    for (got, want) in eig.eigenvalues.iter().zip(frozen) {
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn jacobi_eigenvectors_are_the_analytic_modes() {
    let spec = reduced(9);
    let table = build_mode_table(&spec);
    let eig = symmetric_eigen(&build_dynamical_matrix(&spec).to_dense(), 1e-13).unwrap();
    for m in 0..9 {
        let v = eig.eigenvector(m);
        let overlap: f64 = v.iter().zip(table.mode(m)).map(|(a, b)| a * b).sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-10, "m={m} overlap {overlap}");
    }
    // zero mode ∝ constant vector
    let v0 = eig.eigenvector(0);
    assert!(v0.iter().all(|x| (x.abs() - 1.0 / 3.0).abs() < 1e-10));
}

fn truncated_boltzmann(a: f64, weight: impl Fn(f64) -> f64) -> f64 {
    let z: f64 = (0..=1000).map(|nu| (-a * nu as f64).exp()).sum();
    (0..=1000)
        .map(|nu| weight(nu as f64) * (-a * nu as f64).exp())
        .sum::<f64>()
        / z
}

#[test]
fn single_mode_statistics_against_truncated_sums() {
    for a in [0.05, 0.5, 1.0, 3.0, 20.0] {
        let state = at(1.0 / a);
        let z: f64 = (0..=1000).map(|nu| (-a * nu as f64).exp()).sum();
        assert!((partition_function(1.0, &state).unwrap() - z).abs() / z < 1e-12, "a={a}");
        let nu = truncated_boltzmann(a, |nu| nu);
        assert!((mean_occupation(1.0, &state).unwrap() - nu).abs() <= 1e-12 * nu.max(1e-300) + 1e-300);
        // ⟨u²⟩ = Σ p_ν (ħ/2μω)(2ν+1) with μ = 3
        let u2 = truncated_boltzmann(a, |nu| (2.0 * nu + 1.0) / 6.0);
        assert!((mean_u_squared(1.0, 3.0, &state).unwrap() - u2).abs() / u2 < 1e-12, "a={a}");
    }
    assert!((truncated_boltzmann(1.0, |nu| nu) - 0.581977).abs() < 1e-6);
}

#[test]
fn occupation_is_log_derivative_of_partition_function() {
    for omega in [0.1, 0.7, 2.0, 9.0] {
        for beta in [0.05, 0.5, 1.0, 2.5] {
            let ln_z = |b: f64| partition_function(omega, &at(1.0 / b)).unwrap().ln();
            let h = 1e-5 * beta;
            let derivative = (ln_z(beta + h) - ln_z(beta - h)) / (2.0 * h);
            let fd = -derivative / omega;
            let exact = mean_occupation(omega, &at(1.0 / beta)).unwrap();
            assert!((fd - exact).abs() < 1e-8, "omega={omega} beta={beta}: {fd} vs {exact}");
        }
    }
}

#[test]
fn classical_mode_limit() {
    for omega in [0.5, 1.0, 4.0] {
        for t in [1e4, 1e5, 1e7] {
            let a: f64 = omega / t;
            let classical = t / (omega * omega);
            let u2 = mean_u_squared(omega, 1.0, &at(t)).unwrap();
            assert!((u2 - classical).abs() / classical <= a * a / 12.0 + 1e-12);
        }
    }
}

#[test]
fn phonon_levels_match_exhaustive_tuples() {
    for (n, cutoff) in [(3, 2.8), (3, 6.0), (4, 4.0), (5, 3.0)] {
        let spec = reduced(n);
        let quanta: Vec<f64> = (1..n).map(|m| spec.mode_frequency(m)).collect();
        // all tuples in the bounding box, filtered by energy
        let bounds: Vec<u32> = quanta.iter().map(|q| (cutoff / q).floor() as u32).collect();
        let mut expected: Vec<(Vec<u32>, f64)> = Vec::new();
        let mut idx = vec![0u32; quanta.len()];
        'outer: loop {
            let e = idx
                .iter()
                .zip(&quanta)
                .fold(0.0, |acc, (&nu, &q)| acc + nu as f64 * q);
            if e <= cutoff {
                expected.push((idx.clone(), e));
            }
            for k in 0..idx.len() {
                if idx[k] < bounds[k] {
                    idx[k] += 1;
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        expected.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));

        let got = enumerate_phonon_energies(&spec, cutoff).unwrap();
        assert_eq!(got.len(), expected.len(), "n={n} cutoff={cutoff}");
        for (g, (occ, e)) in got.iter().zip(&expected) {
            assert_eq!(&g.occupations, occ);
            assert_eq!(g.energy, *e);
        }
    }
}

/// Classical series springs: N-1 independent extensions of stiffness κ².
fn series_spring_variance(spec: &ChainSpec<f64>, temperature: f64) -> f64 {
    (spec.n() - 1) as f64 * temperature / (spec.stiffness() * spec.stiffness())
}

#[test]
fn classical_series_spring_oracle() {
    for n in [2, 3, 10, 50, 1000] {
        for t in [2e3, 2e4, 2e6] {
            let spec = reduced(n);
            let gamma = 2.0 / t;
            let exact = length_variance_exact(&spec, &at(t)).unwrap();
            let oracle = series_spring_variance(&spec, t);
            let rel = (exact - oracle).abs() / oracle;
            assert!(rel <= gamma * gamma / 12.0 + 1e-10, "n={n} t={t} rel={rel}");
        }
    }
}

/// Var(L) from a Jacobi diagonalization: L - ⟨L⟩ = Σ_k (v_k·e) u_k with
/// e = e_N - e_1 and ω_k = κ√(λ_k/μ).
fn jacobi_variance(spec: &ChainSpec<f64>, state: &ThermoState<f64>) -> f64 {
    let n = spec.n();
    let eig = symmetric_eigen(&build_dynamical_matrix(spec).to_dense(), 1e-13).unwrap();
    let mut total = 0.0;
    for k in 1..n {
        let v = eig.eigenvector(k);
        let proj = v[n - 1] - v[0];
        let omega = spec.stiffness() * (eig.eigenvalues[k] / spec.mass()).sqrt();
        let a = state.reduced_energy(omega);
        let coth = if a.is_infinite() { 1.0 } else { 1.0 / (a / 2.0).tanh() };
        total += proj * proj * spec.units().hbar() / (2.0 * spec.mass() * omega) * coth;
    }
    total
}

#[test]
fn variance_matches_diagonalization_route() {
    for n in [2, 3, 6, 17, 40] {
        let spec = ChainSpec::new(n, 1.7, 0.9, 1.0, UnitSystem::reduced()).unwrap();
        for state in [ThermoState::ground(UnitSystem::reduced()), at(0.1), at(1.0), at(50.0)] {
            let exact = length_variance_exact(&spec, &state).unwrap();
            let oracle = jacobi_variance(&spec, &state);
            assert!((exact - oracle).abs() / oracle < 1e-9, "n={n}: {exact} vs {oracle}");
        }
    }
}

#[test]
fn bound_dominates_exact_variance() {
    for n in [4, 5, 16, 64, 257, 1024, 4096] {
        for gamma in [1e-3, 0.1, 1.0, 10.0] {
            let state = at(2.0 / gamma);
            let spec = reduced(n);
            let bound = riemann_bound(&spec, &state).unwrap();
            let exact = length_variance_exact(&spec, &state).unwrap();
            assert!(bound >= exact, "n={n} gamma={gamma}");
        }
    }
}

#[test]
fn bound_integral_against_midpoint_rule() {
    // Recompute the bound with a brute-force midpoint rule in x.
    let n = 100;
    let gamma: f64 = 0.01;
    let spec = reduced(n);
    let state = at(2.0 / gamma);
    let f = |x: f64| (1.0 - x * x).sqrt() / x * (1.0 + (-gamma * x).exp()) / (1.0 - (-gamma * x).exp());
    let x1 = (std::f64::consts::FRAC_PI_2 / n as f64).sin();
    // geometric grid clusters points near x1 where f is steep
    let steps = 400_000;
    let ratio = (1.0 / x1).powf(1.0 / steps as f64);
    let mut integral = 0.0;
    let mut lo = x1;
    for _ in 0..steps {
        let hi = (lo * ratio).min(1.0);
        integral += (hi - lo) * f(0.5 * (lo + hi));
        lo = hi;
    }
    let brute = 2.0 / std::f64::consts::PI * (2.0 * x1 * f(x1) + integral);
    let bound = riemann_bound(&spec, &state).unwrap();
    assert!((bound - brute).abs() / brute < 1e-7, "{bound} vs {brute}");
    assert!(bound >= length_variance_exact(&spec, &state).unwrap());
}

#[test]
fn asymptotic_overshoot_is_sqrt12_over_pi() {
    let spec = reduced(1 << 16);
    let stats = length_statistics(&spec, &at(2000.0)).unwrap();
    let ratio = stats.asymptotic_ratio().unwrap();
    let target = 12f64.sqrt() / std::f64::consts::PI;
    assert!((ratio - target).abs() / target < 0.01, "ratio {ratio}");
}
