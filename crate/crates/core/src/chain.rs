//! Chain model, analytic normal modes and coordinate transforms.
//!
//! Particles are indexed `1..=N` at every public boundary. Modes are indexed
//! `m = 0..N`, with `m = 0` the rigid translation of the whole chain.

use crate::eigen::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (exact).
pub const K_BOLTZMANN_SI: f64 = 1.380_649e-23;
/// One electronvolt in joules (exact).
pub const ELECTRON_VOLT_SI: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    /// ħ = k_B = 1.
    Reduced,
    /// SI units with the standard values of ħ and k_B.
    Si,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Reduced => "reduced",
            UnitKind::Si => "si",
        }
    }
}

/// Values of ħ and k_B the model is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem<T> {
    kind: UnitKind,
    hbar: T,
    k_boltzmann: T,
}

impl<T: Scalar> UnitSystem<T> {
    pub fn reduced() -> Self {
        Self {
            kind: UnitKind::Reduced,
            hbar: T::one(),
            k_boltzmann: T::one(),
        }
    }

    pub fn si() -> Self {
        Self {
            kind: UnitKind::Si,
            hbar: T::lit(HBAR_SI),
            k_boltzmann: T::lit(K_BOLTZMANN_SI),
        }
    }

    pub fn new(kind: UnitKind) -> Self {
        match kind {
            UnitKind::Reduced => Self::reduced(),
            UnitKind::Si => Self::si(),
        }
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn k_boltzmann(&self) -> T {
        self.k_boltzmann
    }
}

fn require_positive<T: Scalar>(value: T, name: &'static str) -> Result<T> {
    if value > T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            constraint: "a finite value > 0",
        })
    }
}

/// Intrinsic parameters of a free-ended chain of `n` identical particles.
///
/// `stiffness` is the oscillator strength κ: neighbouring particles are
/// coupled by springs of constant κ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec<T> {
    n: usize,
    mass: T,
    stiffness: T,
    spacing: T,
    units: UnitSystem<T>,
}

impl<T: Scalar> ChainSpec<T> {
    pub fn new(n: usize, mass: T, stiffness: T, spacing: T, units: UnitSystem<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                constraint: "n >= 2",
            });
        }
        Ok(Self {
            n,
            mass: require_positive(mass, "mass")?,
            stiffness: require_positive(stiffness, "kappa")?,
            spacing: require_positive(spacing, "xi")?,
            units,
        })
    }

    /// Reduced units with μ = κ = ξ = 1.
    pub fn reduced(n: usize) -> Result<Self> {
        Self::new(n, T::one(), T::one(), T::one(), UnitSystem::reduced())
    }

    /// Same material parameters, different particle count.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.mass, self.stiffness, self.spacing, self.units)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn stiffness(&self) -> T {
        self.stiffness
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn units(&self) -> UnitSystem<T> {
        self.units
    }

    /// Upper edge of the phonon band, 2κ/√μ.
    pub fn band_edge(&self) -> T {
        T::lit(2.0) * self.stiffness / self.mass.sqrt()
    }

    /// Closed-form frequency of mode `m`, `(2κ/√μ)·sin(mπ/2N)`.
    pub fn mode_frequency(&self, m: usize) -> T {
        let angle = T::FRAC_PI_2() * T::from_usize_lossy(m) / T::from_usize_lossy(self.n);
        self.band_edge() * angle.sin()
    }

    /// Dimensionless eigenvalue μω²/κ² belonging to frequency `omega`.
    pub fn reduced_eigenvalue(&self, omega: T) -> T {
        self.mass * omega * omega / (self.stiffness * self.stiffness)
    }
}

/// Offsets `o_n = (n - (N+1)/2)·ξ` such that `x_n = y_n + o_n`.
pub fn equilibrium_positions<T: Scalar>(spec: &ChainSpec<T>) -> Vec<T> {
    let n = spec.n();
    // 2n - N - 1 is an exact integer, so the offsets are antisymmetric bit for bit.
    let half = T::lit(0.5) * spec.spacing();
    (1..=n)
        .map(|i| {
            let twice = 2 * i as i64 - n as i64 - 1;
            T::from_i64(twice).expect("small integer") * half
        })
        .collect()
}

/// Dispersion relation `ω(k) = (2κ/√μ)·sin(k/2)` for `k ∈ [0, π]`.
pub fn dispersion<T: Scalar>(k: T, spec: &ChainSpec<T>) -> Result<T> {
    if !(k >= T::zero() && k <= T::PI()) {
        return Err(Error::InvalidParameter {
            name: "k",
            constraint: "0 <= k <= pi",
        });
    }
    Ok(spec.band_edge() * (k / T::lit(2.0)).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mode(m: usize) -> Self {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Parity::Even => T::one(),
            Parity::Odd => -T::one(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Centre-of-mass description of the `m = 0` mode: `u₀ = √N·X`, `q₀ = P/√N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMode<T> {
    pub total_mass: T,
    pub com_scale: T,
    pub momentum_scale: T,
}

impl<T: Scalar> ZeroMode<T> {
    fn new(spec: &ChainSpec<T>) -> Self {
        let n = T::from_usize_lossy(spec.n());
        Self {
            total_mass: n * spec.mass(),
            com_scale: n.sqrt(),
            momentum_scale: n.sqrt().recip(),
        }
    }

    /// Centre-of-mass coordinate X from the zero-mode coordinate u₀.
    pub fn center_of_mass(&self, u0: T) -> T {
        u0 / self.com_scale
    }

    /// Total momentum P from the zero-mode momentum q₀.
    pub fn total_momentum(&self, q0: T) -> T {
        q0 / self.momentum_scale
    }

    /// Kinetic energy P²/2M of the free bulk motion.
    pub fn kinetic_energy(&self, q0: T) -> T {
        let p = self.total_momentum(q0);
        p * p / (T::lit(2.0) * self.total_mass)
    }
}

/// Amplitude `Y^m_n` of mode `m` at particle `n` (1-based).
///
/// The phase `k_m·n - k_m(N+1)/2 = mπ(2n-N-1)/2N` is reduced in integer
/// arithmetic before any trigonometry, which keeps the inversion symmetry
/// `n -> N+1-n` exact.
pub(crate) fn mode_amplitude<T: Scalar>(n_particles: usize, m: usize, n: usize) -> T {
    let big_n = n_particles as i128;
    let period = 4 * big_n;
    let mut r = (m as i128 * (2 * n as i128 - big_n - 1)).rem_euclid(period);
    if r > 2 * big_n {
        r -= period;
    }
    let nf = T::from_usize_lossy(n_particles);
    if m == 0 {
        return nf.sqrt().recip();
    }
    let norm = (T::lit(2.0) / nf).sqrt();
    let angle = T::PI() * T::from_i128(r).expect("reduced phase") / (T::lit(2.0) * nf);
    if m.is_multiple_of(2) {
        if r.abs() == big_n {
            T::zero()
        } else {
            norm * angle.cos()
        }
    } else if r == 0 || r.abs() == 2 * big_n {
        T::zero()
    } else {
        norm * angle.sin()
    }
}

/// Analytic normal-mode data of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable<T> {
    n: usize,
    wavenumbers: Vec<T>,
    frequencies: Vec<T>,
    /// Row-major: row `m` holds the amplitudes of mode `m` at particles `1..=N`.
    amplitudes: Vec<T>,
    parities: Vec<Parity>,
    zero_mode: ZeroMode<T>,
}

/// Tabulates wavenumbers `mπ/N`, frequencies and orthonormal amplitudes.
pub fn build_mode_table<T: Scalar>(spec: &ChainSpec<T>) -> ModeTable<T> {
    let n = spec.n();
    let nf = T::from_usize_lossy(n);
    let wavenumbers: Vec<T> = (0..n)
        .map(|m| T::PI() * T::from_usize_lossy(m) / nf)
        .collect();
    let frequencies = (0..n).map(|m| spec.mode_frequency(m)).collect();
    let mut amplitudes = Vec::with_capacity(n * n);
    for m in 0..n {
        amplitudes.extend((1..=n).map(|p| mode_amplitude::<T>(n, m, p)));
    }
    ModeTable {
        n,
        wavenumbers,
        frequencies,
        amplitudes,
        parities: (0..n).map(Parity::of_mode).collect(),
        zero_mode: ZeroMode::new(spec),
    }
}

impl<T: Scalar> ModeTable<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wavenumbers(&self) -> &[T] {
        &self.wavenumbers
    }

    pub fn frequencies(&self) -> &[T] {
        &self.frequencies
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn zero_mode(&self) -> &ZeroMode<T> {
        &self.zero_mode
    }

    /// Amplitudes of mode `m`; slice index `i` is particle `i + 1`.
    pub fn mode(&self, m: usize) -> &[T] {
        &self.amplitudes[m * self.n..(m + 1) * self.n]
    }

    /// `Y^m_n` with 1-based particle index.
    pub fn amplitude(&self, m: usize, n: usize) -> T {
        assert!((1..=self.n).contains(&n), "particle index {n} outside 1..={}", self.n);
        self.amplitudes[m * self.n + n - 1]
    }

    /// Max-norm of `Y·Yᵀ - I`.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..self.n {
            let ya = self.mode(a);
            for b in a..self.n {
                let dot = compensated_sum(ya.iter().zip(self.mode(b)).map(|(&x, &y)| x * y));
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Max over all modes and particles of `|Y[N+1-n] ∓ Y[n]|`.
    pub fn parity_defect(&self) -> T {
        let mut worst = T::zero();
        for m in 0..self.n {
            let row = self.mode(m);
            let sign = self.parities[m].sign::<T>();
            for i in 0..self.n {
                worst = worst.max((row[self.n - 1 - i] - sign * row[i]).abs());
            }
        }
        worst
    }

    /// Max residual of `Y[n+1] + Y[n-1] - (2 - μω²/κ²)·Y[n]` over all modes,
    /// with the free-end extension `Y[0] = Y[1]`, `Y[N+1] = Y[N]`.
    pub fn recurrence_residual(&self, spec: &ChainSpec<T>) -> T {
        let two = T::lit(2.0);
        let mut worst = T::zero();
        for m in 0..self.n {
            let row = self.mode(m);
            let lambda = spec.reduced_eigenvalue(self.frequencies[m]);
            for i in 0..self.n {
                let left = if i == 0 { row[0] } else { row[i - 1] };
                let right = if i + 1 == self.n { row[i] } else { row[i + 1] };
                let r = left + right - (two - lambda) * row[i];
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}

/// Dimensionless Hessian of the potential divided by κ²: diagonal
/// `(1, 2, …, 2, 1)`, `-1` on the first off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalMatrix<T> {
    diagonal: Vec<T>,
    off_diagonal: Vec<T>,
}

pub fn build_dynamical_matrix<T: Scalar>(spec: &ChainSpec<T>) -> DynamicalMatrix<T> {
    let n = spec.n();
    let two = T::lit(2.0);
    let diagonal = (0..n)
        .map(|i| if i == 0 || i + 1 == n { T::one() } else { two })
        .collect();
    DynamicalMatrix {
        diagonal,
        off_diagonal: vec![-T::one(); n - 1],
    }
}

impl<T: Scalar> DynamicalMatrix<T> {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> T {
        match i.abs_diff(j) {
            0 => self.diagonal[i],
            1 => self.off_diagonal[i.min(j)],
            _ => T::zero(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.dim();
        DenseMatrix::from_fn(n, |i, j| self.get(i, j))
    }

    /// Matrix-vector product `D·v`.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc = acc + self.off_diagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc = acc + self.off_diagonal[i] * v[i + 1];
                }
                acc
            })
            .collect())
    }

    pub fn row_sums(&self) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(n - 1);
                (lo..=hi).map(|j| self.get(i, j)).sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Particle positions `x_n` (momenta `p_n`).
    Lab,
    /// Displacements `y_n` from the equilibrium configuration.
    Shifted,
    /// Normal-mode coordinates `u_m` (momenta `q_m`).
    Normal,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::Shifted => "shifted",
            Frame::Normal => "normal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Position,
    Momentum,
}

/// A length-N vector of positions or momenta tagged with the frame it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateVector<T> {
    pub values: Vec<T>,
    pub frame: Frame,
    pub variable: Variable,
}

impl<T: Scalar> CoordinateVector<T> {
    pub fn new(values: Vec<T>, frame: Frame, variable: Variable) -> Self {
        Self {
            values,
            frame,
            variable,
        }
    }

    pub fn norm_squared(&self) -> T {
        compensated_sum(self.values.iter().map(|&v| v * v))
    }

    fn expect_frame(&self, what: &'static str, expected: Frame) -> Result<()> {
        if self.frame == expected {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                what,
                expected: expected.name(),
                actual: self.frame.name(),
            })
        }
    }
}

fn check_len<T>(values: &[T], n: usize) -> Result<()> {
    if values.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            actual: values.len(),
        })
    }
}

/// `y_n = x_n - o_n` for positions; momenta are unchanged by the shift.
pub fn lab_to_shifted<T: Scalar>(
    coords: &CoordinateVector<T>,
    spec: &ChainSpec<T>,
) -> Result<CoordinateVector<T>> {
    coords.expect_frame("lab_to_shifted", Frame::Lab)?;
    check_len(&coords.values, spec.n())?;
    let values = match coords.variable {
        Variable::Position => coords
            .values
            .iter()
            .zip(equilibrium_positions(spec))
            .map(|(&x, o)| x - o)
            .collect(),
        Variable::Momentum => coords.values.clone(),
    };
    Ok(CoordinateVector::new(values, Frame::Shifted, coords.variable))
}

pub fn shifted_to_lab<T: Scalar>(
    coords: &CoordinateVector<T>,
    spec: &ChainSpec<T>,
) -> Result<CoordinateVector<T>> {
    coords.expect_frame("shifted_to_lab", Frame::Shifted)?;
    check_len(&coords.values, spec.n())?;
    let values = match coords.variable {
        Variable::Position => coords
            .values
            .iter()
            .zip(equilibrium_positions(spec))
            .map(|(&y, o)| y + o)
            .collect(),
        Variable::Momentum => coords.values.clone(),
    };
    Ok(CoordinateVector::new(values, Frame::Lab, coords.variable))
}

/// `u_m = Σ_n Y^m_n y_n` (and `q_m = Σ_n Y^m_n p_n`).
pub fn to_normal<T: Scalar>(
    coords: &CoordinateVector<T>,
    table: &ModeTable<T>,
) -> Result<CoordinateVector<T>> {
    coords.expect_frame("to_normal", Frame::Shifted)?;
    check_len(&coords.values, table.n())?;
    let values = (0..table.n())
        .map(|m| {
            compensated_sum(
                table
                    .mode(m)
                    .iter()
                    .zip(&coords.values)
                    .map(|(&y, &v)| y * v),
            )
        })
        .collect();
    Ok(CoordinateVector::new(values, Frame::Normal, coords.variable))
}

/// `y_n = Σ_m Y^m_n u_m`.
pub fn from_normal<T: Scalar>(
    coords: &CoordinateVector<T>,
    table: &ModeTable<T>,
) -> Result<CoordinateVector<T>> {
    coords.expect_frame("from_normal", Frame::Normal)?;
    let n = table.n();
    check_len(&coords.values, n)?;
    let values = (1..=n)
        .map(|p| compensated_sum((0..n).map(|m| table.amplitude(m, p) * coords.values[m])))
        .collect();
    Ok(CoordinateVector::new(values, Frame::Shifted, coords.variable))
}
