// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force check of single-photon scattering.
//!
//! The guided continuum is replaced by two independent branches (right- and
//! left-moving) of `n` discrete modes each, with linear dispersion about the
//! emitter resonance and periodic boundary conditions on a ring of length
//! `L = 2π/Δ` (units `c = 1`). A single excitation evolves under
//!
//! ```text
//! ċ_e   = −(Γ′/2) c_e − i g Σ_j (a_R,j + a_L,j)
//! ȧ_β,j = −i δ_j a_β,j − i g c_e
//! ```
//!
//! with `g² = Γ_pl Δ / 4π`, so that the Golden Rule decay into both branches
//! is `Γ_pl` on shell. Emission into non-guided channels is the non-Hermitian `Γ′`
//! term; its norm deficit is the loss probability.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::params::EmitterParams;
use crate::quad;
use crate::scalar::Real;
use crate::scatter::{pulse_averaged_rt, Spectrum};
use crate::series::{NormConvention, PulseShape, TimeGrid, TimeSeries};

/// Minimum window width in units of `Γ`.
pub const MIN_WINDOW_OVER_GAMMA: f64 = 20.0;
/// Largest allowed spectral weight outside the window.
pub const MAX_LEAKAGE: f64 = 1e-6;
/// Largest allowed `|c_e|²` at the end of a run.
pub const MAX_RESIDUAL_EXCITATION: f64 = 1e-6;
const CALIBRATION_TOL: f64 = 0.01;

/// Discretized two-branch mode continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid<T> {
    pub n_modes: usize,
    /// Detuning window `[lo, hi]` (equal to the wavevector window for `c = 1`).
    pub window: (T, T),
    pub box_length: T,
    /// Per-mode coupling `g`.
    pub coupling: T,
    pub detunings: Vec<T>,
    pub gamma_pl: T,
    pub gamma_prime: T,
    /// Population decay rate measured on the grid during calibration, to be
    /// compared with [`band_limited_decay_rate`] (`None` if `Γ_pl = 0`).
    pub measured_gamma_pl: Option<T>,
}

impl<T: Real> ModeGrid<T> {
    pub fn k_span(&self) -> T {
        self.window.1 - self.window.0
    }

    pub fn spacing(&self) -> T {
        self.k_span() / T::from_count(self.n_modes)
    }

    /// Time after which a free wavepacket returns to its starting point.
    pub fn recurrence_time(&self) -> T {
        self.box_length
    }

    /// Fixed RK4 step: `step_factor / k_span`.
    pub fn time_step(&self, step_factor: T) -> T {
        step_factor / self.k_span()
    }
}

/// Single-excitation amplitudes at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationState<T> {
    pub time: T,
    pub c_e: Complex<T>,
    pub right_amps: Vec<Complex<T>>,
    pub left_amps: Vec<Complex<T>>,
}

impl<T: Real> ExcitationState<T> {
    pub fn right_population(&self) -> T {
        self.right_amps
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    pub fn left_population(&self) -> T {
        self.left_amps
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.c_e.norm_sqr() + self.right_population() + self.left_population()
    }
}

/// Builds and calibrates a grid of `n_modes` per branch on the detuning
/// window `[lo, hi]`. The ring length follows from the mode spacing.
pub fn build_grid<T: Real>(
    params: &EmitterParams<T>,
    n_modes: usize,
    window: (T, T),
) -> Result<ModeGrid<T>> {
    if n_modes < 2 {
        return Err(invalid(
            "n_modes",
            format!("need at least 2 modes per branch, got {n_modes}"),
        ));
    }
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(invalid("window", "need finite lo < hi"));
    }
    let gamma = params.gamma_total();
    let span = hi - lo;
    let required = T::lit(MIN_WINDOW_OVER_GAMMA) * gamma;
    if span < required {
        return Err(Error::WindowTooNarrow {
            span: span.as_f64(),
            required: required.as_f64(),
        });
    }
    if !(lo < T::zero() && hi > T::zero()) {
        return Err(Error::ResonanceOutsideWindow {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }

    let spacing = span / T::from_count(n_modes);
    let two_pi = T::lit(2.0) * T::PI();
    let half = T::lit(0.5);
    let detunings = (0..n_modes)
        .map(|j| lo + (T::from_count(j) + half) * spacing)
        .collect();
    let coupling = (params.gamma_pl() * spacing / (T::lit(2.0) * two_pi)).sqrt();
    let mut grid = ModeGrid {
        n_modes,
        window,
        box_length: two_pi / spacing,
        coupling,
        detunings,
        gamma_pl: params.gamma_pl(),
        gamma_prime: params.gamma_prime(),
        measured_gamma_pl: None,
    };
    if params.gamma_pl() > T::zero() {
        let measured = calibrate(&grid)?;
        let expected = band_limited_decay_rate(grid.gamma_pl, window);
        let rel = ((measured - expected) / expected).abs();
        if rel.as_f64() > CALIBRATION_TOL {
            return Err(Error::CalibrationFailed {
                measured: measured.as_f64(),
                expected: expected.as_f64(),
            });
        }
        grid.measured_gamma_pl = Some(measured);
    }
    Ok(grid)
}

/// Grids sharing the mode spacing `spacing` (hence the ring length), with
/// windows `[−nΔ/2, nΔ/2]` growing with `n`. Refining this way shrinks the
/// finite-band error, which a fixed window would freeze.
pub fn fixed_spacing_grids<T: Real>(
    params: &EmitterParams<T>,
    n_modes: &[usize],
    spacing: T,
) -> Result<Vec<ModeGrid<T>>> {
    if !(spacing > T::zero() && spacing.is_finite()) {
        return Err(invalid("spacing", "must be finite and positive"));
    }
    n_modes
        .par_iter()
        .map(|&n| {
            let half = T::from_count(n) * spacing / T::lit(2.0);
            build_grid(params, n, (-half, half))
        })
        .collect()
}

/// Decay rate of an excited emitter coupled to a flat band `[lo, hi]` with
/// on-shell width `Γ_pl`. The band edges push the pole of the propagator to
/// `γ = Γ_pl/2 + (Γ_pl/2π)(atan(γ/hi) + atan(γ/|lo|))`, so the population
/// decays at `2γ`, slightly faster than `Γ_pl`. Real-frequency scattering
/// still sees the width `Γ_pl`.
pub fn band_limited_decay_rate<T: Real>(gamma_pl: T, window: (T, T)) -> T {
    let (lo, hi) = window;
    let half = gamma_pl / T::lit(2.0);
    let k = gamma_pl / (T::lit(2.0) * T::PI());
    let mut g = half;
    for _ in 0..100 {
        let next = half + k * ((g / hi).atan() + (g / -lo).atan());
        if (next - g).abs() <= T::epsilon() * next {
            g = next;
            break;
        }
        g = next;
    }
    g * T::lit(2.0)
}

/// Measures the guided decay rate of an initially excited, otherwise
/// lossless emitter from the slope of `ln |c_e|²` between two times.
fn calibrate<T: Real>(grid: &ModeGrid<T>) -> Result<T> {
    let gamma = grid.gamma_pl;
    let t2 = (T::lit(3.0) / gamma).min(grid.recurrence_time() / T::lit(4.0));
    let t1 = t2 / T::lit(3.0);
    let lossless = ModeGrid {
        gamma_prime: T::zero(),
        ..grid.clone()
    };
    let mut state = ExcitationState {
        time: T::zero(),
        c_e: Complex::new(T::one(), T::zero()),
        right_amps: vec![Complex::new(T::zero(), T::zero()); grid.n_modes],
        left_amps: vec![Complex::new(T::zero(), T::zero()); grid.n_modes],
    };
    let dt = grid.time_step(T::lit(0.2));
    let mut integ = Rk4::new(grid.n_modes);
    let p1 = integ
        .advance(&lossless, &mut state, t1, dt, |_| {})
        .c_e
        .norm_sqr();
    let p2 = integ
        .advance(&lossless, &mut state, t2, dt, |_| {})
        .c_e
        .norm_sqr();
    if !(p1 > T::zero() && p2 > T::zero()) {
        return Err(Error::CalibrationFailed {
            measured: f64::NAN,
            expected: gamma.as_f64(),
        });
    }
    Ok((p1 / p2).ln() / (t2 - t1))
}

/// Incoming single-photon wavepacket in the right-moving branch.
#[derive(Debug, Clone, PartialEq)]
pub enum InputPulse<T> {
    /// Gaussian spectrum `|φ(δ)|²` with mean `center` and standard deviation
    /// `rms_bandwidth`. Its peak reaches the emitter at
    /// [`InputPulse::arrival_time`].
    Gaussian { center: T, rms_bandwidth: T },
    /// Unit-norm flux amplitude `v(t)` that the free field would have at the
    /// emitter position.
    Samples(PulseShape<T>),
}

impl<T: Real> InputPulse<T> {
    /// Time at which a Gaussian peak meets the emitter: `min(L/2, 8 τ)` with
    /// `τ = 1/(2σ)` the temporal rms width of `|v(t)|²`.
    pub fn arrival_time(&self, grid: &ModeGrid<T>) -> T {
        match self {
            InputPulse::Gaussian { rms_bandwidth, .. } => {
                let tau = (T::lit(2.0) * *rms_bandwidth).recip();
                (grid.box_length / T::lit(2.0)).min(T::lit(8.0) * tau)
            }
            InputPulse::Samples(p) => {
                let g = p.grid();
                (g.t0 + g.t_end()) / T::lit(2.0)
            }
        }
    }

    /// End time leaving the emitter in its ground state.
    pub fn suggested_t_final(&self, grid: &ModeGrid<T>) -> T {
        match self {
            InputPulse::Gaussian { .. } => T::lit(2.0) * self.arrival_time(grid),
            InputPulse::Samples(p) => {
                let gamma = grid.gamma_pl + grid.gamma_prime;
                p.grid().t_end() + T::lit(30.0) / gamma
            }
        }
    }

    /// Spectral density matching this pulse, for the closed-form comparison.
    pub fn spectrum(&self, grid: &ModeGrid<T>) -> Result<Spectrum<T>> {
        match self {
            InputPulse::Gaussian {
                center,
                rms_bandwidth,
            } => Ok(Spectrum::Gaussian {
                center: *center,
                rms: *rms_bandwidth,
            }),
            InputPulse::Samples(p) => {
                let (lo, hi) = grid.window;
                let d_delta = grid.spacing() / T::lit(4.0);
                let fgrid = TimeGrid::spanning(lo, hi, d_delta)?;
                let amps: Vec<_> = fgrid.times().map(|d| fourier_amplitude(p, d)).collect();
                let pulse = PulseShape::new(
                    TimeSeries::from_grid(fgrid, amps)?,
                    NormConvention::PhotonFlux,
                )?;
                let n = pulse.norm_sqr();
                if (n - T::one()).abs().as_f64() > 1e-4 {
                    return Err(Error::SpectralLeakage {
                        leak: (T::one() - n).as_f64(),
                    });
                }
                Ok(Spectrum::Sampled(pulse.into_unit_norm()?))
            }
        }
    }

    fn initial_amplitudes(&self, grid: &ModeGrid<T>) -> Result<Vec<Complex<T>>> {
        match self {
            InputPulse::Gaussian {
                center,
                rms_bandwidth,
            } => {
                let (c, s) = (*center, *rms_bandwidth);
                if !(s > T::zero()) {
                    return Err(invalid("rms_bandwidth", "must be positive"));
                }
                let (lo, hi) = grid.window;
                let norm = (T::lit(2.0) * T::PI()).sqrt() * s;
                let inside = quad::integrate(
                    |d| {
                        let x = (d - c) / s;
                        [(-(x * x) / T::lit(2.0)).exp() / norm]
                    },
                    lo.max(c - T::lit(40.0) * s),
                    hi.min(c + T::lit(40.0) * s),
                    T::lit(1e-13),
                    2000,
                );
                let leak = if hi <= c - T::lit(40.0) * s || lo >= c + T::lit(40.0) * s {
                    T::one()
                } else {
                    T::one() - inside.value[0]
                };
                if leak.as_f64() > MAX_LEAKAGE {
                    return Err(Error::SpectralLeakage {
                        leak: leak.as_f64(),
                    });
                }
                let t_a = self.arrival_time(grid);
                let four = T::lit(4.0);
                let mut amps: Vec<_> = grid
                    .detunings
                    .iter()
                    .map(|&d| {
                        let x = d - c;
                        Complex::from_polar((-(x * x) / (four * s * s)).exp(), d * t_a)
                    })
                    .collect();
                let n = amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
                amps.iter_mut().for_each(|z| *z = *z / n);
                Ok(amps)
            }
            InputPulse::Samples(p) => {
                if p.norm_convention != NormConvention::UnitNorm {
                    return Err(Error::NotNormalized {
                        what: "input pulse",
                        norm: p.norm_sqr().as_f64(),
                    });
                }
                let g = p.grid();
                if g.t_end() - g.t0 >= grid.box_length {
                    return Err(Error::GridMismatch(
                        "pulse is longer than the mode ring".into(),
                    ));
                }
                let scale = (grid.spacing() / (T::lit(2.0) * T::PI())).sqrt() * g.dt;
                let amps: Vec<_> = grid
                    .detunings
                    .iter()
                    .map(|&d| {
                        p.values()
                            .iter()
                            .zip(g.times())
                            .fold(Complex::new(T::zero(), T::zero()), |acc, (v, t)| {
                                acc + *v * Complex::from_polar(T::one(), d * t)
                            })
                            * scale
                    })
                    .collect();
                let n = amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
                let leak = T::one() - n;
                if leak.abs().as_f64() > MAX_LEAKAGE {
                    return Err(Error::SpectralLeakage {
                        leak: leak.as_f64(),
                    });
                }
                Ok(amps)
            }
        }
    }
}

/// `(1/√2π) ∫ v(t) e^{iδt} dt`
fn fourier_amplitude<T: Real>(p: &PulseShape<T>, delta: T) -> Complex<T> {
    let g = p.grid();
    let s = p
        .values()
        .iter()
        .zip(g.times())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (v, t)| {
            acc + *v * Complex::from_polar(T::one(), delta * t)
        });
    s * (g.dt / (T::lit(2.0) * T::PI()).sqrt())
}

/// Knobs for [`scatter_wavepacket_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions<T> {
    /// RK4 step is `step_factor / k_span`.
    pub step_factor: T,
    /// Approximate number of stored snapshots (the final state is always kept).
    pub snapshots: usize,
}

impl<T: Real> Default for SimOptions<T> {
    fn default() -> Self {
        Self {
            step_factor: T::lit(0.2),
            snapshots: 100,
        }
    }
}

/// Result of one wavepacket simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketOutcome<T> {
    pub reflectance: T,
    pub transmittance: T,
    pub loss: T,
    pub residual_excitation: T,
    pub trajectory: Vec<ExcitationState<T>>,
}

impl<T: Real> WavepacketOutcome<T> {
    pub fn cleared(&self) -> bool {
        self.residual_excitation.as_f64() < MAX_RESIDUAL_EXCITATION
    }
}

struct Rk4<T> {
    k: [ExcitationDerivative<T>; 4],
    tmp: ExcitationState<T>,
}

#[derive(Clone)]
struct ExcitationDerivative<T> {
    c_e: Complex<T>,
    right: Vec<Complex<T>>,
    left: Vec<Complex<T>>,
}

impl<T: Real> ExcitationDerivative<T> {
    fn zeros(n: usize) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            c_e: z,
            right: vec![z; n],
            left: vec![z; n],
        }
    }
}

fn derivative<T: Real>(
    grid: &ModeGrid<T>,
    s: &ExcitationState<T>,
    out: &mut ExcitationDerivative<T>,
) {
    let zero = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let g = grid.coupling;
    let field = s
        .right_amps
        .iter()
        .chain(s.left_amps.iter())
        .fold(zero, |a, z| a + *z);
    out.c_e = s.c_e * (-grid.gamma_prime / T::lit(2.0)) - i * field * g;
    let drive = -i * s.c_e * g;
    for (j, &d) in grid.detunings.iter().enumerate() {
        out.right[j] = -i * s.right_amps[j] * d + drive;
        out.left[j] = -i * s.left_amps[j] * d + drive;
    }
}

impl<T: Real> Rk4<T> {
    fn new(n: usize) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            k: std::array::from_fn(|_| ExcitationDerivative::zeros(n)),
            tmp: ExcitationState {
                time: T::zero(),
                c_e: z,
                right_amps: vec![z; n],
                left_amps: vec![z; n],
            },
        }
    }

    fn stage(
        base: &ExcitationState<T>,
        k: &ExcitationDerivative<T>,
        h: T,
        out: &mut ExcitationState<T>,
    ) {
        out.c_e = base.c_e + k.c_e * h;
        for j in 0..base.right_amps.len() {
            out.right_amps[j] = base.right_amps[j] + k.right[j] * h;
            out.left_amps[j] = base.left_amps[j] + k.left[j] * h;
        }
    }

    fn step(&mut self, grid: &ModeGrid<T>, s: &mut ExcitationState<T>, dt: T) {
        let half = dt / T::lit(2.0);
        let [k1, k2, k3, k4] = &mut self.k;
        derivative(grid, s, k1);
        Self::stage(s, k1, half, &mut self.tmp);
        derivative(grid, &self.tmp, k2);
        Self::stage(s, k2, half, &mut self.tmp);
        derivative(grid, &self.tmp, k3);
        Self::stage(s, k3, dt, &mut self.tmp);
        derivative(grid, &self.tmp, k4);
        let w = dt / T::lit(6.0);
        let two = T::lit(2.0);
        s.c_e = s.c_e + (k1.c_e + k2.c_e * two + k3.c_e * two + k4.c_e) * w;
        for j in 0..s.right_amps.len() {
            s.right_amps[j] = s.right_amps[j]
                + (k1.right[j] + k2.right[j] * two + k3.right[j] * two + k4.right[j]) * w;
            s.left_amps[j] = s.left_amps[j]
                + (k1.left[j] + k2.left[j] * two + k3.left[j] * two + k4.left[j]) * w;
        }
        s.time = s.time + dt;
    }

    /// Integrates to `t_end` with steps no longer than `dt_max`, calling
    /// `observe` after every step.
    fn advance<'a>(
        &mut self,
        grid: &ModeGrid<T>,
        s: &'a mut ExcitationState<T>,
        t_end: T,
        dt_max: T,
        mut observe: impl FnMut(&ExcitationState<T>),
    ) -> &'a ExcitationState<T> {
        let span = t_end - s.time;
        if span <= T::zero() {
            return s;
        }
        let steps = (span / dt_max).ceil().to_usize().unwrap_or(1).max(1);
        let dt = span / T::from_count(steps);
        for _ in 0..steps {
            self.step(grid, s, dt);
            observe(s);
        }
        s
    }
}

/// Scatters `pulse` off the emitter and reports where the photon ended up.
/// Fails if the emitter is still excited at `t_final`.
pub fn scatter_wavepacket<T: Real>(
    grid: &ModeGrid<T>,
    pulse: &InputPulse<T>,
    t_final: T,
) -> Result<WavepacketOutcome<T>> {
    let out = scatter_wavepacket_with(grid, pulse, t_final, &SimOptions::default())?;
    if !out.cleared() {
        return Err(Error::PulseNotCleared {
            residual: out.residual_excitation.as_f64(),
        });
    }
    Ok(out)
}

/// As [`scatter_wavepacket`] but with explicit options and without the
/// cleared-pulse postcondition.
pub fn scatter_wavepacket_with<T: Real>(
    grid: &ModeGrid<T>,
    pulse: &InputPulse<T>,
    t_final: T,
    options: &SimOptions<T>,
) -> Result<WavepacketOutcome<T>> {
    if !(t_final > T::zero()) || !t_final.is_finite() {
        return Err(invalid("t_final", "must be positive and finite"));
    }
    let n = grid.n_modes;
    let right = pulse.initial_amplitudes(grid)?;
    let mut state = ExcitationState {
        time: T::zero(),
        c_e: Complex::new(T::zero(), T::zero()),
        right_amps: right,
        left_amps: vec![Complex::new(T::zero(), T::zero()); n],
    };
    let dt = grid.time_step(options.step_factor);
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(1).max(1);
    let stride = (steps / options.snapshots.max(1)).max(1);

    let mut trajectory = vec![state.clone()];
    let mut rk = Rk4::new(n);
    let mut count = 0usize;
    rk.advance(grid, &mut state, t_final, dt, |s| {
        count += 1;
        if count.is_multiple_of(stride) && count != steps {
            trajectory.push(s.clone());
        }
    });
    trajectory.push(state.clone());

    let reflectance = state.left_population();
    let transmittance = state.right_population();
    let residual = state.c_e.norm_sqr();
    Ok(WavepacketOutcome {
        reflectance,
        transmittance,
        loss: T::one() - residual - reflectance - transmittance,
        residual_excitation: residual,
        trajectory,
    })
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub n_modes: usize,
    pub reflectance: T,
    pub transmittance: T,
    pub loss: T,
    pub reference_reflectance: T,
    pub reference_transmittance: T,
    pub reference_loss: T,
    /// `|R_sim − R̄|`
    pub abs_error: T,
    pub cleared: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub rows: Vec<ConvergenceRow<T>>,
    pub noise_floor: T,
}

/// Error increases smaller than this are tolerated when checking
/// monotonicity.
pub const CONVERGENCE_NOISE_FLOOR: f64 = 1e-4;

impl<T: Real> ConvergenceReport<T> {
    /// First `n_modes` at which the error grew by more than the noise floor.
    pub fn first_non_monotone(&self) -> Option<usize> {
        self.rows
            .windows(2)
            .find(|w| w[1].abs_error > w[0].abs_error + self.noise_floor)
            .map(|w| w[1].n_modes)
    }

    pub fn final_error(&self) -> T {
        self.rows.last().map(|r| r.abs_error).unwrap_or(T::nan())
    }

    pub fn check_monotone(&self) -> Result<()> {
        match self.first_non_monotone() {
            Some(n_modes) => Err(Error::NonMonotoneConvergence { n_modes }),
            None => Ok(()),
        }
    }
}

/// Runs `pulse` on each grid (concurrently) and compares with the spectrally
/// averaged closed form. Grids must have strictly increasing `n_modes`.
pub fn convergence_report<T: Real>(
    grids: &[ModeGrid<T>],
    pulse: &InputPulse<T>,
) -> Result<ConvergenceReport<T>> {
    if grids.is_empty() {
        return Err(Error::EmptyInput("grid sequence"));
    }
    if grids.windows(2).any(|w| w[1].n_modes <= w[0].n_modes) {
        return Err(invalid(
            "n_modes",
            "grid sequence must be strictly increasing",
        ));
    }
    let rows = grids
        .par_iter()
        .map(|grid| {
            let params =
                EmitterParams::new(grid.gamma_pl, grid.gamma_prime, T::zero(), T::zero(), true)?;
            let reference = pulse_averaged_rt(&params, &pulse.spectrum(grid)?)?;
            let out = scatter_wavepacket_with(
                grid,
                pulse,
                pulse.suggested_t_final(grid),
                &SimOptions {
                    snapshots: 1,
                    ..Default::default()
                },
            )?;
            Ok(ConvergenceRow {
                n_modes: grid.n_modes,
                reflectance: out.reflectance,
                transmittance: out.transmittance,
                loss: out.loss,
                reference_reflectance: reference.reflectance,
                reference_transmittance: reference.transmittance,
                reference_loss: reference.loss,
                abs_error: (out.reflectance - reference.reflectance).abs(),
                cleared: out.cleared(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        rows,
        noise_floor: T::lit(CONVERGENCE_NOISE_FLOOR),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::params_from_purcell;
    use approx::assert_abs_diff_eq;

    fn p(purcell: f64) -> EmitterParams<f64> {
        params_from_purcell(purcell, 1.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(build_grid(&p(20.0), 1, (-12.0, 12.0)).is_err());
        assert!(matches!(
            build_grid(&p(20.0), 100, (-5.0, 5.0)),
            Err(Error::WindowTooNarrow { .. })
        ));
        assert!(matches!(
            build_grid(&p(20.0), 100, (1.0, 30.0)),
            Err(Error::ResonanceOutsideWindow { .. })
        ));
    }

    #[test]
    fn calibration_reproduces_golden_rule() {
        let g = build_grid(&p(20.0), 2000, (-12.0, 12.0)).unwrap();
        let measured = g.measured_gamma_pl.unwrap();
        let expected = band_limited_decay_rate(20.0 / 21.0, (-12.0, 12.0));
        assert!(
            ((measured - expected) / expected).abs() < 0.01,
            "{measured}"
        );
        assert!(
            ((measured - 20.0 / 21.0) / (20.0 / 21.0)).abs() < 0.05,
            "{measured}"
        );
        assert!((g.box_length - 2.0 * std::f64::consts::PI * 2000.0 / 24.0).abs() < 1e-9);
    }

    #[test]
    fn decoupled_emitter_transmits_everything() {
        let g = build_grid(&p(0.0), 500, (-12.0, 12.0)).unwrap();
        let pulse = InputPulse::Gaussian {
            center: 0.0,
            rms_bandwidth: 0.1,
        };
        let out = scatter_wavepacket(&g, &pulse, pulse.suggested_t_final(&g)).unwrap();
        assert!(
            (out.transmittance - 1.0).abs() < 1e-8,
            "{}",
            out.transmittance
        );
        assert!(out.trajectory.iter().all(|s| s.left_population() == 0.0));
    }

    #[test]
    fn far_detuned_pulse_passes() {
        let g = build_grid(&p(20.0), 1000, (-30.0, 30.0)).unwrap();
        let pulse = InputPulse::Gaussian {
            center: 20.0,
            rms_bandwidth: 0.5,
        };
        let out = scatter_wavepacket(&g, &pulse, pulse.suggested_t_final(&g)).unwrap();
        assert!(out.transmittance > 0.99, "{}", out.transmittance);
    }

    #[test]
    fn leakage_and_ordering_errors() {
        let g = build_grid(&p(20.0), 200, (-12.0, 12.0)).unwrap();
        let off = InputPulse::Gaussian {
            center: 11.5,
            rms_bandwidth: 0.5,
        };
        assert!(matches!(
            scatter_wavepacket(&g, &off, 10.0),
            Err(Error::SpectralLeakage { .. })
        ));
        let pulse = InputPulse::Gaussian {
            center: 0.0,
            rms_bandwidth: 0.1,
        };
        assert!(convergence_report(&[g.clone(), g.clone()], &pulse).is_err());
        let rep = convergence_report(&[g], &pulse).unwrap();
        assert_eq!(rep.rows.len(), 1);
    }

    #[test]
    fn norm_is_non_increasing() {
        let g = build_grid(&p(5.0), 400, (-12.0, 12.0)).unwrap();
        let pulse = InputPulse::Gaussian {
            center: 0.0,
            rms_bandwidth: 0.2,
        };
        let out = scatter_wavepacket_with(
            &g,
            &pulse,
            pulse.suggested_t_final(&g),
            &SimOptions::default(),
        )
        .unwrap();
        let norms: Vec<f64> = out.trajectory.iter().map(|s| s.norm()).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(norms[0] <= 1.0 + 1e-9);
    }

    #[test]
    fn band_limited_rate_limits() {
        assert_abs_diff_eq!(
            band_limited_decay_rate(1.0, (-1e9, 1e9)),
            1.0,
            epsilon = 1e-8
        );
        // first order in Γ/W: 1/(1 - 2Γ/(πW))
        let r = band_limited_decay_rate(1.0_f64, (-500.0, 500.0));
        assert_abs_diff_eq!(
            r,
            1.0 / (1.0 - 2.0 / (std::f64::consts::PI * 1000.0)),
            epsilon = 1e-8
        );
        assert!(band_limited_decay_rate(1.0, (-12.0, 12.0)) > 1.02);
    }

    #[test]
    fn lossless_norm_is_conserved() {
        let params = EmitterParams::lossless(1.0, 0.0, 0.0).unwrap();
        let g = build_grid(&params, 400, (-12.0, 12.0)).unwrap();
        let pulse = InputPulse::Gaussian {
            center: 0.0,
            rms_bandwidth: 0.2,
        };
        let out = scatter_wavepacket(&g, &pulse, pulse.suggested_t_final(&g)).unwrap();
        for s in &out.trajectory {
            assert!((s.norm() - 1.0_f64).abs() < 1e-8, "{}", s.norm());
        }
    }
}
