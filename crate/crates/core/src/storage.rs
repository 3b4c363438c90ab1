// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Three-level emitter: photon generation, impedance-matched storage, the
//! conditional mirror and the single-photon transistor built from them.
//!
//! Levels are `|g⟩` (guided transition to `|e⟩`), `|e⟩` and a metastable
//! `|s⟩` coupled to `|e⟩` by a classical control `Ω(t)`. In the
//! single-excitation sector
//!
//! ```text
//! ċ_e = −(Γ/2 + iδ) c_e + iΩ(t) c_s − √Γ_pl E(t)
//! ċ_s = iΩ*(t) c_e
//! out = E(t) + √Γ_pl c_e
//! ```
//!
//! with `Γ = Γ_pl + Γ′_g + Γ_es` and `E` the input amplitude in the
//! symmetric (even) guided mode. Only the symmetric mode couples to the
//! emitter, so storage needs the photon split equally between both sides.
//! Incoherent decay `e → s` (`Γ_es`) is bookkept as loss.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::params::EmitterParams;
use crate::scalar::Real;
use crate::scatter::{scatter_point, ScatterPoint};
use crate::series::{NormConvention, PulseShape, TimeGrid, TimeSeries};

/// Below this `|c_s|` the inverted control is switched off.
pub const CONTROL_GUARD: f64 = 1e-6;
/// Residual `|c_s|²` above which a generation run reports incomplete depletion.
pub const DEPLETION_WARNING: f64 = 1e-3;

/// Three-level emitter rates plus the control envelope `Ω(t)` used for
/// photon generation.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelParams<T> {
    pub gamma_pl: T,
    pub gamma_prime_g: T,
    pub gamma_es: T,
    pub delta: T,
    pub control: PulseShape<T>,
    /// Fraction of the input photon's intensity arriving from the left (the
    /// rest arrives from the right). `0.5` feeds only the symmetric mode.
    pub split: T,
}

impl<T: Real> ThreeLevelParams<T> {
    pub fn new(
        gamma_pl: T,
        gamma_prime_g: T,
        gamma_es: T,
        delta: T,
        control: PulseShape<T>,
    ) -> Result<Self> {
        for (name, v) in [
            ("gamma_pl", gamma_pl),
            ("gamma_prime_g", gamma_prime_g),
            ("gamma_es", gamma_es),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        if !delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        if !(gamma_pl + gamma_prime_g + gamma_es > T::zero()) {
            return Err(invalid("gamma_total", "total decay rate must be positive"));
        }
        Ok(Self {
            gamma_pl,
            gamma_prime_g,
            gamma_es,
            delta,
            control,
            split: T::lit(0.5),
        })
    }

    /// Rates from a Purcell factor `P = Γ_pl/(Γ′_g + Γ_es)`, with `Γ_es` given
    /// as a fraction of the non-guided decay.
    pub fn from_purcell(
        purcell: T,
        gamma_total: T,
        es_fraction: T,
        control: PulseShape<T>,
    ) -> Result<Self> {
        if !(es_fraction >= T::zero() && es_fraction <= T::one()) {
            return Err(invalid("es_fraction", "must lie in [0, 1]"));
        }
        let p = crate::params::params_from_purcell(purcell, gamma_total, T::zero(), T::zero())?;
        let other = p.gamma_prime();
        Self::new(
            p.gamma_pl(),
            other * (T::one() - es_fraction),
            other * es_fraction,
            T::zero(),
            control,
        )
    }

    pub fn with_split(mut self, split: T) -> Result<Self> {
        if !(split >= T::zero() && split <= T::one()) {
            return Err(invalid("split", "must lie in [0, 1]"));
        }
        self.split = split;
        Ok(self)
    }

    pub fn with_control(mut self, control: PulseShape<T>) -> Self {
        self.control = control;
        self
    }

    /// `Γ_{e→g} = Γ_pl + Γ′_g`
    pub fn gamma_eg(&self) -> T {
        self.gamma_pl + self.gamma_prime_g
    }

    pub fn gamma_total(&self) -> T {
        self.gamma_eg() + self.gamma_es
    }

    /// Best achievable generation and storage efficiency, `Γ_pl/Γ`.
    pub fn max_efficiency(&self) -> T {
        self.gamma_pl / self.gamma_total()
    }

    /// `Γ_pl/(Γ′_g + Γ_es)`
    pub fn effective_purcell(&self) -> T {
        let other = self.gamma_prime_g + self.gamma_es;
        if other == T::zero() {
            T::infinity()
        } else {
            self.gamma_pl / other
        }
    }

    /// Two-level view of the `g ↔ e` transition with the control off.
    pub fn two_level(&self) -> Result<EmitterParams<T>> {
        let other = self.gamma_prime_g + self.gamma_es;
        EmitterParams::new(
            self.gamma_pl,
            other,
            T::zero(),
            self.delta,
            other == T::zero(),
        )
    }
}

// Cubic Lagrange interpolation at `i + frac` through samples i-1..i+2;
// linear in the first and last interval.
fn interp<T: Real>(v: &[Complex<T>], i: usize, frac: T) -> Complex<T> {
    let n = v.len();
    let a = v[i];
    let b = v[(i + 1).min(n - 1)];
    if i == 0 || i + 2 >= n {
        return a + (b - a) * frac;
    }
    let (l, r) = (v[i - 1], v[i + 2]);
    let x = frac;
    let one = T::one();
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let wl = -x * (x - one) * (x - two) / six;
    let wa = (x + one) * (x - one) * (x - two) / two;
    let wb = -(x + one) * x * (x - two) / two;
    let wr = (x + one) * x * (x - one) / six;
    l * wl + a * wa + b * wb + r * wr
}

/// Largest `max(|Ω|, Γ) · h` taken by a single RK4 substep.
const MAX_PHASE_PER_STEP: f64 = 0.02;

/// Amplitudes plus running integrals: incoming flux, emitted/leaked flux,
/// loss to `g`, loss to `s`.
#[derive(Clone, Copy)]
struct Amps<T> {
    c_e: Complex<T>,
    c_s: Complex<T>,
    inflow: T,
    out: T,
    loss_g: T,
    loss_es: T,
}

impl<T: Real> Amps<T> {
    fn axpy(&self, k: &Self, h: T) -> Self {
        Self {
            c_e: self.c_e + k.c_e * h,
            c_s: self.c_s + k.c_s * h,
            inflow: self.inflow + k.inflow * h,
            out: self.out + k.out * h,
            loss_g: self.loss_g + k.loss_g * h,
            loss_es: self.loss_es + k.loss_es * h,
        }
    }
}

struct Rates<T> {
    sqrt_pl: T,
    decay: Complex<T>,
    gamma_prime_g: T,
    gamma_es: T,
}

fn rhs<T: Real>(r: &Rates<T>, y: &Amps<T>, omega: Complex<T>, input: Complex<T>) -> Amps<T> {
    let i = Complex::new(T::zero(), T::one());
    let out = input + y.c_e * r.sqrt_pl;
    let pe = y.c_e.norm_sqr();
    Amps {
        c_e: -r.decay * y.c_e + i * omega * y.c_s - input * r.sqrt_pl,
        c_s: i * omega.conj() * y.c_e,
        inflow: input.norm_sqr(),
        out: out.norm_sqr(),
        loss_g: r.gamma_prime_g * pe,
        loss_es: r.gamma_es * pe,
    }
}

fn rk4_step<T: Real>(
    r: &Rates<T>,
    y: &Amps<T>,
    h: T,
    omega: [Complex<T>; 3],
    input: [Complex<T>; 3],
) -> Amps<T> {
    let half = h / T::lit(2.0);
    let k1 = rhs(r, y, omega[0], input[0]);
    let k2 = rhs(r, &y.axpy(&k1, half), omega[1], input[1]);
    let k3 = rhs(r, &y.axpy(&k2, half), omega[1], input[1]);
    let k4 = rhs(r, &y.axpy(&k3, h), omega[2], input[2]);
    let w = h / T::lit(6.0);
    let two = T::lit(2.0);
    Amps {
        c_e: y.c_e + (k1.c_e + k2.c_e * two + k3.c_e * two + k4.c_e) * w,
        c_s: y.c_s + (k1.c_s + k2.c_s * two + k3.c_s * two + k4.c_s) * w,
        inflow: y.inflow + (k1.inflow + k2.inflow * two + k3.inflow * two + k4.inflow) * w,
        out: y.out + (k1.out + k2.out * two + k3.out * two + k4.out) * w,
        loss_g: y.loss_g + (k1.loss_g + k2.loss_g * two + k3.loss_g * two + k4.loss_g) * w,
        loss_es: y.loss_es + (k1.loss_es + k2.loss_es * two + k3.loss_es * two + k4.loss_es) * w,
    }
}

/// Integrates over the sample grid; returns the state at every sample.
fn evolve<T: Real>(
    params: &ThreeLevelParams<T>,
    control: &[Complex<T>],
    input: &[Complex<T>],
    dt: T,
    y0: Amps<T>,
) -> Vec<Amps<T>> {
    let rates = Rates {
        sqrt_pl: params.gamma_pl.sqrt(),
        decay: Complex::new(params.gamma_total() / T::lit(2.0), params.delta),
        gamma_prime_g: params.gamma_prime_g,
        gamma_es: params.gamma_es,
    };
    let n = control.len();
    let mut y = y0;
    let mut out = Vec::with_capacity(n);
    out.push(y);
    let scale = params.gamma_total();
    for i in 0..n.saturating_sub(1) {
        let (lo, hi) = (i.saturating_sub(1), (i + 2).min(n - 1));
        let window = &control[lo..=hi];
        let peak = window.iter().fold(scale, |m, w| m.max(w.norm()));
        let jump = window
            .windows(2)
            .fold(T::zero(), |m, w| m.max((w[1] - w[0]).norm()));
        let work = (peak * dt + T::lit(4.0) * jump).as_f64();
        let m = (work / MAX_PHASE_PER_STEP).ceil().max(1.0) as usize;
        let h = dt / T::from_count(m);
        let step = T::one() / T::from_count(m);
        for k in 0..m {
            let f0 = T::from_count(k) * step;
            let (fm, f1) = (f0 + step / T::lit(2.0), f0 + step);
            let (o0, om, o1) = (
                interp(control, i, f0),
                interp(control, i, fm),
                interp(control, i, f1),
            );
            let (e0, em, e1) = (
                interp(input, i, f0),
                interp(input, i, fm),
                interp(input, i, f1),
            );
            y = rk4_step(&rates, &y, h, [o0, om, o1], [e0, em, e1]);
        }
        out.push(y);
    }
    out
}

/// Outcome of driving `|s⟩ → |g⟩` with the control, emitting one photon.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationResult<T> {
    /// Emitted symmetric-mode amplitude `√Γ_pl c_e(t)` (photon flux convention).
    pub output: PulseShape<T>,
    /// `∫|v|² dt`
    pub efficiency: T,
    /// `|c_s|²` left at the end of the grid.
    pub residual_s: T,
    pub loss: T,
    /// `(c_e, c_s)` at every sample.
    pub amplitudes: Vec<(Complex<T>, Complex<T>)>,
}

impl<T: Real> GenerationResult<T> {
    /// False if more than [`DEPLETION_WARNING`] of `|s⟩` remained.
    pub fn depleted(&self) -> bool {
        self.residual_s.as_f64() <= DEPLETION_WARNING
    }
}

/// Starts in `|s⟩` and applies `params.control`, recording the emitted pulse.
pub fn generate_photon<T: Real>(params: &ThreeLevelParams<T>) -> Result<GenerationResult<T>> {
    let grid = params.control.grid();
    let zero = Complex::new(T::zero(), T::zero());
    let input = vec![zero; grid.len];
    let y0 = Amps {
        c_e: zero,
        c_s: Complex::new(T::one(), T::zero()),
        inflow: T::zero(),
        out: T::zero(),
        loss_g: T::zero(),
        loss_es: T::zero(),
    };
    let traj = evolve(params, params.control.values(), &input, grid.dt, y0);
    let sqrt_pl = params.gamma_pl.sqrt();
    let output: Vec<_> = traj.iter().map(|y| y.c_e * sqrt_pl).collect();
    let last = traj.last().expect("non-empty grid");
    Ok(GenerationResult {
        output: PulseShape::new(
            TimeSeries::from_grid(grid, output)?,
            NormConvention::PhotonFlux,
        )?,
        efficiency: last.out,
        residual_s: last.c_s.norm_sqr(),
        loss: last.loss_g + last.loss_es,
        amplitudes: traj.iter().map(|y| (y.c_e, y.c_s)).collect(),
    })
}

/// Inverts the generation dynamics: returns the control `Ω(t)` whose
/// generated photon is `target` (a flux amplitude with `∫|v|² ≤ Γ_pl/Γ`).
///
/// `c_e = v/√Γ_pl`, `|c_s|²` follows from probability conservation, the phase
/// of `c_s` from `ċ_s = iΩ* c_e`, and `Ω = (ċ_e + (Γ/2 + iδ)c_e)/(i c_s)`.
/// Once `|c_s|` drops below [`CONTROL_GUARD`] the control is set to zero.
pub fn control_for_target_pulse<T: Real>(
    params: &ThreeLevelParams<T>,
    target: &PulseShape<T>,
) -> Result<PulseShape<T>> {
    if params.gamma_pl == T::zero() {
        return Err(invalid(
            "gamma_pl",
            "cannot emit into the waveguide with gamma_pl = 0",
        ));
    }
    let grid = target.grid();
    if grid.len < 3 {
        return Err(invalid("target", "need at least three samples"));
    }
    let available = params.max_efficiency();
    let required = target.norm_sqr();
    if required > available * (T::one() + T::lit(1e-9)) {
        return Err(Error::TargetInfeasible {
            required: required.as_f64(),
            available: available.as_f64(),
        });
    }

    let dt = grid.dt;
    let gamma = params.gamma_total();
    let decay = Complex::new(gamma / T::lit(2.0), params.delta);
    let inv_sqrt = params.gamma_pl.sqrt().recip();
    let c_e: Vec<Complex<T>> = target.values().iter().map(|v| *v * inv_sqrt).collect();
    let n = c_e.len();
    let two = T::lit(2.0);
    let dc_e: Vec<Complex<T>> = (0..n)
        .map(|i| match i {
            0 => (c_e[1] - c_e[0]) / dt,
            _ if i == n - 1 => (c_e[n - 1] - c_e[n - 2]) / dt,
            _ => (c_e[i + 1] - c_e[i - 1]) / (two * dt),
        })
        .collect();
    // D = iΩ c_s
    let drive: Vec<Complex<T>> = c_e
        .iter()
        .zip(&dc_e)
        .map(|(c, d)| *d + decay * *c)
        .collect();

    let guard = T::lit(CONTROL_GUARD);
    let mut omega = vec![Complex::new(T::zero(), T::zero()); n];
    let mut emitted = T::zero();
    let mut theta = T::zero();
    let mut prev_phase_rate = T::zero();
    for i in 0..n {
        if i > 0 {
            let (a, b) = (c_e[i - 1].norm_sqr(), c_e[i].norm_sqr());
            emitted = emitted + (a + b) * dt / two;
        }
        let s2 = T::one() - c_e[i].norm_sqr() - gamma * emitted;
        if s2 <= guard * guard {
            break;
        }
        let s = s2.sqrt();
        // s² θ̇ = −Im(D* c_e)
        let phase_rate = -(drive[i].conj() * c_e[i]).im / s2;
        if i > 0 {
            theta = theta + (prev_phase_rate + phase_rate) * dt / two;
        }
        prev_phase_rate = phase_rate;
        let c_s = Complex::from_polar(s, theta);
        omega[i] = drive[i] / (Complex::new(T::zero(), T::one()) * c_s);
    }
    PulseShape::new(
        TimeSeries::from_grid(grid, omega)?,
        NormConvention::PhotonFlux,
    )
}

/// Probability bookkeeping of one storage attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct StorageResult<T> {
    /// `|c_s|²` at the end of the grid.
    pub efficiency: T,
    /// Light leaving in the guided modes (reflected, re-emitted or never
    /// coupled) plus any excitation left in `|e⟩`.
    pub leakage: T,
    /// Emission into non-guided channels (`Γ′_g` and `Γ_es`).
    pub loss: T,
    /// Part of `loss` from incoherent `e → s` decay.
    pub spin_flip_loss: T,
    /// Input photon number `Σ|E|² dt`; equals `efficiency + leakage + loss`.
    pub input_photons: T,
    pub final_c_s: Complex<T>,
    pub amplitudes: Vec<(Complex<T>, Complex<T>)>,
}

/// Stores `input` (one photon, split between both sides as `params.split`)
/// while applying `control`. Starts from `|g⟩` with the photon still incoming.
pub fn store_photon<T: Real>(
    params: &ThreeLevelParams<T>,
    input: &PulseShape<T>,
    control: &PulseShape<T>,
) -> Result<StorageResult<T>> {
    if !input.samples.same_grid(&control.samples) {
        return Err(Error::GridMismatch(
            "input and control must share a time grid".into(),
        ));
    }
    let grid = input.grid();
    let (a, b) = (params.split.sqrt(), (T::one() - params.split).sqrt());
    let root_half = T::lit(0.5).sqrt();
    let (sym, anti) = ((a + b) * root_half, (a - b) * root_half);
    let e_sym: Vec<_> = input.values().iter().map(|e| *e * sym).collect();
    let input_photons = input.norm_sqr();
    let zero = Complex::new(T::zero(), T::zero());
    let y0 = Amps {
        c_e: zero,
        c_s: zero,
        inflow: T::zero(),
        out: T::zero(),
        loss_g: T::zero(),
        loss_es: T::zero(),
    };
    let traj = evolve(params, control.values(), &e_sym, grid.dt, y0);
    let last = traj.last().expect("non-empty grid");

    let uncoupled = input_photons * anti * anti;
    let efficiency = last.c_s.norm_sqr();
    let loss = last.loss_g + last.loss_es;
    let ledger_gap = last.inflow - (efficiency + loss + last.out + last.c_e.norm_sqr());
    if ledger_gap.abs().as_f64() > 1e-6 * input_photons.as_f64().max(1.0) {
        return Err(Error::Postcondition {
            invariant: "storage_probability_balance",
            detail: format!("efficiency + leakage + loss misses the input by {ledger_gap:e}"),
        });
    }
    // ∫|E_sym|² of the interpolated input differs from Σ|E|²dt by the
    // quadrature error; that difference never reached the emitter.
    let quadrature = input_photons * sym * sym - last.inflow;
    let leakage_direct = last.out + last.c_e.norm_sqr() + uncoupled + quadrature;
    Ok(StorageResult {
        efficiency,
        leakage: leakage_direct,
        loss,
        spin_flip_loss: last.loss_es,
        input_photons,
        final_c_s: last.c_s,
        amplitudes: traj.iter().map(|y| (y.c_e, y.c_s)).collect(),
    })
}

/// Control that stores the unit-norm `input` optimally: the time reverse of
/// the control generating `input` played backwards.
pub fn matched_storage_control<T: Real>(
    params: &ThreeLevelParams<T>,
    input: &PulseShape<T>,
) -> Result<PulseShape<T>> {
    let target = input
        .time_reversed_conj()
        .scaled(params.max_efficiency().sqrt() / input.norm_sqr().sqrt());
    let generation = control_for_target_pulse(params, &target)?;
    let reversed: Vec<_> = generation
        .values()
        .iter()
        .rev()
        .map(|w| -w.conj())
        .collect();
    PulseShape::new(
        TimeSeries::from_grid(generation.grid(), reversed)?,
        NormConvention::PhotonFlux,
    )
}

/// Unit-norm Gaussian photon of duration `duration` (12 rms widths of the
/// intensity), centred on a grid `[0, duration]`.
pub fn gaussian_photon<T: Real>(duration: T, dt: T) -> Result<PulseShape<T>> {
    if !(duration > T::zero()) {
        return Err(invalid("duration", "must be positive"));
    }
    let grid = TimeGrid::spanning(T::zero(), duration, dt)?;
    PulseShape::gaussian(grid, duration / T::lit(2.0), duration / T::lit(12.0))
}

/// Internal state of the emitter once the control is off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitterState {
    Ground,
    Stored,
}

/// With the control off, `|g⟩` scatters like a two-level emitter and `|s⟩`
/// is transparent.
pub fn conditional_mirror<T: Real>(
    state: EmitterState,
    params: &EmitterParams<T>,
    delta: T,
) -> Result<ScatterPoint<T>> {
    let p = params.with_delta(delta)?;
    Ok(match state {
        EmitterState::Ground => scatter_point(&p),
        EmitterState::Stored => {
            let zero = Complex::new(T::zero(), T::zero());
            let one = Complex::new(T::one(), T::zero());
            ScatterPoint {
                delta,
                r: zero,
                t: one,
                reflectance: T::zero(),
                transmittance: T::one(),
                loss: T::zero(),
            }
        }
    })
}

/// Photons scattered before an unwanted optical pumping event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainEstimate<T> {
    Finite {
        mean: T,
        ci95: (T, T),
        /// `Γ_{e→g}/Γ_{e→s}`
        analytic: T,
        n_trials: usize,
    },
    /// `Γ_{e→s} = 0`: the emitter can never be pumped.
    Infinite,
}

/// Monte Carlo estimate of the number of `g`-preserving scattering events
/// before the first decay into `|s⟩`. Trial `i` draws from its own ChaCha8
/// stream, so the estimate is independent of the thread count.
pub fn transistor_gain<T: Real>(
    params: &ThreeLevelParams<T>,
    n_trials: usize,
    seed: u64,
) -> Result<GainEstimate<T>> {
    if params.gamma_es == T::zero() {
        return Ok(GainEstimate::Infinite);
    }
    if n_trials == 0 {
        return Err(invalid("n_trials", "need at least one trial"));
    }
    let (eg, es) = (params.gamma_eg().as_f64(), params.gamma_es.as_f64());
    let p_flip = es / (eg + es);
    let counts: Vec<u64> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut n = 0u64;
            while rng.gen::<f64>() >= p_flip {
                n += 1;
            }
            n
        })
        .collect();
    let nt = n_trials as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / nt;
    let var = if n_trials > 1 {
        counts
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / (nt - 1.0)
    } else {
        0.0
    };
    let half = 1.959_963_984_540_054 * (var / nt).sqrt();
    Ok(GainEstimate::Finite {
        mean: T::lit(mean),
        ci95: (T::lit(mean - half), T::lit(mean + half)),
        analytic: T::lit(eg / es),
        n_trials,
    })
}

/// Expected photon counts of one transistor run.
#[derive(Debug, Clone, PartialEq)]
pub struct TransistorOutcome<T> {
    /// Storage of the gate photon (`None` for an empty gate).
    pub storage: Option<StorageResult<T>>,
    /// Probability the emitter is in `|s⟩` after the gate step.
    pub stored_probability: T,
    pub reflected: T,
    pub transmitted: T,
    pub lost: T,
    /// Probability that signal photons pumped `|g⟩ → |s⟩`.
    pub flip_probability: T,
    pub flip_occurred: bool,
    /// Per-photon response of the emitter in `|g⟩`.
    pub mirror: ScatterPoint<T>,
}

/// Gate step (store zero or one photon with the matched control) followed by
/// `signal_count` resonant signal photons sent one at a time from one side.
///
/// `params.control` is the generation control defining the gate photon shape;
/// storage uses its time reverse. Each signal photon meeting `|g⟩` is
/// reflected with `R`, transmitted with `T`, and otherwise absorbed and
/// re-emitted out of the guide; a fraction `Γ_es/(Γ′_g + Γ_es)` of those
/// events pumps the emitter into `|s⟩`, after which photons pass freely.
pub fn run_transistor<T: Real>(
    params: &ThreeLevelParams<T>,
    gate_photon: bool,
    signal_count: usize,
) -> Result<TransistorOutcome<T>> {
    let (storage, stored) = if gate_photon {
        let generated = generate_photon(params)?;
        let gate = generated.output.time_reversed_conj().into_unit_norm()?;
        let control = matched_storage_control(params, &gate)?;
        let result = store_photon(params, &gate, &control)?;
        let p_s = result.efficiency + result.spin_flip_loss;
        (Some(result), p_s)
    } else {
        (None, T::zero())
    };

    let two_level = params.two_level()?;
    let mirror = conditional_mirror(EmitterState::Ground, &two_level, params.delta)?;
    let non_guided = params.gamma_prime_g + params.gamma_es;
    let flip_per_photon = if non_guided > T::zero() {
        mirror.loss * params.gamma_es / non_guided
    } else {
        T::zero()
    };

    let mut p_g = T::one() - stored;
    let mut p_s = stored;
    let (mut reflected, mut transmitted, mut lost) = (T::zero(), T::zero(), T::zero());
    let mut flipped = T::zero();
    for _ in 0..signal_count {
        reflected = reflected + p_g * mirror.reflectance;
        transmitted = transmitted + p_g * mirror.transmittance + p_s;
        lost = lost + p_g * mirror.loss;
        let f = p_g * flip_per_photon;
        flipped = flipped + f;
        p_g = p_g - f;
        p_s = p_s + f;
    }
    let flip_probability = flipped;
    Ok(TransistorOutcome {
        storage,
        stored_probability: stored,
        reflected,
        transmitted,
        lost,
        flip_probability,
        flip_occurred: flip_probability > T::lit(0.5),
        mirror,
    })
}
