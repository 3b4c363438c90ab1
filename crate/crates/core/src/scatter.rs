// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-photon scattering off a two-level emitter in the linear regime.
//!
//! The reflection amplitude is `r(δ) = −Γ_pl / (Γ − 2iδ)` and the
//! transmission amplitude `t = 1 + r`. On resonance the emitter is a mirror
//! with reflectance `(1 + 1/P)⁻²` and a Lorentzian response of full width `Γ`.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::params::EmitterParams;
use crate::quad;
use crate::scalar::{ComplexAmplitude, Real};
use crate::series::{NormConvention, PulseShape};

/// Scattering probabilities at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint<T> {
    pub delta: T,
    pub r: ComplexAmplitude<T>,
    pub t: ComplexAmplitude<T>,
    pub reflectance: T,
    pub transmittance: T,
    /// `1 − R − T`: probability of scattering out of the guided modes.
    pub loss: T,
}

/// Reflection amplitude at the detuning stored in `params`. `Ω_c` is ignored.
pub fn reflection_coefficient<T: Real>(params: &EmitterParams<T>) -> ComplexAmplitude<T> {
    let two = T::lit(2.0);
    let denom = Complex::new(params.gamma_total(), -two * params.delta());
    -Complex::new(params.gamma_pl(), T::zero()) / denom
}

pub fn scatter_point<T: Real>(params: &EmitterParams<T>) -> ScatterPoint<T> {
    let r = reflection_coefficient(params);
    let t = Complex::new(T::one(), T::zero()) + r;
    let reflectance = r.norm_sqr();
    let transmittance = t.norm_sqr();
    ScatterPoint {
        delta: params.delta(),
        r,
        t,
        reflectance,
        transmittance,
        loss: T::one() - reflectance - transmittance,
    }
}

pub fn scatter_spectrum<T: Real>(
    params: &EmitterParams<T>,
    deltas: &[T],
) -> Result<Vec<ScatterPoint<T>>> {
    if deltas.is_empty() {
        return Err(Error::EmptyInput("detuning list"));
    }
    deltas
        .iter()
        .map(|&d| params.with_delta(d).map(|p| scatter_point(&p)))
        .collect()
}

/// Photon spectral density `|f(δ)|²`, normalized over detuning.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum<T> {
    /// Monochromatic photon.
    Delta { center: T },
    /// Gaussian density with standard deviation `rms`.
    Gaussian { center: T, rms: T },
    /// Uniform density on `[lo, hi]`.
    Flat { lo: T, hi: T },
    /// Sampled amplitude `f(δ)`; the pulse's time axis is read as detuning.
    Sampled(PulseShape<T>),
}

/// Spectrally averaged scattering probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAverage<T> {
    pub reflectance: T,
    pub transmittance: T,
    pub loss: T,
}

/// Absolute tolerance of the adaptive quadrature.
pub const SPECTRAL_QUAD_TOL: f64 = 1e-8;
/// Gaussian spectra are truncated at this many standard deviations.
pub const GAUSSIAN_TRUNCATION: f64 = 8.0;
const SAMPLED_NORM_TOL: f64 = 1e-6;

fn rtk<T: Real>(params: &EmitterParams<T>, delta: T) -> [T; 3] {
    let two = T::lit(2.0);
    let denom = Complex::new(params.gamma_total(), -two * delta);
    let r = -Complex::new(params.gamma_pl(), T::zero()) / denom;
    let t = Complex::new(T::one(), T::zero()) + r;
    let (rr, tt) = (r.norm_sqr(), t.norm_sqr());
    [rr, tt, T::one() - rr - tt]
}

/// Averages `R`, `T`, `κ` over the photon spectrum:
/// `R̄ = ∫|r(δ)|² |f(δ)|² dδ` and likewise for `T̄`, `κ̄`.
pub fn pulse_averaged_rt<T: Real>(
    params: &EmitterParams<T>,
    spectrum: &Spectrum<T>,
) -> Result<SpectralAverage<T>> {
    let [r, t, k] = match spectrum {
        Spectrum::Delta { center } => rtk(params, *center),
        Spectrum::Gaussian { center, rms } => {
            if !(*rms > T::zero()) || !rms.is_finite() {
                return Err(invalid("rms", "spectral width must be positive"));
            }
            let (c, s) = (*center, *rms);
            let norm = (T::lit(2.0) * T::PI()).sqrt() * s;
            let half = T::lit(GAUSSIAN_TRUNCATION) * s;
            let res = quad::integrate(
                |d| {
                    let x = (d - c) / s;
                    let w = (-(x * x) / T::lit(2.0)).exp() / norm;
                    rtk(params, d).map(|v| v * w)
                },
                c - half,
                c + half,
                T::lit(SPECTRAL_QUAD_TOL),
                4000,
            );
            res.value
        }
        Spectrum::Flat { lo, hi } => {
            if !(*hi > *lo) {
                return Err(invalid("hi", "flat spectrum needs hi > lo"));
            }
            let w = (*hi - *lo).recip();
            // Split at resonance so the Lorentzian peak sits on a panel edge.
            if *lo < T::zero() && *hi > T::zero() {
                let f = |d| rtk(params, d).map(|v| v * w);
                let a = quad::integrate(f, *lo, T::zero(), T::lit(SPECTRAL_QUAD_TOL / 2.0), 4000);
                let b = quad::integrate(f, T::zero(), *hi, T::lit(SPECTRAL_QUAD_TOL / 2.0), 4000);
                [0, 1, 2].map(|i| a.value[i] + b.value[i])
            } else {
                quad::integrate(
                    |d| rtk(params, d).map(|v| v * w),
                    *lo,
                    *hi,
                    T::lit(SPECTRAL_QUAD_TOL),
                    4000,
                )
                .value
            }
        }
        Spectrum::Sampled(pulse) => {
            let n = pulse.norm_sqr();
            if pulse.norm_convention != NormConvention::UnitNorm
                && (n - T::one()).abs().as_f64() > SAMPLED_NORM_TOL
            {
                return Err(Error::NotNormalized {
                    what: "spectrum",
                    norm: n.as_f64(),
                });
            }
            let grid = pulse.grid();
            let mut acc = [T::zero(); 3];
            for (d, f) in grid.times().zip(pulse.values()) {
                let w = f.norm_sqr() * grid.dt;
                let v = rtk(params, d);
                for i in 0..3 {
                    acc[i] = acc[i] + v[i] * w;
                }
            }
            acc
        }
    };
    Ok(SpectralAverage {
        reflectance: r,
        transmittance: t,
        loss: k,
    })
}
