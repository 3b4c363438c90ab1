// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of a single quantum emitter coupled to a one-dimensional
//! guided continuum (for example the surface plasmons of a metal nanowire).
//!
//! * [`scatter`]: linear single-photon reflection and transmission.
//! * [`bloch`]: driven-emitter master equation, saturation of the mirror.
//! * [`correlations`]: `g²(t)` of transmitted and reflected light.
//! * [`oracle`]: brute-force discrete-mode wavepacket simulation.
//! * [`storage`]: three-level photon storage and the single-photon transistor.
//!
//! Kernels are generic over the real scalar ([`Real`], implemented for `f32`
//! and `f64`). Aliases for the `f64` instantiations are exported at the root.

pub mod bloch;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod scalar;
pub mod scatter;
pub mod series;
pub mod storage;

pub use bloch::{
    field_observables, liouvillian, propagate, saturation_closed_form, steady_state,
    DensityMatrix2, FieldObservables, Liouvillian, Propagator,
};
pub use correlations::{
    antibunching_time, g2, g2_from_jump, g2_weakfield_analytic, jump_state, Branch, G2Curve,
    JumpState,
};
pub use error::{Error, Result};
pub use oracle::{
    band_limited_decay_rate, build_grid, convergence_report, fixed_spacing_grids,
    scatter_wavepacket, ConvergenceRow, InputPulse, ModeGrid, WavepacketOutcome,
};
pub use params::{make_params, params_from_purcell, EmitterParams};
pub use scalar::{ComplexAmplitude, Real};
pub use scatter::{
    pulse_averaged_rt, reflection_coefficient, scatter_point, scatter_spectrum, ScatterPoint,
    SpectralAverage, Spectrum,
};
pub use series::{NormConvention, PulseShape, TimeGrid, TimeSeries};
pub use storage::{
    conditional_mirror, control_for_target_pulse, generate_photon, run_transistor, store_photon,
    transistor_gain, EmitterState, GainEstimate, GenerationResult, StorageResult, ThreeLevelParams,
    TransistorOutcome,
};

pub type EmitterParamsF64 = EmitterParams<f64>;
pub type EmitterParamsF32 = EmitterParams<f32>;
pub type DensityMatrixF64 = DensityMatrix2<f64>;
pub type ScatterPointF64 = ScatterPoint<f64>;
pub type PulseShapeF64 = PulseShape<f64>;
pub type G2CurveF64 = G2Curve<f64>;
pub type ThreeLevelParamsF64 = ThreeLevelParams<f64>;
pub type ModeGridF64 = ModeGrid<f64>;
pub type Complex64 = num_complex::Complex<f64>;
