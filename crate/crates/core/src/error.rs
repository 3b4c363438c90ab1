// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by parameter validation and by numerical postconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{what} is not unit-normalized (norm = {norm:e})")]
    NotNormalized { what: &'static str, norm: f64 },

    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),

    #[error("generator has no unique stationary state")]
    SingularGenerator,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("sampling grids do not match: {0}")]
    GridMismatch(String),

    #[error("mode window spans {span:e} but at least {required:e} is required")]
    WindowTooNarrow { span: f64, required: f64 },

    #[error("emitter resonance lies outside the mode window [{lo:e}, {hi:e}]")]
    ResonanceOutsideWindow { lo: f64, hi: f64 },

    #[error("grid calibration failed: measured decay rate {measured:e}, expected {expected:e}")]
    CalibrationFailed { measured: f64, expected: f64 },

    #[error("pulse has not cleared the emitter: |c_e|^2 = {residual:e} at t_final")]
    PulseNotCleared { residual: f64 },

    #[error("spectral weight outside the mode window: {leak:e}")]
    SpectralLeakage { leak: f64 },

    #[error("target pulse needs efficiency {required:e} but at most {available:e} is reachable")]
    TargetInfeasible { required: f64, available: f64 },

    #[error("convergence is not monotone at n_modes = {n_modes}")]
    NonMonotoneConvergence { n_modes: usize },

    #[error("numerical postcondition `{invariant}` violated: {detail}")]
    Postcondition {
        invariant: &'static str,
        detail: String,
    },
}

impl Error {
    /// True for failures of a numerical postcondition rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularGenerator
                | Error::CalibrationFailed { .. }
                | Error::PulseNotCleared { .. }
                | Error::SpectralLeakage { .. }
                | Error::NonMonotoneConvergence { .. }
                | Error::Postcondition { .. }
        )
    }

    /// Short machine-readable name of the violated check.
    pub fn invariant_name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "parameter_domain",
            Error::EmptyInput(_) => "non_empty_input",
            Error::NotNormalized { .. } => "unit_norm",
            Error::ZeroDenominator(_) => "nonzero_denominator",
            Error::SingularGenerator => "unique_steady_state",
            Error::InvalidDensityMatrix(_) => "valid_density_matrix",
            Error::GridMismatch(_) => "matching_grids",
            Error::WindowTooNarrow { .. } => "window_width",
            Error::ResonanceOutsideWindow { .. } => "resonance_in_window",
            Error::CalibrationFailed { .. } => "golden_rule_calibration",
            Error::PulseNotCleared { .. } => "pulse_cleared",
            Error::SpectralLeakage { .. } => "spectral_leakage",
            Error::TargetInfeasible { .. } => "target_efficiency",
            Error::NonMonotoneConvergence { .. } => "monotone_convergence",
            Error::Postcondition { invariant, .. } => invariant,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
