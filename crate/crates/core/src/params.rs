// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Validated emitter rates.
//!
//! Rates are stored in whatever absolute unit the caller chose. Every
//! observable depends only on `P`, `Ω_c/Γ` and `δ/Γ`, so
//! [`EmitterParams::normalized`] rescales to `Γ = 1` where a kernel needs a
//! fixed time unit.

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Two-level emitter coupled to a one-dimensional guided continuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterParams<T> {
    gamma_pl: T,
    gamma_prime: T,
    omega_c: T,
    delta: T,
}

fn check_rate<T: Real>(name: &'static str, value: T, allow_zero: bool) -> Result<()> {
    if !value.is_finite() {
        return Err(invalid(name, format!("must be finite, got {value}")));
    }
    if value < T::zero() || (!allow_zero && value == T::zero()) {
        let bound = if allow_zero {
            "non-negative"
        } else {
            "positive"
        };
        return Err(invalid(name, format!("must be {bound}, got {value}")));
    }
    Ok(())
}

/// Builds a parameter set from absolute rates. `gamma_prime` must be positive.
pub fn make_params<T: Real>(
    gamma_pl: T,
    gamma_prime: T,
    omega_c: T,
    delta: T,
) -> Result<EmitterParams<T>> {
    EmitterParams::new(gamma_pl, gamma_prime, omega_c, delta, false)
}

/// Builds a parameter set from the Purcell factor and total linewidth.
pub fn params_from_purcell<T: Real>(
    purcell: T,
    gamma_total: T,
    omega_c: T,
    delta: T,
) -> Result<EmitterParams<T>> {
    check_rate("purcell", purcell, true)?;
    check_rate("gamma_total", gamma_total, false)?;
    let one_plus = T::one() + purcell;
    let gamma_pl = gamma_total * purcell / one_plus;
    let gamma_prime = gamma_total / one_plus;
    EmitterParams::new(gamma_pl, gamma_prime, omega_c, delta, false)
}

impl<T: Real> EmitterParams<T> {
    /// Validating constructor. `allow_infinite_purcell` admits
    /// `gamma_prime = 0` (lossless emitter, `P = ∞`).
    pub fn new(
        gamma_pl: T,
        gamma_prime: T,
        omega_c: T,
        delta: T,
        allow_infinite_purcell: bool,
    ) -> Result<Self> {
        check_rate("gamma_pl", gamma_pl, true)?;
        check_rate("gamma_prime", gamma_prime, allow_infinite_purcell)?;
        check_rate("omega_c", omega_c, true)?;
        if !delta.is_finite() {
            return Err(invalid("delta", format!("must be finite, got {delta}")));
        }
        if gamma_pl + gamma_prime <= T::zero() {
            return Err(invalid(
                "gamma_total",
                "gamma_pl + gamma_prime must be positive",
            ));
        }
        Ok(Self {
            gamma_pl,
            gamma_prime,
            omega_c,
            delta,
        })
    }

    /// Lossless emitter (`Γ′ = 0`, infinite Purcell factor).
    pub fn lossless(gamma_pl: T, omega_c: T, delta: T) -> Result<Self> {
        Self::new(gamma_pl, T::zero(), omega_c, delta, true)
    }

    pub fn gamma_pl(&self) -> T {
        self.gamma_pl
    }

    pub fn gamma_prime(&self) -> T {
        self.gamma_prime
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Total spontaneous emission rate `Γ = Γ_pl + Γ′`.
    pub fn gamma_total(&self) -> T {
        self.gamma_pl + self.gamma_prime
    }

    /// Purcell factor `Γ_pl/Γ′`; `+∞` for a lossless emitter.
    pub fn purcell(&self) -> T {
        if self.gamma_prime == T::zero() {
            T::infinity()
        } else {
            self.gamma_pl / self.gamma_prime
        }
    }

    /// Fraction of spontaneous emission going into the guided modes, `Γ_pl/Γ`.
    pub fn guided_fraction(&self) -> T {
        self.gamma_pl / self.gamma_total()
    }

    pub fn with_delta(self, delta: T) -> Result<Self> {
        Self::new(
            self.gamma_pl,
            self.gamma_prime,
            self.omega_c,
            delta,
            self.gamma_prime == T::zero(),
        )
    }

    pub fn with_omega_c(self, omega_c: T) -> Result<Self> {
        Self::new(
            self.gamma_pl,
            self.gamma_prime,
            omega_c,
            self.delta,
            self.gamma_prime == T::zero(),
        )
    }

    /// Same physics in units where `Γ = 1`.
    pub fn normalized(&self) -> Self {
        let g = self.gamma_total();
        Self {
            gamma_pl: self.gamma_pl / g,
            gamma_prime: self.gamma_prime / g,
            omega_c: self.omega_c / g,
            delta: self.delta / g,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn derived_rates() {
        let p = make_params(20.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.purcell(), 20.0);
        assert_eq!(p.gamma_total(), 21.0);

        let p = make_params(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.purcell(), 0.0);
        assert_eq!(p.gamma_total(), 1.0);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(make_params(-1.0, 1.0, 0.0, 0.0).is_err());
        assert!(make_params(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(make_params(1.0, 1.0, -0.5, 0.0).is_err());
        assert!(make_params(1.0, 1.0, 0.0, f64::NAN).is_err());
        assert!(params_from_purcell(f64::INFINITY, 1.0, 0.0, 0.0).is_err());
        assert!(params_from_purcell(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(params_from_purcell(-2.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn infinite_purcell_needs_flag() {
        let p = EmitterParams::<f64>::new(1.0, 0.0, 0.0, 0.0, true).unwrap();
        assert!(p.purcell().is_infinite());
        assert!(EmitterParams::<f64>::new(0.0, 0.0, 0.0, 0.0, true).is_err());
    }

    #[test]
    fn purcell_inversion_examples() {
        let p = params_from_purcell(20.0, 1.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(p.gamma_pl(), 20.0 / 21.0, epsilon = 1e-15);
        assert_relative_eq!(p.gamma_prime(), 1.0 / 21.0, epsilon = 1e-15);

        let p = params_from_purcell(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!((p.gamma_pl(), p.gamma_prime()), (0.0, 1.0));

        let p = params_from_purcell(1.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!((p.gamma_pl(), p.gamma_prime()), (1.0, 1.0));
    }

    #[test]
    fn works_in_single_precision() {
        let p = params_from_purcell(20.0f32, 1.0, 0.5, 0.0).unwrap();
        assert!((p.purcell() - 20.0).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn purcell_round_trip(purcell in 0.0f64..1e3, gamma in 1e-3f64..1e3) {
            let p = params_from_purcell(purcell, gamma, 0.0, 0.0).unwrap();
            prop_assert!((p.purcell() - purcell).abs() <= 1e-12 * purcell.max(1.0));
            prop_assert!((p.gamma_total() - gamma).abs() <= 1e-12 * gamma.max(1.0));
        }
    }
}
