// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Uniformly sampled signals and pulse envelopes.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Uniform sampling grid `t0, t0 + dt, ..., t0 + (len - 1) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t0: T,
    pub dt: T,
    pub len: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, dt: T, len: usize) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(invalid(
                "dt",
                format!("must be positive and finite, got {dt}"),
            ));
        }
        if !t0.is_finite() {
            return Err(invalid("t0", "must be finite"));
        }
        if len == 0 {
            return Err(Error::EmptyInput("time grid"));
        }
        Ok(Self { t0, dt, len })
    }

    /// Grid covering `[t0, t_end]` with step `dt` (last point may fall short of `t_end` by < dt).
    pub fn spanning(t0: T, t_end: T, dt: T) -> Result<Self> {
        if t_end < t0 {
            return Err(invalid("t_end", "must not precede t0"));
        }
        let steps = ((t_end - t0) / dt + T::lit(1e-9)).floor();
        let len = steps
            .to_usize()
            .ok_or_else(|| invalid("dt", "too many samples"))?
            + 1;
        Self::new(t0, dt, len)
    }

    #[inline]
    pub fn time(&self, i: usize) -> T {
        self.t0 + self.dt * T::from_count(i)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(move |i| self.time(i))
    }

    pub fn t_end(&self) -> T {
        self.time(self.len - 1)
    }
}

/// Uniformly sampled signal. `V` is `T` for real data and `Complex<T>` for
/// complex envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T, V = T> {
    pub t0: T,
    pub dt: T,
    pub values: Vec<V>,
}

impl<T: Real, V> TimeSeries<T, V> {
    pub fn new(t0: T, dt: T, values: Vec<V>) -> Result<Self> {
        TimeGrid::new(t0, dt, values.len())?;
        Ok(Self { t0, dt, values })
    }

    pub fn from_grid(grid: TimeGrid<T>, values: Vec<V>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len
            )));
        }
        Self::new(grid.t0, grid.dt, values)
    }

    pub fn grid(&self) -> TimeGrid<T> {
        TimeGrid {
            t0: self.t0,
            dt: self.dt,
            len: self.values.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.grid().time(i)
    }

    /// True when both series share origin, step and length (to rounding).
    pub fn same_grid<W>(&self, other: &TimeSeries<T, W>) -> bool {
        let tol = T::lit(1e-9) * self.dt;
        self.values.len() == other.values.len()
            && (self.t0 - other.t0).abs() <= tol
            && (self.dt - other.dt).abs() <= tol
    }
}

/// How a [`PulseShape`] is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    /// `Σ|v_i|² dt = 1`: a single-photon wavepacket.
    UnitNorm,
    /// `|v|²` is a photon flux (or `v` a Rabi frequency); no norm constraint.
    PhotonFlux,
}

/// Complex envelope of an input photon or a control field.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseShape<T> {
    pub samples: TimeSeries<T, Complex<T>>,
    pub norm_convention: NormConvention,
}

const UNIT_NORM_TOL: f64 = 1e-9;

impl<T: Real> PulseShape<T> {
    /// Wraps samples, checking the unit-norm constraint when requested.
    pub fn new(
        samples: TimeSeries<T, Complex<T>>,
        norm_convention: NormConvention,
    ) -> Result<Self> {
        let pulse = Self {
            samples,
            norm_convention,
        };
        if norm_convention == NormConvention::UnitNorm {
            let n = pulse.norm_sqr();
            if (n - T::one()).abs().as_f64() > UNIT_NORM_TOL {
                return Err(Error::NotNormalized {
                    what: "pulse",
                    norm: n.as_f64(),
                });
            }
        }
        Ok(pulse)
    }

    /// Samples `f` on `grid` and rescales to unit norm.
    pub fn normalized_from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let values: Vec<_> = grid.times().map(f).collect();
        let raw = TimeSeries::from_grid(grid, values)?;
        Self::new(raw, NormConvention::PhotonFlux)?.into_unit_norm()
    }

    /// Samples `f` on `grid` without normalization (controls, fluxes).
    pub fn flux_from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let values: Vec<_> = grid.times().map(f).collect();
        Self::new(
            TimeSeries::from_grid(grid, values)?,
            NormConvention::PhotonFlux,
        )
    }

    /// Real Gaussian wavepacket of unit norm. `rms` is the standard deviation
    /// of `|v(t)|²`.
    pub fn gaussian(grid: TimeGrid<T>, center: T, rms: T) -> Result<Self> {
        if !(rms > T::zero()) {
            return Err(invalid("rms", "must be positive"));
        }
        let four = T::lit(4.0);
        Self::normalized_from_fn(grid, |t| {
            let x = t - center;
            Complex::new((-(x * x) / (four * rms * rms)).exp(), T::zero())
        })
    }

    /// Zero envelope (vacuum input).
    pub fn zeros(grid: TimeGrid<T>) -> Self {
        Self {
            samples: TimeSeries {
                t0: grid.t0,
                dt: grid.dt,
                values: vec![Complex::new(T::zero(), T::zero()); grid.len],
            },
            norm_convention: NormConvention::PhotonFlux,
        }
    }

    /// `Σ|v_i|² dt`.
    pub fn norm_sqr(&self) -> T {
        self.samples
            .values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            * self.samples.dt
    }

    pub fn into_unit_norm(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::NotNormalized {
                what: "pulse",
                norm: n.as_f64(),
            });
        }
        let s = n.sqrt().recip();
        for v in &mut self.samples.values {
            *v = *v * s;
        }
        self.norm_convention = NormConvention::UnitNorm;
        Ok(self)
    }

    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        for v in &mut out.samples.values {
            *v = *v * factor;
        }
        out.norm_convention = NormConvention::PhotonFlux;
        out
    }

    pub fn grid(&self) -> TimeGrid<T> {
        self.samples.grid()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.samples.values
    }

    /// Linear interpolation; zero outside the sampled interval.
    pub fn at(&self, t: T) -> Complex<T> {
        let s = &self.samples;
        let x = (t - s.t0) / s.dt;
        let zero = Complex::new(T::zero(), T::zero());
        if x < T::zero() {
            return zero;
        }
        let last = T::from_count(s.values.len() - 1);
        if x > last {
            return zero;
        }
        let i = x.floor().to_usize().unwrap_or(0).min(s.values.len() - 1);
        if i + 1 >= s.values.len() {
            return s.values[i];
        }
        let w = x - T::from_count(i);
        s.values[i] * (T::one() - w) + s.values[i + 1] * w
    }

    /// Envelope played backwards and conjugated: `v(t0 + t_end - t)*`.
    pub fn time_reversed_conj(&self) -> Self {
        let mut out = self.clone();
        out.samples.values = self.samples.values.iter().rev().map(|v| v.conj()).collect();
        out
    }

    /// `sqrt(Σ|a_i − b_i|² dt)` between two envelopes on the same grid.
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        if !self.samples.same_grid(&other.samples) {
            return Err(Error::GridMismatch("l2 distance between pulses".into()));
        }
        let s = self
            .values()
            .iter()
            .zip(other.values())
            .fold(T::zero(), |acc, (a, b)| acc + (*a - *b).norm_sqr());
        Ok((s * self.samples.dt).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 0.0, 3).is_err());
        assert!(TimeGrid::new(0.0, 0.1, 0).is_err());
        let g = TimeGrid::spanning(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len, 11);
        assert!((g.t_end() - 1.0_f64).abs() < 1e-12);
    }

    #[test]
    fn series_rejects_empty() {
        assert!(TimeSeries::<f64>::new(0.0, 0.1, vec![]).is_err());
    }

    #[test]
    fn unit_norm_is_enforced() {
        let grid = TimeGrid::new(0.0, 0.5, 4).unwrap();
        let raw = TimeSeries::from_grid(grid, vec![Complex::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(
            PulseShape::new(raw.clone(), NormConvention::UnitNorm),
            Err(Error::NotNormalized { .. })
        ));
        let p = PulseShape::new(raw, NormConvention::PhotonFlux)
            .unwrap()
            .into_unit_norm()
            .unwrap();
        assert!((p.norm_sqr() - 1.0_f64).abs() < 1e-12);
    }

    #[test]
    fn gaussian_is_unit_norm() {
        let grid = TimeGrid::spanning(0.0, 100.0, 0.05).unwrap();
        let p = PulseShape::gaussian(grid, 50.0, 5.0).unwrap();
        assert!((p.norm_sqr() - 1.0_f64).abs() < 1e-12);
        // second moment of |v|^2 is rms^2
        let var: f64 = grid
            .times()
            .zip(p.values())
            .map(|(t, v)| (t - 50.0_f64).powi(2) * v.norm_sqr() * grid.dt)
            .sum();
        assert!((var - 25.0).abs() < 1e-8);
    }

    #[test]
    fn interpolation_and_reversal() {
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let p = PulseShape::flux_from_fn(grid, |t| Complex::new(t, 1.0)).unwrap();
        assert_eq!(p.at(0.5), Complex::new(0.5, 1.0));
        assert_eq!(p.at(-0.1), Complex::new(0.0, 0.0));
        let r = p.time_reversed_conj();
        assert_eq!(r.values()[0], Complex::new(2.0, -1.0));
        assert_eq!(p.l2_distance(&p).unwrap(), 0.0);
    }
}
