// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Second-order photon correlations of the guided output fields.
//!
//! Two evaluation routes are provided and must agree:
//!
//! * [`g2`] evolves the observable `a†a` backwards with the adjoint generator
//!   and contracts it with `a ρ_ss a†` (regression theorem, Heisenberg form);
//! * [`g2_from_jump`] propagates the post-detection state
//!   `ρ_jump = a ρ_ss a† / ⟨a†a⟩_ss` forward and reads off the flux.

use num_complex::Complex;

use crate::bloch::{
    reflected_operator, sigma_ge, steady_state, transmitted_operator, DensityMatrix2, Liouvillian,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat2;
use crate::params::EmitterParams;
use crate::scalar::{ComplexAmplitude, Real};
use crate::series::{TimeGrid, TimeSeries};

/// Which output port is monitored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Transmitted,
    Reflected,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Transmitted => "transmitted",
            Branch::Reflected => "reflected",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transmitted" | "T" | "t" => Ok(Branch::Transmitted),
            "reflected" | "R" | "r" => Ok(Branch::Reflected),
            other => Err(invalid(
                "branch",
                format!("expected `transmitted` or `reflected`, got `{other}`"),
            )),
        }
    }
}

/// Values in `[−CLIP, 0)` are reported as exactly zero.
pub const NEGATIVE_CLIP: f64 = 1e-10;

/// Normalized intensity correlation on a uniform delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Curve<T> {
    pub values: TimeSeries<T>,
    pub branch: Branch,
}

impl<T: Real> G2Curve<T> {
    pub fn times(&self) -> Vec<T> {
        self.values.grid().times().collect()
    }
}

/// Conditional emitter state right after a photodetection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpState<T> {
    pub rho_jump: DensityMatrix2<T>,
    pub branch: Branch,
    /// `⟨a⟩_jump / ⟨a⟩_ss` for the monitored field operator.
    pub amplitude_ratio: ComplexAmplitude<T>,
    /// `⟨σ_ge⟩_jump / ⟨σ_ge⟩_ss`.
    pub coherence_ratio: ComplexAmplitude<T>,
}

fn field_operator<T: Real>(params: &EmitterParams<T>, branch: Branch) -> Result<Mat2<T>> {
    if params.omega_c() == T::zero() {
        return Err(Error::ZeroDenominator(
            "no photons without drive (omega_c = 0)",
        ));
    }
    match branch {
        Branch::Transmitted => Ok(transmitted_operator(params)),
        Branch::Reflected => {
            if params.gamma_pl() == T::zero() {
                return Err(Error::ZeroDenominator(
                    "reflected flux vanishes at gamma_pl = 0",
                ));
            }
            Ok(reflected_operator(params))
        }
    }
}

struct Stationary<T> {
    generator: Liouvillian<T>,
    rho_ss: DensityMatrix2<T>,
    field: Mat2<T>,
    number: Mat2<T>,
    flux_ss: T,
}

fn stationary<T: Real>(params: &EmitterParams<T>, branch: Branch) -> Result<Stationary<T>> {
    let field = field_operator(params, branch)?;
    let rho_ss = steady_state(params)?;
    let number = field.dagger() * field;
    let flux_ss = rho_ss.expect(&number).re;
    if !(flux_ss > T::zero()) {
        return Err(Error::ZeroDenominator("stationary photon flux is zero"));
    }
    Ok(Stationary {
        generator: crate::bloch::liouvillian(params),
        rho_ss,
        field,
        number,
        flux_ss,
    })
}

fn clip<T: Real>(v: T) -> T {
    if v < T::zero() && v.as_f64() >= -NEGATIVE_CLIP {
        T::zero()
    } else {
        v
    }
}

fn check_delays<T: Real>(grid: &TimeGrid<T>) -> Result<()> {
    if grid.t0 < T::zero() {
        return Err(invalid("times", "delays must be non-negative"));
    }
    Ok(())
}

/// `g²(t) = Tr[a†a · e^{Lt}(a ρ_ss a†)] / ⟨a†a⟩_ss²`, evaluated by evolving
/// `a†a` with the adjoint generator.
pub fn g2<T: Real>(
    params: &EmitterParams<T>,
    branch: Branch,
    grid: TimeGrid<T>,
) -> Result<G2Curve<T>> {
    check_delays(&grid)?;
    let st = stationary(params, branch)?;
    let conditioned = st.field * *st.rho_ss.matrix() * st.field.dagger();
    let heisenberg = st.generator.adjoint();
    let denom = st.flux_ss * st.flux_ss;
    let values = grid
        .times()
        .map(|t| {
            let evolved = heisenberg.propagator(t).apply_operator(&st.number);
            // Tr(O(t)† X) with O(t) Hermitian
            let v = evolved
                .vectorize()
                .iter()
                .zip(conditioned.vectorize().iter())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (o, x)| {
                    acc + o.conj() * *x
                });
            clip(v.re / denom)
        })
        .collect();
    Ok(G2Curve {
        values: TimeSeries::from_grid(grid, values)?,
        branch,
    })
}

/// Conditional state after detecting a photon in `branch`.
pub fn jump_state<T: Real>(params: &EmitterParams<T>, branch: Branch) -> Result<JumpState<T>> {
    let st = stationary(params, branch)?;
    let m = st.field * *st.rho_ss.matrix() * st.field.dagger();
    let m = m.scale(Complex::new(st.flux_ss.recip(), T::zero()));
    let herm = (m + m.dagger()).scale(Complex::new(T::lit(0.5), T::zero()));
    let rho_jump = DensityMatrix2::new_unchecked(herm);

    let a_ss = st.rho_ss.expect(&st.field);
    let a_jump = rho_jump.expect(&st.field);
    let s_ss = st.rho_ss.expect(&sigma_ge());
    let s_jump = rho_jump.expect(&sigma_ge());
    Ok(JumpState {
        rho_jump,
        branch,
        amplitude_ratio: a_jump / a_ss,
        coherence_ratio: s_jump / s_ss,
    })
}

/// `g²(t) = ⟨a†a⟩(t | jump at 0) / ⟨a†a⟩_ss`, propagating the conditional
/// state forward in time.
pub fn g2_from_jump<T: Real>(
    params: &EmitterParams<T>,
    branch: Branch,
    grid: TimeGrid<T>,
) -> Result<G2Curve<T>> {
    check_delays(&grid)?;
    let st = stationary(params, branch)?;
    let jump = jump_state(params, branch)?;
    let values = grid
        .times()
        .map(|t| {
            let rho_t = st.generator.propagator(t).apply(&jump.rho_jump);
            clip(rho_t.expect(&st.number).re / st.flux_ss)
        })
        .collect();
    Ok(G2Curve {
        values: TimeSeries::from_grid(grid, values)?,
        branch,
    })
}

/// Weak-drive transmitted correlation `e^{−Γt}(P² − e^{Γt/2})²` with `Γ = 1`.
pub fn g2_weakfield_analytic<T: Real>(purcell: T, t: T) -> T {
    let half = T::lit(0.5);
    (-t).exp() * (purcell * purcell - (half * t).exp()).powi(2)
}

/// Delay `4 ln P` (units `1/Γ`) at which the weak-drive transmitted `g²`
/// vanishes; `None` when `P < 1`.
pub fn antibunching_time<T: Real>(purcell: T) -> Option<T> {
    if purcell >= T::one() {
        Some(T::lit(4.0) * purcell.ln())
    } else {
        None
    }
}
