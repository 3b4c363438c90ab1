// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherently driven two-level emitter after displacing the input coherent
//! state to a classical drive.
//!
//! The emitter obeys `ρ̇ = −i[H, ρ] + Γ D[σ_ge]ρ` in the frame rotating at
//! the drive frequency, with `H = −δ σ_ee − Ω_c (σ_eg + σ_ge)`. This sign
//! gives `⟨σ_ge⟩_ss = 2iΩ_c/Γ` at weak resonant drive, and the guided output
//! fields (in units where the drive amplitude is `Ω_c`) are
//!
//! ```text
//! a_T = Ω_c + i (Γ_pl/2) σ_ge      transmitted
//! a_R =       i (Γ_pl/2) σ_ge      reflected
//! ```
//!
//! Density matrices use the basis `{|g⟩, |e⟩}` and column-stacked
//! vectorization (`vec ρ = [ρ_gg, ρ_eg, ρ_ge, ρ_ee]`).

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::linalg::{Mat2, Mat4};
use crate::params::EmitterParams;
use crate::scalar::{cplx, imag_unit, real, ComplexAmplitude, Real};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// `|g⟩⟨e|`
pub fn sigma_ge<T: Real>() -> Mat2<T> {
    let mut m = Mat2::zero();
    m.0[0][1] = real(T::one());
    m
}

/// `|e⟩⟨g|`
pub fn sigma_eg<T: Real>() -> Mat2<T> {
    sigma_ge().dagger()
}

/// `|e⟩⟨e|`
pub fn sigma_ee<T: Real>() -> Mat2<T> {
    let mut m = Mat2::zero();
    m.0[1][1] = real(T::one());
    m
}

/// Two-level emitter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2<T>(Mat2<T>);

impl<T: Real> DensityMatrix2<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Mat2<T>) -> Result<Self> {
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(m: Mat2<T>) -> Self {
        Self(m)
    }

    pub fn ground() -> Self {
        let mut m = Mat2::zero();
        m.0[0][0] = real(T::one());
        Self(m)
    }

    pub fn excited() -> Self {
        Self(sigma_ee())
    }

    /// Pure state `α|g⟩ + β|e⟩`, normalized.
    pub fn pure(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(n > T::zero()) {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let v = [alpha / n, beta / n];
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.0
    }

    pub fn rho_gg(&self) -> T {
        self.0 .0[0][0].re
    }

    pub fn rho_ee(&self) -> T {
        self.0 .0[1][1].re
    }

    /// `⟨σ_ge⟩ = ρ_eg`.
    pub fn coherence(&self) -> ComplexAmplitude<T> {
        self.0 .0[1][0]
    }

    /// `Tr(A ρ)`.
    pub fn expect(&self, op: &Mat2<T>) -> Complex<T> {
        (*op * self.0).trace()
    }

    pub fn trace(&self) -> T {
        self.0.trace().re
    }

    pub fn hermiticity_error(&self) -> T {
        self.0.max_abs_diff(&self.0.dagger())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [T; 2] {
        let m = &self.0 .0;
        let a = m[0][0].re;
        let d = m[1][1].re;
        let b = (m[0][1] + m[1][0].conj()) / T::lit(2.0);
        let mean = (a + d) / T::lit(2.0);
        let half_gap = (((a - d) / T::lit(2.0)).powi(2) + b.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .0
             .0
            .iter()
            .flatten()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let h = self.hermiticity_error();
        if h.as_f64() > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {h:e})"
            )));
        }
        let tr = self.0.trace();
        if (tr.re - T::one()).abs().as_f64() > TRACE_TOL || tr.im.abs().as_f64() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} + {}i",
                tr.re, tr.im
            )));
        }
        let lo = self.eigenvalues()[0];
        if lo.as_f64() < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lo:e}"
            )));
        }
        Ok(())
    }
}

/// Generator `L` of the master equation acting on `vec ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Liouvillian<T> {
    pub matrix: Mat4<T>,
}

/// `e^{L t}` for a fixed duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator<T> {
    pub matrix: Mat4<T>,
    pub duration: T,
}

/// Emitter Hamiltonian in the drive frame.
pub fn hamiltonian<T: Real>(params: &EmitterParams<T>) -> Mat2<T> {
    let drive = (sigma_eg() + sigma_ge()).scale(real(-params.omega_c()));
    sigma_ee().scale(real(-params.delta())) + drive
}

/// Superoperator of `ρ ↦ A ρ B`.
fn sandwich<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    Mat2::kron(&b.transpose(), a)
}

pub fn liouvillian<T: Real>(params: &EmitterParams<T>) -> Liouvillian<T> {
    let id = Mat2::identity();
    let h = hamiltonian(params);
    let minus_i = -imag_unit::<T>();
    let coherent = (sandwich(&h, &id) - sandwich(&id, &h)).scale(minus_i);

    let c = sigma_ge::<T>();
    let cdc = c.dagger() * c;
    let half = real(T::lit(0.5));
    let jump = sandwich(&c, &c.dagger());
    let anti = (sandwich(&cdc, &id) + sandwich(&id, &cdc)).scale(half);
    let dissipator = (jump - anti).scale(real(params.gamma_total()));

    Liouvillian {
        matrix: coherent + dissipator,
    }
}

impl<T: Real> Liouvillian<T> {
    pub fn apply(&self, rho: &Mat2<T>) -> Mat2<T> {
        Mat2::unvectorize(&self.matrix.mul_vec(&rho.vectorize()))
    }

    /// Heisenberg-picture generator: `Tr(A · L ρ) = Tr((L† A) · ρ)` for Hermitian `A`.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.dagger(),
        }
    }

    pub fn propagator(&self, duration: T) -> Propagator<T> {
        Propagator {
            matrix: self.matrix.scale(real(duration)).expm(),
            duration,
        }
    }
}

impl<T: Real> Propagator<T> {
    pub fn apply(&self, rho: &DensityMatrix2<T>) -> DensityMatrix2<T> {
        DensityMatrix2::new_unchecked(self.apply_operator(rho.matrix()))
    }

    /// Applies the map to an arbitrary operator (not necessarily a state).
    pub fn apply_operator(&self, op: &Mat2<T>) -> Mat2<T> {
        Mat2::unvectorize(&self.matrix.mul_vec(&op.vectorize()))
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`; positive semidefinite iff the map is CP.
    pub fn choi(&self) -> Mat4<T> {
        let mut choi = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut e = Mat2::zero();
                e.0[i][j] = real(T::one());
                let out = self.apply_operator(&e);
                for k in 0..2 {
                    for l in 0..2 {
                        choi.0[2 * i + k][2 * j + l] = out.0[k][l];
                    }
                }
            }
        }
        choi
    }
}

/// Unique stationary state of the master equation.
pub fn steady_state<T: Real>(params: &EmitterParams<T>) -> Result<DensityMatrix2<T>> {
    let l = liouvillian(params);
    let mut a = l.matrix;
    // Row 0 (d ρ_gg/dt) is minus row 3; swap it for the trace constraint.
    a.0[0] = [
        real(T::one()),
        real(T::zero()),
        real(T::zero()),
        real(T::one()),
    ];
    let mut b = [real(T::zero()); 4];
    b[0] = real(T::one());
    let tol = T::epsilon() * T::lit(64.0);
    let x = a.solve(&b, tol).ok_or(Error::SingularGenerator)?;
    let m = Mat2::unvectorize(&x);
    let herm = (m + m.dagger()).scale(real(T::lit(0.5)));
    Ok(DensityMatrix2::new_unchecked(herm))
}

pub fn propagate<T: Real>(
    params: &EmitterParams<T>,
    rho0: &DensityMatrix2<T>,
    t: T,
) -> Result<DensityMatrix2<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid(
            "t",
            format!("propagation time must be finite and non-negative, got {t}"),
        ));
    }
    let rho = liouvillian(params).propagator(t).apply(rho0);
    let tr_err = (rho.trace() - T::one()).abs();
    if tr_err.as_f64() > 1e-10 {
        return Err(Error::Postcondition {
            invariant: "trace_preservation",
            detail: format!("trace drifted by {tr_err:e} at t = {t}"),
        });
    }
    Ok(rho)
}

/// Transmitted-field operator `a_T = Ω_c + i(Γ_pl/2)σ_ge`.
pub fn transmitted_operator<T: Real>(params: &EmitterParams<T>) -> Mat2<T> {
    let half = T::lit(0.5);
    Mat2::identity().scale(real(params.omega_c()))
        + sigma_ge().scale(cplx(T::zero(), half * params.gamma_pl()))
}

/// Reflected-field operator `a_R = i(Γ_pl/2)σ_ge`.
pub fn reflected_operator<T: Real>(params: &EmitterParams<T>) -> Mat2<T> {
    sigma_ge().scale(cplx(T::zero(), T::lit(0.5) * params.gamma_pl()))
}

/// Guided output fields for a given emitter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldObservables<T> {
    pub mean_transmitted: ComplexAmplitude<T>,
    pub mean_reflected: ComplexAmplitude<T>,
    pub transmittance: T,
    pub reflectance: T,
    pub loss: T,
}

/// Photon fluxes normalized to the input flux `Ω_c²`.
pub fn field_observables<T: Real>(
    params: &EmitterParams<T>,
    rho: &DensityMatrix2<T>,
) -> Result<FieldObservables<T>> {
    let omega = params.omega_c();
    if omega == T::zero() {
        return Err(Error::ZeroDenominator("input flux vanishes at omega_c = 0"));
    }
    let a_t = transmitted_operator(params);
    let a_r = reflected_operator(params);
    let flux = |a: &Mat2<T>| rho.expect(&(a.dagger() * *a)).re;
    let norm = omega * omega;
    let transmittance = flux(&a_t) / norm;
    let reflectance = flux(&a_r) / norm;
    Ok(FieldObservables {
        mean_transmitted: rho.expect(&a_t),
        mean_reflected: rho.expect(&a_r),
        transmittance,
        reflectance,
        loss: T::one() - transmittance - reflectance,
    })
}

/// Closed-form resonant steady-state `(T, R)` as functions of the Purcell
/// factor and `Ω_c/Γ`.
pub fn saturation_closed_form<T: Real>(purcell: T, omega_over_gamma: T) -> (T, T) {
    let one = T::one();
    let eight = T::lit(8.0);
    let s2 = omega_over_gamma * omega_over_gamma;
    let q = (one + purcell) * (one + purcell);
    let t = (one + eight * q * s2) / (q * (one + eight * s2));
    let r = purcell * purcell / q / (one + eight * s2);
    (t, r)
}

impl<T: Real> Default for DensityMatrix2<T> {
    fn default() -> Self {
        Self::ground()
    }
}
