// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Globally adaptive Gauss–Kronrod (7/15) quadrature for small vector-valued
//! integrands.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T, const K: usize> {
    pub value: [T; K],
    pub abs_error: T,
    pub converged: bool,
}

struct Panel<T, const K: usize> {
    a: T,
    b: T,
    value: [T; K],
    error: T,
}

fn gk15<T: Real, const K: usize>(f: &impl Fn(T) -> [T; K], a: T, b: T) -> Panel<T, K> {
    let two = T::lit(2.0);
    let centre = (a + b) / two;
    let half = (b - a) / two;
    let mut kron = [T::zero(); K];
    let mut gauss = [T::zero(); K];
    let fc = f(centre);
    for k in 0..K {
        kron[k] = fc[k] * T::lit(WGK[7]);
        gauss[k] = fc[k] * T::lit(WG[3]);
    }
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        for k in 0..K {
            let s = f1[k] + f2[k];
            kron[k] = kron[k] + s * T::lit(WGK[j]);
            if j % 2 == 1 {
                gauss[k] = gauss[k] + s * T::lit(WG[j / 2]);
            }
        }
    }
    let mut error = T::zero();
    for k in 0..K {
        kron[k] = kron[k] * half;
        gauss[k] = gauss[k] * half;
        error = error.max((kron[k] - gauss[k]).abs());
    }
    Panel {
        a,
        b,
        value: kron,
        error,
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `abs_tol` or `max_panels` subdivisions have been used.
pub fn integrate<T: Real, const K: usize>(
    f: impl Fn(T) -> [T; K],
    a: T,
    b: T,
    abs_tol: T,
    max_panels: usize,
) -> QuadResult<T, K> {
    let mut panels = vec![gk15(&f, a, b)];
    loop {
        let total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        if total_err <= abs_tol || panels.len() >= max_panels {
            let mut value = [T::zero(); K];
            for p in &panels {
                for k in 0..K {
                    value[k] = value[k] + p.value[k];
                }
            }
            return QuadResult {
                value,
                abs_error: total_err,
                converged: total_err <= abs_tol,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1.error
                    .partial_cmp(&y.1.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) / T::lit(2.0);
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x: f64| [x.powi(5) - 3.0 * x * x, 1.0],
            -1.0,
            2.0,
            1e-12,
            100,
        );
        assert!((r.value[0] - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
        assert!((r.value[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn narrow_lorentzian_on_wide_interval() {
        let w = 1e-2;
        let r = integrate(
            |x: f64| [w / std::f64::consts::PI / (x * x + w * w)],
            -1e3,
            1e3,
            1e-10,
            2000,
        );
        let exact = 2.0 / std::f64::consts::PI * (1e3 / w).atan();
        assert!(r.converged);
        assert!((r.value[0] - exact).abs() < 1e-9);
    }
}
