// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-size dense complex matrices: just enough linear algebra for 2×2
//! operators and their 4×4 superoperators.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat<T, const N: usize>(pub [[Complex<T>; N]; N]);

pub type Mat2<T> = Mat<T, 2>;
pub type Mat4<T> = Mat<T, 4>;

impl<T: Real, const N: usize> Mat<T, N> {
    pub fn zero() -> Self {
        Mat([[Complex::new(T::zero(), T::zero()); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = *z * s);
        m
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.0[i][i]
        })
    }

    pub fn mul_vec(&self, v: &[Complex<T>; N]) -> [Complex<T>; N] {
        let mut out = [Complex::new(T::zero(), T::zero()); N];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                    acc + *a * *b
                });
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..N)
            .map(|j| (0..N).fold(T::zero(), |acc, i| acc + self.0[i][j].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Matrix exponential by scaling and squaring with a truncated Taylor
    /// series. The scaled matrix has 1-norm at most 1/2, where 18 terms leave
    /// a remainder below 1e-22.
    pub fn expm(&self) -> Self {
        let norm = self.norm1();
        let half = T::lit(0.5);
        let mut squarings = 0u32;
        if norm > half {
            let s = (norm / half).log2().ceil();
            squarings = s.to_u32().unwrap_or(0);
        }
        let scale = T::lit(2.0).powi(-(squarings as i32));
        let a = self.scale(Complex::new(scale, T::zero()));

        // Horner: I + A(I + A/2(I + A/3(...)))
        const TERMS: usize = 18;
        let id = Self::identity();
        let mut acc = id;
        for k in (1..=TERMS).rev() {
            let inv_k = Complex::new(T::one() / T::from_count(k), T::zero());
            acc = id + (a * acc).scale(inv_k);
        }
        for _ in 0..squarings {
            acc = acc * acc;
        }
        acc
    }

    /// Solves `self · x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` when a pivot falls below `tol` times the largest entry.
    pub fn solve(&self, b: &[Complex<T>; N], tol: T) -> Option<[Complex<T>; N]> {
        let mut a = self.0;
        let mut x = *b;
        let scale = self
            .0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(T::zero(), T::max);
        if scale == T::zero() {
            return None;
        }
        for col in 0..N {
            let pivot = (col..N).max_by(|&i, &j| {
                a[i][col]
                    .norm()
                    .partial_cmp(&a[j][col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[pivot][col].norm() <= tol * scale {
                return None;
            }
            a.swap(col, pivot);
            x.swap(col, pivot);
            for row in col + 1..N {
                let f = a[row][col] / a[col][col];
                for k in col..N {
                    let sub = f * a[col][k];
                    a[row][k] = a[row][k] - sub;
                }
                x[row] = x[row] - f * x[col];
            }
        }
        for row in (0..N).rev() {
            let mut s = x[row];
            for k in row + 1..N {
                s = s - a[row][k] * x[k];
            }
            x[row] = s / a[row][row];
        }
        Some(x)
    }
}

impl<T: Real> Mat2<T> {
    /// Kronecker product `a ⊗ b`, with index `(i_a * 2 + i_b)`.
    pub fn kron(a: &Self, b: &Self) -> Mat4<T> {
        let mut m = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        m
    }

    /// Column-stacked vectorization: index `i + 2 j` holds `m[i][j]`.
    pub fn vectorize(&self) -> [Complex<T>; 4] {
        [self.0[0][0], self.0[1][0], self.0[0][1], self.0[1][1]]
    }

    pub fn unvectorize(v: &[Complex<T>; 4]) -> Self {
        Mat([[v[0], v[2]], [v[1], v[3]]])
    }
}

impl<T: Real, const N: usize> Add for Mat<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a = *a + *b);
        self
    }
}

impl<T: Real, const N: usize> Sub for Mat<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a = *a - *b);
        self
    }
}

impl<T: Real, const N: usize> Mul for Mat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    m.0[i][j] = m.0[i][j] + a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn expm_of_diagonal() {
        let mut a = Mat4::<f64>::zero();
        a.0[0][0] = c(-1.0, 0.0);
        a.0[1][1] = c(0.0, 3.0);
        a.0[2][2] = c(-20.0, 5.0);
        let e = a.expm();
        assert!((e.0[0][0] - c((-1.0f64).exp(), 0.0)).norm() < 1e-14);
        assert!((e.0[1][1] - c(0.0, 3.0).exp()).norm() < 1e-13);
        assert!((e.0[2][2] - c(-20.0, 5.0).exp()).norm() < 1e-15);
        assert!(e.0[3][3] == c(1.0, 0.0));
    }

    #[test]
    fn expm_rotation_generator() {
        // exp([[0, -θ], [θ, 0]]) is a rotation by θ
        let theta = 7.3_f64;
        let a = Mat::<f64, 2>([[c(0.0, 0.0), c(-theta, 0.0)], [c(theta, 0.0), c(0.0, 0.0)]]);
        let e = a.expm();
        assert!((e.0[0][0].re - theta.cos()).abs() < 1e-13);
        assert!((e.0[1][0].re - theta.sin()).abs() < 1e-13);
    }

    #[test]
    fn expm_nilpotent_jordan_block() {
        let a = Mat::<f64, 2>([[c(2.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(2.0, 0.0)]]);
        let e = a.expm();
        let e2 = 2.0f64.exp();
        assert!((e.0[0][0].re - e2).abs() < 1e-12);
        assert!((e.0[0][1].re - e2).abs() < 1e-12);
        assert!(e.0[1][0].norm() < 1e-15);
    }

    #[test]
    fn solve_round_trip() {
        let a = Mat::<f64, 2>([[c(0.0, 0.0), c(2.0, 1.0)], [c(1.0, -1.0), c(3.0, 0.0)]]);
        let b = [c(1.0, 2.0), c(-1.0, 0.5)];
        let x = a.solve(&b, 1e-14).unwrap();
        let r = a.mul_vec(&x);
        assert!((r[0] - b[0]).norm() < 1e-14 && (r[1] - b[1]).norm() < 1e-14);
        assert!(Mat2::<f64>::zero().solve(&b, 1e-14).is_none());
    }

    #[test]
    fn kron_vectorization_identity() {
        // vec(A X B) = (Bᵀ ⊗ A) vec(X)
        let a = Mat::<f64, 2>([[c(1.0, 2.0), c(0.5, 0.0)], [c(-1.0, 0.0), c(0.0, 1.0)]]);
        let b = Mat::<f64, 2>([[c(0.0, 1.0), c(2.0, 0.0)], [c(3.0, -1.0), c(1.0, 1.0)]]);
        let x = Mat::<f64, 2>([[c(0.3, 0.1), c(-0.2, 0.0)], [c(0.7, 0.7), c(1.0, -2.0)]]);
        let lhs = (a * x * b).vectorize();
        let rhs = Mat2::kron(&b.transpose(), &a).mul_vec(&x.vectorize());
        for k in 0..4 {
            assert!((lhs[k] - rhs[k]).norm() < 1e-14);
        }
    }
}
