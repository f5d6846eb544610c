//! Forward-mode first derivatives.
//!
//! The weighted symmetric functions are polynomial in the weight scalar and
//! the power sums of the eigenvalues, so carrying a tangent alongside every
//! value gives exact directional derivatives of the curvature invariants
//! without any finite differencing.

use nalgebra::DMatrix;
use std::ops::{Add, Mul, Neg, Sub};

/// Ring operations needed by the symmetric-function recursions.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(x: f64) -> Self;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn constant(x: f64) -> Self {
        x
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// A value together with its derivative along one fixed direction.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub fn new(re: f64, eps: f64) -> Self {
        Self { re, eps }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Scalar for Dual {
    #[inline]
    fn constant(x: f64) -> Self {
        Dual::new(x, 0.0)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Dual::new(self.re * s, self.eps * s)
    }
}

/// Matrix-valued dual number: `re + ε·eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualMat {
    pub re: DMatrix<f64>,
    pub eps: DMatrix<f64>,
}

impl DualMat {
    pub fn new(re: DMatrix<f64>, eps: DMatrix<f64>) -> Self {
        debug_assert_eq!(re.shape(), eps.shape());
        Self { re, eps }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n), DMatrix::zeros(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(DMatrix::zeros(n, n), DMatrix::zeros(n, n))
    }

    pub fn mul(&self, o: &DualMat) -> DualMat {
        DualMat::new(&self.re * &o.re, &self.re * &o.eps + &self.eps * &o.re)
    }

    pub fn trace(&self) -> Dual {
        Dual::new(self.re.trace(), self.eps.trace())
    }

    /// `self + s·m`
    pub fn add_scaled(&mut self, s: Dual, m: &DualMat) {
        self.eps += &m.eps * s.re + &m.re * s.eps;
        self.re += &m.re * s.re;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        // f(t) = (2 + 3t)(1 - t) at t = 0: value 2, derivative 3 - 2 = 1
        let a = Dual::new(2.0, 3.0);
        let b = Dual::new(1.0, -1.0);
        assert_eq!(a * b, Dual::new(2.0, 1.0));
    }

    #[test]
    fn matrix_square_derivative() {
        // d/dt (A + tB)^2 = AB + BA
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 0.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 3.0]);
        let m = DualMat::new(a.clone(), b.clone());
        let sq = m.mul(&m);
        assert_eq!(sq.re, &a * &a);
        assert_eq!(sq.eps, &a * &b + &b * &a);
    }
}
