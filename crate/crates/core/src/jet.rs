//! Second-order forward-mode derivatives of scalar functions on R^3.
//!
//! Support functions are written as degree-one homogeneous functions of an
//! ambient vector and evaluated on [`Jet3`] values, which carry the exact
//! gradient and Hessian alongside the value.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub value: f64,
    pub grad: Vector3<f64>,
    pub hess: Matrix3<f64>,
}

impl Jet3 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            grad: Vector3::zeros(),
            hess: Matrix3::zeros(),
        }
    }

    /// The coordinate functions `(x, y, z)` evaluated at `p`.
    pub fn variables(p: &Vector3<f64>) -> [Jet3; 3] {
        let mut out = [Jet3::constant(0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            o.value = p[i];
            o.grad[i] = 1.0;
        }
        out
    }

    /// Apply a scalar function given its value and first two derivatives at `self.value`.
    pub fn compose(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            grad: self.grad * df,
            hess: self.hess * df + self.grad * self.grad.transpose() * d2f,
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn powf(self, p: f64) -> Self {
        let v = self.value;
        self.compose(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }

    pub fn recip(self) -> Self {
        let v = self.value;
        self.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3 {
            value: self.value + o.value,
            grad: self.grad + o.grad,
            hess: self.hess + o.hess,
        }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self * -1.0
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        let cross = self.grad * o.grad.transpose();
        Jet3 {
            value: self.value * o.value,
            grad: self.grad * o.value + o.grad * self.value,
            hess: self.hess * o.value + o.hess * self.value + cross + cross.transpose(),
        }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet3) -> Jet3 {
        self * o.recip()
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, s: f64) -> Jet3 {
        Jet3 {
            value: self.value * s,
            grad: self.grad * s,
            hess: self.hess * s,
        }
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(self, s: f64) -> Jet3 {
        Jet3 {
            value: self.value + s,
            ..self
        }
    }
}
