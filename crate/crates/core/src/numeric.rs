//! Small numerical helpers: finite-difference weights on scattered nodes,
//! angle unwrapping, rotations and sphere grids.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use nalgebra::{Matrix3, Vector3};

/// Fornberg weights for the `order`-th derivative at `x0` from nodes `xs`.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > order, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// First derivative of sampled values with respect to the parameter `s`,
/// using a five-point stencil.
///
/// When `closed` is set the last sample is taken to duplicate the first
/// and the stencil wraps around with period `s[last] - s[0]`.
pub fn derivative_along<T>(s: &[f64], values: &[T], closed: bool) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = s.len();
    assert_eq!(n, values.len());
    assert!(n >= 6, "need at least six samples");
    let mut out = Vec::with_capacity(n);
    if closed {
        let m = n - 1;
        let period = s[m] - s[0];
        for k in 0..n {
            let kk = k % m;
            let mut nodes = [0.0; 5];
            let mut vals = [values[0]; 5];
            for (slot, off) in (-2i64..=2).enumerate() {
                let idx = kk as i64 + off;
                let wrapped = idx.rem_euclid(m as i64) as usize;
                let shift = idx.div_euclid(m as i64) as f64 * period;
                nodes[slot] = s[wrapped] + shift;
                vals[slot] = values[wrapped];
            }
            out.push(apply(&fornberg_weights(s[kk], &nodes, 1), &vals));
        }
    } else {
        for k in 0..n {
            let lo = k.saturating_sub(2).min(n - 5);
            let nodes = &s[lo..lo + 5];
            out.push(apply(&fornberg_weights(s[k], nodes, 1), &values[lo..lo + 5]));
        }
    }
    out
}

fn apply<T>(w: &[f64], vals: &[T]) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let mut acc = vals[0] * w[0];
    for (v, &wi) in vals.iter().zip(w).skip(1) {
        acc = acc + *v * wi;
    }
    acc
}

/// Shift `angle` by a multiple of `period` so it lies closest to `reference`.
pub fn unwrap_near(reference: f64, angle: f64, period: f64) -> f64 {
    angle - period * ((angle - reference) / period).round()
}

/// Continuous version of a sequence of angles that are defined modulo `period`.
pub fn unwrap_sequence(angles: &[f64], period: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    for (k, &a) in angles.iter().enumerate() {
        if k == 0 {
            out.push(a);
        } else {
            out.push(unwrap_near(out[k - 1], a, period));
        }
    }
    out
}

pub fn wrap_two_pi(a: f64) -> f64 {
    a.rem_euclid(2.0 * PI)
}

/// Rotation taking the unit vector `n` to `(0, 0, 1)`.
pub fn rotation_to_north(n: &Vector3<f64>) -> Matrix3<f64> {
    let e3 = Vector3::z();
    let n = n.normalize();
    let axis = n.cross(&e3);
    let s = axis.norm();
    let c = n.dot(&e3);
    if s < 1e-14 {
        if c > 0.0 {
            return Matrix3::identity();
        }
        return Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
    }
    let k = axis / s;
    let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Matrix3::identity() + kx * s + kx * kx * (1.0 - c)
}

/// Rotation by `angle` about the unit axis `axis`.
pub fn axis_rotation(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let k = axis.normalize();
    let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Matrix3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

/// `|Q^T Q - I|` (max entry).
pub fn orthonormality_residual(q: &Matrix3<f64>) -> f64 {
    (q.transpose() * q - Matrix3::identity()).amax()
}

/// Roughly equal-area spiral grid of `n` unit vectors.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let th = golden * k as f64;
            Vector3::new(rho * th.cos(), rho * th.sin(), z)
        })
        .collect()
}

/// Snap to the nearest multiple of one half, reporting the pre-snap gap.
pub fn snap_half(x: f64) -> (f64, f64) {
    let snapped = (2.0 * x).round() / 2.0;
    (snapped, (x - snapped).abs())
}
