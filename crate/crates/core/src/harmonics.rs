//! Orthonormal real spherical harmonics as homogeneous polynomials
//! (regular solid harmonics), evaluated on [`Jet3`] arguments.

use std::f64::consts::PI;

use crate::jet::Jet3;

/// Highest supported degree.
pub const MAX_DEGREE: u32 = 6;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn double_factorial_odd(m: u32) -> f64 {
    // (2m - 1)!!
    (1..=m).map(|k| f64::from(2 * k - 1)).product()
}

/// `r^l Y_lm(x / r)` for the orthonormal real harmonic of degree `l`, order `m`
/// (`m > 0` cosine type, `m < 0` sine type), without the Condon-Shortley phase.
pub fn solid_harmonic(l: u32, m: i32, p: &[Jet3; 3]) -> Jet3 {
    let am = m.unsigned_abs();
    assert!(am <= l && l <= MAX_DEGREE, "unsupported harmonic ({l}, {m})");
    let [x, y, z] = *p;
    let r2 = x * x + y * y + z * z;

    // Pi_l^m(z, r^2) recurrence in l.
    let mut prev2 = Jet3::constant(0.0);
    let mut prev = Jet3::constant(double_factorial_odd(am));
    for ll in (am + 1)..=l {
        let next = if ll == am + 1 {
            z * prev * f64::from(2 * am + 1)
        } else {
            (z * prev * f64::from(2 * ll - 1) - r2 * prev2 * f64::from(ll + am - 1)) * (1.0 / f64::from(ll - am))
        };
        prev2 = prev;
        prev = next;
    }
    let pi_lm = prev;

    // (x + i y)^m
    let mut re = Jet3::constant(1.0);
    let mut im = Jet3::constant(0.0);
    for _ in 0..am {
        let nre = re * x - im * y;
        let nim = re * y + im * x;
        re = nre;
        im = nim;
    }

    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    match m.signum() {
        0 => pi_lm * norm,
        1 => pi_lm * re * (norm * 2f64.sqrt()),
        _ => pi_lm * im * (norm * 2f64.sqrt()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    #[test]
    fn low_degree_closed_forms() {
        let p = Vector3::new(0.2, -0.5, 0.7);
        let v = Jet3::variables(&p);
        let c1 = (3.0 / (4.0 * PI)).sqrt();
        assert!((solid_harmonic(1, 0, &v).value - c1 * p.z).abs() < 1e-15);
        assert!((solid_harmonic(1, 1, &v).value - c1 * p.x).abs() < 1e-15);
        assert!((solid_harmonic(1, -1, &v).value - c1 * p.y).abs() < 1e-15);
        let c20 = (5.0 / (16.0 * PI)).sqrt();
        let r2 = p.norm_squared();
        assert!((solid_harmonic(2, 0, &v).value - c20 * (3.0 * p.z * p.z - r2)).abs() < 1e-15);
    }

    #[test]
    fn solid_harmonics_are_harmonic() {
        let p = Vector3::new(0.4, 0.1, -0.9);
        let v = Jet3::variables(&p);
        for l in 0..=MAX_DEGREE {
            for m in -(l as i32)..=(l as i32) {
                let j = solid_harmonic(l, m, &v);
                assert!(j.hess.trace().abs() < 1e-9, "l={l} m={m} lap={}", j.hess.trace());
            }
        }
    }

    #[test]
    fn orthonormal_on_sphere() {
        // Fibonacci quadrature is accurate enough to see unit norms and zero overlaps.
        let pts = crate::numeric::fibonacci_sphere(20000);
        let w = 4.0 * PI / pts.len() as f64;
        let pairs = [((4, 0), (4, 0)), ((3, 2), (3, 2)), ((4, 0), (2, 0)), ((3, -1), (3, 1))];
        for ((l1, m1), (l2, m2)) in pairs {
            let s: f64 = pts
                .iter()
                .map(|p| {
                    let v = Jet3::variables(p);
                    solid_harmonic(l1, m1, &v).value * solid_harmonic(l2, m2, &v).value * w
                })
                .sum();
            let expect = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!((s - expect).abs() < 1e-3, "({l1},{m1})x({l2},{m2}) = {s}");
        }
    }
}
