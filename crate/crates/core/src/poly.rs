//! Horner evaluation of complex polynomials stored in ascending powers.

use crate::Complex64;

/// `p(z)` for coefficients `c[0] + c[1] z + ... + c[n] z^n`.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `(p(z), p'(z))` in one Horner pass.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

/// `Σ |c_i| |z|^i`, the scale against which a computed `|p(z)|` is judged.
pub fn magnitude_bound(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Coefficients of `a(z) b(z)`, which is also the full linear convolution `a * b`.
pub fn multiply(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_matches_direct_sum() {
        let coeffs = [c(1.0, -2.0), c(0.5, 0.25), c(-3.0, 1.0), c(0.0, 2.0)];
        let z = c(0.7, -1.3);
        let direct: Complex64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * z.powi(i as i32))
            .sum();
        assert!((eval(&coeffs, z) - direct).norm() < 1e-13);
        let deriv: Complex64 = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * (i as f64) * z.powi(i as i32 - 1))
            .sum();
        let (p, dp) = eval_with_derivative(&coeffs, z);
        assert!((p - direct).norm() < 1e-13);
        assert!((dp - deriv).norm() < 1e-13);
    }

    #[test]
    fn product_is_convolution() {
        let out = multiply(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(out, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(multiply(&[c(2.0, 1.0)], &[c(1.0, 0.0), c(0.0, 3.0)]), vec![c(2.0, 1.0), c(-3.0, 6.0)]);
    }
}
