//! Roots of the received polynomial.
//!
//! The default solver computes the eigenvalues of the balanced companion
//! matrix (complex Schur form) and polishes each one with guarded Newton
//! steps on the original coefficients. [`RootMethod::Aberth`] runs the
//! Aberth-Ehrlich simultaneous iteration instead; both honour the same
//! residual contract and return roots in the same canonical order.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly;
use crate::Complex64;

/// Leading coefficients smaller than this (relative to the largest
/// coefficient) make the polynomial effectively lower-degree.
pub const LEADING_COEFF_FLOOR: f64 = 1e-300;

/// Root-finding algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootMethod {
    #[default]
    Companion,
    Aberth,
}

/// The `M` roots of a received polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Roots sorted by angle in `[0, 2π)`, then by magnitude.
    pub roots: Vec<Complex64>,
    /// `|y_M|`, magnitude of the highest-order coefficient.
    pub leading_magnitude: f64,
}

impl RootSet {
    /// Wraps externally supplied roots (e.g. tabulated reference values).
    pub fn from_roots(mut roots: Vec<Complex64>, leading_magnitude: f64) -> Self {
        canonical_sort(&mut roots);
        Self {
            roots,
            leading_magnitude,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Largest `|y(ã)| / Σ|y_i||ã|^i` over the roots: the relative backward
    /// error of the root set with respect to `coeffs`.
    pub fn max_relative_residual(&self, coeffs: &[Complex64]) -> f64 {
        self.roots
            .iter()
            .map(|&z| {
                let bound = poly::magnitude_bound(coeffs, z);
                if bound == 0.0 {
                    0.0
                } else {
                    poly::eval(coeffs, z).norm() / bound
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Finds all roots of `coeffs` (ascending powers) with the default method.
pub fn find_roots(coeffs: &[Complex64]) -> Result<RootSet> {
    find_roots_with(coeffs, RootMethod::default())
}

pub fn find_roots_with(coeffs: &[Complex64], method: RootMethod) -> Result<RootSet> {
    let (monic, leading_magnitude) = monic_form(coeffs)?;
    let degree = monic.len() - 1;

    // Exact zero roots are split off so both solvers see a nonzero constant term.
    let zero_roots = monic.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let reduced = &monic[zero_roots..];

    let mut roots = match reduced.len() - 1 {
        0 => Vec::new(),
        1 => vec![-reduced[0]],
        _ => match method {
            RootMethod::Companion => companion_roots(reduced)?,
            RootMethod::Aberth => aberth_roots(reduced)?,
        },
    };
    roots.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zero_roots));
    debug_assert_eq!(roots.len(), degree);

    if roots.iter().any(|z| !z.is_finite()) {
        return Err(Error::RootFinding("non-finite root".into()));
    }
    canonical_sort(&mut roots);
    Ok(RootSet {
        roots,
        leading_magnitude,
    })
}

fn monic_form(coeffs: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if coeffs.len() < 2 {
        return Err(Error::DegeneratePolynomial(format!(
            "need at least two coefficients, got {}",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegeneratePolynomial("non-finite coefficient".into()));
    }
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = coeffs[coeffs.len() - 1];
    let leading_magnitude = lead.norm();
    if max == 0.0 || leading_magnitude <= LEADING_COEFF_FLOOR * max {
        return Err(Error::DegeneratePolynomial(format!(
            "leading coefficient magnitude {leading_magnitude:e} vanishes relative to {max:e}"
        )));
    }
    Ok((coeffs.iter().map(|c| c / lead).collect(), leading_magnitude))
}

/// Orders roots by angle in `[0, 2π)`, ties broken by magnitude.
pub fn canonical_sort(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        positive_angle(*a)
            .partial_cmp(&positive_angle(*b))
            .unwrap_or(Ordering::Equal)
            .then(a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))
    });
}

fn positive_angle(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn companion_roots(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    balance(&mut m);
    let eig = m
        .eigenvalues()
        .ok_or_else(|| Error::RootFinding("Schur iteration did not converge".into()))?;
    let mut roots: Vec<Complex64> = eig.iter().copied().collect();
    polish(monic, &mut roots);
    Ok(roots)
}

/// Parlett-Reinsch balancing with power-of-two scalings (exact in floating point).
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let radix_sq = radix * radix;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix_sq;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Guarded Newton refinement: a step is kept only if it reduces `|p|` and
/// stays well inside the gap to the nearest other root.
fn polish(monic: &[Complex64], roots: &mut [Complex64]) {
    for idx in 0..roots.len() {
        let gap = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, r)| (r - roots[idx]).norm())
            .fold(f64::INFINITY, f64::min);
        let mut z = roots[idx];
        let (mut p, mut dp) = poly::eval_with_derivative(monic, z);
        for _ in 0..3 {
            if p.norm() == 0.0 || dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.norm() < 0.25 * gap) {
                break;
            }
            let candidate = z - step;
            let (cp, cdp) = poly::eval_with_derivative(monic, candidate);
            if cp.norm() >= p.norm() {
                break;
            }
            z = candidate;
            p = cp;
            dp = cdp;
        }
        roots[idx] = z;
    }
}

const ABERTH_MAX_ITERATIONS: usize = 500;

fn aberth_roots(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    // Geometric mean of the root moduli; offset angle avoids symmetric stalls.
    let radius = monic[0].norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..ABERTH_MAX_ITERATIONS {
        for j in 0..n {
            if done[j] {
                continue;
            }
            let z = roots[j];
            let (p, dp) = poly::eval_with_derivative(monic, z);
            if p.norm() <= 4.0 * f64::EPSILON * poly::magnitude_bound(monic, z) {
                done[j] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, r)| (z - r).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            roots[j] = z - step;
            if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
                done[j] = true;
            }
        }
        if done.iter().all(|d| *d) {
            return Ok(roots);
        }
    }
    Err(Error::RootFinding(format!(
        "Aberth iteration did not converge in {ABERTH_MAX_ITERATIONS} sweeps"
    )))
}
