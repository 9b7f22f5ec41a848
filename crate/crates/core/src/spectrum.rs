//! Reference eigenvalue oracle.
//!
//! Deliberately independent of the coefficient and bound code: general
//! matrices go through the Faddeev-LeVerrier characteristic polynomial and
//! simultaneous (Aberth) root iteration, symmetric ones through cyclic Jacobi
//! rotations. Only meant for desk-scale matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{EMatrix, Matrix};

/// Largest dimension accepted by the characteristic polynomial path.
pub const CHAR_POLY_MAX_DIM: usize = 14;

const ROOT_MAX_ITERATIONS: usize = 500;
const ROOT_UPDATE_TOLERANCE: f64 = 1e-12;
const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-13;
const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMethod {
    CharPolyRoots,
    JacobiSymmetric,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Sorted by ascending modulus.
    pub eigenvalues: Vec<Complex64>,
    /// Largest normalized polynomial residual (char-poly path) or the final
    /// relative off-diagonal mass (Jacobi path).
    pub max_residual: f64,
    pub method: SpectrumMethod,
}

impl Spectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.eigenvalues.iter().product()
    }
}

/// Monic coefficients of `det(xI - A)`, highest degree first.
pub fn characteristic_polynomial(m: &Matrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            limit: CHAR_POLY_MAX_DIM,
        });
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut aux = Matrix::zeros(n);
    for k in 1..=n {
        aux = m.multiply(&aux)?.add_diagonal(coeffs[k - 1]);
        let am = m.multiply(&aux)?;
        coeffs[k] = -am.trace() / k as f64;
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn normalized_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let largest = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let scale = largest * coeffs.iter().fold(0.0, |acc, _| acc * r + 1.0);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All complex roots of a polynomial given highest degree first.
///
/// On non-convergence the error carries the iteration count and the final
/// residual.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    roots_with_residual(coeffs).and_then(|(roots, _, converged, iters)| {
        if converged {
            Ok(roots)
        } else {
            let residual = roots
                .iter()
                .map(|&z| normalized_residual(coeffs, z))
                .fold(0.0, f64::max);
            Err(Error::NonConvergence {
                iterations: iters,
                residual,
            })
        }
    })
}

fn roots_with_residual(coeffs: &[f64]) -> Result<(Vec<Complex64>, f64, bool, usize)> {
    let Some(&lead) = coeffs.first() else {
        return Err(Error::InvalidArgument("empty polynomial".into()));
    };
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }
    let degree = coeffs.len() - 1;
    if degree > CHAR_POLY_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n: degree,
            limit: CHAR_POLY_MAX_DIM,
        });
    }
    if degree == 0 {
        return Ok((Vec::new(), 0.0, true, 0));
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |acc, c| acc.max(c.abs()));

    // Irrational offset keeps guesses off the real axis and away from symmetry.
    let offset = std::f64::consts::SQRT_2 / 3.0;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + offset;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = false;
    let mut iterations = 0;
    let mut polish_left = 3;
    while iterations < ROOT_MAX_ITERATIONS {
        iterations += 1;
        let mut max_update = 0.0f64;
        for k in 0..degree {
            let (p, dp) = horner(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !ratio.is_finite() {
                Complex64::new(0.0, 0.0)
            } else {
                ratio / denom
            };
            if step.is_finite() {
                z[k] -= step;
                max_update = max_update.max(step.norm());
            }
        }
        let small_update = max_update < ROOT_UPDATE_TOLERANCE * radius;
        let small_residual = z
            .iter()
            .all(|&r| normalized_residual(&monic, r) <= ROOT_RESIDUAL_TOLERANCE);
        if small_update || small_residual {
            converged = true;
            if polish_left == 0 || max_update == 0.0 {
                break;
            }
            polish_left -= 1;
        }
    }
    let max_residual = z
        .iter()
        .map(|&r| normalized_residual(&monic, r))
        .fold(0.0, f64::max);
    Ok((z, max_residual, converged, iterations))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, plus the
/// final relative off-diagonal Frobenius mass.
pub fn jacobi_eigenvalues(m: &Matrix) -> Result<(Vec<f64>, f64)> {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = m.rows().map(|r| r.to_vec()).collect();
    let scale = m
        .entries()
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let off = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt() / scale
    };
    let mut sweeps = 0;
    let mut mass = off(&a);
    while mass >= JACOBI_TOLERANCE {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NonConvergence {
                iterations: sweeps,
                residual: mass,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        mass = off(&a);
    }
    Ok(((0..n).map(|i| a[i][i]).collect(), mass))
}

fn sort_by_modulus(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
}

/// Spectrum through the requested method.
pub fn spectrum_with(m: &Matrix, method: SpectrumMethod) -> Result<Spectrum> {
    let (mut eigenvalues, max_residual) = match method {
        SpectrumMethod::JacobiSymmetric => {
            if !m.is_symmetric(1e-12) {
                return Err(Error::InvalidArgument(
                    "Jacobi path requires a symmetric matrix".into(),
                ));
            }
            let (vals, mass) = jacobi_eigenvalues(m)?;
            (
                vals.into_iter()
                    .map(|v| Complex64::new(v, 0.0))
                    .collect::<Vec<_>>(),
                mass,
            )
        }
        SpectrumMethod::CharPolyRoots => {
            let coeffs = characteristic_polynomial(m)?;
            let (roots, residual, converged, iterations) = roots_with_residual(&coeffs)?;
            if !converged {
                return Err(Error::NonConvergence {
                    iterations,
                    residual,
                });
            }
            (roots, residual)
        }
    };
    sort_by_modulus(&mut eigenvalues);
    Ok(Spectrum {
        eigenvalues,
        max_residual,
        method,
    })
}

/// Spectrum, using Jacobi for symmetric input and the characteristic
/// polynomial otherwise.
pub fn spectrum(m: &Matrix) -> Result<Spectrum> {
    if m.is_symmetric(1e-12) {
        spectrum_with(m, SpectrumMethod::JacobiSymmetric)
    } else {
        spectrum_with(m, SpectrumMethod::CharPolyRoots)
    }
}

/// Eigenvalues with the trivial one removed: the single entry closest to
/// `lambda_A` (first on ties).
pub fn nontrivial_eigenvalues(a: &EMatrix) -> Result<Vec<Complex64>> {
    if a.dim() < 2 {
        return Err(Error::InvalidArgument(
            "a 1x1 matrix has no non-trivial eigenvalues".into(),
        ));
    }
    let mut values = spectrum(a.matrix())?.eigenvalues;
    let lambda = Complex64::new(a.trivial_eigenvalue(), 0.0);
    let (idx, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, z)| {
            let d = (z - lambda).norm();
            if d < best.1 {
                (i, d)
            } else {
                best
            }
        });
    values.remove(idx);
    Ok(values)
}

/// Smallest and largest modulus among the non-trivial eigenvalues.
pub fn nontrivial_extremes(a: &EMatrix) -> Result<(f64, f64)> {
    let values = nontrivial_eigenvalues(a)?;
    let moduli = values.iter().map(|z| z.norm());
    let min = moduli.clone().fold(f64::INFINITY, f64::min);
    let max = moduli.fold(0.0, f64::max);
    Ok((min, max))
}
