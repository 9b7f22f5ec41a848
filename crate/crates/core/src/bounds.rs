//! Eigenvalue bounds built from ergodicity coefficients of matrix powers.
//!
//! For an e-matrix `A` and every non-trivial eigenvalue `lambda`,
//! `|lambda| <= tau_p(A^k)^(1/k)` for all `k`, and the right side tends to
//! the largest non-trivial modulus as `k` grows. Applied to `A^-1` the same
//! machinery gives lower bounds on the smallest non-trivial modulus.
//!
//! All powers are formed from the deflated matrix `A - (lambda_A / n) J`.
//! Adding a multiple of `J` changes neither `tau_p(A^k)` nor the non-trivial
//! eigenvalues, and removing the trivial eigenvalue avoids cancellation when
//! it dominates the spectrum (otherwise `A^k` is numerically rank one long
//! before the bound has converged).

use serde::Serialize;

use crate::coefficients::tau;
use crate::error::{Error, Result};
use crate::matrix::{invert, scaled_power, EMatrix, PNorm, ScaledPower};

/// Upper limit on doubling levels (`k = 2^30`).
pub const MAX_DOUBLING_LEVEL: u32 = 30;

/// Upper limit on `k` for [`constancy_probe`].
pub const MAX_PROBE_K: u64 = 20;

pub const DEFAULT_REL_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_LEVEL: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundMode {
    AllK,
    Doubling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundTarget {
    LargestNonTrivial,
    SmallestNonTrivial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundEntry {
    pub k: u64,
    pub bound: f64,
    /// `ln tau_p(A^k)` of the matrix whose powers were taken (`-inf` when
    /// the coefficient vanishes).
    pub log_tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundSequence {
    pub p: PNorm,
    pub entries: Vec<BoundEntry>,
    pub mode: BoundMode,
    pub target: BoundTarget,
}

impl BoundSequence {
    pub fn bounds(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.bound).collect()
    }
}

fn entry_from_power(power: &ScaledPower, p: PNorm) -> BoundEntry {
    let t = tau(&power.scaled_matrix, p);
    if t == 0.0 {
        return BoundEntry {
            k: power.exponent,
            bound: 0.0,
            log_tau: f64::NEG_INFINITY,
        };
    }
    let log_tau = t.ln() + power.log_scale;
    BoundEntry {
        k: power.exponent,
        bound: (log_tau / power.exponent as f64).exp(),
        log_tau,
    }
}

fn largest_entry(a: &EMatrix, p: PNorm, k: u64) -> BoundEntry {
    entry_from_power(&scaled_power(&a.deflated(), k.max(1)), p)
}

/// `tau_p(A^k)^(1/k)`: bounds every non-trivial `|lambda|`, and `|lambda_A|`
/// too when the trivial eigenvalue is not simple.
pub fn largest_bound(a: &EMatrix, p: PNorm, k: u64) -> f64 {
    largest_entry(a, p, k).bound
}

/// Bounds for `k = 1..=max_k`, each from its own binary exponentiation.
pub fn all_k_bounds(a: &EMatrix, p: PNorm, max_k: u64) -> BoundSequence {
    BoundSequence {
        p,
        entries: (1..=max_k.max(1)).map(|k| largest_entry(a, p, k)).collect(),
        mode: BoundMode::AllK,
        target: BoundTarget::LargestNonTrivial,
    }
}

/// Bounds at `k = 1, 2, 4, ..., 2^max_level` from one squaring chain; the
/// sequence is non-increasing. `max_level` is capped at
/// [`MAX_DOUBLING_LEVEL`].
pub fn doubling_bounds(a: &EMatrix, p: PNorm, max_level: u32) -> BoundSequence {
    let mut power = scaled_power(&a.deflated(), 1);
    let mut entries = vec![entry_from_power(&power, p)];
    for _ in 0..max_level.min(MAX_DOUBLING_LEVEL) {
        power = power.square();
        entries.push(entry_from_power(&power, p));
    }
    BoundSequence {
        p,
        entries,
        mode: BoundMode::Doubling,
        target: BoundTarget::LargestNonTrivial,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    /// Last doubling level evaluated (`k = 2^levels_used`).
    pub levels_used: u32,
    pub converged: bool,
}

/// Runs the doubling sequence until two successive bounds differ by less than
/// `rel_tol` (relative) or `max_level` is reached; returns the last bound.
pub fn estimate_largest(a: &EMatrix, p: PNorm, rel_tol: f64, max_level: u32) -> Result<Estimate> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "relative tolerance must be positive, got {rel_tol}"
        )));
    }
    let max_level = max_level.min(MAX_DOUBLING_LEVEL);
    let mut power = scaled_power(&a.deflated(), 1);
    let mut prev = entry_from_power(&power, p).bound;
    if prev == 0.0 {
        return Ok(Estimate {
            estimate: 0.0,
            levels_used: 0,
            converged: true,
        });
    }
    for level in 1..=max_level {
        power = power.square();
        let cur = entry_from_power(&power, p).bound;
        if cur == 0.0 || (prev - cur).abs() < rel_tol * prev {
            return Ok(Estimate {
                estimate: cur,
                levels_used: level,
                converged: true,
            });
        }
        prev = cur;
    }
    Ok(Estimate {
        estimate: prev,
        levels_used: max_level,
        converged: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimplicityReport {
    pub trivial_eigenvalue: f64,
    pub tau_value: f64,
    pub is_certified_simple: bool,
    /// `|lambda_A| - tau_p(A)`; a lower bound on the gap to every other
    /// eigenvalue modulus when positive.
    pub gap_lower_bound: f64,
}

/// `|lambda_A| > tau_p(A)` certifies that the trivial eigenvalue is simple
/// and strictly dominant.
pub fn simplicity_check(a: &EMatrix, p: PNorm) -> SimplicityReport {
    let tau_value = tau(a.matrix(), p);
    let lambda = a.trivial_eigenvalue();
    SimplicityReport {
        trivial_eigenvalue: lambda,
        tau_value,
        is_certified_simple: lambda.abs() > tau_value,
        gap_lower_bound: lambda.abs() - tau_value,
    }
}

/// `1 / tau_p(A^-k)^(1/k)`, a lower bound on the smallest non-trivial
/// modulus of a nonsingular e-matrix.
pub fn smallest_bound_nonsingular(a: &EMatrix, p: PNorm, k: u64) -> Result<f64> {
    let inv = invert(a)?;
    let upper = largest_bound(&inv, p, k);
    if upper == 0.0 {
        return Err(Error::DegenerateCoefficient);
    }
    Ok(1.0 / upper)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "shift must be a nonzero finite real, got {alpha}"
        )));
    }
    Ok(())
}

fn require_zero_trivial(a: &EMatrix) -> Result<()> {
    if !a.has_zero_trivial_eigenvalue() {
        return Err(Error::TrivialEigenvalueNotZero(a.trivial_eigenvalue()));
    }
    Ok(())
}

/// Lower bound on the smallest non-trivial modulus of a singular e-matrix
/// whose trivial eigenvalue 0 is simple, via `(A + alpha J)^-k`.
///
/// Simplicity of 0 is the caller's responsibility; when it fails,
/// `A + alpha J` is singular and this returns `SingularMatrix`.
pub fn smallest_bound_singular(a: &EMatrix, p: PNorm, k: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    require_zero_trivial(a)?;
    smallest_bound_nonsingular(&a.add_rank_one_shift(alpha), p, k)
}

/// Scale-matched shift for singular inputs: `max(1, max|a_ij|)`.
pub fn default_alpha(a: &EMatrix) -> f64 {
    a.matrix().max_abs().max(1.0)
}

/// Doubling iteration on the inverse (or on `(A + alpha J)^-1` when `alpha`
/// is given, which requires a zero trivial eigenvalue). The estimate never
/// exceeds the smallest non-trivial modulus.
pub fn estimate_smallest(
    a: &EMatrix,
    p: PNorm,
    rel_tol: f64,
    max_level: u32,
    alpha: Option<f64>,
) -> Result<Estimate> {
    let inv = inverse_target(a, alpha)?;
    let est = estimate_largest(&inv, p, rel_tol, max_level)?;
    if est.estimate == 0.0 {
        return Err(Error::DegenerateCoefficient);
    }
    Ok(Estimate {
        estimate: 1.0 / est.estimate,
        ..est
    })
}

/// Matrix whose inverse powers bound the smallest non-trivial modulus:
/// `A + alpha J` when a shift is given, `A` otherwise.
fn inverse_target(a: &EMatrix, alpha: Option<f64>) -> Result<EMatrix> {
    let target = match alpha {
        Some(alpha) => {
            check_alpha(alpha)?;
            require_zero_trivial(a)?;
            a.add_rank_one_shift(alpha)
        }
        None => a.clone(),
    };
    invert(&target)
}

fn reciprocal_sequence(upper: BoundSequence) -> Result<BoundSequence> {
    let entries = upper
        .entries
        .into_iter()
        .map(|e| {
            if e.bound == 0.0 {
                Err(Error::DegenerateCoefficient)
            } else {
                Ok(BoundEntry {
                    bound: 1.0 / e.bound,
                    ..e
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundSequence {
        entries,
        target: BoundTarget::SmallestNonTrivial,
        ..upper
    })
}

/// Lower bounds on the smallest non-trivial modulus for `k = 1..=max_k`.
/// `log_tau` in each entry refers to the inverse power.
pub fn smallest_all_k_bounds(
    a: &EMatrix,
    p: PNorm,
    max_k: u64,
    alpha: Option<f64>,
) -> Result<BoundSequence> {
    reciprocal_sequence(all_k_bounds(&inverse_target(a, alpha)?, p, max_k))
}

/// Lower bounds at `k = 1, 2, 4, ..., 2^max_level`; non-decreasing.
pub fn smallest_doubling_bounds(
    a: &EMatrix,
    p: PNorm,
    max_level: u32,
    alpha: Option<f64>,
) -> Result<BoundSequence> {
    reciprocal_sequence(doubling_bounds(&inverse_target(a, alpha)?, p, max_level))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstancyProbe {
    pub p: PNorm,
    /// `(k, tau_p(A^k))` for `k = 1..=max_k`.
    pub values: Vec<(u64, f64)>,
    pub constant_all: bool,
    pub first_two_equal: bool,
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Raw `tau_p(A^k)` for `k = 1..=max_k` (capped at [`MAX_PROBE_K`]) and
/// whether they are all equal, or at least the first two.
pub fn constancy_probe(a: &EMatrix, p: PNorm, max_k: u64) -> ConstancyProbe {
    let max_k = max_k.clamp(1, MAX_PROBE_K);
    let base = a.deflated();
    let mut power = scaled_power(&base, 1);
    let mut values = Vec::with_capacity(max_k as usize);
    for k in 1..=max_k {
        if k > 1 {
            power = power.times_base(base.matrix());
        }
        let t = tau(&power.scaled_matrix, p);
        let raw = if t == 0.0 {
            0.0
        } else {
            t * power.log_scale.exp()
        };
        values.push((k, raw));
    }
    let first = values[0].1;
    let constant_all = values.iter().all(|&(_, v)| nearly_equal(v, first));
    let first_two_equal = values.get(1).is_none_or(|&(_, v)| nearly_equal(v, first));
    ConstancyProbe {
        p,
        values,
        constant_all,
        first_two_equal,
    }
}
