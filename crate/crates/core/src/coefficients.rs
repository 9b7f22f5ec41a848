//! Explicit forms of the ergodicity coefficients `tau_1` and `tau_inf`.
//!
//! Both functions accept any square matrix. On constant row-sum matrices they
//! coincide with the maximum of `||A^T x||_p` over unit vectors orthogonal to
//! the all-ones vector; off that class they are just the formulas, and e.g.
//! submultiplicativity can fail.

use crate::matrix::{EMatrix, Matrix, PNorm};

/// Column statistic `cs_j`: upper-half sum minus lower-half sum of the
/// column sorted in non-increasing order (the middle entry is dropped for
/// odd lengths).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnStat {
    pub column_index: usize,
    pub cs_value: f64,
}

pub fn column_stat(column: &[f64], index: usize) -> ColumnStat {
    let mut sorted = column.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let n = sorted.len();
    let half = n / 2;
    let upper: f64 = sorted[..half].iter().sum();
    let lower: f64 = sorted[n - half..].iter().sum();
    ColumnStat {
        column_index: index,
        cs_value: upper - lower,
    }
}

/// Largest column statistic.
pub fn rho_hat(m: &Matrix) -> f64 {
    (0..m.dim())
        .map(|j| column_stat(&m.column(j), j).cs_value)
        .fold(0.0, f64::max)
}

pub fn tau_inf(m: &Matrix) -> f64 {
    rho_hat(m)
}

/// Half the largest l1 distance between two rows.
pub fn tau_1(m: &Matrix) -> f64 {
    let n = m.dim();
    let mut best = 0.0f64;
    for i in 0..n {
        let ri = m.row(i);
        for j in i + 1..n {
            let d: f64 = ri.iter().zip(m.row(j)).map(|(a, b)| (a - b).abs()).sum();
            best = best.max(d);
        }
    }
    0.5 * best
}

/// `lambda_A - min_{i,j} sum_k min(a_ik, a_jk)`, valid only for constant
/// row sums.
pub fn tau_1_minform(a: &EMatrix) -> f64 {
    let m = a.matrix();
    let n = m.dim();
    if n == 1 {
        return 0.0;
    }
    let mut least = f64::INFINITY;
    for i in 0..n {
        let ri = m.row(i);
        for j in i + 1..n {
            let s: f64 = ri.iter().zip(m.row(j)).map(|(x, y)| x.min(*y)).sum();
            least = least.min(s);
        }
    }
    (a.trivial_eigenvalue() - least).max(0.0)
}

/// `tau_p` for the selected norm.
pub fn tau(m: &Matrix, p: PNorm) -> f64 {
    match p {
        PNorm::One => tau_1(m),
        PNorm::Infinity => tau_inf(m),
    }
}
