//! Dense real square matrices and constant row-sum ("e-") matrices.
//!
//! [`Matrix`] is the plain carrier. [`EMatrix`] wraps a matrix whose rows all
//! sum to the same value and keeps that value, the trivial eigenvalue, next to
//! it. E-matrices are closed under sums, products, rank-one `J` shifts,
//! diagonal shifts and (when nonsingular) inversion, so every operation here
//! that starts from an [`EMatrix`] also returns one.

use std::fmt;

use crate::error::{Error, Result};

/// Relative factor for the default row-sum tolerance.
pub const ROW_SUM_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Pivots below this fraction of the largest entry are treated as zero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Dense `n x n` real matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from `n * n` row-major entries.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Matrix::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Matrix {
            n,
            data: vec![1.0; n * n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut t = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        check_dims(self, other)?;
        Ok(Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn multiply(&self, other: &Matrix) -> Result<Matrix> {
        check_dims(self, other)?;
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a_ik) in self.row(i).iter().enumerate() {
                if a_ik == 0.0 {
                    continue;
                }
                for (o, &b_kj) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a_ik * b_kj;
                }
            }
        }
        Ok(Matrix { n, data: out })
    }

    /// `self + alpha * J`.
    pub fn add_constant(&self, alpha: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| x + alpha).collect(),
        }
    }

    /// `self + alpha * I`.
    pub fn add_diagonal(&self, alpha: f64) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += alpha;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol * scale)
        })
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Determinant through LU with partial pivoting. Returns 0 for exactly
    /// singular pivots.
    pub fn determinant(&self) -> f64 {
        let lu = Lu::factor(self);
        if lu.zero_pivot.is_some() {
            return 0.0;
        }
        let mut det = lu.sign;
        for i in 0..self.n {
            det *= lu.factors.get(i, i);
        }
        det
    }

    /// Parses the whitespace-separated matrix text format.
    ///
    /// An optional first line holding only `n` declares the dimension; `#`
    /// starts a comment that runs to the end of the line.
    pub fn parse(text: &str) -> Result<Matrix> {
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let values = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("invalid number `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((line_no, values));
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no matrix rows found".into(),
            });
        }

        let mut declared = None;
        if rows.len() > 1 && rows[0].1.len() == 1 {
            let (line, ref v) = rows[0];
            let n = v[0];
            if n.fract() != 0.0 || n < 1.0 {
                return Err(Error::Parse {
                    line,
                    message: format!("dimension header must be a positive integer, got {n}"),
                });
            }
            declared = Some(n as usize);
            rows.remove(0);
        }

        let n = declared.unwrap_or(rows.len());
        if rows.len() != n {
            return Err(Error::Parse {
                line: rows.last().map_or(0, |r| r.0),
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for (line, values) in rows {
            if values.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {n} entries, found {}", values.len()),
                });
            }
            data.extend(values);
        }
        Matrix::new(n, data).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }

    /// Serializes to the text format, with a dimension header.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>10.4}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn check_dims(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

/// Standard matrix product.
pub fn multiply(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.multiply(b)
}

/// Which induced vector norm (or ergodicity coefficient) to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PNorm {
    One,
    Infinity,
}

impl PNorm {
    pub const ALL: [PNorm; 2] = [PNorm::One, PNorm::Infinity];

    pub fn label(self) -> &'static str {
        match self {
            PNorm::One => "1",
            PNorm::Infinity => "inf",
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl serde::Serialize for PNorm {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl std::str::FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "one" => Ok(PNorm::One),
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            other => Err(Error::InvalidArgument(format!(
                "unknown norm `{other}` (expected 1 or inf)"
            ))),
        }
    }
}

/// Induced matrix norm: max absolute column sum for `p = 1`, max absolute row
/// sum for `p = inf`.
pub fn induced_norm(a: &Matrix, p: PNorm) -> f64 {
    let n = a.dim();
    match p {
        PNorm::One => (0..n)
            .map(|j| (0..n).map(|i| a.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max),
        PNorm::Infinity => a
            .rows()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

/// Default row-sum tolerance for a matrix: `1e-9 * max(1, max|entry|)`.
pub fn default_row_sum_tolerance(m: &Matrix) -> f64 {
    ROW_SUM_RELATIVE_TOLERANCE * m.max_abs().max(1.0)
}

/// A matrix with constant row sums, carrying its trivial eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct EMatrix {
    matrix: Matrix,
    trivial_eigenvalue: f64,
    row_sum_tolerance: f64,
}

/// Checks that all row sums agree with their mean within `tol`.
pub fn validate_ematrix(m: Matrix, tol: f64) -> Result<EMatrix> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "row-sum tolerance must be nonnegative, got {tol}"
        )));
    }
    let sums = m.row_sums();
    let mean = sums.iter().sum::<f64>() / sums.len() as f64;
    let (row, deviation) =
        sums.iter()
            .map(|s| (s - mean).abs())
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            );
    if deviation > tol {
        return Err(Error::NotConstantRowSum {
            row,
            deviation,
            tolerance: tol,
        });
    }
    Ok(EMatrix {
        matrix: m,
        trivial_eigenvalue: mean,
        row_sum_tolerance: tol,
    })
}

impl EMatrix {
    /// Validates with the default relative tolerance.
    pub fn new(m: Matrix) -> Result<Self> {
        let tol = default_row_sum_tolerance(&m);
        validate_ematrix(m, tol)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        EMatrix::new(Matrix::from_rows(rows)?)
    }

    /// Wraps a matrix that is an e-matrix by construction (closure results).
    fn from_closure(matrix: Matrix) -> Self {
        let sums = matrix.row_sums();
        let mean = sums.iter().sum::<f64>() / sums.len() as f64;
        let row_sum_tolerance = default_row_sum_tolerance(&matrix);
        debug_assert!(
            sums.iter()
                .all(|s| (s - mean).abs() <= 1e3 * row_sum_tolerance),
            "closure operation produced non-constant row sums"
        );
        EMatrix {
            matrix,
            trivial_eigenvalue: mean,
            row_sum_tolerance,
        }
    }

    /// `c * J`.
    pub fn constant(n: usize, c: f64) -> Self {
        EMatrix::from_closure(Matrix::ones(n).scale(c))
    }

    pub fn identity(n: usize) -> Self {
        EMatrix::from_closure(Matrix::identity(n))
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// The common row sum.
    #[inline]
    pub fn trivial_eigenvalue(&self) -> f64 {
        self.trivial_eigenvalue
    }

    #[inline]
    pub fn row_sum_tolerance(&self) -> f64 {
        self.row_sum_tolerance
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn multiply(&self, other: &EMatrix) -> Result<EMatrix> {
        Ok(EMatrix::from_closure(self.matrix.multiply(&other.matrix)?))
    }

    pub fn add(&self, other: &EMatrix) -> Result<EMatrix> {
        Ok(EMatrix::from_closure(self.matrix.add(&other.matrix)?))
    }

    pub fn scale(&self, c: f64) -> EMatrix {
        EMatrix::from_closure(self.matrix.scale(c))
    }

    /// `A + alpha * J`; only the trivial eigenvalue moves (by `n * alpha`).
    pub fn add_rank_one_shift(&self, alpha: f64) -> EMatrix {
        EMatrix::from_closure(self.matrix.add_constant(alpha))
    }

    /// `A + alpha * I`; every eigenvalue moves by `alpha`.
    pub fn add_diagonal_shift(&self, alpha: f64) -> EMatrix {
        EMatrix::from_closure(self.matrix.add_diagonal(alpha))
    }

    /// `A - (lambda_A / n) J`: same non-trivial eigenvalues, trivial
    /// eigenvalue moved to 0, and the same ergodicity coefficients for every
    /// power.
    pub fn deflated(&self) -> EMatrix {
        let n = self.dim() as f64;
        let mut d = self.add_rank_one_shift(-self.trivial_eigenvalue / n);
        d.trivial_eigenvalue = 0.0;
        d
    }

    pub fn invert(&self) -> Result<EMatrix> {
        invert(self)
    }

    pub fn scaled_power(&self, k: u64) -> ScaledPower {
        scaled_power(self, k)
    }

    /// True when the trivial eigenvalue is zero at the row-sum tolerance.
    pub fn has_zero_trivial_eigenvalue(&self) -> bool {
        self.trivial_eigenvalue.abs()
            <= self
                .row_sum_tolerance
                .max(default_row_sum_tolerance(&self.matrix))
    }
}

impl AsRef<Matrix> for EMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.matrix
    }
}

impl TryFrom<Matrix> for EMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        EMatrix::new(m)
    }
}

pub fn add_rank_one_shift(a: &EMatrix, alpha: f64) -> EMatrix {
    a.add_rank_one_shift(alpha)
}

pub fn add_diagonal_shift(a: &EMatrix, alpha: f64) -> EMatrix {
    a.add_diagonal_shift(alpha)
}

/// `A^k` held as `scaled_matrix * exp(log_scale)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledPower {
    pub exponent: u64,
    pub scaled_matrix: Matrix,
    pub log_scale: f64,
}

impl ScaledPower {
    /// Multiplies the scale back in. May overflow for large exponents.
    pub fn reconstruct(&self) -> Matrix {
        self.scaled_matrix.scale(self.log_scale.exp())
    }

    /// `A^(2k)` from `A^k`, renormalized.
    pub fn square(&self) -> ScaledPower {
        let mut m = self
            .scaled_matrix
            .multiply(&self.scaled_matrix)
            .expect("same dimension");
        let mut log_scale = 2.0 * self.log_scale;
        normalize(&mut m, &mut log_scale);
        ScaledPower {
            exponent: 2 * self.exponent,
            scaled_matrix: m,
            log_scale,
        }
    }

    /// `A^(k+1)` from `A^k` and `A`, renormalized.
    pub fn times_base(&self, base: &Matrix) -> ScaledPower {
        let mut m = self.scaled_matrix.multiply(base).expect("same dimension");
        let mut log_scale = self.log_scale;
        normalize(&mut m, &mut log_scale);
        ScaledPower {
            exponent: self.exponent + 1,
            scaled_matrix: m,
            log_scale,
        }
    }
}

fn normalize(m: &mut Matrix, log_scale: &mut f64) {
    let mx = m.max_abs();
    if mx > 0.0 && mx.is_finite() {
        let inv = 1.0 / mx;
        for x in &mut m.data {
            *x *= inv;
        }
        *log_scale += mx.ln();
    }
}

/// Binary exponentiation with max-entry normalization after every product.
///
/// `k = 0` is treated as `k = 1`.
pub fn scaled_power(a: &EMatrix, k: u64) -> ScaledPower {
    scaled_matrix_power(a.matrix(), k)
}

pub(crate) fn scaled_matrix_power(a: &Matrix, k: u64) -> ScaledPower {
    let k = k.max(1);
    if k == 1 {
        return ScaledPower {
            exponent: 1,
            scaled_matrix: a.clone(),
            log_scale: 0.0,
        };
    }
    let mut base = a.clone();
    let mut base_log = 0.0;
    normalize(&mut base, &mut base_log);
    let mut acc: Option<(Matrix, f64)> = None;
    let mut e = k;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), base_log),
                Some((r, l)) => {
                    let mut p = r.multiply(&base).expect("same dimension");
                    let mut log = l + base_log;
                    normalize(&mut p, &mut log);
                    (p, log)
                }
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.multiply(&base).expect("same dimension");
        base_log *= 2.0;
        normalize(&mut base, &mut base_log);
    }
    let (scaled_matrix, log_scale) = acc.expect("k >= 1 sets at least one bit");
    ScaledPower {
        exponent: k,
        scaled_matrix,
        log_scale,
    }
}

struct Lu {
    factors: Matrix,
    perm: Vec<usize>,
    sign: f64,
    zero_pivot: Option<(usize, f64)>,
}

impl Lu {
    /// Doolittle LU with partial pivoting; records the first pivot under the
    /// singularity threshold.
    fn factor(m: &Matrix) -> Lu {
        let n = m.dim();
        let threshold = SINGULARITY_THRESHOLD * m.max_abs();
        let mut a = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut zero_pivot = None;
        for col in 0..n {
            let (piv, mag) =
                (col..n)
                    .map(|r| (r, a.get(r, col).abs()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if mag <= threshold || mag == 0.0 {
                zero_pivot.get_or_insert((col, mag));
                continue;
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
                sign = -sign;
            }
            let p = a.get(col, col);
            for r in col + 1..n {
                let f = a.get(r, col) / p;
                a.set(r, col, f);
                if f != 0.0 {
                    for j in col + 1..n {
                        let v = a.get(r, j) - f * a.get(col, j);
                        a.set(r, j, v);
                    }
                }
            }
        }
        Lu {
            factors: a,
            perm,
            sign,
            zero_pivot,
        }
    }

    fn solve_into(&self, rhs: &[f64], out: &mut [f64]) {
        let n = self.factors.dim();
        for i in 0..n {
            let mut s = rhs[self.perm[i]];
            for j in 0..i {
                s -= self.factors.get(i, j) * out[j];
            }
            out[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = out[i];
            for j in i + 1..n {
                s -= self.factors.get(i, j) * out[j];
            }
            out[i] = s / self.factors.get(i, i);
        }
    }
}

/// Inverse of a nonsingular matrix.
pub fn invert_matrix(m: &Matrix) -> Result<Matrix> {
    let n = m.dim();
    let lu = Lu::factor(m);
    if let Some((pivot, magnitude)) = lu.zero_pivot {
        return Err(Error::SingularMatrix { pivot, magnitude });
    }
    let mut inv = Matrix::zeros(n);
    let mut e = vec![0.0; n];
    let mut x = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        lu.solve_into(&e, &mut x);
        for i in 0..n {
            inv.set(i, j, x[i]);
        }
    }
    Ok(inv)
}

/// Inverse of a nonsingular e-matrix; its trivial eigenvalue is `1 / lambda_A`.
pub fn invert(a: &EMatrix) -> Result<EMatrix> {
    Ok(EMatrix::from_closure(invert_matrix(a.matrix())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum_2_m1_0() -> EMatrix {
        EMatrix::from_rows(&[[1.0, 0.0, 1.0], [2.0, -1.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
    }

    fn laplacian42() -> EMatrix {
        EMatrix::from_rows(&[
            [3.0, -1.0, -1.0, -1.0],
            [-1.0, 2.0, 0.0, -1.0],
            [-1.0, 0.0, 1.0, 0.0],
            [-1.0, -1.0, 0.0, 2.0],
        ])
        .unwrap()
    }

    #[test]
    fn validates_constant_row_sums() {
        assert_eq!(spectrum_2_m1_0().trivial_eigenvalue(), 2.0);
        let z = EMatrix::new(Matrix::zeros(5)).unwrap();
        assert_eq!(z.trivial_eigenvalue(), 0.0);
    }

    #[test]
    fn rejects_non_constant_row_sums() {
        let b = Matrix::from_rows(&[[1.0, 2.0, 1.0], [1.0, 1.0, 1.0], [2.0, 1.0, 1.0]]).unwrap();
        match EMatrix::new(b) {
            Err(Error::NotConstantRowSum { row, deviation, .. }) => {
                // sums 4, 3, 4: mean 11/3, worst is the middle row
                assert_eq!(row, 1);
                assert!((deviation - 2.0 / 3.0).abs() < 1e-12);
            }
            other => panic!("expected NotConstantRowSum, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Matrix::new(0, vec![]).is_err());
        assert!(Matrix::new(2, vec![1.0; 3]).is_err());
        assert!(Matrix::new(1, vec![f64::NAN]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(validate_ematrix(Matrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn multiply_examples() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [-3.0, -1.0, -2.0], [1.0, 1.0, 1.0]]).unwrap();
        let b = Matrix::from_rows(&[[1.0, 2.0, 1.0], [1.0, 1.0, 1.0], [2.0, 1.0, 1.0]]).unwrap();
        let ab = multiply(&a, &b).unwrap();
        assert_eq!(ab.row(0), &[9.0, 7.0, 6.0]);
        assert_eq!(ab.row(1), &[-8.0, -9.0, -6.0]);
        assert_eq!(ab.row(2), &[4.0, 4.0, 3.0]);
        assert_eq!(multiply(&a, &Matrix::identity(3)).unwrap(), a);
        let j = Matrix::ones(4);
        assert_eq!(multiply(&j, &j).unwrap(), j.scale(4.0));
        assert!(matches!(
            multiply(&a, &Matrix::identity(2)),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn product_of_ematrices_keeps_eigenvalue_product() {
        let a = spectrum_2_m1_0();
        let b = laplacian42().add_rank_one_shift(0.5);
        let a4 = EMatrix::from_rows(&[
            [1.0, 0.0, 1.0, 0.0],
            [2.0, -1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ])
        .unwrap();
        let p = a4.multiply(&b).unwrap();
        assert!(
            (p.trivial_eigenvalue() - a4.trivial_eigenvalue() * b.trivial_eigenvalue()).abs()
                < 1e-12
        );
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq.trivial_eigenvalue(), 4.0);
    }

    #[test]
    fn scaled_power_reconstructs_known_powers() {
        let a = spectrum_2_m1_0();
        let one = scaled_power(&a, 1);
        assert_eq!(one.scaled_matrix, *a.matrix());
        assert_eq!(one.log_scale, 0.0);

        let a3 = scaled_power(&a, 3).reconstruct();
        for (x, y) in a3.row(1).iter().zip([4.0, 0.0, 4.0]) {
            assert!((x - y).abs() < 1e-9);
        }
        let a10 = scaled_power(&a, 10).reconstruct();
        for (x, y) in a10.row(0).iter().zip([341.0, 171.0, 512.0]) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
        let sp = scaled_power(&a, 10);
        assert!((sp.scaled_matrix.max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_power_survives_huge_exponents() {
        let a = EMatrix::constant(3, 10.0);
        let sp = scaled_power(&a, 1 << 20);
        assert!(sp.scaled_matrix.entries().iter().all(|x| x.is_finite()));
        // (10 J)^k = 10^k 3^(k-1) J
        let k = (1u64 << 20) as f64;
        let expected = k * 10f64.ln() + (k - 1.0) * 3f64.ln();
        assert!((sp.log_scale - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn scaled_power_of_nilpotent_goes_to_zero() {
        let m = EMatrix::from_rows(&[[1.0, -1.0], [1.0, -1.0]]).unwrap();
        let sp = scaled_power(&m, 5);
        assert_eq!(sp.scaled_matrix.max_abs(), 0.0);
    }

    #[test]
    fn invert_examples() {
        let lj = laplacian42().add_rank_one_shift(1.0);
        assert_eq!(lj.matrix().row(0), &[4.0, 0.0, 0.0, 0.0]);
        let m = invert(&lj).unwrap();
        for (x, y) in m
            .matrix()
            .row(1)
            .iter()
            .zip([0.0, 5.0 / 12.0, -0.25, 1.0 / 12.0])
        {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((m.trivial_eigenvalue() - 0.25).abs() < 1e-12);

        let id = EMatrix::identity(4);
        assert_eq!(invert(&id).unwrap(), id);

        assert!(matches!(
            invert(&laplacian42()),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn diagonal_shift_example() {
        let s = add_diagonal_shift(&laplacian42(), 0.1);
        assert_eq!(s.matrix().row(0), &[3.1, -1.0, -1.0, -1.0]);
        assert!((s.trivial_eigenvalue() - 0.1).abs() < 1e-15);
        assert_eq!(
            add_diagonal_shift(&spectrum_2_m1_0(), 0.0),
            spectrum_2_m1_0()
        );
        assert_eq!(
            add_rank_one_shift(&spectrum_2_m1_0(), 0.0),
            spectrum_2_m1_0()
        );
    }

    #[test]
    fn induced_norms() {
        assert_eq!(induced_norm(&Matrix::identity(3), PNorm::One), 1.0);
        assert_eq!(induced_norm(&Matrix::ones(4), PNorm::Infinity), 4.0);
        let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [-3.0, -1.0, -2.0], [1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(induced_norm(&a, PNorm::One), 6.0);
        assert_eq!(induced_norm(&a, PNorm::Infinity), 6.0);
    }

    #[test]
    fn determinant_via_lu() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        assert!((a.determinant() - 5.0).abs() < 1e-12);
        assert_eq!(laplacian42().matrix().determinant(), 0.0);
        let p = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((p.determinant() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn parses_text_format() {
        let m = Matrix::parse("# example\n3\n1 0 1\n2 -1 1 # trailing\n\n0 1 1\n").unwrap();
        assert_eq!(m, *spectrum_2_m1_0().matrix());
        let m2 = Matrix::parse("1 2\n3 4").unwrap();
        assert_eq!(m2.row(1), &[3.0, 4.0]);
        let single = Matrix::parse("7").unwrap();
        assert_eq!(single.get(0, 0), 7.0);
        assert_eq!(Matrix::parse(&m.to_text()).unwrap(), m);

        assert!(matches!(
            Matrix::parse("1 2\n3"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Matrix::parse("2\n1 x\n3 4"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Matrix::parse("3\n1 2\n3 4"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Matrix::parse("# nothing\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Matrix::parse("2.5\n1 2\n3 4"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn pnorm_from_str() {
        assert_eq!("1".parse::<PNorm>().unwrap(), PNorm::One);
        assert_eq!("INF".parse::<PNorm>().unwrap(), PNorm::Infinity);
        assert!("2".parse::<PNorm>().is_err());
    }
}
