//! Regression harness over the worked examples.
//!
//! Values quoted to two decimals are compared at ±0.01; integers and exact
//! rationals at 1e-9.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{
    all_k_bounds, constancy_probe, doubling_bounds, simplicity_check, smallest_bound_singular,
};
use crate::coefficients::{tau, tau_1, tau_inf};
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::graph::{
    connectivity_lower_bound_shift, connectivity_lower_bound_sup, das_bound, is_connected,
    laplacian, tau1_laplacian, tau_inf_laplacian, Graph,
};
use crate::matrix::{invert, EMatrix, Matrix, PNorm};
use crate::spectrum::spectrum;

pub const EXACT_TOLERANCE: f64 = 1e-9;
pub const TWO_DECIMAL_TOLERANCE: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub quantity: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.computed
            .is_some_and(|c| (c - self.expected).abs() <= self.tolerance)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }

    /// Distinct example groups, in order of first appearance.
    pub fn groups(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for c in &self.checks {
            if !out.contains(&c.group) {
                out.push(c.group);
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:<44} {:>12} {:>14}  status",
            "example", "quantity", "expected", "computed"
        );
        for c in &self.checks {
            let computed = match (c.computed, &c.error) {
                (Some(v), _) => format!("{v:.4}"),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "-".into(),
            };
            let _ = writeln!(
                out,
                "{:<24} {:<44} {:>12.4} {:>14}  {}",
                c.group,
                c.quantity,
                c.expected,
                computed,
                if c.passed() { "ok" } else { "MISMATCH" }
            );
        }
        let total = self.checks.len();
        let bad = self.mismatches().count();
        let _ = writeln!(
            out,
            "{} checks in {} groups, {} mismatches",
            total,
            self.groups().len(),
            bad
        );
        out
    }
}

struct Recorder {
    checks: Vec<Check>,
    group: &'static str,
}

impl Recorder {
    fn push(&mut self, quantity: String, expected: f64, tolerance: f64, value: Result<f64>) {
        let (computed, error) = match value {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        self.checks.push(Check {
            group: self.group,
            quantity,
            expected,
            computed,
            tolerance,
            error,
        });
    }

    fn exact(&mut self, quantity: impl Into<String>, expected: f64, value: Result<f64>) {
        self.push(quantity.into(), expected, EXACT_TOLERANCE, value);
    }

    fn approx(&mut self, quantity: impl Into<String>, expected: f64, value: Result<f64>) {
        self.push(quantity.into(), expected, TWO_DECIMAL_TOLERANCE, value);
    }

    fn row(&mut self, name: &str, m: Result<Matrix>, row: usize, expected: &[f64], approx: bool) {
        for (j, &want) in expected.iter().enumerate() {
            let got = m.as_ref().map(|m| m.get(row, j)).map_err(Error::clone);
            let label = format!("{name}[{},{}]", row + 1, j + 1);
            if approx {
                self.approx(label, want, got);
            } else {
                self.exact(label, want, got);
            }
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn e(m: &Matrix) -> Result<EMatrix> {
    EMatrix::new(m.clone())
}

fn laplacian_matches(g: &Graph, m: &Matrix) -> Result<f64> {
    laplacian(g).matrix().max_abs_diff(m)
}

fn sorted_real_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = spectrum(m)?.eigenvalues.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn p_name(p: PNorm) -> &'static str {
    match p {
        PNorm::One => "tau_1",
        PNorm::Infinity => "tau_inf",
    }
}

/// Evaluates every worked-example value against `fixtures`.
pub fn run(fx: &Fixtures) -> VerifyOutcome {
    let mut r = Recorder {
        checks: Vec::new(),
        group: "",
    };

    r.group = "non-e-matrix product";
    {
        let ab = fx.product_left.multiply(&fx.product_right);
        r.row("AB", ab.clone(), 0, &[9.0, 7.0, 6.0], false);
        r.exact(
            "tau_1(AB)",
            22.5,
            ab.as_ref().map(tau_1).map_err(Error::clone),
        );
        r.exact(
            "tau_inf(AB)",
            17.0,
            ab.as_ref().map(tau_inf).map_err(Error::clone),
        );
        r.exact(
            "tau_1(A) tau_1(B)",
            6.0,
            Ok(tau_1(&fx.product_left) * tau_1(&fx.product_right)),
        );
        r.exact(
            "tau_inf(A) tau_inf(B)",
            5.0,
            Ok(tau_inf(&fx.product_left) * tau_inf(&fx.product_right)),
        );
        r.exact(
            "B is an e-matrix",
            0.0,
            Ok(flag(e(&fx.product_right).is_ok())),
        );
    }

    r.group = "defective 2x2";
    {
        r.exact(
            "lambda_A",
            2.0,
            e(&fx.defective).map(|a| a.trivial_eigenvalue()),
        );
        r.exact(
            "multiplicity of eigenvalue 2",
            2.0,
            spectrum(&fx.defective).map(|s| {
                s.eigenvalues
                    .iter()
                    .filter(|z| (*z - num_complex::Complex64::new(2.0, 0.0)).norm() < 1e-6)
                    .count() as f64
            }),
        );
    }

    r.group = "4x4 circulant";
    {
        let a = e(&fx.circulant);
        r.exact("tau_inf(A)", 4.0, Ok(tau_inf(&fx.circulant)));
        let seq = a
            .as_ref()
            .map(|a| all_k_bounds(a, PNorm::Infinity, 4).bounds())
            .map_err(Error::clone);
        for (k, want) in [(2, 2.83), (3, 3.17), (4, 2.83)] {
            r.approx(
                format!("tau_inf(A^{k})^(1/{k})"),
                want,
                seq.as_ref().map(|s| s[k - 1]).map_err(Error::clone),
            );
        }
        r.approx(
            "doubling bound at k=4",
            2.83,
            a.as_ref()
                .map(|a| doubling_bounds(a, PNorm::Infinity, 2).entries[2].bound)
                .map_err(Error::clone),
        );
    }

    r.group = "3x3 spectrum {2,-1,0}";
    {
        let a = e(&fx.three_by_three);
        r.exact(
            "lambda_A",
            2.0,
            a.as_ref()
                .map(|a| a.trivial_eigenvalue())
                .map_err(Error::clone),
        );
        let eig = sorted_real_eigenvalues(&fx.three_by_three);
        for (i, want) in [-1.0, 0.0, 2.0].into_iter().enumerate() {
            r.exact(
                format!("eigenvalue #{}", i + 1),
                want,
                eig.as_ref().map(|v| v[i]).map_err(Error::clone),
            );
        }
        let power = |k: u64| -> Result<Matrix> {
            a.as_ref()
                .map(|a| a.scaled_power(k).reconstruct())
                .map_err(Error::clone)
        };
        r.row("A^3", power(3), 1, &[4.0, 0.0, 4.0], false);
        r.row("A^10", power(10), 0, &[341.0, 171.0, 512.0], false);
        for p in PNorm::ALL {
            for (k, root) in [(1u64, 2.0), (3, 1.26), (10, 1.07)] {
                r.exact(
                    format!("{}(A^{k})", p_name(p)),
                    2.0,
                    power(k).map(|m| tau(&m, p)),
                );
                r.approx(
                    format!("{}(A^{k})^(1/{k})", p_name(p)),
                    root,
                    a.as_ref()
                        .map(|a| crate::bounds::largest_bound(a, p, k))
                        .map_err(Error::clone),
                );
            }
        }
    }

    r.group = "permuted 3x3";
    {
        let probe = e(&fx.three_by_three).map(|a| constancy_probe(&a, PNorm::Infinity, 10));
        r.exact(
            "tau_inf(A^k) = 2 for k = 1..10",
            1.0,
            probe.map(|p| flag(p.constant_all && (p.values[0].1 - 2.0).abs() < EXACT_TOLERANCE)),
        );
        r.exact("tau_inf(B)", 2.0, Ok(tau_inf(&fx.permuted)));
        r.exact(
            "tau_inf(B^2)",
            4.0,
            fx.permuted.multiply(&fx.permuted).map(|b2| tau_inf(&b2)),
        );
    }

    r.group = "certified simple 9";
    {
        let rep = e(&fx.certified).map(|a| simplicity_check(&a, PNorm::Infinity));
        r.exact(
            "lambda_A",
            9.0,
            rep.as_ref()
                .map(|s| s.trivial_eigenvalue)
                .map_err(Error::clone),
        );
        r.exact(
            "tau_inf(A)",
            8.0,
            rep.as_ref().map(|s| s.tau_value).map_err(Error::clone),
        );
        r.exact(
            "certified simple",
            1.0,
            rep.as_ref()
                .map(|s| flag(s.is_certified_simple))
                .map_err(Error::clone),
        );
        r.exact("gap lower bound", 1.0, rep.map(|s| s.gap_lower_bound));
    }

    r.group = "seven-vertex graph";
    {
        let l = e(&fx.seven_vertex_laplacian);
        r.exact(
            "L from graph",
            0.0,
            laplacian_matches(&fx.seven_vertex, &fx.seven_vertex_laplacian),
        );
        for p in PNorm::ALL {
            let seq = l
                .as_ref()
                .map(|l| all_k_bounds(l, p, 3))
                .map_err(Error::clone);
            for (k, raw, root) in [(1u64, 7.0, 7.0), (2, 46.0, 6.78), (3, 294.0, 6.65)] {
                r.exact(
                    format!("{}(L^{k})", p_name(p)),
                    raw,
                    seq.as_ref()
                        .map(|s| s.entries[k as usize - 1].log_tau.exp())
                        .map_err(Error::clone),
                );
                r.approx(
                    format!("{}(L^{k})^(1/{k})", p_name(p)),
                    root,
                    seq.as_ref()
                        .map(|s| s.entries[k as usize - 1].bound)
                        .map_err(Error::clone),
                );
            }
        }
        r.approx(
            "largest eigenvalue",
            6.21,
            sorted_real_eigenvalues(&fx.seven_vertex_laplacian).map(|v| v[v.len() - 1]),
        );
        r.exact(
            "tau_1 closed form",
            7.0,
            Ok(tau1_laplacian(&fx.seven_vertex) as f64),
        );
        r.exact(
            "tau_inf closed form",
            7.0,
            Ok(tau_inf_laplacian(&fx.seven_vertex) as f64),
        );
    }

    r.group = "four-vertex graph";
    {
        let l = e(&fx.four_vertex_laplacian);
        r.exact(
            "L from graph",
            0.0,
            laplacian_matches(&fx.four_vertex, &fx.four_vertex_laplacian),
        );
        let eig = sorted_real_eigenvalues(&fx.four_vertex_laplacian);
        for (i, want) in [0.0, 1.0, 3.0, 4.0].into_iter().enumerate() {
            r.exact(
                format!("eigenvalue #{}", i + 1),
                want,
                eig.as_ref().map(|v| v[i]).map_err(Error::clone),
            );
        }
        r.exact(
            "L is singular",
            1.0,
            l.as_ref()
                .map(|l| flag(matches!(invert(l), Err(Error::SingularMatrix { .. }))))
                .map_err(Error::clone),
        );
        let shifted = l
            .as_ref()
            .map(|l| l.add_rank_one_shift(1.0))
            .map_err(Error::clone);
        r.row(
            "L+J",
            shifted
                .as_ref()
                .map(|s| s.matrix().clone())
                .map_err(Error::clone),
            0,
            &[4.0, 0.0, 0.0, 0.0],
            false,
        );
        let inv = shifted.and_then(|s| invert(&s));
        r.row(
            "(L+J)^-1",
            inv.as_ref()
                .map(|m| m.matrix().clone())
                .map_err(Error::clone),
            1,
            &[0.0, 5.0 / 12.0, -0.25, 1.0 / 12.0],
            false,
        );
        r.exact(
            "tau_1(M)",
            1.0,
            inv.as_ref()
                .map(|m| tau_1(m.matrix()))
                .map_err(Error::clone),
        );
        r.exact(
            "tau_inf(M)",
            1.25,
            inv.as_ref()
                .map(|m| tau_inf(m.matrix()))
                .map_err(Error::clone),
        );
        for (p, want) in [(PNorm::One, 1.0), (PNorm::Infinity, 0.8)] {
            r.exact(
                format!("1/{}(M)", p_name(p)),
                want,
                l.as_ref()
                    .map_err(Error::clone)
                    .and_then(|l| smallest_bound_singular(l, p, 1, 1.0)),
            );
            r.exact(
                format!("graph rank-one bound ({})", p_name(p)),
                want,
                connectivity_lower_bound_shift(&fx.four_vertex, p, 1, 1.0).map(|c| c.lower_bound),
            );
        }
    }

    r.group = "four-vertex diagonal shift 0.1";
    {
        let l = e(&fx.four_vertex_laplacian);
        let shifted = l
            .as_ref()
            .map(|l| l.add_diagonal_shift(0.1))
            .map_err(Error::clone);
        r.row(
            "L+0.1I",
            shifted
                .as_ref()
                .map(|s| s.matrix().clone())
                .map_err(Error::clone),
            0,
            &[3.1, -1.0, -1.0, -1.0],
            false,
        );
        let inv = shifted.and_then(|s| invert(&s)).map(EMatrix::into_matrix);
        let displayed = [
            [2.68, 2.44, 2.44, 2.44],
            [2.44, 2.83, 2.22, 2.51],
            [2.44, 2.22, 3.13, 2.22],
            [2.44, 2.51, 2.22, 2.83],
        ];
        for (i, row) in displayed.iter().enumerate() {
            r.row("(L+0.1I)^-1", inv.clone(), i, row, true);
        }
        r.approx(
            "tau_1((L+0.1I)^-1)",
            0.91,
            inv.as_ref().map(tau_1).map_err(Error::clone),
        );
        r.approx(
            "tau_inf((L+0.1I)^-1)",
            1.13,
            inv.as_ref().map(tau_inf).map_err(Error::clone),
        );
        for (p, want) in [(PNorm::One, 1.0), (PNorm::Infinity, 0.78)] {
            r.approx(
                format!("bound ({})", p_name(p)),
                want,
                connectivity_lower_bound_sup(&fx.four_vertex, p, 1, &[0.1]).map(|c| c.lower_bound),
            );
        }
    }

    r.group = "six-vertex graph";
    {
        r.exact(
            "L from graph",
            0.0,
            laplacian_matches(&fx.six_vertex, &fx.six_vertex_laplacian),
        );
        r.exact("tau_1(L)", 5.0, Ok(tau_1(&fx.six_vertex_laplacian)));
        r.exact("tau_inf(L)", 6.0, Ok(tau_inf(&fx.six_vertex_laplacian)));
        r.exact(
            "tau_1 closed form",
            5.0,
            Ok(tau1_laplacian(&fx.six_vertex) as f64),
        );
        r.exact(
            "tau_inf closed form",
            6.0,
            Ok(tau_inf_laplacian(&fx.six_vertex) as f64),
        );
        r.approx(
            "spectral radius",
            4.21,
            sorted_real_eigenvalues(&fx.six_vertex_laplacian).map(|v| v[v.len() - 1]),
        );
    }

    r.group = "six-vertex edge bound";
    {
        r.exact(
            "edge bound",
            5.0,
            das_bound(&fx.six_vertex).map(|d| d as f64),
        );
        r.approx(
            "tau_1(L^2)^(1/2)",
            4.69,
            e(&fx.six_vertex_laplacian).map(|l| all_k_bounds(&l, PNorm::One, 2).entries[1].bound),
        );
    }

    r.group = "triangle plus isolated vertex";
    {
        r.exact(
            "L from graph",
            0.0,
            laplacian_matches(&fx.disconnected, &fx.disconnected_laplacian),
        );
        r.exact("tau_1(L)", 3.0, Ok(tau_1(&fx.disconnected_laplacian)));
        r.exact("tau_inf(L)", 4.0, Ok(tau_inf(&fx.disconnected_laplacian)));
        r.exact(
            "tau_1 closed form",
            3.0,
            Ok(tau1_laplacian(&fx.disconnected) as f64),
        );
        r.exact(
            "tau_inf closed form",
            4.0,
            Ok(tau_inf_laplacian(&fx.disconnected) as f64),
        );
        r.exact("connected", 0.0, Ok(flag(is_connected(&fx.disconnected))));
    }

    VerifyOutcome { checks: r.checks }
}
