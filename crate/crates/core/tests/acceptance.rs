//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary so the lines are always shown.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ergocoef::bounds::{
    doubling_bounds, estimate_largest, estimate_smallest, largest_bound, smallest_bound_nonsingular,
};
use ergocoef::fixtures::Fixtures;
use ergocoef::graph::{
    connectivity_lower_bound_shift, connectivity_lower_bound_sup_default, is_connected, laplacian,
    tau1_laplacian, tau_inf_laplacian, Graph,
};
use ergocoef::matrix::invert;
use ergocoef::spectrum::{nontrivial_eigenvalues, spectrum, spectrum_with, SpectrumMethod};
use ergocoef::{tau, tau_1, tau_inf, verify, EMatrix, Matrix, PNorm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_e3a7;

struct Outcome {
    passed: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            info: Vec::new(),
        }
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Entries uniform in [-5, 5], then each row shifted evenly so that every
/// row sums to the mean of the original row sums.
fn random_ematrix(rng: &mut ChaCha8Rng, n: usize) -> EMatrix {
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect())
        .collect();
    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let target = sums.iter().sum::<f64>() / n as f64;
    for (row, s) in rows.iter_mut().zip(&sums) {
        let delta = (target - s) / n as f64;
        for x in row.iter_mut() {
            *x += delta;
        }
    }
    EMatrix::from_rows(&rows).expect("rows share a sum")
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    Matrix::new(n, data).unwrap()
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-5.0..=5.0);
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    // Random spanning tree plus extra random edges.
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let density = rng.gen_range(0.0..0.6);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn nontrivial_moduli(a: &EMatrix) -> Vec<f64> {
    let mut m: Vec<f64> = nontrivial_eigenvalues(a)
        .unwrap()
        .iter()
        .map(|z| z.norm())
        .collect();
    m.sort_by(f64::total_cmp);
    m
}

/// The largest modulus exceeds the next-lower distinct modulus (0 if none)
/// by at least 5%.
fn top_separated(ascending: &[f64]) -> bool {
    let top = *ascending.last().unwrap();
    let next = ascending
        .iter()
        .rev()
        .find(|&&m| m < top * (1.0 - 1e-6))
        .copied()
        .unwrap_or(0.0);
    top >= 1.05 * next
}

/// The smallest modulus lies at least 5% below the next-higher distinct one
/// (so its reciprocal is separated by 5% in the inverse).
fn bottom_separated(ascending: &[f64]) -> bool {
    let low = ascending[0];
    match ascending.iter().find(|&&m| m > low * (1.0 + 1e-6)) {
        Some(&next) => 1.0 / low >= 1.05 / next,
        None => true,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = verify::run(&Fixtures::worked());
    let elapsed = start.elapsed();
    let mismatches: Vec<String> = out
        .mismatches()
        .map(|c| format!("{} / {}", c.group, c.quantity))
        .collect();
    let mut o = Outcome::new(
        mismatches.is_empty() && out.groups().len() >= 12 && elapsed < Duration::from_secs(1),
        format!(
            "{} checks in {} groups, {} mismatches, {:.3}s",
            out.checks.len(),
            out.groups().len(),
            mismatches.len(),
            elapsed.as_secs_f64()
        ),
    );
    o.info = mismatches;

    let mut perturbed = Fixtures::worked();
    perturbed.certified.set(0, 0, 6.0);
    if verify::run(&perturbed).passed() {
        o.passed = false;
        o.info.push("perturbed fixture was not detected".into());
    }
    o
}

fn criteria_2_and_3() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst_dominance = f64::INFINITY;
    let mut dominance_failures = Vec::new();
    let mut worst_step = f64::NEG_INFINITY;
    let mut monotone_failures = Vec::new();
    for trial in 0..500 {
        let n = r.gen_range(2..=10);
        let a = random_ematrix(&mut r, n);
        let oracle = *nontrivial_moduli(&a).last().unwrap();
        for p in PNorm::ALL {
            for k in [1u64, 2, 3, 4, 8] {
                let b = largest_bound(&a, p, k);
                worst_dominance = worst_dominance.min(b - oracle);
                if b < oracle - 1e-7 {
                    dominance_failures
                        .push(format!("trial {trial} n={n} p={p} k={k}: {b} < {oracle}"));
                }
            }
            let seq = doubling_bounds(&a, p, 8).bounds();
            for w in seq.windows(2) {
                worst_step = worst_step.max(w[1] - w[0]);
                if w[1] > w[0] + 1e-12 {
                    monotone_failures
                        .push(format!("trial {trial} n={n} p={p}: {} -> {}", w[0], w[1]));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let mut c2 = Outcome::new(
        dominance_failures.is_empty() && elapsed < Duration::from_secs(30),
        format!(
            "500 matrices x 5 k x 2 p, min(bound - oracle) = {worst_dominance:.3e}, {} failures, {:.2}s",
            dominance_failures.len(),
            elapsed.as_secs_f64()
        ),
    );
    c2.info = dominance_failures.into_iter().take(5).collect();
    let mut c3 = Outcome::new(
        monotone_failures.is_empty(),
        format!(
            "500 matrices x 2 p to level 8, max step increase = {worst_step:.3e}, {} failures",
            monotone_failures.len()
        ),
    );
    c3.info = monotone_failures.into_iter().take(5).collect();
    (c2, c3)
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut accepted = 0;
    let mut attempts = 0;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    while accepted < 100 && attempts < 10_000 {
        attempts += 1;
        let n = r.gen_range(2..=10);
        let a = random_ematrix(&mut r, n);
        let moduli = nontrivial_moduli(&a);
        if !top_separated(&moduli) {
            continue;
        }
        accepted += 1;
        let oracle = *moduli.last().unwrap();
        for p in PNorm::ALL {
            let est = estimate_largest(&a, p, 1e-4, 14).unwrap();
            let rel = (est.estimate - oracle).abs() / oracle;
            worst = worst.max(rel);
            if rel > 0.01 {
                failures.push(format!(
                    "n={n} p={p}: estimate {} vs oracle {oracle}",
                    est.estimate
                ));
            }
        }
    }
    let mut o = Outcome::new(
        accepted == 100 && failures.is_empty(),
        format!(
            "{accepted} separated matrices ({attempts} drawn), worst relative error {worst:.3e}, {} failures",
            failures.len()
        ),
    );
    o.info = failures.into_iter().take(5).collect();
    o
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut accepted = 0;
    let mut separated = 0;
    let mut worst_bound = f64::INFINITY;
    let mut worst_estimate = 0.0f64;
    let mut failures = Vec::new();
    while accepted < 200 {
        let n = r.gen_range(2..=10);
        let a = random_ematrix(&mut r, n);
        if invert(&a).is_err() {
            continue;
        }
        accepted += 1;
        let moduli = nontrivial_moduli(&a);
        let oracle = moduli[0];
        for p in PNorm::ALL {
            for k in [1u64, 2, 4] {
                let b = smallest_bound_nonsingular(&a, p, k).unwrap();
                worst_bound = worst_bound.min(oracle - b);
                if b > oracle + 1e-7 {
                    failures.push(format!("n={n} p={p} k={k}: bound {b} > oracle {oracle}"));
                }
            }
        }
        if bottom_separated(&moduli) {
            separated += 1;
            for p in PNorm::ALL {
                let est = estimate_smallest(&a, p, 1e-4, 14, None).unwrap();
                let rel = (est.estimate - oracle).abs() / oracle;
                worst_estimate = worst_estimate.max(rel);
                if rel > 0.01 {
                    failures.push(format!(
                        "n={n} p={p}: estimate {} vs oracle {oracle}",
                        est.estimate
                    ));
                }
            }
        }
    }
    let mut o = Outcome::new(
        failures.is_empty() && separated > 0,
        format!(
            "200 matrices, min(oracle - bound) = {worst_bound:.3e}; {separated} separated, worst estimate error {worst_estimate:.3e}; {} failures",
            failures.len()
        ),
    );
    o.info = failures.into_iter().take(5).collect();
    o
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut failures = Vec::new();
    for trial in 0..300 {
        let n = r.gen_range(2..=12);
        let density = r.gen_range(0.0..=1.0);
        let g = random_graph(&mut r, n, density);
        let l = laplacian(&g);
        let (t1, ti) = (tau_1(l.matrix()), tau_inf(l.matrix()));
        if tau1_laplacian(&g) as f64 != t1 || tau_inf_laplacian(&g) as f64 != ti || t1 > ti {
            failures.push(format!(
                "trial {trial} n={n}: closed ({}, {}) explicit ({t1}, {ti})",
                tau1_laplacian(&g),
                tau_inf_laplacian(&g)
            ));
        }
    }
    let mut connected = 0;
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e);
            let g = Graph::new(n, edges).unwrap();
            if !is_connected(&g) {
                continue;
            }
            connected += 1;
            let l = laplacian(&g);
            if tau_1(l.matrix()) != tau_inf(l.matrix()) {
                failures.push(format!("n={n} mask={mask:b}: tau_1 != tau_inf"));
            }
        }
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "300 random graphs exact; {connected} connected labelled graphs with n <= 5 have tau_1 = tau_inf; {} failures",
            failures.len()
        ),
    );
    o.info = failures.into_iter().take(5).collect();
    o
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for trial in 0..100 {
        let n = r.gen_range(2..=12);
        let g = random_connected_graph(&mut r, n);
        let lambda2 = nontrivial_moduli(&laplacian(&g))[0];
        for p in PNorm::ALL {
            for k in [1u64, 2, 3] {
                let shift = connectivity_lower_bound_shift(&g, p, k, 1.0)
                    .unwrap()
                    .lower_bound;
                let sup = connectivity_lower_bound_sup_default(&g, p, k)
                    .unwrap()
                    .lower_bound;
                worst = worst.min(lambda2 - shift.max(sup));
                if shift > lambda2 + 1e-7 || sup > lambda2 + 1e-7 {
                    failures.push(format!(
                        "trial {trial} n={n} p={p} k={k}: shift {shift}, sup {sup}, lambda_2 {lambda2}"
                    ));
                }
            }
        }
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "100 connected graphs x 2 p x k in {{1,2,3}}, min(lambda_2 - bound) = {worst:.3e}, {} failures",
            failures.len()
        ),
    );
    o.info = failures.into_iter().take(5).collect();

    let fx = Fixtures::worked();
    for p in PNorm::ALL {
        let shift = connectivity_lower_bound_shift(&fx.four_vertex, p, 1, 1.0).unwrap();
        let sup = connectivity_lower_bound_sup_default(&fx.four_vertex, p, 1).unwrap();
        o.info.push(format!(
            "informational, four-vertex fixture p={p}: sup {:.6} (alpha {:.4}) vs rank-one {:.6} (alpha 1): sup {} rank-one",
            sup.lower_bound,
            sup.alpha_used,
            shift.lower_bound,
            if sup.lower_bound >= shift.lower_bound - 1e-12 { ">=" } else { "<" }
        ));
    }
    o
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut failures = Vec::new();
    let le = |lhs: f64, rhs: f64| lhs <= rhs + 1e-9 * rhs.abs().max(1.0);
    for trial in 0..200 {
        let n = r.gen_range(2..=10);
        let a = random_ematrix(&mut r, n);
        let b = random_ematrix(&mut r, n);
        let c: f64 = r.gen_range(-3.0..=3.0);
        for p in PNorm::ALL {
            let (ta, tb) = (tau(a.matrix(), p), tau(b.matrix(), p));
            let scaled = tau(a.scale(c).matrix(), p);
            if (scaled - c.abs() * ta).abs() > 1e-9 * (c.abs() * ta).max(1.0) {
                failures.push(format!(
                    "trial {trial} p={p}: homogeneity {scaled} vs {}",
                    c.abs() * ta
                ));
            }
            let sum = tau(a.add(&b).unwrap().matrix(), p);
            if !le(sum, ta + tb) {
                failures.push(format!("trial {trial} p={p}: triangle {sum} > {}", ta + tb));
            }
            let prod = tau(a.multiply(&b).unwrap().matrix(), p);
            if !le(prod, ta * tb) {
                failures.push(format!(
                    "trial {trial} p={p}: submultiplicativity {prod} > {}",
                    ta * tb
                ));
            }
        }
    }
    let fx = Fixtures::worked();
    let ab = fx.product_left.multiply(&fx.product_right).unwrap();
    let violation = tau_1(&ab) == 22.5
        && tau_inf(&ab) == 17.0
        && tau_1(&fx.product_left) * tau_1(&fx.product_right) == 6.0
        && tau_inf(&fx.product_left) * tau_inf(&fx.product_right) == 5.0;
    if !violation {
        failures.push("non-e-matrix product example not reproduced".into());
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "200 pairs x 2 p, homogeneity/triangle/submultiplicativity; non-e-matrix violation 22.5 > 6, 17 > 5 {}; {} failures",
            if violation { "reproduced" } else { "NOT reproduced" },
            failures.len()
        ),
    );
    o.info = failures.into_iter().take(5).collect();
    o
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut failures = Vec::new();
    let (mut worst_trace, mut worst_det, mut worst_sym) = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..100 {
        let n = r.gen_range(2..=10);
        let m = random_matrix(&mut r, n);
        let s = spectrum(&m).unwrap();
        let trace = m.trace();
        let det = m.determinant();
        let e_trace = (s.sum().re - trace).abs() / trace.abs().max(1.0);
        let e_det = (s.product().re - det).abs() / det.abs().max(1.0);
        worst_trace = worst_trace.max(e_trace);
        worst_det = worst_det.max(e_det);
        if e_trace > 1e-6 || e_det > 1e-6 {
            failures.push(format!(
                "trial {trial} n={n}: trace err {e_trace:.2e}, det err {e_det:.2e}"
            ));
        }

        let sym = random_symmetric(&mut r, n);
        let mut jac: Vec<f64> = spectrum_with(&sym, SpectrumMethod::JacobiSymmetric)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .collect();
        let mut gen: Vec<f64> = spectrum_with(&sym, SpectrumMethod::CharPolyRoots)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .collect();
        jac.sort_by(f64::total_cmp);
        gen.sort_by(f64::total_cmp);
        for (x, y) in jac.iter().zip(&gen) {
            let err = (x - y).abs() / x.abs().max(1.0);
            worst_sym = worst_sym.max(err);
            if err > 1e-6 {
                failures.push(format!("trial {trial} n={n}: jacobi {x} vs char-poly {y}"));
            }
        }
    }
    let fx = Fixtures::worked();
    let mut worst_residual = 0.0f64;
    for m in [
        &fx.defective,
        &fx.circulant,
        &fx.three_by_three,
        &fx.permuted,
        &fx.certified,
        &fx.product_left,
        &fx.product_right,
        &fx.seven_vertex_laplacian,
        &fx.four_vertex_laplacian,
        &fx.six_vertex_laplacian,
        &fx.disconnected_laplacian,
    ] {
        let res = spectrum_with(m, SpectrumMethod::CharPolyRoots)
            .unwrap()
            .max_residual;
        worst_residual = worst_residual.max(res);
    }
    if worst_residual >= 1e-8 {
        failures.push(format!("fixture root residual {worst_residual:.2e}"));
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "100 general + 100 symmetric matrices: trace err {worst_trace:.1e}, det err {worst_det:.1e}, jacobi/char-poly err {worst_sym:.1e}; fixture residual {worst_residual:.1e}"
        ),
    );
    o.info = failures.into_iter().take(5).collect();
    o
}

fn main() -> ExitCode {
    let (c2, c3) = criteria_2_and_3();
    let results = [
        ("1", "worked-example regression", criterion_1()),
        ("2", "bound dominance", c2),
        ("3", "doubling monotonicity", c3),
        ("4", "doubling convergence", criterion_4()),
        ("5", "inverse bounds", criterion_5()),
        ("6", "Laplacian closed forms", criterion_6()),
        ("7", "connectivity bound validity", criterion_7()),
        ("8", "semi-norm axioms", criterion_8()),
        ("9", "oracle self-consistency", criterion_9()),
    ];
    let mut all = true;
    for (id, name, o) in &results {
        println!(
            "{} criterion {id} ({name}): {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        for line in &o.info {
            println!("     {line}");
        }
        all &= o.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
