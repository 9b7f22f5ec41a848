//! Simple undirected graphs, their Laplacians, and Laplacian spectral bounds.
//!
//! For a Laplacian `L = D - A` both coefficients have closed forms in terms
//! of degrees and common neighbourhoods, which gives upper bounds on the
//! spectral radius directly from the graph. Lower bounds on the algebraic
//! connectivity come from the inverse of `L + alpha J` or `L + alpha I`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::bounds::{all_k_bounds, largest_bound, smallest_bound_singular, BoundSequence};
use crate::error::{Error, Result};
use crate::matrix::{invert, EMatrix, Matrix, PNorm};

/// Grid scanned by [`connectivity_lower_bound_sup_default`] before refinement.
pub const DEFAULT_ALPHA_GRID: [f64; 6] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0];

const GOLDEN_SECTION_ITERATIONS: usize = 10;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 0-based edges. Rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut set = BTreeSet::new();
        let mut neighbors = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !set.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: set,
            neighbors,
        })
    }

    /// Builds a graph from 1-based edges.
    pub fn from_one_based<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let shifted = edges
            .into_iter()
            .map(|(u, v)| {
                if u == 0 || v == 0 {
                    Err(Error::InvalidGraph(
                        "vertex 0 in a 1-based edge list".into(),
                    ))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(n, shifted)
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path graph is simple")
    }

    /// Parses an edge list: `u v` per line, `#` comments, and an optional
    /// `n <count>` line declaring the vertex count (for isolated vertices).
    pub fn parse(text: &str, one_based: bool) -> Result<Graph> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_vertex: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let parse_index = |tok: &str| -> Result<usize> {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid vertex `{tok}`"),
                })
            };
            match tokens.as_slice() {
                ["n", count] => {
                    if declared.is_some() {
                        return Err(Error::Parse {
                            line,
                            message: "vertex count declared twice".into(),
                        });
                    }
                    declared = Some(parse_index(count)?);
                }
                [u, v] => {
                    let (mut u, mut v) = (parse_index(u)?, parse_index(v)?);
                    if one_based {
                        if u == 0 || v == 0 {
                            return Err(Error::Parse {
                                line,
                                message: "vertex 0 in a 1-based edge list".into(),
                            });
                        }
                        u -= 1;
                        v -= 1;
                    }
                    max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
                    edges.push((line, u, v));
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `u v` or `n <count>`, got `{content}`"),
                    })
                }
            }
        }
        let needed = max_vertex.map_or(0, |m| m + 1);
        let n = match declared {
            Some(d) if d < needed => {
                return Err(Error::Parse {
                    line: 0,
                    message: format!(
                        "declared {d} vertices but an edge uses vertex index {}",
                        needed - 1
                    ),
                })
            }
            Some(d) => d,
            None => needed,
        };
        if n == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "edge list declares no vertices".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for &(line, u, v) in &edges {
            if u == v {
                return Err(Error::Parse {
                    line,
                    message: format!("self-loop at vertex {u}"),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse {
                    line,
                    message: "duplicate edge".into(),
                });
            }
        }
        Graph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    fn common_neighbors(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.neighbors[u], &self.neighbors[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// `d_u + d_v - |N_u ∩ N_v|`.
    fn pair_weight(&self, u: usize, v: usize) -> u64 {
        (self.degree(u) + self.degree(v) - self.common_neighbors(u, v)) as u64
    }
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> EMatrix {
    let n = g.n();
    let mut m = Matrix::zeros(n);
    for v in 0..n {
        m.set(v, v, g.degree(v) as f64);
    }
    for (u, v) in g.edges() {
        m.set(u, v, -1.0);
        m.set(v, u, -1.0);
    }
    EMatrix::new(m).expect("Laplacian rows sum to zero")
}

/// Breadth-first reachability from vertex 0.
pub fn is_connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == g.n()
}

/// `tau_1(L) = max_{i<j} d_i + d_j - |N_i ∩ N_j|` (0 for a single vertex).
pub fn tau1_laplacian(g: &Graph) -> u64 {
    let n = g.n();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| g.pair_weight(i, j))
        .max()
        .unwrap_or(0)
}

/// `tau_inf(L)`: `n` when the maximum degree is at least `n / 2`, else twice
/// the maximum degree.
pub fn tau_inf_laplacian(g: &Graph) -> u64 {
    let n = g.n();
    if n < 2 {
        return 0;
    }
    let d = g.max_degree();
    if 2 * d >= n {
        n as u64
    } else {
        2 * d as u64
    }
}

/// Edge-restricted version of [`tau1_laplacian`]; an upper bound on the
/// largest Laplacian eigenvalue.
pub fn das_bound(g: &Graph) -> Result<u64> {
    g.edges()
        .map(|(u, v)| g.pair_weight(u, v))
        .max()
        .ok_or(Error::NoEdges)
}

/// Upper bounds `tau_p(L^k)^(1/k)` on the largest Laplacian eigenvalue for
/// `k = 1..=max_k`.
pub fn spectral_radius_bounds(g: &Graph, p: PNorm, max_k: u64) -> BoundSequence {
    all_k_bounds(&laplacian(g), p, max_k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConnectivityMethod {
    RankOneShift,
    DiagonalShiftSup,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub p: PNorm,
    pub method: ConnectivityMethod,
    pub k: u64,
    /// The shift used, or the maximizing one for the sup method.
    pub alpha_used: f64,
    pub lower_bound: f64,
}

fn require_connected(g: &Graph) -> Result<()> {
    if is_connected(g) {
        Ok(())
    } else {
        Err(Error::GraphDisconnected)
    }
}

/// `1 / tau_p((L + alpha J)^-k)^(1/k) <= lambda_2`.
pub fn connectivity_lower_bound_shift(
    g: &Graph,
    p: PNorm,
    k: u64,
    alpha: f64,
) -> Result<ConnectivityReport> {
    require_connected(g)?;
    let lower = smallest_bound_singular(&laplacian(g), p, k, alpha)?;
    Ok(ConnectivityReport {
        p,
        method: ConnectivityMethod::RankOneShift,
        k,
        alpha_used: alpha,
        lower_bound: lower.max(0.0),
    })
}

/// `1 / tau_p((L + alpha I)^-k)^(1/k) - alpha` for one `alpha > 0`; may be
/// negative.
pub fn diagonal_shift_bound(l: &EMatrix, p: PNorm, k: u64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "diagonal shift must be positive, got {alpha}"
        )));
    }
    let inv = invert(&l.add_diagonal_shift(alpha))?;
    let upper = largest_bound(&inv, p, k);
    if upper == 0.0 {
        return Err(Error::DegenerateCoefficient);
    }
    Ok(1.0 / upper - alpha)
}

fn best_on_grid(l: &EMatrix, p: PNorm, k: u64, grid: &[f64]) -> Result<(usize, f64)> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("alpha grid is empty".into()));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, &alpha) in grid.iter().enumerate() {
        let value = diagonal_shift_bound(l, p, k, alpha)?;
        if best.is_none_or(|(_, b)| value > b) {
            best = Some((i, value));
        }
    }
    Ok(best.expect("non-empty grid"))
}

/// Maximum of [`diagonal_shift_bound`] over the given shifts.
pub fn connectivity_lower_bound_sup(
    g: &Graph,
    p: PNorm,
    k: u64,
    alpha_grid: &[f64],
) -> Result<ConnectivityReport> {
    require_connected(g)?;
    let l = laplacian(g);
    let (i, value) = best_on_grid(&l, p, k, alpha_grid)?;
    Ok(ConnectivityReport {
        p,
        method: ConnectivityMethod::DiagonalShiftSup,
        k,
        alpha_used: alpha_grid[i],
        lower_bound: value.max(0.0),
    })
}

/// [`connectivity_lower_bound_sup`] over [`DEFAULT_ALPHA_GRID`] followed by a
/// golden-section search between the neighbours of the best grid point.
pub fn connectivity_lower_bound_sup_default(
    g: &Graph,
    p: PNorm,
    k: u64,
) -> Result<ConnectivityReport> {
    require_connected(g)?;
    let l = laplacian(g);
    let grid = DEFAULT_ALPHA_GRID;
    let (i, grid_value) = best_on_grid(&l, p, k, &grid)?;
    let lo = if i == 0 { grid[0] / 2.0 } else { grid[i - 1] };
    let hi = if i + 1 == grid.len() {
        grid[i] * 2.0
    } else {
        grid[i + 1]
    };

    let f = |alpha: f64| diagonal_shift_bound(&l, p, k, alpha);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_SECTION_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (refined_alpha, refined_value) = if fc >= fd { (c, fc) } else { (d, fd) };
    let (alpha_used, value) = if refined_value > grid_value {
        (refined_alpha, refined_value)
    } else {
        (grid[i], grid_value)
    };
    Ok(ConnectivityReport {
        p,
        method: ConnectivityMethod::DiagonalShiftSup,
        k,
        alpha_used,
        lower_bound: value.max(0.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TauComparison {
    pub tau1: u64,
    pub tau_inf: u64,
    /// `tau1 <= tau_inf`; holds for every simple graph.
    pub ordered: bool,
}

pub fn tau_comparison(g: &Graph) -> TauComparison {
    let tau1 = tau1_laplacian(g);
    let tau_inf = tau_inf_laplacian(g);
    TauComparison {
        tau1,
        tau_inf,
        ordered: tau1 <= tau_inf,
    }
}
