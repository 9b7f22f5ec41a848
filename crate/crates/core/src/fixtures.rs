//! Worked example matrices and graphs used by the regression harness and the
//! tests. Stored as plain matrices so a harness self-test can perturb them.

use crate::graph::Graph;
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct Fixtures {
    /// Pair of non-e-matrices whose product breaks submultiplicativity.
    pub product_left: Matrix,
    pub product_right: Matrix,
    /// 2x2 e-matrix with a defective double trivial eigenvalue.
    pub defective: Matrix,
    /// 4x4 circulant with a non-monotone `tau_inf(A^k)^(1/k)`.
    pub circulant: Matrix,
    /// 3x3 e-matrix with spectrum {2, -1, 0}.
    pub three_by_three: Matrix,
    /// Entry permutation of `three_by_three` with `tau_inf(B^2) = 4`.
    pub permuted: Matrix,
    /// 4x4 e-matrix with trivial eigenvalue 9 certified simple.
    pub certified: Matrix,
    pub seven_vertex: Graph,
    pub seven_vertex_laplacian: Matrix,
    pub four_vertex: Graph,
    pub four_vertex_laplacian: Matrix,
    pub six_vertex: Graph,
    pub six_vertex_laplacian: Matrix,
    /// Triangle plus an isolated vertex.
    pub disconnected: Graph,
    pub disconnected_laplacian: Matrix,
}

fn m<const N: usize>(rows: [[f64; N]; N]) -> Matrix {
    Matrix::from_rows(&rows).expect("fixture is square and finite")
}

impl Fixtures {
    pub fn worked() -> Fixtures {
        Fixtures {
            product_left: m([[1.0, 2.0, 3.0], [-3.0, -1.0, -2.0], [1.0, 1.0, 1.0]]),
            product_right: m([[1.0, 2.0, 1.0], [1.0, 1.0, 1.0], [2.0, 1.0, 1.0]]),
            defective: m([[1.0, 1.0], [-1.0, 3.0]]),
            circulant: m([
                [4.0, 1.0, 2.0, 3.0],
                [3.0, 4.0, 1.0, 2.0],
                [2.0, 3.0, 4.0, 1.0],
                [1.0, 2.0, 3.0, 4.0],
            ]),
            three_by_three: m([[1.0, 0.0, 1.0], [2.0, -1.0, 1.0], [0.0, 1.0, 1.0]]),
            permuted: m([[1.0, 1.0, 0.0], [2.0, -1.0, 1.0], [0.0, 1.0, 1.0]]),
            certified: m([
                [5.0, 3.0, -1.0, 2.0],
                [3.0, 5.0, 3.0, -2.0],
                [3.0, 3.0, 3.0, 0.0],
                [-2.0, 5.0, 2.0, 4.0],
            ]),
            seven_vertex: Graph::from_one_based(
                7,
                [
                    (1, 2),
                    (1, 3),
                    (1, 5),
                    (2, 4),
                    (2, 7),
                    (3, 4),
                    (3, 6),
                    (3, 7),
                    (4, 5),
                    (4, 6),
                    (5, 6),
                    (6, 7),
                ],
            )
            .expect("simple graph"),
            seven_vertex_laplacian: m([
                [3.0, -1.0, -1.0, 0.0, -1.0, 0.0, 0.0],
                [-1.0, 3.0, 0.0, -1.0, 0.0, 0.0, -1.0],
                [-1.0, 0.0, 4.0, -1.0, 0.0, -1.0, -1.0],
                [0.0, -1.0, -1.0, 4.0, -1.0, -1.0, 0.0],
                [-1.0, 0.0, 0.0, -1.0, 3.0, -1.0, 0.0],
                [0.0, 0.0, -1.0, -1.0, -1.0, 4.0, -1.0],
                [0.0, -1.0, -1.0, 0.0, 0.0, -1.0, 3.0],
            ]),
            four_vertex: Graph::from_one_based(4, [(1, 2), (1, 3), (1, 4), (2, 4)])
                .expect("simple graph"),
            four_vertex_laplacian: m([
                [3.0, -1.0, -1.0, -1.0],
                [-1.0, 2.0, 0.0, -1.0],
                [-1.0, 0.0, 1.0, 0.0],
                [-1.0, -1.0, 0.0, 2.0],
            ]),
            six_vertex: Graph::from_one_based(6, [(1, 2), (1, 3), (1, 4), (4, 5), (5, 6)])
                .expect("simple graph"),
            six_vertex_laplacian: m([
                [3.0, -1.0, -1.0, -1.0, 0.0, 0.0],
                [-1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
                [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0, 2.0, -1.0, 0.0],
                [0.0, 0.0, 0.0, -1.0, 2.0, -1.0],
                [0.0, 0.0, 0.0, 0.0, -1.0, 1.0],
            ]),
            disconnected: Graph::new(4, [(0, 1), (0, 2), (1, 2)]).expect("simple graph"),
            disconnected_laplacian: m([
                [2.0, -1.0, -1.0, 0.0],
                [-1.0, 2.0, -1.0, 0.0],
                [-1.0, -1.0, 2.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]),
        }
    }
}

impl Default for Fixtures {
    fn default() -> Self {
        Fixtures::worked()
    }
}
