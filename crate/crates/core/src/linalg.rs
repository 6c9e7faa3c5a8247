//! Small dense vector/matrix helpers. Everything here works on plain
//! `&[f64]` slices; dimensions are low (mostly 2..=4) and sizes are small,
//! so no external linear-algebra crate is warranted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    debug_assert_eq!(a.len(), 3);
    debug_assert_eq!(b.len(), 3);
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Determinant of the 2x2 matrix with columns `a`, `b`.
pub fn det2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Determinant of the 3x3 matrix with columns `a`, `b`, `c`
/// (the scalar triple product).
pub fn det3(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    dot(&cross3(a, b), c)
}

/// Determinant of the 4x4 matrix with columns `a..d`, by cofactor
/// expansion along the last row.
pub fn det4(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let cols = [a, b, c, d];
    let mut det = 0.0;
    for skip in 0..4 {
        let mut minor = [[0.0f64; 3]; 3];
        let mut k = 0;
        for (j, col) in cols.iter().enumerate() {
            if j == skip {
                continue;
            }
            minor[k] = [col[0], col[1], col[2]];
            k += 1;
        }
        let m = det3(&minor[0], &minor[1], &minor[2]);
        let sign = if (skip + 3) % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * cols[skip][3] * m;
    }
    det
}

/// Solve `m x = rhs` in place by Gaussian elimination with partial
/// pivoting. `m` is row-major `n x n`. Returns `None` when the pivot
/// collapses (singular within `1e-12` of the row scale).
pub fn solve_in_place(m: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    debug_assert_eq!(m.len(), n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Dense row-major matrix. Used for affine homeomorphisms, network
/// weights, and the linear maps of the obstruction checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::EmptyInput("matrix rows".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParameter("ragged matrix rows".into()));
        }
        Matrix::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (r, out) in y.iter_mut().enumerate() {
            *out = dot(self.row(r), x);
        }
    }

    /// `x = M^T y`.
    pub fn matvec_transpose_into(&self, y: &[f64], x: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        x.fill(0.0);
        for (r, &yr) in y.iter().enumerate() {
            if yr == 0.0 {
                continue;
            }
            let row = self.row(r);
            for (xc, &m) in x.iter_mut().zip(row) {
                *xc += m * yr;
            }
        }
    }

    /// Determinant via Gaussian elimination; square matrices only.
    pub fn determinant(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut m: Vec<Vec<f64>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .unwrap();
            if m[pivot][col] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                m.swap(col, pivot);
                det = -det;
            }
            det *= m[col][col];
            for row in (col + 1)..n {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    let v = f * m[col][k];
                    m[row][k] -= v;
                }
            }
        }
        Ok(det)
    }
}

/// Uniformly random rotation of R^3 from a unit quaternion.
pub fn random_rotation3(rng: &mut impl rand::Rng) -> Matrix {
    // Marsaglia: normalize a 4-vector of gaussians via Box-Muller-free
    // rejection from the unit ball.
    let q = loop {
        let q: [f64; 4] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n2: f64 = q.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            break [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
        }
    };
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    Matrix::new(
        3,
        3,
        vec![
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    )
    .expect("rotation entries are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det4_matches_identity_and_swap() {
        let e: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        assert_eq!(det4(&e[0], &e[1], &e[2], &e[3]), 1.0);
        assert_eq!(det4(&e[1], &e[0], &e[2], &e[3]), -1.0);
        // scaling one column scales the determinant
        let c0: Vec<f64> = e[0].iter().map(|x| 3.0 * x).collect();
        assert_eq!(det4(&c0, &e[1], &e[2], &e[3]), 3.0);
    }

    #[test]
    fn determinant_matches_cofactor_forms() {
        let m = Matrix::from_rows(&[
            vec![2.0, 1.0, 0.5],
            vec![-1.0, 3.0, 2.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        let cols: Vec<Vec<f64>> = (0..3).map(|c| (0..3).map(|r| m.get(r, c)).collect()).collect();
        let expect = det3(&cols[0], &cols[1], &cols[2]);
        assert!((m.determinant().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let mut m = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ];
        let x_true = [1.0, -2.0, 0.5];
        let mut rhs: Vec<f64> = (0..3).map(|r| dot(&m[r], &x_true)).collect();
        let x = solve_in_place(&mut m, &mut rhs).unwrap();
        for (a, b) in x.iter().zip(x_true.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn random_rotation_is_orthogonal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r = random_rotation3(&mut rng);
        assert!((r.determinant().unwrap() - 1.0).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r.get(i, k) * r.get(j, k)).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-12);
            }
        }
    }
}
