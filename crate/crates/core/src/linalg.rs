//! Small dense complex linear algebra for single-qubit operators.

use std::ops::Mul;

use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A 2×2 complex matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn from_columns(c0: [C64; 2], c1: [C64; 2]) -> Self {
        Mat2([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    pub fn column(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Rotation about the z axis: `diag(1, e^{i angle})` (up to global phase).
    pub fn z_rotation(angle: f64) -> Self {
        Mat2([[ONE, ZERO], [ZERO, C64::from_polar(1.0, angle)]])
    }

    /// Max-abs distance of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        max_abs_diff(&p, &Mat2::IDENTITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

pub(crate) fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.0.iter()
        .flatten()
        .zip(b.0.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    // ⟨a|b⟩
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product of vectors, first factor most significant.
pub(crate) fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
///
/// Returns eigenvalues in descending order and a unitary whose columns are
/// the matching eigenvectors. The second column is built as the orthogonal
/// complement of the first, so the eigenvector matrix is unitary to rounding.
pub fn hermitian_eigen(h: &Mat2) -> ([f64; 2], Mat2) {
    let a = h.0[0][0].re;
    let d = h.0[1][1].re;
    let b = h.0[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b.norm());
    let l0 = mean + r;
    let l1 = mean - r;

    let v0 = if b.norm() <= f64::EPSILON * (a.abs() + d.abs()).max(f64::MIN_POSITIVE) {
        if a >= d {
            [ONE, ZERO]
        } else {
            [ZERO, ONE]
        }
    } else {
        // two algebraically equivalent eigenvectors; keep the better-conditioned one
        let c1 = [b, C64::from(l0 - a)];
        let c2 = [C64::from(l0 - d), b.conj()];
        let pick = if norm(&c1) >= norm(&c2) { c1 } else { c2 };
        let n = norm(&pick);
        [pick[0] / n, pick[1] / n]
    };
    let v1 = [-v0[1].conj(), v0[0].conj()];
    ([l0, l1], Mat2::from_columns(v0, v1))
}
