//! Minimal complex matrix helpers: fixed 2×2 blocks and small dense windows.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Conjugation by the swap permutation: exchanges both rows and columns.
    pub fn swap_basis(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[1][1], m[1][0], m[0][1], m[0][0])
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Mat2::ZERO)
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::IDENTITY)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [[a00, a01], [a10, a11]] = self.0;
        let [[b00, b01], [b10, b11]] = rhs.0;
        Mat2::new(
            a00 * b00 + a01 * b10,
            a00 * b01 + a01 * b11,
            a10 * b00 + a11 * b10,
            a10 * b01 + a11 * b11,
        )
    }
}

/// Dense square matrix over the contiguous site window `origin .. origin + dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowMatrix {
    origin: i64,
    dim: usize,
    data: Vec<Complex64>,
}

impl WindowMatrix {
    pub fn zeros(origin: i64, dim: usize) -> Self {
        Self {
            origin,
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sites(&self) -> std::ops::Range<i64> {
        self.origin..self.origin + self.dim as i64
    }

    fn index(&self, site: i64) -> Option<usize> {
        let i = site - self.origin;
        (0..self.dim as i64).contains(&i).then_some(i as usize)
    }

    /// Entry at (row site, column site); zero outside the window.
    pub fn get(&self, row: i64, col: i64) -> Complex64 {
        match (self.index(row), self.index(col)) {
            (Some(r), Some(c)) => self.data[r * self.dim + c],
            _ => ZERO,
        }
    }

    /// Sets an entry; writes outside the window are dropped.
    pub fn set(&mut self, row: i64, col: i64, value: Complex64) {
        if let (Some(r), Some(c)) = (self.index(row), self.index(col)) {
            self.data[r * self.dim + c] = value;
        }
    }

    /// Matrix product over the same window.
    ///
    /// # Panics
    ///
    /// If the windows differ.
    pub fn matmul(&self, rhs: &WindowMatrix) -> WindowMatrix {
        assert_eq!(
            (self.origin, self.dim),
            (rhs.origin, rhs.dim),
            "window mismatch"
        );
        let n = self.dim;
        let mut out = WindowMatrix::zeros(self.origin, n);
        for r in 0..n {
            for k in 0..n {
                let lhs = self.data[r * n + k];
                if lhs == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += lhs * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}
