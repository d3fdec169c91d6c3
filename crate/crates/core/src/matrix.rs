//! Dense integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Matrix entries: `i128` for inputs, `BigInt` for exact transforms.
pub trait Entry: Clone + PartialEq + Integer + Signed + fmt::Display {}

impl<T: Clone + PartialEq + Integer + Signed + fmt::Display> Entry for T {}

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T = i128> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j].clone()
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a.clone() * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Appends the columns of `other` on the right.
    pub fn hconcat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n {
            if a.entry(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.entry(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k);
        }
        let det = if n == 0 { T::one() } else { a.get(n - 1, n - 1) };
        if negate {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `(row[a], row[b]) ← (x·row[a] + y·row[b], u·row[a] + v·row[b])`.
    fn mix_rows(&mut self, a: usize, b: usize, [x, y, u, v]: &[T; 4]) {
        for j in 0..self.cols {
            let (ra, rb) = (self.get(a, j), self.get(b, j));
            self.set(a, j, x.clone() * ra.clone() + y.clone() * rb.clone());
            self.set(b, j, u.clone() * ra + v.clone() * rb);
        }
    }

    /// `(col[a], col[b]) ← (x·col[a] + y·col[b], u·col[a] + v·col[b])`.
    fn mix_cols(&mut self, a: usize, b: usize, [x, y, u, v]: &[T; 4]) {
        for i in 0..self.rows {
            let (ca, cb) = (self.get(i, a), self.get(i, b));
            self.set(i, a, x.clone() * ca.clone() + y.clone() * cb.clone());
            self.set(i, b, u.clone() * ca + v.clone() * cb);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl Matrix<i128> {
    /// Builds from rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Option<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&v| i128::from(v)).collect(),
        })
    }

    pub fn widen(&self) -> Matrix<BigInt> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }
}

impl Matrix<BigInt> {
    /// `None` if some entry does not fit in `i128`.
    pub fn narrow(&self) -> Option<Matrix<i128>> {
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>()?,
        })
    }
}

impl<T: Entry> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `d = u · a · v` with `u`, `v` unimodular and `d` diagonal, `d₁ | d₂ | ⋯`,
/// nonnegative diagonal. Computed exactly: transform entries can grow far
/// beyond the size of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub d: Matrix<BigInt>,
    pub u: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }
}

/// Row operations go to `d` and `u`, column operations to `d` and `v`.
struct Tracker {
    d: Matrix<BigInt>,
    u: Matrix<BigInt>,
    v: Matrix<BigInt>,
}

impl Tracker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn mix_rows(&mut self, a: usize, b: usize, m: &[BigInt; 4]) {
        self.d.mix_rows(a, b, m);
        self.u.mix_rows(a, b, m);
    }

    fn mix_cols(&mut self, a: usize, b: usize, m: &[BigInt; 4]) {
        self.d.mix_cols(a, b, m);
        self.v.mix_cols(a, b, m);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
    }

    /// Moves the smallest nonzero entry of the trailing block to `(t, t)`.
    fn pivot(&mut self, t: usize) -> bool {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows {
            for j in t..self.d.cols {
                let x = self.d.entry(i, j).abs();
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x < self.d.entry(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        match best {
            None => false,
            Some((i, j)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
        }
    }

    /// Clears row and column `t` outside the pivot with unimodular 2×2
    /// Bézout transforms; returns false if a column step refilled column `t`.
    fn clear(&mut self, t: usize) -> bool {
        for i in t + 1..self.d.rows {
            if !self.d.entry(i, t).is_zero() {
                let m = bezout(self.d.entry(t, t), self.d.entry(i, t));
                self.mix_rows(t, i, &m);
            }
        }
        for j in t + 1..self.d.cols {
            if !self.d.entry(t, j).is_zero() {
                let m = bezout(self.d.entry(t, t), self.d.entry(t, j));
                self.mix_cols(t, j, &m);
            }
        }
        (t + 1..self.d.rows).all(|i| self.d.entry(i, t).is_zero())
    }
}

/// `[x, y, u, v]` with `x·a + y·b = g = gcd(a, b)`, `u·a + v·b = 0` and
/// determinant `x·v − y·u = 1`. When `a | b` this is plain elimination.
fn bezout(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    let one = BigInt::from(1);
    let zero = BigInt::from(0);
    if (b % a).is_zero() {
        return [one.clone(), zero, -(b / a), one];
    }
    let e = a.extended_gcd(b);
    [e.x, e.y, -(b / &e.gcd), a / &e.gcd]
}

/// Smith normal form over `ℤ`.
pub fn smith_normal_form(a: &Matrix) -> Snf {
    let mut tr = Tracker {
        d: a.widen(),
        u: Matrix::identity(a.rows),
        v: Matrix::identity(a.cols),
    };
    let n = a.rows.min(a.cols);
    let mut t = 0;
    let pull = [BigInt::from(1), BigInt::from(1), BigInt::from(0), BigInt::from(1)];
    while t < n && tr.pivot(t) {
        loop {
            if !tr.clear(t) {
                continue;
            }
            let p = tr.d.get(t, t);
            let bad = (t + 1..tr.d.rows)
                .find(|&i| (t + 1..tr.d.cols).any(|j| !(tr.d.entry(i, j) % &p).is_zero()));
            match bad {
                // pulling a non-multiple into row t makes the next pass shrink the pivot
                Some(i) => tr.mix_rows(t, i, &pull),
                None => break,
            }
        }
        if tr.d.entry(t, t).is_negative() {
            tr.negate_row(t);
        }
        t += 1;
    }
    Snf {
        d: tr.d,
        u: tr.u,
        v: tr.v,
    }
}
