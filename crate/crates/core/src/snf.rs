//! Exact integer matrices and Smith normal form.
//!
//! Entries are arbitrary-precision integers; pivots in the reduction can
//! grow quickly, and group-theoretic conclusions downstream must be exact.
//! `smith_normal_form` returns unimodular U, V with U·M·V = S, S diagonal
//! with a divisibility chain d₁ | d₂ | … and nonnegative entries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &IntMat) -> IntMat {
        debug_assert_eq!(self.rows, other.rows);
        let mut out = IntMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn determinant(&self) -> BigInt {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let tmp = a[(k, j)].clone();
                    a[(k, j)] = a[(swap, j)].clone();
                    a[(swap, j)] = tmp;
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col[a] += q * col[b]
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// U·M·V = S with S diagonal, nonnegative, d₁ | d₂ | …, and U, V
/// unimodular (determinant ±1).
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl SmithNormalForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.s.rows.min(self.s.cols);
        (0..n).filter(|&i| !self.s[(i, i)].is_zero()).count()
    }

    /// The nonzero diagonal entries (the divisibility chain).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMat) -> SmithNormalForm {
    let mut s = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);
    let limit = m.rows.min(m.cols);

    for t in 0..limit {
        // Locate a pivot of minimal absolute value in the remaining block.
        if !move_min_pivot(&mut s, &mut u, &mut v, t) {
            break; // remaining block is zero
        }
        loop {
            // Clear the pivot column with Euclidean steps.
            let mut dirty = false;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    // Remainder is smaller than the pivot; promote it.
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear the pivot row.
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: the pivot must divide the remaining block.
            if let Some(bad_row) = find_nondivisible_row(&s, t) {
                s.add_row_multiple(t, bad_row, &BigInt::one());
                u.add_row_multiple(t, bad_row, &BigInt::one());
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithNormalForm { s, u, v }
}

fn move_min_pivot(s: &mut IntMat, u: &mut IntMat, v: &mut IntMat, t: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            if s[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if s[(i, j)].abs() < s[(bi, bj)].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    let Some((i, j)) = best else {
        return false;
    };
    s.swap_rows(t, i);
    u.swap_rows(t, i);
    s.swap_cols(t, j);
    v.swap_cols(t, j);
    true
}

fn find_nondivisible_row(s: &IntMat, t: usize) -> Option<usize> {
    let pivot = &s[(t, t)];
    for i in t + 1..s.rows {
        for j in t + 1..s.cols {
            if !(&s[(i, j)] % pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

/// Solves B·w = x exactly over the integers when possible.
pub fn solve_integer(b: &IntMat, x: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert_eq!(b.rows, x.len());
    let snf = smith_normal_form(b);
    // U·B·V = S, so B·w = x becomes S·(V⁻¹ w) = U·x.
    let ux: Vec<BigInt> = (0..b.rows)
        .map(|i| (0..b.rows).map(|k| &snf.u[(i, k)] * &x[k]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); b.cols];
    let limit = b.rows.min(b.cols);
    for (i, uxi) in ux.iter().enumerate() {
        if i < limit && !snf.s[(i, i)].is_zero() {
            if !(uxi % &snf.s[(i, i)]).is_zero() {
                return None;
            }
            y[i] = uxi / &snf.s[(i, i)];
        } else if !uxi.is_zero() {
            return None;
        }
    }
    let w: Vec<BigInt> = (0..b.cols)
        .map(|i| (0..b.cols).map(|k| &snf.v[(i, k)] * &y[k]).sum())
        .collect();
    Some(w)
}

/// Basis of the integer kernel lattice of `m` (as columns).
pub fn kernel_basis(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let mut out = IntMat::zeros(m.cols, m.cols - rank);
    for (col, j) in (rank..m.cols).enumerate() {
        for i in 0..m.cols {
            out[(i, col)] = snf.v[(i, j)].clone();
        }
    }
    out
}
