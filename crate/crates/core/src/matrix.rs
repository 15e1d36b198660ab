//! Dense integer matrices with Smith and Hermite normal forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&big, cols)
    }

    /// Builds a `rows × cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(j, c)] * k;
            if !v.is_zero() {
                self[(i, c)] += v;
            }
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, j)] * k;
            if !v.is_zero() {
                self[(r, i)] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == s`, with inverses kept.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct SnfCalc {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.s.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.s.add_row(i, j, k);
        self.u.add_row(i, j, k);
        self.u_inv.add_col(j, i, &-k);
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.s.add_col(i, j, k);
        self.v.add_col(i, j, k);
        self.v_inv.add_row(j, i, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.s.rows {
            for j in t..self.s.cols {
                let x = &self.s[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.s[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn process(&mut self) -> usize {
        let n = self.s.rows.min(self.s.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.s.rows {
                    if self.s[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.s[(i, t)].div_floor(&self.s[(t, t)]);
                    self.add_row(i, t, &-q);
                    if !self.s[(i, t)].is_zero() {
                        self.swap_rows(i, t);
                        clean = false;
                    }
                }
                for j in t + 1..self.s.cols {
                    if self.s[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.s[(t, j)].div_floor(&self.s[(t, t)]);
                    self.add_col(j, t, &-q);
                    if !self.s[(t, j)].is_zero() {
                        self.swap_cols(j, t);
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                let p = self.s[(t, t)].clone();
                let bad =
                    (t + 1..self.s.rows).find(|&i| (t + 1..self.s.cols).any(|j| !self.s[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.s[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form `u * m * v = s` with unimodular `u`, `v`.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let mut calc = SnfCalc {
        s: m.clone(),
        u: IntMatrix::identity(m.rows),
        u_inv: IntMatrix::identity(m.rows),
        v: IntMatrix::identity(m.cols),
        v_inv: IntMatrix::identity(m.cols),
    };
    let rank = calc.process();
    Smith { u: calc.u, u_inv: calc.u_inv, s: calc.s, v: calc.v, v_inv: calc.v_inv, rank }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns a basis in echelon form: pivots positive, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped, so the result is
/// a canonical basis of the row lattice.
pub fn hermite_rows(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..ncols {
        let mut idx: Vec<usize> = (0..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
        if idx.is_empty() {
            continue;
        }
        // Euclid between rows until a single row carries the column.
        while idx.len() > 1 {
            idx.sort_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let p = idx[0];
            let pv = a[p][col].clone();
            for &i in &idx[1..] {
                let q = a[i][col].div_floor(&pv);
                let prow = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
            idx.retain(|&i| !a[i][col].is_zero());
        }
        let p = idx[0];
        let mut row = a.swap_remove(p);
        if row[col].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        for b in basis.iter_mut() {
            let q = b[col].div_floor(&row[col]);
            if !q.is_zero() {
                for (x, y) in b.iter_mut().zip(row.iter()) {
                    *x -= &q * y;
                }
            }
        }
        basis.push(row);
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    basis
}

/// Reduces `v` modulo the lattice with Hermite basis `hnf` (from
/// [`hermite_rows`]): each pivot coordinate ends up in `[0, pivot)`.
pub fn reduce_mod_hermite(v: &mut [BigInt], hnf: &[Vec<BigInt>]) {
    for row in hnf {
        let Some(col) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = v[col].div_floor(&row[col]);
        if !q.is_zero() {
            for (x, y) in v.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
    }
}

/// Basis of the integer kernel `{x : m x = 0}`, in Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let gens: Vec<Vec<BigInt>> = (snf.rank..m.cols).map(|j| snf.v.column(j)).collect();
    hermite_rows(&gens, m.cols)
}

/// Solves `m x = b` over the integers.
///
/// Returns the canonical solution: a particular solution reduced modulo the
/// Hermite basis of the kernel lattice. `None` if no integer solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, val) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.s[(i, i)];
            if !val.is_multiple_of(d) {
                return None;
            }
            y[i] = val / d;
        } else if !val.is_zero() {
            return None;
        }
    }
    let mut x = snf.v.mul_vec(&y);
    let kernel: Vec<Vec<BigInt>> = (snf.rank..m.cols).map(|j| snf.v.column(j)).collect();
    let hnf = hermite_rows(&kernel, m.cols);
    reduce_mod_hermite(&mut x, &hnf);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn snf_small() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.s);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(2));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = smith_normal_form(&m(&[&[0]]));
        assert_eq!(z.s, m(&[&[0]]));
        assert_eq!(z.rank, 0);
        let i = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(i.s, IntMatrix::identity(3));
        assert_eq!(i.u, IntMatrix::identity(3));
        assert_eq!(i.v, IntMatrix::identity(3));
    }

    #[test]
    fn hermite_canonical() {
        let rows = vec![
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(0), BigInt::from(5)],
        ];
        let h = hermite_rows(&rows, 2);
        assert_eq!(h, vec![vec![BigInt::from(2), BigInt::from(3)], vec![BigInt::from(0), BigInt::from(5)]]);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant(), BigInt::from(-2));
    }

    #[test]
    fn solve_unique_and_absent() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            solve_integer(&a, &[BigInt::from(4), BigInt::from(9)]),
            Some(vec![BigInt::from(2), BigInt::from(3)])
        );
        assert_eq!(solve_integer(&a, &[BigInt::from(1), BigInt::from(0)]), None);
    }
}
