//! Dense integer matrices and the Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows<T: Into<Int> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    /// Like [`IntMatrix::from_rows`] but with an explicit column count, so
    /// that matrices with zero rows keep their width.
    pub fn from_rows_with_cols(rows: &[Vec<Int>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as machine integers; `None` if an entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num::ToPrimitive;
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_i64()).collect()).collect()
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

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| Rat::from_integer(v.clone())).collect()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.to_rows();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
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

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &Int) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &Int) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).to_vec())).finish()
    }
}

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// non-negative divisibility chain. `v_inv` is kept so that coordinates in the
/// diagonal basis can be pulled back to the original generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn invariants(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|v| !v.is_zero()).count()
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    let swap_c = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize| {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    };
    // col[dst] += q col[src]; the inverse picks up row[src] -= q row[dst].
    let add_c = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        d.add_col(dst, src, q);
        v.add_col(dst, src, q);
        vi.add_row(src, dst, &-q);
    };

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&d, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        swap_c(&mut d, &mut v, &mut v_inv, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &-&q);
                u.add_row(i, t, &-&q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                add_c(&mut d, &mut v, &mut v_inv, j, t, &-&q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let cross = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                let (pi, pj) = min_abs_entry(&d, cross).expect("pivot vanished");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                swap_c(&mut d, &mut v, &mut v_inv, t, pj);
                continue;
            }
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v, v_inv }
}

fn min_abs_entry(d: &IntMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), Int)> = None;
    for (i, j) in cells {
        let a = d[(i, j)].abs();
        if a.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::field::int;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.cols()));
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(3);
        let s = check(&i);
        assert_eq!(s.u, i);
        assert_eq!(s.d, i);
        assert_eq!(s.v, i);
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariants(), vec![int(2), int(4)]);
    }

    #[test]
    fn one_by_one() {
        for n in 1..6 {
            let s = check(&IntMatrix::from_rows(&[vec![n + 1]]));
            assert_eq!(s.d, IntMatrix::from_rows(&[vec![n + 1]]));
        }
    }

    #[test]
    fn rectangular_and_degenerate() {
        check(&IntMatrix::from_rows(&[vec![3, 1, -1], vec![0, 2, -1]]));
        check(&IntMatrix::zeros(2, 3));
        check(&IntMatrix::zeros(0, 1));
        let s = check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 5], vec![10, 0]]));
        assert_eq!(s.invariants(), vec![int(5), int(10)]);
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(IntMatrix::from_rows(&[vec![3, 1], vec![0, 2]]).det(), int(6));
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).det(), int(-1));
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.det(), int(4));
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).det(), int(0));
    }
}
