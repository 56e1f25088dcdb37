//! Exact linear algebra over a [`Field`]: dense reduced row echelon form for
//! kernels and inverses, and an incremental sparse elimination for ranks of the
//! large, very sparse differentials of hom complexes.

use std::collections::BTreeMap;

use super::field::{Field, Rat};

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pivot_row = m[r].clone();
            for (x, p) in m[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>], cols: usize) -> usize {
    let mut work = m.to_vec();
    rref(&mut work, cols).len()
}

/// Basis of `{v : M v = 0}`, one vector per free column of the echelon form.
pub fn kernel<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work, cols);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[r][free].clone();
            }
            v
        })
        .collect()
}

/// Kernel over the rationals.
pub fn rat_kernel(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    kernel(m, cols)
}

pub fn mat_vec<F: Field>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter().map(|row| row.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())).collect()
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| (0..inner).fold(F::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())).collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sparse vector: sorted `(index, value)` pairs with no stored zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Rank of the span of sparse vectors, by incremental elimination against
/// pivots keyed on the leading index.
pub fn sparse_rank<F: Field>(vectors: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
    for v in vectors {
        let mut cur: BTreeMap<usize, F> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        while let Some((&lead, lead_val)) = cur.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = lead_val.clone();
                    for (&i, x) in p {
                        let nv = match cur.get(&i) {
                            Some(y) => y.clone() - f.clone() * x.clone(),
                            None => -(f.clone() * x.clone()),
                        };
                        if nv.is_zero() {
                            cur.remove(&i);
                        } else {
                            cur.insert(i, nv);
                        }
                    }
                }
                None => {
                    let inv = F::one() / lead_val.clone();
                    let normalized = cur.into_iter().map(|(i, x)| (i, x * inv.clone())).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::field::rat;
    use num::Zero;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(rat_kernel(&q(&[&[0, 0], &[0, 0]]), 2).len(), 2);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(rat_kernel(&q(&[&[1, 0], &[0, 1]]), 2).is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        let m = q(&[&[1, 1], &[2, 2]]);
        let k = rat_kernel(&m, 2);
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(k[0][0].clone() + k[0][1].clone(), rat(0, 1));
        assert_eq!(mat_vec(&m, &k[0]), vec![rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = q(&[&[3, 0], &[1, 2]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 3), rat(0, 1)], vec![rat(-1, 6), rat(1, 2)]]);
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let m = q(&[&[1, 2, 0, 3], &[0, 0, 1, 1], &[1, 2, 1, 4], &[2, 4, 0, 6]]);
        let cols: Vec<SparseVec<Rat>> =
            (0..4).map(|c| (0..4).filter(|&r| !m[r][c].is_zero()).map(|r| (r, m[r][c].clone())).collect()).collect();
        assert_eq!(sparse_rank(cols), rank(&m, 4));
        assert_eq!(rank(&m, 4), 2);
    }
}
