//! Directed Dynkin quivers of types A and D, hom dimensions between their
//! simple representations, tensor products of such categories, and the
//! Euler-matrix shadow of mutations.
//!
//! Convention: `Ext^1(S_i, S_j)` counts arrows `j -> i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{inverse, Rat};
use crate::matfac::ExtTable;
use crate::polyforms::AtomKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(u32),
    D(u32),
}

impl DynkinType {
    /// Quiver type of an atom. Both orientations of type D map to `D_n`.
    pub fn of_atom(kind: AtomKind) -> Self {
        match kind {
            AtomKind::A(m) => DynkinType::A(m),
            AtomKind::D(n) | AtomKind::Dt(n) => DynkinType::D(n),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(m) => write!(f, "A{m}"),
            DynkinType::D(n) => write!(f, "D{n}"),
        }
    }
}

/// Vertices `v1..vn` (stored from index 0) and arrows `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arrow_count(&self, from: usize, to: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (from, to)).count()
    }
}

/// `A_m`: `v_{i+1} -> v_i`. `D_n`: `v3 -> v1`, `v3 -> v2`, `v_{i+1} -> v_i`
/// for `i >= 3`.
pub fn dynkin_quiver(t: DynkinType) -> Result<Quiver> {
    let (n, arrows) = match t {
        DynkinType::A(m) => {
            if m < 1 {
                return Err(Error::InvalidRank { kind: "A".into(), rank: m as usize });
            }
            let m = m as usize;
            (m, (1..m).map(|i| (i, i - 1)).collect())
        }
        DynkinType::D(n) => {
            if n < 4 {
                return Err(Error::InvalidRank { kind: "D".into(), rank: n as usize });
            }
            let n = n as usize;
            let mut arrows = vec![(2, 0), (2, 1)];
            arrows.extend((3..n).map(|i| (i, i - 1)));
            (n, arrows)
        }
    };
    Ok(Quiver { name: t.to_string(), vertices: (1..=n).map(|i| format!("v{i}")).collect(), arrows })
}

/// `dim Hom(S_i, S_j[k])` in the derived category of representations.
pub fn simple_hom_dims(q: &Quiver, i: usize, j: usize, k: i64) -> Result<usize> {
    for v in [i, j] {
        if v >= q.len() {
            return Err(Error::OutOfRange { index: v, size: q.len() });
        }
    }
    Ok(match k {
        0 => usize::from(i == j),
        1 => q.arrow_count(j, i),
        _ => 0,
    })
}

/// Hom table of the simples of a tensor product of quiver categories.
/// Objects are tuples of vertices in lexicographic order, the first factor
/// varying slowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTable {
    pub factors: Vec<String>,
    pub objects: Vec<Vec<usize>>,
    pub table: ExtTable,
}

fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |v| {
                    let mut t2 = t.clone();
                    t2.push(v);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Reverses every arrow at vertex `v` (0-based).
pub fn reflect(q: &Quiver, v: usize) -> Result<Quiver> {
    if v >= q.len() {
        return Err(Error::OutOfRange { index: v, size: q.len() });
    }
    let arrows = q.arrows.iter().map(|&(s, t)| if s == v || t == v { (t, s) } else { (s, t) }).collect();
    Ok(Quiver { name: format!("s{}({})", v + 1, q.name), vertices: q.vertices.clone(), arrows })
}

/// `dims(i, j, k) = sum over k_1 + ... + k_r = k of prod_t dims_t(i_t, j_t, k_t)`.
pub fn tensor_model(types: &[DynkinType], window: (i64, i64)) -> Result<BigradedTable> {
    let quivers = types.iter().map(|&t| dynkin_quiver(t)).collect::<Result<Vec<_>>>()?;
    quiver_model(&quivers, window)
}

/// [`tensor_model`] for arbitrary quivers.
pub fn quiver_model(quivers: &[Quiver], window: (i64, i64)) -> Result<BigradedTable> {
    if quivers.is_empty() {
        return Err(Error::Parse("tensor model needs at least one factor".into()));
    }
    let objects = tuples(&quivers.iter().map(Quiver::len).collect::<Vec<_>>());
    let (lo, hi) = window;
    let width = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    let mut dims = vec![vec![vec![0; width]; objects.len()]; objects.len()];
    for (a, oi) in objects.iter().enumerate() {
        for (b, oj) in objects.iter().enumerate() {
            // polynomial in k: product of the factors' k = 0, 1 entries
            let mut series = vec![1usize];
            for (t, q) in quivers.iter().enumerate() {
                let f = [simple_hom_dims(q, oi[t], oj[t], 0)?, simple_hom_dims(q, oi[t], oj[t], 1)?];
                let mut next = vec![0; series.len() + 1];
                for (d, v) in series.iter().enumerate() {
                    next[d] += v * f[0];
                    next[d + 1] += v * f[1];
                }
                series = next;
            }
            for (k, v) in series.into_iter().enumerate() {
                let k = k as i64;
                if (lo..=hi).contains(&k) {
                    dims[a][b][(k - lo) as usize] = v;
                }
            }
        }
    }
    let label = |o: &Vec<usize>| {
        let parts: Vec<String> = o.iter().map(|v| format!("S{}", v + 1)).collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join(","))
        }
    };
    Ok(BigradedTable {
        factors: quivers.iter().map(|q| q.name.clone()).collect(),
        table: ExtTable { schema: 1, objects: objects.iter().map(label).collect(), window: [lo, hi], dims },
        objects,
    })
}

/// Gram matrix of the Euler form on the simples, `E_ij = chi(S_i, S_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl EulerMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("Euler matrix must be square".into()));
        }
        Ok(EulerMatrix { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    fn to_rat(&self) -> Vec<Vec<Rat>> {
        self.entries.iter().map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect()).collect()
    }

    pub fn det(&self) -> i64 {
        let m = crate::exactmat::IntMatrix::from_rows(&self.entries);
        num::ToPrimitive::to_i64(&m.det()).expect("small determinant")
    }
}

/// `E_ij = delta_ij - #arrows j -> i`.
pub fn euler_matrix(q: &Quiver) -> EulerMatrix {
    let n = q.len();
    let entries = (0..n).map(|i| (0..n).map(|j| i64::from(i == j) - q.arrow_count(j, i) as i64).collect()).collect();
    EulerMatrix { entries }
}

/// `-E^{-T} E`.
pub fn coxeter_matrix(e: &EulerMatrix) -> Result<Vec<Vec<Rat>>> {
    let m = e.to_rat();
    let n = m.len();
    let inv = inverse(&m).ok_or(Error::SingularMatrix)?;
    Ok((0..n)
        .map(|i| (0..n).map(|j| -(0..n).map(|k| inv[k][i].clone() * m[k][j].clone()).sum::<Rat>()).collect())
        .collect())
}

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly(pub Vec<i64>);

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match d {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{d}"),
            };
            let body = match (c.abs(), mono.is_empty()) {
                (a, true) => a.to_string(),
                (1, false) => mono,
                (a, false) => format!("{a}*{mono}"),
            };
            match (first, c < 0) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(t - Phi)` of the Coxeter matrix, by the
/// Faddeev-LeVerrier recursion.
pub fn coxeter_polynomial(e: &EulerMatrix) -> Result<IntPoly> {
    let phi = coxeter_matrix(e)?;
    let n = phi.len();
    let mut coeffs = vec![Rat::from_integer(0.into()); n + 1];
    coeffs[n] = Rat::from_integer(1.into());
    let mut m: Vec<Vec<Rat>> = vec![vec![Rat::from_integer(0.into()); n]; n];
    for k in 1..=n {
        // M_k = Phi M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(Phi M_k) / k
        let mut next = crate::exactmat::linalg::mat_mul(&phi, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].clone() + coeffs[n - k + 1].clone();
        }
        m = next;
        let am = crate::exactmat::linalg::mat_mul(&phi, &m);
        let tr: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / Rat::from_integer((k as i64).into());
    }
    coeffs
        .iter()
        .map(|c| {
            if c.is_integer() {
                num::ToPrimitive::to_i64(&c.to_integer()).ok_or(Error::InvalidMatrix("coefficient overflow".into()))
            } else {
                Err(Error::InvalidMatrix("Coxeter polynomial is not integral".into()))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(IntPoly)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Mutation of the pair in slots `i, i+1` (1-based `i`) acting on the Gram
/// matrix `G' = T G T^T`. Left: `(b_{i+1} - G_{i,i+1} b_i, b_i)`. Right:
/// `(b_{i+1}, b_i - G_{i,i+1} b_{i+1})`.
pub fn mutate_collection(e: &EulerMatrix, i: usize, dir: Direction) -> Result<EulerMatrix> {
    let n = e.rank();
    if i < 1 || i >= n {
        return Err(Error::OutOfRange { index: i, size: n });
    }
    let (a, b) = (i - 1, i);
    let g = e.entries[a][b];
    let mut t: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
    t[a][a] = 0;
    t[b][b] = 0;
    match dir {
        Direction::Left => {
            t[a][b] = 1;
            t[a][a] = -g;
            t[b][a] = 1;
        }
        Direction::Right => {
            t[a][b] = 1;
            t[b][a] = 1;
            t[b][b] = -g;
        }
    }
    let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| x[r][k] * y[k][c]).sum()).collect()).collect()
    };
    let tt: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| t[c][r]).collect()).collect();
    Ok(EulerMatrix { entries: mul(&mul(&t, &e.entries), &tt) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_quiver() {
        let q = dynkin_quiver(DynkinType::D(4)).unwrap();
        assert_eq!(q.arrows, vec![(2, 0), (2, 1), (3, 2)]);
        assert_eq!(simple_hom_dims(&q, 2, 0, 1).unwrap(), 0);
        assert_eq!(simple_hom_dims(&q, 0, 2, 1).unwrap(), 1);
        assert_eq!(simple_hom_dims(&q, 1, 1, 0).unwrap(), 1);
        assert_eq!(simple_hom_dims(&q, 1, 1, 2).unwrap(), 0);
        assert!(matches!(simple_hom_dims(&q, 4, 0, 0), Err(Error::OutOfRange { .. })));
        assert!(dynkin_quiver(DynkinType::D(3)).is_err());
    }

    #[test]
    fn reflection_keeps_coxeter_polynomial() {
        let q = dynkin_quiver(DynkinType::D(4)).unwrap();
        let r = reflect(&q, 3).unwrap();
        assert_eq!(r.arrows, vec![(2, 0), (2, 1), (2, 3)]);
        assert_eq!(r.name, "s4(D4)");
        let cp = |q: &Quiver| coxeter_polynomial(&euler_matrix(q)).unwrap();
        assert_eq!(cp(&q), cp(&r));
        assert!(reflect(&q, 4).is_err());
    }

    #[test]
    fn a_quivers() {
        let q = dynkin_quiver(DynkinType::A(3)).unwrap();
        assert_eq!(q.arrows, vec![(1, 0), (2, 1)]);
        assert!(dynkin_quiver(DynkinType::A(1)).unwrap().arrows.is_empty());
    }

    #[test]
    fn coxeter_polynomials() {
        let cp = |t| coxeter_polynomial(&euler_matrix(&dynkin_quiver(t).unwrap())).unwrap();
        assert_eq!(cp(DynkinType::A(1)), IntPoly(vec![1, 1]));
        assert_eq!(cp(DynkinType::A(2)), IntPoly(vec![1, 1, 1]));
        assert_eq!(cp(DynkinType::D(4)), IntPoly(vec![1, 1, 0, 1, 1]));
        assert_eq!(cp(DynkinType::D(4)).to_string(), "t^4 + t^3 + t + 1");
    }

    #[test]
    fn tensor_models() {
        let t = tensor_model(&[DynkinType::A(1), DynkinType::A(1)], (-1, 3)).unwrap();
        assert_eq!(t.table.dims, vec![vec![vec![0, 1, 0, 0, 0]]]);
        let t = tensor_model(&[DynkinType::A(2), DynkinType::A(2)], (0, 2)).unwrap();
        assert_eq!(t.objects.len(), 4);
        assert_eq!(t.table.objects[3], "(S2,S2)");
        assert_eq!(t.table.get(0, 3, 2), 1);
        assert_eq!(t.table.get(3, 0, 2), 0);
    }

    #[test]
    fn mutations_invert() {
        let e = euler_matrix(&dynkin_quiver(DynkinType::D(5)).unwrap());
        for i in 1..5 {
            let l = mutate_collection(&e, i, Direction::Left).unwrap();
            assert_eq!(mutate_collection(&l, i, Direction::Right).unwrap(), e);
        }
        assert!(mutate_collection(&e, 5, Direction::Left).is_err());
        assert!(mutate_collection(&e, 0, Direction::Left).is_err());
    }
}
