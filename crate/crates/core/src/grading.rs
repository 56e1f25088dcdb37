//! Grading groups of invertible polynomials.
//!
//! A grading group is presented by generators and integer relations and
//! stored in the coordinates of the Smith normal form of its relation matrix:
//! every element is a vector of free coordinates plus residues modulo the
//! torsion invariants, so equality of elements is plain vector equality.

use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{smith_normal_form, Field, Int, IntMatrix, Poly, Rat, SmithForm};
use crate::symmetry::{self, SymmetryGroup};

/// Element of a grading group in Smith coordinates. Torsion residues are
/// kept in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LElement {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl LElement {
    /// Concatenated coordinates `[free..., torsion...]`.
    pub fn coords(&self) -> Vec<i64> {
        self.free.iter().chain(&self.torsion).copied().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum Coord {
    Trivial,
    Torsion(usize),
    Free(usize),
}

/// The presentation behind a [`GradingContext`]: relation rows over the
/// original generators, their Smith form, and the role of each Smith column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub relations: IntMatrix,
    pub snf: SmithForm,
    coords: Vec<Coord>,
    free_sign: Vec<i64>,
}

/// An abelian group `Z^r + (+) Z/d_i` together with the degrees of the
/// variables and of the potential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingContext {
    free_rank: usize,
    torsion: Vec<i64>,
    deg_x: Vec<LElement>,
    deg_c: LElement,
    presentation: Presentation,
}

impl GradingContext {
    /// Builds the group `Z^N / rowspace(relations)` with the given elements
    /// (integer vectors over the `N` generators) as variable degrees and as
    /// the degree of the potential.
    pub fn from_presentation(relations: IntMatrix, deg_x: &[Vec<Int>], deg_c: &[Int]) -> Result<Self> {
        let n_gens = relations.cols();
        let snf = smith_normal_form(&relations);
        let inv = snf.invariants();
        let mut coords = Vec::with_capacity(n_gens);
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for j in 0..n_gens {
            let d = inv.get(j).cloned().unwrap_or_else(Int::zero);
            if d.is_zero() {
                coords.push(Coord::Free(free_rank));
                free_rank += 1;
            } else if d == Int::from(1) {
                coords.push(Coord::Trivial);
            } else {
                let d = d.to_i64().ok_or_else(|| Error::UnsupportedGrading("torsion invariant too large".into()))?;
                coords.push(Coord::Torsion(torsion.len()));
                torsion.push(d);
            }
        }
        let mut ctx = GradingContext {
            free_rank,
            torsion,
            deg_x: Vec::new(),
            deg_c: LElement { free: vec![], torsion: vec![] },
            presentation: Presentation { relations, snf, coords, free_sign: vec![1; free_rank] },
        };
        let c = ctx.element_from_vector(deg_c)?;
        // Orient free coordinates so that the potential has non-negative degree.
        for (k, v) in c.free.iter().enumerate() {
            if *v < 0 {
                ctx.presentation.free_sign[k] = -1;
            }
        }
        ctx.deg_c = ctx.element_from_vector(deg_c)?;
        ctx.deg_x = deg_x.iter().map(|v| ctx.element_from_vector(v)).collect::<Result<_>>()?;
        Ok(ctx)
    }

    /// Grading group with only the generator `c` and no variables: the
    /// grading of the empty potential.
    pub fn trivial() -> Self {
        Self::from_presentation(IntMatrix::zeros(0, 1), &[], &[Int::from(1)]).expect("trivial grading")
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn deg_x(&self) -> &[LElement] {
        &self.deg_x
    }

    pub fn deg_c(&self) -> &LElement {
        &self.deg_c
    }

    pub fn num_vars(&self) -> usize {
        self.deg_x.len()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Image in the group of an integer vector over the original generators.
    pub fn element_from_vector(&self, v: &[Int]) -> Result<LElement> {
        let p = &self.presentation;
        let n = p.relations.cols();
        if v.len() != n {
            return Err(Error::UnsupportedGrading(format!("vector of length {} for {} generators", v.len(), n)));
        }
        let mut free = vec![0i64; self.free_rank];
        let mut torsion = vec![0i64; self.torsion.len()];
        for j in 0..n {
            if matches!(p.coords[j], Coord::Trivial) {
                continue;
            }
            let w: Int = (0..n).map(|i| &v[i] * &p.snf.v[(i, j)]).sum();
            let w = w.to_i64().ok_or_else(|| Error::UnsupportedGrading("degree coordinate too large".into()))?;
            match p.coords[j] {
                Coord::Free(k) => free[k] = w * p.free_sign[k],
                Coord::Torsion(k) => torsion[k] = w.rem_euclid(self.torsion[k]),
                Coord::Trivial => unreachable!(),
            }
        }
        Ok(LElement { free, torsion })
    }

    /// A lift of `e` to an integer vector over the original generators.
    pub fn lift_to_generators(&self, e: &LElement) -> Vec<Int> {
        let p = &self.presentation;
        let n = p.relations.cols();
        let w: Vec<Int> = (0..n)
            .map(|j| match p.coords[j] {
                Coord::Trivial => Int::zero(),
                Coord::Free(k) => Int::from(e.free[k] * p.free_sign[k]),
                Coord::Torsion(k) => Int::from(e.torsion[k]),
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| &w[j] * &p.snf.v_inv[(j, i)]).sum()).collect()
    }

    pub fn zero(&self) -> LElement {
        LElement { free: vec![0; self.free_rank], torsion: vec![0; self.torsion.len()] }
    }

    fn reduce(&self, mut e: LElement) -> LElement {
        for (t, d) in e.torsion.iter_mut().zip(&self.torsion) {
            *t = t.rem_euclid(*d);
        }
        e
    }

    pub fn add(&self, a: &LElement, b: &LElement) -> LElement {
        self.reduce(LElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn neg(&self, a: &LElement) -> LElement {
        self.reduce(LElement {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a.torsion.iter().map(|x| -x).collect(),
        })
    }

    pub fn sub(&self, a: &LElement, b: &LElement) -> LElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &LElement) -> LElement {
        self.reduce(LElement {
            free: a.free.iter().map(|x| k * x).collect(),
            torsion: a.torsion.iter().map(|x| k * x).collect(),
        })
    }

    /// Degree of the monomial `x^exps`.
    pub fn monomial_degree(&self, exps: &[u32]) -> LElement {
        let mut acc = self.zero();
        for (e, d) in exps.iter().zip(&self.deg_x) {
            if *e > 0 {
                acc = self.add(&acc, &self.scale(i64::from(*e), d));
            }
        }
        acc
    }

    /// Degree of a nonzero homogeneous polynomial; `None` for zero, error if
    /// the terms have different degrees.
    pub fn poly_degree<F: Field>(&self, p: &Poly<F>) -> Result<Option<LElement>> {
        let mut deg = None;
        for (e, _) in p.terms() {
            let d = self.monomial_degree(e);
            match &deg {
                None => deg = Some(d),
                Some(prev) if *prev != d => {
                    return Err(Error::NotHomogeneous(format!("{p:?} mixes degrees {prev:?} and {d:?}")))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Whether graded pieces of the polynomial ring are finite dimensional in
    /// the sense needed for hom computations: free rank one and every
    /// variable of strictly positive degree.
    pub fn check_positive(&self) -> Result<()> {
        if self.free_rank != 1 {
            return Err(Error::UnsupportedGrading(format!("free rank {} (need 1)", self.free_rank)));
        }
        if let Some(i) = self.deg_x.iter().position(|d| d.free[0] <= 0) {
            return Err(Error::UnsupportedGrading(format!("variable {} has non-positive degree", i + 1)));
        }
        Ok(())
    }

    /// All exponent vectors whose monomial has degree `target`.
    pub fn monomials_of_degree(&self, target: &LElement) -> Result<Vec<Vec<u32>>> {
        self.check_positive()?;
        let weights: Vec<i64> = self.deg_x.iter().map(|d| d.free[0]).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; weights.len()];
        enumerate_weighted(&weights, 0, target.free[0], &mut cur, &mut out);
        out.retain(|e| self.monomial_degree(e) == *target);
        Ok(out)
    }

    /// Representatives of `L / Zc`: the lifts with free coordinate in
    /// `[0, deg c)`, sorted lexicographically.
    pub fn lbar_representatives(&self) -> Result<Vec<LElement>> {
        if self.free_rank != 1 {
            return Err(Error::InfiniteGenerators(format!("grading group has free rank {}", self.free_rank)));
        }
        let cf = self.deg_c.free[0];
        if cf == 0 {
            return Err(Error::InfiniteGenerators("c has no free component".into()));
        }
        let mut reps = vec![];
        for f in 0..cf {
            let mut torsion = vec![0i64; self.torsion.len()];
            loop {
                reps.push(LElement { free: vec![f], torsion: torsion.clone() });
                // odometer over the torsion residues
                let mut k = torsion.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    torsion[k] += 1;
                    if torsion[k] < self.torsion[k] {
                        break;
                    }
                    torsion[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || self.torsion.is_empty() {
                    break;
                }
            }
        }
        Ok(reps)
    }

    /// Every element of the torsion subgroup.
    pub fn torsion_elements(&self) -> Vec<LElement> {
        let mut out = vec![self.zero()];
        for (k, d) in self.torsion.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..*d).map(move |r| {
                        let mut e2 = e.clone();
                        e2.torsion[k] = r;
                        e2
                    })
                })
                .collect();
        }
        out
    }

    /// Order of `L / Zc` when finite.
    pub fn lbar_order(&self) -> Option<i64> {
        if self.free_rank != 1 || self.deg_c.free[0] == 0 {
            return None;
        }
        Some(self.deg_c.free[0] * self.torsion.iter().product::<i64>())
    }

    /// Integer vectors over `(x_1, ..., x_n, c)` generating the relations
    /// that hold among the degrees in this group.
    fn degree_relations(&self) -> Vec<Vec<Int>> {
        let n = self.deg_x.len() + 1;
        let width = self.free_rank + self.torsion.len();
        let mut rows: Vec<Vec<Int>> = self
            .deg_x
            .iter()
            .chain(std::iter::once(&self.deg_c))
            .map(|e| e.coords().into_iter().map(Int::from).collect())
            .collect();
        for (k, d) in self.torsion.iter().enumerate() {
            let mut r = vec![Int::zero(); width];
            r[self.free_rank + k] = Int::from(*d);
            rows.push(r);
        }
        let m = IntMatrix::from_rows_with_cols(&rows, width);
        let snf = smith_normal_form(&m);
        let rank = snf.rank();
        (rank..rows.len()).map(|i| snf.u.row(i)[..n].to_vec()).collect()
    }

    fn evaluate(&self, coeffs: &[Int], perm: &[usize]) -> Result<LElement> {
        let mut acc = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            let k = c.to_i64().ok_or_else(|| Error::UnsupportedGrading("coefficient too large".into()))?;
            let d = if i < perm.len() { &self.deg_x[perm[i]] } else { &self.deg_c };
            acc = self.add(&acc, &self.scale(k, d));
        }
        Ok(acc)
    }

    /// Isomorphism of graded groups: an isomorphism `L -> L'` sending each
    /// `x_i` to `x'_i` and `c` to `c'`. Both groups are generated by the
    /// variable degrees and `c`, so this holds exactly when the relations
    /// among the degrees coincide.
    pub fn is_isomorphic(&self, other: &GradingContext) -> bool {
        let perm: Vec<usize> = (0..self.deg_x.len()).collect();
        self.is_isomorphic_under(other, &perm)
    }

    /// As [`GradingContext::is_isomorphic`], with variable `i` of `self`
    /// matched to variable `perm[i]` of `other`.
    pub fn is_isomorphic_under(&self, other: &GradingContext, perm: &[usize]) -> bool {
        if self.deg_x.len() != other.deg_x.len() || self.free_rank != other.free_rank || self.torsion != other.torsion {
            return false;
        }
        let mut inverse = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let ident: Vec<usize> = (0..perm.len()).collect();
        let forward = self
            .degree_relations()
            .iter()
            .all(|rel| other.evaluate(rel, perm).map(|e| e == other.zero()).unwrap_or(false));
        let backward = other.degree_relations().iter().all(|rel| {
            let permuted: Vec<Int> =
                (0..rel.len()).map(|i| if i < perm.len() { rel[perm[i]].clone() } else { rel[i].clone() }).collect();
            self.evaluate(&permuted, &ident).map(|e| e == self.zero()).unwrap_or(false)
        });
        let _ = inverse;
        forward && backward
    }

    /// Generator vectors for the canonical presentation of this group: one
    /// generator per free or torsion coordinate.
    fn canonical_relations(&self, width: usize, offset: usize) -> Vec<Vec<Int>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let mut r = vec![Int::zero(); width];
                r[offset + self.free_rank + k] = Int::from(*d);
                r
            })
            .collect()
    }

    fn embed(e: &LElement, width: usize, offset: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); width];
        for (i, c) in e.coords().into_iter().enumerate() {
            v[offset + i] = Int::from(c);
        }
        v
    }
}

fn enumerate_weighted(w: &[i64], i: usize, budget: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if budget < 0 {
        return;
    }
    if i == w.len() {
        if budget == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if i + 1 == w.len() {
        if budget % w[i] == 0 {
            cur[i] = (budget / w[i]) as u32;
            out.push(cur.clone());
            cur[i] = 0;
        }
        return;
    }
    let mut k = 0;
    while k * w[i] <= budget {
        cur[i] = k as u32;
        enumerate_weighted(w, i + 1, budget - k * w[i], cur, out);
        k += 1;
    }
    cur[i] = 0;
}

/// The grading group of the invertible polynomial with exponent matrix `a`:
/// generators `x_1..x_n, c` subject to `sum_j a_ij x_j = c` for every row.
pub fn grading_group(a: &IntMatrix) -> Result<GradingContext> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix("exponent matrix must be square".into()));
    }
    let n = a.rows();
    if n > 0 && a.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let rows: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(Int::from(-1));
            r
        })
        .collect();
    let rel = IntMatrix::from_rows_with_cols(&rows, n + 1);
    let unit = |j: usize| -> Vec<Int> { (0..=n).map(|k| Int::from(i64::from(k == j))).collect() };
    let deg_x: Vec<Vec<Int>> = (0..n).map(unit).collect();
    GradingContext::from_presentation(rel, &deg_x, &unit(n))
}

/// Grading group of a disconnected sum: `L1 (+) L2 / (c1 - c2)`. Variables
/// of the first factor come first.
pub fn sum_grading(a: &GradingContext, b: &GradingContext) -> GradingContext {
    let wa = a.free_rank + a.torsion.len();
    let wb = b.free_rank + b.torsion.len();
    let width = wa + wb;
    let mut rows = a.canonical_relations(width, 0);
    rows.extend(b.canonical_relations(width, wa));
    let ca = GradingContext::embed(&a.deg_c, width, 0);
    let cb = GradingContext::embed(&b.deg_c, width, wa);
    rows.push(ca.iter().zip(&cb).map(|(x, y)| x - y).collect());
    let deg_x: Vec<Vec<Int>> = a
        .deg_x
        .iter()
        .map(|e| GradingContext::embed(e, width, 0))
        .chain(b.deg_x.iter().map(|e| GradingContext::embed(e, width, wa)))
        .collect();
    GradingContext::from_presentation(IntMatrix::from_rows_with_cols(&rows, width), &deg_x, &ca)
        .expect("sum of valid gradings")
}

/// Character group `M` of the subgroup `H = C^* . G` of the torus `K`:
/// the quotient of `L` by the torsion characters that are trivial on `G`.
pub fn m_grading(a: &IntMatrix, group: &SymmetryGroup) -> Result<GradingContext> {
    symmetry::check_in_gmax(a, group)?;
    let j = symmetry::j_element(a)?;
    if !group.contains(&j.j) {
        return Err(Error::MissingJ);
    }
    let l = grading_group(a)?;
    let n = a.rows();
    let mut killed = Vec::new();
    for t in l.torsion_elements() {
        if t == l.zero() {
            continue;
        }
        let lift = l.lift_to_generators(&t);
        let trivial_on_g = group.generators().iter().all(|g| {
            // x_i pairs to the i-th residue, c pairs to zero on G_max
            let s: Rat = (0..n).map(|i| Rat::from_integer(lift[i].clone()) * g.residues()[i].clone()).sum();
            s.is_integer()
        });
        if trivial_on_g {
            killed.push(t);
        }
    }
    let width = l.free_rank + l.torsion.len();
    let mut rows = l.canonical_relations(width, 0);
    rows.extend(killed.iter().map(|t| GradingContext::embed(t, width, 0)));
    let deg_x: Vec<Vec<Int>> = l.deg_x.iter().map(|e| GradingContext::embed(e, width, 0)).collect();
    let c = GradingContext::embed(&l.deg_c, width, 0);
    GradingContext::from_presentation(IntMatrix::from_rows_with_cols(&rows, width), &deg_x, &c)
}
