//! Graded matrix factorizations and their morphism spaces.
//!
//! A factorization is stored as two graded free modules `P0 = (+) S(s_a)` and
//! `P1 = (+) S(t_b)` (the `S(s)` generator sits in degree `-s`) with maps
//! `d0: P0 -> P1` of degree zero and `d1: P1 -> P0(c)`, so that both
//! composites are `W` times the identity. It stands for the module
//! `coker(d1: P1(-c) -> P0)`, and its unrolled complex is
//! `K^{2i} = P0(ic)`, `K^{2i+1} = P1(ic)`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{sparse_rank, Field, Int, Poly, Rat, SparseVec};
use crate::grading::{sum_grading, GradingContext, LElement};
use crate::polyforms::{self, AtomKind, InvertiblePolynomial};

pub type PolyMatrix<F> = Vec<Vec<Poly<F>>>;

/// Free module `(+) S(s_i)` recorded by its twists `s_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub shifts: Vec<LElement>,
}

impl GradedFreeModule {
    pub fn rank(&self) -> usize {
        self.shifts.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MatrixFactorization<F: Field = Rat> {
    grading: GradingContext,
    w: Poly<F>,
    p0: GradedFreeModule,
    p1: GradedFreeModule,
    d0: PolyMatrix<F>,
    d1: PolyMatrix<F>,
}

fn mat_mul<F: Field>(a: &PolyMatrix<F>, b: &PolyMatrix<F>, nvars: usize) -> PolyMatrix<F> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Poly::zero(nvars);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn check_shape<F: Field>(m: &PolyMatrix<F>, rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::NotFactorization(format!("{name} is not {rows}x{cols}")));
    }
    Ok(())
}

impl<F: Field> MatrixFactorization<F> {
    /// Validates `d1 d0 = W = d0 d1` and that every entry has the degree
    /// forced by the twists.
    pub fn new(
        grading: GradingContext,
        w: Poly<F>,
        p0: GradedFreeModule,
        p1: GradedFreeModule,
        d0: PolyMatrix<F>,
        d1: PolyMatrix<F>,
    ) -> Result<Self> {
        let n = grading.num_vars();
        if w.nvars() != n {
            return Err(Error::VariableCountMismatch { left: n, right: w.nvars() });
        }
        check_shape(&d0, p1.rank(), p0.rank(), "d0")?;
        check_shape(&d1, p0.rank(), p1.rank(), "d1")?;
        if let Some(p) = d0.iter().chain(&d1).flatten().find(|p| p.nvars() != n) {
            return Err(Error::VariableCountMismatch { left: n, right: p.nvars() });
        }
        if let Some(deg) = grading.poly_degree(&w)? {
            if &deg != grading.deg_c() {
                return Err(Error::NotHomogeneous("W does not have degree c".into()));
            }
        }
        let mf = MatrixFactorization { grading, w, p0, p1, d0, d1 };
        mf.check_square()?;
        mf.audit_degrees()?;
        Ok(mf)
    }

    fn check_square(&self) -> Result<()> {
        let n = self.nvars();
        for (prod, name) in [(mat_mul(&self.d1, &self.d0, n), "d1*d0"), (mat_mul(&self.d0, &self.d1, n), "d0*d1")] {
            for (i, row) in prod.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    let expected = if i == j { self.w.clone() } else { Poly::zero(n) };
                    if *p != expected {
                        return Err(Error::NotFactorization(format!("{name} differs from W*Id at ({i},{j})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn audit_degrees(&self) -> Result<()> {
        let g = &self.grading;
        for (a, t) in self.p1.shifts.iter().enumerate() {
            for (b, s) in self.p0.shifts.iter().enumerate() {
                let want0 = g.sub(t, s);
                let want1 = g.add(&g.sub(s, t), g.deg_c());
                for (p, want, name) in [(&self.d0[a][b], want0, "d0"), (&self.d1[b][a], want1, "d1")] {
                    if let Some(d) = g.poly_degree(p)? {
                        if d != want {
                            return Err(Error::NotHomogeneous(format!(
                                "{name} entry has degree {d:?}, expected {want:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn w(&self) -> &Poly<F> {
        &self.w
    }

    pub fn p0(&self) -> &GradedFreeModule {
        &self.p0
    }

    pub fn p1(&self) -> &GradedFreeModule {
        &self.p1
    }

    pub fn d0(&self) -> &PolyMatrix<F> {
        &self.d0
    }

    pub fn d1(&self) -> &PolyMatrix<F> {
        &self.d1
    }

    pub fn nvars(&self) -> usize {
        self.w.nvars()
    }

    pub fn rank(&self) -> usize {
        self.p0.rank()
    }

    /// Twists of `K^i`.
    fn twists(&self, i: i64) -> Vec<LElement> {
        let g = &self.grading;
        let base = if i.rem_euclid(2) == 0 { &self.p0 } else { &self.p1 };
        let t = g.scale(i.div_euclid(2), g.deg_c());
        base.shifts.iter().map(|s| g.add(s, &t)).collect()
    }

    /// The map `K^i -> K^{i+1}`.
    fn diff(&self, i: i64) -> &PolyMatrix<F> {
        if i.rem_euclid(2) == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }

    /// Human readable JSON: twists as coordinate arrays, entries as strings.
    pub fn describe(&self, names: &[String]) -> serde_json::Value {
        let mat = |m: &PolyMatrix<F>| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(|p| p.render(names)).collect()).collect()
        };
        let tw = |m: &GradedFreeModule| -> Vec<Vec<i64>> { m.shifts.iter().map(LElement::coords).collect() };
        serde_json::json!({
            "w": self.w.render(names),
            "p0": tw(&self.p0),
            "p1": tw(&self.p1),
            "d0": mat(&self.d0),
            "d1": mat(&self.d1),
        })
    }
}

/// Rank-one factorization with `d1 = a`, `d0 = b`, so it represents
/// `S/(a)` twisted by `shift`.
pub fn mf_from_pair<F: Field>(
    grading: &GradingContext,
    w: &Poly<F>,
    a: &Poly<F>,
    b: &Poly<F>,
    shift: &LElement,
) -> Result<MatrixFactorization<F>> {
    if a.nvars() != w.nvars() || b.nvars() != w.nvars() {
        return Err(Error::VariableCountMismatch { left: w.nvars(), right: a.nvars().max(b.nvars()) });
    }
    if &(a * b) != w {
        return Err(Error::NotFactorization("a*b differs from W".into()));
    }
    let db = grading.poly_degree(b)?.ok_or_else(|| Error::NotFactorization("zero factor".into()))?;
    let p0 = GradedFreeModule { shifts: vec![shift.clone()] };
    let p1 = GradedFreeModule { shifts: vec![grading.add(shift, &db)] };
    MatrixFactorization::new(grading.clone(), w.clone(), p0, p1, vec![vec![b.clone()]], vec![vec![a.clone()]])
}

/// `K(a)`: every twist increased by `a`.
pub fn shift_mf<F: Field>(k: &MatrixFactorization<F>, a: &LElement) -> MatrixFactorization<F> {
    let g = &k.grading;
    let mv = |m: &GradedFreeModule| GradedFreeModule { shifts: m.shifts.iter().map(|s| g.add(s, a)).collect() };
    MatrixFactorization { p0: mv(&k.p0), p1: mv(&k.p1), ..k.clone() }
}

/// `K[1]`: components swapped, both maps negated.
pub fn translate_mf<F: Field>(k: &MatrixFactorization<F>) -> MatrixFactorization<F> {
    let g = &k.grading;
    let neg = |m: &PolyMatrix<F>| -> PolyMatrix<F> { m.iter().map(|r| r.iter().map(|p| -p).collect()).collect() };
    MatrixFactorization {
        grading: k.grading.clone(),
        w: k.w.clone(),
        p0: k.p1.clone(),
        p1: GradedFreeModule { shifts: k.p0.shifts.iter().map(|s| g.add(s, g.deg_c())).collect() },
        d0: neg(&k.d1),
        d1: neg(&k.d0),
    }
}

/// Factorization of the residue field for `x^{n-1} y + y^2`, given by the
/// matrix `[[-y, x^{n-2} y], [x, y]]` in both directions.
pub fn residue_mf_d(n: u32) -> Result<MatrixFactorization<Rat>> {
    if n < 3 {
        return Err(Error::InvalidRank { kind: "D".into(), rank: n as usize });
    }
    let p = polyforms::atom(AtomKind::Dt(n))?;
    let g = p.grading();
    let x = Poly::<Rat>::var(2, 0);
    let y = Poly::<Rat>::var(2, 1);
    let xn2y = Poly::monomial(2, vec![n - 2, 1], Rat::from_integer(1.into()));
    let m = vec![vec![-&y, xn2y], vec![x, y]];
    let deg = |v: i64| LElement { free: vec![v], torsion: vec![] };
    let n = i64::from(n);
    let p0 = GradedFreeModule { shifts: vec![deg(n - 2), deg(0)] };
    let p1 = GradedFreeModule { shifts: vec![deg(2 * n - 3), deg(n - 1)] };
    MatrixFactorization::new(g.clone(), p.w().clone(), p0, p1, m.clone(), m)
}

/// Data of the Koszul stabilization `k = iota_eta + gamma ^ .` on forms
/// `dx_I`, with `I` encoded as a bit mask.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct KoszulData<F: Field = Rat> {
    pub gamma: Vec<Poly<F>>,
    pub even_forms: Vec<u32>,
    pub odd_forms: Vec<u32>,
    pub shifts: Vec<LElement>,
}

/// The default choice: each monomial goes to its lowest-index variable.
pub fn default_gamma_choice<F: Field>(w: &Poly<F>) -> Vec<usize> {
    w.terms().map(|(e, _)| e.iter().position(|&v| v > 0).unwrap_or(0)).collect()
}

/// `gamma_i` from an assignment of the terms of `w` (in term order) to
/// variables occurring in them.
pub fn gamma_from_choice<F: Field>(w: &Poly<F>, choice: &[usize]) -> Result<Vec<Poly<F>>> {
    let n = w.nvars();
    if choice.len() != w.num_terms() {
        return Err(Error::InvalidGamma(format!("{} choices for {} monomials", choice.len(), w.num_terms())));
    }
    let mut gamma = vec![Poly::zero(n); n];
    for ((e, c), &i) in w.terms().zip(choice) {
        if i >= n || e[i] == 0 {
            return Err(Error::InvalidGamma(format!("variable {} does not divide monomial {e:?}", i + 1)));
        }
        let mut q = e.clone();
        q[i] -= 1;
        gamma[i].add_term(q, c.clone());
    }
    Ok(gamma)
}

fn koszul_shift(g: &GradingContext, mask: u32) -> LElement {
    let mut s = g.zero();
    for (i, d) in g.deg_x().iter().enumerate() {
        if mask >> i & 1 == 1 {
            s = g.add(&s, d);
        }
    }
    let half = i64::from(mask.count_ones().div_ceil(2));
    g.neg(&g.sub(&s, &g.scale(half, g.deg_c())))
}

pub fn koszul_data<F: Field>(grading: &GradingContext, w: &Poly<F>, gamma: Vec<Poly<F>>) -> Result<KoszulData<F>> {
    let n = w.nvars();
    if gamma.len() != n || grading.num_vars() != n {
        return Err(Error::InvalidGamma(format!("{} gamma components for {} variables", gamma.len(), n)));
    }
    let mut sum = Poly::zero(n);
    for (i, gi) in gamma.iter().enumerate() {
        sum = &sum + &(gi * &Poly::var(n, i));
    }
    if &sum != w {
        return Err(Error::InvalidGamma("sum of gamma_i x_i differs from W".into()));
    }
    let all: Vec<u32> = (0..1u32 << n).collect();
    let even_forms: Vec<u32> = all.iter().copied().filter(|m| m.count_ones() % 2 == 0).collect();
    let odd_forms: Vec<u32> = all.iter().copied().filter(|m| m.count_ones() % 2 == 1).collect();
    let shifts = all.iter().map(|&m| koszul_shift(grading, m)).collect();
    Ok(KoszulData { gamma, even_forms, odd_forms, shifts })
}

/// Matrix of `iota_eta + gamma ^ .` from the forms `src` to the forms `dst`.
fn koszul_operator<F: Field>(n: usize, gamma: &[Poly<F>], src: &[u32], dst: &[u32]) -> PolyMatrix<F> {
    let pos: HashMap<u32, usize> = dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut out = vec![vec![Poly::zero(n); src.len()]; dst.len()];
    for (col, &mask) in src.iter().enumerate() {
        let mut k = 0;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                // iota_eta(dx_I) = sum_k (-1)^{k} x_{i_k} dx_{I - i_k}
                let sign = if k % 2 == 0 { F::one() } else { -F::one() };
                let row = pos[&(mask & !(1 << i))];
                out[row][col] = &out[row][col] + &Poly::var(n, i).scale(&sign);
                k += 1;
            } else if !gamma[i].is_zero() {
                let before = (mask & ((1 << i) - 1)).count_ones();
                let sign = if before % 2 == 0 { F::one() } else { -F::one() };
                let row = pos[&(mask | 1 << i)];
                out[row][col] = &out[row][col] + &gamma[i].scale(&sign);
            }
        }
    }
    out
}

/// Koszul stabilization of the residue field for an explicit `gamma`.
pub fn koszul_mf_with<F: Field>(
    grading: &GradingContext,
    w: &Poly<F>,
    gamma: Vec<Poly<F>>,
) -> Result<MatrixFactorization<F>> {
    let n = w.nvars();
    let data = koszul_data(grading, w, gamma)?;
    let d0 = koszul_operator(n, &data.gamma, &data.even_forms, &data.odd_forms);
    let d1 = koszul_operator(n, &data.gamma, &data.odd_forms, &data.even_forms);
    let module =
        |forms: &[u32]| GradedFreeModule { shifts: forms.iter().map(|&m| data.shifts[m as usize].clone()).collect() };
    MatrixFactorization::new(grading.clone(), w.clone(), module(&data.even_forms), module(&data.odd_forms), d0, d1)
}

/// Koszul stabilization for `p`, with `gamma_choice` assigning each term of
/// `W` to a variable (the default choice when `None`).
pub fn koszul_mf(p: &InvertiblePolynomial, gamma_choice: Option<&[usize]>) -> Result<MatrixFactorization<Rat>> {
    let choice = match gamma_choice {
        Some(c) => c.to_vec(),
        None => default_gamma_choice(p.w()),
    };
    let gamma = gamma_from_choice(p.w(), &choice)?;
    koszul_mf_with(p.grading(), p.w(), gamma)
}

fn embed_element(g: &GradingContext, e: &LElement, width: usize, offset: usize) -> Vec<Int> {
    let mut v = vec![Int::from(0); width];
    for (i, c) in e.coords().into_iter().enumerate() {
        v[offset + i] = Int::from(c);
    }
    let _ = g;
    v
}

/// Tensor product over disjoint variable sets: the variables of `k1` come
/// first, and the grading is the sum grading.
pub fn tensor_mf<F: Field>(k1: &MatrixFactorization<F>, k2: &MatrixFactorization<F>) -> MatrixFactorization<F> {
    let (g1, g2) = (&k1.grading, &k2.grading);
    let g = sum_grading(g1, g2);
    let (n1, n2) = (k1.nvars(), k2.nvars());
    let n = n1 + n2;
    let w1 = g1.free_rank() + g1.torsion().len();
    let width = w1 + g2.free_rank() + g2.torsion().len();
    let lift1 = |e: &LElement| g.element_from_vector(&embed_element(g1, e, width, 0)).expect("embedding");
    let lift2 = |e: &LElement| g.element_from_vector(&embed_element(g2, e, width, w1)).expect("embedding");
    let c = g.deg_c().clone();

    let (a0, a1, b0, b1) = (k1.p0.rank(), k1.p1.rank(), k2.p0.rank(), k2.p1.rank());
    // P0 = P0(x)P0 + P1(x)P1(-c), P1 = P1(x)P0 + P0(x)P1
    let idx_00 = |i: usize, j: usize| i * b0 + j;
    let idx_11 = |i: usize, j: usize| a0 * b0 + i * b1 + j;
    let idx_10 = |i: usize, j: usize| i * b0 + j;
    let idx_01 = |i: usize, j: usize| a1 * b0 + i * b1 + j;
    let r0 = a0 * b0 + a1 * b1;
    let r1 = a1 * b0 + a0 * b1;

    let mut s0 = vec![g.zero(); r0];
    let mut s1 = vec![g.zero(); r1];
    for i in 0..a0 {
        for j in 0..b0 {
            s0[idx_00(i, j)] = g.add(&lift1(&k1.p0.shifts[i]), &lift2(&k2.p0.shifts[j]));
        }
        for j in 0..b1 {
            s1[idx_01(i, j)] = g.add(&lift1(&k1.p0.shifts[i]), &lift2(&k2.p1.shifts[j]));
        }
    }
    for i in 0..a1 {
        for j in 0..b1 {
            s0[idx_11(i, j)] = g.sub(&g.add(&lift1(&k1.p1.shifts[i]), &lift2(&k2.p1.shifts[j])), &c);
        }
        for j in 0..b0 {
            s1[idx_10(i, j)] = g.add(&lift1(&k1.p1.shifts[i]), &lift2(&k2.p0.shifts[j]));
        }
    }

    let e1 = |p: &Poly<F>| p.embed(0, n);
    let e2 = |p: &Poly<F>| p.embed(n1, n);
    let one = Poly::<F>::one(n);
    let mut d0 = vec![vec![Poly::zero(n); r0]; r1];
    let mut d1 = vec![vec![Poly::zero(n); r1]; r0];
    let add = |m: &mut PolyMatrix<F>, r: usize, c: usize, p: Poly<F>| {
        m[r][c] = &m[r][c] + &p;
    };
    let _ = &one;
    // d0 on P0(x)P0: d0 (x) 1 + 1 (x) d0
    for i in 0..a0 {
        for j in 0..b0 {
            let col = idx_00(i, j);
            for i2 in 0..a1 {
                add(&mut d0, idx_10(i2, j), col, e1(&k1.d0[i2][i]));
            }
            for j2 in 0..b1 {
                add(&mut d0, idx_01(i, j2), col, e2(&k2.d0[j2][j]));
            }
        }
    }
    // d0 on P1(x)P1: d1 (x) 1 - 1 (x) d1
    for i in 0..a1 {
        for j in 0..b1 {
            let col = idx_11(i, j);
            for i2 in 0..a0 {
                add(&mut d0, idx_01(i2, j), col, e1(&k1.d1[i2][i]));
            }
            for j2 in 0..b0 {
                add(&mut d0, idx_10(i, j2), col, -&e2(&k2.d1[j2][j]));
            }
        }
    }
    // d1 on P1(x)P0: d1 (x) 1 - 1 (x) d0
    for i in 0..a1 {
        for j in 0..b0 {
            let col = idx_10(i, j);
            for i2 in 0..a0 {
                add(&mut d1, idx_00(i2, j), col, e1(&k1.d1[i2][i]));
            }
            for j2 in 0..b1 {
                add(&mut d1, idx_11(i, j2), col, -&e2(&k2.d0[j2][j]));
            }
        }
    }
    // d1 on P0(x)P1: d0 (x) 1 + 1 (x) d1
    for i in 0..a0 {
        for j in 0..b1 {
            let col = idx_01(i, j);
            for i2 in 0..a1 {
                add(&mut d1, idx_11(i2, j), col, e1(&k1.d0[i2][i]));
            }
            for j2 in 0..b0 {
                add(&mut d1, idx_00(i, j2), col, e2(&k2.d1[j2][j]));
            }
        }
    }
    let w = &e1(&k1.w) + &e2(&k2.w);
    MatrixFactorization::new(g, w, GradedFreeModule { shifts: s0 }, GradedFreeModule { shifts: s1 }, d0, d1)
        .expect("tensor product of factorizations is a factorization")
}

/// The free module of rank one in degree zero over the polynomial ring in
/// no variables, with `W = 0`: the unit for [`tensor_mf`].
pub fn unit_mf() -> MatrixFactorization<Rat> {
    let g = GradingContext::trivial();
    MatrixFactorization {
        w: Poly::zero(0),
        p0: GradedFreeModule { shifts: vec![g.zero()] },
        p1: GradedFreeModule { shifts: vec![] },
        d0: vec![],
        d1: vec![vec![]],
        grading: g,
    }
}

type SlotKey = (u8, usize, usize, Vec<u32>);

/// Degree-zero part of `Hom^p(K, H)`: pairs `K^0 -> H^p`, `K^1 -> H^{p+1}`.
struct HomSpace {
    coords: Vec<SlotKey>,
    index: HashMap<SlotKey, usize>,
}

struct MonomialCache<'a> {
    grading: &'a GradingContext,
    cache: HashMap<LElement, Vec<Vec<u32>>>,
}

impl MonomialCache<'_> {
    fn get(&mut self, d: &LElement) -> Result<&Vec<Vec<u32>>> {
        if !self.cache.contains_key(d) {
            let m = self.grading.monomials_of_degree(d)?;
            self.cache.insert(d.clone(), m);
        }
        Ok(&self.cache[d])
    }
}

fn hom_space<F: Field>(
    k: &MatrixFactorization<F>,
    h: &MatrixFactorization<F>,
    p: i64,
    mons: &mut MonomialCache,
) -> Result<HomSpace> {
    let g = &k.grading;
    let mut coords = Vec::new();
    for block in 0..2u8 {
        let src = k.twists(i64::from(block));
        let dst = h.twists(p + i64::from(block));
        for (gi, t) in dst.iter().enumerate() {
            for (fi, s) in src.iter().enumerate() {
                for m in mons.get(&g.sub(t, s))? {
                    coords.push((block, gi, fi, m.clone()));
                }
            }
        }
    }
    let index = coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(HomSpace { coords, index })
}

fn add_product<F: Field>(
    acc: &mut HashMap<usize, F>,
    target: &HomSpace,
    slot: (u8, usize, usize),
    poly: &Poly<F>,
    mono: &[u32],
    sign: &F,
) {
    for (e, c) in poly.terms() {
        let key: Vec<u32> = e.iter().zip(mono).map(|(a, b)| a + b).collect();
        let idx = target.index[&(slot.0, slot.1, slot.2, key)];
        let v = acc.remove(&idx).unwrap_or_else(F::zero) + c.clone() * sign.clone();
        if !v.is_zero() {
            acc.insert(idx, v);
        }
    }
}

/// Rank of the differential `Hom^p -> Hom^{p+1}`, with
/// `d(f) = d_H f - (-1)^p f d_K`.
fn differential_rank<F: Field>(
    k: &MatrixFactorization<F>,
    h: &MatrixFactorization<F>,
    p: i64,
    src: &HomSpace,
    dst: &HomSpace,
) -> usize {
    let sign = if p.rem_euclid(2) == 0 { -F::one() } else { F::one() };
    let one = F::one();
    let images = src.coords.iter().map(|(block, gi, fi, m)| {
        let mut acc: HashMap<usize, F> = HashMap::new();
        let (gi, fi) = (*gi, *fi);
        let dh = h.diff(p + i64::from(*block));
        for (g2, row) in dh.iter().enumerate() {
            add_product(&mut acc, dst, (*block, g2, fi), &row[gi], m, &one);
        }
        if *block == 0 {
            // f d1_K : K^1 -> K^2 -> H^{p+2}
            for (f2, poly) in k.d1[fi].iter().enumerate() {
                add_product(&mut acc, dst, (1, gi, f2), poly, m, &sign);
            }
        } else {
            // f d0_K : K^0 -> K^1 -> H^{p+1}
            for (f2, poly) in k.d0[fi].iter().enumerate() {
                add_product(&mut acc, dst, (0, gi, f2), poly, m, &sign);
            }
        }
        let mut v: SparseVec<F> = acc.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        v
    });
    sparse_rank(images)
}

fn check_compatible<F: Field>(k: &MatrixFactorization<F>, h: &MatrixFactorization<F>) -> Result<()> {
    if k.w != h.w || k.grading != h.grading {
        return Err(Error::MismatchedPotential);
    }
    k.grading.check_positive()
}

/// `dim Hom(K, H[k])` in the graded singularity category, from the
/// cohomology of the degree-zero part of the hom complex.
pub fn hom_dim<F: Field>(k: &MatrixFactorization<F>, h: &MatrixFactorization<F>, shift: i64) -> Result<usize> {
    check_compatible(k, h)?;
    let mut mons = MonomialCache { grading: &k.grading, cache: HashMap::new() };
    let prev = hom_space(k, h, shift - 1, &mut mons)?;
    let cur = hom_space(k, h, shift, &mut mons)?;
    let next = hom_space(k, h, shift + 1, &mut mons)?;
    if cur.coords.is_empty() {
        return Ok(0);
    }
    let r_out = differential_rank(k, h, shift, &cur, &next);
    let r_in = differential_rank(k, h, shift - 1, &prev, &cur);
    Ok(cur.coords.len() - r_out - r_in)
}

/// Table of `dim Hom(E_i, E_j[k])` for `k` in a closed window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub schema: u32,
    pub objects: Vec<String>,
    pub window: [i64; 2],
    /// `dims[i][j][k - window[0]]`
    pub dims: Vec<Vec<Vec<usize>>>,
}

impl ExtTable {
    pub fn get(&self, i: usize, j: usize, k: i64) -> usize {
        if k < self.window[0] || k > self.window[1] {
            return 0;
        }
        self.dims[i][j][(k - self.window[0]) as usize]
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Sum of all entries.
    pub fn total(&self) -> usize {
        self.dims.iter().flatten().flatten().sum()
    }
}

/// Hom dimensions between all pairs of a collection over `window`,
/// computed in parallel and assembled in a fixed order.
pub fn ext_table<F: Field>(collection: &[(String, MatrixFactorization<F>)], window: (i64, i64)) -> Result<ExtTable> {
    let (lo, hi) = window;
    let width = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    let n = collection.len();
    let cells: Vec<(usize, usize, i64)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (lo..=hi).map(move |k| (i, j, k)))).collect();
    let values = cells
        .par_iter()
        .map(|&(i, j, k)| hom_dim(&collection[i].1, &collection[j].1, k))
        .collect::<Result<Vec<_>>>()?;
    let mut dims = vec![vec![vec![0; width]; n]; n];
    for (&(i, j, k), v) in cells.iter().zip(values) {
        dims[i][j][(k - lo) as usize] = v;
    }
    Ok(ExtTable { schema: 1, objects: collection.iter().map(|(l, _)| l.clone()).collect(), window: [lo, hi], dims })
}

/// Stabilized residue field of a single atom in its own grading.
fn atom_residue(kind: AtomKind) -> Result<MatrixFactorization<Rat>> {
    let p = polyforms::atom(kind)?;
    match kind {
        AtomKind::A(m) => {
            let x = Poly::var(1, 0);
            mf_from_pair(p.grading(), p.w(), &x, &x.pow(m), &p.grading().zero())
        }
        AtomKind::Dt(n) => residue_mf_d(n),
        AtomKind::D(_) => koszul_mf(&p, None),
    }
}

/// Stabilized residue field of `p`: tensor products of the atom pieces when
/// `p` is their disconnected sum in order, else the Koszul stabilization.
pub fn residue_mf(p: &InvertiblePolynomial) -> Result<MatrixFactorization<Rat>> {
    let mut canonical: Option<(InvertiblePolynomial, MatrixFactorization<Rat>)> = None;
    for atom in p.atoms() {
        let q = polyforms::atom(atom.kind)?;
        let k = atom_residue(atom.kind)?;
        canonical = Some(match canonical {
            None => (q, k),
            Some((cp, ck)) => (polyforms::st_sum(&cp, &q), tensor_mf(&ck, &k)),
        });
    }
    match canonical {
        Some((cp, ck)) if cp.w() == p.w() && cp.grading() == p.grading() => Ok(ck),
        _ => koszul_mf(p, None),
    }
}

/// The generator `E = (+)_{l in L/Zc} S/m(l)`, one summand per
/// representative.
pub fn generator_e(p: &InvertiblePolynomial) -> Result<Vec<MatrixFactorization<Rat>>> {
    let reps = p.grading().lbar_representatives()?;
    p.grading().check_positive()?;
    let base = residue_mf(p)?;
    Ok(reps.iter().map(|r| shift_mf(&base, r)).collect())
}

/// `sum_k dim Hom(K, H[k])`, widening the window until it is bordered by
/// `margin` consecutive zeros on each side.
pub fn total_hom<F: Field>(k: &MatrixFactorization<F>, h: &MatrixFactorization<F>, margin: usize) -> Result<usize> {
    let mut total = 0;
    for dir in [1i64, -1] {
        let mut zeros = 0;
        let mut i = if dir == 1 { 0 } else { -1 };
        while zeros < margin {
            let v = hom_dim(k, h, i)?;
            total += v;
            zeros = if v == 0 { zeros + 1 } else { 0 };
            i += dir;
        }
    }
    Ok(total)
}

/// Total dimension of the cohomology of `End(E)` for the generator of
/// [`generator_e`]. Only differences of representatives matter, and a
/// twist by `c` is a shift by two, so one sum per representative suffices.
pub fn endomorphism_total(p: &InvertiblePolynomial, margin: usize) -> Result<usize> {
    let g = p.grading();
    let reps = g.lbar_representatives()?;
    let base = residue_mf(p)?;
    let per_rep = reps.par_iter().map(|r| total_hom(&base, &shift_mf(&base, r), margin)).collect::<Result<Vec<_>>>()?;
    Ok(reps.len() * per_rep.iter().sum::<usize>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;

    fn z(v: i64) -> LElement {
        LElement { free: vec![v], torsion: vec![] }
    }

    fn d_t(n: u32) -> InvertiblePolynomial {
        polyforms::atom(AtomKind::Dt(n)).unwrap()
    }

    fn r_mod_y(n: u32) -> MatrixFactorization {
        let p = d_t(n);
        let y = Poly::var(2, 1);
        let b = &Poly::var_pow(2, 0, n - 1) + &y;
        mf_from_pair(p.grading(), p.w(), &y, &b, &z(0)).unwrap()
    }

    #[test]
    fn pairs_for_d4_transpose() {
        let k = r_mod_y(4);
        assert_eq!(k.p1().shifts, vec![z(3)]);
        let p = d_t(4);
        let y = Poly::var(2, 1);
        let b = &Poly::var_pow(2, 0, 3) + &y;
        assert!(mf_from_pair(p.grading(), p.w(), &b, &y, &z(0)).is_ok());
        let x = Poly::var(2, 0);
        assert!(matches!(mf_from_pair(p.grading(), p.w(), &x, &y, &z(0)), Err(Error::NotFactorization(_))));
    }

    #[test]
    fn residue_d_squares_to_w() {
        for n in 3..=7 {
            let k = residue_mf_d(n).unwrap();
            assert_eq!(k.p0().shifts, vec![z(n as i64 - 2), z(0)]);
            assert_eq!(k.p1().shifts, vec![z(2 * n as i64 - 3), z(n as i64 - 1)]);
        }
        assert!(residue_mf_d(2).is_err());
    }

    #[test]
    fn koszul_one_variable() {
        let p = polyforms::atom(AtomKind::A(1)).unwrap();
        let k = koszul_mf(&p, None).unwrap();
        let x = Poly::var(1, 0);
        assert_eq!(k.d0(), &vec![vec![x.clone()]]);
        assert_eq!(k.d1(), &vec![vec![x]]);
        assert_eq!(k.p1().shifts, vec![z(1)]);
    }

    #[test]
    fn koszul_rejects_bad_gamma() {
        let p = d_t(4);
        // terms of x^3 y + y^2 in order: y^2, x^3 y
        assert!(koszul_mf(&p, Some(&[1, 0])).is_ok());
        assert!(koszul_mf(&p, Some(&[1, 1])).is_ok());
        assert!(matches!(koszul_mf(&p, Some(&[0, 0])), Err(Error::InvalidGamma(_))));
        assert!(matches!(koszul_mf(&p, Some(&[1])), Err(Error::InvalidGamma(_))));
    }

    #[test]
    fn translate_twice_is_shift_by_c() {
        let k = residue_mf_d(4).unwrap();
        let c = k.grading().deg_c().clone();
        assert_eq!(translate_mf(&translate_mf(&k)), shift_mf(&k, &c));
        assert_eq!(shift_mf(&k, &z(0)), k);
        assert_eq!(translate_mf(&shift_mf(&k, &z(2))), shift_mf(&translate_mf(&k), &z(2)));
    }

    #[test]
    fn tensor_of_fermat_quadrics() {
        let a1 = polyforms::atom(AtomKind::A(1)).unwrap();
        let k = koszul_mf(&a1, None).unwrap();
        let t = tensor_mf(&k, &k);
        assert_eq!(t.rank(), 2);
        assert_eq!(t.w().num_terms(), 2);
        let u = tensor_mf(&k, &unit_mf());
        assert_eq!(u.d0(), k.d0());
        assert_eq!(u.d1(), k.d1());
    }

    #[test]
    fn endomorphisms_of_residue_field() {
        let a1 = polyforms::atom(AtomKind::A(1)).unwrap();
        let k = koszul_mf(&a1, None).unwrap();
        assert_eq!(hom_dim(&k, &k, 0).unwrap(), 1);
        assert_eq!(hom_dim(&k, &k, 1).unwrap(), 0);
        assert_eq!(hom_dim(&r_mod_y(4), &r_mod_y(4), 0).unwrap(), 1);
    }

    #[test]
    fn periodicity_up_to_twist() {
        let k = residue_mf_d(4).unwrap();
        let h = r_mod_y(4);
        let c = k.grading().deg_c().clone();
        for s in -3..3 {
            for t in -2..4 {
                let hs = shift_mf(&h, &z(s));
                assert_eq!(hom_dim(&k, &hs, t + 2).unwrap(), hom_dim(&k, &shift_mf(&hs, &c), t).unwrap());
            }
        }
    }

    #[test]
    fn ext_table_shapes() {
        let a1 = polyforms::atom(AtomKind::A(1)).unwrap();
        let k = koszul_mf(&a1, None).unwrap();
        let t = ext_table(&[("R/m".to_string(), k)], (-1, 1)).unwrap();
        assert_eq!(t.dims, vec![vec![vec![0, 1, 0]]]);
        let empty = ext_table::<Rat>(&[], (-4, 4)).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn generator_sizes() {
        assert_eq!(generator_e(&polyforms::atom(AtomKind::A(2)).unwrap()).unwrap().len(), 3);
        assert_eq!(generator_e(&d_t(4)).unwrap().len(), 6);
        let s = polyforms::parse_expression("A1+A1").unwrap();
        assert_eq!(generator_e(&s).unwrap().len(), 4);
    }

    #[test]
    fn serde_roundtrip() {
        let k = residue_mf_d(4).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        let back: MatrixFactorization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let _ = rat(1, 2);
    }
}
