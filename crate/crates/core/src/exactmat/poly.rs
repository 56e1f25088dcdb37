//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{Field, Rat};
use crate::error::{Error, Result};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Polynomial in a fixed number of variables. Terms are keyed by exponent
/// vector in a `BTreeMap`, so iteration (and therefore printing) follows the
/// lexicographic order of exponents and is reproducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field = Rat> {
    nvars: usize,
    terms: BTreeMap<Exponents, F>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<(Exponents, String)>,
}

impl<F: Field> Serialize for Poly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.encode())).collect() }
            .serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for Poly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut p = Poly::zero(repr.nvars);
        for (e, c) in repr.terms {
            if e.len() != repr.nvars {
                return Err(D::Error::custom("exponent vector of wrong length"));
            }
            let c = F::decode(&c).ok_or_else(|| D::Error::custom(format!("bad coefficient {c:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: F) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::monomial(nvars, exps, F::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> F {
        self.terms.get(exps).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: F) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let nv = v.clone() + c;
                if nv.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = nv;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect() }
    }

    /// Multiplies by the monomial `c * x^exps`.
    pub fn mul_monomial(&self, exps: &[u32], c: &F) -> Self {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.clone() * F::from_i64(i64::from(e[i])));
        }
        out
    }

    /// Divides by `x_i` exactly; `None` if some term lacks `x_i`.
    pub fn div_var(&self, i: usize) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                return None;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.clone());
        }
        Some(out)
    }

    /// Re-embeds into a ring with `total` variables, placing this ring's
    /// variables at `offset..offset + nvars`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        assert!(offset + self.nvars <= total, "embedding out of range");
        Poly {
            nvars: total,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0; total];
                    ne[offset..offset + self.nvars].copy_from_slice(e);
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0; self.nvars];
                    for (i, &p) in perm.iter().enumerate() {
                        ne[p] = e[i];
                    }
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Text form using the given variable names, highest monomial first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = c.sign_split();
            let mono = render_monomial(e, names);
            let body = match (abs.is_one(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => abs.render(),
                (false, false) => format!("{}*{}", abs.render(), mono),
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }
}

/// Default variable names `x1, x2, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn render_monomial(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
        .collect();
    parts.join("*")
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.nvars)))
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.nvars)))
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        self.try_add(rhs).expect("polynomial rings differ")
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        self.try_sub(rhs).expect("polynomial rings differ")
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        self.try_mul(rhs).expect("polynomial rings differ")
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.scale(&-F::one())
    }
}

/// `poly_mul` in free-function form.
pub fn poly_mul<F: Field>(p: &Poly<F>, q: &Poly<F>) -> Result<Poly<F>> {
    p.try_mul(q)
}

pub fn poly_add<F: Field>(p: &Poly<F>, q: &Poly<F>) -> Result<Poly<F>> {
    p.try_add(q)
}

pub fn poly_partial<F: Field>(p: &Poly<F>, i: usize) -> Poly<F> {
    p.partial(i)
}
