//! Invertible polynomials of type A and D and their disconnected sums.

use std::fmt;
use std::ops::Deref;

use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{Int, IntMatrix, Poly, Rat};
use crate::grading::{grading_group, sum_grading, GradingContext};

/// Square exponent matrix with non-negative entries, no zero row and
/// non-zero determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntMatrix", into = "IntMatrix")]
pub struct ExponentMatrix(IntMatrix);

impl ExponentMatrix {
    pub fn new(a: IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidMatrix(format!("{}x{} is not square", a.rows(), a.cols())));
        }
        for i in 0..a.rows() {
            let row = a.row(i);
            if row.iter().any(Signed::is_negative) {
                return Err(Error::InvalidMatrix(format!("row {} has a negative entry", i + 1)));
            }
            if row.iter().all(Zero::is_zero) {
                return Err(Error::InvalidMatrix(format!("row {} is zero", i + 1)));
            }
        }
        if a.rows() > 0 && a.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(ExponentMatrix(a))
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect();
        Self::new(IntMatrix::from_rows_with_cols(&rows, n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        ExponentMatrix(self.0.transpose())
    }
}

impl Deref for ExponentMatrix {
    type Target = IntMatrix;

    fn deref(&self) -> &IntMatrix {
        &self.0
    }
}

impl TryFrom<IntMatrix> for ExponentMatrix {
    type Error = Error;

    fn try_from(a: IntMatrix) -> Result<Self> {
        Self::new(a)
    }
}

impl From<ExponentMatrix> for IntMatrix {
    fn from(a: ExponentMatrix) -> IntMatrix {
        a.0
    }
}

/// Shape of an atomic summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomKind {
    /// `x^{m+1}`
    A(u32),
    /// `x^{n-1} + x y^2`
    D(u32),
    /// `x^{n-1} y + y^2`
    Dt(u32),
}

impl AtomKind {
    pub fn nvars(self) -> usize {
        match self {
            AtomKind::A(_) => 1,
            AtomKind::D(_) | AtomKind::Dt(_) => 2,
        }
    }

    pub fn transpose(self) -> Self {
        match self {
            AtomKind::A(m) => AtomKind::A(m),
            AtomKind::D(n) => AtomKind::Dt(n),
            AtomKind::Dt(n) => AtomKind::D(n),
        }
    }

    /// Exponent matrix in the variable order `(x, y)`.
    pub fn matrix(self) -> Vec<Vec<i64>> {
        match self {
            AtomKind::A(m) => vec![vec![i64::from(m) + 1]],
            AtomKind::D(n) => vec![vec![i64::from(n) - 1, 0], vec![1, 2]],
            AtomKind::Dt(n) => vec![vec![i64::from(n) - 1, 1], vec![0, 2]],
        }
    }

    fn check(self) -> Result<Self> {
        match self {
            AtomKind::A(m) if m < 1 => Err(Error::InvalidRank { kind: "A".into(), rank: m as usize }),
            AtomKind::D(n) | AtomKind::Dt(n) if n < 3 => Err(Error::InvalidRank { kind: "D".into(), rank: n as usize }),
            k => Ok(k),
        }
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::A(m) => write!(f, "A{m}"),
            AtomKind::D(n) => write!(f, "D{n}"),
            AtomKind::Dt(n) => write!(f, "D{n}t"),
        }
    }
}

/// An atomic summand and the variables it uses, in the order `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub kind: AtomKind,
    pub vars: Vec<usize>,
}

/// Invertible polynomial with coefficients normalized to one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertiblePolynomial {
    a: ExponentMatrix,
    w: Poly<Rat>,
    grading: GradingContext,
    atoms: Vec<Atom>,
}

impl InvertiblePolynomial {
    pub fn exponents(&self) -> &ExponentMatrix {
        &self.a
    }

    pub fn w(&self) -> &Poly<Rat> {
        &self.w
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn nvars(&self) -> usize {
        self.a.rows()
    }

    /// Name such as `D4t+A2`, listing atoms by their first variable.
    pub fn name(&self) -> String {
        if self.atoms.is_empty() {
            return "0".into();
        }
        let mut atoms: Vec<&Atom> = self.atoms.iter().collect();
        atoms.sort_by_key(|a| a.vars.iter().min().copied());
        atoms.iter().map(|a| a.kind.to_string()).collect::<Vec<_>>().join("+")
    }

    /// Variable names: `x, y, z` up to three variables, else `x1..xn`.
    pub fn var_names(&self) -> Vec<String> {
        var_names(self.nvars())
    }

    pub fn render(&self) -> String {
        self.w.render(&self.var_names())
    }
}

pub fn var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        crate::exactmat::default_names(n)
    }
}

fn entry(a: &IntMatrix, i: usize, j: usize) -> i64 {
    a[(i, j)].to_i64().unwrap_or(i64::MAX)
}

/// `W = sum_i prod_j x_j^{a_ij}`.
pub fn polynomial_of(a: &IntMatrix) -> Poly<Rat> {
    let n = a.cols();
    Poly::from_terms(
        n,
        (0..a.rows()).map(|i| ((0..n).map(|j| entry(a, i, j) as u32).collect(), Rat::from_integer(1.into()))),
    )
}

fn components(a: &IntMatrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        let vars: Vec<usize> = (0..n).filter(|&j| !a[(i, j)].is_zero()).collect();
        for w in vars.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x] = y;
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    for j in 0..n {
        let r = find(&mut parent, j);
        let k = *index.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[k].push(j);
    }
    comps
}

fn recognize(a: &IntMatrix, comp: &[usize]) -> Result<Atom> {
    let rows: Vec<Vec<i64>> = (0..a.rows())
        .filter(|&i| comp.iter().any(|&j| !a[(i, j)].is_zero()))
        .map(|i| comp.iter().map(|&j| entry(a, i, j)).collect())
        .collect();
    let unsupported = || {
        Error::UnsupportedClass(format!(
            "block on variables {:?} with rows {:?} is not of type A or D",
            comp.iter().map(|j| j + 1).collect::<Vec<_>>(),
            rows
        ))
    };
    match comp {
        [x] => {
            let m = rows[0][0];
            if m < 2 {
                return Err(unsupported());
            }
            Ok(Atom { kind: AtomKind::A((m - 1) as u32), vars: vec![*x] })
        }
        [i, j] => {
            let mut sorted = rows.clone();
            sorted.sort();
            let mut swapped: Vec<Vec<i64>> = rows.iter().map(|r| vec![r[1], r[0]]).collect();
            swapped.sort();
            for (pattern, order) in [(&sorted, [*i, *j]), (&swapped, [*j, *i])] {
                if let [r0, r1] = pattern.as_slice() {
                    // rows sorted lexicographically in the (x, y) order
                    if r0 == &vec![1, 2] && r1[1] == 0 && r1[0] >= 2 {
                        return Ok(Atom { kind: AtomKind::D((r1[0] + 1) as u32), vars: order.to_vec() });
                    }
                    if r0 == &vec![0, 2] && r1[1] == 1 && r1[0] >= 2 {
                        return Ok(Atom { kind: AtomKind::Dt((r1[0] + 1) as u32), vars: order.to_vec() });
                    }
                }
            }
            Err(unsupported())
        }
        _ => Err(unsupported()),
    }
}

/// Recognizes the A/D block structure of `a` and builds the polynomial.
pub fn build(a: &ExponentMatrix) -> Result<InvertiblePolynomial> {
    let atoms = components(a).iter().map(|c| recognize(a, c)).collect::<Result<Vec<_>>>()?;
    Ok(InvertiblePolynomial { w: polynomial_of(a), grading: grading_group(a)?, atoms, a: a.clone() })
}

/// The polynomial in zero variables.
pub fn empty() -> InvertiblePolynomial {
    InvertiblePolynomial {
        a: ExponentMatrix(IntMatrix::zeros(0, 0)),
        w: Poly::zero(0),
        grading: GradingContext::trivial(),
        atoms: vec![],
    }
}

pub fn atom(kind: AtomKind) -> Result<InvertiblePolynomial> {
    build(&ExponentMatrix::from_rows(&kind.check()?.matrix())?)
}

/// The polynomial with exponent matrix `A^T`.
pub fn transpose(p: &InvertiblePolynomial) -> InvertiblePolynomial {
    if p.nvars() == 0 {
        return empty();
    }
    build(&p.a.transpose()).expect("transpose of a supported polynomial is supported")
}

/// Disconnected sum `W1 + W2`, variables of `p1` first.
pub fn st_sum(p1: &InvertiblePolynomial, p2: &InvertiblePolynomial) -> InvertiblePolynomial {
    let n1 = p1.nvars();
    let n = n1 + p2.nvars();
    let a = ExponentMatrix(p1.a.direct_sum(&p2.a));
    let w = p1.w.embed(0, n).try_add(&p2.w.embed(n1, n)).expect("same ring");
    let mut atoms = p1.atoms.clone();
    atoms.extend(p2.atoms.iter().map(|at| Atom { kind: at.kind, vars: at.vars.iter().map(|v| v + n1).collect() }));
    InvertiblePolynomial { a, w, grading: sum_grading(&p1.grading, &p2.grading), atoms }
}

/// Parses `"A4"`, `"D5"`, `"D5t"` joined by `+`. Whitespace is ignored.
pub fn parse_atoms(s: &str) -> Result<Vec<AtomKind>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial expression".into()));
    }
    compact.split('+').map(parse_atom).collect()
}

fn parse_atom(s: &str) -> Result<AtomKind> {
    let bad = || Error::Parse(format!("unknown atom {s:?} (expected A<m>, D<n> or D<n>t)"));
    let (head, rest) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
    let (digits, transposed) = match rest.strip_suffix('t') {
        Some(d) => (d, true),
        None => (rest, false),
    };
    let k: u32 = digits.parse().map_err(|_| bad())?;
    let kind = match (head, transposed) {
        ("A", false) => AtomKind::A(k),
        ("D", false) => AtomKind::D(k),
        ("D", true) => AtomKind::Dt(k),
        _ => return Err(bad()),
    };
    kind.check()
}

/// Builds a sum of atoms from its text form, folding left.
pub fn parse_expression(s: &str) -> Result<InvertiblePolynomial> {
    let mut acc: Option<InvertiblePolynomial> = None;
    for kind in parse_atoms(s)? {
        let p = atom(kind)?;
        acc = Some(match acc {
            None => p,
            Some(q) => st_sum(&q, &p),
        });
    }
    Ok(acc.expect("at least one atom"))
}

/// Exponent matrix of a sum of monic monomials such as `u^3*v + v^2` or
/// `u^3v+v^2`. Variables are ordered by first appearance and the i-th
/// monomial gives the i-th row.
pub fn parse_monomials(s: &str) -> Result<ExponentMatrix> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut names: Vec<String> = Vec::new();
    let mut terms: Vec<Vec<(usize, i64)>> = Vec::new();
    for term in compact.split('+') {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty monomial in {s:?}")));
        }
        let chars: Vec<char> = term.chars().collect();
        let mut i = 0;
        let mut factors = Vec::new();
        while i < chars.len() {
            if chars[i] == '*' {
                i += 1;
                continue;
            }
            if !chars[i].is_ascii_alphabetic() {
                return Err(Error::Parse(format!("unexpected {:?} in monomial {term:?}", chars[i])));
            }
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut exp = 1i64;
            if i < chars.len() && chars[i] == '^' {
                let e0 = i + 1;
                i = e0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[e0..i].iter().collect();
                exp = digits.parse().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
            }
            let idx = match names.iter().position(|n| *n == name) {
                Some(k) => k,
                None => {
                    names.push(name);
                    names.len() - 1
                }
            };
            factors.push((idx, exp));
        }
        terms.push(factors);
    }
    let n = names.len();
    if terms.len() != n {
        return Err(Error::InvalidMatrix(format!("{} monomials in {n} variables", terms.len())));
    }
    let rows: Vec<Vec<i64>> = terms
        .iter()
        .map(|t| {
            let mut row = vec![0; n];
            for &(k, e) in t {
                row[k] += e;
            }
            row
        })
        .collect();
    ExponentMatrix::from_rows(&rows)
}

fn looks_like_atoms(t: &str) -> bool {
    t.split('+').all(|a| {
        let a = a.trim();
        a.starts_with(|c: char| c.is_ascii_uppercase())
            && a[1..].trim_end_matches('t').chars().all(|c| c.is_ascii_digit())
    })
}

/// Accepts a JSON matrix `[[3,1],[0,2]]`, an atom expression `D4t+A2` or a
/// sum of monomials `u^3*v + v^2`.
pub fn parse_polynomial(s: &str) -> Result<InvertiblePolynomial> {
    let t = s.trim();
    if t.starts_with('[') {
        let rows: Vec<Vec<i64>> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        build(&ExponentMatrix::from_rows(&rows)?)
    } else if looks_like_atoms(t) {
        parse_expression(t)
    } else {
        build(&parse_monomials(t)?)
    }
}
