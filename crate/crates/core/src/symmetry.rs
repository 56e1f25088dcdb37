//! Diagonal symmetry groups of invertible polynomials.
//!
//! A diagonal symmetry `(exp(2 pi i r_1), ..., exp(2 pi i r_n))` is stored
//! additively as its residue vector `(r_1, ..., r_n)` with every `r_i` in
//! `[0, 1)`. Groups are small, so their elements are enumerated eagerly.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::{Integer, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmat::{Int, IntMatrix, Rat};

fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

fn inverse_rat(a: &IntMatrix) -> Result<Vec<Vec<Rat>>> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix("exponent matrix must be square".into()));
    }
    crate::exactmat::inverse(&a.to_rat_rows()).ok_or(Error::SingularMatrix)
}

/// Element of the diagonal torus, as a residue vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSymmetry {
    residues: Vec<Rat>,
}

impl DiagonalSymmetry {
    pub fn new(residues: Vec<Rat>) -> Self {
        DiagonalSymmetry { residues: residues.iter().map(frac).collect() }
    }

    pub fn zero(n: usize) -> Self {
        DiagonalSymmetry { residues: vec![Rat::zero(); n] }
    }

    pub fn residues(&self) -> &[Rat] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &DiagonalSymmetry) -> DiagonalSymmetry {
        DiagonalSymmetry::new(self.residues.iter().zip(&other.residues).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> DiagonalSymmetry {
        DiagonalSymmetry::new(self.residues.iter().map(|a| a * Rat::from_integer(Int::from(k))).collect())
    }

    /// Order of the element in the torus.
    pub fn order(&self) -> i64 {
        self.residues.iter().map(|r| r.denom().to_i64().unwrap_or(i64::MAX)).fold(1, |acc, d| acc.lcm(&d))
    }
}

impl fmt::Display for DiagonalSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for DiagonalSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for DiagonalSymmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let residues = s.split(',').map(|p| parse_rat(p.trim())).collect::<Result<Vec<_>>>()?;
        Ok(DiagonalSymmetry::new(residues))
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Serialize for DiagonalSymmetry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.residues.iter().map(ToString::to_string).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagonalSymmetry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        let residues =
            parts.iter().map(|p| parse_rat(p)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)?;
        Ok(DiagonalSymmetry::new(residues))
    }
}

/// Finite subgroup of the diagonal torus with its full element list.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGroup {
    n: usize,
    generators: Vec<DiagonalSymmetry>,
    elements: BTreeSet<DiagonalSymmetry>,
}

impl SymmetryGroup {
    /// Closure of `generators` under addition mod 1.
    pub fn generated_by(n: usize, generators: Vec<DiagonalSymmetry>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::VariableCountMismatch { left: n, right: g.len() });
        }
        let mut elements = BTreeSet::new();
        let mut queue = VecDeque::from([DiagonalSymmetry::zero(n)]);
        while let Some(e) = queue.pop_front() {
            if !elements.insert(e.clone()) {
                continue;
            }
            for g in &generators {
                let next = e.add(g);
                if !elements.contains(&next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(SymmetryGroup { n, generators, elements })
    }

    pub fn trivial(n: usize) -> Self {
        Self::generated_by(n, vec![]).expect("trivial group")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[DiagonalSymmetry] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &DiagonalSymmetry> {
        self.elements.iter()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &DiagonalSymmetry) -> bool {
        self.elements.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &SymmetryGroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Equality as sets, ignoring the chosen generators.
    pub fn same_elements(&self, other: &SymmetryGroup) -> bool {
        self.elements == other.elements
    }

    /// Parses `"1/2,1/2;0,1/3"`: semicolon-separated generators of
    /// comma-separated residues. The empty string is the trivial group.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let gens = s
            .split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<DiagonalSymmetry>>>()?;
        Self::generated_by(n, gens)
    }

    /// Every subgroup, each generated by a minimal-looking set and listed
    /// once. Intended for the small groups met here.
    pub fn all_subgroups(&self) -> Vec<SymmetryGroup> {
        let mut seen: BTreeSet<Vec<DiagonalSymmetry>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut frontier = vec![SymmetryGroup::trivial(self.n)];
        seen.insert(frontier[0].elements.iter().cloned().collect());
        while let Some(h) = frontier.pop() {
            for g in &self.elements {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.generators.clone();
                gens.push(g.clone());
                let bigger = SymmetryGroup::generated_by(self.n, gens).expect("same ambient");
                if seen.insert(bigger.elements.iter().cloned().collect()) {
                    frontier.push(bigger);
                }
            }
            out.push(h);
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        out
    }
}

impl fmt::Debug for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "> (order {})", self.order())
    }
}

/// The maximal diagonal symmetry group, generated by the columns of `A^-1`.
pub fn gmax(a: &IntMatrix) -> Result<SymmetryGroup> {
    let inv = inverse_rat(a)?;
    let n = a.rows();
    let gens = (0..n).map(|k| DiagonalSymmetry::new((0..n).map(|i| inv[i][k].clone()).collect())).collect();
    SymmetryGroup::generated_by(n, gens)
}

/// The exponents `phi_i`, their common denominator and the element `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JData {
    #[serde(serialize_with = "ser_rats", deserialize_with = "de_rats")]
    pub phi: Vec<Rat>,
    pub ell: i64,
    pub j: DiagonalSymmetry,
}

fn ser_rats<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
}

fn de_rats<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
    Vec::<String>::deserialize(d)?.iter().map(|p| parse_rat(p).map_err(serde::de::Error::custom)).collect()
}

pub fn j_element(a: &IntMatrix) -> Result<JData> {
    let inv = inverse_rat(a)?;
    let phi: Vec<Rat> = inv.iter().map(|row| row.iter().sum()).collect();
    let ell = phi.iter().map(|p| p.denom().to_i64().unwrap_or(i64::MAX)).fold(1i64, |acc, d| acc.lcm(&d));
    let j = DiagonalSymmetry::new(phi.clone());
    Ok(JData { phi, ell, j })
}

/// Errors unless every generator of `g` lies in `G_max(A)`, i.e. `A g` is
/// an integer vector.
pub fn check_in_gmax(a: &IntMatrix, g: &SymmetryGroup) -> Result<()> {
    if g.n() != a.rows() {
        return Err(Error::VariableCountMismatch { left: a.rows(), right: g.n() });
    }
    for gen in g.generators() {
        let ag = apply(a, gen.residues());
        if !ag.iter().all(Rat::is_integer) {
            return Err(Error::NotInGmax(gen.to_string()));
        }
    }
    Ok(())
}

fn apply(a: &IntMatrix, v: &[Rat]) -> Vec<Rat> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| Rat::from_integer(a[(i, j)].clone()) * &v[j]).sum()).collect()
}

/// The transpose group: all `h` in `G_max(A^T)` with `h^T A g` integral for
/// every `g` in `G`. In the coordinates `h = prod rho_bar_i^{r_i}`,
/// `g = prod rho_i^{a_i}` this is the pairing `r A^-1 a^T`.
pub fn krawitz_transpose(a: &IntMatrix, g: &SymmetryGroup) -> Result<SymmetryGroup> {
    check_in_gmax(a, g)?;
    let at = a.transpose();
    let dual = gmax(&at)?;
    let ag: Vec<Vec<Rat>> = g.generators().iter().map(|x| apply(a, x.residues())).collect();
    let members: Vec<DiagonalSymmetry> = dual
        .elements()
        .filter(|h| {
            ag.iter().all(|v| {
                let s: Rat = h.residues().iter().zip(v).map(|(x, y)| x * y).sum();
                s.is_integer()
            })
        })
        .cloned()
        .collect();
    SymmetryGroup::generated_by(a.rows(), reduce_generators(a.rows(), members))
}

/// A short generating list for an already closed set of elements.
fn reduce_generators(n: usize, members: Vec<DiagonalSymmetry>) -> Vec<DiagonalSymmetry> {
    let target: BTreeSet<DiagonalSymmetry> = members.into_iter().collect();
    let mut gens = Vec::new();
    let mut span = SymmetryGroup::trivial(n);
    let mut ordered: Vec<&DiagonalSymmetry> = target.iter().collect();
    ordered.sort_by_key(|g| std::cmp::Reverse(g.order()));
    for g in ordered {
        if !span.contains(g) {
            gens.push(g.clone());
            span = SymmetryGroup::generated_by(n, gens.clone()).expect("same ambient");
        }
    }
    gens
}

/// Whether every element has integral coordinate sum, i.e. lies in `SL_n`.
pub fn is_sl(g: &SymmetryGroup) -> bool {
    g.elements().all(|e| e.residues().iter().sum::<Rat>().is_integer())
}

/// `|det A|` as a machine integer.
pub fn gmax_order(a: &IntMatrix) -> Result<i64> {
    let d = a.det();
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    d.abs().to_i64().ok_or_else(|| Error::InvalidMatrix("determinant too large".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn ds(s: &str) -> DiagonalSymmetry {
        s.parse().unwrap()
    }

    #[test]
    fn residues_reduce_mod_one() {
        assert_eq!(ds("-1/6,3/2"), ds("5/6,1/2"));
        assert_eq!(ds("1,2").to_string(), "0,0");
    }

    #[test]
    fn gmax_of_d4() {
        let g = gmax(&m(&[vec![3, 0], vec![1, 2]])).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.generators(), &[ds("1/3,-1/6"), ds("0,1/2")]);
    }

    #[test]
    fn gmax_of_a_is_cyclic() {
        for k in 2..9 {
            let g = gmax(&m(&[vec![k]])).unwrap();
            assert_eq!(g.order(), k as usize);
            let j = j_element(&m(&[vec![k]])).unwrap();
            assert_eq!(SymmetryGroup::generated_by(1, vec![j.j]).unwrap().order(), k as usize);
        }
        assert_eq!(gmax(&m(&[vec![1, 0], vec![0, 1]])).unwrap().order(), 1);
    }

    #[test]
    fn j_of_d4() {
        let j = j_element(&m(&[vec![3, 0], vec![1, 2]])).unwrap();
        assert_eq!(j.phi, vec![rat(1, 3), rat(1, 3)]);
        assert_eq!(j.ell, 3);
        assert_eq!(j.j, ds("1/3,1/3"));
        assert!(j_element(&m(&[vec![1, 0], vec![0, 1]])).unwrap().j.is_zero());
    }

    #[test]
    fn transpose_of_the_d4_example() {
        let a = m(&[vec![3, 1], vec![0, 2]]);
        let g = SymmetryGroup::parse(2, "1/2,1/2").unwrap();
        let gt = krawitz_transpose(&a, &g).unwrap();
        let expected = SymmetryGroup::parse(2, "1/3,1/3").unwrap();
        assert!(gt.same_elements(&expected));
        assert!(krawitz_transpose(&a.transpose(), &gt).unwrap().same_elements(&g));
    }

    #[test]
    fn transpose_extremes() {
        let a = m(&[vec![3, 1], vec![0, 2]]);
        let full = gmax(&a).unwrap();
        let t = krawitz_transpose(&a, &SymmetryGroup::trivial(2)).unwrap();
        assert!(t.same_elements(&gmax(&a.transpose()).unwrap()));
        assert_eq!(krawitz_transpose(&a, &full).unwrap().order(), 1);
    }

    #[test]
    fn transpose_rejects_outside_gmax() {
        let a = m(&[vec![3, 1], vec![0, 2]]);
        let g = SymmetryGroup::parse(2, "1/5,0").unwrap();
        assert!(matches!(krawitz_transpose(&a, &g), Err(Error::NotInGmax(_))));
    }

    #[test]
    fn sl_membership() {
        assert!(is_sl(&SymmetryGroup::parse(2, "1/2,1/2").unwrap()));
        assert!(!is_sl(&SymmetryGroup::parse(2, "1/3,0").unwrap()));
        assert!(is_sl(&SymmetryGroup::trivial(3)));
    }

    #[test]
    fn subgroups_of_cyclic_six() {
        let g = gmax(&m(&[vec![6]])).unwrap();
        let subs = g.all_subgroups();
        let orders: Vec<usize> = subs.iter().map(SymmetryGroup::order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(SymmetryGroup::parse(2, "1/0,1"), Err(Error::Parse(_))));
        assert!(matches!(SymmetryGroup::parse(2, "1/2"), Err(Error::VariableCountMismatch { .. })));
    }

    #[test]
    fn serde_roundtrip() {
        let g = SymmetryGroup::parse(2, "1/2,1/2;0,1/3").unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: SymmetryGroup = serde_json::from_str(&s).unwrap();
        assert!(back.same_elements(&g));
    }
}
