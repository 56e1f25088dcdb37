//! Generator collections on the singularity side and the comparison with
//! the quiver side.

use hmskit_core::exactmat::{gauss_i, Field, GaussRat, Poly, Rat};
use hmskit_core::grading::{m_grading, GradingContext, LElement};
use hmskit_core::matfac::{
    default_gamma_choice, ext_table, gamma_from_choice, koszul_mf_with, mf_from_pair, residue_mf_d, shift_mf,
    tensor_mf, translate_mf, ExtTable, MatrixFactorization,
};
use hmskit_core::polyforms::{self, AtomKind, ExponentMatrix, InvertiblePolynomial};
use hmskit_core::quivercat::{dynkin_quiver, quiver_model, reflect, DynkinType, Quiver};
use hmskit_core::symmetry::SymmetryGroup;
use hmskit_core::Error;
use serde::{Deserialize, Serialize};

pub type Labeled<F = Rat> = (String, MatrixFactorization<F>);

pub const CAVEAT: &str = "Dimension tables of Hom(E_i, E_j[k]) are compared inside a finite window of k. \
This is a shadow of the claimed equivalence: it does not see composition, higher products or the \
splitting of idempotents.";

fn twist(v: i64) -> LElement {
    LElement { free: vec![v], torsion: vec![] }
}

fn twist_label(base: &str, v: i64) -> String {
    if v == 0 {
        base.to_string()
    } else {
        format!("{base}({v})")
    }
}

/// Exceptional collection of one atom in its own grading, listed in the
/// order of the quiver vertices.
pub fn atom_collection(kind: AtomKind) -> hmskit_core::Result<Vec<Labeled>> {
    let p = polyforms::atom(kind)?;
    let g = p.grading();
    match kind {
        AtomKind::A(m) => {
            let x = Poly::var(1, 0);
            let base = mf_from_pair(g, p.w(), &x, &x.pow(m), &g.zero())?;
            Ok((0..i64::from(m)).map(|i| (twist_label("R/m", -i), shift_mf(&base, &twist(-i)))).collect())
        }
        AtomKind::Dt(n) => {
            if n < 4 {
                return Err(Error::InvalidRank { kind: "D".into(), rank: n as usize });
            }
            let y = Poly::var(2, 1);
            let b = &Poly::var_pow(2, 0, n - 1) + &y;
            let ry = mf_from_pair(g, p.w(), &y, &b, &g.zero())?;
            let rb = mf_from_pair(g, p.w(), &b, &y, &g.zero())?;
            let m = residue_mf_d(n)?;
            let mut out = vec![
                ("R/(y)[1]".to_string(), translate_mf(&ry)),
                (format!("R/(x^{}+y)[1]", n - 1), translate_mf(&rb)),
            ];
            out.extend((0..i64::from(n) - 2).map(|i| (twist_label("R/m", -i), shift_mf(&m, &twist(-i)))));
            Ok(out)
        }
        AtomKind::D(n) => Err(Error::UnsupportedClass(format!(
            "no generator collection for D{n} = x^{}+xy^2 in its maximal grading; its transpose D{n}t carries the D{n} collection",
            n - 1
        ))),
    }
}

/// Collection for a disconnected sum of atoms: tensor products of the atom
/// collections, the first atom varying slowest.
pub fn collection(p: &InvertiblePolynomial) -> hmskit_core::Result<Vec<Labeled>> {
    let canonical = canonical_form(p)?;
    let mut acc: Option<Vec<Labeled>> = None;
    for atom in canonical.atoms() {
        let next = atom_collection(atom.kind)?;
        acc = Some(match acc {
            None => next,
            Some(prev) => prev
                .iter()
                .flat_map(|(la, ka)| {
                    next.iter().map(move |(lb, kb)| {
                        let label = match la.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                            Some(inner) if la.contains(',') => format!("({inner}, {lb})"),
                            _ => format!("({la}, {lb})"),
                        };
                        (label, tensor_mf(ka, kb))
                    })
                })
                .collect(),
        });
    }
    acc.ok_or_else(|| Error::UnsupportedClass("empty polynomial".into()))
}

/// The left-folded sum of the atoms of `p` in order of their variables.
/// Errors unless `p` is literally that sum.
fn canonical_form(p: &InvertiblePolynomial) -> hmskit_core::Result<InvertiblePolynomial> {
    let mut acc: Option<InvertiblePolynomial> = None;
    for atom in p.atoms() {
        let q = polyforms::atom(atom.kind)?;
        acc = Some(match acc {
            None => q,
            Some(a) => polyforms::st_sum(&a, &q),
        });
    }
    match acc {
        Some(c) if c.w() == p.w() => Ok(c),
        Some(_) => Err(Error::UnsupportedClass(format!(
            "atoms must use consecutive variables in order; write the input as {}",
            p.name()
        ))),
        None => Err(Error::UnsupportedClass("empty polynomial".into())),
    }
}

/// Quivers matching [`collection`], one per atom.
pub fn quivers(p: &InvertiblePolynomial) -> hmskit_core::Result<Vec<Quiver>> {
    p.atoms()
        .iter()
        .map(|a| match a.kind {
            AtomKind::D(n) => Err(Error::UnsupportedClass(format!("use D{n}t for the D{n} quiver"))),
            k => dynkin_quiver(DynkinType::of_atom(k)),
        })
        .collect()
}

/// `D4` with `v3` as the only source: the quiver of
/// [`mgraded_d4_collection`].
pub fn mgraded_d4_quiver() -> hmskit_core::Result<Quiver> {
    reflect(&dynkin_quiver(DynkinType::D(4))?, 3)
}

/// The M-graded `x^3 + xy^2` for the group generated by `J`, over `Q(i)`,
/// with its collection `[R/(x+iy)[1], R/(x-iy)[1], R/m, R/(x)[1]]`: the
/// three lines through the origin around the residue field.
pub fn mgraded_d4_collection(grading: &GradingContext) -> hmskit_core::Result<Vec<Labeled<GaussRat>>> {
    let x = Poly::<GaussRat>::var(2, 0);
    let y = Poly::<GaussRat>::var(2, 1);
    let iy = y.scale(&gauss_i());
    let w = &x.pow(3) + &(&x * &y.pow(2));
    let lp = &x + &iy;
    let lm = &x - &iy;
    let z = grading.zero();
    let rp = mf_from_pair(grading, &w, &lp, &(&x * &lm), &z)?;
    let rm = mf_from_pair(grading, &w, &lm, &(&x * &lp), &z)?;
    let rx = mf_from_pair(grading, &w, &x, &(&lp * &lm), &z)?;
    let k = koszul_mf_with(grading, &w, gamma_from_choice(&w, &default_gamma_choice(&w))?)?;
    Ok(vec![
        ("R/(x+iy)[1]".into(), translate_mf(&rp)),
        ("R/(x-iy)[1]".into(), translate_mf(&rm)),
        ("R/m".into(), k),
        ("R/(x)[1]".into(), translate_mf(&rx)),
    ])
}

/// Checks that `(a, group)` is the supported M-graded case: `x^3 + xy^2`
/// with `M = Z`, `deg x = deg y = 1`. Returns the M-grading.
pub fn mgraded_d4_grading(a: &ExponentMatrix, group: &SymmetryGroup) -> hmskit_core::Result<GradingContext> {
    let expected = ExponentMatrix::from_rows(&[vec![3, 0], vec![1, 2]])?;
    if a != &expected {
        return Err(Error::UnsupportedClass("group-graded verification is available for x^3+xy^2 only".into()));
    }
    let m = m_grading(a, group)?;
    let ok = m.free_rank() == 1
        && m.torsion().is_empty()
        && m.deg_x().iter().all(|d| d.free == vec![1])
        && m.deg_c().free == vec![3];
    if !ok {
        return Err(Error::UnsupportedClass("group-graded verification needs M = Z with deg x = deg y = 1".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub object: String,
    pub vertex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Difference {
    pub object_i: String,
    pub object_j: String,
    pub k: i64,
    pub bside: usize,
    pub aside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub result: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<Difference>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub bside_seconds: f64,
    pub aside_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: String,
    pub input: String,
    pub polynomial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub quiver: String,
    pub window: [i64; 2],
    pub caveat: String,
    pub object_assignment: Vec<Assignment>,
    pub bside: ExtTable,
    pub aside: ExtTable,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl VerificationReport {
    pub fn matches(&self) -> bool {
        self.verdict.first_difference.is_none()
    }
}

/// First `(i, j, k)` in row-major order where the tables differ.
pub fn compare(bside: &ExtTable, aside: &ExtTable) -> Verdict {
    let n = bside.len().max(aside.len());
    let (lo, hi) = (bside.window[0].min(aside.window[0]), bside.window[1].max(aside.window[1]));
    let at = |t: &ExtTable, i: usize, j: usize, k: i64| if i < t.len() && j < t.len() { t.get(i, j, k) } else { 0 };
    let label = |i: usize| bside.objects.get(i).or_else(|| aside.objects.get(i)).cloned().unwrap_or_default();
    for i in 0..n {
        for j in 0..n {
            for k in lo..=hi {
                let (b, a) = (at(bside, i, j, k), at(aside, i, j, k));
                if b != a || bside.len() != aside.len() {
                    return Verdict {
                        result: "mismatch".into(),
                        first_difference: Some(Difference {
                            object_i: label(i),
                            object_j: label(j),
                            k,
                            bside: b,
                            aside: a,
                        }),
                    };
                }
            }
        }
    }
    Verdict { result: "match".into(), first_difference: None }
}

/// Runs both sides for a collection and assembles the report. `bside` may
/// be supplied from a cache.
#[allow(clippy::too_many_arguments)]
pub fn assemble_report(
    input: &str,
    polynomial: String,
    group: Option<String>,
    quivers: &[Quiver],
    labels: Vec<String>,
    bside: ExtTable,
    window: (i64, i64),
    timings: Option<Timings>,
) -> hmskit_core::Result<VerificationReport> {
    let model = quiver_model(quivers, window)?;
    let object_assignment = labels
        .iter()
        .zip(&model.table.objects)
        .map(|(o, v)| Assignment { object: o.clone(), vertex: v.clone() })
        .collect();
    let verdict = compare(&bside, &model.table);
    Ok(VerificationReport {
        schema: 1,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        input: input.into(),
        polynomial,
        group,
        quiver: model.factors.join("(x)"),
        window: [window.0, window.1],
        caveat: CAVEAT.into(),
        object_assignment,
        bside,
        aside: model.table,
        verdict,
        timings,
    })
}

/// B-side table for a labelled collection.
pub fn bside_table<F: Field>(coll: &[Labeled<F>], window: (i64, i64)) -> hmskit_core::Result<ExtTable> {
    ext_table(coll, window)
}
