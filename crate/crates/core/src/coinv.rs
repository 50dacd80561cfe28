//! Graded character of the coinvariant algebra and the induction formula
//! for the sums of graded pieces in a residue class.

use crate::cyclo::{Cyclotomic, Rat, RootOfUnity};
use crate::groups::{theta_v, GroupError, ReflectionCoset, ReflectionGroup};
use crate::linalg::{CycMatrix, TruncSeries, UniPoly, Vector};
use crate::molien::{Molien, MolienError};
use crate::regularity;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoinvError {
    #[error(transparent)]
    Molien(#[from] MolienError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} divides no degree")]
    NotADegreeDivisor(u64),
    #[error("graded trace of the parabolic harmonics is not a polynomial")]
    NotPolynomial,
    #[error("theta_v is not trivial on the parabolic subgroup")]
    ThetaNotTrivial,
    #[error("class index {0} out of range")]
    BadClass(usize),
    #[error("check failed: {0}")]
    Check(String),
}

/// Values on the conjugacy classes of a group, in class order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFunction {
    #[serde(serialize_with = "ser_values")]
    pub values: Vec<Cyclotomic>,
}

fn ser_values<S: serde::Serializer>(v: &[Cyclotomic], s: S) -> Result<S::Ok, S::Error> {
    let r: Vec<String> = v.iter().map(|x| x.render()).collect();
    r.serialize(s)
}

impl ClassFunction {
    pub fn zero(n: usize) -> ClassFunction {
        ClassFunction { values: vec![Cyclotomic::zero(1); n] }
    }

    pub fn add(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }
}

/// Characters of the graded pieces H_0, ..., H_N.
#[derive(Clone, Debug, Serialize)]
pub struct GradedCharacter {
    pub degrees: Vec<ClassFunction>,
}

impl GradedCharacter {
    /// dim H_i for each i.
    pub fn dims(&self) -> Vec<i64> {
        self.degrees.iter().map(|c| c.values[0].as_i64().expect("integral dimension")).collect()
    }

    /// Sum of H_i over i = -k mod d.
    pub fn residue_sum(&self, d: u64, k: i64) -> ClassFunction {
        let n = self.degrees[0].values.len();
        let want = (-k).rem_euclid(d as i64) as usize;
        self.degrees
            .iter()
            .enumerate()
            .filter(|(i, _)| i % d as usize == want)
            .fold(ClassFunction::zero(n), |acc, (_, c)| acc.add(c))
    }
}

/// Degrees of G from the invariant ring.
pub fn group_degrees(g: &Arc<ReflectionGroup>) -> Result<Vec<i64>, CoinvError> {
    let mol = Molien::new(&ReflectionCoset::untwisted(g.clone()));
    Ok(mol.degrees()?.degrees())
}

fn one_minus_t_pow(d: usize) -> UniPoly {
    UniPoly::new(vec![Cyclotomic::one(1)]).sub(&UniPoly::monomial(Cyclotomic::one(1), d))
}

/// sum_i Tr(x | H_i) t^i = prod (1 - t^d_i) / det(1 - t x | V*).
fn harmonic_trace(x: &CycMatrix, degrees: &[i64]) -> UniPoly {
    let num = degrees.iter().fold(UniPoly::one(), |p, &d| p.mul(&one_minus_t_pow(d as usize)));
    // x acts on V* by x^-T
    let den = x.inverse().expect("invertible").char_series().expect("square");
    num.div_exact(&den).expect("det(1 - t x) divides prod (1 - t^d)")
}

/// Per-class graded characters of the coinvariant algebra.
pub fn coinvariant_character(g: &ReflectionGroup, degrees: &[i64]) -> GradedCharacter {
    let top: i64 = degrees.iter().map(|d| d - 1).sum();
    let per_class: Vec<UniPoly> = g.classes.par_iter().map(|c| harmonic_trace(&g.elements[c.rep], degrees)).collect();
    let degrees = (0..=top as usize)
        .map(|i| ClassFunction { values: per_class.iter().map(|p| p.coeff(i)).collect() })
        .collect();
    GradedCharacter { degrees }
}

/// sum_i chi_{H_i} is the regular character, and the top piece is det_V.
pub fn regular_character_check(g: &ReflectionGroup, gc: &GradedCharacter) -> bool {
    let total = gc.degrees.iter().fold(ClassFunction::zero(g.classes.len()), |a, c| a.add(c));
    let regular = g.classes.iter().all(|c| {
        let want = if c.rep == 0 { Cyclotomic::from_int(1, g.order() as i64) } else { Cyclotomic::zero(1) };
        total.values[g.class_of(c.rep)] == want
    });
    let top = gc.degrees.last().expect("nonempty");
    let det = g.classes.iter().enumerate().all(|(i, c)| &top.values[i] == g.det(c.rep));
    regular && det
}

/// Equal dimensions of the residue-class sums for -k and -l mod d, and
/// (1 - t^d)/(1 - t) dividing the Poincare polynomial.
pub fn eqdims_check(gc: &GradedCharacter, degrees: &[i64], d: u64, k: i64, l: i64) -> Result<bool, CoinvError> {
    if !degrees.iter().any(|&x| x as u64 % d == 0) {
        return Err(CoinvError::NotADegreeDivisor(d));
    }
    let dims = gc.dims();
    let sum = |k: i64| -> i64 {
        let want = (-k).rem_euclid(d as i64) as usize;
        dims.iter().enumerate().filter(|(i, _)| i % d as usize == want).map(|(_, x)| x).sum()
    };
    let poincare = UniPoly::new(dims.iter().map(|&x| Cyclotomic::from_int(1, x)).collect());
    let cyc = UniPoly::new(vec![Cyclotomic::one(1); d as usize]);
    let divides = poincare.div_exact(&cyc).is_some();
    Ok(sum(k) == sum(l) && divides)
}

#[derive(Clone, Debug, Serialize)]
pub struct InductionReport {
    pub gamma: usize,
    pub zeta: RootOfUnity,
    pub k: i64,
    pub parabolic_order: usize,
    pub subgroup_order: usize,
    pub lhs: ClassFunction,
    pub rhs: ClassFunction,
    pub holds: bool,
}

/// Sum of H_i over i = -k mod d against the character induced from
/// <G_v, gamma> of (H_v graded-twisted by theta_v) (x) theta_v^k, for
/// gamma in G with gamma v = zeta v and d the order of zeta.
pub fn induction_check(g: &Arc<ReflectionGroup>, gamma: usize, v: &[Cyclotomic], k: i64) -> Result<InductionReport, CoinvError> {
    let degrees = group_degrees(g)?;
    let gc = coinvariant_character(g, &degrees);
    induction_check_with(g, &gc, gamma, v, k)
}

/// As `induction_check`, reusing the graded character of G.
pub fn induction_check_with(
    g: &Arc<ReflectionGroup>,
    gc: &GradedCharacter,
    gamma: usize,
    v: &[Cyclotomic],
    k: i64,
) -> Result<InductionReport, CoinvError> {
    let gm = &g.elements[gamma];
    let zeta = theta_v(gm, v)?.as_root_of_unity().ok_or(GroupError::NotEigenvector)?;
    let d = zeta.order;
    let lhs = gc.residue_sum(d, k);

    let (gv, _) = g.parabolic(v);
    let gv_idx: Vec<usize> = gv.elements.iter().map(|x| g.index_of(x).expect("parabolic lies in G")).collect();
    for &h in &gv_idx {
        if !theta_v(&g.elements[h], v)?.is_one() {
            return Err(CoinvError::ThetaNotTrivial);
        }
    }
    let mut gens: Vec<usize> = gv.generators.iter().map(|x| g.index_of(x).expect("parabolic lies in G")).collect();
    gens.push(gamma);
    let kidx = g.subgroup_indices(&gens);
    let kset: HashSet<usize> = kidx.iter().copied().collect();
    let nv = gv.reflections.len();
    let bound = nv + 1;

    // graded trace of the parabolic invariants, one per coset G_v x
    let mut q_cache: HashMap<usize, TruncSeries> = HashMap::new();
    let inv_gv = Cyclotomic::from_rat(1, Rat::new(1, gv_idx.len() as i64));
    let series = |x: &CycMatrix| {
        let c = x.inverse().expect("invertible").char_series().expect("square");
        TruncSeries::from_poly(&c, bound).invert().expect("constant term 1")
    };
    let mut psi: HashMap<usize, Cyclotomic> = HashMap::new();
    for &x in &kidx {
        let coset: Vec<usize> = gv_idx.iter().map(|&h| g.mul_index(h, x)).collect();
        let key = *coset.iter().min().expect("nonempty");
        let q = q_cache
            .entry(key)
            .or_insert_with(|| {
                let mut s = TruncSeries::zero(bound);
                for &y in &coset {
                    s.add_assign(&series(&g.elements[y]));
                }
                s.scale(&inv_gv)
            })
            .clone();
        let p = series(&g.elements[x]);
        let h = p.mul(&q.invert().expect("constant term 1")).expect("same bound");
        if !h.coeff(bound).is_zero() {
            return Err(CoinvError::NotPolynomial);
        }
        let theta = theta_v(&g.elements[x], v)?;
        let value = &h.to_poly().eval(&theta) * &theta.pow(k);
        psi.insert(x, value);
    }
    // induced character on classes
    let kord = Cyclotomic::from_int(1, kidx.len() as i64);
    let rhs = ClassFunction {
        values: g
            .classes
            .iter()
            .map(|c| {
                let mut s = Cyclotomic::zero(1);
                for x in c.members.iter().filter(|x| kset.contains(x)) {
                    s += &psi[x];
                }
                let factor = Cyclotomic::from_rat(1, Rat::new(g.order() as i64, c.members.len() as i64));
                &(&s * &factor) / &kord
            })
            .collect(),
    };
    // the multisets behind both sides agree (eqlists for the coset (G, gamma))
    let coset = ReflectionCoset::new(g.clone(), gm.clone(), u64::MAX)?;
    let eq = regularity::eqlists_check(&Molien::new(&coset), v).map_err(|e| CoinvError::Check(e.to_string()))?;
    if !eq {
        return Err(CoinvError::Check("eigenvalue multisets of G and G_v differ".into()));
    }
    let holds = lhs == rhs;
    Ok(InductionReport {
        gamma,
        zeta,
        k,
        parabolic_order: gv_idx.len(),
        subgroup_order: kidx.len(),
        lhs,
        rhs,
        holds,
    })
}

/// Eigenvector used for an element: a general vector of the eigenspace of
/// the eigenvalue of largest order (smallest exponent on ties).
pub fn default_eigenvector(g: &ReflectionGroup, x: usize) -> Result<(RootOfUnity, Vector), CoinvError> {
    let m = &g.elements[x];
    let ord = g.element_orders()[x];
    let mut eig = m.eigen_multiset(ord).map_err(|e| CoinvError::Check(e.to_string()))?;
    eig.sort_by(|a, b| b.order.cmp(&a.order).then(a.exp.cmp(&b.exp)));
    let z = eig[0];
    let e = (m - &CycMatrix::scalar(g.dim, &z.to_cyclotomic())).kernel();
    Ok((z, g.general_vector(&e)))
}

/// Sample of (element, eigenvector) pairs: one reflection per class with
/// its root line and a general vector of its hyperplane, the identity with
/// a regular vector, and a regular element if one exists.
pub fn induction_sample(g: &ReflectionGroup) -> Vec<(usize, Vector)> {
    let mut out = Vec::new();
    let id = CycMatrix::identity(g.dim, g.conductor);
    let all: Vec<Vector> = (0..g.dim).map(|i| id.column(i)).collect();
    out.push((0, g.general_vector(&all)));
    let mut seen = HashSet::new();
    for &s in &g.reflections {
        if !seen.insert(g.class_of(s)) {
            continue;
        }
        let m = &g.elements[s];
        let root = (m - &CycMatrix::scalar(g.dim, g.det(s))).kernel();
        out.push((s, root[0].clone()));
        let fixed = (m - &id).kernel();
        if !fixed.is_empty() {
            out.push((s, g.general_vector(&fixed)));
        }
    }
    // a regular element: an eigenvector off every hyperplane, largest order first
    let mut best: Option<(u64, usize, Vector)> = None;
    for c in &g.classes {
        if let Ok((z, v)) = default_eigenvector(g, c.rep) {
            if g.arrangement.iter().all(|h| !h.eval(&v).is_zero()) && best.as_ref().is_none_or(|b| z.order > b.0) {
                best = Some((z.order, c.rep, v));
            }
        }
    }
    if let Some((_, x, v)) = best {
        out.push((x, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogKey};

    fn group(s: &str) -> Arc<ReflectionGroup> {
        build(&s.parse::<CatalogKey>().unwrap()).unwrap().group
    }

    #[test]
    fn symmetric_group_dims() {
        let g = group("G(1,1,3)");
        let deg = group_degrees(&g).unwrap();
        let gc = coinvariant_character(&g, &deg);
        assert_eq!(gc.dims(), vec![1, 2, 2, 1]);
        assert!(regular_character_check(&g, &gc));
        assert!(gc.degrees[0].values.iter().all(|x| x.is_one()));
        for k in 0..3 {
            assert!(eqdims_check(&gc, &deg, 3, k, 0).unwrap());
        }
        assert!(eqdims_check(&gc, &deg, 5, 0, 1).is_err());
    }

    #[test]
    fn f4_residue_dims() {
        let g = group("F4");
        let deg = group_degrees(&g).unwrap();
        let gc = coinvariant_character(&g, &deg);
        assert!(regular_character_check(&g, &gc));
        let dims = gc.dims();
        for k in 0..12 {
            let want = (-k as i64).rem_euclid(12) as usize;
            let s: i64 = dims.iter().enumerate().filter(|(i, _)| i % 12 == want).map(|(_, x)| x).sum();
            assert_eq!(s, 96);
        }
    }

    #[test]
    fn induction_examples() {
        // rank-2 reflection representation of S_3, a 3-cycle with a regular eigenvector
        let g = group("A2");
        let three = (0..g.order()).find(|&i| g.element_orders()[i] == 3).unwrap();
        let (z, v) = default_eigenvector(&g, three).unwrap();
        assert_eq!(z.order, 3);
        let rep = induction_check(&g, three, &v, 0).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs.values[0], Cyclotomic::from_int(1, 2));
        assert_eq!(rep.parabolic_order, 1);
        // identity with a regular vector: the whole regular character
        let id = CycMatrix::identity(2, g.conductor);
        let v = g.general_vector(&[id.column(0), id.column(1)]);
        assert!(induction_check(&g, 0, &v, 0).unwrap().holds);
        // B2 reflection on its -1 line
        let g = group("G(2,1,2)");
        for (x, v) in induction_sample(&g) {
            for k in 0..2 {
                assert!(induction_check(&g, x, &v, k).unwrap().holds);
            }
        }
    }

    #[test]
    fn rank_one_sample() {
        // reflections of mu_6 fix only 0, which is not an eigenvector
        let g = group("G(6,1,1)");
        let sample = induction_sample(&g);
        assert!(sample.iter().all(|(_, v)| v.iter().any(|c| !c.is_zero())));
        for (x, v) in sample {
            for k in 0..6 {
                assert!(induction_check(&g, x, &v, k).unwrap().holds);
            }
        }
    }
}
