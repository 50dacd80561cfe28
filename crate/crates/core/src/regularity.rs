//! Regular eigenvalues of reflection cosets: the counting criterion, a
//! brute-force eigenspace oracle, the polynomial identities relating
//! fixed-space dimensions to the factor data, and existence witnesses.

use crate::cyclo::{Cyclotomic, Rat, RootOfUnity};
use crate::groups::{theta_v, Hyperplane, ReflectionCoset, ReflectionGroup};
use crate::linalg::{CycMatrix, Echelon, TruncSeries, UniPoly, Vector};
use crate::molien::{denominator, n_gutkin, Factor, FactorSet, Molien, MolienError, ModuleRep};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error(transparent)]
    Molien(#[from] MolienError),
    #[error("regularity tests disagree at {zeta}: criterion {criterion}, multisets {multiset}, oracle {oracle}")]
    Disagreement { zeta: RootOfUnity, criterion: bool, multiset: bool, oracle: bool },
    #[error("no regular eigenvalue found among roots of order dividing {0}")]
    SearchExhausted(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("witness check failed: {0}")]
    BadWitness(String),
}

/// An element g gamma with a regular zeta-eigenvector.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub element: usize,
    pub zeta: RootOfUnity,
    #[serde(serialize_with = "ser_vectors")]
    pub eigenspace: Vec<Vector>,
    #[serde(serialize_with = "ser_vector")]
    pub vector: Vector,
}

fn ser_vector<S: serde::Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
    let r: Vec<String> = v.iter().map(|x| x.render()).collect();
    r.serialize(s)
}

fn ser_vectors<S: serde::Serializer>(v: &[Vector], s: S) -> Result<S::Ok, S::Error> {
    let r: Vec<Vec<String>> = v.iter().map(|w| w.iter().map(|x| x.render()).collect()).collect();
    r.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub zeta: RootOfUnity,
    pub criterion: bool,
    /// {(eps zeta^d)^-1} over V equals {eps* zeta^d*} over V*.
    pub multiset_equal: bool,
    pub oracle: Option<Witness>,
}

/// Candidate universe and the regular roots found in it.
#[derive(Clone, Debug, Serialize)]
pub struct RegularSet {
    pub exponent: u64,
    pub roots: Vec<RootOfUnity>,
    pub orders: BTreeSet<u64>,
}

/// (|{eps zeta^d = 1}| over V, |{eps* zeta^d* = 1}| over V*).
pub fn criterion_counts(deg: &FactorSet, codeg: &FactorSet, z: &RootOfUnity) -> (usize, usize) {
    let count = |fs: &FactorSet| fs.factors.iter().filter(|f| f.eps.mul(&z.pow(fs.d(f))).is_one()).count();
    (count(deg), count(codeg))
}

pub fn criterion(deg: &FactorSet, codeg: &FactorSet, z: &RootOfUnity) -> bool {
    let (a, b) = criterion_counts(deg, codeg, z);
    a == b
}

/// Multiset form of the criterion after shifting gamma to zeta^-1 gamma.
pub fn multiset_criterion(deg: &FactorSet, codeg: &FactorSet, z: &RootOfUnity) -> bool {
    let mut a: Vec<RootOfUnity> = deg.factors.iter().map(|f| f.eps.mul(&z.pow(deg.d(f))).inv()).collect();
    let mut b: Vec<RootOfUnity> = codeg.factors.iter().map(|f| f.eps.mul(&z.pow(codeg.d(f)))).collect();
    a.sort();
    b.sort();
    a == b
}

/// A vector of the span of `basis` off every hyperplane, built as
/// sum t^i b_i for t = 2, 3, ...; None if some L_H vanishes on the span.
pub fn regular_vector(basis: &[Vector], arrangement: &[Hyperplane]) -> Option<Vector> {
    if basis.is_empty() {
        return if arrangement.is_empty() { Some(Vec::new()) } else { None };
    }
    let vals: Vec<Vec<Cyclotomic>> = arrangement.iter().map(|h| basis.iter().map(|b| h.eval(b)).collect()).collect();
    if vals.iter().any(|v| v.iter().all(|x| x.is_zero())) {
        return None;
    }
    let dim = basis[0].len();
    for t in 2i64.. {
        let coeffs: Vec<Rat> = (0..basis.len()).map(|i| Rat::int(t.pow(i as u32))).collect();
        let ok = vals.iter().all(|v| {
            let mut s = Cyclotomic::zero(1);
            for (x, c) in v.iter().zip(&coeffs) {
                s += &x.scale(c);
            }
            !s.is_zero()
        });
        if ok {
            let mut out = vec![Cyclotomic::zero(1); dim];
            for (b, c) in basis.iter().zip(&coeffs) {
                for (o, x) in out.iter_mut().zip(b) {
                    *o += &x.scale(c);
                }
            }
            return Some(out);
        }
    }
    unreachable!()
}

/// Element orders of G gamma divide this; so do all regular eigenvalues.
pub fn candidate_exponent(mol: &Molien, deg: &FactorSet, codeg: &FactorSet) -> u64 {
    let mut l = mol.coset.gamma_order.lcm(&mol.coset.group.exponent());
    for fs in [deg, codeg] {
        for f in &fs.factors {
            let d = fs.d(f).unsigned_abs();
            if d > 0 {
                l = l.lcm(&(d * f.eps.order));
            }
        }
    }
    l
}

/// Lowest-index element g gamma with a regular zeta-eigenvector.
pub fn oracle(mol: &Molien, z: &RootOfUnity) -> Option<Witness> {
    let coset = &mol.coset;
    let g = &coset.group;
    let pd = mol.power(1);
    let zc = z.to_cyclotomic();
    let mut cand: Vec<usize> = pd.buckets.iter().filter(|b| b.q.eval(&zc).is_zero()).flat_map(|b| b.members.iter().copied()).collect();
    cand.sort_unstable();
    let scalar = CycMatrix::scalar(g.dim, &zc);
    cand.par_iter().find_map_first(|&i| {
        let x = coset.coset_element(i, 1);
        let e = (&x - &scalar).kernel();
        let v = regular_vector(&e, &g.arrangement)?;
        Some(Witness { element: i, zeta: *z, eigenspace: e, vector: v })
    })
}

pub fn factor_pair(mol: &Molien) -> Result<(FactorSet, FactorSet), RegularityError> {
    Ok((mol.v_factors()?, mol.codegree_factors()?))
}

/// Criterion, multiset test and oracle at one zeta; errors if they disagree.
pub fn report(mol: &Molien, z: &RootOfUnity) -> Result<RegularityReport, RegularityError> {
    let (deg, codeg) = factor_pair(mol)?;
    report_with(mol, &deg, &codeg, z)
}

/// The counting criterion needs V != V^G: for the trivial group both counts
/// can vanish at a zeta that is not an eigenvalue of gamma.
fn criterion_applies(mol: &Molien) -> Result<(), RegularityError> {
    if mol.coset.group.is_trivial() && mol.coset.dim() > 0 {
        return Err(RegularityError::Precondition("counting criterion needs V != V^G (G is trivial)".into()));
    }
    Ok(())
}

fn report_with(mol: &Molien, deg: &FactorSet, codeg: &FactorSet, z: &RootOfUnity) -> Result<RegularityReport, RegularityError> {
    criterion_applies(mol)?;
    let c = criterion(deg, codeg, z);
    let m = multiset_criterion(deg, codeg, z);
    let w = oracle(mol, z);
    if c != m || c != w.is_some() {
        return Err(RegularityError::Disagreement { zeta: *z, criterion: c, multiset: m, oracle: w.is_some() });
    }
    Ok(RegularityReport { zeta: *z, criterion: c, multiset_equal: m, oracle: w })
}

pub fn is_regular_criterion(mol: &Molien, z: &RootOfUnity) -> Result<bool, RegularityError> {
    criterion_applies(mol)?;
    let (deg, codeg) = factor_pair(mol)?;
    Ok(criterion(&deg, &codeg, z))
}

/// All regular roots in the candidate universe, each cross-checked.
pub fn regular_orders(mol: &Molien) -> Result<RegularSet, RegularityError> {
    let (deg, codeg) = factor_pair(mol)?;
    let l = candidate_exponent(mol, &deg, &codeg);
    let mut roots = Vec::new();
    for k in 0..l {
        let z = RootOfUnity::new(l, k as i64);
        if report_with(mol, &deg, &codeg, &z)?.criterion {
            roots.push(z);
        }
    }
    roots.sort();
    let orders = roots.iter().map(|z| z.order).collect();
    Ok(RegularSet { exponent: l, roots, orders })
}

/// Units mod n, i.e. the Galois group of Q(zeta_n).
pub fn galois_units(n: u32) -> Vec<i64> {
    (1..=n.max(1) as i64).filter(|k| k.gcd(&(n as i64)) == 1).collect()
}

#[derive(Clone, Debug)]
pub enum Identity {
    Sigma(i64),
    SigmaDual(i64),
    Twistpw,
    LM2form,
    BetterLM2form,
    /// The same with the product over U*_# as printed; expected to fail.
    BetterLM2formPrinted,
    ProductFormula,
    OS2(ModuleRep),
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Sigma(k) => write!(f, "sigma[{k}]"),
            Identity::SigmaDual(k) => write!(f, "sigma_dual[{k}]"),
            Identity::Twistpw => write!(f, "twistpw"),
            Identity::LM2form => write!(f, "LM2form"),
            Identity::BetterLM2form => write!(f, "better_LM2form"),
            Identity::BetterLM2formPrinted => write!(f, "better_LM2form_printed"),
            Identity::ProductFormula => write!(f, "product_formula"),
            Identity::OS2(m) => write!(f, "OS2[{m}]"),
        }
    }
}

impl Identity {
    /// Parse a CLI identity name; `sigma` supplies the Galois exponent.
    pub fn parse(name: &str, sigma: i64) -> Option<Identity> {
        Some(match name {
            "sigma" => Identity::Sigma(sigma),
            "sigma_dual" => Identity::SigmaDual(sigma),
            "twistpw" => Identity::Twistpw,
            "LM2form" => Identity::LM2form,
            "better_LM2form" => Identity::BetterLM2form,
            "product_formula" => Identity::ProductFormula,
            "OS2" => Identity::OS2(ModuleRep::v().galois(sigma)),
            "OS2_dual" => Identity::OS2(ModuleRep::vdual().galois(sigma)),
            _ => return None,
        })
    }

    /// The full suite for one coset: every Galois sigma of the conductor.
    pub fn suite(conductor: u32) -> Vec<Identity> {
        let mut out = vec![Identity::Twistpw, Identity::LM2form, Identity::BetterLM2form, Identity::ProductFormula];
        for k in galois_units(conductor) {
            out.push(Identity::Sigma(k));
            out.push(Identity::SigmaDual(k));
            out.push(Identity::OS2(ModuleRep::v().galois(k)));
            out.push(Identity::OS2(ModuleRep::vdual().galois(k)));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Per class of g gamma (same char. polynomial): count, dim V^{g gamma},
/// det'(1 - g gamma) and det(g gamma).
struct ClassStat {
    count: usize,
    fixed: usize,
    det_prime: Cyclotomic,
    det: Cyclotomic,
}

fn class_stats(mol: &Molien) -> Vec<ClassStat> {
    let pd = mol.power(1);
    let r = mol.coset.dim();
    let one_minus_t = UniPoly::new(vec![Cyclotomic::one(1), Cyclotomic::from_int(1, -1)]);
    pd.buckets
        .par_iter()
        .map(|b| {
            let x = mol.coset.coset_element(b.members[0], 1);
            let fixed = x.fixed_dim();
            // det(1 - t x) has the conjugate coefficients of det(1 - t x^-1)
            let mut f = b.q.map(|c| c.conj());
            let det = f.coeff(r).scale(&Rat::int(if r % 2 == 0 { 1 } else { -1 }));
            for _ in 0..fixed {
                f = f.div_exact(&one_minus_t).expect("eigenvalue 1 of multiplicity dim V^x");
            }
            ClassStat { count: b.members.len(), fixed, det_prime: f.sum_coeffs(), det }
        })
        .collect()
}

fn t_plus(c: Cyclotomic) -> UniPoly {
    UniPoly::new(vec![c, Cyclotomic::one(1)])
}

fn cint(k: i64) -> Cyclotomic {
    Cyclotomic::from_int(1, k)
}

/// sum over classes of weight * T^fixed, with T -> -T when `neg`.
fn fixed_poly(stats: &[ClassStat], neg: bool, w: impl Fn(&ClassStat) -> Cyclotomic) -> UniPoly {
    let mut p = UniPoly::zero();
    for s in stats {
        let mut c = w(s).scale(&Rat::int(s.count as i64));
        if neg && s.fixed % 2 == 1 {
            c = -c;
        }
        p = p.add(&UniPoly::monomial(c, s.fixed));
    }
    p
}

fn one_minus_inv(e: &RootOfUnity) -> Cyclotomic {
    &Cyclotomic::one(1) - &e.inv().to_cyclotomic()
}

/// prod_{U(M)} (T + m) prod_{U#(M)} (1 - eps^-1) prod_{U#(V)} d/(1 - eps^-1),
/// or 0 unless |U(V)| = |U(M)|.
fn lm_rhs(deg: &FactorSet, m: &FactorSet) -> UniPoly {
    if deg.u().len() != m.u().len() {
        return UniPoly::zero();
    }
    let mut p = UniPoly::one();
    for f in m.u() {
        p = p.mul(&t_plus(cint(f.m)));
    }
    let mut c = Cyclotomic::one(1);
    for f in m.u_sharp() {
        c = &c * &one_minus_inv(&f.eps);
    }
    for f in deg.u_sharp() {
        c = &c * &(&cint(deg.d(&f)) / &one_minus_inv(&f.eps));
    }
    p.scale(&c)
}

fn sign(r: usize) -> Cyclotomic {
    cint(if r % 2 == 0 { 1 } else { -1 })
}

fn galois(c: &Cyclotomic, k: i64) -> Cyclotomic {
    c.galois(k).expect("Galois exponent coprime to conductor")
}

/// Both sides of one identity, exact.
pub fn verify_identity(mol: &Molien, id: &Identity) -> Result<IdentityReport, RegularityError> {
    let deg = mol.v_factors()?;
    let r = mol.coset.dim();
    let rep = |lhs: String, rhs: String, holds: bool| IdentityReport { name: id.to_string(), lhs, rhs, holds };
    let poly_rep = |lhs: UniPoly, rhs: UniPoly| rep(lhs.to_string(), rhs.to_string(), lhs == rhs);
    let n = mol.coset.conductor();
    let check_unit = |k: i64| {
        if k.gcd(&(n as i64)) != 1 && n > 1 {
            Err(RegularityError::Precondition(format!("sigma exponent {k} not coprime to conductor {n}")))
        } else {
            Ok(())
        }
    };
    match id {
        Identity::Twistpw => {
            let stats = class_stats(mol);
            let lhs = fixed_poly(&stats, false, |_| Cyclotomic::one(1));
            let mut rhs = UniPoly::one();
            for f in deg.u() {
                rhs = rhs.mul(&t_plus(cint(deg.d(&f) - 1)));
            }
            for f in deg.u_sharp() {
                rhs = rhs.scale(&cint(deg.d(&f)));
            }
            Ok(poly_rep(lhs, rhs))
        }
        Identity::Sigma(k) => {
            check_unit(*k)?;
            let stats = class_stats(mol);
            let lhs = fixed_poly(&stats, false, |s| &galois(&s.det_prime, *k) / &s.det_prime);
            let m = mol.module_factors(&ModuleRep::v().galois(*k))?;
            Ok(poly_rep(lhs, lm_rhs(&deg, &m)))
        }
        Identity::SigmaDual(k) => {
            check_unit(*k)?;
            let stats = class_stats(mol);
            let lhs = fixed_poly(&stats, true, |s| {
                &(&galois(&s.det_prime, *k) / &s.det_prime) / &galois(&s.det, *k)
            })
            .scale(&sign(r));
            let m = mol.module_factors(&ModuleRep::vdual().galois(*k))?;
            Ok(poly_rep(lhs, lm_rhs(&deg, &m)))
        }
        Identity::LM2form => {
            let stats = class_stats(mol);
            let lhs = fixed_poly(&stats, true, |s| s.det.inv().expect("det != 0")).scale(&sign(r));
            let codeg = mol.codegree_factors()?;
            // T + d* + 1 = T + m on the codegree side
            Ok(poly_rep(lhs, lm_rhs(&deg, &codeg)))
        }
        Identity::BetterLM2form | Identity::BetterLM2formPrinted => {
            let stats = class_stats(mol);
            let lhs = fixed_poly(&stats, false, |s| s.det.clone());
            let codeg = mol.codegree_factors()?;
            let rhs = if deg.u().len() != codeg.u().len() {
                UniPoly::zero()
            } else {
                let mut c = Cyclotomic::one(1);
                for f in &deg.factors {
                    c = &c * &f.eps.inv().to_cyclotomic();
                }
                for f in deg.u_sharp() {
                    c = &c * &cint(deg.d(&f));
                }
                let star: Vec<Factor> = if matches!(id, Identity::BetterLM2form) { codeg.u() } else { codeg.u_sharp() };
                let mut p = UniPoly::constant(c);
                for f in star {
                    p = p.mul(&t_plus(cint(-codeg.d(&f) - 1)));
                }
                p
            };
            Ok(poly_rep(lhs, rhs))
        }
        Identity::ProductFormula => match mol.product_formula(&deg, true) {
            Ok(()) => Ok(rep("sum_g Tr((g gamma)^k | V*)".into(), "|G| sum_{d_i | k} eps_i^{k/d_i}".into(), true)),
            Err(MolienError::ProductFormula(k)) => Ok(rep(format!("mismatch at k = {k}"), String::new(), false)),
            Err(e) => Err(e.into()),
        },
        Identity::OS2(m) => os2(mol, m, &deg).map(|(holds, bound)| {
            rep(format!("bivariate Molien sum through x^{bound}"), "prod(1 - y eps x^m) / prod(1 - eps x^d)".into(), holds)
        }),
    }
}

/// Theorem-OS2 identity as truncated bivariate series, exact in y.
fn os2(mol: &Molien, m: &ModuleRep, deg: &FactorSet) -> Result<(bool, usize), RegularityError> {
    let g = &mol.coset.group;
    let dim = m.dim(g.dim);
    if n_gutkin(g, &ModuleRep::Exterior(Box::new(m.clone()), dim)) != n_gutkin(g, m) {
        return Err(RegularityError::Precondition(format!("N(top exterior power of {m}) != N({m})")));
    }
    let fs = mol.module_factors(m)?;
    let dmax = deg.degrees().into_iter().max().unwrap_or(1) as usize;
    let bound = fs.sum_m() as usize + dmax;
    let pd = mol.power(1);
    let order = Cyclotomic::from_rat(1, Rat::new(1, g.order() as i64));
    // left side: coefficient of y^k is a series in x
    let parts: Vec<Vec<TruncSeries>> = pd
        .buckets
        .par_iter()
        .map(|b| {
            let mut ysum = vec![Cyclotomic::zero(1); dim + 1];
            for &i in &b.members {
                let mm = if m.is_functorial() {
                    m.eval(&pd.xinv[i], None)
                } else {
                    let x = mol.coset.coset_element(i, 1);
                    m.eval(&x, Some((i, 1))).inverse().expect("invertible")
                };
                let c = mm.char_series().expect("square");
                for (k, a) in c.coeffs().iter().enumerate() {
                    ysum[k] += a;
                }
            }
            let inv = TruncSeries::from_poly(&b.q, bound).invert().expect("constant term 1");
            ysum.iter().map(|c| inv.scale(c)).collect()
        })
        .collect();
    let mut lhs: Vec<TruncSeries> = vec![TruncSeries::zero(bound); dim + 1];
    for p in &parts {
        for (l, s) in lhs.iter_mut().zip(p) {
            l.add_assign(s);
        }
    }
    // right side: prod (1 - y eps x^m) expanded in y
    let mut num: Vec<UniPoly> = vec![UniPoly::one()];
    for f in &fs.factors {
        let term = UniPoly::monomial(-f.eps.to_cyclotomic(), f.m as usize);
        let mut next = vec![UniPoly::zero(); num.len() + 1];
        for (k, p) in num.iter().enumerate() {
            next[k] = next[k].add(p);
            next[k + 1] = next[k + 1].add(&p.mul(&term));
        }
        num = next;
    }
    let den = TruncSeries::from_poly(&denominator(deg, 1), bound).invert().expect("constant term 1");
    let holds = (0..=dim).all(|k| lhs[k].scale(&order) == den.mul_poly(&num[k]));
    Ok((holds, bound))
}

/// The multisets {eps zeta^m} for G and for the parabolic G_v agree, for
/// M = V and V*, where gamma v = zeta v.
pub fn eqlists_check(mol: &Molien, v: &[Cyclotomic]) -> Result<bool, RegularityError> {
    let coset = &mol.coset;
    let theta = theta_v(&coset.gamma, v).map_err(|e| RegularityError::Precondition(e.to_string()))?;
    let zeta = theta.as_root_of_unity().ok_or_else(|| RegularityError::Precondition("eigenvalue is not a root of unity".into()))?;
    let (gv, _) = coset.group.parabolic(v);
    let sub = ReflectionCoset::new(Arc::new(gv), coset.gamma.clone(), u64::MAX)
        .map_err(|e| RegularityError::Precondition(e.to_string()))?;
    let smol = Molien::new(&sub);
    for m in [ModuleRep::v(), ModuleRep::vdual()] {
        let twist = |fs: &FactorSet| {
            let mut v: Vec<RootOfUnity> = fs.factors.iter().map(|f| f.eps.mul(&zeta.pow(f.m))).collect();
            v.sort();
            v
        };
        if twist(&mol.module_factors(&m)?) != twist(&smol.module_factors(&m)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First regular root in the candidate universe, by increasing order.
pub fn direct_search(mol: &Molien) -> Result<Option<Witness>, RegularityError> {
    let (deg, codeg) = factor_pair(mol)?;
    let l = candidate_exponent(mol, &deg, &codeg);
    let mut roots: Vec<RootOfUnity> = (0..l).map(|k| RootOfUnity::new(l, k as i64)).collect();
    roots.sort();
    for z in roots {
        if criterion(&deg, &codeg, &z) {
            let r = report_with(mol, &deg, &codeg, &z)?;
            return Ok(r.oracle);
        }
    }
    Ok(None)
}

/// zeta_B on each gamma-orbit block of irreducible components, an element
/// g of G and a G-regular v with z gamma g v = v.
#[derive(Clone, Debug)]
pub struct ReductionWitness {
    pub z: CycMatrix,
    pub element: usize,
    pub vector: Vector,
    pub block_zetas: Vec<RootOfUnity>,
    pub orbit_lengths: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum Existence {
    Direct(Witness),
    Reduction(ReductionWitness),
}

/// Irreducible components of G: classes of reflections under the
/// transitive closure of non-commutation.
pub fn components(g: &ReflectionGroup) -> Vec<Vec<usize>> {
    let refl = &g.reflections;
    let mut parent: Vec<usize> = (0..refl.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..refl.len() {
        for b in a + 1..refl.len() {
            if g.mul_index(refl[a], refl[b]) != g.mul_index(refl[b], refl[a]) {
                let (x, y) = (find(&mut parent, a), find(&mut parent, b));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; refl.len()];
    for a in 0..refl.len() {
        let root = find(&mut parent, a);
        match root_of[root] {
            Some(c) => comps[c].push(refl[a]),
            None => {
                root_of[root] = Some(comps.len());
                comps.push(vec![refl[a]]);
            }
        }
    }
    comps
}

/// Witness built block by block from the decomposition of V into
/// gamma-orbits of irreducible G-components.
pub fn reduction_witness(coset: &ReflectionCoset) -> Result<ReductionWitness, RegularityError> {
    let g = &coset.group;
    let r = g.dim;
    let n = g.conductor;
    let bad = |s: &str| RegularityError::BadWitness(s.to_string());
    let comps = components(g);
    let id = CycMatrix::identity(r, n);
    // subspace of each component: span of the root lines
    let mut bases: Vec<Vec<Vector>> = Vec::new();
    for c in &comps {
        let mut e = Echelon::new();
        for &s in c {
            let d = &g.elements[s] - &id;
            for j in 0..r {
                e.insert(&d.column(j));
            }
        }
        bases.push(e.basis());
    }
    let fixed: Vec<Vector> = if g.arrangement.is_empty() {
        (0..r).map(|i| CycMatrix::identity(r, n).column(i)).collect()
    } else {
        CycMatrix::from_rows(g.arrangement.iter().map(|h| h.form.clone()).collect()).kernel()
    };
    let mut cols: Vec<Vector> = Vec::new();
    let mut offsets = Vec::new();
    for b in &bases {
        offsets.push(cols.len());
        cols.extend(b.iter().cloned());
    }
    let fixed_off = cols.len();
    cols.extend(fixed.iter().cloned());
    if cols.len() != r {
        return Err(bad("components do not span V"));
    }
    let p = CycMatrix::from_columns(&cols);
    let pinv = p.inverse().map_err(|_| bad("components are not independent"))?;
    let gamma = &coset.gamma;
    let ginv = gamma.inverse().expect("invertible");
    // gamma permutes components
    let comp_of = |idx: usize| comps.iter().position(|c| c.contains(&idx));
    let mut perm = Vec::new();
    for c in &comps {
        let t = &(gamma * &g.elements[c[0]]) * &ginv;
        let j = g.index_of(&t).and_then(comp_of).ok_or_else(|| bad("gamma does not permute components"))?;
        perm.push(j);
    }
    let mut seen = vec![false; comps.len()];
    let mut zdiag = vec![Cyclotomic::one(1); r];
    let mut gtotal = id.clone();
    let mut v = vec![Cyclotomic::zero(1); r];
    let mut block_zetas = Vec::new();
    let mut orbit_lengths = Vec::new();
    for c0 in 0..comps.len() {
        if seen[c0] {
            continue;
        }
        let mut orbit = vec![c0];
        let mut c = perm[c0];
        while c != c0 {
            orbit.push(c);
            c = perm[c];
        }
        for &c in &orbit {
            seen[c] = true;
        }
        let k = orbit.len();
        let (off, m) = (offsets[c0], bases[c0].len());
        let restrict = |x: &CycMatrix| {
            let y = &(&pinv * x) * &p;
            CycMatrix::from_rows((0..m).map(|i| (0..m).map(|j| y.get(off + i, off + j).clone()).collect()).collect())
        };
        let gens: Vec<CycMatrix> = comps[c0].iter().map(|&s| restrict(&g.elements[s])).collect();
        let sub = ReflectionGroup::enumerate(m, &gens, g.order() + 1, n).map_err(|e| bad(&e.to_string()))?;
        let gk = gamma.pow(k as u64);
        let subc = ReflectionCoset::new(Arc::new(sub), restrict(&gk), u64::MAX).map_err(|e| bad(&e.to_string()))?;
        let smol = Molien::new(&subc);
        let w = direct_search(&smol)?.ok_or(RegularityError::SearchExhausted(smol.coset.group.exponent()))?;
        // lift g1' from the block to G
        let sg = &smol.coset.group.elements[w.element];
        let mut blockdiag = CycMatrix::identity(r, n);
        for i in 0..m {
            for j in 0..m {
                blockdiag.set(off + i, off + j, sg.get(i, j).clone());
            }
        }
        let g1p = &(&p * &blockdiag) * &pinv;
        if !g.contains(&g1p) {
            return Err(bad("block element does not lift to G"));
        }
        let gkinv = gk.inverse().expect("invertible");
        let g1 = &(&gkinv * &g1p) * &gk;
        let zeta1 = w.zeta;
        let zeta = RootOfUnity::new(zeta1.order * k as u64, -(zeta1.exp as i64));
        let zc = zeta.to_cyclotomic();
        let mut v1 = vec![Cyclotomic::zero(1); r];
        for (i, a) in w.vector.iter().enumerate() {
            for (o, x) in v1.iter_mut().zip(&cols[off + i]) {
                *o += &(a * x);
            }
        }
        let zg = gamma.scale(&zc);
        let mut cur = v1;
        for _ in 0..k {
            for (o, x) in v.iter_mut().zip(&cur) {
                *o += x;
            }
            cur = zg.apply(&cur);
        }
        let gpow = gamma.pow(k as u64 - 1);
        let gb = &(&gpow * &g1) * &gpow.inverse().expect("invertible");
        gtotal = &gtotal * &gb;
        for &c in &orbit {
            for i in 0..bases[c].len() {
                zdiag[offsets[c] + i] = zc.clone();
            }
        }
        block_zetas.push(zeta);
        orbit_lengths.push(k);
    }
    for z in zdiag.iter_mut().skip(fixed_off) {
        *z = Cyclotomic::one(1);
    }
    let z = &(&p * &CycMatrix::diag(&zdiag)) * &pinv;
    let element = g.index_of(&gtotal).ok_or_else(|| bad("product element not in G"))?;
    // checks: z central in <G, gamma>, z gamma g v = v, v regular
    for x in g.generators.iter().chain(std::iter::once(gamma)) {
        if &z * x != x * &z {
            return Err(bad("z does not centralize <G, gamma>"));
        }
    }
    let w = (&(&z * gamma) * &gtotal).apply(&v);
    if w.iter().zip(&v).any(|(a, b)| a != b) {
        return Err(bad("z gamma g v != v"));
    }
    if g.arrangement.iter().any(|h| h.eval(&v).is_zero()) {
        return Err(bad("v lies on a hyperplane"));
    }
    Ok(ReductionWitness { z, element, vector: v, block_zetas, orbit_lengths })
}

/// A regular eigenvalue of G gamma, or else one of z gamma G for z central.
pub fn existence_check(mol: &Molien) -> Result<Existence, RegularityError> {
    if let Some(w) = direct_search(mol)? {
        return Ok(Existence::Direct(w));
    }
    reduction_witness(&mol.coset).map(Existence::Reduction)
}
