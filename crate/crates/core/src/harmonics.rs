//! Explicit invariant theory: basic invariants, homogeneous bases of
//! (S (x) M*)^G over S^G, Gutkin products, discriminant matrices and the
//! structure of well-generated cosets.
//!
//! A group element g acts on S = Sym(V*) by f -> f o g^-1, i.e. by the
//! substitution X_i -> sum_j (g^-1)_ij X_j, and on M* by the contragredient.
//! Elements of S (x) M* are lists of components in the dual basis of M*.

use crate::cyclo::{Cyclotomic, RootOfUnity};
use crate::groups::commutant_dim;
use crate::linalg::{CycMatrix, DegreeBasis, Echelon, Mono, MultiPoly};
use crate::molien::{n_gutkin, psi_polynomial, Factor, FactorSet, Molien, MolienError, ModuleRep};
use crate::regularity::{self, RegularSet, RegularityError};
use crate::groups::ReflectionCoset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

const SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmonicsError {
    #[error(transparent)]
    Molien(#[from] MolienError),
    #[error(transparent)]
    Regularity(#[from] RegularityError),
    #[error("invariants of {module} in degree {degree}: found {found}, Molien series gives {expected}")]
    InvariantDim { module: String, degree: u32, found: usize, expected: usize },
    #[error("basic invariants not found below degree {0}")]
    BasicInvariants(u32),
    #[error("Jacobian of the basic invariants is not a constant multiple of Psi_V")]
    Jacobian,
    #[error("homogeneous basis for {module} gives {found}, Molien factors give {expected}")]
    FactorMismatch { module: String, found: String, expected: String },
    #[error("{0} is not a constant multiple of the expected hyperplane product")]
    NotProportional(String),
    #[error("polynomial is not G-invariant")]
    NotInvariant,
    #[error("polynomial is not a polynomial in the basic invariants")]
    NotExpressible,
    #[error("regularity routes disagree at {zeta}: counting {criterion}, ideal {ideal}")]
    Disagreement { zeta: RootOfUnity, criterion: bool, ideal: bool },
    #[error("check failed: {0}")]
    Check(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("module {0} cannot be evaluated on arbitrary matrices")]
    Unsupported(String),
}

#[derive(Clone, Debug)]
pub struct BasicInvariant {
    pub poly: MultiPoly,
    pub degree: u32,
    pub eps: RootOfUnity,
}

#[derive(Clone, Debug)]
pub struct BasicInvariants {
    pub invariants: Vec<BasicInvariant>,
    /// Jacobian = lambda * Psi_V.
    pub jacobian_ratio: Cyclotomic,
}

impl BasicInvariants {
    pub fn degrees(&self) -> Vec<u32> {
        self.invariants.iter().map(|p| p.degree).collect()
    }

    pub fn polys(&self) -> Vec<MultiPoly> {
        self.invariants.iter().map(|p| p.poly.clone()).collect()
    }
}

/// Homogeneous G-invariant gamma-eigenvector of S (x) M*.
#[derive(Clone, Debug)]
pub struct ModElem {
    pub degree: u32,
    pub eps: RootOfUnity,
    pub comps: Vec<MultiPoly>,
}

#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub module: ModuleRep,
    pub elements: Vec<ModElem>,
}

impl HarmonicBasis {
    pub fn factor_set(&self) -> FactorSet {
        FactorSet::new(
            self.module.to_string(),
            self.module.is_dual(),
            self.elements.iter().map(|u| Factor { m: u.degree as i64, eps: u.eps }).collect(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct DiscMatrix {
    pub entries: Vec<Vec<MultiPoly>>,
    /// The entries written in the basic invariants.
    pub exprs: Vec<Vec<MultiPoly>>,
    pub delta: MultiPoly,
    pub delta_expr: MultiPoly,
    /// Delta = lambda * Psi_M * Psi_M*.
    pub lambda: Cyclotomic,
}

#[derive(Clone, Debug, Serialize)]
pub struct WellgenReport {
    pub degrees: Vec<i64>,
    pub codegrees: Vec<i64>,
    pub degree_condition: bool,
    pub min_generating_reflections: usize,
    pub well_generated: bool,
    /// Disc matrix = P_r C mod (P_i, i != r) with C constant, nonsingular,
    /// supported on d_i + d*_j = d_r.
    pub matrix_check: Option<bool>,
    /// r d_r = N + N*.
    pub top_degree_sum: Option<bool>,
    /// eps*_{sigma(i)} = eps_i^-1 eps_r for a degree-compatible bijection.
    pub sigma_matching: Option<bool>,
    /// Every zeta with zeta^{d_r} = eps_r^-1 is regular.
    pub top_regular: Option<bool>,
    /// Indices i0 with Delta monic in P_i0, and whether zeta^{d_i0} = eps_i0^-1
    /// is then regular.
    pub monic: Vec<(usize, bool)>,
}

/// Linear substitution on S_d as sparse images of the monomial basis.
struct Subst {
    images: Vec<Vec<(usize, Cyclotomic)>>,
}

impl Subst {
    fn new(a: &CycMatrix, basis: &DegreeBasis) -> Subst {
        let forms = linear_forms(a);
        let r = basis.nvars;
        let images = basis
            .monos
            .par_iter()
            .map(|m| {
                let p = MultiPoly::term(r, *m, Cyclotomic::one(1)).substitute(&forms);
                p.terms().map(|(mm, c)| (basis.index[mm], c.clone())).collect()
            })
            .collect();
        Subst { images }
    }
}

fn linear_forms(a: &CycMatrix) -> Vec<MultiPoly> {
    (0..a.rows()).map(|i| MultiPoly::linear(&a.row(i))).collect()
}

/// Action of one matrix x on S_d (x) M*: substitution by x^-1 on each
/// component, then rho_M(x^-1) mixing the components.
struct Action {
    subst: Subst,
    rho: Option<CycMatrix>,
    nb: usize,
    md: usize,
}

impl Action {
    fn new(x: &CycMatrix, m: &ModuleRep, basis: &DegreeBasis) -> Action {
        let xinv = x.inverse().expect("invertible");
        let rho = m.eval(&xinv, None);
        let md = rho.rows();
        Action { subst: Subst::new(&xinv, basis), rho: (!rho.is_identity()).then_some(rho), nb: basis.len(), md }
    }

    fn apply(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let nb = self.nb;
        let mut w = vec![Cyclotomic::zero(1); v.len()];
        for a in 0..self.md {
            for j in 0..nb {
                let c = &v[a * nb + j];
                if c.is_zero() {
                    continue;
                }
                for (k, e) in &self.subst.images[j] {
                    w[a * nb + k] += &(c * e);
                }
            }
        }
        let Some(rho) = &self.rho else {
            return w;
        };
        let mut out = vec![Cyclotomic::zero(1); v.len()];
        for a in 0..self.md {
            for b in 0..self.md {
                let r = rho.get(a, b);
                if r.is_zero() {
                    continue;
                }
                for k in 0..nb {
                    if !w[a * nb + k].is_zero() {
                        out[b * nb + k] += &(r * &w[a * nb + k]);
                    }
                }
            }
        }
        out
    }
}

fn to_dense(comps: &[MultiPoly], basis: &DegreeBasis) -> Vec<Cyclotomic> {
    let mut v = Vec::with_capacity(comps.len() * basis.len());
    for c in comps {
        v.extend(c.to_dense(basis).expect("homogeneous of the basis degree"));
    }
    v
}

fn from_dense(v: &[Cyclotomic], basis: &DegreeBasis) -> Vec<MultiPoly> {
    v.chunks(basis.len()).map(|c| MultiPoly::from_dense(basis, c)).collect()
}

/// Exponent vectors alpha with sum alpha_i w_i = d.
pub fn weighted_monomials(w: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(w: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left / w[i] {
            cur.push(k);
            rec(w, i + 1, left - k * w[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if w.iter().all(|&x| x > 0) {
        rec(w, 0, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    fn rec(m: &[Vec<MultiPoly>], cols: &[usize], row: usize, nvars: usize) -> MultiPoly {
        if cols.is_empty() {
            return MultiPoly::one(nvars);
        }
        let mut s = MultiPoly::zero(nvars);
        for (k, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = m[row][c].mul(&rec(m, &rest, row + 1, nvars));
            s = if k % 2 == 0 { s.add(&t) } else { s.sub(&t) };
        }
        s
    }
    let cols: Vec<usize> = (0..m.len()).collect();
    rec(m, &cols, 0, nvars)
}

fn monomial_in(ps: &[MultiPoly], alpha: &[u32], cache: &mut HashMap<(usize, u32), MultiPoly>, nvars: usize) -> MultiPoly {
    let mut t = MultiPoly::one(nvars);
    for (i, &a) in alpha.iter().enumerate() {
        if a > 0 {
            let p = cache.entry((i, a)).or_insert_with(|| ps[i].pow(a)).clone();
            t = t.mul(&p);
        }
    }
    t
}

/// Invariant-theoretic data of one coset, computed on demand.
pub struct Harmonics {
    pub mol: Molien,
    plan: Vec<Vec<(usize, usize)>>,
    basics: OnceLock<Result<BasicInvariants, HarmonicsError>>,
    bases: Mutex<BTreeMap<String, HarmonicBasis>>,
    disc_v: OnceLock<Result<DiscMatrix, HarmonicsError>>,
}

impl Harmonics {
    pub fn new(coset: &ReflectionCoset) -> Harmonics {
        Harmonics {
            mol: Molien::new(coset),
            plan: coset.group.reynolds_plan(),
            basics: OnceLock::new(),
            bases: Mutex::new(BTreeMap::new()),
            disc_v: OnceLock::new(),
        }
    }

    pub fn coset(&self) -> &ReflectionCoset {
        &self.mol.coset
    }

    fn rank(&self) -> usize {
        self.mol.coset.group.dim
    }

    /// Sum over G of g v, along the generator chain.
    fn average(&self, acts: &[Action], v: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
        let mut cur = v;
        for level in &self.plan {
            let mut reps = vec![cur];
            for &(p, gi) in level {
                let next = acts[gi].apply(&reps[p]);
                reps.push(next);
            }
            let mut sum = reps.pop().expect("nonempty");
            for r in &reps {
                for (s, x) in sum.iter_mut().zip(r) {
                    if !x.is_zero() {
                        *s += x;
                    }
                }
            }
            cur = sum;
        }
        cur
    }

    fn check_module(m: &ModuleRep) -> Result<(), HarmonicsError> {
        if m.is_functorial() {
            Ok(())
        } else {
            Err(HarmonicsError::Unsupported(m.to_string()))
        }
    }

    /// Dense basis of (S_d (x) M*)^G, by Reynolds averaging of seeded random
    /// vectors, with the whole spanning set as fallback. The dimension is
    /// checked against the Molien series, and one extra average must lie in
    /// the span.
    fn invariant_dense(&self, m: &ModuleRep, d: u32) -> Result<(DegreeBasis, Vec<Vec<Cyclotomic>>), HarmonicsError> {
        Self::check_module(m)?;
        let r = self.rank();
        let basis = DegreeBasis::new(r, d);
        let md = m.dim(r);
        let n = basis.len() * md;
        let expected = self
            .mol
            .trace_series(m, 0, d as usize)
            .coeff(d as usize)
            .as_i64()
            .filter(|&k| k >= 0)
            .ok_or_else(|| HarmonicsError::Molien(MolienError::NonIntegral { module: m.to_string(), degree: d as usize }))?
            as usize;
        let err = |found| HarmonicsError::InvariantDim { module: m.to_string(), degree: d, found, expected };
        if expected == 0 {
            return Ok((basis, Vec::new()));
        }
        let acts: Vec<Action> = self.mol.coset.group.generators.iter().map(|g| Action::new(g, m, &basis)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((d as u64) << 32) ^ md as u64);
        let random = |rng: &mut ChaCha8Rng| -> Vec<Cyclotomic> {
            (0..n).map(|_| Cyclotomic::from_int(1, rng.gen_range(-7..=7))).collect()
        };
        let mut ech = Echelon::new();
        let mut out = Vec::new();
        let mut tries = 0;
        while ech.rank() < expected && tries < 2 * expected + 4 {
            let batch: Vec<Vec<Cyclotomic>> = (0..expected - ech.rank()).map(|_| random(&mut rng)).collect();
            tries += batch.len();
            let avgs: Vec<Vec<Cyclotomic>> = batch.into_par_iter().map(|v| self.average(&acts, v)).collect();
            for a in avgs {
                if ech.rank() < expected && ech.insert(&a) {
                    out.push(a);
                }
            }
        }
        if ech.rank() < expected {
            // averages of the whole monomial spanning set span the invariants
            let avgs: Vec<Vec<Cyclotomic>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut e = vec![Cyclotomic::zero(1); n];
                    e[i] = Cyclotomic::one(1);
                    self.average(&acts, e)
                })
                .collect();
            for a in avgs {
                if ech.insert(&a) {
                    out.push(a);
                }
            }
            if ech.rank() != expected {
                return Err(err(ech.rank()));
            }
        }
        let extra = self.average(&acts, random(&mut rng));
        if !ech.contains(&extra) {
            return Err(err(expected + 1));
        }
        Ok((basis, out))
    }

    /// Basis of (S_d (x) M*)^G as lists of components.
    pub fn invariant_space(&self, m: &ModuleRep, d: u32) -> Result<Vec<Vec<MultiPoly>>, HarmonicsError> {
        let (basis, vs) = self.invariant_dense(m, d)?;
        Ok(vs.iter().map(|v| from_dense(v, &basis)).collect())
    }

    /// gamma-eigenvectors of `space` completing the span held in `ech`.
    fn eigen_complement(
        &self,
        gamma: &Action,
        space: &[Vec<Cyclotomic>],
        ech: &mut Echelon,
    ) -> Vec<(Vec<Cyclotomic>, RootOfUnity)> {
        let o = self.mol.coset.gamma_order;
        let orbits: Vec<Vec<Vec<Cyclotomic>>> = space
            .par_iter()
            .map(|b| {
                let mut v = vec![b.clone()];
                for _ in 1..o {
                    let next = gamma.apply(v.last().expect("nonempty"));
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Vec::new();
        for k in 0..o {
            let eps = RootOfUnity::new(o, k as i64);
            for orb in &orbits {
                let mut p = vec![Cyclotomic::zero(1); orb[0].len()];
                for (j, w) in orb.iter().enumerate() {
                    let c = eps.pow(-(j as i64)).to_cyclotomic();
                    for (x, y) in p.iter_mut().zip(w) {
                        if !y.is_zero() {
                            *x += &(&c * y);
                        }
                    }
                }
                if ech.insert(&p) {
                    out.push((p, eps));
                }
            }
        }
        out
    }

    /// Basic invariants P_i, gamma-eigenvectors, chosen degree by degree in a
    /// gamma-stable complement of the products of lower ones.
    pub fn basic_invariants(&self) -> Result<&BasicInvariants, HarmonicsError> {
        self.basics.get_or_init(|| self.compute_basics()).as_ref().map_err(|e| e.clone())
    }

    fn compute_basics(&self) -> Result<BasicInvariants, HarmonicsError> {
        let g = &self.mol.coset.group;
        let r = g.dim;
        let order = g.order() as u64;
        let trivial = ModuleRep::TrivialLine;
        let top = n_gutkin(g, &ModuleRep::v()) as u32 + 1;
        let mut chosen: Vec<BasicInvariant> = Vec::new();
        let mut prod = 1u64;
        let mut d = 0;
        while prod < order {
            d += 1;
            if d > top.max(1) {
                return Err(HarmonicsError::BasicInvariants(top));
            }
            let (basis, space) = self.invariant_dense(&trivial, d)?;
            if space.is_empty() {
                continue;
            }
            let mut ech = Echelon::new();
            let ps: Vec<MultiPoly> = chosen.iter().map(|p| p.poly.clone()).collect();
            let degs: Vec<u32> = chosen.iter().map(|p| p.degree).collect();
            let mut cache = HashMap::new();
            for alpha in weighted_monomials(&degs, d) {
                let p = monomial_in(&ps, &alpha, &mut cache, r);
                ech.insert(&p.to_dense(&basis).expect("homogeneous"));
            }
            if ech.rank() == space.len() {
                continue;
            }
            let gamma = Action::new(&self.mol.coset.gamma, &trivial, &basis);
            for (v, eps) in self.eigen_complement(&gamma, &space, &mut ech) {
                chosen.push(BasicInvariant { poly: MultiPoly::from_dense(&basis, &v), degree: d, eps });
                prod *= d as u64;
            }
        }
        if prod != order || chosen.len() != r {
            return Err(HarmonicsError::BasicInvariants(d));
        }
        let jac: Vec<Vec<MultiPoly>> = chosen.iter().map(|p| (0..r).map(|j| p.poly.derivative(j)).collect()).collect();
        let lambda = poly_det(&jac, r).ratio_to(&psi_polynomial(g, &ModuleRep::v())).ok_or(HarmonicsError::Jacobian)?;
        let found = FactorSet::new(
            "V".into(),
            false,
            chosen.iter().map(|p| Factor { m: p.degree as i64 - 1, eps: p.eps }).collect(),
        );
        let expected = self.mol.degrees()?;
        if found.factors != expected.factors {
            return Err(HarmonicsError::FactorMismatch { module: "V".into(), found: found.render(), expected: expected.render() });
        }
        Ok(BasicInvariants { invariants: chosen, jacobian_ratio: lambda })
    }

    /// Homogeneous gamma-eigen basis of (S (x) M*)^G over S^G, degree by
    /// degree modulo S^G_+ times the lower elements; checked against the
    /// Molien factors.
    pub fn harmonic_module_basis(&self, m: &ModuleRep) -> Result<HarmonicBasis, HarmonicsError> {
        let key = m.to_string();
        if let Some(b) = self.bases.lock().expect("lock").get(&key) {
            return Ok(b.clone());
        }
        let b = self.compute_module_basis(m)?;
        self.bases.lock().expect("lock").insert(key, b.clone());
        Ok(b)
    }

    fn compute_module_basis(&self, m: &ModuleRep) -> Result<HarmonicBasis, HarmonicsError> {
        Self::check_module(m)?;
        let g = &self.mol.coset.group;
        let r = g.dim;
        let md = m.dim(r);
        let nm = n_gutkin(g, m);
        let bi = self.basic_invariants()?;
        let ps = bi.polys();
        let degs = bi.degrees();
        let mut cache = HashMap::new();
        let mut chosen: Vec<ModElem> = Vec::new();
        // generators found = dim M means the quotient by S^G_+ is exhausted
        for d in 0..=nm.max(0) as u32 {
            if chosen.len() == md {
                break;
            }
            let (basis, space) = self.invariant_dense(m, d)?;
            if space.is_empty() {
                continue;
            }
            let mut ech = Echelon::new();
            for u in &chosen {
                for alpha in weighted_monomials(&degs, d - u.degree) {
                    if alpha.iter().all(|&a| a == 0) {
                        continue;
                    }
                    let p = monomial_in(&ps, &alpha, &mut cache, r);
                    let comps: Vec<MultiPoly> = u.comps.iter().map(|c| c.mul(&p)).collect();
                    ech.insert(&to_dense(&comps, &basis));
                }
            }
            if ech.rank() == space.len() {
                continue;
            }
            let gamma = Action::new(&self.mol.coset.gamma, m, &basis);
            for (v, eps) in self.eigen_complement(&gamma, &space, &mut ech) {
                chosen.push(ModElem { degree: d, eps, comps: from_dense(&v, &basis) });
            }
        }
        let hb = HarmonicBasis { module: m.clone(), elements: chosen };
        let found = hb.factor_set();
        let expected = self.mol.module_factors(m)?;
        if found.factors != expected.factors || hb.elements.len() != md || found.sum_m() != nm {
            return Err(HarmonicsError::FactorMismatch { module: m.to_string(), found: found.render(), expected: expected.render() });
        }
        Ok(hb)
    }

    /// lambda with (wedge of the basis) = lambda * Psi_M.
    pub fn gutkin_check(&self, m: &ModuleRep) -> Result<Cyclotomic, HarmonicsError> {
        let hb = self.harmonic_module_basis(m)?;
        let rows: Vec<Vec<MultiPoly>> = hb.elements.iter().map(|u| u.comps.clone()).collect();
        let det = poly_det(&rows, self.rank());
        det.ratio_to(&psi_polynomial(&self.mol.coset.group, m))
            .ok_or_else(|| HarmonicsError::NotProportional(format!("wedge of the {m} basis")))
    }

    /// Pairing matrix between the bases for M and M*. Each entry is written
    /// in the basic invariants (which certifies invariance) and checked
    /// against gamma(M_ij) = eps_i eps_j M_ij; Delta_M = lambda Psi_M Psi_M*.
    pub fn disc_matrix(&self, m: &ModuleRep) -> Result<DiscMatrix, HarmonicsError> {
        let r = self.rank();
        let a = self.harmonic_module_basis(m)?;
        let dual = m.clone().dual();
        let b = self.harmonic_module_basis(&dual)?;
        let bi = self.basic_invariants()?;
        let pairs: Vec<(usize, usize)> = (0..a.elements.len()).flat_map(|i| (0..b.elements.len()).map(move |j| (i, j))).collect();
        let cells: Vec<Result<(MultiPoly, MultiPoly), HarmonicsError>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (u, w) = (&a.elements[i], &b.elements[j]);
                let mut s = MultiPoly::zero(r);
                for (x, y) in u.comps.iter().zip(&w.comps) {
                    s = s.add(&x.mul(y));
                }
                let e = self.express_in_basics(&s).map_err(|err| match err {
                    HarmonicsError::NotExpressible => HarmonicsError::NotInvariant,
                    other => other,
                })?;
                let want = u.eps.mul(&w.eps);
                for (mono, _) in e.terms() {
                    let mut got = RootOfUnity::ONE;
                    for (k, p) in bi.invariants.iter().enumerate() {
                        got = got.mul(&p.eps.pow(mono.exp(k) as i64));
                    }
                    if got != want {
                        return Err(HarmonicsError::Check("gamma(M_ij) = eps_i eps_j M_ij".into()));
                    }
                }
                Ok((s, e))
            })
            .collect();
        let mut entries = vec![Vec::new(); a.elements.len()];
        let mut exprs = vec![Vec::new(); a.elements.len()];
        for (&(i, _), c) in pairs.iter().zip(cells) {
            let (s, e) = c?;
            entries[i].push(s);
            exprs[i].push(e);
        }
        // M = U W^T for the component matrices U, W of the two bases
        let rows = |hb: &HarmonicBasis| hb.elements.iter().map(|u| u.comps.clone()).collect::<Vec<_>>();
        let delta = poly_det(&rows(&a), r).mul(&poly_det(&rows(&b), r));
        let delta_expr = poly_det(&exprs, bi.invariants.len());
        // det of the entries, and the determinant in the P_i, agree with it at sample points
        for shift in 0..2i64 {
            let pt: Vec<Cyclotomic> =
                (0..r).map(|i| Cyclotomic::from_int(1, [2, 3, 5, 7, 11, 13, 17, 19][i % 8] + shift * (i as i64 + 1))).collect();
            let pvals: Vec<Cyclotomic> = bi.invariants.iter().map(|p| p.poly.eval(&pt)).collect();
            let vals: Vec<Vec<Cyclotomic>> = entries.iter().map(|row| row.iter().map(|e| e.eval(&pt)).collect()).collect();
            let dv = delta.eval(&pt);
            if CycMatrix::from_rows(vals).det().ok() != Some(dv.clone()) || delta_expr.eval(&pvals) != dv {
                return Err(HarmonicsError::Check("determinants of the pairing matrix disagree".into()));
            }
        }
        let g = &self.mol.coset.group;
        let psi = psi_polynomial(g, m).mul(&psi_polynomial(g, &dual));
        let lambda = delta.ratio_to(&psi).ok_or_else(|| HarmonicsError::NotProportional(format!("Delta_{m}")))?;
        Ok(DiscMatrix { entries, exprs, delta, delta_expr, lambda })
    }

    /// disc_matrix(V), computed once.
    pub fn disc_matrix_v(&self) -> Result<&DiscMatrix, HarmonicsError> {
        self.disc_v.get_or_init(|| self.disc_matrix(&ModuleRep::v())).as_ref().map_err(|e| e.clone())
    }

    /// f as a polynomial in the basic invariants, by a linear solve over
    /// the products of matching weighted degree.
    pub fn express_in_basics(&self, f: &MultiPoly) -> Result<MultiPoly, HarmonicsError> {
        let bi = self.basic_invariants()?;
        let n = bi.invariants.len();
        if f.is_zero() {
            return Ok(MultiPoly::zero(n));
        }
        if !f.is_homogeneous() {
            return Err(HarmonicsError::Precondition("polynomial is not homogeneous".into()));
        }
        let d = f.degree().expect("nonzero");
        let r = self.rank();
        let basis = DegreeBasis::new(r, d);
        let ps = bi.polys();
        let alphas = weighted_monomials(&bi.degrees(), d);
        let mut cache = HashMap::new();
        let mut cols: Vec<Vec<Cyclotomic>> =
            alphas.iter().map(|a| monomial_in(&ps, a, &mut cache, r).to_dense(&basis).expect("homogeneous")).collect();
        let target = f.to_dense(&basis).expect("homogeneous");
        cols.push(target.clone());
        let ker = CycMatrix::from_columns(&cols).kernel();
        let k = ker.iter().find(|k| !k[alphas.len()].is_zero()).ok_or(HarmonicsError::NotExpressible)?;
        let last = k[alphas.len()].clone();
        let mut out = MultiPoly::zero(n);
        let mut check = vec![Cyclotomic::zero(1); target.len()];
        for ((a, c), col) in alphas.iter().zip(k).zip(&cols) {
            if !c.is_zero() {
                let coef = -(c / &last);
                for (x, y) in check.iter_mut().zip(col) {
                    if !y.is_zero() {
                        *x += &(&coef * y);
                    }
                }
                out.add_term(Mono::from_exps(a), &coef);
            }
        }
        if check != target {
            return Err(HarmonicsError::NotExpressible);
        }
        Ok(out)
    }

    /// Delta of the coset, expressed in the basic invariants.
    pub fn delta_expression(&self) -> Result<&MultiPoly, HarmonicsError> {
        Ok(&self.disc_matrix_v()?.delta_expr)
    }

    /// zeta is regular iff Delta, written in the P_i, survives setting to
    /// zero every P_i with eps_i zeta^{d_i} != 1.
    pub fn ideal_regularity(&self, z: &RootOfUnity) -> Result<bool, HarmonicsError> {
        let expr = self.delta_expression()?;
        let bi = self.basic_invariants()?;
        let n = bi.invariants.len();
        let images: Vec<MultiPoly> = bi
            .invariants
            .iter()
            .enumerate()
            .map(|(i, p)| if p.eps.mul(&z.pow(p.degree as i64)).is_one() { MultiPoly::var(n, i) } else { MultiPoly::zero(n) })
            .collect();
        Ok(!expr.substitute(&images).is_zero())
    }

    /// Regular roots with the counting criterion, the eigenspace oracle and
    /// the ideal criterion all agreeing.
    pub fn three_way_regularity(&self) -> Result<RegularSet, HarmonicsError> {
        let rs = regularity::regular_orders(&self.mol)?;
        let (deg, codeg) = regularity::factor_pair(&self.mol)?;
        let l = rs.exponent;
        for k in 0..l {
            let z = RootOfUnity::new(l, k as i64);
            let c = regularity::criterion(&deg, &codeg, &z);
            let i = self.ideal_regularity(&z)?;
            if c != i {
                return Err(HarmonicsError::Disagreement { zeta: z, criterion: c, ideal: i });
            }
        }
        Ok(rs)
    }

    /// Well-generation both ways, and for well-generated cosets the
    /// structure of the discriminant matrix and its consequences.
    pub fn wellgen_structure(&self) -> Result<WellgenReport, HarmonicsError> {
        let g = &self.mol.coset.group;
        let r = g.dim;
        if commutant_dim(&g.generators) != 1 {
            return Err(HarmonicsError::Precondition("G is not irreducible".into()));
        }
        let deg = self.mol.v_factors()?;
        let codeg = self.mol.codegree_factors()?;
        let mut ds = deg.degrees();
        ds.sort();
        let mut cs = codeg.degrees();
        cs.sort_by(|a, b| b.cmp(a));
        let dr = *ds.last().expect("rank >= 1");
        let degree_condition = ds.iter().zip(&cs).all(|(a, b)| a + b == dr);
        let min_gen = min_generating_reflections(g);
        let well_generated = min_gen == r;
        if degree_condition != well_generated {
            return Err(HarmonicsError::Check(format!(
                "degree condition {degree_condition} but minimal reflection generating set has {min_gen} elements"
            )));
        }
        let mut rep = WellgenReport {
            degrees: ds.clone(),
            codegrees: cs.clone(),
            degree_condition,
            min_generating_reflections: min_gen,
            well_generated,
            matrix_check: None,
            top_degree_sum: None,
            sigma_matching: None,
            top_regular: None,
            monic: Vec::new(),
        };
        if !well_generated {
            return Ok(rep);
        }
        let fail = |s: &str| Err(HarmonicsError::Check(s.to_string()));
        // (iii), (iv), (vi): M = P_r C mod (P_i, i != r)
        let bi = self.basic_invariants()?;
        let top = bi.invariants.len() - 1;
        let nvars = bi.invariants.len();
        let dm = self.disc_matrix_v()?;
        let a = self.harmonic_module_basis(&ModuleRep::v())?;
        let b = self.harmonic_module_basis(&ModuleRep::vdual())?;
        let kill: Vec<MultiPoly> =
            (0..nvars).map(|i| if i == top { MultiPoly::var(nvars, i) } else { MultiPoly::zero(nvars) }).collect();
        let pr = MultiPoly::var(nvars, top);
        let mut c = CycMatrix::zeros(r, r, 1);
        for (i, row) in dm.entries.iter().enumerate() {
            for j in 0..row.len() {
                let red = dm.exprs[i][j].substitute(&kill);
                let dij = a.elements[i].degree as i64 + 1 + b.elements[j].degree as i64 - 1;
                if red.is_zero() {
                    continue;
                }
                let Some(cij) = red.ratio_to(&pr) else {
                    return fail("disc matrix is not P_r times a constant matrix");
                };
                if dij != dr {
                    return fail("nonzero c_ij with d_i + d*_j != d_r");
                }
                c.set(i, j, cij);
            }
        }
        let nonsingular = !c.det().map_err(|e| HarmonicsError::Check(e.to_string()))?.is_zero();
        if !nonsingular {
            return fail("constant matrix C is singular");
        }
        rep.matrix_check = Some(true);
        // (v)
        let n: i64 = ds.iter().map(|d| d - 1).sum();
        let nstar: i64 = cs.iter().map(|d| d + 1).sum();
        if r as i64 * dr != n + nstar {
            return fail("r d_r != N + N*");
        }
        rep.top_degree_sum = Some(true);
        // sigma matching per degree class
        let eps_r = bi.invariants[top].eps;
        let mut lhs: BTreeMap<i64, Vec<RootOfUnity>> = BTreeMap::new();
        for f in &deg.factors {
            lhs.entry(dr - deg.d(f)).or_default().push(f.eps.inv().mul(&eps_r));
        }
        let mut rhs: BTreeMap<i64, Vec<RootOfUnity>> = BTreeMap::new();
        for f in &codeg.factors {
            rhs.entry(codeg.d(f)).or_default().push(f.eps);
        }
        for v in lhs.values_mut().chain(rhs.values_mut()) {
            v.sort();
        }
        if lhs != rhs {
            return fail("no degree-compatible bijection with eps*_sigma(i) = eps_i^-1 eps_r");
        }
        rep.sigma_matching = Some(true);
        rep.top_regular = Some(self.all_regular(dr as u64, &eps_r)?);
        if rep.top_regular != Some(true) {
            return fail("zeta^{d_r} = eps_r^-1 is not regular");
        }
        // monic in P_i0
        let expr = self.delta_expression()?;
        for i0 in 0..nvars {
            let top_pow = expr.terms().map(|(m, _)| m.exp(i0)).max().unwrap_or(0);
            let lead: Vec<(&Mono, &Cyclotomic)> = expr.terms().filter(|(m, _)| m.exp(i0) == top_pow).collect();
            if top_pow > 0 && lead.len() == 1 && lead[0].0.degree() == top_pow {
                let p = &bi.invariants[i0];
                let ok = self.all_regular(p.degree as u64, &p.eps)?;
                if !ok {
                    return fail("monic discriminant but zeta^{d_i0} = eps_i0^-1 not regular");
                }
                rep.monic.push((i0, ok));
            }
        }
        Ok(rep)
    }

    /// Whether every zeta with zeta^d = eps^-1 is regular.
    fn all_regular(&self, d: u64, eps: &RootOfUnity) -> Result<bool, HarmonicsError> {
        let n = eps.order * d;
        for k in 0..d {
            // zeta = zeta_n^{-eps.exp + k eps.order}
            let z = RootOfUnity::new(n, k as i64 * eps.order as i64 - eps.exp as i64);
            debug_assert!(z.pow(d as i64) == eps.inv());
            if !regularity::report(&self.mol, &z)?.criterion {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Smallest k such that some k reflections generate G.
pub fn min_generating_reflections(g: &crate::groups::ReflectionGroup) -> usize {
    if g.is_trivial() {
        return 0;
    }
    // reflections up to equal cyclic subgroups suffice: keep one generator per G_H
    let gens: Vec<usize> = g.arrangement.iter().flat_map(|h| h.members.iter().copied()).collect();
    let table: Vec<Vec<usize>> = gens.par_iter().map(|&s| (0..g.order()).map(|i| g.mul_index(s, i)).collect()).collect();
    let generates = |subset: &[usize]| {
        let mut seen = vec![false; g.order()];
        seen[0] = true;
        let mut count = 1;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for &s in subset {
                let j = table[s][i];
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == g.order()
    };
    for k in 1..=gens.len() {
        let found = crate::linalg::k_subsets(gens.len(), k).into_par_iter().any(|s| generates(&s));
        if found {
            return k;
        }
    }
    gens.len()
}

/// Orders of the regular roots reported by the three-way check.
pub fn regular_order_set(h: &Harmonics) -> Result<BTreeSet<u64>, HarmonicsError> {
    Ok(h.three_way_regularity()?.orders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogKey};

    fn harm(s: &str) -> Harmonics {
        Harmonics::new(&build(&s.parse::<CatalogKey>().unwrap()).unwrap())
    }

    fn c(k: i64) -> Cyclotomic {
        Cyclotomic::from_int(1, k)
    }

    #[test]
    fn invariant_space_dims() {
        let h = harm("G(3,3,3)");
        assert_eq!(h.invariant_space(&ModuleRep::TrivialLine, 0).unwrap().len(), 1);
        assert_eq!(h.invariant_space(&ModuleRep::TrivialLine, 3).unwrap().len(), 2);
        // sum X_i (x) v_i lies in (S_1 (x) V)^G, i.e. M = V*
        let sp = h.invariant_space(&ModuleRep::vdual(), 1).unwrap();
        assert_eq!(sp.len(), 1);
        let x: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(3, i)).collect();
        let ratio = sp[0][0].ratio_to(&x[0]).unwrap();
        assert!(sp[0].iter().zip(&x).all(|(a, b)| *a == b.scale(&ratio)));
    }

    #[test]
    fn rank_one_basics() {
        let h = harm("G(5,1,1)");
        let bi = h.basic_invariants().unwrap();
        assert_eq!(bi.degrees(), vec![5]);
        assert!(bi.invariants[0].poly.ratio_to(&MultiPoly::var(1, 0).pow(5)).is_some());
        assert!(!h.gutkin_check(&ModuleRep::v()).unwrap().is_zero());
        let dm = h.disc_matrix(&ModuleRep::v()).unwrap();
        assert!(dm.delta.ratio_to(&MultiPoly::var(1, 0).pow(5)).is_some());
    }

    #[test]
    fn g422_twisted_invariants() {
        let h = harm("3G422");
        let bi = h.basic_invariants().unwrap();
        assert_eq!(bi.degrees(), vec![4, 4]);
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p1 = x.pow(4).add(&y.pow(4));
        let p2 = x.pow(2).mul(&y.pow(2));
        let basis = DegreeBasis::new(2, 4);
        let mut ech = Echelon::new();
        ech.insert(&p1.to_dense(&basis).unwrap());
        ech.insert(&p2.to_dense(&basis).unwrap());
        for p in bi.polys() {
            assert!(ech.contains(&p.to_dense(&basis).unwrap()));
        }
        let eps: Vec<RootOfUnity> = bi.invariants.iter().map(|p| p.eps).collect();
        assert_eq!(eps, vec![RootOfUnity::ONE, RootOfUnity::new(3, 2)]);
        let expr = h.delta_expression().unwrap();
        assert!(h.ideal_regularity(&RootOfUnity::ONE).unwrap());
        // Delta survives P_2 = 0
        let n = expr.nvars();
        assert!(!expr.substitute(&[MultiPoly::var(n, 0), MultiPoly::zero(n)]).is_zero());
    }

    #[test]
    fn module_bases_and_gutkin() {
        let h = harm("G(4,2,2)");
        let b = h.harmonic_module_basis(&ModuleRep::vdual()).unwrap();
        let ms: Vec<u32> = b.elements.iter().map(|u| u.degree).collect();
        assert_eq!(ms, vec![1, 5]);
        let t = h.harmonic_module_basis(&ModuleRep::TrivialLine).unwrap();
        assert_eq!(t.elements.len(), 1);
        assert_eq!(t.elements[0].degree, 0);
        assert!(!h.gutkin_check(&ModuleRep::v()).unwrap().is_zero());
        let dm = h.disc_matrix(&ModuleRep::v()).unwrap();
        assert_eq!(dm.delta.degree(), Some(12));
        let h3 = harm("G(3,3,3)");
        assert!(!h3.gutkin_check(&ModuleRep::vdual()).unwrap().is_zero());
        assert_eq!(psi_polynomial(&h3.coset().group, &ModuleRep::vdual()).degree(), Some(9));
    }

    #[test]
    fn wellgen_examples() {
        let h = harm("G(3,3,3)");
        let w = h.wellgen_structure().unwrap();
        assert!(w.well_generated && w.degree_condition);
        assert_eq!(w.matrix_check, Some(true));
        let h = harm("G(4,2,2)");
        let w = h.wellgen_structure().unwrap();
        assert!(!w.well_generated);
        assert_eq!(w.min_generating_reflections, 3);
        let h = harm("2G5");
        let w = h.wellgen_structure().unwrap();
        assert_eq!(w.top_regular, Some(true));
    }

    #[test]
    fn three_way_small() {
        for k in ["A2", "B2", "G(3,3,3)", "3G422", "G(4,2,2;zeta=2)", "2G5"] {
            let h = harm(k);
            h.three_way_regularity().unwrap();
        }
    }

    #[test]
    fn express_roundtrip() {
        let h = harm("B2");
        let bi = h.basic_invariants().unwrap();
        let p = bi.invariants[1].poly.clone();
        let e = h.express_in_basics(&p).unwrap();
        assert_eq!(e, MultiPoly::var(2, 1));
        let sq = p.mul(&p).add(&bi.invariants[0].poly.pow(4).scale(&c(3)));
        assert!(h.express_in_basics(&sq).is_ok());
    }
}
