//! Twisted Molien series and the multisets of M-factors (eps, m) of a
//! reflection coset, with degrees, codegrees, N(M), Psi_M and fake degrees.

use crate::cyclo::{Cyclotomic, Rat, RootOfUnity};
use crate::groups::{ReflectionCoset, ReflectionGroup};
use crate::linalg::{eigen_from_traces, CycMatrix, LinalgError, MultiPoly, TruncSeries, UniPoly};
use num_integer::Integer;
use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MolienError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("non-integral eigenvalue multiplicities for {module} in degree {degree}")]
    NonIntegral { module: String, degree: usize },
    #[error("twisted Molien series of {0} has a non-polynomial numerator")]
    NotPolynomial(String),
    #[error("invariants of degree <= {0} do not form a polynomial algebra")]
    NotPolynomialAlgebra(usize),
    #[error("N({module}) disagrees: Gutkin {gutkin}, closed formula {closed}, factors {factors}")]
    NDisagree { module: String, gutkin: i64, closed: String, factors: i64 },
    #[error("product formula fails at power {0}")]
    ProductFormula(u64),
    #[error("module {0} is not defined on this coset")]
    BadModule(String),
}

/// Module tables for modules not built functorially from V.
#[derive(Clone, Debug)]
pub struct ModuleTable {
    pub name: String,
    /// Matrix of each group element, indexed like the group's element list.
    pub elements: Vec<CycMatrix>,
    pub gamma: CycMatrix,
}

/// A <G, gamma>-module described by a constructor tree.
#[derive(Clone, Debug)]
pub enum ModuleRep {
    DefiningV,
    Dual(Box<ModuleRep>),
    Galois(Box<ModuleRep>, i64),
    Exterior(Box<ModuleRep>, usize),
    Tensor(Box<ModuleRep>, Box<ModuleRep>),
    TrivialLine,
    ExplicitTable(Arc<ModuleTable>),
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |a, i| a * (n - i) / (i + 1))
}

impl ModuleRep {
    pub fn v() -> ModuleRep {
        ModuleRep::DefiningV
    }

    pub fn vdual() -> ModuleRep {
        ModuleRep::Dual(Box::new(ModuleRep::DefiningV))
    }

    pub fn dual(self) -> ModuleRep {
        ModuleRep::Dual(Box::new(self))
    }

    pub fn galois(self, k: i64) -> ModuleRep {
        ModuleRep::Galois(Box::new(self), k)
    }

    pub fn exterior(self, p: usize) -> ModuleRep {
        ModuleRep::Exterior(Box::new(self), p)
    }

    pub fn dim(&self, r: usize) -> usize {
        match self {
            ModuleRep::DefiningV => r,
            ModuleRep::Dual(m) | ModuleRep::Galois(m, _) => m.dim(r),
            ModuleRep::Exterior(m, p) => binom(m.dim(r), *p),
            ModuleRep::Tensor(a, b) => a.dim(r) * b.dim(r),
            ModuleRep::TrivialLine => 1,
            ModuleRep::ExplicitTable(t) => t.gamma.rows(),
        }
    }

    /// True when the module is a polynomial functor of V, so it can be
    /// evaluated on any matrix.
    pub fn is_functorial(&self) -> bool {
        match self {
            ModuleRep::DefiningV | ModuleRep::TrivialLine => true,
            ModuleRep::Dual(m) | ModuleRep::Galois(m, _) | ModuleRep::Exterior(m, _) => m.is_functorial(),
            ModuleRep::Tensor(a, b) => a.is_functorial() && b.is_functorial(),
            ModuleRep::ExplicitTable(_) => false,
        }
    }

    /// Matrix of x = g_i gamma^j on the module; `at` = (i, j) is needed for
    /// table modules only.
    pub fn eval(&self, x: &CycMatrix, at: Option<(usize, u64)>) -> CycMatrix {
        match self {
            ModuleRep::DefiningV => x.clone(),
            ModuleRep::Dual(m) => m.eval(x, at).inverse().expect("group elements are invertible").transpose(),
            ModuleRep::Galois(m, k) => m.eval(x, at).map(|c| c.galois(*k).expect("Galois exponent coprime to conductor")),
            ModuleRep::Exterior(m, p) => m.eval(x, at).compound(*p),
            ModuleRep::Tensor(a, b) => a.eval(x, at).kronecker(&b.eval(x, at)),
            ModuleRep::TrivialLine => CycMatrix::identity(1, 1),
            ModuleRep::ExplicitTable(t) => {
                let (i, j) = at.expect("table modules need an element index");
                &t.elements[i] * &t.gamma.pow(j)
            }
        }
    }

    /// Scalar by which zeta Id_V acts on the module.
    pub fn scalar_action(&self, z: &RootOfUnity) -> Option<RootOfUnity> {
        match self {
            ModuleRep::DefiningV => Some(*z),
            ModuleRep::Dual(m) => m.scalar_action(z).map(|x| x.inv()),
            ModuleRep::Galois(m, k) => m.scalar_action(z).map(|x| x.pow(*k)),
            ModuleRep::Exterior(m, p) => m.scalar_action(z).map(|x| x.pow(*p as i64)),
            ModuleRep::Tensor(a, b) => Some(a.scalar_action(z)?.mul(&b.scalar_action(z)?)),
            ModuleRep::TrivialLine => Some(RootOfUnity::ONE),
            ModuleRep::ExplicitTable(_) => None,
        }
    }

    /// Codegree convention d = m - 1 applies to duals.
    pub fn is_dual(&self) -> bool {
        match self {
            ModuleRep::Dual(_) => true,
            ModuleRep::Galois(m, _) => m.is_dual(),
            _ => false,
        }
    }
}

impl fmt::Display for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleRep::DefiningV => write!(f, "V"),
            ModuleRep::Dual(m) => match **m {
                ModuleRep::DefiningV => write!(f, "Vdual"),
                _ => write!(f, "dual({m})"),
            },
            ModuleRep::Galois(m, k) => match **m {
                ModuleRep::DefiningV => write!(f, "galois:{k}"),
                _ => write!(f, "galois({m},{k})"),
            },
            ModuleRep::Exterior(m, p) => match **m {
                ModuleRep::DefiningV => write!(f, "ext{p}"),
                _ => write!(f, "ext({m},{p})"),
            },
            ModuleRep::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            ModuleRep::TrivialLine => write!(f, "trivial"),
            ModuleRep::ExplicitTable(t) => write!(f, "{}", t.name),
        }
    }
}

impl FromStr for ModuleRep {
    type Err = String;

    /// Accepts V, Vdual, ext<p>, galois:<k>, galois-dual:<k>, trivial.
    fn from_str(s: &str) -> Result<ModuleRep, String> {
        let s = s.trim();
        match s {
            "V" => return Ok(ModuleRep::v()),
            "Vdual" | "V*" => return Ok(ModuleRep::vdual()),
            "trivial" | "1" => return Ok(ModuleRep::TrivialLine),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("ext") {
            return p.parse().map(|p| ModuleRep::v().exterior(p)).map_err(|_| format!("bad module {s}"));
        }
        if let Some(k) = s.strip_prefix("galois-dual:") {
            return k.parse().map(|k| ModuleRep::vdual().galois(k)).map_err(|_| format!("bad module {s}"));
        }
        if let Some(k) = s.strip_prefix("galois:") {
            return k.parse().map(|k| ModuleRep::v().galois(k)).map_err(|_| format!("bad module {s}"));
        }
        Err(format!("unknown module {s}"))
    }
}

/// One M-factor: degree m of the basis element and its gamma-eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub m: i64,
    pub eps: RootOfUnity,
}

/// Multiset of M-factors sorted by (m, eps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub module: String,
    /// d = m - 1 instead of d = m + 1.
    pub codegree: bool,
    pub factors: Vec<Factor>,
}

impl FactorSet {
    pub fn new(module: String, codegree: bool, mut factors: Vec<Factor>) -> FactorSet {
        factors.sort();
        FactorSet { module, codegree, factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn d(&self, f: &Factor) -> i64 {
        if self.codegree {
            f.m - 1
        } else {
            f.m + 1
        }
    }

    /// (d, eps) pairs in order.
    pub fn pairs(&self) -> Vec<(i64, RootOfUnity)> {
        self.factors.iter().map(|f| (self.d(f), f.eps)).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.factors.iter().map(|f| self.d(f)).collect()
    }

    pub fn sum_m(&self) -> i64 {
        self.factors.iter().map(|f| f.m).sum()
    }

    /// Factors with eps = 1.
    pub fn u(&self) -> Vec<Factor> {
        self.factors.iter().filter(|f| f.eps.is_one()).copied().collect()
    }

    /// Factors with eps != 1.
    pub fn u_sharp(&self) -> Vec<Factor> {
        self.factors.iter().filter(|f| !f.eps.is_one()).copied().collect()
    }

    pub fn eps_multiset(&self) -> Vec<RootOfUnity> {
        let mut v: Vec<RootOfUnity> = self.factors.iter().map(|f| f.eps).collect();
        v.sort();
        v
    }

    pub fn render(&self) -> String {
        self.pairs().iter().map(|(d, e)| format!("({d},{e})")).collect::<Vec<_>>().join(" ")
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factor", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("eps", &self.eps)?;
        st.end()
    }
}

impl Serialize for FactorSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            m: i64,
            d: i64,
            eps: RootOfUnity,
        }
        let mut seq = s.serialize_seq(Some(self.factors.len()))?;
        for f in &self.factors {
            seq.serialize_element(&Row { m: f.m, d: self.d(f), eps: f.eps })?;
        }
        seq.end()
    }
}

/// Elements g gamma^j sharing det(1 - t (g gamma^j)^-1).
pub struct Bucket {
    /// det(1 - t x | V*) for the members x.
    pub q: UniPoly,
    pub members: Vec<usize>,
}

/// All g gamma^j for a fixed j, with their inverses, grouped by the
/// characteristic polynomial on V*.
pub struct PowerData {
    /// (g_i gamma^j)^-1 indexed by i.
    pub xinv: Vec<CycMatrix>,
    pub buckets: Vec<Bucket>,
}

/// Per-coset cache for twisted Molien series and factor extraction.
pub struct Molien {
    pub coset: ReflectionCoset,
    powers: Vec<OnceLock<Arc<PowerData>>>,
    degrees: OnceLock<Result<FactorSet, MolienError>>,
}

fn poly_key(p: &UniPoly, n: u32) -> Vec<Vec<Rat>> {
    p.coeffs().iter().map(|c| c.to_conductor(n).coeffs_full()).collect()
}

/// prod_i (1 - eps_i^j x^{d_i}).
pub fn denominator(deg: &FactorSet, j: u64) -> UniPoly {
    let mut p = UniPoly::one();
    for f in &deg.factors {
        let d = deg.d(f) as usize;
        let c = f.eps.pow(j as i64).to_cyclotomic();
        p = p.mul(&UniPoly::one().sub(&UniPoly::monomial(c, d)));
    }
    p
}

/// Power sums p_1..p_k of the roots of q = prod(1 - lambda t), i.e. the
/// coefficients of -t q'/q.
pub fn power_sums_from_char(q: &UniPoly, k: usize) -> Vec<Cyclotomic> {
    let qc = q.coeffs();
    let mut p: Vec<Cyclotomic> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut s = if n < qc.len() { qc[n].scale(&Rat::int(n as i64)) } else { Cyclotomic::zero(1) };
        for i in 1..n.min(qc.len()) {
            if !qc[i].is_zero() {
                s += &(&qc[i] * &p[n - i - 1]);
            }
        }
        p.push(-s);
    }
    p
}

impl Molien {
    pub fn new(coset: &ReflectionCoset) -> Molien {
        Molien {
            coset: coset.clone(),
            powers: (0..coset.gamma_order).map(|_| OnceLock::new()).collect(),
            degrees: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.coset.group.order()
    }

    pub fn power(&self, j: u64) -> Arc<PowerData> {
        let j = j % self.coset.gamma_order;
        self.powers[j as usize]
            .get_or_init(|| {
                let g = &self.coset.group;
                let gi = self.coset.gamma_pow(self.coset.gamma_order - j);
                let n = g.conductor;
                let data: Vec<(CycMatrix, UniPoly)> = (0..g.order())
                    .into_par_iter()
                    .map(|i| {
                        let xinv = &gi * &g.elements[g.inverse_index(i)];
                        let q = xinv.char_series().expect("square");
                        (xinv, q)
                    })
                    .collect();
                let mut index: HashMap<Vec<Vec<Rat>>, usize> = HashMap::new();
                let mut buckets: Vec<Bucket> = Vec::new();
                let mut xinv = Vec::with_capacity(data.len());
                for (i, (x, q)) in data.into_iter().enumerate() {
                    let k = poly_key(&q, n);
                    let b = *index.entry(k).or_insert_with(|| {
                        buckets.push(Bucket { q: q.clone(), members: Vec::new() });
                        buckets.len() - 1
                    });
                    buckets[b].members.push(i);
                    xinv.push(x);
                }
                Arc::new(PowerData { xinv, buckets })
            })
            .clone()
    }

    /// Tr(x | M*) for x = g_i gamma^j.
    fn dual_trace(&self, m: &ModuleRep, pd: &PowerData, i: usize, j: u64) -> Cyclotomic {
        if m.is_functorial() {
            m.eval(&pd.xinv[i], None).trace()
        } else {
            let x = self.coset.coset_element(i, j);
            m.eval(&x, Some((i, j))).inverse().expect("invertible").trace()
        }
    }

    /// Graded trace of gamma^j on (S (x) M*)^G through degree `bound`.
    pub fn trace_series(&self, m: &ModuleRep, j: u64, bound: usize) -> TruncSeries {
        let pd = self.power(j);
        let traces: Vec<Cyclotomic> = (0..self.order()).into_par_iter().map(|i| self.dual_trace(m, &pd, i, j)).collect();
        let parts: Vec<TruncSeries> = pd
            .buckets
            .par_iter()
            .map(|b| {
                let mut s = Cyclotomic::zero(1);
                for &i in &b.members {
                    s += &traces[i];
                }
                if s.is_zero() {
                    return TruncSeries::zero(bound);
                }
                TruncSeries::from_poly(&b.q, bound).invert().expect("constant term 1").scale(&s)
            })
            .collect();
        let mut out = TruncSeries::zero(bound);
        for p in &parts {
            out.add_assign(p);
        }
        out.scale(&Cyclotomic::from_rat(1, Rat::new(1, self.order() as i64)))
    }

    /// Degrees of G with the gamma-eigenvalues of a basic-invariant basis,
    /// read off the invariant ring degree by degree. Stored as V-factors
    /// (m = d - 1).
    pub fn degrees(&self) -> Result<FactorSet, MolienError> {
        self.degrees.get_or_init(|| self.compute_degrees()).clone()
    }

    fn compute_degrees(&self) -> Result<FactorSet, MolienError> {
        let g = &self.coset.group;
        let r = g.dim;
        let n = self.coset.gamma_order;
        let nv = n_gutkin(g, &ModuleRep::v());
        let bound = nv as usize + 1;
        let mut rest: Vec<TruncSeries> = (0..n).map(|j| self.trace_series(&ModuleRep::TrivialLine, j, bound)).collect();
        let mut found: Vec<Factor> = Vec::new();
        for k in 1..=bound {
            if found.len() == r {
                break;
            }
            let c: Vec<Cyclotomic> = rest.iter().map(|s| s.coeff(k).clone()).collect();
            let eps = eigen_from_traces(&c).map_err(|_| MolienError::NonIntegral { module: "trivial".into(), degree: k })?;
            for e in eps {
                found.push(Factor { m: k as i64 - 1, eps: e });
                for (j, s) in rest.iter_mut().enumerate() {
                    let c = e.pow(j as i64).to_cyclotomic();
                    *s = s.mul_poly(&UniPoly::one().sub(&UniPoly::monomial(c, k)));
                }
            }
        }
        let fs = FactorSet::new("V".into(), false, found);
        let prod: i64 = fs.degrees().iter().product();
        let clean = rest.iter().all(|s| s.coeffs()[1..].iter().all(|c| c.is_zero()));
        if fs.len() != r || prod != g.order() as i64 || fs.sum_m() != nv || !clean {
            return Err(MolienError::NotPolynomialAlgebra(bound));
        }
        Ok(fs)
    }

    /// Multiset of M-factors of the coset.
    pub fn module_factors(&self, m: &ModuleRep) -> Result<FactorSet, MolienError> {
        let deg = self.degrees()?;
        let nm = n_gutkin(&self.coset.group, m);
        if nm < 0 {
            return Err(MolienError::BadModule(m.to_string()));
        }
        let nm = nm as usize;
        let dmax = deg.degrees().into_iter().max().unwrap_or(1) as usize;
        let bound = nm + dmax;
        let n = self.coset.gamma_order;
        let polys: Vec<TruncSeries> =
            (0..n).map(|j| self.trace_series(m, j, bound).mul_poly(&denominator(&deg, j))).collect();
        if polys.iter().any(|p| p.coeffs()[nm + 1..].iter().any(|c| !c.is_zero())) {
            return Err(MolienError::NotPolynomial(m.to_string()));
        }
        let mut factors = Vec::new();
        for k in 0..=nm {
            let c: Vec<Cyclotomic> = polys.iter().map(|p| p.coeff(k).clone()).collect();
            let eps = eigen_from_traces(&c).map_err(|_| MolienError::NonIntegral { module: m.to_string(), degree: k })?;
            factors.extend(eps.into_iter().map(|e| Factor { m: k as i64, eps: e }));
        }
        let fs = FactorSet::new(m.to_string(), m.is_dual(), factors);
        if fs.len() != m.dim(self.coset.dim()) || fs.sum_m() != nm as i64 {
            return Err(MolienError::NDisagree {
                module: m.to_string(),
                gutkin: nm as i64,
                closed: String::new(),
                factors: fs.sum_m(),
            });
        }
        Ok(fs)
    }

    /// V-factors as (d, eps), cross-checked against the invariant ring and
    /// the product formula.
    pub fn v_factors(&self) -> Result<FactorSet, MolienError> {
        let fs = self.module_factors(&ModuleRep::v())?;
        let deg = self.degrees()?;
        if fs.factors != deg.factors {
            return Err(MolienError::NotPolynomialAlgebra(0));
        }
        self.product_formula(&fs, true)?;
        Ok(fs)
    }

    /// V*-factors, reported as codegrees.
    pub fn codegree_factors(&self) -> Result<FactorSet, MolienError> {
        self.module_factors(&ModuleRep::vdual())
    }

    /// Power-sum form of prod_g det(1 - T g gamma | W) =
    /// prod_i (1 - eps_i T^{d_i})^{|G|/d_i}, with W = V* when `dual`:
    /// sum_g Tr((g gamma)^k | W) = |G| sum_{d_i | k} eps_i^{k/d_i}. Both
    /// sides are periodic in k; checks one full period.
    pub fn product_formula(&self, deg: &FactorSet, dual: bool) -> Result<(), MolienError> {
        let pd = self.power(1);
        let g = &self.coset.group;
        let mut period: u64 = 1;
        for b in &pd.buckets {
            let o = pd.xinv[b.members[0]].element_order(u64::MAX)?;
            period = period.lcm(&o);
        }
        for f in &deg.factors {
            period = period.lcm(&(deg.d(f) as u64 * f.eps.order));
        }
        let kmax = period.min((g.dim * g.order()) as u64) as usize;
        let sums: Vec<(usize, Vec<Cyclotomic>)> =
            pd.buckets.par_iter().map(|b| (b.members.len(), power_sums_from_char(&b.q, kmax))).collect();
        let order = Cyclotomic::from_int(1, g.order() as i64);
        for k in 1..=kmax {
            let mut lhs = Cyclotomic::zero(1);
            for (c, p) in &sums {
                lhs += &p[k - 1].scale(&Rat::int(*c as i64));
            }
            if !dual {
                lhs = lhs.conj();
            }
            let mut rhs = Cyclotomic::zero(1);
            for f in &deg.factors {
                let d = deg.d(f) as usize;
                if k % d == 0 {
                    rhs += &f.eps.pow((k / d) as i64).to_cyclotomic();
                }
            }
            if lhs != &rhs * &order {
                return Err(MolienError::ProductFormula(k as u64));
            }
        }
        Ok(())
    }

    /// Fake gamma-degree sum_i eps_i t^{m_i}.
    pub fn fake_degree(&self, m: &ModuleRep) -> Result<UniPoly, MolienError> {
        Ok(fake_degree_of(&self.module_factors(m)?))
    }
}

pub fn fake_degree_of(fs: &FactorSet) -> UniPoly {
    let mut p = UniPoly::zero();
    for f in &fs.factors {
        p = p.add(&UniPoly::monomial(f.eps.to_cyclotomic(), f.m as usize));
    }
    p
}

/// Matrix of g_i^-1 on M, i.e. the transpose of g_i on M*.
fn dual_matrix(g: &ReflectionGroup, m: &ModuleRep, i: usize) -> CycMatrix {
    if m.is_functorial() {
        m.eval(&g.elements[g.inverse_index(i)], None)
    } else {
        m.eval(&g.elements[i], Some((i, 0))).inverse().expect("invertible")
    }
}

/// Exponents e with Res_{G_H} M* = sum xi_H^e, for each hyperplane.
pub fn n_h(g: &ReflectionGroup, m: &ModuleRep) -> Vec<i64> {
    g.arrangement
        .iter()
        .map(|h| {
            let s = dual_matrix(g, m, h.distinguished);
            let tr = s.power_traces(h.e as usize);
            let eig = eigen_from_traces(&tr).expect("G_H is cyclic of order e_H");
            eig.iter().map(|x| x.exp_over(h.e) as i64).sum()
        })
        .collect()
}

/// N(M) as the sum of N_H(M) over the arrangement.
pub fn n_gutkin(g: &ReflectionGroup, m: &ModuleRep) -> i64 {
    n_h(g, m).iter().sum()
}

/// N(M) = chi(1)|Ref|/2 + sum_s chi(s)/(det(s|V) - 1).
pub fn n_closed_formula(g: &ReflectionGroup, m: &ModuleRep) -> Cyclotomic {
    let dim = m.dim(g.dim) as i64;
    let mut total = Cyclotomic::from_rat(1, Rat::new(dim * g.reflections.len() as i64, 2));
    let one = Cyclotomic::one(1);
    for &s in &g.reflections {
        let chi = if m.is_functorial() { m.eval(&g.elements[s], None) } else { m.eval(&g.elements[s], Some((s, 0))) }.trace();
        let den = g.det(s) - &one;
        total += &(&chi * &den.inv().expect("reflections have det != 1"));
    }
    total
}

/// N(M) three ways; errors unless Gutkin, the closed formula and the sum of
/// the factor degrees agree.
pub fn n_of_module(mol: &Molien, m: &ModuleRep) -> Result<i64, MolienError> {
    let g = &mol.coset.group;
    let gutkin = n_gutkin(g, m);
    let closed = n_closed_formula(g, m);
    let factors = mol.module_factors(m)?.sum_m();
    if closed.as_i64() != Some(gutkin) || factors != gutkin {
        return Err(MolienError::NDisagree { module: m.to_string(), gutkin, closed: closed.render(), factors });
    }
    Ok(gutkin)
}

/// Psi_M = prod_H L_H^{N_H(M)}.
pub fn psi_polynomial(g: &ReflectionGroup, m: &ModuleRep) -> MultiPoly {
    let mut p = MultiPoly::one(g.dim);
    for (h, e) in g.arrangement.iter().zip(n_h(g, m)) {
        if e > 0 {
            p = p.mul(&MultiPoly::linear(&h.form).pow(e as u32));
        }
    }
    p
}

/// Factors of the shifted coset zeta^-1 gamma against the law
/// eps(zeta^-1 gamma) = zeta_M zeta^m eps(gamma).
pub fn scaling_check(mol: &Molien, m: &ModuleRep, z: RootOfUnity) -> Result<bool, MolienError> {
    let Some(zm) = m.scalar_action(&z) else {
        return Err(MolienError::BadModule(m.to_string()));
    };
    let base = mol.module_factors(m)?;
    let shifted = Molien::new(&mol.coset.shifted(z)).module_factors(m)?;
    let predicted = FactorSet::new(
        base.module.clone(),
        base.codegree,
        base.factors.iter().map(|f| Factor { m: f.m, eps: zm.mul(&z.pow(f.m)).mul(&f.eps) }).collect(),
    );
    Ok(predicted == shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogKey};

    fn key(s: &str) -> ReflectionCoset {
        build(&s.parse::<CatalogKey>().unwrap()).unwrap()
    }

    fn rt(n: u64, k: i64) -> RootOfUnity {
        RootOfUnity::new(n, k)
    }

    fn pairs(fs: &FactorSet) -> Vec<(i64, RootOfUnity)> {
        let mut p = fs.pairs();
        p.sort();
        p
    }

    #[test]
    fn hilbert_series_g333() {
        let m = Molien::new(&key("G(3,3,3)"));
        let s = m.trace_series(&ModuleRep::TrivialLine, 0, 6);
        let want = [1, 0, 0, 2, 0, 0, 4];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(k).as_i64(), Some(*w), "degree {k}");
        }
    }

    #[test]
    fn d4_triality_factors() {
        let m = Molien::new(&key("3D4"));
        let v = m.v_factors().unwrap();
        assert_eq!(pairs(&v), vec![(2, rt(1, 0)), (4, rt(3, 1)), (4, rt(3, 2)), (6, rt(1, 0))]);
        let c = m.codegree_factors().unwrap();
        assert_eq!(pairs(&c), vec![(0, rt(1, 0)), (2, rt(3, 1)), (2, rt(3, 2)), (4, rt(1, 0))]);
    }

    #[test]
    fn g333_order4_factors() {
        let m = Molien::new(&key("4G333"));
        let v = m.v_factors().unwrap();
        assert_eq!(pairs(&v), vec![(3, rt(4, 1)), (3, rt(4, 3)), (6, rt(1, 0))]);
    }

    #[test]
    fn n_three_ways() {
        let m = Molien::new(&key("G(4,2,2)"));
        assert_eq!(n_of_module(&m, &ModuleRep::vdual()).unwrap(), 6);
        assert_eq!(n_of_module(&m, &ModuleRep::TrivialLine).unwrap(), 0);
        let psi = psi_polynomial(&m.coset.group, &ModuleRep::vdual());
        assert_eq!(psi.degree(), Some(6));
        assert!(psi.is_homogeneous());
    }

    #[test]
    fn fake_degrees() {
        let m = Molien::new(&key("A2"));
        assert_eq!(m.fake_degree(&ModuleRep::TrivialLine).unwrap(), UniPoly::one());
        let m = Molien::new(&key("2G5"));
        assert_eq!(m.fake_degree(&ModuleRep::v()).unwrap(), UniPoly::from_ints(&[0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1]));
    }

    #[test]
    fn scaling_law() {
        let m = Molien::new(&key("G(4,2,2)"));
        assert!(scaling_check(&m, &ModuleRep::v(), rt(4, 1)).unwrap());
        assert!(scaling_check(&m, &ModuleRep::vdual(), rt(4, 1)).unwrap());
        let m4 = Molien::new(&key("4G333"));
        let m2 = Molien::new(&key("2G333"));
        let sq: Vec<(i64, RootOfUnity)> = m4.v_factors().unwrap().pairs().iter().map(|(d, e)| (*d, e.pow(2))).collect();
        let mut sq = sq;
        sq.sort();
        assert_eq!(sq, pairs(&m2.v_factors().unwrap()));
    }

    #[test]
    fn power_sums_match_traces() {
        let c = key("G(3,1,2)");
        let x = &c.group.elements[5];
        let q = x.char_series().unwrap();
        let p = power_sums_from_char(&q, 7);
        let tr = x.power_traces(8);
        assert_eq!(p, tr[1..].to_vec());
    }
}
