//! Finite reflection groups by explicit enumeration, their arrangements,
//! conjugacy classes, parabolic subgroups, and reflection cosets.

use crate::cyclo::{Cyclotomic, Rat, RootOfUnity};
use crate::linalg::{dot, CycMatrix, LinalgError, MatrixKey, Vector};
use num_integer::Integer;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};
use thiserror::Error;

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeds cap of {0} elements")]
    CapExceeded(usize),
    #[error("generators have inconsistent sizes")]
    BadGenerators,
    #[error("gamma does not normalize G")]
    NotNormalizing,
    #[error("not of finite order within cap {0}")]
    NotFiniteOrder(u64),
    #[error("vector is not an eigenvector")]
    NotEigenvector,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

impl From<LinalgError> for GroupError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotFiniteOrder(c) => GroupError::NotFiniteOrder(c),
            _ => GroupError::BadGenerators,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Hyperplane {
    /// Covector L_H with first nonzero coordinate 1.
    pub form: Vector,
    /// Order of the pointwise stabilizer G_H.
    pub e: u64,
    /// Element index of the generator of G_H with determinant zeta_e.
    pub distinguished: usize,
    /// Non-identity elements of G_H (all reflections).
    pub members: Vec<usize>,
}

impl Hyperplane {
    pub fn eval(&self, v: &[Cyclotomic]) -> Cyclotomic {
        dot(&self.form, v)
    }
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

/// Enumerated finite matrix group.
pub struct ReflectionGroup {
    pub dim: usize,
    pub conductor: u32,
    pub generators: Vec<CycMatrix>,
    pub elements: Vec<CycMatrix>,
    index: HashMap<MatrixKey, usize>,
    pub reflections: Vec<usize>,
    pub arrangement: Vec<Hyperplane>,
    pub classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    inverses: Vec<usize>,
    dets: OnceLock<Vec<Cyclotomic>>,
    orders: OnceLock<Vec<u64>>,
}

impl std::fmt::Debug for ReflectionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ReflectionGroup(dim {}, order {}, {} reflections)", self.dim, self.order(), self.reflections.len())
    }
}

fn lcm_conductor(ms: &[CycMatrix]) -> u32 {
    ms.iter().map(|m| m.conductor()).fold(1, |a, b| a.lcm(&b))
}

impl ReflectionGroup {
    /// Breadth-first closure of the generators. All elements are stored at
    /// the lcm of `min_conductor` and the generator entry conductors.
    pub fn enumerate(dim: usize, generators: &[CycMatrix], cap: usize, min_conductor: u32) -> Result<ReflectionGroup, GroupError> {
        if generators.iter().any(|g| g.rows() != dim || g.cols() != dim) {
            return Err(GroupError::BadGenerators);
        }
        let n = lcm_conductor(generators).lcm(&min_conductor);
        let gens: Vec<CycMatrix> = generators.iter().map(|g| g.to_conductor(n)).collect();
        let id = CycMatrix::identity(dim, n);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id.key(), 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let y = g * &elements[i];
                let k = y.key();
                if !index.contains_key(&k) {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    index.insert(k, elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        ReflectionGroup::from_elements(dim, n, gens, elements, index)
    }

    /// Rebuild from a stored element list; the list must start with the
    /// identity and be closed under left multiplication by the generators.
    pub fn from_element_list(dim: usize, generators: Vec<CycMatrix>, elements: Vec<CycMatrix>) -> Result<ReflectionGroup, GroupError> {
        let n = lcm_conductor(&generators).lcm(&lcm_conductor(&elements));
        let gens: Vec<CycMatrix> = generators.iter().map(|g| g.to_conductor(n)).collect();
        let elements: Vec<CycMatrix> = elements.iter().map(|x| x.to_conductor(n)).collect();
        if elements.first().is_none_or(|x| !x.is_identity()) || elements.iter().any(|x| x.rows() != dim || x.cols() != dim) {
            return Err(GroupError::BadGenerators);
        }
        let index: HashMap<MatrixKey, usize> = elements.iter().enumerate().map(|(i, x)| (x.key(), i)).collect();
        if index.len() != elements.len() || elements.iter().any(|x| gens.iter().any(|g| !index.contains_key(&(g * x).key()))) {
            return Err(GroupError::BadGenerators);
        }
        ReflectionGroup::from_elements(dim, n, gens, elements, index)
    }

    fn from_elements(
        dim: usize,
        n: u32,
        gens: Vec<CycMatrix>,
        elements: Vec<CycMatrix>,
        index: HashMap<MatrixKey, usize>,
    ) -> Result<ReflectionGroup, GroupError> {
        let mut g = ReflectionGroup {
            dim,
            conductor: n,
            generators: gens,
            elements,
            index,
            reflections: Vec::new(),
            arrangement: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            inverses: Vec::new(),
            dets: OnceLock::new(),
            orders: OnceLock::new(),
        };
        g.inverses = (0..g.elements.len())
            .map(|i| {
                let inv = g.elements[i].inverse().expect("group elements are invertible");
                g.index_of(&inv).expect("closed under inverses")
            })
            .collect();
        g.find_reflections();
        g.find_classes();
        Ok(g)
    }

    /// The same group with entries embedded in a larger conductor.
    pub fn with_conductor(&self, m: u32) -> ReflectionGroup {
        let n = self.conductor.lcm(&m);
        if n == self.conductor {
            return self.clone_group();
        }
        let elements: Vec<CycMatrix> = self.elements.iter().map(|x| x.to_conductor(n)).collect();
        let index = elements.iter().enumerate().map(|(i, x)| (x.key(), i)).collect();
        let gens = self.generators.iter().map(|x| x.to_conductor(n)).collect();
        ReflectionGroup::from_elements(self.dim, n, gens, elements, index).expect("re-embedding preserves the group")
    }

    pub fn clone_group(&self) -> ReflectionGroup {
        ReflectionGroup {
            dim: self.dim,
            conductor: self.conductor,
            generators: self.generators.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
            reflections: self.reflections.clone(),
            arrangement: self.arrangement.clone(),
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
            inverses: self.inverses.clone(),
            dets: OnceLock::new(),
            orders: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> CycMatrix {
        CycMatrix::identity(self.dim, self.conductor)
    }

    /// Index of a matrix in the element list, if it belongs to G.
    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return None;
        }
        let c = m.conductor();
        if c == self.conductor || c == 1 {
            return self.index.get(&m.key()).copied();
        }
        if self.conductor % c == 0 {
            return self.index.get(&m.to_conductor(self.conductor).key()).copied();
        }
        let d = m.map(|x| descend(x, self.conductor).unwrap_or_else(|| x.clone()));
        if d.conductor() == self.conductor || self.conductor % d.conductor() == 0 {
            return self.index.get(&d.to_conductor(self.conductor).key()).copied();
        }
        None
    }

    pub fn contains(&self, m: &CycMatrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.index_of(&(&self.elements[i] * &self.elements[j])).expect("closed under products")
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn det(&self, i: usize) -> &Cyclotomic {
        &self.dets.get_or_init(|| self.elements.iter().map(|x| x.det().expect("square")).collect())[i]
    }

    pub fn element_orders(&self) -> &[u64] {
        self.orders.get_or_init(|| {
            self.elements.iter().map(|x| x.element_order(u64::MAX).expect("finite group")).collect()
        })
    }

    /// Exponent of G: lcm of element orders.
    pub fn exponent(&self) -> u64 {
        self.element_orders().iter().fold(1, |a, b| a.lcm(b))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    fn find_reflections(&mut self) {
        let id = self.identity();
        let mut by_form: Vec<(Vector, Vec<usize>)> = Vec::new();
        let mut form_index: HashMap<MatrixKey, usize> = HashMap::new();
        for (i, x) in self.elements.iter().enumerate() {
            let d = x - &id;
            if d.is_zero() || d.rank() != 1 {
                continue;
            }
            self.reflections.push(i);
            let row = (0..self.dim).map(|k| d.row(k)).find(|r| r.iter().any(|c| !c.is_zero())).unwrap();
            let form = normalize_covector(&row, self.conductor);
            let key = CycMatrix::from_rows(vec![form.clone()]).to_conductor(self.conductor).key();
            match form_index.get(&key) {
                Some(&h) => by_form[h].1.push(i),
                None => {
                    form_index.insert(key, by_form.len());
                    by_form.push((form, vec![i]));
                }
            }
        }
        self.arrangement = by_form
            .into_iter()
            .map(|(form, members)| {
                let e = members.len() as u64 + 1;
                let target = RootOfUnity::new(e, 1);
                let distinguished = *members
                    .iter()
                    .find(|&&i| self.elements[i].det().unwrap().as_root_of_unity() == Some(target))
                    .expect("cyclic pointwise stabilizer has a generator with det zeta_e");
                Hyperplane { form, e, distinguished, members }
            })
            .collect();
    }

    fn find_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let gen_idx: Vec<(CycMatrix, CycMatrix)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), g.inverse().expect("invertible generator")))
            .collect();
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![start];
            class_of[start] = c;
            let mut q = VecDeque::from([start]);
            while let Some(i) = q.pop_front() {
                for (g, gi) in &gen_idx {
                    let y = &(g * &self.elements[i]) * gi;
                    let j = self.index_of(&y).expect("closed under conjugation");
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                        q.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjClass { rep: start, members });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Parabolic subgroup G_v generated by the reflections fixing v, and the
    /// full pointwise stabilizer C of v (as indices into G).
    pub fn parabolic(&self, v: &[Cyclotomic]) -> (ReflectionGroup, Vec<usize>) {
        let gens: Vec<CycMatrix> = self
            .arrangement
            .iter()
            .filter(|h| h.eval(v).is_zero())
            .map(|h| self.elements[h.distinguished].clone())
            .collect();
        let gv = ReflectionGroup::enumerate(self.dim, &gens, self.order() + 1, self.conductor)
            .expect("subgroup of a finite group");
        let stab = (0..self.order())
            .filter(|&i| {
                let w = self.elements[i].apply(v);
                w.iter().zip(v).all(|(a, b)| a == b)
            })
            .collect();
        (gv, stab)
    }

    /// Steinberg check: the pointwise stabilizer equals the parabolic.
    pub fn steinberg_holds(&self, v: &[Cyclotomic]) -> bool {
        let (gv, stab) = self.parabolic(v);
        if gv.order() != stab.len() {
            return false;
        }
        gv.elements.iter().all(|x| self.index_of(x).is_some_and(|i| stab.binary_search(&i).is_ok()))
    }

    /// Subgroup generated by the given elements, as a sorted index set.
    pub fn subgroup_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = HashSet::from([0usize]);
        let mut out = vec![0usize];
        let mut q = VecDeque::from([0usize]);
        while let Some(i) = q.pop_front() {
            for &g in gens {
                let j = self.mul_index(g, i);
                if seen.insert(j) {
                    out.push(j);
                    q.push_back(j);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether the listed elements generate G. Stops early on success.
    pub fn generates(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut count = 1;
        let mut q = VecDeque::from([0usize]);
        while let Some(i) = q.pop_front() {
            for &g in gens {
                let j = self.mul_index(g, i);
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    if count == self.order() {
                        return true;
                    }
                    q.push_back(j);
                }
            }
        }
        count == self.order()
    }

    /// A vector of the subspace spanned by `basis` lying on no hyperplane
    /// that does not contain the whole subspace. Coefficients are distinct
    /// small primes, then powers (1, t, t^2, ...) if those fail.
    pub fn general_vector(&self, basis: &[Vector]) -> Vector {
        if basis.is_empty() {
            return vec![Cyclotomic::zero(1); self.dim];
        }
        let relevant: Vec<&Hyperplane> = self
            .arrangement
            .iter()
            .filter(|h| basis.iter().any(|b| !h.eval(b).is_zero()))
            .collect();
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        let mut tries: Vec<Vec<i64>> = Vec::new();
        if basis.len() <= primes.len() {
            tries.push(primes[..basis.len()].to_vec());
        }
        for t in 2..200i64 {
            tries.push((0..basis.len() as u32).map(|k| t.pow(k)).collect());
        }
        for coeffs in tries {
            let mut v = vec![Cyclotomic::zero(1); self.dim];
            for (c, b) in coeffs.iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &y.scale(&Rat::int(*c));
                }
            }
            if relevant.iter().all(|h| !h.eval(&v).is_zero()) {
                return v;
            }
        }
        panic!("no general vector found");
    }

    /// Index plan for Reynolds averaging along the chain
    /// 1 = H_0 < H_1 < ... < H_k = G, H_i generated by the first i generators.
    /// Each level lists coset-tree edges (parent, generator) covering the left
    /// cosets of H_{i-1} in H_i; averaging over G is the composition.
    pub fn reynolds_plan(&self) -> Vec<Vec<(usize, usize)>> {
        let gen_idx: Vec<usize> = self.generators.iter().map(|g| self.index_of(g).unwrap()).collect();
        let mut levels = Vec::new();
        let mut prev: Vec<usize> = vec![0];
        for k in 1..=gen_idx.len() {
            let cur = self.subgroup_indices(&gen_idx[..k]);
            if cur.len() == prev.len() {
                continue;
            }
            let prev_set: HashSet<usize> = prev.iter().copied().collect();
            // canonical id of coset t*H_prev: its minimal element index
            let coset_id = |t: usize| prev.iter().map(|&h| self.mul_index(t, h)).min().unwrap();
            let mut seen: HashMap<usize, usize> = HashMap::from([(0usize, 0usize)]);
            let mut reps = vec![0usize];
            let mut edges = Vec::new();
            let mut q = VecDeque::from([0usize]);
            while let Some(ci) = q.pop_front() {
                let t = reps[ci];
                for (gi, &g) in gen_idx[..k].iter().enumerate() {
                    let st = self.mul_index(g, t);
                    let id = coset_id(st);
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(id) {
                        e.insert(reps.len());
                        reps.push(st);
                        edges.push((ci, gi));
                        q.push_back(reps.len() - 1);
                    }
                }
            }
            let _ = prev_set;
            debug_assert_eq!(reps.len() * prev.len(), cur.len());
            levels.push(edges);
            prev = cur;
        }
        levels
    }
}

/// Express `a` in the subfield Q(zeta_m) if it lies there.
/// Dimension of the space of matrices commuting with all of `mats`.
pub fn commutant_dim(mats: &[CycMatrix]) -> usize {
    let Some(first) = mats.first() else {
        return 0;
    };
    let r = first.rows();
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for a in mats {
        for i in 0..r {
            for j in 0..r {
                // (XA - AX)_ij with X_pq at column p*r + q
                let mut row = vec![Cyclotomic::zero(1); r * r];
                for k in 0..r {
                    row[i * r + k] += a.get(k, j);
                    row[k * r + j] -= a.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    CycMatrix::from_rows(rows).kernel().len()
}

pub fn descend(a: &Cyclotomic, m: u32) -> Option<Cyclotomic> {
    let n = a.conductor();
    if n % m == 0 && n != m {
        // candidate: solve in the embedded power basis of Q(zeta_m)
        let phi_m = crate::cyclo::euler_phi(m);
        let cols: Vec<Vector> = (0..phi_m)
            .map(|i| {
                let b = Cyclotomic::zeta(m, i as i64).to_conductor(n);
                let mut c: Vector = b.coeffs_full().into_iter().map(|r| Cyclotomic::from_rat(1, r)).collect();
                c.resize(crate::cyclo::euler_phi(n), Cyclotomic::zero(1));
                c
            })
            .collect();
        let mut rhs: Vector = a.coeffs_full().into_iter().map(|r| Cyclotomic::from_rat(1, r)).collect();
        rhs.resize(crate::cyclo::euler_phi(n), Cyclotomic::zero(1));
        let mut all = cols.clone();
        all.push(rhs.iter().map(|x| -x).collect());
        let k = CycMatrix::from_columns(&all).kernel();
        let sol = k.iter().find(|v| !v[phi_m].is_zero())?;
        let s = sol[phi_m].inv().ok()?;
        let coeffs: Vec<Rat> = (0..phi_m).map(|i| (&sol[i] * &s).as_rat().unwrap()).collect();
        return Cyclotomic::from_coeffs(m, coeffs).ok();
    }
    if m % n == 0 {
        return Some(a.to_conductor(m));
    }
    // general case: go through the gcd
    let g = n.gcd(&m);
    descend(a, g).map(|x| x.to_conductor(m))
}

/// Scale a covector so that its first nonzero coordinate is 1.
pub fn normalize_covector(v: &[Cyclotomic], n: u32) -> Vector {
    let p = v.iter().position(|x| !x.is_zero()).expect("nonzero covector");
    let inv = v[p].inv().unwrap();
    v.iter().map(|x| (x * &inv).to_conductor(n)).collect()
}

/// theta_v: the scalar by which `m` acts on its eigenvector `v`.
pub fn theta_v(m: &CycMatrix, v: &[Cyclotomic]) -> Result<Cyclotomic, GroupError> {
    if m.cols() != v.len() {
        return Err(GroupError::DimensionMismatch);
    }
    let p = v.iter().position(|x| !x.is_zero()).ok_or(GroupError::NotEigenvector)?;
    let w = m.apply(v);
    let theta = &w[p] / &v[p];
    if w.iter().zip(v).all(|(a, b)| *a == b * &theta) {
        Ok(theta)
    } else {
        Err(GroupError::NotEigenvector)
    }
}

/// A reflection coset G*gamma.
#[derive(Clone)]
pub struct ReflectionCoset {
    pub group: Arc<ReflectionGroup>,
    pub gamma: CycMatrix,
    pub gamma_order: u64,
}

impl std::fmt::Debug for ReflectionCoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ReflectionCoset({:?}, gamma order {})", self.group, self.gamma_order)
    }
}

impl ReflectionCoset {
    /// Validate that gamma normalizes G and has finite order; the group is
    /// re-embedded so its conductor contains gamma's entries and zeta_n.
    pub fn new(group: Arc<ReflectionGroup>, gamma: CycMatrix, cap: u64) -> Result<ReflectionCoset, GroupError> {
        if gamma.rows() != group.dim || gamma.cols() != group.dim {
            return Err(GroupError::DimensionMismatch);
        }
        let n = gamma.element_order(cap)?;
        let cond = group.conductor.lcm(&gamma.conductor()).lcm(&(n as u32));
        let group = if cond != group.conductor { Arc::new(group.with_conductor(cond)) } else { group };
        let gamma = gamma.to_conductor(cond);
        let ginv = gamma.inverse().map_err(|_| GroupError::NotNormalizing)?;
        for g in &group.generators {
            if !group.contains(&(&(&gamma * g) * &ginv)) {
                return Err(GroupError::NotNormalizing);
            }
        }
        Ok(ReflectionCoset { group, gamma, gamma_order: n })
    }

    pub fn untwisted(group: Arc<ReflectionGroup>) -> ReflectionCoset {
        let id = group.identity();
        ReflectionCoset { group, gamma: id, gamma_order: 1 }
    }

    pub fn conductor(&self) -> u32 {
        self.group.conductor
    }

    pub fn dim(&self) -> usize {
        self.group.dim
    }

    /// gamma^j.
    pub fn gamma_pow(&self, j: u64) -> CycMatrix {
        self.gamma.pow(j % self.gamma_order)
    }

    /// g gamma^j for element index i.
    pub fn coset_element(&self, i: usize, j: u64) -> CycMatrix {
        &self.group.elements[i] * &self.gamma_pow(j)
    }

    /// The coset of zeta^-1 gamma.
    pub fn shifted(&self, zeta: RootOfUnity) -> ReflectionCoset {
        let z = zeta.inv().to_cyclotomic();
        let g = self.gamma.scale(&z);
        let group = Arc::new(self.group.with_conductor(zeta.order as u32));
        ReflectionCoset::new(group, g, u64::MAX).expect("scalar shifts normalize G")
    }

    /// Exponent of <G, gamma>: lcm of orders of all g gamma^j.
    pub fn exponent(&self) -> u64 {
        let mut e = self.group.exponent();
        for j in 1..self.gamma_order {
            let gj = self.gamma_pow(j);
            for x in &self.group.elements {
                let o = (x * &gj).element_order(u64::MAX).unwrap();
                e = e.lcm(&o);
            }
        }
        e
    }

    /// Conjugation by gamma permutes the element list and the arrangement.
    pub fn normalization_consistent(&self) -> bool {
        let g = &self.group;
        let ginv = self.gamma.inverse().unwrap();
        let mut seen = vec![false; g.order()];
        for x in &g.elements {
            match g.index_of(&(&(&self.gamma * x) * &ginv)) {
                Some(j) if !seen[j] => seen[j] = true,
                _ => return false,
            }
        }
        // L_H o gamma^-1 is again a listed form up to scalar
        let keys: HashSet<MatrixKey> =
            g.arrangement.iter().map(|h| CycMatrix::from_rows(vec![h.form.clone()]).to_conductor(g.conductor).key()).collect();
        g.arrangement.iter().all(|h| {
            let row = CycMatrix::from_rows(vec![h.form.clone()]);
            let moved = (&row * &ginv).row(0);
            let f = normalize_covector(&moved, g.conductor);
            keys.contains(&CycMatrix::from_rows(vec![f]).to_conductor(g.conductor).key())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;

    /// Standard monomial generators of G(m, p, r).
    pub fn gmpr(m: u32, p: u32, r: usize) -> Vec<CycMatrix> {
        let mut gens = Vec::new();
        if p < m {
            let mut t = CycMatrix::identity(r, m);
            t.set(0, 0, C::zeta(m, p as i64));
            gens.push(t);
        }
        if r >= 2 && p > 1 {
            let mut s = CycMatrix::identity(r, m);
            s.set(0, 0, C::zero(m));
            s.set(1, 1, C::zero(m));
            s.set(0, 1, C::zeta(m, -1));
            s.set(1, 0, C::zeta(m, 1));
            gens.push(s);
        }
        for i in 0..r.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..r).collect();
            perm.swap(i, i + 1);
            gens.push(CycMatrix::permutation(&perm, m));
        }
        gens
    }

    #[test]
    fn g333_and_trivial() {
        let g = ReflectionGroup::enumerate(3, &gmpr(3, 3, 3), DEFAULT_CAP, 1).unwrap();
        assert_eq!(g.order(), 27 * 6 / 3);
        assert_eq!(g.classes.iter().map(|c| c.members.len()).sum::<usize>(), 54);
        let s: u64 = g.arrangement.iter().map(|h| h.e - 1).sum();
        assert_eq!(s as usize, g.reflections.len());
        assert_eq!(g.arrangement.len(), 9);
        for h in &g.arrangement {
            assert_eq!(h.members.len() as u64, h.e - 1);
        }
        let t = ReflectionGroup::enumerate(2, &[], 10, 1).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.reflections.is_empty());
        assert!(matches!(ReflectionGroup::enumerate(3, &gmpr(3, 3, 3), 10, 1), Err(GroupError::CapExceeded(10))));
    }

    #[test]
    fn normalization_errors() {
        let g = Arc::new(ReflectionGroup::enumerate(3, &gmpr(3, 3, 3), DEFAULT_CAP, 1).unwrap());
        let bad = CycMatrix::diag(&[C::from_int(1, -1), C::one(1), C::one(1)]);
        assert!(matches!(ReflectionCoset::new(g.clone(), bad, 100), Err(GroupError::NotNormalizing)));
        let good = CycMatrix::diag(&[C::zeta(3, 1), C::one(1), C::one(1)]);
        let c = ReflectionCoset::new(g, good, 100).unwrap();
        assert_eq!(c.gamma_order, 3);
        assert!(c.normalization_consistent());
    }

    #[test]
    fn parabolic_and_theta() {
        let g = ReflectionGroup::enumerate(2, &gmpr(4, 2, 2), DEFAULT_CAP, 1).unwrap();
        assert_eq!(g.order(), 16);
        let regular = vec![C::from_int(1, 1), C::from_int(1, 3)];
        let (gv, stab) = g.parabolic(&regular);
        assert_eq!(gv.order(), 1);
        assert_eq!(stab, vec![0]);
        let zero = vec![C::zero(1), C::zero(1)];
        assert_eq!(g.parabolic(&zero).0.order(), 16);
        let on_h = vec![C::from_int(1, 1), C::from_int(1, 1)];
        let (gv, _) = g.parabolic(&on_h);
        assert_eq!(gv.order(), 2);
        assert!(g.steinberg_holds(&on_h));
        let gamma = CycMatrix::diag(&[C::zeta(4, 1), C::one(1)]);
        let e1 = vec![C::one(1), C::zero(1)];
        assert_eq!(theta_v(&gamma, &e1).unwrap(), C::zeta(4, 1));
        assert!(theta_v(&gamma, &on_h).is_err());
    }

    #[test]
    fn reynolds_plan_covers_group() {
        let g = ReflectionGroup::enumerate(3, &gmpr(3, 1, 3), DEFAULT_CAP, 1).unwrap();
        let plan = g.reynolds_plan();
        let prod: usize = plan.iter().map(|l| l.len() + 1).product();
        assert_eq!(prod, g.order());
    }

    #[test]
    fn commutants() {
        let g = ReflectionGroup::enumerate(3, &gmpr(3, 3, 3), DEFAULT_CAP, 1).unwrap();
        assert_eq!(commutant_dim(&g.generators), 1);
        let g = ReflectionGroup::enumerate(3, &gmpr(1, 1, 3), DEFAULT_CAP, 1).unwrap();
        assert_eq!(commutant_dim(&g.generators), 2);
    }

    #[test]
    fn descend_to_subfield() {
        let a = C::zeta(3, 1).to_conductor(12);
        assert_eq!(descend(&a, 3).unwrap().conductor(), 3);
        assert!(descend(&C::zeta(12, 1), 3).is_none());
    }
}
