use crate::cyclo::Cyclotomic;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Packed exponent vector: 8 bits per variable, variable 0 most significant,
/// so numeric order is lexicographic order with X_0 > X_1 > ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono(pub u64);

pub const MAX_VARS: usize = 8;

impl Mono {
    pub const ONE: Mono = Mono(0);

    #[inline]
    fn shift(i: usize) -> u32 {
        ((MAX_VARS - 1 - i) * 8) as u32
    }

    pub fn from_exps(e: &[u32]) -> Mono {
        assert!(e.len() <= MAX_VARS);
        let mut m = 0u64;
        for (i, &x) in e.iter().enumerate() {
            assert!(x < 256, "exponent overflow");
            m |= (x as u64) << Mono::shift(i);
        }
        Mono(m)
    }

    pub fn var(i: usize) -> Mono {
        Mono(1u64 << Mono::shift(i))
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> Mono::shift(i)) & 0xff) as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        debug_assert!((0..MAX_VARS).all(|i| self.exp(i) + o.exp(i) < 256));
        Mono(self.0 + o.0)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// o / self, assuming divisibility.
    pub fn div_into(&self, o: &Mono) -> Mono {
        Mono(o.0 - self.0)
    }
}

/// Sparse multivariate polynomial over Q(zeta_N).
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Cyclotomic>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        assert!(nvars <= MAX_VARS);
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Cyclotomic) -> MultiPoly {
        MultiPoly::term(nvars, Mono::ONE, c)
    }

    pub fn one(nvars: usize) -> MultiPoly {
        MultiPoly::constant(nvars, Cyclotomic::one(1))
    }

    pub fn term(nvars: usize, m: Mono, c: Cyclotomic) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> MultiPoly {
        MultiPoly::term(nvars, Mono::var(i), Cyclotomic::one(1))
    }

    /// Linear form sum_i c_i X_i.
    pub fn linear(c: &[Cyclotomic]) -> MultiPoly {
        let mut p = MultiPoly::zero(c.len());
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                p.terms.insert(Mono::var(i), x.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Cyclotomic {
        self.terms.get(m).cloned().unwrap_or_else(|| Cyclotomic::zero(1))
    }

    /// Constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero(1)),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c);
        }
        p
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, &-c);
        }
        p
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&Cyclotomic::from_int(1, -1))
    }

    pub fn scale(&self, a: &Cyclotomic) -> MultiPoly {
        if a.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, c * a)).collect() }
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut acc: HashMap<Mono, Cyclotomic> = HashMap::with_capacity(self.len() * o.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let v = c1 * c2;
                match acc.get_mut(&m) {
                    Some(x) => *x += &v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        MultiPoly {
            nvars: self.nvars.max(o.nvars),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut r = MultiPoly::one(self.nvars);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn eval(&self, v: &[Cyclotomic]) -> Cyclotomic {
        let mut s = Cyclotomic::zero(1);
        let mut powers: Vec<Vec<Cyclotomic>> = vec![vec![Cyclotomic::one(1)]; self.nvars];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &v[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            s += &t;
        }
        s
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                p.add_term(Mono(m.0 - Mono::var(i).0), &c.scale(&crate::cyclo::Rat::int(e as i64)));
            }
        }
        p
    }

    /// Substitute X_i -> images[i].
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let n = images.first().map_or(self.nvars, |p| p.nvars);
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i);
                if e > 0 {
                    let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
                    t = t.mul(&p);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Exact quotient self / d, or None if d does not divide self.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading()?;
        let (lm, lcinv) = (*lm, lc.inv().ok()?);
        let mut r = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        while let Some((m, c)) = r.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.div_into(m);
            let qc = c * &lcinv;
            for (dm, dc) in &d.terms {
                r.add_term(qm.mul(dm), &-(&qc * dc));
            }
            q.add_term(qm, &qc);
        }
        Some(q)
    }

    /// If self = lambda * o for a constant lambda, return lambda.
    pub fn ratio_to(&self, o: &MultiPoly) -> Option<Cyclotomic> {
        let (m, c) = o.leading()?;
        let lambda = &self.coeff(m) / c;
        if lambda.is_zero() {
            return None;
        }
        (self.sub(&o.scale(&lambda)).is_zero()).then_some(lambda)
    }

    /// Coordinates in a degree basis.
    pub fn to_dense(&self, basis: &DegreeBasis) -> Option<Vec<Cyclotomic>> {
        let mut v = vec![Cyclotomic::zero(1); basis.len()];
        for (m, c) in &self.terms {
            v[*basis.index.get(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_dense(basis: &DegreeBasis, v: &[Cyclotomic]) -> MultiPoly {
        let mut p = MultiPoly::zero(basis.nvars);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(basis.monos[i], c.clone());
            }
        }
        p
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = (0..self.nvars)
                    .filter(|&i| m.exp(i) > 0)
                    .map(|i| if m.exp(i) == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, m.exp(i)) })
                    .collect();
                let cs = c.render();
                if vars.is_empty() {
                    format!("({cs})")
                } else {
                    format!("({cs})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All monomials of a fixed degree in `nvars` variables, descending lex.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub nvars: usize,
    pub degree: u32,
    pub monos: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
}

impl DegreeBasis {
    pub fn new(nvars: usize, degree: u32) -> DegreeBasis {
        let mut monos = Vec::new();
        let mut e = vec![0u32; nvars];
        fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Mono>) {
            let n = e.len();
            if i + 1 == n {
                e[i] = left;
                out.push(Mono::from_exps(e));
                return;
            }
            for k in (0..=left).rev() {
                e[i] = k;
                rec(i + 1, left - k, e, out);
            }
        }
        if nvars == 0 {
            if degree == 0 {
                monos.push(Mono::ONE);
            }
        } else {
            rec(0, degree, &mut e, &mut monos);
        }
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        DegreeBasis { nvars, degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(3, i)
    }

    #[test]
    fn ring_ops_and_division() {
        let a = x(0).add(&x(1).scale(&C::zeta(3, 1)));
        let b = x(1).sub(&x(2));
        let p = a.mul(&b).mul(&a);
        assert_eq!(p.exact_div(&a).unwrap(), a.mul(&b));
        assert_eq!(p.exact_div(&a.mul(&b)).unwrap(), a);
        assert!(p.exact_div(&x(2).add(&MultiPoly::one(3))).is_none());
        assert_eq!(p.degree(), Some(3));
        assert!(p.is_homogeneous());
        assert_eq!(a.pow(3).exact_div(&a.pow(2)).unwrap(), a);
        assert_eq!(p.ratio_to(&p.scale(&C::from_int(1, 2))).unwrap(), C::from_rat(1, crate::cyclo::Rat::new(1, 2)));
    }

    #[test]
    fn derivative_substitute_eval() {
        let p = x(0).pow(3).add(&x(0).mul(&x(1)));
        assert_eq!(p.derivative(0), x(0).pow(2).scale(&C::from_int(1, 3)).add(&x(1)));
        let sw = p.substitute(&[x(1), x(0), x(2)]);
        assert_eq!(sw, x(1).pow(3).add(&x(0).mul(&x(1))));
        let v = [C::from_int(1, 2), C::from_int(1, 5), C::zero(1)];
        assert_eq!(p.eval(&v).as_i64(), Some(18));
    }

    #[test]
    fn degree_basis() {
        let b = DegreeBasis::new(4, 11);
        assert_eq!(b.len(), 364);
        let b = DegreeBasis::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.monos[0], Mono::from_exps(&[2, 0, 0]));
        let p = x(0).mul(&x(2)).add(&x(1).pow(2));
        let d = p.to_dense(&b).unwrap();
        assert_eq!(MultiPoly::from_dense(&b, &d), p);
    }
}
