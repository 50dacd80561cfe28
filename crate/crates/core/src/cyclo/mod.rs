//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Values are stored in the power basis 1, z, ..., z^(phi(N)-1) reduced modulo
//! the N-th cyclotomic polynomial, with trailing zero coefficients trimmed.
//! The convention zeta_{de}^e = zeta_d holds for the chosen embeddings.

mod rat;

pub use rat::{lcm_u64, Rat};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("galois exponent {k} not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("conductor {from} does not divide {to}")]
    BadEmbedding { from: u32, to: u32 },
    #[error("malformed cyclotomic: {0}")]
    Malformed(String),
}

/// Reduction data for one conductor: Phi_N and z^k mod Phi_N for 0 <= k < N.
pub struct CycloTable {
    pub n: u32,
    pub phi: usize,
    pub phi_poly: Vec<i64>,
    pow: Vec<Vec<(u32, i64)>>,
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                r[i + j] -= c * b[j];
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for proper divisors d of n
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &table(d).phi_poly);
        }
    }
    p
}

impl CycloTable {
    fn build(n: u32) -> CycloTable {
        let phi_poly = cyclotomic_poly(n);
        let phi = phi_poly.len() - 1;
        let mut pow = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            pow.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i as u32, c))
                    .collect(),
            );
            // multiply by x; x^phi = -sum_{j<phi} Phi_j x^j
            let over = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            if over != 0 {
                for j in 0..phi {
                    next[j] -= over * phi_poly[j];
                }
            }
            cur = next;
        }
        CycloTable { n, phi, phi_poly, pow }
    }

    /// z^k reduced, as sparse integer coefficients.
    #[inline]
    pub fn power(&self, k: i64) -> &[(u32, i64)] {
        &self.pow[k.rem_euclid(self.n as i64) as usize]
    }
}

/// Interned reduction table for conductor `n`.
pub fn table(n: u32) -> &'static CycloTable {
    thread_local! {
        static LOCAL: std::cell::RefCell<HashMap<u32, &'static CycloTable>> = Default::default();
    }
    if let Some(t) = LOCAL.with(|l| l.borrow().get(&n).copied()) {
        return t;
    }
    let t = table_shared(n);
    LOCAL.with(|l| l.borrow_mut().insert(n, t));
    t
}

fn table_shared(n: u32) -> &'static CycloTable {
    assert!(n >= 1, "conductor must be positive");
    static REG: OnceLock<Mutex<HashMap<u32, &'static CycloTable>>> = OnceLock::new();
    let reg = REG.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = reg.lock().unwrap().get(&n) {
        return t;
    }
    // build outside the lock: building recurses into smaller conductors
    let t: &'static CycloTable = Box::leak(Box::new(CycloTable::build(n)));
    let mut g = reg.lock().unwrap();
    g.entry(n).or_insert(t)
}

pub fn euler_phi(n: u32) -> usize {
    table(n).phi
}

/// Exact element of Q(zeta_N).
#[derive(Clone)]
pub struct Cyclotomic {
    t: &'static CycloTable,
    c: Vec<Rat>,
}

impl Cyclotomic {
    fn from_raw(t: &'static CycloTable, mut c: Vec<Rat>) -> Cyclotomic {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Cyclotomic { t, c }
    }

    pub fn zero(n: u32) -> Cyclotomic {
        Cyclotomic { t: table(n), c: Vec::new() }
    }

    pub fn one(n: u32) -> Cyclotomic {
        Cyclotomic::from_rat(n, Rat::ONE)
    }

    pub fn from_rat(n: u32, r: Rat) -> Cyclotomic {
        Cyclotomic::from_raw(table(n), vec![r])
    }

    pub fn from_int(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::from_rat(n, Rat::int(k))
    }

    /// zeta_n^k at conductor n.
    pub fn zeta(n: u32, k: i64) -> Cyclotomic {
        let t = table(n);
        let mut c = vec![Rat::ZERO; t.phi];
        for &(i, v) in t.power(k) {
            c[i as usize] = Rat::int(v);
        }
        Cyclotomic::from_raw(t, c)
    }

    /// Build from a full or partial power-basis coefficient vector.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rat>) -> Result<Cyclotomic, CycloError> {
        let t = table(n);
        if coeffs.len() > t.phi.max(1) {
            return Err(CycloError::Malformed(format!(
                "{} coefficients for conductor {n} (phi = {})",
                coeffs.len(),
                t.phi
            )));
        }
        Ok(Cyclotomic::from_raw(t, coeffs))
    }

    #[inline]
    pub fn conductor(&self) -> u32 {
        self.t.n
    }

    /// Trimmed coefficient slice.
    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    /// Full-length coefficient vector (length phi(N)).
    pub fn coeffs_full(&self) -> Vec<Rat> {
        let mut v = self.c.clone();
        v.resize(self.t.phi.max(1), Rat::ZERO);
        v
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// The rational value, if this element is rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.c.len() {
            0 => Some(Rat::ZERO),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_rat().and_then(|r| r.to_i64())
    }

    fn from_sparse_powers(t: &'static CycloTable, terms: &mut [Rat], phi: usize) -> Cyclotomic {
        // terms indexed by exponent 0..terms.len() (exponents may exceed phi)
        let mut out = vec![Rat::ZERO; phi.max(1)];
        for (k, v) in terms.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if k < phi {
                out[k] = &out[k] + v;
            } else {
                for &(i, c) in t.power(k as i64) {
                    out[i as usize] = &out[i as usize] + &(v * &Rat::int(c));
                }
            }
        }
        Cyclotomic::from_raw(t, out)
    }

    /// Re-express in conductor `m`, a multiple of the current conductor.
    pub fn embed(&self, m: u32) -> Result<Cyclotomic, CycloError> {
        let n = self.t.n;
        if self.c.is_empty() && m >= 1 {
            return Ok(Cyclotomic::zero(m));
        }
        if m % n != 0 {
            return Err(CycloError::BadEmbedding { from: n, to: m });
        }
        if m == n {
            return Ok(self.clone());
        }
        let t = table(m);
        let step = (m / n) as i64;
        let mut out = vec![Rat::ZERO; t.phi];
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &(j, c) in t.power(i as i64 * step) {
                out[j as usize] = &out[j as usize] + &(v * &Rat::int(c));
            }
        }
        Ok(Cyclotomic::from_raw(t, out))
    }

    /// Embedding into a multiple; panics when `m` is not a multiple.
    pub fn to_conductor(&self, m: u32) -> Cyclotomic {
        self.embed(m).expect("conductor must divide target")
    }

    /// Galois automorphism zeta_N -> zeta_N^k.
    pub fn galois(&self, k: i64) -> Result<Cyclotomic, CycloError> {
        let n = self.t.n;
        if (k.rem_euclid(n as i64)).gcd(&(n as i64)) != 1 && n > 1 {
            return Err(CycloError::NotCoprime { k, n });
        }
        let t = self.t;
        let mut out = vec![Rat::ZERO; t.phi];
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &(j, c) in t.power(i as i64 * k) {
                out[j as usize] = &out[j as usize] + &(v * &Rat::int(c));
            }
        }
        Ok(Cyclotomic::from_raw(t, out))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Multiply by zeta_N^k (N the conductor of `self`).
    pub fn mul_zeta(&self, k: i64) -> Cyclotomic {
        let t = self.t;
        let mut out = vec![Rat::ZERO; t.phi];
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &(j, c) in t.power(i as i64 + k) {
                let j = j as usize;
                out[j] = if c == 1 { &out[j] + v } else { &out[j] + &(v * &Rat::int(c)) };
            }
        }
        Cyclotomic::from_raw(t, out)
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let n = a.t.n.lcm(&b.t.n);
        (a.to_conductor(n), b.to_conductor(n))
    }

    fn add_same(&self, o: &Cyclotomic) -> Cyclotomic {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, v) in short.c.iter().enumerate() {
            c[i] = &c[i] + v;
        }
        Cyclotomic::from_raw(self.t, c)
    }

    fn mul_same(&self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || o.is_zero() {
            return Cyclotomic { t: self.t, c: Vec::new() };
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut raw = vec![Rat::ZERO; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] = &raw[i + j] + &(a * b);
            }
        }
        Cyclotomic::from_sparse_powers(self.t, &mut raw, self.t.phi)
    }

    /// Multiply by a rational.
    pub fn scale(&self, r: &Rat) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic { t: self.t, c: Vec::new() };
        }
        Cyclotomic::from_raw(self.t, self.c.iter().map(|x| x * r).collect())
    }

    /// Strict arithmetic: operands must share a conductor.
    pub fn arith(&self, o: &Cyclotomic, op: ArithOp) -> Result<Cyclotomic, CycloError> {
        if self.t.n != o.t.n {
            return Err(CycloError::ConductorMismatch(self.t.n, o.t.n));
        }
        Ok(match op {
            ArithOp::Add => self.add_same(o),
            ArithOp::Sub => self.add_same(&-o),
            ArithOp::Mul => self.mul_same(o),
            ArithOp::Div => self.mul_same(&o.inv()?),
        })
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Cyclotomic, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let t = self.t;
        let nz: Vec<usize> = (0..self.c.len()).filter(|&i| !self.c[i].is_zero()).collect();
        if nz.len() == 1 {
            // c z^k -> c^-1 z^-k
            let k = nz[0] as i64;
            let r = self.c[nz[0]].recip();
            let mut out = vec![Rat::ZERO; t.phi.max(1)];
            for &(j, c) in t.power(-k) {
                out[j as usize] = &r * &Rat::int(c);
            }
            return Ok(Cyclotomic::from_raw(t, out));
        }
        // extended Euclid of a(x) with Phi_N(x) over Q
        let phi: Vec<Rat> = t.phi_poly.iter().map(|&x| Rat::int(x)).collect();
        let s = poly_inverse_mod(&self.c, &phi);
        Ok(Cyclotomic::from_raw(t, s))
    }

    pub fn pow(&self, e: i64) -> Cyclotomic {
        if e < 0 {
            return self.inv().expect("inverse of zero").pow(-e);
        }
        let mut result = Cyclotomic::one(self.t.n);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Recognize a root of unity; the group of roots of unity in Q(zeta_N)
    /// is mu_lcm(2, N).
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        if self.c.is_empty() {
            return None;
        }
        let n = self.t.n;
        let m = n.lcm(&2);
        let x = self.to_conductor(m);
        let t = table(m);
        // candidate exponents: roots of unity have a single power-basis
        // expansion; compare against each
        for k in 0..m as i64 {
            let p = t.power(k);
            if p.len() != x.c.iter().filter(|v| !v.is_zero()).count() {
                continue;
            }
            if p.iter().all(|&(j, c)| x.c.get(j as usize).is_some_and(|v| *v == Rat::int(c))) {
                return Some(RootOfUnity::new(m as u64, k));
            }
        }
        None
    }

    /// Integer-valued power-basis rendering, e.g. `1/2 + z8^1 - z8^3`.
    pub fn render(&self) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let n = self.t.n;
        let mut parts: Vec<String> = Vec::new();
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let a = if neg { -v } else { v.clone() };
            let body = if i == 0 {
                a.to_string()
            } else if a.is_one() {
                format!("z{n}^{i}")
            } else {
                format!("{a}*z{n}^{i}")
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {body}", if neg { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

/// Extended Euclid inverse of `a` modulo `m` over Q (both as coefficient vectors).
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    fn trim(v: &mut Vec<Rat>) {
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
    }
    fn sub_mul(a: &mut Vec<Rat>, b: &[Rat], c: &Rat, shift: usize) {
        if a.len() < b.len() + shift {
            a.resize(b.len() + shift, Rat::ZERO);
        }
        for (i, x) in b.iter().enumerate() {
            if !x.is_zero() {
                a[i + shift] = &a[i + shift] - &(x * c);
            }
        }
        trim(a);
    }
    // invariant: s0*a = r0, s1*a = r1 (mod m)
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<Rat> = Vec::new();
    let mut s1: Vec<Rat> = vec![Rat::ONE];
    while r1.len() > 1 {
        // r0 = q r1 + r
        let mut q: Vec<Rat> = vec![Rat::ZERO; r0.len() - r1.len() + 1];
        let lead = r1.last().unwrap().recip();
        while r0.len() >= r1.len() && !r0.is_empty() {
            let shift = r0.len() - r1.len();
            let c = r0.last().unwrap() * &lead;
            q[shift] = c.clone();
            sub_mul(&mut r0, &r1, &c, shift);
        }
        // s_new = s0 - q s1
        let mut s_new = s0.clone();
        for (i, qc) in q.iter().enumerate() {
            if !qc.is_zero() {
                sub_mul(&mut s_new, &s1, qc, i);
            }
        }
        s0 = std::mem::replace(&mut s1, s_new);
        std::mem::swap(&mut r0, &mut r1);
    }
    // r1 is a nonzero constant
    let c = r1[0].recip();
    let mut out: Vec<Rat> = s1.iter().map(|x| x * &c).collect();
    // reduce modulo m (degree of s1 < deg m already)
    out.truncate(m.len() - 1);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Cyclotomic) -> bool {
        if self.t.n == o.t.n {
            return self.c == o.c;
        }
        if self.c.is_empty() || o.c.is_empty() {
            return self.c.is_empty() && o.c.is_empty();
        }
        let (a, b) = Cyclotomic::common(self, o);
        a.c == b.c
    }
}
impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(z) = self.as_root_of_unity() {
            return write!(f, "{z}");
        }
        write!(f, "{}", self.render())
    }
}

// Operators embed mixed-conductor operands into the lcm conductor.
impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.t.n == o.t.n {
            self.add_same(o)
        } else {
            let (a, b) = Cyclotomic::common(self, o);
            a.add_same(&b)
        }
    }
}
impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self + &(-o)
    }
}
impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() {
            return self.clone();
        }
        if o.is_zero() {
            return o.clone();
        }
        if self.t.n == o.t.n {
            self.mul_same(o)
        } else {
            let (a, b) = Cyclotomic::common(self, o);
            a.mul_same(&b)
        }
    }
}
impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, o: &Cyclotomic) -> Cyclotomic {
        self * &o.inv().expect("division by zero")
    }
}
impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { t: self.t, c: self.c.iter().map(|x| -x).collect() }
    }
}
impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
macro_rules! owned_cyc_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, o: Cyclotomic) -> Cyclotomic {
                (&self).$f(&o)
            }
        }
    };
}
owned_cyc_ops!(Add, add);
owned_cyc_ops!(Sub, sub);
owned_cyc_ops!(Mul, mul);
owned_cyc_ops!(Div, div);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, o: &Cyclotomic) {
        if o.is_zero() {
            return;
        }
        if self.t.n == o.t.n && self.c.len() >= o.c.len() {
            for (i, v) in o.c.iter().enumerate() {
                self.c[i] = &self.c[i] + v;
            }
            while self.c.last().is_some_and(|x| x.is_zero()) {
                self.c.pop();
            }
        } else {
            *self = &*self + o;
        }
    }
}
impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, o: &Cyclotomic) {
        *self += &-o;
    }
}
impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, o: &Cyclotomic) {
        *self = &*self * o;
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycJson {
            conductor: self.t.n,
            coeffs: self.coeffs_full().iter().map(|r| r.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = CycJson::deserialize(d)?;
        if j.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| Rat::parse(s).ok_or_else(|| D::Error::custom(format!("bad rational {s}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(j.conductor, coeffs).map_err(D::Error::custom)
    }
}

/// zeta_order^exp with gcd(exp, order) = 1 and 0 <= exp < order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exp: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exp: 0 };

    /// zeta_n^k, reduced to exact order.
    pub fn new(n: u64, k: i64) -> RootOfUnity {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        let order = n / g;
        RootOfUnity { order, exp: if order == 1 { 0 } else { k / g } }
    }

    pub fn minus_one() -> RootOfUnity {
        RootOfUnity::new(2, 1)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        let n = self.order.lcm(&o.order);
        let k = self.exp * (n / self.order) + o.exp * (n / o.order);
        RootOfUnity::new(n, k as i64)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        let k = (self.exp as i128 * e as i128).rem_euclid(self.order as i128) as i64;
        RootOfUnity::new(self.order, k)
    }

    pub fn inv(&self) -> RootOfUnity {
        self.pow(-1)
    }

    /// Exponent of this root written over denominator `n` (order must divide `n`).
    pub fn exp_over(&self, n: u64) -> u64 {
        assert!(n % self.order == 0, "order {} does not divide {n}", self.order);
        self.exp * (n / self.order)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::zeta(self.order as u32, self.exp as i64)
    }

    pub fn at_conductor(&self, n: u32) -> Cyclotomic {
        let m = (self.order as u32).lcm(&n);
        Cyclotomic::zeta(m, self.exp_over(m as u64) as i64)
    }

    /// Parse `k/n` (zeta_n^k) or the text rendering `z<n>^<k>`.
    pub fn parse(s: &str) -> Option<RootOfUnity> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('z') {
            let (n, k) = rest.split_once('^')?;
            return Some(RootOfUnity::new(n.parse().ok()?, k.parse().ok()?));
        }
        if s == "1" {
            return Some(RootOfUnity::ONE);
        }
        if s == "-1" {
            return Some(RootOfUnity::minus_one());
        }
        let (k, n) = s.split_once('/')?;
        let n: u64 = n.trim().parse().ok()?;
        if n == 0 {
            return None;
        }
        Some(RootOfUnity::new(n, k.trim().parse().ok()?))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "1"),
            2 => write!(f, "-1"),
            n => write!(f, "z{n}^{}", self.exp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::zeta(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(table(1).phi_poly, vec![-1, 1]);
        assert_eq!(table(4).phi_poly, vec![1, 0, 1]);
        assert_eq!(table(12).phi_poly, vec![1, 0, -1, 0, 1]);
        assert_eq!(table(105).phi, 48);
        assert!(table(105).phi_poly.contains(&-2));
    }

    #[test]
    fn basic_relations() {
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(4, -1));
        assert!((&(&Cyclotomic::one(3) + &z(3, 1)) + &z(3, 2)).is_zero());
        let a = &Cyclotomic::one(5) + &z(5, 1);
        assert!((&a.inv().unwrap() * &a).is_one());
        assert_eq!(z(3, 1).embed(12).unwrap(), z(12, 4));
        assert_eq!(Cyclotomic::from_int(1, 5).embed(7).unwrap(), Cyclotomic::from_int(7, 5));
        assert!(z(3, 1).embed(8).is_err());
        assert!(z(4, 1).arith(&z(3, 1), ArithOp::Add).is_err());
        assert_eq!(Cyclotomic::zero(3).inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn galois_examples() {
        let a = &z(5, 1) + &z(5, 4);
        assert_eq!(a.galois(1).unwrap(), a);
        assert_eq!(a.galois(2).unwrap(), &z(5, 2) + &z(5, 3));
        assert_eq!(z(7, 1).galois(6).unwrap(), z(7, 6));
        assert!(z(6, 1).galois(2).is_err());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyclotomic::from_int(1, -1).as_root_of_unity(), Some(RootOfUnity::new(2, 1)));
        assert_eq!(z(6, 2).as_root_of_unity(), Some(RootOfUnity::new(3, 1)));
        assert_eq!(Cyclotomic::from_int(1, 2).as_root_of_unity(), None);
        assert_eq!((&z(8, 1) + &z(8, 3)).as_root_of_unity(), None);
        // -zeta_5 has order 10
        assert_eq!((-z(5, 1)).as_root_of_unity(), Some(RootOfUnity::new(10, 7)));
        for d in [1u32, 2, 3, 4, 6, 8, 12, 24] {
            for k in 0..d as i64 {
                let r = RootOfUnity::new(d as u64, k);
                let e = r.to_cyclotomic().embed(24).unwrap();
                assert_eq!(e.as_root_of_unity(), Some(r));
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let a = &z(12, 5).scale(&Rat::new(-3, 7)) + &Cyclotomic::from_int(12, 2);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"conductor\":12"));
        let b: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let r = RootOfUnity::new(3, 2);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"order":3,"exp":2}"#);
        assert_eq!(r.to_string(), "z3^2");
        assert_eq!(RootOfUnity::parse("z3^2"), Some(r));
        assert_eq!(RootOfUnity::parse("4/6"), Some(r));
    }

    fn arb_cyc(n: u32) -> impl Strategy<Value = Cyclotomic> {
        let phi = euler_phi(n);
        proptest::collection::vec((-20i64..20, 1i64..6), phi).prop_map(move |v| {
            Cyclotomic::from_coeffs(n, v.into_iter().map(|(a, b)| Rat::new(a, b)).collect()).unwrap()
        })
    }

    fn arb_triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
        (1u32..=24).prop_flat_map(|n| (arb_cyc(n), arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!(&(&b / &a) * &a, b.clone());
            }
        }

        #[test]
        fn galois_composition(n in 1u32..=24, seed in any::<u64>()) {
            let units: Vec<i64> = (1..=n as i64).filter(|k| k.gcd(&(n as i64)) == 1).collect();
            let k = units[(seed % units.len() as u64) as usize];
            let l = units[((seed / 31) % units.len() as u64) as usize];
            let a = &(&z(n, 1) + &Cyclotomic::from_rat(n, Rat::new(seed as i64 % 7, 3))) * &z(n, (seed % 5) as i64 + 2);
            let b = &a * &(&a + &z(n, 3));
            prop_assert_eq!(a.galois(k).unwrap().galois(l).unwrap(), a.galois((k * l) % n as i64).unwrap());
            prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
            prop_assert_eq!((&a + &b).galois(k).unwrap(), &a.galois(k).unwrap() + &b.galois(k).unwrap());
        }

        #[test]
        fn embedding_commutes((a, b, _c) in arb_triple(), m in 1u32..4) {
            let n = a.conductor() * m;
            prop_assert_eq!((&a * &b).embed(n).unwrap(), &a.embed(n).unwrap() * &b.embed(n).unwrap());
            prop_assert_eq!((&a + &b).embed(n).unwrap(), &a.embed(n).unwrap() + &b.embed(n).unwrap());
        }

        #[test]
        fn root_recognition_inverts(n in 1u64..60, k in 0i64..60) {
            let r = RootOfUnity::new(n, k);
            prop_assert_eq!(r.to_cyclotomic().as_root_of_unity(), Some(r));
            prop_assert_eq!(r.to_cyclotomic().pow(r.order as i64), Cyclotomic::one(r.order as u32));
        }
    }
}
