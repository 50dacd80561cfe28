//! Builders for the concrete groups and cosets: imprimitive G(de,e,r) with
//! their diagonal twists, the twisted exceptional rows, and Coxeter groups.

use crate::cyclo::{Cyclotomic as C, Rat};
use crate::groups::{GroupError, ReflectionCoset, ReflectionGroup, DEFAULT_CAP};
use crate::linalg::CycMatrix;
use num_integer::Integer;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog key: {0}")]
    UnknownKey(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("group of order {0} exceeds the enumeration cap {1}")]
    TooLarge(u64, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    A,
    B,
    D,
    F,
    G,
    H,
    I(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CatalogKey {
    /// G(de,e,r); `twist` = Some(e') gives gamma = diag(zeta_{e'd}, 1, ...),
    /// None gives gamma = 1.
    Imprimitive { d: u32, e: u32, r: usize, twist: Option<u32> },
    G333Order4,
    G333Order2,
    G422Order3,
    G5Order2,
    G7Order2,
    D4Order3,
    F4Order2,
    Coxeter { ty: CoxeterType, rank: usize },
    /// Untwisted exceptional rank-2 group G_5, G_6 or G_7.
    Exceptional(u32),
    /// G x G acting on V + V with gamma swapping the summands.
    Swap(Box<CatalogKey>),
}

impl CatalogKey {
    /// Group order predicted by the family formula.
    pub fn expected_order(&self) -> u64 {
        fn fact(n: u64) -> u64 {
            (1..=n).product()
        }
        match self {
            CatalogKey::Imprimitive { d, e, r, .. } => {
                ((*d as u64) * (*e as u64)).pow(*r as u32) * fact(*r as u64) / *e as u64
            }
            CatalogKey::G333Order4 | CatalogKey::G333Order2 => 54,
            CatalogKey::G422Order3 => 16,
            CatalogKey::G5Order2 => 72,
            CatalogKey::G7Order2 => 144,
            CatalogKey::D4Order3 => 192,
            CatalogKey::F4Order2 => 1152,
            CatalogKey::Coxeter { ty, rank } => {
                let n = *rank as u64;
                match ty {
                    CoxeterType::A => fact(n + 1),
                    CoxeterType::B => 2u64.pow(n as u32) * fact(n),
                    CoxeterType::D => 2u64.pow(n as u32 - 1) * fact(n),
                    CoxeterType::F => 1152,
                    CoxeterType::G => 12,
                    CoxeterType::H => {
                        if n == 3 {
                            120
                        } else {
                            14400
                        }
                    }
                    CoxeterType::I(m) => 2 * *m as u64,
                }
            }
            CatalogKey::Exceptional(k) => match k {
                5 => 72,
                6 => 48,
                _ => 144,
            },
            CatalogKey::Swap(k) => k.expected_order().pow(2),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CatalogKey::Imprimitive { r, .. } => *r,
            CatalogKey::G333Order4 | CatalogKey::G333Order2 => 3,
            CatalogKey::G422Order3 | CatalogKey::G5Order2 | CatalogKey::G7Order2 | CatalogKey::Exceptional(_) => 2,
            CatalogKey::D4Order3 | CatalogKey::F4Order2 => 4,
            CatalogKey::Coxeter { rank, .. } => *rank,
            CatalogKey::Swap(k) => 2 * k.rank(),
        }
    }

    /// The named twisted rows plus the untwisted groups used in tests.
    pub fn named_twisted() -> Vec<CatalogKey> {
        vec![
            CatalogKey::G333Order4,
            CatalogKey::G333Order2,
            CatalogKey::G422Order3,
            CatalogKey::G5Order2,
            CatalogKey::G7Order2,
            CatalogKey::D4Order3,
            CatalogKey::F4Order2,
        ]
    }

    fn validate(&self) -> Result<(), CatalogError> {
        match self {
            CatalogKey::Imprimitive { d, e, r, twist } => {
                if *d == 0 || *e == 0 || *r == 0 {
                    return Err(CatalogError::InvalidParameters("d, e, r must be positive".into()));
                }
                if *r > crate::linalg::MAX_VARS {
                    return Err(CatalogError::InvalidParameters(format!("rank {r} too large")));
                }
                if let Some(ep) = twist {
                    if *ep == 0 || e % ep != 0 {
                        return Err(CatalogError::InvalidParameters(format!("e' = {ep} must divide e = {e}")));
                    }
                }
                Ok(())
            }
            CatalogKey::Coxeter { ty, rank } => {
                let ok = match ty {
                    CoxeterType::A => *rank >= 1,
                    CoxeterType::B => *rank >= 2,
                    CoxeterType::D => *rank >= 4,
                    CoxeterType::F => *rank == 4,
                    CoxeterType::G => *rank == 2,
                    CoxeterType::H => *rank == 3 || *rank == 4,
                    CoxeterType::I(m) => *rank == 2 && *m >= 2,
                };
                if ok && *rank <= crate::linalg::MAX_VARS {
                    Ok(())
                } else {
                    Err(CatalogError::InvalidParameters(format!("no Coxeter group {self}")))
                }
            }
            CatalogKey::Exceptional(k) if !(5..=7).contains(k) => {
                Err(CatalogError::InvalidParameters(format!("G_{k} is not in the catalog")))
            }
            CatalogKey::Swap(k) => {
                if 2 * k.rank() > crate::linalg::MAX_VARS {
                    return Err(CatalogError::InvalidParameters("rank too large".into()));
                }
                k.validate()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A => write!(f, "A"),
            CoxeterType::B => write!(f, "B"),
            CoxeterType::D => write!(f, "D"),
            CoxeterType::F => write!(f, "F"),
            CoxeterType::G => write!(f, "G"),
            CoxeterType::H => write!(f, "H"),
            CoxeterType::I(_) => write!(f, "I"),
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::Imprimitive { d, e, r, twist: None } => write!(f, "G({},{},{})", d * e, e, r),
            CatalogKey::Imprimitive { d, e, r, twist: Some(t) } => write!(f, "G({},{},{};zeta={})", d * e, e, r, t),
            CatalogKey::G333Order4 => write!(f, "4G333"),
            CatalogKey::G333Order2 => write!(f, "2G333"),
            CatalogKey::G422Order3 => write!(f, "3G422"),
            CatalogKey::G5Order2 => write!(f, "2G5"),
            CatalogKey::G7Order2 => write!(f, "2G7"),
            CatalogKey::D4Order3 => write!(f, "3D4"),
            CatalogKey::F4Order2 => write!(f, "2F4"),
            CatalogKey::Coxeter { ty: CoxeterType::I(m), .. } => write!(f, "I2({m})"),
            CatalogKey::Coxeter { ty, rank } => write!(f, "{ty}{rank}"),
            CatalogKey::Exceptional(k) => write!(f, "G{k}"),
            CatalogKey::Swap(k) => write!(f, "swap({k})"),
        }
    }
}

impl FromStr for CatalogKey {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<CatalogKey, CatalogError> {
        let s = s.trim();
        let unknown = || CatalogError::UnknownKey(s.to_string());
        let key = match s {
            "4G333" => CatalogKey::G333Order4,
            "2G333" => CatalogKey::G333Order2,
            "3G422" => CatalogKey::G422Order3,
            "2G5" => CatalogKey::G5Order2,
            "2G7" => CatalogKey::G7Order2,
            "3D4" => CatalogKey::D4Order3,
            "2F4" => CatalogKey::F4Order2,
            "G5" => CatalogKey::Exceptional(5),
            "G6" => CatalogKey::Exceptional(6),
            "G7" => CatalogKey::Exceptional(7),
            _ => {
                if let Some(inner) = s.strip_prefix("swap(").and_then(|x| x.strip_suffix(')')) {
                    CatalogKey::Swap(Box::new(inner.parse()?))
                } else if let Some(body) = s.strip_prefix("G(").and_then(|x| x.strip_suffix(')')) {
                    let (params, twist) = match body.split_once(';') {
                        Some((p, t)) => {
                            let t = t.trim().strip_prefix("zeta=").ok_or_else(unknown)?;
                            (p, Some(t.trim().parse::<u32>().map_err(|_| unknown())?))
                        }
                        None => (body, None),
                    };
                    let v: Vec<u32> = params
                        .split(',')
                        .map(|x| x.trim().parse::<u32>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| unknown())?;
                    if v.len() != 3 || v[1] == 0 || v[0] % v[1] != 0 || v[0] == 0 {
                        return Err(CatalogError::InvalidParameters(format!("G(m,p,r) needs p | m: {s}")));
                    }
                    CatalogKey::Imprimitive { d: v[0] / v[1], e: v[1], r: v[2] as usize, twist }
                } else if let Some(m) = s.strip_prefix("I2(").and_then(|x| x.strip_suffix(')')) {
                    CatalogKey::Coxeter { ty: CoxeterType::I(m.parse().map_err(|_| unknown())?), rank: 2 }
                } else {
                    let mut ch = s.chars();
                    let ty = match ch.next() {
                        Some('A') => CoxeterType::A,
                        Some('B') => CoxeterType::B,
                        Some('D') => CoxeterType::D,
                        Some('F') => CoxeterType::F,
                        Some('G') => CoxeterType::G,
                        Some('H') => CoxeterType::H,
                        _ => return Err(unknown()),
                    };
                    let rank: usize = ch.as_str().parse().map_err(|_| unknown())?;
                    CatalogKey::Coxeter { ty, rank }
                }
            }
        };
        key.validate()?;
        Ok(key)
    }
}

fn z(n: u32, k: i64) -> C {
    C::zeta(n, k)
}

fn q(a: i64, b: i64) -> C {
    C::from_rat(1, Rat::new(a, b))
}

fn mat(rows: Vec<Vec<C>>) -> CycMatrix {
    CycMatrix::from_rows(rows)
}

/// 2 cos(pi/m) = zeta_2m + zeta_2m^-1.
fn two_cos_pi_over(m: u32) -> C {
    match m {
        2 => C::zero(1),
        3 => C::one(1),
        _ => &z(2 * m, 1) + &z(2 * m, -1),
    }
}

/// Simple reflections s_i = 1 - e_i a_i in the root basis, where a_i is row
/// i of the (generalized) Cartan matrix.
fn cartan_reflections(a: &[Vec<C>]) -> Vec<CycMatrix> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let mut s = CycMatrix::identity(n, 1);
            for j in 0..n {
                s.set(i, j, if i == j { &C::one(1) - &a[i][j] } else { -&a[i][j] });
            }
            s
        })
        .collect()
}

/// Symmetric Cartan matrix -2cos(pi/m_ij) from a Coxeter matrix.
fn symmetric_cartan(m: &[Vec<u32>]) -> Vec<Vec<C>> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::from_int(1, 2) } else { -two_cos_pi_over(m[i][j]) }).collect())
        .collect()
}

fn coxeter_matrix_from_edges(n: usize, edges: &[(usize, usize, u32)]) -> Vec<Vec<u32>> {
    let mut m = vec![vec![2u32; n]; n];
    for i in 0..n {
        m[i][i] = 1;
    }
    for &(i, j, k) in edges {
        m[i][j] = k;
        m[j][i] = k;
    }
    m
}

fn int_matrix(a: &[Vec<i64>]) -> Vec<Vec<C>> {
    a.iter().map(|r| r.iter().map(|&x| C::from_int(1, x)).collect()).collect()
}

fn chain(n: usize) -> Vec<(usize, usize, u32)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect()
}

/// Crystallographic Cartan matrices for Weyl types; symmetric ones otherwise.
fn coxeter_generators(ty: CoxeterType, n: usize) -> Vec<CycMatrix> {
    let cartan = match ty {
        CoxeterType::A => symmetric_cartan(&coxeter_matrix_from_edges(n, &chain(n))),
        CoxeterType::B => {
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            a[n - 1][n - 2] = -2;
            int_matrix(&a)
        }
        CoxeterType::D => {
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1, 3));
            symmetric_cartan(&coxeter_matrix_from_edges(n, &e))
        }
        CoxeterType::F => int_matrix(&[vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]]),
        CoxeterType::G => int_matrix(&[vec![2, -1], vec![-3, 2]]),
        CoxeterType::H => {
            let mut e = chain(n);
            e[0].2 = 5;
            symmetric_cartan(&coxeter_matrix_from_edges(n, &e))
        }
        CoxeterType::I(m) => symmetric_cartan(&coxeter_matrix_from_edges(2, &[(0, 1, m)])),
    };
    cartan_reflections(&cartan)
}

/// Standard monomial generators of G(de,e,r).
fn imprimitive_generators(d: u32, e: u32, r: usize) -> Vec<CycMatrix> {
    let m = d * e;
    let mut gens = Vec::new();
    if d > 1 {
        let mut t = CycMatrix::identity(r, m);
        t.set(0, 0, z(m, e as i64));
        gens.push(t);
    }
    if r >= 2 && e > 1 {
        let mut s = CycMatrix::identity(r, m);
        s.set(0, 0, C::zero(m));
        s.set(1, 1, C::zero(m));
        s.set(0, 1, z(m, -1));
        s.set(1, 0, z(m, 1));
        gens.push(s);
    }
    for i in 0..r.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(i, i + 1);
        gens.push(CycMatrix::permutation(&perm, m));
    }
    gens
}

/// Generators of the binary tetrahedral group in SL_2(Q(i)).
fn binary_tetrahedral() -> Vec<CycMatrix> {
    let i = z(4, 1);
    let one = C::one(1);
    let qi = CycMatrix::diag(&[i.clone(), -&i]);
    let qj = mat(vec![vec![C::zero(1), one.clone()], vec![-&one, C::zero(1)]]);
    let h = q(1, 2);
    let w = mat(vec![
        vec![&(&i - &one) * &h, &(&i + &one) * &h],
        vec![&(&i - &one) * &h, -&(&(&i + &one) * &h)],
    ]);
    vec![qi, qj, w]
}

/// mu_k * T; k = 12 gives G_7.
fn tetrahedral_family(k: u32) -> Vec<CycMatrix> {
    let mut g = binary_tetrahedral();
    g.push(CycMatrix::scalar(2, &z(k, 1)));
    g
}

/// G_6 = <i q_i, omega w>: an order-2 and an order-3 reflection inside
/// G_7. Not mu_4 * T, which has only six reflections.
fn g6_generators() -> Vec<CycMatrix> {
    let t = binary_tetrahedral();
    vec![t[0].scale(&z(4, 1)), t[2].scale(&z(3, 1))]
}

/// s_+ and s_- generating G_5.
fn g5_generators() -> Vec<CycMatrix> {
    // sqrt(-2) = zeta_8 + zeta_8^3
    let s2 = &z(8, 1) + &z(8, 3);
    let one = C::one(1);
    let h = q(1, 2);
    [1i64, -1]
        .iter()
        .map(|&eps| {
            let off = &z(12, 1).scale(&Rat::int(eps)) * &h;
            mat(vec![
                vec![&(&(&s2 - &one) * &z(3, 1)) * &h, off.clone()],
                vec![off, &(&(&(-&one) - &s2) * &z(3, 1)) * &h],
            ])
        })
        .collect()
}

fn enumerate(dim: usize, gens: &[CycMatrix], cap: usize, cond: u32) -> Result<Arc<ReflectionGroup>, CatalogError> {
    Ok(Arc::new(ReflectionGroup::enumerate(dim, gens, cap, cond)?))
}

/// Order-2 reflection normalizing G_7, outside G_7 times scalars, with
/// <G_7, gamma> of order 288: first match in the canonical element order of
/// mu_24 * (binary octahedral group).
fn g7_twist(g7: &ReflectionGroup, cap: usize) -> Result<CycMatrix, CatalogError> {
    let mut gens = binary_tetrahedral();
    gens.push(CycMatrix::diag(&[z(8, 1), z(8, -1)]));
    gens.push(CycMatrix::scalar(2, &z(24, 1)));
    let big = ReflectionGroup::enumerate(2, &gens, cap, 24)?;
    let scalars: Vec<C> = (0..24).map(|k| z(24, k)).collect();
    for &i in &big.reflections {
        let r = &big.elements[i];
        if !(r * r).is_identity() {
            continue;
        }
        if scalars.iter().any(|s| g7.contains(&r.scale(s))) {
            continue;
        }
        let ri = r.inverse().unwrap();
        if !g7.generators.iter().all(|g| g7.contains(&(&(r * g) * &ri))) {
            continue;
        }
        let mut gens = g7.generators.clone();
        gens.push(r.clone());
        if ReflectionGroup::enumerate(2, &gens, cap, 24)?.order() == 288 {
            return Ok(r.clone());
        }
    }
    Err(CatalogError::SelfCheck("no twisting reflection found for G_7".into()))
}

/// Build a validated coset for a catalog key.
pub fn build(key: &CatalogKey) -> Result<ReflectionCoset, CatalogError> {
    build_with_cap(key, DEFAULT_CAP)
}

pub fn build_with_cap(key: &CatalogKey, cap: usize) -> Result<ReflectionCoset, CatalogError> {
    key.validate()?;
    let expected = key.expected_order();
    if expected > cap as u64 {
        return Err(CatalogError::TooLarge(expected, cap));
    }
    let gcap = cap.max(1);
    let one = C::one(1);
    let coset = match key {
        CatalogKey::Imprimitive { d, e, r, twist } => {
            let m = d * e;
            let g = enumerate(*r, &imprimitive_generators(*d, *e, *r), gcap, m)?;
            match twist {
                None => ReflectionCoset::untwisted(g),
                Some(ep) => {
                    let mut gamma = CycMatrix::identity(*r, m);
                    gamma.set(0, 0, z(m, (e / ep) as i64));
                    ReflectionCoset::new(g, gamma, 1 << 20)?
                }
            }
        }
        CatalogKey::G333Order4 | CatalogKey::G333Order2 => {
            let g = enumerate(3, &imprimitive_generators(1, 3, 3), gcap, 12)?;
            let w = z(3, 1);
            let w2 = z(3, 2);
            let m = mat(vec![
                vec![w.clone(), one.clone(), w2.clone()],
                vec![one.clone(), one.clone(), one.clone()],
                vec![w2, one.clone(), w],
            ]);
            // sqrt(-3) = 1 + 2 zeta_3
            let s3 = &one + &z(3, 1).scale(&Rat::int(2));
            let gamma = m.scale(&(-&s3.inv().unwrap()));
            let gamma = if *key == CatalogKey::G333Order2 { &gamma * &gamma } else { gamma };
            ReflectionCoset::new(g, gamma, 1 << 20)?
        }
        CatalogKey::G422Order3 => {
            let i = z(4, 1);
            let gens = vec![
                CycMatrix::diag(&[-&one, one.clone()]),
                mat(vec![vec![C::zero(1), -&i], vec![i.clone(), C::zero(1)]]),
                mat(vec![vec![C::zero(1), one.clone()], vec![one.clone(), C::zero(1)]]),
            ];
            let g = enumerate(2, &gens, gcap, 12)?;
            let pre = &(&i + &one) / &z(3, 1).scale(&Rat::int(2));
            let gamma = mat(vec![vec![-&one, one.clone()], vec![i.clone(), i]]).scale(&pre);
            ReflectionCoset::new(g, gamma, 1 << 20)?
        }
        CatalogKey::G5Order2 => {
            let g = enumerate(2, &g5_generators(), gcap, 24)?;
            ReflectionCoset::new(g, CycMatrix::diag(&[one.clone(), -&one]), 1 << 20)?
        }
        CatalogKey::G7Order2 => {
            let g = enumerate(2, &tetrahedral_family(12), gcap, 24)?;
            let gamma = g7_twist(&g, gcap)?;
            ReflectionCoset::new(g, gamma, 1 << 20)?
        }
        CatalogKey::D4Order3 => {
            let g = enumerate(4, &coxeter_generators(CoxeterType::D, 4), gcap, 3)?;
            // diagram nodes 0,2,3 around the center 1
            let gamma = CycMatrix::permutation(&[2, 1, 3, 0], 1);
            ReflectionCoset::new(g, gamma, 1 << 20)?
        }
        CatalogKey::F4Order2 => {
            let cm = coxeter_matrix_from_edges(4, &[(0, 1, 3), (1, 2, 4), (2, 3, 3)]);
            let g = enumerate(4, &cartan_reflections(&symmetric_cartan(&cm)), gcap, 8)?;
            let gamma = CycMatrix::permutation(&[3, 2, 1, 0], 1);
            ReflectionCoset::new(g, gamma, 1 << 20)?
        }
        CatalogKey::Coxeter { ty, rank } => {
            let gens = coxeter_generators(*ty, *rank);
            ReflectionCoset::untwisted(enumerate(*rank, &gens, gcap, 1)?)
        }
        CatalogKey::Exceptional(k) => {
            let gens = match k {
                5 => g5_generators(),
                6 => g6_generators(),
                _ => tetrahedral_family(12),
            };
            ReflectionCoset::untwisted(enumerate(2, &gens, gcap, 1)?)
        }
        CatalogKey::Swap(inner) => {
            let base = build_with_cap(inner, cap)?;
            let g = &base.group;
            let r = g.dim;
            let n = g.conductor;
            let embed = |m: &CycMatrix, off: usize| {
                let mut x = CycMatrix::identity(2 * r, n);
                for i in 0..r {
                    for j in 0..r {
                        x.set(off + i, off + j, m.get(i, j).clone());
                    }
                }
                x
            };
            let mut gens: Vec<CycMatrix> = g.generators.iter().map(|m| embed(m, 0)).collect();
            gens.extend(g.generators.iter().map(|m| embed(m, r)));
            let prod = enumerate(2 * r, &gens, gcap, n)?;
            let perm: Vec<usize> = (0..2 * r).map(|i| (i + r) % (2 * r)).collect();
            ReflectionCoset::new(prod, CycMatrix::permutation(&perm, 1), 1 << 20)?
        }
    };
    if coset.group.order() as u64 != expected {
        return Err(CatalogError::SelfCheck(format!(
            "{key}: enumerated {} elements, expected {expected}",
            coset.group.order()
        )));
    }
    Ok(coset)
}

/// Imprimitive cosets e'G(de,e,r) with e' | e, |G| <= max_order and
/// de <= max_conductor, in a deterministic order. The trivial groups
/// G(e,e,1) are left out.
pub fn imprimitive_sweep(max_order: u64, max_conductor: u32) -> Vec<CatalogKey> {
    let mut out = Vec::new();
    for m in 1..=max_conductor {
        for e in 1..=m {
            if m % e != 0 {
                continue;
            }
            let d = m / e;
            for r in 1..=crate::linalg::MAX_VARS {
                let key = CatalogKey::Imprimitive { d, e, r, twist: Some(1) };
                if key.expected_order() > max_order {
                    break;
                }
                if d == 1 && r == 1 {
                    continue;
                }
                for ep in 1..=e {
                    if e % ep == 0 {
                        out.push(CatalogKey::Imprimitive { d, e, r, twist: Some(ep) });
                    }
                }
            }
        }
    }
    out
}

/// Whether a twisted imprimitive coset is one the closed-form table covers
/// (d > 1, or d = 1 with e = r = 2 excluded).
pub fn imprimitive_formula_applies(key: &CatalogKey) -> bool {
    match key {
        CatalogKey::Imprimitive { d, e, r, .. } => !(*d == 1 && *e == 2 && *r == 2),
        _ => false,
    }
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_grammar_roundtrip() {
        for s in ["G(6,2,2;zeta=2)", "G(4,2,2)", "2F4", "3D4", "4G333", "2G333", "3G422", "2G5", "2G7", "F4", "D4", "A3", "I2(5)", "H3", "G7", "swap(G(3,1,2))"] {
            let k: CatalogKey = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!(
            "G(6,2,2;zeta=2)".parse::<CatalogKey>().unwrap(),
            CatalogKey::Imprimitive { d: 3, e: 2, r: 2, twist: Some(2) }
        );
        assert!("G(6,4,2)".parse::<CatalogKey>().is_err());
        assert!("G(6,2,2;zeta=3)".parse::<CatalogKey>().is_err());
        assert!("X9".parse::<CatalogKey>().is_err());
    }

    #[test]
    fn small_builds() {
        let c = build(&"G(4,2,2;zeta=2)".parse().unwrap()).unwrap();
        assert_eq!(c.group.order(), 16);
        assert_eq!(c.gamma_order, 4);
        let c = build(&CatalogKey::G422Order3).unwrap();
        assert_eq!(c.gamma.det().unwrap(), z(3, 1));
        assert_eq!(c.gamma_order, 3);
        // gamma permutes the three listed generators cyclically
        let gi = c.gamma.inverse().unwrap();
        let gens = &c.group.generators;
        let images: Vec<usize> = gens
            .iter()
            .map(|g| gens.iter().position(|h| *h == &(&c.gamma * g) * &gi).expect("generator image is a generator"))
            .collect();
        let mut sorted = images.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert!(images.iter().enumerate().all(|(i, &j)| i != j));
        let c = build(&CatalogKey::G333Order4).unwrap();
        assert_eq!(c.gamma_order, 4);
        let c2 = build(&CatalogKey::G333Order2).unwrap();
        assert_eq!(c2.gamma, &c.gamma * &c.gamma);
        let c = build(&CatalogKey::G5Order2).unwrap();
        assert_eq!(c.group.order(), 72);
        let gi = c.gamma.inverse().unwrap();
        assert_eq!(&(&c.gamma * &c.group.generators[0]) * &gi, c.group.generators[1]);
    }

    #[test]
    fn g7_twist_found() {
        let c = build(&CatalogKey::G7Order2).unwrap();
        assert_eq!(c.group.order(), 144);
        assert_eq!(c.gamma_order, 2);
        assert_eq!(c.gamma.fixed_dim(), 1);
        assert!(!c.group.contains(&c.gamma));
    }

    #[test]
    fn coxeter_orders() {
        for s in ["A3", "B3", "H3", "G2", "I2(5)", "D4"] {
            let k: CatalogKey = s.parse().unwrap();
            assert_eq!(build(&k).unwrap().group.order() as u64, k.expected_order(), "{s}");
        }
        let c = build(&CatalogKey::D4Order3).unwrap();
        assert_eq!(c.group.order(), 192);
        assert_eq!(c.gamma_order, 3);
    }

    #[test]
    fn sweep_size() {
        let keys = imprimitive_sweep(5000, 12);
        assert_eq!(keys.len(), 201);
    }

    #[test]
    fn tetrahedral_reflection_counts() {
        // (order, reflections, hyperplanes with e=2, with e=3)
        for (k, want) in [(5, (72, 16, 0, 8)), (6, (48, 14, 6, 4)), (7, (144, 22, 6, 8))] {
            let c = build(&CatalogKey::Exceptional(k)).unwrap();
            let g = &c.group;
            let e2 = g.arrangement.iter().filter(|h| h.e == 2).count();
            let e3 = g.arrangement.iter().filter(|h| h.e == 3).count();
            assert_eq!((g.order(), g.reflections.len(), e2, e3), want, "G{k}");
        }
    }
}
