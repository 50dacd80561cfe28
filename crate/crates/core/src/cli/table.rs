//! Reference rows for the coset table and the computed rows compared
//! against them.

use crate::catalog::{build_with_cap, imprimitive_formula_applies, CatalogError, CatalogKey};
use crate::cyclo::RootOfUnity;
use crate::molien::{FactorSet, Molien};
use crate::regularity::{self, RegularSet, RegularityError};
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Regularity(#[from] RegularityError),
}

/// Which roots of unity are regular, in the form the reference states it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularRule {
    /// o(zeta) in the list.
    Orders(Vec<u64>),
    /// zeta^n = rhs.
    Power { n: u64, rhs: RootOfUnity },
    Or(Vec<RegularRule>),
}

impl RegularRule {
    pub fn holds(&self, z: &RootOfUnity) -> bool {
        match self {
            RegularRule::Orders(o) => o.contains(&z.order),
            RegularRule::Power { n, rhs } => z.pow(*n as i64) == *rhs,
            RegularRule::Or(v) => v.iter().any(|r| r.holds(z)),
        }
    }

    /// Every root satisfying the rule has order dividing this.
    pub fn period(&self) -> u64 {
        match self {
            RegularRule::Orders(o) => o.iter().fold(1, |a, b| a.lcm(b)),
            RegularRule::Power { n, rhs } => (n * rhs.order).max(1),
            RegularRule::Or(v) => v.iter().fold(1, |a, r| a.lcm(&r.period())),
        }
    }
}

impl fmt::Display for RegularRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularRule::Orders(o) => {
                let s: Vec<String> = o.iter().map(|x| x.to_string()).collect();
                write!(f, "o(z) in {{{}}}", s.join(","))
            }
            RegularRule::Power { n, rhs } => write!(f, "z^{n} = {rhs}"),
            RegularRule::Or(v) => {
                let s: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                write!(f, "{}", s.join(" or "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Reference {
    pub degrees: Vec<(i64, RootOfUnity)>,
    pub codegrees: Vec<(i64, RootOfUnity)>,
    pub regular: RegularRule,
    /// The values refer to the complex conjugate of the catalog gamma.
    pub conjugate_gamma: bool,
    /// Known misprints in the printed table, reported with every row.
    pub notes: Vec<String>,
}

fn z(n: u64, k: i64) -> RootOfUnity {
    RootOfUnity::new(n, k)
}

fn one() -> RootOfUnity {
    RootOfUnity::ONE
}

/// Reference values of a catalog coset, if it has any.
pub fn reference(key: &CatalogKey) -> Option<Reference> {
    let plain = |degrees, codegrees, regular| Reference { degrees, codegrees, regular, conjugate_gamma: false, notes: vec![] };
    Some(match key {
        CatalogKey::Imprimitive { d, e, r, twist } => {
            if !imprimitive_formula_applies(key) {
                return None;
            }
            let (d, e, r) = (*d as i64, *e as i64, *r as i64);
            let ep = twist.unwrap_or(1) as u64;
            let zep = z(ep, 1);
            let mut degrees: Vec<(i64, RootOfUnity)> = (1..r).map(|k| (k * e * d, one())).collect();
            degrees.push((r * d, zep.inv()));
            if d > 1 {
                let codegrees = (0..r).map(|k| (k * e * d, one())).collect();
                plain(degrees, codegrees, RegularRule::Power { n: (r * d) as u64, rhs: zep })
            } else {
                let mut codegrees: Vec<(i64, RootOfUnity)> = (0..r - 1).map(|k| (k * e, one())).collect();
                codegrees.push(((r - 1) * e - r, zep));
                let rule = RegularRule::Or(vec![
                    RegularRule::Power { n: r as u64, rhs: zep },
                    RegularRule::Power { n: ((r - 1) * e) as u64, rhs: one() },
                ]);
                plain(degrees, codegrees, rule)
            }
        }
        CatalogKey::G333Order4 => Reference {
            degrees: vec![(3, z(4, 1)), (3, z(4, -1)), (6, one())],
            codegrees: vec![(0, one()), (3, z(4, 1)), (3, z(4, -1))],
            regular: RegularRule::Power { n: 6, rhs: one() },
            conjugate_gamma: false,
            notes: vec!["printed table lists degrees 4,4,6; text and computation give 3,3,6".into()],
        },
        CatalogKey::G333Order2 => Reference {
            degrees: vec![(3, z(2, 1)), (3, z(2, 1)), (6, one())],
            codegrees: vec![(0, one()), (3, z(2, 1)), (3, z(2, 1))],
            regular: RegularRule::Power { n: 6, rhs: one() },
            conjugate_gamma: false,
            notes: vec!["printed table lists degrees 4,4,6; text and computation give 3,3,6".into()],
        },
        CatalogKey::G422Order3 => Reference {
            degrees: vec![(4, one()), (4, z(3, 1))],
            codegrees: vec![(0, one()), (4, z(3, -1))],
            regular: RegularRule::Power { n: 4, rhs: one() },
            conjugate_gamma: true,
            notes: vec!["printed table row (z3, z3^2), (1, 1) is a scalar shift of these values".into()],
        },
        CatalogKey::D4Order3 => plain(
            vec![(2, one()), (4, z(3, 1)), (4, z(3, 2)), (6, one())],
            vec![(0, one()), (2, z(3, 1)), (2, z(3, 2)), (4, one())],
            RegularRule::Orders(vec![1, 2, 3, 6, 12]),
        ),
        CatalogKey::F4Order2 => plain(
            vec![(2, one()), (6, z(2, 1)), (8, one()), (12, z(2, 1))],
            vec![(0, one()), (4, z(2, 1)), (6, one()), (10, z(2, 1))],
            RegularRule::Orders(vec![1, 2, 4, 8, 12, 24]),
        ),
        CatalogKey::G5Order2 => plain(
            vec![(6, one()), (12, z(2, 1))],
            vec![(0, one()), (6, z(2, 1))],
            RegularRule::Orders(vec![1, 2, 3, 6, 8, 24]),
        ),
        CatalogKey::G7Order2 => plain(
            vec![(12, one()), (12, z(2, 1))],
            vec![(0, one()), (12, z(2, 1))],
            RegularRule::Power { n: 12, rhs: one() },
        ),
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEntry {
    pub d: i64,
    pub eps: RootOfUnity,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub key: String,
    pub degrees: Vec<DegreeEntry>,
    pub codegrees: Vec<DegreeEntry>,
    pub regular: String,
    pub flags: Vec<String>,
    /// Degrees, codegrees and regular set all agree with the reference.
    #[serde(skip)]
    pub agrees: Option<bool>,
    #[serde(skip)]
    pub regular_set: RegularSet,
}

fn entries(fs: &FactorSet) -> Vec<DegreeEntry> {
    fs.pairs().into_iter().map(|(d, eps)| DegreeEntry { d, eps }).collect()
}

fn render_pairs(p: &[(i64, RootOfUnity)]) -> String {
    p.iter().map(|(d, e)| format!("({d},{e})")).collect::<Vec<_>>().join(" ")
}

/// Description of a regular set: by orders when it is a union of full
/// order classes, otherwise as the list of roots.
pub fn describe(rs: &RegularSet) -> String {
    let full = rs.orders.iter().all(|&o| rs.roots.iter().filter(|z| z.order == o).count() as u64 == phi(o));
    if full {
        let s: Vec<String> = rs.orders.iter().map(|x| x.to_string()).collect();
        format!("o(z) in {{{}}}", s.join(","))
    } else {
        let s: Vec<String> = rs.roots.iter().map(|x| x.to_string()).collect();
        format!("z in {{{}}}", s.join(","))
    }
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Compute one row and compare it with the reference values.
pub fn table_row(key: &CatalogKey, cap: usize) -> Result<TableRow, TableError> {
    let coset = build_with_cap(key, cap)?;
    row_for(key, &Molien::new(&coset))
}

/// The row of an already built coset.
pub fn row_for(key: &CatalogKey, mol: &Molien) -> Result<TableRow, TableError> {
    let (deg, codeg) = regularity::factor_pair(mol)?;
    let rs = regularity::regular_orders(mol)?;
    let mut flags = Vec::new();
    let agrees = reference(key).map(|rf| {
        let adjust = |v: &[(i64, RootOfUnity)]| -> Vec<(i64, RootOfUnity)> {
            let mut v: Vec<(i64, RootOfUnity)> =
                v.iter().map(|&(d, e)| (d, if rf.conjugate_gamma { e.inv() } else { e })).collect();
            v.sort();
            v
        };
        let want_deg = adjust(&rf.degrees);
        let want_codeg = adjust(&rf.codegrees);
        let mut got_deg = deg.pairs();
        got_deg.sort();
        let mut got_codeg = codeg.pairs();
        got_codeg.sort();
        if rf.conjugate_gamma {
            flags.push("reference values are those of the conjugate gamma; compared after conjugation".into());
        }
        flags.extend(rf.notes.iter().cloned());
        let mut ok = true;
        if got_deg != want_deg {
            flags.push(format!("degrees differ from reference {}", render_pairs(&want_deg)));
            ok = false;
        }
        if got_codeg != want_codeg {
            flags.push(format!("codegrees differ from reference {}", render_pairs(&want_codeg)));
            ok = false;
        }
        let m = rs.exponent.lcm(&rf.regular.period());
        let want: BTreeSet<RootOfUnity> = (0..m).map(|k| z(m, k as i64)).filter(|x| rf.regular.holds(x)).collect();
        let got: BTreeSet<RootOfUnity> = rs.roots.iter().copied().collect();
        if want != got {
            flags.push(format!("regular set differs from reference ({})", rf.regular));
            ok = false;
        }
        ok
    });
    if agrees.is_none() {
        flags.push("no reference row".into());
    }
    Ok(TableRow {
        key: key.to_string(),
        degrees: entries(&deg),
        codegrees: entries(&codeg),
        regular: describe(&rs),
        flags,
        agrees,
        regular_set: rs,
    })
}
