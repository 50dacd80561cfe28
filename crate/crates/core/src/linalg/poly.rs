use crate::cyclo::{Cyclotomic, Rat};
use crate::linalg::LinalgError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Univariate polynomial over Q(zeta_N); zero is the empty vector.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniPoly {
    c: Vec<Cyclotomic>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Cyclotomic>) -> UniPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> UniPoly {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Cyclotomic::one(1))
    }

    pub fn constant(a: Cyclotomic) -> UniPoly {
        UniPoly::new(vec![a])
    }

    /// c * T^k.
    pub fn monomial(a: Cyclotomic, k: usize) -> UniPoly {
        let mut c = vec![Cyclotomic::zero(1); k];
        c.push(a);
        UniPoly::new(c)
    }

    pub fn from_ints(v: &[i64]) -> UniPoly {
        UniPoly::new(v.iter().map(|&x| Cyclotomic::from_int(1, x)).collect())
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Cyclotomic {
        self.c.get(k).cloned().unwrap_or_else(|| Cyclotomic::zero(1))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Cyclotomic::zero(1); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        UniPoly::new(c)
    }

    pub fn scale(&self, a: &Cyclotomic) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut r = UniPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(1);
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    /// Apply a map to every coefficient.
    pub fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> UniPoly {
        UniPoly::new(self.c.iter().map(f).collect())
    }

    /// Substitute T -> -T.
    pub fn negate_var(&self) -> UniPoly {
        UniPoly::new(self.c.iter().enumerate().map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() }).collect())
    }

    /// Euclidean division; returns (quotient, remainder).
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), LinalgError> {
        let Some(dd) = d.degree() else {
            return Err(LinalgError::Singular);
        };
        let lead_inv = d.c[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut q = vec![Cyclotomic::zero(1); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = &r[i + j] - &(&c * b);
                }
            }
            q[i] = c;
        }
        Ok((UniPoly::new(q), UniPoly::new(r)))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Sum of coefficients times a rational factor, convenient for dims.
    pub fn sum_coeffs(&self) -> Cyclotomic {
        let mut s = Cyclotomic::zero(1);
        for a in &self.c {
            s += a;
        }
        s
    }

    pub fn scale_rat(&self, r: &Rat) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x.scale(r)).collect())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = a.render();
            let s = if s.contains(' ') { format!("({s})") } else { s };
            match i {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}*T")?,
                _ => write!(f, "{s}*T^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = UniPoly::from_ints(&[1, 1]);
        let b = UniPoly::from_ints(&[1, 1, 1]);
        let p = a.mul(&b);
        assert_eq!(p, UniPoly::from_ints(&[1, 2, 2, 1]));
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&UniPoly::from_ints(&[2, 1])).is_none());
        assert_eq!(p.eval(&Cyclotomic::from_int(1, 1)).as_i64(), Some(6));
        assert_eq!(a.negate_var(), UniPoly::from_ints(&[1, -1]));
        assert!(a.sub(&a).is_zero());
    }
}
