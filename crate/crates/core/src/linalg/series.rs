use crate::cyclo::Cyclotomic;
use crate::linalg::{LinalgError, UniPoly};
use std::fmt;

/// Power series truncated after degree `bound`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    bound: usize,
    c: Vec<Cyclotomic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Invert,
}

impl TruncSeries {
    pub fn zero(bound: usize) -> TruncSeries {
        TruncSeries { bound, c: vec![Cyclotomic::zero(1); bound + 1] }
    }

    pub fn one(bound: usize) -> TruncSeries {
        TruncSeries::from_poly(&UniPoly::one(), bound)
    }

    pub fn from_poly(p: &UniPoly, bound: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(bound);
        for (i, a) in p.coeffs().iter().enumerate().take(bound + 1) {
            s.c[i] = a.clone();
        }
        s
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> &Cyclotomic {
        &self.c[k]
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.c.clone())
    }

    fn check(&self, o: &TruncSeries) -> Result<(), LinalgError> {
        if self.bound != o.bound {
            return Err(LinalgError::BoundMismatch(self.bound, o.bound));
        }
        Ok(())
    }

    pub fn op(&self, o: Option<&TruncSeries>, op: SeriesOp) -> Result<TruncSeries, LinalgError> {
        match (op, o) {
            (SeriesOp::Add, Some(o)) => self.add(o),
            (SeriesOp::Mul, Some(o)) => self.mul(o),
            (SeriesOp::Invert, _) => self.invert(),
            _ => Err(LinalgError::BoundMismatch(self.bound, 0)),
        }
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries, LinalgError> {
        self.check(o)?;
        Ok(TruncSeries { bound: self.bound, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() })
    }

    pub fn add_assign(&mut self, o: &TruncSeries) {
        assert_eq!(self.bound, o.bound);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }

    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries, LinalgError> {
        self.check(o)?;
        let d = self.bound;
        let mut c = vec![Cyclotomic::zero(1); d + 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        Ok(TruncSeries { bound: d, c })
    }

    /// Multiply by a polynomial, truncating.
    pub fn mul_poly(&self, p: &UniPoly) -> TruncSeries {
        self.mul(&TruncSeries::from_poly(p, self.bound)).expect("same bound")
    }

    pub fn scale(&self, a: &Cyclotomic) -> TruncSeries {
        TruncSeries { bound: self.bound, c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn invert(&self) -> Result<TruncSeries, LinalgError> {
        if self.c[0].is_zero() {
            return Err(LinalgError::NotInvertible);
        }
        let d = self.bound;
        let a0inv = self.c[0].inv().expect("nonzero");
        let mut b = vec![Cyclotomic::zero(1); d + 1];
        b[0] = a0inv.clone();
        for k in 1..=d {
            let mut s = Cyclotomic::zero(1);
            for i in 1..=k {
                if !self.c[i].is_zero() && !b[k - i].is_zero() {
                    s += &(&self.c[i] * &b[k - i]);
                }
            }
            b[k] = -(&s * &a0inv);
        }
        Ok(TruncSeries { bound: d, c: b })
    }

    /// Change the truncation bound (extending with zeros or truncating).
    pub fn with_bound(&self, bound: usize) -> TruncSeries {
        let mut c = self.c.clone();
        c.resize(bound + 1, Cyclotomic::zero(1));
        TruncSeries { bound, c }
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(x^{})", self.to_poly(), self.bound + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Convolution oracle: number of partitions of k into parts 1 and 2.
    fn parts12(k: usize) -> i64 {
        (0..=k / 2).count() as i64
    }

    #[test]
    fn inverse_examples() {
        let s = TruncSeries::from_poly(&UniPoly::from_ints(&[1, -1]), 4);
        let inv = s.invert().unwrap();
        assert_eq!(inv.to_poly(), UniPoly::from_ints(&[1, 1, 1, 1, 1]));
        assert_eq!(inv.mul(&s).unwrap(), TruncSeries::one(4));
        let p = UniPoly::from_ints(&[1, -1]).mul(&UniPoly::from_ints(&[1, 0, -1]));
        let q = TruncSeries::from_poly(&p, 6).invert().unwrap();
        let want: Vec<i64> = (0..=6).map(parts12).collect();
        assert_eq!(want, vec![1, 1, 2, 2, 3, 3, 4]);
        assert_eq!(q.to_poly(), UniPoly::from_ints(&want));
        assert!(TruncSeries::zero(3).invert().is_err());
        assert!(s.add(&TruncSeries::zero(2)).is_err());
    }
}
