use crate::cyclo::Cyclotomic;
use crate::linalg::Vector;

/// Incrementally maintained echelon basis of a subspace of K^n.
///
/// Row i is normalized at its pivot and vanishes at the pivots of rows
/// inserted before it, so reducing in insertion order is exact.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Cyclotomic]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &(&f * x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Cyclotomic]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Insert `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Cyclotomic]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        let r: Vector = r.iter().map(|x| if x.is_zero() { x.clone() } else { x * &inv }).collect();
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;

    fn v(x: &[i64]) -> Vector {
        x.iter().map(|&a| C::from_int(1, a)).collect()
    }

    #[test]
    fn span_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[0, 1, 1])));
        assert!(e.insert(&v(&[1, 1, 0])));
        assert!(!e.insert(&v(&[2, 3, 1])));
        assert!(e.contains(&v(&[1, 0, -1])));
        assert!(!e.contains(&v(&[0, 0, 1])));
        assert!(e.insert(&v(&[0, 0, 1])));
        assert_eq!(e.rank(), 3);
    }
}
