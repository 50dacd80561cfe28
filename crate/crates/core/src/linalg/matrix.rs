use crate::cyclo::{Cyclotomic, Rat, RootOfUnity};
use crate::linalg::{LinalgError, UniPoly};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};

pub type Vector = Vec<Cyclotomic>;

/// Dense matrix over Q(zeta_N), row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    e: Vec<Cyclotomic>,
}

/// Hashable canonical key of a matrix whose entries share one conductor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixKey(Vec<Vec<Rat>>);

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize, n: u32) -> CycMatrix {
        CycMatrix { rows, cols, e: vec![Cyclotomic::zero(n); rows * cols] }
    }

    pub fn identity(r: usize, n: u32) -> CycMatrix {
        let mut m = CycMatrix::zeros(r, r, n);
        for i in 0..r {
            m.e[i * r + i] = Cyclotomic::one(n);
        }
        m
    }

    pub fn scalar(r: usize, c: &Cyclotomic) -> CycMatrix {
        let mut m = CycMatrix::zeros(r, r, c.conductor());
        for i in 0..r {
            m.e[i * r + i] = c.clone();
        }
        m
    }

    pub fn diag(d: &[Cyclotomic]) -> CycMatrix {
        let r = d.len();
        let n = d.iter().map(|x| x.conductor()).fold(1, |a, b| a.lcm(&b));
        let mut m = CycMatrix::zeros(r, r, n);
        for (i, x) in d.iter().enumerate() {
            m.e[i * r + i] = x.to_conductor(n);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> CycMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        CycMatrix { rows: r, cols: c, e: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vector]) -> CycMatrix {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = CycMatrix::zeros(r, c, 1);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m.e[i * c + j] = col[i].clone();
            }
        }
        m
    }

    /// Permutation matrix sending basis vector e_i to e_{perm[i]}.
    pub fn permutation(perm: &[usize], n: u32) -> CycMatrix {
        let r = perm.len();
        let mut m = CycMatrix::zeros(r, r, n);
        for (i, &p) in perm.iter().enumerate() {
            m.e[p * r + i] = Cyclotomic::one(n);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.e[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.e[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.e[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.e
    }

    /// lcm of the entry conductors.
    pub fn conductor(&self) -> u32 {
        self.e.iter().filter(|x| !x.is_zero()).map(|x| x.conductor()).fold(1, |a, b| a.lcm(&b))
    }

    pub fn to_conductor(&self, n: u32) -> CycMatrix {
        self.map(|x| x.to_conductor(n))
    }

    pub fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> CycMatrix {
        CycMatrix { rows: self.rows, cols: self.cols, e: self.e.iter().map(f).collect() }
    }

    pub fn key(&self) -> MatrixKey {
        MatrixKey(self.e.iter().map(|x| x.coeffs().to_vec()).collect())
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut m = CycMatrix::zeros(self.cols, self.rows, 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.e[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &Cyclotomic) -> CycMatrix {
        self.map(|x| x * c)
    }

    pub fn trace(&self) -> Cyclotomic {
        let mut t = Cyclotomic::zero(1);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Cyclotomic::zero(1);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s += &(a * x);
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, mut k: u64) -> CycMatrix {
        let mut result = CycMatrix::identity(self.rows, self.conductor());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Kronecker product.
    pub fn kronecker(&self, o: &CycMatrix) -> CycMatrix {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut m = CycMatrix::zeros(r, c, 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.e[(i * o.rows + k) * c + j * o.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        m
    }

    /// p-th compound matrix (action on the p-th exterior power), basis the
    /// increasing p-subsets in lexicographic order.
    pub fn compound(&self, p: usize) -> CycMatrix {
        let subsets = k_subsets(self.rows, p);
        let csubs = k_subsets(self.cols, p);
        let mut m = CycMatrix::zeros(subsets.len(), csubs.len(), 1);
        for (a, rs) in subsets.iter().enumerate() {
            for (b, cs) in csubs.iter().enumerate() {
                let minor = CycMatrix::from_rows(
                    rs.iter().map(|&i| cs.iter().map(|&j| self.get(i, j).clone()).collect()).collect(),
                );
                m.e[a * csubs.len() + b] = minor.det().expect("square minor");
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Cyclotomic, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Cyclotomic::one(1));
        }
        let mut a = self.e.clone();
        let mut sign = false;
        let mut prev = Cyclotomic::one(1);
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = !sign;
                    }
                    None => return Ok(Cyclotomic::zero(1)),
                }
            }
            let pinv = prev.inv().expect("nonzero Bareiss pivot");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[i * n + j] * &a[k * n + k]) - &(&a[i * n + k] * &a[k * n + j]);
                    a[i * n + j] = &v * &pinv;
                }
                a[i * n + k] = Cyclotomic::zero(1);
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let mut m = self.clone();
        let (r, c) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            // cheapest nonzero pivot
            let best = (row..r)
                .filter(|&i| !m.e[i * c + col].is_zero())
                .min_by_key(|&i| m.e[i * c + col].coeffs().iter().filter(|x| !x.is_zero()).count());
            let Some(p) = best else { continue };
            if p != row {
                for j in 0..c {
                    m.e.swap(p * c + j, row * c + j);
                }
            }
            let inv = m.e[row * c + col].inv().expect("nonzero pivot");
            for j in col..c {
                if !m.e[row * c + j].is_zero() {
                    m.e[row * c + j] = &m.e[row * c + j] * &inv;
                }
            }
            for i in 0..r {
                if i == row || m.e[i * c + col].is_zero() {
                    continue;
                }
                let f = m.e[i * c + col].clone();
                for j in col..c {
                    let x = &m.e[row * c + j];
                    if !x.is_zero() {
                        let v = &m.e[i * c + j] - &(&f * x);
                        m.e[i * c + j] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vector> {
        let (m, pivots) = self.rref();
        let c = self.cols;
        let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(1); c];
                v[f] = Cyclotomic::one(1);
                for (i, &p) in pivots.iter().enumerate() {
                    let x = m.get(i, f);
                    if !x.is_zero() {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<CycMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = CycMatrix::zeros(n, 2 * n, 1);
        for i in 0..n {
            for j in 0..n {
                aug.e[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.e[i * 2 * n + n + i] = Cyclotomic::one(1);
        }
        let (m, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut inv = CycMatrix::zeros(n, n, 1);
        for i in 0..n {
            for j in 0..n {
                inv.e[i * n + j] = m.get(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// Dimension of the fixed space ker(M - 1).
    pub fn fixed_dim(&self) -> usize {
        let d = self - &CycMatrix::identity(self.rows, 1);
        self.rows - d.rank()
    }

    /// Least n >= 1 with M^n = 1.
    pub fn element_order(&self, cap: u64) -> Result<u64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            n += 1;
            if n > cap {
                return Err(LinalgError::NotFiniteOrder(cap));
            }
            p = &p * self;
        }
        Ok(n)
    }

    /// Traces of M^0, ..., M^(k-1).
    pub fn power_traces(&self, k: usize) -> Vec<Cyclotomic> {
        let mut out = Vec::with_capacity(k);
        let mut p = CycMatrix::identity(self.rows, 1);
        for j in 0..k {
            out.push(p.trace());
            if j + 1 < k {
                p = &p * self;
            }
        }
        out
    }

    /// det(1 - T M) via Newton's identities from power traces.
    pub fn char_series(&self) -> Result<UniPoly, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        Ok(char_series_from_traces(&self.power_traces(self.rows + 1)[1..], self.rows))
    }

    /// Eigenvalue multiset of a finite-order matrix, by discrete Fourier
    /// inversion of the power traces. Sorted by (order, exponent).
    pub fn eigen_multiset(&self, cap: u64) -> Result<Vec<RootOfUnity>, LinalgError> {
        let n = self.element_order(cap)?;
        let tr = self.power_traces(n as usize);
        eigen_from_traces(&tr)
    }
}

/// Eigenvalues from the traces Tr(M^j), j = 0..n-1, with M^n = 1.
pub fn eigen_from_traces(tr: &[Cyclotomic]) -> Result<Vec<RootOfUnity>, LinalgError> {
    let n = tr.len() as u64;
    let base = tr.iter().filter(|x| !x.is_zero()).map(|x| x.conductor()).fold(1u32, |a, b| a.lcm(&b));
    let big = base.lcm(&(n as u32));
    let tr: Vec<Cyclotomic> = tr.iter().map(|x| x.to_conductor(big)).collect();
    let step = (big as u64 / n) as i64;
    let dim = tr[0].as_i64().ok_or(LinalgError::NonIntegral)?;
    let mut out = Vec::new();
    let inv_n = Rat::new(1, n as i64);
    let mut found = 0i64;
    for k in 0..n as i64 {
        let mut s = Cyclotomic::zero(big);
        for (j, t) in tr.iter().enumerate() {
            if !t.is_zero() {
                s += &t.mul_zeta(-(j as i64) * k * step);
            }
        }
        let m = s.scale(&inv_n);
        let m = m.as_i64().filter(|&x| x >= 0).ok_or(LinalgError::NonIntegral)?;
        for _ in 0..m {
            out.push(RootOfUnity::new(n, k));
        }
        found += m;
        if found == dim {
            break;
        }
    }
    if found != dim {
        return Err(LinalgError::NonIntegral);
    }
    out.sort();
    Ok(out)
}

/// det(1 - T M) from p_i = Tr(M^i), i = 1..=r.
pub fn char_series_from_traces(p: &[Cyclotomic], r: usize) -> UniPoly {
    let mut c: Vec<Cyclotomic> = vec![Cyclotomic::one(1)];
    for k in 1..=r {
        let mut s = Cyclotomic::zero(1);
        for i in 1..=k {
            s += &(&p[i - 1] * &c[k - i]);
        }
        c.push((-s).scale(&Rat::new(1, k as i64)));
    }
    UniPoly::new(c)
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl<'a> Mul<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn mul(self, o: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut m = CycMatrix::zeros(self.rows, o.cols, 1);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        m.e[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn add(self, o: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CycMatrix { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn sub(self, o: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CycMatrix { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
