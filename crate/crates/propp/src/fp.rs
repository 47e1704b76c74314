//! Dense linear algebra over the prime field F_p.
//!
//! Everything here is exact arithmetic on small matrices (Frattini quotients,
//! corestriction blocks, Mayer-Vietoris edge maps), so a hand-rolled row
//! reduction is all we need.

use serde::{Deserialize, Serialize};

/// A vector of residues mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpVector {
    pub prime: u32,
    pub entries: Vec<u32>,
}

impl FpVector {
    pub fn zero(prime: u32, len: usize) -> Self {
        FpVector { prime, entries: vec![0; len] }
    }

    pub fn from_ints(prime: u32, raw: &[i64]) -> Self {
        let p = prime as i64;
        FpVector {
            prime,
            entries: raw.iter().map(|&x| (x.rem_euclid(p)) as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        assert_eq!(self.prime, other.prime);
        assert_eq!(self.len(), other.len());
        FpVector {
            prime: self.prime,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + b) % self.prime)
                .collect(),
        }
    }

    pub fn neg(&self) -> FpVector {
        FpVector {
            prime: self.prime,
            entries: self.entries.iter().map(|&a| (self.prime - a) % self.prime).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FpVector {
        let c = c % self.prime;
        FpVector {
            prime: self.prime,
            entries: self.entries.iter().map(|&a| (a * c) % self.prime).collect(),
        }
    }

    /// Two nonzero vectors span the same line iff one is a scalar multiple of
    /// the other.
    pub fn same_line(&self, other: &FpVector) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        for c in 1..self.prime {
            if &self.scale(c) == other {
                return true;
            }
        }
        false
    }
}

/// Row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    pub prime: u32,
    pub rows: usize,
    pub cols: usize,
    /// rows * cols entries, row-major, each in [0, p).
    pub entries: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(prime: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { prime, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(prime: u32, n: usize) -> Self {
        let mut m = Self::zero(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.prime;
    }

    pub fn from_columns(prime: u32, rows: usize, cols: &[FpVector]) -> Self {
        let mut m = Self::zero(prime, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m.set(i, j, col.entries[i]);
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> FpVector {
        FpVector {
            prime: self.prime,
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &FpVector) -> FpVector {
        assert_eq!(v.len(), self.cols);
        let p = self.prime as u64;
        let mut out = vec![0u32; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc += self.get(i, j) as u64 * v.entries[j] as u64;
            }
            out[i] = (acc % p) as u32;
        }
        FpVector { prime: self.prime, entries: out }
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let p = self.prime as u64;
        let mut out = FpMatrix::zero(self.prime, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                }
                out.set(i, j, (acc % p) as u32);
            }
        }
        out
    }

    fn inv_mod(&self, a: u32) -> u32 {
        // p is prime and a != 0 mod p
        let mut result = 1u64;
        let mut base = a as u64 % self.prime as u64;
        let mut e = self.prime - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.prime as u64;
            }
            base = base * base % self.prime as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.prime;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let mut pivot_row = None;
            for r in row..m.rows {
                if m.get(r, col) != 0 {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            for c in 0..m.cols {
                let (a, b) = (m.get(row, c), m.get(pr, c));
                if row != pr {
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = m.inv_mod(m.get(row, col));
            for c in 0..m.cols {
                m.set(row, c, m.get(row, c) * inv % p);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let f = m.get(r, col);
                    for c in 0..m.cols {
                        let v = (m.get(r, c) + (p - f) * m.get(row, c)) % p;
                        m.set(r, c, v);
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

    /// Basis of the right kernel {v : Mv = 0}.
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = FpVector::zero(self.prime, self.cols);
            v.entries[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let coeff = r.get(i, free);
                v.entries[pc] = (self.prime - coeff) % self.prime;
            }
            basis.push(v);
        }
        basis
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> u32 {
        assert_eq!(self.rows, self.cols);
        let p = self.prime as u64;
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..m.cols {
            let mut pivot_row = None;
            for r in col..m.rows {
                if m.get(r, col) != 0 {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { return 0 };
            if pr != col {
                for c in 0..m.cols {
                    let (a, b) = (m.get(col, c), m.get(pr, c));
                    m.set(col, c, b);
                    m.set(pr, c, a);
                }
                det = det * (p - 1) % p;
            }
            let piv = m.get(col, col);
            det = det * piv as u64 % p;
            let inv = m.inv_mod(piv);
            for r in col + 1..m.rows {
                if m.get(r, col) != 0 {
                    let f = m.get(r, col) as u64 * inv as u64 % p;
                    for c in col..m.cols {
                        let v = (m.get(r, c) as u64 + (p - f) * m.get(col, c) as u64) % p;
                        m.set(r, c, v as u32);
                    }
                }
            }
        }
        det as u32
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det() != 0
    }
}

/// Incrementally maintained span of vectors mod p; used for greedy basis
/// extension and membership-in-span tests.
#[derive(Debug, Clone)]
pub struct FpSpan {
    prime: u32,
    dim: usize,
    /// Rows kept in echelon form; pivot column per row.
    rows: Vec<(usize, FpVector)>,
}

impl FpSpan {
    pub fn new(prime: u32, dim: usize) -> Self {
        FpSpan { prime, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &FpVector) -> FpVector {
        let p = self.prime;
        let mut w = v.clone();
        for (piv, row) in &self.rows {
            let c = w.entries[*piv];
            if c != 0 {
                w = w.add(&row.scale(p - c));
            }
        }
        w
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Fully reduces v modulo the span; the result has zeros at all pivot
    /// coordinates.
    pub fn reduce_vector(&self, v: &FpVector) -> FpVector {
        self.reduce(v)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Inserts v; returns true if the span grew.
    pub fn insert(&mut self, v: &FpVector) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(piv) = w.entries.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = FpMatrix::zero(self.prime, 1, 1).inv_mod(w.entries[piv]);
        w = w.scale(inv);
        for (_, row) in self.rows.iter_mut() {
            let c = row.entries[piv];
            if c != 0 {
                *row = row.add(&w.scale(self.prime - c));
            }
        }
        self.rows.push((piv, w));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }
}

/// Completes the given independent columns to a basis of F_p^dim using
/// standard basis vectors, greedily in index order.
pub fn complete_basis(prime: u32, dim: usize, start: &[FpVector]) -> Option<Vec<FpVector>> {
    let mut span = FpSpan::new(prime, dim);
    let mut basis = Vec::new();
    for v in start {
        if !span.insert(v) {
            return None; // dependent input
        }
        basis.push(v.clone());
    }
    for i in 0..dim {
        let mut e = FpVector::zero(prime, dim);
        e.entries[i] = 1;
        if span.insert(&e) {
            basis.push(e);
        }
    }
    if basis.len() == dim {
        Some(basis)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(prime: u32, rows: usize, cols: usize, data: &[u32]) -> FpMatrix {
        FpMatrix { prime, rows, cols, entries: data.to_vec() }
    }

    #[test]
    fn rank_and_kernel() {
        // over F_2: [[1,1,0],[0,0,0]] has rank 1, kernel dim 2
        let a = m(2, 2, 3, &[1, 1, 0, 0, 0, 0]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn det_invertibility() {
        let a = m(3, 2, 2, &[1, 2, 1, 1]);
        // det = 1*1 - 2*1 = -1 = 2 mod 3
        assert_eq!(a.det(), 2);
        assert!(a.is_invertible());
        let b = m(3, 2, 2, &[1, 2, 2, 1]);
        // det = 1 - 4 = -3 = 0 mod 3
        assert!(!b.is_invertible());
    }

    #[test]
    fn span_and_completion() {
        let v = FpVector::from_ints(2, &[1, 1]);
        let basis = complete_basis(2, 2, &[v.clone()]).unwrap();
        assert_eq!(basis.len(), 2);
        let m = FpMatrix::from_columns(2, 2, &basis);
        assert!(m.is_invertible());
        let mut s = FpSpan::new(2, 2);
        assert!(s.insert(&v));
        assert!(!s.insert(&v));
        assert!(s.contains(&v));
    }

    #[test]
    fn same_line_mod_3() {
        let a = FpVector::from_ints(3, &[1, 0]);
        let b = FpVector::from_ints(3, &[2, 0]);
        let c = FpVector::from_ints(3, &[1, 1]);
        assert!(a.same_line(&b));
        assert!(!a.same_line(&c));
    }
}
