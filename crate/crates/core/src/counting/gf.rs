use crate::error::{Error, Result};
use crate::localring::fp;
use crate::localring::is_prime;

/// The finite field `F_{p^m}` with elements encoded as integers `< p^m` (base-`p`
/// digits are polynomial coefficients) and full lookup tables.
#[derive(Clone, Debug)]
pub struct Gf {
    p: u64,
    m: u32,
    size: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Largest field we build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 12;

impl Gf {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) || m == 0 {
            return Err(Error::UnsupportedParameters(format!("F_{{{p}^{m}}} is not a field")));
        }
        let size = p
            .checked_pow(m)
            .filter(|s| *s <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::BudgetExceeded(format!("field {p}^{m} is too large")))?;
        let g = fp::first_irreducible(p, m as usize);
        let digits = |mut x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(m as usize);
            for _ in 0..m {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |v: &[u64]| -> u32 { v.iter().rev().fold(0u64, |acc, d| acc * p + d) as u32 };
        let s = size as usize;
        let mut add = vec![0u32; s * s];
        let mut mul = vec![0u32; s * s];
        for a in 0..size {
            let da = digits(a);
            for b in 0..size {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * size + b) as usize] = encode(&sum);
                let mut prod = fp::mulmod(&da, &db, &g, p);
                prod.resize(m as usize, 0);
                mul[(a * size + b) as usize] = encode(&prod);
            }
        }
        let mut neg = vec![0u32; s];
        let mut inv = vec![0u32; s];
        for a in 0..s {
            for b in 0..s {
                if add[a * s + b] == 0 {
                    neg[a] = b as u32;
                }
                if mul[a * s + b] == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        Ok(Self { p, m, size: size as u32, add, mul, neg, inv })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0) = 0`.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
}

/// Square matrices over a [`Gf`], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GfMat {
    pub n: usize,
    pub data: Vec<u32>,
}

impl GfMat {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// The matrix whose entries are the base-`|F|` digits of `index`.
    pub fn from_index(n: usize, size: u32, mut index: u64) -> Self {
        let data = (0..n * n)
            .map(|_| {
                let d = (index % size as u64) as u32;
                index /= size as u64;
                d
            })
            .collect();
        Self { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Self, f: &Gf) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Self, f: &Gf) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(*a, *b)).collect() }
    }

    pub fn scale(&self, c: u32, f: &Gf) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| f.mul(c, *a)).collect() }
    }

    pub fn pow(&self, mut e: u64, f: &Gf) -> Self {
        let mut r = Self::identity(self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        r
    }

    /// `Σ c_i M^i`, coefficients low to high.
    pub fn eval_poly(&self, coeffs: &[u32], f: &Gf) -> Self {
        let mut acc = Self::zero(self.n);
        let id = Self::identity(self.n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self, f).add(&id.scale(*c, f), f);
        }
        acc
    }

    pub fn det(&self, f: &Gf) -> u32 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1;
        for k in 0..n {
            let Some(piv) = (k..n).find(|i| a[i * n + k] != 0) else { return 0 };
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                det = f.neg(det);
            }
            let pk = a[k * n + k];
            det = f.mul(det, pk);
            let pinv = f.inv(pk);
            for i in k + 1..n {
                let c = f.mul(a[i * n + k], pinv);
                if c == 0 {
                    continue;
                }
                for j in k..n {
                    a[i * n + j] = f.sub(a[i * n + j], f.mul(c, a[k * n + j]));
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, f: &Gf) -> bool {
        self.det(f) != 0
    }

    pub fn rank(&self, f: &Gf) -> usize {
        rank_of(self.n, self.n, self.data.clone(), f)
    }
}

/// Rank of a `rows × cols` matrix given row-major.
pub fn rank_of(rows: usize, cols: usize, mut a: Vec<u32>, f: &Gf) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|i| a[i * cols + c] != 0) else { continue };
        for j in 0..cols {
            a.swap(r * cols + j, piv * cols + j);
        }
        let pinv = f.inv(a[r * cols + c]);
        for i in 0..rows {
            if i == r || a[i * cols + c] == 0 {
                continue;
            }
            let k = f.mul(a[i * cols + c], pinv);
            for j in 0..cols {
                a[i * cols + j] = f.sub(a[i * cols + j], f.mul(k, a[r * cols + j]));
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Basis of the null space of a `rows × cols` matrix (row-major).
pub fn null_space(rows: usize, cols: usize, mut a: Vec<u32>, f: &Gf) -> Vec<Vec<u32>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|i| a[i * cols + c] != 0) else { continue };
        for j in 0..cols {
            a.swap(r * cols + j, piv * cols + j);
        }
        let pinv = f.inv(a[r * cols + c]);
        for j in 0..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], pinv);
        }
        for i in 0..rows {
            if i == r || a[i * cols + c] == 0 {
                continue;
            }
            let k = a[i * cols + c];
            for j in 0..cols {
                a[i * cols + j] = f.sub(a[i * cols + j], f.mul(k, a[r * cols + j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[row * cols + fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, m) in [(2, 3), (3, 2), (5, 1), (3, 3)] {
            let f = Gf::new(p, m).unwrap();
            let s = f.size();
            for a in 0..s {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.pow(a, s as u64 - 1), 1);
                }
                for b in 0..s {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn gl2_f3_has_48_elements() {
        let f = Gf::new(3, 1).unwrap();
        let count = (0..81).filter(|i| GfMat::from_index(2, 3, *i).is_invertible(&f)).count();
        assert_eq!(count, 48);
    }

    #[test]
    fn null_space_dimension() {
        let f = Gf::new(5, 1).unwrap();
        let a = vec![1, 2, 3, 2, 4, 1];
        let ns = null_space(2, 3, a.clone(), &f);
        assert_eq!(ns.len(), 3 - rank_of(2, 3, a.clone(), &f));
        for v in ns {
            for r in 0..2 {
                let s = (0..3).fold(0, |acc, j| f.add(acc, f.mul(a[r * 3 + j], v[j])));
                assert_eq!(s, 0);
            }
        }
    }
}
