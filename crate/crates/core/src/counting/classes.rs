//! Conjugacy classes of `GL_n(F)` for `n ≤ 3` through elementary divisors.

use std::collections::BTreeMap;

use super::gf::{Gf, GfMat};

/// Monic polynomial over a [`Gf`], coefficients low to high.
pub type Poly = Vec<u32>;

/// Elementary divisor data: each irreducible `φ` with the partition (descending) of
/// exponents of `φ` among the elementary divisors.
pub type ClassData = Vec<(Poly, Vec<usize>)>;

pub const MAX_CLASS_DIMENSION: usize = 3;

fn poly_mul(a: &[u32], b: &[u32], f: &Gf) -> Poly {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    out
}

fn poly_pow(a: &[u32], e: usize, f: &Gf) -> Poly {
    (0..e).fold(vec![1], |acc, _| poly_mul(&acc, a, f))
}

fn has_root(a: &[u32], f: &Gf) -> bool {
    (0..f.size()).any(|x| a.iter().rev().fold(0, |acc, c| f.add(f.mul(acc, x), *c)) == 0)
}

/// Monic irreducible polynomials of degree `1..=max_degree` (at most 3) with nonzero
/// constant term.
pub fn irreducibles(f: &Gf, max_degree: usize) -> Vec<Poly> {
    assert!(max_degree <= MAX_CLASS_DIMENSION);
    let s = f.size() as u64;
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for idx in 0..s.pow(d as u32) {
            let mut c: Poly = (0..d)
                .scan(idx, |st, _| {
                    let v = (*st % s) as u32;
                    *st /= s;
                    Some(v)
                })
                .collect();
            c.push(1);
            if c[0] == 0 {
                continue;
            }
            if d == 1 || !has_root(&c, f) {
                out.push(c);
            }
        }
    }
    out
}

fn partitions(k: usize, max_part: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=k.min(max_part)).rev() {
        for mut rest in partitions(k - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All conjugacy classes of `GL_n(F)`.
pub fn enumerate_classes(f: &Gf, n: usize) -> Vec<ClassData> {
    assert!(n <= MAX_CLASS_DIMENSION);
    let irr = irreducibles(f, n);
    let mut out = Vec::new();
    let mut current: ClassData = Vec::new();
    fn go(irr: &[Poly], start: usize, remaining: usize, current: &mut ClassData, out: &mut Vec<ClassData>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..irr.len() {
            let d = irr[i].len() - 1;
            for size in 1..=remaining / d {
                for part in partitions(size, size) {
                    current.push((irr[i].clone(), part));
                    go(irr, i + 1, remaining - d * size, current, out);
                    current.pop();
                }
            }
        }
    }
    go(&irr, 0, n, &mut current, &mut out);
    out
}

fn companion(h: &[u32], f: &Gf) -> GfMat {
    let k = h.len() - 1;
    let mut m = GfMat::zero(k);
    for i in 1..k {
        m.data[i * k + i - 1] = 1;
    }
    for i in 0..k {
        m.data[i * k + k - 1] = f.neg(h[i]);
    }
    m
}

/// Block-diagonal representative built from companion matrices of `φ^{λ_i}`.
pub fn representative(class: &ClassData, n: usize, f: &Gf) -> GfMat {
    let mut m = GfMat::zero(n);
    let mut off = 0;
    for (phi, part) in class {
        for &e in part {
            let c = companion(&poly_pow(phi, e, f), f);
            for i in 0..c.n {
                for j in 0..c.n {
                    m.data[(off + i) * n + off + j] = c.get(i, j);
                }
            }
            off += c.n;
        }
    }
    assert_eq!(off, n);
    m
}

pub fn gl_order(n: usize, q: u128) -> u128 {
    let mut o = q.pow((n * (n - 1) / 2) as u32);
    for k in 1..=n as u32 {
        o *= q.pow(k) - 1;
    }
    o
}

fn conjugate(part: &[usize]) -> Vec<usize> {
    let top = part.first().copied().unwrap_or(0);
    (1..=top).map(|j| part.iter().filter(|x| **x >= j).count()).collect()
}

/// Order of the centralizer of any matrix in the class.
pub fn centralizer_order(class: &ClassData, q: u128) -> u128 {
    let mut total = 1u128;
    for (phi, part) in class {
        let qq = q.pow((phi.len() - 1) as u32);
        let conj = conjugate(part);
        let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
        for x in part {
            *mult.entry(*x).or_default() += 1;
        }
        let sq: u32 = conj.iter().map(|x| (x * x) as u32).sum();
        let tri: u32 = mult.values().map(|m| m * (m + 1) / 2).sum();
        let mut c = qq.pow(sq - tri);
        for m in mult.values() {
            for k in 1..=*m {
                c *= qq.pow(k) - 1;
            }
        }
        total *= c;
    }
    total
}

/// Computes the class of a matrix from ranks of `φ(Y)^k`.
#[derive(Clone, Debug)]
pub struct Classifier {
    n: usize,
    irr: Vec<Poly>,
}

impl Classifier {
    pub fn new(f: &Gf, n: usize) -> Self {
        Self { n, irr: irreducibles(f, n) }
    }

    pub fn class_of(&self, y: &GfMat, f: &Gf) -> ClassData {
        let n = self.n;
        let mut out = Vec::new();
        for phi in &self.irr {
            let d = phi.len() - 1;
            let a = y.eval_poly(phi, f);
            let mut power = GfMat::identity(n);
            let mut nullities = vec![0usize];
            for _ in 0..n / d {
                power = power.mul(&a, f);
                nullities.push((n - power.rank(f)) / d);
            }
            if nullities[1] == 0 {
                continue;
            }
            let r: Vec<usize> = nullities.windows(2).map(|w| w[1] - w[0]).filter(|x| *x > 0).collect();
            let part: Vec<usize> = (1..=r[0]).map(|j| r.iter().filter(|x| **x >= j).count()).collect();
            out.push((phi.clone(), part));
        }
        out
    }
}
