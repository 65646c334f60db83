//! Point counts of `M(n, q+1) = {(X, Y) ∈ GL_n² : X Y X⁻¹ = Y^{q+1}}` over finite fields
//! and the rings `Z/p^k`.

mod classes;
mod gf;

pub use classes::{
    centralizer_order, enumerate_classes, gl_order, irreducibles, representative, ClassData,
    Classifier,
};
pub use gf::{null_space, rank_of, Gf, GfMat};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localring::{is_prime, p_power_exponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    /// Largest kernel dimension enumerated directly.
    pub kernel_cap: u32,
    /// Upper bound on `|F|^{n²}` for the class-sum counter.
    pub field_budget: u128,
    /// Upper bound on the number of pairs tried by exhaustive counters.
    pub brute_budget: u128,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { kernel_cap: 6, field_budget: 100_000_000, brute_budget: 100_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClassSum,
    BruteForce,
    RingBruteForce,
}

fn check_q(p: u64, q: u64) -> Result<()> {
    if q == 0 || p_power_exponent(p, q).is_none() {
        return Err(Error::UnsupportedParameters(format!("q = {q} is not a power of p = {p}")));
    }
    Ok(())
}

/// Invertible solutions `X` of `X·Y = Z·X` for a fixed pair, with `Z = Y^{q+1}`, found
/// by enumerating the kernel of `X ↦ XY − ZX`. `None` if the kernel exceeds the cap.
fn inner_by_kernel(y: &GfMat, z: &GfMat, f: &Gf, cap: u32) -> Option<u128> {
    let n = y.n;
    let dim = n * n;
    // row (i,j) of the linear system, column (k,l) for the unknown X_kl
    let mut a = vec![0u32; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let row = (i * n + j) * dim;
            for l in 0..n {
                // (XY)_ij = Σ_l X_il Y_lj
                let c = row + i * n + l;
                a[c] = f.add(a[c], y.get(l, j));
            }
            for k in 0..n {
                // (ZX)_ij = Σ_k Z_ik X_kj
                let c = row + k * n + j;
                a[c] = f.sub(a[c], z.get(i, k));
            }
        }
    }
    let basis = null_space(dim, dim, a, f);
    if basis.len() as u32 > cap {
        return None;
    }
    let s = f.size() as u64;
    let total = s.pow(basis.len() as u32);
    let mut count = 0u128;
    let mut x = GfMat::zero(n);
    for idx in 0..total {
        let mut rest = idx;
        x.data.iter_mut().for_each(|v| *v = 0);
        for b in &basis {
            let c = (rest % s) as u32;
            rest /= s;
            if c == 0 {
                continue;
            }
            for (v, bv) in x.data.iter_mut().zip(b) {
                *v = f.add(*v, f.mul(c, *bv));
            }
        }
        if x.is_invertible(f) {
            count += 1;
        }
    }
    Some(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassContribution {
    pub class_size: u128,
    pub inner: u128,
    /// Whether the inner count came from kernel enumeration (otherwise from the
    /// coset identity `|{X : XYX⁻¹ = Z}| = |C(Y)|` when `Z ~ Y`).
    pub enumerated: bool,
}

/// Per-class contributions to the pair count over `F_{p^m}`.
pub fn class_contributions(n: usize, p: u64, m: u32, q: u64, opts: &CountOptions) -> Result<Vec<ClassContribution>> {
    check_q(p, q)?;
    if n == 0 || n > classes::MAX_CLASS_DIMENSION {
        return Err(Error::UnsupportedParameters(format!("class enumeration supports 1 ≤ n ≤ 3, got {n}")));
    }
    let f = Gf::new(p, m)?;
    let size = f.size() as u128;
    if size.checked_pow((n * n) as u32).map_or(true, |v| v > opts.field_budget) {
        return Err(Error::BudgetExceeded(format!("|F|^(n²) = {size}^{} exceeds the budget", n * n)));
    }
    let gl = gl_order(n, size);
    let classifier = Classifier::new(&f, n);
    let classes = enumerate_classes(&f, n);
    Ok(classes
        .par_iter()
        .map(|c| {
            let y = representative(c, n, &f);
            let z = y.pow(q + 1, &f);
            let cent = centralizer_order(c, size);
            let class_size = gl / cent;
            match inner_by_kernel(&y, &z, &f, opts.kernel_cap) {
                Some(inner) => ClassContribution { class_size, inner, enumerated: true },
                None => {
                    let inner = if classifier.class_of(&z, &f) == *c { cent } else { 0 };
                    ClassContribution { class_size, inner, enumerated: false }
                }
            }
        })
        .collect())
}

/// Exact `|M(n, q+1)(F_{p^m})|` as a sum over conjugacy classes of `Y`.
pub fn count_pairs_field(n: usize, p: u64, m: u32, q: u64, opts: &CountOptions) -> Result<u128> {
    Ok(class_contributions(n, p, m, q, opts)?.iter().map(|c| c.class_size * c.inner).sum())
}

/// Exhaustive count over all pairs of invertible matrices.
pub fn count_pairs_bruteforce(n: usize, p: u64, m: u32, q: u64, opts: &CountOptions) -> Result<u128> {
    check_q(p, q)?;
    let f = Gf::new(p, m)?;
    let size = f.size() as u128;
    let gl = gl_order(n, size);
    if gl.checked_mul(gl).map_or(true, |v| v > opts.brute_budget) {
        return Err(Error::BudgetExceeded(format!("|GL_{n}|² = {gl}² exceeds the budget")));
    }
    let all = size.pow((n * n) as u32) as u64;
    let mats: Vec<GfMat> = (0..all)
        .map(|i| GfMat::from_index(n, f.size(), i))
        .filter(|x| x.is_invertible(&f))
        .collect();
    let count = mats
        .par_iter()
        .map(|y| {
            let z = y.pow(q + 1, &f);
            mats.iter().filter(|x| x.mul(y, &f) == z.mul(x, &f)).count() as u128
        })
        .sum();
    Ok(count)
}

fn ring_det_is_unit(a: &[u64], n: usize, p: u64) -> bool {
    // invertible over Z/p^k iff invertible mod p
    let f = Gf::new(p, 1).expect("p is prime");
    let m = GfMat { n, data: a.iter().map(|x| (x % p) as u32).collect() };
    m.is_invertible(&f)
}

fn ring_mul(a: &[u64], b: &[u64], n: usize, modulus: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).fold(0, |acc, k| (acc + a[i * n + k] * b[k * n + j]) % modulus);
        }
    }
    out
}

/// Exhaustive count of pairs over `Z/p^k`.
pub fn count_pairs_ring(n: usize, p: u64, k: u32, q: u64, opts: &CountOptions) -> Result<u128> {
    if !is_prime(p) || k == 0 || n == 0 {
        return Err(Error::UnsupportedParameters(format!("Z/{p}^{k} with n = {n}")));
    }
    check_q(p, q)?;
    let modulus = p.pow(k);
    let entries = (modulus as u128).checked_pow((n * n) as u32);
    if entries.and_then(|e| e.checked_mul(e)).map_or(true, |v| v > opts.brute_budget) {
        return Err(Error::BudgetExceeded(format!("(p^k)^(2n²) for p={p}, k={k}, n={n} exceeds the budget")));
    }
    let all = entries.unwrap() as u64;
    let mats: Vec<Vec<u64>> = (0..all)
        .map(|mut i| {
            (0..n * n)
                .map(|_| {
                    let d = i % modulus;
                    i /= modulus;
                    d
                })
                .collect::<Vec<u64>>()
        })
        .filter(|a| ring_det_is_unit(a, n, p))
        .collect();
    let count = mats
        .par_iter()
        .map(|y| {
            let mut z = y.clone();
            for _ in 0..q {
                z = ring_mul(&z, y, n, modulus);
            }
            mats.iter().filter(|x| ring_mul(x, y, n, modulus) == ring_mul(&z, x, n, modulus)).count() as u128
        })
        .sum();
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub target: f64,
    /// `(|F|, log_{|F|} count)` in increasing field size.
    pub slopes: Vec<(u64, f64)>,
    pub insufficient_data: bool,
    /// Every slope lies in `[n² − 1, n² + 1]`.
    pub within_band: bool,
    /// `|slope − n²|` is non-increasing as the field grows.
    pub monotone_approach: bool,
}

pub fn dimension_slope(n: usize, counts: &[(u64, u128)]) -> SlopeReport {
    let target = (n * n) as f64;
    let mut sorted = counts.to_vec();
    sorted.sort_by_key(|c| c.0);
    let slopes: Vec<(u64, f64)> =
        sorted.iter().map(|(s, c)| (*s, (*c as f64).ln() / (*s as f64).ln())).collect();
    let insufficient_data = slopes.len() < 2;
    let within_band = slopes.iter().all(|(_, s)| (s - target).abs() <= 1.0);
    let monotone_approach = !insufficient_data
        && slopes.windows(2).all(|w| (w[1].1 - target).abs() <= (w[0].1 - target).abs());
    SlopeReport { target, slopes, insufficient_data, within_band, monotone_approach }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub structure: String,
    pub size: u64,
    pub count: u128,
    pub slope: f64,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub q: u64,
    pub rows: Vec<CountRow>,
    pub slope: Option<SlopeReport>,
}

/// Counts over `F_{p^m}` for each `m`, plus the slope trend.
pub fn field_report(n: usize, p: u64, ms: &[u32], q: u64, opts: &CountOptions) -> Result<CountReport> {
    let mut rows = Vec::new();
    for &m in ms {
        let count = count_pairs_field(n, p, m, q, opts)?;
        let size = p.pow(m);
        rows.push(CountRow {
            structure: format!("F_{size}"),
            size,
            count,
            slope: (count as f64).ln() / (size as f64).ln(),
            method: Method::ClassSum,
        });
    }
    let slope = Some(dimension_slope(n, &rows.iter().map(|r| (r.size, r.count)).collect::<Vec<_>>()));
    Ok(CountReport { n, q, rows, slope })
}
