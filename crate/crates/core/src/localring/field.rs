use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fp;
use crate::error::{Error, Result};

/// Finite-precision model of `O_F = W(F_{p^f0})[ζ_q]` where `W` is the unramified ring of
/// degree `f0` over `Z_p` and `π = ζ_q − 1` is the uniformizer (for `q = 1`, `π = p`).
///
/// Elements of `O_F` are stored as `Σ_{j<e} a_j π^j` with `a_j ∈ (Z/p^K)[y]/(g(y))`, where
/// `K = ⌈N/e⌉ + 1`. The extra `p`-digit absorbs the digit lost by each exact division by `π`.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    p: u64,
    q: u64,
    f0: usize,
    e: usize,
    precision: i64,
    p_digits: u32,
    modulus: u64,
    p_pows: Vec<u64>,
    unramified: Vec<u64>,
    eisenstein: Vec<u64>,
    p_over_pi: Vec<u64>,
}

/// Shared handle on a [`FieldDescriptor`]; cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Deref for Field {
    type Target = FieldDescriptor;
    fn deref(&self) -> &FieldDescriptor {
        &self.0
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "O_F(p={}, q={}, f0={}, e={}, N={})",
            self.p, self.q, self.f0, self.e, self.precision
        )
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `k` with `q = p^k`, or `None`.
pub(crate) fn p_power_exponent(p: u64, mut q: u64) -> Option<u32> {
    let mut k = 0;
    while q > 1 {
        if q % p != 0 {
            return None;
        }
        q /= p;
        k += 1;
    }
    (q == 1).then_some(k)
}

/// Euler totient of a prime power `q = p^k` (and `φ(1) = 1`).
pub fn totient_prime_power(p: u64, q: u64) -> u64 {
    if q == 1 {
        1
    } else {
        q / p * (p - 1)
    }
}

/// Builds the descriptor for `(p, q, f0, N)`.
///
/// `q` must be `1` or a power of `p` that is at least 3; `N ≥ 4·max(1, φ(q))`.
pub fn make_field(p: u64, q: u64, f0: usize, precision: i64) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::UnsupportedParameters(format!("p = {p} is not prime")));
    }
    if q == 2 {
        return Err(Error::UnsupportedParameters(
            "q = 2 (Serre/Labute relations) is not supported".into(),
        ));
    }
    if q == 0 || p_power_exponent(p, q).is_none() {
        return Err(Error::UnsupportedParameters(format!("q = {q} is not a power of p = {p}")));
    }
    if f0 == 0 {
        return Err(Error::UnsupportedParameters("f0 must be positive".into()));
    }
    let e = totient_prime_power(p, q) as usize;
    if precision < 4 * e as i64 {
        return Err(Error::UnsupportedParameters(format!(
            "precision N = {precision} is below 4·e = {}",
            4 * e
        )));
    }
    let p_digits = (precision as u64).div_ceil(e as u64) as u32 + 1;
    let mut p_pows = vec![1u64];
    for _ in 0..p_digits {
        let last = *p_pows.last().unwrap();
        match last.checked_mul(p) {
            Some(v) if v < (1u64 << 62) => p_pows.push(v),
            _ => {
                return Err(Error::UnsupportedParameters(format!(
                    "p^{p_digits} does not fit the 62-bit modulus; lower N"
                )))
            }
        }
    }
    let modulus = p_pows[p_digits as usize];
    let unramified = fp::first_irreducible(p, f0);

    let eisenstein = if q == 1 {
        vec![modulus - p, 1]
    } else {
        // Φ_q(1+x) = Σ_{j<p} (1+x)^{j·q/p}
        let step = q / p;
        let mut total = vec![0u64; e + 1];
        let mut power = vec![1u64];
        let mut one_plus_x_step = vec![1u64];
        for _ in 0..step {
            one_plus_x_step = int_poly_mul(&one_plus_x_step, &[1, 1], modulus);
        }
        for _ in 0..p {
            for (i, c) in power.iter().enumerate() {
                total[i] = (total[i] + c) % modulus;
            }
            power = int_poly_mul(&power, &one_plus_x_step, modulus);
        }
        total
    };
    debug_assert_eq!(eisenstein[e], 1);

    let mut fd = FieldDescriptor {
        p,
        q,
        f0,
        e,
        precision,
        p_digits,
        modulus,
        p_pows,
        unramified,
        eisenstein,
        p_over_pi: Vec::new(),
    };
    // π·(π^{e-1} + c_{e-1}π^{e-2} + … + c_1) = −c_0 = −p·u0, so p/π = −u0^{-1}(…)
    let u0_is_one = q != 1;
    let mut body = vec![0u64; e * f0];
    for j in 0..e {
        // coefficient of π^j in π^{e-1} + … + c_1 is c_{j+1}
        let c = fd.eisenstein[j + 1];
        let c = if u0_is_one { (modulus - c) % modulus } else { c };
        body[j * f0] = c;
    }
    fd.p_over_pi = body;
    Ok(Field(Arc::new(fd)))
}

fn int_poly_mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(*x, *y, m)) % m;
        }
    }
    out
}

#[inline]
fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn f0(&self) -> usize {
        self.f0
    }
    /// Ramification index, `φ(q)` for `q ≥ 3`.
    pub fn e(&self) -> usize {
        self.e
    }
    /// Working precision `N` in uniformizer digits.
    pub fn precision(&self) -> i64 {
        self.precision
    }
    /// Equality threshold `τ = ⌈3N/4⌉`.
    pub fn tau(&self) -> i64 {
        (3 * self.precision + 3) / 4
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// `v_π(p) = e`.
    pub fn valuation_of_p(&self) -> i64 {
        self.e as i64
    }
    pub fn residue_field_size(&self) -> u64 {
        self.p.pow(self.f0 as u32)
    }
    pub fn unramified_poly(&self) -> &[u64] {
        &self.unramified
    }
    pub fn eisenstein_poly(&self) -> &[u64] {
        &self.eisenstein
    }
    pub(crate) fn body_len(&self) -> usize {
        self.e * self.f0
    }

    /// True when `μ_{q+1} ⊂ F`, i.e. `(q+1) | p^{f0} − 1`.
    pub fn contains_zeta_q_plus_1(&self) -> bool {
        (self.residue_field_size() - 1) % (self.q + 1) == 0
    }

    fn w_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f0;
        let m = self.modulus;
        if f == 1 {
            return vec![mulm(a[0], b[0], m)];
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulm(*x, *y, m)) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..f {
                let sub = mulm(c, self.unramified[i], m);
                prod[k - f + i] = (prod[k - f + i] + m - sub) % m;
            }
        }
        prod.truncate(f);
        prod
    }

    pub(crate) fn body_zero(&self) -> Vec<u64> {
        vec![0; self.body_len()]
    }

    pub(crate) fn body_from_int(&self, v: i64) -> Vec<u64> {
        let mut b = self.body_zero();
        let m = self.modulus as i128;
        b[0] = (((v as i128) % m + m) % m) as u64;
        b
    }

    pub(crate) fn body_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    pub(crate) fn body_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.modulus - y) % self.modulus)
            .collect()
    }

    pub(crate) fn body_neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.modulus - x) % self.modulus).collect()
    }

    pub(crate) fn body_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (e, f, m) = (self.e, self.f0, self.modulus);
        let mut acc = vec![vec![0u64; f]; 2 * e - 1];
        for i in 0..e {
            let ai = &a[i * f..(i + 1) * f];
            if ai.iter().all(|c| *c == 0) {
                continue;
            }
            for j in 0..e {
                let bj = &b[j * f..(j + 1) * f];
                if bj.iter().all(|c| *c == 0) {
                    continue;
                }
                let p = self.w_mul(ai, bj);
                for (slot, v) in acc[i + j].iter_mut().zip(p) {
                    *slot = (*slot + v) % m;
                }
            }
        }
        for k in (e..2 * e - 1).rev() {
            let top = std::mem::replace(&mut acc[k], vec![0; f]);
            if top.iter().all(|c| *c == 0) {
                continue;
            }
            for i in 0..e {
                let c = self.eisenstein[i];
                if c == 0 {
                    continue;
                }
                for (slot, t) in acc[k - e + i].iter_mut().zip(&top) {
                    *slot = (*slot + m - mulm(*t, c, m)) % m;
                }
            }
        }
        acc.into_iter().take(e).flatten().collect()
    }

    pub(crate) fn body_mul_pi(&self, a: &[u64]) -> Vec<u64> {
        let (e, f, m) = (self.e, self.f0, self.modulus);
        if e == 1 {
            return a.iter().map(|c| mulm(*c, self.p, m)).collect();
        }
        let mut out = vec![0u64; e * f];
        out[f..].copy_from_slice(&a[..(e - 1) * f]);
        let top = &a[(e - 1) * f..];
        for i in 0..e {
            let c = self.eisenstein[i];
            for k in 0..f {
                out[i * f + k] = (out[i * f + k] + m - mulm(top[k], c, m)) % m;
            }
        }
        out
    }

    /// Exact division by `π`; the caller guarantees `v(a) ≥ 1`.
    pub(crate) fn body_div_pi(&self, a: &[u64]) -> Vec<u64> {
        let (e, f) = (self.e, self.f0);
        let mut rest = vec![0u64; e * f];
        rest[..(e - 1) * f].copy_from_slice(&a[f..]);
        let mut a0 = vec![0u64; e * f];
        for k in 0..f {
            debug_assert_eq!(a[k] % self.p, 0);
            a0[k] = a[k] / self.p;
        }
        let part = self.body_mul(&a0, &self.p_over_pi);
        self.body_add(&rest, &part)
    }

    fn vp(&self, c: u64) -> u32 {
        if c == 0 {
            return self.p_digits;
        }
        let mut k = 0;
        let mut c = c;
        while c % self.p == 0 {
            c /= self.p;
            k += 1;
        }
        k
    }

    /// `π`-adic valuation of a body, `None` for zero.
    pub(crate) fn body_val(&self, a: &[u64]) -> Option<i64> {
        let (e, f) = (self.e, self.f0);
        let mut best: Option<i64> = None;
        for j in 0..e {
            let coeffs = &a[j * f..(j + 1) * f];
            if coeffs.iter().all(|c| *c == 0) {
                continue;
            }
            let v = coeffs.iter().map(|c| self.vp(*c)).min().unwrap();
            let val = e as i64 * v as i64 + j as i64;
            best = Some(best.map_or(val, |b| b.min(val)));
        }
        best
    }

    /// Canonical representative of `a mod π^k`.
    pub(crate) fn body_truncate(&self, a: &[u64], k: i64) -> Vec<u64> {
        let (e, f) = (self.e, self.f0);
        let mut out = a.to_vec();
        for j in 0..e {
            let need = if k <= j as i64 {
                0
            } else {
                ((k - j as i64) as u64).div_ceil(e as u64).min(self.p_digits as u64)
            };
            let md = self.p_pows[need as usize];
            for c in out[j * f..(j + 1) * f].iter_mut() {
                *c %= md;
            }
        }
        out
    }

    /// Inverse of a unit body.
    pub(crate) fn body_inv_unit(&self, a: &[u64]) -> Vec<u64> {
        let f = self.f0;
        let res: Vec<u64> = a[..f].iter().map(|c| c % self.p).collect();
        let inv = fp::field_inv(&res, &self.unramified, self.p).expect("unit body");
        let mut y = self.body_zero();
        for (k, c) in inv.iter().enumerate() {
            y[k] = *c;
        }
        let two = self.body_from_int(2);
        let one = self.body_from_int(1);
        for _ in 0..64 {
            let ay = self.body_mul(a, &y);
            if ay == one {
                break;
            }
            y = self.body_mul(&y, &self.body_sub(&two, &ay));
        }
        y
    }

    /// Reduction of a body modulo `π`, as coefficients of `F_p[y]/(g)`.
    pub(crate) fn body_residue(&self, a: &[u64]) -> Vec<u64> {
        a[..self.f0].iter().map(|c| c % self.p).collect()
    }

    pub(crate) fn pi_body(&self) -> Vec<u64> {
        let mut b = self.body_from_int(1);
        b = self.body_mul_pi(&b);
        b
    }

    pub fn to_repr(&self) -> FieldRepr {
        FieldRepr {
            p: self.p,
            q: self.q,
            f0: self.f0,
            e: self.e,
            precision: self.precision,
            unramified: self.unramified.iter().map(u64::to_string).collect(),
            eisenstein: self.eisenstein.iter().map(u64::to_string).collect(),
        }
    }
}

/// Serialized form of a [`FieldDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRepr {
    pub p: u64,
    pub q: u64,
    pub f0: usize,
    pub e: usize,
    #[serde(rename = "N")]
    pub precision: i64,
    pub unramified: Vec<String>,
    pub eisenstein: Vec<String>,
}

impl FieldRepr {
    /// Rebuilds the field and checks that the stored polynomials match.
    pub fn build(&self) -> Result<Field> {
        let field = make_field(self.p, self.q, self.f0, self.precision)?;
        if field.to_repr() != *self {
            return Err(Error::Malformed("field polynomials do not match the parameters".into()));
        }
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_cyclotomic_eisenstein() {
        let f = make_field(3, 3, 1, 32).unwrap();
        assert_eq!(f.e(), 2);
        let m = f.modulus();
        // π^2 + 3π + 3
        assert_eq!(f.eisenstein_poly(), &[3, 3, 1]);
        assert!(m >= 3u64.pow(16));
        assert_eq!(f.valuation_of_p(), 2);
    }

    #[test]
    fn unramified_base() {
        let f = make_field(5, 1, 1, 16).unwrap();
        assert_eq!(f.e(), 1);
        assert_eq!(f.eisenstein_poly()[1], 1);
    }

    #[test]
    fn rejects_q_two_and_non_powers() {
        assert!(matches!(make_field(3, 2, 1, 32), Err(Error::UnsupportedParameters(_))));
        assert!(matches!(make_field(3, 6, 1, 32), Err(Error::UnsupportedParameters(_))));
        assert!(matches!(make_field(4, 4, 1, 32), Err(Error::UnsupportedParameters(_))));
        assert!(matches!(make_field(5, 5, 1, 8), Err(Error::UnsupportedParameters(_))));
    }

    #[test]
    fn zeta_q_plus_one_predicate() {
        assert!(!make_field(3, 3, 1, 32).unwrap().contains_zeta_q_plus_1());
        assert!(make_field(3, 3, 2, 32).unwrap().contains_zeta_q_plus_1());
        assert!(make_field(5, 5, 2, 32).unwrap().contains_zeta_q_plus_1());
    }

    #[test]
    fn division_by_pi_inverts_multiplication() {
        for (p, q, f0, n) in [(3, 3, 1, 40), (3, 9, 2, 40), (5, 5, 1, 40), (5, 1, 2, 24)] {
            let fld = make_field(p, q, f0, n).unwrap();
            let mut b = fld.body_zero();
            for (i, c) in b.iter_mut().enumerate() {
                *c = (7 * i as u64 + 3) % fld.modulus();
            }
            let back = fld.body_div_pi(&fld.body_mul_pi(&b));
            let n = fld.precision();
            assert_eq!(fld.body_truncate(&back, n), fld.body_truncate(&b, n));
        }
    }
}
