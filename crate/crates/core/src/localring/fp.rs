//! Dense polynomials over a prime field `F_p`, coefficients stored low to high.

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo `g` (`g` nonzero).
pub(crate) fn rem(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    let mut g = g.to_vec();
    trim(&mut g);
    trim(&mut r);
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p);
    while r.len() > dg {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let off = top - dg;
        for (i, gi) in g.iter().enumerate() {
            r[off + i] = (r[off + i] + p - c * gi % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), g, p)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y % p) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn powmod(base: &[u64], mut e: u128, g: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, g, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, g, p);
        }
        b = mulmod(&b, &b, g, p);
        e >>= 1;
    }
    rem(&result, g, p)
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `g` over `F_p`.
pub(crate) fn is_irreducible(g: &[u64], p: u64) -> bool {
    let deg = g.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let frob = |k: usize| powmod(&x, (p as u128).pow(k as u32), g, p);
    if sub(&frob(deg), &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(deg)
        .into_iter()
        .all(|r| gcd(g, &sub(&frob(deg / r), &x, p), p) == vec![1])
}

/// The lexicographically first monic irreducible polynomial of degree `deg` over `F_p`.
pub(crate) fn first_irreducible(p: u64, deg: usize) -> Vec<u64> {
    if deg == 1 {
        return vec![0, 1];
    }
    let total = (p as u128).pow(deg as u32);
    for idx in 0..total {
        let mut g = Vec::with_capacity(deg + 1);
        let mut k = idx;
        for _ in 0..deg {
            g.push((k % p as u128) as u64);
            k /= p as u128;
        }
        g.push(1);
        if g[0] != 0 && is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Inverse in `F_p[y]/(g)` for irreducible `g`; `None` for zero.
pub(crate) fn field_inv(a: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
    let a = rem(a, g, p);
    if a.is_empty() {
        return None;
    }
    let order = (p as u128).pow((g.len() - 1) as u32);
    Some(powmod(&a, order - 2, g, p))
}
