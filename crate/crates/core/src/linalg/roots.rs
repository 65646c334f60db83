//! Roots in `O_F` of polynomials with integral coefficients (listed low to high).

use crate::error::{Error, Result};
use crate::localring::{Field, LocalElement};

pub fn eval(coeffs: &[LocalElement], x: &LocalElement) -> LocalElement {
    let mut acc = LocalElement::zero(x.field());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn derivative(coeffs: &[LocalElement]) -> Vec<LocalElement> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&LocalElement::from_int(c.field(), i as i64)))
        .collect()
}

/// Synthetic division by `(x − a)`: returns the quotient and remainder.
pub fn divide_linear(coeffs: &[LocalElement], a: &LocalElement) -> (Vec<LocalElement>, LocalElement) {
    let d = coeffs.len() - 1;
    let mut q = vec![LocalElement::zero(a.field()); d];
    let mut carry = coeffs[d].clone();
    for i in (0..d).rev() {
        q[i] = carry.clone();
        carry = coeffs[i].add(&carry.mul(a));
    }
    (q, carry)
}

/// Coefficients of `h(a + x)`.
pub fn taylor_shift(coeffs: &[LocalElement], a: &LocalElement) -> Vec<LocalElement> {
    let mut out = Vec::with_capacity(coeffs.len());
    let mut cur = coeffs.to_vec();
    while !cur.is_empty() {
        if cur.len() == 1 {
            out.push(cur[0].clone());
            break;
        }
        let (q, r) = divide_linear(&cur, a);
        out.push(r);
        cur = q;
    }
    out
}

/// Multiplicity of `a` as a root of `h` at the given threshold.
pub fn root_multiplicity(coeffs: &[LocalElement], a: &LocalElement, threshold: i64) -> usize {
    let mut cur = coeffs.to_vec();
    let mut m = 0;
    while cur.len() > 1 {
        let (q, r) = divide_linear(&cur, a);
        if r.valuation_lower_bound() < threshold {
            break;
        }
        m += 1;
        cur = q;
    }
    m
}

/// Lifts (digits in `[0, p)`) of all elements of the residue field `F_{p^f0}`.
pub fn residue_lifts(field: &Field) -> Vec<LocalElement> {
    let p = field.p() as i64;
    let f = field.f0();
    let total = (p as u64).pow(f as u32);
    (0..total)
        .map(|mut k| {
            let digits: Vec<i64> = (0..f)
                .map(|_| {
                    let d = (k % p as u64) as i64;
                    k /= p as u64;
                    d
                })
                .collect();
            LocalElement::from_coords(field, &[digits])
        })
        .collect()
}

fn newton(h: &[LocalElement], x0: &LocalElement) -> Option<LocalElement> {
    let dh = derivative(h);
    let mut x = x0.clone();
    let d0 = eval(&dh, &x);
    let v0 = eval(h, &x);
    let dv = d0.valuation()?;
    if !v0.is_zero() && v0.valuation_lower_bound() <= 2 * dv {
        return None;
    }
    for _ in 0..64 {
        let hx = eval(h, &x);
        if hx.is_zero() {
            return Some(x);
        }
        let step = hx.div(&eval(&dh, &x)).ok()?;
        if step.is_zero() {
            return Some(x);
        }
        // the residual tracks the error, so the iterate is kept as an exact representative
        x = x.sub(&step).promote();
    }
    Some(x)
}

fn search(
    orig: &[LocalElement],
    h: Vec<LocalElement>,
    center: &LocalElement,
    depth: i64,
    lifts: &[LocalElement],
    out: &mut Vec<(LocalElement, usize)>,
) {
    let field = center.field().clone();
    let n = field.precision();
    for r in lifts {
        let m = root_multiplicity(&h, r, 1);
        if m == 0 {
            continue;
        }
        let x = center.add(&LocalElement::pi_pow(&field, depth).mul(r));
        if m == 1 {
            if let Some(root) = newton(orig, &x) {
                out.push((root, 1));
                continue;
            }
        }
        let pi = LocalElement::pi(&field);
        let mut scale = LocalElement::one(&field);
        let shifted: Vec<LocalElement> = taylor_shift(&h, r)
            .into_iter()
            .map(|c| {
                let v = c.mul(&scale);
                scale = scale.mul(&pi);
                v
            })
            .collect();
        let content = shifted.iter().map(LocalElement::valuation_lower_bound).min().unwrap_or(n);
        let low = &shifted[..m.min(shifted.len())];
        let blurred = low.iter().any(|c| c.is_zero() && c.absolute_precision() <= content);
        if low.iter().all(LocalElement::is_zero) || blurred || depth + 1 >= n {
            out.push((x, m));
            continue;
        }
        let next: Vec<LocalElement> = shifted.iter().map(|c| c.div_pi_pow(content)).collect();
        search(orig, next, &x, depth + 1, lifts, out);
    }
}

/// Roots of `h` in `O_F` with multiplicities. Roots are determined only to the
/// precision the coefficients allow; clustered roots are returned once with their
/// combined multiplicity.
pub fn roots_in_ring(coeffs: &[LocalElement]) -> Result<Vec<(LocalElement, usize)>> {
    let field = coeffs
        .first()
        .ok_or_else(|| Error::Malformed("empty polynomial".into()))?
        .field()
        .clone();
    if coeffs.iter().any(|c| !c.is_integral()) {
        return Err(Error::NotIntegral);
    }
    if coeffs.len() < 2 || !coeffs.last().unwrap().is_unit() {
        return Err(Error::UnsupportedParameters("polynomial must have a unit leading coefficient".into()));
    }
    let lifts = residue_lifts(&field);
    let mut out = Vec::new();
    search(coeffs, coeffs.to_vec(), &LocalElement::zero(&field), 0, &lifts, &mut out);
    Ok(out)
}
