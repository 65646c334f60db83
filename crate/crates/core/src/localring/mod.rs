//! Fixed-precision arithmetic in `O_F = W(F_{p^f0})[ζ_q]` and its fraction field.

mod element;
mod field;
pub(crate) mod fp;

pub use element::{ElementRepr, LocalElement, Residue};
pub use field::{make_field, totient_prime_power, Field, FieldDescriptor, FieldRepr};
pub(crate) use field::{is_prime, p_power_exponent};

use crate::error::{Error, Result};

/// The fixed primitive `q`-th root of unity `ζ = 1 + π`.
pub fn primitive_root(field: &Field) -> LocalElement {
    if field.q() == 1 {
        return LocalElement::one(field);
    }
    LocalElement::one(field).add(&LocalElement::pi(field))
}

/// `[ζ^0, ζ^1, …, ζ^{q−1}]` for the fixed primitive root `ζ`.
pub fn enumerate_mu_q(field: &Field) -> Vec<LocalElement> {
    let zeta = primitive_root(field);
    let mut out = Vec::with_capacity(field.q() as usize);
    let mut cur = LocalElement::one(field);
    for _ in 0..field.q() {
        out.push(cur.clone());
        cur = cur.mul(&zeta);
    }
    out
}

fn ceil_log2(n: i64) -> u32 {
    64 - ((n.max(1) - 1) as u64).leading_zeros()
}

/// Index `k` such that `x = ζ^k` exactly (after snapping), if `x` lies within the Hensel
/// disc of a unique root of unity in `μ_q`.
pub fn mu_q_index(x: &LocalElement) -> Result<usize> {
    let field = x.field();
    let roots = enumerate_mu_q(field);
    let mut separation = i64::MIN;
    for (i, a) in roots.iter().enumerate() {
        for b in roots.iter().skip(i + 1) {
            separation = separation.max(a.sub(b).valuation_lower_bound());
        }
    }
    let mut best: Option<(usize, i64)> = None;
    let mut tie = false;
    for (k, r) in roots.iter().enumerate() {
        let v = x.sub(r).valuation_lower_bound();
        match best {
            Some((_, bv)) if v < bv => {}
            Some((_, bv)) if v == bv => tie = true,
            _ => {
                best = Some((k, v));
                tie = false;
            }
        }
    }
    match best {
        Some((k, v)) if !tie && v > separation => Ok(k),
        _ => Err(Error::PrecisionExhausted(
            "element is not within a unique μ_q residue disc".into(),
        )),
    }
}

/// Newton-lifts an approximate `q`-th root of unity `x0` to the exact root it approximates.
///
/// `q` must divide the field's `q`. Requires `v(x0^q − 1) ≥ 2·v(q) + 1`.
pub fn hensel_lift_unity(x0: &LocalElement, q: u64) -> Result<LocalElement> {
    let field = x0.field().clone();
    if q == 0 || field.q() % q != 0 {
        return Err(Error::UnsupportedParameters(format!(
            "μ_{q} is not contained in the working field (q_F = {})",
            field.q()
        )));
    }
    if !x0.is_unit() {
        return Err(Error::OutsideBasin("initial value is not a unit".into()));
    }
    let one = LocalElement::one(&field);
    let q_elt = LocalElement::from_int(&field, q as i64);
    let vq = q_elt.valuation().unwrap_or(0);
    let mut x = x0.clone();
    let mut residual = x.pow(q).sub(&one);
    if !residual.is_zero() && residual.valuation_lower_bound() < 2 * vq + 1 {
        return Err(Error::OutsideBasin(format!(
            "v(x^q − 1) = {} is below 2·v(q)+1 = {}",
            residual.valuation_lower_bound(),
            2 * vq + 1
        )));
    }
    let limit = ceil_log2(field.precision()) + 3;
    let mut iterations = 0;
    while !residual.is_zero() {
        if iterations == limit {
            return Err(Error::OutsideBasin("Newton iteration did not converge".into()));
        }
        let deriv = q_elt.mul(&x.pow(q - 1));
        x = x.sub(&residual.div(&deriv)?);
        residual = x.pow(q).sub(&one);
        iterations += 1;
    }
    let k = mu_q_index(&x)?;
    let roots = enumerate_mu_q(&field);
    let exact = roots[k].clone();
    if !exact.pow(q).sub(&one).is_zero() {
        return Err(Error::OutsideBasin("nearest root of unity has the wrong order".into()));
    }
    Ok(exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_q_small_cases() {
        let f = make_field(5, 1, 1, 16).unwrap();
        assert_eq!(enumerate_mu_q(&f), vec![LocalElement::one(&f)]);
        let f = make_field(3, 3, 1, 32).unwrap();
        let mu = enumerate_mu_q(&f);
        assert_eq!(mu.len(), 3);
        let one = LocalElement::one(&f);
        for x in &mu {
            assert!(x.pow(3).sub(&one).is_zero());
            assert!(x.reduce_mod_m().unwrap().is_one());
        }
        assert_eq!(mu[1], one.add(&LocalElement::pi(&f)));
    }

    #[test]
    fn hensel_recovers_perturbed_roots() {
        let f = make_field(3, 3, 1, 32).unwrap();
        let zeta = primitive_root(&f);
        let x0 = zeta.add(&LocalElement::pi_pow(&f, 10));
        let lifted = hensel_lift_unity(&x0, 3).unwrap();
        assert_eq!(lifted, zeta);
        assert_eq!(lifted.absolute_precision(), 32);
        assert_eq!(hensel_lift_unity(&LocalElement::one(&f), 3).unwrap(), LocalElement::one(&f));

        let f = make_field(5, 5, 1, 32).unwrap();
        let zeta = primitive_root(&f);
        let x0 = zeta.add(&LocalElement::from_int(&f, 5).pow(3));
        let lifted = hensel_lift_unity(&x0, 5).unwrap();
        assert_eq!(lifted, zeta);
        let one = LocalElement::one(&f);
        assert!(lifted.pow(5).sub(&one).is_zero());
    }

    #[test]
    fn hensel_rejects_points_outside_basin() {
        let f = make_field(3, 3, 1, 32).unwrap();
        let x0 = LocalElement::from_int(&f, 2);
        assert!(matches!(hensel_lift_unity(&x0, 3), Err(Error::OutsideBasin(_))));
        let x0 = primitive_root(&f).add(&LocalElement::pi_pow(&f, 1));
        assert!(matches!(hensel_lift_unity(&x0, 3), Err(Error::OutsideBasin(_))));
    }
}
