use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};

/// An element `π^shift · body` of `F`, where `body` is a unit of `O_F` known modulo
/// `π^prec` (or zero, known to absolute precision `shift`).
///
/// Absolute precision never exceeds the field's working precision `N`: anything of
/// valuation `≥ N` is zero.
#[derive(Clone, Debug)]
pub struct LocalElement {
    field: Field,
    shift: i64,
    body: Vec<u64>,
    prec: i64,
}

impl LocalElement {
    fn normalized(field: &Field, shift: i64, body: Vec<u64>, prec: i64) -> Self {
        let n = field.precision();
        let abs = (shift + prec).min(n);
        let prec = prec.min(n).min(abs - shift);
        if prec <= 0 {
            return Self::zero_at(field, abs);
        }
        let body = field.body_truncate(&body, prec);
        match field.body_val(&body) {
            None => Self::zero_at(field, abs),
            Some(v) if v >= prec => Self::zero_at(field, abs),
            Some(0) => Self { field: field.clone(), shift, body, prec },
            Some(v) => {
                let mut b = body;
                for _ in 0..v {
                    b = field.body_div_pi(&b);
                }
                let prec = prec - v;
                let b = field.body_truncate(&b, prec);
                Self { field: field.clone(), shift: shift + v, body: b, prec }
            }
        }
    }

    fn zero_at(field: &Field, abs: i64) -> Self {
        Self { field: field.clone(), shift: abs, body: field.body_zero(), prec: 0 }
    }

    /// Zero at full precision.
    pub fn zero(field: &Field) -> Self {
        Self::zero_at(field, field.precision())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        Self::normalized(field, 0, field.body_from_int(v), field.precision())
    }

    /// The uniformizer `π`.
    pub fn pi(field: &Field) -> Self {
        Self::normalized(field, 0, field.pi_body(), field.precision())
    }

    /// `π^k` for any integer `k`.
    pub fn pi_pow(field: &Field, k: i64) -> Self {
        Self::normalized(field, k, field.body_from_int(1), field.precision())
    }

    /// Builds an integral element from `π`-adic coordinates: `coords[j][i]` is the
    /// coefficient of `π^j y^i`.
    pub fn from_coords(field: &Field, coords: &[Vec<i64>]) -> Self {
        let f = field.f0();
        let m = field.modulus() as i128;
        let mut body = field.body_zero();
        for (j, row) in coords.iter().enumerate().take(field.e()) {
            for (i, c) in row.iter().enumerate().take(f) {
                body[j * f + i] = (((*c as i128) % m + m) % m) as u64;
            }
        }
        Self::normalized(field, 0, body, field.precision())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Relative precision of the unit part (0 for zero).
    pub fn relative_precision(&self) -> i64 {
        self.prec
    }

    /// Absolute precision: the element is known modulo `π^{abs}`.
    pub fn absolute_precision(&self) -> i64 {
        self.shift + self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// Valuation, or `None` when zero at its known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    /// Valuation, with zero reported as its absolute precision (a lower bound).
    pub fn valuation_lower_bound(&self) -> i64 {
        self.shift
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn is_integral(&self) -> bool {
        self.shift >= 0
    }

    /// `v(self − other) ≥ threshold`.
    pub fn eq_at(&self, other: &Self, threshold: i64) -> bool {
        self.sub(other).valuation_lower_bound() >= threshold
    }

    /// Equality at the field's tolerance `τ`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.eq_at(other, self.field.tau())
    }

    fn aligned_body(&self, target_shift: i64) -> (Vec<u64>, i64) {
        let mut b = self.body.clone();
        let k = self.shift - target_shift;
        let n = self.field.precision();
        if k >= n + self.field.e() as i64 {
            return (self.field.body_zero(), self.prec + k);
        }
        for _ in 0..k {
            b = self.field.body_mul_pi(&b);
        }
        (b, self.prec + k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = self.shift.min(other.shift);
        let (a, pa) = self.aligned_body(s);
        let (b, pb) = other.aligned_body(s);
        Self::normalized(&self.field, s, self.field.body_add(&a, &b), pa.min(pb))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            shift: self.shift,
            body: self.field.body_truncate(&self.field.body_neg(&self.body), self.prec),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let shift = self.shift + other.shift;
        if self.is_zero() || other.is_zero() {
            return Self::normalized(&self.field, shift, self.field.body_zero(), 0);
        }
        let body = self.field.body_mul(&self.body, &other.body);
        Self::normalized(&self.field, shift, body, self.prec.min(other.prec))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertibleAtPrecision);
        }
        let body = self.field.body_inv_unit(&self.body);
        Ok(Self::normalized(&self.field, -self.shift, body, self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Exact division by `π^k`.
    pub fn div_pi_pow(&self, k: i64) -> Self {
        Self {
            field: self.field.clone(),
            shift: self.shift - k,
            body: self.body.clone(),
            prec: self.prec,
        }
        .renormalize()
    }

    fn renormalize(self) -> Self {
        Self::normalized(&self.field, self.shift, self.body, self.prec)
    }

    /// Treats the known digits as exact, raising the precision to the maximum allowed.
    pub fn promote(&self) -> Self {
        if self.is_zero() {
            return Self::zero(&self.field);
        }
        Self::normalized(&self.field, self.shift, self.body.clone(), self.field.precision())
    }

    /// Reduction modulo `m_F`, as coefficients in `F_p[y]/(g)`.
    pub fn reduce_mod_m(&self) -> Result<Residue> {
        if self.shift < 0 && !self.is_zero() {
            return Err(Error::NotIntegral);
        }
        if self.is_zero() || self.shift > 0 {
            return Ok(Residue(vec![0; self.field.f0()]));
        }
        Ok(Residue(self.field.body_residue(&self.body)))
    }

    /// Digits of the canonical `π^shift`-normalized body, flattened as `π^j y^i`.
    pub fn digits(&self) -> &[u64] {
        &self.body
    }

    /// Uniform random element of `O_F` at full precision.
    pub fn random_integral<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Self {
        let m = field.modulus();
        let body: Vec<u64> = (0..field.e() * field.f0()).map(|_| rng.gen_range(0..m)).collect();
        Self::normalized(field, 0, body, field.precision())
    }

    /// Uniform random element of `m_F`.
    pub fn random_in_maximal<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Self {
        Self::random_integral(field, rng).mul(&Self::pi(field))
    }

    /// Uniform random unit of `O_F`.
    pub fn random_unit<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Self {
        loop {
            let x = Self::random_integral(field, rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    pub fn to_repr(&self) -> ElementRepr {
        let n = self.field.precision();
        let default_prec = n.min(n - self.shift);
        ElementRepr {
            shift: self.shift,
            digits: self.body.iter().map(u64::to_string).collect(),
            prec: (!self.is_zero() && self.prec != default_prec).then_some(self.prec),
        }
    }

    pub fn from_repr(field: &Field, repr: &ElementRepr) -> Result<Self> {
        if repr.digits.len() != field.e() * field.f0() {
            return Err(Error::Malformed(format!(
                "expected {} digits, found {}",
                field.e() * field.f0(),
                repr.digits.len()
            )));
        }
        let body = repr
            .digits
            .iter()
            .map(|s| {
                s.parse::<u64>()
                    .ok()
                    .filter(|v| *v < field.modulus())
                    .ok_or_else(|| Error::Malformed(format!("bad digit {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let prec = repr.prec.unwrap_or(field.precision());
        if body.iter().all(|d| *d == 0) && repr.prec.is_none() {
            return Ok(Self::zero_at(field, repr.shift.min(field.precision())));
        }
        Ok(Self::normalized(field, repr.shift, body, prec))
    }
}

impl PartialEq for LocalElement {
    /// Agreement to the precision both sides are known.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.sub(other).is_zero()
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(π^{})", self.shift);
        }
        write!(f, "π^{}·[", self.shift)?;
        for (i, d) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "] + O(π^{})", self.absolute_precision())
    }
}

/// Element of the residue field `F_{p^{f0}}`, as polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue(pub Vec<u64>);

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.0.first() == Some(&1) && self.0[1..].iter().all(|c| *c == 0)
    }
}

/// Serialized form of a [`LocalElement`]: `{shift, digits}` with decimal-string digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub shift: i64,
    pub digits: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
}
