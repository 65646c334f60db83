use crate::linalg::{Matrix, RingElem};
use crate::localring::{ElementRepr, Field, LocalElement};
use crate::error::Result;

/// Polynomial in one variable `t` with coefficients in `F`, low degree first.
///
/// Trailing coefficients that vanish to the field's tolerance are dropped.
#[derive(Clone, Debug)]
pub struct TPoly {
    field: Field,
    coeffs: Vec<LocalElement>,
}

impl TPoly {
    pub fn new(field: &Field, coeffs: Vec<LocalElement>) -> Self {
        let mut p = Self { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn constant(c: LocalElement) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: LocalElement, k: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![LocalElement::zero(&field); k];
        coeffs.push(c);
        Self::new(&field, coeffs)
    }

    fn trim(&mut self) {
        let tau = self.field.tau();
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.is_zero() && c.absolute_precision() >= tau)
        {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[LocalElement] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> LocalElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| LocalElement::zero(&self.field))
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &LocalElement) -> LocalElement {
        let mut acc = LocalElement::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Smallest coefficient valuation.
    pub fn min_valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .map(LocalElement::valuation_lower_bound)
            .min()
            .unwrap_or(self.field.precision())
    }

    pub fn to_repr(&self) -> Vec<ElementRepr> {
        self.coeffs.iter().map(LocalElement::to_repr).collect()
    }

    pub fn from_repr(field: &Field, repr: &[ElementRepr]) -> Result<Self> {
        let coeffs = repr
            .iter()
            .map(|e| LocalElement::from_repr(field, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, coeffs))
    }
}

impl RingElem for TPoly {
    fn zero_like(&self) -> Self {
        Self::new(&self.field, Vec::new())
    }
    fn one_like(&self) -> Self {
        Self::constant(LocalElement::one(&self.field))
    }
    fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(&self.field, (0..len).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(&self.field, (0..len).map(|k| self.coeff(k).sub(&other.coeff(k))).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.zero_like();
        }
        let mut out = vec![LocalElement::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.absolute_precision() >= self.field.precision() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.field, out)
    }
    fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(LocalElement::neg).collect())
    }
}

/// Matrices over `F[t]`.
pub type TMat = Matrix<TPoly>;

pub fn tmat_constant(m: &crate::linalg::Mat) -> TMat {
    m.map(|x| TPoly::constant(x.clone()))
}

pub fn tmat_eval(m: &TMat, t: &LocalElement) -> crate::linalg::Mat {
    m.map(|p| p.eval(t))
}
