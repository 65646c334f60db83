use crate::error::{Error, Result};
use crate::localring::{ElementRepr, Field, LocalElement};

use super::matrix::Matrix;

/// Matrices over `F`.
pub type Mat = Matrix<LocalElement>;

/// Serialized form of a [`Mat`]: rows of element representations.
pub type MatRepr = Vec<Vec<ElementRepr>>;

impl Matrix<LocalElement> {
    pub fn identity(field: &Field, n: usize) -> Self {
        Self::identity_like(n, &LocalElement::zero(field))
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        Self::zeros_like(rows, cols, &LocalElement::zero(field))
    }

    pub fn diagonal(entries: &[LocalElement]) -> Self {
        let zero = LocalElement::zero(entries[0].field());
        Self::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| LocalElement::from_int(field, *v)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &Field {
        self.get(0, 0).field()
    }

    /// Smallest entry valuation (zeros count at their absolute precision).
    pub fn min_valuation(&self) -> i64 {
        self.entries().map(LocalElement::valuation_lower_bound).min().unwrap_or(i64::MAX)
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(LocalElement::is_integral)
    }

    pub fn eq_at(&self, other: &Self, threshold: i64) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.entries().zip(other.entries()).all(|(a, b)| a.eq_at(b, threshold))
    }

    /// Entrywise equality at the field's tolerance `τ`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.eq_at(other, self.field().tau())
    }

    /// `M ≡ I (mod m_F)`.
    pub fn is_identity_mod_m(&self) -> bool {
        let id = Self::identity(self.field(), self.rows());
        self.eq_at(&id, 1)
    }

    /// Strictly-lower entries all have valuation at least `threshold`.
    pub fn is_upper_triangular_at(&self, threshold: i64) -> bool {
        (0..self.rows())
            .all(|i| (0..i.min(self.cols())).all(|j| self.get(i, j).valuation_lower_bound() >= threshold))
    }

    pub fn upper_part(&self) -> Self {
        let zero = LocalElement::zero(self.field());
        Self::from_fn(self.rows(), self.cols(), |i, j| {
            if i > j {
                zero.clone()
            } else {
                self.get(i, j).clone()
            }
        })
    }

    pub fn promote(&self) -> Self {
        self.map(LocalElement::promote)
    }

    /// Inverse by Gauss–Jordan elimination with minimal-valuation pivots.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows();
        let field = self.field().clone();
        let mut a = self.clone();
        let mut inv = Self::identity(&field, n);
        for k in 0..n {
            let piv = (k..n)
                .filter(|i| !a.get(*i, k).is_zero())
                .min_by_key(|i| a.get(*i, k).valuation_lower_bound())
                .ok_or(Error::SingularAtPrecision)?;
            a.swap_rows(k, piv);
            inv.swap_rows(k, piv);
            let pinv = a.get(k, k).inv()?;
            for j in 0..n {
                a.set(k, j, a.get(k, j).mul(&pinv));
                inv.set(k, j, inv.get(k, j).mul(&pinv));
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(k, j))));
                    inv.set(i, j, inv.get(i, j).sub(&f.mul(inv.get(k, j))));
                }
            }
        }
        Ok(inv)
    }

    /// Inverse of an element of `GL_n(O_F)`; fails unless the determinant is a unit.
    pub fn inverse_integral(&self) -> Result<Self> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        if !self.det().is_unit() {
            return Err(Error::SingularAtPrecision);
        }
        self.inverse()
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Self, g_inv: &Self) -> Self {
        g.mul(self).mul(g_inv)
    }

    pub fn to_repr(&self) -> MatRepr {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.get(i, j).to_repr()).collect())
            .collect()
    }

    pub fn from_repr(field: &Field, repr: &MatRepr) -> Result<Self> {
        if repr.is_empty() || repr.iter().any(|r| r.len() != repr[0].len()) {
            return Err(Error::Malformed("matrix rows are empty or ragged".into()));
        }
        let rows = repr
            .iter()
            .map(|r| r.iter().map(|e| LocalElement::from_repr(field, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_cayley_hamilton_random() {
        let field = make_field(3, 3, 1, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..50 {
                let m = Mat::from_fn(n, n, |_, _| LocalElement::random_integral(&field, &mut rng));
                let cp = m.charpoly();
                let z = m.eval_poly(&cp);
                assert!(z.entries().all(LocalElement::is_zero));
                if m.det().is_unit() {
                    let inv = m.inverse_integral().unwrap();
                    assert!(m.mul(&inv).eq_at(&Mat::identity(&field, n), field.precision()));
                }
            }
        }
    }

    #[test]
    fn non_unit_det_rejected() {
        let field = make_field(5, 5, 1, 16).unwrap();
        let m = Mat::from_ints(&field, &[vec![5, 0], vec![0, 1]]);
        assert!(matches!(m.inverse_integral(), Err(Error::SingularAtPrecision)));
        assert!(m.inverse().is_ok());
    }
}
