use std::fmt;

use crate::localring::LocalElement;

/// The commutative-ring operations the generic matrix code needs.
pub trait RingElem: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl RingElem for LocalElement {
    fn zero_like(&self) -> Self {
        LocalElement::zero(self.field())
    }
    fn one_like(&self) -> Self {
        LocalElement::one(self.field())
    }
    fn add(&self, other: &Self) -> Self {
        LocalElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LocalElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LocalElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        LocalElement::neg(self)
    }
}

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<R: Clone> Matrix<R> {
    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<R>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }
}

impl<R: RingElem> Matrix<R> {
    pub fn identity_like(n: usize, proto: &R) -> Self {
        let zero = proto.zero_like();
        let one = proto.one_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zeros_like(rows: usize, cols: usize, proto: &R) -> Self {
        let zero = proto.zero_like();
        Self::from_fn(rows, cols, |_, _| zero.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0).mul(other.get(0, j));
            for k in 1..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).mul(&v[0]);
                for k in 1..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        self.map(RingElem::neg)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity_like(self.rows, self.get(0, 0));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates `Σ c_i M^i` (coefficients low to high) by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[R]) -> Self {
        let id = Self::identity_like(self.rows, self.get(0, 0));
        let mut acc = Self::zeros_like(self.rows, self.cols, self.get(0, 0));
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&id.scale(c));
        }
        acc
    }

    /// Characteristic polynomial `det(xI − M)`, coefficients low to high, via the
    /// division-free Berkowitz recurrence.
    pub fn charpoly(&self) -> Vec<R> {
        assert!(self.is_square());
        let n = self.rows;
        let proto = self.get(0, 0);
        let one = proto.one_like();
        let zero = proto.zero_like();
        // descending coefficients
        let mut c = vec![one.clone(), self.get(0, 0).neg()];
        for r in 2..=n {
            let lead = self.submatrix(0, r - 1, 0, r - 1);
            let row = self.submatrix(r - 1, r, 0, r - 1);
            let col: Vec<R> = (0..r - 1).map(|i| self.get(i, r - 1).clone()).collect();
            let a = self.get(r - 1, r - 1);
            let mut toeplitz = vec![one.clone(), a.neg()];
            let mut power_col = col.clone();
            for _ in 2..=r {
                let v = row.mul_vec(&power_col)[0].neg();
                toeplitz.push(v);
                power_col = lead.mul_vec(&power_col);
            }
            let mut next = vec![zero.clone(); r + 1];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        acc = acc.add(&toeplitz[i - j].mul(cj));
                    }
                }
                *slot = acc;
            }
            c = next;
        }
        c.reverse();
        c
    }

    pub fn det(&self) -> R {
        let cp = self.charpoly();
        if self.rows % 2 == 0 {
            cp[0].clone()
        } else {
            cp[0].neg()
        }
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
