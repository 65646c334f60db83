use crate::error::{Error, Result};
use crate::localring::LocalElement;

use super::mat::Mat;

/// Writes `E = N · E0` with `E0 ∈ GL_n(O_F)` and `N` upper triangular over `F`.
///
/// Returns `(N, E0)`.
pub fn iwasawa_decompose(e: &Mat) -> Result<(Mat, Mat)> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch("Iwasawa decomposition of a non-square matrix".into()));
    }
    let n = e.rows();
    let mut rows: Vec<Vec<LocalElement>> = (0..n).map(|i| e.row(i)).collect();
    let mut used: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        let mut row = rows[i].clone();
        // clear the pivot columns of the rows below
        for (k, &col) in used.iter().enumerate() {
            let below = &rows[n - 1 - k];
            let f = row[col].clone();
            if !f.is_zero() {
                for j in 0..n {
                    row[j] = row[j].sub(&f.mul(&below[j]));
                }
            }
        }
        let mut pivot: Option<(usize, i64)> = None;
        for j in (0..n).rev() {
            if used.contains(&j) || row[j].is_zero() {
                continue;
            }
            let v = row[j].valuation_lower_bound();
            if pivot.map_or(true, |(_, pv)| v < pv) {
                pivot = Some((j, v));
            }
        }
        let (col, _) = pivot.ok_or(Error::SingularAtPrecision)?;
        let inv = row[col].inv()?;
        for x in row.iter_mut() {
            *x = x.mul(&inv);
        }
        rows[i] = row;
        used.push(col);
    }
    let e0 = Mat::from_rows(rows);
    if !e0.is_integral() || !e0.det().is_unit() {
        return Err(Error::PrecisionExhausted("integral factor lost precision".into()));
    }
    let nup = e.mul(&e0.inverse()?);
    Ok((nup, e0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;


    #[test]
    fn spec_examples() {
        let field = make_field(5, 5, 1, 20).unwrap();
        let id = Mat::identity(&field, 2);
        let (nn, e0) = iwasawa_decompose(&id).unwrap();
        assert!(nn.approx_eq(&id) && e0.approx_eq(&id));
        let lower = Mat::from_ints(&field, &[vec![1, 0], vec![3, 1]]);
        let (nn, e0) = iwasawa_decompose(&lower).unwrap();
        assert!(nn.approx_eq(&id) && e0.approx_eq(&lower));
        let d = Mat::diagonal(&[LocalElement::pi_pow(&field, -1), LocalElement::one(&field)]);
        let (nn, e0) = iwasawa_decompose(&d).unwrap();
        assert!(nn.approx_eq(&d) && e0.approx_eq(&id));
    }

    #[test]
    fn random_decompositions() {
        let field = make_field(3, 3, 1, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for _ in 0..30 {
                let e = Mat::from_fn(n, n, |_, _| {
                    LocalElement::random_integral(&field, &mut rng).mul(&LocalElement::pi_pow(&field, -2))
                });
                if e.det().is_zero() {
                    continue;
                }
                let (nn, e0) = iwasawa_decompose(&e).unwrap();
                assert!(e0.is_integral() && e0.det().is_unit());
                assert!(nn.is_upper_triangular_at(field.tau() - 6));
                assert!(nn.mul(&e0).eq_at(&e, field.tau() - 6));
            }
        }
    }
}
