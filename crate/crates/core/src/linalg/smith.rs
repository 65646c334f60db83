use crate::error::{Error, Result};
use crate::localring::LocalElement;

use super::mat::Mat;

/// Partial Smith reduction `U · A · V = D`.
///
/// Pivoting stops once every remaining entry has valuation at least the threshold.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Mat,
    pub v: Mat,
    pub d: Mat,
    /// Pivots `d_0, …, d_{rank−1}` in non-decreasing valuation order.
    pub pivots: Vec<LocalElement>,
    pub rank: usize,
    /// Smallest valuation of a nonzero entry left in the unreduced block, if any.
    pub tail_min: Option<i64>,
    /// Smallest absolute precision among zero entries of the unreduced block.
    pub tail_zero_precision: Option<i64>,
}

pub fn smith(a: &Mat, threshold: i64) -> SmithForm {
    let field = a.field().clone();
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Mat::identity(&field, r);
    let mut v = Mat::identity(&field, c);
    let mut pivots = Vec::new();
    let mut k = 0;
    while k < r.min(c) {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..r {
            for j in k..c {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let val = x.valuation_lower_bound();
                if best.map_or(true, |(_, _, bv)| val < bv) {
                    best = Some((i, j, val));
                }
            }
        }
        let Some((bi, bj, bv)) = best else { break };
        if bv >= threshold {
            break;
        }
        d.swap_rows(k, bi);
        u.swap_rows(k, bi);
        d.swap_cols(k, bj);
        v.swap_cols(k, bj);
        let pinv = d.get(k, k).inv().expect("nonzero pivot is invertible in F");
        for i in k + 1..r {
            if d.get(i, k).is_zero() {
                continue;
            }
            let f = d.get(i, k).mul(&pinv);
            for j in 0..c {
                d.set(i, j, d.get(i, j).sub(&f.mul(d.get(k, j))));
            }
            for j in 0..r {
                u.set(i, j, u.get(i, j).sub(&f.mul(u.get(k, j))));
            }
            d.set(i, k, LocalElement::zero(&field));
        }
        for j in k + 1..c {
            if d.get(k, j).is_zero() {
                continue;
            }
            let f = d.get(k, j).mul(&pinv);
            for i in 0..r {
                d.set(i, j, d.get(i, j).sub(&f.mul(d.get(i, k))));
            }
            for i in 0..c {
                v.set(i, j, v.get(i, j).sub(&f.mul(v.get(i, k))));
            }
            d.set(k, j, LocalElement::zero(&field));
        }
        pivots.push(d.get(k, k).clone());
        k += 1;
    }
    let mut tail_min: Option<i64> = None;
    let mut tail_zero_precision: Option<i64> = None;
    for i in k..r {
        for j in k..c {
            let x = d.get(i, j);
            let val = x.valuation_lower_bound();
            let slot = if x.is_zero() { &mut tail_zero_precision } else { &mut tail_min };
            *slot = Some(slot.map_or(val, |s| s.min(val)));
        }
    }
    SmithForm { u, v, d, pivots, rank: k, tail_min, tail_zero_precision }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    /// Valuations of the elementary divisors below the threshold.
    pub divisor_valuations: Vec<i64>,
    /// Some entry with valuation in `[τ, N)` remained: the rank could differ at higher
    /// precision.
    pub band_occupied: bool,
}

/// Number of elementary divisors of valuation below `threshold`.
pub fn rank_at_threshold(a: &Mat, threshold: i64) -> Result<RankInfo> {
    let s = smith(a, threshold);
    if let Some(z) = s.tail_zero_precision {
        if z < threshold {
            return Err(Error::PrecisionExhausted(format!(
                "entries known only to π^{z}, below the threshold π^{threshold}"
            )));
        }
    }
    Ok(RankInfo {
        rank: s.rank,
        divisor_valuations: s.pivots.iter().map(LocalElement::valuation_lower_bound).collect(),
        band_occupied: s.tail_min.is_some(),
    })
}

/// Rank at the field's tolerance, refusing to decide when an elementary divisor falls
/// in the ambiguity band `[τ, N)`.
pub fn rank_strict(a: &Mat) -> Result<usize> {
    let tau = a.field().tau();
    let info = rank_at_threshold(a, tau)?;
    if info.band_occupied {
        return Err(Error::PrecisionExhausted(
            "an elementary divisor lies between the tolerance and the working precision".into(),
        ));
    }
    Ok(info.rank)
}

/// A basis of the kernel of `a` (column vectors), at the field's tolerance.
pub fn kernel_basis(a: &Mat) -> Result<Vec<Vec<LocalElement>>> {
    let rank = rank_strict(a)?;
    let s = smith(a, a.field().tau());
    Ok((rank..a.cols()).map(|j| s.v.column(j)).collect())
}

/// Some `x` with `a·x = y`, or [`Error::SingularAtPrecision`] if none exists.
pub fn solve(a: &Mat, y: &[LocalElement]) -> Result<Vec<LocalElement>> {
    let field = a.field().clone();
    let tau = field.tau();
    let rank = rank_strict(a)?;
    let s = smith(a, tau);
    let w = s.u.mul_vec(y);
    for wi in w.iter().skip(rank) {
        if wi.valuation_lower_bound() < tau {
            return Err(Error::SingularAtPrecision);
        }
    }
    let mut z = vec![LocalElement::zero(&field); a.cols()];
    for i in 0..rank {
        z[i] = w[i].div(&s.pivots[i])?;
    }
    Ok(s.v.mul_vec(&z))
}
