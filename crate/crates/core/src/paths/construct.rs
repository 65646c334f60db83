use crate::deformation::{
    canonical_point, check_relation, det_component, diagonal_point, is_in_v, DeformationPoint,
};
use crate::error::{Error, Result};
use crate::linalg::{
    generalized_eigenspace, iwasawa_decompose, roots::roots_in_ring, smith, solve, Mat,
};
use crate::localring::{enumerate_mu_q, mu_q_index, LocalElement};

use super::tpoly::{tmat_constant, TMat, TPoly};
use super::{PathCertificate, PathSegment, ADMISSIBLE_SOURCE, ADMISSIBLE_STATEMENT};

/// `Σ_{j=0}^{q} λ^{q−j} x^j = (x^{q+1} − λ)/(x − λ)` evaluated at `m`.
fn twisted_factor(m: &Mat, lambda: &LocalElement, q: u64) -> Mat {
    let coeffs: Vec<LocalElement> = (0..=q).map(|j| lambda.pow(q - j)).collect();
    m.eval_poly(&coeffs)
}

/// Extends `chosen` by vectors spanning `span(chosen, block)` so that `m2` acts upper
/// triangularly on the successive quotients.
fn triangularize_block(
    m2: &Mat,
    chosen: &mut Vec<Vec<LocalElement>>,
    mut block: Vec<Vec<LocalElement>>,
) -> Result<()> {
    let field = m2.field().clone();
    while !block.is_empty() {
        let b = block.len();
        if b == 1 {
            chosen.push(block.pop().unwrap());
            break;
        }
        let a = chosen.len();
        let mut cols = chosen.clone();
        cols.extend(block.iter().cloned());
        let frame = Mat::from_columns(&cols);
        let mut y_cols = Vec::with_capacity(b);
        for v in &block {
            let x = solve(&frame, &m2.mul_vec(v))?;
            y_cols.push(x[a..].to_vec());
        }
        let y = Mat::from_columns(&y_cols);
        let roots = roots_in_ring(&y.charpoly())?;
        let (mu, _) = roots.into_iter().next().ok_or_else(|| {
            Error::UnsupportedParameters("M₂ has an eigenvalue outside F on a graded piece".into())
        })?;
        let shifted = y.sub(&Mat::identity(&field, b).scale(&mu));
        let s = smith(&shifted, field.precision());
        let idx = s.rank.min(b - 1);
        let rebased = Mat::from_columns(&block).mul(&s.v);
        chosen.push(rebased.column(idx));
        block = (0..b).filter(|j| *j != idx).map(|j| rebased.column(j)).collect();
    }
    Ok(())
}

/// Builds a certificate joining `pt ∈ V` to `canonical_point(det_component(pt))`.
pub fn connect_to_diagonal(pt: &DeformationPoint) -> Result<PathCertificate> {
    let params = pt.params.clone();
    let field = params.field.clone();
    let n = params.n;
    let q = field.q();
    if q == 1 {
        return Err(Error::UnsupportedParameters("paths need q ≥ 3".into()));
    }
    if !params.path_assumption {
        return Err(Error::AssumptionViolated(format!("p = {} must exceed n = {n}", field.p())));
    }
    if !pt.is_residually_trivial() {
        return Err(Error::RelationViolated("matrices are not ≡ I mod m".into()));
    }
    if !is_in_v(pt) {
        return Err(Error::NotInV);
    }
    let tau = field.tau();
    let residual = check_relation(pt)?;
    if !residual.at_least(tau) {
        return Err(Error::RelationViolated(format!("residual valuation {residual}")));
    }
    let label = det_component(pt)?;
    let m1 = &pt.matrices[0];
    let m2 = &pt.matrices[1];

    let roots = enumerate_mu_q(&field);
    let mut basis: Vec<Vec<LocalElement>> = Vec::with_capacity(n);
    let mut diag_labels: Vec<usize> = Vec::with_capacity(n);
    for k in (0..roots.len()).rev() {
        let lambda = &roots[k];
        let fil = generalized_eigenspace(m1, lambda, n)?;
        if fil.dimension() == 0 {
            continue;
        }
        if !twisted_factor(m1, lambda, q).det().is_unit() {
            return Err(Error::AssumptionViolated("f(M₁) is not invertible".into()));
        }
        let mut chosen = Vec::new();
        let mut prev = 0;
        for &stage in &fil.shape {
            triangularize_block(m2, &mut chosen, fil.basis[prev..stage].to_vec())?;
            prev = stage;
        }
        diag_labels.extend(std::iter::repeat(k).take(chosen.len()));
        basis.extend(chosen);
    }
    if basis.len() != n {
        return Err(Error::PrecisionExhausted(format!(
            "eigenvalues in μ_q account for {} of {n} dimensions",
            basis.len()
        )));
    }
    let e = Mat::from_columns(&basis).inverse()?;
    let (_, e0) = iwasawa_decompose(&e)?;
    let e0 = e0.promote();
    let e0_inv = e0.inverse_integral()?;
    let image: Vec<Mat> = pt.matrices.iter().map(|m| m.conjugate_by(&e0, &e0_inv)).collect();
    for m in image.iter().take(2) {
        if !m.is_upper_triangular_at(tau) {
            return Err(Error::PrecisionExhausted("conjugated tuple is not upper triangular".into()));
        }
    }
    let mut m1_star = image[0].upper_part();
    for (i, k) in diag_labels.iter().enumerate() {
        if !m1_star.get(i, i).approx_eq(&roots[*k]) {
            return Err(Error::PrecisionExhausted("diagonal of M₁ drifted from its eigenvalue".into()));
        }
        m1_star.set(i, i, roots[*k].clone());
    }
    let m2_star = image[1].upper_part();

    let slots = pt.matrices.len();
    let id = Mat::identity(&field, n);
    let contract = |m: &Mat| -> TMat {
        TMat::from_fn(n, n, |i, j| {
            if i > j {
                TPoly::new(&field, Vec::new())
            } else {
                TPoly::monomial(m.get(i, j).clone(), j - i)
            }
        })
    };
    let mut step2 = vec![tmat_constant(&id); slots];
    step2[0] = contract(&m1_star);
    step2[1] = contract(&m2_star);

    let m1_diag = Mat::diagonal(&diag_labels.iter().map(|k| roots[*k].clone()).collect::<Vec<_>>());
    let one = LocalElement::one(&field);
    let mut step3 = vec![tmat_constant(&id); slots];
    step3[0] = tmat_constant(&m1_diag);
    step3[1] = TMat::from_fn(n, n, |i, j| {
        if i == j {
            TPoly::new(&field, vec![one.clone(), m2_star.get(i, i).sub(&one)])
        } else {
            TPoly::new(&field, Vec::new())
        }
    });

    let mut segments = vec![
        PathSegment::Conjugation { g: e0, image },
        PathSegment::Polynomial { slots: step2 },
        PathSegment::Polynomial { slots: step3 },
    ];
    let diag_end = diagonal_point(&params, &diag_labels);
    segments.extend(normalize_and_cite(&diag_end)?);
    let end = canonical_point(&params, &label);
    Ok(PathCertificate { start: pt.clone(), end, label, segments })
}

/// Citation segments merging `(diag(λ₁, …, λ_n), I, …)` into `canonical_point(Πλ_i)` by
/// folding adjacent eigenvalues from the bottom right.
pub fn normalize_and_cite(diag_end: &DeformationPoint) -> Result<Vec<PathSegment>> {
    let field = diag_end.field().clone();
    let n = diag_end.params.n;
    let m1 = &diag_end.matrices[0];
    let id = Mat::identity(&field, n);
    if !m1.eq_at(&Mat::diagonal(&(0..n).map(|i| m1.get(i, i).clone()).collect::<Vec<_>>()), field.tau())
        || diag_end.matrices.iter().skip(1).any(|m| !m.approx_eq(&id))
    {
        return Err(Error::NotDiagonal);
    }
    let mut cur: Vec<usize> = (0..n).map(|i| mu_q_index(m1.get(i, i))).collect::<Result<_>>()?;
    let q = field.q() as usize;
    let mut out = Vec::new();
    for j in (0..n.saturating_sub(1)).rev() {
        let mut next = cur.clone();
        next[j] = (cur[j] + cur[j + 1]) % q;
        next[j + 1] = 0;
        if next == cur {
            continue;
        }
        out.push(PathSegment::Cited {
            statement: ADMISSIBLE_STATEMENT.into(),
            source: ADMISSIBLE_SOURCE.into(),
            from: cur,
            to: next.clone(),
        });
        cur = next;
    }
    Ok(out)
}
