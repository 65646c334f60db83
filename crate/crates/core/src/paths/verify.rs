use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Mat;
use crate::localring::{enumerate_mu_q, hensel_lift_unity, mu_q_index, Field, LocalElement};

use super::tpoly::{tmat_eval, TMat, TPoly};
use super::{PathCertificate, PathSegment, ADMISSIBLE_SOURCE, ADMISSIBLE_STATEMENT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    /// Conjugation moves: integral `g` with unit determinant mapping start to image.
    A,
    /// Polynomial paths: the relation holds identically in `t`.
    B,
    /// Endpoints chain.
    C,
    /// `det(M₁)` is constant along paths and the label never changes.
    D,
    /// Citations are the admissible one, with a valid merge.
    E,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Clause::A => 'a',
            Clause::B => 'b',
            Clause::C => 'c',
            Clause::D => 'd',
            Clause::E => 'e',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseFailure {
    /// `None` for checks on the certificate as a whole.
    pub segment: Option<usize>,
    pub clause: Clause,
    pub message: String,
}

impl fmt::Display for ClauseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.segment {
            Some(i) => write!(f, "segment {i}, clause ({}): {}", self.clause, self.message),
            None => write!(f, "certificate, clause ({}): {}", self.clause, self.message),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub segments: usize,
    pub failures: Vec<ClauseFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_clauses(&self) -> Vec<Clause> {
        let mut c: Vec<Clause> = self.failures.iter().map(|f| f.clause).collect();
        c.dedup();
        c
    }

    fn fail(&mut self, segment: Option<usize>, clause: Clause, message: impl Into<String>) {
        self.failures.push(ClauseFailure { segment, clause, message: message.into() });
    }
}

fn label_of(x: &LocalElement) -> Option<usize> {
    let q = x.field().q();
    let exact = hensel_lift_unity(x, q).ok()?;
    mu_q_index(&exact).ok()
}

fn tuple_approx_eq(a: &[Mat], b: &[Mat]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

/// Inverse of `I + Δ` in the Tate algebra by the Neumann series; `Δ` must have all
/// coefficients in `m_F`.
fn tate_inverse(m: &TMat) -> Option<TMat> {
    let field = m.get(0, 0).field().clone();
    let id = TMat::identity_like(m.rows(), m.get(0, 0));
    let delta = m.sub(&id);
    if delta.entries().any(|p| p.min_valuation() < 1) {
        return None;
    }
    let minus = delta.neg();
    let mut sum = id.clone();
    let mut term = id;
    for _ in 0..field.precision() {
        term = term.mul(&minus);
        if term.entries().all(|p| p.coeffs().is_empty()) {
            break;
        }
        sum = sum.add(&term);
    }
    Some(sum)
}

fn relation_residual(slots: &[TMat], q: u64) -> Option<TMat> {
    let mut w = slots[0].pow(q);
    for pair in slots.chunks(2) {
        if let [a, b] = pair {
            w = w.mul(a).mul(b).mul(&tate_inverse(a)?).mul(&tate_inverse(b)?);
        }
    }
    let id = TMat::identity_like(w.rows(), w.get(0, 0));
    Some(w.sub(&id))
}

fn diagonal_tuple(field: &Field, n: usize, slots: usize, labels: &[usize]) -> Option<Vec<Mat>> {
    let roots = enumerate_mu_q(field);
    let diag = labels.iter().map(|k| roots.get(*k).cloned()).collect::<Option<Vec<_>>>()?;
    let mut out = vec![Mat::identity(field, n); slots];
    out[0] = Mat::diagonal(&diag);
    Some(out)
}

fn check_polynomial(
    report: &mut VerificationReport,
    idx: usize,
    slots: &[TMat],
    cur: &[Mat],
    label: usize,
) -> Option<Vec<Mat>> {
    let field = cur[0].field().clone();
    let n = cur[0].rows();
    let tau = field.tau();
    if slots.len() != cur.len() || slots.iter().any(|m| m.rows() != n || m.cols() != n) {
        report.fail(Some(idx), Clause::B, "slot count or size does not match the tuple");
        return None;
    }
    let max_degree = 2 * (n - 1);
    let id = Mat::identity(&field, n);
    let mut shape_ok = true;
    for (s, m) in slots.iter().enumerate() {
        if m.entries().any(|p| p.degree() > max_degree) {
            report.fail(Some(idx), Clause::B, format!("slot {s} has degree above {max_degree}"));
            shape_ok = false;
        }
        for i in 0..n {
            for j in 0..n {
                let p = m.get(i, j);
                let bad = p.coeffs().iter().enumerate().any(|(k, c)| {
                    let target = if i == j && k == 0 { id.get(i, j).clone() } else { LocalElement::zero(&field) };
                    !c.is_integral() || c.sub(&target).valuation_lower_bound() < 1
                });
                if bad {
                    report.fail(Some(idx), Clause::B, format!("slot {s} is not ≡ I mod m"));
                    shape_ok = false;
                }
            }
        }
    }
    if shape_ok {
        match relation_residual(slots, field.q()) {
            Some(r) => {
                let v = r.entries().map(TPoly::min_valuation).min().unwrap_or(i64::MAX);
                if v < tau {
                    report.fail(Some(idx), Clause::B, format!("relation residual has valuation {v} < {tau}"));
                }
            }
            None => report.fail(Some(idx), Clause::B, "a slot is not invertible in the Tate algebra"),
        }
    }
    let one = LocalElement::one(&field);
    let at_one: Vec<Mat> = slots.iter().map(|m| tmat_eval(m, &one)).collect();
    if !tuple_approx_eq(&at_one, cur) {
        report.fail(Some(idx), Clause::C, "value at t = 1 differs from the previous endpoint");
    }
    let det = slots[0].det();
    if det.coeffs().iter().skip(1).any(|c| c.valuation_lower_bound() < tau) {
        report.fail(Some(idx), Clause::D, "det(M₁(t)) depends on t");
    }
    if label_of(&det.coeff(0)) != Some(label) {
        report.fail(Some(idx), Clause::D, "det(M₁) has the wrong label");
    }
    Some(slots.iter().map(|m| tmat_eval(m, &LocalElement::zero(&field))).collect())
}

/// Checks every clause of a certificate. Shares no state with the construction.
pub fn verify_certificate(cert: &PathCertificate) -> VerificationReport {
    let mut report = VerificationReport { segments: cert.segments.len(), failures: Vec::new() };
    let field = cert.start.field().clone();
    let n = cert.start.params.n;
    let slots = cert.start.matrices.len();
    let label = cert.label.index;
    let q = field.q() as usize;
    if label_of(&cert.start.matrices[0].det()) != Some(label) {
        report.fail(None, Clause::D, "start point does not carry the certificate's label");
    }
    let mut cur: Option<Vec<Mat>> = Some(cert.start.matrices.clone());
    for (idx, seg) in cert.segments.iter().enumerate() {
        let Some(before) = cur.take() else { break };
        cur = match seg {
            PathSegment::Conjugation { g, image } => {
                let mut ok = true;
                if g.rows() != n || g.cols() != n || image.len() != slots {
                    report.fail(Some(idx), Clause::A, "shape mismatch");
                    None
                } else {
                    if !g.is_integral() || !g.det().is_unit() {
                        report.fail(Some(idx), Clause::A, "g is not in GL_n(O_F)");
                        ok = false;
                    }
                    if ok {
                        match g.inverse() {
                            Ok(g_inv) => {
                                let moved: Vec<Mat> = before.iter().map(|m| g.mul(m).mul(&g_inv)).collect();
                                if !tuple_approx_eq(&moved, image) {
                                    report.fail(Some(idx), Clause::A, "g·x·g⁻¹ differs from the claimed image");
                                }
                            }
                            Err(_) => report.fail(Some(idx), Clause::A, "g is not invertible"),
                        }
                    }
                    if label_of(&image[0].det()) != Some(label) {
                        report.fail(Some(idx), Clause::D, "conjugation changed the label");
                    }
                    Some(image.clone())
                }
            }
            PathSegment::Polynomial { slots: polys } => check_polynomial(&mut report, idx, polys, &before, label),
            PathSegment::Cited { statement, source, from, to } => {
                if statement != ADMISSIBLE_STATEMENT || source != ADMISSIBLE_SOURCE {
                    report.fail(Some(idx), Clause::E, format!("inadmissible citation {statement:?}"));
                }
                let merge_ok = from.len() == n
                    && to.len() == n
                    && from.iter().chain(to).all(|k| *k < q)
                    && (0..n.saturating_sub(1)).any(|j| {
                        to[j] == (from[j] + from[j + 1]) % q
                            && to[j + 1] == 0
                            && (0..n).all(|i| i == j || i == j + 1 || to[i] == from[i])
                    })
                    && from != to;
                if !merge_ok {
                    report.fail(Some(idx), Clause::E, "not a merge of adjacent eigenvalues");
                    None
                } else {
                    let src = diagonal_tuple(&field, n, slots, from);
                    if !src.is_some_and(|s| tuple_approx_eq(&s, &before)) {
                        report.fail(Some(idx), Clause::C, "citation does not start at the previous endpoint");
                    }
                    diagonal_tuple(&field, n, slots, to)
                }
            }
        };
    }
    match cur {
        Some(last) if tuple_approx_eq(&last, &cert.end.matrices) => {}
        Some(_) => report.fail(None, Clause::C, "chain does not end at the stated end point"),
        None => report.fail(None, Clause::C, "chain broken before the end"),
    }
    report
}
