#![allow(dead_code)]

use framed_deformations::deformation::{sample_point_on_v, DeformationParams, DeformationPoint};
use framed_deformations::linalg::Mat;
use framed_deformations::localring::{make_field, LocalElement};
use framed_deformations::paths::{tmat_eval, PathCertificate, PathSegment, TPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(p, q, n, d)` for the path corpora.
pub const PARAMETER_SETS: [(u64, u64, usize, usize); 3] = [(3, 3, 2, 2), (5, 5, 2, 4), (5, 5, 3, 4)];

pub fn params(p: u64, q: u64, n: usize, d: usize, precision: i64) -> DeformationParams {
    DeformationParams::new(make_field(p, q, 1, precision).unwrap(), d, n).unwrap()
}

/// Seeded points of `V` with random eigenvalue labels.
pub fn corpus(pr: &DeformationParams, count: u64) -> Vec<(DeformationPoint, Vec<usize>)> {
    let q = pr.field.q() as usize;
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let eig: Vec<usize> = (0..pr.n).map(|_| rng.gen_range(0..q)).collect();
            (sample_point_on_v(pr, seed, &eig).unwrap(), eig)
        })
        .collect()
}

/// `M₁` at the end of the contraction segments, before any citation.
pub fn diagonal_end(cert: &PathCertificate) -> Vec<Mat> {
    let last_poly = cert
        .segments
        .iter()
        .filter_map(|s| match s {
            PathSegment::Polynomial { slots } => Some(slots),
            _ => None,
        })
        .last()
        .expect("certificate has a polynomial segment");
    last_poly.iter().map(|m| tmat_eval(m, &LocalElement::zero(m.get(0, 0).field()))).collect()
}

pub fn is_scalar(m: &Mat) -> bool {
    let d = Mat::identity(m.field(), m.rows()).scale(m.get(0, 0));
    m.approx_eq(&d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `g[0][0] += π` in the first conjugation move.
    ConjugationDigit,
    /// `M₁(t)[0][0] += π` in the first polynomial path (breaks the relation).
    RelationDigit,
    /// `t`-coefficient of `M₁(t)[0][0] += π` (makes `det M₁` vary).
    DeterminantDigit,
    /// `end.M₁[0][0] += π`.
    EndpointDigit,
    /// Citation statement id replaced.
    CitationId,
}

pub fn mutate(cert: &PathCertificate, kind: Mutation) -> Option<PathCertificate> {
    let mut c = cert.clone();
    let field = cert.start.field().clone();
    let pi = LocalElement::pi(&field);
    match kind {
        Mutation::ConjugationDigit => {
            let PathSegment::Conjugation { g, .. } = &mut c.segments[0] else { return None };
            let v = g.get(0, 0).add(&pi);
            g.set(0, 0, v);
        }
        Mutation::RelationDigit | Mutation::DeterminantDigit => {
            let k = if kind == Mutation::RelationDigit { 0 } else { 1 };
            let PathSegment::Polynomial { slots } = &mut c.segments[1] else { return None };
            let p = slots[0].get(0, 0).clone();
            let mut coeffs: Vec<LocalElement> = (0..=p.degree().max(k)).map(|i| p.coeff(i)).collect();
            coeffs[k] = coeffs[k].add(&pi);
            slots[0].set(0, 0, TPoly::new(&field, coeffs));
        }
        Mutation::EndpointDigit => {
            let v = c.end.matrices[0].get(0, 0).add(&pi);
            c.end.matrices[0].set(0, 0, v);
        }
        Mutation::CitationId => {
            let seg = c.segments.iter_mut().find(|s| matches!(s, PathSegment::Cited { .. }))?;
            let PathSegment::Cited { statement, .. } = seg else { unreachable!() };
            *statement = "rank3-fixed-det-framed-ring-is-domain".into();
        }
    }
    Some(c)
}
