//! Path certificates connecting points of `V` to the canonical diagonal points, and an
//! independent verifier for them.

mod construct;
mod tpoly;
mod verify;

pub use construct::{connect_to_diagonal, normalize_and_cite};
pub use tpoly::{tmat_constant, tmat_eval, TMat, TPoly};
pub use verify::{verify_certificate, Clause, ClauseFailure, VerificationReport};

use serde::{Deserialize, Serialize};

use crate::deformation::{ComponentLabel, DeformationPoint, PointFile};
use crate::error::{Error, Result};
use crate::linalg::{Mat, MatRepr};
use crate::localring::{ElementRepr, Field};

/// Identifier of the only literature fact certificates may cite: the fixed-determinant
/// framed deformation ring of the trivial 2-dimensional representation is a domain.
pub const ADMISSIBLE_STATEMENT: &str = "rank2-fixed-det-framed-ring-is-domain";
pub const ADMISSIBLE_SOURCE: &str = "Böckle–Juschka, Thm 1.5 & Rmk 1.7";

#[derive(Clone, Debug)]
pub enum PathSegment {
    /// `x ↦ g·x·g⁻¹` on every slot, with the claimed image.
    Conjugation { g: Mat, image: Vec<Mat> },
    /// One polynomial matrix per slot; `t = 1` is the start and `t = 0` the end.
    Polynomial { slots: Vec<TMat> },
    /// Merge of two adjacent diagonal eigenvalues justified by a cited result.
    /// `from` and `to` are the diagonal labels of `M₁` before and after.
    Cited { statement: String, source: String, from: Vec<usize>, to: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct PathCertificate {
    pub start: DeformationPoint,
    pub end: DeformationPoint,
    pub label: ComponentLabel,
    pub segments: Vec<PathSegment>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum SegmentRepr {
    Conjugation { g: MatRepr, image: Vec<MatRepr> },
    Polynomial { slots: Vec<Vec<Vec<Vec<ElementRepr>>>> },
    Cited { statement: String, source: String, from: Vec<usize>, to: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub start: PointFile,
    pub end: PointFile,
    pub label: usize,
    pub segments: Vec<SegmentRepr>,
}

impl PathSegment {
    pub fn to_repr(&self) -> SegmentRepr {
        match self {
            PathSegment::Conjugation { g, image } => SegmentRepr::Conjugation {
                g: g.to_repr(),
                image: image.iter().map(Mat::to_repr).collect(),
            },
            PathSegment::Polynomial { slots } => SegmentRepr::Polynomial {
                slots: slots
                    .iter()
                    .map(|m| {
                        (0..m.rows())
                            .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_repr()).collect())
                            .collect()
                    })
                    .collect(),
            },
            PathSegment::Cited { statement, source, from, to } => SegmentRepr::Cited {
                statement: statement.clone(),
                source: source.clone(),
                from: from.clone(),
                to: to.clone(),
            },
        }
    }

    pub fn from_repr(field: &Field, repr: &SegmentRepr) -> Result<Self> {
        Ok(match repr {
            SegmentRepr::Conjugation { g, image } => PathSegment::Conjugation {
                g: Mat::from_repr(field, g)?,
                image: image.iter().map(|m| Mat::from_repr(field, m)).collect::<Result<_>>()?,
            },
            SegmentRepr::Polynomial { slots } => PathSegment::Polynomial {
                slots: slots
                    .iter()
                    .map(|rows| {
                        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
                            return Err(Error::Malformed("polynomial matrix is empty or ragged".into()));
                        }
                        let rows = rows
                            .iter()
                            .map(|r| r.iter().map(|c| TPoly::from_repr(field, c)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        Ok(TMat::from_rows(rows))
                    })
                    .collect::<Result<_>>()?,
            },
            SegmentRepr::Cited { statement, source, from, to } => PathSegment::Cited {
                statement: statement.clone(),
                source: source.clone(),
                from: from.clone(),
                to: to.clone(),
            },
        })
    }
}

impl PathCertificate {
    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            start: self.start.to_file(None),
            end: self.end.to_file(None),
            label: self.label.index,
            segments: self.segments.iter().map(PathSegment::to_repr).collect(),
        }
    }
}

impl CertificateFile {
    pub fn to_certificate(&self) -> Result<PathCertificate> {
        if self.start.params != self.end.params {
            return Err(Error::Malformed("start and end use different parameters".into()));
        }
        let start = self.start.to_point()?;
        let end = self.end.to_point()?;
        let field = start.field().clone();
        let label = ComponentLabel::new(&field, self.label).map_err(|e| Error::Malformed(e.to_string()))?;
        let segments = self
            .segments
            .iter()
            .map(|s| PathSegment::from_repr(&field, s))
            .collect::<Result<_>>()?;
        Ok(PathCertificate { start, end, label, segments })
    }
}
