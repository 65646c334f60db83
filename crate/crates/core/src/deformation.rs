//! Points of the framed deformation space as matrix tuples satisfying the Demuškin
//! relation `M₁^q [M₁,M₂] ⋯ [M_{d+1},M_{d+2}] = I`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, MatRepr};
use crate::localring::{
    enumerate_mu_q, hensel_lift_unity, make_field, mu_q_index, totient_prime_power, Field,
    LocalElement,
};

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationParams {
    pub field: Field,
    /// Degree `[K : Q_p]`.
    pub d: usize,
    pub n: usize,
    /// Whether `p > n`; path construction needs it.
    pub path_assumption: bool,
}

impl DeformationParams {
    pub fn new(field: Field, d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::UnsupportedParameters("d and n must be positive".into()));
        }
        let q = field.q();
        if q >= 3 {
            let phi = totient_prime_power(field.p(), q) as usize;
            if d % phi != 0 {
                return Err(Error::UnsupportedParameters(format!(
                    "d = {d} must be a multiple of φ(q) = {phi}"
                )));
            }
        }
        let path_assumption = field.p() > n as u64;
        Ok(Self { field, d, n, path_assumption })
    }

    /// Number of generators: `d + 2` when `q ≥ 3`, `d + 1` when `q = 1`.
    pub fn tuple_len(&self) -> usize {
        if self.field.q() == 1 {
            self.d + 1
        } else {
            self.d + 2
        }
    }

    pub fn to_repr(&self) -> ParamsRepr {
        ParamsRepr {
            p: self.field.p(),
            q: self.field.q(),
            d: self.d,
            n: self.n,
            precision: self.field.precision(),
            f0: self.field.f0(),
        }
    }
}

/// Serialized parameters `{p, q, d, n, N, f0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRepr {
    pub p: u64,
    pub q: u64,
    pub d: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub precision: i64,
    #[serde(default = "default_f0")]
    pub f0: usize,
}

fn default_f0() -> usize {
    1
}

impl ParamsRepr {
    pub fn build(&self) -> Result<DeformationParams> {
        let field = make_field(self.p, self.q, self.f0, self.precision)?;
        DeformationParams::new(field, self.d, self.n)
    }
}

#[derive(Clone, Debug)]
pub struct DeformationPoint {
    pub params: DeformationParams,
    pub matrices: Vec<Mat>,
}

impl DeformationPoint {
    /// Checks the tuple length and matrix sizes.
    pub fn new(params: DeformationParams, matrices: Vec<Mat>) -> Result<Self> {
        if matrices.len() != params.tuple_len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrices, found {}",
                params.tuple_len(),
                matrices.len()
            )));
        }
        if matrices.iter().any(|m| m.rows() != params.n || m.cols() != params.n) {
            return Err(Error::DimensionMismatch(format!("matrices must be {0}×{0}", params.n)));
        }
        Ok(Self { params, matrices })
    }

    pub fn field(&self) -> &Field {
        &self.params.field
    }

    /// Every `M_i ≡ I (mod m_F)`.
    pub fn is_residually_trivial(&self) -> bool {
        self.matrices.iter().all(|m| m.is_integral() && m.is_identity_mod_m())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.matrices.len() == other.matrices.len()
            && self.matrices.iter().zip(&other.matrices).all(|(a, b)| a.approx_eq(b))
    }

    pub fn to_file(&self, meta: Option<PointMeta>) -> PointFile {
        PointFile {
            params: self.params.to_repr(),
            matrices: self.matrices.iter().map(Mat::to_repr).collect(),
            meta,
        }
    }
}

/// On-disk form of a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub params: ParamsRepr,
    pub matrices: Vec<MatRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<PointMeta>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMeta {
    pub seed: u64,
    pub eigenvalues: Vec<usize>,
}

impl PointFile {
    pub fn to_point(&self) -> Result<DeformationPoint> {
        let params = self.params.build()?;
        let matrices = self
            .matrices
            .iter()
            .map(|m| Mat::from_repr(&params.field, m))
            .collect::<Result<Vec<_>>>()?;
        DeformationPoint::new(params, matrices)
    }
}

/// Valuation of the relation residual; `Infinite` when it vanishes at full precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Residual {
    Finite(i64),
    Infinite,
}

impl Residual {
    pub fn at_least(&self, threshold: i64) -> bool {
        match self {
            Residual::Infinite => true,
            Residual::Finite(v) => *v >= threshold,
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Infinite => write!(f, "∞"),
            Residual::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// `ζ^index` for the field's fixed primitive root `ζ`.
#[derive(Clone, Debug)]
pub struct ComponentLabel {
    pub index: usize,
    pub element: LocalElement,
}

impl ComponentLabel {
    pub fn new(field: &Field, index: usize) -> Result<Self> {
        let roots = enumerate_mu_q(field);
        let element = roots
            .get(index)
            .cloned()
            .ok_or_else(|| Error::UnsupportedParameters(format!("label {index} ≥ q = {}", field.q())))?;
        Ok(Self { index, element })
    }
}

impl PartialEq for ComponentLabel {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

fn commutator(a: &Mat, b: &Mat) -> Result<Mat> {
    Ok(a.mul(b).mul(&a.inverse()?).mul(&b.inverse()?))
}

/// The left side of the relation, `M₁^q [M₁,M₂] ⋯ [M_{d+1},M_{d+2}]`.
pub fn relation_word(mats: &[Mat], q: u64) -> Result<Mat> {
    let mut w = mats[0].pow(q);
    for pair in mats.chunks(2) {
        if let [a, b] = pair {
            w = w.mul(&commutator(a, b)?);
        }
    }
    Ok(w)
}

pub fn residual_of(m: &Mat) -> Residual {
    let n = m.field().precision();
    if m.entries().all(|x| x.is_zero() && x.absolute_precision() >= n) {
        Residual::Infinite
    } else {
        Residual::Finite(m.min_valuation())
    }
}

pub fn check_relation(pt: &DeformationPoint) -> Result<Residual> {
    let field = pt.field();
    if field.q() == 1 {
        for m in &pt.matrices {
            m.inverse()?;
        }
        return Ok(Residual::Infinite);
    }
    let w = relation_word(&pt.matrices, field.q())?;
    Ok(residual_of(&w.sub(&Mat::identity(field, pt.params.n))))
}

/// The label `ζ` with `det(M₁) = ζ`.
pub fn det_component(pt: &DeformationPoint) -> Result<ComponentLabel> {
    label_of_unit(&pt.matrices[0].det())
}

pub(crate) fn label_of_unit(x: &LocalElement) -> Result<ComponentLabel> {
    let field = x.field().clone();
    let q = field.q();
    let one = LocalElement::one(&field);
    if !x.pow(q).eq_at(&one, field.tau()) {
        return Err(Error::RelationViolated("det(M₁)^q ≠ 1 at the tolerance".into()));
    }
    let exact = hensel_lift_unity(x, q).map_err(|e| match e {
        Error::OutsideBasin(s) => Error::PrecisionExhausted(s),
        other => other,
    })?;
    let index = mu_q_index(&exact)?;
    Ok(ComponentLabel { index, element: exact })
}

/// `x_ζ = (diag(ζ, 1, …, 1), I, …, I)`.
pub fn canonical_point(params: &DeformationParams, label: &ComponentLabel) -> DeformationPoint {
    diagonal_point(params, &[label.index])
}

/// `(diag(ζ^{k_1}, …, ζ^{k_r}, 1, …, 1), I, …, I)`.
pub fn diagonal_point(params: &DeformationParams, labels: &[usize]) -> DeformationPoint {
    let field = &params.field;
    let roots = enumerate_mu_q(field);
    let one = LocalElement::one(field);
    let diag: Vec<LocalElement> = (0..params.n)
        .map(|i| labels.get(i).map_or(one.clone(), |k| roots[*k].clone()))
        .collect();
    let mut matrices = vec![Mat::identity(field, params.n); params.tuple_len()];
    matrices[0] = Mat::diagonal(&diag);
    DeformationPoint { params: params.clone(), matrices }
}

/// `M₃ = ⋯ = M_{d+2} = I` at the tolerance.
pub fn is_in_v(pt: &DeformationPoint) -> bool {
    let id = Mat::identity(pt.field(), pt.params.n);
    pt.matrices.iter().skip(2).all(|m| m.approx_eq(&id))
}

/// Samples a point of `V` with `M₁` semisimple with eigenvalues `ζ^{k}` for `k` in
/// `eigenvalues`, conjugated by a random element of `1 + Mat_n(m_F)`.
pub fn sample_point_on_v(
    params: &DeformationParams,
    seed: u64,
    eigenvalues: &[usize],
) -> Result<DeformationPoint> {
    if !params.path_assumption {
        return Err(Error::AssumptionViolated(format!(
            "p = {} must exceed n = {}",
            params.field.p(),
            params.n
        )));
    }
    if eigenvalues.len() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "expected {} eigenvalues, found {}",
            params.n,
            eigenvalues.len()
        )));
    }
    let field = &params.field;
    let roots = enumerate_mu_q(field);
    if let Some(k) = eigenvalues.iter().find(|k| **k >= roots.len()) {
        return Err(Error::UnsupportedParameters(format!("eigenvalue label {k} ≥ q")));
    }
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = LocalElement::one(field);
    let zero = LocalElement::zero(field);
    let g = Mat::from_fn(n, n, |i, j| {
        let x = LocalElement::random_in_maximal(field, &mut rng);
        if i == j {
            x.add(&one)
        } else {
            x
        }
    });
    let d = Mat::diagonal(&eigenvalues.iter().map(|k| roots[*k].clone()).collect::<Vec<_>>());
    let c = Mat::from_fn(n, n, |i, j| {
        if i > j || eigenvalues[i] != eigenvalues[j] {
            zero.clone()
        } else if i == j {
            one.add(&LocalElement::random_in_maximal(field, &mut rng))
        } else {
            LocalElement::random_in_maximal(field, &mut rng)
        }
    });
    let g_inv = g.inverse_integral()?;
    let mut matrices = vec![Mat::identity(field, n); params.tuple_len()];
    matrices[0] = d.conjugate_by(&g, &g_inv);
    if matrices.len() > 1 {
        matrices[1] = c.conjugate_by(&g, &g_inv);
    }
    DeformationPoint::new(params.clone(), matrices)
}
