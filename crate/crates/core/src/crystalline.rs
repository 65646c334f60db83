//! Exponent-level check that regular crystalline witnesses `ρ_m` reach every component.
//!
//! The characters involved come from local class field theory and are not computed;
//! the only input taken on trust is that `ξ = χ₀(rec ζ₀)` is a primitive `q`-th root
//! of unity.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deformation::{label_of_unit, ComponentLabel, DeformationParams};
use crate::error::{Error, Result};
use crate::localring::{LocalElement, p_power_exponent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightChoice {
    pub q: u64,
    /// `I = {0 < i < q : gcd(i, q) = 1}`.
    pub indices: Vec<u64>,
    /// `|J|`.
    pub j_count: usize,
    /// `h[a][b]` is the weight attached to `(indices[a], b)`.
    pub h: Vec<Vec<u64>>,
    /// Inertia degree `f` of `K`.
    pub f: u32,
}

impl WeightChoice {
    /// `S = Σ i·h_{i,j}`.
    pub fn s(&self) -> u64 {
        self.indices
            .iter()
            .zip(&self.h)
            .map(|(i, row)| i * row.iter().sum::<u64>())
            .sum()
    }

    pub fn with_inertia_degree(mut self, f: u32) -> Self {
        self.f = f;
        self
    }
}

pub fn unit_indices(q: u64) -> Vec<u64> {
    (1..q).filter(|i| i.gcd(&q) == 1).collect()
}

/// Positive weights with `gcd(S, q) = 1`. Without a seed, `h ≡ 1` (bumped in one slot
/// when needed); with a seed, random entries in `1..=4` adjusted the same way.
pub fn choose_weights(q: u64, j_count: usize, seed: Option<u64>) -> Result<WeightChoice> {
    if q < 3 {
        return Err(Error::UnsupportedParameters(format!("q = {q} must be at least 3")));
    }
    if j_count == 0 {
        return Err(Error::UnsupportedParameters("|J| must be positive".into()));
    }
    let indices = unit_indices(q);
    let h = match seed {
        None => vec![vec![1; j_count]; indices.len()],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..indices.len()).map(|_| (0..j_count).map(|_| rng.gen_range(1..=4)).collect()).collect()
        }
    };
    let mut w = WeightChoice { q, indices, j_count, h, f: 1 };
    // indices[0] = 1, so bumping h[0][0] moves S by one
    while w.s().gcd(&q) != 1 {
        w.h[0][0] += 1;
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub m: u64,
    /// Hodge–Tate weights, one list per embedding `(i, j)`.
    pub weights: Vec<Vec<u64>>,
    pub regular: bool,
    /// Exponent `k` with `det ρ_m(rec ζ₀) = ξ^k`.
    pub label: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub p: u64,
    pub q: u64,
    pub n: usize,
    pub s: u64,
    /// `S·(p^f − 1) mod q`.
    pub s_twisted: u64,
    /// `gcd(S·(p^f − 1), q) = 1`.
    pub xi_primitive: bool,
    pub rows: Vec<WitnessRow>,
    pub cited: String,
}

impl WitnessReport {
    /// The labels are exactly `Z/q`.
    pub fn covers_all_components(&self) -> bool {
        let mut seen = vec![false; self.q as usize];
        for r in &self.rows {
            seen[r.label as usize] = true;
        }
        self.rows.len() == self.q as usize && seen.into_iter().all(|x| x)
    }

    pub fn all_regular(&self) -> bool {
        self.rows.iter().all(|r| r.regular)
    }
}

pub fn witness_components(params: &DeformationParams, w: &WeightChoice) -> Result<WitnessReport> {
    let field = &params.field;
    let (p, q, n) = (field.p(), field.q(), params.n);
    if !params.path_assumption {
        return Err(Error::AssumptionViolated(format!("p = {p} must exceed n = {n}")));
    }
    if w.q != q || p_power_exponent(p, q).is_none() {
        return Err(Error::UnsupportedParameters(format!("weights are for q = {}, field has q = {q}", w.q)));
    }
    let twist = p
        .checked_pow(w.f)
        .map(|x| x - 1)
        .ok_or_else(|| Error::UnsupportedParameters("p^f overflows".into()))?;
    let s = w.s();
    let s_twisted = ((s % q) as u128 * (twist % q) as u128 % q as u128) as u64;
    let base = (n * (n + 1) / 2) as u64;
    let rows = (0..q)
        .map(|m| {
            let exps: Vec<u64> = (1..n as u64).chain(std::iter::once(n as u64 + m)).collect();
            let weights: Vec<Vec<u64>> = w
                .h
                .iter()
                .flatten()
                .map(|h| exps.iter().map(|e| twist * h * e).collect())
                .collect();
            let regular = weights.iter().all(|ws| {
                let mut sorted = ws.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == ws.len() && !ws.contains(&0)
            });
            WitnessRow { m, weights, regular, label: (base + m) % q }
        })
        .collect();
    Ok(WitnessReport {
        p,
        q,
        n,
        s,
        s_twisted,
        xi_primitive: s_twisted.gcd(&q) == 1,
        rows,
        cited: "χ₀(rec ζ₀) is a primitive q-th root of unity when gcd(S, q) = 1".into(),
    })
}

/// Component of an abelian (`n = 1`) point from the value on the first generator.
pub fn classify_character_point(values: &[LocalElement]) -> Result<ComponentLabel> {
    let first = values.first().ok_or_else(|| Error::Malformed("no values".into()))?;
    label_of_unit(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{det_component, DeformationPoint};
    use crate::linalg::Mat;
    use crate::localring::{enumerate_mu_q, make_field};

    fn params(p: u64, q: u64, n: usize) -> DeformationParams {
        let field = make_field(p, q, 1, 32).unwrap();
        let d = crate::localring::totient_prime_power(p, q) as usize;
        DeformationParams::new(field, d, n).unwrap()
    }

    #[test]
    fn default_weights() {
        let w = choose_weights(3, 1, None).unwrap();
        assert_eq!(w.h, vec![vec![2], vec![1]]);
        assert_eq!(w.s(), 4);
        let w = choose_weights(5, 1, None).unwrap();
        assert_eq!(w.s(), 11);
        assert_eq!(choose_weights(9, 2, Some(4)).unwrap(), choose_weights(9, 2, Some(4)).unwrap());
    }

    #[test]
    fn seeded_weights_are_valid() {
        for seed in 0..50 {
            for q in [3, 5, 9, 25] {
                let w = choose_weights(q, 3, Some(seed)).unwrap();
                assert!(w.h.iter().flatten().all(|h| *h > 0));
                assert_eq!(w.s().gcd(&q), 1);
            }
        }
    }

    #[test]
    fn labels_match_examples() {
        let w = choose_weights(5, 1, None).unwrap();
        let r = witness_components(&params(5, 5, 2), &w).unwrap();
        assert_eq!(r.rows.iter().map(|x| x.label).collect::<Vec<_>>(), vec![3, 4, 0, 1, 2]);
        let r = witness_components(&params(5, 5, 3), &w).unwrap();
        assert_eq!(r.rows.iter().map(|x| x.label).collect::<Vec<_>>(), vec![1, 2, 3, 4, 0]);
        assert!(r.covers_all_components() && r.all_regular() && r.xi_primitive);
        assert!(witness_components(&params(3, 3, 3), &choose_weights(3, 1, None).unwrap()).is_err());
    }

    #[test]
    fn n1_classifier_matches_determinant() {
        let pr = params(5, 5, 1);
        let f = pr.field.clone();
        for (k, z) in enumerate_mu_q(&f).iter().enumerate() {
            let mut mats = vec![Mat::identity(&f, 1); pr.tuple_len()];
            mats[0] = Mat::diagonal(&[z.clone()]);
            mats[1] = Mat::diagonal(&[LocalElement::one(&f).add(&LocalElement::pi(&f))]);
            let pt = DeformationPoint::new(pr.clone(), mats.clone()).unwrap();
            let values: Vec<LocalElement> = mats.iter().map(|m| m.get(0, 0).clone()).collect();
            assert_eq!(classify_character_point(&values).unwrap().index, k);
            assert_eq!(det_component(&pt).unwrap().index, k);
        }
        let bad = vec![LocalElement::one(&f).add(&LocalElement::pi(&f).mul(&LocalElement::pi(&f)))];
        assert!(matches!(classify_character_point(&bad), Err(Error::RelationViolated(_))));
    }
}
