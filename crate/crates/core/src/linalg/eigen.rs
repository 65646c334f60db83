use crate::error::{Error, Result};
use crate::localring::{enumerate_mu_q, mu_q_index, LocalElement};

use super::mat::Mat;
use super::roots::root_multiplicity;
use super::smith::{kernel_basis, rank_strict};

/// Nested bases `ker(M−λ) ⊆ ker(M−λ)² ⊆ …`: the first `shape[k]` vectors of `basis`
/// span the `(k+1)`-th stage.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub basis: Vec<Vec<LocalElement>>,
    pub shape: Vec<usize>,
}

impl Filtration {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Generalized eigenspace of `m` for `λ ∈ μ_q(F)`, probing powers up to `cap`.
pub fn generalized_eigenspace(m: &Mat, lambda: &LocalElement, cap: usize) -> Result<Filtration> {
    let field = m.field().clone();
    mu_q_index(lambda).map_err(|_| {
        Error::UnsupportedParameters("eigenvalue must be a q-th root of unity in F".into())
    })?;
    let n = m.rows();
    let shifted = m.sub(&Mat::identity(&field, n).scale(lambda));
    let mut power = Mat::identity(&field, n);
    let mut basis: Vec<Vec<LocalElement>> = Vec::new();
    let mut shape = Vec::new();
    let mut stabilized = false;
    for _ in 0..cap {
        power = power.mul(&shifted);
        let kernel = kernel_basis(&power)?;
        if kernel.len() == basis.len() {
            stabilized = true;
            break;
        }
        for v in kernel.iter() {
            if basis.len() == kernel.len() {
                break;
            }
            let mut trial = basis.clone();
            trial.push(v.clone());
            if rank_strict(&Mat::from_columns(&trial))? == trial.len() {
                basis = trial;
            }
        }
        if basis.len() != kernel.len() {
            return Err(Error::PrecisionExhausted("kernels are not nested at this precision".into()));
        }
        shape.push(basis.len());
    }
    if stabilized || cap >= n {
        let mult = root_multiplicity(&m.charpoly(), lambda, field.tau());
        if mult != basis.len() {
            return Err(Error::PrecisionExhausted(format!(
                "generalized eigenspace has dimension {} but λ has multiplicity {mult}",
                basis.len()
            )));
        }
    }
    Ok(Filtration { basis, shape })
}

/// `(k, dim)` for each `ζ^k` that is an eigenvalue of `m`, in increasing `k`.
pub fn eigenvalue_multiplicities(m: &Mat) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (k, lambda) in enumerate_mu_q(m.field()).iter().enumerate() {
        let f = generalized_eigenspace(m, lambda, m.rows())?;
        if f.dimension() > 0 {
            out.push((k, f.dimension()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{make_field, primitive_root};

    #[test]
    fn jordan_block_filtration() {
        let field = make_field(3, 3, 1, 24).unwrap();
        let z = primitive_root(&field);
        let one = LocalElement::one(&field);
        let zero = LocalElement::zero(&field);
        let m = Mat::from_rows(vec![
            vec![z.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), z.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone()],
        ]);
        let f = generalized_eigenspace(&m, &z, 3).unwrap();
        assert_eq!(f.shape, vec![1, 2]);
        let g = generalized_eigenspace(&m, &one, 3).unwrap();
        assert_eq!(g.shape, vec![1]);
        assert_eq!(eigenvalue_multiplicities(&m).unwrap(), vec![(0, 1), (1, 2)]);
    }
}
