use std::sync::Arc;

use super::integrate::integrate_chain_as;
use super::operator::TensorOperator;
use crate::error::{Error, Result};
use crate::graph::AffineCubicalChain;
use crate::spectral::{Basis, EigenvalueSet};

/// `Σ_i T^{α_i}(σ)` on the span of `∪ α_i`.
#[derive(Clone, Debug)]
pub struct SumOutcome {
    pub operator: TensorOperator,
    /// Set when two cutoffs share an eigenvalue: the sum is still
    /// computed, but it no longer respects composition.
    pub warning: Option<String>,
}

pub fn sum_tcft(
    chain: &AffineCubicalChain,
    in_arity: usize,
    out_arity: usize,
    dim: usize,
    cutoffs: &[EigenvalueSet],
) -> Result<SumOutcome> {
    let union = cutoffs.iter().fold(EigenvalueSet::empty(), |u, a| u.union(a));
    let space: Arc<Basis> = Basis::shared(dim, &union)?;
    let mut warning = None;
    for (i, a) in cutoffs.iter().enumerate() {
        if let Some(b) = cutoffs[..i].iter().find(|b| !a.is_disjoint(b)) {
            warning = Some(format!("cutoffs {b} and {a} overlap; the sum is not a functor"));
            break;
        }
    }
    let mut operator = TensorOperator::zero(space.clone(), in_arity, out_arity);
    for a in cutoffs {
        let t = integrate_chain_as(chain, in_arity, out_arity, a, &space)?;
        operator = operator.add(&t)?;
    }
    if cutoffs.is_empty() && !chain.is_zero() {
        return Err(Error::Config("a sum needs at least one cutoff".into()));
    }
    Ok(SumOutcome { operator, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::integrate_chain;
    use crate::graph::identity_graph;

    #[test]
    fn disjoint_sum_of_identities_is_the_joint_identity() {
        let a = EigenvalueSet::new(2, [0]).unwrap();
        let b = EigenvalueSet::new(2, [1]).unwrap();
        let s = sum_tcft(&identity_graph(1), 1, 1, 2, &[a.clone(), b.clone()]).unwrap();
        assert!(s.warning.is_none());
        let joint = integrate_chain(&identity_graph(1), 2, &a.union(&b)).unwrap();
        assert!(s.operator.max_abs_diff(&joint).unwrap() < 1e-15);
    }

    #[test]
    fn overlap_is_flagged() {
        let a = EigenvalueSet::new(2, [1]).unwrap();
        let s = sum_tcft(&identity_graph(1), 1, 1, 2, &[a.clone(), a]).unwrap();
        assert!(s.warning.is_some());
    }
}
