use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::contract::{label_graph_mixed, LabeledGraph};
use super::operator::{all_tuples, TensorOperator, Tuple};
use crate::error::{Error, Result};
use crate::graph::{affine_table, AffineCubicalChain, Summand};
use crate::kernel::{parity_sign, DtSet, MetForm};
use crate::spectral::{Basis, EigenvalueSet, SpectralForm};

/// Fibre orientation of a `k`-cube: moving `du_1…du_k` past the form legs
/// and integrating in the order `u_k, …, u_1`.
pub fn cube_orientation(k: usize) -> f64 {
    parity_sign(k * k.saturating_sub(1) / 2)
}

/// Operator of `chain` with kernels and inputs cut off at `cutoff`.
pub fn integrate_chain(chain: &AffineCubicalChain, dim: usize, cutoff: &EigenvalueSet) -> Result<TensorOperator> {
    integrate_chain_in(chain, cutoff, &Basis::shared(dim, cutoff)?)
}

/// Operator of `chain` with kernels cut off at `cutoff`, acting on `space`.
pub fn integrate_chain_in(
    chain: &AffineCubicalChain,
    cutoff: &EigenvalueSet,
    space: &Arc<Basis>,
) -> Result<TensorOperator> {
    let (Some(m), Some(n)) = (chain.in_arity(), chain.out_arity()) else {
        return Err(Error::InvalidChain("the empty chain has no arity".into()));
    };
    integrate_chain_as(chain, m, n, cutoff, space)
}

/// Operator of `chain` with edge `e` of every summand cut off at
/// `cutoffs[e]`; all summands must share the edge count.
pub fn integrate_chain_mixed(
    chain: &AffineCubicalChain,
    cutoffs: &[EigenvalueSet],
    space: &Arc<Basis>,
) -> Result<TensorOperator> {
    let (Some(m), Some(n)) = (chain.in_arity(), chain.out_arity()) else {
        return Err(Error::InvalidChain("the empty chain has no arity".into()));
    };
    integrate_with(chain, m, n, space, |_| cutoffs.to_vec())
}

/// As [`integrate_chain_in`], with the arity given so that the zero chain
/// integrates to the zero operator.
pub fn integrate_chain_as(
    chain: &AffineCubicalChain,
    in_arity: usize,
    out_arity: usize,
    cutoff: &EigenvalueSet,
    space: &Arc<Basis>,
) -> Result<TensorOperator> {
    integrate_with(chain, in_arity, out_arity, space, |s| {
        vec![cutoff.clone(); s.graph.num_edges()]
    })
}

fn integrate_with(
    chain: &AffineCubicalChain,
    in_arity: usize,
    out_arity: usize,
    space: &Arc<Basis>,
    edge_cutoffs: impl Fn(&Summand) -> Vec<EigenvalueSet>,
) -> Result<TensorOperator> {
    chain.check()?;
    for s in &chain.summands {
        if (s.graph.in_arity(), s.graph.out_arity()) != (in_arity, out_arity) {
            return Err(Error::Arity {
                expected: in_arity,
                found: s.graph.in_arity(),
            });
        }
    }
    let cells: Vec<Cell> = chain
        .summands
        .iter()
        .filter(|s| !s.is_degenerate() && s.coef != 0.0)
        .map(|s| Cell::new(s, &edge_cutoffs(s), space))
        .collect::<Result<_>>()?;
    let tuples = all_tuples(space.len(), in_arity);
    let columns: Vec<(Tuple, BTreeMap<Tuple, f64>)> = tuples
        .into_par_iter()
        .map(|t| {
            let inputs: Vec<SpectralForm> = t.iter().map(|&i| SpectralForm::basis(space.get(i as usize))).collect();
            let mut column = BTreeMap::new();
            // summands in chain order, so every entry has one summation order
            for cell in &cells {
                cell.accumulate(&inputs, space, &mut column)?;
            }
            Ok((t, column))
        })
        .collect::<Result<_>>()?;
    Ok(TensorOperator::from_columns(
        space.clone(),
        in_arity,
        out_arity,
        columns,
    ))
}

/// One summand, labeled and pulled back along its affine map.
struct Cell {
    coef: f64,
    k: usize,
    graph: LabeledGraph,
    /// `det B[D,:]` for every `k`-subset `D` of edges with nonzero minor.
    minors: BTreeMap<DtSet, f64>,
}

impl Cell {
    fn new(s: &Summand, cutoffs: &[EigenvalueSet], space: &Arc<Basis>) -> Result<Cell> {
        let lg = label_graph_mixed(&s.graph, cutoffs, space)?;
        let k = s.cube_dim;
        if k == 0 {
            let lengths: Vec<f64> = s.lengths.iter().map(|m| m.offset).collect();
            return Ok(Cell {
                coef: s.coef,
                k,
                graph: lg.at_lengths(&lengths)?,
                minors: BTreeMap::from([(DtSet::EMPTY, 1.0)]),
            });
        }
        if s.lengths.len() > 64 {
            return Err(Error::InvalidChain("more than 64 edges".into()));
        }
        let moving: Vec<usize> = (0..s.lengths.len())
            .filter(|&e| s.lengths[e].slopes.iter().any(|&b| b != 0.0))
            .collect();
        let mut minors = BTreeMap::new();
        for subset in k_subsets(&moving, k) {
            let b = DMatrix::from_fn(k, k, |r, c| s.lengths[subset[r]].slopes[c]);
            let det = b.determinant();
            if det != 0.0 {
                let bits = subset.iter().fold(0u64, |acc, &e| acc | 1 << e);
                minors.insert(DtSet::from_bits(bits), det);
            }
        }
        Ok(Cell {
            coef: s.coef,
            k,
            graph: lg.along(&affine_table(s))?,
            minors,
        })
    }

    fn accumulate(&self, inputs: &[SpectralForm], space: &Basis, column: &mut BTreeMap<Tuple, f64>) -> Result<()> {
        let form: MetForm = self.graph.contract(inputs, self.k)?;
        let scale = self.coef * cube_orientation(self.k);
        for (term, value) in form.terms() {
            let Some(minor) = self.minors.get(&term.dt) else {
                continue;
            };
            let integral = if self.k == 0 {
                value.value(&BTreeMap::new())?
            } else {
                value.integrate_unit_box()
            };
            let out: Tuple = term
                .forms
                .iter()
                .map(|f| {
                    space.index_of(f).map(|i| i as u32).ok_or_else(|| Error::Contraction {
                        edge: 0,
                        reason: format!("output form {f} lies outside the space"),
                    })
                })
                .collect::<Result<_>>()?;
            *column.entry(out).or_insert(0.0) += scale * minor * integral;
        }
        Ok(())
    }
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let (first, rest) = items.split_first().expect("nonempty");
    let mut out: Vec<Vec<usize>> = k_subsets(rest, k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, *first);
            s
        })
        .collect();
    out.extend(k_subsets(rest, k));
    out
}
