use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expsum::VarId;
use crate::graph::{format_violations, RibbonGraph, VertexId};
use crate::kernel::{koszul_sign, propagator, Leg, MetForm, PointId, X, Y};
use crate::spectral::{Basis, EigenvalueSet, SpectralForm};

/// Ribbon graph with one propagator per edge (variable `t_e = e`) and an
/// input slot per incoming vertex.
///
/// Legs are tagged `(vertex, key)`: key 0 is the input at an incoming
/// vertex, key `i + 1` the `i`-th half-edge of the vertex cycle read from
/// its least half-edge id.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    graph: RibbonGraph,
    cutoff: EigenvalueSet,
    space: Arc<Basis>,
    propagators: Vec<MetForm>,
}

/// Labels with kernels and inputs both cut off at `cutoff`.
pub fn label_graph(g: &RibbonGraph, dim: usize, cutoff: &EigenvalueSet) -> Result<LabeledGraph> {
    label_graph_in(g, cutoff, &Basis::shared(dim, cutoff)?)
}

/// Labels with kernels cut off at `cutoff`, acting on the larger `space`.
pub fn label_graph_in(g: &RibbonGraph, cutoff: &EigenvalueSet, space: &Arc<Basis>) -> Result<LabeledGraph> {
    label_graph_mixed(g, &vec![cutoff.clone(); g.num_edges()], space)
}

/// Labels edge `e` with the kernel cut off at `cutoffs[e]`.
pub fn label_graph_mixed(g: &RibbonGraph, cutoffs: &[EigenvalueSet], space: &Arc<Basis>) -> Result<LabeledGraph> {
    if let Some(c) = cutoffs.iter().find(|c| !c.is_subset(space.cutoff())) {
        return Err(Error::CutoffMismatch(c.to_string(), space.cutoff().to_string()));
    }
    g.validate().map_err(|v| Error::Labeling(format_violations(&v)))?;
    if g.num_edges() > 64 {
        return Err(Error::Labeling(format!(
            "{} edges exceed the limit of 64",
            g.num_edges()
        )));
    }
    if cutoffs.len() != g.num_edges() {
        return Err(Error::Arity {
            expected: g.num_edges(),
            found: cutoffs.len(),
        });
    }
    let keys = leg_keys(g);
    let vertex_of = g.vertex_of();
    let mut propagators = Vec::with_capacity(g.num_edges());
    for (e, (a, b)) in g.edges().into_iter().enumerate() {
        let w = propagator(space.dim(), e as VarId, &cutoffs[e])?;
        let legs = [
            Leg::new(vertex_of[a as usize], keys[a as usize]),
            Leg::new(vertex_of[b as usize], keys[b as usize]),
        ];
        debug_assert_eq!(w.value.legs(), &[X, Y]);
        propagators.push(w.value.relabeled(&legs));
    }
    Ok(LabeledGraph {
        graph: g.clone(),
        cutoff: cutoffs.iter().fold(EigenvalueSet::empty(), |u, c| u.union(c)),
        space: space.clone(),
        propagators,
    })
}

/// Wedge-order key of every half-edge at its vertex.
fn leg_keys(g: &RibbonGraph) -> Vec<u32> {
    let mut keys = vec![0; g.num_half_edges()];
    for cycle in g.vertices() {
        let start = cycle.iter().enumerate().min_by_key(|(_, &h)| h).map_or(0, |(i, _)| i);
        for i in 0..cycle.len() {
            keys[cycle[(start + i) % cycle.len()] as usize] = i as u32 + 1;
        }
    }
    keys
}

impl LabeledGraph {
    pub fn graph(&self) -> &RibbonGraph {
        &self.graph
    }

    /// Union of the edge cutoffs.
    pub fn cutoff(&self) -> &EigenvalueSet {
        &self.cutoff
    }

    pub fn space(&self) -> &Arc<Basis> {
        &self.space
    }

    pub fn propagators(&self) -> &[MetForm] {
        &self.propagators
    }

    /// Input slot vertices, in incoming-label order.
    pub fn input_slots(&self) -> &[VertexId] {
        self.graph.incoming()
    }

    /// Substitutes fixed lengths into every propagator and drops the
    /// time generators; used for 0-cubes.
    pub fn at_lengths(&self, lengths: &[f64]) -> Result<LabeledGraph> {
        let assignment: BTreeMap<VarId, f64> = lengths.iter().enumerate().map(|(e, &l)| (e as VarId, l)).collect();
        let propagators = self
            .propagators
            .iter()
            .map(|p| p.truncate_dt(0).evaluate(&assignment))
            .collect::<Result<_>>()?;
        Ok(LabeledGraph {
            propagators,
            ..self.clone()
        })
    }

    /// Substitutes affine lengths `t_e = a_e + b_e·u` into the
    /// coefficients; time generators stay indexed by edge.
    pub fn along(&self, maps: &BTreeMap<VarId, (f64, Vec<f64>)>) -> Result<LabeledGraph> {
        let propagators = self
            .propagators
            .iter()
            .map(|p| {
                let mut out = MetForm::zero(p.dim(), p.legs());
                for (t, v) in p.terms() {
                    out.add_term(t.clone(), v.substitute_affine(maps)?);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(LabeledGraph {
            propagators,
            ..self.clone()
        })
    }

    fn check_inputs(&self, inputs: &[SpectralForm]) -> Result<()> {
        if inputs.len() != self.graph.in_arity() {
            return Err(Error::Arity {
                expected: self.graph.in_arity(),
                found: inputs.len(),
            });
        }
        for (slot, a) in inputs.iter().enumerate() {
            if a.dim() != self.space.dim() {
                return Err(Error::DimensionMismatch(a.dim(), self.space.dim()));
            }
            if let Some((b, _)) = a.terms().find(|(b, _)| !self.space.cutoff().contains(b.eigenvalue())) {
                return Err(Error::Projection {
                    slot,
                    eigenvalue: b.eigenvalue(),
                    cutoff: self.space.cutoff().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Wedges propagators and inputs at every vertex, traces every
    /// non-outgoing vertex and returns the form on the outgoing points,
    /// legs `(j, 0)` in outgoing-label order. Terms with more than
    /// `max_dt` time generators are dropped along the way.
    pub fn contract(&self, inputs: &[SpectralForm], max_dt: usize) -> Result<MetForm> {
        self.check_inputs(inputs)?;
        let dim = self.space.dim();
        let mut factors: Vec<Cow<'_, MetForm>> = self.propagators.iter().map(Cow::Borrowed).collect();
        for (a, &v) in inputs.iter().zip(self.graph.incoming()) {
            factors.push(Cow::Owned(MetForm::one_leg(a, Leg::new(v, 0))));
        }
        let mut pending: Vec<PointId> = (0..self.graph.num_vertices() as PointId)
            .filter(|&v| !self.graph.is_outgoing(v))
            .collect();
        while !pending.is_empty() {
            if factors.iter().any(|f| f.is_zero()) {
                return Ok(MetForm::zero(dim, &self.output_legs()));
            }
            // greedy: fewest incident terms first, ties to the lower vertex
            let (pos, &v) = pending
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| factors.iter().filter(|f| f.touches(v)).map(|f| f.len()).sum::<usize>())
                .expect("pending is nonempty");
            pending.remove(pos);
            factors = eliminate(factors, v, max_dt);
        }
        let refs: Vec<&MetForm> = factors.iter().map(|f| f.as_ref()).collect();
        let acc = MetForm::product_all(dim, &refs, max_dt);
        let outs = self.graph.outgoing();
        let mut order: Vec<usize> = (0..acc.legs().len()).collect();
        order.sort_by_key(|&i| {
            outs.iter()
                .position(|&o| o == acc.legs()[i].point)
                .expect("only outgoing legs survive")
        });
        Ok(acc.permute_legs(&order).relabeled(&self.output_legs()))
    }

    fn output_legs(&self) -> Vec<Leg> {
        (0..self.graph.out_arity() as PointId).map(|j| Leg::new(j, 0)).collect()
    }
}

/// Moves the factors touching `v` to the front (Koszul sign on factor
/// parities), multiplies them and traces `v`.
fn eliminate(factors: Vec<Cow<'_, MetForm>>, v: PointId, max_dt: usize) -> Vec<Cow<'_, MetForm>> {
    let parities: Vec<usize> = factors.iter().map(|f| f.parity().unwrap_or(0)).collect();
    let (touch, rest): (Vec<usize>, Vec<usize>) = (0..factors.len()).partition(|&i| factors[i].touches(v));
    let order: Vec<usize> = touch.iter().chain(&rest).copied().collect();
    let sign = koszul_sign(&parities, &order);
    let touching: Vec<&MetForm> = touch.iter().map(|&i| factors[i].as_ref()).collect();
    let mut traced = MetForm::trace_product(&touching, v, max_dt);
    if sign < 0.0 {
        traced = traced.scaled(-1.0);
    }
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.push(Cow::Owned(traced));
    let mut factors: Vec<Option<Cow<'_, MetForm>>> = factors.into_iter().map(Some).collect();
    out.extend(
        rest.into_iter()
            .map(|i| factors[i].take().expect("each factor moves once")),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::identity_graph;
    use crate::spectral::enumerate_basis;

    fn star3_two_in() -> RibbonGraph {
        // in0 -e0- c, in1 -e1- c, c -e2- out
        RibbonGraph::from_pairs(
            &[(0, 1), (2, 3), (4, 5)],
            vec![vec![0], vec![2], vec![1, 3, 4], vec![5]],
            vec![0, 1],
            vec![3],
        )
    }

    #[test]
    fn single_edge_labels_one_propagator() {
        let g = &identity_graph(1).summands[0].graph;
        let lg = label_graph(g, 2, &EigenvalueSet::up_to(2, 1).unwrap()).unwrap();
        assert_eq!(lg.propagators().len(), 1);
        assert_eq!(lg.input_slots(), &[0]);
    }

    #[test]
    fn loop_edge_attaches_both_legs_to_one_vertex() {
        let tadpole = RibbonGraph::from_pairs(&[(0, 1), (2, 3)], vec![vec![0], vec![1, 2, 3]], vec![0], vec![]);
        let lg = label_graph(&tadpole, 2, &EigenvalueSet::up_to(2, 0).unwrap()).unwrap();
        let legs = lg.propagators()[1].legs();
        assert_eq!(legs[0].point, legs[1].point);
    }

    #[test]
    fn invalid_graph_is_a_labeling_error() {
        let g = RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0, 0], vec![]);
        assert!(matches!(
            label_graph(&g, 2, &EigenvalueSet::up_to(2, 0).unwrap()),
            Err(Error::Labeling(_))
        ));
    }

    #[test]
    fn input_outside_cutoff_is_rejected() {
        let g = &identity_graph(1).summands[0].graph;
        let lg = label_graph(g, 2, &EigenvalueSet::up_to(2, 0).unwrap()).unwrap();
        let big = enumerate_basis(2, &EigenvalueSet::new(2, [1]).unwrap()).unwrap()[0];
        assert!(matches!(
            lg.contract(&[SpectralForm::basis(big)], 0),
            Err(Error::Projection {
                slot: 0,
                eigenvalue: 1,
                ..
            })
        ));
    }

    #[test]
    fn cross_cutoff_legs_at_a_traced_vertex_vanish() {
        // λ=1 on the first input edge, λ=2 on the second: an input pair in
        // λ=1 is killed by the second edge
        let g = star3_two_in();
        let space = Basis::shared(2, &EigenvalueSet::up_to(2, 2).unwrap()).unwrap();
        let a1 = EigenvalueSet::new(2, [1]).unwrap();
        let a2 = EigenvalueSet::new(2, [2]).unwrap();
        let mixed = label_graph_mixed(&g, &[a1.clone(), a2, a1], &space).unwrap();
        for b0 in space.forms().iter().filter(|b| b.eigenvalue() == 1) {
            let inputs = [SpectralForm::basis(*b0), SpectralForm::basis(*b0)];
            assert!(mixed.contract(&inputs, 0).unwrap().is_zero());
        }
    }
}
