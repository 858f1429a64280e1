//! Graph contraction, chain integration and the operator algebra they land in.

mod contract;
mod integrate;
mod operator;
mod sum;

pub use contract::{label_graph, label_graph_in, label_graph_mixed, LabeledGraph};
pub use integrate::{cube_orientation, integrate_chain, integrate_chain_as, integrate_chain_in, integrate_chain_mixed};
pub use operator::{all_tuples, TensorOperator, Tuple};
pub use sum::{sum_tcft, SumOutcome};
