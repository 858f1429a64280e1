//! Ribbon graphs, their metrized cells, gluing, and affine cubical chains.

mod chain;
mod ribbon;
mod text;

pub(crate) use chain::{affine_table, format_violations};
pub use chain::{
    braiding_chain, identity_graph, permutation_chain, AffineCubicalChain, AffineMap, MetrizedGraph, Summand,
};
pub use ribbon::{EdgeId, EdgeOrigin, HalfEdge, RibbonGraph, VertexId, Violation};
pub use text::{parse_chain, parse_graph, write_chain, write_graph};
