//! Small ribbon graphs and chains exercised by the suite.
//!
//! Half-edges `2e, 2e + 1` always form edge `e` unless noted otherwise.

use crate::error::{Error, Result};
use crate::graph::{braiding_chain, identity_graph, AffineCubicalChain, AffineMap, RibbonGraph, Summand};

/// Incoming vertex joined to an outgoing vertex.
pub fn edge() -> RibbonGraph {
    RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0], vec![1])
}

/// Two incoming legs meeting at a trivalent vertex with one outgoing leg.
pub fn star_merge() -> RibbonGraph {
    RibbonGraph::from_pairs(
        &[(0, 1), (2, 3), (4, 5)],
        vec![vec![0], vec![2], vec![1, 3, 4], vec![5]],
        vec![0, 1],
        vec![3],
    )
}

/// One incoming leg splitting at a trivalent vertex into two outgoing legs.
pub fn star_split() -> RibbonGraph {
    RibbonGraph::from_pairs(
        &[(0, 1), (2, 3), (4, 5)],
        vec![vec![0], vec![1, 2, 4], vec![3], vec![5]],
        vec![0],
        vec![2, 3],
    )
}

/// Two outgoing vertices joined by an edge.
pub fn cup() -> RibbonGraph {
    RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![], vec![0, 1])
}

/// Two incoming vertices joined by an edge.
pub fn cap() -> RibbonGraph {
    RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0, 1], vec![])
}

/// Incoming leg ending at a trivalent vertex carrying a loop.
pub fn tadpole() -> RibbonGraph {
    RibbonGraph::from_pairs(&[(0, 1), (2, 3)], vec![vec![0], vec![1, 2, 3]], vec![0], vec![])
}

/// Closed graph: two trivalent vertices joined by three edges.
pub fn theta() -> RibbonGraph {
    RibbonGraph::from_pairs(
        &[(0, 3), (1, 4), (2, 5)],
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        vec![],
        vec![],
    )
}

/// Closed graph: two loops joined by a bridge.
pub fn dumbbell() -> RibbonGraph {
    RibbonGraph::from_pairs(
        &[(0, 1), (2, 3), (4, 5)],
        vec![vec![0, 1, 2], vec![3, 4, 5]],
        vec![],
        vec![],
    )
}

/// Graph at fixed lengths.
pub fn point(graph: RibbonGraph, lengths: &[f64]) -> AffineCubicalChain {
    AffineCubicalChain::point(graph, lengths)
}

/// Affine cube `t_e = offset_e + Σ_i slopes_e[i] u_i`.
pub fn cube(graph: RibbonGraph, maps: &[(f64, &[f64])]) -> AffineCubicalChain {
    let k = maps.first().map_or(0, |m| m.1.len());
    AffineCubicalChain::single(Summand {
        coef: 1.0,
        cube_dim: k,
        graph,
        lengths: maps
            .iter()
            .map(|&(offset, slopes)| AffineMap {
                offset,
                slopes: slopes.to_vec(),
            })
            .collect(),
    })
}

/// A named chain at fixed lengths, used by dumps and the CLI.
pub fn named_chain(name: &str) -> Result<AffineCubicalChain> {
    Ok(match name {
        "edge" => point(edge(), &[0.5]),
        "star-merge" => point(star_merge(), &[0.3, 0.4, 0.5]),
        "star-split" => point(star_split(), &[0.3, 0.4, 0.5]),
        "cup" => point(cup(), &[0.7]),
        "cap" => point(cap(), &[0.7]),
        "tadpole" => point(tadpole(), &[0.4, 0.6]),
        "theta" => point(theta(), &[0.3, 0.5, 0.7]),
        "dumbbell" => point(dumbbell(), &[0.6, 0.2, 0.4]),
        "identity" => identity_graph(1),
        "identity-2" => identity_graph(2),
        "braiding-1-1" => braiding_chain(1, 1),
        "braiding-2-1" => braiding_chain(2, 1),
        other => return Err(Error::UnknownTarget(other.to_string())),
    })
}

pub const NAMED_CHAINS: &[&str] = &[
    "edge",
    "star-merge",
    "star-split",
    "cup",
    "cap",
    "tadpole",
    "theta",
    "dumbbell",
    "identity",
    "identity-2",
    "braiding-1-1",
    "braiding-2-1",
];

/// `(name, first, second)`: the suite compares `T(first.then(second))`
/// with `T(second) ∘ T(first)`.
pub fn gluing_cases() -> Vec<(&'static str, AffineCubicalChain, AffineCubicalChain)> {
    let pair = point(edge(), &[0.2]).disjoint_union(&point(edge(), &[0.6]));
    vec![
        ("edge-edge", point(edge(), &[0.5]), point(edge(), &[0.25])),
        ("edges-into-merge", pair, point(star_merge(), &[0.3, 0.4, 0.5])),
        (
            "merge-into-edge",
            point(star_merge(), &[0.3, 0.4, 0.5]),
            point(edge(), &[0.35]),
        ),
        (
            "split-then-merge",
            point(star_split(), &[0.2, 0.3, 0.4]),
            point(star_merge(), &[0.5, 0.1, 0.3]),
        ),
        (
            "merge-then-split",
            point(star_merge(), &[0.2, 0.3, 0.4]),
            point(star_split(), &[0.5, 0.1, 0.3]),
        ),
        (
            "split-into-cap",
            point(star_split(), &[0.3, 0.2, 0.4]),
            point(cap(), &[0.5]),
        ),
        (
            "cup-into-merge",
            point(cup(), &[0.4]),
            point(star_merge(), &[0.3, 0.2, 0.6]),
        ),
        ("edge-interval", cube(edge(), &[(0.2, &[1.0])]), point(edge(), &[0.3])),
    ]
}

/// `(name, left, right)` for monoidality of disjoint unions.
pub fn monoidal_cases() -> Vec<(&'static str, AffineCubicalChain, AffineCubicalChain)> {
    vec![
        ("edge-edge", point(edge(), &[0.3]), point(edge(), &[0.8])),
        (
            "merge-edge",
            point(star_merge(), &[0.3, 0.4, 0.5]),
            point(edge(), &[0.2]),
        ),
        (
            "edge-split",
            point(edge(), &[0.6]),
            point(star_split(), &[0.2, 0.3, 0.4]),
        ),
        ("interval-edge", cube(edge(), &[(0.1, &[0.5])]), point(edge(), &[0.4])),
        ("edge-interval", point(edge(), &[0.4]), cube(edge(), &[(0.1, &[0.5])])),
    ]
}

/// Chains for the boundary identity: a 1-cube and two 2-cubes.
pub fn chain_map_cases() -> Vec<(&'static str, AffineCubicalChain)> {
    vec![
        ("edge-interval", cube(edge(), &[(0.0, &[1.0])])),
        (
            "merge-interval",
            cube(star_merge(), &[(0.2, &[0.5]), (0.3, &[0.0]), (0.1, &[0.7])]),
        ),
        (
            "merge-square",
            cube(
                star_merge(),
                &[(0.2, &[1.0, 0.0]), (0.3, &[0.0, 1.0]), (0.1, &[0.5, 0.5])],
            ),
        ),
        (
            "split-square",
            cube(
                star_split(),
                &[(0.1, &[0.3, 0.0]), (0.4, &[0.0, 0.6]), (0.2, &[0.2, 0.2])],
            ),
        ),
    ]
}

/// Chains on which the eigenvalue-split sum must agree with the joint
/// cutoff: connected graphs with no internal vertex.
pub fn additive_cases() -> Vec<(&'static str, AffineCubicalChain)> {
    vec![
        ("edge", point(edge(), &[0.5])),
        ("identity", identity_graph(1)),
        (
            "glued-edges",
            point(edge(), &[0.3])
                .then(&point(edge(), &[0.4]))
                .expect("arities match"),
        ),
        ("cup", point(cup(), &[0.7])),
        ("cap", point(cap(), &[0.7])),
        ("edge-interval", cube(edge(), &[(0.1, &[0.8])])),
    ]
}

/// Chains where the split sum misses mixed edge labelings: a trivalent
/// vertex, and two components.
pub fn additivity_gap_cases() -> Vec<(&'static str, AffineCubicalChain)> {
    vec![
        ("star-merge", point(star_merge(), &[0.3, 0.4, 0.5])),
        ("braiding-1-1", braiding_chain(1, 1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_graphs_validate() {
        for g in [
            edge(),
            star_merge(),
            star_split(),
            cup(),
            cap(),
            tadpole(),
            theta(),
            dumbbell(),
        ] {
            assert!(g.validate().is_ok(), "{g:?}");
        }
        for name in NAMED_CHAINS {
            named_chain(name).unwrap().check().unwrap();
        }
        for (_, a, b) in gluing_cases() {
            a.then(&b).unwrap().check().unwrap();
        }
        for (_, c) in chain_map_cases().into_iter().chain(additive_cases()) {
            c.check().unwrap();
        }
    }

    #[test]
    fn unknown_chain_is_reported() {
        assert!(matches!(named_chain("nope"), Err(Error::UnknownTarget(_))));
    }
}
