use std::collections::BTreeMap;

use super::ribbon::{EdgeId, RibbonGraph, VertexId, Violation};
use crate::error::{Error, Result};

/// `l(u) = offset + Σ_i slopes[i]·u_i` on the unit cube.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub offset: f64,
    pub slopes: Vec<f64>,
}

impl AffineMap {
    pub fn constant(offset: f64, cube_dim: usize) -> AffineMap {
        AffineMap {
            offset,
            slopes: vec![0.0; cube_dim],
        }
    }

    pub fn at(&self, u: &[f64]) -> f64 {
        self.offset + self.slopes.iter().zip(u).map(|(b, x)| b * x).sum::<f64>()
    }

    /// Minimum over the unit cube.
    pub fn min_on_cube(&self) -> f64 {
        self.offset + self.slopes.iter().map(|&b| b.min(0.0)).sum::<f64>()
    }

    /// Restriction to the face `u_i = value`.
    fn face(&self, i: usize, value: f64) -> AffineMap {
        let mut slopes = self.slopes.clone();
        let b = slopes.remove(i);
        AffineMap {
            offset: self.offset + b * value,
            slopes,
        }
    }

    fn approx_eq(&self, other: &AffineMap, tol: f64) -> bool {
        self.slopes.len() == other.slopes.len()
            && (self.offset - other.offset).abs() <= tol
            && self.slopes.iter().zip(&other.slopes).all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// A metrized ribbon graph at a point of its cell.
#[derive(Clone, Debug, PartialEq)]
pub struct MetrizedGraph {
    pub graph: RibbonGraph,
    pub lengths: Vec<f64>,
}

impl MetrizedGraph {
    /// Zero-length edges may not close a cycle nor join two outgoing vertices.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        self.graph.validate()?;
        let mut out = Vec::new();
        let vertex_of = self.graph.vertex_of();
        let mut parent: Vec<usize> = (0..self.graph.num_vertices()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut zero_edges = Vec::new();
        for (e, (a, b)) in self.graph.edges().into_iter().enumerate() {
            if self.lengths.get(e).copied().unwrap_or(0.0) > 0.0 {
                continue;
            }
            zero_edges.push(e as EdgeId);
            let (u, v) = (vertex_of[a as usize] as usize, vertex_of[b as usize] as usize);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                out.push(Violation::ZeroLengthCycle(zero_edges.clone()));
            } else {
                parent[ru] = rv;
            }
        }
        let outs = self.graph.outgoing();
        for i in 0..outs.len() {
            for j in i + 1..outs.len() {
                if find(&mut parent, outs[i] as usize) == find(&mut parent, outs[j] as usize) {
                    out.push(Violation::ZeroLengthOutgoingPath(outs[i], outs[j]));
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

/// `coef · (u ∈ [0,1]^k ↦ (graph, l_e(u)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub coef: f64,
    pub cube_dim: usize,
    pub graph: RibbonGraph,
    pub lengths: Vec<AffineMap>,
}

impl Summand {
    pub fn point(graph: RibbonGraph, lengths: &[f64]) -> Summand {
        Summand {
            coef: 1.0,
            cube_dim: 0,
            lengths: lengths.iter().map(|&l| AffineMap::constant(l, 0)).collect(),
            graph,
        }
    }

    /// Image independent of some cube coordinate.
    pub fn is_degenerate(&self) -> bool {
        (0..self.cube_dim).any(|i| self.lengths.iter().all(|m| m.slopes[i] == 0.0))
    }

    /// Metrized graph at cube point `u`.
    pub fn at(&self, u: &[f64]) -> MetrizedGraph {
        MetrizedGraph {
            graph: self.graph.clone(),
            lengths: self.lengths.iter().map(|m| m.at(u)).collect(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.lengths.len() != self.graph.num_edges() {
            return Err(Error::InvalidChain(format!(
                "{} length maps for {} edges",
                self.lengths.len(),
                self.graph.num_edges()
            )));
        }
        if let Some(m) = self.lengths.iter().find(|m| m.slopes.len() != self.cube_dim) {
            return Err(Error::InvalidChain(format!(
                "affine map with {} slopes on a {}-cube",
                m.slopes.len(),
                self.cube_dim
            )));
        }
        if let Some(e) = self.lengths.iter().position(|m| m.min_on_cube() < 0.0) {
            return Err(Error::InvalidChain(format!("edge {e} has negative length on the cube")));
        }
        if let Err(v) = self.graph.validate() {
            return Err(Error::InvalidChain(format_violations(&v)));
        }
        // affine lengths vanish on a face exactly when they vanish at its corners
        for corner in 0..(1usize << self.cube_dim) {
            let u: Vec<f64> = (0..self.cube_dim).map(|i| ((corner >> i) & 1) as f64).collect();
            if let Err(v) = self.at(&u).validate() {
                return Err(Error::InvalidChain(format!("corner {u:?}: {}", format_violations(&v))));
            }
        }
        Ok(())
    }
}

pub(crate) fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Formal combination of affine cubes in closed cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AffineCubicalChain {
    pub summands: Vec<Summand>,
}

impl AffineCubicalChain {
    pub fn zero() -> AffineCubicalChain {
        AffineCubicalChain::default()
    }

    pub fn single(summand: Summand) -> AffineCubicalChain {
        AffineCubicalChain {
            summands: vec![summand],
        }
    }

    pub fn point(graph: RibbonGraph, lengths: &[f64]) -> AffineCubicalChain {
        AffineCubicalChain::single(Summand::point(graph, lengths))
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn check(&self) -> Result<()> {
        self.summands.iter().try_for_each(Summand::check)
    }

    /// `Σ_i (−1)^i (face_{u_i=1} − face_{u_i=0})`, degenerate faces dropped.
    pub fn boundary(&self) -> AffineCubicalChain {
        let mut out = Vec::new();
        for s in &self.summands {
            for i in 0..s.cube_dim {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                for (value, face_sign) in [(1.0, 1.0), (0.0, -1.0)] {
                    let face = Summand {
                        coef: s.coef * sign * face_sign,
                        cube_dim: s.cube_dim - 1,
                        graph: s.graph.clone(),
                        lengths: s.lengths.iter().map(|m| m.face(i, value)).collect(),
                    };
                    if !face.is_degenerate() {
                        out.push(face);
                    }
                }
            }
        }
        AffineCubicalChain { summands: out }
    }

    /// Merges summands with equal graphs and maps agreeing within `tol`,
    /// then drops degenerate and zero-coefficient ones.
    pub fn simplify(&self, tol: f64) -> AffineCubicalChain {
        let mut out: Vec<Summand> = Vec::new();
        for s in &self.summands {
            if s.is_degenerate() {
                continue;
            }
            let same = out.iter_mut().find(|o| {
                o.cube_dim == s.cube_dim
                    && o.graph == s.graph
                    && o.lengths.len() == s.lengths.len()
                    && o.lengths.iter().zip(&s.lengths).all(|(a, b)| a.approx_eq(b, tol))
            });
            match same {
                Some(o) => o.coef += s.coef,
                None => out.push(s.clone()),
            }
        }
        out.retain(|s| s.coef.abs() > tol);
        AffineCubicalChain { summands: out }
    }

    pub fn scaled(&self, c: f64) -> AffineCubicalChain {
        AffineCubicalChain {
            summands: self
                .summands
                .iter()
                .map(|s| Summand {
                    coef: s.coef * c,
                    ..s.clone()
                })
                .collect(),
        }
    }

    /// `next ∘ self`: glue every pair of summands; cube coordinates of
    /// `self` come first and fused edges get summed lengths.
    pub fn then(&self, next: &AffineCubicalChain) -> Result<AffineCubicalChain> {
        let mut out = Vec::new();
        for a in &self.summands {
            for b in &next.summands {
                let (graph, provenance) = a.graph.glue(&b.graph)?;
                let k = a.cube_dim + b.cube_dim;
                let lengths = provenance
                    .iter()
                    .map(|parts| {
                        let mut m = AffineMap::constant(0.0, k);
                        for p in parts {
                            let (src, shift) = if p.side == 0 {
                                (&a.lengths[p.edge as usize], 0)
                            } else {
                                (&b.lengths[p.edge as usize], a.cube_dim)
                            };
                            m.offset += src.offset;
                            for (i, &s) in src.slopes.iter().enumerate() {
                                m.slopes[shift + i] += s;
                            }
                        }
                        m
                    })
                    .collect();
                out.push(Summand {
                    coef: a.coef * b.coef,
                    cube_dim: k,
                    graph,
                    lengths,
                });
            }
        }
        Ok(AffineCubicalChain { summands: out })
    }

    /// Monoidal product; cube coordinates of `self` come first.
    pub fn disjoint_union(&self, other: &AffineCubicalChain) -> AffineCubicalChain {
        let mut out = Vec::new();
        for a in &self.summands {
            for b in &other.summands {
                let k = a.cube_dim + b.cube_dim;
                let widen = |m: &AffineMap, shift: usize| {
                    let mut w = AffineMap::constant(m.offset, k);
                    w.slopes[shift..shift + m.slopes.len()].copy_from_slice(&m.slopes);
                    w
                };
                let mut lengths: Vec<AffineMap> = a.lengths.iter().map(|m| widen(m, 0)).collect();
                lengths.extend(b.lengths.iter().map(|m| widen(m, a.cube_dim)));
                out.push(Summand {
                    coef: a.coef * b.coef,
                    cube_dim: k,
                    graph: a.graph.disjoint_union(&b.graph),
                    lengths,
                });
            }
        }
        AffineCubicalChain { summands: out }
    }

    pub fn in_arity(&self) -> Option<usize> {
        self.summands.first().map(|s| s.graph.in_arity())
    }

    pub fn out_arity(&self) -> Option<usize> {
        self.summands.first().map(|s| s.graph.out_arity())
    }
}

/// `m` disjoint zero-length edges, incoming `i` to outgoing `i`.
pub fn identity_graph(m: usize) -> AffineCubicalChain {
    permutation_chain(&(0..m).collect::<Vec<_>>())
}

/// Zero-length edges with incoming `i` joined to outgoing `targets[i]`.
pub fn permutation_chain(targets: &[usize]) -> AffineCubicalChain {
    let m = targets.len();
    let pairs: Vec<(u32, u32)> = (0..m as u32).map(|i| (2 * i, 2 * i + 1)).collect();
    // vertices: incoming 0..m, then outgoing m..2m
    let mut vertices = vec![Vec::new(); 2 * m];
    for (i, &t) in targets.iter().enumerate() {
        vertices[i].push(2 * i as u32);
        vertices[m + t].push(2 * i as u32 + 1);
    }
    let incoming: Vec<VertexId> = (0..m as VertexId).collect();
    let outgoing: Vec<VertexId> = (m as VertexId..2 * m as VertexId).collect();
    let graph = RibbonGraph::from_pairs(&pairs, vertices, incoming, outgoing);
    AffineCubicalChain::point(graph, &vec![0.0; m])
}

/// Block swap `R_{m,n}`: incoming `i ≤ m` to outgoing `n + i`, incoming
/// `m + j` to outgoing `j`.
pub fn braiding_chain(m: usize, n: usize) -> AffineCubicalChain {
    let targets: Vec<usize> = (0..m).map(|i| n + i).chain(0..n).collect();
    permutation_chain(&targets)
}

/// Cube-coordinate lookup used by integration: `t_e ↦ (a_e, b_e)`.
pub(crate) fn affine_table(s: &Summand) -> BTreeMap<u32, (f64, Vec<f64>)> {
    s.lengths
        .iter()
        .enumerate()
        .map(|(e, m)| (e as u32, (m.offset, m.slopes.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> RibbonGraph {
        RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0], vec![1])
    }

    fn cube(graph: RibbonGraph, maps: &[(f64, &[f64])]) -> AffineCubicalChain {
        let k = maps.first().map_or(0, |m| m.1.len());
        AffineCubicalChain::single(Summand {
            coef: 1.0,
            cube_dim: k,
            graph,
            lengths: maps
                .iter()
                .map(|&(a, b)| AffineMap {
                    offset: a,
                    slopes: b.to_vec(),
                })
                .collect(),
        })
    }

    #[test]
    fn boundary_of_unit_interval() {
        let c = cube(single_edge(), &[(0.0, &[1.0])]);
        let b = c.boundary();
        assert_eq!(b.summands.len(), 2);
        assert_eq!(b.summands[0].coef, 1.0);
        assert_eq!(b.summands[0].lengths[0].offset, 1.0);
        assert_eq!(b.summands[1].coef, -1.0);
        assert_eq!(b.summands[1].lengths[0].offset, 0.0);
    }

    #[test]
    fn boundary_of_point_is_zero() {
        assert!(AffineCubicalChain::point(single_edge(), &[0.5]).boundary().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero_on_three_cube() {
        let g = RibbonGraph::from_pairs(
            &[(0, 1), (2, 3), (4, 5)],
            vec![vec![0], vec![1, 2, 4], vec![3], vec![5]],
            vec![0, 2],
            vec![3],
        );
        let c = cube(
            g,
            &[
                (0.1, &[1.0, 0.0, 0.3]),
                (0.2, &[0.0, 0.7, 0.1]),
                (0.0, &[0.2, 0.2, 0.9]),
            ],
        );
        assert!(c.boundary().boundary().simplify(1e-12).is_zero());
    }

    #[test]
    fn degenerate_cube_is_detected() {
        let c = cube(single_edge(), &[(0.0, &[1.0, 0.0])]);
        assert!(c.summands[0].is_degenerate());
        assert!(c.simplify(1e-12).is_zero());
    }

    #[test]
    fn identity_and_braiding_validate() {
        for c in [
            identity_graph(0),
            identity_graph(2),
            braiding_chain(1, 1),
            braiding_chain(2, 1),
        ] {
            c.check().unwrap();
        }
        assert!(identity_graph(0).summands[0].graph.num_edges() == 0);
        assert!(braiding_chain(0, 2).summands[0]
            .graph
            .is_isomorphic(&identity_graph(2).summands[0].graph));
    }

    #[test]
    fn braiding_squares_to_identity() {
        let r = braiding_chain(1, 2).then(&braiding_chain(2, 1)).unwrap();
        assert!(r.summands[0].graph.is_isomorphic(&identity_graph(3).summands[0].graph));
        assert!(r.summands[0].lengths.iter().all(|m| m.offset == 0.0));
    }

    #[test]
    fn glued_lengths_add() {
        let a = AffineCubicalChain::point(single_edge(), &[0.3]);
        let b = cube(single_edge(), &[(0.2, &[1.0])]);
        let c = a.then(&b).unwrap();
        assert_eq!(c.summands[0].cube_dim, 1);
        assert!((c.summands[0].lengths[0].offset - 0.5).abs() < 1e-15);
        assert_eq!(c.summands[0].lengths[0].slopes, vec![1.0]);
    }

    #[test]
    fn zero_length_cycle_is_invalid() {
        let theta = RibbonGraph::from_pairs(&[(0, 2), (1, 3)], vec![vec![0, 1], vec![2, 3]], vec![], vec![]);
        let m = MetrizedGraph {
            graph: theta.clone(),
            lengths: vec![0.0, 0.0],
        };
        assert!(m.validate().is_err());
        let ok = MetrizedGraph {
            graph: theta,
            lengths: vec![0.0, 1.0],
        };
        assert_eq!(ok.validate(), Ok(()));
    }

    #[test]
    fn zero_length_cup_is_invalid() {
        let cup = RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![], vec![0, 1]);
        assert!(Summand::point(cup.clone(), &[0.0]).check().is_err());
        assert!(Summand::point(cup, &[0.5]).check().is_ok());
    }
}
