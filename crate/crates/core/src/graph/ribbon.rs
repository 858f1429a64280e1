use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type HalfEdge = u32;
pub type VertexId = u32;
pub type EdgeId = u32;

/// Ribbon graph on half-edges `0..H`: a fixed-point-free involution
/// (`partner`), a partition into vertices, each listed in cyclic order, and
/// ordered incoming and outgoing external vertices.
///
/// Edge `e` is the `e`-th pair `(h, h')`, `h < h'`, in order of `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    partner: Vec<HalfEdge>,
    vertices: Vec<Vec<HalfEdge>>,
    incoming: Vec<VertexId>,
    outgoing: Vec<VertexId>,
}

/// A broken structural rule reported by [`RibbonGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    PartnerOutOfRange(HalfEdge),
    FixedPoint(HalfEdge),
    NotInvolution(HalfEdge),
    HalfEdgeUnassigned(HalfEdge),
    HalfEdgeRepeated(HalfEdge),
    EmptyVertex(VertexId),
    LabelOutOfRange(VertexId),
    LabelRepeated(VertexId),
    ExternalNotUnivalent(VertexId),
    UnlabeledUnivalent(VertexId),
    LowValency { vertex: VertexId, valency: usize },
    ZeroLengthCycle(Vec<EdgeId>),
    ZeroLengthOutgoingPath(VertexId, VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PartnerOutOfRange(h) => write!(f, "half-edge {h} is paired outside the graph"),
            Violation::FixedPoint(h) => write!(f, "half-edge {h} is paired with itself"),
            Violation::NotInvolution(h) => write!(f, "pairing of half-edge {h} is not symmetric"),
            Violation::HalfEdgeUnassigned(h) => write!(f, "half-edge {h} belongs to no vertex"),
            Violation::HalfEdgeRepeated(h) => write!(f, "half-edge {h} appears at more than one slot"),
            Violation::EmptyVertex(v) => write!(f, "vertex {v} has no half-edges"),
            Violation::LabelOutOfRange(v) => write!(f, "external label names missing vertex {v}"),
            Violation::LabelRepeated(v) => write!(f, "vertex {v} is labeled more than once"),
            Violation::ExternalNotUnivalent(v) => write!(f, "external vertex {v} is not 1-valent"),
            Violation::UnlabeledUnivalent(v) => write!(f, "1-valent vertex {v} carries no external label"),
            Violation::LowValency { vertex, valency } => {
                write!(f, "internal vertex {vertex} has valency {valency} < 3")
            }
            Violation::ZeroLengthCycle(edges) => write!(f, "edges {edges:?} form a cycle of length 0"),
            Violation::ZeroLengthOutgoingPath(a, b) => {
                write!(f, "outgoing vertices {a} and {b} are joined by a path of length 0")
            }
        }
    }
}

/// Which operand of a gluing an edge came from, and its id there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeOrigin {
    pub side: u8,
    pub edge: EdgeId,
}

impl RibbonGraph {
    /// Builds a graph without checking it; see [`RibbonGraph::validate`].
    pub fn from_parts(
        partner: Vec<HalfEdge>,
        vertices: Vec<Vec<HalfEdge>>,
        incoming: Vec<VertexId>,
        outgoing: Vec<VertexId>,
    ) -> RibbonGraph {
        RibbonGraph {
            partner,
            vertices,
            incoming,
            outgoing,
        }
    }

    /// Builds a graph from edges given as half-edge pairs.
    pub fn from_pairs(
        pairs: &[(HalfEdge, HalfEdge)],
        vertices: Vec<Vec<HalfEdge>>,
        incoming: Vec<VertexId>,
        outgoing: Vec<VertexId>,
    ) -> RibbonGraph {
        let n = pairs.len() * 2;
        let mut partner: Vec<HalfEdge> = (0..n as HalfEdge).collect();
        for &(a, b) in pairs {
            if (a as usize) < n && (b as usize) < n {
                partner[a as usize] = b;
                partner[b as usize] = a;
            }
        }
        RibbonGraph::from_parts(partner, vertices, incoming, outgoing)
    }

    pub fn empty() -> RibbonGraph {
        RibbonGraph::from_parts(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    pub fn num_half_edges(&self) -> usize {
        self.partner.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h as usize]
    }

    pub fn partners(&self) -> &[HalfEdge] {
        &self.partner
    }

    /// Half-edges at `v` in cyclic order.
    pub fn cycle(&self, v: VertexId) -> &[HalfEdge] {
        &self.vertices[v as usize]
    }

    pub fn vertices(&self) -> &[Vec<HalfEdge>] {
        &self.vertices
    }

    pub fn incoming(&self) -> &[VertexId] {
        &self.incoming
    }

    pub fn outgoing(&self) -> &[VertexId] {
        &self.outgoing
    }

    pub fn in_arity(&self) -> usize {
        self.incoming.len()
    }

    pub fn out_arity(&self) -> usize {
        self.outgoing.len()
    }

    pub fn is_incoming(&self, v: VertexId) -> bool {
        self.incoming.contains(&v)
    }

    pub fn is_outgoing(&self, v: VertexId) -> bool {
        self.outgoing.contains(&v)
    }

    pub fn is_external(&self, v: VertexId) -> bool {
        self.is_incoming(v) || self.is_outgoing(v)
    }

    /// Vertex of every half-edge. Assumes a valid vertex partition.
    pub fn vertex_of(&self) -> Vec<VertexId> {
        let mut out = vec![VertexId::MAX; self.partner.len()];
        for (v, cycle) in self.vertices.iter().enumerate() {
            for &h in cycle {
                if let Some(slot) = out.get_mut(h as usize) {
                    *slot = v as VertexId;
                }
            }
        }
        out
    }

    /// Edges as `(h, h')` with `h < h'`, ordered by `h`.
    pub fn edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        (0..self.partner.len() as HalfEdge)
            .filter(|&h| h < self.partner[h as usize])
            .map(|h| (h, self.partner[h as usize]))
            .collect()
    }

    /// Edge id of every half-edge.
    pub fn edge_of(&self) -> Vec<EdgeId> {
        let mut out = vec![0; self.partner.len()];
        for (e, (a, b)) in self.edges().into_iter().enumerate() {
            out[a as usize] = e as EdgeId;
            out[b as usize] = e as EdgeId;
        }
        out
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let vertex_of = self.vertex_of();
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start as VertexId];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i] as usize;
                for &h in &self.vertices[v] {
                    let w = vertex_of[self.partner[h as usize] as usize] as usize;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w as VertexId);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Structural checks; never fails early, every violation is reported.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut v_out = Vec::new();
        let n = self.partner.len();
        for (h, &p) in self.partner.iter().enumerate() {
            let h = h as HalfEdge;
            if p as usize >= n {
                v_out.push(Violation::PartnerOutOfRange(h));
            } else if p == h {
                v_out.push(Violation::FixedPoint(h));
            } else if self.partner[p as usize] != h {
                v_out.push(Violation::NotInvolution(h));
            }
        }
        let mut seen = vec![0usize; n];
        for (v, cycle) in self.vertices.iter().enumerate() {
            if cycle.is_empty() {
                v_out.push(Violation::EmptyVertex(v as VertexId));
            }
            for &h in cycle {
                match seen.get_mut(h as usize) {
                    Some(c) => *c += 1,
                    None => v_out.push(Violation::PartnerOutOfRange(h)),
                }
            }
        }
        for (h, &c) in seen.iter().enumerate() {
            if c == 0 {
                v_out.push(Violation::HalfEdgeUnassigned(h as HalfEdge));
            } else if c > 1 {
                v_out.push(Violation::HalfEdgeRepeated(h as HalfEdge));
            }
        }
        let mut labeled = vec![false; self.vertices.len()];
        for &v in self.incoming.iter().chain(&self.outgoing) {
            match labeled.get_mut(v as usize) {
                None => v_out.push(Violation::LabelOutOfRange(v)),
                Some(true) => v_out.push(Violation::LabelRepeated(v)),
                Some(slot) => *slot = true,
            }
        }
        if !v_out.is_empty() {
            return Err(v_out);
        }
        for (v, cycle) in self.vertices.iter().enumerate() {
            let external = labeled[v];
            if external && cycle.len() != 1 {
                v_out.push(Violation::ExternalNotUnivalent(v as VertexId));
            }
            if !external && cycle.len() == 1 {
                v_out.push(Violation::UnlabeledUnivalent(v as VertexId));
            }
        }
        for comp in self.components() {
            if self.is_exceptional_cycle(&comp, &labeled) {
                continue;
            }
            for &v in &comp {
                let valency = self.vertices[v as usize].len();
                if !labeled[v as usize] && valency == 2 {
                    v_out.push(Violation::LowValency { vertex: v, valency });
                }
            }
        }
        if v_out.is_empty() {
            Ok(())
        } else {
            Err(v_out)
        }
    }

    /// Two internal 2-valent vertices joined by two edges.
    fn is_exceptional_cycle(&self, comp: &[VertexId], labeled: &[bool]) -> bool {
        comp.len() == 2
            && comp
                .iter()
                .all(|&v| !labeled[v as usize] && self.vertices[v as usize].len() == 2)
            && {
                let vertex_of = self.vertex_of();
                let [a, b] = [comp[0], comp[1]];
                self.vertices[a as usize]
                    .iter()
                    .all(|&h| vertex_of[self.partner[h as usize] as usize] == b)
            }
    }

    /// Keeps the listed half-edges, renumbering them in increasing order.
    /// `partner` may refer to old ids; vertex ids follow `vertices`.
    fn compacted(
        partner: &[HalfEdge],
        keep: &[bool],
        vertices: Vec<Vec<HalfEdge>>,
        incoming: Vec<VertexId>,
        outgoing: Vec<VertexId>,
    ) -> (RibbonGraph, Vec<Option<HalfEdge>>) {
        let mut map = vec![None; partner.len()];
        let mut next = 0;
        for (h, &k) in keep.iter().enumerate() {
            if k {
                map[h] = Some(next);
                next += 1;
            }
        }
        let new_partner = (0..partner.len())
            .filter(|&h| keep[h])
            .map(|h| map[partner[h] as usize].expect("partner of a kept half-edge is kept"))
            .collect();
        let vertices = vertices
            .into_iter()
            .map(|c| c.into_iter().map(|h| map[h as usize].expect("kept")).collect())
            .collect();
        (RibbonGraph::from_parts(new_partner, vertices, incoming, outgoing), map)
    }

    /// Contracts internal non-loop edge `e`, splicing the cycle of the far
    /// vertex into the near one at the removed half-edge. Returns the new
    /// graph and the old-to-new edge map (`None` for `e`).
    pub fn contract_edge(&self, e: EdgeId) -> Result<(RibbonGraph, Vec<Option<EdgeId>>)> {
        let edges = self.edges();
        let &(h, hp) = edges.get(e as usize).ok_or_else(|| Error::Contraction {
            edge: e as usize,
            reason: "no such edge".into(),
        })?;
        let vertex_of = self.vertex_of();
        let (u, v) = (vertex_of[h as usize], vertex_of[hp as usize]);
        if u == v {
            return Err(Error::Contraction {
                edge: e as usize,
                reason: "loop edge".into(),
            });
        }
        if self.is_external(u) || self.is_external(v) {
            return Err(Error::Contraction {
                edge: e as usize,
                reason: "external edge".into(),
            });
        }
        let cu = &self.vertices[u as usize];
        let cv = &self.vertices[v as usize];
        let pos_h = cu.iter().position(|&x| x == h).expect("h at u");
        let pos_hp = cv.iter().position(|&x| x == hp).expect("h' at v");
        let mut merged = Vec::with_capacity(cu.len() + cv.len() - 2);
        merged.extend_from_slice(&cu[..pos_h]);
        for i in 1..cv.len() {
            merged.push(cv[(pos_hp + i) % cv.len()]);
        }
        merged.extend_from_slice(&cu[pos_h + 1..]);

        let mut vertices = Vec::with_capacity(self.vertices.len() - 1);
        let mut vmap = vec![0 as VertexId; self.vertices.len()];
        for (w, cycle) in self.vertices.iter().enumerate() {
            if w as VertexId == v {
                continue;
            }
            vmap[w] = vertices.len() as VertexId;
            vertices.push(if w as VertexId == u {
                merged.clone()
            } else {
                cycle.clone()
            });
        }
        let incoming = self.incoming.iter().map(|&w| vmap[w as usize]).collect();
        let outgoing = self.outgoing.iter().map(|&w| vmap[w as usize]).collect();
        let mut keep = vec![true; self.partner.len()];
        keep[h as usize] = false;
        keep[hp as usize] = false;
        let (g, hmap) = RibbonGraph::compacted(&self.partner, &keep, vertices, incoming, outgoing);
        let edge_of = g.edge_of();
        let emap = edges
            .iter()
            .map(|&(a, _)| hmap[a as usize].map(|na| edge_of[na as usize]))
            .collect();
        Ok((g, emap))
    }

    /// Disjoint union; labels of `other` come after those of `self`.
    pub fn disjoint_union(&self, other: &RibbonGraph) -> RibbonGraph {
        let ho = self.partner.len() as HalfEdge;
        let vo = self.vertices.len() as VertexId;
        let mut partner = self.partner.clone();
        partner.extend(other.partner.iter().map(|&p| p + ho));
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|c| c.iter().map(|&h| h + ho).collect()));
        let mut incoming = self.incoming.clone();
        incoming.extend(other.incoming.iter().map(|&v| v + vo));
        let mut outgoing = self.outgoing.clone();
        outgoing.extend(other.outgoing.iter().map(|&v| v + vo));
        RibbonGraph::from_parts(partner, vertices, incoming, outgoing)
    }

    /// Glues outgoing vertex `i` of `self` to incoming vertex `i` of `next`.
    /// The two external edges fuse into one; the returned list gives, for
    /// each new edge, the edges of the operands it is made of.
    pub fn glue(&self, next: &RibbonGraph) -> Result<(RibbonGraph, Vec<Vec<EdgeOrigin>>)> {
        if self.out_arity() != next.in_arity() {
            return Err(Error::Composition(format!(
                "cannot glue {} outgoing vertices to {} incoming vertices",
                self.out_arity(),
                next.in_arity()
            )));
        }
        let joint = self.disjoint_union(next);
        let h1 = self.partner.len();
        let n = joint.partner.len();
        let v1 = self.vertices.len() as VertexId;
        // removed half-edge -> the removed half-edge it is identified with
        let mut jump = vec![None; n];
        for (i, (&o, &inc)) in self.outgoing.iter().zip(&next.incoming).enumerate() {
            let (Some(&ho), Some(&hi)) = (
                joint.vertices[o as usize].first(),
                joint.vertices[(inc + v1) as usize].first(),
            ) else {
                return Err(Error::Composition(format!("external vertex {i} has no half-edge")));
            };
            jump[ho as usize] = Some(hi);
            jump[hi as usize] = Some(ho);
        }
        let edge_of = joint.edge_of();
        let origin = |h: HalfEdge| {
            let e = edge_of[h as usize];
            let first_other = self.num_edges() as EdgeId;
            if (h as usize) < h1 {
                EdgeOrigin { side: 0, edge: e }
            } else {
                EdgeOrigin {
                    side: 1,
                    edge: e - first_other,
                }
            }
        };
        let mut new_partner = joint.partner.clone();
        let mut constituents: Vec<Vec<EdgeOrigin>> = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        for h in 0..n as HalfEdge {
            if jump[h as usize].is_some() {
                continue;
            }
            let mut parts = vec![origin(h)];
            let mut x = joint.partner[h as usize];
            while let Some(y) = jump[x as usize] {
                visited[x as usize] = true;
                visited[y as usize] = true;
                parts.push(origin(y));
                x = joint.partner[y as usize];
            }
            new_partner[h as usize] = x;
            constituents[h as usize] = parts;
        }
        if let Some(h) = (0..n).find(|&h| jump[h].is_some() && !visited[h]) {
            return Err(Error::Composition(format!(
                "gluing closes a loop of external edges with no vertex (half-edge {h})"
            )));
        }
        let keep: Vec<bool> = jump.iter().map(|j| j.is_none()).collect();
        let removed_vertex = |w: usize| {
            (w < v1 as usize && self.outgoing.contains(&(w as VertexId)))
                || (w >= v1 as usize && next.incoming.contains(&((w - v1 as usize) as VertexId)))
        };
        let mut vertices = Vec::new();
        let mut vmap = vec![0 as VertexId; joint.vertices.len()];
        for (w, cycle) in joint.vertices.iter().enumerate() {
            if removed_vertex(w) {
                continue;
            }
            vmap[w] = vertices.len() as VertexId;
            vertices.push(cycle.clone());
        }
        let incoming = self.incoming.iter().map(|&w| vmap[w as usize]).collect();
        let outgoing = next.outgoing.iter().map(|&w| vmap[(w + v1) as usize]).collect();
        let (g, hmap) = RibbonGraph::compacted(&new_partner, &keep, vertices, incoming, outgoing);
        let mut provenance = vec![Vec::new(); g.num_edges()];
        let new_edge_of = g.edge_of();
        for h in 0..n {
            let Some(nh) = hmap[h] else { continue };
            let np = g.partner[nh as usize];
            if nh < np {
                provenance[new_edge_of[nh as usize] as usize] = std::mem::take(&mut constituents[h]);
            }
        }
        Ok((g, provenance))
    }

    /// Canonical code: equal codes iff the graphs are isomorphic by a map
    /// preserving pairing, cyclic orders and external labels.
    pub fn canonical_code(&self) -> Vec<u32> {
        let vertex_of = self.vertex_of();
        let mut code = vec![self.incoming.len() as u32, self.outgoing.len() as u32];
        let mut visited = vec![false; self.vertices.len()];
        let seeds: Vec<HalfEdge> = self
            .incoming
            .iter()
            .chain(&self.outgoing)
            .filter_map(|&v| self.vertices.get(v as usize).and_then(|c| c.first().copied()))
            .collect();
        code.extend(self.traversal_code(&seeds, &vertex_of, &mut visited));
        let mut closed: Vec<Vec<u32>> = Vec::new();
        for comp in self.components() {
            if visited[comp[0] as usize] {
                continue;
            }
            let mut best: Option<Vec<u32>> = None;
            for &v in &comp {
                for &h in &self.vertices[v as usize] {
                    let mut scratch = visited.clone();
                    let c = self.traversal_code(&[h], &vertex_of, &mut scratch);
                    if best.as_ref().is_none_or(|b| c < *b) {
                        best = Some(c);
                    }
                }
            }
            for &v in &comp {
                visited[v as usize] = true;
            }
            closed.push(best.expect("components are nonempty"));
        }
        closed.sort();
        for c in closed {
            code.push(u32::MAX);
            code.extend(c);
        }
        code
    }

    /// Breadth-first relabeling from entry half-edges; records each visited
    /// vertex's cycle and the pairing in the new numbering.
    fn traversal_code(&self, seeds: &[HalfEdge], vertex_of: &[VertexId], visited: &mut [bool]) -> Vec<u32> {
        let mut new_id = vec![u32::MAX; self.partner.len()];
        let mut order: Vec<HalfEdge> = Vec::new();
        let mut cycles: Vec<u32> = Vec::new();
        let mut queue: VecDeque<HalfEdge> = seeds.iter().copied().collect();
        while let Some(h) = queue.pop_front() {
            let v = vertex_of[h as usize] as usize;
            if visited[v] {
                continue;
            }
            visited[v] = true;
            let cycle = &self.vertices[v];
            let start = cycle.iter().position(|&x| x == h).expect("entry half-edge at vertex");
            cycles.push(cycle.len() as u32);
            for i in 0..cycle.len() {
                let x = cycle[(start + i) % cycle.len()];
                new_id[x as usize] = order.len() as u32;
                order.push(x);
                cycles.push(new_id[x as usize]);
            }
            for i in 0..cycle.len() {
                let x = cycle[(start + i) % cycle.len()];
                queue.push_back(self.partner[x as usize]);
            }
        }
        let mut code = cycles;
        code.push(u32::MAX - 1);
        code.extend(order.iter().map(|&h| new_id[self.partner[h as usize] as usize]));
        code
    }

    pub fn is_isomorphic(&self, other: &RibbonGraph) -> bool {
        self.canonical_code() == other.canonical_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// in(0) --e0-- out(1)
    fn single_edge() -> RibbonGraph {
        RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0], vec![1])
    }

    fn path3() -> RibbonGraph {
        // in -- a -- b -- out with a, b 2-valent
        RibbonGraph::from_pairs(
            &[(0, 1), (2, 3), (4, 5)],
            vec![vec![0], vec![1, 2], vec![3, 4], vec![5]],
            vec![0],
            vec![3],
        )
    }

    /// Two trivalent vertices joined by edge (1,4), each with a loop.
    fn dumbbell() -> RibbonGraph {
        RibbonGraph::from_pairs(
            &[(0, 2), (1, 4), (3, 5)],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            vec![],
            vec![],
        )
    }

    #[test]
    fn single_edge_is_valid() {
        assert_eq!(single_edge().validate(), Ok(()));
    }

    #[test]
    fn bivalent_internal_vertex_is_flagged() {
        let errs = path3().validate().unwrap_err();
        assert!(errs.contains(&Violation::LowValency { vertex: 1, valency: 2 }));
    }

    #[test]
    fn repeated_label_is_flagged() {
        let g = RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0, 0], vec![1]);
        assert!(g.validate().unwrap_err().contains(&Violation::LabelRepeated(0)));
    }

    #[test]
    fn exceptional_two_vertex_cycle_is_valid() {
        let g = RibbonGraph::from_pairs(&[(0, 2), (1, 3)], vec![vec![0, 1], vec![2, 3]], vec![], vec![]);
        assert_eq!(g.validate(), Ok(()));
    }

    #[test]
    fn contracting_middle_of_path() {
        let (g, map) = path3().contract_edge(1).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(map, vec![Some(0), None, Some(1)]);
        assert_eq!(g.cycle(1), &[1, 2]);
        assert!(g.validate().is_err());
    }

    #[test]
    fn contracting_dumbbell_bridge_splices_cycles() {
        // hand oracle: u = (0 1 2), v = (3 4 5), bridge (1,4):
        // replace 1 by v's cycle after 4: 5, 3 → (0 5 3 2), renumbered
        // 0→0, 2→1, 3→2, 5→3 gives (0 3 2 1)
        let (g, map) = dumbbell().contract_edge(1).unwrap();
        assert_eq!(g.vertices(), &[vec![0, 3, 2, 1]]);
        assert_eq!(g.partners(), &[1, 0, 3, 2]);
        assert_eq!(map, vec![Some(0), None, Some(1)]);
        assert_eq!(g.validate(), Ok(()));
    }

    #[test]
    fn loops_and_external_edges_do_not_contract() {
        assert!(dumbbell().contract_edge(0).is_err());
        assert!(single_edge().contract_edge(0).is_err());
    }

    #[test]
    fn gluing_single_edges_gives_single_edge() {
        let (g, prov) = single_edge().glue(&single_edge()).unwrap();
        assert!(g.is_isomorphic(&single_edge()));
        assert_eq!(
            prov,
            vec![vec![EdgeOrigin { side: 0, edge: 0 }, EdgeOrigin { side: 1, edge: 0 }]]
        );
    }

    #[test]
    fn arity_mismatch_is_a_composition_error() {
        let two = single_edge().disjoint_union(&single_edge());
        assert!(matches!(single_edge().glue(&two), Err(Error::Composition(_))));
    }

    #[test]
    fn vertex_free_loop_is_rejected() {
        // cup: two outgoing joined; cap: two incoming joined
        let cup = RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![], vec![0, 1]);
        let cap = RibbonGraph::from_pairs(&[(0, 1)], vec![vec![0], vec![1]], vec![0, 1], vec![]);
        assert!(matches!(cup.glue(&cap), Err(Error::Composition(_))));
    }

    #[test]
    fn canonical_code_ignores_numbering() {
        let a = dumbbell();
        let b = RibbonGraph::from_pairs(
            &[(0, 1), (2, 5), (3, 4)],
            vec![vec![2, 3, 4], vec![5, 0, 1]],
            vec![],
            vec![],
        );
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&single_edge()));
    }
}
