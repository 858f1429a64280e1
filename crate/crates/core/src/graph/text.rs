//! Line-oriented text formats for ribbon graphs and affine chains.
//!
//! ```text
//! ribbon-graph
//! half-edges 2
//! pair 0 1
//! vertex 0
//! vertex 1
//! incoming 0
//! outgoing 1
//! end
//! ```
//!
//! A chain wraps graphs in summands with one `length` line per edge:
//!
//! ```text
//! chain
//! summand 1.0 1
//! ribbon-graph
//! ...
//! end
//! length 0 0.0 1.0
//! end-summand
//! ```
//!
//! Floats are written in shortest round-trip form; `#` starts a comment.

use std::fmt::Write as _;
use std::str::FromStr;

use super::chain::{AffineCubicalChain, AffineMap, Summand};
use super::ribbon::{HalfEdge, RibbonGraph, VertexId};
use crate::error::{Error, Result};

pub fn write_graph(g: &RibbonGraph) -> String {
    let mut s = String::new();
    write_graph_into(g, &mut s);
    s
}

fn write_graph_into(g: &RibbonGraph, s: &mut String) {
    let join = |xs: &[u32]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    s.push_str("ribbon-graph\n");
    let _ = writeln!(s, "half-edges {}", g.num_half_edges());
    for (a, b) in g.edges() {
        let _ = writeln!(s, "pair {a} {b}");
    }
    for cycle in g.vertices() {
        let _ = writeln!(s, "vertex {}", join(cycle));
    }
    let _ = writeln!(s, "incoming {}", join(g.incoming()));
    let _ = writeln!(s, "outgoing {}", join(g.outgoing()));
    s.push_str("end\n");
}

pub fn write_chain(c: &AffineCubicalChain) -> String {
    let mut s = String::from("chain\n");
    for summand in &c.summands {
        let _ = writeln!(s, "summand {:?} {}", summand.coef, summand.cube_dim);
        write_graph_into(&summand.graph, &mut s);
        for (e, m) in summand.lengths.iter().enumerate() {
            let _ = write!(s, "length {e} {:?}", m.offset);
            for b in &m.slopes {
                let _ = write!(s, " {b:?}");
            }
            s.push('\n');
        }
        s.push_str("end-summand\n");
    }
    s
}

struct Lines<'a> {
    path: &'a str,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(path: &'a str, text: &'a str) -> Lines<'a> {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            path,
            inner: it.peekable(),
            last: 0,
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(self.err(self.last + 1, "unexpected end of input")),
        }
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split_whitespace().next())
    }

    fn expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, line) = self.next()?;
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        if head != keyword {
            return Err(self.err(n, format!("expected `{keyword}`, found `{head}`")));
        }
        Ok((n, words.collect()))
    }

    fn numbers<T: FromStr>(&self, n: usize, words: &[&str]) -> Result<Vec<T>> {
        words
            .iter()
            .map(|w| w.parse::<T>().map_err(|_| self.err(n, format!("invalid number `{w}`"))))
            .collect()
    }
}

pub fn parse_graph(path: &str, text: &str) -> Result<RibbonGraph> {
    let mut lines = Lines::new(path, text);
    let g = parse_graph_block(&mut lines)?;
    if let Ok((n, l)) = lines.next() {
        return Err(lines.err(n, format!("trailing content `{l}`")));
    }
    Ok(g)
}

fn parse_graph_block(lines: &mut Lines<'_>) -> Result<RibbonGraph> {
    let (start, _) = lines.expect("ribbon-graph")?;
    let (n, words) = lines.expect("half-edges")?;
    let count: Vec<usize> = lines.numbers(n, &words)?;
    let [count] = count[..] else {
        return Err(lines.err(n, "`half-edges` takes one count"));
    };
    if count % 2 != 0 {
        return Err(lines.err(n, "half-edge count must be even"));
    }
    let mut partner: Vec<Option<HalfEdge>> = vec![None; count];
    let mut vertices = Vec::new();
    let mut incoming: Option<Vec<VertexId>> = None;
    let mut outgoing: Option<Vec<VertexId>> = None;
    loop {
        let (n, line) = lines.next()?;
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        match head {
            "pair" => {
                let ids: Vec<HalfEdge> = lines.numbers(n, &rest)?;
                let [a, b] = ids[..] else {
                    return Err(lines.err(n, "`pair` takes two half-edges"));
                };
                for (x, y) in [(a, b), (b, a)] {
                    match partner.get_mut(x as usize) {
                        None => return Err(lines.err(n, format!("half-edge {x} out of range"))),
                        Some(Some(_)) => return Err(lines.err(n, format!("half-edge {x} paired twice"))),
                        Some(slot) => *slot = Some(y),
                    }
                }
            }
            "vertex" => vertices.push(lines.numbers(n, &rest)?),
            "incoming" => incoming = Some(lines.numbers(n, &rest)?),
            "outgoing" => outgoing = Some(lines.numbers(n, &rest)?),
            "end" => break,
            other => return Err(lines.err(n, format!("unknown keyword `{other}`"))),
        }
    }
    let partner = partner
        .into_iter()
        .enumerate()
        .map(|(h, p)| p.ok_or_else(|| lines.err(start, format!("half-edge {h} is unpaired"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RibbonGraph::from_parts(
        partner,
        vertices,
        incoming.unwrap_or_default(),
        outgoing.unwrap_or_default(),
    ))
}

pub fn parse_chain(path: &str, text: &str) -> Result<AffineCubicalChain> {
    let mut lines = Lines::new(path, text);
    lines.expect("chain")?;
    let mut summands = Vec::new();
    while lines.peek_keyword().is_some() {
        let (n, words) = lines.expect("summand")?;
        let [coef, k] = words[..] else {
            return Err(lines.err(n, "`summand` takes a coefficient and a cube dimension"));
        };
        let coef: f64 = lines.numbers(n, &[coef])?[0];
        let cube_dim: usize = lines.numbers(n, &[k])?[0];
        let graph = parse_graph_block(&mut lines)?;
        let mut lengths = vec![None; graph.num_edges()];
        loop {
            let (m, line) = lines.next()?;
            let mut words = line.split_whitespace();
            match words.next() {
                Some("end-summand") => break,
                Some("length") => {
                    let rest: Vec<&str> = words.collect();
                    let Some((e, coeffs)) = rest.split_first() else {
                        return Err(lines.err(m, "`length` needs an edge id"));
                    };
                    let e: usize = lines.numbers(m, &[e])?[0];
                    let coeffs: Vec<f64> = lines.numbers(m, coeffs)?;
                    if coeffs.len() != cube_dim + 1 {
                        return Err(lines.err(
                            m,
                            format!("expected {} coefficients, found {}", cube_dim + 1, coeffs.len()),
                        ));
                    }
                    let slot = lengths
                        .get_mut(e)
                        .ok_or_else(|| lines.err(m, format!("edge {e} out of range")))?;
                    *slot = Some(AffineMap {
                        offset: coeffs[0],
                        slopes: coeffs[1..].to_vec(),
                    });
                }
                _ => return Err(lines.err(m, "expected `length` or `end-summand`")),
            }
        }
        let lengths = lengths
            .into_iter()
            .enumerate()
            .map(|(e, m)| m.ok_or_else(|| lines.err(n, format!("edge {e} has no length"))))
            .collect::<Result<Vec<_>>>()?;
        summands.push(Summand {
            coef,
            cube_dim,
            graph,
            lengths,
        });
    }
    Ok(AffineCubicalChain { summands })
}
