//! The check groups. Each returns its records in a fixed order.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;

use super::catalog::{self, point};
use super::report::CheckRecord;
use crate::engine::{integrate_chain_as, integrate_chain_in, integrate_chain_mixed, sum_tcft, TensorOperator};
use crate::error::Result;
use crate::graph::{braiding_chain, identity_graph, AffineCubicalChain, RibbonGraph};
use crate::kernel::{convolve, cutoff_kernel, l_kernel, propagator};
use crate::spectral::{Basis, EigenvalueSet, SpectralForm};

/// Resolved suite parameters.
#[derive(Clone, Debug)]
pub struct Context {
    pub dim: usize,
    pub cutoff: EigenvalueSet,
    pub space: Arc<Basis>,
    pub drop: f64,
    pub compare: f64,
}

impl Context {
    pub fn new(dim: usize, cutoff: EigenvalueSet, drop: f64, compare: f64) -> Result<Context> {
        Ok(Context {
            space: Basis::shared(dim, &cutoff)?,
            dim,
            cutoff,
            drop,
            compare,
        })
    }

    fn single(&self, v: u32) -> EigenvalueSet {
        EigenvalueSet::new(self.dim, [v]).expect("value taken from a valid cutoff")
    }

    fn op(&self, chain: &AffineCubicalChain) -> Result<TensorOperator> {
        integrate_chain_in(chain, &self.cutoff, &self.space)
    }

    fn op_at(&self, chain: &AffineCubicalChain, cutoff: &EigenvalueSet) -> Result<TensorOperator> {
        integrate_chain_in(chain, cutoff, &self.space)
    }

    /// The standard small cutoffs that fit inside the configured one, then
    /// the configured one itself.
    fn kernel_cutoffs(&self) -> Vec<EigenvalueSet> {
        let mut out: Vec<EigenvalueSet> = [&[0u32][..], &[1], &[0, 1], &[0, 1, 2]]
            .iter()
            .filter_map(|v| EigenvalueSet::new(self.dim, v.iter().copied()).ok())
            .filter(|a| a.is_subset(&self.cutoff))
            .collect();
        if !out.contains(&self.cutoff) {
            out.push(self.cutoff.clone());
        }
        out
    }
}

fn timed(f: impl FnOnce() -> Result<CheckRecord>) -> Result<CheckRecord> {
    let start = Instant::now();
    let mut r = f()?;
    r.runtime = start.elapsed();
    Ok(r)
}

pub fn kernel(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for a in ctx.kernel_cutoffs() {
        let k = cutoff_kernel(ctx.dim, &a, 0)?;
        let l = l_kernel(ctx.dim, &a, 0)?;
        out.push(timed(|| {
            let r = k.d_x().plus(&k.d_y()).max_abs();
            Ok(CheckRecord::identity(
                format!("kernel-closed{a}"),
                "(d_x + d_y) K_t = 0",
                r,
                ctx.drop,
            ))
        })?);
        out.push(timed(|| {
            let r = k.codiff_x().minus(&k.codiff_y()).max_abs();
            Ok(CheckRecord::identity(
                format!("kernel-coclosed{a}"),
                "(d*_x - d*_y) K_t = 0",
                r,
                ctx.drop,
            ))
        })?);
        out.push(timed(|| {
            let r = k.laplacian_x().minus(&k.laplacian_y()).max_abs();
            Ok(CheckRecord::identity(
                format!("kernel-laplacian-balance{a}"),
                "(H_x - H_y) K_t = 0",
                r,
                ctx.drop,
            ))
        })?);
        out.push(timed(|| {
            let dk = k.time_derivative(0);
            let r1 = l.d_x().plus(&l.d_y()).minus(&dk).max_abs();
            let r2 = k.laplacian_x().plus(&dk).max_abs();
            Ok(CheckRecord::identity(
                format!("l-kernel-exactness{a}"),
                "(d_x + d_y) L_t = -H_x K_t = dK_t/dt",
                r1.max(r2),
                ctx.drop,
            ))
        })?);
    }
    Ok(out)
}

pub fn propagator_closed(ctx: &Context) -> Result<Vec<CheckRecord>> {
    ctx.kernel_cutoffs()
        .into_iter()
        .map(|a| {
            timed(|| {
                let w = propagator(ctx.dim, 0, &a)?;
                let r = w.value.total_d().max_abs();
                Ok(CheckRecord::identity(
                    format!("propagator-closed{a}"),
                    "(d_x + d_y + d_t) w_e = 0",
                    r,
                    ctx.drop,
                ))
            })
        })
        .collect()
}

/// Matrix of `a ↦ Σ_j c_j e_j` on the basis, row = input.
fn matrix_of(space: &Basis, f: impl Fn(&SpectralForm) -> Result<SpectralForm>) -> Result<DMatrix<f64>> {
    let n = space.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, b) in space.forms().iter().enumerate() {
        for (c, v) in f(&SpectralForm::basis(*b))?.terms() {
            let j = space.index_of(c).expect("images stay in the span");
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

pub fn semigroup(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let ks = cutoff_kernel(ctx.dim, &ctx.cutoff, 0)?;
    let kt = cutoff_kernel(ctx.dim, &ctx.cutoff, 1)?;
    let conv = convolve(&ks, &kt);
    // oracle: the Laplacian matrix built from d and d*, exponentiated densely
    let laplacian = matrix_of(&ctx.space, |a| Ok(a.laplacian()))?;
    [(0.1, 0.2), (0.5, 0.5)]
        .into_iter()
        .map(|(s, t)| {
            timed(|| {
                let lengths = BTreeMap::from([(0, s), (1, t)]);
                let got = matrix_of(&ctx.space, |a| conv.apply(a, &lengths))?;
                let want = (laplacian.clone() * -(s + t)).exp();
                let r = (got - &want).amax() / want.amax();
                Ok(CheckRecord::identity(
                    format!("semigroup[s={s},t={t}]"),
                    "K_s * K_t = exp(-(s+t) H)",
                    r,
                    ctx.compare,
                ))
            })
        })
        .collect()
}

pub fn functoriality(ctx: &Context) -> Result<Vec<CheckRecord>> {
    catalog::gluing_cases()
        .into_iter()
        .map(|(name, first, second)| {
            timed(|| {
                let glued = ctx.op(&first.then(&second)?)?;
                let composed = ctx.op(&second)?.compose(&ctx.op(&first)?)?;
                let r = glued.relative_diff(&composed)?;
                Ok(CheckRecord::identity(
                    format!("functoriality[{name}]"),
                    "T(s2 . s1) = T(s2) T(s1)",
                    r,
                    ctx.compare,
                ))
            })
        })
        .collect()
}

pub fn identity(ctx: &Context) -> Result<Vec<CheckRecord>> {
    (1..=2)
        .map(|m| {
            timed(|| {
                let t = ctx.op(&identity_graph(m))?;
                let r = t.max_abs_diff(&TensorOperator::identity(ctx.space.clone(), m))?;
                Ok(CheckRecord::identity(
                    format!("identity[{m}]"),
                    "T(1_m) = P^m",
                    r,
                    ctx.drop,
                ))
            })
        })
        .collect()
}

pub fn braiding(ctx: &Context) -> Result<Vec<CheckRecord>> {
    [(1, 1), (2, 1)]
        .into_iter()
        .map(|(m, n)| {
            timed(|| {
                let t = ctx.op(&braiding_chain(m, n))?;
                let targets: Vec<usize> = (0..m).map(|i| n + i).chain(0..n).collect();
                let p = TensorOperator::signed_permutation(ctx.space.clone(), &targets);
                let r = t.max_abs_diff(&p)?;
                Ok(CheckRecord::identity(
                    format!("braiding[{m},{n}]"),
                    "T(R_mn) = signed swap",
                    r,
                    ctx.drop,
                ))
            })
        })
        .collect()
}

pub fn chain_map(ctx: &Context) -> Result<Vec<CheckRecord>> {
    catalog::chain_map_cases()
        .into_iter()
        .map(|(name, c)| {
            timed(|| {
                let t = ctx.op(&c)?;
                let k = c.summands[0].cube_dim;
                let boundary = integrate_chain_as(&c.boundary(), t.in_arity(), t.out_arity(), &ctx.cutoff, &ctx.space)?;
                let r = boundary.max_abs_diff(&t.d_comp(k)?)?;
                Ok(CheckRecord::identity(
                    format!("chain-map[{name}]"),
                    "T(boundary s) = d T(s) - (-1)^|s| T(s) d",
                    r,
                    ctx.compare,
                ))
            })
        })
        .collect()
}

pub fn monoidality(ctx: &Context) -> Result<Vec<CheckRecord>> {
    catalog::monoidal_cases()
        .into_iter()
        .map(|(name, l, r)| {
            timed(|| {
                let joint = ctx.op(&l.disjoint_union(&r))?;
                let parts = ctx.op(&l)?.tensor(&ctx.op(&r)?)?;
                let res = joint.relative_diff(&parts)?;
                Ok(CheckRecord::identity(
                    format!("monoidality[{name}]"),
                    "T(g1 + g2) = T(g1) (x) T(g2)",
                    res,
                    ctx.compare,
                ))
            })
        })
        .collect()
}

/// Ordered pairs of distinct eigenvalues in the cutoff.
fn distinct_pairs(ctx: &Context) -> Vec<(u32, u32)> {
    let values: Vec<u32> = ctx.cutoff.iter().collect();
    let mut out = Vec::new();
    for &a in &values {
        for &b in &values {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn cross(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (a, b) in distinct_pairs(ctx) {
        let (sa, sb) = (ctx.single(a), ctx.single(b));
        for (name, first, second) in catalog::gluing_cases() {
            out.push(timed(|| {
                let mixed = ctx.op_at(&second, &sa)?.compose(&ctx.op_at(&first, &sb)?)?;
                Ok(CheckRecord::identity(
                    format!("cross-vanishing[{a}|{b}][{name}]"),
                    "T^a(s2) T^b(s1) = 0",
                    mixed.max_abs(),
                    ctx.drop,
                ))
            })?);
        }
    }
    Ok(out)
}

/// Splits of the cutoff checked for additivity: every pair of single
/// eigenvalues, and everything below the top value against the top value.
fn splits(ctx: &Context) -> Vec<(EigenvalueSet, EigenvalueSet)> {
    let mut out: Vec<(EigenvalueSet, EigenvalueSet)> = distinct_pairs(ctx)
        .into_iter()
        .filter(|(a, b)| a < b)
        .map(|(a, b)| (ctx.single(a), ctx.single(b)))
        .collect();
    if let Some(top) = EigenvalueSet::max(&ctx.cutoff) {
        let lower =
            EigenvalueSet::new(ctx.dim, ctx.cutoff.iter().filter(|&v| v < top)).expect("subset of a valid cutoff");
        if lower.len() > 1 {
            out.push((lower, ctx.single(top)));
        }
    }
    out
}

pub fn additivity(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (a, b) in splits(ctx) {
        let joint_cutoff = a.union(&b);
        for (name, c) in catalog::additive_cases() {
            out.push(timed(|| {
                let (m, n) = (c.in_arity().unwrap_or(0), c.out_arity().unwrap_or(0));
                let sum = sum_tcft(&c, m, n, ctx.dim, &[a.clone(), b.clone()])?;
                let joint = integrate_chain_in(&c, &joint_cutoff, sum.operator.space())?;
                let r = sum.operator.max_abs_diff(&joint)?;
                Ok(CheckRecord::identity(
                    format!("additivity{a}+{b}[{name}]"),
                    "T^a + T^b = T^(a u b)",
                    r,
                    ctx.drop,
                ))
            })?);
        }
    }
    // legs from different eigenvalues pair up at a trivalent vertex and
    // sit side by side across components, so there the sum misses exactly
    // the mixed edge labelings
    for (a, b) in splits(ctx).into_iter().take(1) {
        for (name, c) in catalog::additivity_gap_cases() {
            out.push(timed(|| mixed_labeling_gap(ctx, name, &c, &a, &b))?);
        }
    }
    Ok(out)
}

fn mixed_labeling_gap(
    ctx: &Context,
    name: &str,
    c: &AffineCubicalChain,
    a: &EigenvalueSet,
    b: &EigenvalueSet,
) -> Result<CheckRecord> {
    let (m, n) = (c.in_arity().unwrap_or(0), c.out_arity().unwrap_or(0));
    let joint_cutoff = a.union(b);
    let sum = sum_tcft(c, m, n, ctx.dim, &[a.clone(), b.clone()])?;
    let space = sum.operator.space().clone();
    let joint = integrate_chain_in(c, &joint_cutoff, &space)?;
    let gap = joint.sub(&sum.operator)?;
    let edges = c.summands[0].graph.num_edges();
    let mut mixed = TensorOperator::zero(space.clone(), m, n);
    for labels in 1..(1u32 << edges) - 1 {
        let cutoffs: Vec<EigenvalueSet> = (0..edges)
            .map(|e| if labels >> e & 1 == 1 { b.clone() } else { a.clone() })
            .collect();
        mixed = mixed.add(&integrate_chain_mixed(c, &cutoffs, &space)?)?;
    }
    Ok(CheckRecord::demonstration(
        format!("additivity-gap{a}+{b}[{name}]"),
        "T^(a u b) - T^a - T^b = sum over mixed edge labelings",
        gap.max_abs_diff(&mixed)?,
        gap.max_abs(),
        ctx.drop,
    ))
}

pub fn non_functoriality(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let Some(v) = ctx.cutoff.iter().find(|&v| v > 0).or_else(|| ctx.cutoff.iter().next()) else {
        return Ok(Vec::new());
    };
    let a = ctx.single(v);
    let first = point(catalog::edge(), &[0.5]);
    let second = point(catalog::edge(), &[0.25]);
    let rec = timed(|| {
        let sum = |c: &AffineCubicalChain| sum_tcft(c, 1, 1, ctx.dim, &[a.clone(), a.clone()]);
        let s1 = sum(&first)?;
        let s2 = sum(&second)?;
        let glued = sum(&first.then(&second)?)?;
        let composed = s2.operator.compose(&s1.operator)?;
        let predicted = glued.operator.scaled(2.0);
        let mut r = composed.max_abs_diff(&predicted)?;
        if s1.warning.is_none() {
            r = f64::INFINITY;
        }
        Ok(CheckRecord::demonstration(
            format!("non-functoriality{a}+{a}[edge-edge]"),
            "(T^a + T^a)(s2) (T^a + T^a)(s1) = 2 (T^a + T^a)(s2 . s1)",
            r,
            composed.max_abs_diff(&glued.operator)?,
            ctx.drop,
        ))
    })?;
    Ok(vec![rec])
}

/// Edges joining two distinct internal vertices.
fn internal_edges(g: &RibbonGraph) -> Vec<usize> {
    let vertex_of = g.vertex_of();
    g.edges()
        .into_iter()
        .enumerate()
        .filter(|(_, (a, b))| {
            let (va, vb) = (vertex_of[*a as usize], vertex_of[*b as usize]);
            va != vb && !g.is_external(va) && !g.is_external(vb)
        })
        .map(|(e, _)| e)
        .collect()
}

/// Harmonic cutoff only: there the time-zero kernel is the identity on
/// everything a vertex can produce, so collapsing an edge is exact.
pub fn contraction(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let harmonic = ctx.single(0);
    if !ctx.cutoff.contains(0) {
        return Ok(Vec::new());
    }
    let h = catalog::star_merge().glue(&catalog::star_split())?.0;
    let cases = [
        ("merge-then-split", h, vec![0.3, 0.4, 0.5, 0.6, 0.7]),
        ("theta", catalog::theta(), vec![0.3, 0.5, 0.7]),
        ("dumbbell", catalog::dumbbell(), vec![0.6, 0.2, 0.4]),
    ];
    let mut out = Vec::new();
    for (name, g, lengths) in cases {
        for e in internal_edges(&g) {
            out.push(timed(|| {
                let space = Basis::shared(ctx.dim, &harmonic)?;
                let mut at_zero = lengths.clone();
                at_zero[e] = 0.0;
                let before = integrate_chain_in(&point(g.clone(), &at_zero), &harmonic, &space)?;
                let (collapsed, emap) = g.contract_edge(e as u32)?;
                let mut kept = vec![0.0; collapsed.num_edges()];
                for (old, new) in emap.iter().enumerate() {
                    if let Some(new) = new {
                        kept[*new as usize] = lengths[old];
                    }
                }
                let after = integrate_chain_in(&point(collapsed, &kept), &harmonic, &space)?;
                Ok(CheckRecord::identity(
                    format!("contraction[{name}][e{e}]"),
                    "w_g at l_e = 0 equals w_(g/e)",
                    before.relative_diff(&after)?,
                    ctx.compare,
                ))
            })?);
        }
    }
    Ok(out)
}
