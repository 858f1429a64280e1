use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{koszul_sign, parity_sign};
use crate::spectral::{Basis, SpectralForm};

/// Index tuple into `A_A^{⊗m}`.
pub type Tuple = Vec<u32>;

/// Finite matrix in `Hom(A_A^{⊗m}, A_A^{⊗n})` over the truncated basis,
/// stored column by column (input tuple → output tuple → entry).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    space: Arc<Basis>,
    in_arity: usize,
    out_arity: usize,
    columns: BTreeMap<Tuple, BTreeMap<Tuple, f64>>,
}

/// All `len^arity` index tuples in lexicographic order.
pub fn all_tuples(len: usize, arity: usize) -> Vec<Tuple> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..len as u32).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

impl TensorOperator {
    pub fn zero(space: Arc<Basis>, in_arity: usize, out_arity: usize) -> TensorOperator {
        TensorOperator {
            space,
            in_arity,
            out_arity,
            columns: BTreeMap::new(),
        }
    }

    pub(crate) fn from_columns(
        space: Arc<Basis>,
        in_arity: usize,
        out_arity: usize,
        columns: impl IntoIterator<Item = (Tuple, BTreeMap<Tuple, f64>)>,
    ) -> TensorOperator {
        let mut op = TensorOperator::zero(space, in_arity, out_arity);
        for (c, col) in columns {
            let col: BTreeMap<Tuple, f64> = col.into_iter().filter(|(_, v)| *v != 0.0).collect();
            if !col.is_empty() {
                op.columns.insert(c, col);
            }
        }
        op
    }

    /// `projector^{⊗m}`: the identity on `A_A^{⊗m}`.
    pub fn identity(space: Arc<Basis>, m: usize) -> TensorOperator {
        let len = space.len();
        let cols: Vec<_> = all_tuples(len, m)
            .into_iter()
            .map(|t| (t.clone(), BTreeMap::from([(t, 1.0)])))
            .collect();
        TensorOperator::from_columns(space, m, m, cols)
    }

    /// Koszul-signed permutation: input factor `i` moves to output slot
    /// `targets[i]`.
    pub fn signed_permutation(space: Arc<Basis>, targets: &[usize]) -> TensorOperator {
        let m = targets.len();
        let mut order = vec![0usize; m];
        for (i, &t) in targets.iter().enumerate() {
            order[t] = i;
        }
        let len = space.len();
        let cols: Vec<_> = all_tuples(len, m)
            .into_iter()
            .map(|t| {
                let parities: Vec<usize> = t.iter().map(|&b| space.get(b as usize).parity()).collect();
                let sign = koszul_sign(&parities, &order);
                let out: Tuple = order.iter().map(|&i| t[i]).collect();
                (t, BTreeMap::from([(out, sign)]))
            })
            .collect();
        TensorOperator::from_columns(space, m, m, cols)
    }

    /// `d^{⊗m} = Σ_i 1 ⊗ … ⊗ d ⊗ … ⊗ 1` with Koszul signs.
    pub fn differential(space: Arc<Basis>, m: usize) -> TensorOperator {
        let len = space.len();
        let mut cols = Vec::new();
        for t in all_tuples(len, m) {
            let mut col: BTreeMap<Tuple, f64> = BTreeMap::new();
            let mut before = 0usize;
            for i in 0..m {
                let b = space.get(t[i] as usize);
                for (g, c) in b.differential() {
                    let j = space
                        .index_of(&g)
                        .expect("d preserves eigenvalues, so stays in the cutoff");
                    let mut out = t.clone();
                    out[i] = j as u32;
                    *col.entry(out).or_insert(0.0) += parity_sign(before) * c;
                }
                before += b.degree();
            }
            cols.push((t, col));
        }
        TensorOperator::from_columns(space, m, m, cols)
    }

    pub fn space(&self) -> &Arc<Basis> {
        &self.space
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn columns(&self) -> &BTreeMap<Tuple, BTreeMap<Tuple, f64>> {
        &self.columns
    }

    pub fn get(&self, input: &[u32], output: &[u32]) -> f64 {
        self.columns
            .get(input)
            .and_then(|c| c.get(output))
            .copied()
            .unwrap_or(0.0)
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.columns.values().map(|c| c.len()).sum()
    }

    fn same_space(&self, other: &TensorOperator) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space)
            || (self.space.dim() == other.space.dim() && self.space.cutoff() == other.space.cutoff())
        {
            Ok(())
        } else {
            Err(Error::CutoffMismatch(
                self.space.cutoff().to_string(),
                other.space.cutoff().to_string(),
            ))
        }
    }

    fn same_shape(&self, other: &TensorOperator) -> Result<()> {
        self.same_space(other)?;
        if self.in_arity != other.in_arity {
            return Err(Error::Arity {
                expected: self.in_arity,
                found: other.in_arity,
            });
        }
        if self.out_arity != other.out_arity {
            return Err(Error::Arity {
                expected: self.out_arity,
                found: other.out_arity,
            });
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TensorOperator) -> Result<TensorOperator> {
        self.same_space(first)?;
        if first.out_arity != self.in_arity {
            return Err(Error::Arity {
                expected: self.in_arity,
                found: first.out_arity,
            });
        }
        let cols = first.columns.iter().map(|(c, mid)| {
            let mut col: BTreeMap<Tuple, f64> = BTreeMap::new();
            for (m, &a) in mid {
                if let Some(next) = self.columns.get(m) {
                    for (o, &b) in next {
                        *col.entry(o.clone()).or_insert(0.0) += a * b;
                    }
                }
            }
            (c.clone(), col)
        });
        let cols: Vec<_> = cols.collect();
        Ok(TensorOperator::from_columns(
            self.space.clone(),
            first.in_arity,
            self.out_arity,
            cols,
        ))
    }

    fn tuple_degree(&self, t: &[u32]) -> usize {
        t.iter().map(|&b| self.space.get(b as usize).degree()).sum()
    }

    /// `(self ⊗ other)(a ⊗ b) = (−1)^{|other|·|a|} self(a) ⊗ other(b)`,
    /// with `|other|` read off per entry.
    pub fn tensor(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.same_space(other)?;
        let mut cols = Vec::new();
        for (ca, cola) in &self.columns {
            let deg_a = self.tuple_degree(ca);
            for (cb, colb) in &other.columns {
                let deg_in_b = other.tuple_degree(cb);
                let mut input = ca.clone();
                input.extend_from_slice(cb);
                let mut col = BTreeMap::new();
                for (oa, &va) in cola {
                    for (ob, &vb) in colb {
                        let shift = other.tuple_degree(ob) as i64 - deg_in_b as i64;
                        let sign = parity_sign((shift.unsigned_abs() as usize) * deg_a);
                        let mut out = oa.clone();
                        out.extend_from_slice(ob);
                        col.insert(out, sign * va * vb);
                    }
                }
                cols.push((input, col));
            }
        }
        Ok(TensorOperator::from_columns(
            self.space.clone(),
            self.in_arity + other.in_arity,
            self.out_arity + other.out_arity,
            cols,
        ))
    }

    pub fn add(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.same_shape(other)?;
        let mut cols = self.columns.clone();
        for (c, col) in &other.columns {
            let target = cols.entry(c.clone()).or_default();
            for (o, &v) in col {
                *target.entry(o.clone()).or_insert(0.0) += v;
            }
        }
        Ok(TensorOperator::from_columns(
            self.space.clone(),
            self.in_arity,
            self.out_arity,
            cols,
        ))
    }

    pub fn scaled(&self, s: f64) -> TensorOperator {
        let cols = self.columns.iter().map(|(c, col)| {
            (
                c.clone(),
                col.iter().map(|(o, v)| (o.clone(), v * s)).collect::<BTreeMap<_, _>>(),
            )
        });
        let cols: Vec<_> = cols.collect();
        TensorOperator::from_columns(self.space.clone(), self.in_arity, self.out_arity, cols)
    }

    pub fn sub(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.add(&other.scaled(-1.0))
    }

    /// `d ∘ Φ − (−1)^{|Φ|} Φ ∘ d`.
    pub fn d_comp(&self, parity: usize) -> Result<TensorOperator> {
        let d_out = TensorOperator::differential(self.space.clone(), self.out_arity);
        let d_in = TensorOperator::differential(self.space.clone(), self.in_arity);
        let left = d_out.compose(self)?;
        let right = self.compose(&d_in)?;
        left.sub(&right.scaled(parity_sign(parity)))
    }

    pub fn max_abs(&self) -> f64 {
        self.columns
            .values()
            .flat_map(|c| c.values())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &TensorOperator) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `max|a − b| / max(max|a|, max|b|)`; zero when both vanish.
    pub fn relative_diff(&self, other: &TensorOperator) -> Result<f64> {
        let diff = self.max_abs_diff(other)?;
        let scale = self.max_abs().max(other.max_abs());
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }

    /// Applies the operator to a tensor product of basis forms.
    pub fn apply_basis(&self, input: &[u32]) -> Vec<(Tuple, f64)> {
        self.columns
            .get(input)
            .map(|c| c.iter().map(|(o, &v)| (o.clone(), v)).collect())
            .unwrap_or_default()
    }

    /// Image of a single form (`m = 1`, `n = 1`).
    pub fn apply_form(&self, a: &SpectralForm) -> Result<SpectralForm> {
        if self.in_arity != 1 || self.out_arity != 1 {
            return Err(Error::Arity {
                expected: 1,
                found: self.in_arity,
            });
        }
        let mut out = SpectralForm::zero(self.space.dim());
        for (b, c) in a.terms() {
            let i = self.space.index_of(b).ok_or_else(|| Error::Projection {
                slot: 0,
                eigenvalue: b.eigenvalue(),
                cutoff: self.space.cutoff().to_string(),
            })?;
            for (o, v) in self.apply_basis(&[i as u32]) {
                out.add_term(self.space.get(o[0] as usize), c * v);
            }
        }
        Ok(out)
    }

    /// Text dump: one `in -> out : value` line per nonzero entry, tuples
    /// written with basis labels.
    pub fn dump(&self) -> String {
        let label = |t: &[u32]| {
            if t.is_empty() {
                "()".to_string()
            } else {
                t.iter()
                    .map(|&i| self.space.get(i as usize).to_string())
                    .collect::<Vec<_>>()
                    .join(" (x) ")
            }
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "operator in={} out={} cutoff={} dim={} nnz={}",
            self.in_arity,
            self.out_arity,
            self.space.cutoff(),
            self.space.dim(),
            self.nnz()
        );
        for (c, col) in &self.columns {
            for (o, v) in col {
                let _ = writeln!(s, "{} -> {} : {v:?}", label(c), label(o));
            }
        }
        s
    }
}
