use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::Result;
use crate::expsum::{ExpSum, VarId};
use crate::spectral::{torus_volume, BasisForm, FourierMode, SpectralForm};

pub type PointId = u32;

/// A tensor slot of a multi-leg form: the point it lives on and its rank
/// in that point's wedge order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub point: PointId,
    pub key: u32,
}

impl Leg {
    pub fn new(point: PointId, key: u32) -> Leg {
        Leg { point, key }
    }
}

/// `∧_{e∈D} dt_e` in increasing edge order; bit `e` is `dt_e`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DtSet(u64);

impl DtSet {
    pub const EMPTY: DtSet = DtSet(0);

    pub fn from_bits(bits: u64) -> DtSet {
        DtSet(bits)
    }

    pub fn single(var: VarId) -> DtSet {
        DtSet(1 << var)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, var: VarId) -> bool {
        self.0 & (1 << var) != 0
    }

    pub fn vars(self) -> impl Iterator<Item = VarId> {
        (0..64).filter(move |&v| self.0 & (1u64 << v) != 0)
    }

    /// `dt_self ∧ dt_other`, or `None` if a generator repeats.
    pub fn wedge(self, other: DtSet) -> Option<(f64, DtSet)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for v in other.vars() {
            swaps += (self.0 >> (v + 1)).count_ones();
        }
        Some((parity_sign(swaps as usize), DtSet(self.0 | other.0)))
    }
}

pub(crate) fn parity_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Koszul sign of reordering graded items: `order[j]` is the old index of
/// the item placed at position `j`.
pub(crate) fn koszul_sign(parities: &[usize], order: &[usize]) -> f64 {
    let mut swaps = 0usize;
    for a in 0..order.len() {
        if parities[order[a]].is_multiple_of(2) {
            continue;
        }
        for b in a + 1..order.len() {
            if order[b] < order[a] && parities[order[b]] % 2 == 1 {
                swaps += 1;
            }
        }
    }
    parity_sign(swaps)
}

/// One basis monomial `dt_D ∧ leg_0 ∧ leg_1 ∧ …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub dt: DtSet,
    pub forms: SmallVec<[BasisForm; 4]>,
}

impl Term {
    pub fn degree(&self) -> usize {
        self.dt.degree() + self.forms.iter().map(|f| f.degree()).sum::<usize>()
    }
}

/// Element of `Ω(M)^{⊗legs} ⊗ Ω(Met)` with exponential-sum coefficients.
///
/// All terms share one leg list. Generators are ordered `dt` first, then
/// legs left to right; every reordering applies the Koszul sign.
#[derive(Clone, Debug, PartialEq)]
pub struct MetForm {
    dim: usize,
    legs: SmallVec<[Leg; 4]>,
    terms: BTreeMap<Term, ExpSum>,
}

impl MetForm {
    pub fn zero(dim: usize, legs: &[Leg]) -> MetForm {
        MetForm {
            dim,
            legs: legs.iter().copied().collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: ExpSum) -> MetForm {
        let mut f = MetForm::zero(dim, &[]);
        f.add_term(
            Term {
                dt: DtSet::EMPTY,
                forms: SmallVec::new(),
            },
            value,
        );
        f
    }

    pub fn one_leg(form: &SpectralForm, leg: Leg) -> MetForm {
        let mut f = MetForm::zero(form.dim(), &[leg]);
        for (b, c) in form.terms() {
            f.add_term(
                Term {
                    dt: DtSet::EMPTY,
                    forms: smallvec::smallvec![*b],
                },
                ExpSum::constant(c),
            );
        }
        f
    }

    pub fn add_term(&mut self, term: Term, coef: ExpSum) {
        debug_assert_eq!(term.forms.len(), self.legs.len());
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_scaled(&coef, 1.0);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, term: Term, coef: &ExpSum, scale: f64) {
        if scale == 0.0 {
            return;
        }
        match self.terms.entry(term) {
            Entry::Vacant(v) => {
                let c = coef.scaled(scale);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_scaled(coef, scale);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &ExpSum)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn touches(&self, point: PointId) -> bool {
        self.legs.iter().any(|l| l.point == point)
    }

    /// Replaces the leg tags; the slot order is unchanged.
    pub fn relabeled(mut self, legs: &[Leg]) -> MetForm {
        assert_eq!(legs.len(), self.legs.len(), "leg count must match");
        self.legs = legs.iter().copied().collect();
        self
    }

    /// Parity of every term, if uniform.
    pub fn parity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|t| t.degree() % 2);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn scaled(&self, c: f64) -> MetForm {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for (t, v) in self.terms() {
            out.add_scaled(t.clone(), v, c);
        }
        out
    }

    pub fn plus(&self, other: &MetForm) -> MetForm {
        assert_eq!(self.legs, other.legs, "adding forms with different legs");
        let mut out = self.clone();
        for (t, v) in other.terms() {
            out.add_scaled(t.clone(), v, 1.0);
        }
        out
    }

    pub fn minus(&self, other: &MetForm) -> MetForm {
        self.plus(&other.scaled(-1.0))
    }

    /// `self ∧ other` with legs concatenated; terms with more than
    /// `max_dt` time generators are dropped.
    pub fn product_truncated(&self, other: &MetForm, max_dt: usize) -> MetForm {
        debug_assert_eq!(self.dim, other.dim);
        let mut legs = self.legs.clone();
        legs.extend(other.legs.iter().copied());
        let mut out = MetForm::zero(self.dim, &legs);
        for (ta, ca) in self.terms() {
            let leg_deg_a: usize = ta.forms.iter().map(|f| f.degree()).sum();
            for (tb, cb) in other.terms() {
                if ta.dt.degree() + tb.dt.degree() > max_dt {
                    continue;
                }
                let Some((dt_sign, dt)) = ta.dt.wedge(tb.dt) else {
                    continue;
                };
                // legs of `a` pass over the time generators of `b`
                let sign = dt_sign * parity_sign(leg_deg_a * tb.dt.degree());
                let mut forms = ta.forms.clone();
                forms.extend(tb.forms.iter().copied());
                let coef = ca.times(cb);
                out.add_scaled(Term { dt, forms }, &coef, sign);
            }
        }
        out
    }

    pub fn product(&self, other: &MetForm) -> MetForm {
        self.product_truncated(other, usize::MAX)
    }

    /// Keeps terms with at most `max_dt` time generators.
    pub fn truncate_dt(&self, max_dt: usize) -> MetForm {
        MetForm {
            dim: self.dim,
            legs: self.legs.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.dt.degree() <= max_dt)
                .map(|(t, v)| (t.clone(), v.clone()))
                .collect(),
        }
    }

    /// Keeps terms whose time generators are exactly `dt`.
    pub fn dt_component(&self, dt: DtSet) -> MetForm {
        MetForm {
            dim: self.dim,
            legs: self.legs.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.dt == dt)
                .map(|(t, v)| (t.clone(), v.clone()))
                .collect(),
        }
    }

    /// Applies a per-basis-form operator of parity `op_parity` to leg `i`,
    /// passing it over the time generators and the legs before `i`.
    pub fn apply_on_leg<I>(&self, i: usize, op_parity: usize, op: impl Fn(&BasisForm) -> I) -> MetForm
    where
        I: IntoIterator<Item = (BasisForm, f64)>,
    {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for (t, v) in self.terms() {
            let before = t.dt.degree() + t.forms[..i].iter().map(|f| f.degree()).sum::<usize>();
            let sign = parity_sign(op_parity * before);
            for (g, s) in op(&t.forms[i]) {
                let mut forms = t.forms.clone();
                forms[i] = g;
                out.add_scaled(Term { dt: t.dt, forms }, v, sign * s);
            }
        }
        out
    }

    pub fn d_leg(&self, i: usize) -> MetForm {
        self.apply_on_leg(i, 1, |b| b.differential())
    }

    pub fn codiff_leg(&self, i: usize) -> MetForm {
        self.apply_on_leg(i, 1, |b| b.codifferential())
    }

    pub fn laplacian_leg(&self, i: usize) -> MetForm {
        self.apply_on_leg(i, 0, |b| {
            let lambda = b.eigenvalue() as f64;
            [(*b, lambda)]
        })
    }

    /// Sum of `d` over every leg.
    pub fn d_legs(&self) -> MetForm {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for i in 0..self.legs.len() {
            out = out.plus(&self.d_leg(i));
        }
        out
    }

    /// `d_t = Σ_v dt_v ∂/∂t_v`, the new generator entering on the left.
    pub fn d_t(&self) -> MetForm {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for (t, v) in self.terms() {
            let mut vars: Vec<VarId> = v.terms().flat_map(|(e, _)| e.rates().map(|(var, _)| var)).collect();
            vars.sort_unstable();
            vars.dedup();
            for var in vars {
                let Some((sign, dt)) = DtSet::single(var).wedge(t.dt) else {
                    continue;
                };
                let deriv = v.derivative(var);
                out.add_scaled(
                    Term {
                        dt,
                        forms: t.forms.clone(),
                    },
                    &deriv,
                    sign,
                );
            }
        }
        out
    }

    /// Total differential `d_t + Σ_legs d`.
    pub fn total_d(&self) -> MetForm {
        self.d_t().plus(&self.d_legs())
    }

    /// Substitutes edge lengths into the coefficients.
    pub fn evaluate(&self, assignment: &BTreeMap<VarId, f64>) -> Result<MetForm> {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for (t, v) in self.terms() {
            out.add_term(t.clone(), v.evaluate(assignment)?);
        }
        Ok(out)
    }

    /// Reorders legs: new slot `j` holds old slot `order[j]`.
    pub fn permute_legs(&self, order: &[usize]) -> MetForm {
        assert_eq!(order.len(), self.legs.len());
        let legs: SmallVec<[Leg; 4]> = order.iter().map(|&i| self.legs[i]).collect();
        let mut out = MetForm::zero(self.dim, &legs);
        let mut parities: SmallVec<[usize; 8]> = SmallVec::new();
        for (t, v) in self.terms() {
            parities.clear();
            parities.extend(t.forms.iter().map(|f| f.parity()));
            let sign = koszul_sign(&parities, order);
            let forms = order.iter().map(|&i| t.forms[i]).collect();
            out.add_scaled(Term { dt: t.dt, forms }, v, sign);
        }
        out
    }

    /// Sorts legs by `(point, key)`.
    pub fn sorted_legs(&self) -> MetForm {
        let mut order: Vec<usize> = (0..self.legs.len()).collect();
        order.sort_by_key(|&i| self.legs[i]);
        self.permute_legs(&order)
    }

    /// Wedges the legs at `point` in key order and integrates them over the
    /// torus. The legs are first moved to the far right with Koszul signs.
    pub fn trace_point(&self, point: PointId) -> MetForm {
        let mut at: Vec<usize> = (0..self.legs.len()).filter(|&i| self.legs[i].point == point).collect();
        at.sort_by_key(|&i| self.legs[i].key);
        let rest: Vec<usize> = (0..self.legs.len()).filter(|&i| self.legs[i].point != point).collect();
        let order: Vec<usize> = rest.iter().chain(at.iter()).copied().collect();
        let kept: SmallVec<[Leg; 4]> = rest.iter().map(|&i| self.legs[i]).collect();
        let mut out = MetForm::zero(self.dim, &kept);
        if at.is_empty() {
            return self.clone();
        }
        // physical product of r unit forms is vol^{-(r-1)/2}·unit, trace adds vol^{1/2}
        let r = at.len() as i32;
        let volume_factor = if r == 2 {
            1.0
        } else {
            torus_volume(self.dim).sqrt().powi(2 - r)
        };
        let top = self.dim;
        let mut parities: SmallVec<[usize; 8]> = SmallVec::new();
        for (t, v) in self.terms() {
            let degree: usize = at.iter().map(|&i| t.forms[i].degree()).sum();
            if degree != top {
                continue;
            }
            let tr = unit_trace_of_product(at.iter().map(|&i| &t.forms[i]));
            if tr == 0.0 {
                continue;
            }
            parities.clear();
            parities.extend(t.forms.iter().map(|f| f.parity()));
            let sign = koszul_sign(&parities, &order);
            let forms = rest.iter().map(|&i| t.forms[i]).collect();
            out.add_scaled(Term { dt: t.dt, forms }, v, sign * tr * volume_factor);
        }
        out
    }

    /// `factors[0] ∧ factors[1] ∧ …`, or the unit for no factors.
    pub fn product_all(dim: usize, factors: &[&MetForm], max_dt: usize) -> MetForm {
        let mut acc = MetForm::scalar(dim, ExpSum::constant(1.0));
        for f in factors {
            acc = acc.product_truncated(f, max_dt);
        }
        acc
    }

    /// `trace_point(point)` of `factors[0] ∧ factors[1] ∧ …` truncated at
    /// `max_dt`, without materializing the product: term combinations whose
    /// legs at `point` cannot pair are skipped before any coefficient work.
    pub fn trace_product(factors: &[&MetForm], point: PointId, max_dt: usize) -> MetForm {
        let dim = factors.first().map_or(0, |f| f.dim);
        let legs: Vec<Leg> = factors.iter().flat_map(|f| f.legs.iter().copied()).collect();
        let mut at: Vec<usize> = (0..legs.len()).filter(|&i| legs[i].point == point).collect();
        at.sort_by_key(|&i| legs[i].key);
        let rest: Vec<usize> = (0..legs.len()).filter(|&i| legs[i].point != point).collect();
        let kept: Vec<Leg> = rest.iter().map(|&i| legs[i]).collect();
        let mut out = MetForm::zero(dim, &kept);
        if at.is_empty() {
            return MetForm::product_all(dim, factors, max_dt);
        }
        let r = at.len() as i32;
        let volume_factor = if r == 2 {
            1.0
        } else {
            torus_volume(dim).sqrt().powi(2 - r)
        };
        let order: Vec<usize> = rest.iter().chain(at.iter()).copied().collect();
        let terms: Vec<Vec<(&Term, &ExpSum)>> = factors.iter().map(|f| f.terms.iter().collect()).collect();
        let mut walk = ProductWalk {
            terms: &terms,
            at: &at,
            rest: &rest,
            order: &order,
            dim,
            max_dt,
            scale: volume_factor,
            forms: SmallVec::new(),
            coefs: SmallVec::new(),
            out: &mut out,
        };
        walk.visit(0, DtSet::EMPTY, 1.0, 0);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.max_abs()))
    }

    pub fn max_abs_diff(&self, other: &MetForm) -> f64 {
        self.minus(other).max_abs()
    }

    /// Drops coefficient entries below `tol`.
    pub fn prune(&self, tol: f64) -> MetForm {
        let mut out = MetForm::zero(self.dim, &self.legs);
        for (t, v) in self.terms() {
            let mut kept = ExpSum::zero();
            for (e, c) in v.terms() {
                if c.abs() >= tol {
                    kept.add_term(e.clone(), c);
                }
            }
            out.add_term(t.clone(), kept);
        }
        out
    }
}

/// Unit-frame trace of `f_1 ∧ … ∧ f_r`.
/// Depth-first walk over one term per factor for [`MetForm::trace_product`].
struct ProductWalk<'a, 'b> {
    terms: &'a [Vec<(&'a Term, &'a ExpSum)>],
    at: &'a [usize],
    rest: &'a [usize],
    order: &'a [usize],
    dim: usize,
    max_dt: usize,
    scale: f64,
    forms: SmallVec<[BasisForm; 8]>,
    coefs: SmallVec<[&'a ExpSum; 4]>,
    out: &'b mut MetForm,
}

impl<'a> ProductWalk<'a, '_> {
    /// `leg_degree` is the total form degree of the legs chosen so far.
    fn visit(&mut self, level: usize, dt: DtSet, sign: f64, leg_degree: usize) {
        if level == self.terms.len() {
            self.leaf(dt, sign);
            return;
        }
        let terms = self.terms;
        for &(t, c) in &terms[level] {
            if dt.degree() + t.dt.degree() > self.max_dt {
                continue;
            }
            let Some((dt_sign, joint)) = dt.wedge(t.dt) else {
                continue;
            };
            let sign = sign * dt_sign * parity_sign(leg_degree * t.dt.degree());
            let degree = leg_degree + t.forms.iter().map(|f| f.degree()).sum::<usize>();
            let mark = self.forms.len();
            self.forms.extend(t.forms.iter().copied());
            self.coefs.push(c);
            self.visit(level + 1, joint, sign, degree);
            self.coefs.pop();
            self.forms.truncate(mark);
        }
    }

    fn leaf(&mut self, dt: DtSet, sign: f64) {
        let degree: usize = self.at.iter().map(|&i| self.forms[i].degree()).sum();
        if degree != self.dim || !momentum_balances(self.at.iter().map(|&i| &self.forms[i])) {
            return;
        }
        let tr = unit_trace_of_product(self.at.iter().map(|&i| &self.forms[i]));
        if tr == 0.0 {
            return;
        }
        let parities: SmallVec<[usize; 8]> = self.forms.iter().map(|f| f.parity()).collect();
        let sign = sign * koszul_sign(&parities, self.order) * tr * self.scale;
        let mut coef = self.coefs[0].clone();
        for c in &self.coefs[1..] {
            coef = coef.times(c);
        }
        let forms = self.rest.iter().map(|&i| self.forms[i]).collect();
        self.out.add_scaled(Term { dt, forms }, &coef, sign);
    }
}

/// Necessary condition for a nonzero integral of a product of Fourier
/// modes: some signed sum of the wave vectors vanishes.
fn momentum_balances<'a>(forms: impl Iterator<Item = &'a BasisForm>) -> bool {
    let modes: SmallVec<[FourierMode; 8]> = forms.map(|f| f.mode()).collect();
    let ks: SmallVec<[&[i16]; 8]> = modes.iter().map(|m| m.wave_vector()).collect();
    let Some((first, others)) = ks.split_first() else {
        return true;
    };
    (0u32..1 << others.len()).any(|mask| {
        (0..first.len()).all(|axis| {
            let mut total = first[axis] as i32;
            for (j, k) in others.iter().enumerate() {
                let v = k[axis] as i32;
                total += if mask >> j & 1 == 1 { -v } else { v };
            }
            total == 0
        })
    })
}

fn unit_trace_of_product<'a>(mut forms: impl Iterator<Item = &'a BasisForm>) -> f64 {
    let Some(first) = forms.next() else {
        return 0.0;
    };
    let mut acc: SmallVec<[(BasisForm, f64); 4]> = smallvec::smallvec![(*first, 1.0)];
    for f in forms {
        let mut next: SmallVec<[(BasisForm, f64); 4]> = SmallVec::new();
        for (a, ca) in &acc {
            for (g, s) in a.unit_wedge(f) {
                match next.iter_mut().find(|(b, _)| *b == g) {
                    Some(entry) => entry.1 += ca * s,
                    None => next.push((g, ca * s)),
                }
            }
        }
        next.retain(|(_, c)| *c != 0.0);
        if next.is_empty() {
            return 0.0;
        }
        acc = next;
    }
    acc.iter().map(|(b, c)| c * b.unit_trace()).sum()
}

impl fmt::Display for MetForm {
    /// One line per term: `dt{0,2} cos[1,0]dx1 | sin[0,1]1 : <expsum>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "legs")?;
        for l in &self.legs {
            write!(f, " p{}.{}", l.point, l.key)?;
        }
        writeln!(f)?;
        for (t, v) in self.terms() {
            write!(f, "dt{{")?;
            for (i, var) in t.dt.vars().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{var}")?;
            }
            write!(f, "}}")?;
            for (i, b) in t.forms.iter().enumerate() {
                write!(f, "{}{b}", if i == 0 { " " } else { " | " })?;
            }
            writeln!(f, " : {v}")?;
        }
        Ok(())
    }
}
