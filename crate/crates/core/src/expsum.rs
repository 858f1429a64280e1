//! Exponential sums `Σ c · exp(−Σ_v r_v t_v)` over edge-length variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use ordered_float::OrderedFloat;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type VarId = u32;

/// Sorted `(variable, rate)` pairs with nonzero rates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(SmallVec<[(VarId, OrderedFloat<f64>); 4]>);

impl Exponent {
    pub fn single(var: VarId, rate: f64) -> Exponent {
        let mut e = Exponent::default();
        e.add(var, rate);
        e
    }

    pub fn rates(&self) -> impl Iterator<Item = (VarId, f64)> + '_ {
        self.0.iter().map(|&(v, r)| (v, r.0))
    }

    pub fn rate(&self, var: VarId) -> f64 {
        self.0.iter().find(|(v, _)| *v == var).map_or(0.0, |(_, r)| r.0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&mut self, var: VarId, rate: f64) {
        if rate == 0.0 {
            return;
        }
        match self.0.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(i) => {
                let r = self.0[i].1 .0 + rate;
                if r == 0.0 {
                    self.0.remove(i);
                } else {
                    self.0[i].1 = OrderedFloat(r);
                }
            }
            Err(i) => self.0.insert(i, (var, OrderedFloat(rate))),
        }
    }

    fn combined(&self, other: &Exponent) -> Exponent {
        let mut out = self.clone();
        for (v, r) in other.rates() {
            out.add(v, r);
        }
        out
    }
}

/// `∫_0^1 e^{−r u} du`, exact at `r = 0`.
pub fn unit_interval_integral(rate: f64) -> f64 {
    if rate == 0.0 {
        1.0
    } else {
        -(-rate).exp_m1() / rate
    }
}

/// Finite exponential sum; exact zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpSum {
    terms: BTreeMap<Exponent, f64>,
}

impl ExpSum {
    pub fn zero() -> ExpSum {
        ExpSum::default()
    }

    pub fn constant(c: f64) -> ExpSum {
        ExpSum::term(Exponent::default(), c)
    }

    /// `c · exp(−rate · t_var)`.
    pub fn exp(var: VarId, rate: f64, c: f64) -> ExpSum {
        ExpSum::term(Exponent::single(var, rate), c)
    }

    pub fn term(exponent: Exponent, c: f64) -> ExpSum {
        let mut s = ExpSum::zero();
        s.add_term(exponent, c);
        s
    }

    pub fn add_term(&mut self, exponent: Exponent, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the rate-free term.
    pub fn constant_part(&self) -> f64 {
        self.terms.get(&Exponent::default()).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, c: f64) -> ExpSum {
        if c == 0.0 {
            return ExpSum::zero();
        }
        ExpSum {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &ExpSum, c: f64) {
        for (e, v) in other.terms() {
            self.add_term(e.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        out.add_assign_scaled(other, 1.0);
        out
    }

    pub fn minus(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        out.add_assign_scaled(other, -1.0);
        out
    }

    pub fn times(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(ea.combined(eb), ca * cb);
            }
        }
        out
    }

    /// Exact `∂/∂t_var`: each term gains the factor `−rate`.
    pub fn derivative(&self, var: VarId) -> ExpSum {
        let mut out = ExpSum::zero();
        for (e, c) in self.terms() {
            out.add_term(e.clone(), -e.rate(var) * c);
        }
        out
    }

    /// Substitutes the assigned variables; the others stay symbolic.
    pub fn evaluate(&self, assignment: &BTreeMap<VarId, f64>) -> Result<ExpSum> {
        for (&var, &value) in assignment {
            if value.is_nan() || value < 0.0 {
                return Err(Error::NegativeLength { var, value });
            }
        }
        let mut out = ExpSum::zero();
        for (e, c) in self.terms() {
            let mut rest = Exponent::default();
            let mut factor = 0.0;
            for (v, r) in e.rates() {
                match assignment.get(&v) {
                    Some(&t) => factor += r * t,
                    None => rest.add(v, r),
                }
            }
            out.add_term(rest, c * (-factor).exp());
        }
        Ok(out)
    }

    /// Full evaluation; every variable must be assigned.
    pub fn value(&self, assignment: &BTreeMap<VarId, f64>) -> Result<f64> {
        let reduced = self.evaluate(assignment)?;
        match reduced.terms.keys().find(|e| !e.is_constant()) {
            Some(e) => Err(Error::InvalidChain(format!("variable t{} left unassigned", e.0[0].0))),
            None => Ok(reduced.constant_part()),
        }
    }

    /// Pulls back along `t_v = a_v + Σ_i b_{v,i} u_i`; the result is a sum in
    /// the cube coordinates `u_0, …, u_{k−1}` (variable ids `0..k`).
    pub fn substitute_affine(&self, maps: &BTreeMap<VarId, (f64, Vec<f64>)>) -> Result<ExpSum> {
        let mut out = ExpSum::zero();
        for (e, c) in self.terms() {
            let mut rest = Exponent::default();
            let mut offset = 0.0;
            for (v, r) in e.rates() {
                let (a, slopes) = maps
                    .get(&v)
                    .ok_or_else(|| Error::InvalidChain(format!("no affine map for variable t{v}")))?;
                offset += r * a;
                for (i, &b) in slopes.iter().enumerate() {
                    rest.add(i as VarId, r * b);
                }
            }
            out.add_term(rest, c * (-offset).exp());
        }
        Ok(out)
    }

    /// `∫_{[0,1]^k}` with cube coordinates as variables `0..k`.
    pub fn integrate_unit_box(&self) -> f64 {
        self.terms()
            .map(|(e, c)| c * e.rates().map(|(_, r)| unit_interval_integral(r)).product::<f64>())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &ExpSum) -> f64 {
        self.minus(other).max_abs()
    }
}

impl fmt::Display for ExpSum {
    /// `0.5*exp(-1*t0-2*t3) + 1`, terms in exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}")?;
            if !e.is_constant() {
                write!(f, "*exp(")?;
                for (v, r) in e.rates() {
                    write!(f, "-{r:?}*t{v}")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(VarId, f64)]) -> BTreeMap<VarId, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn product_adds_rates() {
        let a = ExpSum::exp(0, 1.0, 2.0);
        let b = ExpSum::exp(0, 2.0, 3.0).plus(&ExpSum::constant(1.0));
        let p = a.times(&b);
        assert_eq!(p.len(), 2);
        let v = p.value(&assign(&[(0, 0.5)])).unwrap();
        let expected = 2.0 * (-0.5f64).exp() * (3.0 * (-1.0f64).exp() + 1.0);
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn derivative_is_exact() {
        let f = ExpSum::exp(3, 2.0, 1.5);
        assert_eq!(f.derivative(3), ExpSum::exp(3, 2.0, -3.0));
        assert!(f.derivative(1).is_zero());
    }

    #[test]
    fn negative_length_is_rejected() {
        let f = ExpSum::exp(0, 1.0, 1.0);
        assert_eq!(
            f.evaluate(&assign(&[(0, -0.1)])),
            Err(Error::NegativeLength { var: 0, value: -0.1 })
        );
    }

    #[test]
    fn evaluation_composes() {
        let f = ExpSum::exp(0, 1.0, 1.0).times(&ExpSum::exp(1, 2.0, 1.0));
        let once = f.evaluate(&assign(&[(0, 0.3), (1, 0.7)])).unwrap();
        let twice = f
            .evaluate(&assign(&[(0, 0.3)]))
            .unwrap()
            .evaluate(&assign(&[(1, 0.7)]))
            .unwrap();
        assert!(once.max_abs_diff(&twice) < 1e-15);
    }

    #[test]
    fn unit_interval_integral_closed_form() {
        assert_eq!(unit_interval_integral(0.0), 1.0);
        let r: f64 = 2.0;
        assert!((unit_interval_integral(r) - (1.0 - (-r).exp()) / r).abs() < 1e-15);
        // tiny rates stay accurate
        assert!((unit_interval_integral(1e-12) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn affine_pullback_then_integrate() {
        // t0 = 0.5 + u0, t1 = u0 + 2 u1
        let f = ExpSum::exp(0, 1.0, 1.0).times(&ExpSum::exp(1, 1.0, 1.0));
        let maps: BTreeMap<VarId, (f64, Vec<f64>)> = [(0, (0.5, vec![1.0, 0.0])), (1, (0.0, vec![1.0, 2.0]))]
            .into_iter()
            .collect();
        let g = f.substitute_affine(&maps).unwrap();
        let exact = (-0.5f64).exp() * unit_interval_integral(2.0) * unit_interval_integral(2.0);
        assert!((g.integrate_unit_box() - exact).abs() < 1e-15);
    }
}
