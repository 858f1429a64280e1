use std::collections::BTreeMap;

use smallvec::smallvec;

use super::metform::{DtSet, Leg, MetForm, Term};
use crate::error::Result;
use crate::expsum::{ExpSum, VarId};
use crate::spectral::{enumerate_basis, EigenvalueSet, SpectralForm};

pub const X: Leg = Leg { point: 0, key: 0 };
pub const Y: Leg = Leg { point: 1, key: 0 };

/// Two-leg form `Σ c(t) α(x) ⊗ β(y)`; legs are always `[X, Y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointForm(MetForm);

impl TwoPointForm {
    pub fn from_metform(f: MetForm) -> TwoPointForm {
        assert_eq!(f.legs(), &[X, Y], "two-point forms have legs [x, y]");
        TwoPointForm(f)
    }

    pub fn as_metform(&self) -> &MetForm {
        &self.0
    }

    pub fn into_metform(self) -> MetForm {
        self.0
    }

    pub fn d_x(&self) -> TwoPointForm {
        TwoPointForm(self.0.d_leg(0))
    }

    pub fn d_y(&self) -> TwoPointForm {
        TwoPointForm(self.0.d_leg(1))
    }

    pub fn codiff_x(&self) -> TwoPointForm {
        TwoPointForm(self.0.codiff_leg(0))
    }

    pub fn codiff_y(&self) -> TwoPointForm {
        TwoPointForm(self.0.codiff_leg(1))
    }

    pub fn laplacian_x(&self) -> TwoPointForm {
        TwoPointForm(self.0.laplacian_leg(0))
    }

    pub fn laplacian_y(&self) -> TwoPointForm {
        TwoPointForm(self.0.laplacian_leg(1))
    }

    /// `∂/∂t_var` on the coefficients.
    pub fn time_derivative(&self, var: VarId) -> TwoPointForm {
        let mut out = MetForm::zero(self.0.dim(), &[X, Y]);
        for (t, v) in self.0.terms() {
            out.add_term(t.clone(), v.derivative(var));
        }
        TwoPointForm(out)
    }

    /// `(x, y) ↦ (y, x)` with the Koszul sign of exchanging the legs.
    pub fn swapped(&self) -> TwoPointForm {
        TwoPointForm(self.0.permute_legs(&[1, 0]).relabeled(&[X, Y]))
    }

    pub fn plus(&self, other: &TwoPointForm) -> TwoPointForm {
        TwoPointForm(self.0.plus(&other.0))
    }

    pub fn minus(&self, other: &TwoPointForm) -> TwoPointForm {
        TwoPointForm(self.0.minus(&other.0))
    }

    pub fn scaled(&self, c: f64) -> TwoPointForm {
        TwoPointForm(self.0.scaled(c))
    }

    pub fn evaluate(&self, assignment: &BTreeMap<VarId, f64>) -> Result<TwoPointForm> {
        Ok(TwoPointForm(self.0.evaluate(assignment)?))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Convolution operator `a ↦ Tr_x a(x) ∧ k(x, y)` at the given lengths;
    /// time generators are discarded.
    pub fn apply(&self, a: &SpectralForm, assignment: &BTreeMap<VarId, f64>) -> Result<SpectralForm> {
        let input = MetForm::one_leg(a, Leg::new(0, 0));
        let kernel = self
            .0
            .dt_component(DtSet::EMPTY)
            .evaluate(assignment)?
            .relabeled(&[Leg::new(0, 1), Y]);
        let traced = input.product(&kernel).trace_point(0);
        let mut out = SpectralForm::zero(self.0.dim());
        for (t, v) in traced.terms() {
            out.add_term(t.forms[0], v.constant_part());
        }
        Ok(out)
    }
}

/// `K^A_t(x, y) = Σ_{λ(e)∈A} (−1)^{|e|} e^{−λt} e(x) ⊗ ⋆e(y)`.
///
/// The degree sign makes `(d_x + d_y)K = 0` and `(d*_x − d*_y)K = 0` hold
/// simultaneously under the leg-ordered Koszul rule.
pub fn cutoff_kernel(dim: usize, cutoff: &EigenvalueSet, var: VarId) -> Result<TwoPointForm> {
    let mut f = MetForm::zero(dim, &[X, Y]);
    for e in enumerate_basis(dim, cutoff)? {
        let (s, starred) = e.star();
        let sign = if e.degree() % 2 == 0 { s } else { -s };
        f.add_term(
            Term {
                dt: DtSet::EMPTY,
                forms: smallvec![e, starred],
            },
            ExpSum::exp(var, e.eigenvalue() as f64, sign),
        );
    }
    Ok(TwoPointForm(f))
}

/// `L^A_t = −d*_x K^A_t`.
pub fn l_kernel(dim: usize, cutoff: &EigenvalueSet, var: VarId) -> Result<TwoPointForm> {
    Ok(cutoff_kernel(dim, cutoff, var)?.codiff_x().scaled(-1.0))
}

/// Edge label `ω_e = K_{t_e} + dt_e ∧ L_{t_e}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator {
    pub edge: VarId,
    pub value: MetForm,
}

pub fn propagator(dim: usize, edge: VarId, cutoff: &EigenvalueSet) -> Result<Propagator> {
    let k = cutoff_kernel(dim, cutoff, edge)?.into_metform();
    let l = l_kernel(dim, cutoff, edge)?.into_metform();
    let mut value = k;
    for (t, v) in l.terms() {
        value.add_term(
            Term {
                dt: DtSet::single(edge),
                forms: t.forms.clone(),
            },
            v.clone(),
        );
    }
    Ok(Propagator { edge, value })
}

/// `(p ★ q)(x, z) = Tr_y p(x, y) ∧ q(y, z)`.
pub fn convolve(p: &TwoPointForm, q: &TwoPointForm) -> TwoPointForm {
    let left = p.0.clone();
    let right = q.0.clone().relabeled(&[Leg::new(1, 1), Leg::new(2, 0)]);
    let traced = left.product(&right).trace_point(1);
    TwoPointForm(traced.relabeled(&[X, Y]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> EigenvalueSet {
        EigenvalueSet::new(2, v.iter().copied()).unwrap()
    }

    #[test]
    fn harmonic_kernel_is_time_independent() {
        let k = cutoff_kernel(2, &set(&[0]), 0).unwrap();
        assert_eq!(k.len(), 4);
        assert!(k.time_derivative(0).is_zero());
        assert!(l_kernel(2, &set(&[0]), 0).unwrap().is_zero());
    }

    #[test]
    fn kernel_is_closed_and_coclosed() {
        for a in [set(&[0]), set(&[1]), set(&[0, 1, 2])] {
            let k = cutoff_kernel(2, &a, 0).unwrap();
            assert!(k.d_x().plus(&k.d_y()).max_abs() < 1e-12);
            assert!(k.codiff_x().minus(&k.codiff_y()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_is_closed() {
        let w = propagator(2, 0, &set(&[0, 1, 2])).unwrap();
        assert!(w.value.total_d().max_abs() < 1e-12);
    }

    #[test]
    fn projector_at_time_zero() {
        let a = set(&[0, 1]);
        let k = cutoff_kernel(2, &a, 0).unwrap();
        let at0: BTreeMap<VarId, f64> = [(0, 0.0)].into_iter().collect();
        for b in enumerate_basis(2, &a).unwrap() {
            let f = SpectralForm::basis(b);
            let image = k.apply(&f, &at0).unwrap();
            assert!(image.max_abs_diff(&f) < 1e-14, "{b}");
        }
    }

    #[test]
    fn cross_cutoff_convolution_vanishes() {
        let p = cutoff_kernel(2, &set(&[1]), 0).unwrap();
        let q = cutoff_kernel(2, &set(&[2]), 1).unwrap();
        assert!(convolve(&p, &q).is_zero());
    }
}
