use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::basis::{torus_volume, BasisForm, CovectorSet, EigenvalueSet, MAX_DIM};

impl BasisForm {
    /// `d* e` with `d* = (−1)^{d(p+1)+1} ⋆d⋆` on degree-`p` input.
    pub fn codifferential(&self) -> SmallVec<[(BasisForm, f64); MAX_DIM]> {
        let dim = self.dim();
        let p = self.degree();
        let sign = if (dim * (p + 1) + 1).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let (s1, starred) = self.star();
        starred
            .differential()
            .into_iter()
            .map(|(f, c)| {
                let (s2, g) = f.star();
                (g, sign * s1 * s2 * c)
            })
            .collect()
    }
}

/// Finite real combination of basis forms on `T^d`.
///
/// Exact zeros are never stored; small nonzero coefficients survive until
/// [`SpectralForm::prune`] is called.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralForm {
    dim: usize,
    terms: BTreeMap<BasisForm, f64>,
}

impl SpectralForm {
    pub fn zero(dim: usize) -> SpectralForm {
        SpectralForm {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(form: BasisForm) -> SpectralForm {
        let mut f = SpectralForm::zero(form.dim());
        f.add_term(form, 1.0);
        f
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (BasisForm, f64)>) -> SpectralForm {
        let mut f = SpectralForm::zero(dim);
        for (b, c) in terms {
            f.add_term(b, c);
        }
        f
    }

    pub fn add_term(&mut self, form: BasisForm, coef: f64) {
        debug_assert_eq!(form.dim(), self.dim);
        if coef == 0.0 {
            return;
        }
        let entry = self.terms.entry(form).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(&form);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisForm, f64)> + '_ {
        self.terms.iter().map(|(b, &c)| (b, c))
    }

    pub fn coefficient(&self, form: &BasisForm) -> f64 {
        self.terms.get(form).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies a per-basis-form linear map.
    fn map_linear<I>(&self, f: impl Fn(&BasisForm) -> I) -> SpectralForm
    where
        I: IntoIterator<Item = (BasisForm, f64)>,
    {
        let mut out = SpectralForm::zero(self.dim);
        for (b, c) in self.terms() {
            for (g, s) in f(b) {
                out.add_term(g, c * s);
            }
        }
        out
    }

    pub fn differential(&self) -> SpectralForm {
        self.map_linear(|b| b.differential())
    }

    pub fn hodge_star(&self) -> SpectralForm {
        self.map_linear(|b| {
            let (s, g) = b.star();
            [(g, s)]
        })
    }

    pub fn codifferential(&self) -> SpectralForm {
        self.map_linear(|b| b.codifferential())
    }

    /// `H = dd* + d*d`, computed literally.
    pub fn laplacian(&self) -> SpectralForm {
        let a = self.codifferential().differential();
        let b = self.differential().codifferential();
        &a + &b
    }

    pub fn wedge(&self, other: &SpectralForm) -> SpectralForm {
        debug_assert_eq!(self.dim, other.dim);
        let scale = torus_volume(self.dim).sqrt().recip();
        let mut out = SpectralForm::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                for (g, s) in a.unit_wedge(b) {
                    out.add_term(g, ca * cb * s * scale);
                }
            }
        }
        out
    }

    /// `∫_{T^d}` of the top-degree component.
    pub fn trace(&self) -> f64 {
        let scale = torus_volume(self.dim).sqrt();
        self.terms().map(|(b, c)| c * b.unit_trace()).sum::<f64>() * scale
    }

    /// `⟨a, b⟩ = Tr(a ∧ ⋆b)`; basis forms are orthonormal, so this is the
    /// coefficient dot product.
    pub fn inner(&self, other: &SpectralForm) -> f64 {
        self.terms().map(|(b, c)| c * other.coefficient(b)).sum()
    }

    pub fn project(&self, cutoff: &EigenvalueSet) -> SpectralForm {
        SpectralForm {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| cutoff.contains(b.eigenvalue()))
                .map(|(b, c)| (*b, *c))
                .collect(),
        }
    }

    /// Keeps the terms of form degree `p`.
    pub fn degree_part(&self, p: usize) -> SpectralForm {
        SpectralForm {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == p)
                .map(|(b, c)| (*b, *c))
                .collect(),
        }
    }

    /// Drops coefficients with `|c| < tol`.
    pub fn prune(&self, tol: f64) -> SpectralForm {
        SpectralForm {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() >= tol)
                .map(|(b, c)| (*b, *c))
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &SpectralForm) -> f64 {
        (self - other).max_abs()
    }

    /// Pointwise coefficients at `x`, indexed by covector bitmask.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.dim];
        for (b, c) in self.terms() {
            out[b.covectors().bits() as usize] += c * b.eval(x);
        }
        out
    }

    /// Pointwise wedge of coefficient vectors as produced by [`Self::eval`].
    pub fn wedge_values(dim: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << dim];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                if let Some((s, c)) = CovectorSet::from_bits(i as u8).wedge(CovectorSet::from_bits(j as u8)) {
                    out[c.bits() as usize] += s * ca * cb;
                }
            }
        }
        out
    }
}

impl Add for &SpectralForm {
    type Output = SpectralForm;
    fn add(self, rhs: &SpectralForm) -> SpectralForm {
        let mut out = self.clone();
        for (b, c) in rhs.terms() {
            out.add_term(*b, c);
        }
        out
    }
}

impl Sub for &SpectralForm {
    type Output = SpectralForm;
    fn sub(self, rhs: &SpectralForm) -> SpectralForm {
        let mut out = self.clone();
        for (b, c) in rhs.terms() {
            out.add_term(*b, -c);
        }
        out
    }
}

impl Neg for &SpectralForm {
    type Output = SpectralForm;
    fn neg(self) -> SpectralForm {
        self * -1.0
    }
}

impl Mul<f64> for &SpectralForm {
    type Output = SpectralForm;
    fn mul(self, rhs: f64) -> SpectralForm {
        SpectralForm::from_terms(self.dim, self.terms().map(|(b, c)| (*b, c * rhs)))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::basis::{enumerate_basis, FourierMode, Phase};

    fn form(k: &[i16], phase: Phase, cov: &[usize]) -> BasisForm {
        let (s, m) = FourierMode::canonical(k, phase).unwrap();
        assert_eq!(s, 1.0);
        BasisForm::new(m, CovectorSet::from_indices(cov).unwrap())
    }

    #[test]
    fn derivative_of_cosine() {
        let f = SpectralForm::basis(form(&[1, 0], Phase::Cos, &[]));
        let df = f.differential();
        let expected = SpectralForm::from_terms(2, [(form(&[1, 0], Phase::Sin, &[1]), -1.0)]);
        assert_eq!(df, expected);
    }

    #[test]
    fn star_on_t2() {
        let dx1 = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[1]));
        let dx2 = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[2]));
        assert_eq!(dx1.hodge_star(), dx2);
        assert_eq!(dx2.hodge_star(), -&dx1);
        let one = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[]));
        let vol = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[1, 2]));
        assert_eq!(one.hodge_star(), vol);
    }

    #[test]
    fn codifferential_of_sine_one_form() {
        // d*(sin x1 dx1) = -∂1 sin x1 = -cos x1
        let f = SpectralForm::basis(form(&[1, 0], Phase::Sin, &[1]));
        let expected = SpectralForm::basis(form(&[1, 0], Phase::Cos, &[]));
        assert_eq!(f.codifferential(), -&expected);
    }

    #[test]
    fn laplacian_of_diagonal_mode() {
        let b = form(&[1, 1], Phase::Sin, &[2]);
        let f = SpectralForm::basis(b);
        assert!(f.laplacian().max_abs_diff(&(&f * 2.0)) < 1e-12);
    }

    #[test]
    fn trace_of_unnormalized_volume_form() {
        let vol = form(&[0, 0], Phase::Cos, &[1, 2]);
        let dx1dx2 = &SpectralForm::basis(vol) * vol.normalization().recip();
        assert!((dx1dx2.trace() - (2.0 * PI).powi(2)).abs() < 1e-12);
        let f = SpectralForm::basis(form(&[1, 0], Phase::Cos, &[1, 2]));
        assert_eq!(f.trace(), 0.0);
    }

    #[test]
    fn cos_squared_expands() {
        let b = form(&[1, 0], Phase::Cos, &[]);
        let f = &SpectralForm::basis(b) * b.normalization().recip();
        let sq = f.wedge(&f);
        let one = form(&[0, 0], Phase::Cos, &[]);
        let cos2 = form(&[2, 0], Phase::Cos, &[]);
        assert!((sq.coefficient(&one) * one.normalization() - 0.5).abs() < 1e-15);
        assert!((sq.coefficient(&cos2) * cos2.normalization() - 0.5).abs() < 1e-15);
        assert_eq!(sq.len(), 2);
    }

    #[test]
    fn antisymmetry_of_one_forms() {
        let a = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[1]));
        let b = SpectralForm::basis(form(&[0, 0], Phase::Cos, &[2]));
        assert_eq!(a.wedge(&b), -&b.wedge(&a));
    }

    #[test]
    fn inner_agrees_with_trace_pairing() {
        let cutoff = EigenvalueSet::up_to(2, 2).unwrap();
        let basis = enumerate_basis(2, &cutoff).unwrap();
        for a in &basis {
            for b in &basis {
                let fa = SpectralForm::basis(*a);
                let fb = SpectralForm::basis(*b);
                let via_trace = fa.wedge(&fb.hodge_star()).trace();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((via_trace - expected).abs() < 1e-12, "{a} {b}: {via_trace}");
            }
        }
    }
}
